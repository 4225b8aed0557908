//! Helpers shared by the integration suites: fixture loading, an exhaustive
//! trace enumerator used as an oracle for the stage solver, and random
//! theory and state generators.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::Rng;

use eltas_core::el::{is_model, Assertion, Axiom, Concept, Interpretation, KnowledgeBase};
use eltas_core::encoder::{aux_individuals, encode_all, EncodeOptions, TranslatedTheory};
use eltas_core::normalizer::{normalize_kb, NormalizedKb};
use eltas_core::solver::{eval_formula, is_temporal_answer_set, is_total, Solver, Trace};
use eltas_core::syntax::{parse_adl, parse_ground_actions, parse_kb};
use eltas_core::theory::{
    Action, ActionDecl, Atom, DomainDescription, FrameStatus, GroundAction, GroundAtom, GroundLiteral, Head,
    Literal, Pred, Rule, State, Term,
};
use eltas_core::Name;

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

pub fn fixture(name: &str) -> String {
    std::fs::read_to_string(fixture_path(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

/// A description from an optional `.kb` fixture and an `.adl` fixture.
pub fn load(kb: Option<&str>, adl: &str) -> DomainDescription {
    let mut d = parse_adl(&fixture(adl)).unwrap();
    if let Some(kb) = kb {
        d.kb = parse_kb(&fixture(kb)).unwrap();
    }
    d
}

pub fn encode(kb: Option<&str>, adl: &str, opts: &EncodeOptions) -> TranslatedTheory {
    encode_all(&load(kb, adl), opts).unwrap()
}

pub fn acts(text: &str) -> Vec<GroundAction> {
    parse_ground_actions(text).unwrap()
}

pub fn lit(pred: &str, args: &[&str], negated: bool) -> GroundLiteral {
    Literal {
        atom: Atom::new(Pred::Named(pred.into()), args.iter().map(|a| Name::from(*a)).collect()),
        negated,
    }
}

/// Fixtures whose action theories are small enough for exhaustive
/// enumeration: `(kb, adl)`.
pub const SMALL_FIXTURES: &[(Option<&str>, &str)] = &[
    (None, "turkey.adl"),
    (None, "turkey_loaded.adl"),
    (None, "hunter.adl"),
    (Some("tiny.kb"), "tiny.adl"),
    (Some("insurance.kb"), "insurance.adl"),
];

/// Every fixture pairing.
pub const ALL_FIXTURES: &[(Option<&str>, &str)] = &[
    (Some("ex1.kb"), "ex1.adl"),
    (Some("ex1.kb"), "ex1_causal.adl"),
    (Some("ex2.kb"), "ex2.adl"),
    (None, "turkey.adl"),
    (None, "turkey_loaded.adl"),
    (None, "hunter.adl"),
    (Some("tiny.kb"), "tiny.adl"),
    (Some("insurance.kb"), "insurance.adl"),
];

pub const TBOX_FIXTURES: &[&str] = &[
    "tbox/conj_rhs.kb",
    "tbox/exists_lhs.kb",
    "tbox/nested.kb",
    "tbox/nominal_bot.kb",
    "tbox/chains.kb",
    "tbox/normal.kb",
    "ex1.kb",
    "insurance.kb",
    "tiny.kb",
];

/// Every subset of `items`.
fn subsets<T: Clone>(items: &[T]) -> Vec<Vec<T>> {
    let mut out = vec![Vec::new()];
    for x in items {
        let more: Vec<Vec<T>> = out
            .iter()
            .map(|s| {
                let mut s = s.clone();
                s.push(x.clone());
                s
            })
            .collect();
        out.extend(more);
    }
    out
}

/// Every candidate state: complete and consistent over the atoms the
/// solver must decide, plus any subset of the other literals some law can
/// derive.
pub fn candidate_states(t: &TranslatedTheory, solver: &Solver) -> Vec<State> {
    let total: BTreeSet<&GroundAtom> = solver.total_atoms().iter().collect();
    let mut partial: BTreeSet<GroundLiteral> = BTreeSet::new();
    for r in t.rules() {
        let l = match &r.head {
            Head::Lit(l) | Head::Next(l) | Head::After(_, l) => l,
            _ => continue,
        };
        if !total.contains(&l.atom) {
            partial.insert(l.clone());
        }
    }
    let partial: Vec<GroundLiteral> = partial.into_iter().collect();
    let extras: Vec<Vec<GroundLiteral>> = subsets(&partial)
        .into_iter()
        .filter(|s| !s.iter().any(|l| s.contains(&l.complement())))
        .collect();
    let total: Vec<&GroundAtom> = total.into_iter().collect();
    assert!(total.len() <= 16, "too many atoms for exhaustive enumeration");
    let mut out = Vec::new();
    for bits in 0u32..(1 << total.len()) {
        let base: State = total
            .iter()
            .enumerate()
            .map(|(i, a)| Literal {
                atom: (*a).clone(),
                negated: bits >> i & 1 == 0,
            })
            .collect();
        for e in &extras {
            let mut w = base.clone();
            w.extend(e.iter().cloned());
            out.push(w);
        }
    }
    out
}

/// All extensions up to horizon `h` by brute force: every trace built from
/// candidate states is kept when it is a temporal answer set of the whole
/// ground program, is total, and satisfies the constraints.
///
/// Only answer-set prefixes are extended. A prefix of a temporal answer set
/// is a temporal answer set of the shorter trace, so this prunes nothing
/// that could complete.
pub fn exhaustive(t: &TranslatedTheory, h: usize, weak_horizon: bool) -> BTreeSet<Trace> {
    let solver = Solver::new(t);
    let laws: Vec<_> = t.rules().cloned().collect();
    let candidates = candidate_states(t, &solver);
    let ok = |tr: &Trace| is_temporal_answer_set(&laws, tr) && is_total(tr, solver.total_atoms());
    let mut frontier: Vec<Trace> = candidates
        .iter()
        .map(|w| Trace {
            states: vec![w.clone()],
            actions: vec![],
        })
        .filter(ok)
        .collect();
    let mut all: Vec<Trace> = frontier.clone();
    for _ in 0..h {
        let mut next = Vec::new();
        for tr in &frontier {
            for a in &t.actions {
                for w in &candidates {
                    let mut ext = tr.clone();
                    ext.actions.push(a.clone());
                    ext.states.push(w.clone());
                    if ok(&ext) {
                        next.push(ext);
                    }
                }
            }
        }
        all.extend(next.iter().cloned());
        frontier = next;
    }
    all.into_iter()
        .filter(|tr| t.constraints.iter().all(|c| eval_formula(tr, 0, c, weak_horizon)))
        .collect()
}

/// A random well-defined theory over at most three concepts, one role, two
/// individuals and two actions, every ground atom of whose initial state
/// is fixed.
pub fn random_theory(rng: &mut StdRng) -> DomainDescription {
    let concepts: Vec<Name> = ["c0", "c1", "c2"][..rng.gen_range(1..=3)]
        .iter()
        .map(|s| Name::from(*s))
        .collect();
    let role = Name::from("r");
    let inds: Vec<Name> = ["i0", "i1"][..rng.gen_range(1..=2)]
        .iter()
        .map(|s| Name::from(*s))
        .collect();

    let base = |rng: &mut StdRng| -> Concept {
        match rng.gen_range(0..10) {
            0 => Concept::Top,
            1 => Concept::Nominal(inds.choose(rng).unwrap().clone()),
            _ => Concept::Name(concepts.choose(rng).unwrap().clone()),
        }
    };
    // At most one existential on a right-hand side keeps the universe small.
    let mut rhs_exists = false;
    let mut tbox = Vec::new();
    for _ in 0..rng.gen_range(0..=3) {
        let ax = match rng.gen_range(0..6) {
            0 => Axiom::new(base(rng), base(rng)),
            1 => Axiom::new(Concept::and(base(rng), base(rng)), base(rng)),
            2 => Axiom::new(Concept::exists(role.clone(), base(rng)), base(rng)),
            3 if !rhs_exists => {
                rhs_exists = true;
                Axiom::new(base(rng), Concept::exists(role.clone(), base(rng)))
            }
            4 => Axiom::new(Concept::and(base(rng), base(rng)), Concept::Bot),
            _ => Axiom::new(base(rng), Concept::and(base(rng), base(rng))),
        };
        tbox.push(ax);
    }
    let mut abox = Vec::new();
    for _ in 0..rng.gen_range(0..=2) {
        let x = inds.choose(rng).unwrap().clone();
        if rng.gen_bool(0.7) {
            abox.push(Assertion::Concept(Concept::Name(concepts.choose(rng).unwrap().clone()), x));
        } else {
            abox.push(Assertion::Role(role.clone(), x, inds.choose(rng).unwrap().clone()));
        }
    }
    let mut kb = KnowledgeBase::new(tbox, abox);
    kb.declared.concepts.extend(concepts.iter().cloned());
    kb.declared.roles.insert(role.clone());
    kb.declared.individuals.extend(inds.iter().cloned());

    let mut d = DomainDescription {
        kb,
        ..DomainDescription::default()
    };
    for c in &concepts {
        d.frames.insert(Pred::Named(c.clone()), FrameStatus::Frame);
    }
    d.frames.insert(Pred::Named(role.clone()), FrameStatus::Frame);

    let konst = |n: &Name| Term::Const(n.clone());
    let random_lit = |rng: &mut StdRng| -> Literal<Term> {
        let atom = if rng.gen_bool(0.7) {
            Atom::new(Pred::Named(concepts.choose(rng).unwrap().clone()), vec![konst(inds.choose(rng).unwrap())])
        } else {
            Atom::new(
                Pred::Named(role.clone()),
                vec![konst(inds.choose(rng).unwrap()), konst(inds.choose(rng).unwrap())],
            )
        };
        Literal {
            atom,
            negated: rng.gen_bool(0.4),
        }
    };
    for k in 0..rng.gen_range(1..=2) {
        let name = Name::from(format!("act{k}").as_str());
        d.actions.push(ActionDecl {
            name: name.clone(),
            params: vec![],
        });
        let a = Action::Named { name, args: vec![] };
        for _ in 0..rng.gen_range(1..=2) {
            let head = Head::After(a.clone(), random_lit(rng));
            let pos = if rng.gen_bool(0.3) {
                vec![random_lit(rng)]
            } else {
                vec![]
            };
            d.laws.push(Rule::always(head, pos, vec![]));
        }
    }

    // Fix the initial value of every named atom over the universe, and make
    // aux constants distinct from the individuals. The values are resampled
    // a few times looking for a model of the knowledge base, so that most
    // theories have an initial state.
    let normalized = normalize_kb(&d.kb);
    let aux: Vec<Name> = aux_individuals(&normalized.tbox).into_values().collect();
    let universe: Vec<Name> = inds.iter().chain(&aux).cloned().collect();
    let n = universe.len();
    let mut interp = Interpretation::default();
    for _ in 0..30 {
        interp = Interpretation {
            domain: (0..n).collect(),
            concept_ext: concepts
                .iter()
                .map(|c| (c.clone(), (0..n).filter(|_| rng.gen_bool(0.5)).collect()))
                .collect(),
            role_ext: [(role.clone(), (0..n).flat_map(|x| (0..n).map(move |y| (x, y))).filter(|_| rng.gen_bool(0.4)).collect())]
                .into_iter()
                .collect(),
            ind_map: inds.iter().enumerate().map(|(i, a)| (a.clone(), i)).collect(),
        };
        if is_model(&interp, &d.kb).unwrap_or(false) {
            break;
        }
    }
    let mut init = |atom: Atom<Term>, v: bool| {
        d.laws.push(Rule::initial(Head::Lit(Literal { atom, negated: !v }), vec![], vec![]));
    };
    for c in &concepts {
        for (i, x) in universe.iter().enumerate() {
            init(Atom::new(Pred::Named(c.clone()), vec![konst(x)]), interp.concept_ext[c].contains(&i));
        }
    }
    for (i, x) in universe.iter().enumerate() {
        for (j, y) in universe.iter().enumerate() {
            init(Atom::new(Pred::Named(role.clone()), vec![konst(x), konst(y)]), interp.role_ext[&role].contains(&(i, j)));
        }
    }
    for a in &inds {
        for x in &universe {
            init(Atom::new(Pred::Nominal(a.clone()), vec![konst(x)]), x == a);
        }
    }
    d
}

/// Options for the random corpus: strict mode, or repair mode.
pub fn corpus_options(repair: bool) -> EncodeOptions {
    if repair {
        EncodeOptions::repair()
    } else {
        EncodeOptions::strict()
    }
}

/// A random complete consistent state of `kb` read off a random
/// interpretation: constants are mapped onto domain elements (individuals
/// to distinct ones), and every ground atom is true iff it holds there.
pub fn random_state(rng: &mut StdRng, kb: &NormalizedKb, universe: &BTreeSet<Name>) -> State {
    let sig = &kb.signature;
    let mut elem: BTreeMap<&Name, usize> = BTreeMap::new();
    let mut next = 0;
    for x in universe {
        if sig.individuals.contains(x) || next == 0 || rng.gen_bool(0.7) {
            elem.insert(x, next);
            next += 1;
        } else {
            elem.insert(x, rng.gen_range(0..next));
        }
    }
    let n = next;
    let concept_ext: BTreeMap<&Name, Vec<bool>> =
        sig.concepts.iter().map(|c| (c, (0..n).map(|_| rng.gen_bool(0.5)).collect())).collect();
    let role_ext: BTreeMap<&Name, Vec<Vec<bool>>> = sig
        .roles
        .iter()
        .map(|r| (r, (0..n).map(|_| (0..n).map(|_| rng.gen_bool(0.4)).collect()).collect()))
        .collect();
    let base_holds = |b: &eltas_core::el::Base, e: usize| match b {
        eltas_core::el::Base::Top => true,
        eltas_core::el::Base::Name(c) => concept_ext[c][e],
        eltas_core::el::Base::Nominal(a) => elem[a] == e,
    };
    let mut w = State::new();
    let mut put = |pred: Pred, args: Vec<Name>, v: bool| {
        w.insert(Literal {
            atom: Atom::new(pred, args),
            negated: !v,
        });
    };
    for x in universe {
        let e = elem[x];
        for c in &sig.concepts {
            put(Pred::Named(c.clone()), vec![x.clone()], concept_ext[c][e]);
        }
        for a in &sig.individuals {
            put(Pred::Nominal(a.clone()), vec![x.clone()], elem[a] == e);
        }
        put(Pred::Top, vec![x.clone()], true);
        put(Pred::Bot, vec![x.clone()], false);
        for r in &sig.roles {
            for y in universe {
                put(Pred::Named(r.clone()), vec![x.clone(), y.clone()], role_ext[r][e][elem[y]]);
            }
        }
    }
    let pairs: BTreeSet<(Name, eltas_core::el::Base)> = sig
        .roles
        .iter()
        .flat_map(|r| sig.base_concepts().into_iter().map(move |b| (r.clone(), b)))
        .collect();
    for (r, b) in pairs {
        for x in universe {
            let e = elem[x];
            let v = (0..n).any(|f| role_ext[&r][e][f] && base_holds(&b, f));
            put(Pred::Exists(r.clone(), b.clone()), vec![x.clone()], v);
        }
    }
    w
}

/// Tallies of a property checked over every state of every extension of a
/// random corpus.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CorpusReport {
    pub theories: usize,
    /// Theories with at least one extension.
    pub inhabited: usize,
    pub states: usize,
    pub failures: Vec<String>,
}

/// Runs `check` on every state of every extension, up to horizon 2, of `n` random theories encoded in strict or repair mode.
pub fn over_corpus(
    n: usize,
    seed: u64,
    repair: bool,
    check: impl Fn(&DomainDescription, &TranslatedTheory, &State) -> Result<(), String>,
) -> CorpusReport {
    use rand::SeedableRng;
    let mut rng = StdRng::seed_from_u64(seed);
    let mut report = CorpusReport::default();
    for i in 0..n {
        let d = random_theory(&mut rng);
        let t = match encode_all(&d, &corpus_options(repair)) {
            Ok(t) => t,
            Err(e) => {
                report.failures.push(format!("theory {i}: {e}"));
                continue;
            }
        };
        report.theories += 1;
        let s = Solver::new(&t);
        let opts = eltas_core::solver::SearchOptions {
            exact_length: false,
            ..eltas_core::solver::SearchOptions::new(2)
        };
        let res = s.extensions(&opts).unwrap();
        if res.unverified > 0 {
            report.failures.push(format!("theory {i}: {} unverified traces", res.unverified));
        }
        if !res.extensions.is_empty() {
            report.inhabited += 1;
        }
        let states: BTreeSet<&State> = res.extensions.iter().flat_map(|tr| &tr.states).collect();
        for w in states {
            report.states += 1;
            if let Err(e) = check(&d, &t, w) {
                report.failures.push(format!("theory {i}: {e}"));
            }
        }
    }
    report
}
