//! Compiles an extended action theory `(K, Π, C)` into a ground action
//! theory without the ontology: the language laws `Π_L(K)`, the TBox state
//! constraints `Π_T` (or the repair laws `Π_C(T)`), the ABox initial
//! constraints `Π_A`, and the frame, non-frame and completion laws.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::el::{Assertion, Base, Concept};
use crate::name::Name;
use crate::normalizer::{normalize_kb, NormalAxiom, NormalizedKb, Rhs};
use crate::theory::{
    check_well_defined, fluent_arities, ground_program, universe, Action, Atom, BodyLit,
    DomainDescription, FrameStatus, GroundAction, GroundAtom, GroundError, GroundLiteral,
    GroundRule, Head, Literal, Pred, RepairChoice, Rule, Scope, Term, WellDefinedReport,
};

/// Which family a generated law belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Provenance {
    User,
    /// Language law (1)–(9) of `Π_L(K)`.
    Language(u8),
    /// The two role-congruence companions of language law (9).
    RoleCongruence,
    TBox,
    ABox,
    Repair,
    /// `[φ?]⊥ ← not φ` for each test action.
    TestAction,
    Persistency,
    NonFrame,
    Completion,
}

impl Provenance {
    pub fn tag(self) -> String {
        match self {
            Provenance::User => "user".into(),
            Provenance::Language(n) => format!("L(K)-{n}"),
            Provenance::RoleCongruence => "L(K)-9c".into(),
            Provenance::TBox => "Π_T".into(),
            Provenance::ABox => "Π_A".into(),
            Provenance::Repair => "Π_C(T)".into(),
            Provenance::TestAction => "test".into(),
            Provenance::Persistency => "persistency".into(),
            Provenance::NonFrame => "nonframe".into(),
            Provenance::Completion => "completion".into(),
        }
    }
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.tag())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EncodeError {
    #[error("the description is not well-defined:\n{0}")]
    NotWellDefined(WellDefinedReport),
    #[error(transparent)]
    Ground(#[from] GroundError),
    #[error("repair choice for axiom {index}: there are only {count} normalized axioms")]
    RepairIndex { index: usize, count: usize },
    #[error("repair choice `{choice}` does not apply to axiom {index} `{axiom}`")]
    RepairChoice {
        index: usize,
        choice: RepairChoice,
        axiom: String,
    },
    #[error("nominal {{{0}}} names an individual that does not occur in the knowledge base")]
    UnknownNominal(Name),
    #[error("complex ABox assertion `{0}` must be normalized first")]
    ComplexAssertion(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EncodeOptions {
    /// Include the TBox state constraints `Π_T`.
    pub tbox_constraints: bool,
    /// Include the repair laws `Π_C(T)`.
    pub repair: bool,
    /// Include the ABox initial constraints `Π_A`.
    pub abox_constraints: bool,
    /// Include the role-congruence companions of law (9).
    pub role_congruence: bool,
    /// Instantiate laws (4)–(6) for every role and base concept instead of
    /// only the occurring existentials.
    pub full_exists: bool,
    /// Repair choices overriding the ones in the description.
    pub repairs: BTreeMap<usize, RepairChoice>,
}

impl Default for EncodeOptions {
    fn default() -> Self {
        EncodeOptions::strict()
    }
}

impl EncodeOptions {
    /// `Π ∪ Π_L(K) ∪ Π_T ∪ Π_A`.
    pub fn strict() -> Self {
        EncodeOptions {
            tbox_constraints: true,
            repair: false,
            abox_constraints: true,
            role_congruence: true,
            full_exists: false,
            repairs: BTreeMap::new(),
        }
    }

    /// `Π ∪ Π_L(K) ∪ Π_C(T) ∪ Π_A`.
    pub fn repair() -> Self {
        EncodeOptions {
            tbox_constraints: false,
            repair: true,
            ..EncodeOptions::strict()
        }
    }
}

/// The ground theory handed to the solver.
#[derive(Clone, Debug)]
pub struct TranslatedTheory {
    pub laws: Vec<(Provenance, GroundRule)>,
    pub constraints: Vec<crate::theory::Formula>,
    pub universe: BTreeSet<Name>,
    /// Auxiliary individual of each `A ⊑ ∃r.B` axiom, by normalized index.
    pub aux: BTreeMap<usize, Name>,
    pub normalized: NormalizedKb,
    /// Ground simple fluents with their frame status; states of an
    /// extension are complete for these.
    pub simple_fluents: Vec<(GroundAtom, FrameStatus)>,
    /// Ground existential assertions `(∃r.B)(x)`, fixed by laws (5)–(6).
    pub exists_atoms: Vec<GroundAtom>,
    /// The existentials `(r, B)` laws (4)–(6) are instantiated for.
    pub exists_pairs: BTreeSet<(Name, Base)>,
    /// The ground action alphabet `Σ`.
    pub actions: Vec<GroundAction>,
}

impl TranslatedTheory {
    pub fn count(&self, p: Provenance) -> usize {
        self.laws.iter().filter(|(q, _)| *q == p).count()
    }

    pub fn rules(&self) -> impl Iterator<Item = &GroundRule> {
        self.laws.iter().map(|(_, r)| r)
    }

    /// The theory with every law of the given families removed.
    pub fn without(&self, drop: &[Provenance]) -> TranslatedTheory {
        let mut t = self.clone();
        t.laws.retain(|(p, _)| !drop.contains(p));
        t
    }
}

fn atom(pred: Pred, args: &[&Name]) -> GroundAtom {
    Atom::new(pred, args.iter().map(|a| (*a).clone()).collect())
}

fn pos(pred: Pred, args: &[&Name]) -> GroundLiteral {
    Literal::pos(atom(pred, args))
}

fn base_lit(b: &Base, x: &Name) -> GroundLiteral {
    pos(Pred::from_base(b), &[x])
}

fn rhs_lit(d: &Rhs, x: &Name) -> Option<GroundLiteral> {
    match d {
        Rhs::Base(b) => Some(base_lit(b, x)),
        Rhs::Bot => None,
    }
}

fn role(r: &Name, x: &Name, y: &Name) -> GroundLiteral {
    pos(Pred::Named(r.clone()), &[x, y])
}

fn exists(r: &Name, b: &Base, x: &Name) -> GroundLiteral {
    pos(Pred::Exists(r.clone(), b.clone()), &[x])
}

fn static_law(head: Head<Name>, p: Vec<GroundLiteral>, n: Vec<GroundLiteral>) -> GroundRule {
    Rule::always(head, p, n)
}

fn lit_head(l: GroundLiteral) -> Head<Name> {
    Head::Lit(l)
}

/// One fresh individual `_aux<i>` per axiom `A ⊑ ∃r.B`, keyed by its index
/// in the normalized TBox.
pub fn aux_individuals(tbox: &[NormalAxiom]) -> BTreeMap<usize, Name> {
    tbox.iter()
        .enumerate()
        .filter(|(_, ax)| matches!(ax, NormalAxiom::SubExists(..)))
        .map(|(i, _)| (i, Name::new(format!("_aux{i}"))))
        .collect()
}

fn note_exists(l: &Literal<Term>, out: &mut BTreeSet<(Name, Base)>) {
    if let Pred::Exists(r, b) = &l.atom.pred {
        out.insert((r.clone(), b.clone()));
    }
}

/// The existentials `(r, B)` that laws (4)–(6) cover: those occurring in
/// the normalized ontology or in the description's laws and constraints,
/// or all of `N_R × BC_K` when `full` is set.
pub fn exists_pairs(kb: &NormalizedKb, d: &DomainDescription, full: bool) -> BTreeSet<(Name, Base)> {
    let mut out = BTreeSet::new();
    for ax in &kb.tbox {
        match ax {
            NormalAxiom::SubExists(_, r, b) | NormalAxiom::ExistsSub(r, b, _) => {
                out.insert((r.clone(), b.clone()));
            }
            _ => {}
        }
    }
    if full {
        for r in &kb.signature.roles {
            for b in kb.signature.base_concepts() {
                out.insert((r.clone(), b));
            }
        }
    }
    for rule in &d.laws {
        match &rule.head {
            Head::Lit(l) | Head::Next(l) | Head::After(_, l) => note_exists(l, &mut out),
            Head::Bot | Head::AfterBot(_) => {}
        }
        for b in rule.pos.iter().chain(&rule.neg) {
            note_exists(b.literal(), &mut out);
        }
    }
    let mut lits = Vec::new();
    for c in &d.constraints {
        c.literals(&mut lits);
    }
    for l in &lits {
        note_exists(&l.map(&mut |n| Term::Const(n.clone())), &mut out);
    }
    out
}

/// The language laws (1)–(9) of `Π_L(K)`, grounded over `universe`, plus
/// the role-congruence companions of (9) when `role_congruence` is set.
///
/// Law (9) alone makes `{a}(x)` transfer incoming `r`-edges of `x` to `a`;
/// the companions transfer them back and do the same for outgoing edges, so
/// that every state of an extension is a congruence.
pub fn encode_language_laws(
    kb: &NormalizedKb,
    universe: &BTreeSet<Name>,
    pairs: &BTreeSet<(Name, Base)>,
    role_congruence: bool,
) -> Vec<(Provenance, GroundRule)> {
    use Provenance::Language as L;
    let mut out = Vec::new();
    let inds = &kb.signature.individuals;
    let roles = &kb.signature.roles;
    let bases = kb.signature.base_concepts();
    for x in universe {
        out.push((L(1), static_law(Head::Bot, vec![pos(Pred::Bot, &[x])], vec![])));
    }
    for x in universe {
        out.push((L(2), static_law(lit_head(pos(Pred::Top, &[x])), vec![], vec![])));
    }
    for a in inds {
        out.push((L(3), static_law(lit_head(pos(Pred::Nominal(a.clone()), &[a])), vec![], vec![])));
    }
    for (r, b) in pairs {
        let aux = Pred::ExistsAux(r.clone(), b.clone());
        for x in universe {
            for y in universe {
                out.push((
                    L(4),
                    static_law(lit_head(pos(aux.clone(), &[x])), vec![role(r, x, y), base_lit(b, y)], vec![]),
                ));
            }
        }
    }
    for (r, b) in pairs {
        let aux = Pred::ExistsAux(r.clone(), b.clone());
        for x in universe {
            out.push((L(5), static_law(lit_head(exists(r, b, x)), vec![pos(aux.clone(), &[x])], vec![])));
        }
    }
    for (r, b) in pairs {
        let aux = Pred::ExistsAux(r.clone(), b.clone());
        for x in universe {
            out.push((
                L(6),
                static_law(lit_head(exists(r, b, x).complement()), vec![], vec![pos(aux.clone(), &[x])]),
            ));
        }
    }
    let others = |a: &Name| universe.iter().filter(move |x| *x != a).collect::<Vec<_>>();
    for a in inds {
        let nom = Pred::Nominal(a.clone());
        for x in others(a) {
            for b in &bases {
                out.push((
                    L(7),
                    static_law(Head::Bot, vec![pos(nom.clone(), &[x]), base_lit(b, x)], vec![base_lit(b, a)]),
                ));
            }
        }
    }
    for a in inds {
        let nom = Pred::Nominal(a.clone());
        for x in others(a) {
            for b in &bases {
                out.push((
                    L(8),
                    static_law(Head::Bot, vec![pos(nom.clone(), &[x]), base_lit(b, a)], vec![base_lit(b, x)]),
                ));
            }
        }
    }
    for a in inds {
        let nom = Pred::Nominal(a.clone());
        for x in others(a) {
            for z in universe {
                for r in roles {
                    out.push((
                        L(9),
                        static_law(Head::Bot, vec![pos(nom.clone(), &[x]), role(r, z, x)], vec![role(r, z, a)]),
                    ));
                }
            }
        }
    }
    if role_congruence {
        for a in inds {
            let nom = Pred::Nominal(a.clone());
            for x in others(a) {
                for z in universe {
                    for r in roles {
                        let n = || pos(nom.clone(), &[x]);
                        out.push((
                            Provenance::RoleCongruence,
                            static_law(Head::Bot, vec![n(), role(r, z, a)], vec![role(r, z, x)]),
                        ));
                        out.push((
                            Provenance::RoleCongruence,
                            static_law(Head::Bot, vec![n(), role(r, x, z)], vec![role(r, a, z)]),
                        ));
                        out.push((
                            Provenance::RoleCongruence,
                            static_law(Head::Bot, vec![n(), role(r, a, z)], vec![role(r, x, z)]),
                        ));
                    }
                }
            }
        }
    }
    out
}

/// `Π_T`: one state constraint per axiom and element of `domain`.
pub fn encode_tbox_constraints(tbox: &[NormalAxiom], domain: &BTreeSet<Name>) -> Vec<GroundRule> {
    let mut out = Vec::new();
    for ax in tbox {
        for x in domain {
            let (body, d): (Vec<GroundLiteral>, Option<GroundLiteral>) = match ax {
                NormalAxiom::Sub(a, d) => (vec![base_lit(a, x)], rhs_lit(d, x)),
                NormalAxiom::Conj(a, b, d) => (vec![base_lit(a, x), base_lit(b, x)], rhs_lit(d, x)),
                NormalAxiom::SubExists(a, r, b) => (vec![base_lit(a, x)], Some(exists(r, b, x))),
                NormalAxiom::ExistsSub(r, b, d) => (vec![exists(r, b, x)], rhs_lit(d, x)),
            };
            out.push(static_law(Head::Bot, body, d.into_iter().collect()));
        }
    }
    out
}

/// `Π_A`: `⊥ ← not A(c)` and `⊥ ← not r(c,d)`, on the initial state.
pub fn encode_abox_constraints(abox: &[Assertion]) -> Result<Vec<GroundRule>, EncodeError> {
    abox.iter()
        .map(|a| {
            let l = match a {
                Assertion::Concept(Concept::Bot, c) => pos(Pred::Bot, &[c]),
                Assertion::Concept(k, c) => match k.as_base() {
                    Some(b) => base_lit(&b, c),
                    None => return Err(EncodeError::ComplexAssertion(a.to_string())),
                },
                Assertion::Role(r, c, d) => role(r, c, d),
            };
            Ok(Rule::initial(Head::Bot, vec![], vec![l]))
        })
        .collect()
}

/// The repair choice in force for axiom `i`: the explicit one, or `dropA`
/// for conjunctions and `dropRole` for existential left-hand sides.
fn repair_choice(
    i: usize,
    ax: &NormalAxiom,
    policy: &BTreeMap<usize, RepairChoice>,
) -> Result<RepairChoice, EncodeError> {
    let choice = match (ax, policy.get(&i)) {
        (_, Some(c)) => *c,
        (NormalAxiom::ExistsSub(..), None) => RepairChoice::DropRole,
        (_, None) => RepairChoice::DropA,
    };
    let ok = match ax {
        NormalAxiom::Conj(..) => {
            matches!(choice, RepairChoice::DropA | RepairChoice::DropB | RepairChoice::Both)
        }
        NormalAxiom::ExistsSub(..) => {
            matches!(choice, RepairChoice::DropRole | RepairChoice::DropFiller | RepairChoice::Both)
        }
        _ => policy.get(&i).is_none(),
    };
    if ok {
        Ok(choice)
    } else {
        Err(EncodeError::RepairChoice {
            index: i,
            choice,
            axiom: ax.to_string(),
        })
    }
}

/// `Π_C(T)`: causal laws that repair a state violating the TBox instead of
/// rejecting it.
pub fn encode_repair_laws(
    tbox: &[NormalAxiom],
    aux: &BTreeMap<usize, Name>,
    policy: &BTreeMap<usize, RepairChoice>,
    universe: &BTreeSet<Name>,
) -> Result<Vec<GroundRule>, EncodeError> {
    if let Some(&index) = policy.keys().find(|i| **i >= tbox.len()) {
        return Err(EncodeError::RepairIndex {
            index,
            count: tbox.len(),
        });
    }
    let mut out = Vec::new();
    // `head ← body`, or `⊥ ← body` when the head is `D = ⊥`.
    let cause = |head: Option<GroundLiteral>, body: Vec<GroundLiteral>| {
        static_law(head.map_or(Head::Bot, Head::Lit), body, vec![])
    };
    for (i, ax) in tbox.iter().enumerate() {
        let choice = repair_choice(i, ax, policy)?;
        let drop_first = matches!(choice, RepairChoice::DropA | RepairChoice::DropRole | RepairChoice::Both);
        let drop_second = matches!(choice, RepairChoice::DropB | RepairChoice::DropFiller | RepairChoice::Both);
        // `¬D(x)` as a body conjunct; dropped when `D = ⊥`.
        let not_d = |d: &Rhs, x: &Name| rhs_lit(d, x).map(|l| l.complement());
        for x in universe {
            match ax {
                NormalAxiom::Sub(a, d) => {
                    out.push(cause(rhs_lit(d, x), vec![base_lit(a, x)]));
                    out.push(cause(Some(base_lit(a, x).complement()), not_d(d, x).into_iter().collect()));
                }
                NormalAxiom::Conj(a, b, d) => {
                    out.push(cause(rhs_lit(d, x), vec![base_lit(a, x), base_lit(b, x)]));
                    if drop_first {
                        let body = not_d(d, x).into_iter().chain([base_lit(b, x)]).collect();
                        out.push(cause(Some(base_lit(a, x).complement()), body));
                    }
                    if drop_second {
                        let body = not_d(d, x).into_iter().chain([base_lit(a, x)]).collect();
                        out.push(cause(Some(base_lit(b, x).complement()), body));
                    }
                }
                NormalAxiom::SubExists(a, r, b) => {
                    let w = &aux[&i];
                    out.push(cause(Some(role(r, x, w)), vec![base_lit(a, x)]));
                    out.push(cause(Some(base_lit(b, w)), vec![base_lit(a, x)]));
                    out.push(cause(Some(base_lit(a, x).complement()), vec![exists(r, b, x).complement()]));
                }
                NormalAxiom::ExistsSub(r, b, d) => {
                    out.push(cause(rhs_lit(d, x), vec![exists(r, b, x)]));
                    out.push(cause(Some(exists(r, b, x).complement()), not_d(d, x).into_iter().collect()));
                    for y in universe {
                        if drop_first {
                            let body = not_d(d, x).into_iter().chain([base_lit(b, y)]).collect();
                            out.push(cause(Some(role(r, x, y).complement()), body));
                        }
                        if drop_second {
                            let body = not_d(d, x).into_iter().chain([role(r, x, y)]).collect();
                            out.push(cause(Some(base_lit(b, y).complement()), body));
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Persistency laws for frame fluents and oscillation laws for non-frame
/// ones, for both polarities of each ground atom.
pub fn encode_frame_axioms(fluents: &[(GroundAtom, FrameStatus)]) -> Vec<(Provenance, GroundRule)> {
    let mut out = Vec::new();
    for (a, status) in fluents {
        for f in [Literal::pos(a.clone()), Literal::neg(a.clone())] {
            let g = BodyLit::Next(f.complement());
            let rule = match status {
                FrameStatus::Frame => {
                    Rule::new(Head::Next(f.clone()), vec![BodyLit::Simple(f)], vec![g], Scope::Always)
                }
                FrameStatus::NonFrame => Rule::new(Head::Next(f), vec![], vec![g], Scope::Always),
            };
            let p = match status {
                FrameStatus::Frame => Provenance::Persistency,
                FrameStatus::NonFrame => Provenance::NonFrame,
            };
            out.push((p, rule));
        }
    }
    out
}

/// `f ← not ¬f` and `¬f ← not f` on the initial state for each atom.
pub fn encode_completion(fluents: &[(GroundAtom, FrameStatus)]) -> Vec<GroundRule> {
    let mut out = Vec::new();
    for (a, _) in fluents {
        let f = Literal::pos(a.clone());
        out.push(Rule::initial(Head::Lit(f.clone()), vec![], vec![f.complement()]));
        out.push(Rule::initial(Head::Lit(f.complement()), vec![], vec![f]));
    }
    out
}

fn tuples(universe: &[Name], n: usize) -> Vec<Vec<Name>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|t| {
                universe.iter().map(move |c| {
                    let mut t = t.clone();
                    t.push(c.clone());
                    t
                })
            })
            .collect();
    }
    out
}

fn note_test_actions(a: &Action<Name>, out: &mut Vec<GroundAction>) {
    if matches!(a, Action::Test(_)) && !out.contains(a) {
        out.push(a.clone());
    }
}

fn check_nominals(d: &DomainDescription, inds: &BTreeSet<Name>) -> Result<(), EncodeError> {
    let check = |p: &Pred| match p {
        Pred::Nominal(a) | Pred::Exists(_, Base::Nominal(a)) if !inds.contains(a) => {
            Err(EncodeError::UnknownNominal(a.clone()))
        }
        _ => Ok(()),
    };
    for p in d.frames.keys() {
        check(p)?;
    }
    for r in &d.laws {
        match &r.head {
            Head::Lit(l) | Head::Next(l) | Head::After(_, l) => check(&l.atom.pred)?,
            Head::Bot | Head::AfterBot(_) => {}
        }
        if let Head::After(Action::Test(l), _) | Head::AfterBot(Action::Test(l)) = &r.head {
            check(&l.atom.pred)?;
        }
        for b in r.pos.iter().chain(&r.neg) {
            check(&b.literal().atom.pred)?;
            if let BodyLit::After(Action::Test(l), _) = b {
                check(&l.atom.pred)?;
            }
        }
    }
    let mut lits = Vec::new();
    for c in &d.constraints {
        c.literals(&mut lits);
        let mut acts = Vec::new();
        c.actions(&mut acts);
        lits.extend(acts.into_iter().filter_map(|a| match a {
            Action::Test(l) => Some(l),
            Action::Named { .. } => None,
        }));
    }
    for l in &lits {
        check(&l.atom.pred)?;
    }
    Ok(())
}

/// Normalizes the ontology, grounds the user laws and adds every generated
/// law family selected by `options`.
pub fn encode_all(d: &DomainDescription, options: &EncodeOptions) -> Result<TranslatedTheory, EncodeError> {
    let report = check_well_defined(d);
    if !report.is_ok() {
        return Err(EncodeError::NotWellDefined(report));
    }
    let normalized = normalize_kb(&d.kb);
    let inds = normalized.signature.individuals.clone();
    check_nominals(d, &inds)?;
    let aux = aux_individuals(&normalized.tbox);
    let aux_set: BTreeSet<Name> = aux.values().cloned().collect();
    let universe = universe(d, &aux_set);
    let u: Vec<Name> = universe.iter().cloned().collect();

    // Simple fluents: named predicates at their arity, nominals, ⊤ and ⊥.
    let (mut arities, _) = fluent_arities(d);
    let mut frames = d.frames.clone();
    for (n, _) in &normalized.fresh {
        arities.insert(n.clone(), 1);
        frames.insert(Pred::Named(n.clone()), FrameStatus::NonFrame);
    }
    let mut preds: Vec<(Pred, usize)> = arities.into_iter().map(|(n, k)| (Pred::Named(n), k)).collect();
    preds.extend(inds.iter().map(|a| (Pred::Nominal(a.clone()), 1)));
    preds.push((Pred::Top, 1));
    preds.push((Pred::Bot, 1));
    let mut simple_fluents = Vec::new();
    for (p, k) in preds {
        let status = frames.get(&p).copied().unwrap_or(FrameStatus::Frame);
        for args in tuples(&u, k) {
            simple_fluents.push((Atom::new(p.clone(), args), status));
        }
    }

    let pairs = exists_pairs(&normalized, d, options.full_exists);
    let exists_atoms = pairs
        .iter()
        .flat_map(|(r, b)| u.iter().map(move |x| atom(Pred::Exists(r.clone(), b.clone()), &[x])))
        .collect();

    let mut laws: Vec<(Provenance, GroundRule)> = ground_program(&d.laws, &universe)?
        .into_iter()
        .map(|r| (Provenance::User, r))
        .collect();
    laws.extend(encode_language_laws(&normalized, &universe, &pairs, options.role_congruence));
    if options.tbox_constraints {
        laws.extend(
            encode_tbox_constraints(&normalized.tbox, &universe)
                .into_iter()
                .map(|r| (Provenance::TBox, r)),
        );
    }
    if options.abox_constraints {
        laws.extend(
            encode_abox_constraints(&normalized.abox)?
                .into_iter()
                .map(|r| (Provenance::ABox, r)),
        );
    }
    if options.repair {
        let mut policy = d.repairs.clone();
        policy.extend(options.repairs.iter().map(|(i, c)| (*i, *c)));
        laws.extend(
            encode_repair_laws(&normalized.tbox, &aux, &policy, &universe)?
                .into_iter()
                .map(|r| (Provenance::Repair, r)),
        );
    }

    // Σ: declared actions over the universe, then test actions.
    let mut actions: Vec<GroundAction> = Vec::new();
    for decl in &d.actions {
        for args in tuples(&u, decl.params.len()) {
            actions.push(Action::Named {
                name: decl.name.clone(),
                args,
            });
        }
    }
    let mut tests = Vec::new();
    for c in &d.constraints {
        let mut acts = Vec::new();
        c.actions(&mut acts);
        for a in &acts {
            note_test_actions(a, &mut tests);
        }
    }
    for (_, r) in &laws {
        if let Head::After(a, _) | Head::AfterBot(a) = &r.head {
            note_test_actions(a, &mut tests);
        }
        for b in r.pos.iter().chain(&r.neg) {
            if let BodyLit::After(a, _) = b {
                note_test_actions(a, &mut tests);
            }
        }
    }
    for t in &tests {
        let Action::Test(l) = t else { unreachable!() };
        laws.push((
            Provenance::TestAction,
            Rule::always(Head::AfterBot(t.clone()), vec![], vec![l.clone()]),
        ));
    }
    actions.extend(tests);

    laws.extend(encode_frame_axioms(&simple_fluents));
    laws.extend(
        encode_completion(&simple_fluents)
            .into_iter()
            .map(|r| (Provenance::Completion, r)),
    );

    Ok(TranslatedTheory {
        laws,
        constraints: d.constraints.clone(),
        universe,
        aux,
        normalized,
        simple_fluents,
        exists_atoms,
        exists_pairs: pairs,
        actions,
    })
}
