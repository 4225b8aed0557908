//! TBox normalization into the four normal-form shapes, with a brute-force
//! conservativity oracle.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::el::{
    tbox_signature, Assertion, Axiom, Base, Concept, ElError, InterpretationSpace, KnowledgeBase,
    Signature,
};
use crate::name::Name;

/// Right-hand side of a normal axiom: a base concept or `⊥`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Rhs {
    Base(Base),
    Bot,
}

impl Rhs {
    pub fn to_concept(&self) -> Concept {
        match self {
            Rhs::Base(b) => b.to_concept(),
            Rhs::Bot => Concept::Bot,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum NormalAxiom {
    /// `C1 ⊑ D`
    Sub(Base, Rhs),
    /// `C1 ⊓ C2 ⊑ D`
    Conj(Base, Base, Rhs),
    /// `C1 ⊑ ∃r.C2`
    SubExists(Base, Name, Base),
    /// `∃r.C2 ⊑ D`
    ExistsSub(Name, Base, Rhs),
}

impl NormalAxiom {
    pub fn to_axiom(&self) -> Axiom {
        match self {
            NormalAxiom::Sub(a, d) => Axiom::new(a.to_concept(), d.to_concept()),
            NormalAxiom::Conj(a, b, d) => {
                Axiom::new(Concept::and(a.to_concept(), b.to_concept()), d.to_concept())
            }
            NormalAxiom::SubExists(a, r, b) => {
                Axiom::new(a.to_concept(), Concept::exists(r.clone(), b.to_concept()))
            }
            NormalAxiom::ExistsSub(r, b, d) => {
                Axiom::new(Concept::exists(r.clone(), b.to_concept()), d.to_concept())
            }
        }
    }

    /// Recognizes the four shapes syntactically.
    pub fn from_axiom(ax: &Axiom) -> Option<NormalAxiom> {
        let rhs = |c: &Concept| match c {
            Concept::Bot => Some(Rhs::Bot),
            c => c.as_base().map(Rhs::Base),
        };
        match (&ax.lhs, &ax.rhs) {
            (Concept::And(a, b), d) => Some(NormalAxiom::Conj(a.as_base()?, b.as_base()?, rhs(d)?)),
            (Concept::Exists(r, b), d) => Some(NormalAxiom::ExistsSub(r.clone(), b.as_base()?, rhs(d)?)),
            (a, Concept::Exists(r, b)) => {
                Some(NormalAxiom::SubExists(a.as_base()?, r.clone(), b.as_base()?))
            }
            (a, d) => Some(NormalAxiom::Sub(a.as_base()?, rhs(d)?)),
        }
    }

    /// Which of the four constraint templates the axiom instantiates
    /// (1: `C1 ⊑ D`, 2: `C1 ⊓ C2 ⊑ D`, 3: `C1 ⊑ ∃r.C2`, 4: `∃r.C2 ⊑ D`).
    pub fn template(&self) -> u8 {
        match self {
            NormalAxiom::Sub(..) => 1,
            NormalAxiom::Conj(..) => 2,
            NormalAxiom::SubExists(..) => 3,
            NormalAxiom::ExistsSub(..) => 4,
        }
    }

    pub fn bases(&self) -> Vec<&Base> {
        fn rhs(d: &Rhs) -> Option<&Base> {
            match d {
                Rhs::Base(b) => Some(b),
                Rhs::Bot => None,
            }
        }
        match self {
            NormalAxiom::Sub(a, d) => std::iter::once(a).chain(rhs(d)).collect(),
            NormalAxiom::Conj(a, b, d) => [a, b].into_iter().chain(rhs(d)).collect(),
            NormalAxiom::SubExists(a, _, b) => vec![a, b],
            NormalAxiom::ExistsSub(_, b, d) => std::iter::once(b).chain(rhs(d)).collect(),
        }
    }
}

impl fmt::Display for NormalAxiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.to_axiom().fmt(f)
    }
}

/// Whether `ax` has one of the normal shapes over `base` (plus `⊥` on the
/// right).
pub fn is_normal(ax: &Axiom, base: &BTreeSet<Base>) -> bool {
    NormalAxiom::from_axiom(ax).is_some_and(|n| n.bases().into_iter().all(|b| base.contains(b)))
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct NormalizationResult {
    pub axioms: Vec<NormalAxiom>,
    /// Fresh concept names in order of introduction, each with the complex
    /// concept it stands for.
    pub fresh: Vec<(Name, Concept)>,
}

impl NormalizationResult {
    pub fn tbox(&self) -> Vec<Axiom> {
        self.axioms.iter().map(NormalAxiom::to_axiom).collect()
    }
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Polarity {
    /// Left-hand side position: link with `inner ⊑ fresh`.
    Neg,
    /// Right-hand side position: link with `fresh ⊑ inner`.
    Pos,
}

struct Normalizer {
    taken: Signature,
    counter: usize,
    memo: BTreeMap<(Concept, Polarity), Name>,
    out: Vec<NormalAxiom>,
    fresh: Vec<(Name, Concept)>,
    queue: Vec<(Concept, Concept)>,
}

impl Normalizer {
    fn new(taken: Signature) -> Self {
        Normalizer {
            taken,
            counter: 0,
            memo: BTreeMap::new(),
            out: Vec::new(),
            fresh: Vec::new(),
            queue: Vec::new(),
        }
    }

    /// A base concept standing for `c` in the given position, introducing a
    /// fresh name and its linking axiom when `c` is complex.
    fn base_for(&mut self, c: &Concept, pol: Polarity) -> Base {
        if let Some(b) = c.as_base() {
            return b;
        }
        if let Some(n) = self.memo.get(&(c.clone(), pol)) {
            return Base::Name(n.clone());
        }
        let name = loop {
            self.counter += 1;
            let n = Name::new(format!("_n{}", self.counter));
            if !self.taken.concepts.contains(&n) {
                break n;
            }
        };
        self.memo.insert((c.clone(), pol), name.clone());
        self.fresh.push((name.clone(), c.clone()));
        let fresh = Concept::Name(name.clone());
        match pol {
            Polarity::Neg => self.queue.push((c.clone(), fresh)),
            Polarity::Pos => self.queue.push((fresh, c.clone())),
        }
        Base::Name(name)
    }

    fn emit(&mut self, ax: NormalAxiom) {
        if !self.out.contains(&ax) {
            self.out.push(ax);
        }
    }

    fn axiom(&mut self, lhs: Concept, rhs: Concept) {
        if lhs.is_syntactically_bottom() {
            return;
        }
        if let Concept::And(d1, d2) = rhs {
            self.queue.push((lhs.clone(), *d2));
            self.queue.push((lhs, *d1));
            return;
        }
        let d = match &rhs {
            Concept::Bot => Some(Rhs::Bot),
            c => c.as_base().map(Rhs::Base),
        };
        match (lhs, d) {
            (Concept::And(l1, l2), Some(d)) => {
                let a = self.base_for(&l1, Polarity::Neg);
                let b = self.base_for(&l2, Polarity::Neg);
                self.emit(NormalAxiom::Conj(a, b, d));
            }
            (Concept::Exists(r, filler), Some(d)) => {
                let b = self.base_for(&filler, Polarity::Neg);
                self.emit(NormalAxiom::ExistsSub(r, b, d));
            }
            (lhs, Some(d)) => {
                let a = lhs.as_base().expect("remaining left-hand sides are base concepts");
                self.emit(NormalAxiom::Sub(a, d));
            }
            (lhs, None) => {
                // The right-hand side is an existential restriction.
                let Concept::Exists(r, filler) = rhs else {
                    unreachable!("conjunctions were split above")
                };
                let a = self.base_for(&lhs, Polarity::Neg);
                let b = self.base_for(&filler, Polarity::Pos);
                self.emit(NormalAxiom::SubExists(a, r, b));
            }
        }
    }

    fn run(&mut self) {
        while let Some((lhs, rhs)) = self.queue.pop() {
            self.axiom(lhs, rhs);
        }
    }
}

/// Rewrites a TBox into normal form by naming complex subconcepts.
///
/// Conjunctions on the right are split; a complex subconcept in a
/// left-hand-side position is replaced by a fresh name `N` with `C ⊑ N`, one
/// in a right-hand-side position with `N ⊑ C`. Axioms whose left side is
/// syntactically `⊥` are dropped.
pub fn normalize(tbox: &[Axiom]) -> NormalizationResult {
    let mut n = Normalizer::new(tbox_signature(tbox));
    for ax in tbox {
        n.queue.push((ax.lhs.clone(), ax.rhs.clone()));
        n.run();
    }
    NormalizationResult {
        axioms: n.out,
        fresh: n.fresh,
    }
}

/// A knowledge base in normal form: normal TBox and simple ABox.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct NormalizedKb {
    pub tbox: Vec<NormalAxiom>,
    pub abox: Vec<Assertion>,
    pub fresh: Vec<(Name, Concept)>,
    /// The original signature extended with the fresh names.
    pub signature: Signature,
}

impl NormalizedKb {
    pub fn tbox_axioms(&self) -> Vec<Axiom> {
        self.tbox.iter().map(NormalAxiom::to_axiom).collect()
    }

    pub fn to_kb(&self) -> KnowledgeBase {
        KnowledgeBase {
            tbox: self.tbox_axioms(),
            abox: self.abox.clone(),
            declared: self.signature.clone(),
        }
    }
}

/// Normalizes the TBox and rewrites complex concept assertions `C(a)` into
/// `N(a)` with a fresh `N ⊑ C` (conjunctions are split instead).
pub fn normalize_kb(kb: &KnowledgeBase) -> NormalizedKb {
    let signature = kb.signature();
    let mut n = Normalizer::new(signature.clone());
    for ax in &kb.tbox {
        n.queue.push((ax.lhs.clone(), ax.rhs.clone()));
        n.run();
    }
    let mut abox = Vec::new();
    let mut pending: Vec<Assertion> = kb.abox.iter().rev().cloned().collect();
    while let Some(a) = pending.pop() {
        match a {
            Assertion::Concept(Concept::And(c, d), x) => {
                pending.push(Assertion::Concept(*d, x.clone()));
                pending.push(Assertion::Concept(*c, x));
            }
            Assertion::Concept(c, x) if c.is_complex() => {
                let b = n.base_for(&c, Polarity::Pos);
                n.run();
                abox.push(Assertion::Concept(b.to_concept(), x));
            }
            a => abox.push(a),
        }
    }
    let mut signature = signature;
    signature.concepts.extend(n.fresh.iter().map(|(f, _)| f.clone()));
    NormalizedKb {
        tbox: n.out,
        abox,
        fresh: n.fresh,
        signature,
    }
}

// Bit-parallel evaluation over domains of at most 64 elements; the
// conservativity check visits millions of interpretations.
struct BitInterp {
    n: usize,
    concepts: BTreeMap<Name, u64>,
    roles: BTreeMap<Name, Vec<u64>>,
    inds: BTreeMap<Name, usize>,
}

impl BitInterp {
    fn full(&self) -> u64 {
        if self.n == 64 {
            u64::MAX
        } else {
            (1u64 << self.n) - 1
        }
    }

    fn ext(&self, c: &Concept) -> Option<u64> {
        Some(match c {
            Concept::Top => self.full(),
            Concept::Bot => 0,
            Concept::Name(a) => *self.concepts.get(a)?,
            Concept::Nominal(a) => 1u64 << self.inds.get(a)?,
            Concept::And(l, r) => self.ext(l)? & self.ext(r)?,
            Concept::Exists(r, f) => {
                let fill = self.ext(f)?;
                let succ = self.roles.get(r)?;
                (0..self.n)
                    .filter(|x| succ[*x] & fill != 0)
                    .fold(0, |acc, x| acc | 1 << x)
            }
        })
    }

    fn models(&self, tbox: &[Axiom]) -> Option<bool> {
        for ax in tbox {
            if self.ext(&ax.lhs)? & !self.ext(&ax.rhs)? != 0 {
                return Some(false);
            }
        }
        Some(true)
    }
}

/// Checks, over every interpretation with at most `max_domain` elements,
/// that the models of `normalized` projected onto the signature of
/// `original` are exactly the models of `original`.
///
/// Names of `normalized` outside the original signature must be concept
/// names; they are existentially quantified.
pub fn conservativity_check(
    original: &[Axiom],
    normalized: &[Axiom],
    max_domain: usize,
    budget: u64,
) -> Result<bool, ElError> {
    if max_domain == 0 {
        return Err(ElError::EmptyDomain);
    }
    if max_domain > 64 {
        return Err(ElError::BudgetExceeded { budget });
    }
    let sig = tbox_signature(original);
    let norm_sig = tbox_signature(normalized);
    for r in &norm_sig.roles {
        if !sig.roles.contains(r) {
            return Err(ElError::UnmappedName(r.clone()));
        }
    }
    for a in &norm_sig.individuals {
        if !sig.individuals.contains(a) {
            return Err(ElError::UnmappedName(a.clone()));
        }
    }
    let extra: Vec<Name> = norm_sig.concepts.difference(&sig.concepts).cloned().collect();
    let base = InterpretationSpace::total(&sig, max_domain).ok_or(ElError::BudgetExceeded { budget })?;
    let ext_bits = (max_domain * extra.len()) as u32;
    let per = if ext_bits >= 63 { None } else { Some(1u64 << ext_bits) };
    if per.and_then(|p| p.checked_mul(base)).is_none_or(|t| t > budget) {
        return Err(ElError::BudgetExceeded { budget });
    }
    for i in InterpretationSpace::new(&sig, max_domain, budget)? {
        let n = i.domain.len();
        let mut bits = BitInterp {
            n,
            concepts: i
                .concept_ext
                .iter()
                .map(|(c, e)| (c.clone(), e.iter().fold(0u64, |acc, x| acc | 1 << x)))
                .collect(),
            roles: i
                .role_ext
                .iter()
                .map(|(r, e)| {
                    let mut succ = vec![0u64; n];
                    for (x, y) in e {
                        succ[*x] |= 1 << y;
                    }
                    (r.clone(), succ)
                })
                .collect(),
            inds: i.ind_map.clone(),
        };
        let orig = bits.models(original).expect("signature covers the original TBox");
        let mut found = false;
        let m = n * extra.len();
        for mask in 0u64..(1u64 << m) {
            for (k, c) in extra.iter().enumerate() {
                bits.concepts.insert(c.clone(), (mask >> (k * n)) & bits.full());
            }
            if bits.models(normalized).expect("extension covers the normalized TBox") {
                found = true;
                break;
            }
        }
        if orig != found {
            return Ok(false);
        }
    }
    Ok(true)
}
