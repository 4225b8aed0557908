//! Finite interpretations and the model-theoretic semantics of EL⊥.
//!
//! Everything here is a direct transcription of the set-theoretic
//! definitions; it doubles as the semantic oracle for the property suites.

use std::collections::{BTreeMap, BTreeSet};

use super::syntax::{Assertion, Axiom, Concept, KnowledgeBase, Signature};
use super::ElError;
use crate::name::Name;

pub type Element = usize;

/// Default cap on the number of candidate interpretations a brute-force
/// enumeration may visit.
pub const DEFAULT_MODEL_BUDGET: u64 = 1 << 24;

/// A finite interpretation `(Δ, ·^I)`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Interpretation {
    pub domain: BTreeSet<Element>,
    pub concept_ext: BTreeMap<Name, BTreeSet<Element>>,
    pub role_ext: BTreeMap<Name, BTreeSet<(Element, Element)>>,
    pub ind_map: BTreeMap<Name, Element>,
}

impl Interpretation {
    fn concept(&self, a: &Name) -> Result<&BTreeSet<Element>, ElError> {
        self.concept_ext
            .get(a)
            .ok_or_else(|| ElError::UnmappedName(a.clone()))
    }

    fn role(&self, r: &Name) -> Result<&BTreeSet<(Element, Element)>, ElError> {
        self.role_ext
            .get(r)
            .ok_or_else(|| ElError::UnmappedName(r.clone()))
    }

    fn individual(&self, a: &Name) -> Result<Element, ElError> {
        self.ind_map
            .get(a)
            .copied()
            .ok_or_else(|| ElError::UnmappedName(a.clone()))
    }

    /// Checks the structural invariant: every extension lives inside the
    /// domain.
    pub fn is_well_formed(&self) -> bool {
        self.concept_ext
            .values()
            .all(|s| s.is_subset(&self.domain))
            && self
                .role_ext
                .values()
                .all(|s| s.iter().all(|(x, y)| self.domain.contains(x) && self.domain.contains(y)))
            && self.ind_map.values().all(|e| self.domain.contains(e))
    }
}

/// The denotation `C^I`.
pub fn extension_of(i: &Interpretation, c: &Concept) -> Result<BTreeSet<Element>, ElError> {
    Ok(match c {
        Concept::Top => i.domain.clone(),
        Concept::Bot => BTreeSet::new(),
        Concept::Name(a) => i.concept(a)?.clone(),
        Concept::Nominal(a) => [i.individual(a)?].into_iter().collect(),
        Concept::And(l, r) => {
            let l = extension_of(i, l)?;
            let r = extension_of(i, r)?;
            l.intersection(&r).copied().collect()
        }
        Concept::Exists(r, filler) => {
            let fillers = extension_of(i, filler)?;
            i.role(r)?
                .iter()
                .filter(|(_, y)| fillers.contains(y))
                .map(|(x, _)| *x)
                .collect()
        }
    })
}

pub fn satisfies_axiom(i: &Interpretation, ax: &Axiom) -> Result<bool, ElError> {
    let lhs = extension_of(i, &ax.lhs)?;
    if lhs.is_empty() {
        // Still resolve the right-hand side so unmapped names are reported.
        extension_of(i, &ax.rhs)?;
        return Ok(true);
    }
    Ok(lhs.is_subset(&extension_of(i, &ax.rhs)?))
}

pub fn satisfies_assertion(i: &Interpretation, a: &Assertion) -> Result<bool, ElError> {
    match a {
        Assertion::Concept(c, ind) => Ok(extension_of(i, c)?.contains(&i.individual(ind)?)),
        Assertion::Role(r, x, y) => {
            let pair = (i.individual(x)?, i.individual(y)?);
            Ok(i.role(r)?.contains(&pair))
        }
    }
}

/// Either kind of statement an interpretation can satisfy.
#[derive(Clone, Copy, Debug)]
pub enum Statement<'a> {
    Axiom(&'a Axiom),
    Assertion(&'a Assertion),
}

pub fn satisfies(i: &Interpretation, s: Statement<'_>) -> Result<bool, ElError> {
    match s {
        Statement::Axiom(ax) => satisfies_axiom(i, ax),
        Statement::Assertion(a) => satisfies_assertion(i, a),
    }
}

pub fn is_model_of_tbox(i: &Interpretation, tbox: &[Axiom]) -> Result<bool, ElError> {
    for ax in tbox {
        if !satisfies_axiom(i, ax)? {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn is_model(i: &Interpretation, kb: &KnowledgeBase) -> Result<bool, ElError> {
    if !is_model_of_tbox(i, &kb.tbox)? {
        return Ok(false);
    }
    for a in &kb.abox {
        if !satisfies_assertion(i, a)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Enumerates every interpretation over `sig` with `1..=max_domain`
/// elements (no symmetry reduction).
#[derive(Clone, Debug)]
pub struct InterpretationSpace {
    concepts: Vec<Name>,
    roles: Vec<Name>,
    individuals: Vec<Name>,
    max_domain: usize,
    size: usize,
    index: u64,
    count: u64,
}

impl InterpretationSpace {
    pub fn new(sig: &Signature, max_domain: usize, budget: u64) -> Result<Self, ElError> {
        let total = Self::total(sig, max_domain).filter(|t| *t <= budget);
        if total.is_none() {
            return Err(ElError::BudgetExceeded { budget });
        }
        let mut space = InterpretationSpace {
            concepts: sig.concepts.iter().cloned().collect(),
            roles: sig.roles.iter().cloned().collect(),
            individuals: sig.individuals.iter().cloned().collect(),
            max_domain,
            size: 1,
            index: 0,
            count: 0,
        };
        space.count = space.count_for(1);
        Ok(space)
    }

    /// Number of candidate interpretations, or `None` on overflow.
    pub fn total(sig: &Signature, max_domain: usize) -> Option<u64> {
        let mut total: u64 = 0;
        for n in 1..=max_domain as u64 {
            let bits = n * sig.concepts.len() as u64 + n * n * sig.roles.len() as u64;
            let inds = n.checked_pow(sig.individuals.len() as u32)?;
            let per = if bits >= 63 { None } else { inds.checked_mul(1u64 << bits) }?;
            total = total.checked_add(per)?;
        }
        Some(total)
    }

    fn count_for(&self, n: usize) -> u64 {
        let n = n as u64;
        let bits = n * self.concepts.len() as u64 + n * n * self.roles.len() as u64;
        n.pow(self.individuals.len() as u32) << bits
    }

    fn decode(&self, n: usize, mut idx: u64) -> Interpretation {
        let mut i = Interpretation {
            domain: (0..n).collect(),
            ..Default::default()
        };
        for a in &self.individuals {
            i.ind_map.insert(a.clone(), (idx % n as u64) as usize);
            idx /= n as u64;
        }
        for c in &self.concepts {
            let ext = (0..n).filter(|e| idx >> e & 1 == 1).collect();
            idx >>= n;
            i.concept_ext.insert(c.clone(), ext);
        }
        for r in &self.roles {
            let mut ext = BTreeSet::new();
            for x in 0..n {
                for y in 0..n {
                    if idx & 1 == 1 {
                        ext.insert((x, y));
                    }
                    idx >>= 1;
                }
            }
            i.role_ext.insert(r.clone(), ext);
        }
        i
    }
}

impl Iterator for InterpretationSpace {
    type Item = Interpretation;

    fn next(&mut self) -> Option<Interpretation> {
        while self.index >= self.count {
            if self.size >= self.max_domain {
                return None;
            }
            self.size += 1;
            self.index = 0;
            self.count = self.count_for(self.size);
        }
        let i = self.decode(self.size, self.index);
        self.index += 1;
        Some(i)
    }
}

/// All models of `kb` with at most `max_domain` elements.
pub fn enumerate_models(
    kb: &KnowledgeBase,
    max_domain: usize,
) -> Result<impl Iterator<Item = Interpretation> + '_, ElError> {
    enumerate_models_with_budget(kb, max_domain, DEFAULT_MODEL_BUDGET)
}

pub fn enumerate_models_with_budget(
    kb: &KnowledgeBase,
    max_domain: usize,
    budget: u64,
) -> Result<impl Iterator<Item = Interpretation> + '_, ElError> {
    if max_domain == 0 {
        return Err(ElError::EmptyDomain);
    }
    let space = InterpretationSpace::new(&kb.signature(), max_domain, budget)?;
    // Every candidate maps all names of the signature, so is_model cannot fail.
    Ok(space.filter(move |i| is_model(i, kb).unwrap_or(false)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn teaches_interp(teacher: &[Element]) -> Interpretation {
        let mut i = Interpretation {
            domain: [0, 1].into_iter().collect(),
            ..Default::default()
        };
        i.role_ext
            .insert("teaches".into(), [(0, 1)].into_iter().collect());
        i.concept_ext.insert("course".into(), [1].into_iter().collect());
        i.concept_ext
            .insert("teacher".into(), teacher.iter().copied().collect());
        i.concept_ext.insert("person".into(), [0].into_iter().collect());
        i.ind_map.insert("john".into(), 0);
        i.ind_map.insert("cs1".into(), 1);
        i
    }

    fn ex1_kb() -> KnowledgeBase {
        KnowledgeBase::new(
            vec![Axiom::new(
                Concept::exists("teaches", Concept::name("course")),
                Concept::name("teacher"),
            )],
            vec![
                Assertion::Concept(Concept::name("person"), "john".into()),
                Assertion::Concept(Concept::name("course"), "cs1".into()),
            ],
        )
    }

    #[test]
    fn existential_extension() {
        let i = teaches_interp(&[0]);
        let ext = extension_of(&i, &Concept::exists("teaches", Concept::name("course"))).unwrap();
        assert_eq!(ext, [0].into_iter().collect());
        assert_eq!(extension_of(&i, &Concept::Top).unwrap(), i.domain);
        assert!(extension_of(&i, &Concept::Bot).unwrap().is_empty());
    }

    #[test]
    fn unmapped_names_are_reported() {
        let i = teaches_interp(&[0]);
        assert_eq!(
            extension_of(&i, &Concept::name("nope")),
            Err(ElError::UnmappedName("nope".into()))
        );
        assert!(satisfies_axiom(&i, &Axiom::new(Concept::Bot, Concept::name("nope"))).is_err());
    }

    #[test]
    fn example1_axiom_satisfaction() {
        let ax = &ex1_kb().tbox[0];
        assert!(satisfies_axiom(&teaches_interp(&[0]), ax).unwrap());
        assert!(!satisfies_axiom(&teaches_interp(&[]), ax).unwrap());
        let bot = Axiom::new(Concept::Bot, Concept::name("teacher"));
        assert!(satisfies(&teaches_interp(&[]), Statement::Axiom(&bot)).unwrap());
    }

    #[test]
    fn example1_models() {
        let kb = ex1_kb();
        assert!(is_model(&teaches_interp(&[0]), &kb).unwrap());
        assert!(!is_model(&teaches_interp(&[]), &kb).unwrap());
        assert!(is_model(&teaches_interp(&[]), &KnowledgeBase::default()).unwrap());
        assert!(enumerate_models(&kb, 2).unwrap().next().is_some());
    }

    #[test]
    fn unsatisfiable_kb_has_no_models() {
        let kb = KnowledgeBase::new(
            vec![Axiom::new(Concept::name("a"), Concept::Bot)],
            vec![Assertion::Concept(Concept::name("a"), "x".into())],
        );
        for n in 1..=3 {
            assert_eq!(enumerate_models(&kb, n).unwrap().count(), 0);
        }
    }

    #[test]
    fn singleton_domain_one_concept_one_individual() {
        let mut kb = KnowledgeBase::default();
        kb.declared.concepts.insert("a".into());
        kb.declared.individuals.insert("x".into());
        assert_eq!(enumerate_models(&kb, 1).unwrap().count(), 2);
    }

    #[test]
    fn budget_is_enforced() {
        let mut kb = KnowledgeBase::default();
        kb.declared.roles.insert("r".into());
        kb.declared.roles.insert("s".into());
        assert!(matches!(
            enumerate_models_with_budget(&kb, 4, 1000).map(|_| ()),
            Err(ElError::BudgetExceeded { .. })
        ));
    }

    fn arb_concept() -> impl Strategy<Value = Concept> {
        let leaf = prop_oneof![
            Just(Concept::Top),
            Just(Concept::Bot),
            prop_oneof![Just("a"), Just("b")].prop_map(Concept::name),
            prop_oneof![Just("x"), Just("y")].prop_map(Concept::nominal),
        ];
        leaf.prop_recursive(3, 12, 2, |inner| {
            prop_oneof![
                (inner.clone(), inner.clone()).prop_map(|(l, r)| Concept::and(l, r)),
                inner.prop_map(|c| Concept::exists("r", c)),
            ]
        })
    }

    fn arb_interp() -> impl Strategy<Value = Interpretation> {
        (1usize..=3)
            .prop_flat_map(|n| {
                (
                    Just(n),
                    proptest::collection::vec(any::<bool>(), 2 * n),
                    proptest::collection::vec(any::<bool>(), n * n),
                    (0..n, 0..n),
                )
            })
            .prop_map(|(n, cbits, rbits, (x, y))| {
                let mut i = Interpretation {
                    domain: (0..n).collect(),
                    ..Default::default()
                };
                for (k, c) in ["a", "b"].iter().enumerate() {
                    let ext = (0..n).filter(|e| cbits[k * n + e]).collect();
                    i.concept_ext.insert((*c).into(), ext);
                }
                let r = (0..n)
                    .flat_map(|p| (0..n).map(move |q| (p, q)))
                    .filter(|(p, q)| rbits[p * n + q])
                    .collect();
                i.role_ext.insert("r".into(), r);
                i.ind_map.insert("x".into(), x);
                i.ind_map.insert("y".into(), y);
                i
            })
    }

    // Naive membership test, element by element, independent of the
    // set-algebra implementation above.
    fn member(i: &Interpretation, c: &Concept, e: Element) -> bool {
        match c {
            Concept::Top => true,
            Concept::Bot => false,
            Concept::Name(a) => i.concept_ext[a].contains(&e),
            Concept::Nominal(a) => i.ind_map[a] == e,
            Concept::And(l, r) => member(i, l, e) && member(i, r, e),
            Concept::Exists(r, f) => i
                .domain
                .iter()
                .any(|y| i.role_ext[r].contains(&(e, *y)) && member(i, f, *y)),
        }
    }

    proptest! {
        #[test]
        fn extension_matches_naive_membership(i in arb_interp(), c in arb_concept()) {
            let ext = extension_of(&i, &c).unwrap();
            let naive: BTreeSet<_> = i.domain.iter().copied().filter(|e| member(&i, &c, *e)).collect();
            prop_assert_eq!(ext, naive);
        }

        #[test]
        fn conjunction_is_monotone(i in arb_interp(), c in arb_concept(), d in arb_concept()) {
            let both = extension_of(&i, &Concept::and(c.clone(), d)).unwrap();
            prop_assert!(both.is_subset(&extension_of(&i, &c).unwrap()));
        }

        #[test]
        fn nominals_are_singletons(i in arb_interp()) {
            prop_assert_eq!(extension_of(&i, &Concept::nominal("x")).unwrap().len(), 1);
        }

        #[test]
        fn axiom_satisfaction_is_subset_test(i in arb_interp(), c in arb_concept(), d in arb_concept()) {
            let ax = Axiom::new(c.clone(), d.clone());
            let expected = i.domain.iter().all(|e| !member(&i, &c, *e) || member(&i, &d, *e));
            prop_assert_eq!(satisfies_axiom(&i, &ax).unwrap(), expected);
        }
    }

    #[test]
    fn enumerated_models_are_models() {
        let kb = KnowledgeBase::new(
            vec![
                Axiom::new(Concept::name("a"), Concept::exists("r", Concept::name("b"))),
                Axiom::new(Concept::and(Concept::name("a"), Concept::name("b")), Concept::Bot),
            ],
            vec![Assertion::Concept(Concept::name("a"), "x".into())],
        );
        let models: Vec<_> = enumerate_models(&kb, 3).unwrap().collect();
        assert!(!models.is_empty());
        for m in &models {
            assert!(m.is_well_formed());
            assert!(is_model(m, &kb).unwrap());
        }
    }
}
