//! From solver states to EL⊥ interpretations.

use std::collections::{BTreeMap, BTreeSet};

use super::interp::{extension_of, is_model_of_tbox, Element, Interpretation};
use super::syntax::{Axiom, Base, Concept, Signature};
use super::ElError;
use crate::name::Name;
use crate::theory::{GroundAtom, GroundLiteral, Pred, State};

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut y = x;
        while self.parent[y] != root {
            let next = self.parent[y];
            self.parent[y] = root;
            y = next;
        }
        root
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

fn atom(pred: Pred, args: &[&Name]) -> GroundAtom {
    GroundAtom::new(pred, args.iter().map(|a| (*a).clone()).collect())
}

fn truth(w: &State, a: &GroundAtom) -> Result<bool, ElError> {
    let pos = w.contains(&GroundLiteral::pos(a.clone()));
    let neg = w.contains(&GroundLiteral::neg(a.clone()));
    match (pos, neg) {
        (true, true) => Err(ElError::InconsistentState(a.to_string())),
        (false, false) => Err(ElError::IncompleteState(a.to_string())),
        (p, _) => Ok(p),
    }
}

/// The interpretation induced by a complete state: the universe quotiented
/// by the nominal equivalence `x ≡ a` iff `{a}(x) ∈ w`, with extensions read
/// off the positive simple assertions.
///
/// The result is checked against every ontology literal of `w` (simple and
/// existential); the first literal it disagrees with is reported.
pub fn induced_interpretation(
    w: &State,
    sig: &Signature,
    universe: &BTreeSet<Name>,
) -> Result<Interpretation, ElError> {
    let consts: Vec<&Name> = universe.iter().collect();
    let index: BTreeMap<&Name, usize> = consts.iter().enumerate().map(|(i, c)| (*c, i)).collect();
    let mut uf = UnionFind {
        parent: (0..consts.len()).collect(),
    };
    for a in &sig.individuals {
        let Some(&ia) = index.get(a) else {
            return Err(ElError::UnmappedName(a.clone()));
        };
        for (ix, x) in consts.iter().enumerate() {
            if truth(w, &atom(Pred::Nominal(a.clone()), &[x]))? {
                uf.union(ia, ix);
            }
        }
    }
    let class: Vec<Element> = (0..consts.len()).map(|i| uf.find(i)).collect();
    let mut i = Interpretation {
        domain: class.iter().copied().collect(),
        ..Default::default()
    };
    for c in &sig.concepts {
        let mut ext = BTreeSet::new();
        for (ix, x) in consts.iter().enumerate() {
            if truth(w, &atom(Pred::Named(c.clone()), &[x]))? {
                ext.insert(class[ix]);
            }
        }
        i.concept_ext.insert(c.clone(), ext);
    }
    for r in &sig.roles {
        let mut ext = BTreeSet::new();
        for (ix, x) in consts.iter().enumerate() {
            for (iy, y) in consts.iter().enumerate() {
                if truth(w, &atom(Pred::Named(r.clone()), &[x, y]))? {
                    ext.insert((class[ix], class[iy]));
                }
            }
        }
        i.role_ext.insert(r.clone(), ext);
    }
    for a in &sig.individuals {
        i.ind_map.insert(a.clone(), class[index[a]]);
    }

    for l in w {
        let Some(concept) = ontology_concept(&l.atom.pred, l.atom.args.len(), sig) else {
            if let Pred::Named(r) = &l.atom.pred {
                if sig.roles.contains(r) && l.atom.args.len() == 2 {
                    check_role(&i, l, r, &index, &class)?;
                }
            }
            continue;
        };
        let Some(&ix) = index.get(&l.atom.args[0]) else {
            return Err(ElError::UnmappedName(l.atom.args[0].clone()));
        };
        let holds = extension_of(&i, &concept)?.contains(&class[ix]);
        if holds == l.negated {
            return Err(ElError::Agreement(l.to_string()));
        }
    }
    Ok(i)
}

fn check_role(
    i: &Interpretation,
    l: &GroundLiteral,
    r: &Name,
    index: &BTreeMap<&Name, usize>,
    class: &[Element],
) -> Result<(), ElError> {
    let ix = *index
        .get(&l.atom.args[0])
        .ok_or_else(|| ElError::UnmappedName(l.atom.args[0].clone()))?;
    let iy = *index
        .get(&l.atom.args[1])
        .ok_or_else(|| ElError::UnmappedName(l.atom.args[1].clone()))?;
    let holds = i.role_ext[r].contains(&(class[ix], class[iy]));
    if holds == l.negated {
        return Err(ElError::Agreement(l.to_string()));
    }
    Ok(())
}

/// The concept an ontology assertion predicate denotes, if it is one.
fn ontology_concept(p: &Pred, arity: usize, sig: &Signature) -> Option<Concept> {
    if arity != 1 {
        return None;
    }
    match p {
        Pred::Named(c) if sig.concepts.contains(c) => Some(Concept::Name(c.clone())),
        Pred::Nominal(a) => Some(Concept::Nominal(a.clone())),
        Pred::Top => Some(Concept::Top),
        Pred::Bot => Some(Concept::Bot),
        Pred::Exists(r, b) if sig.roles.contains(r) && base_in(b, sig) => {
            Some(Concept::Exists(r.clone(), Box::new(b.to_concept())))
        }
        _ => None,
    }
}

fn base_in(b: &Base, sig: &Signature) -> bool {
    match b {
        Base::Top => true,
        Base::Name(n) => sig.concepts.contains(n),
        Base::Nominal(a) => sig.individuals.contains(a),
    }
}

/// Whether the state satisfies the TBox, judged on the induced
/// interpretation.
pub fn state_satisfies_tbox(
    w: &State,
    tbox: &[Axiom],
    sig: &Signature,
    universe: &BTreeSet<Name>,
) -> Result<bool, ElError> {
    let i = induced_interpretation(w, sig, universe)?;
    is_model_of_tbox(&i, tbox)
}
