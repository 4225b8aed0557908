use std::collections::{BTreeMap, BTreeSet, HashSet};

use thiserror::Error;

use super::{Action, Atom, BodyLit, DomainDescription, GroundRule, Head, Literal, Pred, Rule, Term};
use crate::el::Base;
use crate::name::Name;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroundError {
    #[error("unsafe rule `{rule}`: variable {var} occurs in no positive body literal")]
    UnsafeRule { rule: String, var: Name },
}

/// The constants the theory is grounded over: the knowledge base's
/// individuals, the auxiliary individuals, and every constant mentioned by
/// a law or constraint.
pub fn universe(d: &DomainDescription, aux: &BTreeSet<Name>) -> BTreeSet<Name> {
    let mut out = d.kb.signature().individuals;
    out.extend(aux.iter().cloned());
    for rule in &d.laws {
        rule_constants(rule, &mut out);
    }
    let mut lits = Vec::new();
    let mut actions = Vec::new();
    for c in &d.constraints {
        c.literals(&mut lits);
        c.actions(&mut actions);
    }
    for l in &lits {
        lit_constants(&l.map(&mut |n| Term::Const(n.clone())), &mut out);
    }
    for a in &actions {
        action_constants(&a.map(&mut |n| Term::Const(n.clone())), &mut out);
    }
    out
}

fn pred_constants(p: &Pred, out: &mut BTreeSet<Name>) {
    match p {
        Pred::Nominal(a) => {
            out.insert(a.clone());
        }
        Pred::Exists(_, Base::Nominal(a)) | Pred::ExistsAux(_, Base::Nominal(a)) => {
            out.insert(a.clone());
        }
        _ => {}
    }
}

fn lit_constants(l: &Literal<Term>, out: &mut BTreeSet<Name>) {
    pred_constants(&l.atom.pred, out);
    for t in &l.atom.args {
        if let Term::Const(c) = t {
            out.insert(c.clone());
        }
    }
}

fn action_constants(a: &Action<Term>, out: &mut BTreeSet<Name>) {
    match a {
        Action::Named { args, .. } => {
            for t in args {
                if let Term::Const(c) = t {
                    out.insert(c.clone());
                }
            }
        }
        Action::Test(l) => lit_constants(l, out),
    }
}

fn body_constants(b: &BodyLit<Term>, out: &mut BTreeSet<Name>) {
    if let BodyLit::After(a, _) = b {
        action_constants(a, out);
    }
    lit_constants(b.literal(), out);
}

fn rule_constants(r: &Rule<Term>, out: &mut BTreeSet<Name>) {
    match &r.head {
        Head::Bot => {}
        Head::Lit(l) | Head::Next(l) => lit_constants(l, out),
        Head::After(a, l) => {
            action_constants(a, out);
            lit_constants(l, out);
        }
        Head::AfterBot(a) => action_constants(a, out),
    }
    for b in r.pos.iter().chain(&r.neg) {
        body_constants(b, out);
    }
}

fn atom_vars(a: &Atom<Term>, out: &mut Vec<Name>) {
    for t in &a.args {
        if let Some(v) = t.as_var() {
            if !out.contains(v) {
                out.push(v.clone());
            }
        }
    }
}

fn action_vars(a: &Action<Term>, out: &mut Vec<Name>) {
    match a {
        Action::Named { args, .. } => {
            for t in args {
                if let Some(v) = t.as_var() {
                    if !out.contains(v) {
                        out.push(v.clone());
                    }
                }
            }
        }
        Action::Test(l) => atom_vars(&l.atom, out),
    }
}

fn body_vars(b: &BodyLit<Term>, out: &mut Vec<Name>) {
    if let BodyLit::After(a, _) = b {
        action_vars(a, out);
    }
    atom_vars(&b.literal().atom, out);
}

fn head_vars(h: &Head<Term>, out: &mut Vec<Name>) {
    match h {
        Head::Bot => {}
        Head::Lit(l) | Head::Next(l) => atom_vars(&l.atom, out),
        Head::After(a, l) => {
            action_vars(a, out);
            atom_vars(&l.atom, out);
        }
        Head::AfterBot(a) => action_vars(a, out),
    }
}

/// Variables of a rule in order of first occurrence.
pub(crate) fn rule_vars(r: &Rule<Term>) -> Vec<Name> {
    let mut out = Vec::new();
    head_vars(&r.head, &mut out);
    for b in r.pos.iter().chain(&r.neg) {
        body_vars(b, &mut out);
    }
    out
}

/// Checks that every variable is bound by a positive body literal, by the
/// action term of the head, or by an explicit sort.
pub(crate) fn check_safety(r: &Rule<Term>) -> Result<(), GroundError> {
    let mut bound = Vec::new();
    for b in &r.pos {
        body_vars(b, &mut bound);
    }
    if let Head::After(a, _) | Head::AfterBot(a) = &r.head {
        action_vars(a, &mut bound);
    }
    for v in rule_vars(r) {
        if !bound.contains(&v) && !r.sorts.contains_key(&v) {
            return Err(GroundError::UnsafeRule {
                rule: r.to_string(),
                var: v,
            });
        }
    }
    Ok(())
}

/// All ground instances of one rule: every variable ranges over its sort,
/// or over the whole universe when unsorted.
pub fn ground_rule(r: &Rule<Term>, universe: &BTreeSet<Name>) -> Result<Vec<GroundRule>, GroundError> {
    check_safety(r)?;
    let vars = rule_vars(r);
    let ranges: Vec<Vec<Name>> = vars
        .iter()
        .map(|v| r.sorts.get(v).unwrap_or(universe).iter().cloned().collect())
        .collect();
    let mut out = Vec::new();
    if ranges.iter().any(|r| r.is_empty()) {
        return Ok(out);
    }
    let mut idx = vec![0usize; vars.len()];
    loop {
        let subst: BTreeMap<&Name, &Name> = vars
            .iter()
            .zip(&idx)
            .zip(&ranges)
            .map(|((v, i), range)| (v, &range[*i]))
            .collect();
        out.push(r.map(&mut |t| match t {
            Term::Const(c) => c.clone(),
            Term::Var(v) => subst[v].clone(),
        }));
        // Advance the mixed-radix counter; done when it wraps.
        let mut k = 0;
        loop {
            if k == idx.len() {
                return Ok(out);
            }
            idx[k] += 1;
            if idx[k] < ranges[k].len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

/// Ground instances of every rule, deduplicated, in first-occurrence order.
pub fn ground_program(
    laws: &[Rule<Term>],
    universe: &BTreeSet<Name>,
) -> Result<Vec<GroundRule>, GroundError> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for r in laws {
        for g in ground_rule(r, universe)? {
            if seen.insert(g.clone()) {
                out.push(g);
            }
        }
    }
    Ok(out)
}
