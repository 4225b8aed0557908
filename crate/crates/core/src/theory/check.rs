use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use super::{Action, BodyLit, DomainDescription, FrameStatus, Head, Literal, Pred, Rule, Scope, Term};
use crate::name::Name;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum RuleKind {
    ActionLaw,
    StaticCausal,
    DynamicCausal,
    Precondition,
    InitialState,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RuleError {
    #[error("`{0}`: a rule with a simple head cannot have temporal body literals")]
    SimpleHeadTemporalBody(String),
    #[error("`{0}`: temporal body literals of an action law must refer to the head's action")]
    ActionHeadBody(String),
    #[error("`{0}`: temporal body literals of a dynamic causal law must be `next` literals")]
    NextHeadBody(String),
    #[error("`{0}`: precondition laws take simple body literals only")]
    PreconditionBody(String),
    #[error("`{0}`: initial-state laws need a simple head")]
    InitialTemporalHead(String),
}

/// Checks the form constraints on rule heads and bodies.
pub fn validate_rule<T>(r: &Rule<T>) -> Result<(), RuleError>
where
    T: Clone + PartialEq + fmt::Display,
{
    let temporal = || r.pos.iter().chain(&r.neg).filter(|b| b.is_temporal());
    let text = || r.to_string();
    match &r.head {
        _ if r.scope == Scope::Initial && r.head.is_temporal() => {
            Err(RuleError::InitialTemporalHead(text()))
        }
        Head::Bot | Head::Lit(_) => match temporal().next() {
            Some(_) => Err(RuleError::SimpleHeadTemporalBody(text())),
            None => Ok(()),
        },
        Head::After(a, _) => {
            if temporal().all(|b| matches!(b, BodyLit::After(b, _) if b == a)) {
                Ok(())
            } else {
                Err(RuleError::ActionHeadBody(text()))
            }
        }
        Head::AfterBot(_) => match temporal().next() {
            Some(_) => Err(RuleError::PreconditionBody(text())),
            None => Ok(()),
        },
        Head::Next(_) => {
            if temporal().all(|b| matches!(b, BodyLit::Next(_))) {
                Ok(())
            } else {
                Err(RuleError::NextHeadBody(text()))
            }
        }
    }
}

pub fn classify_rule<T>(r: &Rule<T>) -> Result<RuleKind, RuleError>
where
    T: Clone + PartialEq + fmt::Display,
{
    validate_rule(r)?;
    Ok(match (&r.head, r.scope) {
        (_, Scope::Initial) => RuleKind::InitialState,
        (Head::After(..), _) => RuleKind::ActionLaw,
        (Head::AfterBot(_), _) => RuleKind::Precondition,
        (Head::Next(_), _) => RuleKind::DynamicCausal,
        (Head::Bot | Head::Lit(_), Scope::Always) => RuleKind::StaticCausal,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum Violation {
    /// A simple fluent predicate with neither a frame nor a non-frame
    /// declaration.
    Undeclared(Name),
    /// Nominals, `top` and `bot` are always frame.
    ForcedFrame(String),
    /// One name used with two different arities (for instance as a concept
    /// and as a role).
    ArityConflict(Name),
    UnknownAction(Name),
    ActionArity(Name),
    Malformed(String),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Undeclared(p) => write!(f, "fluent `{p}` is declared neither frame nor nonframe"),
            Violation::ForcedFrame(p) => write!(f, "`{p}` must be frame"),
            Violation::ArityConflict(p) => write!(f, "`{p}` is used with different arities"),
            Violation::UnknownAction(a) => write!(f, "action `{a}` is not declared"),
            Violation::ActionArity(a) => write!(f, "action `{a}` is used with the wrong number of arguments"),
            Violation::Malformed(m) => f.write_str(m),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct WellDefinedReport {
    pub violations: Vec<Violation>,
}

impl WellDefinedReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for WellDefinedReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_ok() {
            return f.write_str("ok");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                f.write_str("\n")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

fn note_literal(l: &Literal<Term>, arities: &mut Vec<(Name, usize)>) {
    if let Pred::Named(p) = &l.atom.pred {
        arities.push((p.clone(), l.atom.args.len()));
    }
}

fn note_action(a: &Action<Term>, arities: &mut Vec<(Name, usize)>, actions: &mut Vec<(Name, usize)>) {
    match a {
        Action::Named { name, args } => actions.push((name.clone(), args.len())),
        Action::Test(l) => note_literal(l, arities),
    }
}

fn note_rule(r: &Rule<Term>, arities: &mut Vec<(Name, usize)>, actions: &mut Vec<(Name, usize)>) {
    match &r.head {
        Head::Bot => {}
        Head::Lit(l) | Head::Next(l) => note_literal(l, arities),
        Head::After(a, l) => {
            note_action(a, arities, actions);
            note_literal(l, arities);
        }
        Head::AfterBot(a) => note_action(a, arities, actions),
    }
    for b in r.pos.iter().chain(&r.neg) {
        if let BodyLit::After(a, _) = b {
            note_action(a, arities, actions);
        }
        note_literal(b.literal(), arities);
    }
}

/// Arity of every named fluent predicate (concepts 1, roles 2, plain fluents
/// from usage; declared but unused plain fluents are propositional), plus
/// the names used with more than one arity.
pub fn fluent_arities(d: &DomainDescription) -> (BTreeMap<Name, usize>, Vec<Name>) {
    let sig = d.kb.signature();
    let mut uses: Vec<(Name, usize)> = Vec::new();
    uses.extend(sig.concepts.iter().map(|c| (c.clone(), 1)));
    uses.extend(sig.roles.iter().map(|r| (r.clone(), 2)));
    let mut actions = Vec::new();
    for r in &d.laws {
        note_rule(r, &mut uses, &mut actions);
    }
    let mut lits = Vec::new();
    let mut acts = Vec::new();
    for c in &d.constraints {
        c.literals(&mut lits);
        c.actions(&mut acts);
    }
    for l in lits.iter().chain(acts.iter().filter_map(|a| match a {
        Action::Test(l) => Some(l),
        _ => None,
    })) {
        if let Pred::Named(p) = &l.atom.pred {
            uses.push((p.clone(), l.atom.args.len()));
        }
    }
    for (p, _) in d.frames.iter() {
        if let Pred::Named(p) = p {
            if !uses.iter().any(|(q, _)| q == p) {
                uses.push((p.clone(), 0));
            }
        }
    }
    let mut arities = BTreeMap::new();
    let mut conflicts = Vec::new();
    for (p, n) in uses {
        match arities.get(&p) {
            Some(m) if *m != n => {
                if !conflicts.contains(&p) {
                    conflicts.push(p);
                }
            }
            Some(_) => {}
            None => {
                arities.insert(p, n);
            }
        }
    }
    (arities, conflicts)
}

/// Reports every reason the description is not well-defined: undeclared
/// simple fluents, nominals declared non-frame, namespace collisions,
/// unknown actions and malformed laws.
pub fn check_well_defined(d: &DomainDescription) -> WellDefinedReport {
    let mut violations = Vec::new();
    let (arities, conflicts) = fluent_arities(d);
    violations.extend(conflicts.into_iter().map(Violation::ArityConflict));
    for p in arities.keys() {
        if !d.frames.contains_key(&Pred::Named(p.clone())) {
            violations.push(Violation::Undeclared(p.clone()));
        }
    }
    for (p, status) in &d.frames {
        let forced = matches!(p, Pred::Nominal(_) | Pred::Top | Pred::Bot);
        if forced && *status == FrameStatus::NonFrame {
            let shown = super::Atom::<Term>::new(p.clone(), vec![]).to_string();
            violations.push(Violation::ForcedFrame(shown));
        }
    }
    let mut uses = Vec::new();
    let mut actions = Vec::new();
    for r in &d.laws {
        if let Err(e) = validate_rule(r) {
            violations.push(Violation::Malformed(e.to_string()));
        }
        note_rule(r, &mut uses, &mut actions);
    }
    let mut acts = Vec::new();
    for c in &d.constraints {
        c.actions(&mut acts);
    }
    for a in &acts {
        if let Action::Named { name, args } = a {
            actions.push((name.clone(), args.len()));
        }
    }
    for (name, n) in actions {
        let v = match d.actions.iter().find(|a| a.name == name) {
            None => Violation::UnknownAction(name),
            Some(decl) if decl.params.len() != n => Violation::ActionArity(name),
            Some(_) => continue,
        };
        if !violations.contains(&v) {
            violations.push(v);
        }
    }
    WellDefinedReport { violations }
}
