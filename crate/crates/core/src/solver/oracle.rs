//! The temporal answer-set check straight from its definition: build the
//! reduct of the ground program with respect to a whole trace, compute its
//! least model over timed literals, and compare.
//!
//! Nothing here shares code with the stage solver; the two are compared
//! against each other in the test suites.

use std::collections::{BTreeSet, HashSet};

use thiserror::Error;

use super::Trace;
use crate::theory::{BodyLit, GroundAction, GroundLiteral, GroundRule, Head, Scope};

/// A literal at a position of the trace: `l ∈ w_k`.
pub type TimedLit = (usize, GroundLiteral);

/// A positive timed rule; `head == None` is `⊥`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TimedRule {
    pub head: Option<TimedLit>,
    pub body: Vec<TimedLit>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Inconsistency {
    #[error("⊥ is derived at position {0}")]
    Bottom(usize),
    #[error("complementary literals {1} and its negation are derived at position {0}")]
    Clash(usize, String),
}

enum Resolved {
    At(TimedLit),
    /// `[b]l` where `b` is not the next action: vacuously true.
    Vacuous,
}

fn resolve(b: &BodyLit<crate::name::Name>, k: usize, next: Option<&GroundAction>) -> Resolved {
    match b {
        BodyLit::Simple(l) => Resolved::At((k, l.clone())),
        BodyLit::Next(l) => Resolved::At((k + 1, l.clone())),
        BodyLit::After(a, l) => match next {
            Some(n) if n == a => Resolved::At((k + 1, l.clone())),
            _ => Resolved::Vacuous,
        },
    }
}

/// The reduct of `laws` with respect to the timed literals of `trace`.
///
/// Rules are instantiated at every position `k ≤ h`; initial-state rules
/// only at `k = 0`. Rules with temporal heads are not instantiated at the
/// horizon, and `[a]`-headed ones only where `a` is the next action.
pub fn reduct(laws: &[GroundRule], trace: &Trace) -> Vec<TimedRule> {
    let h = trace.horizon();
    let mut out = Vec::new();
    for k in 0..=h {
        let next = trace.actions.get(k);
        for r in laws {
            if r.scope == Scope::Initial && k > 0 {
                continue;
            }
            let head = match &r.head {
                Head::Bot => None,
                Head::Lit(l) => Some((k, l.clone())),
                Head::Next(l) if k < h => Some((k + 1, l.clone())),
                Head::After(a, l) if next == Some(a) => Some((k + 1, l.clone())),
                Head::AfterBot(a) if next == Some(a) => None,
                _ => continue,
            };
            let keep = r.neg.iter().all(|b| match resolve(b, k, next) {
                Resolved::At((j, l)) => !trace.states.get(j).is_some_and(|w| w.contains(&l)),
                Resolved::Vacuous => false,
            });
            if !keep {
                continue;
            }
            let body = r
                .pos
                .iter()
                .filter_map(|b| match resolve(b, k, next) {
                    Resolved::At(t) => Some(t),
                    Resolved::Vacuous => None,
                })
                .collect();
            out.push(TimedRule { head, body });
        }
    }
    out
}

/// The least set of timed literals closed under `rules`, by naive
/// iteration to a fixpoint.
pub fn least_model(rules: &[TimedRule]) -> Result<BTreeSet<TimedLit>, Inconsistency> {
    let mut model: HashSet<TimedLit> = HashSet::new();
    loop {
        let mut changed = false;
        for r in rules {
            if r.body.iter().all(|b| model.contains(b)) {
                match &r.head {
                    None => {
                        let at = r.body.iter().map(|(k, _)| *k).max().unwrap_or(0);
                        return Err(Inconsistency::Bottom(at));
                    }
                    Some(h) => {
                        if model.insert(h.clone()) {
                            changed = true;
                        }
                    }
                }
            }
        }
        if !changed {
            break;
        }
    }
    for (k, l) in &model {
        if !l.negated && model.contains(&(*k, l.complement())) {
            return Err(Inconsistency::Clash(*k, l.to_string()));
        }
    }
    Ok(model.into_iter().collect())
}

/// Whether the trace's timed literals are exactly the least model of the
/// reduct (which must be consistent). Totality is checked separately.
pub fn is_temporal_answer_set(laws: &[GroundRule], trace: &Trace) -> bool {
    let Ok(model) = least_model(&reduct(laws, trace)) else {
        return false;
    };
    let timed: BTreeSet<TimedLit> = trace
        .states
        .iter()
        .enumerate()
        .flat_map(|(k, w)| w.iter().map(move |l| (k, l.clone())))
        .collect();
    model == timed
}

/// Whether every state decides every atom of `atoms`.
pub fn is_total(trace: &Trace, atoms: &[crate::theory::GroundAtom]) -> bool {
    trace.states.iter().all(|w| {
        atoms.iter().all(|a| {
            let p = GroundLiteral::pos(a.clone());
            w.contains(&p) != w.contains(&p.complement())
        })
    })
}
