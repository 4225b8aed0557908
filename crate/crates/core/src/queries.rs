//! Executability and temporal projection over the extensions of a
//! translated theory, and a TBox diagnosis for single states.

use std::collections::BTreeSet;

use serde::Serialize;
use thiserror::Error;

use crate::el::Base;
use crate::name::Name;
use crate::normalizer::{NormalAxiom, Rhs};
use crate::solver::{SearchOptions, SearchResult, SolveError, Solver, Trace};
use crate::theory::{GroundAction, GroundLiteral, Pred, State};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Yes,
    No,
    NotExecutable,
}

impl Verdict {
    pub fn keyword(self) -> &'static str {
        match self {
            Verdict::Yes => "yes",
            Verdict::No => "no",
            Verdict::NotExecutable => "notExecutable",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QueryResult {
    pub verdict: Verdict,
    /// Extensions supporting a `yes` for executability; for projection, the
    /// extensions that were checked.
    pub witnesses: Vec<Trace>,
    /// For a projection answered `no`: an extension whose states miss the
    /// goal.
    pub countermodel: Option<Trace>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QueryError {
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error("goal literal `{0}` is not a fluent of the theory")]
    UnknownLiteral(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QueryOptions {
    pub max_witnesses: Option<usize>,
    pub weak_horizon: bool,
}

impl Default for QueryOptions {
    fn default() -> Self {
        QueryOptions {
            max_witnesses: Some(3),
            weak_horizon: false,
        }
    }
}

fn along(seq: &[GroundAction], opts: &QueryOptions) -> SearchOptions {
    SearchOptions {
        weak_horizon: opts.weak_horizon,
        ..SearchOptions::along(seq.to_vec())
    }
}

/// Without extensions, the sequence is `notExecutable` when some
/// precondition law refused a step and nothing else went wrong.
fn failure(res: &SearchResult) -> Verdict {
    if res.blocked > 0 && res.dead_ends == 0 && res.rejected == 0 && res.unverified == 0 {
        Verdict::NotExecutable
    } else {
        Verdict::No
    }
}

/// Whether some extension executes exactly `seq` from an initial state.
pub fn executability(solver: &Solver, seq: &[GroundAction], opts: &QueryOptions) -> Result<QueryResult, QueryError> {
    let res = solver.extensions(&along(seq, opts))?;
    let verdict = if res.extensions.is_empty() { failure(&res) } else { Verdict::Yes };
    let mut witnesses = res.extensions;
    if let Some(m) = opts.max_witnesses {
        witnesses.truncate(m);
    }
    Ok(QueryResult {
        verdict,
        witnesses,
        countermodel: None,
    })
}

/// Whether `goal` holds after every execution of `seq` (in every state
/// along the way, with `along`).
pub fn projection(
    solver: &Solver,
    seq: &[GroundAction],
    goal: &GroundLiteral,
    along_trace: bool,
    opts: &QueryOptions,
) -> Result<QueryResult, QueryError> {
    if !solver.knows(&goal.atom) {
        return Err(QueryError::UnknownLiteral(goal.to_string()));
    }
    let res = solver.extensions(&along(seq, opts))?;
    if res.extensions.is_empty() {
        return Ok(QueryResult {
            verdict: Verdict::NotExecutable,
            witnesses: Vec::new(),
            countermodel: None,
        });
    }
    let holds = |t: &Trace| {
        if along_trace {
            t.states.iter().all(|w| w.contains(goal))
        } else {
            t.last().contains(goal)
        }
    };
    let countermodel = res.extensions.iter().find(|t| !holds(t)).cloned();
    let mut witnesses = res.extensions;
    if let Some(m) = opts.max_witnesses {
        witnesses.truncate(m);
    }
    Ok(QueryResult {
        verdict: if countermodel.is_some() { Verdict::No } else { Verdict::Yes },
        witnesses,
        countermodel,
    })
}

/// A TBox constraint instance whose body holds in a state.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Diagnosis {
    /// Index of the axiom in the normalized TBox.
    pub index: usize,
    pub axiom: String,
    pub constant: Name,
    /// 1: `A ⊑ D`, 2: `A ⊓ B ⊑ D`, 3: `A ⊑ ∃r.B`, 4: `∃r.B ⊑ D`.
    pub template: u8,
}

fn has(w: &State, pred: Pred, x: &Name) -> bool {
    w.contains(&GroundLiteral::pos(crate::theory::Atom::new(pred, vec![x.clone()])))
}

fn base(w: &State, b: &Base, x: &Name) -> bool {
    has(w, Pred::from_base(b), x)
}

fn rhs(w: &State, d: &Rhs, x: &Name) -> bool {
    match d {
        Rhs::Base(b) => base(w, b, x),
        Rhs::Bot => false,
    }
}

/// Every TBox constraint instance over `domain` violated by `w`.
pub fn diagnose_state(w: &State, tbox: &[NormalAxiom], domain: &BTreeSet<Name>) -> Vec<Diagnosis> {
    let mut out = Vec::new();
    for (index, ax) in tbox.iter().enumerate() {
        for x in domain {
            let violated = match ax {
                NormalAxiom::Sub(a, d) => base(w, a, x) && !rhs(w, d, x),
                NormalAxiom::Conj(a, b, d) => base(w, a, x) && base(w, b, x) && !rhs(w, d, x),
                NormalAxiom::SubExists(a, r, b) => {
                    base(w, a, x) && !has(w, Pred::Exists(r.clone(), b.clone()), x)
                }
                NormalAxiom::ExistsSub(r, b, d) => {
                    has(w, Pred::Exists(r.clone(), b.clone()), x) && !rhs(w, d, x)
                }
            };
            if violated {
                out.push(Diagnosis {
                    index,
                    axiom: ax.to_string(),
                    constant: x.clone(),
                    template: ax.template(),
                });
            }
        }
    }
    out
}
