//! Bounded temporal answer sets.
//!
//! Extensions are built state by state: the answer sets of the initial
//! stage, then for each action the answer sets of the next stage given the
//! previous state. Each finished trace is re-checked against the reduct of
//! the whole ground program ([`oracle`]) and against the constraints
//! ([`temporal`]).

pub mod oracle;
mod stage;
pub mod temporal;

use std::collections::HashMap;

use rayon::prelude::*;
use thiserror::Error;

use crate::encoder::TranslatedTheory;
use crate::theory::{BodyLit, Formula, GroundAction, GroundAtom, GroundLiteral, GroundRule, Head, Scope, State};
use stage::{Stage, StageRule};

pub use oracle::{is_temporal_answer_set, is_total, least_model, reduct, Inconsistency, TimedLit, TimedRule};
pub use temporal::{eval_formula, match_positions};

/// States `w_0 … w_h` and actions `a_1 … a_h`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Trace {
    pub states: Vec<State>,
    pub actions: Vec<GroundAction>,
}

impl Trace {
    pub fn horizon(&self) -> usize {
        self.actions.len()
    }

    pub fn last(&self) -> &State {
        self.states.last().expect("a trace has at least one state")
    }

    /// The trace cut after `k` actions.
    pub fn prefix(&self, k: usize) -> Trace {
        Trace {
            states: self.states[..=k].to_vec(),
            actions: self.actions[..k].to_vec(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("action `{0}` is not in the action alphabet")]
    UnknownAction(String),
}

/// Outcome of executing an action in a state.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Step {
    /// A precondition law blocks the action.
    NotExecutable,
    /// The successor states; empty when every candidate is inconsistent.
    Successors(Vec<State>),
}

/// A ground rule with each body literal assigned to the previous or the
/// current state.
#[derive(Clone, Debug)]
struct CompiledRule {
    head: Option<u32>,
    pos_prev: Vec<u32>,
    neg_prev: Vec<u32>,
    pos: Vec<u32>,
    neg: Vec<u32>,
}

impl CompiledRule {
    fn fires_on(&self, prev: &[bool]) -> bool {
        self.pos_prev.iter().all(|&p| prev[p as usize]) && self.neg_prev.iter().all(|&n| !prev[n as usize])
    }

    fn stage_rule(&self) -> StageRule {
        StageRule {
            head: self.head,
            pos: self.pos.clone(),
            neg: self.neg.clone(),
        }
    }
}

/// A translated theory compiled for the stage solver.
pub struct Solver {
    atoms: Vec<GroundAtom>,
    index: HashMap<GroundAtom, u32>,
    total: Vec<bool>,
    total_atoms: Vec<GroundAtom>,
    statics: Vec<CompiledRule>,
    initial: Vec<CompiledRule>,
    dynamic: Vec<CompiledRule>,
    effects: HashMap<GroundAction, Vec<CompiledRule>>,
    preconditions: HashMap<GroundAction, Vec<CompiledRule>>,
    laws: Vec<GroundRule>,
    actions: Vec<GroundAction>,
    constraints: Vec<Formula>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchOptions {
    pub horizon: usize,
    /// Only traces of length exactly `horizon`; otherwise every length up to
    /// it.
    pub exact_length: bool,
    /// A fixed action sequence; its length overrides `horizon`.
    pub actions: Option<Vec<GroundAction>>,
    pub weak_horizon: bool,
    /// Re-check every extension against the whole-trace reduct.
    pub verify: bool,
    pub max: Option<usize>,
}

impl SearchOptions {
    pub fn new(horizon: usize) -> Self {
        SearchOptions {
            horizon,
            exact_length: true,
            actions: None,
            weak_horizon: false,
            verify: true,
            max: None,
        }
    }

    pub fn along(actions: Vec<GroundAction>) -> Self {
        SearchOptions {
            horizon: actions.len(),
            actions: Some(actions),
            ..SearchOptions::new(0)
        }
    }
}

/// Extensions found, with counts of the ways partial traces failed.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SearchResult {
    pub extensions: Vec<Trace>,
    /// Steps refused by a precondition law.
    pub blocked: usize,
    /// Steps (or initial stages) without a consistent total answer set.
    pub dead_ends: usize,
    /// Complete traces violating a constraint.
    pub rejected: usize,
    /// Complete traces refused by the whole-trace check; always zero unless
    /// the stage solver is wrong.
    pub unverified: usize,
}

impl SearchResult {
    fn merge(&mut self, other: SearchResult) {
        self.extensions.extend(other.extensions);
        self.blocked += other.blocked;
        self.dead_ends += other.dead_ends;
        self.rejected += other.rejected;
        self.unverified += other.unverified;
    }
}

impl Solver {
    pub fn new(t: &TranslatedTheory) -> Solver {
        let mut s = Solver {
            atoms: Vec::new(),
            index: HashMap::new(),
            total: Vec::new(),
            total_atoms: Vec::new(),
            statics: Vec::new(),
            initial: Vec::new(),
            dynamic: Vec::new(),
            effects: HashMap::new(),
            preconditions: HashMap::new(),
            laws: t.rules().cloned().collect(),
            actions: t.actions.clone(),
            constraints: t.constraints.clone(),
        };
        for (a, _) in &t.simple_fluents {
            s.atom_id(a, true);
        }
        for a in &t.exists_atoms {
            s.atom_id(a, true);
        }
        for r in t.rules() {
            s.compile(r);
        }
        s.total_atoms = s
            .atoms
            .iter()
            .zip(&s.total)
            .filter(|(_, t)| **t)
            .map(|(a, _)| a.clone())
            .collect();
        s
    }

    fn atom_id(&mut self, a: &GroundAtom, total: bool) -> u32 {
        if let Some(&i) = self.index.get(a) {
            return i;
        }
        let i = self.atoms.len() as u32;
        self.atoms.push(a.clone());
        self.index.insert(a.clone(), i);
        self.total.push(total);
        i
    }

    fn lit_id(&mut self, l: &GroundLiteral) -> u32 {
        self.atom_id(&l.atom, false) * 2 + l.negated as u32
    }

    fn compile(&mut self, r: &GroundRule) {
        let mut c = CompiledRule {
            head: None,
            pos_prev: Vec::new(),
            neg_prev: Vec::new(),
            pos: Vec::new(),
            neg: Vec::new(),
        };
        // Simple body literals refer to the previous state exactly when the
        // head is temporal.
        let temporal = r.head.is_temporal();
        for (body, positive) in [(&r.pos, true), (&r.neg, false)] {
            for b in body {
                let id = self.lit_id(b.literal());
                let prev = temporal && matches!(b, BodyLit::Simple(_));
                let slot = match (prev, positive) {
                    (true, true) => &mut c.pos_prev,
                    (true, false) => &mut c.neg_prev,
                    (false, true) => &mut c.pos,
                    (false, false) => &mut c.neg,
                };
                slot.push(id);
            }
        }
        match &r.head {
            Head::Bot => {}
            Head::Lit(l) | Head::Next(l) | Head::After(_, l) => c.head = Some(self.lit_id(l)),
            Head::AfterBot(_) => {}
        }
        match (&r.head, r.scope) {
            (_, Scope::Initial) => self.initial.push(c),
            (Head::Bot | Head::Lit(_), Scope::Always) => self.statics.push(c),
            (Head::Next(_), _) => self.dynamic.push(c),
            (Head::After(a, _), _) => self.effects.entry(a.clone()).or_default().push(c),
            (Head::AfterBot(a), _) => self.preconditions.entry(a.clone()).or_default().push(c),
        }
    }

    pub fn actions(&self) -> &[GroundAction] {
        &self.actions
    }

    pub fn laws(&self) -> &[GroundRule] {
        &self.laws
    }

    /// The atoms every state of an extension decides.
    pub fn total_atoms(&self) -> &[GroundAtom] {
        &self.total_atoms
    }

    pub fn knows(&self, a: &GroundAtom) -> bool {
        self.index.contains_key(a)
    }

    fn to_state(&self, w: &[bool]) -> State {
        w.iter()
            .enumerate()
            .filter(|(_, b)| **b)
            .map(|(i, _)| GroundLiteral {
                atom: self.atoms[i / 2].clone(),
                negated: i % 2 == 1,
            })
            .collect()
    }

    fn from_state(&self, w: &State) -> Vec<bool> {
        let mut out = vec![false; self.atoms.len() * 2];
        for l in w {
            if let Some(&i) = self.index.get(&l.atom) {
                out[(i * 2 + l.negated as u32) as usize] = true;
            }
        }
        out
    }

    fn initial_internal(&self) -> Vec<Vec<bool>> {
        let rules = self.statics.iter().chain(&self.initial).map(CompiledRule::stage_rule).collect();
        Stage::new(rules, &self.total).solve()
    }

    fn step_internal(&self, prev: &[bool], a: &GroundAction) -> Option<Vec<Vec<bool>>> {
        if self
            .preconditions
            .get(a)
            .is_some_and(|pre| pre.iter().any(|r| r.fires_on(prev)))
        {
            return None;
        }
        let rules = self
            .statics
            .iter()
            .map(CompiledRule::stage_rule)
            .chain(
                self.effects
                    .get(a)
                    .into_iter()
                    .flatten()
                    .chain(&self.dynamic)
                    .filter(|r| r.fires_on(prev))
                    .map(CompiledRule::stage_rule),
            )
            .collect();
        Some(Stage::new(rules, &self.total).solve())
    }

    fn check_action(&self, a: &GroundAction) -> Result<(), SolveError> {
        if self.actions.contains(a) {
            Ok(())
        } else {
            Err(SolveError::UnknownAction(a.to_string()))
        }
    }

    /// All possible initial states, in sorted order.
    pub fn initial_states(&self) -> Vec<State> {
        let mut out: Vec<State> = self.initial_internal().iter().map(|w| self.to_state(w)).collect();
        out.sort();
        out
    }

    /// The states reachable from `w` by executing `a`, in sorted order.
    pub fn successors(&self, w: &State, a: &GroundAction) -> Result<Step, SolveError> {
        self.check_action(a)?;
        Ok(match self.step_internal(&self.from_state(w), a) {
            None => Step::NotExecutable,
            Some(next) => {
                let mut out: Vec<State> = next.iter().map(|v| self.to_state(v)).collect();
                out.sort();
                Step::Successors(out)
            }
        })
    }

    /// Whether a complete trace is an extension: constraints hold at the
    /// first state, and (with `verify`) the whole-trace reduct reproduces it.
    fn accept(&self, trace: &Trace, opts: &SearchOptions, res: &mut SearchResult) {
        if !self
            .constraints
            .iter()
            .all(|c| eval_formula(trace, 0, c, opts.weak_horizon))
        {
            res.rejected += 1;
            return;
        }
        if opts.verify && !(is_temporal_answer_set(&self.laws, trace) && is_total(trace, &self.total_atoms)) {
            res.unverified += 1;
            return;
        }
        res.extensions.push(trace.clone());
    }

    fn explore(
        &self,
        states: &mut Vec<Vec<bool>>,
        actions: &mut Vec<GroundAction>,
        horizon: usize,
        opts: &SearchOptions,
        res: &mut SearchResult,
    ) {
        let depth = actions.len();
        if depth == horizon || !opts.exact_length {
            let trace = Trace {
                states: states.iter().map(|w| self.to_state(w)).collect(),
                actions: actions.clone(),
            };
            self.accept(&trace, opts, res);
        }
        if depth == horizon {
            return;
        }
        let choices: Vec<&GroundAction> = match &opts.actions {
            Some(seq) => vec![&seq[depth]],
            None => self.actions.iter().collect(),
        };
        for a in choices {
            let prev = states.last().expect("non-empty");
            match self.step_internal(prev, a) {
                None => res.blocked += 1,
                Some(next) if next.is_empty() => res.dead_ends += 1,
                Some(next) => {
                    for w in next {
                        states.push(w);
                        actions.push(a.clone());
                        self.explore(states, actions, horizon, opts, res);
                        states.pop();
                        actions.pop();
                    }
                }
            }
        }
    }

    /// All extensions up to the horizon, sorted by action sequence and then
    /// by states. Branches from different initial states are explored in
    /// parallel.
    pub fn extensions(&self, opts: &SearchOptions) -> Result<SearchResult, SolveError> {
        let horizon = match &opts.actions {
            Some(seq) => {
                for a in seq {
                    self.check_action(a)?;
                }
                seq.len()
            }
            None => opts.horizon,
        };
        let inits = self.initial_internal();
        let mut res = SearchResult::default();
        if inits.is_empty() {
            res.dead_ends += 1;
            return Ok(res);
        }
        let parts: Vec<SearchResult> = inits
            .into_par_iter()
            .map(|w| {
                let mut r = SearchResult::default();
                self.explore(&mut vec![w], &mut Vec::new(), horizon, opts, &mut r);
                r
            })
            .collect();
        for p in parts {
            res.merge(p);
        }
        res.extensions.sort_by_cached_key(|t| {
            (
                t.actions.iter().map(ToString::to_string).collect::<Vec<_>>(),
                t.states.clone(),
            )
        });
        if let Some(m) = opts.max {
            res.extensions.truncate(m);
        }
        Ok(res)
    }
}
