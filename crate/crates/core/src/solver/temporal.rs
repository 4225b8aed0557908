//! Finite-trace evaluation of constraint formulas. Programs are compiled to
//! Thompson automata and run along the trace's action word.

use super::Trace;
use crate::theory::{Formula, GroundAction, Program};

enum Edge {
    Eps(usize),
    Act(GroundAction, usize),
    Any(usize),
}

/// An ε-NFA with one start and one accepting state.
pub struct Nfa {
    edges: Vec<Vec<Edge>>,
    start: usize,
    accept: usize,
    /// States from which the accepting state is reachable.
    live: Vec<bool>,
}

impl Nfa {
    pub fn new(p: &Program) -> Nfa {
        let mut edges = Vec::new();
        let (start, accept) = build(p, &mut edges);
        let mut nfa = Nfa {
            edges,
            start,
            accept,
            live: Vec::new(),
        };
        nfa.live = nfa.co_reachable();
        nfa
    }

    fn co_reachable(&self) -> Vec<bool> {
        let n = self.edges.len();
        let mut live = vec![false; n];
        live[self.accept] = true;
        let mut changed = true;
        while changed {
            changed = false;
            for s in 0..n {
                if !live[s] {
                    let reaches = self.edges[s].iter().any(|e| match e {
                        Edge::Eps(t) | Edge::Act(_, t) | Edge::Any(t) => live[*t],
                    });
                    if reaches {
                        live[s] = true;
                        changed = true;
                    }
                }
            }
        }
        live
    }

    fn closure(&self, set: &mut Vec<bool>) {
        let mut stack: Vec<usize> = (0..set.len()).filter(|s| set[*s]).collect();
        while let Some(s) = stack.pop() {
            for e in &self.edges[s] {
                if let Edge::Eps(t) = e {
                    if !set[*t] {
                        set[*t] = true;
                        stack.push(*t);
                    }
                }
            }
        }
    }

    fn initial(&self) -> Vec<bool> {
        let mut set = vec![false; self.edges.len()];
        set[self.start] = true;
        self.closure(&mut set);
        set
    }

    fn step(&self, set: &[bool], a: &GroundAction) -> Vec<bool> {
        let mut next = vec![false; self.edges.len()];
        for (s, on) in set.iter().enumerate() {
            if !on {
                continue;
            }
            for e in &self.edges[s] {
                match e {
                    Edge::Act(b, t) if b == a => next[*t] = true,
                    Edge::Any(t) => next[*t] = true,
                    _ => {}
                }
            }
        }
        self.closure(&mut next);
        next
    }

    fn accepts(&self, set: &[bool]) -> bool {
        set[self.accept]
    }

    fn is_live(&self, set: &[bool]) -> bool {
        set.iter().zip(&self.live).any(|(on, l)| *on && *l)
    }
}

fn fresh(edges: &mut Vec<Vec<Edge>>) -> usize {
    edges.push(Vec::new());
    edges.len() - 1
}

fn build(p: &Program, edges: &mut Vec<Vec<Edge>>) -> (usize, usize) {
    match p {
        Program::Atomic(a) => {
            let (s, t) = (fresh(edges), fresh(edges));
            edges[s].push(Edge::Act(a.clone(), t));
            (s, t)
        }
        Program::Any => {
            let (s, t) = (fresh(edges), fresh(edges));
            edges[s].push(Edge::Any(t));
            (s, t)
        }
        Program::Seq(a, b) => {
            let (s1, t1) = build(a, edges);
            let (s2, t2) = build(b, edges);
            edges[t1].push(Edge::Eps(s2));
            (s1, t2)
        }
        Program::Choice(a, b) => {
            let (s, t) = (fresh(edges), fresh(edges));
            let (s1, t1) = build(a, edges);
            let (s2, t2) = build(b, edges);
            edges[s].push(Edge::Eps(s1));
            edges[s].push(Edge::Eps(s2));
            edges[t1].push(Edge::Eps(t));
            edges[t2].push(Edge::Eps(t));
            (s, t)
        }
        Program::Star(a) => {
            let (s, t) = (fresh(edges), fresh(edges));
            let (s1, t1) = build(a, edges);
            edges[s].push(Edge::Eps(s1));
            edges[s].push(Edge::Eps(t));
            edges[t1].push(Edge::Eps(s1));
            edges[t1].push(Edge::Eps(t));
            (s, t)
        }
    }
}

/// All `j ≥ i` such that the actions `a_{i+1} … a_j` of the trace form a
/// word of `π`.
pub fn match_positions(trace: &Trace, i: usize, p: &Program) -> Vec<usize> {
    let nfa = Nfa::new(p);
    let (found, _) = run(&nfa, trace, i);
    found
}

/// Matching positions, and whether the automaton is still live after the
/// last action of the trace.
fn run(nfa: &Nfa, trace: &Trace, i: usize) -> (Vec<usize>, bool) {
    let mut set = nfa.initial();
    let mut found = Vec::new();
    let mut j = i;
    loop {
        if nfa.accepts(&set) {
            found.push(j);
        }
        if j == trace.horizon() || !set.iter().any(|s| *s) {
            break;
        }
        set = nfa.step(&set, &trace.actions[j]);
        j += 1;
    }
    let live = j == trace.horizon() && nfa.is_live(&set);
    (found, live)
}

/// Evaluates `f` at position `i` of the trace.
///
/// With `weak_horizon`, an `until` in positive position whose left operand
/// holds up to the horizon and whose program could still match beyond it is
/// satisfied; otherwise obligations past the horizon fail.
pub fn eval_formula(trace: &Trace, i: usize, f: &Formula, weak_horizon: bool) -> bool {
    eval(trace, i, &f.expand(), weak_horizon, true)
}

fn eval(trace: &Trace, i: usize, f: &Formula, weak: bool, positive: bool) -> bool {
    match f {
        Formula::True => true,
        Formula::False => false,
        Formula::Lit(l) => trace.states[i].contains(l),
        Formula::Not(a) => !eval(trace, i, a, weak, !positive),
        Formula::And(a, b) => eval(trace, i, a, weak, positive) && eval(trace, i, b, weak, positive),
        Formula::Or(a, b) => eval(trace, i, a, weak, positive) || eval(trace, i, b, weak, positive),
        Formula::Until(a, p, b) => {
            let nfa = Nfa::new(p);
            let (found, live) = run(&nfa, trace, i);
            let holds_until = |j: usize| (i..j).all(|k| eval(trace, k, a, weak, positive));
            if found.iter().any(|&j| eval(trace, j, b, weak, positive) && holds_until(j)) {
                return true;
            }
            weak && positive && live && holds_until(trace.horizon() + 1)
        }
        Formula::Diamond(..)
        | Formula::Box(..)
        | Formula::Next(_)
        | Formula::Eventually(_)
        | Formula::Always(_) => eval(trace, i, &f.expand(), weak, positive),
    }
}
