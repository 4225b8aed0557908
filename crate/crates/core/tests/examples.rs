//! The worked examples: teachers and courses, retirement with repair laws,
//! the Russian turkey, the hunter program and insurance claims.

mod common;

use common::*;
use eltas_core::el::{state_satisfies_tbox, Base};
use eltas_core::encoder::{EncodeOptions, Provenance};
use eltas_core::queries::{diagnose_state, executability, projection, QueryOptions, Verdict};
use eltas_core::solver::{SearchOptions, Solver, Step};
use eltas_core::theory::{Atom, GroundLiteral, Literal, Pred};
use eltas_core::Name;

fn teaches_course(x: &str, negated: bool) -> GroundLiteral {
    Literal {
        atom: Atom::new(Pred::Exists("teaches".into(), Base::Name("course".into())), vec![Name::from(x)]),
        negated,
    }
}

#[test]
fn assign_is_rejected_without_repair() {
    let t = encode(Some("ex1.kb"), "ex1.adl", &EncodeOptions::strict());
    let s = Solver::new(&t);
    let r = executability(&s, &acts("assign(cs1,john)"), &QueryOptions::default()).unwrap();
    assert_eq!(r.verdict, Verdict::No);

    // Without the TBox constraints the successor exists and is diagnosed.
    let relaxed = Solver::new(&t.without(&[Provenance::TBox]));
    let mut seen = 0;
    for w0 in relaxed.initial_states() {
        if !diagnose_state(&w0, &t.normalized.tbox, &t.universe).is_empty() {
            continue;
        }
        let Step::Successors(next) = relaxed.successors(&w0, &acts("assign(cs1,john)")[0]).unwrap() else {
            panic!("assign has no precondition")
        };
        for w in next {
            let diag = diagnose_state(&w, &t.normalized.tbox, &t.universe);
            assert_eq!(diag.len(), 1);
            assert_eq!(diag[0].axiom, "(teaches some course) sub teacher");
            assert_eq!(diag[0].constant, Name::from("john"));
            assert_eq!(diag[0].template, 4);
            seen += 1;
        }
    }
    assert!(seen > 0);
}

#[test]
fn assign_succeeds_with_causal_law_or_repair() {
    let causal = encode(Some("ex1.kb"), "ex1_causal.adl", &EncodeOptions::strict());
    let repair = encode(Some("ex1.kb"), "ex1.adl", &EncodeOptions::repair());
    for t in [causal, repair] {
        let s = Solver::new(&t);
        let opts = QueryOptions {
            max_witnesses: None,
            ..QueryOptions::default()
        };
        let r = executability(&s, &acts("assign(cs1,john)"), &opts).unwrap();
        assert_eq!(r.verdict, Verdict::Yes);
        for tr in &r.witnesses {
            assert!(tr.last().contains(&lit("teacher", &["john"], false)));
            assert!(tr.last().contains(&teaches_course("john", false)));
        }
    }
}

#[test]
fn retire_repairs_the_state() {
    let t = encode(Some("ex2.kb"), "ex2.adl", &EncodeOptions::repair());
    let s = Solver::new(&t);
    let inits = s.initial_states();
    assert_eq!(inits.len(), 1);
    let Step::Successors(next) = s.successors(&inits[0], &acts("retire(john)")[0]).unwrap() else {
        panic!("retire has no precondition")
    };
    assert_eq!(next.len(), 1);
    let w = &next[0];
    assert!(w.contains(&lit("teacher", &["john"], true)));
    assert!(w.contains(&lit("teaches", &["john", "cs1"], true)));
    assert!(w.contains(&teaches_course("john", true)));
    assert!(w.contains(&lit("course", &["cs1"], false)));
    let kb = t.normalized.to_kb();
    assert!(state_satisfies_tbox(w, &kb.tbox, &kb.declared, &t.universe).unwrap());
}

#[test]
fn retire_without_repair_is_rejected() {
    let t = encode(Some("ex2.kb"), "ex2.adl", &EncodeOptions::strict());
    let s = Solver::new(&t);
    let r = executability(&s, &acts("retire(john)"), &QueryOptions::default()).unwrap();
    assert_eq!(r.verdict, Verdict::No);
}

#[test]
fn spin_has_two_outcomes() {
    let t = encode(None, "turkey.adl", &EncodeOptions::strict());
    let s = Solver::new(&t);
    let res = s.extensions(&SearchOptions::along(acts("spin"))).unwrap();
    assert_eq!(res.extensions.len(), 2);
    let finals: Vec<bool> = res
        .extensions
        .iter()
        .map(|tr| tr.last().contains(&lit("loaded", &[], false)))
        .collect();
    assert!(finals.contains(&true) && finals.contains(&false));
}

#[test]
fn turkey_queries() {
    let t = encode(None, "turkey.adl", &EncodeOptions::strict());
    let s = Solver::new(&t);
    let opts = QueryOptions::default();
    let dead = lit("alive", &[], true);
    assert_eq!(projection(&s, &acts("load, shoot"), &dead, false, &opts).unwrap().verdict, Verdict::Yes);
    let r = projection(&s, &acts("spin, shoot"), &dead, false, &opts).unwrap();
    assert_eq!(r.verdict, Verdict::No);
    let cm = r.countermodel.unwrap();
    assert!(cm.states[1].contains(&lit("loaded", &[], true)));
    assert!(cm.last().contains(&lit("alive", &[], false)));

    let loaded = Solver::new(&encode(None, "turkey_loaded.adl", &EncodeOptions::strict()));
    assert_eq!(executability(&loaded, &acts("load"), &opts).unwrap().verdict, Verdict::NotExecutable);
}

#[test]
fn hunter_constraint_filters_runs() {
    let t = encode(None, "hunter.adl", &EncodeOptions::strict());
    let s = Solver::new(&t);
    let opts = QueryOptions::default();
    // Loading and shooting straight away is a run of the laws but not of
    // the program.
    assert_eq!(executability(&s, &acts("load, shoot"), &opts).unwrap().verdict, Verdict::No);
    let mut free = t.clone();
    free.constraints.clear();
    let unconstrained = Solver::new(&free);
    assert_eq!(executability(&unconstrained, &acts("load, shoot"), &opts).unwrap().verdict, Verdict::Yes);

    let r = executability(&s, &acts("(in_sight)?, load, shoot"), &opts).unwrap();
    assert_eq!(r.verdict, Verdict::Yes);
    let r = executability(&s, &acts("(-in_sight)?, wait, (in_sight)?, load, shoot"), &opts).unwrap();
    assert_eq!(r.verdict, Verdict::Yes);
    for tr in &r.witnesses {
        assert!(tr.states[0].contains(&lit("in_sight", &[], true)));
        assert!(tr.last().contains(&lit("alive", &[], true)));
    }
}

#[test]
fn approving_a_claim_clears_pending() {
    let t = encode(Some("insurance.kb"), "insurance.adl", &EncodeOptions::repair());
    let s = Solver::new(&t);
    let r = executability(&s, &acts("approve(c1)"), &QueryOptions::default()).unwrap();
    assert_eq!(r.verdict, Verdict::Yes);
    for tr in &r.witnesses {
        assert!(tr.last().contains(&lit("approved", &["c1"], false)));
        assert!(tr.last().contains(&lit("pending", &["c1"], true)));
    }
    let strict = Solver::new(&encode(Some("insurance.kb"), "insurance.adl", &EncodeOptions::strict()));
    let r = executability(&strict, &acts("approve(c1)"), &QueryOptions::default()).unwrap();
    assert_eq!(r.verdict, Verdict::No);
}
