//! The stage solver against brute-force enumeration of temporal answer
//! sets on every small fixture.

mod common;

use std::collections::BTreeSet;

use common::*;
use eltas_core::encoder::EncodeOptions;
use eltas_core::solver::{SearchOptions, Solver, Trace};

fn solver_extensions(s: &Solver, h: usize, weak: bool) -> BTreeSet<Trace> {
    let opts = SearchOptions {
        exact_length: false,
        weak_horizon: weak,
        ..SearchOptions::new(h)
    };
    let res = s.extensions(&opts).unwrap();
    assert_eq!(res.unverified, 0);
    res.extensions.into_iter().collect()
}

fn simple_fluents(kb: Option<&str>, adl: &str) -> usize {
    let t = encode(kb, adl, &EncodeOptions::strict());
    t.simple_fluents.iter().filter(|(a, _)| a.pred.is_simple()).count()
}

#[test]
fn small_fixtures_fit_the_enumerator() {
    for (kb, adl) in SMALL_FIXTURES {
        assert!(simple_fluents(*kb, adl) <= 8, "{adl}");
    }
}

#[test]
fn stage_solver_matches_enumeration() {
    for (kb, adl) in SMALL_FIXTURES {
        for opts in [EncodeOptions::strict(), EncodeOptions::repair()] {
            let t = encode(*kb, adl, &opts);
            let h = 3;
            let s = Solver::new(&t);
            for weak in [false, true] {
                let expected = exhaustive(&t, h, weak);
                assert!(!expected.is_empty(), "{adl}");
                let got = solver_extensions(&s, h, weak);
                assert_eq!(got, expected, "{adl} at horizon {h}");
            }
        }
    }
}

#[test]
fn prefixes_of_extensions_are_answer_sets() {
    let t = encode(None, "turkey.adl", &EncodeOptions::strict());
    let s = Solver::new(&t);
    let laws = s.laws().to_vec();
    for tr in solver_extensions(&s, 3, false) {
        for k in 0..=tr.horizon() {
            assert!(eltas_core::solver::is_temporal_answer_set(&laws, &tr.prefix(k)));
        }
    }
}
