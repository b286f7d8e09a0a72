mod common;

use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};
use scva_core::rational::{int, rat};
use scva_core::state::grading;
use scva_core::vertex::{
    commutator_check, nth_product, skew_symmetry_check, translate, translation_covariance_check,
};
use scva_core::{Grading, SpaceSpec, State};

const CASES: u32 = 100;

fn run<S: Strategy>(strategy: S, test: impl Fn(S::Value) -> Result<(), TestCaseError>) {
    let mut runner = TestRunner::new(Config { cases: CASES, failure_persistence: None, ..Config::default() });
    runner.run(&strategy, test).unwrap();
}

fn gradings(space: &SpaceSpec) -> Vec<Grading> {
    if space.is_polarized() {
        vec![Grading::Untwisted, Grading::A, Grading::B]
    } else {
        vec![Grading::Untwisted]
    }
}

#[test]
fn vacuum_axioms() {
    for space in common::spaces() {
        run(common::state(&space, 4), |a| {
            let vac = State::vacuum();
            prop_assert_eq!(nth_product(&space, &vac, &a, -1), a.clone());
            prop_assert_eq!(nth_product(&space, &a, &vac, -1), a.clone());
            prop_assert_eq!(nth_product(&space, &a, &vac, -2), translate(&space, &a));
            for n in 0..3 {
                prop_assert!(nth_product(&space, &vac, &a, n).is_zero());
                prop_assert!(nth_product(&space, &a, &vac, n).is_zero());
            }
            Ok(())
        });
    }
}

#[test]
fn translation_covariance() {
    for space in common::spaces() {
        run((common::state(&space, 3), common::state(&space, 3), -2i64..4), |(a, p, n)| {
            let r = translation_covariance_check(&space, &a, n, &p);
            prop_assert!(r.passed(), "{:?}", r.first_failure);
            Ok(())
        });
    }
}

#[test]
fn skew_symmetry() {
    for space in common::spaces() {
        run((common::state(&space, 3), common::state(&space, 3)), |(a, b)| {
            let r = skew_symmetry_check(&space, &a, &b, 2);
            prop_assert!(r.passed(), "{:?}", r.first_failure);
            Ok(())
        });
    }
}

#[test]
fn commutator_identity() {
    for space in common::spaces() {
        let strat = (common::state(&space, 3), common::state(&space, 3), common::state(&space, 2), -1i64..3, -1i64..3);
        run(strat, |(a, b, p, m, n)| {
            let r = commutator_check(&space, &a, &b, m, n, &p);
            prop_assert!(r.passed(), "{:?}", r.first_failure);
            Ok(())
        });
    }
}

#[test]
fn grading_additivity() {
    for space in common::spaces() {
        for g in gradings(&space) {
            run((common::monomial(&space, 4), common::monomial(&space, 4), -2i64..4), |(ma, mb, n)| {
                let (a, b) = (State::from_monomial(ma.clone(), int(1)), State::from_monomial(mb.clone(), int(1)));
                let product = nth_product(&space, &a, &b, n);
                let w2 = ma.weight2(&space, g) + mb.weight2(&space, g) - 2 * (n as i32 + 1);
                let q = ma.charge(&space, g) + mb.charge(&space, g);
                for c in grading(&space, &product, g) {
                    prop_assert_eq!(c.weight, rat(w2 as i64, 2));
                    prop_assert_eq!(c.charge, q);
                }
                Ok(())
            });
        }
    }
}
