#![allow(dead_code)]

use proptest::prelude::*;
use scva_core::rational::rat;
use scva_core::state::basis_up_to;
use scva_core::{Grading, Monomial, Sector, SpaceSpec, State};

pub fn spaces() -> Vec<SpaceSpec> {
    vec![
        SpaceSpec::orthonormal(1).unwrap(),
        SpaceSpec::orthonormal(2).unwrap(),
        SpaceSpec::polarized(1, Sector::NS).unwrap(),
        SpaceSpec::polarized(1, Sector::R).unwrap(),
        SpaceSpec::polarized(2, Sector::NS).unwrap(),
    ]
}

/// Nonvacuum basis monomials up to the given weight.
pub fn monomials(space: &SpaceSpec, max_weight2: i32) -> Vec<Monomial> {
    basis_up_to(space, Grading::Untwisted, max_weight2).into_iter().filter(|m| !m.is_vacuum()).collect()
}

pub fn monomial(space: &SpaceSpec, max_weight2: i32) -> impl Strategy<Value = Monomial> {
    prop::sample::select(monomials(space, max_weight2))
}

/// Sums of one to three basis monomials with small nonzero rational coefficients.
pub fn state(space: &SpaceSpec, max_weight2: i32) -> impl Strategy<Value = State> {
    let basis = monomials(space, max_weight2);
    prop::collection::vec((prop::sample::select(basis), -3i64..=3, 1i64..=2), 1..=3).prop_map(|terms| {
        let mut s = State::zero();
        for (m, num, den) in terms {
            let num = if num == 0 { 1 } else { num };
            s.add_term(m, rat(num, den));
        }
        if s.is_zero() {
            State::vacuum()
        } else {
            s
        }
    })
}
