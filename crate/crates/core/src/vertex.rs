//! State-field correspondence for the free fields.
//!
//! A monomial `u1_(-j1-1) ... uk_(-jk-1) |0>` corresponds to the field
//! `:d^(j1) u1(z) :d^(j2) u2(z) ... ::`, nested to the right, where `d^(j)` is
//! the divided derivative. Modes of such a field are expanded with
//!
//! ```text
//! :AB:_(n) = sum_{m<0} A_(m) B_(n-m-1) + (-1)^{|A||B|} sum_{m>=0} B_(n-m-1) A_(m)
//! (d^(j) u)_(n) = (-1)^j binom(n, j) u_(n-j)
//! ```
//!
//! Both sums are finite on any state because `X_(k) v = 0` once
//! `wt X + wt v - k - 1 < 0`.

use num_traits::{One, Zero};

use crate::rational::{binomial, factorial, int, Rational};
use crate::space::{Gen, Grading, Mode, SpaceSpec};
use crate::state::{apply_mode, Monomial, State};

/// One factor `d^(deriv) gen(z)` of a normally ordered product.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct FieldFactor {
    gen: Gen,
    deriv: u32,
}

fn factors_of(m: &Monomial) -> Vec<FieldFactor> {
    m.modes()
        .iter()
        .map(|mode| FieldFactor { gen: mode.gen, deriv: (-mode.n - 1) as u32 })
        .collect()
}

fn factor_weight2(space: &SpaceSpec, f: &FieldFactor) -> i32 {
    space.field_weight2(f.gen) + 2 * f.deriv as i32
}

/// `X_(n) v` where `X = :F_1 (F_2 (... F_k)):`.
fn apply_field(space: &SpaceSpec, factors: &[FieldFactor], n: i64, v: &State) -> State {
    if v.is_zero() {
        return State::zero();
    }
    match factors {
        [] => {
            if n == -1 {
                v.clone()
            } else {
                State::zero()
            }
        }
        [f] => {
            let coeff = binomial(n, f.deriv);
            if coeff.is_zero() {
                return State::zero();
            }
            let sign = if f.deriv % 2 == 0 { 1 } else { -1 };
            let mode = Mode::new(f.gen, (n - f.deriv as i64) as i32);
            let out = apply_mode(space, mode, v);
            out.scale(&(Rational::from_integer(coeff) * int(sign)))
        }
        [first, rest @ ..] => {
            let mut out = State::zero();
            let wa2 = factor_weight2(space, first);
            let wb2: i32 = rest.iter().map(|f| factor_weight2(space, f)).sum();
            let a_odd = first.gen.is_fermionic();
            let b_odd = rest.iter().filter(|f| f.gen.is_fermionic()).count() % 2 == 1;
            let sign = if a_odd && b_odd { -Rational::one() } else { Rational::one() };
            for (m, c) in v.terms() {
                let single = State::from_monomial(m.clone(), c.clone());
                let wv2 = m.weight2(space, Grading::Untwisted);
                // sum over m < 0: B_(n-m-1) v vanishes unless m >= n - floor(wB + wv)
                let lo = n - ((wb2 + wv2) as i64).div_euclid(2);
                for k in lo..0 {
                    let inner = apply_field(space, rest, n - k - 1, &single);
                    if !inner.is_zero() {
                        out += &apply_field(space, std::slice::from_ref(first), k, &inner);
                    }
                }
                // sum over m >= 0: A_(m) v vanishes once m > floor(wA + wv) - 1
                let hi = ((wa2 + wv2) as i64).div_euclid(2) - 1;
                for k in 0..=hi {
                    let inner = apply_field(space, std::slice::from_ref(first), k, &single);
                    if !inner.is_zero() {
                        out.add_scaled(&apply_field(space, rest, n - k - 1, &inner), &sign);
                    }
                }
            }
            out
        }
    }
}

/// The n-th product `a_(n) b`.
pub fn nth_product(space: &SpaceSpec, a: &State, b: &State, n: i64) -> State {
    let mut out = State::zero();
    for (ma, ca) in a.terms() {
        let factors = factors_of(ma);
        let r = apply_field(space, &factors, n, b);
        out.add_scaled(&r, ca);
    }
    out
}

/// `a_(-1) b`.
pub fn normally_ordered(space: &SpaceSpec, a: &State, b: &State) -> State {
    nth_product(space, a, b, -1)
}

/// Largest `n` for which `a_(n) b` can be nonzero, or `None` if either side is zero.
pub fn max_pole_index(space: &SpaceSpec, a: &State, b: &State) -> Option<i64> {
    let wa = a.max_weight2(space, Grading::Untwisted)?;
    let wb = b.max_weight2(space, Grading::Untwisted)?;
    Some(((wa + wb) as i64).div_euclid(2) - 1)
}

/// The translation operator `T a = a_(-2)|0>`, acting as the derivation
/// `u_(n) -> -n u_(n-1)` on creation modes.
pub fn translate(_space: &SpaceSpec, s: &State) -> State {
    let mut out = State::zero();
    for (m, c) in s.terms() {
        let modes = m.modes();
        for i in 0..modes.len() {
            let mut word = modes.to_vec();
            let k = -word[i].n;
            word[i].n -= 1;
            out += &State::from_word(&word, c * int(k as i64));
        }
    }
    out
}

/// Divided power `T^j / j!`.
pub fn translate_divided(space: &SpaceSpec, s: &State, j: u32) -> State {
    let mut out = s.clone();
    for _ in 0..j {
        out = translate(space, &out);
    }
    out.scale(&Rational::new(One::one(), factorial(j)))
}

/// The singular part of `Y(a,z) b`: entries `(pole order k, a_(k-1) b)`, highest pole first.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct OpeSingularPart {
    pub poles: Vec<(u32, State)>,
}

impl OpeSingularPart {
    /// Coefficient of `(z-w)^{-order}`; zero if absent.
    pub fn pole(&self, order: u32) -> State {
        self.poles
            .iter()
            .find(|(k, _)| *k == order)
            .map(|(_, s)| s.clone())
            .unwrap_or_default()
    }

    pub fn is_empty(&self) -> bool {
        self.poles.is_empty()
    }
}

pub fn ope_singular(space: &SpaceSpec, a: &State, b: &State) -> OpeSingularPart {
    let mut poles = Vec::new();
    if let Some(max_n) = max_pole_index(space, a, b) {
        for n in (0..=max_n).rev() {
            let s = nth_product(space, a, b, n);
            if !s.is_zero() {
                poles.push(((n + 1) as u32, s));
            }
        }
    }
    OpeSingularPart { poles }
}

/// First index where an identity failed, with both sides.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityFailure {
    pub index: String,
    pub lhs: State,
    pub rhs: State,
}

/// Outcome of a family of exact identities.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityReport {
    pub checked: usize,
    pub first_failure: Option<IdentityFailure>,
}

impl IdentityReport {
    pub fn passed(&self) -> bool {
        self.first_failure.is_none()
    }
}

/// Skew symmetry for parity-homogeneous parts of `a` and `b`:
/// `a_(n) b = (-1)^{|a||b|} sum_{j>=0} (-1)^{n+j+1} T^(j) (b_(n+j) a)`.
pub fn skew_symmetry_rhs(space: &SpaceSpec, a: &State, b: &State, n: i64) -> State {
    let (a_even, a_odd) = a.parity_parts();
    let (b_even, b_odd) = b.parity_parts();
    let mut out = State::zero();
    for (ap, a_is_odd) in [(&a_even, false), (&a_odd, true)] {
        for (bp, b_is_odd) in [(&b_even, false), (&b_odd, true)] {
            if ap.is_zero() || bp.is_zero() {
                continue;
            }
            let Some(max_n) = max_pole_index(space, bp, ap) else { continue };
            let swap_sign = if a_is_odd && b_is_odd { -1 } else { 1 };
            let mut j = 0i64;
            while n + j <= max_n {
                let inner = nth_product(space, bp, ap, n + j);
                if !inner.is_zero() {
                    let sign = if (n + j + 1).rem_euclid(2) == 0 { 1 } else { -1 };
                    let term = translate_divided(space, &inner, j as u32);
                    out.add_scaled(&term, &int(sign * swap_sign));
                }
                j += 1;
            }
        }
    }
    out
}

pub fn skew_symmetry_check(space: &SpaceSpec, a: &State, b: &State, max_n: i64) -> IdentityReport {
    let mut checked = 0;
    for n in -max_n..=max_n {
        let lhs = nth_product(space, a, b, n);
        let rhs = skew_symmetry_rhs(space, a, b, n);
        checked += 1;
        if lhs != rhs {
            return IdentityReport {
                checked,
                first_failure: Some(IdentityFailure { index: format!("n={n}"), lhs, rhs }),
            };
        }
    }
    IdentityReport { checked, first_failure: None }
}

/// Graded commutator `[a_(m), b_(n)] p` computed directly.
pub fn commutator_lhs(space: &SpaceSpec, a: &State, b: &State, m: i64, n: i64, probe: &State) -> State {
    let (a_even, a_odd) = a.parity_parts();
    let (b_even, b_odd) = b.parity_parts();
    let mut out = State::zero();
    for (ap, a_is_odd) in [(&a_even, false), (&a_odd, true)] {
        for (bp, b_is_odd) in [(&b_even, false), (&b_odd, true)] {
            if ap.is_zero() || bp.is_zero() {
                continue;
            }
            let ab = nth_product(space, ap, &nth_product(space, bp, probe, n), m);
            let ba = nth_product(space, bp, &nth_product(space, ap, probe, m), n);
            out += &ab;
            if a_is_odd && b_is_odd {
                out += &ba;
            } else {
                out -= &ba;
            }
        }
    }
    out
}

/// Borcherds commutator formula `sum_{j>=0} binom(m, j) (a_(j) b)_(m+n-j) p`.
pub fn commutator_rhs(space: &SpaceSpec, a: &State, b: &State, m: i64, n: i64, probe: &State) -> State {
    let mut out = State::zero();
    let Some(max_j) = max_pole_index(space, a, b) else { return out };
    for j in 0..=max_j.max(-1) {
        let coeff = binomial(m, j as u32);
        if coeff.is_zero() {
            continue;
        }
        let ajb = nth_product(space, a, b, j);
        if ajb.is_zero() {
            continue;
        }
        let term = nth_product(space, &ajb, probe, m + n - j);
        out.add_scaled(&term, &Rational::from_integer(coeff));
    }
    out
}

pub fn commutator_check(
    space: &SpaceSpec,
    a: &State,
    b: &State,
    m: i64,
    n: i64,
    probe: &State,
) -> IdentityReport {
    let lhs = commutator_lhs(space, a, b, m, n, probe);
    let rhs = commutator_rhs(space, a, b, m, n, probe);
    let first_failure =
        (lhs != rhs).then(|| IdentityFailure { index: format!("m={m},n={n}"), lhs, rhs });
    IdentityReport { checked: 1, first_failure }
}

/// Translation covariance `(T a)_(n) p = -n a_(n-1) p`.
pub fn translation_covariance_check(space: &SpaceSpec, a: &State, n: i64, probe: &State) -> IdentityReport {
    let lhs = nth_product(space, &translate(space, a), probe, n);
    let rhs = nth_product(space, a, probe, n - 1).scale(&int(-n));
    let first_failure = (lhs != rhs).then(|| IdentityFailure { index: format!("n={n}"), lhs, rhs });
    IdentityReport { checked: 1, first_failure }
}
