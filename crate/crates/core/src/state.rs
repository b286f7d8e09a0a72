//! Fock-space states: finite rational combinations of canonically ordered
//! monomials in creation modes, and the action of single modes on them.

use std::collections::BTreeMap;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_traits::{One, Zero};

use crate::rational::{int, rat, Rational};
use crate::space::{Gen, Grading, Mode, SpaceSpec};

/// Creation modes in canonical order. Bosonic modes may repeat, fermionic ones may not.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(Vec<Mode>);

impl Monomial {
    pub fn vacuum() -> Monomial {
        Monomial(Vec::new())
    }

    pub fn modes(&self) -> &[Mode] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_vacuum(&self) -> bool {
        self.0.is_empty()
    }

    /// Canonicalize the operator word `w_1 w_2 ... w_k |0>`.
    ///
    /// Returns `None` when a fermionic mode repeats, otherwise the sign of the
    /// fermionic reordering together with the sorted monomial.
    pub fn from_word(word: &[Mode]) -> Option<(i32, Monomial)> {
        let mut modes = word.to_vec();
        let mut sign = 1;
        // insertion sort; only fermion/fermion swaps flip the sign
        for i in 1..modes.len() {
            let mut j = i;
            while j > 0 && modes[j - 1] > modes[j] {
                if modes[j - 1].is_fermionic() && modes[j].is_fermionic() {
                    sign = -sign;
                }
                modes.swap(j - 1, j);
                j -= 1;
            }
        }
        let repeated = modes.windows(2).any(|w| w[0] == w[1] && w[0].is_fermionic());
        if repeated {
            None
        } else {
            Some((sign, Monomial(modes)))
        }
    }

    pub fn is_odd(&self) -> bool {
        self.fermion_count() % 2 == 1
    }

    pub fn fermion_count(&self) -> usize {
        self.0.iter().filter(|m| m.is_fermionic()).count()
    }

    /// Twice the weight under the given grading.
    pub fn weight2(&self, space: &SpaceSpec, grading: Grading) -> i32 {
        self.0.iter().map(|&m| space.mode_weight2(m, grading)).sum()
    }

    pub fn charge(&self, space: &SpaceSpec, grading: Grading) -> i32 {
        self.0.iter().map(|&m| space.mode_charge(m, grading)).sum()
    }

    /// Remove the factor at `pos`.
    fn without(&self, pos: usize) -> Monomial {
        let mut modes = self.0.clone();
        modes.remove(pos);
        Monomial(modes)
    }
}

/// A finite sparse combination of monomials with nonzero rational coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct State {
    terms: BTreeMap<Monomial, Rational>,
}

impl State {
    pub fn zero() -> State {
        State::default()
    }

    pub fn vacuum() -> State {
        State::from_monomial(Monomial::vacuum(), Rational::one())
    }

    pub fn from_monomial(m: Monomial, coeff: Rational) -> State {
        let mut s = State::zero();
        s.add_term(m, coeff);
        s
    }

    /// `coeff * w_1 ... w_k |0>` for an arbitrary ordering of creation modes.
    pub fn from_word(word: &[Mode], coeff: Rational) -> State {
        match Monomial::from_word(word) {
            Some((sign, m)) => State::from_monomial(m, coeff * int(sign as i64)),
            None => State::zero(),
        }
    }

    /// Convenience constructor from `(gen, n)` field-index pairs.
    pub fn word(word: &[(Gen, i32)]) -> State {
        let modes: Vec<Mode> = word.iter().map(|&(g, n)| Mode::new(g, n)).collect();
        State::from_word(&modes, Rational::one())
    }

    pub fn add_term(&mut self, m: Monomial, coeff: Rational) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += coeff;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &State, coeff: &Rational) {
        if coeff.is_zero() {
            return;
        }
        for (m, c) in &other.terms {
            self.add_term(m.clone(), c * coeff);
        }
    }

    pub fn scale(&self, coeff: &Rational) -> State {
        if coeff.is_zero() {
            return State::zero();
        }
        State { terms: self.terms.iter().map(|(m, c)| (m.clone(), c * coeff)).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    /// Largest weight of any term (twice), or `None` for the zero state.
    pub fn max_weight2(&self, space: &SpaceSpec, grading: Grading) -> Option<i32> {
        self.terms.keys().map(|m| m.weight2(space, grading)).max()
    }

    /// Split into the even and odd parts.
    pub fn parity_parts(&self) -> (State, State) {
        let mut even = State::zero();
        let mut odd = State::zero();
        for (m, c) in &self.terms {
            if m.is_odd() {
                odd.add_term(m.clone(), c.clone());
            } else {
                even.add_term(m.clone(), c.clone());
            }
        }
        (even, odd)
    }

    /// `Some(true)` if every term is odd, `Some(false)` if every term is even,
    /// `None` for mixed parity. The zero state counts as even.
    pub fn parity(&self) -> Option<bool> {
        let mut it = self.terms.keys().map(Monomial::is_odd);
        match it.next() {
            None => Some(false),
            Some(p) => it.all(|q| q == p).then_some(p),
        }
    }
}

impl AddAssign<&State> for State {
    fn add_assign(&mut self, rhs: &State) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
}

impl SubAssign<&State> for State {
    fn sub_assign(&mut self, rhs: &State) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), -c.clone());
        }
    }
}

impl Add for &State {
    type Output = State;
    fn add(self, rhs: &State) -> State {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub for &State {
    type Output = State;
    fn sub(self, rhs: &State) -> State {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Add for State {
    type Output = State;
    fn add(mut self, rhs: State) -> State {
        self += &rhs;
        self
    }
}

impl Sub for State {
    type Output = State;
    fn sub(mut self, rhs: State) -> State {
        self -= &rhs;
        self
    }
}

impl Neg for &State {
    type Output = State;
    fn neg(self) -> State {
        self.scale(&-Rational::one())
    }
}

impl Neg for State {
    type Output = State;
    fn neg(self) -> State {
        -&self
    }
}

impl Mul<&State> for &Rational {
    type Output = State;
    fn mul(self, rhs: &State) -> State {
        rhs.scale(self)
    }
}

impl Mul<State> for Rational {
    type Output = State;
    fn mul(self, rhs: State) -> State {
        rhs.scale(&self)
    }
}

/// Apply the single mode `gen_(n)` to a monomial.
pub fn apply_mode_monomial(space: &SpaceSpec, mode: Mode, m: &Monomial) -> State {
    let modes = m.modes();
    if mode.is_creation() {
        if mode.is_fermionic() {
            let pos = modes.partition_point(|x| *x < mode);
            if pos < modes.len() && modes[pos] == mode {
                return State::zero();
            }
            let sign = if modes[..pos].iter().filter(|x| x.is_fermionic()).count() % 2 == 0 {
                1
            } else {
                -1
            };
            let mut out = modes.to_vec();
            out.insert(pos, mode);
            return State::from_monomial(Monomial(out), int(sign));
        }
        let pos = modes.partition_point(|x| *x <= mode);
        let mut out = modes.to_vec();
        out.insert(pos, mode);
        return State::from_monomial(Monomial(out), Rational::one());
    }

    // annihilation: graded derivation contracting paired creation modes
    let mut result = State::zero();
    let mut fermions_before = 0usize;
    for (pos, &f) in modes.iter().enumerate() {
        let g = space.pairing(mode.gen, f.gen);
        if g != 0 && mode.is_fermionic() == f.is_fermionic() {
            if mode.is_fermionic() {
                if mode.n + f.n + 1 == 0 {
                    let sign = if fermions_before % 2 == 0 { 1 } else { -1 };
                    result.add_term(m.without(pos), int(sign * g));
                }
            } else if mode.n + f.n == 0 && mode.n != 0 {
                result.add_term(m.without(pos), int(g * mode.n as i64));
            }
        }
        if f.is_fermionic() {
            fermions_before += 1;
        }
    }
    result
}

/// Apply the single mode `gen_(n)` to a state.
pub fn apply_mode(space: &SpaceSpec, mode: Mode, state: &State) -> State {
    let mut out = State::zero();
    for (m, c) in state.terms() {
        out.add_scaled(&apply_mode_monomial(space, mode, m), c);
    }
    out
}

/// One simultaneous eigencomponent of a state.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedComponent {
    pub weight: Rational,
    pub charge: i32,
    pub component: State,
}

/// Decompose a state into `(weight, charge)` eigencomponents, sorted by weight then charge.
pub fn grading(space: &SpaceSpec, state: &State, which: Grading) -> Vec<GradedComponent> {
    let mut parts: BTreeMap<(i32, i32), State> = BTreeMap::new();
    for (m, c) in state.terms() {
        let key = (m.weight2(space, which), m.charge(space, which));
        parts.entry(key).or_default().add_term(m.clone(), c.clone());
    }
    parts
        .into_iter()
        .map(|((w2, q), component)| GradedComponent { weight: rat(w2 as i64, 2), charge: q, component })
        .collect()
}

/// `Some((weight2, charge))` if the state is homogeneous (the zero state is not).
pub fn homogeneous_degree(space: &SpaceSpec, state: &State, which: Grading) -> Option<(i32, i32)> {
    let mut degrees = state.terms().map(|(m, _)| (m.weight2(space, which), m.charge(space, which)));
    let first = degrees.next()?;
    degrees.all(|d| d == first).then_some(first)
}

/// All creation modes of the space whose weight under `grading` is at most `max_weight2`,
/// in canonical order.
pub fn creation_slots(space: &SpaceSpec, grading: Grading, max_weight2: i32) -> Vec<Mode> {
    let mut slots = Vec::new();
    for gen in space.generators() {
        let mut n = -1;
        loop {
            let mode = Mode::new(gen, n);
            if space.mode_weight2(mode, grading) > max_weight2 {
                break;
            }
            slots.push(mode);
            n -= 1;
        }
    }
    slots.sort();
    slots
}

/// Every basis monomial with weight at most `max_weight2` (twice the weight).
pub fn basis_up_to(space: &SpaceSpec, grading: Grading, max_weight2: i32) -> Vec<Monomial> {
    let slots = creation_slots(space, grading, max_weight2);
    let weights: Vec<i32> = slots.iter().map(|&m| space.mode_weight2(m, grading)).collect();
    let mut out = Vec::new();
    let mut current = Vec::new();
    enumerate_rec(&slots, &weights, 0, max_weight2, &mut current, &mut out);
    out.sort();
    out
}

fn enumerate_rec(
    slots: &[Mode],
    weights: &[i32],
    start: usize,
    budget: i32,
    current: &mut Vec<Mode>,
    out: &mut Vec<Monomial>,
) {
    if start == slots.len() {
        out.push(Monomial(current.clone()));
        return;
    }
    let mode = slots[start];
    let w = weights[start];
    let max_mult = if mode.is_fermionic() {
        1
    } else if w == 0 {
        0
    } else {
        budget / w
    };
    for k in 0..=max_mult {
        if k as i32 * w > budget {
            break;
        }
        for _ in 0..k {
            current.push(mode);
        }
        enumerate_rec(slots, weights, start + 1, budget - k as i32 * w, current, out);
        for _ in 0..k {
            current.pop();
        }
    }
}

/// Basis of the `(weight2, charge)` block.
pub fn basis_block(space: &SpaceSpec, grading: Grading, weight2: i32, charge: i32) -> Vec<Monomial> {
    basis_up_to(space, grading, weight2)
        .into_iter()
        .filter(|m| m.weight2(space, grading) == weight2 && m.charge(space, grading) == charge)
        .collect()
}

/// Apply a linear change of generators, `gen -> sum_k coeff_k gen'_k`, to every mode of a state.
/// Each generator maps to a combination of generators of the same statistics.
pub fn substitute_generators<F>(state: &State, map: F) -> State
where
    F: Fn(Gen) -> Vec<(Gen, Rational)>,
{
    let mut out = State::zero();
    for (m, c) in state.terms() {
        // expand the product of sums factor by factor, keeping operator order
        let mut words: Vec<(Vec<Mode>, Rational)> = vec![(Vec::new(), c.clone())];
        for &mode in m.modes() {
            let images = map(mode.gen);
            let mut next = Vec::with_capacity(words.len() * images.len());
            for (word, coeff) in &words {
                for (g, k) in &images {
                    let mut w = word.clone();
                    w.push(Mode::new(*g, mode.n));
                    next.push((w, coeff * k));
                }
            }
            words = next;
        }
        for (word, coeff) in words {
            out += &State::from_word(&word, coeff);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::{Letter, Sector};

    fn g(l: Letter, i: u32) -> Gen {
        Gen::new(l, i)
    }

    #[test]
    fn vacuum_is_killed_by_annihilators() {
        let s = SpaceSpec::polarized(2, Sector::R).unwrap();
        for gen in s.generators() {
            for n in 0..3 {
                assert!(apply_mode(&s, Mode::new(gen, n), &State::vacuum()).is_zero());
            }
        }
    }

    #[test]
    fn boson_contraction_carries_mode_factor() {
        let s = SpaceSpec::orthonormal(1).unwrap();
        let a1 = g(Letter::A, 1);
        let st = State::word(&[(a1, -1)]);
        assert_eq!(apply_mode(&s, Mode::new(a1, 1), &st), State::vacuum());
        assert!(apply_mode(&s, Mode::new(a1, 0), &st).is_zero());
        let st2 = State::word(&[(a1, -2), (a1, -2)]);
        let expect = State::word(&[(a1, -2)]).scale(&int(4));
        assert_eq!(apply_mode(&s, Mode::new(a1, 2), &st2), expect);
    }

    #[test]
    fn fermion_contraction_sign() {
        // phi1_(0) on phi1_(-1) psi1_(-1) |0>: contracts psi (the partner) past phi
        let s = SpaceSpec::polarized(1, Sector::NS).unwrap();
        let phi = g(Letter::Phi, 1);
        let psi = g(Letter::Psi, 1);
        let st = State::word(&[(phi, -1), (psi, -1)]);
        let out = apply_mode(&s, Mode::new(phi, 0), &st);
        assert_eq!(out, State::word(&[(phi, -1)]).scale(&int(-1)));
        let out = apply_mode(&s, Mode::new(psi, 0), &st);
        assert_eq!(out, State::word(&[(psi, -1)]));
    }

    #[test]
    fn ramond_zero_mode_convention() {
        let s = SpaceSpec::polarized(1, Sector::R).unwrap();
        let phi0 = s.mode_from_index(g(Letter::Phi, 1), &int(0)).unwrap();
        let psi0 = s.mode_from_index(g(Letter::Psi, 1), &int(0)).unwrap();
        assert!(phi0.is_creation());
        assert!(!psi0.is_creation());
        let st = apply_mode(&s, phi0, &State::vacuum());
        assert_eq!(apply_mode(&s, psi0, &st), State::vacuum());
    }

    #[test]
    fn grading_examples() {
        let r = SpaceSpec::polarized(2, Sector::R).unwrap();
        let b1 = State::word(&[(g(Letter::B, 1), -1)]);
        let gr = grading(&r, &b1, Grading::Untwisted);
        assert_eq!((gr[0].weight.clone(), gr[0].charge), (int(1), 0));
        let phi0 = State::word(&[(g(Letter::Phi, 1), -1)]);
        let gr = grading(&r, &phi0, Grading::Untwisted);
        assert_eq!((gr[0].weight.clone(), gr[0].charge), (rat(1, 2), -1));
        let psipsi = State::word(&[(g(Letter::Psi, 1), -1), (g(Letter::Psi, 2), -1)]);
        let gr = grading(&r, &psipsi, Grading::Untwisted);
        assert_eq!((gr[0].weight.clone(), gr[0].charge), (int(1), 2));
    }

    #[test]
    fn basis_counts_single_boson() {
        // partitions: 1, 1, 2, 3, 5
        let s = SpaceSpec::orthonormal(1).unwrap();
        let basis = basis_up_to(&s, Grading::Untwisted, 8);
        let bosonic: Vec<_> = basis.iter().filter(|m| m.fermion_count() == 0).collect();
        let mut counts = [0; 5];
        for m in bosonic {
            counts[(m.weight2(&s, Grading::Untwisted) / 2) as usize] += 1;
        }
        assert_eq!(counts, [1, 1, 2, 3, 5]);
    }
}
