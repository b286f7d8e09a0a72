//! Graded characters `G_{q,y}` by basis enumeration and by infinite products.
//!
//! A series stores integer coefficients keyed by `(2 * q-exponent, y-exponent)`.
//! The ground-state prefactor `q^{e0}` is carried separately and never folded
//! into the keys, so enumeration stays integral. Truncation keeps every term
//! with `q2 <= cutoff2`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::rational::{binomial, format_rational, rat, Rational};
use crate::space::{Grading, SpaceSpec};
use crate::state::basis_up_to;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QYSeries {
    pub terms: BTreeMap<(i32, i32), BigInt>,
    /// Twice the largest retained q-exponent.
    pub cutoff2: i32,
    /// Exponent of the overall `q^{e0}` prefactor.
    pub prefactor: Rational,
}

impl QYSeries {
    pub fn one(cutoff2: i32) -> QYSeries {
        let mut terms = BTreeMap::new();
        terms.insert((0, 0), BigInt::one());
        QYSeries { terms, cutoff2, prefactor: Rational::zero() }
    }

    pub fn coeff(&self, q2: i32, y: i32) -> BigInt {
        self.terms.get(&(q2, y)).cloned().unwrap_or_default()
    }

    fn add(&mut self, key: (i32, i32), c: BigInt) {
        if c.is_zero() || key.0 > self.cutoff2 {
            return;
        }
        let e = self.terms.entry(key).or_default();
        *e += c;
        if e.is_zero() {
            self.terms.remove(&key);
        }
    }

    /// Truncated product; the cutoff is the smaller of the two and the
    /// prefactors add.
    pub fn mul(&self, other: &QYSeries) -> QYSeries {
        let cutoff2 = self.cutoff2.min(other.cutoff2);
        let mut out = QYSeries { terms: BTreeMap::new(), cutoff2, prefactor: &self.prefactor + &other.prefactor };
        for (&(qa, ya), ca) in &self.terms {
            for (&(qb, yb), cb) in &other.terms {
                if qa + qb <= cutoff2 {
                    out.add((qa + qb, ya + yb), ca * cb);
                }
            }
        }
        out
    }

    /// Sets `y = 1`.
    pub fn at_y1(&self) -> QYSeries {
        let mut out = QYSeries { terms: BTreeMap::new(), cutoff2: self.cutoff2, prefactor: self.prefactor.clone() };
        for (&(q2, _), c) in &self.terms {
            out.add((q2, 0), c.clone());
        }
        out
    }

    /// Substitutes `y -> 1/y`.
    pub fn invert_y(&self) -> QYSeries {
        QYSeries {
            terms: self.terms.iter().map(|(&(q, y), c)| ((q, -y), c.clone())).collect(),
            cutoff2: self.cutoff2,
            prefactor: self.prefactor.clone(),
        }
    }

    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = self
            .terms
            .iter()
            .map(|(&(q2, y), c)| json!({ "q2": q2, "y": y, "coeff": c.to_string() }))
            .collect();
        json!({
            "schema": crate::report::SCHEMA,
            "prefactor": format_rational(&self.prefactor),
            "prefactor_num": self.prefactor.numer().to_string(),
            "prefactor_den": self.prefactor.denom().to_string(),
            "cutoff": format_rational(&rat(self.cutoff2 as i64, 2)),
            "terms": terms,
        })
    }

    /// One line per q-power: `q^{h}: c y^k + ...`.
    pub fn to_table(&self) -> String {
        let mut by_q: BTreeMap<i32, Vec<(i32, &BigInt)>> = BTreeMap::new();
        for (&(q2, y), c) in &self.terms {
            by_q.entry(q2).or_default().push((y, c));
        }
        let mut out = format!("prefactor q^({})\n", format_rational(&self.prefactor));
        let width = by_q.keys().map(|&q2| format_rational(&rat(q2 as i64, 2)).len()).max().unwrap_or(1);
        for (q2, ys) in by_q {
            let parts: Vec<String> = ys
                .iter()
                .map(|(y, c)| match y {
                    0 => c.to_string(),
                    _ => format!("{c} y^{y}"),
                })
                .collect();
            out.push_str(&format!("q^{:<width$} : {}\n", format_rational(&rat(q2 as i64, 2)), parts.join(" + ")));
        }
        out
    }
}

impl fmt::Display for QYSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_table())
    }
}

/// Counts the monomial basis by `(weight, charge)` under `grading`.
///
/// With `signed_fermions` each monomial contributes `(-1)^{#fermions}`.
pub fn enumerate_character(
    space: &SpaceSpec,
    grading: Grading,
    cutoff: &Rational,
    signed_fermions: bool,
    budget: usize,
) -> Result<QYSeries> {
    let cutoff2 = cutoff2_of(cutoff);
    let basis = basis_up_to(space, grading, cutoff2);
    if basis.len() > budget {
        return Err(Error::BudgetExceeded { size: basis.len(), budget });
    }
    let mut s = QYSeries { terms: BTreeMap::new(), cutoff2, prefactor: space.ground_energy() };
    for m in &basis {
        let sign = if signed_fermions && m.fermion_count() % 2 == 1 { -1 } else { 1 };
        s.add((m.weight2(space, grading), m.charge(space, grading)), BigInt::from(sign));
    }
    Ok(s)
}

fn cutoff2_of(cutoff: &Rational) -> i32 {
    (cutoff * rat(2, 1)).floor().to_integer().try_into().unwrap_or(i32::MAX)
}

/// `prod_{n >= 1} F_t(V)` for `t = (+-) y^y_exp q^{(q2_start + 2(n-1))/2}`,
/// with `F` the exterior (`Lambda_t`) or symmetric (`S_t`) power series of a
/// rank-`rank` space.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ProductFactor {
    pub exterior: bool,
    pub rank: usize,
    pub y_exp: i32,
    pub q2_start: i32,
    pub negative: bool,
}

impl ProductFactor {
    pub fn lambda(rank: usize, y_exp: i32, q2_start: i32) -> Self {
        ProductFactor { exterior: true, rank, y_exp, q2_start, negative: false }
    }

    pub fn sym(rank: usize, q2_start: i32) -> Self {
        ProductFactor { exterior: false, rank, y_exp: 0, q2_start, negative: false }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Formula {
    /// Orthonormal NS space: `S_{q^n}(T) Lambda_{q^{n-1/2}}(T)`.
    Riemannian,
    N2,
    ATwist,
    BTwist,
}

impl std::str::FromStr for Formula {
    type Err = Error;
    fn from_str(s: &str) -> Result<Formula> {
        match s {
            "riemannian" => Ok(Formula::Riemannian),
            "n2" => Ok(Formula::N2),
            "a_twist" | "A" => Ok(Formula::ATwist),
            "b_twist" | "B" => Ok(Formula::BTwist),
            other => Err(Error::Series(format!("unknown product formula {other:?}"))),
        }
    }
}

/// Factor list of a displayed product. `dims` is `(dim T', dim T'')`; the
/// riemannian formula reads `dim T` from the first entry.
pub fn formula_factors(formula: Formula, dims: (usize, usize), signed_fermions: bool) -> Vec<ProductFactor> {
    let (dp, dpp) = dims;
    let mut f = match formula {
        Formula::Riemannian => vec![ProductFactor::sym(dp, 2), ProductFactor::lambda(dp, 0, 1)],
        Formula::N2 => vec![
            ProductFactor::lambda(dp, -1, 1),
            ProductFactor::lambda(dpp, 1, 1),
            ProductFactor::sym(dp + dpp, 2),
        ],
        Formula::ATwist => vec![
            ProductFactor::lambda(dp, -1, 2),
            ProductFactor::lambda(dpp, 1, 0),
            ProductFactor::sym(dp + dpp, 2),
        ],
        Formula::BTwist => vec![
            ProductFactor::lambda(dp, 1, 0),
            ProductFactor::lambda(dpp, -1, 2),
            ProductFactor::sym(dp + dpp, 2),
        ],
    };
    for x in f.iter_mut().filter(|x| x.exterior) {
        x.negative = signed_fermions;
    }
    f
}

fn single_factor(f: &ProductFactor, q2: i32, cutoff2: i32) -> QYSeries {
    let mut s = QYSeries::one(cutoff2);
    if f.rank == 0 {
        return s;
    }
    let r = f.rank as i64;
    let mut k: u32 = 1;
    loop {
        let q = q2 * k as i32;
        if q > cutoff2 || (f.exterior && k as i64 > r) {
            break;
        }
        let mut c = if f.exterior { binomial(r, k) } else { binomial(r + k as i64 - 1, k) };
        if f.negative && k % 2 == 1 {
            c = -c;
        }
        s.add((q, f.y_exp * k as i32), c);
        if q2 == 0 && !f.exterior {
            break;
        }
        k += 1;
    }
    s
}

/// Expands a product of factors up to `cutoff`.
pub fn expand_product(factors: &[ProductFactor], prefactor: Rational, cutoff: &Rational) -> Result<QYSeries> {
    let cutoff2 = cutoff2_of(cutoff);
    let mut acc = QYSeries::one(cutoff2);
    for f in factors {
        if f.q2_start <= 0 && !f.exterior {
            return Err(Error::Series("symmetric factor with non-positive q-exponent diverges".into()));
        }
        let mut q2 = f.q2_start;
        loop {
            if q2 > cutoff2 {
                break;
            }
            acc = acc.mul(&single_factor(f, q2, cutoff2));
            q2 += 2;
        }
    }
    acc.prefactor = prefactor;
    Ok(acc)
}

/// The displayed product for the given formula with prefactor `-dim T / 16`.
pub fn product_character(formula: Formula, dims: (usize, usize), cutoff: &Rational, signed_fermions: bool) -> Result<QYSeries> {
    let dim = match formula {
        Formula::Riemannian => dims.0,
        _ => dims.0 + dims.1,
    };
    expand_product(&formula_factors(formula, dims, signed_fermions), rat(-(dim as i64), 16), cutoff)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesComparison {
    pub equal: bool,
    /// Lowest `(q2, y)` where the coefficients differ, with both values.
    pub first_mismatch: Option<((i32, i32), BigInt, BigInt)>,
    pub compared: usize,
    pub prefactors_equal: bool,
}

/// Coefficientwise comparison; the cutoffs must agree.
pub fn compare_characters(lhs: &QYSeries, rhs: &QYSeries) -> Result<SeriesComparison> {
    if lhs.cutoff2 != rhs.cutoff2 {
        return Err(Error::Series(format!(
            "cutoffs differ: {} vs {}",
            format_rational(&rat(lhs.cutoff2 as i64, 2)),
            format_rational(&rat(rhs.cutoff2 as i64, 2))
        )));
    }
    let keys: std::collections::BTreeSet<(i32, i32)> = lhs.terms.keys().chain(rhs.terms.keys()).copied().collect();
    let first_mismatch = keys
        .iter()
        .map(|&k| (k, lhs.coeff(k.0, k.1), rhs.coeff(k.0, k.1)))
        .find(|(_, a, b)| a != b);
    let prefactors_equal = lhs.prefactor == rhs.prefactor;
    Ok(SeriesComparison {
        equal: first_mismatch.is_none() && prefactors_equal,
        first_mismatch,
        compared: keys.len(),
        prefactors_equal,
    })
}
