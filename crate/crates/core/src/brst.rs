//! BRST cohomology of the twisted free-field N=2 structure.
//!
//! `Q_0` is the zero mode `Q_(0)` of the twist's `Q` field. It preserves the
//! twisted weight and raises the twisted charge (the `J_0^top` eigenvalue) by
//! one, so the Fock space splits into finite blocks keyed by
//! `(twisted weight, twisted charge)` and cohomology is computed blockwise by
//! exact rank counts.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::rational::{rat, Rational};
use crate::report::{Report, Source};
use crate::space::SpaceSpec;
use crate::state::{basis_up_to, Monomial, State};
use crate::structures::{n2_structure, names, twist, Twist};
use crate::vertex::{nth_product, normally_ordered};

pub const DEFAULT_BASIS_BUDGET: usize = 20_000;
pub const BUDGET_ENV: &str = "SCVA_BASIS_BUDGET";

/// The basis budget from `SCVA_BASIS_BUDGET`, falling back to the default.
pub fn budget_from_env() -> usize {
    std::env::var(BUDGET_ENV).ok().and_then(|v| v.trim().parse().ok()).unwrap_or(DEFAULT_BASIS_BUDGET)
}

/// The `Q` vector of the given twist of the free-field N=2 structure.
pub fn brst_vector(space: &SpaceSpec, which: Twist) -> Result<State> {
    let top = twist(&n2_structure(space)?, which)?;
    Ok(top.get(names::Q)?.clone())
}

#[derive(Clone, Debug)]
pub struct TruncatedBlock {
    pub twist: Twist,
    /// Twice the twisted weight.
    pub weight2: i32,
    pub charge: i32,
    pub basis: Vec<Monomial>,
    /// Basis of the block `(weight2, charge + 1)`.
    pub target: Vec<Monomial>,
    /// `Q_0` from `basis` to `target`; column `k` is the image of `basis[k]`.
    pub matrix: Matrix,
}

impl TruncatedBlock {
    pub fn weight(&self) -> Rational {
        rat(self.weight2 as i64, 2)
    }
}

fn coordinates(state: &State, index: &BTreeMap<&Monomial, usize>, len: usize) -> Result<Vec<Rational>> {
    let mut v = vec![Rational::zero(); len];
    for (m, c) in state.terms() {
        let k = index
            .get(m)
            .ok_or_else(|| Error::Structure("Q_0 left its (weight, charge) block".into()))?;
        v[*k] = c.clone();
    }
    Ok(v)
}

fn grouped_basis(
    space: &SpaceSpec,
    which: Twist,
    max_weight2: i32,
    budget: usize,
) -> Result<BTreeMap<(i32, i32), Vec<Monomial>>> {
    let grading = which.grading();
    let all = basis_up_to(space, grading, max_weight2);
    let mut blocks: BTreeMap<(i32, i32), Vec<Monomial>> = BTreeMap::new();
    for m in all {
        let key = (m.weight2(space, grading), m.charge(space, grading));
        blocks.entry(key).or_default().push(m);
    }
    if let Some(big) = blocks.values().map(Vec::len).max() {
        if big > budget {
            return Err(Error::BudgetExceeded { size: big, budget });
        }
    }
    Ok(blocks)
}

fn weight_cutoff2(cutoff: &Rational) -> i32 {
    let twice = cutoff * Rational::from_integer(2.into());
    twice.floor().to_integer().try_into().unwrap_or(i32::MAX)
}

fn q0_matrix(space: &SpaceSpec, q: &State, basis: &[Monomial], target: &[Monomial]) -> Result<Matrix> {
    let index: BTreeMap<&Monomial, usize> = target.iter().enumerate().map(|(k, m)| (m, k)).collect();
    let mut mat = Matrix::zeros(target.len(), basis.len());
    for (col, m) in basis.iter().enumerate() {
        let image = nth_product(space, q, &State::from_monomial(m.clone(), Rational::one()), 0);
        let v = coordinates(&image, &index, target.len())?;
        for (row, x) in v.into_iter().enumerate() {
            if !x.is_zero() {
                mat.set(row, col, x);
            }
        }
    }
    Ok(mat)
}

/// Matrices of `Q_0` on every block of twisted weight at most `weight_cutoff`.
pub fn brst_blocks(
    space: &SpaceSpec,
    which: Twist,
    weight_cutoff: &Rational,
    budget: usize,
) -> Result<Vec<TruncatedBlock>> {
    let q = brst_vector(space, which)?;
    let blocks = grouped_basis(space, which, weight_cutoff2(weight_cutoff), budget)?;
    let mut out = Vec::new();
    for (&(w2, ch), basis) in &blocks {
        let target = blocks.get(&(w2, ch + 1)).cloned().unwrap_or_default();
        let matrix = q0_matrix(space, &q, basis, &target)?;
        out.push(TruncatedBlock { twist: which, weight2: w2, charge: ch, basis: basis.clone(), target, matrix });
    }
    Ok(out)
}

/// Whether consecutive block matrices compose to zero.
pub fn square_zero(blocks: &[TruncatedBlock]) -> bool {
    let by_key: BTreeMap<(i32, i32), &TruncatedBlock> = blocks.iter().map(|b| ((b.weight2, b.charge), b)).collect();
    blocks.iter().all(|b| match by_key.get(&(b.weight2, b.charge + 1)) {
        Some(next) if next.matrix.rows > 0 && b.matrix.cols > 0 => next.matrix.mul(&b.matrix).is_zero(),
        _ => true,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CohomologyEntry {
    pub block_dim: usize,
    /// Rank of `Q_0` out of this block.
    pub rank_out: usize,
    /// Rank of `Q_0` into this block.
    pub rank_in: usize,
    pub dim: usize,
}

#[derive(Clone, Debug)]
pub struct CohomologyTable {
    pub twist: Twist,
    pub weight_cutoff: Rational,
    pub entries: BTreeMap<(i32, i32), CohomologyEntry>,
}

impl CohomologyTable {
    /// Cohomology dimension at `(2 * weight, charge)`.
    pub fn dim(&self, weight2: i32, charge: i32) -> usize {
        self.entries.get(&(weight2, charge)).map_or(0, |e| e.dim)
    }

    pub fn total(&self) -> usize {
        self.entries.values().map(|e| e.dim).sum()
    }

    /// Nonzero entries as `((weight2, charge), dim)`.
    pub fn nonzero(&self) -> Vec<((i32, i32), usize)> {
        self.entries.iter().filter(|(_, e)| e.dim > 0).map(|(k, e)| (*k, e.dim)).collect()
    }

    /// Euler characteristic `sum (-1)^q dim C_{w,q}` per weight.
    pub fn euler_by_weight(&self) -> BTreeMap<i32, i64> {
        let mut out = BTreeMap::new();
        for (&(w, q), e) in &self.entries {
            let s = if q.rem_euclid(2) == 0 { 1 } else { -1 };
            *out.entry(w).or_insert(0) += s * e.block_dim as i64;
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        let rows: Vec<_> = self
            .entries
            .iter()
            .map(|(&(w2, q), e)| {
                serde_json::json!({
                    "weight": crate::rational::format_rational(&rat(w2 as i64, 2)),
                    "charge": q,
                    "block_dim": e.block_dim,
                    "rank_in": e.rank_in,
                    "rank_out": e.rank_out,
                    "cohomology": e.dim,
                })
            })
            .collect();
        serde_json::json!({
            "schema": crate::report::SCHEMA,
            "twist": format!("{:?}", self.twist),
            "weight_cutoff": crate::rational::format_rational(&self.weight_cutoff),
            "total": self.total(),
            "blocks": rows,
        })
    }
}

/// Exact cohomology dimensions per `(twisted weight, charge)` block.
pub fn cohomology_dims(space: &SpaceSpec, which: Twist, weight_cutoff: &Rational, budget: usize) -> Result<CohomologyTable> {
    let blocks = brst_blocks(space, which, weight_cutoff, budget)?;
    let rank_out: BTreeMap<(i32, i32), usize> =
        blocks.iter().map(|b| ((b.weight2, b.charge), b.matrix.rank())).collect();
    let mut entries = BTreeMap::new();
    for b in &blocks {
        let key = (b.weight2, b.charge);
        let out = rank_out[&key];
        let inn = rank_out.get(&(b.weight2, b.charge - 1)).copied().unwrap_or(0);
        let dim = b.basis.len() - out - inn;
        entries.insert(key, CohomologyEntry { block_dim: b.basis.len(), rank_out: out, rank_in: inn, dim });
    }
    Ok(CohomologyTable { twist: which, weight_cutoff: weight_cutoff.clone(), entries })
}

/// Tools for classes of a fixed block.
struct BlockCtx<'a> {
    space: &'a SpaceSpec,
    q: State,
    blocks: BTreeMap<(i32, i32), TruncatedBlock>,
}

impl<'a> BlockCtx<'a> {
    fn new(space: &'a SpaceSpec, which: Twist, cutoff: &Rational, budget: usize) -> Result<Self> {
        let q = brst_vector(space, which)?;
        let blocks = brst_blocks(space, which, cutoff, budget)?
            .into_iter()
            .map(|b| ((b.weight2, b.charge), b))
            .collect();
        Ok(BlockCtx { space, q, blocks })
    }

    fn is_closed(&self, s: &State) -> bool {
        nth_product(self.space, &self.q, s, 0).is_zero()
    }

    /// Whether a homogeneous state is `Q_0`-exact.
    fn is_exact(&self, s: &State, which: Twist) -> Result<bool> {
        if s.is_zero() {
            return Ok(true);
        }
        let g = which.grading();
        let (w2, ch) = crate::state::homogeneous_degree(self.space, s, g)
            .ok_or_else(|| Error::Structure("class representative is not homogeneous".into()))?;
        let Some(src) = self.blocks.get(&(w2, ch - 1)) else { return Ok(false) };
        let index: BTreeMap<&Monomial, usize> = src.target.iter().enumerate().map(|(k, m)| (m, k)).collect();
        let v = coordinates(s, &index, src.target.len())?;
        Ok(src.matrix.column_space_contains(&v))
    }
}

/// Checks that the normally ordered product on the weight-zero classes
/// `u^{j_1}_(-1) ... u^{j_k}_(-1)|0>` reproduces the exterior algebra, where
/// `u` is `psi` for the A twist and `phi` for the B twist.
pub fn cohomology_ring_check(space: &SpaceSpec, which: Twist, weight_cutoff: &Rational, budget: usize) -> Result<Report> {
    use crate::space::{Gen, Letter};
    let ctx = BlockCtx::new(space, which, weight_cutoff, budget)?;
    let letter = match which {
        Twist::A => Letter::Psi,
        Twist::B => Letter::Phi,
    };
    let r = space.rank();
    let mut report = Report::new(format!("brst ring ({which:?} twist)"), space.clone());
    let gens: Vec<State> = (1..=r).map(|i| State::word(&[(Gen::new(letter, i as u32), -1)])).collect();
    let mut classes: Vec<(Vec<usize>, State)> = vec![(vec![], State::vacuum())];
    for subset in 1..(1usize << r) {
        let idx: Vec<usize> = (0..r).filter(|k| subset >> k & 1 == 1).collect();
        let word: Vec<(Gen, i32)> = idx.iter().map(|&k| (Gen::new(letter, k as u32 + 1), -1)).collect();
        classes.push((idx, State::word(&word)));
    }
    for (idx, c) in &classes {
        let closed = ctx.is_closed(c);
        let exact = ctx.is_exact(c, which)?;
        report.check(
            format!("class{idx:?}.nontrivial"),
            None,
            Source::Derived,
            bool_state(closed && !exact),
            State::vacuum(),
        );
    }
    for (i, x) in gens.iter().enumerate() {
        for (k, y) in gens.iter().enumerate() {
            let prod = normally_ordered(space, x, y);
            let expected = if i == k {
                State::zero()
            } else {
                State::word(&[(Gen::new(letter, i as u32 + 1), -1), (Gen::new(letter, k as u32 + 1), -1)])
            };
            let diff = &prod - &expected;
            let ok = ctx.is_closed(&prod) && ctx.is_exact(&diff, which)?;
            report.check(format!("[{}]*[{}]", i + 1, k + 1), Some(-1), Source::Stated, prod.clone(), expected);
            report.check(format!("[{}]*[{}].class", i + 1, k + 1), None, Source::Derived, bool_state(ok), State::vacuum());
            let swapped = normally_ordered(space, y, x);
            let anti = &prod + &swapped;
            let ok = ctx.is_exact(&anti, which)?;
            report.check(format!("[{}]*[{}]+[{}]*[{}]", i + 1, k + 1, k + 1, i + 1), None, Source::Derived, bool_state(ok), State::vacuum());
        }
    }
    // Associativity of the full top product against the exterior monomial.
    if r >= 2 {
        let mut acc = State::vacuum();
        for gsv in gens.iter().rev() {
            acc = normally_ordered(space, gsv, &acc);
        }
        let top = classes.last().map(|(_, s)| s.clone()).unwrap_or_default();
        report.check("[1]*...*[r]", Some(-1), Source::Derived, acc, top);
    }
    Ok(report)
}

fn bool_state(b: bool) -> State {
    if b {
        State::vacuum()
    } else {
        State::zero()
    }
}

/// For every closed state in the blocks of charge `charge`, `T_(n+1) v` is
/// exact for `n` in `-1..=1`. Returns the number of kernel vectors tested and
/// the failures found.
pub fn virasoro_acts_trivially(
    space: &SpaceSpec,
    which: Twist,
    weight_cutoff: &Rational,
    budget: usize,
) -> Result<(usize, Vec<String>)> {
    let ctx = BlockCtx::new(space, which, weight_cutoff, budget)?;
    let top = twist(&n2_structure(space)?, which)?;
    let t = top.get(names::T_TOP)?.clone();
    let mut tested = 0;
    let mut failures = Vec::new();
    let cut2 = weight_cutoff2(weight_cutoff);
    for (key, b) in &ctx.blocks {
        for v in b.matrix.kernel() {
            let s = b.basis.iter().zip(&v).fold(State::zero(), |acc, (m, c)| {
                acc + State::from_monomial(m.clone(), c.clone())
            });
            tested += 1;
            for n in -1..=1i64 {
                let image = nth_product(space, &t, &s, n + 1);
                if image.is_zero() || key.0 - 2 * n as i32 > cut2 {
                    continue;
                }
                if !ctx.is_exact(&image, which)? {
                    failures.push(format!("T_{n} on a closed state at {key:?} is not exact"));
                }
            }
        }
    }
    Ok((tested, failures))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;
    use crate::space::Sector;

    #[test]
    fn ramond_weight_zero_blocks() {
        let s = SpaceSpec::polarized(1, Sector::R).unwrap();
        let blocks = brst_blocks(&s, Twist::A, &int(0), DEFAULT_BASIS_BUDGET).unwrap();
        assert_eq!(blocks.len(), 2);
        assert!(blocks.iter().all(|b| b.matrix.is_zero()));
    }

    #[test]
    fn ns_weight_one_differential_is_nonzero() {
        let s = SpaceSpec::polarized(1, Sector::NS).unwrap();
        let blocks = brst_blocks(&s, Twist::A, &int(1), DEFAULT_BASIS_BUDGET).unwrap();
        assert!(blocks.iter().any(|b| !b.matrix.is_zero()));
        assert!(square_zero(&blocks));
    }

    #[test]
    fn ramond_exterior_algebra() {
        let s = SpaceSpec::polarized(2, Sector::R).unwrap();
        for w in [Twist::A, Twist::B] {
            let t = cohomology_dims(&s, w, &int(2), DEFAULT_BASIS_BUDGET).unwrap();
            assert_eq!(t.nonzero(), vec![((0, 0), 1), ((0, 1), 2), ((0, 2), 1)]);
        }
    }

    #[test]
    fn budget_is_enforced() {
        let s = SpaceSpec::polarized(2, Sector::R).unwrap();
        let e = cohomology_dims(&s, Twist::A, &int(3), 5).unwrap_err();
        assert!(matches!(e, Error::BudgetExceeded { budget: 5, .. }));
    }
}
