//! Non-parametric linear programming in equality form.
//!
//! The pipeline mirrors the usual exact-LP layering: a fast
//! floating-point simplex proposes a basis, exact rational reconstruction
//! checks it, and a fully exact simplex with Bland's rule is the
//! fallback when the float answer does not verify.
//!
//! All programs are `maximize c.x  s.t.  A x = b, x >= 0`.

use std::collections::BTreeMap;

use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::rat::{dot, gauss_solve, to_float, NumError, Rat, RatMat, RatVec};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LpError {
    #[error("basic column block is singular")]
    SingularBasis,
    #[error("pivot count exceeded the iteration cap")]
    IterationLimit,
    #[error("floating-point tableau lost rank")]
    Numerical,
    #[error("constraint matrix has rank {rank}, expected {rows}")]
    RankDeficient { rank: usize, rows: usize },
    #[error("equality system is inconsistent")]
    Inconsistent,
    #[error("dimension mismatch: {0}")]
    Dimension(String),
}

impl From<NumError> for LpError {
    fn from(e: NumError) -> Self {
        match e {
            NumError::SingularMatrix(_) => LpError::SingularBasis,
            NumError::DimensionMismatch(s) => LpError::Dimension(s),
        }
    }
}

/// `A x = b`, `x >= 0`, with `A` of full row rank (checked on
/// construction).
#[derive(Debug, Clone)]
pub struct StandardLP {
    a: RatMat,
    b: RatVec,
}

impl StandardLP {
    pub fn new(a: RatMat, b: RatVec) -> Result<Self, LpError> {
        let (m, n) = (a.nrows(), a.ncols());
        if b.len() != m {
            return Err(LpError::Dimension(format!(
                "rhs has length {}, expected {}",
                b.len(),
                m
            )));
        }
        if m > n {
            return Err(LpError::Dimension(format!(
                "{m} equality rows over {n} variables"
            )));
        }
        let rank = a.rank();
        if rank != m {
            return Err(LpError::RankDeficient { rank, rows: m });
        }
        Ok(StandardLP { a, b })
    }

    /// Like `new`, but first drops rows that are linear combinations of
    /// earlier ones. A dependent row with an inconsistent right-hand
    /// side makes the whole system infeasible and is reported as such.
    pub fn new_pruned(a: RatMat, b: RatVec) -> Result<Self, LpError> {
        let (m, n) = (a.nrows(), a.ncols());
        if b.len() != m {
            return Err(LpError::Dimension(format!(
                "rhs has length {}, expected {}",
                b.len(),
                m
            )));
        }
        // eliminate on the augmented matrix, remembering pivot rows
        let mut aug = RatMat::zeros(m, n + 1);
        for i in 0..m {
            for j in 0..n {
                aug.set(i, j, a.get(i, j).clone());
            }
            aug.set(i, n, b[i].clone());
        }
        let mut keep: Vec<usize> = Vec::new();
        let mut row_origin: Vec<usize> = (0..m).collect();
        let mut next = 0;
        for col in 0..n {
            if next == m {
                break;
            }
            let Some(p) = (next..m).find(|&i| !aug.get(i, col).is_zero()) else {
                continue;
            };
            for j in 0..=n {
                let tmp = aug.get(next, j).clone();
                aug.set(next, j, aug.get(p, j).clone());
                aug.set(p, j, tmp);
            }
            row_origin.swap(next, p);
            for i in (next + 1)..m {
                if aug.get(i, col).is_zero() {
                    continue;
                }
                let factor = aug.get(i, col) / aug.get(next, col);
                for j in col..=n {
                    let v = aug.get(i, j) - &factor * aug.get(next, j);
                    aug.set(i, j, v);
                }
            }
            keep.push(row_origin[next]);
            next += 1;
        }
        // any remaining nonzero rhs in a zeroed row means 0 = nonzero
        for i in next..m {
            if !aug.get(i, n).is_zero() {
                return Err(LpError::Inconsistent);
            }
        }
        keep.sort_unstable();
        let rows: Vec<RatVec> = keep.iter().map(|&i| a.row(i).to_vec()).collect();
        let rhs: RatVec = keep.iter().map(|&i| b[i].clone()).collect();
        StandardLP::new(RatMat::from_rows(rows), rhs)
    }

    /// Constructor for callers that guarantee full row rank
    /// structurally (e.g. every row carries its own slack column).
    pub(crate) fn new_unchecked(a: RatMat, b: RatVec) -> Self {
        debug_assert_eq!(b.len(), a.nrows());
        debug_assert!(a.nrows() <= a.ncols());
        debug_assert_eq!(a.rank(), a.nrows());
        StandardLP { a, b }
    }

    pub fn a(&self) -> &RatMat {
        &self.a
    }

    pub fn b(&self) -> &RatVec {
        &self.b
    }

    pub fn nrows(&self) -> usize {
        self.a.nrows()
    }

    pub fn ncols(&self) -> usize {
        self.a.ncols()
    }
}

/// Strictly increasing basic column indices; the identity key used for
/// deduplication and for exact reconstruction.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Basis {
    basic: Vec<usize>,
}

impl Basis {
    /// Builds a basis from column indices in any order; duplicates are
    /// rejected, the key is the sorted sequence.
    pub fn new(mut basic: Vec<usize>, lp: &StandardLP) -> Result<Self, LpError> {
        basic.sort_unstable();
        if basic.len() != lp.nrows() {
            return Err(LpError::Dimension(format!(
                "basis has {} columns, expected {}",
                basic.len(),
                lp.nrows()
            )));
        }
        if basic.windows(2).any(|w| w[0] == w[1]) {
            return Err(LpError::Dimension("duplicate basic column".into()));
        }
        if let Some(&last) = basic.last() {
            if last >= lp.ncols() {
                return Err(LpError::Dimension(format!(
                    "basic column {last} out of range"
                )));
            }
        }
        Ok(Basis { basic })
    }

    pub fn indices(&self) -> &[usize] {
        &self.basic
    }

    pub fn contains(&self, j: usize) -> bool {
        self.basic.binary_search(&j).is_ok()
    }

    pub fn nonbasic(&self, n: usize) -> Vec<usize> {
        (0..n).filter(|&j| !self.contains(j)).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal(Basis),
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExactOutcome {
    Optimal { basis: Basis, point: RatVec },
    Infeasible,
    Unbounded,
}

/// Reduced costs of the nonbasic variables plus the objective constant:
/// `c.x = constant + sum alpha_j x_j` on the affine space `A x = b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReducedCosts {
    pub alpha: BTreeMap<usize, Rat>,
    pub constant: Rat,
}

/// Reconstructs the exact basic point: nonbasic coordinates zero, basic
/// block solved against `b`.
pub fn exact_point(lp: &StandardLP, basis: &Basis) -> Result<RatVec, LpError> {
    let block = lp.a.select_cols(basis.indices());
    let xb = gauss_solve(&block, &lp.b).map_err(|_| LpError::SingularBasis)?;
    let mut x = vec![Rat::zero(); lp.ncols()];
    for (slot, &j) in basis.indices().iter().enumerate() {
        x[j] = xb[slot].clone();
    }
    Ok(x)
}

/// Dual values for the basis: solves `A_B^T y = c_B`.
fn dual_values(lp: &StandardLP, basis: &Basis, c: &[Rat]) -> Result<RatVec, LpError> {
    let block_t = lp.a.select_cols(basis.indices()).transpose();
    let cb: RatVec = basis.indices().iter().map(|&j| c[j].clone()).collect();
    gauss_solve(&block_t, &cb).map_err(|_| LpError::SingularBasis)
}

/// Rewrites the objective over the nonbasic variables.
pub fn exact_reduced_costs(
    lp: &StandardLP,
    basis: &Basis,
    c: &[Rat],
) -> Result<ReducedCosts, LpError> {
    if c.len() != lp.ncols() {
        return Err(LpError::Dimension(format!(
            "objective has length {}, expected {}",
            c.len(),
            lp.ncols()
        )));
    }
    let y = dual_values(lp, basis, c)?;
    let mut alpha = BTreeMap::new();
    for j in basis.nonbasic(lp.ncols()) {
        alpha.insert(j, &c[j] - dot(&y, &lp.a.col(j)));
    }
    Ok(ReducedCosts {
        alpha,
        constant: dot(&y, &lp.b),
    })
}

/// Exact optimality certificate: the basic point is feasible and every
/// reduced cost is nonpositive.
pub fn verify_optimal_basis(lp: &StandardLP, basis: &Basis, c: &[Rat]) -> Result<bool, LpError> {
    let x = exact_point(lp, basis)?;
    if x.iter().any(|v| v.is_negative()) {
        return Ok(false);
    }
    let rc = exact_reduced_costs(lp, basis, c)?;
    Ok(rc.alpha.values().all(|a| !a.is_positive()))
}

// ---------------------------------------------------------------------------
// floating-point simplex

const OPT_TOL: f64 = 1e-9;
const RATIO_TOL: f64 = 1e-10;
const FEAS_TOL: f64 = 1e-7;

struct FloatTableau {
    m: usize,
    width: usize, // n + m artificials + rhs
    rows: Vec<f64>,
    obj: Vec<f64>,
    basis: Vec<usize>,
    pivots: usize,
    cap: usize,
}

impl FloatTableau {
    fn at(&self, i: usize, j: usize) -> f64 {
        self.rows[i * self.width + j]
    }

    fn pivot(&mut self, row: usize, col: usize) -> Result<(), LpError> {
        self.pivots += 1;
        if self.pivots > self.cap {
            return Err(LpError::IterationLimit);
        }
        let w = self.width;
        let p = self.rows[row * w + col];
        for j in 0..w {
            self.rows[row * w + j] /= p;
        }
        for i in 0..self.m {
            if i == row {
                continue;
            }
            let f = self.rows[i * w + col];
            if f == 0.0 {
                continue;
            }
            for j in 0..w {
                self.rows[i * w + j] -= f * self.rows[row * w + j];
            }
        }
        let f = self.obj[col];
        if f != 0.0 {
            for j in 0..w {
                self.obj[j] -= f * self.rows[row * w + j];
            }
        }
        self.basis[row] = col;
        Ok(())
    }

    /// Dantzig entering column over `cols`, smallest-index tie break.
    fn entering(&self, cols: std::ops::Range<usize>) -> Option<usize> {
        let mut best: Option<(usize, f64)> = None;
        for j in cols {
            let a = self.obj[j];
            if a > OPT_TOL && best.map_or(true, |(_, ba)| a > ba) {
                best = Some((j, a));
            }
        }
        best.map(|(j, _)| j)
    }

    /// Ratio test; ties within tolerance resolved by smallest basic
    /// variable index. `None` means unbounded in this column.
    fn leaving(&self, col: usize) -> Option<usize> {
        let rhs = self.width - 1;
        let mut best: Option<(usize, f64)> = None;
        for i in 0..self.m {
            let a = self.at(i, col);
            if a <= OPT_TOL {
                continue;
            }
            let ratio = self.at(i, rhs) / a;
            match best {
                None => best = Some((i, ratio)),
                Some((bi, br)) => {
                    if ratio < br - RATIO_TOL
                        || ((ratio - br).abs() <= RATIO_TOL && self.basis[i] < self.basis[bi])
                    {
                        best = Some((i, ratio));
                    }
                }
            }
        }
        best.map(|(i, _)| i)
    }
}

/// Two-phase dense primal simplex on binary64. The returned basis is a
/// candidate only; callers are expected to verify it exactly and fall
/// back to `exact_simplex` when it does not check out.
pub fn float_simplex(lp: &StandardLP, c: &[f64]) -> Result<LpOutcome, LpError> {
    let cap = 50 * (lp.nrows() + lp.ncols());
    float_simplex_capped(lp, c, cap)
}

pub(crate) fn float_simplex_capped(
    lp: &StandardLP,
    c: &[f64],
    cap: usize,
) -> Result<LpOutcome, LpError> {
    let (m, n) = (lp.nrows(), lp.ncols());
    if c.len() != n {
        return Err(LpError::Dimension(format!(
            "objective has length {}, expected {n}",
            c.len()
        )));
    }
    let width = n + m + 1;
    let mut t = FloatTableau {
        m,
        width,
        rows: vec![0.0; m * width],
        obj: vec![0.0; width],
        basis: (n..n + m).collect(),
        pivots: 0,
        cap,
    };
    for i in 0..m {
        let flip = to_float(&lp.b[i]) < 0.0;
        for j in 0..n {
            let v = to_float(lp.a.get(i, j));
            t.rows[i * width + j] = if flip { -v } else { v };
        }
        t.rows[i * width + n + i] = 1.0;
        let b = to_float(&lp.b[i]).abs();
        t.rows[i * width + width - 1] = b;
    }
    // phase 1: maximize -sum(artificials); reduced costs of the real
    // columns are the column sums, the objective starts at -sum b.
    for j in 0..n {
        t.obj[j] = (0..m).map(|i| t.at(i, j)).sum();
    }
    t.obj[width - 1] = (0..m).map(|i| t.at(i, width - 1)).sum::<f64>();
    while let Some(e) = t.entering(0..n) {
        let Some(r) = t.leaving(e) else {
            // phase-1 objective is bounded by construction
            return Err(LpError::Numerical);
        };
        t.pivot(r, e)?;
    }
    if t.obj[width - 1] > FEAS_TOL {
        return Ok(LpOutcome::Infeasible);
    }
    // drive remaining artificials out of the basis
    for i in 0..m {
        if t.basis[i] < n {
            continue;
        }
        let Some(j) = (0..n).find(|&j| t.at(i, j).abs() > OPT_TOL && !t.basis.contains(&j)) else {
            return Err(LpError::Numerical);
        };
        t.pivot(i, j)?;
    }
    // phase 2: rebuild the reduced-cost row for the real objective
    t.obj = vec![0.0; width];
    for j in 0..n {
        t.obj[j] = c[j];
    }
    let mut value = 0.0;
    for i in 0..m {
        let cb = c[t.basis[i]];
        if cb == 0.0 {
            continue;
        }
        value += cb * t.at(i, width - 1);
        for j in 0..width {
            t.obj[j] -= cb * t.rows[i * width + j];
        }
    }
    t.obj[width - 1] = value;
    while let Some(e) = t.entering(0..n) {
        let Some(r) = t.leaving(e) else {
            return Ok(LpOutcome::Unbounded);
        };
        t.pivot(r, e)?;
    }
    let basis = Basis::new(t.basis.clone(), lp)?;
    Ok(LpOutcome::Optimal(basis))
}

// ---------------------------------------------------------------------------
// exact simplex

struct ExactTableau {
    m: usize,
    width: usize,
    rows: Vec<Rat>,
    obj: Vec<Rat>,
    basis: Vec<usize>,
}

impl ExactTableau {
    fn at(&self, i: usize, j: usize) -> &Rat {
        &self.rows[i * self.width + j]
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let w = self.width;
        let p = self.rows[row * w + col].clone();
        for j in 0..w {
            let v = &self.rows[row * w + j] / &p;
            self.rows[row * w + j] = v;
        }
        for i in 0..self.m {
            if i == row {
                continue;
            }
            let f = self.rows[i * w + col].clone();
            if f.is_zero() {
                continue;
            }
            for j in 0..w {
                let v = &self.rows[i * w + j] - &f * &self.rows[row * w + j];
                self.rows[i * w + j] = v;
            }
        }
        let f = self.obj[col].clone();
        if !f.is_zero() {
            for j in 0..w {
                let v = &self.obj[j] - &f * &self.rows[row * w + j];
                self.obj[j] = v;
            }
        }
        self.basis[row] = col;
    }

    /// Bland's rule: smallest column index with a positive reduced cost.
    fn entering(&self, limit: usize) -> Option<usize> {
        (0..limit).find(|&j| self.obj[j].is_positive())
    }

    /// Exact ratio test with smallest-basic-index tie break (Bland).
    fn leaving(&self, col: usize) -> Option<usize> {
        let rhs = self.width - 1;
        let mut best: Option<(usize, Rat)> = None;
        for i in 0..self.m {
            let a = self.at(i, col);
            if !a.is_positive() {
                continue;
            }
            let ratio = self.at(i, rhs) / a;
            let better = match &best {
                None => true,
                Some((bi, br)) => ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi]),
            };
            if better {
                best = Some((i, ratio));
            }
        }
        best.map(|(i, _)| i)
    }
}

/// Exact two-phase primal simplex with Bland's anti-cycling rule.
pub fn exact_simplex(lp: &StandardLP, c: &[Rat]) -> Result<ExactOutcome, LpError> {
    let (m, n) = (lp.nrows(), lp.ncols());
    if c.len() != n {
        return Err(LpError::Dimension(format!(
            "objective has length {}, expected {n}",
            c.len()
        )));
    }
    let width = n + m + 1;
    let mut t = ExactTableau {
        m,
        width,
        rows: vec![Rat::zero(); m * width],
        obj: vec![Rat::zero(); width],
        basis: (n..n + m).collect(),
    };
    for i in 0..m {
        let flip = lp.b[i].is_negative();
        for j in 0..n {
            let v = lp.a.get(i, j).clone();
            t.rows[i * width + j] = if flip { -v } else { v };
        }
        t.rows[i * width + n + i] = Rat::from_integer(1.into());
        t.rows[i * width + width - 1] = lp.b[i].abs();
    }
    for j in 0..n {
        t.obj[j] = (0..m).map(|i| t.at(i, j).clone()).sum();
    }
    t.obj[width - 1] = (0..m).map(|i| t.at(i, width - 1).clone()).sum();
    while let Some(e) = t.entering(n) {
        let Some(r) = t.leaving(e) else {
            unreachable!("phase-1 objective is bounded");
        };
        t.pivot(r, e);
    }
    if t.obj[width - 1].is_positive() {
        return Ok(ExactOutcome::Infeasible);
    }
    for i in 0..m {
        if t.basis[i] < n {
            continue;
        }
        // full row rank guarantees a nonzero entry among the real columns
        let j = (0..n)
            .find(|&j| !t.at(i, j).is_zero())
            .expect("rank(A) = m, artificial can always be driven out");
        t.pivot(i, j);
    }
    t.obj = vec![Rat::zero(); width];
    for j in 0..n {
        t.obj[j] = c[j].clone();
    }
    let mut value = Rat::zero();
    for i in 0..m {
        let cb = c[t.basis[i]].clone();
        if cb.is_zero() {
            continue;
        }
        value += &cb * t.at(i, width - 1);
        for j in 0..width {
            let v = &t.obj[j] - &cb * &t.rows[i * width + j];
            t.obj[j] = v;
        }
    }
    t.obj[width - 1] = value;
    while let Some(e) = t.entering(n) {
        let Some(r) = t.leaving(e) else {
            return Ok(ExactOutcome::Unbounded);
        };
        t.pivot(r, e);
    }
    let mut point = vec![Rat::zero(); n];
    for i in 0..m {
        point[t.basis[i]] = t.at(i, width - 1).clone();
    }
    let basis = Basis::new(t.basis.clone(), lp)?;
    Ok(ExactOutcome::Optimal { basis, point })
}

/// Objective value of an exact point.
pub fn objective_value(c: &[Rat], x: &[Rat]) -> Rat {
    dot(c, x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rat, rat_int};
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    /// The polygon system: x3 = 6 - 3x1 + x2, x4 = 6 + x1 - 3x2.
    pub(crate) fn polygon_lp() -> StandardLP {
        StandardLP::new(
            RatMat::from_i64(2, 4, &[3, -1, 1, 0, -1, 3, 0, 1]),
            vec![rat_int(6), rat_int(6)],
        )
        .unwrap()
    }

    fn basis(lp: &StandardLP, idx: &[usize]) -> Basis {
        Basis::new(idx.to_vec(), lp).unwrap()
    }

    #[test]
    fn construction_checks() {
        assert!(matches!(
            StandardLP::new(RatMat::from_i64(2, 2, &[1, 1, 2, 2]), vec![rat_int(1), rat_int(2)]),
            Err(LpError::RankDeficient { rank: 1, rows: 2 })
        ));
        assert!(StandardLP::new(
            RatMat::from_i64(3, 2, &[1, 0, 0, 1, 1, 1]),
            vec![rat_int(1); 3]
        )
        .is_err());
    }

    #[test]
    fn pruning_drops_dependent_rows() {
        let lp = StandardLP::new_pruned(
            RatMat::from_i64(3, 3, &[1, 0, 0, 0, 1, 0, 1, 1, 0]),
            vec![rat_int(1), rat_int(2), rat_int(3)],
        )
        .unwrap();
        assert_eq!(lp.nrows(), 2);
        assert!(matches!(
            StandardLP::new_pruned(
                RatMat::from_i64(2, 2, &[1, 1, 2, 2]),
                vec![rat_int(1), rat_int(3)]
            ),
            Err(LpError::Inconsistent)
        ));
    }

    #[test]
    fn exact_point_polygon() {
        let lp = polygon_lp();
        let x = exact_point(&lp, &basis(&lp, &[0, 1])).unwrap();
        assert_eq!(x, vec![rat_int(3), rat_int(3), rat_int(0), rat_int(0)]);
        let x = exact_point(&lp, &basis(&lp, &[2, 3])).unwrap();
        assert_eq!(x, vec![rat_int(0), rat_int(0), rat_int(6), rat_int(6)]);
    }

    #[test]
    fn exact_point_forced() {
        let lp = StandardLP::new(RatMat::from_i64(1, 1, &[1]), vec![rat_int(1)]).unwrap();
        assert_eq!(exact_point(&lp, &basis(&lp, &[0])).unwrap(), vec![rat_int(1)]);
    }

    #[test]
    fn exact_point_singular_basis() {
        let lp = StandardLP::new(
            RatMat::from_i64(2, 3, &[1, 1, 0, 1, 1, 1]),
            vec![rat_int(1), rat_int(2)],
        )
        .unwrap();
        assert_eq!(
            exact_point(&lp, &basis(&lp, &[0, 1])),
            Err(LpError::SingularBasis)
        );
    }

    #[test]
    fn reduced_costs_polygon() {
        let lp = polygon_lp();
        let b01 = basis(&lp, &[0, 1]);
        let c = vec![rat_int(1), rat_int(1), rat_int(0), rat_int(0)];
        let rc = exact_reduced_costs(&lp, &b01, &c).unwrap();
        assert_eq!(rc.alpha[&2], rat(-1, 2));
        assert_eq!(rc.alpha[&3], rat(-1, 2));
        assert_eq!(rc.constant, rat_int(6));

        let c = vec![rat_int(1), rat_int(0), rat_int(0), rat_int(0)];
        let rc = exact_reduced_costs(&lp, &b01, &c).unwrap();
        assert_eq!(rc.alpha[&2], rat(-3, 8));
        assert_eq!(rc.alpha[&3], rat(-1, 8));
        assert_eq!(rc.constant, rat_int(3));

        let zero = vec![rat_int(0); 4];
        let rc = exact_reduced_costs(&lp, &b01, &zero).unwrap();
        assert!(rc.alpha.values().all(|a| a.is_zero()));
        assert!(rc.constant.is_zero());
    }

    #[test]
    fn reduced_cost_identity_random_points() {
        // c.x = constant + sum alpha_j x_j for any x with A x = b
        let lp = polygon_lp();
        let b01 = basis(&lp, &[0, 1]);
        let c = vec![rat(2, 3), rat_int(-1), rat(1, 5), rat_int(4)];
        let rc = exact_reduced_costs(&lp, &b01, &c).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            // pick the nonbasic coordinates freely, solve for the basic ones
            let x2 = rat(rng.gen_range(-40i64..=40), rng.gen_range(1i64..=4));
            let x3 = rat(rng.gen_range(-40i64..=40), rng.gen_range(1i64..=4));
            let block = lp.a().select_cols(&[0, 1]);
            let rhs = vec![
                &lp.b()[0] - lp.a().get(0, 2) * &x2 - lp.a().get(0, 3) * &x3,
                &lp.b()[1] - lp.a().get(1, 2) * &x2 - lp.a().get(1, 3) * &x3,
            ];
            let xb = gauss_solve(&block, &rhs).unwrap();
            let x = vec![xb[0].clone(), xb[1].clone(), x2.clone(), x3.clone()];
            let direct = dot(&c, &x);
            let via = &rc.constant + &rc.alpha[&2] * &x2 + &rc.alpha[&3] * &x3;
            assert_eq!(direct, via);
        }
    }

    #[test]
    fn verify_optimal_polygon() {
        let lp = polygon_lp();
        let c = vec![rat_int(1), rat_int(1), rat_int(0), rat_int(0)];
        assert!(verify_optimal_basis(&lp, &basis(&lp, &[0, 1]), &c).unwrap());
        assert!(!verify_optimal_basis(&lp, &basis(&lp, &[2, 3]), &c).unwrap());
        let zero = vec![rat_int(0); 4];
        assert!(verify_optimal_basis(&lp, &basis(&lp, &[2, 3]), &zero).unwrap());
    }

    #[test]
    fn float_simplex_polygon() {
        let lp = polygon_lp();
        match float_simplex(&lp, &[1.0, 1.0, 0.0, 0.0]).unwrap() {
            LpOutcome::Optimal(b) => assert_eq!(b.indices(), &[0, 1]),
            other => panic!("expected optimal, got {other:?}"),
        }
    }

    #[test]
    fn float_simplex_zero_objective() {
        let lp = polygon_lp();
        match float_simplex(&lp, &[0.0; 4]).unwrap() {
            LpOutcome::Optimal(b) => {
                let zero = vec![rat_int(0); 4];
                assert!(verify_optimal_basis(&lp, &b, &zero).unwrap());
            }
            other => panic!("expected optimal, got {other:?}"),
        }
    }

    #[test]
    fn float_simplex_forced_point() {
        let lp = StandardLP::new(RatMat::from_i64(1, 1, &[1]), vec![rat_int(1)]).unwrap();
        match float_simplex(&lp, &[1.0]).unwrap() {
            LpOutcome::Optimal(b) => assert_eq!(b.indices(), &[0]),
            other => panic!("expected optimal, got {other:?}"),
        }
    }

    #[test]
    fn float_simplex_iteration_cap() {
        let lp = polygon_lp();
        assert_eq!(
            float_simplex_capped(&lp, &[1.0, 1.0, 0.0, 0.0], 0),
            Err(LpError::IterationLimit)
        );
    }

    #[test]
    fn exact_simplex_polygon() {
        let lp = polygon_lp();
        let c = vec![rat_int(1), rat_int(1), rat_int(0), rat_int(0)];
        match exact_simplex(&lp, &c).unwrap() {
            ExactOutcome::Optimal { basis: b, point } => {
                assert_eq!(b.indices(), &[0, 1]);
                assert_eq!(point, vec![rat_int(3), rat_int(3), rat_int(0), rat_int(0)]);
                assert_eq!(objective_value(&c, &point), rat_int(6));
                assert!(verify_optimal_basis(&lp, &b, &c).unwrap());
            }
            other => panic!("expected optimal, got {other:?}"),
        }
    }

    #[test]
    fn exact_simplex_infeasible() {
        let lp = StandardLP::new(RatMat::from_i64(1, 1, &[1]), vec![rat_int(-1)]).unwrap();
        assert_eq!(exact_simplex(&lp, &[rat_int(1)]).unwrap(), ExactOutcome::Infeasible);
    }

    #[test]
    fn exact_simplex_unbounded() {
        let lp = StandardLP::new(RatMat::from_i64(1, 2, &[1, -1]), vec![rat_int(0)]).unwrap();
        assert_eq!(
            exact_simplex(&lp, &[rat_int(1), rat_int(0)]).unwrap(),
            ExactOutcome::Unbounded
        );
    }

    /// Float-then-verify agrees with the exact simplex on random small
    /// feasible bounded instances.
    #[test]
    fn float_exact_agreement() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut checked = 0;
        'outer: while checked < 60 {
            let m = rng.gen_range(1usize..=4);
            let n = rng.gen_range(m.max(2)..=8);
            let entries: Vec<i64> = (0..m * n).map(|_| rng.gen_range(-5i64..=5)).collect();
            let a = RatMat::from_i64(m, n, &entries);
            if a.rank() != m {
                continue;
            }
            // build b from a random nonnegative point so the lp is feasible
            let x0: RatVec = (0..n).map(|_| rat_int(rng.gen_range(0i64..=5))).collect();
            let b = a.mul_vec(&x0);
            let lp = StandardLP::new(a, b).unwrap();
            let c: RatVec = (0..n).map(|_| rat_int(rng.gen_range(-5i64..=5))).collect();
            let exact = exact_simplex(&lp, &c).unwrap();
            let ExactOutcome::Optimal { point, .. } = &exact else {
                continue 'outer; // unbounded draws are not part of this property
            };
            let exact_value = objective_value(&c, point);
            let cf: Vec<f64> = c.iter().map(to_float).collect();
            match float_simplex(&lp, &cf) {
                Ok(LpOutcome::Optimal(fb)) => {
                    if verify_optimal_basis(&lp, &fb, &c).unwrap() {
                        let fx = exact_point(&lp, &fb).unwrap();
                        assert_eq!(objective_value(&c, &fx), exact_value);
                        checked += 1;
                    }
                }
                _ => continue 'outer,
            }
        }
    }

    /// Invariant of every optimal exact-simplex result: feasible point,
    /// exact equality, nonpositive reduced costs.
    #[test]
    fn exact_simplex_certificates() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let mut checked = 0;
        while checked < 40 {
            let m = rng.gen_range(1usize..=3);
            let n = rng.gen_range(m + 1..=6);
            let entries: Vec<i64> = (0..m * n).map(|_| rng.gen_range(-4i64..=4)).collect();
            let a = RatMat::from_i64(m, n, &entries);
            if a.rank() != m {
                continue;
            }
            let x0: RatVec = (0..n).map(|_| rat_int(rng.gen_range(0i64..=4))).collect();
            let b = a.mul_vec(&x0);
            let lp = StandardLP::new(a, b).unwrap();
            let c: RatVec = (0..n).map(|_| rat_int(rng.gen_range(-4i64..=4))).collect();
            if let ExactOutcome::Optimal { basis, point } = exact_simplex(&lp, &c).unwrap() {
                assert_eq!(lp.a().mul_vec(&point), *lp.b());
                assert!(point.iter().all(|v| !v.is_negative()));
                assert!(verify_optimal_basis(&lp, &basis, &c).unwrap());
                checked += 1;
            }
        }
    }
}
