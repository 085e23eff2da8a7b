//! Exact LP over free (sign-unrestricted) variables with `<=` and `=`
//! rows. Thin bridge onto the equality-form exact simplex: variables are
//! split into positive and negative parts and every `<=` row gets a
//! slack.
//!
//! This is internal machinery for redundancy elimination, facet interior
//! points, Chebyshev centers and inclusion tests.

use num_traits::{Signed, Zero};

use crate::lp::{
    exact_point, exact_reduced_costs, exact_simplex, float_simplex, ExactOutcome, LpError,
    LpOutcome, StandardLP,
};
use crate::rat::{dot, to_float, Rat, RatMat, RatVec};

#[derive(Debug, Clone)]
pub struct IneqRow {
    pub coeffs: RatVec,
    pub rhs: Rat,
    /// `true` for an equality row, `false` for `coeffs . x <= rhs`.
    pub eq: bool,
}

impl IneqRow {
    pub fn le(coeffs: RatVec, rhs: Rat) -> Self {
        IneqRow {
            coeffs,
            rhs,
            eq: false,
        }
    }

    pub fn eq(coeffs: RatVec, rhs: Rat) -> Self {
        IneqRow {
            coeffs,
            rhs,
            eq: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IneqOutcome {
    Optimal { x: RatVec, value: Rat },
    Infeasible,
    Unbounded,
}

/// Appends `|x_i| <= bound` rows for the first `nvars` variables.
pub fn add_box(rows: &mut Vec<IneqRow>, nvars: usize, dim: usize, bound: &Rat) {
    for i in 0..nvars {
        let mut pos = vec![Rat::zero(); dim];
        pos[i] = Rat::from_integer(1.into());
        rows.push(IneqRow::le(pos.clone(), bound.clone()));
        let mut neg = vec![Rat::zero(); dim];
        neg[i] = Rat::from_integer((-1).into());
        rows.push(IneqRow::le(neg, bound.clone()));
    }
}

/// Maximizes `objective . x` over the row system, exactly.
pub fn maximize(nvars: usize, rows: &[IneqRow], objective: &[Rat]) -> Result<IneqOutcome, LpError> {
    assert_eq!(objective.len(), nvars, "objective length mismatch");
    if rows.is_empty() {
        // unconstrained free variables
        return Ok(if objective.iter().all(|c| c.is_zero()) {
            IneqOutcome::Optimal {
                x: vec![Rat::zero(); nvars],
                value: Rat::zero(),
            }
        } else {
            IneqOutcome::Unbounded
        });
    }
    // Dependencies can only arise among equality rows: every `<=` row
    // carries a private slack column. Reduce the equality block alone
    // and assemble the rest unchecked.
    let eq_rows: Vec<&IneqRow> = rows.iter().filter(|r| r.eq).collect();
    let le_rows: Vec<&IneqRow> = rows.iter().filter(|r| !r.eq).collect();
    let kept_eq: Vec<(RatVec, Rat)> = if eq_rows.is_empty() {
        Vec::new()
    } else {
        let mat = RatMat::from_rows(eq_rows.iter().map(|r| r.coeffs.clone()).collect());
        let rhs: RatVec = eq_rows.iter().map(|r| r.rhs.clone()).collect();
        match StandardLP::new_pruned(mat, rhs) {
            Ok(reduced) => (0..reduced.nrows())
                .map(|i| (reduced.a().row(i).to_vec(), reduced.b()[i].clone()))
                .collect(),
            Err(LpError::Inconsistent) => return Ok(IneqOutcome::Infeasible),
            Err(e) => return Err(e),
        }
    };
    let n_slack = le_rows.len();
    let ncols = 2 * nvars + n_slack;
    let mut mat_rows: Vec<RatVec> = Vec::with_capacity(kept_eq.len() + n_slack);
    let mut rhs: RatVec = Vec::with_capacity(kept_eq.len() + n_slack);
    for (coeffs, b) in &kept_eq {
        assert_eq!(coeffs.len(), nvars, "row length mismatch");
        let mut r = vec![Rat::zero(); ncols];
        for (i, c) in coeffs.iter().enumerate() {
            r[i] = c.clone();
            r[nvars + i] = -c.clone();
        }
        mat_rows.push(r);
        rhs.push(b.clone());
    }
    for (slack_idx, row) in le_rows.iter().enumerate() {
        assert_eq!(row.coeffs.len(), nvars, "row length mismatch");
        let mut r = vec![Rat::zero(); ncols];
        for (i, c) in row.coeffs.iter().enumerate() {
            r[i] = c.clone();
            r[nvars + i] = -c.clone();
        }
        r[2 * nvars + slack_idx] = Rat::from_integer(1.into());
        mat_rows.push(r);
        rhs.push(row.rhs.clone());
    }
    let lp = StandardLP::new_unchecked(RatMat::from_rows(mat_rows), rhs);
    let mut c = vec![Rat::zero(); ncols];
    for (i, v) in objective.iter().enumerate() {
        c[i] = v.clone();
        c[nvars + i] = -v.clone();
    }
    // fast path: a float-simplex basis, kept only when it verifies
    // exactly (feasible point, nonpositive reduced costs); anything else
    // falls back to the exact simplex
    let c_float: Vec<f64> = c.iter().map(to_float).collect();
    if let Ok(LpOutcome::Optimal(basis)) = float_simplex(&lp, &c_float) {
        if let Ok(point) = exact_point(&lp, &basis) {
            if point.iter().all(|v| !v.is_negative()) {
                if let Ok(rc) = exact_reduced_costs(&lp, &basis, &c) {
                    if rc.alpha.values().all(|a| !a.is_positive()) {
                        let x: RatVec =
                            (0..nvars).map(|i| &point[i] - &point[nvars + i]).collect();
                        let value = dot(objective, &x);
                        return Ok(IneqOutcome::Optimal { x, value });
                    }
                }
            }
        }
    }
    match exact_simplex(&lp, &c)? {
        ExactOutcome::Optimal { point, .. } => {
            let x: RatVec = (0..nvars).map(|i| &point[i] - &point[nvars + i]).collect();
            let value = dot(objective, &x);
            Ok(IneqOutcome::Optimal { x, value })
        }
        ExactOutcome::Infeasible => Ok(IneqOutcome::Infeasible),
        ExactOutcome::Unbounded => Ok(IneqOutcome::Unbounded),
    }
}
