//! Rational polyhedra in constraint form, projection via parametric
//! linear programming, and an independent Fourier-Motzkin oracle used to
//! validate the projection path.

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::explore::{solve, PlpSolution, Scheduler};
use crate::ineq::{maximize, IneqOutcome, IneqRow};
use crate::lp::{LpError, StandardLP};
use crate::plp::{ParametricLP, PlpError, SolveConfig};
use crate::rat::{dot, norm_1, Rat, RatMat, RatVec};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("polyhedron is empty or has no full-dimensional interior")]
    EmptyOrFlat,
    #[error("intermediate constraint system exceeded {0} rows")]
    SizeLimit(usize),
    #[error("polyhedron has no usable constraints")]
    NoConstraints,
    #[error("no normalized multiplier exists; the projection is the full space")]
    TrivialProjection,
    #[error("bad eliminated-variable set: {0}")]
    BadEliminationSet(String),
    #[error(transparent)]
    Solve(#[from] PlpError),
    #[error(transparent)]
    Lp(#[from] LpError),
}

/// `{ x : a_i . x <= b_i }` over `nvars` variables. Rows are kept as
/// given; comparisons are semantic (`includes` / `poly_equal`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polyhedron {
    nvars: usize,
    rows: Vec<(RatVec, Rat)>,
}

impl Polyhedron {
    pub fn new(nvars: usize, rows: Vec<(RatVec, Rat)>) -> Self {
        for (a, _) in &rows {
            assert_eq!(a.len(), nvars, "row length mismatch");
        }
        Polyhedron { nvars, rows }
    }

    pub fn full_space(nvars: usize) -> Self {
        Polyhedron {
            nvars,
            rows: Vec::new(),
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn rows(&self) -> &[(RatVec, Rat)] {
        &self.rows
    }

    pub fn contains(&self, x: &[Rat]) -> bool {
        self.rows.iter().all(|(a, b)| dot(a, x) <= *b)
    }

    /// Rows with a nonzero coefficient vector; a zero row with negative
    /// right-hand side marks the polyhedron empty.
    fn usable_rows(&self) -> Result<Vec<(RatVec, Rat)>, PolyError> {
        let mut out = Vec::new();
        for (a, b) in &self.rows {
            if a.iter().all(|v| v.is_zero()) {
                if b.is_negative() {
                    return Err(PolyError::EmptyOrFlat);
                }
                continue; // trivially true
            }
            out.push((a.clone(), b.clone()));
        }
        Ok(out)
    }
}

/// Chebyshev-style interior point: maximizes the smallest weighted slack
/// `r` with `a_i . x + r |a_i|_1 <= b_i`, capped at 1 so unbounded
/// polyhedra still give a finite answer.
pub fn interior_point(p: &Polyhedron) -> Result<RatVec, PolyError> {
    let rows = p.usable_rows()?;
    let n = p.nvars();
    let mut lp_rows: Vec<IneqRow> = Vec::with_capacity(rows.len() + 1);
    for (a, b) in &rows {
        let mut coeffs = a.clone();
        coeffs.push(norm_1(a));
        lp_rows.push(IneqRow::le(coeffs, b.clone()));
    }
    let mut cap = vec![Rat::zero(); n + 1];
    cap[n] = Rat::one();
    lp_rows.push(IneqRow::le(cap, Rat::one()));
    let mut obj = vec![Rat::zero(); n + 1];
    obj[n] = Rat::one();
    match maximize(n + 1, &lp_rows, &obj)? {
        IneqOutcome::Optimal { x, value } => {
            if !value.is_positive() {
                return Err(PolyError::EmptyOrFlat);
            }
            Ok(x[..n].to_vec())
        }
        IneqOutcome::Infeasible => Err(PolyError::EmptyOrFlat),
        IneqOutcome::Unbounded => unreachable!("radius is capped"),
    }
}

/// Binds the projection encoding to result extraction: which variables
/// were kept, the kept-column block, the right-hand side, and the
/// interior point used for normalization.
#[derive(Debug, Clone)]
pub struct ProjectionContext {
    pub kept: Vec<usize>,
    pub eliminated: Vec<usize>,
    pub a_kept: RatMat,
    pub b: RatVec,
    pub interior: RatVec,
}

impl ProjectionContext {
    /// Seed parameter vector: the kept coordinates of the interior
    /// point, guaranteed inside the projected set.
    pub fn seed_point(&self) -> RatVec {
        self.kept.iter().map(|&j| self.interior[j].clone()).collect()
    }
}

fn check_elimination(nvars: usize, eliminated: &[usize]) -> Result<Vec<usize>, PolyError> {
    if eliminated.is_empty() {
        return Err(PolyError::BadEliminationSet("nothing to eliminate".into()));
    }
    let mut sorted = eliminated.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != eliminated.len() {
        return Err(PolyError::BadEliminationSet("duplicate variable".into()));
    }
    if let Some(&last) = sorted.last() {
        if last >= nvars {
            return Err(PolyError::BadEliminationSet(format!(
                "variable {last} out of range (nvars = {nvars})"
            )));
        }
    }
    if sorted.len() == nvars {
        return Err(PolyError::BadEliminationSet(
            "cannot eliminate every variable".into(),
        ));
    }
    Ok(sorted)
}

/// Encodes the projection of `p` onto the non-eliminated variables as a
/// parametric LP over Farkas multipliers.
///
/// Decision variables are one multiplier per constraint, `lambda >= 0`,
/// with `lambda^T A_e = 0` for each eliminated column and the
/// normalization `lambda^T (b - A x) = 1` at an interior point `x`. Each
/// feasible multiplier certifies the projected constraint
/// `(lambda^T A_K) y <= lambda^T b`; minimizing its violation over the
/// parameters `mu = y` (delivered negated to the maximizing solver)
/// makes the optimality regions enumerate exactly the facets.
pub fn encode_projection(
    p: &Polyhedron,
    eliminated: &[usize],
) -> Result<(ParametricLP, ProjectionContext), PolyError> {
    let eliminated = check_elimination(p.nvars(), eliminated)?;
    let interior = interior_point(p)?;
    let rows = p.usable_rows()?;
    if rows.is_empty() {
        return Err(PolyError::NoConstraints);
    }
    let kept: Vec<usize> = (0..p.nvars()).filter(|j| !eliminated.contains(j)).collect();
    let k = kept.len();
    // equality rows over lambda: one per eliminated column, then the
    // normalization row
    let mut eq_rows: Vec<RatVec> = Vec::with_capacity(eliminated.len() + 1);
    let mut rhs: RatVec = Vec::with_capacity(eliminated.len() + 1);
    for &e in &eliminated {
        eq_rows.push(rows.iter().map(|(a, _)| a[e].clone()).collect());
        rhs.push(Rat::zero());
    }
    let norm_row: RatVec = rows
        .iter()
        .map(|(a, b)| b - dot(a, &interior))
        .collect();
    debug_assert!(norm_row.iter().all(|w| w.is_positive()));
    eq_rows.push(norm_row);
    rhs.push(Rat::one());
    let lp = match StandardLP::new_pruned(RatMat::from_rows(eq_rows), rhs) {
        Ok(lp) => lp,
        // the normalization cannot be met: no Farkas rows exist at all
        Err(LpError::Inconsistent) => return Err(PolyError::TrivialProjection),
        Err(e) => return Err(e.into()),
    };
    let a_kept_data: Vec<RatVec> = rows
        .iter()
        .map(|(a, _)| kept.iter().map(|&j| a[j].clone()).collect())
        .collect();
    let a_kept = RatMat::from_rows(a_kept_data);
    let b: RatVec = rows.iter().map(|(_, bb)| bb.clone()).collect();
    // maximize  lambda^T (A_K mu) - lambda^T b  ==  -(violation)
    let mut objectives: Vec<RatVec> = Vec::with_capacity(k + 1);
    objectives.push(b.iter().map(|v| -v.clone()).collect());
    for i in 0..k {
        objectives.push(a_kept.col(i));
    }
    let plp = ParametricLP::new(lp, objectives).map_err(PolyError::Solve)?;
    Ok((
        plp,
        ProjectionContext {
            kept,
            eliminated,
            a_kept,
            b,
            interior,
        },
    ))
}

/// Reads the projected constraint system out of a parametric solution:
/// each region's optimal multiplier is one row, duplicates (rows equal
/// up to a positive factor) dropped.
pub fn extract_projection(solution: &PlpSolution, ctx: &ProjectionContext) -> Polyhedron {
    let k = ctx.kept.len();
    let mut rows: Vec<(RatVec, Rat)> = Vec::new();
    'regions: for region in &solution.regions {
        let lambda = &region.optimum;
        let coeffs: RatVec = (0..k)
            .map(|i| dot(lambda, &ctx.a_kept.col(i)))
            .collect();
        if coeffs.iter().all(|v| v.is_zero()) {
            // vacuous row 0 <= lambda^T b with a nonnegative right side
            continue;
        }
        let rhs = dot(lambda, &ctx.b);
        for (a, b) in &rows {
            if let Some(scale) = proportionality(a, b, &coeffs, &rhs) {
                if scale.is_positive() {
                    continue 'regions;
                }
            }
        }
        rows.push((coeffs, rhs));
    }
    Polyhedron::new(k, rows)
}

/// If `(a2, b2) = s * (a1, b1)` for a single rational `s`, returns `s`.
fn proportionality(a1: &[Rat], b1: &Rat, a2: &[Rat], b2: &Rat) -> Option<Rat> {
    let mut scale: Option<Rat> = None;
    let mut check = |x1: &Rat, x2: &Rat| -> bool {
        if x1.is_zero() {
            return x2.is_zero();
        }
        let s = x2 / x1;
        match &scale {
            None => {
                scale = Some(s);
                true
            }
            Some(prev) => *prev == s,
        }
    };
    for (x1, x2) in a1.iter().zip(a2) {
        if !check(x1, x2) {
            return None;
        }
    }
    if !check(b1, b2) {
        return None;
    }
    scale
}

/// Full projection pipeline; a trivial (full-space) projection is a
/// valid result, reported with no solver run.
pub struct ProjectOutput {
    pub polyhedron: Polyhedron,
    pub solution: Option<PlpSolution>,
}

pub fn project(
    p: &Polyhedron,
    eliminated: &[usize],
    scheduler: Scheduler,
    threads: usize,
    config: &SolveConfig,
) -> Result<ProjectOutput, PolyError> {
    let k_of = |elim: &[usize]| p.nvars() - elim.len();
    match encode_projection(p, eliminated) {
        Ok((plp, ctx)) => match solve(&plp, ctx.seed_point(), scheduler, threads, config) {
            Ok(solution) => Ok(ProjectOutput {
                polyhedron: extract_projection(&solution, &ctx),
                solution: Some(solution),
            }),
            Err(PlpError::InfeasibleProblem) => Ok(ProjectOutput {
                polyhedron: Polyhedron::full_space(ctx.kept.len()),
                solution: None,
            }),
            Err(e) => Err(PolyError::Solve(e)),
        },
        Err(PolyError::TrivialProjection) => {
            let eliminated = check_elimination(p.nvars(), eliminated)?;
            Ok(ProjectOutput {
                polyhedron: Polyhedron::full_space(k_of(&eliminated)),
                solution: None,
            })
        }
        Err(e) => Err(e),
    }
}

// ---------------------------------------------------------------------------
// Fourier-Motzkin oracle

const FM_ROW_LIMIT: usize = 10_000;

/// Classic pairwise elimination, variable by variable, with LP-based
/// redundancy pruning of the final system. The validation oracle for the
/// parametric-LP projection path; intended for small instances.
pub fn fourier_motzkin(p: &Polyhedron, eliminated: &[usize]) -> Result<Polyhedron, PolyError> {
    let eliminated = check_elimination(p.nvars(), eliminated)?;
    let kept: Vec<usize> = (0..p.nvars()).filter(|j| !eliminated.contains(j)).collect();
    let mut rows: Vec<(RatVec, Rat)> = p.rows.clone();
    let mut empty = false;
    for &var in &eliminated {
        let mut pos: Vec<&(RatVec, Rat)> = Vec::new();
        let mut neg: Vec<&(RatVec, Rat)> = Vec::new();
        let mut stay: Vec<(RatVec, Rat)> = Vec::new();
        for row in &rows {
            if row.0[var].is_positive() {
                pos.push(row);
            } else if row.0[var].is_negative() {
                neg.push(row);
            } else {
                stay.push(row.clone());
            }
        }
        let mut next = stay;
        for (ap, bp) in &pos {
            for (an, bn) in &neg {
                // positive combination cancelling the variable
                let wp = -an[var].clone();
                let wn = ap[var].clone();
                let a: RatVec = ap
                    .iter()
                    .zip(an.iter())
                    .map(|(p, n)| &wp * p + &wn * n)
                    .collect();
                let b = &wp * bp + &wn * bn;
                if a.iter().all(|v| v.is_zero()) {
                    if b.is_negative() {
                        empty = true;
                    }
                    continue;
                }
                next.push((a, b));
            }
        }
        canonicalize_rows(&mut next);
        if next.len() > FM_ROW_LIMIT {
            return Err(PolyError::SizeLimit(FM_ROW_LIMIT));
        }
        rows = next;
    }
    // drop the eliminated (now zero) columns
    let mut projected: Vec<(RatVec, Rat)> = Vec::new();
    for (a, b) in rows {
        debug_assert!(eliminated.iter().all(|&e| a[e].is_zero()));
        let coeffs: RatVec = kept.iter().map(|&j| a[j].clone()).collect();
        if coeffs.iter().all(|v| v.is_zero()) {
            if b.is_negative() {
                empty = true;
            }
            continue;
        }
        projected.push((coeffs, b));
    }
    if empty {
        return Ok(canonical_empty(kept.len()));
    }
    prune_redundant_rows(kept.len(), projected)
}

fn canonical_empty(nvars: usize) -> Polyhedron {
    Polyhedron::new(
        nvars,
        vec![(vec![Rat::zero(); nvars], -Rat::one())],
    )
}

/// Scales every row so its first nonzero coefficient has absolute value
/// one (canonical up to positive factors), then sorts and deduplicates.
fn canonicalize_rows(rows: &mut Vec<(RatVec, Rat)>) {
    for (a, b) in rows.iter_mut() {
        if let Some(scale) = a.iter().find(|v| !v.is_zero()).map(|v| v.abs()) {
            if !scale.is_one() {
                for v in a.iter_mut() {
                    *v /= &scale;
                }
                *b /= &scale;
            }
        }
    }
    rows.sort();
    rows.dedup();
}

/// Sequential LP pruning: a row is dropped iff maximizing it subject to
/// the remaining rows cannot exceed its right-hand side.
fn prune_redundant_rows(
    nvars: usize,
    rows: Vec<(RatVec, Rat)>,
) -> Result<Polyhedron, PolyError> {
    // an infeasible system would let the pruning loop discard everything
    let all: Vec<IneqRow> = rows
        .iter()
        .map(|(a, b)| IneqRow::le(a.clone(), b.clone()))
        .collect();
    if rows.is_empty() {
        return Ok(Polyhedron::full_space(nvars));
    }
    match maximize(nvars, &all, &vec![Rat::zero(); nvars])? {
        IneqOutcome::Infeasible => return Ok(canonical_empty(nvars)),
        IneqOutcome::Optimal { .. } | IneqOutcome::Unbounded => {}
    }
    let mut alive = vec![true; rows.len()];
    for i in 0..rows.len() {
        let others: Vec<IneqRow> = rows
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i && alive[*j])
            .map(|(_, (a, b))| IneqRow::le(a.clone(), b.clone()))
            .collect();
        match maximize(nvars, &others, &rows[i].0)? {
            IneqOutcome::Optimal { value, .. } => {
                if value <= rows[i].1 {
                    alive[i] = false;
                }
            }
            IneqOutcome::Unbounded => {}
            IneqOutcome::Infeasible => unreachable!("feasibility checked above"),
        }
    }
    let kept_rows: Vec<(RatVec, Rat)> = rows
        .into_iter()
        .zip(alive)
        .filter(|(_, keep)| *keep)
        .map(|(row, _)| row)
        .collect();
    Ok(Polyhedron::new(nvars, kept_rows))
}

/// `P` is included in `Q`: every row of `Q` is maximized over `P` at or
/// below its right-hand side. An unbounded maximum is a violation; an
/// infeasible `P` is vacuously included.
pub fn includes(p: &Polyhedron, q: &Polyhedron) -> Result<bool, PolyError> {
    assert_eq!(p.nvars(), q.nvars(), "dimension mismatch");
    let p_rows: Vec<IneqRow> = p
        .rows
        .iter()
        .map(|(a, b)| IneqRow::le(a.clone(), b.clone()))
        .collect();
    for (a, b) in &q.rows {
        match maximize(p.nvars(), &p_rows, a)? {
            IneqOutcome::Optimal { value, .. } => {
                if value > *b {
                    return Ok(false);
                }
            }
            IneqOutcome::Unbounded => return Ok(false),
            IneqOutcome::Infeasible => return Ok(true),
        }
    }
    Ok(true)
}

/// Semantic equality: mutual inclusion.
pub fn poly_equal(p: &Polyhedron, q: &Polyhedron) -> Result<bool, PolyError> {
    Ok(includes(p, q)? && includes(q, p)?)
}
