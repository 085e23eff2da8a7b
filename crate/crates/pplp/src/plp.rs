//! Parametric linear programming: objective families `C_0 + sum mu_i C_i`,
//! optimality regions in parameter space, and the geometric operations
//! the region explorer is built from.

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::ineq::{add_box, maximize, IneqOutcome, IneqRow};
use crate::lp::{Basis, LpError, StandardLP};
use crate::parallel::RegionStore;
use crate::rat::{dot, gauss_solve_multi, norm_inf, rat, Rat, RatMat, RatVec};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PlpError {
    #[error("objective is unbounded at a probed parameter vector")]
    UnboundedDirection,
    #[error("the underlying LP is infeasible")]
    InfeasibleProblem,
    #[error("region has no strictly interior point")]
    EmptyInterior,
    #[error("facet has no relative-interior point within the bounding box")]
    DegenerateFacet,
    #[error("no gap between regions (midpoint called on adjacent regions)")]
    NoGap,
    #[error("internal error: {0}")]
    Internal(String),
    #[error(transparent)]
    Lp(#[from] LpError),
}

/// Objective family `C(mu) = C_0 + sum_{i=1..k} mu_i C_i` over a fixed
/// equality-form LP.
#[derive(Debug, Clone)]
pub struct ParametricLP {
    lp: StandardLP,
    objectives: Vec<RatVec>,
}

impl ParametricLP {
    pub fn new(lp: StandardLP, objectives: Vec<RatVec>) -> Result<Self, PlpError> {
        if objectives.len() < 2 {
            return Err(PlpError::Lp(LpError::Dimension(
                "need C_0 plus at least one parametric objective".into(),
            )));
        }
        for c in &objectives {
            if c.len() != lp.ncols() {
                return Err(PlpError::Lp(LpError::Dimension(format!(
                    "objective has length {}, expected {}",
                    c.len(),
                    lp.ncols()
                ))));
            }
        }
        Ok(ParametricLP { lp, objectives })
    }

    pub fn lp(&self) -> &StandardLP {
        &self.lp
    }

    pub fn objectives(&self) -> &[RatVec] {
        &self.objectives
    }

    /// Number of parameters `k`.
    pub fn param_count(&self) -> usize {
        self.objectives.len() - 1
    }
}

/// Affine function of the parameters, `mu -> coeffs . mu + constant`.
/// A region constraint means `form(mu) <= 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineForm {
    pub coeffs: RatVec,
    pub constant: Rat,
}

impl AffineForm {
    pub fn new(coeffs: RatVec, constant: Rat) -> Self {
        AffineForm { coeffs, constant }
    }

    pub fn eval(&self, mu: &[Rat]) -> Rat {
        dot(&self.coeffs, mu) + &self.constant
    }
}

/// Spanning-tree edge: which region's facet probe discovered this one.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ParentEdge {
    pub region: usize,
    pub facet: usize,
}

/// Optimality region: the parameter vectors for which `basis` is
/// optimal, as the polyhedron `{mu : form(mu) <= 0 for all constraints}`.
#[derive(Debug, Clone)]
pub struct Region {
    /// Slot index in publication order; assigned by the region store.
    pub id: usize,
    pub constraints: Vec<AffineForm>,
    pub basis: Basis,
    /// Exact optimum X* shared by the whole region.
    pub optimum: RatVec,
    /// Parameter vector whose probe generated the region.
    pub seed: RatVec,
    pub parent: Option<ParentEdge>,
}

impl Region {
    /// Closure membership: every constraint evaluates `<= 0`.
    pub fn contains(&self, mu: &[Rat]) -> bool {
        self.constraints.iter().all(|f| !f.eval(mu).is_positive())
    }

    /// Strict interior membership: every constraint evaluates `< 0`.
    pub fn contains_strictly(&self, mu: &[Rat]) -> bool {
        self.constraints.iter().all(|f| f.eval(mu).is_negative())
    }
}

/// Unit of work for the explorer: probe the parameter vector `d`,
/// remembering which region and facet crossing produced it.
#[derive(Debug, Clone)]
pub struct Task {
    pub from_region: Option<usize>,
    /// Point on the generating facet of `from_region`; present iff
    /// `from_region` is.
    pub crossing: Option<RatVec>,
    /// Facet index within `from_region` that spawned this probe.
    pub parent_facet: Option<usize>,
    pub d: RatVec,
    /// Repair-recursion depth along this probe chain.
    pub depth: u32,
    /// Remaining re-enqueue budget for the publish race on the basis
    /// table.
    pub retries_left: u32,
}

impl Task {
    pub fn seed(d: RatVec, retry_budget: u32) -> Self {
        Task {
            from_region: None,
            crossing: None,
            parent_facet: None,
            d,
            depth: 0,
            retries_left: retry_budget,
        }
    }
}

/// Tunables of the explorer. The bounding box and epsilon only shape
/// probe placement, never the reported regions.
#[derive(Debug, Clone)]
pub struct SolveConfig {
    /// All facet and witness LPs are solved within `|mu_j| <= box_bound`.
    pub box_bound: Rat,
    /// Probe step scale: `eps = epsilon * max(1, |crossing|_inf)`.
    pub epsilon: Rat,
    pub repair_depth_cap: u32,
    pub retry_budget: u32,
}

impl Default for SolveConfig {
    fn default() -> Self {
        SolveConfig {
            box_bound: rat(1_000_000, 1),
            epsilon: rat(1, 1024),
            repair_depth_cap: 64,
            retry_budget: 16,
        }
    }
}

/// Evaluates the objective family at a parameter vector:
/// `C_0 + sum d_i C_{i}`.
pub fn instantiate_objective(plp: &ParametricLP, d: &[Rat]) -> RatVec {
    assert_eq!(d.len(), plp.param_count(), "parameter vector length");
    let mut c = plp.objectives[0].clone();
    for (i, coeff) in d.iter().enumerate() {
        if coeff.is_zero() {
            continue;
        }
        for (slot, v) in plp.objectives[i + 1].iter().enumerate() {
            if !v.is_zero() {
                c[slot] += coeff * v;
            }
        }
    }
    c
}

/// Symbolic reduced costs of the nonbasic variables: one affine form per
/// nonbasic column, nonpositive exactly on the optimality region of the
/// basis.
pub fn sign_conditions(plp: &ParametricLP, basis: &Basis) -> Result<Vec<AffineForm>, PlpError> {
    let lp = plp.lp();
    let k = plp.param_count();
    let block_t = lp.a().select_cols(basis.indices()).transpose();
    let m = lp.nrows();
    // one transpose solve per objective, factored once
    let mut rhs = RatMat::zeros(m, k + 1);
    for (col, c) in plp.objectives.iter().enumerate() {
        for (slot, &j) in basis.indices().iter().enumerate() {
            rhs.set(slot, col, c[j].clone());
        }
    }
    let duals = gauss_solve_multi(&block_t, &rhs).map_err(|_| LpError::SingularBasis)?;
    let mut forms = Vec::new();
    for j in basis.nonbasic(lp.ncols()) {
        let col = lp.a().col(j);
        let alpha = |i: usize| -> Rat {
            let y: RatVec = (0..m).map(|r| duals.get(r, i).clone()).collect();
            &plp.objectives[i][j] - dot(&y, &col)
        };
        let constant = alpha(0);
        let coeffs: RatVec = (1..=k).map(alpha).collect();
        forms.push(AffineForm::new(coeffs, constant));
    }
    Ok(forms)
}

/// Result of `eliminate_redundancy`: the irredundant subsystem plus one
/// exterior witness per kept constraint (the witness strictly violates
/// its constraint and strictly satisfies all the other kept ones).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Irredundant {
    pub kept: Vec<AffineForm>,
    pub witnesses: Vec<RatVec>,
    /// A point strictly inside every input constraint (and the box).
    pub interior: RatVec,
}

/// Whether two forms describe the same halfspace (equal up to a
/// positive factor).
fn same_halfspace(f: &AffineForm, g: &AffineForm) -> bool {
    let mut scale: Option<Rat> = None;
    let pairs = f
        .coeffs
        .iter()
        .zip(&g.coeffs)
        .chain(std::iter::once((&f.constant, &g.constant)));
    for (a, b) in pairs {
        if a.is_zero() {
            if !b.is_zero() {
                return false;
            }
            continue;
        }
        let s = b / a;
        match &scale {
            None => {
                if !s.is_positive() {
                    return false;
                }
                scale = Some(s);
            }
            Some(prev) => {
                if *prev != s {
                    return false;
                }
            }
        }
    }
    scale.is_some()
}

/// LP-based redundancy elimination within the bounding box: constraint
/// `i` is redundant iff maximizing its form subject to the others stays
/// nonpositive.
pub fn eliminate_redundancy(all_forms: &[AffineForm], box_bound: &Rat) -> Result<Irredundant, PlpError> {
    // forms equal up to positive scale are one constraint; drop the
    // copies before paying one LP per constraint
    let mut forms: Vec<&AffineForm> = Vec::with_capacity(all_forms.len());
    for f in all_forms {
        if !forms.iter().any(|g| same_halfspace(g, f)) {
            forms.push(f);
        }
    }
    if forms.is_empty() {
        return Ok(Irredundant {
            kept: Vec::new(),
            witnesses: Vec::new(),
            interior: Vec::new(),
        });
    }
    let k = forms[0].coeffs.len();
    // strictly interior point via the max-slack LP over (mu, t); the
    // slack cap keeps the objective bounded even on unbounded cones
    let mut rows: Vec<IneqRow> = Vec::with_capacity(forms.len() + 1);
    for f in &forms {
        let mut coeffs = f.coeffs.clone();
        coeffs.push(Rat::one());
        rows.push(IneqRow::le(coeffs, -f.constant.clone()));
    }
    let mut cap = vec![Rat::zero(); k + 1];
    cap[k] = Rat::one();
    rows.push(IneqRow::le(cap, Rat::one()));
    let mut obj = vec![Rat::zero(); k + 1];
    obj[k] = Rat::one();
    let interior = match maximize(k + 1, &rows, &obj)? {
        IneqOutcome::Optimal { x, value } => {
            if !value.is_positive() {
                return Err(PlpError::EmptyInterior);
            }
            x[..k].to_vec()
        }
        IneqOutcome::Infeasible => return Err(PlpError::EmptyInterior),
        IneqOutcome::Unbounded => unreachable!("slack is capped"),
    };

    let mut alive = vec![true; forms.len()];
    let mut kept = Vec::new();
    let mut witnesses = Vec::new();
    for i in 0..forms.len() {
        let mut rows: Vec<IneqRow> = Vec::new();
        for (j, f) in forms.iter().enumerate() {
            if j == i || !alive[j] {
                continue;
            }
            rows.push(IneqRow::le(f.coeffs.clone(), -f.constant.clone()));
        }
        let outcome = maximize(k, &rows, &forms[i].coeffs)?;
        let peak_point = match outcome {
            IneqOutcome::Optimal { x, value } => {
                let peak = value + &forms[i].constant;
                if !peak.is_positive() {
                    alive[i] = false;
                    continue;
                }
                Some((x, peak))
            }
            IneqOutcome::Unbounded => {
                // the form grows without bound over the others, so the
                // constraint is certainly kept; re-solve with the form
                // capped to pin down a concrete exterior point
                rows.push(IneqRow::le(
                    forms[i].coeffs.clone(),
                    box_bound - &forms[i].constant,
                ));
                match maximize(k, &rows, &forms[i].coeffs)? {
                    IneqOutcome::Optimal { x, value } => {
                        let peak = value + &forms[i].constant;
                        debug_assert!(peak.is_positive());
                        Some((x, peak))
                    }
                    other => unreachable!("capped re-solve must be optimal, got {other:?}"),
                }
            }
            IneqOutcome::Infeasible => {
                unreachable!("interior point satisfies every subset of the constraints")
            }
        };
        let (x, peak) = peak_point.expect("kept constraints carry a maximizer");
        // pull the maximizer toward the interior point until it strictly
        // satisfies every other constraint while still strictly
        // violating constraint i
        let at_interior = forms[i].eval(&interior);
        debug_assert!(at_interior.is_negative());
        let t = &peak / (&peak - &at_interior) / rat(2, 1);
        let w: RatVec = x
            .iter()
            .zip(&interior)
            .map(|(a, b)| a + &t * (b - a))
            .collect();
        debug_assert!(forms[i].eval(&w).is_positive());
        kept.push(forms[i].to_owned());
        witnesses.push(w);
    }
    Ok(Irredundant {
        kept,
        witnesses,
        interior,
    })
}

/// Picks a relative-interior crossing point of one facet and the probe
/// vector just beyond it: `d_next = crossing + eps * gradient`.
pub fn compute_next(
    region: &Region,
    facet: usize,
    config: &SolveConfig,
) -> Result<(RatVec, RatVec), PlpError> {
    let forms = &region.constraints;
    let grad = &forms[facet].coeffs;
    let k = grad.len();
    if grad.iter().all(|g| g.is_zero()) {
        return Err(PlpError::DegenerateFacet);
    }
    // maximize slack t with the facet pinned to equality; the cap keeps
    // the objective bounded, and a bounding box is only brought in when
    // the unconstrained optimum lands unreasonably far out
    let mut rows: Vec<IneqRow> = Vec::new();
    let mut pinned = grad.clone();
    pinned.push(Rat::zero());
    rows.push(IneqRow::eq(pinned, -forms[facet].constant.clone()));
    for (j, f) in forms.iter().enumerate() {
        if j == facet {
            continue;
        }
        let mut coeffs = f.coeffs.clone();
        coeffs.push(Rat::one());
        rows.push(IneqRow::le(coeffs, -f.constant.clone()));
    }
    let mut cap = vec![Rat::zero(); k + 1];
    cap[k] = Rat::one();
    rows.push(IneqRow::le(cap, Rat::one()));
    let mut obj = vec![Rat::zero(); k + 1];
    obj[k] = Rat::one();
    let solve_crossing = |rows: &[IneqRow]| -> Result<Option<RatVec>, PlpError> {
        match maximize(k + 1, rows, &obj)? {
            IneqOutcome::Optimal { x, value } => {
                if !value.is_positive() {
                    return Ok(None);
                }
                Ok(Some(x[..k].to_vec()))
            }
            IneqOutcome::Infeasible => Ok(None),
            IneqOutcome::Unbounded => unreachable!("slack is capped"),
        }
    };
    let mut crossing = solve_crossing(&rows)?.ok_or(PlpError::DegenerateFacet)?;
    if norm_inf(&crossing) > config.box_bound {
        add_box(&mut rows, k, k + 1, &config.box_bound);
        crossing = solve_crossing(&rows)?.ok_or(PlpError::DegenerateFacet)?;
    }
    let scale = norm_inf(&crossing).max(Rat::one());
    let eps = &config.epsilon * scale;
    let d_next: RatVec = crossing
        .iter()
        .zip(grad)
        .map(|(c, g)| c + &eps * g)
        .collect();
    debug_assert!(forms[facet].eval(&d_next).is_positive());
    Ok((crossing, d_next))
}

/// Scans the published prefix of the store in index order and returns
/// the first region containing `d` in its closure.
pub fn is_covered<'a>(d: &[Rat], store: &'a RegionStore) -> Option<&'a Region> {
    let len = store.snapshot_len();
    (0..len).map(|i| store.get(i)).find(|r| r.contains(d))
}

/// Whether the probe's facet crossing point also lies in the covering
/// region; when it does, the two regions share boundary there and no
/// repair is needed.
pub fn are_adjacent(crossing: &[Rat], r_cov: &Region) -> bool {
    r_cov.contains(crossing)
}

/// Bisection point for a detected gap: walks the segment from `crossing`
/// to `d` up to where it enters `r_cov`, and returns its half-way point,
/// which lies strictly outside both the covering and the originating
/// region.
pub fn midpoint(crossing: &[Rat], d: &[Rat], r_cov: &Region) -> Result<RatVec, PlpError> {
    let mut t_enter: Option<Rat> = None;
    for f in &r_cov.constraints {
        let at_crossing = f.eval(crossing);
        if !at_crossing.is_positive() {
            continue;
        }
        let at_d = f.eval(d);
        debug_assert!(!at_d.is_positive(), "d must lie in the covering region");
        let t = &at_crossing / (&at_crossing - &at_d);
        if t_enter.as_ref().map_or(true, |best| t > *best) {
            t_enter = Some(t);
        }
    }
    let Some(t_enter) = t_enter else {
        return Err(PlpError::NoGap);
    };
    let half = t_enter / rat(2, 1);
    Ok(crossing
        .iter()
        .zip(d)
        .map(|(c, dv)| c + &half * (dv - c))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lp::Basis;
    use crate::rat::{rat_int, RatMat};

    pub(crate) fn polygon_lp() -> StandardLP {
        StandardLP::new(
            RatMat::from_i64(2, 4, &[3, -1, 1, 0, -1, 3, 0, 1]),
            vec![rat_int(6), rat_int(6)],
        )
        .unwrap()
    }

    /// The polygon with objective family (mu1, mu2, 0, 0).
    pub(crate) fn polygon_plp() -> ParametricLP {
        let lp = polygon_lp();
        ParametricLP::new(
            lp,
            vec![
                vec![rat_int(0); 4],
                vec![rat_int(1), rat_int(0), rat_int(0), rat_int(0)],
                vec![rat_int(0), rat_int(1), rat_int(0), rat_int(0)],
            ],
        )
        .unwrap()
    }

    fn form(coeffs: &[Rat], constant: Rat) -> AffineForm {
        AffineForm::new(coeffs.to_vec(), constant)
    }

    fn region_of(constraints: Vec<AffineForm>) -> Region {
        Region {
            id: 0,
            constraints,
            basis: Basis::new(vec![0, 1], &polygon_lp()).unwrap(),
            optimum: vec![rat_int(3), rat_int(3), rat_int(0), rat_int(0)],
            seed: vec![rat_int(1), rat_int(1)],
            parent: None,
        }
    }

    #[test]
    fn instantiate_examples() {
        let plp = polygon_plp();
        assert_eq!(
            instantiate_objective(&plp, &[rat_int(1), rat_int(1)]),
            vec![rat_int(1), rat_int(1), rat_int(0), rat_int(0)]
        );
        assert_eq!(
            instantiate_objective(&plp, &[rat_int(0), rat_int(0)]),
            vec![rat_int(0); 4]
        );
        assert_eq!(
            instantiate_objective(&plp, &[rat_int(0), rat_int(1)]),
            vec![rat_int(0), rat_int(1), rat_int(0), rat_int(0)]
        );
    }

    #[test]
    fn sign_conditions_vertex_basis() {
        let plp = polygon_plp();
        let basis = Basis::new(vec![0, 1], plp.lp()).unwrap();
        let forms = sign_conditions(&plp, &basis).unwrap();
        assert_eq!(forms.len(), 2);
        // alpha_3 = -3/8 mu1 - 1/8 mu2, alpha_4 = -1/8 mu1 - 3/8 mu2
        assert_eq!(forms[0], form(&[rat(-3, 8), rat(-1, 8)], rat_int(0)));
        assert_eq!(forms[1], form(&[rat(-1, 8), rat(-3, 8)], rat_int(0)));
    }

    #[test]
    fn sign_conditions_origin_basis() {
        let plp = polygon_plp();
        let basis = Basis::new(vec![2, 3], plp.lp()).unwrap();
        let forms = sign_conditions(&plp, &basis).unwrap();
        // reduced costs of x1, x2 at the origin vertex: mu1, mu2
        assert_eq!(forms[0], form(&[rat_int(1), rat_int(0)], rat_int(0)));
        assert_eq!(forms[1], form(&[rat_int(0), rat_int(1)], rat_int(0)));
    }

    #[test]
    fn sign_conditions_constant_when_objectives_fixed() {
        let lp = polygon_lp();
        let plp = ParametricLP::new(
            lp,
            vec![
                vec![rat_int(1), rat_int(1), rat_int(0), rat_int(0)],
                vec![rat_int(0); 4],
            ],
        )
        .unwrap();
        let basis = Basis::new(vec![0, 1], plp.lp()).unwrap();
        let forms = sign_conditions(&plp, &basis).unwrap();
        for f in &forms {
            assert!(f.coeffs.iter().all(|c| c.is_zero()));
        }
        assert_eq!(forms[0].constant, rat(-1, 2));
        assert_eq!(forms[1].constant, rat(-1, 2));
    }

    #[test]
    fn redundancy_duplicate() {
        let bound = rat_int(1_000_000);
        let forms = vec![
            form(&[rat_int(-1)], rat_int(0)),
            form(&[rat_int(-1)], rat_int(0)),
        ];
        let out = eliminate_redundancy(&forms, &bound).unwrap();
        assert_eq!(out.kept.len(), 1);
        assert_eq!(out.kept[0], forms[0]);
        assert!(out.kept[0].eval(&out.witnesses[0]).is_positive());
    }

    #[test]
    fn redundancy_implied_constraint() {
        let bound = rat_int(1_000_000);
        let forms = vec![
            form(&[rat_int(-1), rat_int(0)], rat_int(0)),
            form(&[rat_int(0), rat_int(-1)], rat_int(0)),
            form(&[rat_int(-1), rat_int(-1)], rat_int(0)),
        ];
        let out = eliminate_redundancy(&forms, &bound).unwrap();
        assert_eq!(out.kept.len(), 2);
        assert_eq!(out.kept[0], forms[0]);
        assert_eq!(out.kept[1], forms[1]);
        for (i, w) in out.witnesses.iter().enumerate() {
            for (j, f) in out.kept.iter().enumerate() {
                let v = f.eval(w);
                if i == j {
                    assert!(v.is_positive(), "witness {i} must violate its constraint");
                } else {
                    assert!(v.is_negative(), "witness {i} must strictly satisfy {j}");
                }
            }
        }
    }

    #[test]
    fn redundancy_cone_facets() {
        let bound = rat_int(1_000_000);
        let forms = vec![
            form(&[rat(-3, 8), rat(-1, 8)], rat_int(0)),
            form(&[rat(-1, 8), rat(-3, 8)], rat_int(0)),
        ];
        let out = eliminate_redundancy(&forms, &bound).unwrap();
        assert_eq!(out.kept.len(), 2);
        // witnesses sit on either side of the two rays
        assert!(out.kept[0].eval(&out.witnesses[0]).is_positive());
        assert!(out.kept[1].eval(&out.witnesses[0]).is_negative());
        assert!(out.kept[1].eval(&out.witnesses[1]).is_positive());
        assert!(out.kept[0].eval(&out.witnesses[1]).is_negative());
    }

    #[test]
    fn redundancy_empty_interior() {
        let bound = rat_int(1_000_000);
        let forms = vec![
            form(&[rat_int(1)], rat_int(0)),
            form(&[rat_int(-1)], rat_int(0)),
        ];
        assert_eq!(
            eliminate_redundancy(&forms, &bound),
            Err(PlpError::EmptyInterior)
        );
    }

    #[test]
    fn compute_next_cone_facet() {
        let config = SolveConfig::default();
        let region = region_of(vec![
            form(&[rat(-3, 8), rat(-1, 8)], rat_int(0)),
            form(&[rat(-1, 8), rat(-3, 8)], rat_int(0)),
        ]);
        let (crossing, d_next) = compute_next(&region, 0, &config).unwrap();
        // crossing sits on the facet ray, strictly inside the other one
        assert!(region.constraints[0].eval(&crossing).is_zero());
        assert!(region.constraints[1].eval(&crossing).is_negative());
        // the probe leaves through the facet: 3 mu1 + mu2 < 0 beyond it
        let probe_side = rat_int(3) * &d_next[0] + &d_next[1];
        assert!(probe_side.is_negative());
        assert!(region.constraints[0].eval(&d_next).is_positive());
    }

    #[test]
    fn compute_next_one_parameter() {
        let config = SolveConfig::default();
        let region = region_of(vec![form(&[rat_int(1)], rat_int(0))]);
        let (crossing, d_next) = compute_next(&region, 0, &config).unwrap();
        assert_eq!(crossing, vec![rat_int(0)]);
        assert_eq!(d_next, vec![rat(1, 1024)]);
    }

    #[test]
    fn compute_next_square_facet() {
        let config = SolveConfig::default();
        let region = region_of(vec![
            form(&[rat_int(-1), rat_int(0)], rat_int(0)), // mu1 >= 0
            form(&[rat_int(1), rat_int(0)], rat_int(-1)), // mu1 <= 1
            form(&[rat_int(0), rat_int(-1)], rat_int(0)), // mu2 >= 0
            form(&[rat_int(0), rat_int(1)], rat_int(-1)), // mu2 <= 1
        ]);
        let (crossing, d_next) = compute_next(&region, 1, &config).unwrap();
        assert_eq!(crossing, vec![rat_int(1), rat(1, 2)]);
        assert_eq!(d_next, vec![rat_int(1) + rat(1, 1024), rat(1, 2)]);
    }

    #[test]
    fn adjacency() {
        let region = region_of(vec![
            form(&[rat(-3, 8), rat(-1, 8)], rat_int(0)),
            form(&[rat(-1, 8), rat(-3, 8)], rat_int(0)),
        ]);
        // point on the region's own boundary
        assert!(are_adjacent(&[rat_int(-1), rat_int(3)], &region));
        // far side of a shifted region
        let shifted = region_of(vec![form(&[rat_int(-1), rat_int(0)], rat_int(2))]); // mu1 >= 2
        assert!(!are_adjacent(&[rat_int(0), rat_int(0)], &shifted));
        // polygon fan: regions of vertices (3,3) and (2,0) share the ray
        // through (3,-1)
        let vertex_33 = region;
        let vertex_20 = region_of(vec![
            form(&[rat(1, 3), rat_int(1)], rat_int(0)),
            form(&[rat(-1, 3), rat_int(0)], rat_int(0)),
        ]);
        let on_ray = vec![rat_int(3), rat_int(-1)];
        assert!(are_adjacent(&on_ray, &vertex_33));
        assert!(are_adjacent(&on_ray, &vertex_20));
    }

    #[test]
    fn midpoint_examples() {
        let r = region_of(vec![form(&[rat_int(-1), rat_int(0)], rat_int(2))]); // mu1 >= 2
        let mid = midpoint(
            &[rat_int(0), rat_int(0)],
            &[rat_int(4), rat_int(0)],
            &r,
        )
        .unwrap();
        assert_eq!(mid, vec![rat_int(1), rat_int(0)]);

        let r = region_of(vec![form(&[rat_int(-1), rat_int(-1)], rat_int(1))]); // mu1+mu2 >= 1
        let mid = midpoint(
            &[rat_int(0), rat_int(0)],
            &[rat_int(1), rat_int(1)],
            &r,
        )
        .unwrap();
        assert_eq!(mid, vec![rat(1, 4), rat(1, 4)]);

        // crossing already inside: no gap
        let r = region_of(vec![form(&[rat_int(1), rat_int(0)], rat_int(0))]); // mu1 <= 0
        assert_eq!(
            midpoint(&[rat_int(0), rat_int(0)], &[rat_int(-1), rat_int(0)], &r),
            Err(PlpError::NoGap)
        );
    }
}
