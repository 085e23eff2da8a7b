//! Parametric linear programming over exact rationals, with a
//! floating-point fast path, task-parallel region exploration, and a
//! polyhedral projection front end.
//!
//! The layering, bottom up:
//!
//! - [`rat`]: arbitrary-precision rationals, vectors, matrices, exact
//!   Gaussian solving.
//! - [`lp`]: equality-form LPs, float simplex, exact reconstruction and
//!   verification, exact simplex fallback.
//! - [`plp`] / [`explore`]: optimality regions of a parametric objective
//!   and the task-based explorer that enumerates them.
//! - [`parallel`]: the concurrent region store, basis dedup table, and
//!   the static/dynamic schedulers.
//! - [`poly`]: rational polyhedra, projection encoded as a parametric
//!   LP, and a Fourier-Motzkin oracle for validation.
//! - [`io`]: the `.poly` / `.plp` text formats, region JSON and DOT
//!   output.

pub mod explore;
pub mod gen;
pub mod ineq;
pub mod io;
pub mod lp;
pub mod parallel;
pub mod plp;
pub mod poly;
pub mod rat;

pub use explore::{
    process_task, solve, solve_sequential, PlpSolution, RunStats, Scheduler, SharedState,
};
pub use lp::{
    exact_point, exact_reduced_costs, exact_simplex, float_simplex, verify_optimal_basis, Basis,
    ExactOutcome, LpError, LpOutcome, StandardLP,
};
pub use parallel::{push_region, BasisTable, ConcurrentVec, RegionStore};
pub use plp::{
    are_adjacent, compute_next, eliminate_redundancy, instantiate_objective, is_covered, midpoint,
    sign_conditions, AffineForm, ParametricLP, ParentEdge, PlpError, Region, SolveConfig, Task,
};
pub use poly::{
    encode_projection, extract_projection, fourier_motzkin, includes, interior_point, poly_equal,
    project, Polyhedron, PolyError, ProjectionContext,
};
pub use rat::{gauss_solve, gauss_solve_multi, parse_rat, to_float, NumError, Rat, RatMat, RatVec};
