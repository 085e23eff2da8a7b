//! The region explorer: the task step shared by every scheduler, the
//! sequential driver, and run statistics.
//!
//! A task probes one parameter vector. If no published region covers it,
//! the floating-point simplex proposes a basis, the basis table
//! deduplicates it, exact arithmetic verifies it (falling back to the
//! exact simplex when the float answer does not check out), the sign
//! conditions are reduced to an irredundant constraint set, one child
//! probe is spawned per facet, and the region is published. Afterwards
//! the task checks that the region covering its probe point is adjacent
//! to the region it came from, and emits a midpoint repair probe when it
//! is not.

use std::sync::atomic::{AtomicU64, Ordering};
use std::time::Instant;

use log::{debug, warn};
use num_traits::{One, Signed};
use serde::Serialize;

use crate::lp::{exact_point, exact_simplex, float_simplex, Basis, ExactOutcome, LpError, LpOutcome};
use crate::parallel::{push_region, BasisTable, RegionStore};
use crate::plp::{
    are_adjacent, compute_next, eliminate_redundancy, instantiate_objective, is_covered, midpoint,
    AffineForm, ParametricLP, ParentEdge, PlpError, Region, SolveConfig, Task,
};
use crate::rat::{dot, norm_inf, to_float, Rat, RatVec};

/// Counters of one solver run.
#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct RunStats {
    pub regions: u64,
    pub tasks_spawned: u64,
    pub tasks_completed: u64,
    pub tasks_aborted_covered: u64,
    pub tasks_aborted_basis: u64,
    pub retries: u64,
    pub repairs: u64,
    pub exact_fallbacks: u64,
    pub degenerate_regions: u64,
    pub wall_ms: f64,
    pub threads: usize,
    pub scheduler: String,
}

#[derive(Default)]
pub struct AtomicStats {
    spawned: AtomicU64,
    completed: AtomicU64,
    aborted_covered: AtomicU64,
    aborted_basis: AtomicU64,
    retries: AtomicU64,
    repairs: AtomicU64,
    exact_fallbacks: AtomicU64,
    degenerate_regions: AtomicU64,
}

impl AtomicStats {
    pub fn task_spawned(&self, n: u64) {
        self.spawned.fetch_add(n, Ordering::Relaxed);
    }
}

/// Everything a task touches outside its own fields. Region data flows
/// only through the store and the basis table, so the task step is safe
/// to run from many threads at once.
pub struct SharedState<'a> {
    plp: &'a ParametricLP,
    store: RegionStore,
    bases: BasisTable,
    config: SolveConfig,
    stats: AtomicStats,
}

impl<'a> SharedState<'a> {
    pub fn new(plp: &'a ParametricLP, config: SolveConfig) -> Self {
        SharedState {
            plp,
            store: RegionStore::new(),
            bases: BasisTable::new(),
            config,
            stats: AtomicStats::default(),
        }
    }

    pub fn plp(&self) -> &ParametricLP {
        self.plp
    }

    pub fn store(&self) -> &RegionStore {
        &self.store
    }

    pub fn bases(&self) -> &BasisTable {
        &self.bases
    }

    pub fn config(&self) -> &SolveConfig {
        &self.config
    }

    pub fn stats(&self) -> &AtomicStats {
        &self.stats
    }

    /// Drains the store into the final solution after quiescence.
    pub fn finish(self, scheduler: &str, threads: usize, start: Instant) -> PlpSolution {
        let regions = self.store.into_vec();
        let stats = RunStats {
            regions: regions.len() as u64,
            tasks_spawned: self.stats.spawned.load(Ordering::Relaxed),
            tasks_completed: self.stats.completed.load(Ordering::Relaxed),
            tasks_aborted_covered: self.stats.aborted_covered.load(Ordering::Relaxed),
            tasks_aborted_basis: self.stats.aborted_basis.load(Ordering::Relaxed),
            retries: self.stats.retries.load(Ordering::Relaxed),
            repairs: self.stats.repairs.load(Ordering::Relaxed),
            exact_fallbacks: self.stats.exact_fallbacks.load(Ordering::Relaxed),
            degenerate_regions: self.stats.degenerate_regions.load(Ordering::Relaxed),
            wall_ms: start.elapsed().as_secs_f64() * 1000.0,
            threads,
            scheduler: scheduler.to_string(),
        };
        PlpSolution { regions, stats }
    }
}

/// Quiesced solver output: the covering regions plus run counters. The
/// spanning tree of the exploration lives in the regions' parent edges.
#[derive(Debug, Clone)]
pub struct PlpSolution {
    pub regions: Vec<Region>,
    pub stats: RunStats,
}

impl PlpSolution {
    /// First region (in publication order) whose closure contains `mu`.
    pub fn covering_region(&self, mu: &[Rat]) -> Option<&Region> {
        self.regions.iter().find(|r| r.contains(mu))
    }

    /// Value of the piecewise-linear optimum at `mu`, when covered.
    pub fn value_at(&self, plp: &ParametricLP, mu: &[Rat]) -> Option<Rat> {
        let region = self.covering_region(mu)?;
        let c = instantiate_objective(plp, mu);
        Some(dot(&c, &region.optimum))
    }

    /// Renumbers the regions in basis-key order for diffable output;
    /// parent edges follow the renumbering.
    pub fn sort_by_basis(&mut self) {
        let mut order: Vec<usize> = (0..self.regions.len()).collect();
        order.sort_by(|&a, &b| self.regions[a].basis.cmp(&self.regions[b].basis));
        let mut remap = vec![0usize; self.regions.len()];
        for (new_id, &old_id) in order.iter().enumerate() {
            remap[old_id] = new_id;
        }
        let mut regions = std::mem::take(&mut self.regions);
        regions.sort_by(|a, b| a.basis.cmp(&b.basis));
        for r in &mut regions {
            r.id = remap[r.id];
            if let Some(edge) = &mut r.parent {
                edge.region = remap[edge.region];
            }
        }
        self.regions = regions;
    }
}

enum Resolution {
    Published(usize),
    /// Aborted after the float solve: the basis was already in the
    /// table and its published region covers the probe point.
    AbortedBasis(usize),
    Retry,
}

/// One step of the exploration; returns the tasks to enqueue (child
/// probes, a retry of this task, or a midpoint repair).
pub fn process_task(task: Task, state: &SharedState) -> Result<Vec<Task>, PlpError> {
    let mut spawned = Vec::new();
    let covered = is_covered(&task.d, state.store()).map(|r| r.id);
    let resolved = match covered {
        Some(id) => {
            state.stats.aborted_covered.fetch_add(1, Ordering::Relaxed);
            Some(id)
        }
        None => match solve_and_publish(&task, state, &mut spawned)? {
            Resolution::Published(id) => {
                state.stats.completed.fetch_add(1, Ordering::Relaxed);
                Some(id)
            }
            Resolution::AbortedBasis(id) => {
                state.stats.aborted_basis.fetch_add(1, Ordering::Relaxed);
                Some(id)
            }
            Resolution::Retry => {
                debug_assert!(task.retries_left > 0);
                state.stats.retries.fetch_add(1, Ordering::Relaxed);
                let mut again = task.clone();
                again.retries_left -= 1;
                spawned.push(again);
                None
            }
        },
    };
    // adjacency repair: make sure the covering region actually touches
    // the facet we crossed; otherwise probe the gap in between
    if let (Some(from), Some(cov)) = (task.from_region, resolved) {
        if cov != from {
            let crossing = task
                .crossing
                .as_ref()
                .expect("tasks with a source region carry their crossing point");
            let cov_region = state.store().get(cov);
            if !are_adjacent(crossing, cov_region) {
                if task.depth < state.config.repair_depth_cap {
                    match midpoint(crossing, &task.d, cov_region) {
                        Ok(between) => {
                            state.stats.repairs.fetch_add(1, Ordering::Relaxed);
                            spawned.push(Task {
                                from_region: Some(from),
                                crossing: task.crossing.clone(),
                                parent_facet: task.parent_facet,
                                d: between,
                                depth: task.depth + 1,
                                retries_left: state.config.retry_budget,
                            });
                        }
                        Err(PlpError::NoGap) => {
                            debug!("midpoint found no gap between regions {from} and {cov}");
                        }
                        Err(e) => return Err(e),
                    }
                } else {
                    warn!(
                        "repair depth cap {} reached between regions {from} and {cov}; \
                         result degrades from quasi-partition to covering",
                        state.config.repair_depth_cap
                    );
                }
            }
        }
    }
    Ok(spawned)
}

fn solve_and_publish(
    task: &Task,
    state: &SharedState,
    spawned: &mut Vec<Task>,
) -> Result<Resolution, PlpError> {
    // `owned` tracks the key this task holds Pending in the basis table.
    // Publication clears it; any other exit abandons it, so a pending
    // key always has an actively computing owner (which is what makes
    // blocking claims finite).
    let mut owned: Option<Basis> = None;
    let result = publish_guarded(task, state, spawned, &mut owned);
    if let Some(basis) = owned {
        state.bases.mark_abandoned(&basis);
    }
    result
}

fn publish_guarded(
    task: &Task,
    state: &SharedState,
    spawned: &mut Vec<Task>,
    owned: &mut Option<Basis>,
) -> Result<Resolution, PlpError> {
    let lp = state.plp.lp();
    let c_exact = instantiate_objective(state.plp, &task.d);
    let c_float: Vec<f64> = c_exact.iter().map(to_float).collect();
    let candidate = match float_simplex(lp, &c_float) {
        Ok(LpOutcome::Optimal(basis)) => Some(basis),
        Ok(LpOutcome::Infeasible) | Ok(LpOutcome::Unbounded) => None,
        Err(LpError::IterationLimit) | Err(LpError::Numerical) => None,
        Err(e) => return Err(e.into()),
    };
    let mut chosen: Option<(Basis, RatVec, Vec<AffineForm>)> = None;
    if let Some(basis) = candidate {
        match state.bases.claim(&basis) {
            crate::parallel::Claim::Owned => {
                *owned = Some(basis.clone());
                match exact_point(lp, &basis) {
                    Ok(point) if point.iter().all(|v| !v.is_negative()) => {
                        let forms = crate::plp::sign_conditions(state.plp, &basis)?;
                        if forms.iter().all(|f| !f.eval(&task.d).is_positive()) {
                            chosen = Some((basis, point, forms));
                        }
                    }
                    Ok(_) | Err(LpError::SingularBasis) => {}
                    Err(e) => return Err(e.into()),
                }
            }
            crate::parallel::Claim::Busy => {
                // another task owns this key right now; go around again
                // unless the budget is spent, in which case the exact
                // path below settles the probe
                if task.retries_left > 0 {
                    return Ok(Resolution::Retry);
                }
            }
            crate::parallel::Claim::Covered => {
                // the region exists; either it covers the probe (dedup
                // abort) or the float basis was wrong for this point
                if let Some(region) = is_covered(&task.d, state.store()) {
                    return Ok(Resolution::AbortedBasis(region.id));
                }
            }
        }
    }
    let (basis, optimum, forms) = match chosen {
        Some(v) => v,
        None => {
            state.stats.exact_fallbacks.fetch_add(1, Ordering::Relaxed);
            match exact_simplex(lp, &c_exact)? {
                ExactOutcome::Optimal { basis, point } => {
                    if owned.as_ref() != Some(&basis) {
                        // release the failed candidate before any claim
                        // that could wait
                        if let Some(old) = owned.take() {
                            state.bases.mark_abandoned(&old);
                        }
                        let claim = match state.bases.claim(&basis) {
                            crate::parallel::Claim::Busy => {
                                if task.retries_left > 0 {
                                    return Ok(Resolution::Retry);
                                }
                                state.bases.claim_blocking(&basis)
                            }
                            other => other,
                        };
                        match claim {
                            crate::parallel::Claim::Owned => {
                                *owned = Some(basis.clone());
                            }
                            crate::parallel::Claim::Covered => {
                                // the exact basis is optimal at the probe
                                // point, so its published region covers it
                                let Some(region) = is_covered(&task.d, state.store()) else {
                                    return Err(PlpError::Internal(
                                        "published basis without a covering region".into(),
                                    ));
                                };
                                return Ok(Resolution::AbortedBasis(region.id));
                            }
                            crate::parallel::Claim::Busy => unreachable!("claim_blocking waits"),
                        }
                    }
                    let forms = crate::plp::sign_conditions(state.plp, &basis)?;
                    (basis, point, forms)
                }
                ExactOutcome::Infeasible => return Err(PlpError::InfeasibleProblem),
                ExactOutcome::Unbounded => return Err(PlpError::UnboundedDirection),
            }
        }
    };
    let (constraints, full_dim) = match eliminate_redundancy(&forms, &state.config.box_bound) {
        Ok(irredundant) => (irredundant.kept, true),
        Err(PlpError::EmptyInterior) => {
            warn!(
                "region of basis {:?} has an empty interior (degeneracy); \
                 publishing it without witnesses",
                basis.indices()
            );
            state.stats.degenerate_regions.fetch_add(1, Ordering::Relaxed);
            (dedup_forms(forms), false)
        }
        Err(e) => return Err(e),
    };
    let proto = Region {
        id: usize::MAX, // assigned on publication
        constraints,
        basis,
        optimum,
        seed: task.d.clone(),
        parent: task.from_region.map(|region| ParentEdge {
            region,
            facet: task.parent_facet.unwrap_or(0),
        }),
    };
    let mut children: Vec<(usize, RatVec, RatVec)> = Vec::new();
    if full_dim {
        for facet in 0..proto.constraints.len() {
            match compute_next(&proto, facet, &state.config) {
                Ok((crossing, d_next)) => children.push((facet, crossing, d_next)),
                Err(PlpError::DegenerateFacet) => {
                    warn!("facet {facet} of basis {:?} has no relative interior; skipping probe", proto.basis.indices());
                }
                Err(e) => return Err(e),
            }
        }
    } else if task.depth < state.config.repair_depth_cap {
        // a degenerate region has no usable facets; step off the seed
        // along each parameter axis so exploration can continue
        let k = state.plp.param_count();
        let eps = &state.config.epsilon * norm_inf(&task.d).max(Rat::one());
        for axis in 0..k {
            for sign in [1i64, -1] {
                let mut probe = task.d.clone();
                probe[axis] += &eps * crate::rat::rat_int(sign);
                children.push((axis, task.d.clone(), probe));
            }
        }
    }
    let published_basis = proto.basis.clone();
    let id = push_region(state.store(), proto);
    state.bases.mark_published(&published_basis);
    *owned = None;
    for (facet, crossing, d_next) in children {
        spawned.push(Task {
            from_region: Some(id),
            crossing: Some(crossing),
            parent_facet: Some(facet),
            d: d_next,
            depth: if full_dim { 0 } else { task.depth + 1 },
            retries_left: state.config.retry_budget,
        });
    }
    Ok(Resolution::Published(id))
}

fn dedup_forms(forms: Vec<AffineForm>) -> Vec<AffineForm> {
    let mut out: Vec<AffineForm> = Vec::new();
    for f in forms {
        if !out.contains(&f) {
            out.push(f);
        }
    }
    out
}

/// Sequential driver: a LIFO working set, popped to quiescence.
pub fn solve_sequential(
    plp: &ParametricLP,
    d0: RatVec,
    config: &SolveConfig,
) -> Result<PlpSolution, PlpError> {
    let start = Instant::now();
    let state = SharedState::new(plp, config.clone());
    let mut stack = vec![Task::seed(d0, config.retry_budget)];
    state.stats.task_spawned(1);
    while let Some(task) = stack.pop() {
        let spawned = process_task(task, &state)?;
        state.stats.task_spawned(spawned.len() as u64);
        stack.extend(spawned);
    }
    Ok(state.finish("seq", 1, start))
}

/// Scheduler selector used by the front ends.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheduler {
    Sequential,
    Static,
    Dynamic,
}

impl Scheduler {
    pub fn name(&self) -> &'static str {
        match self {
            Scheduler::Sequential => "seq",
            Scheduler::Static => "static",
            Scheduler::Dynamic => "dynamic",
        }
    }

    pub fn parse(text: &str) -> Option<Scheduler> {
        match text {
            "seq" | "sequential" => Some(Scheduler::Sequential),
            "static" => Some(Scheduler::Static),
            "dynamic" => Some(Scheduler::Dynamic),
            _ => None,
        }
    }
}

/// Runs the selected scheduler.
pub fn solve(
    plp: &ParametricLP,
    d0: RatVec,
    scheduler: Scheduler,
    threads: usize,
    config: &SolveConfig,
) -> Result<PlpSolution, PlpError> {
    match scheduler {
        Scheduler::Sequential => solve_sequential(plp, d0, config),
        Scheduler::Static => crate::parallel::solve_static(plp, d0, threads, config),
        Scheduler::Dynamic => crate::parallel::solve_dynamic(plp, d0, threads, config),
    }
}
