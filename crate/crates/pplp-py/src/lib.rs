//! Python bindings: polyhedra, projection, Fourier-Motzkin, and the
//! parametric solver, with rationals crossing the boundary as strings.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use pplp::explore::{PlpSolution, Scheduler};
use pplp::io;
use pplp::plp::{instantiate_objective, ParametricLP, SolveConfig};
use pplp::poly;
use pplp::rat::{dot, parse_rat, Rat, RatVec};

fn rat_from_py(text: &Bound<'_, PyAny>) -> PyResult<Rat> {
    if let Ok(i) = text.extract::<i64>() {
        return Ok(pplp::rat::rat_int(i));
    }
    let s: String = text.extract()?;
    parse_rat(&s).map_err(PyValueError::new_err)
}

fn vec_from_py(items: &Bound<'_, PyAny>) -> PyResult<RatVec> {
    let mut out = Vec::new();
    for item in items.try_iter()? {
        out.push(rat_from_py(&item?)?);
    }
    Ok(out)
}

fn scheduler_from_str(name: &str) -> PyResult<Scheduler> {
    Scheduler::parse(name)
        .ok_or_else(|| PyValueError::new_err(format!("unknown scheduler `{name}`")))
}

/// A rational polyhedron `{ x : a_i . x <= b_i }`.
#[pyclass(name = "Polyhedron")]
#[derive(Clone)]
struct PyPolyhedron {
    inner: poly::Polyhedron,
}

#[pymethods]
impl PyPolyhedron {
    /// Build from a row list: each row is `(coeffs, rhs)` with rationals
    /// given as ints or strings like `"3/4"`.
    #[new]
    fn new(nvars: usize, rows: &Bound<'_, PyAny>) -> PyResult<Self> {
        let mut parsed = Vec::new();
        for row in rows.try_iter()? {
            let row = row?;
            let pair: (Bound<'_, PyAny>, Bound<'_, PyAny>) = row.extract()?;
            let coeffs = vec_from_py(&pair.0)?;
            if coeffs.len() != nvars {
                return Err(PyValueError::new_err(format!(
                    "row has {} coefficients, expected {nvars}",
                    coeffs.len()
                )));
            }
            parsed.push((coeffs, rat_from_py(&pair.1)?));
        }
        Ok(PyPolyhedron {
            inner: poly::Polyhedron::new(nvars, parsed),
        })
    }

    /// Parse the `.poly` text format.
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        io::parse_polyhedron(text)
            .map(|inner| PyPolyhedron { inner })
            .map_err(|e| PyValueError::new_err(e.to_string()))
    }

    #[getter]
    fn nvars(&self) -> usize {
        self.inner.nvars()
    }

    fn rows(&self) -> Vec<(Vec<String>, String)> {
        self.inner
            .rows()
            .iter()
            .map(|(a, b)| (a.iter().map(|v| v.to_string()).collect(), b.to_string()))
            .collect()
    }

    /// Render in the `.poly` text format.
    fn emit(&self) -> String {
        io::emit_polyhedron(&self.inner)
    }

    fn includes(&self, other: &PyPolyhedron) -> PyResult<bool> {
        poly::includes(&self.inner, &other.inner)
            .map_err(|e| PyRuntimeError::new_err(e.to_string()))
    }

    /// Semantic equality (mutual inclusion).
    fn equals(&self, other: &PyPolyhedron) -> PyResult<bool> {
        poly::poly_equal(&self.inner, &other.inner)
            .map_err(|e| PyRuntimeError::new_err(e.to_string()))
    }

    fn contains(&self, point: &Bound<'_, PyAny>) -> PyResult<bool> {
        let x = vec_from_py(point)?;
        if x.len() != self.inner.nvars() {
            return Err(PyValueError::new_err("point has the wrong dimension"));
        }
        Ok(self.inner.contains(&x))
    }

    /// Strictly interior point (Chebyshev-style), as rational strings.
    fn interior_point(&self) -> PyResult<Vec<String>> {
        poly::interior_point(&self.inner)
            .map(|x| x.iter().map(|v| v.to_string()).collect())
            .map_err(|e| PyRuntimeError::new_err(e.to_string()))
    }

    fn __repr__(&self) -> String {
        format!(
            "Polyhedron(nvars={}, rows={})",
            self.inner.nvars(),
            self.inner.rows().len()
        )
    }
}

/// A solved parametric program: regions, spanning tree, statistics.
#[pyclass(name = "Solution")]
struct PySolution {
    solution: PlpSolution,
    plp: ParametricLP,
}

#[pymethods]
impl PySolution {
    #[getter]
    fn region_count(&self) -> usize {
        self.solution.regions.len()
    }

    /// Region dump as a JSON string (ids, bases, optima, constraints,
    /// parent edges).
    fn regions_json(&self) -> String {
        io::regions_json(&self.solution)
    }

    /// Spanning tree in DOT format.
    fn dot(&self) -> String {
        io::dot_tree(&self.solution)
    }

    fn stats(&self, py: Python<'_>) -> PyResult<Py<PyDict>> {
        let s = &self.solution.stats;
        let d = PyDict::new(py);
        d.set_item("regions", s.regions)?;
        d.set_item("tasks_spawned", s.tasks_spawned)?;
        d.set_item("tasks_completed", s.tasks_completed)?;
        d.set_item("tasks_aborted_covered", s.tasks_aborted_covered)?;
        d.set_item("tasks_aborted_basis", s.tasks_aborted_basis)?;
        d.set_item("retries", s.retries)?;
        d.set_item("repairs", s.repairs)?;
        d.set_item("exact_fallbacks", s.exact_fallbacks)?;
        d.set_item("degenerate_regions", s.degenerate_regions)?;
        d.set_item("wall_ms", s.wall_ms)?;
        d.set_item("threads", s.threads)?;
        d.set_item("scheduler", s.scheduler.clone())?;
        Ok(d.into())
    }

    /// Exact optimal value at a parameter point, as a rational string;
    /// None when no region covers it.
    fn value_at(&self, point: &Bound<'_, PyAny>) -> PyResult<Option<String>> {
        let mu = vec_from_py(point)?;
        if mu.len() != self.plp.param_count() {
            return Err(PyValueError::new_err("point has the wrong dimension"));
        }
        Ok(self.solution.value_at(&self.plp, &mu).map(|v| v.to_string()))
    }

    /// Basis (sorted column indices) of the region covering the point.
    fn covering_basis(&self, point: &Bound<'_, PyAny>) -> PyResult<Option<Vec<usize>>> {
        let mu = vec_from_py(point)?;
        Ok(self
            .solution
            .covering_region(&mu)
            .map(|r| r.basis.indices().to_vec()))
    }

    /// Exact optimum of the covering region, as rational strings.
    fn optimum_at(&self, point: &Bound<'_, PyAny>) -> PyResult<Option<Vec<String>>> {
        let mu = vec_from_py(point)?;
        Ok(self
            .solution
            .covering_region(&mu)
            .map(|r| r.optimum.iter().map(|v| v.to_string()).collect()))
    }

    /// Objective vector instantiated at a parameter point.
    fn objective_at(&self, point: &Bound<'_, PyAny>) -> PyResult<Vec<String>> {
        let mu = vec_from_py(point)?;
        if mu.len() != self.plp.param_count() {
            return Err(PyValueError::new_err("point has the wrong dimension"));
        }
        let c = instantiate_objective(&self.plp, &mu);
        Ok(c.iter().map(|v| v.to_string()).collect())
    }

    fn __repr__(&self) -> String {
        format!(
            "Solution(regions={}, scheduler={})",
            self.solution.regions.len(),
            self.solution.stats.scheduler
        )
    }
}

/// Project a polyhedron onto the variables not listed in `eliminated`
/// (0-based). Returns `(projection, solution)`; `solution` is None when
/// the projection is trivially the full space.
#[pyfunction]
#[pyo3(signature = (polyhedron, eliminated, scheduler="seq", threads=1))]
fn project(
    py: Python<'_>,
    polyhedron: &PyPolyhedron,
    eliminated: Vec<usize>,
    scheduler: &str,
    threads: usize,
) -> PyResult<(PyPolyhedron, Option<Py<PySolution>>)> {
    let sched = scheduler_from_str(scheduler)?;
    let config = SolveConfig::default();
    let encoded = match poly::encode_projection(&polyhedron.inner, &eliminated) {
        Ok((plp_instance, _ctx)) => Some(plp_instance),
        Err(poly::PolyError::TrivialProjection) => None,
        Err(e) => return Err(PyRuntimeError::new_err(e.to_string())),
    };
    let out = poly::project(&polyhedron.inner, &eliminated, sched, threads, &config)
        .map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    let solution = match (out.solution, encoded) {
        (Some(solution), Some(plp_instance)) => Some(Py::new(
            py,
            PySolution {
                solution,
                plp: plp_instance,
            },
        )?),
        _ => None,
    };
    Ok((
        PyPolyhedron {
            inner: out.polyhedron,
        },
        solution,
    ))
}

/// Fourier-Motzkin elimination with LP-based redundancy pruning; the
/// independent oracle for the projection path.
#[pyfunction]
fn fourier_motzkin(polyhedron: &PyPolyhedron, eliminated: Vec<usize>) -> PyResult<PyPolyhedron> {
    poly::fourier_motzkin(&polyhedron.inner, &eliminated)
        .map(|inner| PyPolyhedron { inner })
        .map_err(|e| PyRuntimeError::new_err(e.to_string()))
}

/// Solve a parametric program given in the `.plp` text format.
#[pyfunction]
#[pyo3(signature = (text, seed_point=None, scheduler="seq", threads=1))]
fn solve_plp(
    text: &str,
    seed_point: Option<&Bound<'_, PyAny>>,
    scheduler: &str,
    threads: usize,
) -> PyResult<PySolution> {
    let plp = io::parse_plp(text).map_err(|e| PyValueError::new_err(e.to_string()))?;
    let d0 = match seed_point {
        Some(p) => {
            let v = vec_from_py(p)?;
            if v.len() != plp.param_count() {
                return Err(PyValueError::new_err(format!(
                    "seed point has {} entries, expected {}",
                    v.len(),
                    plp.param_count()
                )));
            }
            v
        }
        None => vec![pplp::rat::rat_int(1); plp.param_count()],
    };
    let sched = scheduler_from_str(scheduler)?;
    let solution = pplp::explore::solve(&plp, d0, sched, threads, &SolveConfig::default())
        .map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    Ok(PySolution { solution, plp })
}

/// Deterministic random instance generator (always full-dimensional).
#[pyfunction]
#[pyo3(signature = (nvars, nrows, density=0.6, seed=1))]
fn random_polyhedron(nvars: usize, nrows: usize, density: f64, seed: u64) -> PyPolyhedron {
    PyPolyhedron {
        inner: pplp::gen::random_polyhedron(&pplp::gen::GenParams {
            nvars,
            nrows,
            density,
            seed,
        }),
    }
}

/// Exact dot product of two rational vectors given as strings.
#[pyfunction]
fn rational_dot(a: &Bound<'_, PyAny>, b: &Bound<'_, PyAny>) -> PyResult<String> {
    let va = vec_from_py(a)?;
    let vb = vec_from_py(b)?;
    if va.len() != vb.len() {
        return Err(PyValueError::new_err("length mismatch"));
    }
    Ok(dot(&va, &vb).to_string())
}

#[pymodule]
fn pplp_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyPolyhedron>()?;
    m.add_class::<PySolution>()?;
    m.add_function(wrap_pyfunction!(project, m)?)?;
    m.add_function(wrap_pyfunction!(fourier_motzkin, m)?)?;
    m.add_function(wrap_pyfunction!(solve_plp, m)?)?;
    m.add_function(wrap_pyfunction!(random_polyhedron, m)?)?;
    m.add_function(wrap_pyfunction!(rational_dot, m)?)?;
    Ok(())
}
