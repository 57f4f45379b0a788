//! Python module `pytoriclab`. Rationals cross the boundary as
//! `fractions.Fraction` (accepted also as `int` or `"p/q"` strings).

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyList;

use toriclab::geometry::json::{polytope_from_str, polytope_to_json};
use toriclab::lab;
use toriclab::rat::{fmt_rat, parse_rat};
use toriclab::{toric, GeometryError, Halfspace, IntVector, Polytope, PolytopeTuple, Rat, Report};

fn err(e: GeometryError) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_rat(obj: &Bound<'_, PyAny>) -> PyResult<Rat> {
    let s: String = obj.str()?.extract()?;
    parse_rat(&s).map_err(err)
}

fn to_rats(objs: &[Bound<'_, PyAny>]) -> PyResult<Vec<Rat>> {
    objs.iter().map(to_rat).collect()
}

fn int_vector(v: &[i64]) -> IntVector {
    v.iter().map(|&x| x.into()).collect()
}

fn fraction<'py>(py: Python<'py>, r: &Rat) -> PyResult<Bound<'py, PyAny>> {
    py.import("fractions")?.getattr("Fraction")?.call1((fmt_rat(r),))
}

fn report_dict<'py>(py: Python<'py>, r: &Report) -> PyResult<Bound<'py, PyAny>> {
    py.import("json")?.call_method1("loads", (r.to_json().to_string(),))
}

fn report_list<'py>(py: Python<'py>, rs: &[Report]) -> PyResult<Bound<'py, PyList>> {
    let items = rs.iter().map(|r| report_dict(py, r)).collect::<PyResult<Vec<_>>>()?;
    PyList::new(py, items)
}

#[pyclass(name = "Polytope", module = "pytoriclab", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyPolytope {
    inner: Polytope,
}

#[pymethods]
impl PyPolytope {
    /// Convex hull of rational points.
    #[new]
    fn new(points: Vec<Vec<Bound<'_, PyAny>>>) -> PyResult<Self> {
        let pts = points.iter().map(|p| to_rats(p)).collect::<PyResult<Vec<_>>>()?;
        Ok(PyPolytope { inner: Polytope::from_points(pts).map_err(err)? })
    }

    /// `{m : <m, normal> >= offset}` for each `(normal, offset)`.
    #[staticmethod]
    fn from_halfspaces(halfspaces: Vec<(Vec<i64>, Bound<'_, PyAny>)>, dim: usize) -> PyResult<Self> {
        let hs = halfspaces
            .iter()
            .map(|(n, c)| Ok(Halfspace::new(int_vector(n), to_rat(c)?)))
            .collect::<PyResult<Vec<_>>>()?;
        Ok(PyPolytope { inner: Polytope::from_halfspaces(&hs, dim).map_err(err)? })
    }

    #[staticmethod]
    fn from_json(s: &str) -> PyResult<Self> {
        Ok(PyPolytope { inner: polytope_from_str(s).map_err(err)? })
    }

    fn to_json(&self) -> String {
        polytope_to_json(&self.inner).to_string()
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    #[getter]
    fn intrinsic_dim(&self) -> usize {
        self.inner.intrinsic_dim()
    }

    fn volume<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        fraction(py, self.inner.volume())
    }

    fn vertices<'py>(&self, py: Python<'py>) -> PyResult<Vec<Vec<Bound<'py, PyAny>>>> {
        self.inner.vertices().iter().map(|v| v.iter().map(|x| fraction(py, x)).collect()).collect()
    }

    fn halfspaces<'py>(&self, py: Python<'py>) -> PyResult<Vec<(Vec<String>, Bound<'py, PyAny>)>> {
        self.inner
            .halfspaces()
            .iter()
            .map(|h| Ok((h.normal.iter().map(|x| x.to_string()).collect(), fraction(py, &h.offset)?)))
            .collect()
    }

    fn support_value<'py>(&self, py: Python<'py>, u: Vec<Bound<'py, PyAny>>) -> PyResult<Bound<'py, PyAny>> {
        fraction(py, &self.inner.support_value(&to_rats(&u)?).map_err(err)?)
    }

    fn minkowski_sum(&self, other: &PyPolytope) -> PyResult<Self> {
        Ok(PyPolytope { inner: self.inner.minkowski_sum(&other.inner).map_err(err)? })
    }

    fn scale(&self, factor: Bound<'_, PyAny>) -> PyResult<Self> {
        Ok(PyPolytope { inner: self.inner.scale(&to_rat(&factor)?).map_err(err)? })
    }

    fn translate(&self, v: Vec<Bound<'_, PyAny>>) -> PyResult<Self> {
        Ok(PyPolytope { inner: self.inner.translate(&to_rats(&v)?).map_err(err)? })
    }

    fn contains(&self, other: &PyPolytope) -> PyResult<bool> {
        self.inner.contains_body(&other.inner).map_err(err)
    }

    /// Slice `{<m, u> = t}` in lattice coordinates, or `None`.
    fn lattice_slice(&self, u: Vec<i64>, t: Bound<'_, PyAny>) -> PyResult<Option<Self>> {
        let s = self.inner.lattice_slice(&int_vector(&u), &to_rat(&t)?).map_err(err)?;
        Ok(s.map(|inner| PyPolytope { inner }))
    }

    fn __eq__(&self, other: &PyPolytope) -> bool {
        self.inner == other.inner
    }

    fn __repr__(&self) -> String {
        format!("Polytope({})", self.to_json())
    }
}

fn tuple(bodies: &[PyRef<'_, PyPolytope>]) -> PyResult<PolytopeTuple> {
    PolytopeTuple::new(bodies.iter().map(|b| b.inner.clone()).collect()).map_err(err)
}

#[pyfunction]
fn mixed_volume<'py>(py: Python<'py>, bodies: Vec<PyRef<'py, PyPolytope>>) -> PyResult<Bound<'py, PyAny>> {
    fraction(py, &toriclab::mixed_volume(&tuple(&bodies)?).map_err(err)?)
}

#[pyfunction]
fn mixed_volume_oracle<'py>(py: Python<'py>, bodies: Vec<PyRef<'py, PyPolytope>>) -> PyResult<Bound<'py, PyAny>> {
    fraction(py, &toriclab::mixed_volume_oracle(&tuple(&bodies)?).map_err(err)?)
}

/// Atoms `(direction, weight)` of the mixed area measure.
#[pyfunction]
#[pyo3(signature = (bodies, dim = None))]
fn mixed_area_measure<'py>(
    py: Python<'py>,
    bodies: Vec<PyRef<'py, PyPolytope>>,
    dim: Option<usize>,
) -> PyResult<Vec<(Vec<String>, Bound<'py, PyAny>)>> {
    let t = match (bodies.is_empty(), dim) {
        (true, Some(n)) => PolytopeTuple::empty(n),
        _ => tuple(&bodies)?,
    };
    let m = toriclab::mixed_area_measure(&t).map_err(err)?;
    m.atoms()
        .iter()
        .map(|a| Ok((a.direction.iter().map(|x| x.to_string()).collect(), fraction(py, &a.weight)?)))
        .collect()
}

#[pyfunction]
fn minkowski_check<'py>(
    py: Python<'py>,
    bodies: Vec<PyRef<'py, PyPolytope>>,
    q: &PyPolytope,
    q_prime: &PyPolytope,
) -> PyResult<Bound<'py, PyAny>> {
    let t = if bodies.is_empty() { PolytopeTuple::empty(q.inner.dim()) } else { tuple(&bodies)? };
    report_dict(py, &toriclab::minkowski_formula_check(&t, &q.inner, &q_prime.inner).map_err(err)?)
}

#[pyclass(name = "ToricData", module = "pytoriclab", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyToricData {
    inner: toriclab::ToricData,
}

#[pymethods]
impl PyToricData {
    #[new]
    fn new(rays: Vec<Vec<i64>>, coeffs: Vec<Bound<'_, PyAny>>) -> PyResult<Self> {
        let dim = rays.first().map_or(0, Vec::len);
        let rays = rays.iter().map(|r| int_vector(r)).collect();
        Ok(PyToricData { inner: toriclab::ToricData::new(dim, rays, to_rats(&coeffs)?).map_err(err)? })
    }

    fn newton_polytope(&self) -> PyResult<PyPolytope> {
        Ok(PyPolytope { inner: toric::newton_polytope(&self.inner).map_err(err)? })
    }

    /// `(nu, nu_max, width)` along a ray.
    fn width<'py>(
        &self,
        py: Python<'py>,
        ray: usize,
    ) -> PyResult<(Bound<'py, PyAny>, Bound<'py, PyAny>, Bound<'py, PyAny>)> {
        let w = toric::nu_max_and_width(&self.inner, ray).map_err(err)?;
        Ok((fraction(py, &w.nu)?, fraction(py, &w.nu_max)?, fraction(py, &w.width)?))
    }

    fn to_json(&self) -> String {
        self.inner.to_json().to_string()
    }
}

#[pyclass(name = "NewtonBody", module = "pytoriclab", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyNewtonBody {
    inner: toriclab::NewtonBody,
}

#[pymethods]
impl PyNewtonBody {
    #[new]
    fn new(ambient: &PyToricData, body: &PyPolytope) -> PyResult<Self> {
        Ok(PyNewtonBody { inner: toriclab::NewtonBody::new(ambient.inner.clone(), body.inner.clone()).map_err(err)? })
    }

    #[staticmethod]
    fn full(ambient: &PyToricData) -> PyResult<Self> {
        Ok(PyNewtonBody { inner: toriclab::NewtonBody::full(ambient.inner.clone()).map_err(err)? })
    }

    fn body(&self) -> PyPolytope {
        PyPolytope { inner: self.inner.body().clone() }
    }

    fn lelong_number<'py>(&self, py: Python<'py>, ray: usize) -> PyResult<Bound<'py, PyAny>> {
        fraction(py, &toric::lelong_number(&self.inner, ray).map_err(err)?)
    }

    fn current_volume<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        fraction(py, &toric::current_volume(&self.inner))
    }

    /// `(value, out_of_range)`.
    fn restricted_volume<'py>(
        &self,
        py: Python<'py>,
        ray: usize,
        t: Bound<'py, PyAny>,
    ) -> PyResult<(Bound<'py, PyAny>, bool)> {
        let r = toric::restricted_volume(&self.inner, ray, &to_rat(&t)?).map_err(err)?;
        Ok((fraction(py, &r.value)?, r.out_of_range))
    }

    fn to_json(&self) -> String {
        self.inner.to_json().to_string()
    }
}

#[pyfunction]
fn mixed_restricted_volume<'py>(
    py: Python<'py>,
    bodies: Vec<PyRef<'py, PyNewtonBody>>,
    ray: usize,
) -> PyResult<Bound<'py, PyAny>> {
    let bs: Vec<toriclab::NewtonBody> = bodies.iter().map(|b| b.inner.clone()).collect();
    fraction(py, &toric::mixed_restricted_volume(&bs, ray).map_err(err)?)
}

/// Seeded verification batch; one report dict per check.
#[pyfunction]
#[pyo3(signature = (statement, dim, seeds, vertex_budget = None))]
fn verify<'py>(
    py: Python<'py>,
    statement: &str,
    dim: usize,
    seeds: &str,
    vertex_budget: Option<usize>,
) -> PyResult<Bound<'py, PyList>> {
    let opts = lab::BatchOptions { vertex_budget, ..lab::BatchOptions::default() };
    let range = lab::parse_seed_range(seeds).map_err(err)?;
    let reports = py.detach(|| lab::run_batch(statement, dim, range, &opts)).map_err(err)?;
    report_list(py, &reports)
}

#[pyfunction]
fn reproduce_count_su<'py>(
    py: Python<'py>,
    n: usize,
    eps: Bound<'py, PyAny>,
    ts: Vec<Bound<'py, PyAny>>,
) -> PyResult<Bound<'py, PyList>> {
    report_list(py, &lab::reproduce_count_su(n, &to_rat(&eps)?, &to_rats(&ts)?).map_err(err)?)
}

/// `(estimate, stderr)`.
#[pyfunction]
fn monte_carlo_volume(p: &PyPolytope, samples: u64, seed: u64) -> PyResult<(f64, f64)> {
    let mc = lab::monte_carlo_volume(&p.inner, samples, seed).map_err(err)?;
    Ok((mc.estimate, mc.stderr))
}

#[pymodule]
fn pytoriclab(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyPolytope>()?;
    m.add_class::<PyToricData>()?;
    m.add_class::<PyNewtonBody>()?;
    m.add_function(wrap_pyfunction!(mixed_volume, m)?)?;
    m.add_function(wrap_pyfunction!(mixed_volume_oracle, m)?)?;
    m.add_function(wrap_pyfunction!(mixed_area_measure, m)?)?;
    m.add_function(wrap_pyfunction!(minkowski_check, m)?)?;
    m.add_function(wrap_pyfunction!(mixed_restricted_volume, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(reproduce_count_su, m)?)?;
    m.add_function(wrap_pyfunction!(monte_carlo_volume, m)?)?;
    m.add("STATEMENTS", lab::STATEMENTS.to_vec())?;
    Ok(())
}
