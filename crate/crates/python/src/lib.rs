//! Python bindings. Rationals cross the boundary as `Rat` objects or as
//! strings such as `"7/2"`; skeleta and complexes round-trip through the
//! same JSON documents the command line tool reads and writes.

use pyo3::basic::CompareOp;
use pyo3::exceptions::{PyKeyError, PyValueError};
use pyo3::prelude::*;

use tropskel::certify::{self, Certificate};
use tropskel::elimination::{self, LatticeMap};
use tropskel::newton::{self, Polynomial};
use tropskel::potential::{solve_p1_function, solve_slope};
use tropskel::skeleton::{build_p1_skeleton, build_tate_skeleton, Puncture, SkeletonKind};
use tropskel::{render, scenario, schema, tropicalize};

fn err(e: tropskel::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn parse_rat(s: &str) -> PyResult<tropskel::Rat> {
    s.parse().map_err(err)
}

fn parse_json(s: &str) -> PyResult<serde_json::Value> {
    serde_json::from_str(s).map_err(|e| PyValueError::new_err(e.to_string()))
}

/// Accepts a `Rat`, an `int` or a string.
fn to_rat(obj: &Bound<'_, PyAny>) -> PyResult<tropskel::Rat> {
    if let Ok(r) = obj.extract::<PyRef<'_, Rat>>() {
        return Ok(r.0.clone());
    }
    if let Ok(n) = obj.extract::<i64>() {
        return Ok(tropskel::Rat::from_int(n));
    }
    parse_rat(&obj.extract::<String>()?)
}

/// Exact rational number.
#[pyclass(module = "tropskel", frozen, skip_from_py_object)]
#[derive(Clone)]
struct Rat(tropskel::Rat);

#[pymethods]
impl Rat {
    #[new]
    fn new(value: &Bound<'_, PyAny>) -> PyResult<Self> {
        to_rat(value).map(Rat)
    }

    #[getter]
    fn numerator(&self) -> String {
        self.0.numer().to_string()
    }

    #[getter]
    fn denominator(&self) -> String {
        self.0.denom().to_string()
    }

    fn __str__(&self) -> String {
        self.0.to_fraction_string()
    }

    fn __repr__(&self) -> String {
        format!("Rat('{}')", self.0.to_fraction_string())
    }

    fn __float__(&self) -> f64 {
        self.0.to_f64()
    }

    fn __hash__(&self) -> u64 {
        use std::hash::{Hash, Hasher};
        let mut h = std::collections::hash_map::DefaultHasher::new();
        self.0.to_fraction_string().hash(&mut h);
        h.finish()
    }

    fn __richcmp__(&self, other: &Bound<'_, PyAny>, op: CompareOp) -> PyResult<bool> {
        Ok(op.matches(self.0.cmp(&to_rat(other)?)))
    }

    fn __add__(&self, other: &Bound<'_, PyAny>) -> PyResult<Rat> {
        Ok(Rat(&self.0 + &to_rat(other)?))
    }

    fn __sub__(&self, other: &Bound<'_, PyAny>) -> PyResult<Rat> {
        Ok(Rat(&self.0 - &to_rat(other)?))
    }

    fn __mul__(&self, other: &Bound<'_, PyAny>) -> PyResult<Rat> {
        Ok(Rat(&self.0 * &to_rat(other)?))
    }

    fn __truediv__(&self, other: &Bound<'_, PyAny>) -> PyResult<Rat> {
        let d = to_rat(other)?;
        if d.is_zero() {
            return Err(pyo3::exceptions::PyZeroDivisionError::new_err("division by zero"));
        }
        Ok(Rat(&self.0 / &d))
    }

    fn __neg__(&self) -> Rat {
        Rat(-&self.0)
    }
}

/// Metric graph with rays, either a tree built from points of P^1 or a
/// circle of given length.
#[pyclass(module = "tropskel", frozen)]
struct Skeleton(tropskel::Skeleton);

#[pymethods]
impl Skeleton {
    /// Skeleton of P^1 minus the given `(id, point)` pairs, points written
    /// as Puiseux series in `t` or `p`, e.g. `"2*t^(1/3)"`.
    #[staticmethod]
    #[pyo3(signature = (points, include_infinity = true))]
    fn p1(points: Vec<(String, String)>, include_infinity: bool) -> PyResult<Self> {
        let ps = points
            .into_iter()
            .map(|(id, lit)| Ok(Puncture::new(id, lit.parse().map_err(err)?)))
            .collect::<PyResult<Vec<_>>>()?;
        build_p1_skeleton(&ps, include_infinity).map(Skeleton).map_err(err)
    }

    /// Circle of length `length` with punctures at the given positions.
    #[staticmethod]
    fn tate(length: &Bound<'_, PyAny>, points: Vec<(String, Bound<'_, PyAny>)>) -> PyResult<Self> {
        let ps = points.iter().map(|(id, x)| Ok((id.clone(), to_rat(x)?))).collect::<PyResult<Vec<_>>>()?;
        build_tate_skeleton(&to_rat(length)?, &ps).map(Skeleton).map_err(err)
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        schema::skeleton_from_json(&parse_json(text)?).map(Skeleton).map_err(err)
    }

    fn to_json(&self) -> String {
        schema::skeleton_to_json(&self.0).to_string()
    }

    #[getter]
    fn betti_number(&self) -> usize {
        self.0.betti_number()
    }

    #[getter]
    fn vertices(&self) -> Vec<String> {
        self.0.vertices.iter().map(|v| v.label.clone()).collect()
    }

    /// `(u, v, length)` for every edge, endpoints as vertex indices.
    #[getter]
    fn edges(&self) -> Vec<(usize, usize, Rat)> {
        self.0.edges.iter().map(|e| (e.u, e.v, Rat(e.length.clone()))).collect()
    }

    /// `(base vertex, puncture)` for every ray.
    #[getter]
    fn rays(&self) -> Vec<(usize, String)> {
        self.0.rays.iter().map(|r| (r.base, r.puncture.clone())).collect()
    }

    fn svg(&self) -> String {
        render::render_skeleton_svg(&self.0)
    }

    fn __repr__(&self) -> String {
        format!("Skeleton({} vertices, {} edges, {} rays)", self.0.vertices.len(), self.0.edges.len(), self.0.rays.len())
    }
}

/// Piecewise linear function on a skeleton.
#[pyclass(module = "tropskel", frozen)]
struct PLFunction {
    f: tropskel::PLFunction,
    json: String,
}

#[pymethods]
impl PLFunction {
    #[getter]
    fn edge_slopes(&self) -> Vec<i64> {
        self.f.edge_slopes.clone()
    }

    #[getter]
    fn ray_slopes(&self) -> Vec<i64> {
        self.f.ray_slopes.clone()
    }

    /// Value at each vertex.
    #[getter]
    fn values(&self) -> Vec<Rat> {
        self.f.values.iter().cloned().map(Rat).collect()
    }

    fn to_json(&self) -> String {
        self.json.clone()
    }
}

/// Weighted rational polyhedral complex of dimension one.
#[pyclass(module = "tropskel", frozen)]
struct Complex(tropskel::TropicalComplex);

#[pymethods]
impl Complex {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        schema::complex_from_json(&parse_json(text)?).map(Complex).map_err(err)
    }

    fn to_json(&self) -> String {
        schema::complex_to_json(&self.0).to_string()
    }

    #[getter]
    fn dim(&self) -> usize {
        self.0.dim
    }

    #[getter]
    fn vertices(&self) -> Vec<Vec<Rat>> {
        self.0.vertices.iter().map(|p| p.iter().cloned().map(Rat).collect()).collect()
    }

    /// `(u, v, multiplicity)` for every bounded edge.
    #[getter]
    fn segments(&self) -> Vec<(usize, usize, u64)> {
        self.0.segments.iter().map(|s| (s.u, s.v, s.mult)).collect()
    }

    /// `(base vertex, primitive direction, multiplicity)` for every ray.
    #[getter]
    fn rays(&self) -> Vec<(usize, Vec<i64>, u64)> {
        self.0.rays.iter().map(|r| (r.base, r.dir.clone(), r.mult)).collect()
    }

    fn segment_length(&self, i: usize) -> PyResult<Rat> {
        if i >= self.0.segments.len() {
            return Err(PyKeyError::new_err(i));
        }
        Ok(Rat(self.0.segment_length(i)))
    }

    /// Total lattice length of the segments lying on cycles.
    fn cycle_length(&self) -> Rat {
        Rat(self.0.cycle_segments().into_iter().map(|i| self.0.segment_length(i)).sum())
    }

    fn is_balanced(&self) -> bool {
        self.0.check_balancing().passed()
    }

    fn merge_collinear(&self) -> Complex {
        Complex(self.0.merge_collinear())
    }

    fn svg(&self) -> PyResult<String> {
        render::render_complex_svg(&self.0).map_err(err)
    }

    fn certify_faithful(&self, genus: usize) -> Verdict {
        Verdict::from(certify::certify_faithful(&self.0, genus))
    }

    fn kmm_check(&self, val_j: &Bound<'_, PyAny>) -> PyResult<Verdict> {
        certify::kmm_check(&self.0, &to_rat(val_j)?).map(Verdict::from).map_err(err)
    }

    fn vertex_mult_one(&self, vertex: usize) -> PyResult<Verdict> {
        if vertex >= self.0.vertices.len() {
            return Err(PyKeyError::new_err(vertex));
        }
        Ok(Verdict::from(certify::vertex_mult_one(&self.0, vertex)))
    }

    fn well_spaced(&self, normal: Vec<i64>, level: &Bound<'_, PyAny>) -> PyResult<Verdict> {
        certify::well_spaced_check(&self.0, &normal, &to_rat(level)?).map(Verdict::from).map_err(err)
    }

    fn __eq__(&self, other: &Complex) -> bool {
        self.0.canonical() == other.0.canonical()
    }

    fn __repr__(&self) -> String {
        format!("Complex(dim={}, {} vertices, {} segments, {} rays)", self.0.dim, self.0.vertices.len(), self.0.segments.len(), self.0.rays.len())
    }
}

/// Outcome of a certificate check.
#[pyclass(module = "tropskel", frozen, get_all)]
struct Verdict {
    verdict: String,
    rule: String,
    reason: String,
}

impl From<Certificate> for Verdict {
    fn from(c: Certificate) -> Self {
        Verdict { verdict: c.verdict.to_string(), rule: c.rule, reason: c.reason }
    }
}

#[pymethods]
impl Verdict {
    fn __repr__(&self) -> String {
        format!("Verdict({}, {})", self.verdict, self.reason)
    }
}

/// Solves for the function with the given divisor of zeros and poles.
/// On a P^1 skeleton built from field points `scalar_val` is the valuation
/// of the leading scalar; elsewhere the function is normalized to vanish
/// at the base vertex.
#[pyfunction]
#[pyo3(signature = (skeleton, divisor, scalar_val = None))]
fn potential(skeleton: &Skeleton, divisor: Vec<(String, i64)>, scalar_val: Option<Bound<'_, PyAny>>) -> PyResult<PLFunction> {
    let sk = &skeleton.0;
    let d = tropskel::Divisor::new(divisor);
    let known = sk.kind == SkeletonKind::P1 && sk.vertices[sk.base_vertex].ball.is_some();
    let f = if known {
        let c = scalar_val.map(|v| to_rat(&v)).transpose()?.unwrap_or_else(tropskel::Rat::zero);
        solve_p1_function(sk, &d, &c)
    } else {
        solve_slope(sk, &d)
    }
    .map_err(err)?;
    let json = schema::plfunction_to_json(sk, &f).to_string();
    Ok(PLFunction { f, json })
}

/// Image of the skeleton under the given coordinate functions, together
/// with the expansion factor of each edge.
#[pyfunction]
#[pyo3(signature = (skeleton, functions, merge = true))]
fn trop_map(skeleton: &Skeleton, functions: Vec<PyRef<'_, PLFunction>>, merge: bool) -> PyResult<(Complex, Vec<u64>)> {
    let fs: Vec<tropskel::PLFunction> = functions.iter().map(|f| f.f.clone()).collect();
    let (tc, rep) = tropicalize::trop_map(&skeleton.0, &fs).map_err(err)?;
    let tc = if merge { tc.merge_collinear() } else { tc };
    Ok((Complex(tc), rep.edge_expansions()))
}

/// Tropical curve of a plane polynomial with Puiseux coefficients.
#[pyfunction]
#[pyo3(signature = (polynomial, dehomogenize = false, merge = true))]
fn corner_locus(polynomial: &str, dehomogenize: bool, merge: bool) -> PyResult<Complex> {
    let tp = Polynomial::parse(polynomial, dehomogenize).and_then(|p| p.tropicalize()).map_err(err)?;
    let tc = newton::corner_locus(&tp).map_err(err)?;
    Ok(Complex(if merge { tc.merge_collinear() } else { tc }))
}

/// Pushforward along `x -> matrix x / degree`.
#[pyfunction]
#[pyo3(signature = (complex, matrix, degree = 1, merge = true))]
fn pushforward(complex: &Complex, matrix: Vec<Vec<i64>>, degree: u64, merge: bool) -> PyResult<Complex> {
    let map = LatticeMap::new(matrix, degree).map_err(err)?;
    let (tc, _) = elimination::pushforward(&complex.0, &map).map_err(err)?;
    Ok(Complex(if merge { tc.merge_collinear() } else { tc }))
}

/// Vertices of the Newton polygon recovered from a balanced plane curve.
#[pyfunction]
#[pyo3(signature = (complex, degree = 1))]
fn newton_polygon(complex: &Complex, degree: u64) -> PyResult<Vec<(i64, i64)>> {
    elimination::newton_polygon_from_curve(&complex.0, degree).map(|p| p.vertices).map_err(err)
}

/// `(name, summary)` of every registered scenario.
#[pyfunction]
fn scenarios() -> Vec<(String, String)> {
    scenario::list().into_iter().map(|(n, s)| (n.to_string(), s.to_string())).collect()
}

/// Runs one scenario and returns `(passed, report as JSON)`.
#[pyfunction]
fn run_scenario(name: &str) -> PyResult<(bool, String)> {
    let report = scenario::run_scenario(name).map_err(err)?;
    let json = serde_json::to_string(&report).map_err(|e| PyValueError::new_err(e.to_string()))?;
    Ok((report.passed(), json))
}

#[pymodule]
#[pyo3(name = "tropskel")]
fn tropskel_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Rat>()?;
    m.add_class::<Skeleton>()?;
    m.add_class::<PLFunction>()?;
    m.add_class::<Complex>()?;
    m.add_class::<Verdict>()?;
    m.add_function(wrap_pyfunction!(potential, m)?)?;
    m.add_function(wrap_pyfunction!(trop_map, m)?)?;
    m.add_function(wrap_pyfunction!(corner_locus, m)?)?;
    m.add_function(wrap_pyfunction!(pushforward, m)?)?;
    m.add_function(wrap_pyfunction!(newton_polygon, m)?)?;
    m.add_function(wrap_pyfunction!(scenarios, m)?)?;
    m.add_function(wrap_pyfunction!(run_scenario, m)?)?;
    Ok(())
}
