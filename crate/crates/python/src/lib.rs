//! Python bindings: spaces, states, n-th products and the verification reports.
//!
//! Reports cross the boundary as plain dicts built from their JSON form.

use std::collections::BTreeMap;

use pyo3::create_exception;
use pyo3::exceptions::PyException;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use scva_core::brst::{budget_from_env, cohomology_dims, cohomology_ring_check};
use scva_core::characters::{compare_characters, enumerate_character, product_character, Formula};
use scva_core::expr::{format_state, parse_state};
use scva_core::holonomy::{cy_check, g2_check, qk_check};
use scva_core::rational::{format_rational, parse_rational};
use scva_core::structures::{
    conformal_boson, conformal_fermion, n1_from_n2, n1_structure, n2_structure, n4_structure,
    polarized_fermion_conformal, twist, untwist, verify, StructureSpec, Twist,
};
use scva_core::vertex::{nth_product, ope_singular, translate};
use scva_core::{Error, Grading, Rational, Sector, SpaceSpec, State};

create_exception!(pyscva, ScvaError, PyException);
create_exception!(pyscva, BudgetExceeded, ScvaError);

fn err(e: Error) -> PyErr {
    match e {
        Error::BudgetExceeded { .. } => BudgetExceeded::new_err(e.to_string()),
        other => ScvaError::new_err(other.to_string()),
    }
}

fn number(text: &str) -> PyResult<Rational> {
    parse_rational(text).map_err(err)
}

fn to_py(py: Python<'_>, value: &serde_json::Value) -> PyResult<Py<PyAny>> {
    let json = py.import("json")?;
    Ok(json.call_method1("loads", (value.to_string(),))?.unbind())
}

/// A free-field space: orthonormal (a, phi) or polarized (b, c, psi, phi).
#[pyclass(name = "Space", module = "pyscva", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PySpace {
    inner: SpaceSpec,
}

#[pymethods]
impl PySpace {
    #[new]
    #[pyo3(signature = (dim, sector = "NS", polarized = false, quaternionic = false))]
    fn new(dim: usize, sector: &str, polarized: bool, quaternionic: bool) -> PyResult<Self> {
        let sector: Sector = sector.parse().map_err(err)?;
        let inner = SpaceSpec::new(dim, sector, polarized, quaternionic).map_err(err)?;
        Ok(PySpace { inner })
    }

    #[staticmethod]
    fn orthonormal(dim: usize) -> PyResult<Self> {
        Ok(PySpace { inner: SpaceSpec::orthonormal(dim).map_err(err)? })
    }

    /// Polarized space with `dim T' = dim_prime`, so `dim T = 2 dim_prime`.
    #[staticmethod]
    #[pyo3(signature = (dim_prime, sector = "NS"))]
    fn polarized(dim_prime: usize, sector: &str) -> PyResult<Self> {
        let sector: Sector = sector.parse().map_err(err)?;
        Ok(PySpace { inner: SpaceSpec::polarized(dim_prime, sector).map_err(err)? })
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    #[getter]
    fn sector(&self) -> String {
        self.inner.sector().to_string()
    }

    #[getter]
    fn is_polarized(&self) -> bool {
        self.inner.is_polarized()
    }

    fn vacuum(&self) -> PyState {
        PyState { space: self.inner.clone(), inner: State::vacuum() }
    }

    /// Parse a state such as `"1/2 a1_{-1} phi2_{-1/2}|0>"`.
    fn parse(&self, text: &str) -> PyResult<PyState> {
        let inner = parse_state(text, &self.inner).map_err(err)?;
        Ok(PyState { space: self.inner.clone(), inner })
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Space({})", self.inner)
    }
}

/// A state with exact rational coefficients, tied to its space.
#[pyclass(name = "State", module = "pyscva", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyState {
    space: SpaceSpec,
    inner: State,
}

impl PyState {
    fn same_space(&self, other: &PyState) -> PyResult<()> {
        if self.space != other.space {
            return Err(ScvaError::new_err(format!("states live in different spaces: {} and {}", self.space, other.space)));
        }
        Ok(())
    }

    fn wrap(&self, inner: State) -> PyState {
        PyState { space: self.space.clone(), inner }
    }
}

#[pymethods]
impl PyState {
    /// `self_(n) other`.
    fn nth_product(&self, other: &PyState, n: i64) -> PyResult<PyState> {
        self.same_space(other)?;
        Ok(self.wrap(nth_product(&self.space, &self.inner, &other.inner, n)))
    }

    /// Singular OPE part as `{pole_order: State}`.
    fn ope(&self, other: &PyState) -> PyResult<BTreeMap<u32, PyState>> {
        self.same_space(other)?;
        let sing = ope_singular(&self.space, &self.inner, &other.inner);
        Ok(sing.poles.into_iter().map(|(k, s)| (k, self.wrap(s))).collect())
    }

    fn translate(&self) -> PyState {
        self.wrap(translate(&self.space, &self.inner))
    }

    /// Multiply by a rational given as text, e.g. `"-3/2"`.
    fn scale(&self, factor: &str) -> PyResult<PyState> {
        Ok(self.wrap(self.inner.scale(&number(factor)?)))
    }

    fn is_zero(&self) -> bool {
        self.inner.is_zero()
    }

    /// `[(monomial text, coefficient text)]` in canonical order.
    fn terms(&self) -> Vec<(String, String)> {
        self.inner
            .terms()
            .map(|(m, c)| {
                let unit = State::from_monomial(m.clone(), Rational::from_integer(1.into()));
                (format_state(&self.space, &unit), format_rational(c))
            })
            .collect()
    }

    fn __add__(&self, other: &PyState) -> PyResult<PyState> {
        self.same_space(other)?;
        Ok(self.wrap(self.inner.clone() + other.inner.clone()))
    }

    fn __sub__(&self, other: &PyState) -> PyResult<PyState> {
        self.same_space(other)?;
        Ok(self.wrap(self.inner.clone() - other.inner.clone()))
    }

    fn __neg__(&self) -> PyState {
        self.wrap(-self.inner.clone())
    }

    fn __eq__(&self, other: &PyState) -> bool {
        self.space == other.space && self.inner == other.inner
    }

    fn __str__(&self) -> String {
        format_state(&self.space, &self.inner)
    }

    fn __repr__(&self) -> String {
        format!("State({})", format_state(&self.space, &self.inner))
    }
}

fn build(kind: &str, space: &SpaceSpec, lam: Option<&str>, a: Option<&str>, tw: Option<&str>) -> PyResult<StructureSpec> {
    let st = match kind {
        "virasoro-boson" => conformal_boson(space),
        "virasoro-fermion" => conformal_fermion(space),
        "lambda" => polarized_fermion_conformal(space, &number(lam.unwrap_or("1/2"))?),
        "n1" => n1_structure(space),
        "n2" => n2_structure(space),
        "n1-from-n2" => {
            let a = number(a.unwrap_or("1"))?;
            n2_structure(space).and_then(|st| n1_from_n2(&st, &a))
        }
        "n4" => n4_structure(space),
        "topological" => {
            let which: Twist = tw.unwrap_or("A").parse().map_err(err)?;
            n2_structure(space).and_then(|st| twist(&st, which))
        }
        other => return Err(ScvaError::new_err(format!("unknown structure kind {other:?}"))),
    };
    st.map_err(err)
}

/// The generating vectors of a structure as `{name: State}`.
#[pyfunction]
#[pyo3(signature = (kind, space, lam = None, a = None, twist = None))]
fn structure(kind: &str, space: &PySpace, lam: Option<&str>, a: Option<&str>, twist: Option<&str>) -> PyResult<BTreeMap<String, PyState>> {
    let st = build(kind, &space.inner, lam, a, twist)?;
    Ok(st
        .vectors
        .into_iter()
        .map(|(k, v)| (k, PyState { space: space.inner.clone(), inner: v }))
        .collect())
}

/// Relation-by-relation verification report.
#[pyfunction]
#[pyo3(signature = (kind, space, lam = None, a = None, twist = None))]
fn verify_structure(
    py: Python<'_>,
    kind: &str,
    space: &PySpace,
    lam: Option<&str>,
    a: Option<&str>,
    twist: Option<&str>,
) -> PyResult<Py<PyAny>> {
    let st = build(kind, &space.inner, lam, a, twist)?;
    let report = verify(&st).map_err(err)?;
    let out = to_py(py, &report.to_json())?;
    out.bind(py).cast::<PyDict>()?.set_item("passed", report.passed())?;
    Ok(out)
}

/// Twist an N=2 structure and untwist it again; true iff the round trip is exact.
#[pyfunction]
fn twist_round_trip(space: &PySpace, which: &str) -> PyResult<bool> {
    let which: Twist = which.parse().map_err(err)?;
    let n2 = n2_structure(&space.inner).map_err(err)?;
    let back = untwist(&twist(&n2, which).map_err(err)?, which).map_err(err)?;
    Ok(back.vectors == n2.vectors)
}

#[pyfunction]
#[pyo3(signature = (space, twist = "A", cutoff = "2", ring = false))]
fn brst_cohomology(py: Python<'_>, space: &PySpace, twist: &str, cutoff: &str, ring: bool) -> PyResult<Py<PyAny>> {
    let which: Twist = twist.parse().map_err(err)?;
    let cutoff = number(cutoff)?;
    let budget = budget_from_env();
    let mut json = cohomology_dims(&space.inner, which, &cutoff, budget).map_err(err)?.to_json();
    if ring {
        json["ring"] = cohomology_ring_check(&space.inner, which, &cutoff, budget).map_err(err)?.to_json();
    }
    to_py(py, &json)
}

fn grading(name: &str) -> PyResult<Grading> {
    match name {
        "untwisted" => Ok(Grading::Untwisted),
        "A" | "a" => Ok(Grading::A),
        "B" | "b" => Ok(Grading::B),
        other => Err(ScvaError::new_err(format!("unknown grading {other:?}"))),
    }
}

/// Enumerated character; with `formula`, also compared against the product formula.
#[pyfunction]
#[pyo3(signature = (space, grading_name = "untwisted", cutoff = "2", signed = false, formula = None))]
fn character(
    py: Python<'_>,
    space: &PySpace,
    grading_name: &str,
    cutoff: &str,
    signed: bool,
    formula: Option<&str>,
) -> PyResult<Py<PyAny>> {
    let cutoff = number(cutoff)?;
    let sp = &space.inner;
    let series = enumerate_character(sp, grading(grading_name)?, &cutoff, signed, budget_from_env()).map_err(err)?;
    let mut json = serde_json::json!({ "space": sp.to_string(), "series": series.to_json() });
    if let Some(f) = formula {
        let f: Formula = f.parse().map_err(err)?;
        let dims = if sp.is_polarized() { (sp.dim() / 2, sp.dim() / 2) } else { (sp.dim(), 0) };
        let product = product_character(f, dims, &cutoff, signed).map_err(err)?;
        let cmp = compare_characters(&series, &product).map_err(err)?;
        json["product_equal"] = serde_json::json!(cmp.equal);
        json["prefactors_equal"] = serde_json::json!(cmp.prefactors_equal);
    }
    to_py(py, &json)
}

/// Holonomy OPE table report: `case` is "g2", "qk" or "cy".
#[pyfunction]
#[pyo3(signature = (case, n = None, sector = "NS"))]
fn holonomy(py: Python<'_>, case: &str, n: Option<usize>, sector: &str) -> PyResult<Py<PyAny>> {
    let sector: Sector = sector.parse().map_err(err)?;
    let report = match case {
        "g2" => SpaceSpec::orthonormal(7).and_then(|s| g2_check(&s)),
        "qk" => SpaceSpec::orthonormal(4 * n.unwrap_or(1)).and_then(|s| qk_check(&s)),
        "cy" => SpaceSpec::polarized(n.unwrap_or(2), sector).and_then(|s| cy_check(&s)),
        other => return Err(ScvaError::new_err(format!("unknown holonomy case {other:?}"))),
    }
    .map_err(err)?;
    let out = to_py(py, &report.to_json())?;
    out.bind(py).cast::<PyDict>()?.set_item("passed", report.passed())?;
    Ok(out)
}

#[pyfunction]
fn conventions() -> &'static str {
    scva_core::conventions::TEXT
}

#[pymodule]
pub fn pyscva(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PySpace>()?;
    m.add_class::<PyState>()?;
    m.add_function(wrap_pyfunction!(structure, m)?)?;
    m.add_function(wrap_pyfunction!(verify_structure, m)?)?;
    m.add_function(wrap_pyfunction!(twist_round_trip, m)?)?;
    m.add_function(wrap_pyfunction!(brst_cohomology, m)?)?;
    m.add_function(wrap_pyfunction!(character, m)?)?;
    m.add_function(wrap_pyfunction!(holonomy, m)?)?;
    m.add_function(wrap_pyfunction!(conventions, m)?)?;
    m.add("ScvaError", m.py().get_type::<ScvaError>())?;
    m.add("BudgetExceeded", m.py().get_type::<BudgetExceeded>())?;
    Ok(())
}
