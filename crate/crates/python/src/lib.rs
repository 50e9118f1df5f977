//! Python bindings for the `qstarlike` crate.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use ::qstarlike as core;
use core::{Flag, FunctionCase, QDomainParams};

fn to_py(err: core::Error) -> PyErr {
    if err.is_domain() {
        PyValueError::new_err(err.to_string())
    } else {
        PyRuntimeError::new_err(err.to_string())
    }
}

fn case_params(case: &str, nu: f64, q: f64) -> PyResult<(FunctionCase, QDomainParams)> {
    let case: FunctionCase = case.parse().map_err(to_py)?;
    let params = QDomainParams::new(nu, q).map_err(to_py)?;
    Ok((case, params))
}

fn flag_codes(flags: &[Flag]) -> Vec<String> {
    flags.iter().map(|f| f.code().to_string()).collect()
}

#[pyclass(frozen, get_all, skip_from_py_object, module = "qstarlike")]
#[derive(Clone)]
struct RadiusResult {
    case: String,
    nu: f64,
    q: f64,
    radius: f64,
    u_first_zero: f64,
    residual: f64,
    relative_residual: f64,
    bracket: (f64, f64),
    expanded: bool,
    iterations: usize,
    truncation_order: usize,
}

#[pymethods]
impl RadiusResult {
    fn __repr__(&self) -> String {
        format!(
            "RadiusResult(case={}, nu={}, q={}, radius={})",
            self.case, self.nu, self.q, self.radius
        )
    }
}

#[pyclass(frozen, get_all, skip_from_py_object, module = "qstarlike")]
#[derive(Clone)]
struct TheoremBracket {
    chain: usize,
    lower: f64,
    upper: f64,
    printed_lower: f64,
    printed_upper: f64,
    flags: Vec<String>,
}

#[pymethods]
impl TheoremBracket {
    fn contains(&self, x: f64) -> bool {
        self.lower < x && x < self.upper
    }

    fn __repr__(&self) -> String {
        format!(
            "TheoremBracket(chain={}, lower={}, upper={})",
            self.chain, self.lower, self.upper
        )
    }
}

#[pyclass(frozen, get_all, module = "qstarlike")]
struct TheoremBounds {
    theorem: u8,
    case: String,
    /// "r^2" or "r".
    quantity: String,
    brackets: Vec<TheoremBracket>,
}

#[pyclass(frozen, get_all, skip_from_py_object, module = "qstarlike")]
#[derive(Clone)]
struct ReconcileRow {
    order: usize,
    newton: f64,
    printed: f64,
    closed_form: f64,
    corrected: Option<f64>,
    rel_diff: f64,
    flagged: bool,
    flags: Vec<String>,
}

#[pyclass(frozen, get_all, module = "qstarlike")]
struct ClassicalZeros {
    nu: f64,
    deriv_zero: Option<f64>,
    radius_g: f64,
    radius_h: f64,
}

#[pyfunction]
#[pyo3(signature = (case, nu, q, tol = 1e-13))]
fn starlike_radius(case: &str, nu: f64, q: f64, tol: f64) -> PyResult<RadiusResult> {
    let (c, p) = case_params(case, nu, q)?;
    let r = core::starlike_radius(c, p, tol).map_err(to_py)?;
    Ok(RadiusResult {
        case: c.name().into(),
        nu,
        q,
        radius: r.radius,
        u_first_zero: r.u_first_zero,
        residual: r.residual,
        relative_residual: r.relative_residual(),
        bracket: (r.bracket.lower, r.bracket.upper),
        expanded: r.expanded,
        iterations: r.iterations,
        truncation_order: r.truncation_order,
    })
}

#[pyfunction]
fn theorem_bounds(case: &str, nu: f64, q: f64) -> PyResult<TheoremBounds> {
    let (c, p) = case_params(case, nu, q)?;
    let set = core::theorem_bounds(c, p).map_err(to_py)?;
    Ok(TheoremBounds {
        theorem: set.theorem,
        case: c.name().into(),
        quantity: set.quantity.tag().into(),
        brackets: set
            .brackets
            .iter()
            .map(|b| TheoremBracket {
                chain: b.chain,
                lower: b.bracket.lower,
                upper: b.bracket.upper,
                printed_lower: b.printed_lower,
                printed_upper: b.printed_upper,
                flags: flag_codes(&b.flags),
            })
            .collect(),
    })
}

/// Maclaurin coefficients `a_0..a_order` of the case's stream.
#[pyfunction]
fn coefficient_stream(case: &str, nu: f64, q: f64, order: usize) -> PyResult<Vec<f64>> {
    let (c, p) = case_params(case, nu, q)?;
    Ok(core::coefficient_stream(c, p, order)
        .map_err(to_py)?
        .coeffs()
        .to_vec())
}

/// Newton power sums `s_1..s_k`.
#[pyfunction]
#[pyo3(signature = (case, nu, q, k = 3))]
fn power_sums(case: &str, nu: f64, q: f64, k: usize) -> PyResult<Vec<f64>> {
    let (c, p) = case_params(case, nu, q)?;
    Ok(core::euler_rayleigh::oracle_sums(c, p, k)
        .map_err(to_py)?
        .values)
}

/// Euler-Rayleigh bracket of order `k` on the first zero in the reduced variable.
#[pyfunction]
fn er_bracket(case: &str, nu: f64, q: f64, k: usize) -> PyResult<(f64, f64)> {
    let (c, p) = case_params(case, nu, q)?;
    let sums = core::euler_rayleigh::oracle_sums(c, p, k + 1).map_err(to_py)?;
    let b = core::er_bracket(&sums, k).map_err(to_py)?;
    Ok((b.lower, b.upper))
}

/// Printed closed-form sum of order `k` (sign-normalized).
#[pyfunction]
fn closed_form_sum(case: &str, nu: f64, q: f64, k: usize) -> PyResult<f64> {
    let (c, p) = case_params(case, nu, q)?;
    Ok(core::closed_form_sum(c, p, k).map_err(to_py)?.value)
}

#[pyfunction]
#[pyo3(signature = (case, nu, q, k = 3))]
fn reconcile(case: &str, nu: f64, q: f64, k: usize) -> PyResult<Vec<ReconcileRow>> {
    let (c, p) = case_params(case, nu, q)?;
    let rep = core::reconcile(c, p, k).map_err(to_py)?;
    Ok(rep
        .rows
        .iter()
        .map(|r| ReconcileRow {
            order: r.order,
            newton: r.newton,
            printed: r.printed,
            closed_form: r.closed_form,
            corrected: r.corrected,
            rel_diff: r.rel_diff,
            flagged: r.flagged,
            flags: flag_codes(&r.flags),
        })
        .collect())
}

#[pyfunction]
#[pyo3(signature = (case, nu, q, z, tol = 1e-16))]
fn normalized_eval(case: &str, nu: f64, q: f64, z: f64, tol: f64) -> PyResult<f64> {
    let (c, p) = case_params(case, nu, q)?;
    core::normalized_eval(c, p, z, tol).map_err(to_py)
}

#[pyfunction]
fn q_pochhammer(a: f64, q: f64, n: usize) -> f64 {
    core::q_pochhammer(a, q, n)
}

#[pyfunction]
#[pyo3(signature = (nu, q, tol = 1e-16))]
fn norm_constant(nu: f64, q: f64, tol: f64) -> PyResult<f64> {
    let p = QDomainParams::new(nu, q).map_err(to_py)?;
    core::norm_constant(p, tol).map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (nu, tol = 1e-15))]
fn classical_first_zeros(nu: f64, tol: f64) -> PyResult<ClassicalZeros> {
    let z = core::classical_first_zeros(nu, tol).map_err(to_py)?;
    Ok(ClassicalZeros {
        nu: z.nu,
        deriv_zero: z.deriv_zero,
        radius_g: z.radius_g,
        radius_h: z.radius_h,
    })
}

/// Limit display `(lower, upper)` of a case's bound chain at order ν.
#[pyfunction]
fn classical_bracket(case: &str, chain: usize, nu: f64) -> PyResult<(f64, f64)> {
    let c: FunctionCase = case.parse().map_err(to_py)?;
    let b = core::classical_bracket(c, chain, nu).map_err(to_py)?;
    Ok((b.lower, b.upper))
}

#[pymodule]
fn qstarlike(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("CASES", FunctionCase::ALL.map(|c| c.name()).to_vec())?;
    m.add_class::<RadiusResult>()?;
    m.add_class::<TheoremBracket>()?;
    m.add_class::<TheoremBounds>()?;
    m.add_class::<ReconcileRow>()?;
    m.add_class::<ClassicalZeros>()?;
    m.add_function(wrap_pyfunction!(starlike_radius, m)?)?;
    m.add_function(wrap_pyfunction!(theorem_bounds, m)?)?;
    m.add_function(wrap_pyfunction!(coefficient_stream, m)?)?;
    m.add_function(wrap_pyfunction!(power_sums, m)?)?;
    m.add_function(wrap_pyfunction!(er_bracket, m)?)?;
    m.add_function(wrap_pyfunction!(closed_form_sum, m)?)?;
    m.add_function(wrap_pyfunction!(reconcile, m)?)?;
    m.add_function(wrap_pyfunction!(normalized_eval, m)?)?;
    m.add_function(wrap_pyfunction!(q_pochhammer, m)?)?;
    m.add_function(wrap_pyfunction!(norm_constant, m)?)?;
    m.add_function(wrap_pyfunction!(classical_first_zeros, m)?)?;
    m.add_function(wrap_pyfunction!(classical_bracket, m)?)?;
    Ok(())
}
