//! Python bindings: rings and residues, exact sequences, the check suite,
//! the expression language and the conjecture scans.

use std::collections::HashMap;

use num_bigint::BigInt;
use pyo3::exceptions::{PyValueError, PyZeroDivisionError};
use pyo3::prelude::*;

use franel::expr;
use franel::modring::{self, ModError, PrimePowerRing, RationalParam};
use franel::primes::{self, PrimeRange};
use franel::report::{CheckResult, OutputFormat};
use franel::sequences::{self, AperyRoute};
use franel::suite;

fn value_error<E: std::fmt::Display>(e: E) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn mod_error(e: ModError) -> PyErr {
    match e {
        ModError::NotInvertible { .. } => PyZeroDivisionError::new_err(e.to_string()),
        other => value_error(other),
    }
}

fn expr_error(e: expr::ExprError) -> PyErr {
    match e {
        expr::ExprError::NotInvertible { .. } => PyZeroDivisionError::new_err(e.to_string()),
        other => value_error(other),
    }
}

fn parse_format(format: &str) -> PyResult<OutputFormat> {
    format.parse().map_err(value_error)
}

/// `Z/p^e` for an odd prime `p` and `1 <= e <= 4`.
#[pyclass(name = "Ring", frozen, eq, from_py_object)]
#[derive(Clone, Copy, PartialEq, Eq)]
struct PyRing(PrimePowerRing);

#[pymethods]
impl PyRing {
    #[new]
    fn new(p: u64, e: u32) -> PyResult<Self> {
        PrimePowerRing::new(p, e).map(PyRing).map_err(mod_error)
    }

    #[getter]
    fn p(&self) -> u64 {
        self.0.p()
    }

    #[getter]
    fn exponent(&self) -> u32 {
        self.0.exponent()
    }

    #[getter]
    fn modulus(&self) -> u64 {
        self.0.modulus()
    }

    fn __call__(&self, value: BigInt) -> PyResidue {
        PyResidue(self.0.from_bigint(&value))
    }

    /// Embeds `a/b` given as text, e.g. `"-1/2"`.
    fn rational(&self, text: &str) -> PyResult<PyResidue> {
        let q: RationalParam = text.parse().map_err(mod_error)?;
        self.0.from_rational(&q).map(PyResidue).map_err(mod_error)
    }

    /// `[1/1, ..., 1/n]` (index 0 holds 0).
    fn inverse_table(&self, n: usize) -> PyResult<Vec<u64>> {
        Ok(self.0.inverse_table(n).map_err(mod_error)?.iter().map(|r| r.value()).collect())
    }

    fn franel_table(&self, len: usize) -> PyResult<Vec<u64>> {
        Ok(sequences::franel_mod_table(self.0, len).map_err(mod_error)?.values().to_vec())
    }

    fn fermat_q2(&self) -> PyResult<PyResidue> {
        modring::fermat_quotient2(self.0.p(), self.0.exponent()).map(PyResidue).map_err(mod_error)
    }

    fn __repr__(&self) -> String {
        format!("Ring({}, {})", self.0.p(), self.0.exponent())
    }
}

#[pyclass(name = "Residue", frozen, eq, from_py_object)]
#[derive(Clone, Copy, PartialEq, Eq)]
struct PyResidue(modring::Residue);

impl PyResidue {
    fn same_ring(&self, other: &PyResidue) -> PyResult<()> {
        if self.0.ring() == other.0.ring() {
            Ok(())
        } else {
            Err(mod_error(ModError::RingMismatch { left: self.0.ring().modulus(), right: other.0.ring().modulus() }))
        }
    }
}

#[pymethods]
impl PyResidue {
    #[getter]
    fn value(&self) -> u64 {
        self.0.value()
    }

    #[getter]
    fn ring(&self) -> PyRing {
        PyRing(self.0.ring())
    }

    fn symmetric(&self) -> i128 {
        self.0.symmetric()
    }

    fn inv(&self) -> PyResult<PyResidue> {
        self.0.inv().map(PyResidue).map_err(mod_error)
    }

    fn __add__(&self, other: PyResidue) -> PyResult<PyResidue> {
        self.same_ring(&other)?;
        Ok(PyResidue(self.0 + other.0))
    }

    fn __sub__(&self, other: PyResidue) -> PyResult<PyResidue> {
        self.same_ring(&other)?;
        Ok(PyResidue(self.0 - other.0))
    }

    fn __mul__(&self, other: PyResidue) -> PyResult<PyResidue> {
        self.same_ring(&other)?;
        Ok(PyResidue(self.0 * other.0))
    }

    fn __truediv__(&self, other: PyResidue) -> PyResult<PyResidue> {
        self.same_ring(&other)?;
        self.0.try_div(other.0).map(PyResidue).map_err(mod_error)
    }

    fn __neg__(&self) -> PyResidue {
        PyResidue(-self.0)
    }

    fn __pow__(&self, n: i64, _modulo: Option<u64>) -> PyResult<PyResidue> {
        self.0.pow_signed(n).map(PyResidue).map_err(mod_error)
    }

    fn __int__(&self) -> u64 {
        self.0.value()
    }

    fn __repr__(&self) -> String {
        format!("Residue({} mod {})", self.0.value(), self.0.ring().modulus())
    }
}

/// One evaluated (check, prime) cell.
#[pyclass(name = "CheckResult", frozen, get_all)]
struct PyCheckResult {
    check_id: String,
    label: String,
    class_: String,
    prime: u64,
    modulus_exponent: u32,
    params: HashMap<String, String>,
    lhs: Option<u64>,
    rhs: Option<u64>,
    passed: bool,
    error: Option<String>,
}

impl From<CheckResult> for PyCheckResult {
    fn from(r: CheckResult) -> Self {
        PyCheckResult {
            check_id: r.check_id.clone(),
            label: r.label(),
            class_: r.class.as_str().to_string(),
            prime: r.prime,
            modulus_exponent: r.modulus_exponent,
            params: r.report_params().into_iter().collect(),
            lhs: r.lhs.map(|v| v.value()),
            rhs: r.rhs.map(|v| v.value()),
            passed: r.pass,
            error: r.error,
        }
    }
}

#[pymethods]
impl PyCheckResult {
    fn __repr__(&self) -> String {
        let side = |v: Option<u64>| v.map_or("-".to_string(), |v| v.to_string());
        format!(
            "CheckResult({} p={} lhs={} rhs={} pass={})",
            self.label,
            self.prime,
            side(self.lhs),
            side(self.rhs),
            self.passed
        )
    }
}

#[pyfunction]
#[pyo3(name = "franel")]
fn franel_number(n: u64) -> BigInt {
    sequences::franel_exact(n)
}

#[pyfunction]
fn franel_list(n: usize) -> Vec<BigInt> {
    sequences::franel_exact_list(n)
}

#[pyfunction]
fn apery(n: u64) -> BigInt {
    sequences::apery_exact(n, AperyRoute::Definition)
}

#[pyfunction]
fn franel_poly(n: u64, x: BigInt) -> BigInt {
    sequences::franel_poly_exact(n, &x)
}

#[pyfunction]
fn generalized_franel(n: u64, r: u32) -> BigInt {
    sequences::generalized_franel(n, r)
}

#[pyfunction]
fn binom(n: BigInt, k: u64) -> BigInt {
    sequences::binom_exact(&n, k)
}

#[pyfunction]
fn jacobi(a: i128, n: i128) -> PyResult<i8> {
    modring::jacobi(a, n).map_err(mod_error)
}

#[pyfunction]
fn is_prime(n: u64) -> bool {
    primes::is_prime(n)
}

#[pyfunction]
fn primes_in_range(lo: u64, hi: u64) -> Vec<u64> {
    primes::primes_in_range(lo, hi)
}

#[pyfunction]
fn check_ids() -> Vec<String> {
    suite::registry().iter().map(|s| s.label()).collect()
}

#[pyfunction]
fn run_check(id: &str, p: u64) -> PyResult<PyCheckResult> {
    suite::run_check(id, p).map(PyCheckResult::from).map_err(value_error)
}

/// Runs the suite and returns the rendered report (`json`, `csv` or `text`).
#[pyfunction]
#[pyo3(signature = (lo, hi, ids = Vec::new(), workers = 1, format = "json"))]
fn run_suite(py: Python<'_>, lo: u64, hi: u64, ids: Vec<String>, workers: usize, format: &str) -> PyResult<String> {
    let format = parse_format(format)?;
    let specs = suite::select(&ids).map_err(value_error)?;
    let report = py
        .detach(|| suite::run_suite(&specs, PrimeRange::new(lo, hi), workers))
        .map_err(value_error)?;
    Ok(report.render(format))
}

/// Parses and prints back in normal form.
#[pyfunction]
fn parse(text: &str) -> PyResult<String> {
    Ok(match expr::parse(text).map_err(expr_error)? {
        expr::Parsed::Congruence(c) => c.to_string(),
        expr::Parsed::Expr(e) => e.to_string(),
    })
}

#[pyfunction]
#[pyo3(signature = (text, ring, bindings = HashMap::new()))]
fn eval_expr(text: &str, ring: PyRing, bindings: HashMap<String, BigInt>) -> PyResult<u64> {
    let e = expr::parse_expr(text).map_err(expr_error)?;
    let bound = bindings.into_iter().map(|(k, v)| (k, ring.0.from_bigint(&v))).collect();
    expr::eval_expr(&e, ring.0, &bound).map(|r| r.value()).map_err(expr_error)
}

#[pyfunction]
#[pyo3(signature = (text, lo, hi, workers = 1, format = "json", label = "expr"))]
fn eval_congruence(
    py: Python<'_>,
    text: &str,
    lo: u64,
    hi: u64,
    workers: usize,
    format: &str,
    label: &str,
) -> PyResult<String> {
    let format = parse_format(format)?;
    let stmt = expr::parse_congruence(text).map_err(expr_error)?;
    let report = py
        .detach(|| expr::eval_congruence(&stmt, PrimeRange::new(lo, hi), label, workers))
        .map_err(expr_error)?;
    Ok(report.render(format))
}

/// `(x, y)` with `p = x^2 + 3y^2`, or `None` when `p == 2 (mod 3)`.
#[pyfunction]
fn cornacchia(p: u64) -> PyResult<Option<(u64, u64)>> {
    Ok(suite::cornacchia_x2_3y2(p).map_err(value_error)?.map(|r| (r.x, r.y)))
}

/// `(a_r, is_odd)` recovered across the prime range.
#[pyfunction]
fn scan_ar(r: u32, lo: u64, hi: u64) -> PyResult<(i128, bool)> {
    let s = suite::scan_ar(r, PrimeRange::new(lo, hi)).map_err(value_error)?;
    Ok((s.value, s.odd))
}

/// The `n` with a negative 3-adic margin (expected empty).
#[pyfunction]
fn check_3adic(n_max: u64) -> Vec<u64> {
    suite::check_3adic_integrality(n_max).counterexamples().map(|r| r.n).collect()
}

/// `(identity_id, cases, pass)` for every identity at its default bound.
#[pyfunction]
fn identities() -> Vec<(String, u64, bool)> {
    franel::identities::verify_all_default()
        .into_iter()
        .map(|o| (o.identity_id, o.cases, o.pass))
        .collect()
}

#[pymodule]
fn franel_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyRing>()?;
    m.add_class::<PyResidue>()?;
    m.add_class::<PyCheckResult>()?;
    m.add_function(wrap_pyfunction!(franel_number, m)?)?;
    m.add_function(wrap_pyfunction!(franel_list, m)?)?;
    m.add_function(wrap_pyfunction!(apery, m)?)?;
    m.add_function(wrap_pyfunction!(franel_poly, m)?)?;
    m.add_function(wrap_pyfunction!(generalized_franel, m)?)?;
    m.add_function(wrap_pyfunction!(binom, m)?)?;
    m.add_function(wrap_pyfunction!(jacobi, m)?)?;
    m.add_function(wrap_pyfunction!(is_prime, m)?)?;
    m.add_function(wrap_pyfunction!(primes_in_range, m)?)?;
    m.add_function(wrap_pyfunction!(check_ids, m)?)?;
    m.add_function(wrap_pyfunction!(run_check, m)?)?;
    m.add_function(wrap_pyfunction!(run_suite, m)?)?;
    m.add_function(wrap_pyfunction!(parse, m)?)?;
    m.add_function(wrap_pyfunction!(eval_expr, m)?)?;
    m.add_function(wrap_pyfunction!(eval_congruence, m)?)?;
    m.add_function(wrap_pyfunction!(cornacchia, m)?)?;
    m.add_function(wrap_pyfunction!(scan_ar, m)?)?;
    m.add_function(wrap_pyfunction!(check_3adic, m)?)?;
    m.add_function(wrap_pyfunction!(identities, m)?)?;
    Ok(())
}
