//! Python module `toricsplit`: fans, the split decision, splitting maps and
//! the chart oracles. Fractional points cross the boundary as lists of
//! `fractions.Fraction`.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyTuple};

use toric_split::fan::{self, power_fan};
use toric_split::oracle::{self, IdealPredicate, DEFAULT_BOUND};
use toric_split::polytope::{anticanonical_polytope, divisor_polytope_int};
use toric_split::sections::normality_check;
use toric_split::splitting::{self as split, SearchOptions};
use toric_split::{FractionalPoint, LatticeVector};

fn err(e: toric_split::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn fractions<'py>(py: Python<'py>, u: &FractionalPoint) -> PyResult<Vec<Bound<'py, PyAny>>> {
    let fraction = py.import("fractions")?.getattr("Fraction")?;
    u.numerators().iter().map(|&n| fraction.call1((n, u.den()))).collect()
}

#[pyclass(name = "Fan", frozen, from_py_object)]
#[derive(Clone)]
pub struct PyFan(fan::Fan);

#[pymethods]
impl PyFan {
    #[new]
    fn new(dim: usize, rays: Vec<Vec<i64>>, max_cones: Vec<Vec<usize>>) -> PyResult<Self> {
        let rays = rays.into_iter().map(LatticeVector).collect();
        fan::Fan::new(dim, rays, max_cones).map(PyFan).map_err(err)
    }

    /// `pn:<n>`, `hirzebruch:<a>` or `product:<spec>x<spec>`.
    #[staticmethod]
    fn builtin(spec: &str) -> PyResult<Self> {
        fan::builtin(spec).map(PyFan).map_err(err)
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let json: fan::FanJson = serde_json::from_str(text).map_err(|e| PyValueError::new_err(e.to_string()))?;
        fan::Fan::from_json(&json).map(PyFan).map_err(err)
    }

    fn to_json(&self) -> String {
        serde_json::to_string(&self.0.to_json()).expect("fan serializes")
    }

    #[getter]
    fn dim(&self) -> usize {
        self.0.dim()
    }

    #[getter]
    fn rays(&self) -> Vec<Vec<i64>> {
        self.0.rays().iter().map(|v| v.0.clone()).collect()
    }

    #[getter]
    fn max_cones(&self) -> Vec<Vec<usize>> {
        self.0.max_cones().iter().map(|c| c.rays().to_vec()).collect()
    }

    /// `verified-complete`, `verified-incomplete` or `unverified`.
    fn completeness(&self) -> String {
        self.0.is_complete().to_string()
    }

    fn power(&self, n: usize) -> PyResult<Self> {
        if n == 0 {
            return Err(PyValueError::new_err("power must be positive"));
        }
        Ok(PyFan(power_fan(&self.0, n)))
    }

    fn __repr__(&self) -> String {
        format!("Fan(dim={}, rays={}, max_cones={})", self.0.dim(), self.0.rays().len(), self.0.max_cones().len())
    }
}

type CertificateRows<'py> = Vec<(Vec<i64>, Vec<Bound<'py, PyAny>>)>;

#[pyclass(name = "Verdict", frozen)]
pub struct PyVerdict(split::SplitVerdict);

#[pymethods]
impl PyVerdict {
    #[getter]
    fn is_split(&self) -> bool {
        self.0.is_split()
    }

    /// Residues of the uncovered class, or `None` when split.
    #[getter]
    fn uncovered_class(&self) -> Option<Vec<i64>> {
        self.0.witness().map(|w| w.class().residues().to_vec())
    }

    /// `(class residues, representative)` pairs, or `None` when not split.
    fn certificate<'py>(&self, py: Python<'py>) -> PyResult<Option<CertificateRows<'py>>> {
        let Some(cert) = self.0.certificate() else {
            return Ok(None);
        };
        cert.entries()
            .iter()
            .map(|(c, rep)| Ok((c.residues().to_vec(), fractions(py, rep)?)))
            .collect::<PyResult<Vec<_>>>()
            .map(Some)
    }

    fn to_json(&self) -> String {
        let value = match &self.0 {
            split::SplitVerdict::Split(c) => {
                serde_json::json!({ "verdict": "split", "certificate": c.to_json() })
            }
            split::SplitVerdict::NotSplit(w) => {
                serde_json::json!({ "verdict": "not-split", "witness": w.to_json() })
            }
        };
        value.to_string()
    }

    fn __bool__(&self) -> bool {
        self.0.is_split()
    }

    fn __repr__(&self) -> String {
        match &self.0 {
            split::SplitVerdict::Split(c) => format!("Verdict(split, q={})", c.q()),
            split::SplitVerdict::NotSplit(w) => {
                format!("Verdict(not split, q={}, class {})", w.q(), w.class().representative())
            }
        }
    }
}

#[pyclass(name = "SplittingMap", frozen)]
pub struct PySplittingMap(split::SplittingMap);

#[pymethods]
impl PySplittingMap {
    #[getter]
    fn q(&self) -> u32 {
        self.0.q()
    }

    #[getter]
    fn dim(&self) -> usize {
        self.0.dim()
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }

    fn is_splitting(&self) -> bool {
        self.0.is_splitting()
    }

    /// `(a, c_a)` pairs in lexicographic order of `a`.
    fn terms<'py>(&self, py: Python<'py>) -> PyResult<Vec<(Vec<Bound<'py, PyAny>>, i64)>> {
        self.0.terms().map(|(a, c)| Ok((fractions(py, a)?, c))).collect()
    }

    /// Image of `x^u` for `u = numerators / q`, as `{exponent: coefficient}`.
    fn apply<'py>(&self, py: Python<'py>, numerators: Vec<i64>) -> PyResult<Bound<'py, PyDict>> {
        let u = FractionalPoint::new(numerators, self.0.q()).map_err(err)?;
        let image = self.0.apply(&u).map_err(err)?;
        let out = PyDict::new(py);
        for (m, c) in image.terms() {
            out.set_item(PyTuple::new(py, m.coords())?, c)?;
        }
        Ok(out)
    }
}

#[pyclass(name = "OracleReport", frozen)]
pub struct PyOracleReport(oracle::OracleReport);

#[pymethods]
impl PyOracleReport {
    #[getter]
    fn passed(&self) -> bool {
        self.0.passed()
    }

    #[getter]
    fn check(&self) -> String {
        self.0.check.clone()
    }

    #[getter]
    fn elements_checked(&self) -> u64 {
        self.0.elements_checked
    }

    fn to_json(&self) -> String {
        serde_json::to_string(&self.0.to_json()).expect("report serializes")
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("OracleReport({})", self.0)
    }
}

#[pyfunction]
#[pyo3(signature = (fan, q, assume_complete = false))]
fn check(py: Python<'_>, fan: &PyFan, q: u32, assume_complete: bool) -> PyResult<PyVerdict> {
    let options = SearchOptions { assume_complete, ..Default::default() };
    py.detach(|| split::is_diagonally_split_with(&fan.0, q, &options)).map(PyVerdict).map_err(err)
}

/// `[(q, split)]` for every `q` in `q_min..=q_max`.
#[pyfunction]
fn scan(py: Python<'_>, fan: &PyFan, q_min: u32, q_max: u32) -> PyResult<Vec<(u32, bool)>> {
    let rows = py.detach(|| split::split_q_scan(&fan.0, q_min, q_max)).map_err(err)?;
    Ok(rows.into_iter().map(|(q, v)| (q, v.is_split())).collect())
}

#[pyfunction]
fn basis<'py>(py: Python<'py>, fan: &PyFan, q: u32) -> PyResult<Vec<Vec<Bound<'py, PyAny>>>> {
    let points = split::splitting_basis(&fan.0, q).map_err(err)?;
    points.iter().map(|u| fractions(py, u)).collect()
}

#[pyfunction]
fn canonical_splitting(fan: &PyFan, q: u32) -> PyResult<PySplittingMap> {
    split::canonical_splitting(&fan.0, q).map(PySplittingMap).map_err(err)
}

/// The splitting of `X × X` compatible with the diagonal.
#[pyfunction]
fn diagonal_splitting(fan: &PyFan, q: u32) -> PyResult<PySplittingMap> {
    split::diagonal_splitting(&fan.0, q).map(PySplittingMap).map_err(err)
}

/// The splitting of `X^n` compatible with every semidiagonal.
#[pyfunction]
fn semidiagonal_splitting(fan: &PyFan, q: u32, n: usize) -> PyResult<PySplittingMap> {
    split::semidiagonal_splitting(&fan.0, q, n).map(PySplittingMap).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (map, bound = DEFAULT_BOUND))]
fn verify_splitting_law(py: Python<'_>, map: &PySplittingMap, bound: u32) -> PyResult<PyOracleReport> {
    py.detach(|| oracle::verify_splitting_law(&map.0, bound)).map(PyOracleReport).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (fan, map, bound = DEFAULT_BOUND))]
fn verify_diagonal(py: Python<'_>, fan: &PyFan, map: &PySplittingMap, bound: u32) -> PyResult<PyOracleReport> {
    py.detach(|| oracle::verify_diagonal_compatibility(&fan.0, map.0.q(), &map.0, bound))
        .map(PyOracleReport)
        .map_err(err)
}

#[pyfunction]
#[pyo3(signature = (fan, map, n, i, bound = DEFAULT_BOUND))]
fn verify_semidiagonal(
    py: Python<'_>,
    fan: &PyFan,
    map: &PySplittingMap,
    n: usize,
    i: usize,
    bound: u32,
) -> PyResult<PyOracleReport> {
    py.detach(|| oracle::verify_semidiagonal_compatibility(&fan.0, map.0.q(), n, i, &map.0, bound))
        .map(PyOracleReport)
        .map_err(err)
}

/// `ideal` is `divisors` or `orbit:<ray indices>`.
#[pyfunction]
#[pyo3(signature = (fan, map, ideal, bound = DEFAULT_BOUND))]
fn verify_ideal(
    py: Python<'_>,
    fan: &PyFan,
    map: &PySplittingMap,
    ideal: &str,
    bound: u32,
) -> PyResult<PyOracleReport> {
    let predicate = IdealPredicate::parse(ideal, &fan.0).map_err(err)?;
    py.detach(|| oracle::verify_monomial_ideal_compatibility(&map.0, &fan.0, &predicate, bound))
        .map(PyOracleReport)
        .map_err(err)
}

/// Normality of the divisor polytope (anticanonical when `d` is omitted) up
/// to `kmax`. Returns `None` on success, else `(k, point)`.
#[pyfunction]
#[pyo3(signature = (fan, d = None, kmax = 4))]
fn normality(fan: &PyFan, d: Option<Vec<i64>>, kmax: u32) -> PyResult<Option<(u32, Vec<i64>)>> {
    let p = match d {
        Some(d) => divisor_polytope_int(&fan.0, &d).map_err(err)?,
        None => anticanonical_polytope(&fan.0),
    };
    let report = normality_check(&p, kmax).map_err(err)?;
    Ok(report.counterexample.map(|c| (c.k, c.point)))
}

/// SVG drawing of the splitting polygon of a surface.
#[pyfunction]
fn plot_svg(fan: &PyFan, q: u32) -> PyResult<String> {
    toric_split::svg::plot_splitting_polytope(&fan.0, q).map(|p| p.svg).map_err(err)
}

#[pymodule]
pub fn toricsplit(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyFan>()?;
    m.add_class::<PyVerdict>()?;
    m.add_class::<PySplittingMap>()?;
    m.add_class::<PyOracleReport>()?;
    m.add_function(wrap_pyfunction!(check, m)?)?;
    m.add_function(wrap_pyfunction!(scan, m)?)?;
    m.add_function(wrap_pyfunction!(basis, m)?)?;
    m.add_function(wrap_pyfunction!(canonical_splitting, m)?)?;
    m.add_function(wrap_pyfunction!(diagonal_splitting, m)?)?;
    m.add_function(wrap_pyfunction!(semidiagonal_splitting, m)?)?;
    m.add_function(wrap_pyfunction!(verify_splitting_law, m)?)?;
    m.add_function(wrap_pyfunction!(verify_diagonal, m)?)?;
    m.add_function(wrap_pyfunction!(verify_semidiagonal, m)?)?;
    m.add_function(wrap_pyfunction!(verify_ideal, m)?)?;
    m.add_function(wrap_pyfunction!(normality, m)?)?;
    m.add_function(wrap_pyfunction!(plot_svg, m)?)?;
    Ok(())
}
