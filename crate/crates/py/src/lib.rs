//! Python bindings. Weights are passed as strings such as `"[3],[0]"`
//! (fundamental-weight coordinates) and structured results as JSON text.

use std::sync::Arc;

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use trunco::characters::{kostant_partition, verma_character};
use trunco::oracle::Oracle;
use trunco::parse::{parse_truncated_weight, parse_word};
use trunco::{CartanType, Error, KlCache, LeviDatum, TruncatedWeight};

fn py_err(e: Error) -> PyErr {
    match e {
        Error::Parse(_) | Error::CartanType(_) | Error::Dimension { .. } => PyValueError::new_err(e.to_string()),
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

fn datum(cartan: &str) -> PyResult<Arc<trunco::RootDatum>> {
    let t: CartanType = cartan.parse().map_err(py_err)?;
    Ok(Arc::new(trunco::RootDatum::new(&t)))
}

fn weight(d: &trunco::RootDatum, s: &str) -> PyResult<TruncatedWeight> {
    let t = parse_truncated_weight(s).map_err(py_err)?;
    TruncatedWeight::checked(t.components().to_vec(), d, t.level()).map_err(py_err)
}

fn to_json<T: serde::Serialize + ?Sized>(v: &T) -> String {
    serde_json::to_string(v).expect("serializable")
}

#[pyclass(name = "RootDatum", frozen)]
struct PyRootDatum {
    inner: Arc<trunco::RootDatum>,
}

#[pymethods]
impl PyRootDatum {
    #[new]
    fn new(cartan: &str) -> PyResult<Self> {
        Ok(PyRootDatum { inner: datum(cartan)? })
    }

    #[getter]
    fn rank(&self) -> usize {
        self.inner.rank()
    }

    fn positive_roots(&self) -> Vec<Vec<i64>> {
        self.inner.positive_roots().to_vec()
    }

    fn weyl_group_order(&self) -> PyResult<usize> {
        Ok(self.inner.weyl_group().map_err(py_err)?.order())
    }

    /// Bruhat comparison of two 1-based words.
    fn bruhat_leq(&self, x: &str, y: &str) -> PyResult<bool> {
        let x = self.inner.element(&parse_word(x).map_err(py_err)?).map_err(py_err)?;
        let y = self.inner.element(&parse_word(y).map_err(py_err)?).map_err(py_err)?;
        Ok(self.inner.bruhat_leq(&x, &y))
    }
}

#[pyclass(name = "Engine", frozen)]
struct PyEngine {
    inner: trunco::Engine,
}

#[pymethods]
impl PyEngine {
    #[new]
    #[pyo3(signature = (cartan, cache_dir=None))]
    fn new(cartan: &str, cache_dir: Option<String>) -> PyResult<Self> {
        let cache = match cache_dir {
            Some(d) => KlCache::with_dir(d),
            None => KlCache::new(),
        };
        Ok(PyEngine { inner: trunco::Engine::with_cache(datum(cartan)?, Arc::new(cache)) })
    }

    fn multiplicity(&self, lam: &str, nu: &str) -> PyResult<u64> {
        let d = self.inner.datum().clone();
        self.inner.multiplicity(&weight(&d, lam)?, &weight(&d, nu)?).map_err(py_err)
    }

    fn trace_json(&self, lam: &str, nu: &str) -> PyResult<String> {
        let d = self.inner.datum().clone();
        let t = self.inner.traced(&weight(&d, lam)?, &weight(&d, nu)?).map_err(py_err)?;
        Ok(to_json(&*t))
    }

    fn table_json(&self, lam: &str, depth: usize) -> PyResult<String> {
        let d = self.inner.datum().clone();
        Ok(to_json(&self.inner.multiplicity_table(&weight(&d, lam)?, depth).map_err(py_err)?))
    }

    fn persist(&self) -> PyResult<()> {
        self.inner.kl_cache().persist().map_err(py_err)
    }
}

/// `P_{x,y}` coefficients for 1-based words.
#[pyfunction]
fn kl_polynomial(cartan: &str, x: &str, y: &str) -> PyResult<Vec<u64>> {
    let d = datum(cartan)?;
    let xe = d.element(&parse_word(x).map_err(py_err)?).map_err(py_err)?;
    let ye = d.element(&parse_word(y).map_err(py_err)?).map_err(py_err)?;
    let table = KlCache::new().table(d.cartan_matrix()).map_err(py_err)?;
    Ok(table.polynomial(&xe, &ye).coeffs)
}

#[pyfunction]
fn partition(cartan: &str, beta: Vec<i64>) -> PyResult<u64> {
    kostant_partition(&*datum(cartan)?, &beta).map_err(py_err)
}

#[pyfunction]
fn verma_character_json(cartan: &str, lam: &str, depth: usize) -> PyResult<String> {
    let d = datum(cartan)?;
    let ch = verma_character(&d, &LeviDatum::full(&d), &weight(&d, lam)?, depth).map_err(py_err)?;
    Ok(to_json(&ch))
}

#[pyfunction]
fn oracle_multiplicity(cartan: &str, lam: &str, nu: &str, depth: usize) -> PyResult<u64> {
    let d = datum(cartan)?;
    let (l, n) = (weight(&d, lam)?, weight(&d, nu)?);
    Oracle::new(d).map_err(py_err)?.multiplicity(&l, &n, depth).map_err(py_err)
}

#[pymodule]
fn trunco_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyRootDatum>()?;
    m.add_class::<PyEngine>()?;
    m.add_function(wrap_pyfunction!(kl_polynomial, m)?)?;
    m.add_function(wrap_pyfunction!(partition, m)?)?;
    m.add_function(wrap_pyfunction!(verma_character_json, m)?)?;
    m.add_function(wrap_pyfunction!(oracle_multiplicity, m)?)?;
    Ok(())
}
