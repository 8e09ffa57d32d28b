//! Python bindings: an `Algebra` handle plus catalog, decision and census helpers.
//! Structured results cross the boundary as JSON strings.

use hopfkit::catalog::{catalog_families, Family};
use hopfkit::cli::build_by_name;
use hopfkit::companion::{decide_ai, is_trivial_extension_over_fixed_space, verify_companion, with_companion_field};
use hopfkit::constructions::{drinfeld_double, dual_hopf, tensor_product};
use hopfkit::format;
use hopfkit::hopf::map_order;
use hopfkit::integrals::compute_integrals;
use hopfkit::{HopfAlgebra, HopfError};
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

fn err(e: HopfError) -> PyErr {
    match e {
        HopfError::UnknownAlgebra(_) | HopfError::InvalidParameter(_) | HopfError::Format(_) | HopfError::Json(_) => {
            PyValueError::new_err(e.to_string())
        }
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

fn json<T: serde::Serialize>(v: &T) -> PyResult<String> {
    serde_json::to_string(v).map_err(|e| PyRuntimeError::new_err(e.to_string()))
}

#[pyclass(name = "Algebra", module = "hopfkit_py", frozen)]
struct PyAlgebra {
    inner: HopfAlgebra,
}

#[pymethods]
impl PyAlgebra {
    /// Catalog algebra by name, e.g. `"Sweedler"`, `"Taft(3)"`, `"dual(A1)"`.
    #[staticmethod]
    fn named(name: &str) -> PyResult<Self> {
        Ok(PyAlgebra {
            inner: build_by_name(name).map_err(err)?,
        })
    }

    #[staticmethod]
    #[pyo3(signature = (text, trust = false))]
    fn from_json(text: &str, trust: bool) -> PyResult<Self> {
        Ok(PyAlgebra {
            inner: format::from_json(text, trust).map_err(err)?,
        })
    }

    fn to_json(&self) -> PyResult<String> {
        format::to_json(&self.inner).map_err(err)
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    #[getter]
    fn family(&self) -> String {
        self.inner.meta.family.clone()
    }

    #[getter]
    fn labels(&self) -> Vec<String> {
        self.inner.labels().to_vec()
    }

    #[getter]
    fn conductor(&self) -> u32 {
        self.inner.field().conductor()
    }

    /// Names of failed Hopf axioms (empty when all pass).
    fn failed_axioms(&self) -> Vec<String> {
        self.inner.verify_axioms().failed().iter().map(|c| c.axiom.clone()).collect()
    }

    fn s2_order(&self) -> PyResult<u32> {
        let n = self.inner.dim() as u32;
        map_order(&self.inner.s2(), 2 * n * n).map_err(err)
    }

    fn integrals_json(&self) -> PyResult<String> {
        json(&compute_integrals(&self.inner).map_err(err)?)
    }

    /// `"Witness"`, `"NotAI"` or `"Inconclusive"`.
    fn decide_ai(&self) -> PyResult<String> {
        Ok(decide_ai(&self.inner).map_err(err)?.tag().to_string())
    }

    fn decide_ai_json(&self) -> PyResult<String> {
        json(&decide_ai(&self.inner).map_err(err)?)
    }

    /// Whether the witness returned by `decide_ai` passes the full companion check.
    fn witness_verifies(&self) -> PyResult<bool> {
        let v = decide_ai(&self.inner).map_err(err)?;
        match v.sigma() {
            Some(s) => {
                let h = with_companion_field(&self.inner).map_err(err)?;
                Ok(verify_companion(&h, s).map_err(err)?.passed())
            }
            None => Ok(false),
        }
    }

    fn is_trivial_extension(&self) -> PyResult<bool> {
        Ok(is_trivial_extension_over_fixed_space(&self.inner).map_err(err)?.holds)
    }

    fn dual(&self) -> Self {
        PyAlgebra {
            inner: dual_hopf(&self.inner),
        }
    }

    fn tensor(&self, other: &PyAlgebra) -> Self {
        PyAlgebra {
            inner: tensor_product(&self.inner, &other.inner),
        }
    }

    fn double(&self) -> PyResult<Self> {
        Ok(PyAlgebra {
            inner: drinfeld_double(&self.inner).map_err(err)?,
        })
    }

    fn __repr__(&self) -> String {
        format!("Algebra({:?}, dim={})", self.inner.meta.family, self.inner.dim())
    }
}

/// Names of the built-in catalog families.
#[pyfunction]
fn catalog() -> Vec<String> {
    catalog_families().iter().map(Family::to_string).collect()
}

/// `(name, dim, verdict)` for the catalog and its duals up to `max_dim`.
#[pyfunction]
#[pyo3(signature = (max_dim = 15))]
fn census(max_dim: usize) -> PyResult<Vec<(String, usize, String)>> {
    let mut out = Vec::new();
    for fam in catalog_families() {
        let h = hopfkit::catalog::build_named(fam).map_err(err)?;
        if h.dim() > max_dim {
            continue;
        }
        let d = dual_hopf(&h);
        out.push((fam.to_string(), h.dim(), decide_ai(&h).map_err(err)?.tag().to_string()));
        out.push((format!("dual({fam})"), d.dim(), decide_ai(&d).map_err(err)?.tag().to_string()));
    }
    Ok(out)
}

#[pymodule]
fn hopfkit_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyAlgebra>()?;
    m.add_function(wrap_pyfunction!(catalog, m)?)?;
    m.add_function(wrap_pyfunction!(census, m)?)?;
    Ok(())
}
