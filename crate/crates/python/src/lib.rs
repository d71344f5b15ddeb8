//! Python bindings: structures, categories built from pools, arrows and degrees.

use pyo3::exceptions::{PyKeyError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use ramdeg::arrows::{self, Mode};
use ramdeg::category::{FiniteCategory, ObjectId};
use ramdeg::corpus::builtin_pool;
use ramdeg::degrees::{big_degree_exact, small_degree_exact};
use ramdeg::structures::{self, parse_pool, parse_structure_or_shorthand, serialize_structure};
use ramdeg::suites::run_suite;
use ramdeg::{Error, SearchConfig};

fn py_err(e: Error) -> PyErr {
    match e {
        Error::GuardExceeded { .. } | Error::Internal(_) => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn json(v: impl serde::Serialize) -> PyResult<String> {
    serde_json::to_string(&v).map_err(|e| PyRuntimeError::new_err(e.to_string()))
}

fn mode(mor: bool) -> Mode {
    if mor {
        Mode::Morphisms
    } else {
        Mode::Objects
    }
}

fn config(jobs: usize, prune: bool) -> SearchConfig {
    SearchConfig::default().with_jobs(jobs.max(1)).with_pruning(prune)
}

/// A finite relational structure.
#[pyclass(name = "Structure", module = "ramdeg", frozen, from_py_object)]
#[derive(Clone)]
struct PyStructure {
    inner: structures::Structure,
}

#[pymethods]
impl PyStructure {
    /// Parses structure text, or a shorthand such as `chain6` or `cycle4`.
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        let inner = parse_structure_or_shorthand(text).map_err(py_err)?;
        Ok(PyStructure { inner })
    }

    #[getter]
    fn size(&self) -> usize {
        self.inner.size()
    }

    /// Embeddings into `other` as lists of images.
    fn embeddings(&self, other: &PyStructure) -> PyResult<Vec<Vec<usize>>> {
        let all = structures::enumerate_embeddings(&self.inner, &other.inner).map_err(py_err)?;
        Ok(all.into_iter().map(|e| e.map().to_vec()).collect())
    }

    fn automorphism_count(&self) -> PyResult<usize> {
        Ok(structures::automorphism_group(&self.inner).map_err(py_err)?.len())
    }

    fn __str__(&self) -> String {
        serialize_structure(&self.inner)
    }

    fn __repr__(&self) -> String {
        format!("<Structure of size {}>", self.inner.size())
    }
}

/// The category of embeddings between the members of a pool.
#[pyclass(name = "Category", module = "ramdeg", frozen)]
struct PyCategory {
    inner: FiniteCategory,
    cfg: SearchConfig,
}

impl PyCategory {
    fn id(&self, name: &str) -> PyResult<ObjectId> {
        self.inner
            .find_object(name)
            .ok_or_else(|| PyKeyError::new_err(format!("no object named `{name}`")))
    }
}

#[pymethods]
impl PyCategory {
    /// Builds a category from `(name, Structure)` pairs.
    #[new]
    #[pyo3(signature = (objects, jobs = 1, prune = false))]
    fn new(objects: Vec<(String, PyStructure)>, jobs: usize, prune: bool) -> PyResult<Self> {
        let pool = objects.into_iter().map(|(n, s)| (n, s.inner)).collect();
        let cfg = config(jobs, prune);
        let inner = FiniteCategory::from_pool_guarded(pool, cfg.guard).map_err(py_err)?;
        Ok(PyCategory { inner, cfg })
    }

    /// A built-in pool such as `graphs_le3`, or pool text.
    #[staticmethod]
    #[pyo3(signature = (spec, jobs = 1, prune = false))]
    fn from_pool(spec: &str, jobs: usize, prune: bool) -> PyResult<Self> {
        let cfg = config(jobs, prune);
        let pool = match builtin_pool(spec, &cfg).map_err(py_err)? {
            Some(p) => p,
            None => parse_pool(spec).map_err(py_err)?,
        };
        let inner = FiniteCategory::from_pool_guarded(pool, cfg.guard).map_err(py_err)?;
        Ok(PyCategory { inner, cfg })
    }

    fn objects(&self) -> Vec<String> {
        self.inner.objects().map(|a| self.inner.name(a).to_string()).collect()
    }

    fn hom_size(&self, a: &str, b: &str) -> PyResult<usize> {
        Ok(self.inner.hom(self.id(a)?, self.id(b)?).len())
    }

    /// Whether `c -> (b)^a_{k,t}` holds.
    #[pyo3(signature = (c, b, a, k, t, mor = false))]
    fn arrow(&self, c: &str, b: &str, a: &str, k: usize, t: usize, mor: bool) -> PyResult<bool> {
        let (c, b, a) = (self.id(c)?, self.id(b)?, self.id(a)?);
        let r = arrows::arrow(&self.inner, c, b, a, k, t, mode(mor), &self.cfg).map_err(py_err)?;
        Ok(r.holds)
    }

    /// The least refuting coloring, listed along the arrow's domain, or `None`.
    #[pyo3(signature = (c, b, a, k, t, mor = false))]
    fn find_bad_coloring(
        &self,
        c: &str,
        b: &str,
        a: &str,
        k: usize,
        t: usize,
        mor: bool,
    ) -> PyResult<Option<Vec<usize>>> {
        let (c, b, a) = (self.id(c)?, self.id(b)?, self.id(a)?);
        let found = arrows::find_bad_coloring(&self.inner, c, b, a, k, t, mode(mor), &self.cfg).map_err(py_err)?;
        Ok(found.map(|col| col.colors))
    }

    #[pyo3(signature = (s, a, mor = false))]
    fn big_degree(&self, s: &str, a: &str, mor: bool) -> PyResult<usize> {
        let r = big_degree_exact(&self.inner, self.id(s)?, self.id(a)?, mode(mor), &self.cfg).map_err(py_err)?;
        r.value
            .exact()
            .ok_or_else(|| PyRuntimeError::new_err("big degree search stopped at a bound"))
    }

    /// The small degree relative to this category, or a lower bound if the search stopped early.
    #[pyo3(signature = (a, mor = false))]
    fn small_degree(&self, a: &str, mor: bool) -> PyResult<usize> {
        let r = small_degree_exact(&self.inner, self.id(a)?, mode(mor), &self.cfg).map_err(py_err)?;
        r.value
            .exact()
            .ok_or_else(|| PyRuntimeError::new_err("small degree search stopped at a bound"))
    }

    /// The full big-degree report as JSON.
    #[pyo3(signature = (s, a, mor = false))]
    fn big_degree_report(&self, s: &str, a: &str, mor: bool) -> PyResult<String> {
        json(big_degree_exact(&self.inner, self.id(s)?, self.id(a)?, mode(mor), &self.cfg).map_err(py_err)?)
    }

    fn __len__(&self) -> usize {
        self.inner.object_count()
    }
}

/// Runs a verification suite on its default pool and returns the report as JSON.
#[pyfunction]
#[pyo3(signature = (name, jobs = 1, prune = false))]
fn verify(name: &str, jobs: usize, prune: bool) -> PyResult<String> {
    json(run_suite(name, None, &config(jobs, prune)).map_err(py_err)?)
}

/// Runs the command-line tool with `args` and returns its exit code.
#[pyfunction]
fn cli(args: Vec<String>) -> i32 {
    ramdeg::cli::run(std::iter::once("ramdeg".to_string()).chain(args))
}

#[pymodule(name = "ramdeg")]
fn ramdeg_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyStructure>()?;
    m.add_class::<PyCategory>()?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(cli, m)?)?;
    m.add("SUITES", ramdeg::suites::SUITES.to_vec())?;
    Ok(())
}
