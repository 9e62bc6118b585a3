//! Python bindings for the `fatcut` library.

use ::fatcut::cutting::{self, CutCertificate, CutFamily, ProofReport, SearchConfig, VerifyConfig};
use ::fatcut::diagram::{AffineCut, Diagram as RsDiagram, LatticePoint};
use ::fatcut::homogeneous::{self, CampaignConfig, CampaignRecord};
use ::fatcut::interp::{self, DimensionResult, LinearSystem, MultiplicityList, RankConfig, MERSENNE_61};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

fn value_error(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn rank_config(seed: u64, trials: u32, modulus: u64) -> PyResult<RankConfig> {
    if trials == 0 {
        return Err(PyValueError::new_err("trials must be at least 1"));
    }
    Ok(RankConfig { modulus, trials, seed })
}

/// Finite set of exponents, written in column notation such as `"3^0,2^1"`.
#[pyclass(frozen, eq, skip_from_py_object, module = "fatcut")]
#[derive(Clone, PartialEq)]
struct Diagram(RsDiagram);

#[pymethods]
impl Diagram {
    #[new]
    fn new(spec: &str) -> PyResult<Self> {
        spec.parse().map(Diagram).map_err(value_error)
    }

    #[staticmethod]
    fn triangle(d: u32) -> Self {
        Diagram(RsDiagram::triangle(d))
    }

    #[staticmethod]
    fn from_points(points: Vec<(u32, u32)>) -> Self {
        Diagram(RsDiagram::from_points(points.into_iter().map(LatticePoint::from)))
    }

    fn points(&self) -> Vec<(u32, u32)> {
        self.0.iter().map(|p| (p.x, p.y)).collect()
    }

    fn translate(&self, dx: i64, dy: i64) -> PyResult<Self> {
        self.0.translate((dx, dy)).map(Diagram).map_err(value_error)
    }

    /// `v` with `self = other + v`, if the diagrams are translates.
    fn equivalent(&self, other: &Diagram) -> Option<(i64, i64)> {
        self.0.equivalent(&other.0)
    }

    /// `(below, above)` for the cut `a x + b y - c + 1/2`.
    fn split(&self, a: i64, b: i64, c: i64) -> PyResult<(Diagram, Diagram)> {
        let (lo, hi) = self.0.split(&AffineCut::sloped(a, b, c)).map_err(value_error)?;
        Ok((Diagram(lo), Diagram(hi)))
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Diagram('{}')", self.0)
    }
}

/// Polynomials on a diagram vanishing to given orders at general points.
#[pyclass(frozen, eq, skip_from_py_object, name = "LinearSystem", module = "fatcut")]
#[derive(Clone, PartialEq)]
struct PySystem(LinearSystem);

#[pymethods]
impl PySystem {
    #[new]
    fn new(diagram: &Diagram, mults: &str) -> PyResult<Self> {
        let mults: MultiplicityList = mults.parse().map_err(value_error)?;
        Ok(PySystem(LinearSystem::new(diagram.0.clone(), mults)))
    }

    /// Plane curves of degree `d`.
    #[staticmethod]
    fn plane(d: u32, mults: &str) -> PyResult<Self> {
        let mults: MultiplicityList = mults.parse().map_err(value_error)?;
        Ok(PySystem(LinearSystem::plane(d, mults)))
    }

    #[staticmethod]
    fn homogeneous(d: u32, m: u32, r: u32) -> Self {
        PySystem(homogeneous::homogeneous_system(d, m, r))
    }

    #[getter]
    fn diagram(&self) -> Diagram {
        Diagram(self.0.diagram.clone())
    }

    #[getter]
    fn mults(&self) -> Vec<u32> {
        self.0.mults.as_slice().to_vec()
    }

    #[getter]
    fn vdim(&self) -> i64 {
        self.0.vdim()
    }

    #[getter]
    fn edim(&self) -> i64 {
        self.0.edim()
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("LinearSystem({})", self.0)
    }
}

#[pyclass(frozen, name = "DimensionResult", module = "fatcut")]
struct PyDimension(DimensionResult);

#[pymethods]
impl PyDimension {
    #[getter]
    fn value(&self) -> i64 {
        self.0.value
    }

    #[getter]
    fn certainty(&self) -> &'static str {
        self.0.certainty.name()
    }

    #[getter]
    fn vdim(&self) -> i64 {
        self.0.vdim
    }

    #[getter]
    fn edim(&self) -> i64 {
        self.0.edim
    }

    #[getter]
    fn trial_ranks(&self) -> Vec<usize> {
        self.0.trial_ranks.clone()
    }

    fn is_special(&self) -> bool {
        self.0.is_special()
    }

    fn to_json(&self) -> String {
        serde_json::to_string(&self.0).expect("serializable")
    }

    fn __repr__(&self) -> String {
        format!(
            "DimensionResult({}, value={}, {})",
            self.0.system,
            self.0.value,
            self.0.certainty.name()
        )
    }
}

/// Dimension from ranks at random points of a prime field.
#[pyfunction]
#[pyo3(signature = (system, seed = 0, trials = 3, modulus = MERSENNE_61))]
fn generic_dimension(system: &PySystem, seed: u64, trials: u32, modulus: u64) -> PyResult<PyDimension> {
    let config = rank_config(seed, trials, modulus)?;
    interp::generic_dimension(&system.0, &config)
        .map(PyDimension)
        .map_err(value_error)
}

/// Dimension by exact elimination at the given rational points, as
/// `(num_x, den_x, num_y, den_y)` tuples.
#[pyfunction]
fn exact_dimension(system: &PySystem, points: Vec<(i64, i64, i64, i64)>) -> PyResult<PyDimension> {
    use num_bigint::BigInt;
    use num_rational::BigRational;
    if points.len() != system.0.mults.len() {
        return Err(PyValueError::new_err(format!(
            "expected {} points, got {}",
            system.0.mults.len(),
            points.len()
        )));
    }
    let mut pts = Vec::with_capacity(points.len());
    for (a, b, c, d) in points {
        if b == 0 || d == 0 {
            return Err(PyValueError::new_err("zero denominator"));
        }
        pts.push((
            BigRational::new(BigInt::from(a), BigInt::from(b)),
            BigRational::new(BigInt::from(c), BigInt::from(d)),
        ));
    }
    interp::exact_dimension(&system.0, &pts)
        .map(PyDimension)
        .map_err(value_error)
}

#[pyclass(frozen, name = "ProofReport", module = "fatcut")]
struct PyReport(ProofReport);

#[pymethods]
impl PyReport {
    #[getter]
    fn verified(&self) -> bool {
        self.0.verified
    }

    #[getter]
    fn conclusion(&self) -> Option<i64> {
        self.0.conclusion
    }

    #[getter]
    fn node_count(&self) -> usize {
        self.0.node_count
    }

    #[getter]
    fn failure_path(&self) -> Option<String> {
        self.0.failure_path.as_ref().map(|_| self.0.failure_path_string())
    }

    #[getter]
    fn failure(&self) -> Option<String> {
        self.0.failure.as_ref().map(ToString::to_string)
    }

    fn to_json(&self) -> String {
        serde_json::to_string(&self.0).expect("serializable")
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }
}

/// Tree of cuts whose leaves are checked directly.
#[pyclass(frozen, eq, skip_from_py_object, name = "Certificate", module = "fatcut")]
#[derive(Clone, PartialEq)]
struct PyCertificate(CutCertificate);

#[pymethods]
impl PyCertificate {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        CutCertificate::from_json(text).map(PyCertificate).map_err(value_error)
    }

    fn to_json(&self) -> String {
        self.0.to_json()
    }

    #[getter]
    fn system(&self) -> PySystem {
        PySystem(self.0.system().clone())
    }

    #[getter]
    fn kind(&self) -> &'static str {
        self.0.kind()
    }

    #[getter]
    fn node_count(&self) -> usize {
        self.0.node_count()
    }

    #[getter]
    fn cut_depth(&self) -> usize {
        self.0.cut_depth()
    }

    #[pyo3(signature = (parallel = true))]
    fn verify(&self, py: Python<'_>, parallel: bool) -> PyReport {
        let config = VerifyConfig {
            parallel,
            ..Default::default()
        };
        let cert = &self.0;
        PyReport(py.detach(|| cutting::verify(cert, &config)))
    }
}

/// Search for a cut certificate; `None` if none exists within `max_depth`.
#[pyfunction]
#[pyo3(signature = (system, max_depth = 6, leaf_threshold = 60, basic_cuts = false, seed = 0))]
fn prove(
    py: Python<'_>,
    system: &PySystem,
    max_depth: usize,
    leaf_threshold: usize,
    basic_cuts: bool,
    seed: u64,
) -> Option<PyCertificate> {
    let config = SearchConfig {
        max_depth,
        leaf_threshold,
        families: if basic_cuts {
            CutFamily::basic()
        } else {
            CutFamily::standard()
        },
        rank: RankConfig::default().with_seed(seed),
        ..Default::default()
    };
    let l = &system.0;
    py.detach(|| cutting::search_cut_proof(l, &config)).map(PyCertificate)
}

/// Constructive certificate for a named layer lemma.
#[pyfunction]
#[pyo3(signature = (name, *params))]
fn lemma(name: &str, params: Vec<u32>) -> PyResult<PyCertificate> {
    let arity = |n: usize| -> PyResult<()> {
        if params.len() == n {
            Ok(())
        } else {
            Err(PyValueError::new_err(format!("{name} takes {n} parameters")))
        }
    };
    let positive = |i: usize| -> PyResult<u32> {
        if params[i] == 0 {
            Err(PyValueError::new_err("parameters must be positive"))
        } else {
            Ok(params[i])
        }
    };
    let cert = match name {
        "backtriangle" => {
            arity(1)?;
            cutting::lemma_backtriangle(positive(0)?)
        }
        "twotriangles" => {
            arity(1)?;
            cutting::lemma_twotriangles(positive(0)?)
        }
        "singlelayer" => {
            arity(2)?;
            cutting::lemma_singlelayer(params[0], params[1]).map_err(value_error)?
        }
        "fatlayer" => {
            arity(3)?;
            cutting::lemma_fatlayer(params[0], params[1], params[2]).map_err(value_error)?
        }
        "fulllayer" => {
            arity(2)?;
            let m = positive(0)?;
            let eols = cutting::default_eols_certificates(m, &RankConfig::default());
            cutting::lemma_fulllayer(m, params[1], &eols).map_err(value_error)?
        }
        _ => return Err(PyValueError::new_err(format!("unknown lemma {name}"))),
    };
    Ok(PyCertificate(cert))
}

/// End-of-layer systems for multiplicity `m`.
#[pyfunction]
fn eols(m: u32) -> PyResult<Vec<PySystem>> {
    if m == 0 {
        return Err(PyValueError::new_err("m must be positive"));
    }
    Ok(cutting::eols(m).into_iter().map(PySystem).collect())
}

#[pyclass(frozen, name = "CampaignRecord", module = "fatcut")]
struct PyRecord(CampaignRecord);

#[pymethods]
impl PyRecord {
    #[getter]
    fn d(&self) -> u32 {
        self.0.id.d
    }

    #[getter]
    fn m(&self) -> u32 {
        self.0.id.m
    }

    #[getter]
    fn r(&self) -> u32 {
        self.0.id.r
    }

    #[getter]
    fn dim(&self) -> i64 {
        self.0.dim
    }

    #[getter]
    fn edim(&self) -> i64 {
        self.0.edim
    }

    #[getter]
    fn special(&self) -> bool {
        self.0.verdict == homogeneous::Verdict::Special
    }

    /// `(class, pairing)` of the (-1)-curve witness, if any.
    #[getter]
    fn witness(&self) -> Option<(String, i64)> {
        self.0.witness.as_ref().map(|w| (w.class.clone(), w.pairing))
    }

    #[getter]
    fn discrepancy(&self) -> Option<String> {
        self.0.discrepancy.clone()
    }

    fn to_json(&self) -> String {
        self.0.to_json_line()
    }

    fn __repr__(&self) -> String {
        format!("CampaignRecord({}, dim={})", self.0.id, self.0.dim)
    }
}

/// Rank and (-1)-curve comparison for every `L_d(m^×r)` in range.
#[pyfunction]
#[pyo3(signature = (m_max, d_max, seed = 0, jobs = 0))]
fn hh_campaign(py: Python<'_>, m_max: u32, d_max: u32, seed: u64, jobs: usize) -> PyResult<Vec<PyRecord>> {
    let config = CampaignConfig {
        rank: RankConfig::default().with_seed(seed),
        jobs,
        ..Default::default()
    };
    let records = py
        .detach(|| homogeneous::hh_campaign(m_max, d_max, &config))
        .map_err(value_error)?;
    Ok(records.into_iter().map(PyRecord).collect())
}

#[pymodule]
#[pyo3(name = "fatcut")]
fn fatcut_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Diagram>()?;
    m.add_class::<PySystem>()?;
    m.add_class::<PyDimension>()?;
    m.add_class::<PyCertificate>()?;
    m.add_class::<PyReport>()?;
    m.add_class::<PyRecord>()?;
    m.add_function(wrap_pyfunction!(generic_dimension, m)?)?;
    m.add_function(wrap_pyfunction!(exact_dimension, m)?)?;
    m.add_function(wrap_pyfunction!(prove, m)?)?;
    m.add_function(wrap_pyfunction!(lemma, m)?)?;
    m.add_function(wrap_pyfunction!(eols, m)?)?;
    m.add_function(wrap_pyfunction!(hh_campaign, m)?)?;
    Ok(())
}
