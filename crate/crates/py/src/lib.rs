//! Python bindings: `import qna`.
//!
//! Classes wrap the core value types; reports that are JSON in the CLI come
//! back as plain dicts.

use std::collections::BTreeMap;

use num_complex::Complex64;
use pyo3::exceptions::{PyArithmeticError, PyIndexError, PyValueError};
use pyo3::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use qna_core as qc;
use qna_core::grover::{sweep_false_negative_bound, MembershipReport, Schedule};
use qna_core::{
    Classification, DjMode, Encoding, FiringState, GroverConfig, GroverMode, Network, RealizedSets,
    Snapshot, StateVector,
};

/// Serialize through JSON into native Python objects.
fn to_py<'py, T: Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| PyValueError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

fn err(e: qc::Error) -> PyErr {
    match e {
        qc::Error::Bounds { .. } => PyIndexError::new_err(e.to_string()),
        qc::Error::Numeric(_) | qc::Error::Invariant(_) => {
            PyArithmeticError::new_err(e.to_string())
        }
        other => PyValueError::new_err(other.to_string()),
    }
}

#[pyclass(name = "StateVector", module = "qna")]
struct PyStateVector {
    inner: StateVector,
}

#[pymethods]
impl PyStateVector {
    /// Uniform superposition over `2^qubits` basis states.
    #[new]
    fn new(qubits: usize) -> PyResult<Self> {
        StateVector::new_uniform(qubits)
            .map(|inner| Self { inner })
            .map_err(err)
    }

    #[staticmethod]
    fn basis(qubits: usize, index: usize) -> PyResult<Self> {
        StateVector::basis(qubits, index)
            .map(|inner| Self { inner })
            .map_err(err)
    }

    #[staticmethod]
    fn from_amplitudes(amplitudes: Vec<Complex64>) -> PyResult<Self> {
        StateVector::from_amplitudes(amplitudes)
            .map(|inner| Self { inner })
            .map_err(err)
    }

    #[getter]
    fn qubit_count(&self) -> usize {
        self.inner.qubit_count()
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn amplitudes(&self) -> Vec<Complex64> {
        self.inner.amplitudes().to_vec()
    }

    /// Negate the amplitude of every listed basis index.
    fn apply_phase_flip(&mut self, marked: Vec<usize>) -> PyResult<()> {
        let dim = self.inner.dim();
        let mut mask = vec![false; dim];
        for i in marked {
            if i >= dim {
                return Err(err(qc::Error::Bounds { index: i, dim }));
            }
            mask[i] = true;
        }
        self.inner.apply_phase_flip(|i| mask[i]);
        Ok(())
    }

    fn apply_diffusion(&mut self) {
        self.inner.apply_diffusion();
    }

    fn hadamard_all(&mut self) {
        self.inner.hadamard_all();
    }

    /// Hadamard on qubits `start..stop`.
    fn hadamard_range(&mut self, start: usize, stop: usize) -> PyResult<()> {
        self.inner.hadamard_range(start..stop).map_err(err)
    }

    fn probability(&self, index: usize) -> PyResult<f64> {
        self.inner.probability(index).map_err(err)
    }

    fn probabilities(&self) -> Vec<f64> {
        self.inner.probabilities()
    }

    fn norm_sqr(&self) -> f64 {
        self.inner.norm_sqr()
    }

    fn check_norm(&self) -> PyResult<()> {
        self.inner.check_norm().map_err(err)
    }

    /// Basis indices drawn from the Born distribution; the state is untouched.
    #[pyo3(signature = (shots, seed = 0))]
    fn sample(&self, shots: usize, seed: u64) -> Vec<usize> {
        self.inner
            .sample(shots, &mut ChaCha8Rng::seed_from_u64(seed))
    }

    fn __repr__(&self) -> String {
        format!("StateVector(qubits={})", self.inner.qubit_count())
    }
}

#[pyclass(name = "Encoding", module = "qna")]
struct PyEncoding {
    inner: Encoding,
}

#[pymethods]
impl PyEncoding {
    #[new]
    #[pyo3(signature = (range_min = 0.0, range_max = 1.0, scale = 100))]
    fn new(range_min: f64, range_max: f64, scale: u32) -> PyResult<Self> {
        Encoding::new(range_min, range_max, scale)
            .map(|inner| Self { inner })
            .map_err(err)
    }

    fn encode(&self, value: f64) -> PyResult<u32> {
        self.inner.encode(value).map_err(err)
    }

    fn decode(&self, code: u32) -> PyResult<f64> {
        self.inner.decode(code).map_err(err)
    }

    #[getter]
    fn range(&self) -> (f64, f64) {
        self.inner.range()
    }

    #[getter]
    fn scale(&self) -> u32 {
        self.inner.scale()
    }

    #[getter]
    fn bit_width(&self) -> u32 {
        self.inner.bit_width()
    }

    #[getter]
    fn step_size(&self) -> f64 {
        self.inner.step_size()
    }

    #[getter]
    fn capacity(&self) -> usize {
        self.inner.capacity()
    }

    fn __repr__(&self) -> String {
        let (lo, hi) = self.inner.range();
        format!(
            "Encoding(range=({lo}, {hi}), scale={}, bits={})",
            self.inner.scale(),
            self.inner.bit_width()
        )
    }
}

#[pyclass(name = "Snapshot", module = "qna")]
struct PySnapshot {
    inner: Snapshot,
}

#[pymethods]
impl PySnapshot {
    #[new]
    #[pyo3(signature = (codes, scale = 100, time = 0, range_min = 0.0, range_max = 1.0))]
    fn new(
        codes: Vec<u32>,
        scale: u32,
        time: u64,
        range_min: f64,
        range_max: f64,
    ) -> PyResult<Self> {
        let encoding = Encoding::new(range_min, range_max, scale).map_err(err)?;
        Snapshot::new(time, encoding, codes)
            .map(|inner| Self { inner })
            .map_err(err)
    }

    #[staticmethod]
    #[pyo3(signature = (text, range_min = 0.0, range_max = 1.0))]
    fn from_json(text: &str, range_min: f64, range_max: f64) -> PyResult<Self> {
        Snapshot::from_json(text, (range_min, range_max))
            .map(|inner| Self { inner })
            .map_err(err)
    }

    /// Quantize raw running sums.
    #[staticmethod]
    #[pyo3(signature = (values, encoding, time = 0))]
    fn from_values(values: Vec<f64>, encoding: PyRef<'_, PyEncoding>, time: u64) -> PyResult<Self> {
        qc::netmodel::snapshot_from_values(&values, &encoding.inner, time)
            .map(|inner| Self { inner })
            .map_err(err)
    }

    fn to_json(&self) -> String {
        self.inner.to_json()
    }

    #[getter]
    fn codes(&self) -> Vec<u32> {
        self.inner.codes().to_vec()
    }

    #[getter]
    fn time(&self) -> u64 {
        self.inner.time()
    }

    #[getter]
    fn bit_width(&self) -> u32 {
        self.inner.bit_width()
    }

    #[getter]
    fn encoding(&self) -> PyEncoding {
        PyEncoding {
            inner: *self.inner.encoding(),
        }
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!(
            "Snapshot(time={}, len={}, bits={})",
            self.inner.time(),
            self.inner.len(),
            self.inner.bit_width()
        )
    }
}

#[pyclass(name = "Network", module = "qna")]
struct PyNetwork {
    inner: Network,
}

#[pymethods]
impl PyNetwork {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Network::from_json(text)
            .map(|inner| Self { inner })
            .map_err(err)
    }

    /// Each ordered pair gets an edge with probability `density`, weight
    /// uniform in `[weight_min, weight_max)`.
    #[staticmethod]
    #[pyo3(signature = (
        nodes, density = 0.1, weight_min = 0.0, weight_max = 1.0,
        threshold = 0.5, range_min = 0.0, range_max = 1.0, seed = 0
    ))]
    #[allow(clippy::too_many_arguments)]
    fn random(
        nodes: usize,
        density: f64,
        weight_min: f64,
        weight_max: f64,
        threshold: f64,
        range_min: f64,
        range_max: f64,
        seed: u64,
    ) -> PyResult<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Network::random(
            nodes,
            density,
            (weight_min, weight_max),
            threshold,
            (range_min, range_max),
            &mut rng,
        )
        .map(|inner| Self { inner })
        .map_err(err)
    }

    #[staticmethod]
    #[pyo3(signature = (nodes, weight, threshold = 0.5, range_min = 0.0, range_max = 1.0))]
    fn complete(
        nodes: usize,
        weight: f64,
        threshold: f64,
        range_min: f64,
        range_max: f64,
    ) -> PyResult<Self> {
        Network::complete(nodes, weight, threshold, (range_min, range_max))
            .map(|inner| Self { inner })
            .map_err(err)
    }

    fn to_json(&self) -> String {
        self.inner.to_json()
    }

    #[getter]
    fn node_count(&self) -> usize {
        self.inner.node_count()
    }

    #[getter]
    fn threshold(&self) -> f64 {
        self.inner.threshold()
    }

    #[getter]
    fn range(&self) -> (f64, f64) {
        self.inner.range()
    }

    #[getter]
    fn edges(&self) -> Vec<(usize, usize, f64)> {
        self.inner
            .edges()
            .iter()
            .map(|e| (e.source, e.target, e.weight))
            .collect()
    }

    /// Run `steps` synchronous updates and quantize the final running sums.
    /// Without `initial`, each node starts firing with probability `fire_prob`.
    #[pyo3(signature = (steps = 1, initial = None, fire_prob = 0.5, scale = 100, seed = 0))]
    fn evolve(
        &self,
        steps: u64,
        initial: Option<Vec<bool>>,
        fire_prob: f64,
        scale: u32,
        seed: u64,
    ) -> PyResult<PySnapshot> {
        let initial = match initial {
            Some(bits) => FiringState(bits),
            None => {
                if !(0.0..=1.0).contains(&fire_prob) {
                    return Err(PyValueError::new_err(format!(
                        "fire_prob {fire_prob} outside [0, 1]"
                    )));
                }
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                FiringState::random(self.inner.node_count(), fire_prob, &mut rng)
            }
        };
        let (lo, hi) = self.inner.range();
        let encoding = Encoding::new(lo, hi, scale).map_err(err)?;
        qc::netmodel::evolve(&self.inner, &initial, steps, &encoding)
            .map(|inner| PySnapshot { inner })
            .map_err(err)
    }

    fn __repr__(&self) -> String {
        format!(
            "Network(nodes={}, edges={})",
            self.inner.node_count(),
            self.inner.edges().len()
        )
    }
}

#[pyclass(name = "RealizedSets", module = "qna")]
struct PyRealizedSets {
    inner: RealizedSets,
}

#[pymethods]
impl PyRealizedSets {
    #[getter]
    fn bit_width(&self) -> u32 {
        self.inner.bit_width()
    }

    /// Codes that occur in the snapshot.
    #[getter]
    fn present(&self) -> Vec<u32> {
        self.inner.present().iter().copied().collect()
    }

    /// Codes of the n-bit space that never occur.
    #[getter]
    fn absent(&self) -> Vec<u32> {
        self.inner.absent().iter().copied().collect()
    }

    #[getter]
    fn multiplicities(&self) -> BTreeMap<u32, usize> {
        self.inner.multiplicities().clone()
    }

    fn multiplicity(&self, code: u32) -> usize {
        self.inner.multiplicity(code)
    }

    fn __contains__(&self, code: u32) -> bool {
        self.inner.contains(code)
    }

    fn __eq__(&self, other: PyRef<'_, Self>) -> bool {
        self.inner == other.inner
    }

    fn __repr__(&self) -> String {
        format!(
            "RealizedSets(bits={}, present={}, absent={})",
            self.inner.bit_width(),
            self.inner.present().len(),
            self.inner.absent().len()
        )
    }
}

#[pyfunction]
fn realized_sets(snapshot: PyRef<'_, PySnapshot>) -> PyRealizedSets {
    PyRealizedSets {
        inner: qc::realized_sets_classical(&snapshot.inner),
    }
}

#[derive(Serialize)]
struct SweepReport<'a> {
    #[serde(flatten)]
    report: &'a MembershipReport,
    false_negative_bound: f64,
}

/// Membership of every n-bit code by Grover search. Returns the sets and
/// the per-target report.
#[pyfunction]
#[pyo3(signature = (snapshot, mode = "list", reps = 3, seed = 0, iterations = None, worst_case = false))]
fn grover_sets<'py>(
    py: Python<'py>,
    snapshot: PyRef<'py, PySnapshot>,
    mode: &str,
    reps: usize,
    seed: u64,
    iterations: Option<usize>,
    worst_case: bool,
) -> PyResult<(PyRealizedSets, Bound<'py, PyAny>)> {
    let mode = match mode {
        "list" => GroverMode::List,
        "domain" => GroverMode::Domain,
        other => {
            return Err(PyValueError::new_err(format!(
                "unknown mode {other:?}, expected list or domain"
            )))
        }
    };
    let config = GroverConfig {
        mode,
        repetitions: reps,
        iteration_override: iterations,
        seed,
        schedule: if worst_case {
            Schedule::WorstCase
        } else {
            Schedule::KnownMultiplicity
        },
    };
    let snap = &snapshot.inner;
    let (sweep, bound) = py
        .detach(|| {
            let sweep = qc::compute_realized_sets_grover(snap, &config)?;
            let bound = sweep_false_negative_bound(snap, &config)?;
            Ok((sweep, bound))
        })
        .map_err(err)?;
    let report = to_py(
        py,
        &SweepReport {
            report: &sweep.report,
            false_negative_bound: bound,
        },
    )?;
    Ok((PyRealizedSets { inner: sweep.sets }, report))
}

#[derive(Serialize)]
struct ClassifyReport {
    threshold_code: u32,
    #[serde(flatten)]
    classification: Classification,
}

/// Quiescent, Epileptic or Sustaining, with the evidence behind the verdict.
#[pyfunction]
#[pyo3(signature = (snapshot, threshold, backend = "quantum", mode = "exact", shots = qc::djclassifier::DEFAULT_SHOTS, seed = 0))]
fn classify<'py>(
    py: Python<'py>,
    snapshot: PyRef<'py, PySnapshot>,
    threshold: f64,
    backend: &str,
    mode: &str,
    shots: usize,
    seed: u64,
) -> PyResult<Bound<'py, PyAny>> {
    let snap = &snapshot.inner;
    let threshold_code = snap.encoding().encode(threshold).map_err(err)?;
    let mode = match mode {
        "exact" => DjMode::Exact,
        "sampled" => DjMode::Sampled { shots },
        other => {
            return Err(PyValueError::new_err(format!(
                "unknown mode {other:?}, expected exact or sampled"
            )))
        }
    };
    let classification = match backend {
        "quantum" => {
            let sets = qc::realized_sets_classical(snap);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            qc::classify_quantum(snap, threshold_code, &sets, mode, &mut rng)
        }
        "classical" => qc::classify_classical(snap, threshold_code),
        other => {
            return Err(PyValueError::new_err(format!(
                "unknown backend {other:?}, expected quantum or classical"
            )))
        }
    }
    .map_err(err)?;
    to_py(
        py,
        &ClassifyReport {
            threshold_code,
            classification,
        },
    )
}

/// Whether `code >= threshold_code`, compared MSB first over `bits` bits.
#[pyfunction]
fn fire_bit(code: u32, threshold_code: u32, bits: u32) -> bool {
    qc::fire_bit(code, threshold_code, bits)
}

#[pyfunction]
fn iteration_count(search_space: usize, multiplicity: usize) -> PyResult<usize> {
    qc::iteration_count(search_space, multiplicity).map_err(err)
}

#[pyfunction]
fn success_probability(search_space: usize, multiplicity: usize, iterations: usize) -> f64 {
    qc::success_probability(search_space, multiplicity, iterations)
}

/// `log10 C(population, active)`.
#[pyfunction]
fn log10_binomial(population: u64, active: u64) -> PyResult<f64> {
    qc::estimate::log10_binomial(population, active).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (bits, list_size, reps = 3))]
fn query_cost(py: Python<'_>, bits: u32, list_size: u64, reps: u64) -> PyResult<Bound<'_, PyAny>> {
    let cost = qc::estimate::query_cost(bits, list_size, reps).map_err(err)?;
    to_py(py, &cost)
}

#[pymodule]
fn qna(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyStateVector>()?;
    m.add_class::<PyEncoding>()?;
    m.add_class::<PySnapshot>()?;
    m.add_class::<PyNetwork>()?;
    m.add_class::<PyRealizedSets>()?;
    m.add_function(wrap_pyfunction!(realized_sets, m)?)?;
    m.add_function(wrap_pyfunction!(grover_sets, m)?)?;
    m.add_function(wrap_pyfunction!(classify, m)?)?;
    m.add_function(wrap_pyfunction!(fire_bit, m)?)?;
    m.add_function(wrap_pyfunction!(iteration_count, m)?)?;
    m.add_function(wrap_pyfunction!(success_probability, m)?)?;
    m.add_function(wrap_pyfunction!(log10_binomial, m)?)?;
    m.add_function(wrap_pyfunction!(query_cost, m)?)?;
    Ok(())
}
