use pyo3::exceptions::{PyIOError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use polarlat::channel::{BmsChannel, ChannelKind, ZPolicy};
use polarlat::construct::PolarCode;
use polarlat::experiments::{self, PPolicy, SweepGrid};
use polarlat::{codec, latency, Error};

fn to_py(e: Error) -> PyErr {
    match e {
        Error::Io(io) => PyIOError::new_err(io.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

/// Bits go back to Python as a list of ints rather than `bytes`.
fn bits_out(bits: Vec<u8>) -> Vec<u32> {
    bits.into_iter().map(u32::from).collect()
}

fn kind(name: &str) -> PyResult<ChannelKind> {
    name.parse().map_err(to_py)
}

/// A binary memoryless symmetric channel.
#[pyclass(name = "Channel", module = "pypolarlat", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyChannel {
    inner: BmsChannel,
}

#[pymethods]
impl PyChannel {
    /// Channel of family `kind` ("bec", "bsc" or "bawgnc") with raw parameter `param`.
    #[new]
    fn new(kind_name: &str, param: f64) -> PyResult<Self> {
        Ok(Self {
            inner: BmsChannel::new(kind(kind_name)?, param).map_err(to_py)?,
        })
    }

    #[staticmethod]
    fn from_capacity(kind_name: &str, capacity: f64) -> PyResult<Self> {
        Ok(Self {
            inner: BmsChannel::from_capacity(kind(kind_name)?, capacity).map_err(to_py)?,
        })
    }

    #[getter]
    fn kind(&self) -> &'static str {
        self.inner.kind().as_str()
    }

    #[getter]
    fn param(&self) -> f64 {
        self.inner.param()
    }

    #[getter]
    fn capacity(&self) -> f64 {
        self.inner.capacity()
    }

    #[getter]
    fn z0(&self) -> f64 {
        self.inner.z0()
    }

    #[getter]
    fn scaling_exponent(&self) -> f64 {
        self.inner.kind().scaling_exponent()
    }

    fn sample_llrs(&self, codeword: Vec<u8>, seed: u64) -> Vec<f64> {
        self.inner.sample_llrs(&codeword, seed)
    }

    fn __repr__(&self) -> String {
        format!(
            "Channel({:?}, param={}, capacity={})",
            self.inner.kind().as_str(),
            self.inner.param(),
            self.inner.capacity()
        )
    }
}

/// A polar code: block length and frozen set.
#[pyclass(name = "Code", module = "pypolarlat", frozen)]
struct PyCode {
    inner: PolarCode,
}

#[pymethods]
impl PyCode {
    /// Parses the text code file format.
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        Ok(Self {
            inner: PolarCode::parse(text).map_err(to_py)?,
        })
    }

    #[staticmethod]
    fn from_frozen(channel: &PyChannel, n: u32, pe: f64, frozen: Vec<usize>) -> PyResult<Self> {
        Ok(Self {
            inner: PolarCode::with_frozen_indices(channel.inner, n, pe, &frozen).map_err(to_py)?,
        })
    }

    #[getter]
    fn n(&self) -> u32 {
        self.inner.n()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    #[getter]
    fn pe(&self) -> f64 {
        self.inner.p_e()
    }

    #[getter]
    fn channel(&self) -> PyChannel {
        PyChannel {
            inner: *self.inner.channel(),
        }
    }

    #[getter]
    fn info_count(&self) -> usize {
        self.inner.info_count()
    }

    #[getter]
    fn frozen_count(&self) -> usize {
        self.inner.frozen_count()
    }

    #[getter]
    fn rate(&self) -> f64 {
        self.inner.rate()
    }

    #[getter]
    fn frozen(&self) -> Vec<bool> {
        self.inner.frozen().iter().by_vals().collect()
    }

    #[getter]
    fn info_positions(&self) -> Vec<usize> {
        self.inner.info_positions()
    }

    fn to_file_string(&self) -> String {
        self.inner.to_file_string()
    }

    fn __repr__(&self) -> String {
        format!(
            "Code(N={}, K={}, channel={})",
            self.inner.len(),
            self.inner.info_count(),
            self.inner.channel().kind().as_str()
        )
    }
}

/// Builds the code whose information set is every synthetic channel with
/// Bhattacharyya parameter below `pe / N`.
#[pyfunction]
fn build_code(channel: &PyChannel, n: u32, pe: f64) -> PyResult<PyCode> {
    let policy = ZPolicy::for_kind(channel.inner.kind());
    Ok(PyCode {
        inner: polarlat::construct::build_code(&channel.inner, n, pe, policy).map_err(to_py)?,
    })
}

/// Bhattacharyya parameters of the `2^n` synthetic channels, for `n <= 20`.
#[pyfunction]
fn z_leaves(channel: &PyChannel, n: u32) -> PyResult<Vec<f64>> {
    let policy = ZPolicy::for_kind(channel.inner.kind());
    polarlat::construct::z_leaves(&channel.inner, n, policy).map_err(to_py)
}

#[pyfunction]
fn encode(u: Vec<u8>) -> PyResult<Vec<u32>> {
    codec::encode(&u).map(bits_out).map_err(to_py)
}

fn check_len(code: &PyCode, llrs: &[f64]) -> PyResult<()> {
    if llrs.len() != code.inner.len() {
        return Err(PyValueError::new_err(format!(
            "expected {} LLRs, got {}",
            code.inner.len(),
            llrs.len()
        )));
    }
    Ok(())
}

#[pyfunction]
fn sc_decode(code: &PyCode, llrs: Vec<f64>) -> PyResult<Vec<u32>> {
    check_len(code, &llrs)?;
    Ok(bits_out(codec::sc_decode(&code.inner, &llrs)))
}

#[pyfunction]
fn ssc_decode(code: &PyCode, llrs: Vec<f64>) -> PyResult<Vec<u32>> {
    check_len(code, &llrs)?;
    Ok(bits_out(codec::ssc_decode(&code.inner, &llrs)))
}

/// Seeded Monte Carlo run; returns a dict with trials, agree, frame_errors, fer and seed.
#[pyfunction]
#[pyo3(signature = (code, trials, seed, channel = None))]
fn simulate<'py>(
    py: Python<'py>,
    code: &PyCode,
    trials: u64,
    seed: u64,
    channel: Option<&PyChannel>,
) -> PyResult<Bound<'py, PyDict>> {
    let ch = channel.map_or(*code.inner.channel(), |c| c.inner);
    let report = py
        .detach(|| codec::simulate(&code.inner, &ch, trials, seed))
        .map_err(to_py)?;
    let out = PyDict::new(py);
    out.set_item("trials", report.trials)?;
    out.set_item("agree", report.agree)?;
    out.set_item("frame_errors", report.frame_errors)?;
    out.set_item("fer", report.fer())?;
    out.set_item("seed", report.seed)?;
    Ok(out)
}

fn check_p(p: u64) -> PyResult<()> {
    if p == 0 {
        return Err(PyValueError::new_err("P must be at least 1"));
    }
    Ok(())
}

#[pyfunction]
fn ssc_latency(code: &PyCode, p: u64) -> PyResult<u64> {
    check_p(p)?;
    Ok(latency::ssc_latency(&latency::build_ssc_tree(&code.inner), p))
}

#[pyfunction]
fn sc_latency_tree(n: u32, p: u64) -> PyResult<u64> {
    check_p(p)?;
    if n > 60 {
        return Err(PyValueError::new_err("n must be at most 60"));
    }
    Ok(latency::sc_latency_tree(n, p))
}

#[pyfunction]
fn sc_latency_closed_form(block_len: u64, p: u64) -> PyResult<u64> {
    latency::sc_latency_closed_form(block_len, p).map_err(to_py)
}

/// Per-level edge counts of the pruned decoding tree.
#[pyfunction]
fn ssc_edge_histogram(code: &PyCode) -> Vec<u64> {
    latency::ssc_edge_histogram(&code.inner)
}

#[pyfunction]
fn min_p_within_factor(code: &PyCode, factor: f64) -> PyResult<u64> {
    latency::min_p_from_histogram(&latency::ssc_edge_histogram(&code.inner), factor).map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (block_len, p, mu, c = 1.0, eps = 0.5))]
fn theorem1_bound(block_len: f64, p: f64, mu: f64, c: f64, eps: f64) -> PyResult<f64> {
    latency::theorem1_bound(block_len, p, mu, c, eps).map_err(to_py)
}

/// Least-squares line over the last `window` points; returns slope, intercept, residual and window.
#[pyfunction]
fn fit_line<'py>(py: Python<'py>, xs: Vec<f64>, ys: Vec<f64>, window: usize) -> PyResult<Bound<'py, PyDict>> {
    let fit = experiments::fit_line(&xs, &ys, window).map_err(to_py)?;
    let out = PyDict::new(py);
    out.set_item("slope", fit.slope)?;
    out.set_item("intercept", fit.intercept)?;
    out.set_item("residual", fit.residual)?;
    out.set_item("window", fit.window)?;
    Ok(out)
}

/// Runs sweep 6, 7 or 8 over the standard grid up to `nmax` and returns CSV text.
#[pyfunction]
#[pyo3(signature = (figure, nmax = 22, factor = 1.01))]
fn sweep_csv(py: Python<'_>, figure: u8, nmax: u32, factor: f64) -> PyResult<String> {
    let records = py
        .detach(|| match figure {
            6 => experiments::run_fig6(&SweepGrid::fig6(nmax)),
            7 => experiments::run_fig7(&SweepGrid::bec_half(nmax), &PPolicy::FIG7, None),
            8 => experiments::run_fig8(&SweepGrid::bec_half(nmax), factor),
            other => Err(Error::Domain(format!("unknown figure {other}; expected 6, 7 or 8"))),
        })
        .map_err(to_py)?;
    Ok(experiments::to_csv_string(&records))
}

#[pymodule]
pub fn pypolarlat(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyChannel>()?;
    m.add_class::<PyCode>()?;
    m.add_function(wrap_pyfunction!(build_code, m)?)?;
    m.add_function(wrap_pyfunction!(z_leaves, m)?)?;
    m.add_function(wrap_pyfunction!(encode, m)?)?;
    m.add_function(wrap_pyfunction!(sc_decode, m)?)?;
    m.add_function(wrap_pyfunction!(ssc_decode, m)?)?;
    m.add_function(wrap_pyfunction!(simulate, m)?)?;
    m.add_function(wrap_pyfunction!(ssc_latency, m)?)?;
    m.add_function(wrap_pyfunction!(sc_latency_tree, m)?)?;
    m.add_function(wrap_pyfunction!(sc_latency_closed_form, m)?)?;
    m.add_function(wrap_pyfunction!(ssc_edge_histogram, m)?)?;
    m.add_function(wrap_pyfunction!(min_p_within_factor, m)?)?;
    m.add_function(wrap_pyfunction!(theorem1_bound, m)?)?;
    m.add_function(wrap_pyfunction!(fit_line, m)?)?;
    m.add_function(wrap_pyfunction!(sweep_csv, m)?)?;
    m.add("CSV_HEADER", experiments::CSV_HEADER)?;
    Ok(())
}
