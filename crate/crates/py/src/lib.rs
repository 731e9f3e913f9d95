//! Python bindings. Reports come back as plain dicts (parsed from the same
//! JSON the CLI emits), exact values as `{"exact": "p/q", "float": x}`.

use pyo3::exceptions::{PyOSError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyTuple;
use serde::Serialize;

use sumset_core::construct::{find_bc_high_density, verify_bc as core_verify, HighDensityParams};
use sumset_core::density::{default_schedule, density_report as core_density};
use sumset_core::io::{format_set, parse_set, read_set, write_set, ReadOptions, SetFormat};
use sumset_core::mixing::{
    autocorrelation as core_autocorrelation, find_bc_pseudorandom, mixing_report as core_mixing,
    MixingParams, Mode, PseudorandomParams,
};
use sumset_core::ramsey::{one_shift as core_one_shift, OneShiftParams};
use sumset_core::transform::{block_transform as core_block, default_n_schedule, fatten as core_fatten};
use sumset_core::{generate, Error, GeneratorKind, GeneratorSpec, WindowSet};

fn err(e: Error) -> PyErr {
    match e {
        Error::Io(io) => PyOSError::new_err(io.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

fn to_py<'py>(py: Python<'py>, value: &impl Serialize) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| PyValueError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

fn mode(name: &str) -> PyResult<Mode> {
    name.parse().map_err(err)
}

/// A set of integers inside the window `[1, N]`.
#[pyclass(name = "WindowSet", module = "sumset", frozen, skip_from_py_object)]
#[derive(Clone)]
pub struct PyWindowSet {
    inner: WindowSet,
}

impl From<WindowSet> for PyWindowSet {
    fn from(inner: WindowSet) -> Self {
        Self { inner }
    }
}

#[pymethods]
impl PyWindowSet {
    #[new]
    #[pyo3(signature = (window_len, members = Vec::new()))]
    fn new(window_len: usize, members: Vec<usize>) -> PyResult<Self> {
        WindowSet::from_members(window_len, members).map(Into::into).map_err(err)
    }

    #[staticmethod]
    fn full(window_len: usize) -> PyResult<Self> {
        WindowSet::full(window_len).map(Into::into).map_err(err)
    }

    /// Build from a generator string such as `"bernoulli:0.8"` or `"periodic:4:1,3"`.
    #[staticmethod]
    #[pyo3(signature = (spec, window_len, seed = 0))]
    fn generate(spec: &str, window_len: usize, seed: u64) -> PyResult<Self> {
        let kind: GeneratorKind = spec.parse().map_err(err)?;
        generate(&GeneratorSpec::new(kind, seed, window_len))
            .map(Into::into)
            .map_err(err)
    }

    #[staticmethod]
    #[pyo3(signature = (path, lenient = false))]
    fn read(path: &str, lenient: bool) -> PyResult<Self> {
        read_set(path, ReadOptions { lenient }).map(Into::into).map_err(err)
    }

    #[staticmethod]
    #[pyo3(signature = (text, lenient = false))]
    fn parse(text: &str, lenient: bool) -> PyResult<Self> {
        parse_set(text, ReadOptions { lenient }).map(Into::into).map_err(err)
    }

    #[pyo3(signature = (path, rle = false))]
    fn write(&self, path: &str, rle: bool) -> PyResult<()> {
        write_set(&self.inner, path, if rle { SetFormat::Rle } else { SetFormat::List }).map_err(err)
    }

    #[pyo3(signature = (rle = false))]
    fn to_text(&self, rle: bool) -> String {
        format_set(&self.inner, if rle { SetFormat::Rle } else { SetFormat::List })
    }

    #[getter]
    fn window_len(&self) -> usize {
        self.inner.window_len()
    }

    fn members(&self) -> Vec<usize> {
        self.inner.to_vec()
    }

    /// `A + k` clipped to the window, with the number of members dropped.
    fn shift(&self, k: i64) -> PyResult<(PyWindowSet, usize)> {
        let s = self.inner.shift(k).map_err(err)?;
        Ok((s.set.into(), s.dropped))
    }

    /// `A ∩ ⋂ (A − s)` over the given shifts.
    fn intersect_translate(&self, shifts: Vec<usize>) -> PyResult<PyWindowSet> {
        self.inner.intersect_translate(&shifts).map(Into::into).map_err(err)
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __contains__(&self, x: usize) -> bool {
        self.inner.contains(x)
    }

    fn __eq__(&self, other: &PyWindowSet) -> bool {
        self.inner == other.inner
    }

    fn __repr__(&self) -> String {
        format!("WindowSet(N={}, |A|={})", self.inner.window_len(), self.inner.len())
    }
}

#[pyfunction]
#[pyo3(signature = (set, schedule = None))]
fn density_report<'py>(py: Python<'py>, set: &PyWindowSet, schedule: Option<Vec<usize>>) -> PyResult<Bound<'py, PyAny>> {
    let schedule = schedule.unwrap_or_else(|| default_schedule(set.inner.window_len()));
    to_py(py, &core_density(&set.inner, &schedule).map_err(err)?)
}

/// The block set `A_[n]` and its summary.
#[pyfunction]
fn block_transform<'py>(py: Python<'py>, set: &PyWindowSet, n: usize) -> PyResult<Bound<'py, PyTuple>> {
    let r = py.detach(|| core_block(&set.inner, n)).map_err(err)?;
    let summary = to_py(py, &r)?;
    let blocks = Bound::new(py, PyWindowSet::from(r.blocks))?;
    PyTuple::new(py, [blocks.into_any(), summary])
}

#[pyfunction]
#[pyo3(signature = (set, epsilon, n_schedule = None))]
fn fatten<'py>(py: Python<'py>, set: &PyWindowSet, epsilon: f64, n_schedule: Option<Vec<usize>>) -> PyResult<Bound<'py, PyAny>> {
    let schedule = n_schedule.unwrap_or_else(|| default_n_schedule(set.inner.window_len()));
    let out = py.detach(|| core_fatten(&set.inner, epsilon, &schedule)).map_err(err)?;
    to_py(py, &out)
}

#[pyfunction]
#[pyo3(signature = (set, size, pipeline = "high-density", candidates = 8, tau = None, rho = None))]
fn find_bc<'py>(
    py: Python<'py>,
    set: &PyWindowSet,
    size: usize,
    pipeline: &str,
    candidates: usize,
    tau: Option<f64>,
    rho: Option<f64>,
) -> PyResult<Bound<'py, PyAny>> {
    let cert = match pipeline {
        "high-density" => py.detach(|| {
            find_bc_high_density(
                &set.inner,
                HighDensityParams {
                    size,
                    candidates,
                    tau,
                    rho,
                    d_len: None,
                },
            )
        }),
        "pseudorandom" => py.detach(|| {
            let mut p = PseudorandomParams::new(size);
            p.candidates = candidates;
            p.tau = tau;
            p.rho = rho;
            find_bc_pseudorandom(&set.inner, p)
        }),
        other => return Err(PyValueError::new_err(format!("unknown pipeline `{other}`"))),
    }
    .map_err(err)?;
    to_py(py, &cert)
}

#[pyfunction]
#[pyo3(signature = (set, size, epsilon = 0.1))]
fn one_shift<'py>(py: Python<'py>, set: &PyWindowSet, size: usize, epsilon: f64) -> PyResult<Bound<'py, PyAny>> {
    let cert = py
        .detach(|| core_one_shift(&set.inner, OneShiftParams::new(size, epsilon)))
        .map_err(err)?;
    to_py(py, &cert)
}

#[pyfunction]
#[pyo3(signature = (set, b, c, k = 0))]
fn verify_bc<'py>(py: Python<'py>, set: &PyWindowSet, b: Vec<usize>, c: Vec<usize>, k: i64) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &core_verify(&set.inner, &b, &c, k))
}

/// Density of `A ∩ (A − i)` as a `fractions.Fraction`.
#[pyfunction]
#[pyo3(signature = (set, i, mode = "cyclic"))]
fn autocorrelation<'py>(py: Python<'py>, set: &PyWindowSet, i: usize, mode: &str) -> PyResult<Bound<'py, PyAny>> {
    let r = core_autocorrelation(&set.inner, i, self::mode(mode)?).map_err(err)?;
    py.import("fractions")?.getattr("Fraction")?.call1((*r.numer(), *r.denom()))
}

#[pyfunction]
#[pyo3(signature = (set, n_max, eps = None, mode = "cyclic"))]
fn mixing_report<'py>(
    py: Python<'py>,
    set: &PyWindowSet,
    n_max: usize,
    eps: Option<Vec<f64>>,
    mode: &str,
) -> PyResult<Bound<'py, PyAny>> {
    let mut params = MixingParams::new(n_max);
    if let Some(eps) = eps {
        params.eps = eps;
    }
    params.mode = self::mode(mode)?;
    let report = py.detach(|| core_mixing(&set.inner, &params)).map_err(err)?;
    to_py(py, &report)
}

#[pymodule]
fn sumset(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyWindowSet>()?;
    m.add_function(wrap_pyfunction!(density_report, m)?)?;
    m.add_function(wrap_pyfunction!(block_transform, m)?)?;
    m.add_function(wrap_pyfunction!(fatten, m)?)?;
    m.add_function(wrap_pyfunction!(find_bc, m)?)?;
    m.add_function(wrap_pyfunction!(one_shift, m)?)?;
    m.add_function(wrap_pyfunction!(verify_bc, m)?)?;
    m.add_function(wrap_pyfunction!(autocorrelation, m)?)?;
    m.add_function(wrap_pyfunction!(mixing_report, m)?)?;
    Ok(())
}
