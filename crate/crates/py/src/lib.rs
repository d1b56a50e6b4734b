//! Python bindings. Element indices are 1-based on both sides; every error
//! surfaces as `ValueError`.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use delaysplit as ds;
use ds::{SplitInstance as CoreSplit, SubsetMask, SubsetSumInstance as CoreSubsetSum};

fn err<E: std::fmt::Display>(e: E) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn mask_of(elements: &[u32], n: u32) -> PyResult<SubsetMask> {
    let mut mask = 0u64;
    for &e in elements {
        if e == 0 || e > n {
            return Err(err(format!("index {e} out of range [1, {n}]")));
        }
        if mask >> (e - 1) & 1 == 1 {
            return Err(err(format!("index {e} repeated within one set")));
        }
        mask |= 1 << (e - 1);
    }
    Ok(SubsetMask(mask))
}

fn check_n(n: u32) -> PyResult<()> {
    if n == 0 || n > ds::MAX_N {
        return Err(err(ds::Error::SizeOutOfRange(n as u64)));
    }
    Ok(())
}

fn elements(mask: SubsetMask) -> Vec<u32> {
    mask.elements().collect()
}

/// Set-splitting instance over elements `1..=n`.
#[pyclass(frozen, skip_from_py_object, module = "delaysplit")]
#[derive(Clone)]
struct SplitInstance {
    inner: CoreSplit,
}

#[pymethods]
impl SplitInstance {
    #[new]
    #[pyo3(signature = (n, family = Vec::new()))]
    fn new(n: u32, family: Vec<Vec<u32>>) -> PyResult<Self> {
        check_n(n)?;
        let family = family
            .iter()
            .map(|set| mask_of(set, n))
            .collect::<PyResult<Vec<_>>>()?;
        Ok(SplitInstance {
            inner: CoreSplit::new(n, family).map_err(err)?,
        })
    }

    #[staticmethod]
    fn from_text(text: &str) -> PyResult<Self> {
        Ok(SplitInstance {
            inner: ds::parse_split_instance(text).map_err(err)?,
        })
    }

    fn to_text(&self) -> String {
        self.inner.to_string()
    }

    #[getter]
    fn n(&self) -> u32 {
        self.inner.n()
    }

    #[getter]
    fn family(&self) -> Vec<Vec<u32>> {
        self.inner.family().iter().map(|&f| elements(f)).collect()
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.inner == other.inner
    }

    fn __repr__(&self) -> String {
        format!(
            "SplitInstance(n={}, family={:?})",
            self.inner.n(),
            self.family()
        )
    }
}

#[pyclass(frozen, skip_from_py_object, module = "delaysplit")]
#[derive(Clone)]
struct SubsetSumInstance {
    inner: CoreSubsetSum,
}

#[pymethods]
impl SubsetSumInstance {
    #[new]
    fn new(values: Vec<u64>, target: u64) -> PyResult<Self> {
        Ok(SubsetSumInstance {
            inner: CoreSubsetSum::new(values, target).map_err(err)?,
        })
    }

    #[staticmethod]
    fn from_text(text: &str) -> PyResult<Self> {
        Ok(SubsetSumInstance {
            inner: ds::parse_subset_sum_instance(text).map_err(err)?,
        })
    }

    fn to_text(&self) -> String {
        self.inner.to_string()
    }

    #[getter]
    fn values(&self) -> Vec<u64> {
        self.inner.values().to_vec()
    }

    #[getter]
    fn target(&self) -> u64 {
        self.inner.target()
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.inner == other.inner
    }

    fn __repr__(&self) -> String {
        format!(
            "SubsetSumInstance(values={:?}, target={})",
            self.inner.values(),
            self.inner.target()
        )
    }
}

/// Outcome of a set-splitting solve.
#[pyclass(frozen, get_all, module = "delaysplit")]
struct SplitAnswer {
    solvable: bool,
    a1: Option<Vec<u32>>,
    a2: Option<Vec<u32>>,
    moment: Option<u64>,
    method: String,
    text: String,
}

impl From<ds::SplitAnswer> for SplitAnswer {
    fn from(a: ds::SplitAnswer) -> Self {
        SplitAnswer {
            solvable: a.is_solvable(),
            a1: a.partition.map(|p| elements(p.a1)),
            a2: a.partition.map(|p| elements(p.a2)),
            moment: a.solution_moment,
            method: a.method.to_string(),
            text: a.to_string(),
        }
    }
}

#[pymethods]
impl SplitAnswer {
    fn __bool__(&self) -> bool {
        self.solvable
    }

    fn __str__(&self) -> &str {
        &self.text
    }

    fn __repr__(&self) -> String {
        format!("SplitAnswer({:?}, method={:?})", self.text, self.method)
    }
}

#[pyclass(frozen, get_all, module = "delaysplit")]
struct SubsetSumAnswer {
    found: bool,
    witness: Option<Vec<u32>>,
    text: String,
}

impl From<ds::SubsetSumAnswer> for SubsetSumAnswer {
    fn from(a: ds::SubsetSumAnswer) -> Self {
        SubsetSumAnswer {
            found: a.found,
            witness: a.witness.map(elements),
            text: a.to_string(),
        }
    }
}

#[pymethods]
impl SubsetSumAnswer {
    fn __bool__(&self) -> bool {
        self.found
    }

    fn __str__(&self) -> &str {
        &self.text
    }

    fn __repr__(&self) -> String {
        format!("SubsetSumAnswer({:?})", self.text)
    }
}

/// Moments of all supersets of `elements` in a universe of size `n`.
#[pyfunction]
fn superset_moments(elements: Vec<u32>, n: u32) -> PyResult<Vec<u64>> {
    check_n(n)?;
    let f = mask_of(&elements, n)?;
    Ok(ds::superset_moments(f, n).map_err(err)?.to_vec())
}

#[pyfunction]
fn blocked_moments_literal(inst: &SplitInstance) -> PyResult<Vec<u64>> {
    Ok(ds::blocked_moments_literal(&inst.inner)
        .map_err(err)?
        .to_vec())
}

#[pyfunction]
fn blocked_moments_full(inst: &SplitInstance) -> PyResult<Vec<u64>> {
    Ok(ds::blocked_moments_full(&inst.inner).map_err(err)?.to_vec())
}

#[pyfunction]
fn is_solution_moment(k: u64, inst: &SplitInstance) -> PyResult<bool> {
    ds::is_solution_moment(k, &inst.inner).map_err(err)
}

/// Elements of `A_1` encoded by moment `k`.
#[pyfunction]
fn decode_moment(k: u64, n: u32) -> PyResult<Vec<u32>> {
    Ok(elements(ds::decode_moment(k, n).map_err(err)?))
}

#[pyfunction]
fn encode_moment(elements: Vec<u32>) -> PyResult<u64> {
    Ok(ds::encode_moment(mask_of(&elements, ds::MAX_N)?))
}

#[pyfunction]
fn solve_optical(py: Python<'_>, inst: &SplitInstance) -> PyResult<SplitAnswer> {
    let inner = inst.inner.clone();
    py.detach(|| ds::solve_optical(&inner))
        .map(Into::into)
        .map_err(err)
}

#[pyfunction]
fn solve_oracle(py: Python<'_>, inst: &SplitInstance) -> PyResult<SplitAnswer> {
    let inner = inst.inner.clone();
    py.detach(|| ds::solve_oracle(&inner))
        .map(Into::into)
        .map_err(err)
}

#[pyfunction]
fn solve_subset_sum(py: Python<'_>, inst: &SubsetSumInstance) -> PyResult<SubsetSumAnswer> {
    let inner = inst.inner.clone();
    py.detach(|| ds::solve_subset_sum(&inner))
        .map(Into::into)
        .map_err(err)
}

type Row = (u64, u32, u64, u128, u64, Vec<u32>);

fn timeline_rows(t: &ds::ArrivalTimeline) -> Vec<Row> {
    t.events()
        .iter()
        .map(|e| {
            (
                e.moment.core,
                e.moment.hops,
                e.intensity.numerator(),
                1u128 << e.intensity.exponent(),
                e.paths,
                elements(e.witness),
            )
        })
        .collect()
}

fn device_for(inst: &Bound<'_, PyAny>) -> PyResult<ds::DelayDevice> {
    if let Ok(n) = inst.extract::<u32>() {
        ds::build_set_splitting_device(n).map_err(err)
    } else if let Ok(s) = inst.cast::<SplitInstance>() {
        ds::build_set_splitting_device(s.get().inner.n()).map_err(err)
    } else if let Ok(s) = inst.cast::<SubsetSumInstance>() {
        Ok(ds::build_subset_sum_device(&s.get().inner))
    } else {
        Err(err("expected a size, SplitInstance or SubsetSumInstance"))
    }
}

/// Arrival timeline as `(core, hops, numerator, denominator, paths, witness)`
/// rows, ascending by moment. `source` is a device size or an instance.
#[pyfunction]
fn simulate(py: Python<'_>, source: &Bound<'_, PyAny>) -> PyResult<Vec<Row>> {
    let device = device_for(source)?;
    let timeline = py.detach(|| ds::simulate(&device)).map_err(err)?;
    Ok(timeline_rows(&timeline))
}

/// Sampled trace as `(step_seconds, samples)`.
#[pyfunction]
#[pyo3(signature = (source, unit_delay, epsilon, rise_time, samples_per_rise = 4))]
fn trace(
    py: Python<'_>,
    source: &Bound<'_, PyAny>,
    unit_delay: f64,
    epsilon: f64,
    rise_time: f64,
    samples_per_rise: u32,
) -> PyResult<(f64, Vec<f64>)> {
    let device = device_for(source)?;
    let params = ds::TraceParams {
        unit_delay,
        epsilon,
        rise_time,
        samples_per_rise,
    };
    let t = py
        .detach(|| ds::simulate(&device).and_then(|t| ds::synthesize_trace(&t, &params)))
        .map_err(err)?;
    Ok((t.step(), t.samples().to_vec()))
}

fn params(rise_time: f64, light_speed: f64) -> PyResult<ds::PhysicalParams> {
    ds::PhysicalParams::new(rise_time, light_speed).map_err(err)
}

const RISE: f64 = ds::feasibility::DEFAULT_RISE_TIME;
const SPEED: f64 = ds::feasibility::DEFAULT_LIGHT_SPEED;

#[pyfunction]
#[pyo3(signature = (rise_time = RISE, light_speed = SPEED))]
fn min_cable_length(rise_time: f64, light_speed: f64) -> PyResult<f64> {
    ds::min_cable_length(&params(rise_time, light_speed)?).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (total_time, rise_time = RISE, light_speed = SPEED))]
fn max_n_for_total_time(total_time: f64, rise_time: f64, light_speed: f64) -> PyResult<u32> {
    ds::max_n_for_total_time(total_time, &params(rise_time, light_speed)?).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (max_cable, rise_time = RISE, light_speed = SPEED))]
fn max_n_for_cable(max_cable: f64, rise_time: f64, light_speed: f64) -> PyResult<u32> {
    ds::max_n_for_cable(max_cable, &params(rise_time, light_speed)?).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (n, rise_time = RISE, light_speed = SPEED))]
fn feasibility_report<'py>(
    py: Python<'py>,
    n: u32,
    rise_time: f64,
    light_speed: f64,
) -> PyResult<Bound<'py, PyDict>> {
    let r = ds::report(n, &params(rise_time, light_speed)?).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("n", r.n)?;
    d.set_item("min_cable_m", r.min_cable_m)?;
    d.set_item("longest_cable_m", r.longest_cable_m)?;
    d.set_item("total_cable_m", r.total_cable_m)?;
    d.set_item("solve_time_s", r.solve_time_s)?;
    d.set_item("relative_power", r.relative_power)?;
    d.set_item("build_cost_units", r.build_cost_units)?;
    Ok(d)
}

/// `(label, computed, published, discrepancy)` for each published figure.
#[pyfunction]
#[pyo3(signature = (rise_time = RISE, light_speed = SPEED))]
fn published_figures(
    rise_time: f64,
    light_speed: f64,
) -> PyResult<Vec<(&'static str, f64, f64, bool)>> {
    Ok(ds::published_figures(&params(rise_time, light_speed)?)
        .map_err(err)?
        .into_iter()
        .map(|f| (f.label, f.computed, f.stated, f.discrepancy))
        .collect())
}

#[pyfunction]
fn generate_split_instance(
    n: u32,
    m: usize,
    max_set_size: u32,
    seed: u64,
) -> PyResult<SplitInstance> {
    Ok(SplitInstance {
        inner: ds::generate_split_instance(n, m, max_set_size, seed).map_err(err)?,
    })
}

#[pymodule]
#[pyo3(name = "delaysplit")]
fn delaysplit_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<SplitInstance>()?;
    m.add_class::<SubsetSumInstance>()?;
    m.add_class::<SplitAnswer>()?;
    m.add_class::<SubsetSumAnswer>()?;
    m.add_function(wrap_pyfunction!(superset_moments, m)?)?;
    m.add_function(wrap_pyfunction!(blocked_moments_literal, m)?)?;
    m.add_function(wrap_pyfunction!(blocked_moments_full, m)?)?;
    m.add_function(wrap_pyfunction!(is_solution_moment, m)?)?;
    m.add_function(wrap_pyfunction!(decode_moment, m)?)?;
    m.add_function(wrap_pyfunction!(encode_moment, m)?)?;
    m.add_function(wrap_pyfunction!(solve_optical, m)?)?;
    m.add_function(wrap_pyfunction!(solve_oracle, m)?)?;
    m.add_function(wrap_pyfunction!(solve_subset_sum, m)?)?;
    m.add_function(wrap_pyfunction!(simulate, m)?)?;
    m.add_function(wrap_pyfunction!(trace, m)?)?;
    m.add_function(wrap_pyfunction!(min_cable_length, m)?)?;
    m.add_function(wrap_pyfunction!(max_n_for_total_time, m)?)?;
    m.add_function(wrap_pyfunction!(max_n_for_cable, m)?)?;
    m.add_function(wrap_pyfunction!(feasibility_report, m)?)?;
    m.add_function(wrap_pyfunction!(published_figures, m)?)?;
    m.add_function(wrap_pyfunction!(generate_split_instance, m)?)?;
    Ok(())
}
