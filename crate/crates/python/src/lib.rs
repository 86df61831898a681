//! Python bindings for the skyrmion logic simulator.

use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyValueError};
use pyo3::prelude::*;

use skylogic_core::circuit::{self, GateKind, GateState};
use skylogic_core::config::RunConfig;
use skylogic_core::device;
use skylogic_core::dse::{self, Objective};
use skylogic_core::performance::{stage_report, PerformanceReport, StageModels};
use skylogic_core::planner;
use skylogic_core::trajectory::{self, OracleOptions, SkyrmionState};

create_exception!(skylogic, SkylogicError, PyException);

fn to_py(e: skylogic_core::Error) -> PyErr {
    SkylogicError::new_err(e.to_string())
}

/// Full run configuration; defaults are the reference device.
#[pyclass(name = "Config", from_py_object)]
#[derive(Clone, Default)]
struct PyConfig {
    inner: RunConfig,
}

#[pymethods]
impl PyConfig {
    #[new]
    fn new() -> Self {
        Self::default()
    }

    /// Parse the `[section]` / `key = value` configuration format.
    #[staticmethod]
    fn from_text(text: &str) -> PyResult<Self> {
        skylogic_core::parse_config(text)
            .map(|inner| Self { inner })
            .map_err(to_py)
    }

    #[getter]
    fn ms(&self) -> f64 {
        self.inner.material.ms
    }
    #[setter]
    fn set_ms(&mut self, v: f64) {
        self.inner.material.ms = v;
    }
    #[getter]
    fn ku(&self) -> f64 {
        self.inner.material.ku
    }
    #[setter]
    fn set_ku(&mut self, v: f64) {
        self.inner.material.ku = v;
    }
    #[getter]
    fn alpha(&self) -> f64 {
        self.inner.material.alpha
    }
    #[setter]
    fn set_alpha(&mut self, v: f64) {
        self.inner.material.alpha = v;
    }
    #[getter]
    fn jx(&self) -> f64 {
        self.inner.drive.jx
    }
    #[setter]
    fn set_jx(&mut self, v: f64) {
        self.inner.drive.jx = v;
        self.inner.sweep.jx = v;
    }
    #[getter]
    fn jy(&self) -> f64 {
        self.inner.drive.jy
    }
    #[setter]
    fn set_jy(&mut self, v: f64) {
        self.inner.drive.jy = v;
        self.inner.sweep.jy = v;
    }
    #[getter]
    fn p_max(&self) -> usize {
        self.inner.planner.p_max
    }
    #[setter]
    fn set_p_max(&mut self, v: usize) {
        self.inner.planner.p_max = v;
    }

    fn validate(&self) -> PyResult<()> {
        self.inner.validate().map_err(to_py)
    }

    fn __repr__(&self) -> String {
        format!(
            "Config(ms={:e}, ku={:e}, alpha={}, jx={:e}, jy={:e})",
            self.inner.material.ms,
            self.inner.material.ku,
            self.inner.material.alpha,
            self.inner.drive.jx,
            self.inner.drive.jy
        )
    }
}

impl PyConfig {
    fn constants(&self) -> PyResult<device::ThieleConstants> {
        let c = &self.inner;
        c.validate().map_err(to_py)?;
        device::thiele_constants(&c.material, &c.geometry, &c.drive, &c.constants).map_err(to_py)
    }

    fn layout(&self, tc: &device::ThieleConstants) -> PyResult<planner::RepeaterLayout> {
        let c = &self.inner;
        match c.planner.mode {
            planner::PlacementMode::EqualSpacing => {
                planner::plan_equal_spacing(tc, &c.geometry, c.planner.p_max)
            }
            _ => planner::plan(tc, &c.geometry, c.planner.p_max),
        }
        .map_err(to_py)
    }
}

#[pyclass(name = "ThieleConstants", frozen, get_all)]
struct PyThieleConstants {
    g_gyro: f64,
    d_diss: f64,
    delta_dw: f64,
    tau: f64,
    a_const: f64,
    b_const: f64,
    f_she_x: f64,
    f_she_y: f64,
    steady_deflection: f64,
}

#[pyclass(name = "RepeaterLayout", frozen, get_all)]
struct PyLayout {
    p: usize,
    intervals: Vec<(f64, f64)>,
    feasible: bool,
    reason: String,
    mode: String,
}

impl From<&planner::RepeaterLayout> for PyLayout {
    fn from(l: &planner::RepeaterLayout) -> Self {
        Self {
            p: l.p,
            intervals: l.intervals.clone(),
            feasible: l.feasible,
            reason: l.infeasibility_reason.to_string(),
            mode: l.mode.to_string(),
        }
    }
}

#[pyclass(name = "Trajectory", frozen)]
struct PyTrajectory {
    inner: trajectory::Trajectory,
}

#[pymethods]
impl PyTrajectory {
    #[getter]
    fn outcome(&self) -> String {
        self.inner.outcome.to_string()
    }
    #[getter]
    fn t_prop(&self) -> f64 {
        self.inner.t_prop
    }
    #[getter]
    fn r2_residency(&self) -> f64 {
        self.inner.r2_residency
    }
    /// `(t_global, x, y, segment_kind)` tuples.
    #[getter]
    fn samples(&self) -> Vec<(f64, f64, f64, String)> {
        self.inner
            .samples
            .iter()
            .map(|s| (s.state.t_global, s.state.x, s.state.y, s.kind.to_string()))
            .collect()
    }
    #[getter]
    fn final_position(&self) -> (f64, f64) {
        let s = self.inner.final_state();
        (s.x, s.y)
    }
    fn to_csv(&self) -> String {
        self.inner.to_csv()
    }
    fn __len__(&self) -> usize {
        self.inner.samples.len()
    }
    fn __repr__(&self) -> String {
        format!(
            "Trajectory(outcome={}, t_prop={:e}, samples={})",
            self.inner.outcome,
            self.inner.t_prop,
            self.inner.samples.len()
        )
    }
}

#[pyclass(name = "PerformanceReport", frozen, get_all)]
struct PyReport {
    t_nuc: f64,
    t_prop: f64,
    t_det: f64,
    e_nuc: f64,
    e_prop: f64,
    e_det: f64,
    e_tx: f64,
    t_total: f64,
    e_total: f64,
    edp_total: f64,
    edp_prop: f64,
    edp_nuc: f64,
    edp_det: f64,
    v_avg: f64,
    p: usize,
}

impl From<&PerformanceReport> for PyReport {
    fn from(r: &PerformanceReport) -> Self {
        Self {
            t_nuc: r.t_nuc,
            t_prop: r.t_prop,
            t_det: r.t_det,
            e_nuc: r.e_nuc,
            e_prop: r.e_prop,
            e_det: r.e_det,
            e_tx: r.e_tx,
            t_total: r.t_total,
            e_total: r.e_total,
            edp_total: r.edp_total,
            edp_prop: r.edp_prop,
            edp_nuc: r.edp_nuc,
            edp_det: r.edp_det,
            v_avg: r.v_avg,
            p: r.p,
        }
    }
}

#[pyclass(name = "DesignPointResult", frozen, get_all)]
struct PyDesignPoint {
    ms: f64,
    ku: f64,
    alpha: f64,
    feasible: bool,
    reason: String,
    p: usize,
    v_x: Option<f64>,
    t_prop: Option<f64>,
    e_prop: Option<f64>,
    edp_prop: Option<f64>,
    edp_nuc: Option<f64>,
}

impl From<&dse::DesignPointResult> for PyDesignPoint {
    fn from(r: &dse::DesignPointResult) -> Self {
        Self {
            ms: r.params.ms,
            ku: r.params.ku,
            alpha: r.params.alpha,
            feasible: r.feasible,
            reason: r.reason.to_string(),
            p: r.p,
            v_x: r.metrics.map(|m| m.v_x),
            t_prop: r.metrics.map(|m| m.t_prop),
            e_prop: r.metrics.map(|m| m.e_prop),
            edp_prop: r.metrics.map(|m| m.edp_prop),
            edp_nuc: r.metrics.map(|m| m.edp_nuc),
        }
    }
}

/// Domain-wall width sqrt(A/Ku) in metres.
#[pyfunction]
fn domain_wall_width(exchange_a: f64, ku: f64) -> PyResult<f64> {
    let m = device::MaterialParams {
        exchange_a,
        ku,
        ..device::MaterialParams::default()
    };
    device::domain_wall_width(&m).map_err(to_py)
}

#[pyfunction]
fn thiele_constants(config: &PyConfig) -> PyResult<PyThieleConstants> {
    let tc = config.constants()?;
    Ok(PyThieleConstants {
        g_gyro: tc.g_gyro,
        d_diss: tc.d_diss,
        delta_dw: tc.delta_dw,
        tau: tc.tau,
        a_const: tc.a_const,
        b_const: tc.b_const,
        f_she_x: tc.f_she_x,
        f_she_y: tc.f_she_y,
        steady_deflection: tc.steady_deflection(0.0),
    })
}

#[pyfunction]
fn plan(config: &PyConfig) -> PyResult<PyLayout> {
    let tc = config.constants()?;
    Ok(PyLayout::from(&config.layout(&tc)?))
}

/// Closed-form trajectory over the planned layout, or a bare track.
#[pyfunction]
#[pyo3(signature = (config, no_repeaters = false))]
fn simulate(config: &PyConfig, no_repeaters: bool) -> PyResult<PyTrajectory> {
    let tc = config.constants()?;
    let layout = if no_repeaters {
        planner::RepeaterLayout::none()
    } else {
        config.layout(&tc)?
    };
    trajectory::simulate(&tc, &config.inner.geometry, &layout, SkyrmionState::default())
        .map(|inner| PyTrajectory { inner })
        .map_err(to_py)
}

/// RK4 reference integration over the same layout as [`simulate`].
#[pyfunction]
#[pyo3(signature = (config, dt = 1e-14, record_every = 100, no_repeaters = false))]
fn numeric_oracle(config: &PyConfig, dt: f64, record_every: usize, no_repeaters: bool) -> PyResult<PyTrajectory> {
    let tc = config.constants()?;
    let layout = if no_repeaters {
        planner::RepeaterLayout::none()
    } else {
        config.layout(&tc)?
    };
    trajectory::numeric_oracle_with(
        &tc,
        &config.inner.geometry,
        &layout,
        SkyrmionState::default(),
        &OracleOptions { dt, record_every },
    )
    .map(|inner| PyTrajectory { inner })
    .map_err(to_py)
}

#[pyfunction]
fn performance(config: &PyConfig) -> PyResult<PyReport> {
    let c = &config.inner;
    let tc = config.constants()?;
    let layout = config.layout(&tc)?;
    if !layout.feasible {
        return Err(SkylogicError::new_err(format!(
            "layout infeasible: {}",
            layout.infeasibility_reason
        )));
    }
    let traj = trajectory::simulate(&tc, &c.geometry, &layout, SkyrmionState::default()).map_err(to_py)?;
    let report = stage_report(
        &traj,
        &layout,
        &StageModels {
            material: &c.material,
            geometry: &c.geometry,
            drive: &c.drive,
            energy: &c.energy,
            nucleation: &c.nucleation,
            mtj: &c.mtj,
            read: &c.read,
        },
    )
    .map_err(to_py)?;
    Ok(PyReport::from(&report))
}

/// Whether the next stage nucleates, given skyrmion presence at this output.
#[pyfunction]
#[pyo3(signature = (present, config = None))]
fn cascade(present: bool, config: Option<&PyConfig>) -> PyResult<bool> {
    let c = config.map(|c| c.inner.clone()).unwrap_or_default();
    circuit::cascade(present, &c.mtj, &c.read, &c.transistor, &c.geometry, c.drive.j_c_nuc)
        .map_err(to_py)
}

/// `kind` is "inverter" or "nor2".
#[pyfunction]
fn evaluate_gate(kind: &str, inputs: Vec<bool>) -> PyResult<bool> {
    let kind = match kind.to_ascii_lowercase().as_str() {
        "inverter" => GateKind::Inverter,
        "nor2" => GateKind::Nor2,
        other => return Err(PyValueError::new_err(format!("unknown gate kind '{other}'"))),
    };
    circuit::evaluate_gate(&GateState::new(kind, inputs)).map_err(to_py)
}

/// Sweeps the configured grid; results are in (ms, ku, alpha) order.
#[pyfunction]
#[pyo3(signature = (config = None, threads = 0))]
fn run_sweep(py: Python<'_>, config: Option<&PyConfig>, threads: usize) -> PyResult<Vec<PyDesignPoint>> {
    let c = config.map(|c| c.inner.clone()).unwrap_or_default();
    let results = py
        .detach(|| dse::run_sweep(&c.sweep, &c, threads))
        .map_err(to_py)?;
    Ok(results.iter().map(PyDesignPoint::from).collect())
}

/// Best feasible point for "edp_prop" or "edp_combined".
#[pyfunction]
#[pyo3(signature = (objective, config = None))]
fn best_point(objective: &str, config: Option<&PyConfig>) -> PyResult<PyDesignPoint> {
    let objective: Objective = objective.parse().map_err(to_py)?;
    let c = config.map(|c| c.inner.clone()).unwrap_or_default();
    let results = dse::run_sweep(&c.sweep, &c, 0).map_err(to_py)?;
    dse::select_best(&results, objective)
        .map(PyDesignPoint::from)
        .map_err(to_py)
}

#[pymodule(name = "skylogic")]
fn skylogic(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("SkylogicError", m.py().get_type::<SkylogicError>())?;
    m.add_class::<PyConfig>()?;
    m.add_class::<PyThieleConstants>()?;
    m.add_class::<PyLayout>()?;
    m.add_class::<PyTrajectory>()?;
    m.add_class::<PyReport>()?;
    m.add_class::<PyDesignPoint>()?;
    m.add_function(wrap_pyfunction!(domain_wall_width, m)?)?;
    m.add_function(wrap_pyfunction!(thiele_constants, m)?)?;
    m.add_function(wrap_pyfunction!(plan, m)?)?;
    m.add_function(wrap_pyfunction!(simulate, m)?)?;
    m.add_function(wrap_pyfunction!(numeric_oracle, m)?)?;
    m.add_function(wrap_pyfunction!(performance, m)?)?;
    m.add_function(wrap_pyfunction!(cascade, m)?)?;
    m.add_function(wrap_pyfunction!(evaluate_gate, m)?)?;
    m.add_function(wrap_pyfunction!(run_sweep, m)?)?;
    m.add_function(wrap_pyfunction!(best_point, m)?)?;
    Ok(())
}
