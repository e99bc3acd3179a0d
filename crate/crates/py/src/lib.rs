//! Python module `otto`: engine parameters, single cycles, closed-form optima and the
//! SU(4) POVM search. Library errors surface as `ValueError`.

use otto_core::analytic;
use otto_core::optimize::{self, SU4_DIM};
use otto_core::{engine, OttoError};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

fn py_err(e: OttoError) -> PyErr {
    PyValueError::new_err(e.to_string())
}

#[pyclass(name = "EngineParams", frozen, from_py_object)]
#[derive(Clone, Copy)]
pub struct PyEngineParams(engine::EngineParams);

#[pymethods]
impl PyEngineParams {
    #[new]
    #[pyo3(signature = (omega_x, omega_z, beta_c, beta_h = None))]
    fn new(omega_x: f64, omega_z: f64, beta_c: f64, beta_h: Option<f64>) -> PyResult<Self> {
        let p = engine::EngineParams::new(omega_x, omega_z, beta_c).map_err(py_err)?;
        let p = match beta_h {
            Some(bh) => p.with_hot_bath(bh).map_err(py_err)?,
            None => p,
        };
        Ok(PyEngineParams(p))
    }

    #[getter]
    fn omega_x(&self) -> f64 {
        self.0.omega_x
    }

    #[getter]
    fn omega_z(&self) -> f64 {
        self.0.omega_z
    }

    #[getter]
    fn beta_c(&self) -> f64 {
        self.0.beta_c
    }

    #[getter]
    fn beta_h(&self) -> Option<f64> {
        self.0.beta_h
    }

    #[getter]
    fn tau_z(&self) -> f64 {
        self.0.tau_z()
    }

    #[getter]
    fn gamma(&self) -> f64 {
        self.0.gamma()
    }

    #[getter]
    fn otto_efficiency(&self) -> f64 {
        self.0.otto_efficiency()
    }

    fn __repr__(&self) -> String {
        let p = &self.0;
        match p.beta_h {
            Some(bh) => format!(
                "EngineParams(omega_x={}, omega_z={}, beta_c={}, beta_h={bh})",
                p.omega_x, p.omega_z, p.beta_c
            ),
            None => format!(
                "EngineParams(omega_x={}, omega_z={}, beta_c={})",
                p.omega_x, p.omega_z, p.beta_c
            ),
        }
    }
}

#[pyclass(name = "DriveSpec", frozen, from_py_object)]
#[derive(Clone, Copy)]
pub struct PyDriveSpec(engine::DriveSpec);

#[pymethods]
impl PyDriveSpec {
    #[new]
    #[pyo3(signature = (p, alpha = 0.0))]
    fn new(p: f64, alpha: f64) -> PyResult<Self> {
        engine::DriveSpec::new(p, alpha)
            .map(PyDriveSpec)
            .map_err(py_err)
    }

    #[staticmethod]
    fn adiabatic() -> Self {
        PyDriveSpec(engine::DriveSpec::adiabatic())
    }

    #[getter]
    fn p(&self) -> f64 {
        self.0.p
    }

    #[getter]
    fn alpha(&self) -> f64 {
        self.0.alpha
    }

    fn __repr__(&self) -> String {
        format!("DriveSpec(p={}, alpha={})", self.0.p, self.0.alpha)
    }
}

#[pyclass(name = "MeasurementBasis", frozen, from_py_object)]
#[derive(Clone, Copy)]
pub struct PyMeasurementBasis(engine::MeasurementBasis);

#[pymethods]
impl PyMeasurementBasis {
    #[new]
    #[pyo3(signature = (theta, phi = 0.0))]
    fn new(theta: f64, phi: f64) -> PyResult<Self> {
        engine::MeasurementBasis::new(theta, phi)
            .map(PyMeasurementBasis)
            .map_err(py_err)
    }

    /// The `{|+⟩, |−⟩}` basis.
    #[staticmethod]
    fn plus_minus() -> Self {
        PyMeasurementBasis(engine::MeasurementBasis::plus_minus())
    }

    #[getter]
    fn theta(&self) -> f64 {
        self.0.theta
    }

    #[getter]
    fn phi(&self) -> f64 {
        self.0.phi
    }

    fn __repr__(&self) -> String {
        format!(
            "MeasurementBasis(theta={}, phi={})",
            self.0.theta, self.0.phi
        )
    }
}

#[pyclass(name = "CycleRecord", frozen, get_all, skip_from_py_object)]
#[derive(Clone, Copy)]
pub struct PyCycleRecord {
    e0: f64,
    e1: f64,
    e2: f64,
    e3: f64,
    w1: f64,
    w2: f64,
    w_total: f64,
    q_c: f64,
    q_h: f64,
    eta: Option<f64>,
    aux_entropy: f64,
    aux_reset_cost: f64,
}

impl From<engine::CycleRecord> for PyCycleRecord {
    fn from(r: engine::CycleRecord) -> Self {
        PyCycleRecord {
            e0: r.e0,
            e1: r.e1,
            e2: r.e2,
            e3: r.e3,
            w1: r.w1,
            w2: r.w2,
            w_total: r.w_total,
            q_c: r.q_c,
            q_h: r.q_h,
            eta: r.eta,
            aux_entropy: r.aux_entropy,
            aux_reset_cost: r.aux_reset_cost,
        }
    }
}

#[pymethods]
impl PyCycleRecord {
    #[getter]
    fn net_work(&self) -> f64 {
        self.w_total - self.aux_reset_cost
    }

    /// `q_h + q_c − w_total`; zero up to rounding.
    #[getter]
    fn first_law_residual(&self) -> f64 {
        self.q_h + self.q_c - self.w_total
    }

    fn __repr__(&self) -> String {
        let eta = self.eta.map_or("None".to_string(), |e| e.to_string());
        format!(
            "CycleRecord(w_total={}, q_h={}, q_c={}, eta={eta})",
            self.w_total, self.q_h, self.q_c
        )
    }
}

#[pyclass(name = "PvmOptimum", frozen, get_all)]
pub struct PyPvmOptimum {
    work: f64,
    theta: f64,
    phi: f64,
    heat: f64,
    eta: f64,
}

#[pyclass(name = "PovmSearchResult", frozen, get_all)]
pub struct PyPovmSearchResult {
    best_value: f64,
    coefficients: Vec<f64>,
    evaluations: usize,
    converged: bool,
}

fn reset_or_cold(params: &engine::EngineParams, reset_temperature: Option<f64>) -> f64 {
    reset_temperature.unwrap_or_else(|| params.cold_temperature())
}

#[pyfunction]
fn run_conventional_cycle(params: PyEngineParams, drive: PyDriveSpec) -> PyResult<PyCycleRecord> {
    engine::run_conventional_cycle(&params.0, &drive.0)
        .map(Into::into)
        .map_err(py_err)
}

#[pyfunction]
fn run_pvm_cycle(
    params: PyEngineParams,
    drive: PyDriveSpec,
    basis: PyMeasurementBasis,
) -> PyResult<PyCycleRecord> {
    engine::run_pvm_cycle(&params.0, &drive.0, &basis.0)
        .map(Into::into)
        .map_err(py_err)
}

/// POVM cycle with a `|+⟩` auxiliary measured in `{|+⟩, |−⟩}`. The dilation is the swap
/// unitary unless 15 SU(4) `coefficients` are given. The reset temperature defaults to
/// the cold bath.
#[pyfunction]
#[pyo3(signature = (params, drive, coefficients = None, reset_temperature = None))]
fn run_povm_cycle(
    params: PyEngineParams,
    drive: PyDriveSpec,
    coefficients: Option<Vec<f64>>,
    reset_temperature: Option<f64>,
) -> PyResult<PyCycleRecord> {
    let t = reset_or_cold(&params.0, reset_temperature);
    let unitary = match coefficients {
        Some(k) => optimize::su4_from_point(&optimize::Su4Point::from_slice(&k).map_err(py_err)?),
        None => analytic::v0_unitary(),
    };
    let povm = engine::PovmSpec::with_plus_aux(unitary, engine::MeasurementBasis::plus_minus())
        .map_err(py_err)?;
    engine::run_povm_cycle(&params.0, &drive.0, &povm, t)
        .map(Into::into)
        .map_err(py_err)
}

/// Closed-form best projective measurement for the given drive.
#[pyfunction]
fn pvm_optimal(params: PyEngineParams, drive: PyDriveSpec) -> PyPvmOptimum {
    let opt = analytic::pvm_optimal(&params.0, &drive.0);
    PyPvmOptimum {
        work: opt.work,
        theta: opt.basis.theta,
        phi: opt.basis.phi,
        heat: opt.heat,
        eta: opt.eta,
    }
}

/// Best adiabatic POVM work, attained by the swap dilation.
#[pyfunction]
fn povm_adiabatic_optimal(params: PyEngineParams) -> f64 {
    analytic::povm_adiabatic_optimal(&params.0).0
}

/// Cold-bath temperature at which the swap protocol's reset cost equals its advantage
/// over the best projective measurement.
#[pyfunction]
#[pyo3(signature = (omega_x, omega_z, tol = 1e-10))]
fn reset_crossing_temperature(omega_x: f64, omega_z: f64, tol: f64) -> PyResult<f64> {
    analytic::reset_crossing_temperature(omega_x, omega_z, tol).map_err(py_err)
}

/// Searches SU(4) dilations for the best gross work, or the best net work when
/// `t_c` is given. `budget` sets the annealing iterations per restart.
#[pyfunction]
#[pyo3(signature = (params, drive, seed = 42, budget = None, t_c = None))]
fn optimize_povm(
    params: PyEngineParams,
    drive: PyDriveSpec,
    seed: u64,
    budget: Option<usize>,
    t_c: Option<f64>,
) -> PyResult<PyPovmSearchResult> {
    let mut cfg = optimize::OptimizerConfig {
        seed,
        ..Default::default()
    };
    if let Some(b) = budget {
        cfg.global_iterations = b;
        cfg.local_max_evals = 2 * b;
    }
    let res = match t_c {
        Some(t) => optimize::optimize_povm_net_work(&params.0, &drive.0, t, &cfg),
        None => optimize::optimize_povm_work(&params.0, &drive.0, &cfg),
    }
    .map_err(py_err)?;
    Ok(PyPovmSearchResult {
        best_value: res.best_value,
        coefficients: res.best_point.0.to_vec(),
        evaluations: res.evaluations,
        converged: res.converged,
    })
}

#[pymodule]
mod otto {
    #[pymodule_export]
    use super::{
        optimize_povm, povm_adiabatic_optimal, pvm_optimal, reset_crossing_temperature,
        run_conventional_cycle, run_povm_cycle, run_pvm_cycle, PyCycleRecord, PyDriveSpec,
        PyEngineParams, PyMeasurementBasis, PyPovmSearchResult, PyPvmOptimum,
    };

    #[pymodule_export]
    const SU4_DIM: usize = super::SU4_DIM;
}
