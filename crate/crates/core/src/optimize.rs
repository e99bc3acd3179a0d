//! Work maximization over PVM measurement bases and over SU(4) dilation unitaries.
//!
//! SU(4) coordinates: `V = exp(i Σ_j k_j g_j)` with the generator order frozen as
//! `σ_i⊗σ_j` for `(i, j)` lexicographic over `(x, y, z)`, then `σ_i⊗I`, then `I⊗σ_i`.
//!
//! Global search is simulated annealing per restart; each restart then runs an adaptive
//! Nelder–Mead refinement from its best point. Restart `r` draws from
//! `ChaCha8Rng::seed_from_u64(seed)` on stream `r`, and restarts are merged by
//! `(value desc, index asc)`, so results do not depend on thread scheduling.

use std::f64::consts::{LN_2, PI, TAU};
use std::sync::OnceLock;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;

use crate::engine::{
    run_povm_cycle, run_pvm_cycle, CycleRecord, DriveSpec, EngineParams, MeasurementBasis, PovmSpec,
};
use crate::error::{invalid, Result};
use crate::qmat::{
    self, identity2, pauli_x, pauli_y, pauli_z, tensor_product, ComplexMatrix, UnitaryMatrix, C64,
};

pub const SU4_DIM: usize = 15;

/// Coefficients of the 15 SU(4) generators.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Su4Point(pub [f64; SU4_DIM]);

impl Su4Point {
    pub fn new(k: [f64; SU4_DIM]) -> Result<Self> {
        if k.iter().any(|x| !x.is_finite()) {
            return Err(invalid("su4", "coefficients must be finite"));
        }
        Ok(Su4Point(k))
    }

    pub fn zero() -> Self {
        Su4Point([0.0; SU4_DIM])
    }

    pub fn from_slice(k: &[f64]) -> Result<Self> {
        let arr: [f64; SU4_DIM] = k.try_into().map_err(|_| {
            invalid(
                "su4",
                format!("expected {SU4_DIM} coefficients, got {}", k.len()),
            )
        })?;
        Self::new(arr)
    }
}

/// Generators in the frozen order.
pub fn generators() -> &'static [ComplexMatrix; SU4_DIM] {
    static GENERATORS: OnceLock<[ComplexMatrix; SU4_DIM]> = OnceLock::new();
    GENERATORS.get_or_init(|| {
        let paulis = [pauli_x(), pauli_y(), pauli_z()];
        let mut out = Vec::with_capacity(SU4_DIM);
        for si in &paulis {
            for sj in &paulis {
                out.push(tensor_product(si, sj).expect("2x2 factors"));
            }
        }
        for s in &paulis {
            out.push(tensor_product(s, &identity2()).expect("2x2 factors"));
        }
        for s in &paulis {
            out.push(tensor_product(&identity2(), s).expect("2x2 factors"));
        }
        out.try_into().expect("fifteen generators")
    })
}

/// Hermitian `Σ_j k_j g_j`.
pub fn su4_generator(pt: &Su4Point) -> ComplexMatrix {
    generators()
        .iter()
        .zip(pt.0.iter())
        .fold(ComplexMatrix::zeros_unchecked(4), |acc, (g, &k)| {
            acc + g.scale(C64::new(k, 0.0))
        })
}

pub fn su4_from_point(pt: &Su4Point) -> UnitaryMatrix {
    let eig = qmat::hermitian_eig_unchecked(&su4_generator(pt));
    UnitaryMatrix::from_trusted(qmat::exp_i_from_eigen(&eig))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OptimizerConfig {
    pub seed: u64,
    pub global_iterations: usize,
    pub restarts: usize,
    pub initial_step: f64,
    pub cooling_rate: f64,
    /// Simplex value spread at which a local refinement counts as converged.
    pub local_tolerance: f64,
    /// Objective evaluations allowed per local refinement.
    pub local_max_evals: usize,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        OptimizerConfig {
            seed: 42,
            global_iterations: 2000,
            restarts: 8,
            initial_step: 0.5,
            cooling_rate: 0.999,
            local_tolerance: 1e-10,
            local_max_evals: 4000,
        }
    }
}

impl OptimizerConfig {
    pub fn validate(&self) -> Result<()> {
        if self.restarts == 0 {
            return Err(invalid("restarts", "must be at least 1"));
        }
        if !(self.initial_step.is_finite() && self.initial_step > 0.0) {
            return Err(invalid("initial_step", "must be positive"));
        }
        if !(self.cooling_rate > 0.0 && self.cooling_rate < 1.0) {
            return Err(invalid("cooling_rate", "must lie in (0, 1)"));
        }
        if !(self.local_tolerance.is_finite() && self.local_tolerance > 0.0) {
            return Err(invalid("local_tolerance", "must be positive"));
        }
        if self.local_max_evals == 0 {
            return Err(invalid("local_max_evals", "must be at least 1"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OptResult<P> {
    pub best_value: f64,
    pub best_point: P,
    pub evaluations: usize,
    /// Whether the local refinement that produced `best_point` met its tolerance.
    pub converged: bool,
}

struct LocalOutcome<const N: usize> {
    point: [f64; N],
    value: f64,
    evaluations: usize,
    converged: bool,
}

/// Adaptive Nelder–Mead maximization (dimension-scaled expansion, contraction and
/// shrink coefficients). Restarts the simplex around the incumbent after each
/// convergence until a restart stops improving by more than `tol`.
fn nelder_mead<const N: usize, F: Fn(&[f64; N]) -> f64>(
    f: &F,
    start: [f64; N],
    scale: f64,
    max_evals: usize,
    tol: f64,
) -> LocalOutcome<N> {
    let n = N as f64;
    let (refl, expand, contract, shrink) = (1.0, 1.0 + 2.0 / n, 0.75 - 0.5 / n, 1.0 - 1.0 / n);
    // minimize g = −f
    let g = |x: &[f64; N]| {
        let v = -f(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };
    let mut evals = 0usize;
    let mut best_x = start;
    let mut best_g = g(&start);
    evals += 1;
    let mut converged = false;
    let mut step = scale;

    while evals < max_evals {
        let mut simplex: Vec<([f64; N], f64)> = Vec::with_capacity(N + 1);
        simplex.push((best_x, best_g));
        for i in 0..N {
            let mut x = best_x;
            x[i] += step;
            simplex.push((x, g(&x)));
            evals += 1;
        }
        let before = best_g;
        let mut local_conv = false;
        while evals < max_evals {
            simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
            if simplex[N].1 - simplex[0].1 <= tol {
                local_conv = true;
                break;
            }
            let mut centroid = [0.0; N];
            for (x, _) in &simplex[..N] {
                for k in 0..N {
                    centroid[k] += x[k] / n;
                }
            }
            let worst = simplex[N];
            let along = |t: f64| {
                let mut y = [0.0; N];
                for k in 0..N {
                    y[k] = centroid[k] + t * (worst.0[k] - centroid[k]);
                }
                y
            };
            let xr = along(-refl);
            let gr = g(&xr);
            evals += 1;
            if gr < simplex[0].1 {
                let xe = along(-refl * expand);
                let ge = g(&xe);
                evals += 1;
                simplex[N] = if ge < gr { (xe, ge) } else { (xr, gr) };
                continue;
            }
            if gr < simplex[N - 1].1 {
                simplex[N] = (xr, gr);
                continue;
            }
            let (xc, gc) = if gr < worst.1 {
                let xc = along(-refl * contract);
                (xc, g(&xc))
            } else {
                let xc = along(contract);
                (xc, g(&xc))
            };
            evals += 1;
            if gc < worst.1.min(gr) {
                simplex[N] = (xc, gc);
                continue;
            }
            let x0 = simplex[0].0;
            for vertex in simplex.iter_mut().skip(1) {
                for (v, &o) in vertex.0.iter_mut().zip(&x0) {
                    *v = o + shrink * (*v - o);
                }
                vertex.1 = g(&vertex.0);
                evals += 1;
            }
        }
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        if simplex[0].1 < best_g {
            best_x = simplex[0].0;
            best_g = simplex[0].1;
        }
        if local_conv && before - best_g <= tol {
            converged = true;
            break;
        }
        step = (step * 0.5).max(1e-6);
    }
    LocalOutcome {
        point: best_x,
        value: -best_g,
        evaluations: evals,
        converged,
    }
}

/// One annealing chain followed by local refinement.
fn anneal_restart<F: Fn(&[f64; SU4_DIM]) -> f64>(
    f: &F,
    cfg: &OptimizerConfig,
    restart: usize,
    temperature_scale: f64,
) -> LocalOutcome<SU4_DIM> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(restart as u64);
    let mut x = [0.0; SU4_DIM];
    for v in x.iter_mut() {
        *v = rng.random_range(-PI..PI);
    }
    let mut fx = f(&x);
    let mut best = (x, fx);
    let mut evals = 1;
    let mut decay = 1.0;
    for _ in 0..cfg.global_iterations {
        let step = cfg.initial_step * decay;
        let temperature = temperature_scale * decay;
        let mut y = x;
        for v in y.iter_mut() {
            let z: f64 = rng.sample(StandardNormal);
            *v += step * z;
        }
        let fy = f(&y);
        evals += 1;
        let u: f64 = rng.random();
        if fy >= fx || u < ((fy - fx) / temperature).exp() {
            x = y;
            fx = fy;
            if fx > best.1 {
                best = (x, fx);
            }
        }
        decay *= cfg.cooling_rate;
    }
    let local = nelder_mead(
        f,
        best.0,
        (cfg.initial_step * decay).max(0.05),
        cfg.local_max_evals,
        cfg.local_tolerance,
    );
    let (point, value) = if local.value >= best.1 {
        (local.point, local.value)
    } else {
        best
    };
    LocalOutcome {
        point,
        value,
        evaluations: evals + local.evaluations,
        converged: local.converged,
    }
}

fn optimize_su4<F: Fn(&[f64; SU4_DIM]) -> f64 + Sync>(
    f: F,
    cfg: &OptimizerConfig,
    temperature_scale: f64,
) -> Result<OptResult<Su4Point>> {
    cfg.validate()?;
    let outcomes: Vec<LocalOutcome<SU4_DIM>> = (0..cfg.restarts)
        .into_par_iter()
        .map(|r| anneal_restart(&f, cfg, r, temperature_scale))
        .collect();
    let evaluations = outcomes.iter().map(|o| o.evaluations).sum();
    let best = outcomes
        .iter()
        .enumerate()
        .max_by(|(i, a), (j, b)| a.value.total_cmp(&b.value).then(j.cmp(i)))
        .map(|(_, o)| o)
        .expect("at least one restart");
    Ok(OptResult {
        best_value: best.value,
        best_point: Su4Point(best.point),
        evaluations,
        converged: best.converged,
    })
}

fn require_zero_alpha(drive: &DriveSpec) -> Result<()> {
    if drive.alpha != 0.0 {
        return Err(invalid(
            "alpha",
            format!("SU(4) optimization fixes alpha = 0, got {}", drive.alpha),
        ));
    }
    Ok(())
}

/// POVM cycle for the dilation `pt` with a `|+⟩` auxiliary measured in `{|+⟩, |−⟩}` and
/// reset at `reset_temperature`.
pub fn evaluate_povm(
    params: &EngineParams,
    drive: &DriveSpec,
    pt: &Su4Point,
    reset_temperature: f64,
) -> Result<CycleRecord> {
    let povm = PovmSpec::with_plus_aux(su4_from_point(pt), MeasurementBasis::plus_minus())?;
    run_povm_cycle(params, drive, &povm, reset_temperature)
}

fn povm_objective(
    params: &EngineParams,
    drive: &DriveSpec,
    reset_temperature: f64,
    net: bool,
) -> impl Fn(&[f64; SU4_DIM]) -> f64 + Sync {
    let (params, drive) = (*params, *drive);
    move |k: &[f64; SU4_DIM]| match evaluate_povm(&params, &drive, &Su4Point(*k), reset_temperature)
    {
        Ok(rec) if net => rec.net_work(),
        Ok(rec) => rec.w_total,
        Err(_) => f64::NEG_INFINITY,
    }
}

/// Maximizes gross POVM work over SU(4) dilations. Requires `drive.alpha == 0`.
pub fn optimize_povm_work(
    params: &EngineParams,
    drive: &DriveSpec,
    cfg: &OptimizerConfig,
) -> Result<OptResult<Su4Point>> {
    require_zero_alpha(drive)?;
    let f = povm_objective(params, drive, params.cold_temperature(), false);
    optimize_su4(f, cfg, annealing_scale(params))
}

/// Maximizes work net of the auxiliary reset at temperature `t_c`. Requires
/// `drive.alpha == 0`.
pub fn optimize_povm_net_work(
    params: &EngineParams,
    drive: &DriveSpec,
    t_c: f64,
    cfg: &OptimizerConfig,
) -> Result<OptResult<Su4Point>> {
    require_zero_alpha(drive)?;
    check_reset_temperature(t_c)?;
    let f = povm_objective(params, drive, t_c, true);
    optimize_su4(f, cfg, annealing_scale(params))
}

fn check_reset_temperature(t_c: f64) -> Result<()> {
    if t_c.is_finite() && t_c >= 0.0 {
        Ok(())
    } else {
        Err(invalid(
            "t_c",
            format!("must be finite and >= 0, got {t_c}"),
        ))
    }
}

fn annealing_scale(params: &EngineParams) -> f64 {
    0.2 * params.omega_x
}

/// Gross and net optima from one pair of runs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PovmOptima {
    pub gross: OptResult<Su4Point>,
    pub net: OptResult<Su4Point>,
}

/// Runs both optimizers, then lets each adopt the other's optimum when that point scores
/// better on its own objective. Since the reset cost lies in `[0, t_c ln 2]`, the result
/// satisfies `gross ≥ net ≥ gross − t_c ln 2`.
pub fn optimize_povm_gross_and_net(
    params: &EngineParams,
    drive: &DriveSpec,
    t_c: f64,
    cfg: &OptimizerConfig,
) -> Result<PovmOptima> {
    let mut gross = optimize_povm_work(params, drive, cfg)?;
    let mut net = optimize_povm_net_work(params, drive, t_c, cfg)?;
    let gross_at_net = evaluate_povm(params, drive, &net.best_point, t_c)?.w_total;
    let net_at_gross = evaluate_povm(params, drive, &gross.best_point, t_c)?.net_work();
    if gross_at_net > gross.best_value {
        gross.best_value = gross_at_net;
        gross.best_point = net.best_point;
        gross.converged = net.converged;
    }
    if net_at_gross > net.best_value {
        net.best_value = net_at_gross;
        net.best_point = gross.best_point;
        net.converged = gross.converged;
    }
    gross.evaluations += 1;
    net.evaluations += 1;
    Ok(PovmOptima { gross, net })
}

/// Side of the coarse PVM basis grid.
pub const PVM_GRID: usize = 64;

/// Maximizes simulated PVM work over measurement bases: a `64 × 64` grid over
/// `θ ∈ [0, π]`, `φ ∈ [0, 2π)` followed by Nelder–Mead in unconstrained angles.
pub fn optimize_pvm_basis(
    params: &EngineParams,
    drive: &DriveSpec,
    cfg: &OptimizerConfig,
) -> Result<OptResult<MeasurementBasis>> {
    cfg.validate()?;
    let f = |x: &[f64; 2]| {
        run_pvm_cycle(params, drive, &MeasurementBasis::from_unbounded(x[0], x[1]))
            .map_or(f64::NEG_INFINITY, |r| r.w_total)
    };
    let mut best = ([0.0, 0.0], f64::NEG_INFINITY);
    for i in 0..PVM_GRID {
        for j in 0..PVM_GRID {
            let x = [
                PI * i as f64 / (PVM_GRID - 1) as f64,
                TAU * j as f64 / PVM_GRID as f64,
            ];
            let v = f(&x);
            if v > best.1 {
                best = (x, v);
            }
        }
    }
    let local = nelder_mead(
        &f,
        best.0,
        PI / PVM_GRID as f64,
        cfg.local_max_evals,
        cfg.local_tolerance,
    );
    let (x, value) = if local.value >= best.1 {
        (local.point, local.value)
    } else {
        best
    };
    Ok(OptResult {
        best_value: value,
        best_point: MeasurementBasis::from_unbounded(x[0], x[1]),
        evaluations: PVM_GRID * PVM_GRID + local.evaluations,
        converged: local.converged,
    })
}

/// Worst-case reset cost `t ln 2` of a qubit auxiliary.
pub fn max_reset_cost(t_c: f64) -> f64 {
    t_c * LN_2
}
