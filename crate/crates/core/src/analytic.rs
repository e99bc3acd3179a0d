//! Closed-form ledgers for the conventional, PVM-fueled and POVM-fueled engines.
//!
//! Nothing here calls the stroke simulator: every energy is an explicit function of
//! `(ω_x, ω_z, β_c, β_h, P, α, θ, φ)`, so comparing against `engine` is a genuine check.
//! Shorthands: `a = 2P − 1`, `b = 2√(P(1−P))`, `D = √((ω_x−ω_z)² + 4ω_xω_z(1−P))`.

use std::f64::consts::{LN_2, PI, TAU};

use serde::Serialize;

use crate::engine::{efficiency, CycleRecord, DriveSpec, EngineParams, MeasurementBasis};
use crate::error::{invalid, OttoError, Result};
use crate::qmat::{self, ComplexMatrix, DensityMatrix, UnitaryMatrix, C64};

/// Ledger built from closed forms; same field semantics as the simulator's record.
pub type AnalyticRecord = CycleRecord;

/// Radicand values down to this far below zero are rounded to zero inside `D`.
const RADICAND_CLAMP: f64 = 1e-14;

fn check_p(p: f64) -> Result<()> {
    if p.is_finite() && (0.5..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(invalid("p", format!("must lie in [1/2, 1], got {p}")))
    }
}

fn check_theta(theta: f64) -> Result<()> {
    if theta.is_finite() && (0.0..=PI).contains(&theta) {
        Ok(())
    } else {
        Err(invalid(
            "theta",
            format!("must lie in [0, pi], got {theta}"),
        ))
    }
}

fn a_of(p: f64) -> f64 {
    2.0 * p - 1.0
}

fn b_of(p: f64) -> f64 {
    2.0 * (p * (1.0 - p)).max(0.0).sqrt()
}

/// `D(P) = √((ω_x−ω_z)² + 4ω_xω_z(1−P))`.
pub fn d_of(params: &EngineParams, p: f64) -> f64 {
    let (wx, wz) = (params.omega_x, params.omega_z);
    let r = (wx - wz).powi(2) + 4.0 * wx * wz * (1.0 - p);
    if r < 0.0 && r > -RADICAND_CLAMP {
        0.0
    } else {
        r.sqrt()
    }
}

/// Assembles a record whose works and heats come from their own closed forms rather
/// than from energy differences.
struct ClosedForm {
    e: [f64; 4],
    w_total: f64,
    q_h: f64,
    q_c: f64,
}

impl ClosedForm {
    fn into_record(self) -> AnalyticRecord {
        let [e0, e1, e2, e3] = self.e;
        CycleRecord {
            e0,
            e1,
            e2,
            e3,
            w1: e1 - e0,
            w2: e3 - e2,
            w_total: self.w_total,
            q_c: self.q_c,
            q_h: self.q_h,
            eta: efficiency(self.w_total, self.q_h),
            aux_entropy: 0.0,
            aux_reset_cost: 0.0,
        }
    }
}

/// Intermediate overlaps for a PVM stroke after a non-adiabatic drive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NonAdiabaticIntermediates {
    pub a: f64,
    pub b: f64,
    /// `a cos θ + b sin θ cos(α − φ)`.
    pub mu: f64,
    /// `|⟨ψ⁺|U|0⟩|²`.
    pub big_a: f64,
    /// `|⟨ψ⁺|+⟩|²`.
    pub big_b: f64,
    /// `|⟨0|U†|ψ⁺⟩|²`, equal to `big_a` for the symmetric drive.
    pub big_q: f64,
    pub d: f64,
    /// Branch selector of the optimal angle (always +1 for the maximum).
    pub s: i8,
    /// Branch selector of the optimal azimuth (always −1 for the maximum).
    pub s_prime: i8,
}

impl NonAdiabaticIntermediates {
    pub fn new(params: &EngineParams, drive: &DriveSpec, basis: &MeasurementBasis) -> Self {
        let a = a_of(drive.p);
        let b = b_of(drive.p);
        let (theta, phi) = (basis.theta, basis.phi);
        let mu = a * theta.cos() + b * theta.sin() * (drive.alpha - phi).cos();
        let big_a = (1.0 + mu) / 2.0;
        NonAdiabaticIntermediates {
            a,
            b,
            mu,
            big_a,
            big_b: (1.0 + theta.cos()) / 2.0,
            big_q: big_a,
            d: d_of(params, drive.p),
            s: 1,
            s_prime: -1,
        }
    }
}

/// Two-bath engine at transition probability `p`.
pub fn conventional_record(params: &EngineParams, p: f64) -> Result<AnalyticRecord> {
    check_p(p)?;
    let tau_x = params.tau_x().ok_or(OttoError::MissingHotBath)?;
    let tau_z = params.tau_z();
    let (wx, wz) = (params.omega_x, params.omega_z);
    let a = a_of(p);
    Ok(ClosedForm {
        e: [
            -0.5 * wz * tau_z,
            -0.5 * wx * a * tau_z,
            -0.5 * wx * tau_x,
            -0.5 * wz * a * tau_x,
        ],
        w_total: 0.5 * (tau_z * (wx * a - wz) + tau_x * (wz * a - wx)),
        q_h: 0.5 * wx * (a * tau_z - tau_x),
        q_c: 0.5 * wz * (a * tau_x - tau_z),
    }
    .into_record())
}

/// Best two-bath operating point: work grows with `P`, so it sits at `P = 1` with
/// the Otto efficiency.
pub fn conventional_optimal(params: &EngineParams) -> Result<(f64, f64)> {
    let rec = conventional_record(params, 1.0)?;
    Ok((rec.w_total, params.otto_efficiency()))
}

/// PVM engine with adiabatic drives measured at polar angle `theta`.
pub fn pvm_adiabatic_record(params: &EngineParams, theta: f64) -> Result<AnalyticRecord> {
    check_theta(theta)?;
    let tau_z = params.tau_z();
    let (wx, wz) = (params.omega_x, params.omega_z);
    let (c, s2) = (theta.cos(), theta.sin().powi(2));
    Ok(ClosedForm {
        e: [
            -0.5 * wz * tau_z,
            -0.5 * wx * tau_z,
            -0.5 * wx * tau_z * c * c,
            -0.5 * wz * tau_z * c * c,
        ],
        w_total: 0.5 * tau_z * (wx - wz) * s2,
        q_h: 0.5 * wx * tau_z * s2,
        q_c: -0.5 * wz * tau_z * s2,
    }
    .into_record())
}

/// PVM engine with a general drive and measurement basis.
pub fn pvm_nonadiabatic_record(
    params: &EngineParams,
    drive: &DriveSpec,
    basis: &MeasurementBasis,
) -> AnalyticRecord {
    let tau_z = params.tau_z();
    let (wx, wz) = (params.omega_x, params.omega_z);
    let m = NonAdiabaticIntermediates::new(params, drive, basis);
    let e2 = -0.5 * wx * tau_z * (2.0 * m.big_a - 1.0) * (2.0 * m.big_b - 1.0);
    let e3 = -0.5 * wz * tau_z * (2.0 * m.big_a - 1.0) * (2.0 * m.big_q - 1.0);
    let cos_t = basis.theta.cos();
    ClosedForm {
        e: [-0.5 * wz * tau_z, -0.5 * wx * m.a * tau_z, e2, e3],
        w_total: pvm_work_formula(tau_z, wx, wz, m.a, m.mu, cos_t),
        q_h: 0.5 * wx * tau_z * (m.a - m.mu * cos_t),
        q_c: 0.5 * wz * tau_z * (m.mu * m.mu - 1.0),
    }
    .into_record()
}

fn pvm_work_formula(tau_z: f64, wx: f64, wz: f64, a: f64, mu: f64, cos_t: f64) -> f64 {
    -0.5 * tau_z * (-a * wx + wz - wz * mu * mu + wx * mu * cos_t)
}

/// Extracted work of the PVM engine for an arbitrary drive and basis.
pub fn pvm_nonadiabatic_work(
    params: &EngineParams,
    drive: &DriveSpec,
    basis: &MeasurementBasis,
) -> f64 {
    let m = NonAdiabaticIntermediates::new(params, drive, basis);
    pvm_work_formula(
        params.tau_z(),
        params.omega_x,
        params.omega_z,
        m.a,
        m.mu,
        basis.theta.cos(),
    )
}

/// Work as a function of unconstrained `(θ, φ)`, used by the derivative checks.
pub fn pvm_work_at_angles(params: &EngineParams, drive: &DriveSpec, theta: f64, phi: f64) -> f64 {
    let a = a_of(drive.p);
    let b = b_of(drive.p);
    let mu = a * theta.cos() + b * theta.sin() * (drive.alpha - phi).cos();
    pvm_work_formula(
        params.tau_z(),
        params.omega_x,
        params.omega_z,
        a,
        mu,
        theta.cos(),
    )
}

/// Analytic Hessian of the PVM work in `(θ, φ)`, valid where `cos(α − φ) = ±1`.
pub fn pvm_work_hessian(
    params: &EngineParams,
    drive: &DriveSpec,
    basis: &MeasurementBasis,
) -> [[f64; 2]; 2] {
    let (wx, wz) = (params.omega_x, params.omega_z);
    let a = a_of(drive.p);
    let b = b_of(drive.p);
    let (st, ct) = basis.theta.sin_cos();
    let (sd, cd) = (drive.alpha - basis.phi).sin_cos();
    let mu = a * ct + b * st * cd;
    let mu_t = -a * st + b * ct * cd;
    let mu_tt = -mu;
    let mu_f = b * st * sd;
    let mu_ff = -b * st * cd;
    let mu_tf = b * ct * sd;
    // g = ω_z μ² − ω_x μ cos θ, work = (τ_z/2)(a ω_x − ω_z + g)
    let g_tt =
        2.0 * wz * (mu_t * mu_t + mu * mu_tt) - wx * (mu_tt * ct - 2.0 * mu_t * st - mu * ct);
    let g_ff = 2.0 * wz * (mu_f * mu_f + mu * mu_ff) - wx * mu_ff * ct;
    let g_tf = 2.0 * wz * (mu_t * mu_f + mu * mu_tf) - wx * (mu_tf * ct - mu_f * st);
    let k = 0.5 * params.tau_z();
    [[k * g_tt, k * g_tf], [k * g_tf, k * g_ff]]
}

/// PVM optimum over measurement bases at fixed drive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PvmOptimum {
    pub work: f64,
    pub basis: MeasurementBasis,
    pub heat: f64,
    pub eta: f64,
    pub hessian: [[f64; 2]; 2],
}

/// At `φ = α` the optimal polar angle satisfies `cos 2θ = −A′/R`, `sin 2θ = −B′/R` with
/// `A′ = ω_z(b² − a²) + aω_x`, `B′ = b(ω_x − 2aω_z)` and `R = √(A′² + B′²) = D`.
pub fn pvm_optimal(params: &EngineParams, drive: &DriveSpec) -> PvmOptimum {
    let (wx, wz) = (params.omega_x, params.omega_z);
    let tau_z = params.tau_z();
    let p = drive.p;
    let a = a_of(p);
    let b = b_of(p);
    let d = d_of(params, p);
    let a_prime = wz * (b * b - a * a) + a * wx;
    let b_prime = b * (wx - 2.0 * a * wz);
    let two_theta = if a_prime == 0.0 && b_prime == 0.0 {
        PI
    } else {
        (-b_prime).atan2(-a_prime).rem_euclid(TAU)
    };
    let basis = MeasurementBasis {
        theta: (two_theta / 2.0).min(PI),
        phi: drive.alpha,
    };
    let work = 0.25 * tau_z * (d - wz + wx * a);
    // at the optimum μ cos θ = (a + (aω_z − ω_x)/D) / 2
    let bracket = a * d + wx - a * wz;
    let heat = wx * tau_z * bracket / (4.0 * d);
    let eta = d * (d + a * wx - wz) / (wx * bracket);
    PvmOptimum {
        work,
        basis,
        heat,
        eta,
        hessian: pvm_work_hessian(params, drive, &basis),
    }
}

/// Best transition probability for the PVM engine and the resulting work and efficiency.
/// Below compression ratio 2 the optimum is interior at `1/2 + ω_x/(4ω_z)`.
pub fn pvm_best_p(params: &EngineParams) -> (f64, f64, f64) {
    let (wx, wz) = (params.omega_x, params.omega_z);
    let tau_z = params.tau_z();
    if params.gamma() < 2.0 {
        (0.5 + wx / (4.0 * wz), wx * wx * tau_z / (8.0 * wz), 0.5)
    } else {
        (1.0, 0.5 * tau_z * (wx - wz), params.otto_efficiency())
    }
}

/// Exchange of system and auxiliary, written in the `{|+⟩, |−⟩}⊗{|+⟩, |−⟩}` basis and
/// rotated back to the computational basis.
pub fn v0_unitary() -> UnitaryMatrix {
    let mut perm = ComplexMatrix::zeros_unchecked(4);
    for (i, j) in [(0, 0), (1, 2), (2, 1), (3, 3)] {
        perm[(i, j)] = C64::new(1.0, 0.0);
    }
    let hh = qmat::tensor_product(&qmat::hadamard(), &qmat::hadamard()).expect("2x2 factors");
    UnitaryMatrix::from_trusted((hh * perm) * hh)
}

/// Best adiabatic POVM work `(ω_x − ω_z)(1 + τ_z)/2` with a unitary that attains it.
pub fn povm_adiabatic_optimal(params: &EngineParams) -> (f64, UnitaryMatrix) {
    (
        0.5 * (params.omega_x - params.omega_z) * (1.0 + params.tau_z()),
        v0_unitary(),
    )
}

/// `max_U Tr(h U ρ U†)`: pairs ascending eigenvalues of `h` with ascending eigenvalues
/// of `rho`.
pub fn rearrangement_energy_bound(h: &ComplexMatrix, rho: &DensityMatrix) -> Result<f64> {
    if h.dim() != rho.dim() {
        return Err(OttoError::DimensionMismatch {
            expected: rho.dim(),
            found: h.dim(),
        });
    }
    let energies = qmat::hermitian_eig(h)?.values;
    let mut pops = rho.eigenvalues();
    pops.sort_by(f64::total_cmp);
    Ok(energies.iter().zip(&pops).map(|(e, r)| e * r).sum())
}

/// Auxiliary-reset bookkeeping for the swap protocol.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AuxCost {
    /// Reset cost of the auxiliary left by the swap protocol.
    pub min_cost: f64,
    /// `k_B T ln 2`, the cost of erasing a maximally mixed qubit.
    pub max_cost: f64,
    /// Best adiabatic POVM work minus `min_cost`.
    pub net_work_v0: f64,
    /// POVM over PVM adiabatic advantage `(ω_x − ω_z)/2`.
    pub delta_w: f64,
    /// Temperature below which the advantage exceeds even `max_cost`.
    pub t_c_bound: f64,
}

fn x_log2_half(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        x * (x / 2.0).log2()
    }
}

/// `t_c` is the reset temperature; populations follow `params.beta_c`.
pub fn aux_cost_record(params: &EngineParams, t_c: f64) -> Result<AuxCost> {
    if !(t_c.is_finite() && t_c > 0.0) {
        return Err(invalid("t_c", format!("must be positive, got {t_c}")));
    }
    let tau_z = params.tau_z();
    let min_cost = -0.5 * t_c * LN_2 * (x_log2_half(1.0 + tau_z) + x_log2_half(1.0 - tau_z));
    let (w_povm, _) = povm_adiabatic_optimal(params);
    let gap = params.omega_x - params.omega_z;
    Ok(AuxCost {
        min_cost,
        max_cost: t_c * LN_2,
        net_work_v0: w_povm - min_cost,
        delta_w: 0.5 * gap,
        t_c_bound: gap / (2.0 * LN_2),
    })
}

/// Swap-protocol reset cost when the cold bath and the reset share temperature `t`.
pub fn swap_reset_cost_at(omega_x: f64, omega_z: f64, t: f64) -> Result<f64> {
    let params = EngineParams::new(omega_x, omega_z, 1.0 / t)?;
    Ok(aux_cost_record(&params, t)?.min_cost)
}

/// Temperature at which the swap-protocol reset cost, with the cold bath at the same
/// temperature, uses up the POVM advantage `(ω_x − ω_z)/2`. Bisection on the cost,
/// which increases with temperature, until the bracket is narrower than `tol`.
pub fn reset_crossing_temperature(omega_x: f64, omega_z: f64, tol: f64) -> Result<f64> {
    if !(tol.is_finite() && tol > 0.0) {
        return Err(invalid("tol", "must be positive"));
    }
    let gap = 0.5 * (omega_x - omega_z);
    let excess = |t: f64| swap_reset_cost_at(omega_x, omega_z, t).map(|c| c - gap);
    // cost never exceeds t ln 2, so the crossing lies above gap / ln 2
    let mut lo = gap / LN_2;
    let mut hi = 2.0 * lo;
    excess(lo)?;
    while excess(hi)? < 0.0 {
        lo = hi;
        hi *= 2.0;
        if !hi.is_finite() {
            return Err(invalid("omega", "no crossing temperature found"));
        }
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if excess(mid)? < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Advantage of the optimal PVM engine over the two-bath engine with an infinitely hot
/// bath at the same `p`; nonnegative and zero only at `p = 1`.
pub fn delta_w_pvm_conventional(params: &EngineParams, p: f64) -> Result<f64> {
    check_p(p)?;
    let (wx, wz) = (params.omega_x, params.omega_z);
    let d = d_of(params, p);
    Ok(0.25 * params.tau_z() * (d - (wx - wz) + 2.0 * wx * (1.0 - p)))
}
