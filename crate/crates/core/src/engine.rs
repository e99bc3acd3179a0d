//! Stroke-level density-matrix simulation of the conventional, PVM-fueled and
//! POVM-fueled qubit Otto cycles.
//!
//! Natural units throughout: ħ = k_B = 1, frequencies in units of Ω₀. Energies, works
//! and heats are in ħΩ₀, temperatures in ħΩ₀/k_B.
//!
//! Strokes: I thermalizes at `H⁽¹⁾ = (ω_z/2)σ_z` with the cold bath, II applies the drive
//! `U`, III is either a hot-bath thermalization at `H⁽²⁾ = (ω_x/2)σ_x` or a non-selective
//! measurement, and IV applies `Ũ = U†`. Energy changes in I and III are heat, in II and
//! IV work; the reported total work is `w_total = −(w1 + w2)` so a positive value means
//! the cycle delivers work.

use std::f64::consts::{LN_2, PI, TAU};

use serde::Serialize;

use crate::error::{invalid, OttoError, Result};
use crate::qmat::{
    self, hadamard, hermitian_eig, identity2, ket_minus, ket_plus, partial_trace_aux,
    partial_trace_system, pauli_x, pauli_z, tensor_product, tensor_states, ComplexMatrix,
    DensityMatrix, Ket, UnitaryMatrix, C64,
};

/// Works and heats below this magnitude are treated as zero when deciding whether an
/// efficiency is defined.
pub const ENGINE_EPS: f64 = 1e-12;

pub const KRAUS_TOL: f64 = 1e-10;

/// Physical setup of the working qubit and its baths.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EngineParams {
    pub omega_z: f64,
    pub omega_x: f64,
    pub beta_c: f64,
    /// Hot-bath inverse temperature, used only by the conventional engine.
    pub beta_h: Option<f64>,
}

impl EngineParams {
    /// Arguments follow the `(ω_x, ω_z, β_c)` tuple order used throughout the docs,
    /// e.g. `EngineParams::new(3.0, 2.0, 1.0)`.
    pub fn new(omega_x: f64, omega_z: f64, beta_c: f64) -> Result<Self> {
        if !(omega_z.is_finite() && omega_z > 0.0) {
            return Err(invalid(
                "omega_z",
                format!("must be positive, got {omega_z}"),
            ));
        }
        if !(omega_x.is_finite() && omega_x > omega_z) {
            return Err(invalid(
                "omega_x",
                format!("engine condition needs omega_x > omega_z, got {omega_x} <= {omega_z}"),
            ));
        }
        if !(beta_c.is_finite() && beta_c > 0.0) {
            return Err(invalid("beta_c", format!("must be positive, got {beta_c}")));
        }
        Ok(EngineParams {
            omega_z,
            omega_x,
            beta_c,
            beta_h: None,
        })
    }

    pub fn with_hot_bath(mut self, beta_h: f64) -> Result<Self> {
        if !(beta_h.is_finite() && (0.0..self.beta_c).contains(&beta_h)) {
            return Err(invalid(
                "beta_h",
                format!("needs 0 <= beta_h < beta_c = {}, got {beta_h}", self.beta_c),
            ));
        }
        self.beta_h = Some(beta_h);
        Ok(self)
    }

    pub fn without_hot_bath(mut self) -> Self {
        self.beta_h = None;
        self
    }

    pub fn v_z(&self) -> f64 {
        self.beta_c * self.omega_z / 2.0
    }

    pub fn tau_z(&self) -> f64 {
        self.v_z().tanh()
    }

    pub fn v_x(&self) -> Option<f64> {
        self.beta_h.map(|b| b * self.omega_x / 2.0)
    }

    pub fn tau_x(&self) -> Option<f64> {
        self.v_x().map(f64::tanh)
    }

    /// Compression ratio ω_x/ω_z.
    pub fn gamma(&self) -> f64 {
        self.omega_x / self.omega_z
    }

    pub fn cold_temperature(&self) -> f64 {
        1.0 / self.beta_c
    }

    /// Adiabatic Otto efficiency `1 − ω_z/ω_x`.
    pub fn otto_efficiency(&self) -> f64 {
        1.0 - self.omega_z / self.omega_x
    }
}

/// Non-adiabaticity of the work strokes: `P = |⟨+|U|0⟩|²` and the phase `α`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DriveSpec {
    pub p: f64,
    pub alpha: f64,
}

impl DriveSpec {
    /// `p ∈ [1/2, 1]`; `alpha` is wrapped into `[0, 2π)`.
    pub fn new(p: f64, alpha: f64) -> Result<Self> {
        if !(p.is_finite() && (0.5..=1.0).contains(&p)) {
            return Err(invalid("p", format!("must lie in [1/2, 1], got {p}")));
        }
        if !alpha.is_finite() {
            return Err(invalid("alpha", "must be finite"));
        }
        Ok(DriveSpec {
            p,
            alpha: alpha.rem_euclid(TAU),
        })
    }

    pub fn adiabatic() -> Self {
        DriveSpec { p: 1.0, alpha: 0.0 }
    }

    pub fn is_adiabatic(&self) -> bool {
        self.p == 1.0
    }
}

/// Orthonormal qubit basis `|ψ±⟩` parametrized on the Bloch sphere whose poles are `|±⟩`:
/// `|ψ⁺⟩ = cos(θ/2)|+⟩ + e^{iφ} sin(θ/2)|−⟩`, `|ψ⁻⟩ = sin(θ/2)|+⟩ − e^{iφ} cos(θ/2)|−⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MeasurementBasis {
    pub theta: f64,
    pub phi: f64,
}

impl MeasurementBasis {
    /// `theta ∈ [0, π]`; `phi` is wrapped into `[0, 2π)`.
    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        if !(theta.is_finite() && (0.0..=PI).contains(&theta)) {
            return Err(invalid(
                "theta",
                format!("must lie in [0, pi], got {theta}"),
            ));
        }
        if !phi.is_finite() {
            return Err(invalid("phi", "must be finite"));
        }
        Ok(MeasurementBasis {
            theta,
            phi: phi.rem_euclid(TAU),
        })
    }

    /// Maps any real `(theta, phi)` onto the same basis state with `theta ∈ [0, π]`.
    pub fn from_unbounded(theta: f64, phi: f64) -> Self {
        let mut t = theta.rem_euclid(TAU);
        let mut f = phi;
        if t > PI {
            t = TAU - t;
            f += PI;
        }
        MeasurementBasis {
            theta: t,
            phi: f.rem_euclid(TAU),
        }
    }

    /// `{|+⟩, |−⟩}`.
    pub fn plus_minus() -> Self {
        MeasurementBasis {
            theta: 0.0,
            phi: 0.0,
        }
    }

    /// `{|0⟩, |1⟩}`.
    pub fn computational() -> Self {
        MeasurementBasis {
            theta: PI / 2.0,
            phi: 0.0,
        }
    }

    pub fn states(&self) -> (Ket, Ket) {
        let (ch, sh) = ((self.theta / 2.0).cos(), (self.theta / 2.0).sin());
        let e = C64::from_polar(1.0, self.phi);
        let p = ket_plus();
        let m = ket_minus();
        let psi_plus = [p[0] * ch + e * m[0] * sh, p[1] * ch + e * m[1] * sh];
        let psi_minus = [p[0] * sh - e * m[0] * ch, p[1] * sh - e * m[1] * ch];
        (psi_plus, psi_minus)
    }

    pub fn projectors(&self) -> [ComplexMatrix; 2] {
        let (a, b) = self.states();
        [
            ComplexMatrix::projector(&a).expect("qubit projector"),
            ComplexMatrix::projector(&b).expect("qubit projector"),
        ]
    }
}

/// Two-outcome generalized measurement realized by a qubit auxiliary: prepare
/// `aux_state`, apply `joint_unitary` on system ⊗ auxiliary, then measure the auxiliary
/// projectively in `aux_basis`.
#[derive(Debug, Clone, Copy)]
pub struct PovmSpec {
    aux_state: DensityMatrix,
    joint_unitary: UnitaryMatrix,
    aux_basis: MeasurementBasis,
}

impl PovmSpec {
    pub fn new(
        aux_state: DensityMatrix,
        joint_unitary: UnitaryMatrix,
        aux_basis: MeasurementBasis,
    ) -> Result<Self> {
        if aux_state.dim() != 2 {
            return Err(OttoError::DimensionMismatch {
                expected: 2,
                found: aux_state.dim(),
            });
        }
        if joint_unitary.dim() != 4 {
            return Err(OttoError::DimensionMismatch {
                expected: 4,
                found: joint_unitary.dim(),
            });
        }
        let spec = PovmSpec {
            aux_state,
            joint_unitary,
            aux_basis,
        };
        spec.check_completeness()?;
        Ok(spec)
    }

    /// Pure `|+⟩` auxiliary, the default preparation.
    pub fn with_plus_aux(
        joint_unitary: UnitaryMatrix,
        aux_basis: MeasurementBasis,
    ) -> Result<Self> {
        let aux = DensityMatrix::pure(&ket_plus())?;
        Self::new(aux, joint_unitary, aux_basis)
    }

    #[cfg(test)]
    pub(crate) fn new_unchecked(
        aux_state: DensityMatrix,
        joint_unitary: UnitaryMatrix,
        aux_basis: MeasurementBasis,
    ) -> Self {
        PovmSpec {
            aux_state,
            joint_unitary,
            aux_basis,
        }
    }

    pub fn aux_state(&self) -> &DensityMatrix {
        &self.aux_state
    }

    pub fn joint_unitary(&self) -> &UnitaryMatrix {
        &self.joint_unitary
    }

    pub fn aux_basis(&self) -> &MeasurementBasis {
        &self.aux_basis
    }

    /// Kraus operators `√λ_k (I ⊗ ⟨π_i|) V (I ⊗ |a_k⟩)` over auxiliary eigenpairs
    /// `(λ_k, |a_k⟩)` with `λ_k > 0` and measurement outcomes `π_i`.
    pub fn kraus_operators(&self) -> Vec<ComplexMatrix> {
        let eig = qmat::hermitian_eig_unchecked(self.aux_state.matrix());
        let v = self.joint_unitary.matrix();
        let (pi_plus, pi_minus) = self.aux_basis.states();
        let mut out = Vec::with_capacity(4);
        for (k, &lambda) in eig.values.iter().enumerate() {
            if lambda <= qmat::PSD_TOL {
                continue;
            }
            let a_k = eig.vectors.column(k);
            let weight = lambda.sqrt();
            for pi in [&pi_plus, &pi_minus] {
                let mut kraus = ComplexMatrix::zeros_unchecked(2);
                for s_out in 0..2 {
                    for s_in in 0..2 {
                        let mut acc = C64::new(0.0, 0.0);
                        for a_out in 0..2 {
                            for a_in in 0..2 {
                                acc += pi[a_out].conj()
                                    * v[(2 * s_out + a_out, 2 * s_in + a_in)]
                                    * a_k[a_in];
                            }
                        }
                        kraus[(s_out, s_in)] = acc * weight;
                    }
                }
                out.push(kraus);
            }
        }
        out
    }

    /// Largest entrywise deviation of `Σ K†K` from the identity.
    pub fn completeness_error(&self) -> f64 {
        let sum = self
            .kraus_operators()
            .iter()
            .fold(ComplexMatrix::zeros_unchecked(2), |acc, k| {
                acc + (&k.adjoint() * k)
            });
        sum.max_abs_diff(&identity2())
    }

    fn check_completeness(&self) -> Result<()> {
        let dev = self.completeness_error();
        if dev > KRAUS_TOL {
            return Err(OttoError::KrausIncomplete(dev));
        }
        Ok(())
    }
}

/// Per-cycle thermodynamic ledger.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CycleRecord {
    pub e0: f64,
    pub e1: f64,
    pub e2: f64,
    pub e3: f64,
    /// Stroke II work `e1 − e0`.
    pub w1: f64,
    /// Stroke IV work `e3 − e2`.
    pub w2: f64,
    /// Extracted work `−(w1 + w2)`.
    pub w_total: f64,
    pub q_c: f64,
    pub q_h: f64,
    /// `w_total / q_h`, absent unless the cycle runs as an engine.
    pub eta: Option<f64>,
    /// Entropy of the discarded auxiliary (bits); zero for non-POVM cycles.
    pub aux_entropy: f64,
    /// Landauer cost of resetting the auxiliary; zero for non-POVM cycles.
    pub aux_reset_cost: f64,
}

impl CycleRecord {
    /// Ledger from the four post-stroke energies.
    pub fn from_energies(e0: f64, e1: f64, e2: f64, e3: f64) -> Self {
        let w1 = e1 - e0;
        let w2 = e3 - e2;
        let w_total = -(w1 + w2);
        let q_h = e2 - e1;
        let q_c = e0 - e3;
        CycleRecord {
            e0,
            e1,
            e2,
            e3,
            w1,
            w2,
            w_total,
            q_c,
            q_h,
            eta: efficiency(w_total, q_h),
            aux_entropy: 0.0,
            aux_reset_cost: 0.0,
        }
    }

    pub fn first_law_residual(&self) -> f64 {
        self.q_h + self.q_c - self.w_total
    }

    /// Work left after paying for the auxiliary reset.
    pub fn net_work(&self) -> f64 {
        self.w_total - self.aux_reset_cost
    }
}

/// `w / q_h` when the cycle delivers work out of a positive heat intake.
pub fn efficiency(w_total: f64, q_h: f64) -> Option<f64> {
    (w_total > ENGINE_EPS && q_h > ENGINE_EPS).then(|| w_total / q_h)
}

/// `H⁽¹⁾ = (ω_z/2) σ_z`.
pub fn hamiltonian_h1(params: &EngineParams) -> ComplexMatrix {
    pauli_z() * (params.omega_z / 2.0)
}

/// `H⁽²⁾ = (ω_x/2) σ_x`.
pub fn hamiltonian_h2(params: &EngineParams) -> ComplexMatrix {
    pauli_x() * (params.omega_x / 2.0)
}

/// Gibbs state `e^{−βH} / Tr e^{−βH}`.
pub fn thermal_state(h: &ComplexMatrix, beta: f64) -> Result<DensityMatrix> {
    if !(beta.is_finite() && beta >= 0.0) {
        return Err(invalid(
            "beta",
            format!("must be finite and >= 0, got {beta}"),
        ));
    }
    let eig = hermitian_eig(h)?;
    let lowest = eig.values[0];
    let weights: Vec<f64> = eig
        .values
        .iter()
        .map(|&e| (-beta * (e - lowest)).exp())
        .collect();
    let z: f64 = weights.iter().sum();
    let w = eig.vectors.matrix();
    let n = h.dim();
    let mut rho = ComplexMatrix::zeros_unchecked(n);
    for i in 0..n {
        for j in 0..n {
            rho[(i, j)] = (0..n)
                .map(|k| w[(i, k)] * (weights[k] / z) * w[(j, k)].conj())
                .sum();
        }
    }
    Ok(DensityMatrix::from_channel_output(rho))
}

/// Work-stroke unitary in the computational basis:
/// `U|0⟩ = √P|+⟩ + e^{iα}√(1−P)|−⟩`, `U|1⟩ = √(1−P)|+⟩ − e^{iα}√P|−⟩`.
pub fn drive_unitary(drive: &DriveSpec) -> UnitaryMatrix {
    let sp = drive.p.sqrt();
    let sq = (1.0 - drive.p).max(0.0).sqrt();
    let e = C64::from_polar(1.0, drive.alpha);
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let one = C64::new(1.0, 0.0);
    let entries = [
        (one * sp + e * sq) * r,
        (one * sq - e * sp) * r,
        (one * sp - e * sq) * r,
        (one * sq + e * sp) * r,
    ];
    UnitaryMatrix::from_trusted(ComplexMatrix::from_entries(&entries).expect("2x2 drive"))
}

/// Non-selective projective measurement `ρ ↦ Σ_i P_i ρ P_i`.
pub fn pvm_stroke(rho: &DensityMatrix, basis: &MeasurementBasis) -> Result<DensityMatrix> {
    if rho.dim() != 2 {
        return Err(OttoError::DimensionMismatch {
            expected: 2,
            found: rho.dim(),
        });
    }
    let out = basis
        .projectors()
        .iter()
        .fold(ComplexMatrix::zeros_unchecked(2), |acc, p| {
            acc + (&(p * rho.matrix()) * p)
        });
    Ok(DensityMatrix::from_channel_output(out))
}

/// Dilated two-outcome measurement. Returns `(system marginal, auxiliary marginal)` of
/// `Σ_i (I⊗Π_i) V (ρ⊗ρ_a) V† (I⊗Π_i)`.
pub fn povm_stroke(rho: &DensityMatrix, povm: &PovmSpec) -> Result<(DensityMatrix, DensityMatrix)> {
    if rho.dim() != 2 {
        return Err(OttoError::DimensionMismatch {
            expected: 2,
            found: rho.dim(),
        });
    }
    povm.check_completeness()?;
    let joint = tensor_states(rho, &povm.aux_state)?;
    let rotated = joint.matrix().conjugate_by(povm.joint_unitary.matrix());
    let measured = povm
        .aux_basis
        .projectors()
        .iter()
        .map(|pi| tensor_product(&identity2(), pi).expect("2x2 factors"))
        .fold(ComplexMatrix::zeros_unchecked(4), |acc, big| {
            acc + ((big * rotated) * big)
        });
    let measured = DensityMatrix::from_channel_output(measured);
    Ok((
        partial_trace_aux(&measured)?,
        partial_trace_system(&measured)?,
    ))
}

struct FrontHalf {
    e0: f64,
    e1: f64,
    rho1: DensityMatrix,
    drive: UnitaryMatrix,
}

/// Strokes I and II, shared by every engine variant.
fn cold_thermalize_and_drive(params: &EngineParams, drive: &DriveSpec) -> Result<FrontHalf> {
    let h1 = hamiltonian_h1(params);
    let h2 = hamiltonian_h2(params);
    let rho0 = thermal_state(&h1, params.beta_c)?;
    let u = drive_unitary(drive);
    let rho1 = rho0.evolve(&u);
    Ok(FrontHalf {
        e0: rho0.energy(&h1),
        e1: rho1.energy(&h2),
        rho1,
        drive: u,
    })
}

/// Stroke IV with `Ũ = U†`; returns `E₃`.
fn reverse_drive_energy(params: &EngineParams, rho2: &DensityMatrix, u: &UnitaryMatrix) -> f64 {
    rho2.evolve(&u.adjoint()).energy(&hamiltonian_h1(params))
}

/// Two-bath cycle: stroke III thermalizes with the hot bath at `H⁽²⁾`.
pub fn run_conventional_cycle(params: &EngineParams, drive: &DriveSpec) -> Result<CycleRecord> {
    let beta_h = params.beta_h.ok_or(OttoError::MissingHotBath)?;
    let front = cold_thermalize_and_drive(params, drive)?;
    let h2 = hamiltonian_h2(params);
    let rho2 = thermal_state(&h2, beta_h)?;
    let e2 = rho2.energy(&h2);
    let e3 = reverse_drive_energy(params, &rho2, &front.drive);
    Ok(CycleRecord::from_energies(front.e0, front.e1, e2, e3))
}

/// Stroke III is a non-selective projective measurement in `basis`.
pub fn run_pvm_cycle(
    params: &EngineParams,
    drive: &DriveSpec,
    basis: &MeasurementBasis,
) -> Result<CycleRecord> {
    let front = cold_thermalize_and_drive(params, drive)?;
    let rho2 = pvm_stroke(&front.rho1, basis)?;
    let e2 = rho2.energy(&hamiltonian_h2(params));
    let e3 = reverse_drive_energy(params, &rho2, &front.drive);
    Ok(CycleRecord::from_energies(front.e0, front.e1, e2, e3))
}

/// Stroke III is the dilated measurement `povm`. The auxiliary carries no Hamiltonian;
/// its reset costs `k_B T S(ρ'_a) ln 2` at `reset_temperature` (normally `1/β_c`).
pub fn run_povm_cycle(
    params: &EngineParams,
    drive: &DriveSpec,
    povm: &PovmSpec,
    reset_temperature: f64,
) -> Result<CycleRecord> {
    if !(reset_temperature.is_finite() && reset_temperature >= 0.0) {
        return Err(invalid(
            "reset_temperature",
            format!("must be finite and >= 0, got {reset_temperature}"),
        ));
    }
    let front = cold_thermalize_and_drive(params, drive)?;
    let (rho2, aux_post) = povm_stroke(&front.rho1, povm)?;
    let e2 = rho2.energy(&hamiltonian_h2(params));
    let e3 = reverse_drive_energy(params, &rho2, &front.drive);
    let mut record = CycleRecord::from_energies(front.e0, front.e1, e2, e3);
    record.aux_entropy = qmat::von_neumann_entropy(&aux_post);
    record.aux_reset_cost = landauer_cost(reset_temperature, record.aux_entropy);
    Ok(record)
}

/// Minimum erasure work `k_B T S ln 2` for entropy `S` in bits.
pub fn landauer_cost(temperature: f64, entropy_bits: f64) -> f64 {
    temperature * entropy_bits * LN_2
}

/// `𝓗 ρ 𝓗`, the adiabatic stroke map between the σ_z and σ_x eigenbases up to phases.
pub fn hadamard_conjugate(m: &ComplexMatrix) -> ComplexMatrix {
    m.conjugate_by(&hadamard())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmat::{inner, ket_one, ket_zero};
    use std::f64::consts::FRAC_PI_2;

    const TANH1: f64 = 0.761_594_155_955_764_9;

    fn p32() -> EngineParams {
        EngineParams::new(3.0, 2.0, 1.0).unwrap()
    }

    fn swap() -> UnitaryMatrix {
        let mut m = ComplexMatrix::zeros(4).unwrap();
        for (i, j) in [(0, 0), (1, 2), (2, 1), (3, 3)] {
            m[(i, j)] = C64::new(1.0, 0.0);
        }
        UnitaryMatrix::new(m).unwrap()
    }

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn params_validation() {
        assert!(EngineParams::new(2.0, 3.0, 1.0).is_err());
        assert!(EngineParams::new(3.0, 0.0, 1.0).is_err());
        assert!(EngineParams::new(3.0, 2.0, 0.0).is_err());
        assert!(p32().with_hot_bath(1.0).is_err());
        assert!(p32().with_hot_bath(-0.1).is_err());
        assert!(p32().with_hot_bath(0.0).is_ok());
        assert!(DriveSpec::new(0.49, 0.0).is_err());
        assert!(DriveSpec::new(1.01, 0.0).is_err());
        assert!(MeasurementBasis::new(-0.1, 0.0).is_err());
        assert!(close(
            DriveSpec::new(1.0, -FRAC_PI_2).unwrap().alpha,
            1.5 * PI,
            1e-15
        ));
    }

    #[test]
    fn hamiltonians() {
        let params = EngineParams::new(3.0, 2.0, 1.0).unwrap();
        let h1 = hamiltonian_h1(&params);
        assert!(h1.max_abs_diff(&ComplexMatrix::diagonal(&[1.0, -1.0]).unwrap()) < 1e-15);
        let eig = hermitian_eig(&hamiltonian_h2(&params)).unwrap();
        assert!(close(eig.values[1], 1.5, 1e-14));
        assert!(close(
            inner(&eig.vectors.column(1), &ket_plus()).norm(),
            1.0,
            1e-12
        ));
        assert!(close(eig.values[0], -1.5, 1e-14));
        assert!(close(
            inner(&eig.vectors.column(0), &ket_minus()).norm(),
            1.0,
            1e-12
        ));

        let unit = EngineParams {
            omega_z: 1.0,
            omega_x: 1.0,
            beta_c: 1.0,
            beta_h: None,
        };
        let conj = hadamard_conjugate(&hamiltonian_h1(&unit));
        assert!(conj.max_abs_diff(&hamiltonian_h2(&unit)) < 1e-15);
    }

    #[test]
    fn thermal_states() {
        let h = hamiltonian_h1(&p32());
        let inf_t = thermal_state(&h, 0.0).unwrap();
        assert!(inf_t.matrix().max_abs_diff(&(identity2() * 0.5)) < 1e-15);

        let rho = thermal_state(&h, 1.0).unwrap();
        let z = 2.0 * 1f64.cosh();
        assert!(close(rho.matrix()[(0, 0)].re, (-1f64).exp() / z, 1e-15));
        assert!(close(rho.matrix()[(1, 1)].re, 1f64.exp() / z, 1e-15));
        assert!(close(rho.energy(&h), -TANH1, 1e-15));

        let cold = thermal_state(&h, 50.0).unwrap();
        let ground = ComplexMatrix::projector(&ket_one()).unwrap();
        assert!(cold.matrix().max_abs_diff(&ground) < 1e-10);

        assert!(thermal_state(&h, -1.0).is_err());
    }

    #[test]
    fn drive_unitary_limits() {
        let u = drive_unitary(&DriveSpec::adiabatic());
        let u0 = u.matrix().apply(&ket_zero());
        let u1 = u.matrix().apply(&ket_one());
        assert!(close((inner(&ket_plus(), &u0) - 1.0).norm(), 0.0, 1e-15));
        assert!(close((inner(&ket_minus(), &u1) + 1.0).norm(), 0.0, 1e-15));

        let half = drive_unitary(&DriveSpec::new(0.5, 0.0).unwrap());
        let h0 = half.matrix().apply(&ket_zero());
        assert!(close((inner(&ket_zero(), &h0) - 1.0).norm(), 0.0, 1e-15));

        for (p, a) in [(0.5, 0.3), (0.75, 2.0), (0.9, 5.9), (1.0, 1.0)] {
            let d = DriveSpec::new(p, a).unwrap();
            let u = drive_unitary(&d);
            assert!(qmat::unitarity_error(u.matrix()) < 1e-12);
            let amp = inner(&ket_plus(), &u.matrix().apply(&ket_zero()));
            assert!(close(amp.norm_sqr(), p, 1e-14));
        }
    }

    #[test]
    fn pvm_stroke_cases() {
        let params = p32();
        let h1 = hamiltonian_h1(&params);
        let h2 = hamiltonian_h2(&params);
        let rho0 = thermal_state(&h1, 1.0).unwrap();
        // thermal state is diagonal in the computational basis: fixed point
        let same = pvm_stroke(&rho0, &MeasurementBasis::computational()).unwrap();
        assert!(same.matrix().max_abs_diff(rho0.matrix()) < 1e-15);

        let rho1 = rho0.evolve(&drive_unitary(&DriveSpec::adiabatic()));
        let e1 = rho1.energy(&h2);
        assert!(close(e1, -1.5 * TANH1, 1e-14));
        let dephased = pvm_stroke(&rho1, &MeasurementBasis::new(FRAC_PI_2, 0.0).unwrap()).unwrap();
        assert!(close(dephased.energy(&h2), 0.0, 1e-14));
        let untouched = pvm_stroke(&rho1, &MeasurementBasis::plus_minus()).unwrap();
        assert!(close(untouched.energy(&h2), e1, 1e-14));
    }

    #[test]
    fn basis_projectors_complete() {
        for (t, f) in [(0.0, 0.0), (0.4, 1.0), (FRAC_PI_2, 3.0), (PI, 6.0)] {
            let b = MeasurementBasis::new(t, f).unwrap();
            let [a, c] = b.projectors();
            assert!((a + c).max_abs_diff(&identity2()) < 1e-12);
            let (x, y) = b.states();
            assert!(inner(&x, &y).norm() < 1e-15);
        }
        let wrapped = MeasurementBasis::from_unbounded(-0.3, 0.2);
        let direct = MeasurementBasis::new(0.3, 0.2 + PI).unwrap();
        let pa = wrapped.projectors();
        let pb = direct.projectors();
        assert!(pa[0].max_abs_diff(&pb[0]) < 1e-14);
    }

    #[test]
    fn conventional_cycle_examples() {
        let params = p32().with_hot_bath(0.2).unwrap();
        let rec = run_conventional_cycle(&params, &DriveSpec::adiabatic()).unwrap();
        assert!(close(rec.w_total, 0.5 * (TANH1 - 0.3f64.tanh()), 1e-12));
        assert!(close(rec.w_total, 0.235_140_771_752_087, 1e-12));
        assert!(close(rec.eta.unwrap(), 1.0 / 3.0, 1e-12));
        assert!(rec.first_law_residual().abs() < 1e-12);

        let hot_inf = p32().with_hot_bath(0.0).unwrap();
        let rec = run_conventional_cycle(&hot_inf, &DriveSpec::new(0.75, 0.0).unwrap()).unwrap();
        assert!(close(rec.w_total, -0.190_398_538_988_941_2, 1e-12));
        assert!(rec.eta.is_none());

        let tuned = p32().with_hot_bath(2.0 / 3.0).unwrap();
        let rec = run_conventional_cycle(&tuned, &DriveSpec::adiabatic()).unwrap();
        assert!(rec.w_total.abs() < 1e-12);

        assert_eq!(
            run_conventional_cycle(&p32(), &DriveSpec::adiabatic()),
            Err(OttoError::MissingHotBath)
        );
    }

    #[test]
    fn pvm_cycle_examples() {
        let params = p32();
        let rec = run_pvm_cycle(
            &params,
            &DriveSpec::adiabatic(),
            &MeasurementBasis::computational(),
        )
        .unwrap();
        assert!(close(rec.w_total, 0.5 * TANH1, 1e-12));
        assert!(close(rec.eta.unwrap(), 1.0 / 3.0, 1e-12));

        let rec = run_pvm_cycle(
            &params,
            &DriveSpec::adiabatic(),
            &MeasurementBasis::plus_minus(),
        )
        .unwrap();
        assert!(rec.w_total.abs() < 1e-14);
        assert!(rec.eta.is_none());

        // optimal angle at P = 3/4 from cos 2θ = −A/√(A²+B²), sin 2θ = −B/√(A²+B²)
        let (p, a, b) = (0.75, 0.5, 2.0 * (0.75f64 * 0.25).sqrt());
        let big_a = 2.0 * (b * b - a * a) + a * 3.0;
        let big_b = b * (3.0 - 2.0 * a * 2.0);
        let x = (-big_b).atan2(-big_a).rem_euclid(TAU);
        let basis = MeasurementBasis::new(x / 2.0, 0.0).unwrap();
        let rec = run_pvm_cycle(&params, &DriveSpec::new(p, 0.0).unwrap(), &basis).unwrap();
        assert!(close(rec.w_total, 0.408_547_914_660_303_2, 1e-12));
        assert!(rec.first_law_residual().abs() < 1e-12);
    }

    #[test]
    fn povm_swap_protocol() {
        let params = p32();
        let povm = PovmSpec::with_plus_aux(swap(), MeasurementBasis::plus_minus()).unwrap();
        assert!(povm.completeness_error() < 1e-12);

        let front = cold_thermalize_and_drive(&params, &DriveSpec::adiabatic()).unwrap();
        let (sys, aux) = povm_stroke(&front.rho1, &povm).unwrap();
        let plus = ComplexMatrix::projector(&ket_plus()).unwrap();
        assert!(sys.matrix().max_abs_diff(&plus) < 1e-12);
        assert!(close(sys.energy(&hamiltonian_h2(&params)), 1.5, 1e-12));
        assert!(close(aux.trace_re(), 1.0, 1e-12));

        let rec = run_povm_cycle(&params, &DriveSpec::adiabatic(), &povm, 1.0).unwrap();
        assert!(close(rec.w_total, 0.5 * (1.0 + TANH1), 1e-12));
        assert!(close(rec.aux_reset_cost, 0.365_333_855_087_207_7, 1e-12));
        assert!(close(rec.eta.unwrap(), 1.0 / 3.0, 1e-12));
        assert!(close(rec.net_work(), 0.515_463_222_890_674_8, 1e-12));
    }

    #[test]
    fn povm_identity_dilation_is_trivial() {
        let params = p32();
        let povm = PovmSpec::with_plus_aux(
            UnitaryMatrix::identity(4).unwrap(),
            MeasurementBasis::plus_minus(),
        )
        .unwrap();
        for p in [1.0, 0.8, 0.5] {
            let drive = DriveSpec::new(p, 0.4).unwrap();
            let front = cold_thermalize_and_drive(&params, &drive).unwrap();
            let (sys, aux) = povm_stroke(&front.rho1, &povm).unwrap();
            assert!(sys.matrix().max_abs_diff(front.rho1.matrix()) < 1e-14);
            assert!(qmat::von_neumann_entropy(&aux) < 1e-10);
            let rec = run_povm_cycle(&params, &drive, &povm, 1.0).unwrap();
            assert!(rec.q_h.abs() < 1e-14);
            assert!(close(rec.w_total, rec.q_c, 1e-14));
        }
    }

    #[test]
    fn kraus_completeness_violation_is_reported() {
        let mut bad = ComplexMatrix::identity(4).unwrap();
        bad[(0, 0)] = C64::new(1.0 + 1e-6, 0.0);
        let fake = UnitaryMatrix::from_raw(bad);
        let aux = DensityMatrix::pure(&ket_plus()).unwrap();
        let povm = PovmSpec::new_unchecked(aux, fake, MeasurementBasis::plus_minus());
        let rho = DensityMatrix::maximally_mixed(2).unwrap();
        assert!(matches!(
            povm_stroke(&rho, &povm),
            Err(OttoError::KrausIncomplete(_))
        ));
        assert!(matches!(
            PovmSpec::new(aux, fake, MeasurementBasis::plus_minus()),
            Err(OttoError::KrausIncomplete(_))
        ));
    }

    #[test]
    fn kraus_operators_reproduce_stroke() {
        let params = p32();
        let u = qmat::exp_i_hermitian(
            &(tensor_product(&pauli_x(), &pauli_z()).unwrap()
                + tensor_product(&identity2(), &qmat::pauli_y()).unwrap())
            .scale(C64::new(0.7, 0.0)),
        )
        .unwrap();
        let aux = DensityMatrix::new(
            ComplexMatrix::from_entries(&[
                C64::new(0.7, 0.0),
                C64::new(0.1, 0.2),
                C64::new(0.1, -0.2),
                C64::new(0.3, 0.0),
            ])
            .unwrap(),
        )
        .unwrap();
        let povm = PovmSpec::new(aux, u, MeasurementBasis::new(1.1, 0.4).unwrap()).unwrap();
        let front = cold_thermalize_and_drive(&params, &DriveSpec::new(0.7, 1.0).unwrap()).unwrap();
        let (sys, _) = povm_stroke(&front.rho1, &povm).unwrap();
        let via_kraus = povm
            .kraus_operators()
            .iter()
            .fold(ComplexMatrix::zeros(2).unwrap(), |acc, k| {
                acc + front.rho1.matrix().conjugate_by(k)
            });
        assert!(sys.matrix().max_abs_diff(&via_kraus) < 1e-12);
    }

    trait TraceRe {
        fn trace_re(&self) -> f64;
    }
    impl TraceRe for DensityMatrix {
        fn trace_re(&self) -> f64 {
            self.matrix().trace().re
        }
    }
}
