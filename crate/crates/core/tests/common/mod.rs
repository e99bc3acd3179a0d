#![allow(dead_code)]

use std::f64::consts::{PI, TAU};

use otto_core::optimize::{su4_from_point, Su4Point, SU4_DIM};
use otto_core::qmat::{ket_minus, ket_plus, ComplexMatrix, DensityMatrix, UnitaryMatrix, C64};
use otto_core::{DriveSpec, EngineParams, MeasurementBasis};
use proptest::prelude::*;

pub fn params() -> impl Strategy<Value = EngineParams> {
    (0.2f64..3.0, 1.05f64..5.0, 0.05f64..5.0)
        .prop_map(|(wz, ratio, bc)| EngineParams::new(ratio * wz, wz, bc).unwrap())
}

pub fn params_with_hot_bath() -> impl Strategy<Value = EngineParams> {
    (params(), 0.0f64..0.99).prop_map(|(p, f)| p.with_hot_bath(f * p.beta_c).unwrap())
}

pub fn drive() -> impl Strategy<Value = DriveSpec> {
    (0.5f64..=1.0, 0.0f64..TAU).prop_map(|(p, a)| DriveSpec::new(p, a).unwrap())
}

pub fn basis() -> impl Strategy<Value = MeasurementBasis> {
    (0.0f64..=PI, 0.0f64..TAU).prop_map(|(t, f)| MeasurementBasis::new(t, f).unwrap())
}

pub fn su4_point() -> impl Strategy<Value = Su4Point> {
    proptest::array::uniform15(-PI..PI).prop_map(Su4Point)
}

pub fn su4() -> impl Strategy<Value = UnitaryMatrix> {
    su4_point().prop_map(|pt| su4_from_point(&pt))
}

/// `q|ψ⟩⟨ψ| + (1−q)|ψ⊥⟩⟨ψ⊥|` with `|ψ⟩ = cos(t/2)|+⟩ + e^{if} sin(t/2)|−⟩`.
pub fn qubit_state(q: f64, t: f64, f: f64) -> DensityMatrix {
    let e = C64::from_polar(1.0, f);
    let (c, s) = ((t / 2.0).cos(), (t / 2.0).sin());
    let (p, m) = (ket_plus(), ket_minus());
    let psi = [p[0] * c + e * m[0] * s, p[1] * c + e * m[1] * s];
    let perp = [p[0] * s - e * m[0] * c, p[1] * s - e * m[1] * c];
    let a = ComplexMatrix::projector(&psi).unwrap();
    let b = ComplexMatrix::projector(&perp).unwrap();
    DensityMatrix::new((a * q) + (b * (1.0 - q))).unwrap()
}

pub fn aux_state() -> impl Strategy<Value = DensityMatrix> {
    (0.0f64..=1.0, 0.0f64..=PI, 0.0f64..TAU).prop_map(|(q, t, f)| qubit_state(q, t, f))
}

pub const ZERO: [f64; SU4_DIM] = [0.0; SU4_DIM];
