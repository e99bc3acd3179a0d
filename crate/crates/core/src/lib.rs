//! Qubit quantum Otto engines fueled by a hot bath, by projective measurements, or by
//! generalized measurements realized through a qubit auxiliary.
//!
//! - [`qmat`]: 2×2 and 4×4 complex linear algebra, density matrices, entropies.
//! - [`engine`]: stroke-by-stroke simulation with a full energy ledger.
//! - [`analytic`]: closed-form works, heats and optima, independent of the simulator.
//! - [`optimize`]: work maximization over measurement bases and SU(4) dilations.

pub mod analytic;
pub mod engine;
pub mod error;
pub mod optimize;
pub mod qmat;

pub use engine::{
    run_conventional_cycle, run_povm_cycle, run_pvm_cycle, CycleRecord, DriveSpec, EngineParams,
    MeasurementBasis, PovmSpec,
};
pub use error::{OttoError, Result};
pub use optimize::{OptResult, OptimizerConfig, Su4Point};
pub use qmat::{ComplexMatrix, DensityMatrix, UnitaryMatrix, C64};
