//! Exact simulation of a finite-time quantum Otto engine whose working
//! substance is a driven qubit with a misaligned control field.
//!
//! Energy and time are measured in units of the static splitting `omega0`.
//! The crate is organised bottom-up:
//!
//! * [`qdyn`]: Pauli algebra, ramped Hamiltonians and time-ordered propagators.
//! * [`thermo`]: Gibbs states, entropies, work/heat bookkeeping and inner friction.
//! * [`otto`]: the four-stroke cycle and its figures of merit.
//! * [`ensemble`]: averages over misalignment disorder, time sweeps and
//!   efficiency at maximum power.
//! * [`optics`]: compilation of a cycle into waveplate rotations and
//!   dephasing steps for a polarization qubit.
//! * [`presets`]: the parameter sets of the standard benchmark tables.

pub mod ensemble;
pub mod error;
mod numfmt;
pub mod optics;
pub mod otto;
pub mod presets;
pub mod qdyn;
pub mod thermo;

pub use error::{Error, Result};
pub use numfmt::format_sig;
pub use qdyn::{
    DensityMatrix, Direction, HamiltonianSpec, Matrix2, PauliVector, PropagateOptions,
    RampProtocol,
};
pub use thermo::{FrictionReport, ThermalContext};
pub use otto::{CyclePoint, CycleReport, CycleSpec};
pub use ensemble::{DisorderKind, DisorderSpec, MaxPowerResult, SweepSpec};
pub use optics::{EulerAngles, OpticalProgram, ThermalizationPlan};
