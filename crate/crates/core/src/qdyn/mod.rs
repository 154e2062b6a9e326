//! Two-level dynamics under `H(λ) = ω₀/2 σz + λ (cos θ σz + sin θ σx)`.

mod hamiltonian;
mod matrix;
mod pauli;
mod propagate;
mod ramp;
mod state;

pub use hamiltonian::HamiltonianSpec;
pub use matrix::Matrix2;
pub use pauli::PauliVector;
pub use propagate::{
    expm_unitary, propagate, propagate_fixed, propagate_with, sample_polarization,
    PolarizationSample, PropagateOptions, Propagation,
};
pub use ramp::{Direction, RampProtocol};
pub use state::{polarization, DensityMatrix, GAP_FLOOR};
