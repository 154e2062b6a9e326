use thiserror::Error;

/// Failures reported by the simulator.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("propagator did not converge: {steps} steps, last refinement change {change:.3e}")]
    NonConvergence { steps: usize, change: f64 },

    #[error("energy gap {gap:.3e} is degenerate; polarization undefined")]
    DegenerateGap { gap: f64 },

    #[error("reference state has eigenvalue {eigenvalue:.3e} below the support threshold")]
    SupportViolation { eigenvalue: f64 },

    #[error("matrix is not unitary (max deviation {deviation:.3e})")]
    NotUnitary { deviation: f64 },

    #[error("population {population} outside [1/2, 1)")]
    DomainViolation { population: f64 },

    #[error("thermalization infeasible{}: target needs Bloch radius larger by {deficit:.3e}",
        stroke.map(|s| format!(" at stroke {s}")).unwrap_or_default())]
    Infeasible { deficit: f64, stroke: Option<&'static str> },

    #[error("maximum lies on the grid boundary at alpha*t = {at}")]
    MaxOnBoundary { at: f64 },

    #[error("extractable work does not change sign on the grid")]
    NoSignChange,
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}
