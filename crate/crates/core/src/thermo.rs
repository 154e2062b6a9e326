//! Thermal states, entropies and the work/heat bookkeeping of strokes.
//!
//! Entropies are in nats. Inner friction is the excess work of a finite-time
//! stroke over the quantum-adiabatic reference in which the populations of
//! the instantaneous eigenstates are carried along unchanged.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::qdyn::{
    propagate, DensityMatrix, HamiltonianSpec, Matrix2, PauliVector, RampProtocol,
};

/// Eigenvalues of a reference state below this make the relative entropy
/// ill-defined.
pub const SUPPORT_FLOOR: f64 = 1e-300;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThermalContext {
    beta: f64,
}

impl ThermalContext {
    pub fn new(beta: f64) -> Result<Self> {
        if !(beta.is_finite() && beta > 0.0) {
            return Err(invalid(format!("inverse temperature must be positive, got {beta}")));
        }
        Ok(Self { beta })
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }
}

/// Ground-state weight `1 / (1 + e^{-βω})` of a two-level Gibbs state.
pub fn ground_weight(beta: f64, omega: f64) -> f64 {
    1.0 / (1.0 + (-beta * omega).exp())
}

/// Excited-state weight, computed without cancellation at low temperature.
pub fn excited_weight(beta: f64, omega: f64) -> f64 {
    1.0 / (1.0 + (beta * omega).exp())
}

/// `e^{-βH} / Tr e^{-βH}`
pub fn gibbs_state(h: &PauliVector, ctx: &ThermalContext) -> DensityMatrix {
    let p1 = excited_weight(ctx.beta, h.gap());
    // A vanishing field has no preferred basis and gives I/2 anyway.
    let basis = h.eigenbasis().unwrap_or_else(|_| Matrix2::identity());
    // Built in the eigenbasis so the small weight keeps full relative precision.
    DensityMatrix::from_trusted(basis.conjugate(&Matrix2::real_diag(1.0 - p1, p1)))
}

fn xlogx(x: f64) -> f64 {
    if x > 0.0 {
        x * x.ln()
    } else {
        0.0
    }
}

/// `S(ρ) = -Tr ρ ln ρ`
pub fn von_neumann_entropy(rho: &DensityMatrix) -> f64 {
    let (lo, hi) = rho.eigenvalues();
    -(xlogx(lo) + xlogx(hi))
}

/// Binary entropy of a population split, in nats.
pub fn binary_entropy(p: f64) -> f64 {
    -(xlogx(p) + xlogx(1.0 - p))
}

/// `D(ρ‖σ) = Tr ρ (ln ρ - ln σ)` from the spectral decompositions of both
/// states.
pub fn relative_entropy(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    let (s_lo, s_hi) = sigma.eigenvalues();
    if s_lo < SUPPORT_FLOOR {
        return Err(Error::SupportViolation { eigenvalue: s_lo });
    }
    // Weight of ρ on the eigenvectors of σ: (1 ± r·ŝ)/2.
    let r = rho.bloch();
    let s = sigma.bloch();
    let s_len = sigma.bloch_length();
    let overlap = if s_len > 0.0 {
        (r[0] * s[0] + r[1] * s[1] + r[2] * s[2]) / s_len
    } else {
        0.0
    };
    let w_hi = 0.5 * (1.0 + overlap);
    let w_lo = 0.5 * (1.0 - overlap);
    let cross = w_hi * s_hi.ln() + w_lo * s_lo.ln();
    let d = -von_neumann_entropy(rho) - cross;
    Ok(d.max(0.0))
}

/// `W = Tr[H_f ρ_f] - Tr[H_i ρ_i]`, positive when work is done on the system.
pub fn stroke_work(
    h_i: &PauliVector,
    rho_i: &DensityMatrix,
    h_f: &PauliVector,
    rho_f: &DensityMatrix,
) -> f64 {
    rho_f.energy(h_f) - rho_i.energy(h_i)
}

/// Heat absorbed on an isochore at spacing `omega`: `ω (p0_i - p0_f)`.
pub fn isochore_heat(omega: f64, p0_initial: f64, p0_final: f64) -> f64 {
    omega * (p0_initial - p0_final)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrictionReport {
    /// `D(ρ₂‖ρ₀)` in nats.
    pub relative_entropy: f64,
    /// Work done on the system over the closed field loop.
    pub w_fric: f64,
    /// Heat taken up when ρ₂ rethermalises to ρ₀.
    pub q_rethermalize: f64,
}

/// Ramp up then back down from a Gibbs state and measure how far the
/// system ends from where it started.
pub fn loop_friction(
    spec: &HamiltonianSpec,
    forward: &RampProtocol,
    backward: &RampProtocol,
    ctx: &ThermalContext,
    tol: f64,
) -> Result<FrictionReport> {
    let omega0 = spec.omega0();
    let start = forward.lambda_start;
    let turn = forward.lambda_end(omega0);
    let scale = start.abs().max(turn.abs()).max(1.0);
    if (backward.lambda_start - turn).abs() > 1e-12 * scale {
        return Err(invalid("backward ramp must start where the forward ramp ends"));
    }
    if (backward.lambda_end(omega0) - start).abs() > 1e-9 * scale {
        return Err(invalid("backward ramp must return the field to its initial value"));
    }
    let h0 = spec.hamiltonian_at(start);
    let rho0 = gibbs_state(&h0, ctx);
    let u_f = propagate(spec, forward, tol)?;
    let u_b = propagate(spec, backward, tol)?;
    let rho2 = rho0.evolve(&(u_b * u_f));
    let w_fric = rho2.energy(&h0) - rho0.energy(&h0);
    Ok(FrictionReport {
        relative_entropy: relative_entropy(&rho2, &rho0)?,
        w_fric,
        q_rethermalize: -w_fric,
    })
}

/// Energy at the end of a stroke in the quantum-adiabatic limit, starting
/// from `rho_i`. Populations ride along the continuously connected bands;
/// for a collinear drive the bands are the fixed σz eigenstates.
pub(crate) fn adiabatic_final_energy(
    spec: &HamiltonianSpec,
    h_i: &PauliVector,
    h_f: &PauliVector,
    rho_i: &DensityMatrix,
) -> Result<f64> {
    if spec.is_collinear() {
        return Ok(rho_i.energy(h_f));
    }
    let p0 = rho_i.ground_population(h_i)?;
    let (e0, e1) = h_f.eigenvalues();
    Ok(p0 * e0 + (1.0 - p0) * e1)
}

/// Excess work of a stroke with propagator `u` over its adiabatic reference.
pub(crate) fn friction_of(
    spec: &HamiltonianSpec,
    h_i: &PauliVector,
    h_f: &PauliVector,
    rho_i: &DensityMatrix,
    u: &Matrix2,
) -> Result<f64> {
    let actual = rho_i.evolve(u).energy(h_f);
    Ok(actual - adiabatic_final_energy(spec, h_i, h_f, rho_i)?)
}

/// `W_fric = W_actual - W_ideal` for one stroke that starts in the Gibbs
/// state of its initial Hamiltonian.
pub fn stroke_friction(
    spec: &HamiltonianSpec,
    ramp: &RampProtocol,
    ctx_start: &ThermalContext,
    tol: f64,
) -> Result<f64> {
    let omega0 = spec.omega0();
    let h_i = spec.hamiltonian_at(ramp.lambda_start);
    let h_f = spec.hamiltonian_at(ramp.lambda_end(omega0));
    let rho_i = gibbs_state(&h_i, ctx_start);
    let u = propagate(spec, ramp, tol)?;
    friction_of(spec, &h_i, &h_f, &rho_i, &u)
}
