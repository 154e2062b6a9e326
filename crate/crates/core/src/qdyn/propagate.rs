use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{polarization, DensityMatrix, HamiltonianSpec, Matrix2, PauliVector, RampProtocol};
use crate::error::{invalid, Error, Result};

/// `exp(-i H dt)` in closed form:
/// `e^{-i c0 dt} [cos(|c| dt) I - i sin(|c| dt) ĉ·σ]`.
pub fn expm_unitary(h: &PauliVector, dt: f64) -> Matrix2 {
    let r = h.norm();
    let x = r * dt;
    let cos = x.cos();
    // sin(|c| dt) / |c|, continuous through |c| = 0
    let s = if x.abs() < 1e-8 { dt * (1.0 - x * x / 6.0) } else { x.sin() / r };
    let u = Matrix2::new(
        Complex64::new(cos, -s * h.cz),
        Complex64::new(-s * h.cy, -s * h.cx),
        Complex64::new(s * h.cy, -s * h.cx),
        Complex64::new(cos, s * h.cz),
    );
    if h.c0 == 0.0 {
        u
    } else {
        u.scale(Complex64::from_polar(1.0, -h.c0 * dt))
    }
}

/// Nearest unitary with the same determinant phase, for 2×2 matrices that
/// are unitary up to accumulated rounding.
fn reunitarize(u: &Matrix2) -> Matrix2 {
    let root = u.det().sqrt();
    if root.norm() == 0.0 {
        return *u;
    }
    let v = u.scale(root.inv());
    let mut a = 0.5 * (v.get(0, 0) + v.get(1, 1).conj());
    let mut b = 0.5 * (v.get(0, 1) - v.get(1, 0).conj());
    let n = (a.norm_sqr() + b.norm_sqr()).sqrt();
    a /= n;
    b /= n;
    Matrix2::new(a, b, -b.conj(), a.conj()).scale(root / root.norm())
}

/// Time-ordered product of `steps` midpoint-rule step unitaries.
pub fn propagate_fixed(spec: &HamiltonianSpec, ramp: &RampProtocol, steps: usize) -> Matrix2 {
    if ramp.duration == 0.0 || steps == 0 {
        return Matrix2::identity();
    }
    let omega0 = spec.omega0();
    let dt = ramp.duration / steps as f64;
    let mut u = Matrix2::identity();
    for k in 0..steps {
        let t_mid = (k as f64 + 0.5) * dt;
        let h = spec.hamiltonian_at(ramp.lambda_at(t_mid, omega0));
        u = expm_unitary(&h, dt) * u;
    }
    reunitarize(&u)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PropagateOptions {
    /// Refinement stops once successive step doublings change the
    /// propagator by less than this, entrywise.
    pub tol: f64,
    pub initial_steps: usize,
    pub max_steps: usize,
}

impl PropagateOptions {
    pub const DEFAULT_TOL: f64 = 1e-10;
    pub const DEFAULT_MAX_STEPS: usize = 1 << 24;

    pub fn with_tol(tol: f64) -> Self {
        Self { tol, ..Self::default() }
    }
}

impl Default for PropagateOptions {
    fn default() -> Self {
        Self { tol: Self::DEFAULT_TOL, initial_steps: 8, max_steps: Self::DEFAULT_MAX_STEPS }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Propagation {
    pub unitary: Matrix2,
    pub steps: usize,
    /// Entrywise change of the last refinement.
    pub change: f64,
}

/// Adaptive propagation: the step count doubles until the propagator
/// settles to `opts.tol`.
pub fn propagate_with(
    spec: &HamiltonianSpec,
    ramp: &RampProtocol,
    opts: &PropagateOptions,
) -> Result<Propagation> {
    if !(opts.tol > 0.0) {
        return Err(invalid(format!("propagation tolerance must be positive, got {}", opts.tol)));
    }
    if ramp.duration == 0.0 {
        return Ok(Propagation { unitary: Matrix2::identity(), steps: 0, change: 0.0 });
    }
    let mut steps = opts.initial_steps.max(1);
    let mut prev = propagate_fixed(spec, ramp, steps);
    let mut change = f64::INFINITY;
    while steps * 2 <= opts.max_steps {
        steps *= 2;
        let next = propagate_fixed(spec, ramp, steps);
        change = next.max_abs_diff(&prev);
        if change < opts.tol {
            return Ok(Propagation { unitary: next, steps, change });
        }
        prev = next;
    }
    Err(Error::NonConvergence { steps, change })
}

/// `U = 𝒯 exp(-i ∫ H(λ(t)) dt)` over the ramp, refined to `tol`.
pub fn propagate(spec: &HamiltonianSpec, ramp: &RampProtocol, tol: f64) -> Result<Matrix2> {
    propagate_with(spec, ramp, &PropagateOptions::with_tol(tol)).map(|p| p.unitary)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PolarizationSample {
    pub t: f64,
    pub lambda: f64,
    pub omega: f64,
    pub n: f64,
}

/// Polarization `n(t)` at `samples` equally spaced times along the ramp,
/// starting from `rho0`. Returns the samples and the final state.
pub fn sample_polarization(
    spec: &HamiltonianSpec,
    ramp: &RampProtocol,
    rho0: &DensityMatrix,
    samples: usize,
    opts: &PropagateOptions,
) -> Result<(Vec<PolarizationSample>, DensityMatrix)> {
    if samples < 2 {
        return Err(invalid("at least two samples are needed along a ramp"));
    }
    let omega0 = spec.omega0();
    let dt = ramp.duration / (samples - 1) as f64;
    let mut rho = *rho0;
    let mut out = Vec::with_capacity(samples);
    for i in 0..samples {
        if i > 0 {
            let seg = ramp.segment((i - 1) as f64 * dt, dt, omega0);
            rho = rho.evolve(&propagate_with(spec, &seg, opts)?.unitary);
        }
        let t = i as f64 * dt;
        let lambda = ramp.lambda_at(t, omega0);
        let h = spec.hamiltonian_at(lambda);
        out.push(PolarizationSample { t, lambda, omega: h.gap(), n: polarization(&rho, &h)? });
    }
    Ok((out, rho))
}
