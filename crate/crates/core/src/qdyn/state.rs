use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{Matrix2, PauliVector};
use crate::error::{invalid, Error, Result};

/// Gaps below this are treated as a level crossing.
pub const GAP_FLOOR: f64 = 1e-14;

const STATE_TOL: f64 = 1e-12;

/// Qubit density matrix: Hermitian, unit trace, positive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DensityMatrix(Matrix2);

impl DensityMatrix {
    /// Validates Hermiticity, trace and spectrum to `1e-12`.
    pub fn new(m: Matrix2) -> Result<Self> {
        if !m.is_finite() {
            return Err(invalid("density matrix has non-finite entries"));
        }
        let herm = m.max_abs_diff(&m.adjoint());
        if herm > STATE_TOL {
            return Err(invalid(format!("density matrix not Hermitian (deviation {herm:.3e})")));
        }
        let tr = m.trace();
        if (tr.re - 1.0).abs() > STATE_TOL || tr.im.abs() > STATE_TOL {
            return Err(invalid(format!("density matrix trace {tr} is not 1")));
        }
        let rho = Self(m);
        let (lo, hi) = rho.eigenvalues();
        if lo < -STATE_TOL || hi > 1.0 + STATE_TOL {
            return Err(invalid(format!("density matrix spectrum ({lo}, {hi}) leaves [0, 1]")));
        }
        Ok(rho)
    }

    /// `(I + r·σ)/2`; requires `|r| ≤ 1`.
    pub fn from_bloch(r: [f64; 3]) -> Result<Self> {
        let len = (r[0] * r[0] + r[1] * r[1] + r[2] * r[2]).sqrt();
        if !(len <= 1.0 + STATE_TOL) {
            return Err(invalid(format!("Bloch vector length {len} exceeds 1")));
        }
        Ok(Self(PauliVector::new(0.5, 0.5 * r[0], 0.5 * r[1], 0.5 * r[2]).to_matrix()))
    }

    /// `diag(p, 1 - p)` in the computational basis.
    pub fn diagonal(p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(invalid(format!("population {p} outside [0, 1]")));
        }
        Ok(Self(Matrix2::real_diag(p, 1.0 - p)))
    }

    pub fn maximally_mixed() -> Self {
        Self(Matrix2::real_diag(0.5, 0.5))
    }

    /// Projector onto a normalised state vector.
    pub fn pure(psi: [Complex64; 2]) -> Result<Self> {
        let norm = (psi[0].norm_sqr() + psi[1].norm_sqr()).sqrt();
        if !(norm > 0.0) {
            return Err(invalid("zero state vector"));
        }
        let (a, b) = (psi[0] / norm, psi[1] / norm);
        Ok(Self(Matrix2::new(a * a.conj(), a * b.conj(), b * a.conj(), b * b.conj())))
    }

    /// Wraps a matrix that is known to be a legal state up to rounding.
    pub(crate) fn from_trusted(m: Matrix2) -> Self {
        Self(hermitian_part(&m))
    }

    pub fn matrix(&self) -> &Matrix2 {
        &self.0
    }

    pub fn bloch(&self) -> [f64; 3] {
        let c = PauliVector::from_matrix(&self.0);
        [2.0 * c.cx, 2.0 * c.cy, 2.0 * c.cz]
    }

    pub fn bloch_length(&self) -> f64 {
        let [x, y, z] = self.bloch();
        (x * x + y * y + z * z).sqrt()
    }

    /// `(smaller, larger)` eigenvalue. The small one is taken from the
    /// determinant so that nearly pure states keep their tail weight.
    pub fn eigenvalues(&self) -> (f64, f64) {
        let hi = 0.5 * (1.0 + self.bloch_length());
        let [[a, b], [_, d]] = self.0.m;
        let det = a.re * d.re - b.norm_sqr();
        let lo = if det > 0.0 && hi > 0.0 { det / hi } else { 1.0 - hi };
        (lo, hi)
    }

    /// `ρ → U ρ U†`.
    pub fn evolve(&self, u: &Matrix2) -> Self {
        Self::from_trusted(u.conjugate(&self.0))
    }

    /// `Tr[ρ H]`
    pub fn energy(&self, h: &PauliVector) -> f64 {
        let [x, y, z] = self.bloch();
        h.c0 + h.cx * x + h.cy * y + h.cz * z
    }

    /// Population of the ground state of `h`.
    pub fn ground_population(&self, h: &PauliVector) -> Result<f64> {
        let n = h.direction().ok_or(Error::DegenerateGap { gap: 0.0 })?;
        let r = self.bloch();
        Ok(0.5 * (1.0 - (r[0] * n[0] + r[1] * n[1] + r[2] * n[2])))
    }

    pub fn purity(&self) -> f64 {
        let l = self.bloch_length();
        0.5 * (1.0 + l * l)
    }

    pub fn max_abs_diff(&self, other: &DensityMatrix) -> f64 {
        self.0.max_abs_diff(&other.0)
    }
}

fn hermitian_part(m: &Matrix2) -> Matrix2 {
    (*m + m.adjoint()).scale(Complex64::new(0.5, 0.0))
}

/// `n = Tr[ρ H] / ω` with `ω` the gap of `h`. Lies in `[-1/2, 1/2]` for
/// traceless `h`; `-1/2` in the ground state.
pub fn polarization(rho: &DensityMatrix, h: &PauliVector) -> Result<f64> {
    let gap = h.gap();
    if gap < GAP_FLOOR {
        return Err(Error::DegenerateGap { gap });
    }
    Ok(rho.energy(h) / gap)
}
