use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::Matrix2;
use crate::error::{Error, Result};

/// Hermitian operator `c0·I + cx·σx + cy·σy + cz·σz` stored by its real
/// Pauli coefficients. Every Hamiltonian in the crate lives here.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct PauliVector {
    pub c0: f64,
    pub cx: f64,
    pub cy: f64,
    pub cz: f64,
}

impl PauliVector {
    pub const fn new(c0: f64, cx: f64, cy: f64, cz: f64) -> Self {
        Self { c0, cx, cy, cz }
    }

    /// Length of the traceless part, `|c|`.
    pub fn norm(&self) -> f64 {
        (self.cx * self.cx + self.cy * self.cy + self.cz * self.cz).sqrt()
    }

    /// Level spacing `2|c|`.
    pub fn gap(&self) -> f64 {
        2.0 * self.norm()
    }

    /// `(c0 - |c|, c0 + |c|)`
    pub fn eigenvalues(&self) -> (f64, f64) {
        let r = self.norm();
        (self.c0 - r, self.c0 + r)
    }

    pub fn vector(&self) -> [f64; 3] {
        [self.cx, self.cy, self.cz]
    }

    pub fn to_matrix(&self) -> Matrix2 {
        Matrix2::new(
            Complex64::new(self.c0 + self.cz, 0.0),
            Complex64::new(self.cx, -self.cy),
            Complex64::new(self.cx, self.cy),
            Complex64::new(self.c0 - self.cz, 0.0),
        )
    }

    /// Pauli coefficients of the Hermitian part of `m`.
    pub fn from_matrix(m: &Matrix2) -> Self {
        let [[a, b], [c, d]] = m.m;
        Self {
            c0: 0.5 * (a.re + d.re),
            cx: 0.5 * (b.re + c.re),
            cy: 0.5 * (c.im - b.im),
            cz: 0.5 * (a.re - d.re),
        }
    }

    /// Unit vector along the traceless part, `None` when it vanishes.
    pub fn direction(&self) -> Option<[f64; 3]> {
        let r = self.norm();
        (r > 0.0).then(|| [self.cx / r, self.cy / r, self.cz / r])
    }

    /// Unitary whose first column is the ground state and whose second
    /// column is the excited state, so `B |0⟩` is the ground state.
    pub fn eigenbasis(&self) -> Result<Matrix2> {
        let [nx, ny, nz] = self.direction().ok_or(Error::DegenerateGap { gap: 0.0 })?;
        // polar angle chi and azimuth phi of the field direction
        let half_cos = ((1.0 + nz) / 2.0).max(0.0).sqrt();
        let half_sin = ((1.0 - nz) / 2.0).max(0.0).sqrt();
        let transverse = nx.hypot(ny);
        let phase = if transverse > 0.0 {
            Complex64::new(nx / transverse, ny / transverse)
        } else {
            Complex64::new(1.0, 0.0)
        };
        let ground = [-phase.conj() * half_sin, Complex64::new(half_cos, 0.0)];
        let excited = [Complex64::new(half_cos, 0.0), phase * half_sin];
        Ok(Matrix2::new(ground[0], excited[0], ground[1], excited[1]))
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self::new(self.c0 * s, self.cx * s, self.cy * s, self.cz * s)
    }
}
