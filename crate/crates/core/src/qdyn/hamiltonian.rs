use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::PauliVector;
use crate::error::{invalid, Result};

/// Static splitting `omega0` along z plus a drive axis tilted by `theta`
/// towards x.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HamiltonianSpec {
    omega0: f64,
    theta: f64,
    sin_theta: f64,
    cos_theta: f64,
}

impl HamiltonianSpec {
    /// `theta` must lie in `[0, π]` and `omega0` must be positive.
    ///
    /// The endpoints are snapped so that `θ = π` gives an exactly
    /// anti-collinear drive (`sin θ = 0`); `f64::sin(PI)` is not zero.
    pub fn new(omega0: f64, theta: f64) -> Result<Self> {
        if !(omega0.is_finite() && omega0 > 0.0) {
            return Err(invalid(format!("omega0 must be positive, got {omega0}")));
        }
        if !(0.0..=PI).contains(&theta) {
            return Err(invalid(format!("theta must lie in [0, pi], got {theta}")));
        }
        let (sin_theta, cos_theta) = if theta == PI { (0.0, -1.0) } else { theta.sin_cos() };
        Ok(Self { omega0, theta, sin_theta, cos_theta })
    }

    /// Unit splitting, the convention used throughout the crate.
    pub fn with_theta(theta: f64) -> Result<Self> {
        Self::new(1.0, theta)
    }

    pub fn omega0(&self) -> f64 {
        self.omega0
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// True when the drive commutes with the static field (`θ ∈ {0, π}`).
    pub fn is_collinear(&self) -> bool {
        self.sin_theta == 0.0
    }

    /// `H(λ) = ω₀/2 σz + λ (cos θ σz + sin θ σx)`
    pub fn hamiltonian_at(&self, lambda: f64) -> PauliVector {
        PauliVector::new(
            0.0,
            lambda * self.sin_theta,
            0.0,
            0.5 * self.omega0 + lambda * self.cos_theta,
        )
    }

    /// Instantaneous level spacing `ω(λ)`.
    pub fn gap(&self, lambda: f64) -> f64 {
        let z = 0.5 * self.omega0 + lambda * self.cos_theta;
        let x = lambda * self.sin_theta;
        2.0 * z.hypot(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn aligned_drive() {
        let h = HamiltonianSpec::with_theta(0.0).unwrap();
        assert_eq!(h.hamiltonian_at(0.5), PauliVector::new(0.0, 0.0, 0.0, 1.0));
        assert_eq!(h.gap(0.5), 2.0);
    }

    #[test]
    fn perpendicular_drive() {
        let h = HamiltonianSpec::with_theta(PI / 2.0).unwrap();
        let v = h.hamiltonian_at(0.5);
        assert!((v.cx - 0.5).abs() < 1e-16);
        assert!((v.cz - 0.5).abs() < 1e-16);
        assert!((h.gap(0.5) - 2.0_f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn zero_field_is_theta_independent() {
        for theta in [0.0, 0.3, PI / 2.0, 2.0, PI] {
            let h = HamiltonianSpec::with_theta(theta).unwrap();
            assert_eq!(h.hamiltonian_at(0.0), PauliVector::new(0.0, 0.0, 0.0, 0.5));
            assert_eq!(h.gap(0.0), 1.0);
        }
    }

    #[test]
    fn anti_collinear_fields_subtract() {
        let h = HamiltonianSpec::with_theta(PI).unwrap();
        assert!(h.is_collinear());
        assert_eq!(h.gap(0.25), 0.5);
        assert_eq!(h.hamiltonian_at(0.25).cx, 0.0);
    }

    #[test]
    fn gap_closed_form() {
        let h = HamiltonianSpec::with_theta(PI / 5.0).unwrap();
        let (s, c) = (PI / 5.0).sin_cos();
        let expected = 2.0 * ((0.5 + 0.3 * c).powi(2) + (0.3 * s).powi(2)).sqrt();
        assert!((h.gap(0.3) - expected).abs() < 1e-15);
        // 2 sqrt(0.25 + 0.3 cos θ + 0.09)
        assert!((h.gap(0.3) - 1.526_702_457_340_636).abs() < 1e-12);
        assert!((h.gap(0.3) - h.hamiltonian_at(0.3).gap()).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(HamiltonianSpec::new(0.0, 0.1).is_err());
        assert!(HamiltonianSpec::new(1.0, -0.1).is_err());
        assert!(HamiltonianSpec::new(1.0, 3.2).is_err());
        assert!(HamiltonianSpec::new(f64::NAN, 0.1).is_err());
    }
}
