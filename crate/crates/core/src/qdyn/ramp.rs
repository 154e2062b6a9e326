use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Direction {
    Forward,
    Backward,
}

/// Linear field ramp for one stroke:
/// `λ(t) = lambda_start ± α ω₀ t / 2`, `0 ≤ t ≤ duration`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RampProtocol {
    pub alpha: f64,
    pub duration: f64,
    pub direction: Direction,
    pub lambda_start: f64,
}

impl RampProtocol {
    pub fn new(alpha: f64, duration: f64, direction: Direction, lambda_start: f64) -> Result<Self> {
        if !(alpha.is_finite() && alpha > 0.0) {
            return Err(invalid(format!("ramp rate must be positive, got {alpha}")));
        }
        if !(duration.is_finite() && duration >= 0.0) {
            return Err(invalid(format!("ramp duration must be non-negative, got {duration}")));
        }
        if !lambda_start.is_finite() {
            return Err(invalid("ramp start amplitude must be finite"));
        }
        Ok(Self { alpha, duration, direction, lambda_start })
    }

    /// Upward ramp from zero field.
    pub fn forward(alpha: f64, duration: f64) -> Result<Self> {
        Self::new(alpha, duration, Direction::Forward, 0.0)
    }

    /// Downward ramp from `lambda_star` that ends exactly at zero field.
    pub fn backward_to_zero(alpha: f64, lambda_star: f64, omega0: f64) -> Result<Self> {
        let duration = 2.0 * lambda_star / (alpha * omega0);
        Self::new(alpha, duration, Direction::Backward, lambda_star)
    }

    fn signed_rate(&self, omega0: f64) -> f64 {
        let rate = 0.5 * self.alpha * omega0;
        match self.direction {
            Direction::Forward => rate,
            Direction::Backward => -rate,
        }
    }

    pub fn lambda_at(&self, t: f64, omega0: f64) -> f64 {
        self.lambda_start + self.signed_rate(omega0) * t
    }

    pub fn lambda_end(&self, omega0: f64) -> f64 {
        self.lambda_at(self.duration, omega0)
    }

    /// The portion of this ramp on `[t0, t0 + duration]`.
    pub fn segment(&self, t0: f64, duration: f64, omega0: f64) -> Self {
        Self { duration, lambda_start: self.lambda_at(t0, omega0), ..*self }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn forward_is_linear() {
        let r = RampProtocol::forward(0.4, 10.0).unwrap();
        assert_eq!(r.lambda_at(0.0, 1.0), 0.0);
        assert!((r.lambda_at(5.0, 1.0) - 1.0).abs() < 1e-15);
        assert!((r.lambda_end(2.0) - 4.0).abs() < 1e-15);
    }

    #[test]
    fn matched_backward_ends_at_zero() {
        let alpha = 1.3;
        let lambda_star = RampProtocol::forward(alpha, 7.0).unwrap().lambda_end(1.0);
        let b = RampProtocol::backward_to_zero(alpha, lambda_star, 1.0).unwrap();
        assert!((b.duration - 7.0).abs() < 1e-14);
        assert!(b.lambda_end(1.0).abs() < 1e-15);
    }

    #[test]
    fn segment_continues_the_ramp() {
        let r = RampProtocol::new(2.0, 3.0, Direction::Backward, 3.0).unwrap();
        let s = r.segment(1.0, 0.5, 1.0);
        assert_eq!(s.lambda_start, 2.0);
        assert_eq!(s.lambda_end(1.0), r.lambda_at(1.5, 1.0));
    }

    #[test]
    fn rejects_bad_ramps() {
        assert!(RampProtocol::forward(0.0, 1.0).is_err());
        assert!(RampProtocol::forward(1.0, -1.0).is_err());
        assert!(RampProtocol::new(1.0, 1.0, Direction::Forward, f64::INFINITY).is_err());
    }
}
