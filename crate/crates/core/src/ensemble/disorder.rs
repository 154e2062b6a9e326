use std::f64::consts::PI;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::quadrature::gauss_legendre_on;
use crate::error::{invalid, Result};

pub const DEFAULT_NODES: usize = 64;
pub const MIN_NODES: usize = 8;

/// Gaussian tails beyond this many standard deviations carry less than
/// `e^{-72}` of the mass and are dropped from the integration interval.
const GAUSSIAN_CUTOFF_SIGMAS: f64 = 12.0;

/// Distribution of the misalignment angle on `[0, π]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum DisorderKind {
    /// Zero-mean Gaussian of variance `sigma2`, cut to `[0, π]` and
    /// renormalised there.
    TruncatedGaussian { sigma2: f64 },
    /// Uniform on `[0, π]`.
    Flat,
    /// All of the mass at one angle.
    Delta { theta: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DisorderSpec {
    pub kind: DisorderKind,
    pub nodes: usize,
}

impl DisorderSpec {
    pub fn new(kind: DisorderKind, nodes: usize) -> Result<Self> {
        match kind {
            DisorderKind::TruncatedGaussian { sigma2 } if !(sigma2.is_finite() && sigma2 > 0.0) => {
                return Err(invalid(format!("sigma2 must be positive, got {sigma2}")));
            }
            DisorderKind::Delta { theta } if !(0.0..=PI).contains(&theta) => {
                return Err(invalid(format!("theta must lie in [0, pi], got {theta}")));
            }
            _ => {}
        }
        if nodes < MIN_NODES {
            return Err(invalid(format!("at least {MIN_NODES} quadrature nodes are required, got {nodes}")));
        }
        Ok(Self { kind, nodes })
    }

    pub fn gaussian(sigma2: f64) -> Result<Self> {
        Self::new(DisorderKind::TruncatedGaussian { sigma2 }, DEFAULT_NODES)
    }

    pub fn flat() -> Self {
        Self { kind: DisorderKind::Flat, nodes: DEFAULT_NODES }
    }

    pub fn delta(theta: f64) -> Result<Self> {
        Self::new(DisorderKind::Delta { theta }, DEFAULT_NODES)
    }

    pub fn with_nodes(self, nodes: usize) -> Result<Self> {
        Self::new(self.kind, nodes)
    }

    /// Angles and normalised weights, angles ascending. The weights sum to
    /// one in the same arithmetic that evaluates the average, so constants
    /// average exactly. A delta collapses to a single node of weight one.
    pub fn quadrature(&self) -> Vec<(f64, f64)> {
        let mut q = match self.kind {
            DisorderKind::Delta { theta } => return vec![(theta, 1.0)],
            DisorderKind::Flat => gauss_legendre_on(self.nodes, 0.0, PI),
            DisorderKind::TruncatedGaussian { sigma2 } => {
                let upper = (GAUSSIAN_CUTOFF_SIGMAS * sigma2.sqrt()).min(PI);
                let mut q = gauss_legendre_on(self.nodes, 0.0, upper);
                for (theta, w) in &mut q {
                    *w *= (-*theta * *theta / (2.0 * sigma2)).exp();
                }
                q
            }
        };
        let total: f64 = q.iter().map(|p| p.1).sum();
        for p in &mut q {
            p.1 /= total;
        }
        q
    }
}

impl fmt::Display for DisorderKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DisorderKind::TruncatedGaussian { sigma2 } => {
                write!(f, "gaussian(sigma2={sigma2}, truncated to [0,pi], renormalized)")
            }
            DisorderKind::Flat => write!(f, "flat[0,pi]"),
            DisorderKind::Delta { theta } => write!(f, "delta(theta={theta})"),
        }
    }
}

/// `∫ G(θ) f(θ) dθ` by the fixed quadrature of `spec`.
pub fn disorder_average<F>(f: F, spec: &DisorderSpec) -> f64
where
    F: Fn(f64) -> f64 + Sync,
{
    let q = spec.quadrature();
    let values: Vec<f64> = q.par_iter().map(|&(theta, _)| f(theta)).collect();
    q.iter().zip(&values).map(|(&(_, w), v)| w * v).sum()
}

/// Averages `N` outputs at once. Nodes run in parallel; the weighted sum
/// runs in node order, so the result does not depend on the thread count.
pub fn disorder_average_many<const N: usize, F>(f: F, spec: &DisorderSpec) -> Result<[f64; N]>
where
    F: Fn(f64) -> Result<[f64; N]> + Sync,
{
    let q = spec.quadrature();
    let values: Vec<[f64; N]> = q.par_iter().map(|&(theta, _)| f(theta)).collect::<Result<_>>()?;
    let mut acc = [0.0; N];
    for (&(_, w), v) in q.iter().zip(&values) {
        for k in 0..N {
            acc[k] += w * v[k];
        }
    }
    Ok(acc)
}
