use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::disorder::{disorder_average_many, DisorderSpec};
use crate::error::{invalid, Error, Result};
use crate::otto::{run_cycle, CycleSpec, DEFAULT_TAU_ISO};
use crate::qdyn::{HamiltonianSpec, PropagateOptions};

/// Everything in a [`CycleSpec`] except the angle and the stroke time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CycleTemplate {
    pub omega0: f64,
    pub alpha: f64,
    pub tau_iso: f64,
    pub beta_c: f64,
    pub beta_h: f64,
}

impl CycleTemplate {
    /// Unit splitting and rate, default isochore time.
    pub fn new(beta_c: f64, beta_h: f64) -> Self {
        Self { omega0: 1.0, alpha: 1.0, tau_iso: DEFAULT_TAU_ISO, beta_c, beta_h }
    }

    pub fn with_tau_iso(self, tau_iso: f64) -> Self {
        Self { tau_iso, ..self }
    }

    /// The cycle at angle `theta` whose stroke time is `alpha_t_tot / α`.
    pub fn at(&self, theta: f64, alpha_t_tot: f64) -> Result<CycleSpec> {
        let h = HamiltonianSpec::new(self.omega0, theta)?;
        CycleSpec::new(h, self.alpha, alpha_t_tot / self.alpha, self.tau_iso, self.beta_c, self.beta_h)
    }

    pub fn validate(&self) -> Result<()> {
        self.at(0.0, 1.0).map(|_| ())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    /// Values of `α τ_ad`, strictly ascending and positive.
    pub grid: Vec<f64>,
    pub template: CycleTemplate,
    pub disorder: DisorderSpec,
    pub tol: f64,
}

impl SweepSpec {
    pub fn new(grid: Vec<f64>, template: CycleTemplate, disorder: DisorderSpec) -> Result<Self> {
        let spec = Self { grid, template, disorder, tol: PropagateOptions::DEFAULT_TOL };
        spec.validate()?;
        Ok(spec)
    }

    pub fn with_tol(self, tol: f64) -> Result<Self> {
        let spec = Self { tol, ..self };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        self.template.validate()?;
        if !(self.tol > 0.0) {
            return Err(invalid(format!("tolerance must be positive, got {}", self.tol)));
        }
        if let Some(&first) = self.grid.first() {
            if !(first > 0.0) {
                return Err(invalid("time grid must be positive"));
            }
        }
        if self.grid.iter().any(|t| !t.is_finite()) || self.grid.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(invalid("time grid must be finite and strictly ascending"));
        }
        Ok(())
    }
}

/// `n` evenly spaced points from `start` to `stop` inclusive.
pub fn linspace(start: f64, stop: f64, n: usize) -> Vec<f64> {
    match n {
        0 => vec![],
        1 => vec![start],
        _ => {
            let step = (stop - start) / (n - 1) as f64;
            (0..n).map(|i| if i == n - 1 { stop } else { start + step * i as f64 }).collect()
        }
    }
}

/// `n` points from `start` to `stop` inclusive with a constant ratio
/// between neighbours. Both ends must be positive.
pub fn geomspace(start: f64, stop: f64, n: usize) -> Vec<f64> {
    let (a, b) = (start.ln(), stop.ln());
    linspace(a, b, n)
        .into_iter()
        .enumerate()
        .map(|(i, x)| match i {
            0 => start,
            _ if i == n - 1 => stop,
            _ => x.exp(),
        })
        .collect()
}

/// Disorder-averaged figures of merit at one total time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Averages {
    pub w_ex: f64,
    pub power: f64,
    pub p_over_alpha2: f64,
    /// Average of the per-angle efficiencies.
    pub eta: f64,
    pub w_fric: f64,
}

/// Runs the cycle at every quadrature angle and averages.
pub fn average_cycle(
    template: &CycleTemplate,
    disorder: &DisorderSpec,
    alpha_t_tot: f64,
    tol: f64,
) -> Result<Averages> {
    let [w_ex, power, eta, w_fric] = disorder_average_many(
        |theta| {
            let r = run_cycle(&template.at(theta, alpha_t_tot)?, tol)?;
            Ok([r.w_ex, r.power, r.eta, r.w_fric_total])
        },
        disorder,
    )?;
    let alpha2 = template.alpha * template.alpha;
    Ok(Averages { w_ex, power, p_over_alpha2: power / alpha2, eta, w_fric })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub alpha_t_tot: f64,
    pub outcome: Result<Averages>,
}

/// One row per grid point, in grid order. A failure at one point is kept
/// in that row and does not stop the sweep.
pub fn sweep_total_time(spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    spec.validate()?;
    Ok(spec
        .grid
        .par_iter()
        .map(|&t| SweepRow {
            alpha_t_tot: t,
            outcome: average_cycle(&spec.template, &spec.disorder, t, spec.tol),
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PvPoint {
    pub alpha_t_tot: f64,
    pub eta: f64,
    pub power: f64,
}

/// The (η̄, 𝒫̄) curve traced by the time grid. Fails on the first grid
/// point that fails.
pub fn power_efficiency_curve(spec: &SweepSpec) -> Result<Vec<PvPoint>> {
    sweep_total_time(spec)?
        .into_iter()
        .map(|row| {
            row.outcome.map(|a| PvPoint { alpha_t_tot: row.alpha_t_tot, eta: a.eta, power: a.power })
        })
        .collect()
}

pub(crate) fn averages_on_grid(spec: &SweepSpec) -> Result<Vec<Averages>> {
    sweep_total_time(spec)?.into_iter().map(|r| r.outcome).collect()
}

pub(crate) fn require_grid(spec: &SweepSpec, min: usize) -> Result<()> {
    if spec.grid.len() < min {
        return Err(Error::InvalidParameter(format!(
            "time grid needs at least {min} points, got {}",
            spec.grid.len()
        )));
    }
    Ok(())
}
