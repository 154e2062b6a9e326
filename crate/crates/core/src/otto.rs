//! The four-stroke Otto cycle.
//!
//! Corner 1 is the cold Gibbs state at zero field. The forward ramp 1→2
//! raises the field to `λ* = α ω₀ τ_ad / 2`, the hot isochore 2→3
//! thermalises at `β_h` with the field held at `λ*`, the backward ramp 3→4
//! returns the field to zero and the cold isochore 4→1 closes the loop.
//! Thermalisation is instantaneous and perfect; `τ_iso` only enters the
//! cycle time used for the power.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::qdyn::{
    polarization, propagate, sample_polarization, DensityMatrix, Direction, HamiltonianSpec,
    PauliVector, PropagateOptions, RampProtocol,
};
use crate::thermo::{friction_of, gibbs_state, isochore_heat, ThermalContext};

/// Isochore bookkeeping time used when none is given.
pub const DEFAULT_TAU_ISO: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CycleSpec {
    pub hspec: HamiltonianSpec,
    pub alpha: f64,
    pub tau_ad: f64,
    pub tau_iso: f64,
    pub beta_c: f64,
    pub beta_h: f64,
}

impl CycleSpec {
    pub fn new(
        hspec: HamiltonianSpec,
        alpha: f64,
        tau_ad: f64,
        tau_iso: f64,
        beta_c: f64,
        beta_h: f64,
    ) -> Result<Self> {
        let spec = Self { hspec, alpha, tau_ad, tau_iso, beta_c, beta_h };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha.is_finite() && self.alpha > 0.0) {
            return Err(invalid(format!("alpha must be positive, got {}", self.alpha)));
        }
        if !(self.tau_ad.is_finite() && self.tau_ad > 0.0) {
            return Err(invalid(format!("tau_ad must be positive, got {}", self.tau_ad)));
        }
        if !(self.tau_iso.is_finite() && self.tau_iso >= 0.0) {
            return Err(invalid(format!("tau_iso must be non-negative, got {}", self.tau_iso)));
        }
        ThermalContext::new(self.beta_c)?;
        ThermalContext::new(self.beta_h)?;
        if !(self.beta_h < self.beta_c) {
            return Err(invalid(format!(
                "hot bath must be hotter: beta_h = {} is not below beta_c = {}",
                self.beta_h, self.beta_c
            )));
        }
        Ok(())
    }

    /// Field amplitude at the end of the forward ramp.
    pub fn lambda_star(&self) -> f64 {
        0.5 * self.alpha * self.hspec.omega0() * self.tau_ad
    }

    pub fn omega1(&self) -> f64 {
        self.hspec.gap(0.0)
    }

    pub fn omega2(&self) -> f64 {
        self.hspec.gap(self.lambda_star())
    }

    pub fn forward_ramp(&self) -> RampProtocol {
        RampProtocol { alpha: self.alpha, duration: self.tau_ad, direction: Direction::Forward, lambda_start: 0.0 }
    }

    pub fn backward_ramp(&self) -> RampProtocol {
        RampProtocol {
            alpha: self.alpha,
            duration: self.tau_ad,
            direction: Direction::Backward,
            lambda_start: self.lambda_star(),
        }
    }

    /// `2 τ_ad + τ_iso`
    pub fn cycle_time(&self) -> f64 {
        2.0 * self.tau_ad + self.tau_iso
    }

    fn cold(&self) -> ThermalContext {
        ThermalContext::new(self.beta_c).expect("validated")
    }

    fn hot(&self) -> ThermalContext {
        ThermalContext::new(self.beta_h).expect("validated")
    }
}

/// State at a corner of the cycle, measured against the Hamiltonian in
/// force there.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CyclePoint {
    pub label: u8,
    pub omega: f64,
    /// Ground-state population in the instantaneous eigenbasis.
    pub p0: f64,
    /// `Tr[ρH]/ω`, equal to `1/2 - p0`.
    pub n: f64,
    pub rho: DensityMatrix,
}

impl CyclePoint {
    fn measure(label: u8, h: &PauliVector, rho: DensityMatrix) -> Result<Self> {
        Ok(Self {
            label,
            omega: h.gap(),
            p0: rho.ground_population(h)?,
            n: polarization(&rho, h)?,
            rho,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CycleReport {
    pub w_ex: f64,
    pub q_h: f64,
    pub q_c: f64,
    pub power: f64,
    /// `1 + Q_c/Q_h`; NaN when no heat is exchanged with the hot bath.
    pub eta: f64,
    pub eta_ideal: f64,
    pub w_fric_total: f64,
    /// Positive-work inequality with the polarization measured upward from
    /// the ground state (`p0 - 1/2`), the sign used in cycle diagrams.
    pub pwc: bool,
    /// The same inequality evaluated with `n = Tr[ρH]/ω` as defined.
    pub pwc_literal: bool,
    /// Whether `pwc` agrees with the sign of `w_ex`.
    pub pwc_consistent: bool,
    pub points: [CyclePoint; 4],
}

impl CycleReport {
    /// `η / η_ideal`
    pub fn relative_efficiency(&self) -> f64 {
        self.eta / self.eta_ideal
    }
}

/// Runs one cycle, refining each ramp propagator to `tol`.
pub fn run_cycle(spec: &CycleSpec, tol: f64) -> Result<CycleReport> {
    spec.validate()?;
    let hs = &spec.hspec;
    let h1 = hs.hamiltonian_at(0.0);
    let h2 = hs.hamiltonian_at(spec.lambda_star());

    let rho1 = gibbs_state(&h1, &spec.cold());
    let u_f = propagate(hs, &spec.forward_ramp(), tol)?;
    let rho2 = rho1.evolve(&u_f);
    let rho3 = gibbs_state(&h2, &spec.hot());
    let u_b = propagate(hs, &spec.backward_ramp(), tol)?;
    let rho4 = rho3.evolve(&u_b);

    let points = [
        CyclePoint::measure(1, &h1, rho1)?,
        CyclePoint::measure(2, &h2, rho2)?,
        CyclePoint::measure(3, &h2, rho3)?,
        CyclePoint::measure(4, &h1, rho4)?,
    ];
    let (omega1, omega2) = (points[0].omega, points[1].omega);
    let q_h = isochore_heat(omega2, points[1].p0, points[2].p0);
    let q_c = isochore_heat(omega1, points[3].p0, points[0].p0);
    let w_ex = q_h + q_c;
    // heat at roundoff scale means the cycle is idle and has no efficiency
    let idle = q_h.abs() <= 64.0 * f64::EPSILON * omega2.max(omega1);
    let eta = if idle { f64::NAN } else { 1.0 + q_c / q_h };
    let w_fric_total =
        friction_of(hs, &h1, &h2, &rho1, &u_f)? + friction_of(hs, &h2, &h1, &rho3, &u_b)?;
    let pwc = positive_work_condition(&points);

    Ok(CycleReport {
        w_ex,
        q_h,
        q_c,
        power: w_ex / spec.cycle_time(),
        eta,
        eta_ideal: ideal_efficiency(omega1, omega2),
        w_fric_total,
        pwc,
        pwc_literal: positive_work_condition_literal(&points),
        pwc_consistent: pwc == (w_ex > 0.0),
        points,
    })
}

fn work_inequality(points: &[CyclePoint; 4], n: impl Fn(&CyclePoint) -> f64) -> bool {
    let [p1, p2, p3, p4] = points;
    p1.omega * (n(p1) - n(p4)) < p2.omega * (n(p2) - n(p3))
}

/// `ω₁ (n₁ - n₄) < ω₂ (n₂ - n₃)` with `n` counted upward from the ground
/// state. Equivalent to positive extractable work.
pub fn positive_work_condition(points: &[CyclePoint; 4]) -> bool {
    work_inequality(points, |p| -p.n)
}

/// The inequality with `n = Tr[ρH]/ω` taken literally. Since that `n` is
/// negative for thermal states it flags the refrigerator side.
pub fn positive_work_condition_literal(points: &[CyclePoint; 4]) -> bool {
    work_inequality(points, |p| p.n)
}

/// `1 - ω₁/ω₂`
pub fn ideal_efficiency(omega1: f64, omega2: f64) -> f64 {
    1.0 - omega1 / omega2
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Leg {
    Ramp12,
    Hot23,
    Ramp34,
    Cold41,
}

impl Leg {
    pub fn label(&self) -> &'static str {
        match self {
            Leg::Ramp12 => "1-2",
            Leg::Hot23 => "2-3",
            Leg::Ramp34 => "3-4",
            Leg::Cold41 => "4-1",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryPoint {
    pub leg: Leg,
    pub omega: f64,
    pub n: f64,
}

/// The cycle traced in the (ω, n) plane. Each ramp is sampled at
/// `samples_per_stroke` equally spaced times; each isochore contributes its
/// two endpoints, a vertical segment at fixed ω.
pub fn cycle_trajectory(
    spec: &CycleSpec,
    samples_per_stroke: usize,
    tol: f64,
) -> Result<Vec<TrajectoryPoint>> {
    spec.validate()?;
    if samples_per_stroke < 2 {
        return Err(invalid("samples_per_stroke must be at least 2"));
    }
    let hs = &spec.hspec;
    let opts = PropagateOptions::with_tol(tol);
    let h1 = hs.hamiltonian_at(0.0);
    let h2 = hs.hamiltonian_at(spec.lambda_star());
    let rho1 = gibbs_state(&h1, &spec.cold());
    let rho3 = gibbs_state(&h2, &spec.hot());

    let mut out = Vec::with_capacity(2 * samples_per_stroke + 4);
    let (up, rho2) = sample_polarization(hs, &spec.forward_ramp(), &rho1, samples_per_stroke, &opts)?;
    out.extend(up.iter().map(|s| TrajectoryPoint { leg: Leg::Ramp12, omega: s.omega, n: s.n }));
    for rho in [rho2, rho3] {
        out.push(TrajectoryPoint { leg: Leg::Hot23, omega: h2.gap(), n: polarization(&rho, &h2)? });
    }
    let (down, rho4) = sample_polarization(hs, &spec.backward_ramp(), &rho3, samples_per_stroke, &opts)?;
    out.extend(down.iter().map(|s| TrajectoryPoint { leg: Leg::Ramp34, omega: s.omega, n: s.n }));
    for rho in [rho4, rho1] {
        out.push(TrajectoryPoint { leg: Leg::Cold41, omega: h1.gap(), n: polarization(&rho, &h1)? });
    }
    Ok(out)
}
