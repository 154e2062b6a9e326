//! Compiling a cycle into waveplate rotations and a dephasing stage.
//!
//! Adiabats become Euler ZXZ rotations of a polarization qubit. An
//! isochore becomes a rotation that places the target ground population on
//! the diagonal, followed by a σz dephasing map that erases the
//! coherences. Everything is expressed in the computational basis except
//! that each isochore is conjugated into the eigenbasis of the Hamiltonian
//! it thermalises against.

use std::f64::consts::PI;
use std::fmt::Write as _;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::format_sig;
use crate::otto::{run_cycle, CycleSpec};
use crate::qdyn::{DensityMatrix, Matrix2};
use crate::thermo::ground_weight;

/// Above this defect a matrix is not accepted as unitary.
const UNITARY_TOL: f64 = 1e-10;
/// Below this `θ_x` the ψ/φ split is degenerate.
const GIMBAL_TOL: f64 = 1e-12;
const FEASIBILITY_SLACK: f64 = 1e-12;

/// `exp(-i a σz / 2)`
pub fn rz(a: f64) -> Matrix2 {
    Matrix2::diag(Complex64::from_polar(1.0, -0.5 * a), Complex64::from_polar(1.0, 0.5 * a))
}

/// `exp(-i a σx / 2)`
pub fn rx(a: f64) -> Matrix2 {
    let (s, c) = (0.5 * a).sin_cos();
    Matrix2::new(Complex64::new(c, 0.0), Complex64::new(0.0, -s), Complex64::new(0.0, -s), Complex64::new(c, 0.0))
}

/// `U = e^{i φ_g} Rz(ψ) Rx(θ_x) Rz(φ)`
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EulerAngles {
    pub psi: f64,
    pub theta_x: f64,
    pub phi: f64,
    pub global_phase: f64,
}

impl EulerAngles {
    pub const IDENTITY: Self = Self { psi: 0.0, theta_x: 0.0, phi: 0.0, global_phase: 0.0 };

    pub fn compose(&self) -> Matrix2 {
        (rz(self.psi) * rx(self.theta_x) * rz(self.phi)).scale(Complex64::from_polar(1.0, self.global_phase))
    }

    /// Angles with `θ_x ∈ [0, π]` and `ψ, φ ∈ (-2π, 2π]`. When `θ_x` is
    /// below `1e-12` the whole z rotation goes into `ψ` and `φ = 0`.
    pub fn decompose(u: &Matrix2) -> Result<Self> {
        let deviation = u.unitarity_defect();
        if !(deviation <= UNITARY_TOL) {
            return Err(Error::NotUnitary { deviation });
        }
        let global_phase = 0.5 * u.det().arg();
        let v = u.scale(Complex64::from_polar(1.0, -global_phase));
        let (v00, v10) = (v.get(0, 0), v.get(1, 0));
        let theta_x = 2.0 * v10.norm().atan2(v00.norm());
        let sum = -2.0 * v00.arg();
        if theta_x < GIMBAL_TOL {
            return Ok(Self { psi: sum, theta_x: 0.0, phi: 0.0, global_phase });
        }
        let diff = 2.0 * (Complex64::i() * v10).arg();
        Ok(Self { psi: 0.5 * (sum + diff), theta_x, phi: 0.5 * (sum - diff), global_phase })
    }
}

/// Free-function form of [`EulerAngles::decompose`].
pub fn euler_zxz_decompose(u: &Matrix2) -> Result<EulerAngles> {
    EulerAngles::decompose(u)
}

/// Free-function form of [`EulerAngles::compose`].
pub fn euler_zxz_compose(angles: &EulerAngles) -> Matrix2 {
    angles.compose()
}

/// Strength of the σz dephasing map `ρ → ((1+z) ρ + (1-z) σz ρ σz)/2`,
/// which multiplies the coherences by `z`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecoherenceSetting {
    z: f64,
}

impl DecoherenceSetting {
    pub fn new(z: f64) -> Result<Self> {
        if !(-1.0..=1.0).contains(&z) {
            return Err(invalid(format!("decoherence parameter must lie in [-1, 1], got {z}")));
        }
        Ok(Self { z })
    }

    /// The setting that removes all coherence, `z = 0`.
    pub fn complete() -> Self {
        Self { z: 0.0 }
    }

    pub fn z(&self) -> f64 {
        self.z
    }
}

pub fn decoherence_map(rho: &DensityMatrix, setting: DecoherenceSetting) -> DensityMatrix {
    let m = rho.matrix();
    let z = setting.z;
    DensityMatrix::from_trusted(Matrix2::new(m.get(0, 0), m.get(0, 1) * z, m.get(1, 0) * z, m.get(1, 1)))
}

fn check_population(p0: f64) -> Result<()> {
    if !(0.5..1.0).contains(&p0) {
        return Err(Error::DomainViolation { population: p0 });
    }
    Ok(())
}

/// Inverse temperature at which a level pair with spacing `omega` has
/// ground population `p0f`. Population inversion is rejected.
pub fn beta_from_population(p0f: f64, omega: f64) -> Result<f64> {
    check_population(p0f)?;
    if !(omega > 0.0) {
        return Err(invalid(format!("level spacing must be positive, got {omega}")));
    }
    Ok((p0f / (1.0 - p0f)).ln() / omega)
}

/// `1/(1 + e^{-βω})`
pub fn population_from_beta(beta: f64, omega: f64) -> f64 {
    ground_weight(beta, omega)
}

/// Rotation plus complete dephasing that takes a state to
/// `diag(p0, 1 - p0)` in the frame given by `basis`.
///
/// Applied to `ρ`: `basis · D[Rx(θ_x) · alignment · ρ · (...)†] · basis†`
/// where `D` is the dephasing map with parameter `z`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThermalizationPlan {
    pub alignment: EulerAngles,
    pub theta_x: f64,
    pub target_p0: f64,
    pub z: f64,
    pub basis: EulerAngles,
    /// Whether the closed-form `Rx` alone sufficed (input Bloch vector with
    /// no y component and a target no farther from the centre).
    pub x_rotation_only: bool,
    /// `-1/2 ≤ 1/2 - p0f ≤ -((1/2 - p0i)^2 + b_y^2)^{1/2}` evaluated on the
    /// input, kept as a diagnostic. Feasibility is decided by Bloch length.
    pub textbook_condition: bool,
}

impl ThermalizationPlan {
    /// The unitary applied before dephasing.
    pub fn rotation(&self) -> Matrix2 {
        rx(self.theta_x) * self.alignment.compose()
    }

    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        let setting = DecoherenceSetting::new(self.z)?;
        let dephased = decoherence_map(&rho.evolve(&self.rotation()), setting);
        Ok(dephased.evolve(&self.basis.compose()))
    }
}

/// Plans the rotation that brings `rho_i` to ground population `p0f` in
/// the computational basis once its coherences are erased.
///
/// Rotations preserve the Bloch length `|r|`, so the target `z = 2 p0f - 1`
/// is reachable exactly when `|2 p0f - 1| ≤ |r|`.
pub fn thermalization_rotation(rho_i: &DensityMatrix, p0f: f64) -> Result<ThermalizationPlan> {
    check_population(p0f)?;
    let [x, y, z] = rho_i.bloch();
    let z_t = 2.0 * p0f - 1.0;
    let radius = rho_i.bloch_length();
    if z_t.abs() > radius + FEASIBILITY_SLACK {
        return Err(Error::Infeasible { deficit: z_t.abs() - radius, stroke: None });
    }
    let p0i = rho_i.matrix().get(0, 0).re;
    let b_y = 0.5 * y;
    let a = 0.5 - p0f;
    let textbook_condition = -0.5 <= a && a <= -((0.5 - p0i).powi(2) + b_y * b_y).sqrt();

    let x_rotation_only = y == 0.0 && z_t.abs() <= z.abs() && z != 0.0;
    let (alignment, theta_x) = if x_rotation_only {
        (EulerAngles::IDENTITY, (z_t / z).clamp(-1.0, 1.0).acos())
    } else {
        // turn the transverse part onto +y, then tilt about x
        let perp = x.hypot(y);
        let beta = if perp > 0.0 { PI / 2.0 - y.atan2(x) } else { 0.0 };
        let gamma = perp.atan2(z);
        let ratio = if radius > 0.0 { (z_t / radius).clamp(-1.0, 1.0) } else { 0.0 };
        let theta = if radius > 0.0 { gamma - ratio.acos() } else { 0.0 };
        (EulerAngles { psi: beta, ..EulerAngles::IDENTITY }, theta)
    };
    Ok(ThermalizationPlan {
        alignment,
        theta_x,
        target_p0: p0f,
        z: DecoherenceSetting::complete().z(),
        basis: EulerAngles::IDENTITY,
        x_rotation_only,
        textbook_condition,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum ProgramStroke {
    Adiabat(EulerAngles),
    Isochore(ThermalizationPlan),
}

/// Four strokes: adiabat 1→2, isochore 2→3, adiabat 3→4, isochore 4→1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OpticalProgram {
    pub strokes: Vec<ProgramStroke>,
}

/// One line of the text form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Element {
    Rot(EulerAngles),
    Therm { theta_x: f64, target_p0: f64, z: f64 },
}

impl OpticalProgram {
    /// Elements in application order. An isochore expands to its alignment
    /// rotation, the `Rx` + dephasing stage and the basis rotation.
    pub fn elements(&self) -> Vec<Element> {
        let mut out = Vec::new();
        for s in &self.strokes {
            match s {
                ProgramStroke::Adiabat(a) => out.push(Element::Rot(*a)),
                ProgramStroke::Isochore(p) => {
                    out.push(Element::Rot(p.alignment));
                    out.push(Element::Therm { theta_x: p.theta_x, target_p0: p.target_p0, z: p.z });
                    out.push(Element::Rot(p.basis));
                }
            }
        }
        out
    }

    /// `ROT psi theta_x phi global_phase` and `THERM theta_x target_p0 z`,
    /// one record per line.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for e in self.elements() {
            match e {
                Element::Rot(a) => writeln!(
                    s,
                    "ROT {} {} {} {}",
                    format_sig(a.psi, 12),
                    format_sig(a.theta_x, 12),
                    format_sig(a.phi, 12),
                    format_sig(a.global_phase, 12)
                ),
                Element::Therm { theta_x, target_p0, z } => writeln!(
                    s,
                    "THERM {} {} {}",
                    format_sig(theta_x, 12),
                    format_sig(target_p0, 12),
                    format_sig(z, 12)
                ),
            }
            .expect("writing to a String");
        }
        s
    }

    /// States after each stroke, starting from `rho`.
    pub fn simulate(&self, rho: &DensityMatrix) -> Result<Vec<DensityMatrix>> {
        let mut state = *rho;
        let mut out = Vec::with_capacity(self.strokes.len());
        for s in &self.strokes {
            state = match s {
                ProgramStroke::Adiabat(a) => state.evolve(&a.compose()),
                ProgramStroke::Isochore(p) => p.apply(&state)?,
            };
            out.push(state);
        }
        Ok(out)
    }
}

/// Runs an element list given in text form on `rho`.
pub fn run_text(text: &str, rho: &DensityMatrix) -> Result<DensityMatrix> {
    let mut state = *rho;
    for (i, line) in text.lines().enumerate() {
        let mut parts = line.split_whitespace();
        let Some(tag) = parts.next() else { continue };
        let nums: Vec<f64> = parts
            .map(|p| p.parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| invalid(format!("line {}: {e}", i + 1)))?;
        state = match (tag, nums.as_slice()) {
            ("ROT", &[psi, theta_x, phi, global_phase]) => {
                state.evolve(&EulerAngles { psi, theta_x, phi, global_phase }.compose())
            }
            ("THERM", &[theta_x, _, z]) => decoherence_map(&state.evolve(&rx(theta_x)), DecoherenceSetting::new(z)?),
            _ => return Err(invalid(format!("line {}: unrecognised record {line:?}", i + 1))),
        };
    }
    Ok(state)
}

fn isochore_plan(
    rho: &DensityMatrix,
    basis: &Matrix2,
    p0f: f64,
    stroke: &'static str,
) -> Result<ThermalizationPlan> {
    let local = rho.evolve(&basis.adjoint());
    let plan = thermalization_rotation(&local, p0f).map_err(|e| match e {
        Error::Infeasible { deficit, .. } => Error::Infeasible { deficit, stroke: Some(stroke) },
        other => other,
    })?;
    Ok(ThermalizationPlan {
        alignment: EulerAngles::decompose(&(plan.alignment.compose() * basis.adjoint()))?,
        basis: EulerAngles::decompose(basis)?,
        ..plan
    })
}

/// Compiles the cycle `spec` into an optical program whose simulation from
/// the cold Gibbs state reproduces the corners of [`run_cycle`].
pub fn compile_cycle(spec: &CycleSpec, tol: f64) -> Result<OpticalProgram> {
    let report = run_cycle(spec, tol)?;
    let hs = &spec.hspec;
    let h1 = hs.hamiltonian_at(0.0);
    let h2 = hs.hamiltonian_at(spec.lambda_star());
    let u_f = crate::qdyn::propagate(hs, &spec.forward_ramp(), tol)?;
    let u_b = crate::qdyn::propagate(hs, &spec.backward_ramp(), tol)?;
    let [p1, p2, p3, p4] = report.points;
    Ok(OpticalProgram {
        strokes: vec![
            ProgramStroke::Adiabat(EulerAngles::decompose(&u_f)?),
            ProgramStroke::Isochore(isochore_plan(&p2.rho, &h2.eigenbasis()?, p3.p0, "2-3")?),
            ProgramStroke::Adiabat(EulerAngles::decompose(&u_b)?),
            ProgramStroke::Isochore(isochore_plan(&p4.rho, &h1.eigenbasis()?, p1.p0, "4-1")?),
        ],
    })
}
