//! Library results against independent numerical oracles.

use std::f64::consts::PI;

use num_complex::Complex64;
use otto_core::ensemble::{
    average_cycle, linspace, sweep_total_time, CycleTemplate, DisorderSpec, SweepSpec,
};
use otto_core::optics::{compile_cycle, ProgramStroke};
use otto_core::otto::{cycle_trajectory, run_cycle, Leg};
use otto_core::qdyn::{sample_polarization, HamiltonianSpec, PropagateOptions, RampProtocol};
use otto_core::thermo::{gibbs_state, ground_weight, loop_friction, ThermalContext};
use otto_core::{CycleSpec, DensityMatrix, Error};

const TOL: f64 = 1e-10;

type M2 = [[Complex64; 2]; 2];

fn mul(a: &M2, b: &M2) -> M2 {
    let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

fn adjoint(a: &M2) -> M2 {
    [[a[0][0].conj(), a[1][0].conj()], [a[0][1].conj(), a[1][1].conj()]]
}

/// RK4 for `i dU/dt = H(λ(t)) U` with `H = (1/2 + λ cos θ) σz + λ sin θ σx`.
fn rk4(theta: f64, lambda: impl Fn(f64) -> f64, duration: f64, steps: usize) -> M2 {
    let (c, s) = (theta.cos(), theta.sin());
    let rhs = |t: f64, u: &M2| {
        let l = lambda(t);
        let (a, b) = (0.5 + l * c, l * s);
        let mi = Complex64::new(0.0, -1.0);
        let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
        for j in 0..2 {
            out[0][j] = mi * (a * u[0][j] + b * u[1][j]);
            out[1][j] = mi * (b * u[0][j] - a * u[1][j]);
        }
        out
    };
    let step = |u: &M2, k: &M2, h: f64| {
        let mut out = *u;
        for i in 0..2 {
            for j in 0..2 {
                out[i][j] += k[i][j] * h;
            }
        }
        out
    };
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let mut u = [[one, zero], [zero, one]];
    let h = duration / steps as f64;
    for n in 0..steps {
        let t = n as f64 * h;
        let k1 = rhs(t, &u);
        let k2 = rhs(t + 0.5 * h, &step(&u, &k1, 0.5 * h));
        let k3 = rhs(t + 0.5 * h, &step(&u, &k2, 0.5 * h));
        let k4 = rhs(t + h, &step(&u, &k3, h));
        for i in 0..2 {
            for j in 0..2 {
                u[i][j] += (k1[i][j] + 2.0 * k2[i][j] + 2.0 * k3[i][j] + k4[i][j]) * (h / 6.0);
            }
        }
    }
    u
}

fn thermal_at_zero_field(beta: f64) -> M2 {
    // ground state of σz/2 is the second basis vector
    let p0 = ground_weight(beta, 1.0);
    let z = Complex64::new(0.0, 0.0);
    [[Complex64::new(1.0 - p0, 0.0), z], [z, Complex64::new(p0, 0.0)]]
}

#[test]
fn loop_relative_entropy_matches_fine_step_oracle() {
    let (theta, alpha, beta) = (PI / 5.0, 1.0, 1.0);
    let duration = 15.0;
    let lambda_star = 0.5 * alpha * duration;
    let up = rk4(theta, |t| 0.5 * alpha * t, duration, 1_000_000);
    let down = rk4(theta, |t| lambda_star - 0.5 * alpha * t, duration, 1_000_000);
    let u = mul(&down, &up);
    let rho0 = thermal_at_zero_field(beta);
    let rho2 = mul(&mul(&u, &rho0), &adjoint(&u));
    // eigenvalues of ρ₂ from its Bloch length
    let (a, d, b) = (rho2[0][0].re, rho2[1][1].re, rho2[0][1]);
    let r = ((a - d).powi(2) + 4.0 * b.norm_sqr()).sqrt();
    let (l1, l2) = (0.5 * (1.0 + r), 0.5 * (1.0 - r));
    let neg_entropy = l1 * l1.ln() + l2 * l2.ln();
    let d_oracle = neg_entropy - a * rho0[0][0].re.ln() - d * rho0[1][1].re.ln();

    let spec = HamiltonianSpec::with_theta(theta).unwrap();
    let f = RampProtocol::forward(alpha, duration).unwrap();
    let bwd = RampProtocol::backward_to_zero(alpha, f.lambda_end(1.0), 1.0).unwrap();
    let report = loop_friction(&spec, &f, &bwd, &ThermalContext::new(beta).unwrap(), TOL).unwrap();
    assert!(d_oracle > 0.0);
    assert!((report.relative_entropy - d_oracle).abs() < 1e-8, "{} vs {d_oracle}", report.relative_entropy);
}

#[test]
fn polarization_after_up_ramp_matches_oracle() {
    let (theta, alpha, duration) = (PI / 5.0, 1.0, 15.0);
    let u = rk4(theta, |t| 0.5 * alpha * t, duration, 1_000_000);
    let rho0 = thermal_at_zero_field(1.0);
    let rho = mul(&mul(&u, &rho0), &adjoint(&u));
    let l = 0.5 * alpha * duration;
    let (hz, hx) = (0.5 + l * theta.cos(), l * theta.sin());
    let omega = 2.0 * hz.hypot(hx);
    let energy = hz * (rho[0][0].re - rho[1][1].re) + 2.0 * hx * rho[0][1].re;
    let n_oracle = energy / omega;

    let spec = HamiltonianSpec::with_theta(theta).unwrap();
    let ramp = RampProtocol::forward(alpha, duration).unwrap();
    let start = gibbs_state(&spec.hamiltonian_at(0.0), &ThermalContext::new(1.0).unwrap());
    let (samples, _) = sample_polarization(&spec, &ramp, &start, 31, &PropagateOptions::with_tol(TOL)).unwrap();
    let last = samples.last().unwrap();
    assert!((last.omega - omega).abs() < 1e-12);
    assert!((last.n - n_oracle).abs() < 1e-9, "{} vs {n_oracle}", last.n);
    // a finite-rate ramp lags behind the adiabatic value -tanh(1/2)/2
    assert!(last.n > -0.5_f64.tanh() / 2.0);
}

#[test]
fn cycle_friction_grows_with_misalignment() {
    let friction = |theta: f64| {
        let h = HamiltonianSpec::with_theta(theta).unwrap();
        run_cycle(&CycleSpec::new(h, 1.0, 0.5513, 0.01, 1.0, 0.5).unwrap(), TOL).unwrap().w_fric_total
    };
    let values: Vec<f64> = linspace(0.0, PI / 2.0, 12).into_iter().map(friction).collect();
    assert!(values[0].abs() < 1e-12);
    assert!(values.windows(2).all(|w| w[1] > w[0]), "{values:?}");
}

#[test]
fn averages_order_with_disorder_angle_and_temperature() {
    let times = [0.05, 0.1, 0.2, 0.4];
    let at = |template: &CycleTemplate, d: DisorderSpec| {
        times.map(|t| average_cycle(template, &d, t, TOL).unwrap())
    };
    let non_increasing = |a: &[otto_core::ensemble::Averages; 4], b: &[otto_core::ensemble::Averages; 4]| {
        a.iter().zip(b).all(|(a, b)| b.w_ex <= a.w_ex && b.power <= a.power && b.eta <= a.eta)
    };
    let base = CycleTemplate::new(1.0, 0.5);

    let by_sigma: Vec<_> =
        [0.01, 0.1, 0.5, 1.0].iter().map(|&s| at(&base, DisorderSpec::gaussian(s).unwrap())).collect();
    assert!(by_sigma.windows(2).all(|w| non_increasing(&w[0], &w[1])));

    let by_theta: Vec<_> =
        linspace(0.0, PI / 2.0, 7).into_iter().map(|th| at(&base, DisorderSpec::delta(th).unwrap())).collect();
    assert!(by_theta.windows(2).all(|w| non_increasing(&w[0], &w[1])));

    // hotter hot bath, i.e. smaller β_h/β_c, never hurts
    let d = DisorderSpec::gaussian(0.1).unwrap();
    let by_ratio: Vec<_> = [0.3, 0.2, 0.1].iter().map(|&r| at(&CycleTemplate::new(1.0, r), d)).collect();
    assert!(by_ratio.windows(2).all(|w| non_increasing(&w[1], &w[0])));
}

#[test]
fn flat_average_matches_riemann_sum() {
    let template = CycleTemplate::new(1.0, 0.5);
    let t = 0.2;
    let quad = average_cycle(&template, &DisorderSpec::flat(), t, TOL).unwrap();
    let n = 20_000;
    let sum: f64 = (0..n)
        .map(|i| {
            let theta = PI * (i as f64 + 0.5) / n as f64;
            run_cycle(&template.at(theta, t).unwrap(), 1e-8).unwrap().w_ex
        })
        .sum();
    assert!((quad.w_ex - sum / n as f64).abs() < 1e-6);
}

#[test]
fn sweeps_are_identical_across_worker_counts() {
    let spec = SweepSpec::new(
        linspace(0.05, 0.5, 6),
        CycleTemplate::new(1.0, 0.5),
        DisorderSpec::gaussian(0.5).unwrap().with_nodes(16).unwrap(),
    )
    .unwrap();
    let run = |threads: usize| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        pool.install(|| sweep_total_time(&spec).unwrap())
    };
    let one = run(1);
    assert_eq!(one, run(3));
    assert_eq!(one, run(8));
}

#[test]
fn aligned_cycle_compiles_to_z_rotations() {
    let h = HamiltonianSpec::with_theta(0.0).unwrap();
    // α τ_ad = 1 gives ω₂ = 2, and β_h ω₂ = β_c ω₁ makes both isochores reachable
    let spec = CycleSpec::new(h, 1.0, 1.0, 0.01, 1.0, 0.5).unwrap();
    let program = compile_cycle(&spec, TOL).unwrap();
    for stroke in &program.strokes {
        if let ProgramStroke::Adiabat(a) = stroke {
            assert_eq!(a.theta_x, 0.0);
        }
    }
    let corners = run_cycle(&spec, TOL).unwrap().points;
    let states = program.simulate(&corners[0].rho).unwrap();
    for (state, corner) in states.iter().zip(corners.iter().cycle().skip(1)) {
        assert!(state.max_abs_diff(&corner.rho) < 1e-8);
    }
}

#[test]
fn purifying_hot_isochore_is_infeasible() {
    let h = HamiltonianSpec::with_theta(0.0).unwrap();
    // β_h ω₂ = 2.7 > β_c ω₁ = 1: the hot corner is purer than corner 2
    let spec = CycleSpec::new(h, 1.0, 2.0, 0.01, 1.0, 0.9).unwrap();
    match compile_cycle(&spec, TOL) {
        Err(Error::Infeasible { stroke, deficit }) => {
            assert_eq!(stroke, Some("2-3"));
            let expected = (2.0 * ground_weight(0.9, 3.0) - 1.0) - (2.0 * ground_weight(1.0, 1.0) - 1.0);
            assert!((deficit - expected).abs() < 1e-12);
        }
        other => panic!("expected infeasible hot isochore, got {other:?}"),
    }
}

#[test]
fn tilted_cycle_overshoots_the_corners() {
    let h = HamiltonianSpec::with_theta(PI / 5.0).unwrap();
    let spec = CycleSpec::new(h, 1.0, 0.5513, 0.01, 1.0, 0.5).unwrap();
    let path = cycle_trajectory(&spec, 41, TOL).unwrap();
    let report = run_cycle(&spec, TOL).unwrap();
    let end_of_ramp = path.iter().filter(|p| p.leg == Leg::Ramp12).last().unwrap();
    assert!((end_of_ramp.n - report.points[1].n).abs() < 1e-9);
    // an adiabatic up-ramp would keep n at its corner-1 value; friction raises it
    let rho1 = DensityMatrix::diagonal(1.0 - ground_weight(1.0, 1.0)).unwrap();
    assert!((report.points[0].rho.max_abs_diff(&rho1)) < 1e-12);
    assert!(report.points[1].n > report.points[0].n);
}
