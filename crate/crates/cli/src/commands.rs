use std::f64::consts::PI;

use otto_core::ensemble::{
    linspace, maximize_power, power_efficiency_curve, sweep_total_time, CycleTemplate, SweepSpec,
};
use otto_core::optics::{compile_cycle, Element};
use otto_core::otto::{cycle_trajectory, run_cycle};
use otto_core::presets::{max_power_grid, REFINE_TOL, TAU_ISO_FIT};
use otto_core::thermo::{loop_friction, ThermalContext};
use otto_core::{format_sig, CycleSpec, DisorderSpec, HamiltonianSpec, RampProtocol};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::config::{Convention, Settings};
use crate::output::{Cell, Document};
use crate::CliError;

const SWEEP_COLUMNS: [&str; 5] = ["alpha_t_tot", "w_ex", "p_over_alpha2", "eta", "w_fric"];

/// Settings plus the common numeric flags, resolved.
pub struct Run {
    pub settings: Settings,
    pub tol: f64,
    pub nodes: usize,
}

fn config_err(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

fn default_sweep_grid() -> Vec<f64> {
    linspace(0.05, 1.5, 30)
}

impl Run {
    fn start(&self, command: &str, columns: Vec<&'static str>) -> Document {
        let mut doc = Document::new(columns);
        doc.header("command", command);
        for (k, v) in self.settings.entries().filter(|(k, _)| !matches!(k.as_str(), "tol" | "nodes")) {
            doc.header(k, v);
        }
        doc.header("tol", format_sig(self.tol, 9));
        doc.header("nodes", self.nodes);
        doc
    }

    fn theta_only(&self, default: Option<f64>) -> Result<f64, CliError> {
        if self.settings.has("disorder") {
            return Err(config_err("this command takes 'theta', not 'disorder'"));
        }
        self.settings
            .angle()?
            .or(default)
            .ok_or_else(|| config_err("'theta' is required"))
    }

    /// Exactly one of `theta` and `disorder`; a single angle becomes a delta.
    fn angle_or_disorder(&self) -> Result<DisorderSpec, CliError> {
        match (self.settings.angle()?, self.settings.disorder(self.nodes)?) {
            (Some(theta), None) => Ok(DisorderSpec::delta(theta)?),
            (None, Some(d)) => Ok(d),
            (Some(_), Some(_)) => Err(config_err("give either 'theta' or 'disorder', not both")),
            (None, None) => Err(config_err("one of 'theta' or 'disorder' is required")),
        }
    }

    fn baths(&self) -> Result<(f64, f64), CliError> {
        let beta_c = self.settings.positive("beta_c", 1.0)?;
        let beta_h = self.settings.positive("beta_h", 0.5)?;
        if beta_h >= beta_c {
            return Err(config_err(format!("beta_h ({beta_h}) must be below beta_c ({beta_c})")));
        }
        Ok((beta_c, beta_h))
    }

    fn template(&self) -> Result<CycleTemplate, CliError> {
        let (beta_c, beta_h) = self.baths()?;
        let t = CycleTemplate {
            alpha: self.settings.positive("alpha", 1.0)?,
            tau_iso: self.tau_iso()?,
            ..CycleTemplate::new(beta_c, beta_h)
        };
        t.validate()?;
        Ok(t)
    }

    fn tau_iso(&self) -> Result<f64, CliError> {
        let t = self.settings.number("tau_iso", TAU_ISO_FIT)?;
        if !(t >= 0.0) {
            return Err(config_err(format!("tau_iso must be non-negative, got {t}")));
        }
        Ok(t)
    }

    fn cycle_spec(&self) -> Result<CycleSpec, CliError> {
        let theta = self.theta_only(Some(PI / 5.0))?;
        let t = self.template()?;
        let alpha_t = self.settings.positive("alpha_t", 0.5513)?;
        Ok(t.at(theta, alpha_t)?)
    }

    fn provenance(&self, doc: &mut Document, disorder: Option<&DisorderSpec>, tau_iso: Option<f64>, convention: &str) {
        doc.header(
            "disorder_normalization",
            disorder.map_or("none (single angle)".to_string(), |d| d.kind.to_string()),
        );
        doc.header("tau_iso_used", tau_iso.map_or("unused".to_string(), |t| format_sig(t, 9)));
        doc.header("beta_c_convention", convention);
    }
}

fn resolved(doc: &mut Document, key: &str, value: f64) {
    doc.header(&format!("resolved.{key}"), format_sig(value, 12));
}

fn resolved_template(doc: &mut Document, t: &CycleTemplate) {
    resolved(doc, "alpha", t.alpha);
    resolved(doc, "tau_iso", t.tau_iso);
    resolved(doc, "beta_c", t.beta_c);
    resolved(doc, "beta_h", t.beta_h);
}

fn resolved_cycle(doc: &mut Document, spec: &CycleSpec) {
    resolved(doc, "theta", spec.hspec.theta());
    resolved(doc, "alpha", spec.alpha);
    resolved(doc, "alpha_t", spec.alpha * spec.tau_ad);
    resolved(doc, "tau_iso", spec.tau_iso);
    resolved(doc, "beta_c", spec.beta_c);
    resolved(doc, "beta_h", spec.beta_h);
}

fn resolved_grid(doc: &mut Document, grid: &[f64]) {
    doc.header("resolved.grid_points", grid.len());
    if let (Some(a), Some(b)) = (grid.first(), grid.last()) {
        resolved(doc, "grid_first", *a);
        resolved(doc, "grid_last", *b);
    }
}

fn direct_baths(t: &CycleTemplate) -> String {
    format!("direct (beta_c = {}, beta_h = {})", t.beta_c, t.beta_h)
}

pub fn friction_loop(run: &Run) -> Result<Document, CliError> {
    let theta = run.theta_only(Some(PI / 5.0))?;
    let alpha_t = run.settings.positive("alpha_t", 15.0)?;
    let beta = run.settings.positive("beta", 1.0)?;
    let alphas = run.settings.grid("alpha_grid", || otto_core::ensemble::geomspace(1e-3, 1e3, 61))?;
    if alphas.iter().any(|a| !(*a > 0.0)) {
        return Err(config_err("alpha_grid must be positive"));
    }
    let spec = HamiltonianSpec::with_theta(theta)?;
    let ctx = ThermalContext::new(beta)?;
    let rows = alphas
        .par_iter()
        .map(|&alpha| {
            let f = RampProtocol::forward(alpha, alpha_t / alpha)?;
            let b = RampProtocol::backward_to_zero(alpha, f.lambda_end(1.0), 1.0)?;
            let r = loop_friction(&spec, &f, &b, &ctx, run.tol)?;
            Ok(vec![alpha.into(), r.relative_entropy.into(), r.w_fric.into(), r.q_rethermalize.into()])
        })
        .collect::<otto_core::Result<Vec<Vec<Cell>>>>()?;
    let mut doc = run.start("friction-loop", vec!["alpha", "relative_entropy", "w_fric", "q_rethermalize"]);
    run.provenance(&mut doc, None, None, &format!("single bath (beta = {beta})"));
    resolved(&mut doc, "theta", theta);
    resolved(&mut doc, "alpha_t", alpha_t);
    resolved(&mut doc, "beta", beta);
    doc.rows = rows;
    Ok(doc)
}

pub fn cycle(run: &Run) -> Result<Document, CliError> {
    let spec = run.cycle_spec()?;
    let samples = run.settings.count("samples", 101)?;
    let report = run_cycle(&spec, run.tol)?;
    let path = cycle_trajectory(&spec, samples, run.tol)?;
    let mut doc = run.start("cycle", vec!["leg", "omega", "n"]);
    let template = run.template()?;
    run.provenance(&mut doc, None, Some(spec.tau_iso), &direct_baths(&template));
    resolved_cycle(&mut doc, &spec);
    for (k, v) in [
        ("w_ex", report.w_ex),
        ("q_h", report.q_h),
        ("q_c", report.q_c),
        ("power", report.power),
        ("eta", report.eta),
        ("eta_ideal", report.eta_ideal),
        ("w_fric_total", report.w_fric_total),
    ] {
        doc.note(k, json!(v));
    }
    doc.note("pwc", json!(report.pwc));
    doc.note("pwc_literal", json!(report.pwc_literal));
    for p in &report.points {
        doc.note(&format!("p0_{}", p.label), json!(p.p0));
    }
    doc.rows = path.iter().map(|p| vec![p.leg.label().into(), p.omega.into(), p.n.into()]).collect();
    doc.json_extra.insert("report".into(), serde_json::to_value(report).expect("report serializes"));
    Ok(doc)
}

fn sweep_document(run: &Run, command: &str, spec: &SweepSpec) -> Result<Document, CliError> {
    let rows = sweep_total_time(spec)?;
    let mut doc = run.start(command, SWEEP_COLUMNS.to_vec());
    run.provenance(&mut doc, Some(&spec.disorder), Some(spec.template.tau_iso), &direct_baths(&spec.template));
    resolved_template(&mut doc, &spec.template);
    resolved_grid(&mut doc, &spec.grid);
    for row in rows {
        let a = row.outcome?;
        doc.rows.push(vec![
            row.alpha_t_tot.into(),
            a.w_ex.into(),
            a.p_over_alpha2.into(),
            a.eta.into(),
            a.w_fric.into(),
        ]);
    }
    Ok(doc)
}

pub fn sweep(run: &Run) -> Result<Document, CliError> {
    let theta = run.theta_only(None)?;
    let spec = SweepSpec::new(run.settings.grid("grid", default_sweep_grid)?, run.template()?, DisorderSpec::delta(theta)?)?
        .with_tol(run.tol)?;
    sweep_document(run, "sweep", &spec)
}

pub fn disorder_sweep(run: &Run) -> Result<Document, CliError> {
    if run.settings.has("theta") {
        return Err(config_err("disorder-sweep takes 'disorder', not 'theta'"));
    }
    let disorder = run.settings.disorder(run.nodes)?.ok_or_else(|| config_err("'disorder' is required"))?;
    let spec = SweepSpec::new(run.settings.grid("grid", default_sweep_grid)?, run.template()?, disorder)?
        .with_tol(run.tol)?;
    sweep_document(run, "disorder-sweep", &spec)
}

pub fn pv_curve(run: &Run) -> Result<Document, CliError> {
    let spec = SweepSpec::new(run.settings.grid("grid", default_sweep_grid)?, run.template()?, run.angle_or_disorder()?)?
        .with_tol(run.tol)?;
    let curve = power_efficiency_curve(&spec)?;
    let mut doc = run.start("pv-curve", vec!["alpha_t_tot", "eta", "power"]);
    run.provenance(&mut doc, Some(&spec.disorder), Some(spec.template.tau_iso), &direct_baths(&spec.template));
    resolved_template(&mut doc, &spec.template);
    resolved_grid(&mut doc, &spec.grid);
    doc.rows = curve.iter().map(|p| vec![p.alpha_t_tot.into(), p.eta.into(), p.power.into()]).collect();
    Ok(doc)
}

pub fn max_power(run: &Run) -> Result<Document, CliError> {
    let s = &run.settings;
    let scan = s.get("scan").ok_or_else(|| config_err("'scan' is required (sigma2, beta_h or theta)"))?;
    let values = s.values()?;
    let grid = s.grid("grid", max_power_grid)?;
    let refine_tol = s.positive("refine_tol", REFINE_TOL)?;
    let convention = s.beta_convention()?;
    let alpha = s.positive("alpha", 1.0)?;
    let tau_iso = run.tau_iso()?;

    let mut specs = Vec::with_capacity(values.len());
    for &v in &values {
        let (disorder, (beta_c, beta_h)) = match scan {
            "sigma2" => {
                if s.has("theta") || s.has("disorder") {
                    return Err(config_err("a sigma2 scan sets the disorder itself"));
                }
                (DisorderSpec::gaussian(v)?.with_nodes(run.nodes)?, run.baths()?)
            }
            "theta" => {
                if s.has("theta") || s.has("disorder") {
                    return Err(config_err("a theta scan sets the angle itself"));
                }
                (DisorderSpec::delta(v)?, run.baths()?)
            }
            "beta_h" => {
                let baths = match convention {
                    Convention::Table(c) => c.baths(v),
                    Convention::Direct => (s.positive("beta_c", 1.0)?, v),
                };
                (run.angle_or_disorder()?, baths)
            }
            other => return Err(config_err(format!("scan '{other}': expected sigma2, beta_h or theta"))),
        };
        let template = CycleTemplate { alpha, tau_iso, ..CycleTemplate::new(beta_c, beta_h) };
        specs.push(SweepSpec::new(grid.clone(), template, disorder)?.with_tol(run.tol)?);
    }

    let mut doc = run.start("max-power", vec!["param", "alpha_t_max", "p_max_over_alpha2", "eta_at_pmax"]);
    let convention_text = match (scan, convention) {
        ("beta_h", Convention::Table(c)) => c.name().to_string(),
        ("beta_h", Convention::Direct) => format!("direct (beta_c = {})", s.positive("beta_c", 1.0)?),
        _ => {
            let (c, h) = run.baths()?;
            format!("direct (beta_c = {c}, beta_h = {h})")
        }
    };
    run.provenance(&mut doc, specs.first().map(|sp| &sp.disorder), Some(tau_iso), &convention_text);
    resolved(&mut doc, "alpha", alpha);
    resolved(&mut doc, "refine_tol", refine_tol);
    resolved_grid(&mut doc, &grid);
    for (v, spec) in values.iter().zip(&specs) {
        let r = maximize_power(spec, refine_tol)?;
        doc.rows.push(vec![(*v).into(), r.alpha_t_max.into(), r.p_max_over_alpha2.into(), r.eta_at_pmax.into()]);
    }
    Ok(doc)
}

pub fn optics_compile(run: &Run) -> Result<Document, CliError> {
    let spec = run.cycle_spec()?;
    let program = compile_cycle(&spec, run.tol)?;
    let columns = vec!["element", "psi", "theta_x", "phi", "global_phase", "target_p0", "z"];
    let mut doc = run.start("optics-compile", columns);
    let template = run.template()?;
    run.provenance(&mut doc, None, Some(spec.tau_iso), &direct_baths(&template));
    resolved_cycle(&mut doc, &spec);
    let nan = f64::NAN;
    doc.rows = program
        .elements()
        .iter()
        .map(|e| match *e {
            Element::Rot(a) => vec!["ROT".into(), a.psi.into(), a.theta_x.into(), a.phi.into(), a.global_phase.into(), nan.into(), nan.into()],
            Element::Therm { theta_x, target_p0, z } => {
                vec!["THERM".into(), nan.into(), theta_x.into(), nan.into(), nan.into(), target_p0.into(), z.into()]
            }
        })
        .collect();
    doc.body = Some(program.to_text());
    doc.json_extra.insert("program".into(), Value::String(program.to_text()));
    Ok(doc)
}
