//! Flat `key = value` settings, layered: preset, then config file, then
//! command-line flags.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fs;
use std::path::Path;

use otto_core::ensemble::{geomspace, linspace};
use otto_core::presets::{self, BetaConvention};
use otto_core::DisorderSpec;

use crate::CliError;

/// Every key the commands understand.
pub const KEYS: &[&str] = &[
    "preset",
    "theta",
    "disorder",
    "nodes",
    "alpha",
    "alpha_t",
    "alpha_grid",
    "grid",
    "tau_iso",
    "beta",
    "beta_c",
    "beta_h",
    "beta_convention",
    "scan",
    "values",
    "tol",
    "refine_tol",
    "samples",
];

#[derive(Debug, Clone, Default)]
pub struct Settings {
    map: BTreeMap<String, String>,
}

fn config_err(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

impl Settings {
    pub fn set(&mut self, key: &str, value: impl Into<String>) -> Result<(), CliError> {
        if !KEYS.contains(&key) {
            return Err(config_err(format!("unknown key '{key}'")));
        }
        self.map.insert(key.to_string(), value.into());
        Ok(())
    }

    /// Parses `key = value` lines. `#` starts a comment; blank lines are skipped.
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut s = Self::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| config_err(format!("line {}: expected 'key = value'", i + 1)))?;
            s.set(k.trim(), v.trim()).map_err(|e| config_err(format!("line {}: {e}", i + 1)))?;
        }
        Ok(s)
    }

    pub fn from_file(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path)
            .map_err(|e| config_err(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// Entries of `other` replace ours.
    pub fn overlay(&mut self, other: &Settings) {
        for (k, v) in &other.map {
            self.map.insert(k.clone(), v.clone());
        }
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.map.get(key).map(String::as_str)
    }

    pub fn has(&self, key: &str) -> bool {
        self.map.contains_key(key)
    }

    pub fn entries(&self) -> impl Iterator<Item = (&String, &String)> {
        self.map.iter()
    }

    fn parsed<T>(&self, key: &str, f: impl Fn(&str) -> Result<T, String>) -> Result<Option<T>, CliError> {
        self.get(key)
            .map(|v| f(v).map_err(|e| config_err(format!("{key} = '{v}': {e}"))))
            .transpose()
    }

    pub fn number(&self, key: &str, default: f64) -> Result<f64, CliError> {
        Ok(self.parsed(key, parse_number)?.unwrap_or(default))
    }

    pub fn positive(&self, key: &str, default: f64) -> Result<f64, CliError> {
        let x = self.number(key, default)?;
        if !(x > 0.0 && x.is_finite()) {
            return Err(config_err(format!("{key} must be positive, got {x}")));
        }
        Ok(x)
    }

    pub fn count(&self, key: &str, default: usize) -> Result<usize, CliError> {
        Ok(self.parsed(key, |v| v.parse::<usize>().map_err(|e| e.to_string()))?.unwrap_or(default))
    }

    pub fn angle(&self) -> Result<Option<f64>, CliError> {
        self.parsed("theta", parse_angle)
    }

    pub fn grid(&self, key: &str, default: impl FnOnce() -> Vec<f64>) -> Result<Vec<f64>, CliError> {
        Ok(match self.parsed(key, parse_grid)? {
            Some(g) => g,
            None => default(),
        })
    }

    pub fn values(&self) -> Result<Vec<f64>, CliError> {
        self.parsed("values", parse_grid)?.ok_or_else(|| config_err("'values' is required with 'scan'"))
    }

    pub fn disorder(&self, nodes: usize) -> Result<Option<DisorderSpec>, CliError> {
        self.parsed("disorder", |v| parse_disorder(v, nodes))
    }

    pub fn beta_convention(&self) -> Result<Convention, CliError> {
        match self.get("beta_convention").unwrap_or("cold-hundred") {
            "cold-hundred" => Ok(Convention::Table(BetaConvention::ColdHundred)),
            "ratio-tenth" => Ok(Convention::Table(BetaConvention::RatioTenth)),
            "direct" => Ok(Convention::Direct),
            other => Err(config_err(format!(
                "beta_convention '{other}': expected cold-hundred, ratio-tenth or direct"
            ))),
        }
    }
}

/// How scanned `β_h` values become bath temperatures.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Convention {
    Table(BetaConvention),
    /// `β_c` from the settings and `β_h` as listed.
    Direct,
}

/// Defaults that reproduce the two reference tables.
pub fn preset(name: &str) -> Result<Settings, CliError> {
    let mut s = Settings::default();
    let join = |rows: &[presets::TableRow]| rows.iter().map(|r| r.param.to_string()).collect::<Vec<_>>().join(", ");
    match name {
        "sigma-table" => {
            s.set("scan", "sigma2")?;
            s.set("values", join(&presets::SIGMA_TABLE))?;
            s.set("beta_c", presets::SIGMA_TABLE_BETA_C.to_string())?;
            s.set("beta_h", (presets::SIGMA_TABLE_RATIO * presets::SIGMA_TABLE_BETA_C).to_string())?;
        }
        "beta-table" => {
            s.set("scan", "beta_h")?;
            s.set("values", join(&presets::BETA_TABLE))?;
            s.set("disorder", format!("gaussian:{}", presets::BETA_TABLE_SIGMA2))?;
            s.set("beta_convention", "cold-hundred")?;
        }
        other => return Err(config_err(format!("unknown preset '{other}': expected sigma-table or beta-table"))),
    }
    s.set("tau_iso", presets::TAU_ISO_FIT.to_string())?;
    s.set("refine_tol", presets::REFINE_TOL.to_string())?;
    Ok(s)
}

pub fn parse_number(s: &str) -> Result<f64, String> {
    let x: f64 = s.trim().parse().map_err(|_| format!("'{s}' is not a number"))?;
    if x.is_finite() {
        Ok(x)
    } else {
        Err(format!("'{s}' is not finite"))
    }
}

/// A number, or a multiple of π written like `pi`, `-pi/4`, `2pi/5`, `3*pi/8`.
pub fn parse_angle(s: &str) -> Result<f64, String> {
    let s = s.trim();
    let Some((coef, rest)) = s.split_once("pi") else {
        return parse_number(s);
    };
    let coef = coef.trim().trim_end_matches('*').trim();
    let k = match coef {
        "" | "+" => 1.0,
        "-" => -1.0,
        c => parse_number(c)?,
    };
    let rest = rest.trim();
    let d = match rest.strip_prefix('/') {
        Some(d) => parse_number(d)?,
        None if rest.is_empty() => 1.0,
        None => return Err(format!("cannot read angle '{s}'")),
    };
    if d == 0.0 {
        return Err("division by zero".into());
    }
    Ok(k * PI / d)
}

/// `start:stop:n` (evenly spaced), `geom:start:stop:n` (constant ratio), a
/// comma-separated list (entries may be multiples of π), or `none` for an
/// empty grid.
pub fn parse_grid(s: &str) -> Result<Vec<f64>, String> {
    let s = s.trim();
    if s.is_empty() || s == "none" {
        return Ok(vec![]);
    }
    let (geometric, body) = match s.strip_prefix("geom:") {
        Some(b) => (true, b),
        None => (false, s),
    };
    let parts: Vec<&str> = body.split(':').collect();
    match parts.as_slice() {
        [a, b, n] => {
            let (a, b) = (parse_number(a)?, parse_number(b)?);
            let n: usize = n.trim().parse().map_err(|_| format!("'{n}' is not a point count"))?;
            if geometric {
                if !(a > 0.0 && b > 0.0) {
                    return Err("geometric grid needs positive ends".into());
                }
                Ok(geomspace(a, b, n))
            } else {
                Ok(linspace(a, b, n))
            }
        }
        [_] if !geometric => body.split(',').map(parse_angle).collect(),
        _ => Err(format!("cannot read grid '{s}'")),
    }
}

/// `gaussian:<sigma2>`, `flat` or `delta:<angle>`.
pub fn parse_disorder(s: &str, nodes: usize) -> Result<DisorderSpec, String> {
    let s = s.trim();
    let spec = match s.split_once(':') {
        Some(("gaussian", v)) => DisorderSpec::gaussian(parse_number(v)?),
        Some(("delta", v)) => DisorderSpec::delta(parse_angle(v)?),
        None if s == "flat" => Ok(DisorderSpec::flat()),
        _ => return Err(format!("cannot read disorder '{s}': expected gaussian:<sigma2>, flat or delta:<angle>")),
    };
    spec.and_then(|d| d.with_nodes(nodes)).map_err(|e| e.to_string())
}
