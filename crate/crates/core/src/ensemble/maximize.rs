use serde::{Deserialize, Serialize};

use super::sweep::{average_cycle, averages_on_grid, require_grid, SweepSpec};
use crate::error::{invalid, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MaxPowerResult {
    pub alpha_t_max: f64,
    pub p_max_over_alpha2: f64,
    pub eta_at_pmax: f64,
}

const INV_PHI: f64 = 0.618_033_988_749_894_8;

/// Golden-section search for a maximum of a unimodal `f` on `[a, b]`,
/// stopping once the bracket is narrower than `tol`. Returns the best
/// point evaluated.
pub fn golden_section_max<F>(mut f: F, a: f64, b: f64, tol: f64) -> Result<(f64, f64)>
where
    F: FnMut(f64) -> Result<f64>,
{
    if !(tol > 0.0) || !(a < b) {
        return Err(invalid("golden-section search needs a < b and a positive tolerance"));
    }
    let (mut lo, mut hi) = (a, b);
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let (mut f1, mut f2) = (f(x1)?, f(x2)?);
    while hi - lo > tol {
        if f1 >= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1)?;
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2)?;
        }
    }
    Ok(if f1 >= f2 { (x1, f1) } else { (x2, f2) })
}

/// Maximum of the averaged power over the time grid: a coarse scan picks
/// the best grid point, golden-section search refines between its
/// neighbours to width `refine_tol`.
pub fn maximize_power(spec: &SweepSpec, refine_tol: f64) -> Result<MaxPowerResult> {
    spec.validate()?;
    require_grid(spec, 3)?;
    if !(refine_tol > 0.0) {
        return Err(invalid(format!("refine_tol must be positive, got {refine_tol}")));
    }
    let coarse = averages_on_grid(spec)?;
    let mut best = 0;
    for (i, a) in coarse.iter().enumerate() {
        if a.power > coarse[best].power {
            best = i;
        }
    }
    let g = &spec.grid;
    if best == 0 || best == g.len() - 1 {
        return Err(Error::MaxOnBoundary { at: g[best] });
    }
    let eval = |t: f64| average_cycle(&spec.template, &spec.disorder, t, spec.tol);
    let (t, p) = golden_section_max(|t| eval(t).map(|a| a.power), g[best - 1], g[best + 1], refine_tol)?;
    let (t, avg) = if p >= coarse[best].power { (t, eval(t)?) } else { (g[best], coarse[best]) };
    Ok(MaxPowerResult { alpha_t_max: t, p_max_over_alpha2: avg.p_over_alpha2, eta_at_pmax: avg.eta })
}

/// Grid intervals across which the averaged work changes sign.
pub fn work_sign_changes(spec: &SweepSpec) -> Result<Vec<(f64, f64)>> {
    spec.validate()?;
    let w: Vec<f64> = averages_on_grid(spec)?.iter().map(|a| a.w_ex).collect();
    Ok((1..w.len())
        .filter(|&i| (w[i - 1] > 0.0) != (w[i] > 0.0))
        .map(|i| (spec.grid[i - 1], spec.grid[i]))
        .collect())
}

/// The total time `t_M` past which the averaged work stops being positive,
/// bisected to a relative width of `1e-8` inside the first sign change on
/// the grid.
pub fn max_positive_work_time(spec: &SweepSpec) -> Result<f64> {
    require_grid(spec, 2)?;
    let (mut lo, mut hi) = *work_sign_changes(spec)?.first().ok_or(Error::NoSignChange)?;
    let work = |t: f64| average_cycle(&spec.template, &spec.disorder, t, spec.tol).map(|a| a.w_ex);
    let lo_positive = work(lo)? > 0.0;
    while hi - lo > 1e-8 * hi {
        let mid = 0.5 * (lo + hi);
        if (work(mid)? > 0.0) == lo_positive {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
