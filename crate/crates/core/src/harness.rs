//! Monte-Carlo strong-error and truncation studies.
//!
//! Every path is simulated once at the finest level. The oracle and all step
//! sizes are evaluated on that same path, so the measured quantity is pure
//! discretisation error:
//!
//! ```text
//! e(δ) = E max_{t ∈ grid(δ) ∪ jump times} |Y_t − Y^δ_t|²
//! ```
//!
//! The maximum over finitely many times is a lower bound for the supremum over
//! `[0, T]`. At a jump time the approximation is the continuous-time scheme,
//! i.e. the step from the previous grid point evaluated at the jump.
//!
//! The empirical order is the least-squares slope of `½ log e(δ)` against
//! `log δ`. Its standard error comes from the delta method with the full
//! covariance of the per-path errors across levels, which are strongly
//! correlated because the levels share paths.

use std::io::Write;

use serde::Serialize;

use crate::config::{SmallJumpConfig, StudyConfig, StudyModel};
use crate::exec::{map_paths, path_rng, Execution};
use crate::oracle::{exact_at_events, reference_at, OracleKind};
use crate::path::build_path;
use crate::schemes::{observation_points, values_at, Scheme};
use crate::{Error, Result};

/// Two-sided 95% normal quantile.
pub const Z_95: f64 = 1.959963984540054;

pub const ESTIMATOR_NOTE: &str = "sup is taken over grid points and jump times only, \
a lower bound of the supremum over [0, T]; standard errors are across paths";

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LevelError {
    pub level: u32,
    pub delta: f64,
    /// mean over paths of `max |Y − Y^δ|²`
    pub mean_sup_sq_error: f64,
    pub std_err: f64,
    /// mean over paths of `max_grid |Y^δ|²`
    pub mean_sup_sq_value: f64,
    pub paths: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SlopeFit {
    pub slope: f64,
    pub std_err: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    /// indices (into the level table) used by the fit
    pub used: Vec<usize>,
    /// set when the coarsest point was dropped as pre-asymptotic
    pub coarsest_excluded: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConvergenceReport {
    pub scheme: Scheme,
    pub variant: crate::schemes::FormulaVariant,
    pub target_order: f64,
    pub levels: Vec<LevelError>,
    pub fit: SlopeFit,
    pub seed: u64,
    pub paths: usize,
    pub config_hash: String,
    pub note: &'static str,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TruncationRow {
    pub epsilon: f64,
    /// `L^ε = ∫_{B_ε} p² dν`
    pub l_eps: f64,
    /// mean over paths of `max |Y^{δ,ε} − Y^{δ,ε₀}|²`
    pub mean_sup_sq_diff: f64,
    pub std_err: f64,
    pub paths: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TruncationReport {
    pub scheme: Scheme,
    pub level: u32,
    pub delta: f64,
    pub reference_epsilon: f64,
    pub a: f64,
    /// `2 − a`, the exponent of `L^ε`
    pub target_slope: f64,
    pub rows: Vec<TruncationRow>,
    pub fit: SlopeFit,
    pub seed: u64,
    pub paths: usize,
    pub config_hash: String,
    pub note: &'static str,
}

/// Sample means, standard errors of the means and the covariance matrix of
/// the means, from per-path rows of equal length.
#[derive(Clone, Debug, PartialEq)]
pub struct SampleStats {
    pub mean: Vec<f64>,
    pub std_err: Vec<f64>,
    /// `Cov(mean_k, mean_l)`
    pub cov_of_mean: Vec<Vec<f64>>,
}

impl SampleStats {
    pub fn from_rows(rows: &[Vec<f64>]) -> Self {
        let n = rows.len();
        let k = rows.first().map_or(0, Vec::len);
        let mut mean = vec![0.0; k];
        for r in rows {
            for (m, v) in mean.iter_mut().zip(r) {
                *m += v;
            }
        }
        mean.iter_mut().for_each(|m| *m /= n as f64);
        let mut cov = vec![vec![0.0; k]; k];
        for r in rows {
            for a in 0..k {
                for b in 0..k {
                    cov[a][b] += (r[a] - mean[a]) * (r[b] - mean[b]);
                }
            }
        }
        let denom = ((n.max(2) - 1) * n) as f64;
        cov.iter_mut().flatten().for_each(|c| *c /= denom);
        let std_err = (0..k).map(|a| cov[a][a].sqrt()).collect();
        SampleStats { mean, std_err, cov_of_mean: cov }
    }
}

/// Least-squares slope of `scale · log mean` against `x`, with a delta-method
/// standard error from `cov_of_mean`.
pub fn fit_log_slope(x: &[f64], stats: &SampleStats, used: &[usize], scale: f64) -> Result<(f64, f64)> {
    if used.len() < 2 {
        return Err(Error::domain("a slope needs at least two points"));
    }
    if used.iter().any(|&i| !(stats.mean[i] > 0.0)) {
        return Err(Error::domain("mean errors must be strictly positive for a log-log fit"));
    }
    let xs: Vec<f64> = used.iter().map(|&i| x[i]).collect();
    let x_bar = xs.iter().sum::<f64>() / xs.len() as f64;
    let sxx: f64 = xs.iter().map(|v| (v - x_bar).powi(2)).sum();
    let w: Vec<f64> = xs.iter().map(|v| (v - x_bar) / sxx).collect();
    let slope = used.iter().zip(&w).map(|(&i, wi)| wi * scale * stats.mean[i].ln()).sum();
    // d(scale·ln m)/dm = scale/m
    let mut var = 0.0;
    for (a, &i) in used.iter().enumerate() {
        for (b, &j) in used.iter().enumerate() {
            let gi = scale / stats.mean[i];
            let gj = scale / stats.mean[j];
            var += w[a] * w[b] * gi * gj * stats.cov_of_mean[i][j];
        }
    }
    Ok((slope, var.max(0.0).sqrt()))
}

/// Fits all points ordered coarse to fine, dropping the coarsest when it is
/// within two standard errors of its neighbour and at least three points remain.
fn guarded_fit(x: &[f64], stats: &SampleStats, scale: f64) -> Result<SlopeFit> {
    let n = x.len();
    let mut used: Vec<usize> = (0..n).collect();
    let mut coarsest_excluded = false;
    if n >= 3 {
        let diff = stats.mean[0] - stats.mean[1];
        let var = stats.cov_of_mean[0][0] + stats.cov_of_mean[1][1] - 2.0 * stats.cov_of_mean[0][1];
        if diff.abs() <= 2.0 * var.max(0.0).sqrt() {
            used.remove(0);
            coarsest_excluded = true;
            log::info!("coarsest point excluded from the slope fit");
        }
    }
    let (slope, se) = fit_log_slope(x, stats, &used, scale)?;
    Ok(SlopeFit {
        slope,
        std_err: se,
        ci_low: slope - Z_95 * se,
        ci_high: slope + Z_95 * se,
        used,
        coarsest_excluded,
    })
}

fn max_sq_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).fold(0.0, f64::max)
}

/// Per-path `[sup² error per level…, sup²|Y^δ| per level…]`.
fn path_errors(
    cfg: &StudyConfig,
    model: &StudyModel,
    coef: &crate::schemes::LinearCoefficients,
    index: usize,
) -> Result<Vec<f64>> {
    let mut rng = path_rng(cfg.seed, index as u64);
    let path = build_path(cfg.horizon, cfg.finest_level(), model, &mut rng)?;
    let exact = matches!(cfg.oracle, OracleKind::Exact).then(|| exact_at_events(&path, coef, cfg.y0));
    let k = cfg.levels.len();
    let mut out = vec![0.0; 2 * k];
    for (l, &level) in cfg.levels.iter().enumerate() {
        let points = observation_points(&path, level)?;
        let reference = match &exact {
            Some(all) => points.iter().map(|&i| all[i]).collect(),
            None => reference_at(cfg.oracle, &path, &points, coef, cfg.y0, cfg.max_level())?,
        };
        let approx = values_at(cfg.scheme, &path, level, coef, cfg.y0, &points)?;
        out[l] = max_sq_diff(&approx, &reference);
        let grid = path.grid_indices(level)?;
        let mut g = 0;
        let mut sup_y = 0.0f64;
        for (p, v) in points.iter().zip(&approx) {
            if g < grid.len() && *p == grid[g] {
                sup_y = sup_y.max(v * v);
                g += 1;
            }
        }
        out[k + l] = sup_y;
    }
    Ok(out)
}

fn collect<T>(results: Vec<Result<T>>) -> Result<Vec<T>> {
    results.into_iter().collect()
}

pub fn strong_error_study(cfg: &StudyConfig, exec: Execution) -> Result<ConvergenceReport> {
    cfg.validate()?;
    let model = cfg.study_model()?;
    let coef = cfg.coefficients_for(&model)?;
    let rows = collect(map_paths(cfg.paths, exec, |i| path_errors(cfg, &model, &coef, i)))?;
    let stats = SampleStats::from_rows(&rows);
    let k = cfg.levels.len();

    let levels: Vec<LevelError> = cfg
        .levels
        .iter()
        .enumerate()
        .map(|(l, &level)| LevelError {
            level,
            delta: cfg.horizon / (1u64 << level) as f64,
            mean_sup_sq_error: stats.mean[l],
            std_err: stats.std_err[l],
            mean_sup_sq_value: stats.mean[k + l],
            paths: cfg.paths,
        })
        .collect();
    let x: Vec<f64> = levels.iter().map(|e| e.delta.ln()).collect();
    let err_stats = SampleStats {
        mean: stats.mean[..k].to_vec(),
        std_err: stats.std_err[..k].to_vec(),
        cov_of_mean: stats.cov_of_mean[..k].iter().map(|r| r[..k].to_vec()).collect(),
    };
    let fit = if k >= 2 {
        guarded_fit(&x, &err_stats, 0.5)?
    } else {
        SlopeFit { slope: f64::NAN, std_err: f64::NAN, ci_low: f64::NAN, ci_high: f64::NAN, used: vec![0], coarsest_excluded: false }
    };
    Ok(ConvergenceReport {
        scheme: cfg.scheme,
        variant: cfg.variant,
        target_order: cfg.scheme.order().gamma(),
        levels,
        fit,
        seed: cfg.seed,
        paths: cfg.paths,
        config_hash: cfg.hash(),
        note: ESTIMATOR_NOTE,
    })
}

/// Scheme values at grid points and jump times of one path, with the exact
/// solution alongside: `(time, y_scheme, y_oracle)`.
pub fn simulate_trajectory(cfg: &StudyConfig, level: u32) -> Result<Vec<(f64, f64, f64)>> {
    cfg.validate()?;
    if level > cfg.finest_level() {
        return Err(Error::config(format!("level {level} is finer than the simulated paths")));
    }
    let model = cfg.study_model()?;
    let coef = cfg.coefficients_for(&model)?;
    let mut rng = path_rng(cfg.seed, 0);
    let path = build_path(cfg.horizon, cfg.finest_level(), &model, &mut rng)?;
    let points = observation_points(&path, level)?;
    let approx = values_at(cfg.scheme, &path, level, &coef, cfg.y0, &points)?;
    let reference = reference_at(cfg.oracle, &path, &points, &coef, cfg.y0, level)?;
    let times = path.event_times();
    Ok(points.iter().zip(approx.iter().zip(&reference)).map(|(&i, (&a, &r))| (times[i], a, r)).collect())
}

/// Compares the scheme under truncations `ε` against a reference `ε₀ = min ε / 4`
/// on coupled paths: small jumps are drawn once on `D_{ε₀}` and thinned to `D_ε`.
pub fn truncation_study(cfg: &StudyConfig, exec: Execution) -> Result<TruncationReport> {
    cfg.validate()?;
    let tcfg = cfg
        .truncation
        .as_ref()
        .ok_or_else(|| Error::config("a truncation study needs a `truncation` block"))?;
    let a = match cfg.model.small {
        SmallJumpConfig::PowerLaw { a, .. } => a,
        SmallJumpConfig::Atoms { .. } => {
            return Err(Error::config("the truncation study applies to infinite-activity (power-law) models only"))
        }
    };
    let mut eps = tcfg.epsilons.clone();
    eps.sort_by(|x, y| y.total_cmp(x));
    eps.dedup();
    let eps0 = eps.last().copied().expect("validated non-empty") / 4.0;
    let base = cfg.levy_model()?;
    let reference = base.truncate(eps0)?;
    let coef0 = cfg.coefficients_for(&reference)?;
    let truncated = eps.iter().map(|&e| base.truncate(e)).collect::<Result<Vec<_>>>()?;
    let coefs = truncated.iter().map(|t| cfg.coefficients_for(t)).collect::<Result<Vec<_>>>()?;
    let level = tcfg.level;

    let per_path = |i: usize| -> Result<Vec<f64>> {
        let mut rng = path_rng(cfg.seed, i as u64);
        let path = build_path(cfg.horizon, level, &reference, &mut rng)?;
        let points = observation_points(&path, level)?;
        let y_ref = values_at(cfg.scheme, &path, level, &coef0, cfg.y0, &points)?;
        eps.iter()
            .zip(&coefs)
            .map(|(&e, c)| {
                let thinned = path.restrict_small(e);
                let y = values_at(cfg.scheme, &thinned, level, c, cfg.y0, &points)?;
                Ok(max_sq_diff(&y, &y_ref))
            })
            .collect()
    };
    let rows = collect(map_paths(cfg.paths, exec, per_path))?;
    let stats = SampleStats::from_rows(&rows);
    let x: Vec<f64> = eps.iter().map(|e| e.ln()).collect();
    let fit = if eps.len() >= 2 {
        let (slope, se) = fit_log_slope(&x, &stats, &(0..eps.len()).collect::<Vec<_>>(), 1.0)?;
        SlopeFit {
            slope,
            std_err: se,
            ci_low: slope - Z_95 * se,
            ci_high: slope + Z_95 * se,
            used: (0..eps.len()).collect(),
            coarsest_excluded: false,
        }
    } else {
        SlopeFit { slope: f64::NAN, std_err: f64::NAN, ci_low: f64::NAN, ci_high: f64::NAN, used: vec![0], coarsest_excluded: false }
    };
    let rows = eps
        .iter()
        .zip(&truncated)
        .enumerate()
        .map(|(i, (&e, t))| TruncationRow {
            epsilon: e,
            l_eps: t.residual_l_eps,
            mean_sup_sq_diff: stats.mean[i],
            std_err: stats.std_err[i],
            paths: cfg.paths,
        })
        .collect();
    Ok(TruncationReport {
        scheme: cfg.scheme,
        level,
        delta: cfg.horizon / (1u64 << level) as f64,
        reference_epsilon: eps0,
        a,
        target_slope: 2.0 - a,
        rows,
        fit,
        seed: cfg.seed,
        paths: cfg.paths,
        config_hash: cfg.hash(),
        note: "slope of log E max|Y^{δ,ε} − Y^{δ,ε₀}|² against log ε; max over grid points and jump times",
    })
}

pub fn write_errors_csv<W: Write>(report: &ConvergenceReport, mut out: W) -> Result<()> {
    writeln!(out, "delta,mean_sup_sq_error,std_err,paths")?;
    for e in &report.levels {
        writeln!(out, "{},{},{},{}", e.delta, e.mean_sup_sq_error, e.std_err, e.paths)?;
    }
    Ok(())
}

pub fn write_truncation_csv<W: Write>(report: &TruncationReport, mut out: W) -> Result<()> {
    writeln!(out, "epsilon,l_eps,mean_sup_sq_diff,std_err,paths")?;
    for r in &report.rows {
        writeln!(out, "{},{},{},{},{}", r.epsilon, r.l_eps, r.mean_sup_sq_diff, r.std_err, r.paths)?;
    }
    Ok(())
}

pub fn write_trajectory_csv<W: Write>(rows: &[(f64, f64, f64)], mut out: W) -> Result<()> {
    writeln!(out, "time,y_scheme,y_oracle")?;
    for (t, a, r) in rows {
        writeln!(out, "{t},{a},{r}")?;
    }
    Ok(())
}

pub fn write_json<T: Serialize, W: Write>(value: &T, mut out: W) -> Result<()> {
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    Ok(())
}
