//! Reference solutions on a [`DrivingPath`].
//!
//! For linear coefficients the SDE is a stochastic exponential. Writing the
//! compensated small-jump integral as `Σ F y p(ξ) − F y m1 dt`, the solution
//! between two events `s < t` is
//!
//! ```text
//! Y_t = Y_s · exp((b − F m1 − ½σ²)(t − s) + σ(W_t − W_s))
//! ```
//!
//! and a jump at `η` with mark `ξ` multiplies by `1 + F p(ξ)` (small) or
//! `1 + G q(ξ)` (tail). For a truncated model the small jumps and `m1` are
//! those of `D_ε`, so this is the solution of the truncated equation.
//!
//! When no closed form is wanted, [`fine_reference`] runs the Milstein scheme
//! on a much finer dyadic grid of the same path.

use serde::{Deserialize, Serialize};

use crate::levy::JumpRegion;
use crate::path::DrivingPath;
use crate::schemes::{values_at, LinearCoefficients, Scheme};
use crate::{Error, Result};

/// Minimum number of dyadic levels between a fine reference and the grids it judges.
pub const FINE_LEVEL_MARGIN: u32 = 4;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum OracleKind {
    #[default]
    Exact,
    FineGrid {
        level: u32,
    },
}

/// The exact solution at every event index of `path`.
pub fn exact_at_events(path: &DrivingPath, coef: &LinearCoefficients, y0: f64) -> Vec<f64> {
    let times = path.event_times();
    let w = path.w_values();
    let rate = coef.b - coef.f * coef.m1 - 0.5 * coef.sigma * coef.sigma;
    let mut jumps = path.jumps().iter().peekable();
    let mut out = Vec::with_capacity(times.len());
    let mut y = y0;
    out.push(y);
    for i in 1..times.len() {
        y *= (rate * (times[i] - times[i - 1]) + coef.sigma * (w[i] - w[i - 1])).exp();
        if let Some(j) = jumps.next_if(|j| j.index == i) {
            y *= match j.event.region {
                JumpRegion::Small => 1.0 + coef.f * coef.p.eval(j.event.mark),
                JumpRegion::Tail => 1.0 + coef.g * coef.q.eval(j.event.mark),
            };
        }
        out.push(y);
    }
    out
}

/// Event indices of `eval_times`; every time must be an event of the path.
pub fn event_indices(path: &DrivingPath, eval_times: &[f64]) -> Result<Vec<usize>> {
    eval_times
        .iter()
        .map(|&t| {
            path.event_index_of(t)
                .ok_or_else(|| Error::domain(format!("evaluation time {t} is not an event of the path")))
        })
        .collect()
}

pub fn exact_solution(
    path: &DrivingPath,
    eval_times: &[f64],
    coef: &LinearCoefficients,
    y0: f64,
) -> Result<Vec<f64>> {
    let idx = event_indices(path, eval_times)?;
    let all = exact_at_events(path, coef, y0);
    Ok(idx.into_iter().map(|i| all[i]).collect())
}

/// Milstein on the dyadic grid at `level`, read off at `eval_times`.
///
/// `study_level` is the finest grid being judged; `level` must exceed it by
/// at least [`FINE_LEVEL_MARGIN`].
pub fn fine_reference(
    path: &DrivingPath,
    eval_times: &[f64],
    coef: &LinearCoefficients,
    y0: f64,
    level: u32,
    study_level: u32,
) -> Result<Vec<f64>> {
    let idx = event_indices(path, eval_times)?;
    fine_reference_at(path, &idx, coef, y0, level, study_level)
}

/// [`fine_reference`] addressed by sorted event indices.
pub fn fine_reference_at(
    path: &DrivingPath,
    points: &[usize],
    coef: &LinearCoefficients,
    y0: f64,
    level: u32,
    study_level: u32,
) -> Result<Vec<f64>> {
    if level < study_level + FINE_LEVEL_MARGIN {
        return Err(Error::domain(format!(
            "reference level {level} must be at least {FINE_LEVEL_MARGIN} levels finer than {study_level}"
        )));
    }
    values_at(Scheme::Milstein, path, level, coef, y0, points)
}

/// Reference values at sorted event indices.
pub fn reference_at(
    kind: OracleKind,
    path: &DrivingPath,
    points: &[usize],
    coef: &LinearCoefficients,
    y0: f64,
    study_level: u32,
) -> Result<Vec<f64>> {
    match kind {
        OracleKind::Exact => {
            let all = exact_at_events(path, coef, y0);
            Ok(points.iter().map(|&i| all[i]).collect())
        }
        OracleKind::FineGrid { level } => fine_reference_at(path, points, coef, y0, level, study_level),
    }
}
