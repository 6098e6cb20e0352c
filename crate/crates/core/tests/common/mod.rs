//! Test-only oracles and fixtures.
//!
//! The event-walk evaluator computes `I_α` for `|α| ≤ 2` of the linear model
//! directly from the definition of the iterated integral. The inner integral
//! `X(s) = ∫_τ^s d(a)` is split into a pure-jump part `Σ_{η_k ≤ s} w_k` and a
//! continuous part `c_t (s − τ) + c_w (W_s − W_τ)`. The outer integral is then
//! evaluated against `d(b)` by walking the events of the step once:
//!
//! - `ds`: `Σ_k w_k (τ' − η_k) + c_t Δ²/2 + c_w ΔZ`
//! - `dW`: `Σ_k w_k (W_τ' − W(η_k)) + c_t (Δ ΔW − ΔZ) + c_w ½(ΔW² − Δ)`
//! - `Ñ` on the small region: `Σ_{small n} p_n X(η_n−) − m1 ∫ X ds`
//! - `N` on the tail: `Σ_{tail n} q_n X(η_n−)`
//!
//! It shares no code with the library's closed forms.

#![allow(dead_code)]

use levy_strong::config::StudyConfig;
use levy_strong::levy::JumpRegion;
use levy_strong::path::{IntervalSlice, JumpEvent};
use levy_strong::schemes::{FormulaVariant, LinearCoefficients};
use levy_strong::Amplitude;
use rand::Rng;

/// Which small jumps an integrator sees and the matching compensator.
#[derive(Clone, Copy, Debug)]
pub struct SmallFilter {
    pub lo: f64,
    pub hi: f64,
    pub m1: f64,
}

impl SmallFilter {
    pub fn all(m1: f64) -> Self {
        SmallFilter { lo: 0.0, hi: 1.0, m1 }
    }

    fn sees(&self, mark: f64) -> bool {
        let r = mark.abs();
        r >= self.lo && r < self.hi
    }
}

struct Inner {
    /// (time, W(η), weight) of the jumps that move X
    jumps: Vec<(f64, f64, f64)>,
    c_t: f64,
    c_w: f64,
}

fn inner(digit: u8, s: &IntervalSlice, c: &LinearCoefficients, small: SmallFilter) -> Inner {
    let jumps = s
        .jumps
        .iter()
        .filter_map(|j| match (digit, j.region) {
            (2, JumpRegion::Small) if small.sees(j.mark) => Some((j.time, j.w, c.p.eval(j.mark))),
            (3, JumpRegion::Tail) => Some((j.time, j.w, c.q.eval(j.mark))),
            _ => None,
        })
        .collect();
    let (c_t, c_w) = match digit {
        0 => (1.0, 0.0),
        1 => (0.0, 1.0),
        2 => (-small.m1, 0.0),
        _ => (0.0, 0.0),
    };
    Inner { jumps, c_t, c_w }
}

impl Inner {
    /// `X(t−)`
    fn left_limit(&self, t: f64, w_t: f64, s: &IntervalSlice) -> f64 {
        let jumps: f64 = self.jumps.iter().filter(|(tk, _, _)| *tk < t).map(|(_, _, w)| w).sum();
        jumps + self.c_t * (t - s.left) + self.c_w * (w_t - s.w_left)
    }

    fn ds(&self, s: &IntervalSlice) -> f64 {
        let jumps: f64 = self.jumps.iter().map(|(t, _, w)| w * (s.right - t)).sum();
        jumps + self.c_t * s.delta * s.delta / 2.0 + self.c_w * s.delta_z
    }

    fn dw(&self, s: &IntervalSlice) -> f64 {
        let jumps: f64 = self.jumps.iter().map(|(_, wk, w)| w * (s.w_right - wk)).sum();
        jumps
            + self.c_t * (s.delta * s.delta_w - s.delta_z)
            + self.c_w * 0.5 * (s.delta_w * s.delta_w - s.delta)
    }
}

fn coef_of(digit: u8, c: &LinearCoefficients) -> f64 {
    match digit {
        0 => c.b,
        1 => c.sigma,
        2 => c.f,
        _ => c.g,
    }
}

/// `I_α` with `f_α` evaluated at `y`; digits of `alpha` run inner to outer.
/// `filters[i]` restricts the i-th small-jump digit of `alpha`.
pub fn walk_term_filtered(
    alpha: &[u8],
    y: f64,
    s: &IntervalSlice,
    c: &LinearCoefficients,
    filters: &[SmallFilter],
) -> f64 {
    let mut filters = filters.iter().copied();
    let mut next_filter = |d: u8| if d == 2 { filters.next().unwrap_or(SmallFilter::all(c.m1)) } else { SmallFilter::all(c.m1) };
    let coef: f64 = alpha.iter().map(|&d| coef_of(d, c)).product::<f64>() * y;
    match *alpha {
        [a] => {
            let x = inner(a, s, c, next_filter(a));
            // X(τ') with the continuous part evaluated at the right end
            let jumps: f64 = x.jumps.iter().map(|(_, _, w)| w).sum();
            coef * (jumps + x.c_t * s.delta + x.c_w * s.delta_w)
        }
        [a, b] => {
            let x = inner(a, s, c, next_filter(a));
            let outer_filter = next_filter(b);
            let value = match b {
                0 => x.ds(s),
                1 => x.dw(s),
                2 => {
                    let jumps: f64 = s
                        .jumps
                        .iter()
                        .filter(|j| j.region == JumpRegion::Small && outer_filter.sees(j.mark))
                        .map(|j| c.p.eval(j.mark) * x.left_limit(j.time, j.w, s))
                        .sum();
                    jumps - outer_filter.m1 * x.ds(s)
                }
                _ => s
                    .jumps
                    .iter()
                    .filter(|j| j.region == JumpRegion::Tail)
                    .map(|j| c.q.eval(j.mark) * x.left_limit(j.time, j.w, s))
                    .sum(),
            };
            coef * value
        }
        _ => panic!("walk oracle handles |α| ≤ 2"),
    }
}

pub fn walk_term(alpha: &[u8], y: f64, s: &IntervalSlice, c: &LinearCoefficients) -> f64 {
    walk_term_filtered(alpha, y, s, c, &[])
}

/// A random slice on `(left, left + Δ]` with `0..=max_jumps` jumps of either region.
pub fn random_slice<R: Rng>(rng: &mut R, max_jumps: usize) -> IntervalSlice {
    let left = rng.random_range(0.0..2.0);
    let delta = rng.random_range(0.01..1.0);
    let right = left + delta;
    let k = rng.random_range(0..=max_jumps);
    let mut times: Vec<f64> = (0..k).map(|_| left + delta * rng.random_range(0.001..1.0)).collect();
    times.sort_by(f64::total_cmp);
    times.dedup();
    let w_left = rng.random_range(-1.0..1.0);
    let events: Vec<(JumpEvent, f64)> = times
        .iter()
        .map(|&t| {
            let mark = if rng.random_bool(0.5) {
                rng.random_range(-0.99..0.99)
            } else {
                rng.random_range(1.0..3.0) * if rng.random_bool(0.5) { 1.0 } else { -1.0 }
            };
            let event = JumpEvent { time: t, mark, region: JumpRegion::of_mark(mark) };
            (event, w_left + rng.random_range(-1.0..1.0))
        })
        .collect();
    let w_right = w_left + rng.random_range(-1.0..1.0);
    let delta_z = rng.random_range(-0.5..0.5) * delta;
    IntervalSlice::new(left, right, w_left, w_right, delta_z, &events).expect("valid slice")
}

pub fn random_coefficients<R: Rng>(rng: &mut R) -> LinearCoefficients {
    let amp = |rng: &mut R| {
        if rng.random_bool(0.5) {
            Amplitude::Linear { scale: rng.random_range(-2.0..2.0) }
        } else {
            Amplitude::Sine { scale: rng.random_range(-2.0..2.0) }
        }
    };
    LinearCoefficients {
        b: rng.random_range(-1.0..1.0),
        sigma: rng.random_range(-1.0..1.0),
        f: rng.random_range(-1.0..1.0),
        g: rng.random_range(-1.0..1.0),
        p: amp(rng),
        q: amp(rng),
        m1: rng.random_range(-1.0..1.0),
        m2: 1.0,
        variant: FormulaVariant::Exact,
    }
}

pub const REFERENCE_MODEL: &str = r#"{
    "small": { "kind": "atoms", "atoms": [{ "x": 0.5, "mass": 0.6 }, { "x": -0.25, "mass": 0.4 }] },
    "tail": [{ "x": 1.5, "mass": 0.3 }, { "x": -1.2, "mass": 0.2 }],
    "p": { "kind": "linear", "scale": 1.0 },
    "q": { "kind": "linear", "scale": 1.0 }
}"#;

/// The acceptance configuration: `b = −0.5, σ = 0.3, F = 0.2, G = 0.1`,
/// `p = q = x`, `λ_B = 1`, `λ_{B'} = 0.5`, `T = 1`, `δ = 2^-3 … 2^-8`.
pub fn reference_config(scheme: &str, paths: usize, seed: u64) -> StudyConfig {
    let text = format!(
        r#"{{
            "model": {REFERENCE_MODEL},
            "coefficients": {{ "b": -0.5, "sigma": 0.3, "f": 0.2, "g": 0.1 }},
            "y0": 1.0,
            "horizon": 1.0,
            "scheme": "{scheme}",
            "levels": [3, 4, 5, 6, 7, 8],
            "finest_level": 10,
            "paths": {paths},
            "seed": {seed}
        }}"#
    );
    StudyConfig::from_json(&text).expect("reference config is valid")
}

/// Power-law model `|x|^{-1-a}` with the reference tail, truncation study at level 6.
pub fn truncation_config(a: f64, paths: usize, seed: u64) -> StudyConfig {
    let text = format!(
        r#"{{
            "model": {{
                "small": {{ "kind": "power_law", "c": 1.0, "a": {a} }},
                "tail": [{{ "x": 1.5, "mass": 0.3 }}, {{ "x": -1.2, "mass": 0.2 }}]
            }},
            "coefficients": {{ "b": -0.5, "sigma": 0.3, "f": 0.2, "g": 0.1 }},
            "scheme": "milstein",
            "levels": [6],
            "paths": {paths},
            "seed": {seed},
            "truncation": {{ "epsilons": [0.25, 0.125, 0.0625, 0.03125, 0.015625], "level": 6 }}
        }}"#
    );
    StudyConfig::from_json(&text).expect("truncation config is valid")
}

/// `|a − b| ≤ tol · max(1, |a|, |b|)`
pub fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * 1f64.max(a.abs()).max(b.abs())
}
