//! Euler (γ = 1/2) and Milstein (γ = 1) steppers for linear coefficients
//!
//! ```text
//! b(y) = b·y,  σ(y) = σ·y,  F(y, x) = F·y·p(x),  G(y, x) = G·y·q(x).
//! ```
//!
//! Every multiple integral `I_α` over one step is assembled in closed form
//! from an [`IntervalSlice`]. With `m1 = ∫ p dν` over the active small region,
//! `P_n = p(ξ_n)·1_B(ξ_n)`, `Q_n = q(ξ_n)·1_{B'}(ξ_n)`, `W_n = W(η_n)` and the
//! step `(τ, τ']`, the double-jump and mixed terms are
//!
//! | term  | jump sum                                   | compensator                                  |
//! |-------|--------------------------------------------|----------------------------------------------|
//! | `I12` | `Σ_n P_n (W_n − W_τ)`                      | `− m1 ΔZ`                                    |
//! | `I13` | `Σ_n Q_n (W_n − W_τ)`                      |                                              |
//! | `I21` | `Σ_{n∈B} {Σ_{k≤n} P_k} (W(η̲_n) − W_n)`     | `− m1 (ΔW Δ − ΔZ)`                           |
//! | `I31` | `Σ_{n∈B'} {Σ_{k≤n} Q_k} (W(η̄_n) − W_n)`    |                                              |
//! | `I22` | `Σ_n {Σ_{k<n} P_k} P_n`                    | `− m1 Σ_n (η_n − τ) P_n − m1 Σ_{n∈B} {Σ_{k≤n} P_k}(η̲_n − η_n) + ½ m1² Δ²` |
//! | `I23` | `Σ_n {Σ_{k<n} P_k} Q_n`                    | `− m1 Σ_n (η_n − τ) Q_n`                     |
//! | `I32` | `Σ_n {Σ_{k<n} Q_k} P_n`                    | `− m1 Σ_{n∈B'} {Σ_{k≤n} Q_k}(η̄_n − η_n)`     |
//! | `I33` | `Σ_n {Σ_{k<n} Q_k} Q_n`                    |                                              |
//!
//! Sums over empty index ranges are zero. Multiplied by `Fσy`, `Gσy`, `F²y`,
//! `FGy` or `G²y` these are exactly the iterated integrals of the linear model
//! ([`FormulaVariant::Exact`]).
//!
//! [`FormulaVariant::AsPrinted`] instead evaluates the textbook-style
//! transcription of the same terms, which differs in three places:
//!
//! - `I21`, `I31` and the `η̲` compensator of `I22` sum over every jump `n`,
//!   not only jumps of the matching region;
//! - the jump sum of `I23` reads `Σ_n {Σ_{k<n} q(ξ_k)1_B(ξ_k)} p(ξ_n)1_{B'}(ξ_n)`;
//! - the compensator of `I32` reads `− m1 Σ_n {Σ_{k≤n} q(ξ_k)1_B(ξ_k)}(η̲_n − η_n)`.
//!
//! Both variants coincide on steps without jumps. Already a single jump
//! separates them through `I32`: the printed compensator reacts to a small
//! jump, the true one to a tail jump.

use serde::{Deserialize, Serialize};

use crate::levy::{ActiveModel, Amplitude, JumpRegion};
use crate::multiindex::{Multiindex, Order};
use crate::path::{DrivingPath, IntervalSlice};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    Euler,
    Milstein,
}

impl Scheme {
    pub fn order(self) -> Order {
        match self {
            Scheme::Euler => Order::EULER,
            Scheme::Milstein => Order::MILSTEIN,
        }
    }
}

impl std::fmt::Display for Scheme {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Scheme::Euler => "euler",
            Scheme::Milstein => "milstein",
        })
    }
}

/// Which transcription of the double-jump Milstein terms to evaluate.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FormulaVariant {
    /// The iterated integrals of the linear model.
    #[default]
    Exact,
    /// The literal transcription described in the module docs.
    AsPrinted,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LinearCoefficients {
    pub b: f64,
    pub sigma: f64,
    pub f: f64,
    pub g: f64,
    pub p: Amplitude,
    pub q: Amplitude,
    /// `∫ p dν` over the active small region
    pub m1: f64,
    /// `∫ p² dν` over the active small region
    pub m2: f64,
    pub variant: FormulaVariant,
}

impl LinearCoefficients {
    /// Takes `p`, `q` and the moments from the active region of `model`.
    pub fn new<M: ActiveModel + ?Sized>(b: f64, sigma: f64, f: f64, g: f64, model: &M) -> Result<Self> {
        for (name, v) in [("b", b), ("sigma", sigma), ("F", f), ("G", g)] {
            if !v.is_finite() {
                return Err(Error::domain(format!("coefficient {name} = {v} is not finite")));
            }
        }
        Ok(LinearCoefficients {
            b,
            sigma,
            f,
            g,
            p: model.levy().p(),
            q: model.levy().q(),
            m1: model.small_moment(1)?,
            m2: model.small_moment(2)?,
            variant: FormulaVariant::Exact,
        })
    }

    pub fn with_variant(mut self, variant: FormulaVariant) -> Self {
        self.variant = variant;
        self
    }
}

/// Coefficient functions of the Euler expansion. This is the hook for
/// coefficients beyond the linear family.
pub trait EulerCoefficients {
    /// `f_0` without the compensator, i.e. `b(y)`
    fn drift(&self, y: f64) -> f64;
    /// `f_1 = σ(y)`
    fn diffusion(&self, y: f64) -> f64;
    /// `f_2(y, x) = F(y, x)`
    fn small_jump(&self, y: f64, mark: f64) -> f64;
    /// `f_3(y, x) = G(y, x)`
    fn tail_jump(&self, y: f64, mark: f64) -> f64;
    /// `∫ F(y, x) ν(dx)` over the active small region
    fn small_compensator(&self, y: f64) -> f64;
}

impl EulerCoefficients for LinearCoefficients {
    fn drift(&self, y: f64) -> f64 {
        self.b * y
    }

    fn diffusion(&self, y: f64) -> f64 {
        self.sigma * y
    }

    fn small_jump(&self, y: f64, mark: f64) -> f64 {
        self.f * y * self.p.eval(mark)
    }

    fn tail_jump(&self, y: f64, mark: f64) -> f64 {
        self.g * y * self.q.eval(mark)
    }

    fn small_compensator(&self, y: f64) -> f64 {
        self.f * y * self.m1
    }
}

/// `y + I0 + I1 + I2 + I3` for any coefficient family.
pub fn euler_step_with<C: EulerCoefficients + ?Sized>(y: f64, slice: &IntervalSlice, c: &C) -> f64 {
    let mut small = 0.0;
    let mut tail = 0.0;
    for j in &slice.jumps {
        match j.region {
            JumpRegion::Small => small += c.small_jump(y, j.mark),
            JumpRegion::Tail => tail += c.tail_jump(y, j.mark),
        }
    }
    y + c.drift(y) * slice.delta
        + c.diffusion(y) * slice.delta_w
        + (small - slice.delta * c.small_compensator(y))
        + tail
}

pub fn euler_step(y: f64, slice: &IntervalSlice, coef: &LinearCoefficients) -> f64 {
    euler_step_with(y, slice, coef)
}

/// The thirteen non-trivial terms of the order-1 expansion over one step.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct MilsteinTerms {
    pub i0: f64,
    pub i1: f64,
    pub i2: f64,
    pub i3: f64,
    pub i11: f64,
    pub i12: f64,
    pub i13: f64,
    pub i21: f64,
    pub i22: f64,
    pub i23: f64,
    pub i31: f64,
    pub i32: f64,
    pub i33: f64,
}

impl MilsteinTerms {
    pub const LABELS: [&'static str; 13] =
        ["0", "1", "2", "3", "11", "12", "13", "21", "22", "23", "31", "32", "33"];

    fn values(&self) -> [f64; 13] {
        [
            self.i0, self.i1, self.i2, self.i3, self.i11, self.i12, self.i13, self.i21, self.i22,
            self.i23, self.i31, self.i32, self.i33,
        ]
    }

    /// `(α, I_α)` pairs in canonical multiindex order.
    pub fn iter(&self) -> impl Iterator<Item = (Multiindex, f64)> {
        Self::LABELS
            .into_iter()
            .zip(self.values())
            .map(|(l, v)| (l.parse().expect("static label"), v))
    }

    pub fn get(&self, alpha: &Multiindex) -> Option<f64> {
        let label = alpha.to_string();
        Self::LABELS.iter().position(|&l| l == label).map(|i| self.values()[i])
    }

    pub fn total(&self) -> f64 {
        self.values().iter().sum()
    }
}

pub fn milstein_terms(y: f64, slice: &IntervalSlice, coef: &LinearCoefficients) -> MilsteinTerms {
    let c = coef;
    let as_printed = c.variant == FormulaVariant::AsPrinted;
    let (dt, dw, dz) = (slice.delta, slice.delta_w, slice.delta_z);

    // running sums Σ_{k<n}
    let (mut sp, mut sq, mut sq_small) = (0.0, 0.0, 0.0);
    let (mut sum_p, mut sum_q) = (0.0, 0.0);
    let (mut jw_p, mut jw_q) = (0.0, 0.0);
    let (mut s21, mut s31) = (0.0, 0.0);
    let (mut s22, mut s22_c1, mut s22_c2) = (0.0, 0.0, 0.0);
    let (mut s23, mut s23_c) = (0.0, 0.0);
    let (mut s32, mut s32_c) = (0.0, 0.0);
    let mut s33 = 0.0;

    for j in &slice.jumps {
        let small = j.region == JumpRegion::Small;
        let p_n = if small { c.p.eval(j.mark) } else { 0.0 };
        let q_n = if small { 0.0 } else { c.q.eval(j.mark) };
        let since_left = j.time - slice.left;
        let dw_tail = j.w_next_tail - j.w;
        let dw_small = j.w_next_small - j.w;

        sum_p += p_n;
        sum_q += q_n;
        jw_p += p_n * (j.w - slice.w_left);
        jw_q += q_n * (j.w - slice.w_left);

        s33 += sq * q_n;
        s32 += sq * p_n;
        s22 += sp * p_n;
        s22_c1 += since_left * p_n;
        s23_c += since_left * q_n;

        if as_printed {
            let qb_n = if small { c.q.eval(j.mark) } else { 0.0 };
            let pb_n = if small { 0.0 } else { c.p.eval(j.mark) };
            s23 += sq_small * pb_n;
            sq_small += qb_n;
            s21 += (sp + p_n) * dw_small;
            s31 += (sq + q_n) * dw_tail;
            s22_c2 += (sp + p_n) * (j.next_small_time - j.time);
            s32_c += sq_small * (j.next_small_time - j.time);
        } else {
            s23 += sp * q_n;
            if small {
                s21 += (sp + p_n) * dw_small;
                s22_c2 += (sp + p_n) * (j.next_small_time - j.time);
            } else {
                s31 += (sq + q_n) * dw_tail;
                s32_c += (sq + q_n) * (j.next_tail_time - j.time);
            }
        }

        sp += p_n;
        sq += q_n;
    }

    let m1 = c.m1;
    MilsteinTerms {
        i0: c.b * y * dt,
        i1: c.sigma * y * dw,
        i2: c.f * y * (sum_p - dt * m1),
        i3: c.g * y * sum_q,
        i11: 0.5 * c.sigma * c.sigma * y * (dw * dw - dt),
        i12: c.f * c.sigma * y * (jw_p - m1 * dz),
        i13: c.g * c.sigma * y * jw_q,
        i21: c.f * c.sigma * y * (s21 - m1 * (dw * dt - dz)),
        i22: c.f * c.f * y * (s22 - m1 * s22_c1 - m1 * s22_c2 + 0.5 * m1 * m1 * dt * dt),
        i23: c.f * c.g * y * (s23 - m1 * s23_c),
        i31: c.g * c.sigma * y * s31,
        i32: c.f * c.g * y * (s32 - m1 * s32_c),
        i33: c.g * c.g * y * s33,
    }
}

pub fn milstein_step(y: f64, slice: &IntervalSlice, coef: &LinearCoefficients) -> f64 {
    y + milstein_terms(y, slice, coef).total()
}

pub fn step(scheme: Scheme, y: f64, slice: &IntervalSlice, coef: &LinearCoefficients) -> f64 {
    match scheme {
        Scheme::Euler => euler_step(y, slice, coef),
        Scheme::Milstein => milstein_step(y, slice, coef),
    }
}

/// Approximation values on a time grid.
#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub values: Vec<f64>,
    pub scheme: Scheme,
    pub order: Order,
}

impl Trajectory {
    pub fn write_csv<W: std::io::Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "time,value")?;
        for (t, v) in self.times.iter().zip(&self.values) {
            writeln!(out, "{t},{v}")?;
        }
        Ok(())
    }
}

/// Steps `scheme` over `grid` (dyadic points of `path`) from `y0`.
pub fn run_scheme(
    scheme: Scheme,
    grid: &[f64],
    path: &DrivingPath,
    coef: &LinearCoefficients,
    y0: f64,
) -> Result<Trajectory> {
    let slices = path.slice(grid)?;
    let mut values = Vec::with_capacity(grid.len());
    let mut y = y0;
    values.push(y);
    for s in &slices {
        y = step(scheme, y, s, coef);
        values.push(y);
    }
    Ok(Trajectory { times: grid.to_vec(), values, scheme, order: scheme.order() })
}

/// Event indices of the dyadic grid at `level` merged with the jump times of `path`.
pub fn observation_points(path: &DrivingPath, level: u32) -> Result<Vec<usize>> {
    let mut pts = path.grid_indices(level)?;
    pts.extend(path.jumps().iter().map(|j| j.index));
    pts.sort_unstable();
    pts.dedup();
    Ok(pts)
}

/// The continuous-time approximation `Y^δ_t` at arbitrary event indices.
///
/// Between grid points `τ_i < t ≤ τ_{i+1}` the value is the step from `τ_i`
/// over `(τ_i, t]`, so values at jump times include the jump.
pub fn values_at(
    scheme: Scheme,
    path: &DrivingPath,
    level: u32,
    coef: &LinearCoefficients,
    y0: f64,
    points: &[usize],
) -> Result<Vec<f64>> {
    if points.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::domain("observation points must be sorted"));
    }
    let grid = path.grid_indices(level)?;
    let mut out = Vec::with_capacity(points.len());
    let mut pts = points.iter().copied().peekable();
    while pts.next_if_eq(&grid[0]).is_some() {
        out.push(y0);
    }
    let mut y = y0;
    for w in grid.windows(2) {
        let (left, right) = (w[0], w[1]);
        while let Some(p) = pts.next_if(|&p| p < right) {
            if p <= left {
                return Err(Error::domain(format!("observation point {p} precedes the grid")));
            }
            out.push(step(scheme, y, &path.slice_between(left, p), coef));
        }
        y = step(scheme, y, &path.slice_between(left, right), coef);
        while pts.next_if_eq(&right).is_some() {
            out.push(y);
        }
    }
    if pts.next().is_some() {
        return Err(Error::domain("observation point beyond the path horizon"));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::levy::{Atom, LevyModel};
    use crate::path::JumpEvent;

    fn coef(b: f64, sigma: f64, f: f64, g: f64, m1: f64) -> LinearCoefficients {
        LinearCoefficients {
            b,
            sigma,
            f,
            g,
            p: Amplitude::IDENTITY,
            q: Amplitude::IDENTITY,
            m1,
            m2: 0.0,
            variant: FormulaVariant::Exact,
        }
    }

    fn ev(t: f64, x: f64) -> JumpEvent {
        JumpEvent { time: t, mark: x, region: JumpRegion::of_mark(x) }
    }

    fn no_jump_slice(dw: f64, dz: f64) -> IntervalSlice {
        IntervalSlice::new(0.0, 0.25, 0.1, 0.1 + dw, dz, &[]).unwrap()
    }

    #[test]
    fn zero_coefficients_leave_y_unchanged() {
        let s = IntervalSlice::new(0.0, 0.5, 0.0, 0.3, 0.02, &[(ev(0.1, 0.4), 0.1), (ev(0.3, 1.5), 0.2)]).unwrap();
        let c = coef(0.0, 0.0, 0.0, 0.0, 0.7);
        assert_eq!(euler_step(2.0, &s, &c), 2.0);
        assert_eq!(milstein_step(2.0, &s, &c), 2.0);
    }

    #[test]
    fn euler_without_jumps() {
        let s = no_jump_slice(0.3, 0.01);
        let c = coef(-0.5, 0.3, 0.0, 0.0, 0.0);
        let y = 1.7;
        let expect = y * (1.0 + -0.5 * 0.25 + 0.3 * s.delta_w);
        assert!((euler_step(y, &s, &c) - expect).abs() < 1e-15);
    }

    #[test]
    fn euler_single_small_jump() {
        let s = IntervalSlice::new(0.0, 0.5, 0.0, 0.0, 0.0, &[(ev(0.2, 0.4), 0.0)]).unwrap();
        let c = coef(0.0, 0.0, 0.3, 0.0, 0.0);
        assert!((euler_step(2.0, &s, &c) - 2.0 * (1.0 + 0.3 * 0.4)).abs() < 1e-15);
    }

    #[test]
    fn milstein_without_jumps_reduces_to_diffusion_milstein() {
        let s = no_jump_slice(0.2, 0.03);
        let c = coef(-0.5, 0.3, 0.0, 0.0, 0.0);
        let y = 1.3;
        let t = milstein_terms(y, &s, &c);
        let dw = s.delta_w;
        assert!((t.i11 - 0.5 * 0.09 * y * (dw * dw - 0.25)).abs() < 1e-15);
        let classical = y * (1.0 - 0.5 * 0.25 + 0.3 * dw + 0.5 * 0.09 * (dw * dw - 0.25));
        assert!((milstein_step(y, &s, &c) - classical).abs() < 1e-15);
    }

    #[test]
    fn compensators_without_jumps() {
        let s = no_jump_slice(0.2, 0.03);
        let (f, sigma, m1, y) = (0.2, 0.3, 0.7, 1.1);
        let t = milstein_terms(y, &s, &coef(0.0, sigma, f, 0.1, m1));
        let (dt, dw, dz) = (s.delta, s.delta_w, s.delta_z);
        assert!((t.i21 + f * sigma * y * m1 * (dw * dt - dz)).abs() < 1e-15);
        assert!((t.i22 - f * f * y * 0.5 * m1 * m1 * dt * dt).abs() < 1e-15);
        assert!((t.i12 + f * sigma * y * m1 * dz).abs() < 1e-15);
        for v in [t.i3, t.i13, t.i23, t.i31, t.i32, t.i33] {
            assert_eq!(v, 0.0);
        }
    }

    #[test]
    fn variants_agree_without_jumps_and_split_on_i32() {
        let c = coef(-0.5, 0.3, 0.2, 0.1, 0.3);
        let printed = c.with_variant(FormulaVariant::AsPrinted);
        let s = no_jump_slice(0.2, 0.03);
        assert_eq!(milstein_terms(1.0, &s, &c), milstein_terms(1.0, &s, &printed));

        let s = IntervalSlice::new(0.0, 0.5, 0.0, 0.3, 0.02, &[(ev(0.1, 0.4), 0.1)]).unwrap();
        let (a, b) = (milstein_terms(1.0, &s, &c), milstein_terms(1.0, &s, &printed));
        assert_eq!(a.i32, 0.0);
        // −FG m1 q(ξ)(η̲ − η)
        assert!((b.i32 + 0.2 * 0.1 * 0.3 * 0.4 * 0.4).abs() < 1e-15);
        assert_eq!(MilsteinTerms { i32: 0.0, ..b }, a);

        let s = IntervalSlice::new(0.0, 0.5, 0.0, 0.3, 0.02, &[(ev(0.1, 1.5), 0.1)]).unwrap();
        let (a, b) = (milstein_terms(1.0, &s, &c), milstein_terms(1.0, &s, &printed));
        // −FG m1 q(ξ)(τ' − η)
        assert!((a.i32 + 0.2 * 0.1 * 0.3 * 1.5 * 0.4).abs() < 1e-15);
        assert_eq!(b.i32, 0.0);
    }

    #[test]
    fn variants_differ_when_tail_precedes_small() {
        // tail then small: the printed I31 picks up an extra segment
        let s = IntervalSlice::new(0.0, 0.5, 0.0, 0.3, 0.02, &[(ev(0.1, 1.5), 0.1), (ev(0.2, 0.4), -0.2)])
            .unwrap();
        let c = coef(0.0, 0.3, 0.2, 0.1, 0.3);
        let a = milstein_terms(1.0, &s, &c);
        let b = milstein_terms(1.0, &s, &c.with_variant(FormulaVariant::AsPrinted));
        // exact: G σ q₁ (W_τ' − W(η₁))
        assert!((a.i31 - 0.1 * 0.3 * 1.5 * (0.3 - 0.1)).abs() < 1e-15);
        assert_ne!(a.i31, b.i31);
    }

    #[test]
    fn terms_are_linear_in_y() {
        let s = IntervalSlice::new(
            0.0,
            0.5,
            0.0,
            0.3,
            0.02,
            &[(ev(0.1, 0.4), 0.1), (ev(0.2, -1.5), 0.0), (ev(0.4, -0.2), 0.2)],
        )
        .unwrap();
        let c = coef(-0.5, 0.3, 0.2, 0.1, 0.3);
        let y = 0.731;
        assert_eq!(milstein_step(2.0 * y, &s, &c), 2.0 * milstein_step(y, &s, &c));
        assert_eq!(euler_step(2.0 * y, &s, &c), 2.0 * euler_step(y, &s, &c));
    }

    #[test]
    fn labelled_terms_cover_milstein_set() {
        let set = crate::multiindex::hierarchical_set(Order::MILSTEIN);
        let t = MilsteinTerms::default();
        let labels: Vec<String> = t.iter().map(|(a, _)| a.to_string()).collect();
        let expected: Vec<String> = set.iter().filter(|a| !a.is_empty()).map(|a| a.to_string()).collect();
        assert_eq!(labels, expected);
        assert_eq!(t.get(&"32".parse().unwrap()), Some(0.0));
        assert_eq!(t.get(&"00".parse().unwrap()), None);
    }

    #[test]
    fn deterministic_euler_recursion() {
        let m = LevyModel::finite(vec![], vec![]).unwrap();
        let c = LinearCoefficients::new(0.7, 0.0, 0.0, 0.0, &m).unwrap();
        let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(1);
        let path = crate::path::build_path(1.0, 6, &m, &mut rng).unwrap();
        let grid = path.grid_times(4).unwrap();
        let tr = run_scheme(Scheme::Euler, &grid, &path, &c, 2.0).unwrap();
        let expect = 2.0 * (1.0 + 0.7 / 16.0f64).powi(16);
        assert!((tr.values.last().unwrap() - expect).abs() < 1e-12);
        assert_eq!(tr.values[0], 2.0);
        assert_eq!(tr.values.len(), grid.len());
    }

    #[test]
    fn values_at_grid_match_run_scheme() {
        let m = LevyModel::finite(
            vec![Atom { x: 0.5, mass: 3.0 }],
            vec![Atom { x: 1.5, mass: 2.0 }],
        )
        .unwrap();
        let c = LinearCoefficients::new(-0.5, 0.3, 0.2, 0.1, &m).unwrap();
        let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(4);
        let path = crate::path::build_path(1.0, 6, &m, &mut rng).unwrap();
        let grid_idx = path.grid_indices(3).unwrap();
        let tr = run_scheme(Scheme::Milstein, &path.grid_times(3).unwrap(), &path, &c, 1.0).unwrap();
        let v = values_at(Scheme::Milstein, &path, 3, &c, 1.0, &grid_idx).unwrap();
        assert_eq!(v, tr.values);
        let pts = observation_points(&path, 3).unwrap();
        assert_eq!(values_at(Scheme::Milstein, &path, 3, &c, 1.0, &pts).unwrap().len(), pts.len());
    }
}
