//! Lévy measures, amplitude functions and ε-truncation.
//!
//! The measure ν is split into its restriction to the unit ball
//! `B = {0 < |x| < 1}` (the small jumps) and to `B' = {|x| ≥ 1}` (the tail).
//! The tail always has finite mass. The small part is either a finite list of
//! atoms or the symmetric power law `c·|x|^{−1−a}`, `0 < a < 2`, which has
//! infinite mass and has to be truncated to the disc `D_ε = {ε ≤ |x| < 1}`
//! before it can be simulated. What is cut away, the ball `B_ε = {|x| < ε}`,
//! is summarised by `L^ε = ∫_{B_ε} p² dν`.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Relative tolerance of quadrature-evaluated moments.
pub const QUADRATURE_RTOL: f64 = 1e-10;

/// Which side of the unit sphere a jump mark lives on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum JumpRegion {
    Small,
    Tail,
}

impl JumpRegion {
    pub fn of_mark(x: f64) -> JumpRegion {
        if x.abs() < 1.0 {
            JumpRegion::Small
        } else {
            JumpRegion::Tail
        }
    }
}

/// Integration regions for moments and mark sampling.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Region {
    /// `B \ {0}`
    Small,
    /// `D_ε = {ε ≤ |x| < 1}`
    Disc(f64),
    /// `B_ε \ {0} = {0 < |x| < ε}`
    EpsBall(f64),
    /// `B' = {|x| ≥ 1}`
    Tail,
}

impl Region {
    pub fn contains(&self, x: f64) -> bool {
        let r = x.abs();
        match *self {
            Region::Small => r > 0.0 && r < 1.0,
            Region::Disc(eps) => r >= eps && r < 1.0,
            Region::EpsBall(eps) => r > 0.0 && r < eps,
            Region::Tail => r >= 1.0,
        }
    }

    fn validate(&self) -> Result<()> {
        match *self {
            Region::Disc(eps) | Region::EpsBall(eps) if !(eps > 0.0 && eps < 1.0) => {
                Err(Error::domain(format!("ε = {eps} is outside (0, 1)")))
            }
            _ => Ok(()),
        }
    }

    /// `(lo, hi)` radii of the region on the small side.
    fn radii(&self) -> Option<(f64, f64)> {
        match *self {
            Region::Small => Some((0.0, 1.0)),
            Region::Disc(eps) => Some((eps, 1.0)),
            Region::EpsBall(eps) => Some((0.0, eps)),
            Region::Tail => None,
        }
    }
}

/// Jump amplitude functions `p` (small jumps) and `q` (tail jumps).
///
/// Both behave like `scale·x` near the origin, which is what decides
/// convergence of the power-law moments.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Amplitude {
    /// `scale·x`; moments against the power law have closed forms.
    Linear { scale: f64 },
    /// `sin(scale·x)`; moments against the power law go through quadrature.
    Sine { scale: f64 },
}

impl Amplitude {
    pub const IDENTITY: Amplitude = Amplitude::Linear { scale: 1.0 };

    #[inline]
    pub fn eval(&self, x: f64) -> f64 {
        match *self {
            Amplitude::Linear { scale } => scale * x,
            Amplitude::Sine { scale } => (scale * x).sin(),
        }
    }
}

impl Default for Amplitude {
    fn default() -> Self {
        Amplitude::IDENTITY
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AmplitudeRole {
    P,
    Q,
}

/// A point mass of ν.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub x: f64,
    pub mass: f64,
}

/// ν restricted to the unit ball.
#[derive(Clone, Debug, PartialEq)]
pub enum SmallJumps {
    Atoms(Vec<Atom>),
    /// `c·|x|^{−1−a}` on `0 < |x| < 1`.
    PowerLaw { c: f64, a: f64 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct LevyModel {
    small: SmallJumps,
    tail: Vec<Atom>,
    p: Amplitude,
    q: Amplitude,
}

impl LevyModel {
    pub fn new(small: SmallJumps, tail: Vec<Atom>, p: Amplitude, q: Amplitude) -> Result<Self> {
        match &small {
            SmallJumps::Atoms(atoms) => {
                for a in atoms {
                    check_atom(a, Region::Small, "small")?;
                }
            }
            SmallJumps::PowerLaw { c, a } => {
                if !(*c > 0.0 && c.is_finite()) {
                    return Err(Error::domain(format!("power-law constant c = {c} must be positive")));
                }
                if !(*a > 0.0 && *a < 2.0) {
                    return Err(Error::domain(format!("power-law index a = {a} must lie in (0, 2)")));
                }
            }
        }
        for a in &tail {
            check_atom(a, Region::Tail, "tail")?;
        }
        let model = LevyModel { small, tail, p, q };
        // square integrability of p on B and q on B'
        model.moment(AmplitudeRole::P, 2, Region::Small)?;
        model.moment(AmplitudeRole::Q, 2, Region::Tail)?;
        Ok(model)
    }

    /// Finite small atoms and tail atoms with identity amplitudes.
    pub fn finite(small: Vec<Atom>, tail: Vec<Atom>) -> Result<Self> {
        LevyModel::new(SmallJumps::Atoms(small), tail, Amplitude::IDENTITY, Amplitude::IDENTITY)
    }

    /// Symmetric power law on `B` with identity amplitudes.
    pub fn power_law(c: f64, a: f64, tail: Vec<Atom>) -> Result<Self> {
        LevyModel::new(SmallJumps::PowerLaw { c, a }, tail, Amplitude::IDENTITY, Amplitude::IDENTITY)
    }

    pub fn small(&self) -> &SmallJumps {
        &self.small
    }

    pub fn tail(&self) -> &[Atom] {
        &self.tail
    }

    pub fn p(&self) -> Amplitude {
        self.p
    }

    pub fn q(&self) -> Amplitude {
        self.q
    }

    pub fn is_finite_activity(&self) -> bool {
        matches!(self.small, SmallJumps::Atoms(_))
    }

    /// `ν(region)`, possibly `+∞`.
    pub fn mass(&self, region: Region) -> f64 {
        match (region, &self.small) {
            (Region::Tail, _) => self.tail.iter().map(|a| a.mass).sum(),
            (_, SmallJumps::Atoms(atoms)) => {
                atoms.iter().filter(|a| region.contains(a.x)).map(|a| a.mass).sum()
            }
            (_, SmallJumps::PowerLaw { c, a }) => {
                let (lo, hi) = region.radii().expect("small-side region");
                if lo == 0.0 {
                    f64::INFINITY
                } else {
                    2.0 * c * (lo.powf(-a) - hi.powf(-a)) / a
                }
            }
        }
    }

    /// `∫_region f^power dν` with `f = p` on small-side regions and `f = q` on the tail.
    pub fn moment(&self, role: AmplitudeRole, power: u32, region: Region) -> Result<f64> {
        region.validate()?;
        if power == 0 {
            return Err(Error::domain("moment power must be at least 1"));
        }
        let f = match (role, region) {
            (AmplitudeRole::Q, Region::Tail) => self.q,
            (AmplitudeRole::P, Region::Small | Region::Disc(_) | Region::EpsBall(_)) => self.p,
            _ => {
                return Err(Error::domain(format!(
                    "moment of {role:?} is not defined over {region:?}"
                )))
            }
        };
        let atoms = match (region, &self.small) {
            (Region::Tail, _) => &self.tail[..],
            (_, SmallJumps::Atoms(atoms)) => &atoms[..],
            (_, SmallJumps::PowerLaw { c, a }) => {
                let (lo, hi) = region.radii().expect("small-side region");
                return power_law_moment(f, power, *c, *a, lo, hi);
            }
        };
        Ok(atoms
            .iter()
            .filter(|at| region.contains(at.x))
            .map(|at| at.mass * f.eval(at.x).powi(power as i32))
            .sum())
    }

    /// Replaces the small-jump region by `D_ε`.
    pub fn truncate(&self, epsilon: f64) -> Result<TruncatedModel> {
        if !(epsilon > 0.0 && epsilon < 1.0) {
            return Err(Error::domain(format!("truncation radius ε = {epsilon} is outside (0, 1)")));
        }
        let residual_l_eps = self.moment(AmplitudeRole::P, 2, Region::EpsBall(epsilon))?;
        Ok(TruncatedModel {
            base: self.clone(),
            epsilon,
            disc_mass: self.mass(Region::Disc(epsilon)),
            residual_l_eps,
        })
    }

    /// Sampler for the normalised restriction of ν to `region`.
    pub fn sampler(&self, region: Region) -> Result<MarkSampler> {
        region.validate()?;
        let mass = self.mass(region);
        if !mass.is_finite() {
            return Err(Error::domain(format!(
                "ν({region:?}) is infinite; truncate the model before sampling"
            )));
        }
        if mass <= 0.0 {
            return Err(Error::domain(format!("ν({region:?}) = 0, nothing to sample")));
        }
        let kind = match (region, &self.small) {
            (Region::Tail, _) => SamplerKind::atoms(&self.tail, region),
            (_, SmallJumps::Atoms(atoms)) => SamplerKind::atoms(atoms, region),
            (_, SmallJumps::PowerLaw { a, .. }) => {
                let (lo, hi) = region.radii().expect("small-side region");
                SamplerKind::PowerLaw { lo_pow: lo.powf(-a), hi_pow: hi.powf(-a), a: *a, lo, hi }
            }
        };
        Ok(MarkSampler { kind, region, mass })
    }
}

fn check_atom(atom: &Atom, region: Region, side: &str) -> Result<()> {
    if !region.contains(atom.x) || !atom.x.is_finite() {
        return Err(Error::domain(format!("{side} atom at x = {} lies outside {region:?}", atom.x)));
    }
    if !(atom.mass > 0.0 && atom.mass.is_finite()) {
        return Err(Error::domain(format!("{side} atom at x = {} has mass {}", atom.x, atom.mass)));
    }
    Ok(())
}

/// `∫_{lo ≤ |x| < hi} f(x)^k · c|x|^{−1−a} dx`.
fn power_law_moment(f: Amplitude, k: u32, c: f64, a: f64, lo: f64, hi: f64) -> Result<f64> {
    let kf = k as f64;
    if lo == 0.0 && kf <= a {
        return Err(Error::Divergent(format!(
            "∫|x|^{k}·|x|^(-1-{a}) dx diverges at the origin"
        )));
    }
    match f {
        Amplitude::Linear { scale } => {
            let parity = if k.is_multiple_of(2) { 2.0 } else { 0.0 };
            let radial = if kf == a {
                (hi / lo).ln()
            } else {
                (hi.powf(kf - a) - lo.powf(kf - a)) / (kf - a)
            };
            Ok(c * scale.powi(k as i32) * parity * radial)
        }
        Amplitude::Sine { .. } => power_law_moment_by_quadrature(|x| f.eval(x), k, c, a, lo, hi),
    }
}

/// Tanh-sinh evaluation of `∫_{lo ≤ |x| < hi} g(x)^k · c|x|^{−1−a} dx` to
/// relative tolerance [`QUADRATURE_RTOL`].
///
/// `g` must behave like a multiple of `x` at the origin when `lo = 0`. The
/// radial variable is mapped so the transformed integrand is smooth:
/// `x = hi·u^{1/(k−a)}` when `lo = 0`, `x = lo·(hi/lo)^t` otherwise.
pub fn power_law_moment_by_quadrature(
    g: impl Fn(f64) -> f64,
    k: u32,
    c: f64,
    a: f64,
    lo: f64,
    hi: f64,
) -> Result<f64> {
    if !(lo >= 0.0 && hi > lo) {
        return Err(Error::domain(format!("bad radial range [{lo}, {hi})")));
    }
    let kf = k as f64;
    let both_sides = |x: f64| g(x).powi(k as i32) + g(-x).powi(k as i32);
    let integrand: Box<dyn Fn(f64) -> f64> = if lo == 0.0 {
        if kf <= a {
            return Err(Error::Divergent(format!("power {k} against index {a} at the origin")));
        }
        let m = 1.0 / (kf - a);
        Box::new(move |u: f64| {
            let x = hi * u.powf(m);
            if x == 0.0 {
                return 0.0;
            }
            m * c * both_sides(x) * x.powf(-a) / u
        })
    } else {
        let log_ratio = (hi / lo).ln();
        Box::new(move |t: f64| {
            let x = lo * (t * log_ratio).exp();
            c * both_sides(x) * x.powf(-a) * log_ratio
        })
    };
    let coarse = quadrature::double_exponential::integrate(&integrand, 0.0, 1.0, 1e-8);
    let target = (QUADRATURE_RTOL * coarse.integral.abs()).max(1e-300);
    let fine = quadrature::double_exponential::integrate(&integrand, 0.0, 1.0, target);
    if !fine.integral.is_finite() {
        return Err(Error::Divergent("quadrature produced a non-finite value".into()));
    }
    Ok(fine.integral)
}

/// A model whose small-jump region is the disc `D_ε`.
#[derive(Clone, Debug, PartialEq)]
pub struct TruncatedModel {
    pub base: LevyModel,
    pub epsilon: f64,
    /// `ν(D_ε)`
    pub disc_mass: f64,
    /// `L^ε = ∫_{B_ε} p² dν`
    pub residual_l_eps: f64,
}

/// A model as seen by a simulator: the Lévy measure together with the
/// small-jump region that is actually simulated.
pub trait ActiveModel: Sync {
    fn levy(&self) -> &LevyModel;

    /// `B` for finite-activity models, `D_ε` after truncation.
    fn small_region(&self) -> Region;

    fn small_mass(&self) -> f64 {
        self.levy().mass(self.small_region())
    }

    fn tail_mass(&self) -> f64 {
        self.levy().mass(Region::Tail)
    }

    /// `ν(active small region ∪ B')`
    fn active_rate(&self) -> f64 {
        self.small_mass() + self.tail_mass()
    }

    /// `∫ p^power dν` over the active small region.
    fn small_moment(&self, power: u32) -> Result<f64> {
        self.levy().moment(AmplitudeRole::P, power, self.small_region())
    }
}

impl ActiveModel for LevyModel {
    fn levy(&self) -> &LevyModel {
        self
    }

    fn small_region(&self) -> Region {
        Region::Small
    }
}

impl ActiveModel for TruncatedModel {
    fn levy(&self) -> &LevyModel {
        &self.base
    }

    fn small_region(&self) -> Region {
        Region::Disc(self.epsilon)
    }
}

#[derive(Clone, Debug)]
enum SamplerKind {
    Atoms { xs: Vec<f64>, cum: Vec<f64> },
    PowerLaw { lo_pow: f64, hi_pow: f64, a: f64, lo: f64, hi: f64 },
}

impl SamplerKind {
    fn atoms(atoms: &[Atom], region: Region) -> SamplerKind {
        let mut xs = Vec::new();
        let mut cum = Vec::new();
        let mut acc = 0.0;
        for a in atoms.iter().filter(|a| region.contains(a.x)) {
            acc += a.mass;
            xs.push(a.x);
            cum.push(acc);
        }
        SamplerKind::Atoms { xs, cum }
    }
}

/// Draws from `ν(· ∩ region) / ν(region)`.
#[derive(Clone, Debug)]
pub struct MarkSampler {
    kind: SamplerKind,
    region: Region,
    mass: f64,
}

impl MarkSampler {
    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn region(&self) -> Region {
        self.region
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let x = match &self.kind {
            SamplerKind::Atoms { xs, cum } => {
                let total = *cum.last().expect("non-empty atom table");
                let u = rng.random::<f64>() * total;
                let i = cum.partition_point(|&c| c <= u).min(xs.len() - 1);
                xs[i]
            }
            SamplerKind::PowerLaw { lo_pow, hi_pow, a, lo, hi } => {
                // inverse CDF of the radial density ∝ r^{−1−a} on [lo, hi)
                let u = rng.random::<f64>();
                let r = (lo_pow - u * (lo_pow - hi_pow)).powf(-1.0 / a);
                let r = r.clamp(*lo, hi.next_down());
                if rng.random::<bool>() {
                    r
                } else {
                    -r
                }
            }
        };
        debug_assert!(self.region.contains(x));
        x
    }
}

/// One draw from the normalised restriction of ν to `region`.
pub fn sample_mark<R: Rng + ?Sized>(model: &LevyModel, region: Region, rng: &mut R) -> Result<f64> {
    Ok(model.sampler(region)?.sample(rng))
}
