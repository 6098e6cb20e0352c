//! Pathwise simulation of the driving noise `(W, N)`.
//!
//! A [`DrivingPath`] lives on an event grid: the finest dyadic grid
//! `jT/2^n` merged with every jump time. Across each gap between consecutive
//! events the pair `(ΔW, ∫(W_s − W_left) ds)` is drawn from its exact joint
//! Gaussian law, so any coarser dyadic step sees increments that are exact
//! aggregates of the fine ones:
//!
//! ```text
//! ΔW  = Σ_j ΔW_j
//! ΔZ  = Σ_j [ (W(t_j) − W(τ)) h_j + z_j ]
//! ```
//!
//! Wiener values are kept on a `2^-40` lattice. Every partial sum of lattice
//! values below `2^12` in magnitude is exact in `f64`, so telescoped
//! increments agree bit-for-bit across levels.

use std::io::{Read, Write};

use rand::Rng;
use rand_distr::{Distribution, Exp, StandardNormal};

use crate::levy::{ActiveModel, JumpRegion, Region};
use crate::{Error, Result};

const W_LATTICE_BITS: i32 = 40;
const MAX_LEVEL: u32 = 30;

const DUMP_MAGIC: &[u8; 4] = b"LSDP";
const DUMP_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct JumpEvent {
    pub time: f64,
    pub mark: f64,
    pub region: JumpRegion,
}

/// `(ΔW, ΔZ)` from two standard normals:
/// `ΔW = U₁√Δ`, `ΔZ = ½Δ^{3/2}(U₁ + U₂/√3)`.
#[inline]
pub fn dw_dz_from_normals(delta: f64, u1: f64, u2: f64) -> (f64, f64) {
    let dw = u1 * delta.sqrt();
    let dz = 0.5 * delta * delta.sqrt() * (u1 + u2 / 3f64.sqrt());
    (dw, dz)
}

/// Jointly Gaussian `(ΔW, ΔZ)` over a step of length `delta`:
/// `Var ΔW = Δ`, `Var ΔZ = Δ³/3`, `Cov = Δ²/2`.
pub fn sample_dw_dz<R: Rng + ?Sized>(delta: f64, rng: &mut R) -> Result<(f64, f64)> {
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(Error::domain(format!("step length {delta} must be positive")));
    }
    let u1: f64 = StandardNormal.sample(rng);
    let u2: f64 = StandardNormal.sample(rng);
    Ok(dw_dz_from_normals(delta, u1, u2))
}

/// Jump times on `(0, horizon]` as cumulative exponential arrivals at rate
/// `ν(active small region ∪ B')`, each with an independent mark.
pub fn simulate_events<M, R>(horizon: f64, model: &M, rng: &mut R) -> Result<Vec<JumpEvent>>
where
    M: ActiveModel + ?Sized,
    R: Rng + ?Sized,
{
    let rate = model.active_rate();
    if !rate.is_finite() {
        return Err(Error::domain(
            "jump intensity is infinite; truncate the Lévy measure to an ε-disc first",
        ));
    }
    if rate == 0.0 {
        return Ok(Vec::new());
    }
    let small_mass = model.small_mass();
    let levy = model.levy();
    let small = if small_mass > 0.0 { Some(levy.sampler(model.small_region())?) } else { None };
    let tail = if model.tail_mass() > 0.0 { Some(levy.sampler(Region::Tail)?) } else { None };
    let wait = Exp::new(rate).map_err(|e| Error::domain(e.to_string()))?;

    let mut events = Vec::new();
    let mut t = 0.0;
    loop {
        t += wait.sample(rng);
        if t > horizon {
            break;
        }
        let sampler = match (&small, &tail) {
            (Some(s), Some(t)) => {
                if rng.random::<f64>() * rate < small_mass {
                    s
                } else {
                    t
                }
            }
            (Some(s), None) | (None, Some(s)) => s,
            (None, None) => unreachable!("positive rate with no mass"),
        };
        let mark = sampler.sample(rng);
        events.push(JumpEvent { time: t, mark, region: JumpRegion::of_mark(mark) });
    }
    Ok(events)
}

/// One realisation of `(W, N)` on the event grid.
#[derive(Clone, Debug, PartialEq)]
pub struct DrivingPath {
    horizon: f64,
    level: u32,
    times: Vec<f64>,
    w: Vec<f64>,
    z_local: Vec<f64>,
    jumps: Vec<PathJump>,
    /// event index of each dyadic point `jT/2^level`
    grid: Vec<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PathJump {
    pub event: JumpEvent,
    /// position of the jump time in the event grid
    pub index: usize,
}

fn quantize(dw: f64) -> f64 {
    let scale = 2f64.powi(W_LATTICE_BITS);
    (dw * scale).round() / scale
}

fn dyadic_time(horizon: f64, j: usize, cells: usize) -> f64 {
    horizon * (j as f64 / cells as f64)
}

/// Builds a path with finest dyadic level `level` on `[0, horizon]`.
pub fn build_path<M, R>(horizon: f64, level: u32, model: &M, rng: &mut R) -> Result<DrivingPath>
where
    M: ActiveModel + ?Sized,
    R: Rng + ?Sized,
{
    if !(horizon > 0.0 && horizon.is_finite()) {
        return Err(Error::domain(format!("horizon {horizon} must be positive")));
    }
    if level > MAX_LEVEL {
        return Err(Error::domain(format!("dyadic level {level} exceeds {MAX_LEVEL}")));
    }
    let mut events = simulate_events(horizon, model, rng)?;
    let cells = 1usize << level;

    // merge the dyadic grid with the jump times
    let mut times = Vec::with_capacity(cells + 1 + events.len());
    let mut grid = Vec::with_capacity(cells + 1);
    let mut jumps = Vec::with_capacity(events.len());
    let mut next = 0;
    times.push(0.0);
    grid.push(0);
    for j in 1..=cells {
        let t_grid = dyadic_time(horizon, j, cells);
        while next < events.len() && events[next].time <= t_grid {
            let ev = &mut events[next];
            let prev = *times.last().expect("grid starts at 0");
            if ev.time <= prev || ev.time == t_grid {
                let moved = separate(ev.time, prev, t_grid);
                log::debug!("jump time {} collides with the event grid, moved to {}", ev.time, moved);
                ev.time = moved;
            }
            jumps.push(PathJump { event: *ev, index: times.len() });
            times.push(ev.time);
            next += 1;
        }
        grid.push(times.len());
        times.push(t_grid);
    }
    debug_assert_eq!(next, events.len());

    let mut w = Vec::with_capacity(times.len());
    let mut z_local = Vec::with_capacity(times.len() - 1);
    w.push(0.0);
    for pair in times.windows(2) {
        let (dw, dz) = sample_dw_dz(pair[1] - pair[0], rng)?;
        let last = *w.last().expect("non-empty");
        w.push(last + quantize(dw));
        z_local.push(dz);
    }

    Ok(DrivingPath { horizon, level, times, w, z_local, jumps, grid })
}

/// Moves a colliding jump time strictly inside `(prev, upper)` by one ulp.
fn separate(t: f64, prev: f64, upper: f64) -> f64 {
    let moved = if t >= upper { upper.next_down() } else { prev.next_up().max(t) };
    debug_assert!(moved > prev && moved < upper);
    moved
}

impl DrivingPath {
    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    /// Finest dyadic level.
    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn event_times(&self) -> &[f64] {
        &self.times
    }

    pub fn w_values(&self) -> &[f64] {
        &self.w
    }

    /// `∫_{t_j}^{t_{j+1}} (W_s − W_{t_j}) ds` per event gap.
    pub fn z_locals(&self) -> &[f64] {
        &self.z_local
    }

    pub fn jumps(&self) -> &[PathJump] {
        &self.jumps
    }

    pub fn jump_events(&self) -> impl Iterator<Item = &JumpEvent> {
        self.jumps.iter().map(|j| &j.event)
    }

    /// Event indices of the dyadic grid at `level`.
    pub fn grid_indices(&self, level: u32) -> Result<Vec<usize>> {
        if level > self.level {
            return Err(Error::domain(format!(
                "level {level} is finer than the path's finest level {}",
                self.level
            )));
        }
        let stride = 1usize << (self.level - level);
        Ok(self.grid.iter().step_by(stride).copied().collect())
    }

    pub fn grid_times(&self, level: u32) -> Result<Vec<f64>> {
        Ok(self.grid_indices(level)?.into_iter().map(|i| self.times[i]).collect())
    }

    /// Event index of a dyadic grid point, if `t` is exactly one.
    pub fn grid_index_of(&self, t: f64) -> Option<usize> {
        let cells = self.grid.len() - 1;
        let j = (t / self.horizon * cells as f64).round();
        if !(j >= 0.0 && j <= cells as f64) {
            return None;
        }
        let idx = self.grid[j as usize];
        (self.times[idx] == t).then_some(idx)
    }

    /// Event index of any event time (grid point or jump time).
    pub fn event_index_of(&self, t: f64) -> Option<usize> {
        self.times.binary_search_by(|x| x.total_cmp(&t)).ok()
    }

    /// Keeps tail jumps and the small jumps with `|ξ| ≥ ε`. Event times and the
    /// Wiener path are untouched, so the result is exactly coupled to `self`.
    pub fn restrict_small(&self, epsilon: f64) -> DrivingPath {
        let mut out = self.clone();
        out.jumps.retain(|j| j.event.region == JumpRegion::Tail || j.event.mark.abs() >= epsilon);
        out
    }

    /// The noise on `(t_left, t_right]` between two event indices.
    pub fn slice_between(&self, left: usize, right: usize) -> IntervalSlice {
        assert!(left < right && right < self.times.len(), "bad event range {left}..{right}");
        let w0 = self.w[left];
        let t0 = self.times[left];
        let mut dz = 0.0;
        for j in left..right {
            dz += (self.w[j] - w0) * (self.times[j + 1] - self.times[j]) + self.z_local[j];
        }
        let lo = self.jumps.partition_point(|j| j.index <= left);
        let hi = self.jumps.partition_point(|j| j.index <= right);
        let jumps = self.jumps[lo..hi]
            .iter()
            .map(|j| (j.event, self.w[j.index]))
            .collect::<Vec<_>>();
        IntervalSlice::assemble(t0, self.times[right], w0, self.w[right], dz, &jumps)
    }

    /// Per-interval noise for a coarse grid made of dyadic points of the path.
    pub fn slice(&self, coarse_grid: &[f64]) -> Result<Vec<IntervalSlice>> {
        let idx = coarse_grid
            .iter()
            .map(|&t| {
                self.grid_index_of(t)
                    .ok_or_else(|| Error::domain(format!("coarse point {t} is not on the dyadic grid")))
            })
            .collect::<Result<Vec<_>>>()?;
        if idx.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::domain("coarse grid must be strictly increasing"));
        }
        Ok(idx.windows(2).map(|w| self.slice_between(w[0], w[1])).collect())
    }

    /// Slices of the dyadic grid with step `T/2^level`.
    pub fn slice_level(&self, level: u32) -> Result<Vec<IntervalSlice>> {
        let idx = self.grid_indices(level)?;
        Ok(idx.windows(2).map(|w| self.slice_between(w[0], w[1])).collect())
    }

    /// Debug dump: magic, version, then little-endian fields.
    pub fn write_binary<W: Write>(&self, mut out: W) -> Result<()> {
        out.write_all(DUMP_MAGIC)?;
        out.write_all(&DUMP_VERSION.to_le_bytes())?;
        out.write_all(&self.level.to_le_bytes())?;
        out.write_all(&self.horizon.to_le_bytes())?;
        out.write_all(&(self.times.len() as u64).to_le_bytes())?;
        out.write_all(&(self.jumps.len() as u64).to_le_bytes())?;
        for v in self.times.iter().chain(&self.w).chain(&self.z_local) {
            out.write_all(&v.to_le_bytes())?;
        }
        for j in &self.jumps {
            out.write_all(&(j.index as u64).to_le_bytes())?;
            out.write_all(&j.event.mark.to_le_bytes())?;
            out.write_all(&[matches!(j.event.region, JumpRegion::Tail) as u8])?;
        }
        Ok(())
    }

    pub fn read_binary<R: Read>(mut input: R) -> Result<DrivingPath> {
        let bad = |m: &str| Error::domain(format!("malformed path dump: {m}"));
        let mut magic = [0u8; 4];
        input.read_exact(&mut magic)?;
        if &magic != DUMP_MAGIC {
            return Err(bad("magic"));
        }
        let version = read_u32(&mut input)?;
        if version != DUMP_VERSION {
            return Err(bad(&format!("unsupported version {version}")));
        }
        let level = read_u32(&mut input)?;
        let horizon = read_f64(&mut input)?;
        let n_events = read_u64(&mut input)? as usize;
        let n_jumps = read_u64(&mut input)? as usize;
        if level > MAX_LEVEL || n_events < 2 || n_jumps >= n_events {
            return Err(bad("header"));
        }
        let mut read_vec = |n: usize| (0..n).map(|_| read_f64(&mut input)).collect::<Result<Vec<_>>>();
        let times = read_vec(n_events)?;
        let w = read_vec(n_events)?;
        let z_local = read_vec(n_events - 1)?;
        let mut jumps = Vec::with_capacity(n_jumps);
        for _ in 0..n_jumps {
            let index = read_u64(&mut input)? as usize;
            let mark = read_f64(&mut input)?;
            let mut tag = [0u8; 1];
            input.read_exact(&mut tag)?;
            let time = *times.get(index).ok_or_else(|| bad("jump index"))?;
            let region = if tag[0] == 1 { JumpRegion::Tail } else { JumpRegion::Small };
            jumps.push(PathJump { event: JumpEvent { time, mark, region }, index });
        }
        let cells = 1usize << level;
        let grid = (0..=cells)
            .map(|j| {
                let t = dyadic_time(horizon, j, cells);
                times.binary_search_by(|x| x.total_cmp(&t)).map_err(|_| bad("grid point missing"))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(DrivingPath { horizon, level, times, w, z_local, jumps, grid })
    }
}

fn read_u32<R: Read>(r: &mut R) -> Result<u32> {
    let mut b = [0u8; 4];
    r.read_exact(&mut b)?;
    Ok(u32::from_le_bytes(b))
}

fn read_u64<R: Read>(r: &mut R) -> Result<u64> {
    let mut b = [0u8; 8];
    r.read_exact(&mut b)?;
    Ok(u64::from_le_bytes(b))
}

fn read_f64<R: Read>(r: &mut R) -> Result<f64> {
    let mut b = [0u8; 8];
    r.read_exact(&mut b)?;
    Ok(f64::from_le_bytes(b))
}

/// A jump inside a slice, with the next-jump bookkeeping the Milstein terms need.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SliceJump {
    pub time: f64,
    pub mark: f64,
    pub region: JumpRegion,
    /// `W(η_n)`
    pub w: f64,
    /// `η̄_n`: next tail jump after `η_n`, capped at the right endpoint
    pub next_tail_time: f64,
    pub w_next_tail: f64,
    /// `η̲_n`: next small jump after `η_n`, capped at the right endpoint
    pub next_small_time: f64,
    pub w_next_small: f64,
}

/// All noise one step of a scheme consumes on `(τ_i, τ_{i+1}]`.
#[derive(Clone, Debug, PartialEq)]
pub struct IntervalSlice {
    pub left: f64,
    pub right: f64,
    pub delta: f64,
    pub delta_w: f64,
    pub delta_z: f64,
    pub w_left: f64,
    pub w_right: f64,
    /// ordered by time
    pub jumps: Vec<SliceJump>,
}

impl IntervalSlice {
    /// Builds a slice from raw data; `jumps` are `(event, W(η))` pairs.
    pub fn new(
        left: f64,
        right: f64,
        w_left: f64,
        w_right: f64,
        delta_z: f64,
        jumps: &[(JumpEvent, f64)],
    ) -> Result<Self> {
        if !(right > left) {
            return Err(Error::domain(format!("empty interval ({left}, {right}]")));
        }
        let mut prev = left;
        for (ev, _) in jumps {
            if !(ev.time > prev && ev.time <= right) {
                return Err(Error::domain(format!(
                    "jump times must increase strictly inside ({left}, {right}]"
                )));
            }
            prev = ev.time;
        }
        Ok(Self::assemble(left, right, w_left, w_right, delta_z, jumps))
    }

    fn assemble(
        left: f64,
        right: f64,
        w_left: f64,
        w_right: f64,
        delta_z: f64,
        jumps: &[(JumpEvent, f64)],
    ) -> Self {
        let mut out = vec![
            SliceJump {
                time: 0.0,
                mark: 0.0,
                region: JumpRegion::Small,
                w: 0.0,
                next_tail_time: right,
                w_next_tail: w_right,
                next_small_time: right,
                w_next_small: w_right,
            };
            jumps.len()
        ];
        let (mut tail_t, mut tail_w) = (right, w_right);
        let (mut small_t, mut small_w) = (right, w_right);
        for (slot, &(ev, w)) in out.iter_mut().zip(jumps).rev() {
            slot.time = ev.time;
            slot.mark = ev.mark;
            slot.region = ev.region;
            slot.w = w;
            slot.next_tail_time = tail_t;
            slot.w_next_tail = tail_w;
            slot.next_small_time = small_t;
            slot.w_next_small = small_w;
            match ev.region {
                JumpRegion::Tail => (tail_t, tail_w) = (ev.time, w),
                JumpRegion::Small => (small_t, small_w) = (ev.time, w),
            }
        }
        IntervalSlice {
            left,
            right,
            delta: right - left,
            delta_w: w_right - w_left,
            delta_z,
            w_left,
            w_right,
            jumps: out,
        }
    }

    /// `K(i)`
    pub fn count(&self) -> usize {
        self.jumps.len()
    }
}
