//! Strong approximation of scalar jump-diffusion SDEs
//!
//! ```text
//! dY = b(Y) dt + σ(Y) dW + ∫_B F(Y, x) Ñ(dt, dx) + ∫_{B'} G(Y, x) N(dt, dx)
//! ```
//!
//! with `B = {|x| < 1}` and `B' = {|x| ≥ 1}`, by truncated Itô-Taylor
//! expansions indexed by multiindices over `{0, 1, 2, 3}`
//! (0: `dt`, 1: `dW`, 2: `Ñ` on `B`, 3: `N` on `B'`).
//!
//! The crate is organised bottom-up:
//!
//! - [`multiindex`]: multiindex combinatorics and the hierarchical/remainder sets
//!   that select the expansion terms of a scheme of strong order γ.
//! - [`levy`]: Lévy measures (finite atoms or an infinite-activity power law),
//!   their moments, mark sampling and ε-truncation.
//! - [`path`]: one realisation of the driving noise on a dyadic event grid,
//!   sliced per coarse step so every step size sees the same noise.
//! - [`schemes`]: Euler (γ = 1/2) and Milstein (γ = 1) steppers for linear
//!   coefficients.
//! - [`oracle`]: the pathwise exact solution and a fine-grid reference.
//! - [`harness`]: Monte-Carlo strong-error and truncation studies.

// `!(x > 0.0)` is used on purpose so that NaN is rejected along with the rest.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
mod error;
pub mod exec;
pub mod harness;
pub mod levy;
pub mod multiindex;
pub mod oracle;
pub mod path;
pub mod schemes;

pub use error::{Error, Result};
pub use levy::{ActiveModel, Amplitude, AmplitudeRole, Atom, JumpRegion, LevyModel, Region, TruncatedModel};
pub use multiindex::{IndexSet, Multiindex, Order};
pub use path::{DrivingPath, IntervalSlice, JumpEvent};
pub use schemes::{FormulaVariant, LinearCoefficients, Scheme, Trajectory};
