//! Study configuration (JSON).
//!
//! ```json
//! {
//!   "model": {
//!     "small": { "kind": "atoms", "atoms": [{ "x": 0.5, "mass": 0.6 }] },
//!     "tail": [{ "x": 1.5, "mass": 0.3 }],
//!     "p": { "kind": "linear", "scale": 1.0 },
//!     "q": { "kind": "linear", "scale": 1.0 }
//!   },
//!   "epsilon": null,
//!   "coefficients": { "b": -0.5, "sigma": 0.3, "f": 0.2, "g": 0.1 },
//!   "y0": 1.0,
//!   "horizon": 1.0,
//!   "scheme": "euler",
//!   "variant": "exact",
//!   "levels": [3, 4, 5, 6, 7, 8],
//!   "finest_level": 10,
//!   "paths": 2000,
//!   "seed": 20240601,
//!   "oracle": { "kind": "exact" },
//!   "truncation": { "epsilons": [0.25, 0.125], "level": 6 }
//! }
//! ```
//!
//! The small-jump part may instead be `{ "kind": "power_law", "c": 1.0, "a": 0.5 }`,
//! which needs `epsilon` for a convergence study. `p`, `q`, `y0`, `horizon`,
//! `variant`, `finest_level`, `oracle`, `epsilon` and `truncation` are optional.

use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::levy::{ActiveModel, Amplitude, Atom, LevyModel, Region, SmallJumps, TruncatedModel};
use crate::oracle::{OracleKind, FINE_LEVEL_MARGIN};
use crate::schemes::{FormulaVariant, LinearCoefficients, Scheme};
use crate::{Error, Result};

/// Levels beyond the finest study level that the simulated path resolves by default.
pub const DEFAULT_FINEST_MARGIN: u32 = 2;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SmallJumpConfig {
    Atoms { atoms: Vec<Atom> },
    PowerLaw { c: f64, a: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelConfig {
    pub small: SmallJumpConfig,
    #[serde(default)]
    pub tail: Vec<Atom>,
    #[serde(default)]
    pub p: Amplitude,
    #[serde(default)]
    pub q: Amplitude,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoefficientConfig {
    pub b: f64,
    pub sigma: f64,
    pub f: f64,
    pub g: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TruncationConfig {
    pub epsilons: Vec<f64>,
    /// dyadic level of the fixed step `δ = T/2^level`
    pub level: u32,
}

fn one() -> f64 {
    1.0
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StudyConfig {
    pub model: ModelConfig,
    #[serde(default)]
    pub epsilon: Option<f64>,
    pub coefficients: CoefficientConfig,
    #[serde(default = "one")]
    pub y0: f64,
    #[serde(default = "one")]
    pub horizon: f64,
    pub scheme: Scheme,
    #[serde(default)]
    pub variant: FormulaVariant,
    pub levels: Vec<u32>,
    #[serde(default)]
    pub finest_level: Option<u32>,
    pub paths: usize,
    pub seed: u64,
    #[serde(default)]
    pub oracle: OracleKind,
    #[serde(default)]
    pub truncation: Option<TruncationConfig>,
}

/// The model a study simulates: finite activity as is, or truncated to `D_ε`.
#[derive(Clone, Debug, PartialEq)]
pub enum StudyModel {
    Full(LevyModel),
    Truncated(TruncatedModel),
}

impl ActiveModel for StudyModel {
    fn levy(&self) -> &LevyModel {
        match self {
            StudyModel::Full(m) => m,
            StudyModel::Truncated(t) => &t.base,
        }
    }

    fn small_region(&self) -> Region {
        match self {
            StudyModel::Full(_) => Region::Small,
            StudyModel::Truncated(t) => Region::Disc(t.epsilon),
        }
    }
}

impl StudyConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: StudyConfig = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Reads and validates a config file; a missing or unreadable file is a config error.
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::config(m));
        if self.levels.is_empty() {
            return bad("levels must not be empty".into());
        }
        if self.levels.windows(2).any(|w| w[0] >= w[1]) {
            return bad("levels must be strictly increasing".into());
        }
        if self.paths < 2 {
            return bad(format!("paths = {} but at least 2 are needed for standard errors", self.paths));
        }
        if !(self.horizon > 0.0 && self.horizon.is_finite()) {
            return bad(format!("horizon {} must be positive", self.horizon));
        }
        if !self.y0.is_finite() {
            return bad(format!("y0 = {} is not finite", self.y0));
        }
        let max = self.max_level();
        if self.finest_level() < max + DEFAULT_FINEST_MARGIN {
            return bad(format!(
                "finest_level {} must be at least {} (max level + {DEFAULT_FINEST_MARGIN})",
                self.finest_level(),
                max + DEFAULT_FINEST_MARGIN
            ));
        }
        if let OracleKind::FineGrid { level } = self.oracle {
            if level < max + FINE_LEVEL_MARGIN {
                return bad(format!("fine-grid oracle level {level} must be at least max level + {FINE_LEVEL_MARGIN}"));
            }
        }
        if let Some(eps) = self.epsilon {
            if !(eps > 0.0 && eps < 1.0) {
                return bad(format!("epsilon {eps} is outside (0, 1)"));
            }
        }
        if let Some(t) = &self.truncation {
            if t.epsilons.is_empty() || t.epsilons.iter().any(|&e| !(e > 0.0 && e < 1.0)) {
                return bad("truncation epsilons must be non-empty and inside (0, 1)".into());
            }
            if t.level > 20 {
                return bad(format!("truncation level {} is unreasonably fine", t.level));
            }
        }
        let model = self.levy_model()?;
        if !model.is_finite_activity() && self.epsilon.is_none() && self.truncation.is_none() {
            return bad("an infinite-activity model needs `epsilon` or a `truncation` block".into());
        }
        Ok(())
    }

    pub fn max_level(&self) -> u32 {
        self.levels.iter().copied().max().unwrap_or(0)
    }

    /// Dyadic level of the simulated paths.
    pub fn finest_level(&self) -> u32 {
        let base = self.finest_level.unwrap_or(self.max_level() + DEFAULT_FINEST_MARGIN);
        match self.oracle {
            OracleKind::FineGrid { level } => base.max(level),
            OracleKind::Exact => base,
        }
    }

    pub fn levy_model(&self) -> Result<LevyModel> {
        let small = match &self.model.small {
            SmallJumpConfig::Atoms { atoms } => SmallJumps::Atoms(atoms.clone()),
            SmallJumpConfig::PowerLaw { c, a } => SmallJumps::PowerLaw { c: *c, a: *a },
        };
        LevyModel::new(small, self.model.tail.clone(), self.model.p, self.model.q)
            .map_err(|e| Error::config(format!("invalid model: {e}")))
    }

    /// The simulated model of a convergence study.
    pub fn study_model(&self) -> Result<StudyModel> {
        let m = self.levy_model()?;
        match self.epsilon {
            Some(eps) => Ok(StudyModel::Truncated(m.truncate(eps)?)),
            None if m.is_finite_activity() => Ok(StudyModel::Full(m)),
            None => Err(Error::config("an infinite-activity model needs `epsilon` for a convergence study")),
        }
    }

    pub fn coefficients_for<M: ActiveModel + ?Sized>(&self, model: &M) -> Result<LinearCoefficients> {
        let c = self.coefficients;
        Ok(LinearCoefficients::new(c.b, c.sigma, c.f, c.g, model)?.with_variant(self.variant))
    }

    /// SHA-256 of the canonical JSON encoding, hex encoded.
    pub fn hash(&self) -> String {
        let bytes = serde_json::to_vec(self).expect("config serialises");
        hex::encode(Sha256::digest(&bytes))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const EULER: &str = r#"{
        "model": {
            "small": { "kind": "atoms", "atoms": [{ "x": 0.5, "mass": 0.6 }, { "x": -0.25, "mass": 0.4 }] },
            "tail": [{ "x": 1.5, "mass": 0.3 }, { "x": -1.2, "mass": 0.2 }]
        },
        "coefficients": { "b": -0.5, "sigma": 0.3, "f": 0.2, "g": 0.1 },
        "scheme": "euler",
        "levels": [3, 4, 5],
        "paths": 10,
        "seed": 1
    }"#;

    #[test]
    fn parses_with_defaults() {
        let c = StudyConfig::from_json(EULER).unwrap();
        assert_eq!(c.y0, 1.0);
        assert_eq!(c.horizon, 1.0);
        assert_eq!(c.finest_level(), 7);
        assert_eq!(c.variant, FormulaVariant::Exact);
        assert_eq!(c.oracle, OracleKind::Exact);
        assert_eq!(c.model.p, Amplitude::IDENTITY);
        let m = c.study_model().unwrap();
        assert!((m.small_mass() - 1.0).abs() < 1e-15);
        assert!((c.coefficients_for(&m).unwrap().m1 - 0.2).abs() < 1e-15);
    }

    #[test]
    fn hash_is_stable_and_sensitive() {
        let a = StudyConfig::from_json(EULER).unwrap();
        let mut b = a.clone();
        assert_eq!(a.hash(), b.hash());
        assert_eq!(a.hash().len(), 64);
        b.seed = 2;
        assert_ne!(a.hash(), b.hash());
    }

    #[test]
    fn rejects_invalid() {
        let mut c = StudyConfig::from_json(EULER).unwrap();
        c.paths = 1;
        assert!(c.validate().unwrap_err().is_config());
        let mut c = StudyConfig::from_json(EULER).unwrap();
        c.finest_level = Some(5);
        assert!(c.validate().is_err());
        let mut c = StudyConfig::from_json(EULER).unwrap();
        c.levels = vec![4, 3];
        assert!(c.validate().is_err());
        assert!(StudyConfig::from_json(&EULER.replace("\"seed\"", "\"sneed\"")).unwrap_err().is_config());
        assert!(StudyConfig::from_file(Path::new("/nonexistent/cfg.json")).unwrap_err().is_config());
    }

    #[test]
    fn power_law_needs_truncation() {
        let text = EULER.replace(
            r#"{ "kind": "atoms", "atoms": [{ "x": 0.5, "mass": 0.6 }, { "x": -0.25, "mass": 0.4 }] }"#,
            r#"{ "kind": "power_law", "c": 1.0, "a": 0.5 }"#,
        );
        assert!(StudyConfig::from_json(&text).is_err());
        let with_eps = text.replace("\"scheme\"", "\"epsilon\": 0.1, \"scheme\"");
        let c = StudyConfig::from_json(&with_eps).unwrap();
        assert!(matches!(c.study_model().unwrap(), StudyModel::Truncated(_)));
    }
}
