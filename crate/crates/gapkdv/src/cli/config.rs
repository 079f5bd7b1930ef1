//! Run configuration: one JSON document per run.
//!
//! Every field has a default, so `{}` is a valid configuration (a single
//! gap (1, 2) with the divisor point 1.3 on the upper sheet). Unknown keys
//! are rejected so that typos surface as validation errors.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::band_geometry::{BandSet, Divisor, DivisorPoint, Sheet};
use crate::error::{Error, Result};
use crate::kdv::MAX_ORDER;
use crate::tolerances::Tolerances;

/// Bumped whenever a default changes.
pub const CONFIG_VERSION: u32 = 1;

/// Evenly spaced lattice min, …, max with `count` points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeSpec {
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl LatticeSpec {
    pub fn points(&self) -> Vec<f64> {
        crate::kdv::linspace(self.min, self.max, self.count)
    }

    fn validate(&self, what: &str) -> Result<()> {
        if !self.min.is_finite() || !self.max.is_finite() {
            return Err(Error::Validation(format!("{what}-lattice bounds must be finite")));
        }
        if self.count == 0 || (self.count > 1 && self.max <= self.min) {
            return Err(Error::Validation(format!(
                "{what}-lattice needs count >= 1 and max > min (got {} points on [{}, {}])",
                self.count, self.min, self.max
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputPaths {
    pub dir: PathBuf,
}

impl Default for OutputPaths {
    fn default() -> Self {
        OutputPaths {
            dir: PathBuf::from("gapkdv-out"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub version: u32,
    /// Gaps (aⱼ, bⱼ) of E = [0, ∞) ∖ ∪(aⱼ, bⱼ).
    pub gaps: Vec<(f64, f64)>,
    /// One point per gap. When empty, each gap gets aⱼ + 0.3(bⱼ − aⱼ) on
    /// the upper sheet.
    pub divisor: Vec<DivisorPoint>,
    /// Order of the time flow.
    pub k: usize,
    pub x: LatticeSpec,
    pub t: LatticeSpec,
    pub tolerances: Tolerances,
    /// Seed for every randomly sampled check.
    pub seed: u64,
    pub output: OutputPaths,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            version: CONFIG_VERSION,
            gaps: vec![(1.0, 2.0)],
            divisor: Vec::new(),
            k: 1,
            x: LatticeSpec {
                min: 0.0,
                max: 2.0,
                count: 21,
            },
            t: LatticeSpec {
                min: 0.0,
                max: 0.5,
                count: 6,
            },
            tolerances: Tolerances::default(),
            seed: 17,
            output: OutputPaths::default(),
        }
    }
}

/// Validated geometry of a configuration.
#[derive(Debug, Clone)]
pub struct Validated {
    pub bands: BandSet,
    pub divisor: Divisor,
}

impl RunConfig {
    /// Reads a configuration file, or the defaults when `path` is `None`.
    pub fn load(path: Option<&Path>) -> Result<Self> {
        let Some(path) = path else {
            return Ok(RunConfig::default());
        };
        let text = std::fs::read_to_string(path).map_err(|e| Error::Validation(format!("cannot read config {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: RunConfig = serde_json::from_str(text).map_err(|e| Error::Validation(format!("malformed config: {e}")))?;
        if cfg.version != CONFIG_VERSION {
            return Err(Error::Validation(format!(
                "config version {} is not supported (expected {CONFIG_VERSION})",
                cfg.version
            )));
        }
        Ok(cfg)
    }

    /// Band-set and divisor rules, lattice shapes, order and tolerances,
    /// checked before any computation.
    pub fn validate(&self) -> Result<Validated> {
        let tol = &self.tolerances;
        for (name, v) in [
            ("geometry", tol.geometry),
            ("quadrature", tol.quadrature),
            ("identity", tol.identity),
            ("gap_guard", tol.gap_guard),
        ] {
            if !(v.is_finite() && v > 0.0 && v < 1.0) {
                return Err(Error::Validation(format!("tolerance {name} must lie in (0, 1), got {v}")));
            }
        }
        let bands = BandSet::with_guard(&self.gaps, tol.gap_guard)?;
        let points = if self.divisor.is_empty() {
            bands
                .gaps()
                .iter()
                .map(|g| DivisorPoint {
                    lambda: g.a + 0.3 * g.width(),
                    eps: Sheet::Plus,
                })
                .collect()
        } else {
            // Points are given in the order of the gaps as listed; sort them
            // the same way the band set sorts its gaps.
            let mut paired: Vec<((f64, f64), DivisorPoint)> = self.gaps.iter().copied().zip(self.divisor.iter().copied()).collect();
            if self.divisor.len() != self.gaps.len() {
                return Err(Error::Validation(format!(
                    "divisor has {} points but there are {} gaps",
                    self.divisor.len(),
                    self.gaps.len()
                )));
            }
            paired.sort_by(|a, b| a.0 .0.total_cmp(&b.0 .0));
            paired.into_iter().map(|(_, p)| p).collect()
        };
        let divisor = Divisor::new(&bands, points)?;
        if self.k > MAX_ORDER {
            return Err(Error::Validation(format!(
                "flow order k = {} exceeds the supported maximum {MAX_ORDER}",
                self.k
            )));
        }
        self.x.validate("x")?;
        self.t.validate("t")?;
        Ok(Validated { bands, divisor })
    }

    /// SHA-256 of the canonical JSON form (defaults filled in). The output
    /// directory is left out: it does not affect any computed value.
    pub fn hash(&self) -> String {
        let scientific = RunConfig {
            output: OutputPaths::default(),
            ..self.clone()
        };
        let bytes = serde_json::to_vec(&scientific).expect("configuration serialises");
        hex::encode(Sha256::digest(bytes))
    }
}
