//! Experiment configuration and its TOML schema.
//!
//! ```toml
//! num_modes = 4
//! fanout = 2
//! power_scale = 1.0
//! efficiency = 0.6            # scalar, or one value per mode
//!
//! [[sources]]
//! modes = [0, 1]
//! squeezing = 0.6
//! indistinguishability = 0.96
//!
//! [unitary]
//! seed = 7                    # Haar-random instance
//! # rows = ["re im re im", ...]  explicit matrix, row-major, interleaved re/im
//! ```

use std::fmt::Write as _;
use std::path::Path;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::unitary::{check_unitary, haar_unitary};

/// A two-mode squeezed source feeding input modes `modes.0` and `modes.1`.
#[derive(Debug, Clone, PartialEq)]
pub struct Source {
    pub modes: (usize, usize),
    pub squeezing: f64,
    pub indistinguishability: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum UnitarySpec {
    Haar { seed: u64 },
    Explicit(DMatrix<Complex64>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub num_modes: usize,
    pub fanout: usize,
    pub sources: Vec<Source>,
    pub efficiency: Vec<f64>,
    pub unitary: UnitarySpec,
    pub power_scale: f64,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSource {
    modes: [usize; 2],
    squeezing: f64,
    #[serde(default = "one")]
    indistinguishability: f64,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(untagged)]
enum RawEfficiency {
    Uniform(f64),
    PerMode(Vec<f64>),
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawUnitary {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    rows: Option<Vec<String>>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    num_modes: usize,
    #[serde(default = "default_fanout")]
    fanout: usize,
    #[serde(default = "one")]
    power_scale: f64,
    efficiency: RawEfficiency,
    sources: Vec<RawSource>,
    unitary: RawUnitary,
}

fn one() -> f64 {
    1.0
}

fn default_fanout() -> usize {
    8
}

fn parse_rows(rows: &[String], m: usize) -> Result<DMatrix<Complex64>> {
    if rows.len() != m {
        return Err(Error::Config(format!(
            "explicit unitary has {} rows, expected {m}",
            rows.len()
        )));
    }
    let mut u = DMatrix::zeros(m, m);
    for (i, row) in rows.iter().enumerate() {
        let values: Vec<f64> = row
            .split_whitespace()
            .map(|tok| {
                tok.parse::<f64>()
                    .map_err(|e| Error::Config(format!("unitary row {i}: {tok:?}: {e}")))
            })
            .collect::<Result<_>>()?;
        if values.len() != 2 * m {
            return Err(Error::Config(format!(
                "unitary row {i} has {} numbers, expected {}",
                values.len(),
                2 * m
            )));
        }
        for j in 0..m {
            u[(i, j)] = Complex64::new(values[2 * j], values[2 * j + 1]);
        }
    }
    Ok(u)
}

fn format_rows(u: &DMatrix<Complex64>) -> Vec<String> {
    (0..u.nrows())
        .map(|i| {
            let mut row = String::new();
            for j in 0..u.ncols() {
                if j > 0 {
                    row.push(' ');
                }
                let z = u[(i, j)];
                let _ = write!(row, "{:?} {:?}", z.re, z.im);
            }
            row
        })
        .collect()
}

impl ExperimentConfig {
    /// Uniform-efficiency configuration with a Haar-random interferometer.
    pub fn uniform(
        num_modes: usize,
        fanout: usize,
        sources: Vec<Source>,
        efficiency: f64,
        unitary_seed: u64,
    ) -> Result<Self> {
        let cfg = Self {
            num_modes,
            fanout,
            sources,
            efficiency: vec![efficiency; num_modes],
            unitary: UnitarySpec::Haar { seed: unitary_seed },
            power_scale: 1.0,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Sources on adjacent mode pairs `(0,1), (2,3), ...`, all with the same
    /// squeezing and indistinguishability.
    pub fn paired_sources(num_modes: usize, squeezing: f64, indistinguishability: f64) -> Vec<Source> {
        (0..num_modes / 2)
            .map(|k| Source {
                modes: (2 * k, 2 * k + 1),
                squeezing,
                indistinguishability,
            })
            .collect()
    }

    pub fn with_power_scale(mut self, scale: f64) -> Self {
        self.power_scale = scale;
        self
    }

    pub fn with_unitary(mut self, unitary: UnitarySpec) -> Self {
        self.unitary = unitary;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let m = self.num_modes;
        if m == 0 {
            return Err(Error::Config("num_modes must be positive".into()));
        }
        if self.fanout == 0 || self.fanout > u8::MAX as usize {
            return Err(Error::Config(format!("fanout must be in 1..=255, got {}", self.fanout)));
        }
        if !(self.power_scale >= 0.0 && self.power_scale.is_finite()) {
            return Err(Error::Config("power_scale must be non-negative".into()));
        }
        if self.efficiency.len() != m {
            return Err(Error::Config(format!(
                "efficiency has {} entries, expected {m}",
                self.efficiency.len()
            )));
        }
        if self.efficiency.iter().any(|e| !(0.0..=1.0).contains(e)) {
            return Err(Error::Config("efficiencies must lie in [0, 1]".into()));
        }
        let mut used = vec![false; m];
        for (k, s) in self.sources.iter().enumerate() {
            let (a, b) = s.modes;
            if a >= m || b >= m || a == b || used[a] || used[b] {
                return Err(Error::Config(format!(
                    "source {k}: modes ({a}, {b}) must be distinct, unused and below {m}"
                )));
            }
            used[a] = true;
            used[b] = true;
            if !(s.squeezing >= 0.0 && s.squeezing.is_finite()) {
                return Err(Error::Config(format!("source {k}: negative squeezing")));
            }
            if !(0.0..=1.0).contains(&s.indistinguishability) {
                return Err(Error::Config(format!(
                    "source {k}: indistinguishability outside [0, 1]"
                )));
            }
        }
        if let UnitarySpec::Explicit(u) = &self.unitary {
            if u.nrows() != m || u.ncols() != m {
                return Err(Error::Config(format!(
                    "explicit unitary is {}x{}, expected {m}x{m}",
                    u.nrows(),
                    u.ncols()
                )));
            }
            check_unitary(u)?;
        }
        Ok(())
    }

    /// Squeezing of source `k` after applying `power_scale`.
    pub fn effective_squeezing(&self, k: usize) -> f64 {
        self.sources[k].squeezing * self.power_scale
    }

    pub fn unitary_matrix(&self) -> DMatrix<Complex64> {
        match &self.unitary {
            UnitarySpec::Haar { seed } => haar_unitary(self.num_modes, *seed),
            UnitarySpec::Explicit(u) => u.clone(),
        }
    }

    pub fn num_bins(&self) -> usize {
        self.num_modes * self.fanout
    }

    fn to_raw(&self) -> RawConfig {
        let uniform = self.efficiency.windows(2).all(|w| w[0] == w[1]);
        RawConfig {
            num_modes: self.num_modes,
            fanout: self.fanout,
            power_scale: self.power_scale,
            efficiency: if uniform && !self.efficiency.is_empty() {
                RawEfficiency::Uniform(self.efficiency[0])
            } else {
                RawEfficiency::PerMode(self.efficiency.clone())
            },
            sources: self
                .sources
                .iter()
                .map(|s| RawSource {
                    modes: [s.modes.0, s.modes.1],
                    squeezing: s.squeezing,
                    indistinguishability: s.indistinguishability,
                })
                .collect(),
            unitary: match &self.unitary {
                UnitarySpec::Haar { seed } => RawUnitary {
                    seed: Some(*seed),
                    rows: None,
                },
                UnitarySpec::Explicit(u) => RawUnitary {
                    seed: None,
                    rows: Some(format_rows(u)),
                },
            },
        }
    }

    fn from_raw(raw: RawConfig) -> Result<Self> {
        let m = raw.num_modes;
        let efficiency = match raw.efficiency {
            RawEfficiency::Uniform(e) => vec![e; m],
            RawEfficiency::PerMode(v) => v,
        };
        let unitary = match (raw.unitary.seed, raw.unitary.rows) {
            (Some(seed), None) => UnitarySpec::Haar { seed },
            (None, Some(rows)) => UnitarySpec::Explicit(parse_rows(&rows, m)?),
            _ => return Err(Error::Config("[unitary] needs exactly one of `seed` or `rows`".into())),
        };
        let cfg = Self {
            num_modes: m,
            fanout: raw.fanout,
            sources: raw
                .sources
                .into_iter()
                .map(|s| Source {
                    modes: (s.modes[0], s.modes[1]),
                    squeezing: s.squeezing,
                    indistinguishability: s.indistinguishability,
                })
                .collect(),
            efficiency,
            unitary,
            power_scale: raw.power_scale,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        let raw: RawConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        Self::from_raw(raw)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(&self.to_raw()).expect("config serialises to TOML")
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_toml_str(&std::fs::read_to_string(path)?)
    }

    /// Content hash of the canonical serialisation (16 hex digits).
    pub fn fingerprint(&self) -> String {
        let canonical = serde_json::to_string(&self.to_raw()).expect("config serialises to JSON");
        let digest = Sha256::digest(canonical.as_bytes());
        digest[..8].iter().map(|b| format!("{b:02x}")).collect()
    }
}
