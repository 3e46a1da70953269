//! Experiment configuration, read from TOML.
//!
//! ```toml
//! models = ["iii", "iv"]
//! algorithms = ["quantum", "classical"]
//! seeds = { start = 0, count = 50 }
//! error_target = 0.1
//!
//! [family]
//! kind = "bernoulli"
//! theta_p = [0.5]
//! theta_q = [0.6, 0.7, 0.8, 0.9]
//!
//! [output]
//! csv = "bernoulli.csv"
//! svg = "bernoulli.svg"
//! ```

use std::collections::BTreeSet;
use std::fmt;
use std::path::{Path, PathBuf};

use clap::ValueEnum;
use qdist_core::discriminators::{AlgoParams, DEFAULT_EPSILON, DEFAULT_KAPPA, DEFAULT_ROUNDS};
use qdist_core::distributions::DistFamily;
use qdist_core::oracles::{GarbageSpec, Model};
use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};
use crate::family::PairFile;

/// Parameter grid of one distribution family. Lists are crossed.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum FamilyGrid {
    Collision { n: Vec<usize> },
    Tiered { t: Vec<u32> },
    Bernoulli { theta_p: Vec<f64>, theta_q: Vec<f64> },
    /// Pair files, relative to the configuration file.
    Pairs { files: Vec<PathBuf> },
}

impl FamilyGrid {
    /// Grid points in a fixed order. Pair files that fail to load become
    /// errors attached to their grid point.
    pub fn points(&self, base: &Path) -> Vec<Result<DistFamily, String>> {
        match self {
            FamilyGrid::Collision { n } => n.iter().map(|&n| Ok(DistFamily::Collision { n })).collect(),
            FamilyGrid::Tiered { t } => t.iter().map(|&t| Ok(DistFamily::Tiered { t })).collect(),
            FamilyGrid::Bernoulli { theta_p, theta_q } => theta_p
                .iter()
                .flat_map(|&tp| theta_q.iter().map(move |&tq| Ok(DistFamily::Bernoulli { theta_p: tp, theta_q: tq })))
                .collect(),
            FamilyGrid::Pairs { files } => files
                .iter()
                .map(|f| PairFile::load(&base.join(f)).and_then(|p| p.family()).map_err(|e| e.to_string()))
                .collect(),
        }
    }

    fn len(&self) -> usize {
        match self {
            FamilyGrid::Collision { n } => n.len(),
            FamilyGrid::Tiered { t } => t.len(),
            FamilyGrid::Bernoulli { theta_p, theta_q } => theta_p.len() * theta_q.len(),
            FamilyGrid::Pairs { files } => files.len(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize, ValueEnum)]
pub enum ModelName {
    #[serde(rename = "i")]
    #[value(name = "i")]
    I,
    #[serde(rename = "ii")]
    #[value(name = "ii")]
    Ii,
    #[serde(rename = "iii")]
    #[value(name = "iii")]
    Iii,
    #[serde(rename = "iv")]
    #[value(name = "iv")]
    Iv,
}

impl ModelName {
    pub const ALL: [ModelName; 4] = [ModelName::I, ModelName::Ii, ModelName::Iii, ModelName::Iv];

    pub fn model(self) -> Model {
        match self {
            ModelName::I => Model::Frequency,
            ModelName::Ii => Model::Iid,
            ModelName::Iii => Model::StatePrep,
            ModelName::Iv => Model::StatePrepGarbage,
        }
    }
}

impl fmt::Display for ModelName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.model().short_name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    /// The model's own discriminator.
    Quantum,
    /// Rejection sampling plus amplitude estimation.
    Standard,
    /// Likelihood-ratio test on samples; independent of the model.
    Classical,
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Algorithm::Quantum => "quantum",
            Algorithm::Standard => "standard",
            Algorithm::Classical => "classical",
        })
    }
}

/// Seeds as an explicit list or a contiguous range.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Seeds {
    List(Vec<u64>),
    Range { start: u64, count: u64 },
}

impl Seeds {
    pub fn values(&self) -> Vec<u64> {
        match self {
            Seeds::List(v) => v.clone(),
            Seeds::Range { start, count } => (*start..start.saturating_add(*count)).collect(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum GarbageKindName {
    Trivial,
    Haar,
    Adversarial,
}

/// Garbage used by model (iv) instances. Haar garbage is drawn per seed.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GarbageConfig {
    pub kind: GarbageKindName,
    pub dim: usize,
}

impl Default for GarbageConfig {
    fn default() -> Self {
        GarbageConfig { kind: GarbageKindName::Trivial, dim: 1 }
    }
}

impl GarbageConfig {
    /// Garbage for the `P` and `Q` candidates of one run.
    pub fn specs(&self, seed: u64) -> (GarbageSpec, GarbageSpec) {
        match self.kind {
            GarbageKindName::Trivial => (GarbageSpec::trivial_dim(self.dim), GarbageSpec::trivial_dim(self.dim)),
            GarbageKindName::Haar => {
                let s = seed.wrapping_mul(2);
                (GarbageSpec::haar(s, self.dim), GarbageSpec::haar(s + 1, self.dim))
            }
            GarbageKindName::Adversarial => {
                (GarbageSpec::adversarial(0, self.dim), GarbageSpec::adversarial(1, self.dim))
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct QuantumConfig {
    pub epsilon: f64,
    pub kappa: f64,
    pub rounds: usize,
}

impl Default for QuantumConfig {
    fn default() -> Self {
        QuantumConfig { epsilon: DEFAULT_EPSILON, kappa: DEFAULT_KAPPA, rounds: DEFAULT_ROUNDS }
    }
}

impl QuantumConfig {
    pub fn params(&self) -> AlgoParams {
        AlgoParams { epsilon: self.epsilon, kappa: self.kappa, rounds: self.rounds, ..AlgoParams::default() }
    }
}

/// Acceptance probabilities at which the lower bound is evaluated.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CertificateConfig {
    pub s_p: f64,
    pub s_q: f64,
}

impl Default for CertificateConfig {
    fn default() -> Self {
        CertificateConfig { s_p: 2.0 / 3.0, s_q: 1.0 / 3.0 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    pub csv: PathBuf,
    #[serde(default)]
    pub svg: Option<PathBuf>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default)]
    pub name: Option<String>,
    pub family: FamilyGrid,
    pub models: Vec<ModelName>,
    pub algorithms: Vec<Algorithm>,
    pub seeds: Seeds,
    /// Error target of the classical sample-size calibration.
    pub error_target: f64,
    #[serde(default)]
    pub quantum: QuantumConfig,
    #[serde(default)]
    pub garbage: GarbageConfig,
    /// String length for models (i) and (ii).
    #[serde(default = "default_string_length")]
    pub string_length: usize,
    /// Monte Carlo trials per side in the classical calibration.
    #[serde(default = "default_classical_trials")]
    pub classical_trials: u32,
    #[serde(default)]
    pub certificate: CertificateConfig,
    pub output: OutputConfig,
    /// Directory that relative paths are resolved against.
    #[serde(skip)]
    pub base_dir: PathBuf,
}

fn default_string_length() -> usize {
    20
}

fn default_classical_trials() -> u32 {
    2000
}

impl ExperimentConfig {
    pub fn from_toml(text: &str, base_dir: &Path) -> Result<Self> {
        let mut cfg: ExperimentConfig =
            toml::from_str(text).map_err(|source| LabError::Toml { path: base_dir.into(), source })?;
        cfg.base_dir = base_dir.to_path_buf();
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| LabError::io(path, e))?;
        let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        let mut cfg: ExperimentConfig =
            toml::from_str(&text).map_err(|source| LabError::Toml { path: path.into(), source })?;
        cfg.base_dir = base;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(LabError::Config(m.into()));
        if self.family.len() == 0 {
            return bad("the family grid is empty");
        }
        if self.models.is_empty() && self.algorithms.iter().any(|a| *a != Algorithm::Classical) {
            return bad("quantum algorithms need at least one model");
        }
        if self.algorithms.is_empty() {
            return bad("no algorithms selected");
        }
        let seeds = self.seeds.values();
        if seeds.is_empty() {
            return bad("the seed list is empty");
        }
        if seeds.iter().collect::<BTreeSet<_>>().len() != seeds.len() {
            return bad("seeds must be distinct");
        }
        if !(self.error_target > 0.0 && self.error_target < 0.5) {
            return bad("error_target must lie in (0, 1/2)");
        }
        if self.garbage.dim == 0 {
            return bad("garbage dimension must be positive");
        }
        if self.string_length == 0 {
            return bad("string_length must be positive");
        }
        if self.classical_trials == 0 {
            return bad("classical_trials must be positive");
        }
        self.quantum.params().validate()?;
        Ok(())
    }

    pub fn csv_path(&self) -> PathBuf {
        self.base_dir.join(&self.output.csv)
    }

    pub fn svg_path(&self) -> Option<PathBuf> {
        self.output.svg.as_ref().map(|p| self.base_dir.join(p))
    }
}
