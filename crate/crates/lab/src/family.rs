//! Distribution pairs: command-line family specs and pair files.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use qdist_core::distributions::{generate, DistFamily, ProbDist};
use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};

/// A generated family written as `collision:N`, `tiered:T` or
/// `bernoulli:THETA_P:THETA_Q`.
#[derive(Clone, Debug, PartialEq)]
pub struct FamilySpec(pub DistFamily);

impl FromStr for FamilySpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let mut parts = s.split(':');
        let kind = parts.next().unwrap_or_default();
        let args: Vec<&str> = parts.collect();
        let num = |i: usize| -> Result<f64, String> {
            args.get(i).ok_or_else(|| format!("{kind}: missing argument {}", i + 1))?.parse::<f64>().map_err(|e| format!("{s}: {e}"))
        };
        let int = |i: usize| -> Result<u64, String> {
            args.get(i).ok_or_else(|| format!("{kind}: missing argument {}", i + 1))?.parse::<u64>().map_err(|e| format!("{s}: {e}"))
        };
        let (family, arity) = match kind {
            "collision" => (DistFamily::Collision { n: int(0)? as usize }, 1),
            "tiered" => (DistFamily::Tiered { t: u32::try_from(int(0)?).map_err(|e| e.to_string())? }, 1),
            "bernoulli" => (DistFamily::Bernoulli { theta_p: num(0)?, theta_q: num(1)? }, 2),
            _ => return Err(format!("unknown family '{kind}' (collision:N, tiered:T, bernoulli:P:Q)")),
        };
        if args.len() != arity {
            return Err(format!("{kind} takes {arity} argument(s), got {}", args.len()));
        }
        Ok(FamilySpec(family))
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            DistFamily::Collision { n } => write!(f, "collision:{n}"),
            DistFamily::Tiered { t } => write!(f, "tiered:{t}"),
            DistFamily::Bernoulli { theta_p, theta_q } => write!(f, "bernoulli:{theta_p}:{theta_q}"),
            DistFamily::Custom { .. } => f.write_str("custom"),
        }
    }
}

/// Family name and parameters as stored in experiment records.
pub fn describe(family: &DistFamily) -> (String, String) {
    match family {
        DistFamily::Collision { n } => ("collision".into(), format!("n={n}")),
        DistFamily::Tiered { t } => ("tiered".into(), format!("t={t}")),
        DistFamily::Bernoulli { theta_p, theta_q } => {
            ("bernoulli".into(), format!("theta_p={theta_p};theta_q={theta_q}"))
        }
        DistFamily::Custom { p, .. } => ("custom".into(), format!("alphabet={}", p.alphabet_size())),
    }
}

/// Two distributions on a common alphabet, stored as TOML:
///
/// ```toml
/// p = [0.25, 0.25, 0.25, 0.25]
/// q = [0.5, 0.5, 0.0, 0.0]
/// ```
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairFile {
    pub p: Vec<f64>,
    pub q: Vec<f64>,
}

impl PairFile {
    pub fn from_dists(p: &ProbDist, q: &ProbDist) -> Self {
        PairFile { p: p.probs().to_vec(), q: q.probs().to_vec() }
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| LabError::io(path, e))?;
        toml::from_str(&text).map_err(|source| LabError::Toml { path: path.into(), source })
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let text = toml::to_string(self).map_err(|e| LabError::Config(e.to_string()))?;
        std::fs::write(path, text).map_err(|e| LabError::io(path, e))
    }

    pub fn family(&self) -> Result<DistFamily> {
        Ok(DistFamily::Custom { p: ProbDist::new(self.p.clone())?, q: ProbDist::new(self.q.clone())? })
    }

    pub fn dists(&self) -> Result<(ProbDist, ProbDist)> {
        Ok(generate(&self.family()?)?)
    }
}
