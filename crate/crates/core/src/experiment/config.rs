use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::classify::ClassifierSpec;
use crate::projection::{Method, ProjectionConfig};
use crate::{Error, Result};

/// Which privacy accuracy the performance criterion is charged against.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PrivacyScoring {
    /// The first listed privacy task.
    #[default]
    First,
    /// The worst case (highest accuracy) over all privacy tasks.
    Max,
}

/// Grid of projection settings for one method.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MethodGrid {
    pub method: Method,
    /// Target dimensions to sweep.
    pub k: Vec<usize>,
    /// RUCA only: weight vectors, one `ρ_p` per privacy task.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub privacy_weights: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho_prime: Option<f64>,
}

impl MethodGrid {
    pub fn new(method: Method, k: Vec<usize>) -> Self {
        Self {
            method,
            k,
            privacy_weights: Vec::new(),
            rho: None,
            rho_prime: None,
        }
    }

    pub fn with_privacy_weights(mut self, weights: Vec<Vec<f64>>) -> Self {
        self.privacy_weights = weights;
        self
    }

    /// Expands to one [`ProjectionConfig`] per grid cell (seed left at 0).
    pub fn cells(&self, n_privacy: usize) -> Vec<ProjectionConfig> {
        let weights: Vec<Vec<f64>> = match self.method {
            Method::Ruca if self.privacy_weights.is_empty() => vec![vec![0.0; n_privacy]],
            Method::Ruca => self.privacy_weights.clone(),
            _ => vec![Vec::new()],
        };
        let mut out = Vec::new();
        for &k in &self.k {
            for w in &weights {
                let mut cfg = ProjectionConfig::new(self.method, k).with_privacy_weights(w.clone());
                cfg.rho = self.rho;
                cfg.rho_prime = self.rho_prime;
                out.push(cfg);
            }
        }
        out
    }
}

fn default_true() -> bool {
    true
}

/// Sweep description, read from JSON field-for-field.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub methods: Vec<MethodGrid>,
    #[serde(default)]
    pub classifier: ClassifierSpec,
    pub iterations: usize,
    /// Fraction of the training set drawn in each iteration.
    pub fraction: f64,
    #[serde(default)]
    pub betas: Vec<f64>,
    pub seed: u64,
    /// Label column used as the utility task.
    pub utility: String,
    /// Label columns used as privacy tasks, in order.
    pub privacy: Vec<String>,
    #[serde(default)]
    pub privacy_scoring: PrivacyScoring,
    /// Also evaluate the classifiers without any projection.
    #[serde(default = "default_true")]
    pub full_dimensional: bool,
    /// Z-score features with the statistics of each training subsample.
    #[serde(default)]
    pub standardize: bool,
}

impl ExperimentConfig {
    pub fn from_json(s: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(s)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidConfig(m));
        if self.iterations == 0 {
            return bad("iterations must be at least 1".into());
        }
        if !(self.fraction > 0.0 && self.fraction <= 1.0) {
            return bad(format!("fraction must be in (0, 1], got {}", self.fraction));
        }
        if let Some(b) = self.betas.iter().find(|b| !(**b >= 0.0 && b.is_finite())) {
            return bad(format!("privacy pricing must be non-negative, got {b}"));
        }
        if self.privacy.is_empty() {
            return bad("at least one privacy label is required".into());
        }
        self.classifier.validate()?;
        for g in &self.methods {
            if g.k.is_empty() {
                return bad(format!("{} grid has no k values", g.method));
            }
            for cell in g.cells(self.privacy.len()) {
                cell.validate()?;
                if cell.method == Method::Ruca && cell.privacy_weights.len() != self.privacy.len() {
                    return Err(Error::WeightMismatch {
                        weights: cell.privacy_weights.len(),
                        tasks: self.privacy.len(),
                    });
                }
            }
        }
        Ok(())
    }
}
