use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Method {
    Pca,
    Dca,
    Mdr,
    Ruca,
    Random,
}

impl Method {
    pub const ALL: [Method; 5] = [Method::Pca, Method::Dca, Method::Mdr, Method::Ruca, Method::Random];

    pub fn name(self) -> &'static str {
        match self {
            Method::Pca => "PCA",
            Method::Dca => "DCA",
            Method::Mdr => "MDR",
            Method::Ruca => "RUCA",
            Method::Random => "RANDOM",
        }
    }

    /// Whether the method solves a generalized eigenproblem.
    pub fn is_discriminant(self) -> bool {
        matches!(self, Method::Dca | Method::Mdr | Method::Ruca)
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidConfig(format!("unknown projection method {s:?}")))
    }
}

/// Parameters of one projection fit.
///
/// `rho` and `rho_prime` left as `None` are resolved from the training
/// scatter at fit time: `ρ = 1e-6 · tr(S̄)/M` and `ρ′ = 1e-8 · tr(S_B)/M`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProjectionConfig {
    pub method: Method,
    pub k: usize,
    #[serde(default)]
    pub rho: Option<f64>,
    #[serde(default)]
    pub rho_prime: Option<f64>,
    /// One `ρ_p` per privacy labeling (RUCA only).
    #[serde(default)]
    pub privacy_weights: Vec<f64>,
    #[serde(default)]
    pub seed: u64,
}

impl ProjectionConfig {
    pub fn new(method: Method, k: usize) -> Self {
        Self {
            method,
            k,
            rho: None,
            rho_prime: None,
            privacy_weights: Vec::new(),
            seed: 0,
        }
    }

    pub fn with_rho(mut self, rho: f64) -> Self {
        self.rho = Some(rho);
        self
    }

    pub fn with_rho_prime(mut self, rho_prime: f64) -> Self {
        self.rho_prime = Some(rho_prime);
        self
    }

    pub fn with_privacy_weights(mut self, weights: Vec<f64>) -> Self {
        self.privacy_weights = weights;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.k == 0 {
            return Err(Error::InvalidConfig("k must be at least 1".into()));
        }
        if let Some(rho) = self.rho {
            if !(rho > 0.0 && rho.is_finite()) {
                return Err(Error::InvalidConfig(format!("rho must be positive, got {rho}")));
            }
        }
        if let Some(rp) = self.rho_prime {
            if !(rp >= 0.0 && rp.is_finite()) {
                return Err(Error::InvalidConfig(format!(
                    "rho_prime must be non-negative, got {rp}"
                )));
            }
        }
        if let Some(w) = self.privacy_weights.iter().find(|w| !(**w >= 0.0 && w.is_finite())) {
            return Err(Error::InvalidConfig(format!(
                "privacy weights must be non-negative, got {w}"
            )));
        }
        Ok(())
    }
}
