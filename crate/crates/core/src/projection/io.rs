use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::linalg::Matrix;
use crate::{Error, Result, Scalar};

use super::{Method, ProjectionConfig, ProjectionModel};

/// On-disk JSON layout of a [`ProjectionModel`]. `w` is row-major
/// (`M` rows of `K` numbers). Numbers are written in shortest round-trip
/// form, so a save/load cycle is bit-exact.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelDocument {
    pub method: Method,
    pub k: usize,
    pub rho: Option<f64>,
    pub rho_prime: Option<f64>,
    pub privacy_weights: Vec<f64>,
    pub seed: u64,
    pub feature_mean: Vec<f64>,
    pub eigenvalues: Vec<f64>,
    pub w: Vec<Vec<f64>>,
}

impl<T: Scalar> From<&ProjectionModel<T>> for ModelDocument {
    fn from(m: &ProjectionModel<T>) -> Self {
        let f = |v: &[T]| v.iter().map(|x| x.as_f64()).collect::<Vec<_>>();
        Self {
            method: m.config.method,
            k: m.k(),
            rho: m.config.rho,
            rho_prime: m.config.rho_prime,
            privacy_weights: m.config.privacy_weights.clone(),
            seed: m.config.seed,
            feature_mean: f(&m.feature_mean),
            eigenvalues: f(&m.eigenvalues),
            w: m.w.to_rows().iter().map(|r| f(r)).collect(),
        }
    }
}

impl ModelDocument {
    pub fn into_model<T: Scalar>(self) -> Result<ProjectionModel<T>> {
        let m = self.w.len();
        if m == 0 || self.w.iter().any(|r| r.len() != self.k) {
            return Err(Error::InvalidConfig(format!(
                "model matrix must have {} columns in every row",
                self.k
            )));
        }
        if self.feature_mean.len() != m {
            return Err(Error::LengthMismatch {
                what: "feature_mean",
                expected: m,
                found: self.feature_mean.len(),
            });
        }
        let config = ProjectionConfig {
            method: self.method,
            k: self.k,
            rho: self.rho,
            rho_prime: self.rho_prime,
            privacy_weights: self.privacy_weights,
            seed: self.seed,
        };
        config.validate()?;
        Ok(ProjectionModel {
            w: Matrix::from_fn(m, self.k, |i, j| T::c(self.w[i][j])),
            eigenvalues: self.eigenvalues.into_iter().map(T::c).collect(),
            config,
            feature_mean: self.feature_mean.into_iter().map(T::c).collect(),
        })
    }
}

impl<T: Scalar> ProjectionModel<T> {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&ModelDocument::from(self))?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str::<ModelDocument>(s)?.into_model()
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_json()? + "\n")?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn model(values: Vec<f64>) -> ProjectionModel<f64> {
        ProjectionModel {
            w: Matrix::from_col_major(3, 2, values[..6].to_vec()),
            eigenvalues: values[6..8].to_vec(),
            config: ProjectionConfig::new(Method::Ruca, 2)
                .with_rho(values[8].abs() + 1e-300)
                .with_rho_prime(0.0)
                .with_privacy_weights(vec![4.0]),
            feature_mean: values[9..12].to_vec(),
        }
    }

    proptest! {
        #[test]
        fn json_round_trip_is_bit_exact(values in prop::collection::vec(-1e6f64..1e6, 12)) {
            let m = model(values);
            let back = ProjectionModel::<f64>::from_json(&m.to_json().unwrap()).unwrap();
            prop_assert_eq!(back, m);
        }
    }

    #[test]
    fn document_layout() {
        let m = model((0..12).map(|i| i as f64 + 0.5).collect());
        let v: serde_json::Value = serde_json::from_str(&m.to_json().unwrap()).unwrap();
        assert_eq!(v["method"], "RUCA");
        assert_eq!(v["k"], 2);
        assert_eq!(v["w"][1], serde_json::json!([1.5, 4.5]));
        assert_eq!(v["feature_mean"].as_array().unwrap().len(), 3);
        assert_eq!(v["privacy_weights"], serde_json::json!([4.0]));
    }

    #[test]
    fn ragged_matrix_rejected() {
        let json = r#"{"method":"PCA","k":2,"rho":null,"rho_prime":null,"privacy_weights":[],
            "seed":0,"feature_mean":[0,0],"eigenvalues":[1,1],"w":[[1,0],[0]]}"#;
        assert!(ProjectionModel::<f64>::from_json(json).is_err());
    }
}
