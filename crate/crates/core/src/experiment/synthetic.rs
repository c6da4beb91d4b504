//! Gaussian data with a known utility/privacy conflict, for exercising the
//! sweep where the expected trade-off can be reasoned about directly.

use rand::Rng as _;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::linalg::Matrix;
use crate::rng::{derive_seed, rng_from_seed};
use crate::scatter::{Dataset, LabelSet};
use crate::{Error, Result, Scalar};

use super::{DataBundle, TaskData};

/// Two binary tasks on orthogonal axes.
///
/// Sample `i` has utility class `i mod 2` and privacy class `(i / 2) mod 2`,
/// so both tasks are balanced and independent. Utility classes sit at
/// `±utility_shift` on axis 0 (and `±decoy_shift` on axis 2); privacy
/// classes at `±privacy_shift` on axis 1. Noise on axes 0 and 1 has standard
/// deviation `noise_std` and correlation `correlation`, so the best utility
/// direction leans into the privacy axis. Axis 2 carries `decoy_noise_std`,
/// every other axis `noise_std`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SyntheticSpec {
    pub n_features: usize,
    pub n_train: usize,
    pub n_test: usize,
    pub utility_shift: f64,
    pub privacy_shift: f64,
    pub noise_std: f64,
    pub correlation: f64,
    pub decoy_shift: f64,
    pub decoy_noise_std: f64,
}

impl Default for SyntheticSpec {
    fn default() -> Self {
        Self {
            n_features: 10,
            n_train: 2000,
            n_test: 2000,
            utility_shift: 1.0,
            privacy_shift: 1.0,
            noise_std: 1.0,
            correlation: 0.9,
            decoy_shift: 2.0,
            decoy_noise_std: 6.0,
        }
    }
}

impl SyntheticSpec {
    fn sample<T: Scalar>(&self, n: usize, seed: u64) -> Result<TaskData<T>> {
        if self.n_features < 3 {
            return Err(Error::InvalidConfig("synthetic data needs at least 3 features".into()));
        }
        if !(self.correlation.abs() < 1.0) {
            return Err(Error::InvalidConfig("correlation must be in (-1, 1)".into()));
        }
        let mut rng = rng_from_seed(seed);
        let m = self.n_features;
        let mut x = Matrix::zeros(m, n);
        let mut u = Vec::with_capacity(n);
        let mut p = Vec::with_capacity(n);
        let side = |c: usize| if c == 1 { 1.0 } else { -1.0 };
        let orth = (1.0 - self.correlation * self.correlation).sqrt();
        for j in 0..n {
            let (y, s) = (j % 2, (j / 2) % 2);
            u.push(y);
            p.push(s);
            let mut g = || rng.sample::<f64, _>(StandardNormal);
            let a = g();
            let b = g();
            let col = x.column_mut(j);
            col[0] = T::c(side(y) * self.utility_shift + self.noise_std * a);
            col[1] = T::c(side(s) * self.privacy_shift + self.noise_std * (self.correlation * a + orth * b));
            col[2] = T::c(side(y) * self.decoy_shift + self.decoy_noise_std * g());
            for v in col.iter_mut().skip(3) {
                *v = T::c(self.noise_std * g());
            }
        }
        TaskData::new(
            Dataset::new(x)?,
            LabelSet::new(u, 2)?,
            vec![LabelSet::new(p, 2)?],
        )
    }

    /// Independent train and test draws.
    pub fn bundle<T: Scalar>(&self, seed: u64) -> Result<DataBundle<T>> {
        Ok(DataBundle {
            train: self.sample(self.n_train, derive_seed(seed, &[0]))?,
            test: self.sample(self.n_test, derive_seed(seed, &[1]))?,
            privacy_test: None,
        })
    }
}
