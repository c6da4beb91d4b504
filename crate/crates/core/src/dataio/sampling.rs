use rand::seq::index;
use serde::{Deserialize, Serialize};

use crate::rng::{derive_seed, rng_from_seed};
use crate::scatter::{Dataset, LabelSet};
use crate::{Error, Result, Scalar};

use super::LoadedData;

/// How several balance-on labelings are combined.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BalanceMode {
    /// Balance on each labeling in turn; only the last is guaranteed exact.
    #[default]
    Sequential,
    /// Balance on the cross product of all labelings, so every cell and
    /// therefore every marginal has equal counts.
    Joint,
}

/// Per-iteration subsampling of a training set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplitSpec {
    pub seed: u64,
    pub fraction: f64,
    #[serde(default)]
    pub balance_on: Vec<String>,
}

impl SplitSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.fraction > 0.0 && self.fraction <= 1.0) {
            return Err(Error::InvalidConfig(format!(
                "fraction must be in (0, 1], got {}",
                self.fraction
            )));
        }
        Ok(())
    }
}

/// Indices that undersample every class to the smallest class count,
/// returned in ascending order.
pub fn balanced_indices(labels: &[usize], class_count: usize, seed: u64) -> Vec<usize> {
    let mut members = vec![Vec::new(); class_count];
    for (i, &l) in labels.iter().enumerate() {
        members[l].push(i);
    }
    let target = members
        .iter()
        .filter(|m| !m.is_empty())
        .map(Vec::len)
        .min()
        .unwrap_or(0);
    let mut rng = rng_from_seed(seed);
    let mut keep = Vec::with_capacity(target * class_count);
    for m in &members {
        if m.is_empty() {
            continue;
        }
        keep.extend(index::sample(&mut rng, m.len(), target).into_iter().map(|j| m[j]));
    }
    keep.sort_unstable();
    keep
}

/// Uniformly undersamples each class down to the smallest class count,
/// keeping the original order of the surviving samples.
pub fn balance_classes<T: Scalar>(d: &Dataset<T>, l: &LabelSet, seed: u64) -> Result<(Dataset<T>, LabelSet)> {
    if l.len() != d.n_samples() {
        return Err(Error::LengthMismatch {
            what: "labels",
            expected: d.n_samples(),
            found: l.len(),
        });
    }
    let keep = balanced_indices(l.labels(), l.class_count(), seed);
    Ok((d.select(&keep)?, l.select(&keep)?))
}

/// Balances a loaded dataset on the named label columns.
pub fn balance_loaded(data: &LoadedData, on: &[String], mode: BalanceMode, seed: u64) -> Result<LoadedData> {
    if on.is_empty() {
        return Ok(data.clone());
    }
    match mode {
        BalanceMode::Sequential => {
            let mut out = data.clone();
            for (step, name) in on.iter().enumerate() {
                let l = out.label(name)?;
                let keep = balanced_indices(l.labels(), l.class_count(), derive_seed(seed, &[step as u64]));
                out = out.select(&keep)?;
            }
            Ok(out)
        }
        BalanceMode::Joint => {
            let sets: Vec<&LabelSet> = on.iter().map(|n| data.label(n)).collect::<Result<_>>()?;
            let cells: usize = sets.iter().map(|s| s.class_count()).product();
            let joint: Vec<usize> = (0..data.dataset.n_samples())
                .map(|i| sets.iter().fold(0, |acc, s| acc * s.class_count() + s.labels()[i]))
                .collect();
            let keep = balanced_indices(&joint, cells, seed);
            data.select(&keep)
        }
    }
}

/// Draws `floor(fraction · N)` rows (at least one) uniformly without
/// replacement, seeded by `derive_seed(spec.seed, [iteration])`. Rows keep
/// their original order.
pub fn subsample_indices(n: usize, spec: &SplitSpec, iteration: u64) -> Result<Vec<usize>> {
    spec.validate()?;
    let take = ((spec.fraction * n as f64).floor() as usize).clamp(1, n.max(1));
    if take >= n {
        return Ok((0..n).collect());
    }
    let mut rng = rng_from_seed(derive_seed(spec.seed, &[iteration]));
    let mut idx = index::sample(&mut rng, n, take).into_vec();
    idx.sort_unstable();
    Ok(idx)
}

pub fn subsample<T: Scalar>(
    d: &Dataset<T>,
    labels: &[LabelSet],
    spec: &SplitSpec,
    iteration: u64,
) -> Result<(Dataset<T>, Vec<LabelSet>)> {
    let idx = subsample_indices(d.n_samples(), spec, iteration)?;
    let labels = labels.iter().map(|l| l.select(&idx)).collect::<Result<_>>()?;
    Ok((d.select(&idx)?, labels))
}

/// Splits indices into (kept, held out), holding out `floor(fraction · N_c)`
/// samples of every class `c`, chosen uniformly with the given seed.
pub fn stratified_holdout(labels: &LabelSet, fraction: f64, seed: u64) -> Result<(Vec<usize>, Vec<usize>)> {
    if !(fraction > 0.0 && fraction < 1.0) {
        return Err(Error::InvalidConfig(format!(
            "holdout fraction must be in (0, 1), got {fraction}"
        )));
    }
    let mut members = vec![Vec::new(); labels.class_count()];
    for (i, &l) in labels.labels().iter().enumerate() {
        members[l].push(i);
    }
    let mut rng = rng_from_seed(seed);
    let mut held = Vec::new();
    for m in &members {
        let take = (fraction * m.len() as f64).floor() as usize;
        held.extend(index::sample(&mut rng, m.len(), take).into_iter().map(|j| m[j]));
    }
    held.sort_unstable();
    let mut is_held = vec![false; labels.len()];
    for &i in &held {
        is_held[i] = true;
    }
    let kept = (0..labels.len()).filter(|&i| !is_held[i]).collect();
    Ok((kept, held))
}
