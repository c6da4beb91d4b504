//! Deterministic k-nearest-neighbor and nearest-centroid classifiers used to
//! score utility and privacy accuracy on projected data.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::scatter::{Dataset, LabelSet};
use crate::{Error, Result, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ClassifierKind {
    Knn,
    NearestCentroid,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassifierSpec {
    pub kind: ClassifierKind,
    #[serde(default = "default_k_neighbors")]
    pub k_neighbors: usize,
}

fn default_k_neighbors() -> usize {
    5
}

impl Default for ClassifierSpec {
    fn default() -> Self {
        Self::knn(default_k_neighbors())
    }
}

impl ClassifierSpec {
    pub fn knn(k_neighbors: usize) -> Self {
        Self {
            kind: ClassifierKind::Knn,
            k_neighbors,
        }
    }

    pub fn nearest_centroid() -> Self {
        Self {
            kind: ClassifierKind::NearestCentroid,
            k_neighbors: default_k_neighbors(),
        }
    }

    /// `k_neighbors` must be odd and positive.
    pub fn validate(&self) -> Result<()> {
        if self.kind == ClassifierKind::Knn && (self.k_neighbors == 0 || self.k_neighbors % 2 == 0) {
            return Err(Error::InvalidConfig(format!(
                "k_neighbors must be a positive odd integer, got {}",
                self.k_neighbors
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AccuracyReport {
    /// `trace(confusion) / n_test`.
    pub accuracy: f64,
    /// `confusion[true][predicted]`.
    pub confusion: Vec<Vec<usize>>,
    pub n_test: usize,
}

impl AccuracyReport {
    fn from_predictions(truth: &[usize], predicted: &[usize], classes: usize) -> Self {
        let mut confusion = vec![vec![0; classes]; classes];
        for (&t, &p) in truth.iter().zip(predicted) {
            confusion[t][p] += 1;
        }
        let correct: usize = (0..classes).map(|c| confusion[c][c]).sum();
        Self {
            accuracy: correct as f64 / truth.len() as f64,
            confusion,
            n_test: truth.len(),
        }
    }
}

fn check_inputs<T: Scalar>(train: &Dataset<T>, train_labels: &LabelSet, test: &Dataset<T>) -> Result<()> {
    if train.n_features() != test.n_features() {
        return Err(Error::DimensionMismatch {
            expected: train.n_features(),
            found: test.n_features(),
        });
    }
    if train_labels.len() != train.n_samples() {
        return Err(Error::LengthMismatch {
            what: "train labels",
            expected: train.n_samples(),
            found: train_labels.len(),
        });
    }
    if let Some(c) = train_labels.class_counts().iter().position(|&n| n == 0) {
        return Err(Error::EmptyClass { class: c });
    }
    Ok(())
}

fn squared_distance<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |s, (&x, &y)| {
        let d = x - y;
        s + d * d
    })
}

/// Predicts a class for every test sample.
///
/// k-NN uses Euclidean distance and a majority vote among the `k` nearest;
/// equal distances go to the lower training index, and tied votes to the
/// smallest class id. Nearest centroid ties also go to the smallest class id.
pub fn predict<T: Scalar>(
    train: &Dataset<T>,
    train_labels: &LabelSet,
    test: &Dataset<T>,
    spec: &ClassifierSpec,
) -> Result<Vec<usize>> {
    spec.validate()?;
    check_inputs(train, train_labels, test)?;
    let classes = train_labels.class_count();
    let labels = train_labels.labels();
    let test_idx: Vec<usize> = (0..test.n_samples()).collect();

    let predictions = match spec.kind {
        ClassifierKind::Knn => {
            let k = spec.k_neighbors.min(train.n_samples());
            // One-dimensional data (the common case after projection) gets a
            // sorted search that returns exactly the same neighbour set.
            let line = (train.n_features() == 1).then(|| sorted_line(train));
            test_idx
                .par_iter()
                .map_init(
                    || Vec::with_capacity(2 * k + 2),
                    |nearest, &t| {
                        let x = test.sample(t);
                        match &line {
                            Some(line) => k_nearest_line(line, x[0], k, nearest),
                            None => k_nearest(train, x, k, nearest),
                        }
                        let mut votes = vec![0usize; classes];
                        for &(_, i) in nearest.iter() {
                            votes[labels[i]] += 1;
                        }
                        argmax_first(&votes)
                    },
                )
                .collect()
        }
        ClassifierKind::NearestCentroid => {
            let centroids = class_centroids(train, train_labels);
            test_idx
                .par_iter()
                .map(|&t| {
                    let x = test.sample(t);
                    let mut best = 0;
                    let mut best_d = squared_distance(x, &centroids[0]);
                    for (c, mu) in centroids.iter().enumerate().skip(1) {
                        let d = squared_distance(x, mu);
                        if d < best_d {
                            best = c;
                            best_d = d;
                        }
                    }
                    best
                })
                .collect()
        }
    };
    Ok(predictions)
}

/// Fills `nearest` with the `k` training samples closest to `x`, ordered by
/// (distance, index). Samples are scanned in index order, so a later sample
/// only displaces a kept one when strictly closer.
fn k_nearest<T: Scalar>(train: &Dataset<T>, x: &[T], k: usize, nearest: &mut Vec<(T, usize)>) {
    nearest.clear();
    for (i, s) in train.samples().enumerate() {
        let d = squared_distance(x, s);
        if nearest.len() == k {
            if !(d < nearest[k - 1].0) {
                continue;
            }
            nearest.pop();
        }
        let pos = nearest.partition_point(|&(nd, _)| nd <= d);
        nearest.insert(pos, (d, i));
    }
}

fn sorted_line<T: Scalar>(train: &Dataset<T>) -> Vec<(T, usize)> {
    let mut line: Vec<(T, usize)> = train.samples().map(|s| s[0]).zip(0..).collect();
    // Values are finite, so partial_cmp never fails.
    line.sort_unstable_by(|a, b| a.0.partial_cmp(&b.0).unwrap().then(a.1.cmp(&b.1)));
    line
}

/// Same contract as [`k_nearest`] for one feature, using a train set sorted
/// by value. Walks outward from the insertion point, then pulls in every
/// sample tied with the k-th distance before the final (distance, index) cut.
fn k_nearest_line<T: Scalar>(line: &[(T, usize)], x: T, k: usize, nearest: &mut Vec<(T, usize)>) {
    nearest.clear();
    let dist = |v: T| (x - v) * (x - v);
    let left = |lo: usize| (lo > 0).then(|| dist(line[lo - 1].0));
    let right = |hi: usize| line.get(hi).map(|&(v, _)| dist(v));
    let split = line.partition_point(|&(v, _)| v < x);
    let (mut lo, mut hi) = (split, split);
    while nearest.len() < k {
        match (left(lo), right(hi)) {
            (Some(dl), dr) if dr.map_or(true, |dr| dl <= dr) => {
                lo -= 1;
                nearest.push((dl, line[lo].1));
            }
            (_, Some(dr)) => {
                nearest.push((dr, line[hi].1));
                hi += 1;
            }
            _ => break,
        }
    }
    if let Some(&(kth, _)) = nearest.last() {
        while let Some(dl) = left(lo).filter(|&d| d <= kth) {
            lo -= 1;
            nearest.push((dl, line[lo].1));
        }
        while let Some(dr) = right(hi).filter(|&d| d <= kth) {
            nearest.push((dr, line[hi].1));
            hi += 1;
        }
    }
    nearest.sort_unstable_by(|a, b| a.0.partial_cmp(&b.0).unwrap().then(a.1.cmp(&b.1)));
    nearest.truncate(k);
}

fn argmax_first(votes: &[usize]) -> usize {
    let mut best = 0;
    for (c, &v) in votes.iter().enumerate() {
        if v > votes[best] {
            best = c;
        }
    }
    best
}

fn class_centroids<T: Scalar>(d: &Dataset<T>, l: &LabelSet) -> Vec<Vec<T>> {
    let mut sums = vec![vec![T::zero(); d.n_features()]; l.class_count()];
    for (s, &c) in d.samples().zip(l.labels()) {
        for (a, &v) in sums[c].iter_mut().zip(s) {
            *a = *a + v;
        }
    }
    for (mu, n) in sums.iter_mut().zip(l.class_counts()) {
        let n = T::from_usize_lossy(n);
        mu.iter_mut().for_each(|v| *v = *v / n);
    }
    sums
}

/// Trains on `train` and scores on `test`.
pub fn train_eval<T: Scalar>(
    train: &Dataset<T>,
    train_labels: &LabelSet,
    test: &Dataset<T>,
    test_labels: &LabelSet,
    spec: &ClassifierSpec,
) -> Result<AccuracyReport> {
    if train_labels.class_count() != test_labels.class_count() {
        return Err(Error::ClassCountMismatch {
            train: train_labels.class_count(),
            test: test_labels.class_count(),
        });
    }
    if test_labels.len() != test.n_samples() {
        return Err(Error::LengthMismatch {
            what: "test labels",
            expected: test.n_samples(),
            found: test_labels.len(),
        });
    }
    let predicted = predict(train, train_labels, test, spec)?;
    Ok(AccuracyReport::from_predictions(
        test_labels.labels(),
        &predicted,
        train_labels.class_count(),
    ))
}

/// Majority-class rate `max_c N_c / N`; `1/C` for balanced labels.
pub fn random_guess_baseline(labels: &LabelSet) -> f64 {
    let max = labels.class_counts().into_iter().max().unwrap_or(0);
    max as f64 / labels.len() as f64
}
