//! Center-adjusted, between-class and within-class scatter matrices.
//!
//! All three are raw sums over samples, not covariances: nothing is divided
//! by `N`. The regularizers `ρ` and `ρ_p` used by the projections are
//! therefore relative to the size of the training set.

use crate::linalg::{sym_eig, Matrix, SymMatrix};
use crate::{Error, Result, Scalar};

/// `M` features × `N` samples, one sample per column.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset<T> {
    x: Matrix<T>,
    feature_names: Vec<String>,
}

impl<T: Scalar> Dataset<T> {
    /// Validates shape and finiteness. Features get names `f0, f1, ...`.
    pub fn new(x: Matrix<T>) -> Result<Self> {
        let names = (0..x.rows()).map(|i| format!("f{i}")).collect();
        Self::with_names(x, names)
    }

    pub fn with_names(x: Matrix<T>, feature_names: Vec<String>) -> Result<Self> {
        if x.rows() == 0 || x.cols() == 0 {
            return Err(Error::EmptyDataset);
        }
        if feature_names.len() != x.rows() {
            return Err(Error::LengthMismatch {
                what: "feature_names",
                expected: x.rows(),
                found: feature_names.len(),
            });
        }
        for (j, col) in x.columns().enumerate() {
            if let Some(i) = col.iter().position(|v| !v.is_finite()) {
                return Err(Error::NonFinite {
                    feature: i,
                    sample: j,
                });
            }
        }
        Ok(Self { x, feature_names })
    }

    /// Builds from per-sample vectors.
    pub fn from_samples<S: AsRef<[T]>>(samples: &[S]) -> Result<Self> {
        let m = samples.first().map_or(0, |s| s.as_ref().len());
        if samples.iter().any(|s| s.as_ref().len() != m) {
            return Err(Error::EmptyDataset);
        }
        Self::new(Matrix::from_columns(m, samples))
    }

    pub fn matrix(&self) -> &Matrix<T> {
        &self.x
    }

    pub fn feature_names(&self) -> &[String] {
        &self.feature_names
    }

    pub fn n_features(&self) -> usize {
        self.x.rows()
    }

    pub fn n_samples(&self) -> usize {
        self.x.cols()
    }

    pub fn sample(&self, i: usize) -> &[T] {
        self.x.column(i)
    }

    pub fn samples(&self) -> impl Iterator<Item = &[T]> + '_ {
        self.x.columns()
    }

    /// Keeps the listed samples in the given order.
    pub fn select(&self, idx: &[usize]) -> Result<Self> {
        if idx.is_empty() {
            return Err(Error::EmptyDataset);
        }
        Ok(Self {
            x: self.x.select_columns(idx),
            feature_names: self.feature_names.clone(),
        })
    }

    /// Per-feature mean over samples.
    pub fn mean(&self) -> Vec<T> {
        let n = T::from_usize_lossy(self.n_samples());
        let mut mu = vec![T::zero(); self.n_features()];
        for s in self.samples() {
            for (m, &v) in mu.iter_mut().zip(s) {
                *m = *m + v;
            }
        }
        mu.iter_mut().for_each(|m| *m = *m / n);
        mu
    }

    pub fn cast<U: Scalar>(&self) -> Dataset<U> {
        Dataset {
            x: self.x.cast(),
            feature_names: self.feature_names.clone(),
        }
    }
}

/// Class labels `0..class_count` for one classification task.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelSet {
    labels: Vec<usize>,
    class_count: usize,
    class_names: Vec<String>,
}

impl LabelSet {
    /// Requires at least two classes, each with at least one sample.
    pub fn new(labels: Vec<usize>, class_count: usize) -> Result<Self> {
        let names = (0..class_count).map(|c| c.to_string()).collect();
        Self::with_names(labels, names)
    }

    pub fn with_names(labels: Vec<usize>, class_names: Vec<String>) -> Result<Self> {
        let class_count = class_names.len();
        if class_count < 2 {
            return Err(Error::TooFewClasses(class_count));
        }
        let mut seen = vec![false; class_count];
        for &l in &labels {
            if l >= class_count {
                return Err(Error::LabelOutOfRange {
                    label: l,
                    class_count,
                });
            }
            seen[l] = true;
        }
        if let Some(c) = seen.iter().position(|s| !s) {
            return Err(Error::EmptyClass { class: c });
        }
        Ok(Self {
            labels,
            class_count,
            class_names,
        })
    }

    /// Assigns class ids to the distinct values in sorted order.
    pub fn from_values<S: AsRef<str>>(values: &[S]) -> Result<Self> {
        let mut names: Vec<String> = values.iter().map(|v| v.as_ref().to_owned()).collect();
        names.sort();
        names.dedup();
        let labels = values
            .iter()
            .map(|v| names.binary_search_by(|n| n.as_str().cmp(v.as_ref())).unwrap())
            .collect();
        Self::with_names(labels, names)
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn class_count(&self) -> usize {
        self.class_count
    }

    pub fn class_names(&self) -> &[String] {
        &self.class_names
    }

    /// Samples per class.
    pub fn class_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.class_count];
        for &l in &self.labels {
            counts[l] += 1;
        }
        counts
    }

    /// Keeps the listed samples; fails if a class loses all its samples.
    pub fn select(&self, idx: &[usize]) -> Result<Self> {
        Self::with_names(
            idx.iter().map(|&i| self.labels[i]).collect(),
            self.class_names.clone(),
        )
    }
}

/// `S̄`, `S_B` and `S_W` for one labeling, with the means they were built from.
#[derive(Debug, Clone, PartialEq)]
pub struct ScatterSet<T> {
    /// Center-adjusted scatter `Σᵢ (xᵢ − μ)(xᵢ − μ)ᵀ`.
    pub s_bar: SymMatrix<T>,
    /// Between-class scatter `Σ_c N_c (μ − μ_c)(μ − μ_c)ᵀ`.
    pub s_b: SymMatrix<T>,
    /// Within-class scatter `Σ_c Σ_{i∈c} (xᵢ − μ_c)(xᵢ − μ_c)ᵀ`.
    pub s_w: SymMatrix<T>,
    pub mean: Vec<T>,
    pub class_means: Vec<Vec<T>>,
    pub class_counts: Vec<usize>,
}

/// Computes the three scatter matrices with a two-pass (means first) scheme.
pub fn compute_scatter<T: Scalar>(d: &Dataset<T>, l: &LabelSet) -> Result<ScatterSet<T>> {
    let n = d.n_samples();
    let m = d.n_features();
    if l.len() != n {
        return Err(Error::LengthMismatch {
            what: "labels",
            expected: n,
            found: l.len(),
        });
    }
    let counts = l.class_counts();
    if let Some(c) = counts.iter().position(|&c| c == 0) {
        return Err(Error::EmptyClass { class: c });
    }

    let mean = d.mean();
    let mut class_means = vec![vec![T::zero(); m]; l.class_count()];
    for (s, &c) in d.samples().zip(l.labels()) {
        for (acc, &v) in class_means[c].iter_mut().zip(s) {
            *acc = *acc + v;
        }
    }
    for (mu_c, &nc) in class_means.iter_mut().zip(&counts) {
        let nc = T::from_usize_lossy(nc);
        mu_c.iter_mut().for_each(|v| *v = *v / nc);
    }

    // Deviations stored feature-major so each Gram entry is a contiguous dot.
    let mut dev_total = vec![vec![T::zero(); n]; m];
    let mut dev_within = vec![vec![T::zero(); n]; m];
    for (j, (s, &c)) in d.samples().zip(l.labels()).enumerate() {
        for i in 0..m {
            dev_total[i][j] = s[i] - mean[i];
            dev_within[i][j] = s[i] - class_means[c][i];
        }
    }
    let s_bar = gram(&dev_total);
    let s_w = gram(&dev_within);

    let mut s_b = SymMatrix::zeros(m);
    for (mu_c, &nc) in class_means.iter().zip(&counts) {
        let diff: Vec<T> = mean.iter().zip(mu_c).map(|(&a, &b)| a - b).collect();
        s_b.add_outer(T::from_usize_lossy(nc), &diff);
    }

    Ok(ScatterSet {
        s_bar,
        s_b,
        s_w,
        mean,
        class_means,
        class_counts: counts,
    })
}

fn gram<T: Scalar>(rows: &[Vec<T>]) -> SymMatrix<T> {
    SymMatrix::from_lower(rows.len(), |i, j| crate::linalg::dot(&rows[i], &rows[j]))
}

/// Numerical rank of the between-class scatter: the number of eigenvalues
/// above `M · 1e-12 · ‖S_B‖_max`. Never exceeds `C − 1`.
pub fn rank_bound_check<T: Scalar>(s: &ScatterSet<T>) -> Result<usize> {
    let norm = s.s_b.max_abs();
    if norm == T::zero() {
        return Ok(0);
    }
    let threshold = T::from_usize_lossy(s.s_b.dim()) * T::rel_tol(1e-12) * norm;
    let eig = sym_eig(&s.s_b)?;
    Ok(eig.values.iter().filter(|&&v| v > threshold).count())
}
