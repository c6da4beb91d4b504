use rand::Rng as _;
use rand_distr::StandardNormal;

use crate::linalg::{generalized_eig, orthonormalize_columns, sym_eig, Matrix, SymMatrix};
use crate::rng::{derive_seed, rng_from_seed};
use crate::scatter::{compute_scatter, Dataset, LabelSet, ScatterSet};
use crate::{Error, Result, Scalar};

use super::{Method, ProjectionConfig};

/// Reseeds allowed when a random draw is numerically rank deficient.
const RANDOM_RESEEDS: u64 = 3;

/// A fitted `M × K` projection.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectionModel<T> {
    /// Projection matrix, one component per column.
    pub w: Matrix<T>,
    /// Eigenvalue of each column. Empty for random projections.
    pub eigenvalues: Vec<T>,
    /// Configuration with `rho` / `rho_prime` filled in with the values used.
    pub config: ProjectionConfig,
    /// Training mean subtracted before projecting.
    pub feature_mean: Vec<T>,
}

impl<T: Scalar> ProjectionModel<T> {
    pub fn n_features(&self) -> usize {
        self.w.rows()
    }

    pub fn k(&self) -> usize {
        self.w.cols()
    }

    pub fn method(&self) -> Method {
        self.config.method
    }

    /// Replaces the centering vector (used to attach a training mean to a
    /// data-independent random projection).
    pub fn with_feature_mean(mut self, mean: Vec<T>) -> Result<Self> {
        if mean.len() != self.n_features() {
            return Err(Error::DimensionMismatch {
                expected: self.n_features(),
                found: mean.len(),
            });
        }
        self.feature_mean = mean;
        Ok(self)
    }
}

fn default_rho<T: Scalar>(s_bar: &SymMatrix<T>) -> T {
    let base = s_bar.trace() / T::from_usize_lossy(s_bar.dim());
    if base > T::zero() {
        T::c(1e-6) * base
    } else {
        T::c(1e-6)
    }
}

fn default_rho_prime<T: Scalar>(s_bu: &SymMatrix<T>, s_bar: &SymMatrix<T>) -> T {
    let m = T::from_usize_lossy(s_bu.dim());
    let mut base = s_bu.trace() / m;
    if !(base > T::zero()) {
        base = s_bar.trace() / m;
    }
    if !(base > T::zero()) {
        base = T::one();
    }
    T::c(1e-8) * base
}

fn check_k(cfg: &ProjectionConfig, m: usize) -> Result<()> {
    cfg.validate()?;
    if cfg.k > m {
        return Err(crate::linalg::LinalgError::InvalidK { k: cfg.k, dim: m }.into());
    }
    Ok(())
}

/// Solves the pencil `(S_B_U + ρ′I, denominator + ρI)` shared by DCA, MDR
/// and RUCA.
fn solve_pencil<T: Scalar>(
    utility: &ScatterSet<T>,
    denominator: SymMatrix<T>,
    cfg: &ProjectionConfig,
) -> Result<ProjectionModel<T>> {
    let rho = cfg.rho.map_or_else(|| default_rho(&utility.s_bar), T::c);
    let rho_prime = cfg
        .rho_prime
        .map_or_else(|| default_rho_prime(&utility.s_b, &utility.s_bar), T::c);
    let numerator = utility.s_b.add_diagonal(rho_prime);
    let denominator = denominator.add_diagonal(rho);
    let eig = generalized_eig(&numerator, &denominator, cfg.k)?;
    let mut config = cfg.clone();
    config.rho = Some(rho.as_f64());
    config.rho_prime = Some(rho_prime.as_f64());
    Ok(ProjectionModel {
        w: eig.vectors,
        eigenvalues: eig.values,
        config,
        feature_mean: utility.mean.clone(),
    })
}

/// RUCA: top-`K` generalized eigenvectors of
/// `(S_B_U + ρ′I, S̄ + Σᵢ ρ_pᵢ·S_B_Pᵢ + ρI)`.
///
/// With no privacy labelings, or all weights zero, this is DCA and takes the
/// identical code path.
pub fn fit_ruca<T: Scalar>(
    d: &Dataset<T>,
    utility: &LabelSet,
    privacy: &[LabelSet],
    cfg: &ProjectionConfig,
) -> Result<ProjectionModel<T>> {
    check_k(cfg, d.n_features())?;
    if cfg.privacy_weights.len() != privacy.len() {
        return Err(Error::WeightMismatch {
            weights: cfg.privacy_weights.len(),
            tasks: privacy.len(),
        });
    }
    let u = compute_scatter(d, utility)?;
    let mut s_ruca = u.s_bar.clone();
    for (labels, &weight) in privacy.iter().zip(&cfg.privacy_weights) {
        if weight == 0.0 {
            continue;
        }
        let p = compute_scatter(d, labels)?;
        s_ruca = s_ruca.add_scaled(T::c(weight), &p.s_b);
    }
    solve_pencil(&u, s_ruca, cfg)
}

/// DCA: top-`K` generalized eigenvectors of `(S_B_U + ρ′I, S̄ + ρI)`.
pub fn fit_dca<T: Scalar>(
    d: &Dataset<T>,
    utility: &LabelSet,
    cfg: &ProjectionConfig,
) -> Result<ProjectionModel<T>> {
    let mut cfg = cfg.clone();
    cfg.privacy_weights.clear();
    fit_ruca(d, utility, &[], &cfg)
}

/// MDR: top-`K` generalized eigenvectors of `(S_B_U + ρ′I, S_B_P + ρI)`.
pub fn fit_mdr<T: Scalar>(
    d: &Dataset<T>,
    utility: &LabelSet,
    privacy: &LabelSet,
    cfg: &ProjectionConfig,
) -> Result<ProjectionModel<T>> {
    check_k(cfg, d.n_features())?;
    let u = compute_scatter(d, utility)?;
    let p = compute_scatter(d, privacy)?;
    solve_pencil(&u, p.s_b, cfg)
}

/// PCA: top-`K` eigenvectors of `S̄`.
pub fn fit_pca<T: Scalar>(d: &Dataset<T>, cfg: &ProjectionConfig) -> Result<ProjectionModel<T>> {
    check_k(cfg, d.n_features())?;
    let mean = d.mean();
    let m = d.n_features();
    let mut dev = vec![vec![T::zero(); d.n_samples()]; m];
    for (j, s) in d.samples().enumerate() {
        for i in 0..m {
            dev[i][j] = s[i] - mean[i];
        }
    }
    let s_bar = SymMatrix::from_lower(m, |i, j| crate::linalg::dot(&dev[i], &dev[j]));
    let eig = sym_eig(&s_bar)?.truncate(cfg.k);
    let mut config = cfg.clone();
    config.rho = None;
    config.rho_prime = None;
    Ok(ProjectionModel {
        w: eig.vectors,
        eigenvalues: eig.values,
        config,
        feature_mean: mean,
    })
}

/// Random orthonormal projection: i.i.d. standard normal entries from
/// xoshiro256++ (seeded with `cfg.seed`), filled column by column, then
/// orthonormalized with modified Gram–Schmidt. A numerically dependent draw
/// is retried with up to three derived seeds.
pub fn fit_random<T: Scalar>(m: usize, cfg: &ProjectionConfig) -> Result<ProjectionModel<T>> {
    check_k(cfg, m)?;
    let mut last_err = None;
    for attempt in 0..=RANDOM_RESEEDS {
        let seed = if attempt == 0 {
            cfg.seed
        } else {
            derive_seed(cfg.seed, &[attempt])
        };
        let mut rng = rng_from_seed(seed);
        let g = Matrix::from_fn(m, cfg.k, |_, _| T::c(rng.sample::<f64, _>(StandardNormal)));
        match orthonormalize_columns(&g, T::c(1e-10)) {
            Ok(w) => {
                let mut config = cfg.clone();
                config.rho = None;
                config.rho_prime = None;
                return Ok(ProjectionModel {
                    w,
                    eigenvalues: Vec::new(),
                    config,
                    feature_mean: vec![T::zero(); m],
                });
            }
            Err(e) => last_err = Some(e),
        }
    }
    Err(last_err.expect("at least one attempt").into())
}

/// Dispatches on `cfg.method`. MDR uses the first privacy labeling; RUCA
/// uses all of them, weighted by `cfg.privacy_weights`.
pub fn fit<T: Scalar>(
    d: &Dataset<T>,
    utility: &LabelSet,
    privacy: &[LabelSet],
    cfg: &ProjectionConfig,
) -> Result<ProjectionModel<T>> {
    match cfg.method {
        Method::Pca => fit_pca(d, cfg),
        Method::Dca => fit_dca(d, utility, cfg),
        Method::Mdr => {
            let p = privacy
                .first()
                .ok_or_else(|| Error::InvalidConfig("MDR needs a privacy labeling".into()))?;
            fit_mdr(d, utility, p, cfg)
        }
        Method::Ruca => fit_ruca(d, utility, privacy, cfg),
        Method::Random => fit_random(d.n_features(), cfg)?.with_feature_mean(d.mean()),
    }
}

/// `Z = Wᵀ(X − μ·1ᵀ)` using the model's stored training mean.
pub fn project<T: Scalar>(model: &ProjectionModel<T>, d: &Dataset<T>) -> Result<Dataset<T>> {
    let m = model.n_features();
    if d.n_features() != m {
        return Err(Error::DimensionMismatch {
            expected: m,
            found: d.n_features(),
        });
    }
    let k = model.k();
    let mut z = Vec::with_capacity(k * d.n_samples());
    let mut centered = vec![T::zero(); m];
    for s in d.samples() {
        for ((c, &x), &mu) in centered.iter_mut().zip(s).zip(&model.feature_mean) {
            *c = x - mu;
        }
        for j in 0..k {
            z.push(crate::linalg::dot(model.w.column(j), &centered));
        }
    }
    let names = (0..k).map(|j| format!("z{j}")).collect();
    Dataset::with_names(Matrix::from_col_major(k, d.n_samples(), z), names)
}
