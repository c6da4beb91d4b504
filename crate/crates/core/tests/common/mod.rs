//! Seeded generators shared by the integration suites.
#![allow(dead_code)]

use privproj::linalg::{Matrix, SymMatrix};
use privproj::rng::{rng_from_seed, Rng};
use privproj::scatter::Dataset;
use privproj::LabelSet;
use rand::Rng as _;
use rand_distr::{Distribution, StandardNormal};

pub fn rng(seed: u64) -> Rng {
    rng_from_seed(seed)
}

pub fn normal(rng: &mut Rng) -> f64 {
    StandardNormal.sample(rng)
}

/// Labels in `0..c` with every class present, in shuffled order.
pub fn labels(rng: &mut Rng, n: usize, c: usize) -> LabelSet {
    assert!(n >= c);
    let mut l: Vec<usize> = (0..n).map(|i| if i < c { i } else { rng.random_range(0..c) }).collect();
    for i in (1..n).rev() {
        l.swap(i, rng.random_range(0..=i));
    }
    LabelSet::new(l, c).unwrap()
}

/// Gaussian samples whose mean depends on the class, with a random offset
/// and per-feature scale so the scatter matrices are not trivially aligned.
pub fn class_gaussians(rng: &mut Rng, labels: &LabelSet, m: usize, separation: f64) -> Dataset<f64> {
    let c = labels.class_count();
    let means: Vec<Vec<f64>> = (0..c).map(|_| (0..m).map(|_| separation * normal(rng)).collect()).collect();
    let offset: Vec<f64> = (0..m).map(|_| 10.0 * normal(rng)).collect();
    let scale: Vec<f64> = (0..m).map(|_| 0.5 + rng.random::<f64>()).collect();
    let n = labels.len();
    let mut x = Matrix::zeros(m, n);
    for (i, &y) in labels.labels().iter().enumerate() {
        for f in 0..m {
            x[(f, i)] = offset[f] + means[y][f] + scale[f] * normal(rng);
        }
    }
    Dataset::new(x).unwrap()
}

/// A labeled dataset with `N ≤ n_max`, `M ≤ m_max`, `C ≤ c_max` classes.
pub fn fuzz_dataset(rng: &mut Rng, n_max: usize, m_max: usize, c_max: usize) -> (Dataset<f64>, LabelSet) {
    let c = rng.random_range(2..=c_max);
    let m = rng.random_range(1..=m_max);
    let n = rng.random_range(c.max(2)..=n_max);
    let l = labels(rng, n, c);
    let d = class_gaussians(rng, &l, m, 3.0);
    (d, l)
}

pub fn random_symmetric(rng: &mut Rng, m: usize) -> SymMatrix<f64> {
    SymMatrix::from_lower(m, |_, _| normal(rng))
}

/// `G·Gᵀ/m + shift·I` with a standard normal `G`.
pub fn random_spd(rng: &mut Rng, m: usize, shift: f64) -> SymMatrix<f64> {
    let g = Matrix::from_fn(m, m, |_, _| normal(rng));
    let gram = g.matmul(&g.transpose()).unwrap();
    SymMatrix::symmetrize(&gram).unwrap().scale(1.0 / m as f64).add_diagonal(shift)
}

/// Utility and privacy labelings over one dataset. The privacy task has more
/// classes than features, so its between-class scatter is nonsingular.
pub struct TwoTask {
    pub data: Dataset<f64>,
    pub utility: LabelSet,
    pub privacy: LabelSet,
}

pub fn two_task(rng: &mut Rng, full_rank_privacy: bool) -> TwoTask {
    let m = rng.random_range(2..=8);
    let cu = rng.random_range(2..=4);
    let cp = if full_rank_privacy { m + rng.random_range(1..=3) } else { rng.random_range(2..=4) };
    let n = rng.random_range(10 * (cu.max(cp))..=200);
    let utility = labels(rng, n, cu);
    let privacy = labels(rng, n, cp);
    let mu: Vec<Vec<f64>> = (0..cu).map(|_| (0..m).map(|_| 2.0 * normal(rng)).collect()).collect();
    let mp: Vec<Vec<f64>> = (0..cp).map(|_| (0..m).map(|_| 2.0 * normal(rng)).collect()).collect();
    let mut x = Matrix::zeros(m, n);
    for i in 0..n {
        let (u, p) = (utility.labels()[i], privacy.labels()[i]);
        for f in 0..m {
            x[(f, i)] = mu[u][f] + mp[p][f] + normal(rng);
        }
    }
    TwoTask {
        data: Dataset::new(x).unwrap(),
        utility,
        privacy,
    }
}

/// `‖a − b‖_max`.
pub fn max_diff(a: &Matrix<f64>, b: &Matrix<f64>) -> f64 {
    a.sub(b).max_abs()
}

/// Instances for the RUCA→MDR limit. Privacy classes sit at `±s·e_f` for
/// every feature `f` (2M classes, balanced), so the privacy between-class
/// scatter is nonsingular and close to a multiple of the identity. Utility
/// classes get random means.
pub fn mdr_limit_instance(rng: &mut Rng) -> TwoTask {
    let m = rng.random_range(2..=8);
    let cu = rng.random_range(2..=4);
    let cp = 2 * m;
    let per = rng.random_range(4..=12);
    let n = cp * per;
    let utility = labels(rng, n, cu);
    let privacy = LabelSet::new((0..n).map(|i| i % cp).collect(), cp).unwrap();
    let mu: Vec<Vec<f64>> = (0..cu).map(|_| (0..m).map(|_| 2.0 * normal(rng)).collect()).collect();
    let mut x = Matrix::zeros(m, n);
    for i in 0..n {
        let (u, p) = (utility.labels()[i], privacy.labels()[i]);
        for f in 0..m {
            x[(f, i)] = mu[u][f] + normal(rng);
        }
        x[(p / 2, i)] += if p % 2 == 0 { 3.0 } else { -3.0 };
    }
    TwoTask {
        data: Dataset::new(x).unwrap(),
        utility,
        privacy,
    }
}
