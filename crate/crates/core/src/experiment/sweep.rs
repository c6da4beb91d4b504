use rayon::prelude::*;

use crate::classify::train_eval;
use crate::dataio::{subsample_indices, LoadedData, SplitSpec};
use crate::linalg::Matrix;
use crate::projection::{fit, project, Method, ProjectionConfig};
use crate::rng::derive_seed;
use crate::scatter::{Dataset, LabelSet};
use crate::{Error, Result, Scalar};

use super::{performance, ExperimentConfig, PrivacyScoring};

/// One evaluation set: features plus the utility and privacy labelings.
#[derive(Debug, Clone, PartialEq)]
pub struct TaskData<T> {
    pub dataset: Dataset<T>,
    pub utility: LabelSet,
    pub privacy: Vec<LabelSet>,
}

impl<T: Scalar> TaskData<T> {
    pub fn new(dataset: Dataset<T>, utility: LabelSet, privacy: Vec<LabelSet>) -> Result<Self> {
        let n = dataset.n_samples();
        for l in std::iter::once(&utility).chain(&privacy) {
            if l.len() != n {
                return Err(Error::LengthMismatch {
                    what: "labels",
                    expected: n,
                    found: l.len(),
                });
            }
        }
        Ok(Self {
            dataset,
            utility,
            privacy,
        })
    }
}

impl TaskData<f64> {
    /// Picks the named label columns out of a loaded file.
    pub fn from_loaded(data: &LoadedData, utility: &str, privacy: &[String]) -> Result<Self> {
        Self::new(
            data.dataset.clone(),
            data.label(utility)?.clone(),
            privacy.iter().map(|p| data.label(p).cloned()).collect::<Result<_>>()?,
        )
    }
}

/// Training data, the utility test set, and optionally a separate test set
/// for the privacy tasks (otherwise privacy is scored on `test`).
#[derive(Debug, Clone, PartialEq)]
pub struct DataBundle<T> {
    pub train: TaskData<T>,
    pub test: TaskData<T>,
    pub privacy_test: Option<TaskData<T>>,
}

impl<T: Scalar> DataBundle<T> {
    fn privacy_set(&self) -> &TaskData<T> {
        self.privacy_test.as_ref().unwrap_or(&self.test)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum CellStatus {
    Ok,
    Failed(String),
}

impl CellStatus {
    pub fn is_ok(&self) -> bool {
        matches!(self, CellStatus::Ok)
    }
}

/// Aggregated result of one grid cell.
#[derive(Debug, Clone, PartialEq)]
pub struct TradeoffPoint {
    /// `None` for the full-dimensional (unprojected) baseline.
    pub method: Option<Method>,
    pub k: usize,
    pub privacy_weights: Vec<f64>,
    pub acc_u_mean: f64,
    pub acc_u_std: f64,
    pub acc_p_mean: Vec<f64>,
    pub acc_p_std: Vec<f64>,
    /// `(β, performance)` in the order of the configured betas.
    pub performance: Vec<(f64, f64)>,
    pub status: CellStatus,
    /// Utility accuracy of each iteration.
    pub acc_u_runs: Vec<f64>,
    /// Privacy accuracies of each iteration, indexed `[task][iteration]`.
    pub acc_p_runs: Vec<Vec<f64>>,
}

impl TradeoffPoint {
    pub fn method_name(&self) -> &'static str {
        self.method.map_or("FULL", Method::name)
    }

    /// The privacy accuracy the performance criterion charges.
    pub fn scored_privacy(&self, scoring: PrivacyScoring) -> f64 {
        match scoring {
            PrivacyScoring::First => self.acc_p_mean.first().copied().unwrap_or(f64::NAN),
            PrivacyScoring::Max => self.acc_p_mean.iter().copied().fold(f64::NAN, f64::max),
        }
    }
}

/// Mean and sample standard deviation (`N − 1` denominator; 0 for a
/// single value).
pub fn mean_std(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let ss: f64 = values.iter().map(|v| (v - mean) * (v - mean)).sum();
    (mean, (ss / (n - 1.0)).sqrt())
}

struct Cell {
    method: Option<Method>,
    config: Option<ProjectionConfig>,
    k: usize,
    weights: Vec<f64>,
}

fn method_code(m: Option<Method>) -> u64 {
    match m {
        None => 0,
        Some(m) => 1 + Method::ALL.iter().position(|x| *x == m).unwrap_or(0) as u64,
    }
}

/// Seed for the randomness inside one cell and iteration.
pub fn cell_seed(seed: u64, method: Option<Method>, k: usize, weights: &[f64], iteration: usize) -> u64 {
    let mut parts = vec![method_code(method), k as u64];
    parts.extend(weights.iter().map(|w| w.to_bits()));
    parts.push(iteration as u64);
    derive_seed(seed, &parts)
}

struct RunOutcome {
    acc_u: f64,
    acc_p: Vec<f64>,
}

/// Z-scores `sets` with the mean and sample standard deviation of `reference`.
fn standardize_like<T: Scalar>(reference: &Dataset<T>, sets: &[&Dataset<T>]) -> Result<Vec<Dataset<T>>> {
    let m = reference.n_features();
    let mean = reference.mean();
    let n = reference.n_samples();
    let mut scale = vec![T::one(); m];
    if n > 1 {
        for (i, s) in scale.iter_mut().enumerate() {
            let ss: T = reference.samples().map(|x| (x[i] - mean[i]) * (x[i] - mean[i])).sum();
            let sd = (ss / T::from_usize_lossy(n - 1)).sqrt();
            if sd > T::zero() {
                *s = sd;
            }
        }
    }
    sets.iter()
        .map(|d| {
            let x = Matrix::from_fn(m, d.n_samples(), |i, j| (d.sample(j)[i] - mean[i]) / scale[i]);
            Dataset::with_names(x, d.feature_names().to_vec())
        })
        .collect()
}

fn run_once<T: Scalar>(
    cfg: &ExperimentConfig,
    bundle: &DataBundle<T>,
    cell: &Cell,
    iteration: usize,
) -> Result<RunOutcome> {
    let split = SplitSpec {
        seed: cfg.seed,
        fraction: cfg.fraction,
        balance_on: Vec::new(),
    };
    // every cell sees the same subsample in a given iteration
    let idx = subsample_indices(bundle.train.dataset.n_samples(), &split, iteration as u64)?;
    let mut train = bundle.train.dataset.select(&idx)?;
    let utility = bundle.train.utility.select(&idx)?;
    let privacy: Vec<LabelSet> = bundle
        .train
        .privacy
        .iter()
        .map(|l| l.select(&idx))
        .collect::<Result<_>>()?;

    let privacy_set = bundle.privacy_set();
    let mut test = bundle.test.dataset.clone();
    let mut ptest = privacy_set.dataset.clone();
    if cfg.standardize {
        let mut out = standardize_like(&train, &[&train, &test, &ptest])?.into_iter();
        train = out.next().expect("train");
        test = out.next().expect("test");
        ptest = out.next().expect("privacy test");
    }

    if let Some(pc) = &cell.config {
        let mut pc = pc.clone();
        pc.seed = cell_seed(cfg.seed, cell.method, cell.k, &cell.weights, iteration);
        let model = fit(&train, &utility, &privacy, &pc)?;
        train = project(&model, &train)?;
        test = project(&model, &test)?;
        ptest = project(&model, &ptest)?;
    }

    let acc_u = train_eval(&train, &utility, &test, &bundle.test.utility, &cfg.classifier)?.accuracy;
    let acc_p = privacy
        .iter()
        .zip(&privacy_set.privacy)
        .map(|(tr, te)| Ok(train_eval(&train, tr, &ptest, te, &cfg.classifier)?.accuracy))
        .collect::<Result<_>>()?;
    Ok(RunOutcome { acc_u, acc_p })
}

fn grid(cfg: &ExperimentConfig, m: usize) -> Vec<Cell> {
    let mut cells = Vec::new();
    if cfg.full_dimensional {
        cells.push(Cell {
            method: None,
            config: None,
            k: m,
            weights: Vec::new(),
        });
    }
    for g in &cfg.methods {
        for pc in g.cells(cfg.privacy.len()) {
            cells.push(Cell {
                method: Some(pc.method),
                k: pc.k,
                weights: pc.privacy_weights.clone(),
                config: Some(pc),
            });
        }
    }
    cells
}

/// Runs every grid cell for every iteration and aggregates the accuracies.
///
/// Cells and iterations run in parallel; results do not depend on the
/// scheduling because every random draw is seeded from the configuration.
/// A cell whose fit or evaluation fails in any iteration is reported with
/// [`CellStatus::Failed`] instead of aborting the sweep.
pub fn run_sweep<T: Scalar>(cfg: &ExperimentConfig, bundle: &DataBundle<T>) -> Result<Vec<TradeoffPoint>> {
    cfg.validate()?;
    let n_privacy = cfg.privacy.len();
    // with a separate privacy test set, the utility test set needs no privacy labels
    if bundle.train.privacy.len() != n_privacy || bundle.privacy_set().privacy.len() != n_privacy {
        return Err(Error::InvalidConfig(format!(
            "data bundle must carry {n_privacy} privacy labelings"
        )));
    }
    let m = bundle.train.dataset.n_features();
    for d in [&bundle.test.dataset, &bundle.privacy_set().dataset] {
        if d.n_features() != m {
            return Err(Error::DimensionMismatch {
                expected: m,
                found: d.n_features(),
            });
        }
    }

    let cells = grid(cfg, m);
    let jobs: Vec<(usize, usize)> = (0..cells.len())
        .flat_map(|c| (0..cfg.iterations).map(move |it| (c, it)))
        .collect();
    let outcomes: Vec<Result<RunOutcome>> = jobs
        .par_iter()
        .map(|&(c, it)| run_once(cfg, bundle, &cells[c], it))
        .collect();

    let mut points = Vec::with_capacity(cells.len());
    for (c, cell) in cells.iter().enumerate() {
        let runs = &outcomes[c * cfg.iterations..(c + 1) * cfg.iterations];
        let mut point = TradeoffPoint {
            method: cell.method,
            k: cell.k,
            privacy_weights: cell.weights.clone(),
            acc_u_mean: f64::NAN,
            acc_u_std: f64::NAN,
            acc_p_mean: vec![f64::NAN; n_privacy],
            acc_p_std: vec![f64::NAN; n_privacy],
            performance: Vec::new(),
            status: CellStatus::Ok,
            acc_u_runs: Vec::new(),
            acc_p_runs: vec![Vec::new(); n_privacy],
        };
        if let Some((it, Err(e))) = runs.iter().enumerate().find(|(_, r)| r.is_err()) {
            point.status = CellStatus::Failed(format!("iteration {it}: {e}"));
            points.push(point);
            continue;
        }
        for run in runs.iter().flatten() {
            point.acc_u_runs.push(run.acc_u);
            for (t, &a) in run.acc_p.iter().enumerate() {
                point.acc_p_runs[t].push(a);
            }
        }
        (point.acc_u_mean, point.acc_u_std) = mean_std(&point.acc_u_runs);
        for t in 0..n_privacy {
            (point.acc_p_mean[t], point.acc_p_std[t]) = mean_std(&point.acc_p_runs[t]);
        }
        let scored = point.scored_privacy(cfg.privacy_scoring);
        point.performance = cfg
            .betas
            .iter()
            .map(|&b| (b, performance(point.acc_u_mean, scored, b)))
            .collect();
        points.push(point);
    }
    if let Some(CellStatus::Failed(first)) = points.first().map(|p| &p.status) {
        if points.iter().all(|p| !p.status.is_ok()) {
            return Err(Error::AllCellsFailed(first.clone()));
        }
    }
    Ok(points)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sample_std() {
        let (m, s) = mean_std(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(m, 2.5);
        assert!((s - (5.0f64 / 3.0).sqrt()).abs() < 1e-15);
        assert_eq!(mean_std(&[0.7]), (0.7, 0.0));
    }

    #[test]
    fn cell_seeds_are_distinct() {
        let a = cell_seed(1, Some(Method::Ruca), 1, &[1.0, 0.0], 0);
        assert_ne!(a, cell_seed(1, Some(Method::Ruca), 1, &[2.0, 0.0], 0));
        assert_ne!(a, cell_seed(1, Some(Method::Ruca), 2, &[1.0, 0.0], 0));
        assert_ne!(a, cell_seed(1, Some(Method::Ruca), 1, &[1.0, 0.0], 1));
        assert_ne!(a, cell_seed(1, Some(Method::Dca), 1, &[1.0, 0.0], 0));
    }

    #[test]
    fn standardization_uses_reference_statistics() {
        let r = Dataset::from_samples(&[[0.0, 5.0], [2.0, 5.0]]).unwrap();
        let t = Dataset::from_samples(&[[1.0, 6.0]]).unwrap();
        let out = standardize_like(&r, &[&r, &t]).unwrap();
        let s = 2f64.sqrt();
        assert_eq!(out[0].sample(0), &[-1.0 / s, 0.0]);
        assert_eq!(out[1].sample(0), &[0.0, 1.0]);
    }
}
