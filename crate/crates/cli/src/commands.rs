use std::io::Write as _;
use std::path::Path;

use privproj::classify::train_eval;
use privproj::dataio::{
    balance_loaded, load_csv, read_dataset_csv, stratified_holdout, write_dataset_csv, BalanceMode, ColumnSchema,
    LoadedData, Recode,
};
use privproj::experiment::{
    cell_seed, emit_tradeoff_curve, read_tradeoff_csv, run_sweep, tradeoff_svg, CellStatus, DataBundle,
    ExperimentConfig, TradeoffPoint,
};
use privproj::rng::derive_seed;
use privproj::projection::{fit_pca, fit_random, project as apply, ProjectionModel};
use privproj::{ClassifierSpec, Error, Method, ProjectionConfig};
use serde::Serialize;

use crate::files;
use crate::{
    BalanceArg, ClassifierArg, EvaluateArgs, Failure, FitArgs, PlotArgs, PreprocessArgs, ProjectArgs, SweepArgs,
};

type CmdResult = Result<(), Failure>;

fn fail(code: u8, stage: &'static str, e: impl std::fmt::Display) -> Failure {
    Failure {
        code,
        stage,
        message: e.to_string(),
    }
}

/// Anything going wrong while reading inputs is an input error.
fn input<T>(stage: &'static str, r: privproj::Result<T>) -> Result<T, Failure> {
    r.map_err(|e| fail(2, stage, e))
}

/// Numerical and I/O failures are runtime errors; the rest are caused by
/// the inputs or flags.
fn compute<T>(stage: &'static str, r: privproj::Result<T>) -> Result<T, Failure> {
    r.map_err(|e| {
        let code = match e {
            Error::Linalg(_) | Error::AllCellsFailed(_) | Error::Io(_) => 1,
            _ => 2,
        };
        fail(code, stage, e)
    })
}

fn output<T, E: std::fmt::Display>(stage: &'static str, r: Result<T, E>) -> Result<T, Failure> {
    r.map_err(|e| fail(1, stage, e))
}

pub fn preprocess(a: PreprocessArgs) -> CmdResult {
    let mut schema = input("schema", ColumnSchema::load(&a.schema))?;
    if a.recode_census_marital {
        input("schema", schema.set_recode("marital-status", Recode::CensusMarital))?;
    }
    let loaded = input("load", load_csv(&a.input, &schema))?;
    let kept_clean = loaded.dataset.n_samples();
    let data = if a.balance_on.is_empty() {
        loaded
    } else {
        let mode = match a.balance_mode {
            BalanceArg::Sequential => BalanceMode::Sequential,
            BalanceArg::Joint => BalanceMode::Joint,
        };
        input("balance", balance_loaded(&loaded, &a.balance_on, mode, a.seed))?
    };
    println!("rows read: {}", data.rows_read);
    println!("rows dropped (missing values): {}", data.rows_dropped);
    if !a.balance_on.is_empty() {
        println!(
            "rows dropped (balancing): {}",
            kept_clean - data.dataset.n_samples()
        );
    }
    println!("features: M={}", data.dataset.n_features());

    let (Some(on), Some(fraction), Some(held_path)) = (&a.holdout_on, a.holdout_fraction, &a.holdout_output) else {
        output("write", files::write_loaded(&a.output, &data))?;
        print_rows("rows kept", &data);
        return Ok(());
    };
    let labels = input("holdout", data.label(on))?;
    let (kept, held) = input("holdout", stratified_holdout(labels, fraction, derive_seed(a.seed, &[1])))?;
    let (kept, held) = (input("holdout", data.select(&kept))?, input("holdout", data.select(&held))?);
    output("write", files::write_loaded(&a.output, &kept))?;
    output("write holdout", files::write_loaded(held_path, &held))?;
    print_rows("rows kept", &kept);
    print_rows("rows held out", &held);
    Ok(())
}

fn print_rows(what: &str, data: &LoadedData) {
    println!("{what}: {}", data.dataset.n_samples());
    for (name, l) in &data.labels {
        let counts: Vec<String> = l
            .class_names()
            .iter()
            .zip(l.class_counts())
            .map(|(c, n)| format!("{c}={n}"))
            .collect();
        println!("  label {name}: {}", counts.join(", "));
    }
}

pub fn fit(a: FitArgs) -> CmdResult {
    let d = input("read data", read_dataset_csv(&a.data))?;
    let mut weights = a.weights.clone();
    if a.method == Method::Ruca && weights.is_empty() {
        weights = vec![0.0; a.privacy.len()];
    }
    let mut cfg = ProjectionConfig::new(a.method, a.k)
        .with_privacy_weights(weights)
        .with_seed(a.seed);
    cfg.rho = a.rho;
    cfg.rho_prime = a.rho_prime;
    input("configuration", cfg.validate())?;

    let model = match a.method {
        Method::Pca => compute("fit", fit_pca(&d, &cfg))?,
        Method::Random => {
            let m = compute("fit", fit_random(d.n_features(), &cfg))?;
            compute("fit", m.with_feature_mean(d.mean()))?
        }
        _ => {
            let utility = a.utility.as_deref().ok_or_else(|| {
                fail(2, "configuration", format!("{} needs --utility", a.method))
            })?;
            let u = input("read labels", files::read_labels(&a.data, utility))?;
            let p = a
                .privacy
                .iter()
                .map(|name| files::read_labels(&a.data, name))
                .collect::<privproj::Result<Vec<_>>>();
            let p = input("read labels", p)?;
            compute("fit", privproj::projection::fit(&d, &u, &p, &cfg))?
        }
    };
    output("write model", model.save(&a.output))?;
    let eig: Vec<String> = model.eigenvalues.iter().map(|v| format!("{v:.6e}")).collect();
    println!(
        "fitted {} with K={} on M={} features",
        a.method,
        model.k(),
        model.n_features()
    );
    if !eig.is_empty() {
        println!("eigenvalues: {}", eig.join(" "));
    }
    Ok(())
}

pub fn project(a: ProjectArgs) -> CmdResult {
    let model: ProjectionModel<f64> = input("read model", ProjectionModel::load(&a.model))?;
    let d = input("read data", read_dataset_csv(&a.data))?;
    let z = compute("project", apply(&model, &d))?;
    output("write", write_dataset_csv(&a.output, &z))?;
    for (label, src) in output("list label files", files::label_files(&a.data))? {
        let dst = files::label_path(&a.output, &label);
        if dst != src {
            output("copy label file", std::fs::copy(&src, &dst))?;
        }
    }
    println!(
        "projected {} samples from M={} to K={}",
        z.n_samples(),
        model.n_features(),
        model.k()
    );
    Ok(())
}

pub fn evaluate(a: EvaluateArgs) -> CmdResult {
    let train = input("read train", read_dataset_csv(&a.train))?;
    let test = input("read test", read_dataset_csv(&a.test))?;
    let ltr = input("read train labels", files::read_labels(&a.train, &a.label))?;
    let lte = input("read test labels", files::read_labels(&a.test, &a.label))?;
    let spec = match a.classifier {
        ClassifierArg::Knn => ClassifierSpec::knn(a.k_neighbors),
        ClassifierArg::Centroid => ClassifierSpec::nearest_centroid(),
    };
    let report = compute("evaluate", train_eval(&train, &ltr, &test, &lte, &spec))?;
    let json = output("serialize", serde_json::to_string_pretty(&report))?;
    let mut out = std::io::stdout().lock();
    match writeln!(out, "{json}") {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(fail(1, "write report", e)),
        _ => Ok(()),
    }
}

#[derive(Serialize)]
struct InputRecord {
    role: String,
    path: String,
    sha256: String,
}

#[derive(Serialize)]
struct CellRecord {
    method: &'static str,
    k: usize,
    privacy_weights: Vec<f64>,
    status: String,
    /// Seed of the projection fit in each iteration (absent for FULL).
    seeds: Vec<u64>,
}

#[derive(Serialize)]
struct Manifest<'a> {
    library_version: &'static str,
    config_sha256: String,
    seed: u64,
    config: &'a ExperimentConfig,
    inputs: Vec<InputRecord>,
    outputs: Vec<&'static str>,
    cells: Vec<CellRecord>,
}

fn read_config(path: &Path, seed: u64) -> Result<ExperimentConfig, Failure> {
    let text = input("config", std::fs::read_to_string(path).map_err(Error::from))?;
    let mut value: serde_json::Value = input("config", serde_json::from_str(&text).map_err(Error::from))?;
    let Some(obj) = value.as_object_mut() else {
        return Err(fail(2, "config", "expected a JSON object"));
    };
    // --seed is the single source of randomness
    obj.insert("seed".into(), seed.into());
    input("config", ExperimentConfig::from_json(&value.to_string()))
}

fn hash_inputs(roles: &[(&str, &Path, &[String])], utility: &str) -> Result<Vec<InputRecord>, Failure> {
    let mut out = Vec::new();
    for &(role, data, privacy) in roles {
        let mut files = vec![(role.to_owned(), data.to_path_buf())];
        for label in std::iter::once(utility).chain(privacy.iter().map(String::as_str)) {
            files.push((format!("{role}.{label}"), files::label_path(data, label)));
        }
        for (role, path) in files {
            let bytes = input("hash inputs", std::fs::read(&path).map_err(Error::from))?;
            out.push(InputRecord {
                role,
                path: path.display().to_string(),
                sha256: files::sha256_hex(&bytes),
            });
        }
    }
    Ok(out)
}

fn cell_record(p: &TradeoffPoint, cfg: &ExperimentConfig) -> CellRecord {
    let seeds = match p.method {
        None => Vec::new(),
        Some(_) => (0..cfg.iterations)
            .map(|it| cell_seed(cfg.seed, p.method, p.k, &p.privacy_weights, it))
            .collect(),
    };
    CellRecord {
        method: p.method_name(),
        k: p.k,
        privacy_weights: p.privacy_weights.clone(),
        status: match &p.status {
            CellStatus::Ok => "ok".into(),
            CellStatus::Failed(m) => format!("failed: {m}"),
        },
        seeds,
    }
}

pub fn sweep(a: SweepArgs) -> CmdResult {
    let cfg = read_config(&a.config, a.seed)?;
    let read = |path: &Path, privacy: &[String]| input("read data", files::read_task(path, &cfg.utility, privacy));
    // a separate privacy test set means the utility test set needs no privacy labels
    let test_privacy = if a.privacy_test.is_some() { &[][..] } else { &cfg.privacy[..] };
    let bundle = DataBundle {
        train: read(&a.train, &cfg.privacy)?,
        test: read(&a.test, test_privacy)?,
        privacy_test: a.privacy_test.as_deref().map(|p| read(p, &cfg.privacy)).transpose()?,
    };
    let mut roles = vec![
        ("train", a.train.as_path(), &cfg.privacy[..]),
        ("test", a.test.as_path(), test_privacy),
    ];
    if let Some(p) = &a.privacy_test {
        roles.push(("privacy_test", p.as_path(), &cfg.privacy[..]));
    }
    let inputs = hash_inputs(&roles, &cfg.utility)?;

    let points = compute("sweep", run_sweep(&cfg, &bundle))?;

    output("create output directory", std::fs::create_dir_all(&a.out_dir))?;
    output(
        "write trade-off curve",
        emit_tradeoff_curve(&points, &cfg.betas, cfg.privacy_scoring, a.out_dir.join("tradeoff")),
    )?;
    let config_json = output("serialize config", cfg.to_json())?;
    let manifest = Manifest {
        library_version: privproj::VERSION,
        config_sha256: files::sha256_hex(config_json.as_bytes()),
        seed: cfg.seed,
        config: &cfg,
        inputs,
        outputs: vec!["tradeoff.csv", "tradeoff.svg", "manifest.json"],
        cells: points.iter().map(|p| cell_record(p, &cfg)).collect(),
    };
    let text = output("serialize manifest", serde_json::to_string_pretty(&manifest))?;
    output("write manifest", std::fs::write(a.out_dir.join("manifest.json"), text + "\n"))?;

    let failed: Vec<&TradeoffPoint> = points.iter().filter(|p| !p.status.is_ok()).collect();
    for p in &failed {
        if let CellStatus::Failed(m) = &p.status {
            eprintln!("warning: cell {} K={} failed: {m}", p.method_name(), p.k);
        }
    }
    println!(
        "{} cells ({} failed), {} iterations; wrote {}",
        points.len(),
        failed.len(),
        cfg.iterations,
        a.out_dir.display()
    );
    Ok(())
}

pub fn plot(a: PlotArgs) -> CmdResult {
    let text = input("read table", std::fs::read_to_string(&a.input).map_err(Error::from))?;
    let (points, _) = input("read table", read_tradeoff_csv(&text))?;
    if points.is_empty() {
        return Err(fail(2, "read table", "the table has no rows"));
    }
    output("write", std::fs::write(&a.output, tradeoff_svg(&points, a.scoring.into())))?;
    Ok(())
}
