use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use privproj::dataio::{read_dataset_csv, read_labels_csv};
use privproj::projection::{fit, project};
use privproj::{Method, ProjectionConfig};

const BIN: &str = env!("CARGO_BIN_EXE_privproj");

fn run(args: &[&str]) -> Output {
    run_env(args, &[])
}

fn run_env(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(BIN);
    cmd.args(args).env_remove("PRIVPROJ_THREADS");
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn repo() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

const TOY_SCHEMA: &str = r#"{
  "columns": [
    {"name": "x1", "kind": "numeric"},
    {"name": "x2", "kind": "numeric"},
    {"name": "color", "kind": "categorical", "categories": ["red", "green", "blue"]},
    {"name": "x3", "kind": "numeric"},
    {"name": "u", "kind": "label"},
    {"name": "s", "kind": "label"}
  ]
}"#;

/// Balanced toy rows: utility `u` shifts x1, privacy `s` shifts x2, no
/// missing values and no duplicate points.
fn toy_csv(n: usize, offset: usize) -> String {
    let mut out = String::from("x1,x2,color,x3,u,s\n");
    for i in 0..n {
        let j = i + offset;
        let u = i % 2;
        let s = (i / 2) % 2;
        let noise = |a: usize, b: usize| ((j * a + b) % 97) as f64 / 97.0 - 0.5;
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            2.0 * u as f64 + noise(31, 7),
            1.5 * s as f64 + noise(53, 11),
            ["red", "green", "blue"][j % 3],
            noise(17, 3) + j as f64 * 1e-3,
            ["no", "yes"][u],
            ["a", "b"][s],
        ));
    }
    out
}

struct Toy {
    dir: tempfile::TempDir,
}

impl Toy {
    fn new() -> Self {
        let dir = tempfile::tempdir().unwrap();
        fs::write(dir.path().join("schema.json"), TOY_SCHEMA).unwrap();
        fs::write(dir.path().join("train_raw.csv"), toy_csv(120, 0)).unwrap();
        fs::write(dir.path().join("test_raw.csv"), toy_csv(80, 1000)).unwrap();
        let toy = Self { dir };
        for name in ["train", "test"] {
            let o = run(&[
                "preprocess",
                "--input",
                p(&toy.path(&format!("{name}_raw.csv"))),
                "--schema",
                p(&toy.path("schema.json")),
                "--output",
                p(&toy.path(&format!("{name}.csv"))),
            ]);
            assert_eq!(code(&o), 0, "{}", stderr(&o));
        }
        toy
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }

    fn config(&self, body: &str) -> PathBuf {
        let path = self.path("config.json");
        fs::write(&path, body).unwrap();
        path
    }

    fn sweep(&self, config: &Path, out: &str, extra: &[&str]) -> Output {
        let train = self.path("train.csv");
        let test = self.path("test.csv");
        let out = self.path(out);
        let mut args = vec![
            "sweep",
            "--config",
            p(config),
            "--train",
            p(&train),
            "--test",
            p(&test),
            "--out-dir",
            p(&out),
        ];
        args.extend_from_slice(extra);
        run(&args)
    }
}

const MINIMAL: &str = r#"{"methods":[{"method":"DCA","k":[1]}],"iterations":1,"fraction":1.0,
  "utility":"u","privacy":["s"],"betas":[1]}"#;

const GRID: &str = r#"{"methods":[{"method":"PCA","k":[1,2]},{"method":"RUCA","k":[1],"privacy_weights":[[0],[4]]},
  {"method":"RANDOM","k":[2]},{"method":"DCA","k":[1,50]}],
  "iterations":3,"fraction":0.5,"utility":"u","privacy":["s"],"betas":[0.5,1]}"#;

#[test]
fn help_lists_every_subcommand() {
    let o = run(&["--help"]);
    assert_eq!(code(&o), 0);
    for sub in ["preprocess", "fit", "project", "evaluate", "sweep", "plot"] {
        assert!(stdout(&o).contains(sub), "{sub}");
    }
    assert_eq!(code(&run(&[])), 2);
    assert_eq!(code(&run(&["frobnicate"])), 2);
}

#[test]
fn adult_preprocessing_reports_29_features() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("adult.csv");
    let o = run(&[
        "preprocess",
        "--input",
        p(&repo().join("data/adult/adult.data")),
        "--schema",
        p(&repo().join("schemas/census.json")),
        "--recode-census-marital",
        "--balance-on",
        "marital-status,sex",
        "--balance-mode",
        "joint",
        "--output",
        p(&out),
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert!(stdout(&o).contains("features: M=29"), "{}", stdout(&o));
    assert!(stdout(&o).contains("rows kept: 10086"), "{}", stdout(&o));
    assert_eq!(read_dataset_csv(&out).unwrap().n_features(), 29);
    for label in ["income", "marital-status", "sex"] {
        let l = read_labels_csv(dir.path().join(format!("adult.{label}.labels.csv"))).unwrap();
        assert_eq!(l.len(), 10086);
    }
}

#[test]
fn clean_input_keeps_every_row() {
    let toy = Toy::new();
    let o = run(&[
        "preprocess",
        "--input",
        p(&toy.path("train_raw.csv")),
        "--schema",
        p(&toy.path("schema.json")),
        "--balance-on",
        "u,s",
        "--output",
        p(&toy.path("again.csv")),
    ]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("rows read: 120"));
    assert!(stdout(&o).contains("rows kept: 120"));
    assert_eq!(read_dataset_csv(toy.path("again.csv")).unwrap().n_samples(), 120);
}

#[test]
fn unknown_category_is_an_input_error() {
    let toy = Toy::new();
    let raw = toy_csv(10, 0).replacen("green", "purple", 1);
    fs::write(toy.path("bad.csv"), raw).unwrap();
    let o = run(&[
        "preprocess",
        "--input",
        p(&toy.path("bad.csv")),
        "--schema",
        p(&toy.path("schema.json")),
        "--output",
        p(&toy.path("out.csv")),
    ]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("color") && stderr(&o).contains("purple"), "{}", stderr(&o));
}

#[test]
fn minimal_sweep_writes_three_files() {
    let toy = Toy::new();
    let cfg = toy.config(MINIMAL);
    let o = toy.sweep(&cfg, "out", &["--seed", "3"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let mut files: Vec<String> = fs::read_dir(toy.path("out"))
        .unwrap()
        .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
        .collect();
    files.sort();
    assert_eq!(files, ["manifest.json", "tradeoff.csv", "tradeoff.svg"]);

    let manifest: serde_json::Value = serde_json::from_str(&fs::read_to_string(toy.path("out/manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["seed"], 3);
    assert_eq!(manifest["library_version"], privproj::VERSION);
    assert_eq!(manifest["config_sha256"].as_str().unwrap().len(), 64);
    assert_eq!(manifest["cells"].as_array().unwrap().len(), 2);
}

#[test]
fn sweep_requires_a_seed_and_a_valid_config() {
    let toy = Toy::new();
    let cfg = toy.config(MINIMAL);
    assert_eq!(code(&toy.sweep(&cfg, "out", &[])), 2);
    let bad = toy.config(r#"{"methods":[],"iterations":0,"fraction":1.0,"utility":"u","privacy":["s"]}"#);
    assert_eq!(code(&toy.sweep(&bad, "out", &["--seed", "1"])), 2);
    let missing_label = toy.config(r#"{"methods":[{"method":"DCA","k":[1]}],"iterations":1,"fraction":1.0,"utility":"nope","privacy":["s"]}"#);
    assert_eq!(code(&toy.sweep(&missing_label, "out", &["--seed", "1"])), 2);
}

#[test]
fn reruns_are_byte_identical_at_any_thread_count() {
    let toy = Toy::new();
    let cfg = toy.config(GRID);
    assert_eq!(code(&toy.sweep(&cfg, "a", &["--seed", "9"])), 0);
    assert_eq!(code(&toy.sweep(&cfg, "b", &["--seed", "9"])), 0);
    let train = toy.path("train.csv");
    let test = toy.path("test.csv");
    let c = toy.path("c");
    let o = run_env(
        &["sweep", "--config", p(&cfg), "--train", p(&train), "--test", p(&test), "--out-dir", p(&c), "--seed", "9"],
        &[("PRIVPROJ_THREADS", "1")],
    );
    assert_eq!(code(&o), 0);
    for f in ["tradeoff.csv", "tradeoff.svg", "manifest.json"] {
        let a = fs::read(toy.path("a").join(f)).unwrap();
        assert_eq!(a, fs::read(toy.path("b").join(f)).unwrap(), "{f}");
        assert_eq!(a, fs::read(c.join(f)).unwrap(), "{f}");
    }
    assert_eq!(code(&toy.sweep(&cfg, "d", &["--seed", "10"])), 0);
    assert_ne!(
        fs::read(toy.path("a/tradeoff.csv")).unwrap(),
        fs::read(toy.path("d/tradeoff.csv")).unwrap()
    );
}

#[test]
fn failed_cells_exit_zero_total_failure_exits_one() {
    let toy = Toy::new();
    let cfg = toy.config(GRID);
    let o = toy.sweep(&cfg, "out", &["--seed", "1"]);
    assert_eq!(code(&o), 0);
    let csv = fs::read_to_string(toy.path("out/tradeoff.csv")).unwrap();
    assert!(csv.lines().any(|l| l.starts_with("DCA,50,") && l.contains(",failed: ")), "{csv}");

    let all_bad = toy.config(
        r#"{"methods":[{"method":"DCA","k":[50]}],"iterations":1,"fraction":1.0,"utility":"u","privacy":["s"],
        "full_dimensional":false}"#,
    );
    let o = toy.sweep(&all_bad, "bad", &["--seed", "1"]);
    assert_eq!(code(&o), 1, "{}", stderr(&o));
    assert!(stderr(&o).contains("sweep"));
}

#[test]
fn bad_thread_setting_is_a_usage_error() {
    let o = run_env(&["plot", "--input", "x", "--output", "y"], &[("PRIVPROJ_THREADS", "many")]);
    assert_eq!(code(&o), 2);
}

fn evaluate(train: &Path, test: &Path, label: &str, k: &str) -> Output {
    run(&["evaluate", "--train", p(train), "--test", p(test), "--label", label, "--k-neighbors", k])
}

#[test]
fn full_rank_pca_round_trip_preserves_accuracy() {
    let toy = Toy::new();
    let (train, test) = (toy.path("train.csv"), toy.path("test.csv"));
    let m = read_dataset_csv(&train).unwrap().n_features().to_string();
    let model = toy.path("pca.json");
    let o = run(&["fit", "--data", p(&train), "--method", "pca", "--k", &m, "--output", p(&model)]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    for (src, dst) in [(&train, "ptrain.csv"), (&test, "ptest.csv")] {
        let o = run(&["project", "--model", p(&model), "--data", p(src), "--output", p(&toy.path(dst))]);
        assert_eq!(code(&o), 0, "{}", stderr(&o));
    }
    for label in ["u", "s"] {
        let raw = evaluate(&train, &test, label, "3");
        let projected = evaluate(&toy.path("ptrain.csv"), &toy.path("ptest.csv"), label, "3");
        assert_eq!(code(&raw), 0);
        assert_eq!(stdout(&raw), stdout(&projected), "{label}");
    }
}

#[test]
fn saved_models_project_like_in_memory_ones() {
    let toy = Toy::new();
    let train = toy.path("train.csv");
    let model = toy.path("ruca.json");
    let o = run(&[
        "fit", "--data", p(&train), "--method", "RUCA", "--k", "2", "--utility", "u", "--privacy", "s", "--weights",
        "3.5", "--output", p(&model),
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let out = toy.path("z.csv");
    assert_eq!(code(&run(&["project", "--model", p(&model), "--data", p(&train), "--output", p(&out)])), 0);

    let d = read_dataset_csv(&train).unwrap();
    let u = read_labels_csv(toy.path("train.u.labels.csv")).unwrap();
    let s = read_labels_csv(toy.path("train.s.labels.csv")).unwrap();
    let cfg = ProjectionConfig::new(Method::Ruca, 2).with_privacy_weights(vec![3.5]);
    let z = project(&fit(&d, &u, &[s], &cfg).unwrap(), &d).unwrap();
    assert_eq!(read_dataset_csv(&out).unwrap().matrix(), z.matrix());
    assert_eq!(read_labels_csv(toy.path("z.u.labels.csv")).unwrap(), u);
}

#[test]
fn projecting_mismatched_dimensions_is_an_input_error() {
    let toy = Toy::new();
    let train = toy.path("train.csv");
    let model = toy.path("m.json");
    assert_eq!(code(&run(&["fit", "--data", p(&train), "--method", "PCA", "--k", "1", "--output", p(&model)])), 0);
    let once = toy.path("once.csv");
    assert_eq!(code(&run(&["project", "--model", p(&model), "--data", p(&train), "--output", p(&once)])), 0);
    let o = run(&["project", "--model", p(&model), "--data", p(&once), "--output", p(&toy.path("twice.csv"))]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("project"), "{}", stderr(&o));
}

#[test]
fn one_nearest_neighbour_on_its_training_set_is_exact() {
    let toy = Toy::new();
    let train = toy.path("train.csv");
    let o = evaluate(&train, &train, "u", "1");
    assert_eq!(code(&o), 0);
    let report: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(report["accuracy"], 1.0);
    assert_eq!(code(&evaluate(&train, &train, "u", "2")), 2);
}

#[test]
fn plot_redraws_a_saved_table() {
    let toy = Toy::new();
    let cfg = toy.config(GRID);
    assert_eq!(code(&toy.sweep(&cfg, "out", &["--seed", "2"])), 0);
    let svg = toy.path("again.svg");
    let o = run(&["plot", "--input", p(&toy.path("out/tradeoff.csv")), "--output", p(&svg)]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert_eq!(fs::read(&svg).unwrap(), fs::read(toy.path("out/tradeoff.svg")).unwrap());
    let o = run(&["plot", "--input", p(&toy.path("train.csv")), "--output", p(&svg)]);
    assert_eq!(code(&o), 2);
}

#[test]
fn holdout_splits_every_class() {
    let toy = Toy::new();
    let args = |extra: &[&str]| {
        let mut v: Vec<String> = [
            "preprocess",
            "--input",
            p(&toy.path("train_raw.csv")),
            "--schema",
            p(&toy.path("schema.json")),
            "--output",
            p(&toy.path("kept.csv")),
        ]
        .iter()
        .map(|s| s.to_string())
        .collect();
        v.extend(extra.iter().map(|s| s.to_string()));
        v
    };
    let held = toy.path("held.csv");
    let a = args(&["--holdout-on", "s", "--holdout-fraction", "0.25", "--holdout-output", p(&held)]);
    let o = run(&a.iter().map(String::as_str).collect::<Vec<_>>());
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let s_kept = read_labels_csv(toy.path("kept.s.labels.csv")).unwrap();
    let s_held = read_labels_csv(toy.path("held.s.labels.csv")).unwrap();
    assert_eq!(s_kept.class_counts(), [45, 45]);
    assert_eq!(s_held.class_counts(), [15, 15]);
    // rows are disjoint: x3 carries a per-row offset, so no value repeats
    let x3 = |path: &Path| -> Vec<u64> {
        let d = read_dataset_csv(path).unwrap();
        let col = d.feature_names().iter().position(|n| n == "x3").unwrap();
        d.samples().map(|s| s[col].to_bits()).collect()
    };
    let kept = x3(&toy.path("kept.csv"));
    assert!(x3(&held).iter().all(|v| !kept.contains(v)));

    let partial = args(&["--holdout-on", "s"]);
    assert_eq!(code(&run(&partial.iter().map(String::as_str).collect::<Vec<_>>())), 2);
}

#[test]
fn separate_privacy_test_set_needs_no_privacy_labels_elsewhere() {
    let toy = Toy::new();
    fs::remove_file(toy.path("test.s.labels.csv")).unwrap();
    let cfg = toy.config(MINIMAL);
    let without = toy.sweep(&cfg, "x", &["--seed", "1"]);
    assert_eq!(code(&without), 2, "{}", stderr(&without));

    let ptest = toy.path("train.csv");
    let o = toy.sweep(&cfg, "out", &["--seed", "1", "--privacy-test", p(&ptest)]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let manifest = fs::read_to_string(toy.path("out/manifest.json")).unwrap();
    assert!(manifest.contains("\"privacy_test.s\""));
    assert!(!manifest.contains("\"test.s\""));
}
