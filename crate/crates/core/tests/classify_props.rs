mod common;

use common::{class_gaussians, labels, normal, rng};
use privproj::classify::{predict, random_guess_baseline, train_eval};
use privproj::linalg::{orthonormalize_columns, Matrix};
use privproj::scatter::Dataset;
use privproj::{ClassifierSpec, LabelSet};
use proptest::prelude::*;
use rand::Rng as _;

fn rotate(d: &Dataset<f64>, q: &Matrix<f64>) -> Dataset<f64> {
    Dataset::new(q.tr_matmul(d.matrix()).unwrap()).unwrap()
}

fn specs() -> [ClassifierSpec; 3] {
    [ClassifierSpec::knn(1), ClassifierSpec::knn(5), ClassifierSpec::nearest_centroid()]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn accuracy_survives_rotation(seed in any::<u64>()) {
        let mut r = rng(seed);
        let m = r.random_range(1..6);
        let c = r.random_range(2..4);
        let ltr = labels(&mut r, 60, c);
        let lte = labels(&mut r, 40, c);
        let train = class_gaussians(&mut r, &ltr, m, 1.5);
        let test = class_gaussians(&mut rng(seed ^ 1), &lte, m, 1.5);
        let q = orthonormalize_columns(&Matrix::from_fn(m, m, |_, _| normal(&mut r)), 1e-10).unwrap();
        let (rtrain, rtest) = (rotate(&train, &q), rotate(&test, &q));
        for spec in specs() {
            let a = predict(&train, &ltr, &test, &spec).unwrap();
            let b = predict(&rtrain, &ltr, &rtest, &spec).unwrap();
            prop_assert_eq!(a, b);
        }
    }

    #[test]
    fn training_order_is_irrelevant_without_ties(seed in any::<u64>()) {
        let mut r = rng(seed);
        let m = r.random_range(1..5);
        let ltr = labels(&mut r, 50, 3);
        let train = class_gaussians(&mut r, &ltr, m, 1.0);
        let lte = labels(&mut r, 30, 3);
        let test = class_gaussians(&mut r, &lte, m, 1.0);
        let mut perm: Vec<usize> = (0..50).collect();
        for i in (1..50).rev() {
            perm.swap(i, r.random_range(0..=i));
        }
        let ptrain = train.select(&perm).unwrap();
        let pl = ltr.select(&perm).unwrap();
        for spec in specs() {
            prop_assert_eq!(
                predict(&train, &ltr, &test, &spec).unwrap(),
                predict(&ptrain, &pl, &test, &spec).unwrap()
            );
        }
    }

    #[test]
    fn report_is_consistent(seed in any::<u64>()) {
        let mut r = rng(seed);
        let ltr = labels(&mut r, 40, 3);
        let lte = labels(&mut r, 25, 3);
        let train = class_gaussians(&mut r, &ltr, 3, 1.0);
        let test = class_gaussians(&mut r, &lte, 3, 1.0);
        for spec in specs() {
            let rep = train_eval(&train, &ltr, &test, &lte, &spec).unwrap();
            let total: usize = rep.confusion.iter().flatten().sum();
            let diag: usize = (0..3).map(|c| rep.confusion[c][c]).sum();
            prop_assert_eq!(total, rep.n_test);
            prop_assert_eq!(rep.n_test, 25);
            prop_assert_eq!(rep.accuracy, diag as f64 / 25.0);
            for (c, n) in lte.class_counts().into_iter().enumerate() {
                prop_assert_eq!(rep.confusion[c].iter().sum::<usize>(), n);
            }
            prop_assert_eq!(&rep, &train_eval(&train, &ltr, &test, &lte, &spec).unwrap());
        }
    }
}

#[test]
fn distance_ties_go_to_the_lower_training_index() {
    let test = Dataset::from_samples(&[[0.0]]).unwrap();
    let train = Dataset::from_samples(&[[1.0], [-1.0]]).unwrap();
    let spec = ClassifierSpec::knn(1);
    assert_eq!(predict(&train, &LabelSet::new(vec![1, 0], 2).unwrap(), &test, &spec).unwrap(), vec![1]);
    assert_eq!(predict(&train, &LabelSet::new(vec![0, 1], 2).unwrap(), &test, &spec).unwrap(), vec![0]);
}

#[test]
fn vote_ties_go_to_the_smallest_class() {
    // Three classes, one vote each among the three nearest.
    let train = Dataset::from_samples(&[[1.0], [2.0], [3.0], [50.0]]).unwrap();
    let l = LabelSet::new(vec![2, 1, 0, 0], 3).unwrap();
    let test = Dataset::from_samples(&[[0.0]]).unwrap();
    assert_eq!(predict(&train, &l, &test, &ClassifierSpec::knn(3)).unwrap(), vec![0]);
}

#[test]
fn centroid_ties_go_to_the_smallest_class() {
    let train = Dataset::from_samples(&[[1.0], [-1.0]]).unwrap();
    let l = LabelSet::new(vec![1, 0], 2).unwrap();
    let test = Dataset::from_samples(&[[0.0]]).unwrap();
    assert_eq!(predict(&train, &l, &test, &ClassifierSpec::nearest_centroid()).unwrap(), vec![0]);
}

#[test]
fn even_or_zero_neighbour_counts_are_rejected() {
    let d = Dataset::from_samples(&[[0.0], [1.0]]).unwrap();
    let l = LabelSet::new(vec![0, 1], 2).unwrap();
    for k in [0, 2, 4] {
        assert!(train_eval(&d, &l, &d, &l, &ClassifierSpec::knn(k)).is_err());
    }
}

#[test]
fn mismatched_inputs_are_rejected() {
    let d1 = Dataset::from_samples(&[[0.0], [1.0]]).unwrap();
    let d2 = Dataset::from_samples(&[[0.0, 1.0], [1.0, 0.0]]).unwrap();
    let l = LabelSet::new(vec![0, 1], 2).unwrap();
    assert!(train_eval(&d1, &l, &d2, &l, &ClassifierSpec::knn(1)).is_err());
    let l3 = LabelSet::new(vec![0, 1, 2], 3).unwrap();
    let d3 = Dataset::from_samples(&[[0.0], [1.0], [2.0]]).unwrap();
    assert!(train_eval(&d1, &l, &d3, &l3, &ClassifierSpec::knn(1)).is_err());
}

#[test]
fn guessing_baselines() {
    assert_eq!(random_guess_baseline(&LabelSet::new(vec![0, 1, 0, 1], 2).unwrap()), 0.5);
    let ids: Vec<usize> = (0..21 * 3).map(|i| i % 21).collect();
    let b = random_guess_baseline(&LabelSet::new(ids, 21).unwrap());
    assert!((b - 1.0 / 21.0).abs() < 1e-15);
    let skew: Vec<usize> = (0..100).map(|i| usize::from(i >= 90)).collect();
    assert_eq!(random_guess_baseline(&LabelSet::new(skew, 2).unwrap()), 0.9);
}
