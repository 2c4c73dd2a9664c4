use std::io::Write;

use ldr_fs::evalkit::{
    evaluate_selection, kfold_split, load_csv, DoubleCircle, ErfsSelector, EvalSettings,
    NoSelection,
};

#[test]
fn folds_keep_class_ratio() {
    let y: Vec<usize> = (0..100).map(|i| usize::from(i >= 50)).collect();
    let split = kfold_split(100, 5, 9, &y).unwrap();
    for fold in &split.folds {
        let ones = fold.test.iter().filter(|&&i| y[i] == 1).count() as i64;
        let zeros = fold.test.len() as i64 - ones;
        assert!((ones - zeros).abs() <= 1, "{ones} vs {zeros}");
    }
    let mut seen: Vec<usize> = split.folds.iter().flat_map(|f| f.test.clone()).collect();
    seen.sort();
    assert_eq!(seen, (0..100).collect::<Vec<_>>());
}

#[test]
fn csv_file_round_trip() {
    let mut file = tempfile::NamedTempFile::new().unwrap();
    writeln!(file, "a,b,class").unwrap();
    writeln!(file, "1.5,2,cat").unwrap();
    writeln!(file, "0.5,-1,dog").unwrap();
    writeln!(file, "3,0,cat").unwrap();
    let ds = load_csv(file.path()).unwrap();
    assert_eq!(ds.samples(), 3);
    assert_eq!(ds.features(), 2);
    assert_eq!(ds.y, vec![0, 1, 0]);
    assert_eq!(ds.class_names, vec!["cat", "dog"]);
    assert_eq!(ds.x.row(1), &[0.5, -1.0]);
}

#[test]
fn missing_file_is_io_error() {
    let dir = tempfile::tempdir().unwrap();
    assert!(load_csv(dir.path().join("nope.csv")).is_err());
}

#[test]
fn toy_evaluation_is_repeatable() {
    let ds = DoubleCircle::with_seed(4).generate().unwrap();
    let settings = EvalSettings {
        select_count: 3,
        folds: 5,
        seed: 2,
        knn_k: 5,
    };
    let a = evaluate_selection(&ds, &ErfsSelector::default(), &settings).unwrap();
    let b = evaluate_selection(&ds, &ErfsSelector::default(), &settings).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.fold_selected.len(), 5);
    assert!(a.fold_selected.iter().all(|f| f.len() == 3));
}

#[test]
fn signal_features_alone_classify_the_toy() {
    // the circles are separable by radius, so the two signal columns give a near-perfect k-NN
    let ds = DoubleCircle::with_seed(1).generate().unwrap();
    let settings = EvalSettings {
        select_count: 2,
        folds: 5,
        seed: 1,
        knn_k: 5,
    };
    let r = evaluate_selection(&ds, &NoSelection, &settings).unwrap();
    assert!(r.mean_accuracy >= 0.95, "{}", r.mean_accuracy);
}
