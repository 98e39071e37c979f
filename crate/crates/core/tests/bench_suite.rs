use std::collections::BTreeSet;
use std::path::Path;

use inertia_core::bench::{
    emit_report, run_experiment, run_suite, ExperimentConfig, HolidayChoice, ModelKind,
    ReportFormat, SuiteConfig,
};
use inertia_core::synthetic::{generate_synthetic, SyntheticConfig};
use inertia_core::{
    write_csv, Error, Feature, FeatureSpec, SplitSpec, Substitution, Timestamp, Window,
};

fn split() -> SplitSpec {
    SplitSpec::new(
        Window::new(
            Timestamp::ymd_h(2019, 1, 1, 0),
            Timestamp::ymd_h(2019, 4, 1, 0),
        ),
        Window::new(
            Timestamp::ymd_h(2019, 4, 1, 0),
            Timestamp::ymd_h(2019, 5, 1, 0),
        ),
    )
    .unwrap()
}

fn synthetic(noise_sd: f64, seed: u64) -> SyntheticConfig {
    SyntheticConfig {
        hours: 24 * 120,
        noise_sd,
        seed,
        trend_window: Some(split().train()),
        ..SyntheticConfig::default()
    }
}

fn exp(id: &str, model: ModelKind, noise_sd: f64, seed: u64) -> ExperimentConfig {
    ExperimentConfig {
        synthetic: Some(synthetic(noise_sd, seed)),
        ..ExperimentConfig::new(id, model, split())
    }
}

fn suite() -> Vec<ExperimentConfig> {
    vec![
        exp("base", ModelKind::Explanatory, 3000.0, 1),
        exp("regional", ModelKind::Regional, 3000.0, 1),
        exp("baseline", ModelKind::Baseline, 3000.0, 1),
        ExperimentConfig {
            spec: FeatureSpec::default().with_monthly([Feature::DemandFc]),
            ..exp("monthly", ModelKind::Explanatory, 3000.0, 1)
        },
        ExperimentConfig {
            substitutions: [Substitution::Wind].into(),
            ..exp("sub-wind", ModelKind::Explanatory, 3000.0, 1)
        },
        exp("noisy", ModelKind::Explanatory, 9000.0, 1),
    ]
}

#[test]
fn empty_suite_gives_empty_report() {
    let report = run_suite(&[], None, 2).unwrap();
    assert!(report.rows.is_empty());
}

#[test]
fn zero_noise_experiments_are_near_exact() {
    for model in [ModelKind::Explanatory, ModelKind::Regional] {
        let row = run_experiment(&exp("z", model, 0.0, 7)).unwrap();
        let (train, test) = (row.train.unwrap(), row.test.unwrap());
        assert!(train.mape <= 0.01, "{model:?} train {}", train.mape);
        assert!(test.mape <= 0.01, "{model:?} test {}", test.mape);
    }
}

#[test]
fn reports_are_deterministic_and_independent_of_workers() {
    let configs = suite();
    let a = run_suite(&configs, Some("base"), 1).unwrap();
    let b = run_suite(&configs, Some("base"), 4).unwrap();
    let c = run_suite(&configs, Some("base"), 4).unwrap();
    assert_eq!(a.to_csv().unwrap(), b.to_csv().unwrap());
    assert_eq!(a.to_json().unwrap(), b.to_json().unwrap());
    assert_eq!(b.to_json().unwrap(), c.to_json().unwrap());
    let ids: Vec<&str> = a.rows.iter().map(|r| r.id.as_str()).collect();
    assert_eq!(
        ids,
        ["base", "regional", "baseline", "monthly", "sub-wind", "noisy"]
    );
    assert_eq!(a.failures(), 0, "{:?}", a.rows);
    assert_eq!(a.row("base").unwrap().delta_mae, Some(0.0));
    assert!(a.row("noisy").unwrap().delta_mae.unwrap() > 0.0);
}

#[test]
fn failures_are_recorded_in_row() {
    let mut bad = exp("bad", ModelKind::Explanatory, 0.0, 1);
    bad.split = SplitSpec::new(
        Window::new(
            Timestamp::ymd_h(2018, 1, 1, 0),
            Timestamp::ymd_h(2018, 6, 1, 0),
        ),
        Window::new(
            Timestamp::ymd_h(2018, 6, 1, 0),
            Timestamp::ymd_h(2018, 7, 1, 0),
        ),
    )
    .unwrap();
    let configs = vec![exp("good", ModelKind::Explanatory, 0.0, 1), bad.clone()];
    let report = run_suite(&configs, None, 2).unwrap();
    assert_eq!(report.failures(), 1);
    let msg = report.rows[1].error.as_deref().unwrap();
    assert!(msg.contains("bad") && msg.contains("split"), "{msg}");
    match run_experiment(&bad) {
        Err(Error::Experiment { id, stage, .. }) => {
            assert_eq!((id.as_str(), stage.as_str()), ("bad", "split"))
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn duplicate_ids_and_unknown_base_case_rejected() {
    let configs = vec![
        exp("a", ModelKind::Explanatory, 0.0, 1),
        exp("a", ModelKind::Baseline, 0.0, 1),
    ];
    assert!(matches!(
        run_suite(&configs, None, 1),
        Err(Error::Config(_))
    ));
    let configs = vec![exp("a", ModelKind::Explanatory, 0.0, 1)];
    assert!(matches!(
        run_suite(&configs, Some("b"), 1),
        Err(Error::Config(_))
    ));
}

#[test]
fn file_backed_experiments_from_toml() {
    let dir = tempfile::tempdir().unwrap();
    let ds = generate_synthetic(&synthetic(2000.0, 3)).unwrap();
    write_csv(&ds, dir.path().join("nordic.csv")).unwrap();
    std::fs::write(dir.path().join("hol.txt"), "2019-04-10 special\n").unwrap();
    let toml = r#"
base_case = "file"
jobs = 2

[[experiment]]
id = "file"
model = "explanatory"
dataset = "nordic.csv"
split = { train_start = "2019-01-01", train_end = "2019-04-01", test_start = "2019-04-01", test_end = "2019-05-01" }

[[experiment]]
id = "file-custom-holidays"
model = "baseline"
dataset = "nordic.csv"
holidays = { file = "hol.txt" }
split = { train_start = "2019-01-01", train_end = "2019-04-01", test_start = "2019-04-01", test_end = "2019-05-01" }
baseline = { seasonalities = [{ name = "daily", period_hours = 24.0, order = 4 }] }

[[experiment]]
id = "synthetic"
model = "explanatory"
split = { train_start = "2019-01-01", train_end = "2019-04-01", test_start = "2019-04-01", test_end = "2019-05-01" }
spec = { monthly_interaction_on = ["demand_fc"] }
synthetic = { hours = 2880, seed = 3, noise_sd = 2000.0 }
"#;
    let path = dir.path().join("suite.toml");
    std::fs::write(&path, toml).unwrap();
    let suite = SuiteConfig::load(&path).unwrap();
    suite.validate().unwrap();
    assert_eq!(
        suite.experiments[1].holidays,
        HolidayChoice::File(dir.path().join("hol.txt"))
    );
    assert_eq!(suite.experiments[2].spec.n_columns(), 36);
    let report = run_suite(
        &suite.experiments,
        suite.base_case.as_deref(),
        suite.jobs.unwrap(),
    )
    .unwrap();
    assert_eq!(report.failures(), 0, "{:?}", report.rows);
    let file_test = report.row("file").unwrap().test.unwrap();
    assert!(file_test.mape < 5.0);

    let csv = dir.path().join("report.csv");
    emit_report(&report, ReportFormat::Csv, &csv).unwrap();
    assert_eq!(std::fs::read_to_string(&csv).unwrap().lines().count(), 4);
    let bad = Path::new("/nonexistent/dir/report.json");
    assert!(matches!(
        emit_report(&report, ReportFormat::Json, bad),
        Err(Error::Io { .. })
    ));
}

#[test]
fn missing_file_is_a_data_error() {
    let cfg = ExperimentConfig {
        dataset: Some("/nonexistent/nordic.csv".into()),
        ..ExperimentConfig::new("missing", ModelKind::Explanatory, split())
    };
    let err = run_experiment(&cfg).unwrap_err();
    assert!(err.is_data_error(), "{err}");
}

#[test]
fn config_errors_are_not_data_errors() {
    let cfg = ExperimentConfig::new("nothing", ModelKind::Explanatory, split());
    let err = run_experiment(&cfg).unwrap_err();
    assert!(!err.is_data_error());
    let both = ExperimentConfig {
        dataset: Some("x.csv".into()),
        ..exp("both", ModelKind::Explanatory, 0.0, 1)
    };
    assert!(both.validate().is_err());
    let sub_baseline = ExperimentConfig {
        substitutions: BTreeSet::from([Substitution::Demand]),
        ..exp("sb", ModelKind::Baseline, 0.0, 1)
    };
    assert!(sub_baseline.validate().is_err());
}
