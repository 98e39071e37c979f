//! The canned field-data suite: training-duration and monthly-interaction tables,
//! the day-ahead comparison against the baseline, regional aggregation, hydropower
//! and forecast-substitution experiments.

use std::collections::BTreeSet;
use std::path::Path;

use super::config::{ExperimentConfig, HolidayChoice, ModelKind, SuiteConfig};
use crate::calendar::RegionId;
use crate::dataset::SplitSpec;
use crate::features::{Feature, FeatureSpec, Substitution};
use crate::time::{Timestamp, Window};

/// One year of training before 2020, scored on January to August 2020.
pub const TABLE_BASE_CASE: &str = "t3-1y";

fn day(y: i32, m: u32, d: u32) -> Timestamp {
    Timestamp::ymd_h(y, m, d, 0)
}

fn years_before_2020(years: i32) -> SplitSpec {
    SplitSpec::new(
        Window::new(day(2020 - years, 1, 1), day(2020, 1, 1)),
        Window::new(day(2020, 1, 1), day(2020, 9, 1)),
    )
    .expect("static split")
}

fn nordic(id: &str, model: ModelKind, split: SplitSpec, dir: &Path) -> ExperimentConfig {
    ExperimentConfig {
        dataset: Some(dir.join("nordic.csv")),
        ..ExperimentConfig::new(id, model, split)
    }
}

/// Experiments over the files `nordic.csv`, `dk2.csv`, `fi.csv`, `no.csv`, `se.csv`
/// (and `gb.csv` when present) in `dir`.
pub fn canned_suite(dir: &Path) -> SuiteConfig {
    let mut exps = Vec::new();

    let t1 = SplitSpec::new(
        Window::new(day(2017, 1, 31), day(2018, 1, 31)),
        Window::new(day(2018, 1, 31), day(2018, 2, 1)),
    )
    .expect("static split");
    exps.push(nordic("t1-explanatory", ModelKind::Explanatory, t1, dir));
    exps.push(nordic("t1-baseline", ModelKind::Baseline, t1, dir));

    for years in 1..=4 {
        exps.push(nordic(
            &format!("t3-{years}y"),
            ModelKind::Explanatory,
            years_before_2020(years),
            dir,
        ));
    }
    for years in 1..=4 {
        exps.push(ExperimentConfig {
            spec: FeatureSpec::default().with_monthly([Feature::DemandFc]),
            ..nordic(
                &format!("t4-{years}y"),
                ModelKind::Explanatory,
                years_before_2020(years),
                dir,
            )
        });
    }

    let regional = ExperimentConfig {
        regions: RegionId::NORDIC_PARTS
            .iter()
            .map(|r| {
                (
                    *r,
                    dir.join(format!("{}.csv", r.code().to_ascii_lowercase())),
                )
            })
            .collect(),
        ..nordic("spatial-1y", ModelKind::Regional, years_before_2020(1), dir)
    };
    exps.push(ExperimentConfig {
        id: "spatial-1y-common".into(),
        holidays: HolidayChoice::Common,
        ..regional.clone()
    });
    exps.push(regional);

    exps.push(ExperimentConfig {
        spec: FeatureSpec {
            hydro_lag: true,
            ..FeatureSpec::default()
        },
        ..nordic(
            "hydro-1y",
            ModelKind::Explanatory,
            years_before_2020(1),
            dir,
        )
    });

    let subs: [(&str, &[Substitution]); 4] = [
        ("sub-demand", &[Substitution::Demand]),
        ("sub-wind", &[Substitution::Wind]),
        ("sub-solar", &[Substitution::Solar]),
        (
            "sub-all",
            &[
                Substitution::Demand,
                Substitution::Wind,
                Substitution::Solar,
            ],
        ),
    ];
    for (id, set) in subs {
        exps.push(ExperimentConfig {
            substitutions: set.iter().copied().collect::<BTreeSet<_>>(),
            ..nordic(id, ModelKind::Explanatory, years_before_2020(1), dir)
        });
    }

    let all = FeatureSpec::default();
    let every = all.enabled_features();
    exps.push(ExperimentConfig {
        spec: all.clone().with_monthly(every),
        ..nordic(
            "monthly-all-2y",
            ModelKind::Explanatory,
            years_before_2020(2),
            dir,
        )
    });
    exps.push(ExperimentConfig {
        spec: all.with_monthly([Feature::InertiaLag]),
        ..nordic(
            "monthly-lag-2y",
            ModelKind::Explanatory,
            years_before_2020(2),
            dir,
        )
    });

    let gb = dir.join("gb.csv");
    if gb.is_file() {
        let split = SplitSpec::new(
            Window::new(day(2016, 1, 1), day(2018, 1, 1)),
            Window::new(day(2018, 1, 1), day(2019, 1, 1)),
        )
        .expect("static split");
        exps.push(ExperimentConfig {
            region: RegionId::GB,
            dataset: Some(gb),
            ..ExperimentConfig::new("gb-2y", ModelKind::Explanatory, split)
        });
    }

    SuiteConfig {
        out: None,
        jobs: None,
        base_case: Some(TABLE_BASE_CASE.into()),
        experiments: exps,
    }
}
