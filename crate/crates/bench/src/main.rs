//! Command-line front end: benchmark suites plus single-model fit and predict.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use inertia_core::bench::{canned_suite, emit_report, run_suite, ReportFormat, SuiteConfig};
use inertia_core::explanatory::fit_with;
use inertia_core::{
    load_csv, predict_distribution, CsvSchema, Error, ExplanatoryModel, Feature, FeatureSpec,
    HolidayCalendar, RegionId, Result, SigmaSource, Window,
};

const EXIT_CONFIG: u8 = 1;
const EXIT_DATA: u8 = 2;
const EXIT_FAILURES: u8 = 3;

#[derive(Parser)]
#[command(
    name = "inertia-bench",
    version,
    about = "Day-ahead inertia forecasting benchmarks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every experiment of a TOML suite and write report.csv and report.json.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Output directory; overrides `out` in the config.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Parse and check a suite without running it.
    Validate {
        #[arg(long)]
        config: PathBuf,
    },
    /// Run the canned table experiments against a directory of regional CSV files.
    Tables {
        /// Directory holding nordic.csv, dk2.csv, fi.csv, no.csv, se.csv and optionally gb.csv.
        #[arg(long)]
        dataset: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Fit one explanatory model and save it as JSON.
    Fit {
        #[arg(long)]
        data: PathBuf,
        #[arg(long, default_value = "NORDIC_TOTAL")]
        region: RegionId,
        /// Training window as `start/end`.
        #[arg(long)]
        train: Window,
        /// TOML file with a feature specification; the flags below are applied on top.
        #[arg(long)]
        spec: Option<PathBuf>,
        /// Features to interact with month of year, comma separated.
        #[arg(long, value_delimiter = ',')]
        monthly: Vec<Feature>,
        #[arg(long)]
        hydro_lag: bool,
        #[arg(long, default_value = "target", value_parser = parse_sigma)]
        sigma: SigmaSource,
        /// Holiday file (one ISO date per line) replacing the bundled calendar.
        #[arg(long)]
        holidays: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Forecast with a saved model and write mean and quantiles as CSV.
    Predict {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        data: PathBuf,
        #[arg(long, default_value = "NORDIC_TOTAL")]
        region: RegionId,
        /// Forecast window as `start/end`.
        #[arg(long)]
        window: Window,
        #[arg(long, value_delimiter = ',', default_values_t = [0.05, 0.5, 0.95])]
        quantiles: Vec<f64>,
        #[arg(long)]
        holidays: Option<PathBuf>,
        /// Output file; standard output when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn parse_sigma(s: &str) -> std::result::Result<SigmaSource, String> {
    match s {
        "target" => Ok(SigmaSource::Target),
        "residual" => Ok(SigmaSource::Residual),
        other => Err(format!("expected target or residual, got {other:?}")),
    }
}

enum Failure {
    Config(String),
    Data(String),
    Experiments(usize),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Config(_) => Failure::Config(e.to_string()),
            _ => Failure::Data(e.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_CONFIG)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Config(msg)) => {
            eprintln!("config error: {msg}");
            ExitCode::from(EXIT_CONFIG)
        }
        Err(Failure::Data(msg)) => {
            eprintln!("data error: {msg}");
            ExitCode::from(EXIT_DATA)
        }
        Err(Failure::Experiments(n)) => {
            eprintln!("{n} experiment(s) failed");
            ExitCode::from(EXIT_FAILURES)
        }
    }
}

fn dispatch(command: Command) -> std::result::Result<(), Failure> {
    match command {
        Command::Run { config, out, jobs } => {
            let suite = SuiteConfig::load(&config).map_err(as_config)?;
            let out = out
                .or_else(|| suite.out.clone())
                .unwrap_or_else(|| PathBuf::from("."));
            run(&suite, &out, jobs)
        }
        Command::Validate { config } => {
            let suite = SuiteConfig::load(&config).map_err(as_config)?;
            check(&suite)?;
            println!(
                "{}: {} experiment(s) ok",
                config.display(),
                suite.experiments.len()
            );
            Ok(())
        }
        Command::Tables { dataset, out, jobs } => {
            // Absolute so that the written suite.toml resolves from any directory.
            let dataset = fs::canonicalize(&dataset).map_err(|e| Error::io(&dataset, e))?;
            let suite = canned_suite(&dataset);
            fs::create_dir_all(&out).map_err(|e| Error::io(&out, e))?;
            let path = out.join("suite.toml");
            fs::write(&path, suite.to_toml()?).map_err(|e| Error::io(&path, e))?;
            run(&suite, &out, jobs)
        }
        Command::Fit {
            data,
            region,
            train,
            spec,
            monthly,
            hydro_lag,
            sigma,
            holidays,
            out,
        } => {
            let mut spec = match spec {
                Some(p) => read_spec(&p)?,
                None => FeatureSpec::default(),
            };
            spec = spec.with_monthly(monthly);
            spec.hydro_lag |= hydro_lag;
            spec.validate()?;
            let ds = load(&data, region, holidays.as_deref())?;
            let model = fit_with(&ds, &spec, train, sigma)?;
            model.save(&out)?;
            println!(
                "fitted {} coefficients on {} hours, sigma {:.3}",
                model.coefficients().len(),
                model.n_train,
                model.sigma_hat
            );
            Ok(())
        }
        Command::Predict {
            model,
            data,
            region,
            window,
            quantiles,
            holidays,
            out,
        } => {
            if let Some(p) = quantiles.iter().find(|p| !(**p > 0.0 && **p < 1.0)) {
                return Err(Failure::Config(format!("quantile {p} is outside (0, 1)")));
            }
            let model = ExplanatoryModel::load(&model)?;
            let ds = load(&data, region, holidays.as_deref())?;
            let text = forecast_csv(&model, &ds, window, &quantiles)?;
            match out {
                Some(path) => fs::write(&path, text).map_err(|e| Error::io(&path, e))?,
                None => print!("{text}"),
            }
            Ok(())
        }
    }
}

/// An unreadable or malformed suite file is a configuration problem.
fn as_config(e: Error) -> Failure {
    Failure::Config(e.to_string())
}

fn check(suite: &SuiteConfig) -> std::result::Result<(), Failure> {
    suite.validate()?;
    for exp in &suite.experiments {
        exp.validate()?;
    }
    for exp in &suite.experiments {
        exp.check_files()
            .map_err(|e| Failure::Data(e.to_string()))?;
    }
    Ok(())
}

fn run(suite: &SuiteConfig, out: &Path, jobs: Option<usize>) -> std::result::Result<(), Failure> {
    check(suite)?;
    let jobs = jobs.or(suite.jobs).unwrap_or(1);
    if jobs == 0 {
        return Err(Failure::Config("jobs must be at least 1".into()));
    }
    let report = run_suite(&suite.experiments, suite.base_case.as_deref(), jobs)?;
    fs::create_dir_all(out).map_err(|e| Error::io(out, e))?;
    for format in [ReportFormat::Csv, ReportFormat::Json] {
        emit_report(
            &report,
            format,
            out.join(format!("report.{}", format.extension())),
        )?;
    }
    print!("{}", report.to_csv()?);
    match report.failures() {
        0 => Ok(()),
        n => Err(Failure::Experiments(n)),
    }
}

fn read_spec(path: &Path) -> Result<FeatureSpec> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    toml::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
}

fn load(
    data: &Path,
    region: RegionId,
    holidays: Option<&Path>,
) -> Result<inertia_core::InertiaDataset> {
    let ds = load_csv(data, &CsvSchema::default(), region)?;
    Ok(match holidays {
        Some(p) => ds.with_calendar(HolidayCalendar::load(region, p)?),
        None => ds,
    })
}

fn forecast_csv(
    model: &ExplanatoryModel,
    ds: &inertia_core::InertiaDataset,
    window: Window,
    quantiles: &[f64],
) -> Result<String> {
    let fc = predict_distribution(model, ds, window)?;
    let mut text = String::from("timestamp,mean,sigma");
    for p in quantiles {
        write!(text, ",q{p}").unwrap();
    }
    text.push('\n');
    for (i, ts) in window.hours().enumerate() {
        write!(text, "{ts}").unwrap();
        match fc.mean.values()[i] {
            Some(m) => write!(text, ",{m},{}", fc.sigma).unwrap(),
            None => text.push_str(",,"),
        }
        for p in quantiles {
            match fc.quantile(i, *p) {
                Some(q) => write!(text, ",{q}").unwrap(),
                None => text.push(','),
            }
        }
        text.push('\n');
    }
    Ok(text)
}
