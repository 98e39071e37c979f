use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::baseline::BaselineConfig;
use crate::calendar::RegionId;
use crate::dataset::{CsvSchema, SplitSpec};
use crate::error::{Error, Result};
use crate::explanatory::SigmaSource;
use crate::features::{FeatureSpec, Substitution};
use crate::synthetic::SyntheticConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    Explanatory,
    Baseline,
    Regional,
}

impl ModelKind {
    pub fn name(self) -> &'static str {
        match self {
            ModelKind::Explanatory => "explanatory",
            ModelKind::Baseline => "baseline",
            ModelKind::Regional => "regional",
        }
    }
}

/// Holiday calendar used for day types and baseline holiday effects.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum HolidayChoice {
    /// The bundled calendar of each dataset's region.
    #[default]
    Own,
    /// Holidays shared by DK2, FI, NO and SE, for every region.
    Common,
    /// A holiday file, applied to every region.
    File(PathBuf),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub id: String,
    pub model: ModelKind,
    /// Region of `dataset`.
    #[serde(default = "default_region")]
    pub region: RegionId,
    /// Whole-system CSV; for the regional model it is the truth the aggregate is scored against.
    #[serde(default)]
    pub dataset: Option<PathBuf>,
    /// Per-region CSVs for the regional model.
    #[serde(default)]
    pub regions: BTreeMap<RegionId, PathBuf>,
    /// Generated data instead of files.
    #[serde(default)]
    pub synthetic: Option<SyntheticConfig>,
    #[serde(default)]
    pub schema: CsvSchema,
    #[serde(default)]
    pub holidays: HolidayChoice,
    #[serde(default)]
    pub substitutions: BTreeSet<Substitution>,
    #[serde(default)]
    pub sigma: SigmaSource,
    pub split: SplitSpec,
    #[serde(default)]
    pub spec: FeatureSpec,
    #[serde(default)]
    pub baseline: BaselineConfig,
}

fn default_region() -> RegionId {
    RegionId::NordicTotal
}

/// Where an experiment's data comes from, after validation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DataSource {
    File,
    Synthetic,
}

impl ExperimentConfig {
    pub fn new(id: impl Into<String>, model: ModelKind, split: SplitSpec) -> Self {
        ExperimentConfig {
            id: id.into(),
            model,
            region: RegionId::NordicTotal,
            dataset: None,
            regions: BTreeMap::new(),
            synthetic: None,
            schema: CsvSchema::default(),
            holidays: HolidayChoice::Own,
            substitutions: BTreeSet::new(),
            sigma: SigmaSource::Target,
            split,
            spec: FeatureSpec::default(),
            baseline: BaselineConfig::default(),
        }
    }

    /// Checks the configuration itself; file existence is checked by [`Self::check_files`].
    pub fn validate(&self) -> Result<DataSource> {
        let err = |msg: String| Error::Config(format!("experiment {:?}: {msg}", self.id));
        if self.id.trim().is_empty() {
            return Err(Error::Config("experiment id must not be empty".into()));
        }
        self.split.validate().map_err(|e| err(e.to_string()))?;
        self.spec.validate().map_err(|e| err(e.to_string()))?;
        self.baseline.validate().map_err(|e| err(e.to_string()))?;
        let source = match (&self.synthetic, self.model) {
            (Some(_), _) if self.dataset.is_some() || !self.regions.is_empty() => {
                return Err(err(
                    "give either synthetic data or dataset files, not both".into()
                ))
            }
            (Some(_), _) => DataSource::Synthetic,
            (None, ModelKind::Regional) => {
                let keys: Vec<RegionId> = self.regions.keys().copied().collect();
                if keys != RegionId::NORDIC_PARTS {
                    return Err(err(format!(
                        "regional model needs DK2, FI, NO and SE files, got {keys:?}"
                    )));
                }
                DataSource::File
            }
            (None, _) => {
                if self.dataset.is_none() {
                    return Err(err("no dataset given".into()));
                }
                if !self.regions.is_empty() {
                    return Err(err(
                        "per-region files are only used by the regional model".into()
                    ));
                }
                DataSource::File
            }
        };
        if self.model == ModelKind::Baseline && !self.substitutions.is_empty() {
            return Err(err(
                "the baseline uses no forecast features to substitute".into()
            ));
        }
        Ok(source)
    }

    pub fn files(&self) -> Vec<&Path> {
        let mut out: Vec<&Path> = self.dataset.iter().map(PathBuf::as_path).collect();
        out.extend(self.regions.values().map(PathBuf::as_path));
        if let HolidayChoice::File(p) = &self.holidays {
            out.push(p);
        }
        out
    }

    pub fn check_files(&self) -> Result<()> {
        for path in self.files() {
            if !path.is_file() {
                return Err(Error::io(
                    path,
                    std::io::Error::new(std::io::ErrorKind::NotFound, "file not found"),
                ));
            }
        }
        Ok(())
    }

    fn resolve(&mut self, base: &Path) {
        let fix = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        };
        if let Some(p) = self.dataset.as_mut() {
            fix(p);
        }
        self.regions.values_mut().for_each(fix);
        if let HolidayChoice::File(p) = &mut self.holidays {
            fix(p);
        }
    }
}

/// A TOML suite: settings plus `[[experiment]]` tables.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuiteConfig {
    /// Report directory.
    #[serde(default)]
    pub out: Option<PathBuf>,
    #[serde(default)]
    pub jobs: Option<usize>,
    /// Experiment id that MAE deltas are measured against.
    #[serde(default)]
    pub base_case: Option<String>,
    #[serde(default, rename = "experiment")]
    pub experiments: Vec<ExperimentConfig>,
}

impl SuiteConfig {
    /// Parses TOML; relative paths are taken relative to `base_dir`.
    pub fn from_toml(text: &str, base_dir: &Path) -> Result<Self> {
        let mut suite: SuiteConfig =
            toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        for exp in &mut suite.experiments {
            exp.resolve(base_dir);
        }
        if let Some(out) = suite.out.as_mut() {
            if out.is_relative() {
                *out = base_dir.join(&*out);
            }
        }
        Ok(suite)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let base = path.parent().unwrap_or_else(|| Path::new("."));
        Self::from_toml(&text, base)
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Serde(e.to_string()))
    }

    /// Unique ids, a known base case, and every experiment valid.
    pub fn validate(&self) -> Result<()> {
        let mut seen = BTreeSet::new();
        for exp in &self.experiments {
            exp.validate()?;
            if !seen.insert(exp.id.as_str()) {
                return Err(Error::Config(format!(
                    "duplicate experiment id {:?}",
                    exp.id
                )));
            }
        }
        if let Some(base) = &self.base_case {
            if !seen.contains(base.as_str()) {
                return Err(Error::Config(format!(
                    "base case {base:?} is not an experiment id"
                )));
            }
        }
        if self.jobs == Some(0) {
            return Err(Error::Config("jobs must be at least 1".into()));
        }
        Ok(())
    }
}
