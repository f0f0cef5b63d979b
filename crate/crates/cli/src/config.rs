//! Run configuration: defaults, a flat `key = value` file, then flags.
//!
//! File keys are the long flag names without the leading dashes. Blank lines
//! and lines starting with `#` are ignored.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use subrule_core::attribution::{DEFAULT_EPS, DEFAULT_GAMMA, DEFAULT_STEPS};
use subrule_core::binning::BinningStrategy;
use subrule_core::extraction::ExtractionConfig;

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Json,
    Text,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub s_min: Option<usize>,
    pub l_max: usize,
    pub n_g: usize,
    pub k: usize,
    pub strategy: BinningStrategy,
    pub iota: f64,
    pub seed: u64,

    pub gamma: f64,
    /// Defaults to 10% of the importance-matrix rows.
    pub c_min: Option<usize>,
    /// Defaults to the number of features.
    pub k_max: Option<usize>,
    pub ig_steps: usize,
    pub eps: f64,
    /// Test samples drawn for the importance matrix, split evenly by class.
    pub test_samples: usize,

    /// Column holding the model's predicted class.
    pub prediction_column: String,
    pub target_class: String,
    /// Column holding the model's probability for the target class; used
    /// with `threshold` instead of `prediction_column` when set.
    pub probability_column: Option<String>,
    pub threshold: f64,
    pub categorical: Vec<String>,
    pub missing: String,

    pub features: Vec<String>,
    pub feature_set: Option<PathBuf>,
    pub scorer: Option<PathBuf>,
    pub importance: Option<PathBuf>,
    pub output: Option<PathBuf>,
    pub histograms: Option<PathBuf>,
    pub format: OutputFormat,
}

impl Default for RunConfig {
    fn default() -> Self {
        let base = ExtractionConfig::new(0);
        RunConfig {
            s_min: None,
            l_max: base.l_max,
            n_g: base.n_g,
            k: base.k,
            strategy: base.strategy,
            iota: base.iota,
            seed: base.seed,
            gamma: DEFAULT_GAMMA,
            c_min: None,
            k_max: None,
            ig_steps: DEFAULT_STEPS,
            eps: DEFAULT_EPS,
            test_samples: 100,
            prediction_column: "prediction".into(),
            target_class: "1".into(),
            probability_column: None,
            threshold: 0.5,
            categorical: Vec::new(),
            missing: String::new(),
            features: Vec::new(),
            feature_set: None,
            scorer: None,
            importance: None,
            output: None,
            histograms: None,
            format: OutputFormat::Json,
        }
    }
}

fn parse<T: FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .trim()
        .parse()
        .map_err(|_| CliError::Usage(format!("invalid value {value:?} for {key}")))
}

fn list(value: &str) -> Vec<String> {
    value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(str::to_owned)
        .collect()
}

impl RunConfig {
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let path = || Some(PathBuf::from(value.trim()));
        match key {
            "s-min" => self.s_min = Some(parse(key, value)?),
            "l-max" => self.l_max = parse(key, value)?,
            "n-g" => self.n_g = parse(key, value)?,
            "k" => self.k = parse(key, value)?,
            "strategy" => {
                self.strategy = BinningStrategy::from_name(value.trim())
                    .ok_or_else(|| CliError::Usage(format!("unknown binning strategy {value:?}")))?
            }
            "iota" => self.iota = parse(key, value)?,
            "seed" => self.seed = parse(key, value)?,
            "gamma" => self.gamma = parse(key, value)?,
            "c-min" => self.c_min = Some(parse(key, value)?),
            "k-max" => self.k_max = Some(parse(key, value)?),
            "ig-steps" => self.ig_steps = parse(key, value)?,
            "eps" => self.eps = parse(key, value)?,
            "test-samples" => self.test_samples = parse(key, value)?,
            "prediction-column" => self.prediction_column = value.trim().into(),
            "target-class" => self.target_class = value.trim().into(),
            "probability-column" => self.probability_column = Some(value.trim().into()),
            "threshold" => self.threshold = parse(key, value)?,
            "categorical" => self.categorical = list(value),
            "missing" => self.missing = value.trim().into(),
            "features" => self.features = list(value),
            "feature-set" => self.feature_set = path(),
            "scorer" => self.scorer = path(),
            "importance" => self.importance = path(),
            "output" => self.output = path(),
            "histograms" => self.histograms = path(),
            "format" => {
                self.format = match value.trim() {
                    "json" => OutputFormat::Json,
                    "text" => OutputFormat::Text,
                    other => return Err(CliError::Usage(format!("unknown format {other:?}"))),
                }
            }
            _ => return Err(CliError::Usage(format!("unknown configuration key {key:?}"))),
        }
        Ok(())
    }

    pub fn apply_text(&mut self, text: &str, origin: &str) -> Result<()> {
        for (n, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                CliError::Usage(format!("{origin}:{}: expected key = value", n + 1))
            })?;
            self.set(key.trim(), value)
                .map_err(|e| CliError::Usage(format!("{origin}:{}: {e}", n + 1)))?;
        }
        Ok(())
    }

    pub fn apply_file(&mut self, path: &Path) -> Result<()> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        self.apply_text(&text, &path.display().to_string())
    }

    /// Extraction settings; fails when `s-min` was never given.
    pub fn extraction(&self) -> Result<ExtractionConfig> {
        let s_min = self
            .s_min
            .ok_or_else(|| CliError::Usage("s-min is required".into()))?;
        let config = ExtractionConfig {
            s_min,
            l_max: self.l_max,
            n_g: self.n_g,
            k: self.k,
            strategy: self.strategy,
            iota: self.iota,
            seed: self.seed,
        };
        config.validate()?;
        Ok(config)
    }
}
