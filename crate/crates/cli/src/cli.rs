//! Argument parsing and dispatch.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::commands::{self, SampleSource};
use crate::config::RunConfig;
use crate::error::{CliError, Result};
use crate::io::write_output;

#[derive(Debug, Parser)]
#[command(name = "subrule", version, about = "Regional rule extraction for a target subgroup")]
pub struct Cli {
    /// Flat `key = value` settings file; flags take precedence.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

/// Settings shared by every subcommand. Names match the config-file keys.
#[derive(Debug, Clone, Default, Args)]
pub struct Settings {
    /// Minimum rows a rule set must cover.
    #[arg(long, value_name = "N")]
    pub s_min: Option<String>,
    /// Maximum rules per set.
    #[arg(long, value_name = "N")]
    pub l_max: Option<String>,
    /// Initial grids per numeric feature.
    #[arg(long, value_name = "N")]
    pub n_g: Option<String>,
    /// Candidates kept at each tree level.
    #[arg(long, value_name = "N")]
    pub k: Option<String>,
    /// uniform, kmeans or quantile.
    #[arg(long)]
    pub strategy: Option<String>,
    /// Confidence bound for picking the best rule set.
    #[arg(long)]
    pub iota: Option<String>,
    #[arg(long)]
    pub seed: Option<String>,
    /// Row fraction the most frequent feature must cover at the threshold.
    #[arg(long)]
    pub gamma: Option<String>,
    /// Minimum count of a frequent feature set.
    #[arg(long, value_name = "N")]
    pub c_min: Option<String>,
    /// Maximum size of a frequent feature set.
    #[arg(long, value_name = "N")]
    pub k_max: Option<String>,
    /// Riemann steps for integrated gradients.
    #[arg(long, value_name = "N")]
    pub ig_steps: Option<String>,
    /// Output shifts below this are skipped.
    #[arg(long)]
    pub eps: Option<String>,
    /// Test samples for the importance matrix.
    #[arg(long, value_name = "N")]
    pub test_samples: Option<String>,
    #[arg(long, value_name = "COLUMN")]
    pub prediction_column: Option<String>,
    #[arg(long, value_name = "CLASS")]
    pub target_class: Option<String>,
    #[arg(long, value_name = "COLUMN")]
    pub probability_column: Option<String>,
    #[arg(long)]
    pub threshold: Option<String>,
    /// Comma-separated categorical columns.
    #[arg(long, value_name = "COLUMNS")]
    pub categorical: Option<String>,
    /// Cell text meaning "missing".
    #[arg(long, value_name = "TOKEN")]
    pub missing: Option<String>,
    /// Comma-separated features to search.
    #[arg(long, value_name = "COLUMNS")]
    pub features: Option<String>,
    /// Output of `select-features` naming the features to search.
    #[arg(long, value_name = "FILE")]
    pub feature_set: Option<String>,
    /// JSON weights of the built-in linear or logistic scorer.
    #[arg(long, value_name = "FILE")]
    pub scorer: Option<String>,
    /// Precomputed importance matrix CSV.
    #[arg(long, value_name = "FILE")]
    pub importance: Option<String>,
    /// Write the result here instead of stdout.
    #[arg(long, short, value_name = "FILE")]
    pub output: Option<String>,
    /// Write ratio histograms as JSON here.
    #[arg(long, value_name = "FILE")]
    pub histograms: Option<String>,
    /// json or text.
    #[arg(long)]
    pub format: Option<String>,
}

impl Settings {
    fn pairs(&self) -> Vec<(&'static str, &String)> {
        let all = [
            ("s-min", &self.s_min),
            ("l-max", &self.l_max),
            ("n-g", &self.n_g),
            ("k", &self.k),
            ("strategy", &self.strategy),
            ("iota", &self.iota),
            ("seed", &self.seed),
            ("gamma", &self.gamma),
            ("c-min", &self.c_min),
            ("k-max", &self.k_max),
            ("ig-steps", &self.ig_steps),
            ("eps", &self.eps),
            ("test-samples", &self.test_samples),
            ("prediction-column", &self.prediction_column),
            ("target-class", &self.target_class),
            ("probability-column", &self.probability_column),
            ("threshold", &self.threshold),
            ("categorical", &self.categorical),
            ("missing", &self.missing),
            ("features", &self.features),
            ("feature-set", &self.feature_set),
            ("scorer", &self.scorer),
            ("importance", &self.importance),
            ("output", &self.output),
            ("histograms", &self.histograms),
            ("format", &self.format),
        ];
        all.into_iter().filter_map(|(k, v)| v.as_ref().map(|v| (k, v))).collect()
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Pick the frequently important feature set from an importance matrix.
    SelectFeatures {
        /// Data CSV, used with --scorer to build the importance matrix.
        #[arg(long)]
        data: Option<PathBuf>,
        #[command(flatten)]
        settings: Settings,
    },
    /// Extract candidate rule sets and pick the best.
    Extract {
        #[arg(long)]
        data: PathBuf,
        #[command(flatten)]
        settings: Settings,
    },
    /// Best rule set whose intervals all contain one sample.
    Explain {
        #[arg(long)]
        data: PathBuf,
        /// 0-based data row to explain.
        #[arg(long, conflicts_with = "sample", required_unless_present = "sample")]
        row: Option<usize>,
        /// CSV whose first row is the sample.
        #[arg(long)]
        sample: Option<PathBuf>,
        #[command(flatten)]
        settings: Settings,
    },
    /// Recompute statistics of saved rule sets on a data file.
    Evaluate {
        #[arg(long)]
        data: PathBuf,
        /// Output of extract or explain, or a single rule set.
        #[arg(long)]
        rules: PathBuf,
        #[command(flatten)]
        settings: Settings,
    },
    /// Probability threshold maximising TPR - FPR.
    Threshold {
        #[arg(long)]
        data: PathBuf,
        /// Column of predicted probabilities.
        #[arg(long)]
        probability: String,
        /// Column of true labels.
        #[arg(long)]
        label: String,
        /// Label value of the positive class.
        #[arg(long, default_value = "1")]
        positive: String,
        #[command(flatten)]
        settings: Settings,
    },
    /// Write the planted two-box dataset.
    Synth {
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long)]
        rows: Option<usize>,
    },
    /// Exhaustive grid-aligned search for the best rule set (small inputs).
    Oracle {
        #[arg(long)]
        data: PathBuf,
        #[command(flatten)]
        settings: Settings,
    },
}

fn settings(command: &Command) -> Option<&Settings> {
    match command {
        Command::SelectFeatures { settings, .. }
        | Command::Extract { settings, .. }
        | Command::Explain { settings, .. }
        | Command::Evaluate { settings, .. }
        | Command::Threshold { settings, .. }
        | Command::Oracle { settings, .. } => Some(settings),
        Command::Synth { .. } => None,
    }
}

/// Defaults, then the config file, then flags.
pub fn resolve_config(cli: &Cli) -> Result<RunConfig> {
    let mut config = RunConfig::default();
    if let Some(path) = &cli.config {
        config.apply_file(path)?;
    }
    if let Some(s) = settings(&cli.command) {
        for (key, value) in s.pairs() {
            config
                .set(key, value)
                .map_err(|e| CliError::Usage(format!("--{key}: {e}")))?;
        }
    }
    Ok(config)
}

pub fn run(cli: &Cli) -> Result<()> {
    let config = resolve_config(cli)?;
    let text = match &cli.command {
        Command::SelectFeatures { data, .. } => commands::select_features(data.as_deref(), &config)?,
        Command::Extract { data, .. } => commands::extract(data, &config)?,
        Command::Explain { data, row, sample, .. } => {
            let source = match (row, sample) {
                (Some(r), _) => SampleSource::Row(*r),
                (None, Some(p)) => SampleSource::File(p),
                (None, None) => return Err(CliError::Usage("explain needs --row or --sample".into())),
            };
            commands::explain(data, source, &config)?
        }
        Command::Evaluate { data, rules, .. } => commands::evaluate(data, rules, &config)?,
        Command::Threshold {
            data,
            probability,
            label,
            positive,
            ..
        } => commands::threshold(data, probability, label, positive, &config)?,
        Command::Synth { out, seed, rows } => commands::synth(out, *seed, *rows)?,
        Command::Oracle { data, .. } => commands::oracle(data, &config)?,
    };
    write_output(config.output.as_deref(), &text)
}
