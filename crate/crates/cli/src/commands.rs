//! Subcommand implementations. Each returns the text to print.

use std::path::Path;

use log::{debug, info};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value as Json};
use subrule_core::attribution::{
    balanced_test_rows, build_importance_matrix, class_centroids, numeric_rows,
    select_frequent_features, DifferentiableScorer, ImportanceMatrix, ScorerKind,
};
use subrule_core::extraction::{
    extract_local, extract_rule_sets, path_histograms, ratio_histogram, select_best, RuleSet,
};
use subrule_core::metrics::{rule_stats, step_ratios};
use subrule_core::synth::{brute_force_best, gen_synthetic, PlantedSpec};
use subrule_core::table::{
    make_target, roc_threshold, ColumnData, ColumnKind, DataTable, TargetIndicator, Value,
};
use subrule_core::Error as CoreError;

use crate::config::{OutputFormat, RunConfig};
use crate::error::{CliError, Result};
use crate::io::{load_csv, load_importance_csv, read_json, write_csv, write_output, Schema};
use crate::report::{histogram_json, rule_from_json, rule_set_to_json, text_table, RuleSetJson};

/// Reason reported when no rule set exists.
pub const NO_RULES: &str = "no ratio above 1";

fn pretty(value: &impl Serialize) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("JSON values always serialize");
    s.push('\n');
    s
}

/// Weights of the built-in scorer, in the order of `features`.
#[derive(Debug, Clone, Deserialize)]
pub struct ScorerFile {
    pub kind: String,
    pub features: Vec<String>,
    pub weights: Vec<f64>,
    #[serde(default)]
    pub bias: f64,
}

impl ScorerFile {
    pub fn load(path: &Path) -> Result<Self> {
        read_json(path)
    }

    pub fn scorer(&self) -> Result<DifferentiableScorer> {
        let kind = match self.kind.as_str() {
            "linear" => ScorerKind::Linear,
            "logistic" => ScorerKind::Logistic,
            other => return Err(CliError::Usage(format!("unknown scorer kind {other:?}"))),
        };
        if self.weights.len() != self.features.len() {
            return Err(CoreError::Shape {
                expected: self.features.len(),
                found: self.weights.len(),
            }
            .into());
        }
        Ok(DifferentiableScorer::new(kind, self.weights.clone(), self.bias))
    }

    pub fn feature_indices(&self, table: &DataTable) -> Result<Vec<usize>> {
        self.features.iter().map(|n| numeric_index(table, n)).collect()
    }
}

fn column_index(table: &DataTable, name: &str) -> Result<usize> {
    table
        .index_of(name)
        .ok_or_else(|| CoreError::Schema(format!("no column named {name:?}")).into())
}

fn numeric_index(table: &DataTable, name: &str) -> Result<usize> {
    let i = column_index(table, name)?;
    if table.column(i)?.kind() != ColumnKind::Numeric {
        return Err(CoreError::Schema(format!("column {name:?} is not numeric")).into());
    }
    Ok(i)
}

fn without_column(table: &DataTable, drop: usize) -> Result<DataTable> {
    let columns = table
        .columns()
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != drop)
        .map(|(_, c)| c.clone())
        .collect();
    Ok(DataTable::new(columns)?)
}

/// Feature table and target indicator for a data file.
pub struct Dataset {
    pub table: DataTable,
    pub target: TargetIndicator,
}

fn schema(config: &RunConfig) -> Schema {
    let mut schema = Schema::numeric_by_default();
    for name in &config.categorical {
        schema = schema.with(name.clone(), ColumnKind::Categorical);
    }
    if config.probability_column.is_none() && !config.categorical.contains(&config.prediction_column) {
        schema = schema.with(config.prediction_column.clone(), ColumnKind::Categorical);
    }
    schema
}

/// Loads the data file and derives the target. In order of preference the
/// target comes from the probability column with the threshold, from the
/// prediction column matching the target class, or from the scorer.
pub fn load_dataset(path: &Path, config: &RunConfig) -> Result<Dataset> {
    let raw = load_csv(path, &schema(config), &config.missing)?;
    info!("loaded {} rows, {} columns from {}", raw.n_rows(), raw.n_features(), path.display());

    if let Some(name) = &config.probability_column {
        let i = numeric_index(&raw, name)?;
        let probs = complete_numbers(&raw, i)?;
        let target = make_target(&probs, config.threshold)?;
        return Ok(Dataset {
            table: without_column(&raw, i)?,
            target,
        });
    }
    if let Some(i) = raw.index_of(&config.prediction_column) {
        let codes = match raw.column(i)?.data() {
            ColumnData::Categorical { levels, codes } => {
                let want = levels.iter().position(|l| *l == config.target_class);
                codes.iter().map(|c| c.is_some() && c.map(|c| c as usize) == want).collect()
            }
            ColumnData::Numeric(values) => {
                let want: f64 = config.target_class.parse().map_err(|_| {
                    CliError::Usage(format!("target class {:?} is not a number", config.target_class))
                })?;
                values.iter().map(|v| *v == Some(want)).collect()
            }
        };
        return Ok(Dataset {
            table: without_column(&raw, i)?,
            target: TargetIndicator::new(codes, config.target_class.clone()),
        });
    }
    if let Some(scorer_path) = &config.scorer {
        let file = ScorerFile::load(scorer_path)?;
        let scorer = file.scorer()?;
        let features = file.feature_indices(&raw)?;
        let (kept, rows) = numeric_rows(&raw, &features)?;
        if kept.len() != raw.n_rows() {
            return Err(CoreError::Domain("scorer features contain missing values".into()).into());
        }
        let scores = rows.iter().map(|x| scorer.score(x)).collect::<subrule_core::Result<Vec<_>>>()?;
        let flags = match scorer.kind {
            ScorerKind::Logistic => make_target(&scores, config.threshold)?.flags().to_vec(),
            ScorerKind::Linear => scores.iter().map(|&s| s > config.threshold).collect(),
        };
        return Ok(Dataset {
            table: raw,
            target: TargetIndicator::new(flags, config.target_class.clone()),
        });
    }
    Err(CliError::Usage(format!(
        "no target: {:?} has no column {:?}, and neither probability-column nor scorer is set",
        path.display().to_string(),
        config.prediction_column
    )))
}

fn complete_numbers(table: &DataTable, i: usize) -> Result<Vec<f64>> {
    let column = table.column(i)?;
    let values = column.numeric_values().expect("checked numeric");
    values
        .iter()
        .enumerate()
        .map(|(row, v)| {
            v.ok_or_else(|| {
                CoreError::Parse {
                    row: row + 1,
                    column: column.name().to_owned(),
                }
                .into()
            })
        })
        .collect()
}

#[derive(Deserialize)]
struct FeatureSetFile {
    features: Vec<String>,
}

/// Feature indices from `features`, else the feature-set file, else every
/// column.
pub fn resolve_features(table: &DataTable, config: &RunConfig) -> Result<Vec<usize>> {
    let names = if !config.features.is_empty() {
        config.features.clone()
    } else if let Some(path) = &config.feature_set {
        read_json::<FeatureSetFile>(path)?.features
    } else {
        return Ok((0..table.n_features()).collect());
    };
    names.iter().map(|n| column_index(table, n)).collect()
}

fn importance_matrix(data: Option<&Path>, config: &RunConfig) -> Result<ImportanceMatrix> {
    if let Some(path) = &config.importance {
        return load_importance_csv(path);
    }
    let (Some(data), Some(scorer_path)) = (data, &config.scorer) else {
        return Err(CliError::Usage(
            "select-features needs --importance, or --data with --scorer".into(),
        ));
    };
    let file = ScorerFile::load(scorer_path)?;
    let scorer = file.scorer()?;
    let ds = load_dataset(data, config)?;
    let features = file.feature_indices(&ds.table)?;
    let baselines = class_centroids(&ds.table, &ds.target, &features)?;
    let tests = balanced_test_rows(&ds.table, &ds.target, &features, config.test_samples, config.seed)?;
    debug!("{} baselines, {} test samples", baselines.len(), tests.len());
    let matrix = build_importance_matrix(&scorer, &baselines, &tests, config.ig_steps, config.eps)?;
    Ok(matrix.with_feature_names(file.features.clone())?)
}

pub fn select_features(data: Option<&Path>, config: &RunConfig) -> Result<String> {
    let matrix = importance_matrix(data, config)?;
    let rows = matrix.n_rows();
    let c_min = config.c_min.unwrap_or_else(|| rows.div_ceil(10).max(1));
    let k_max = config.k_max.unwrap_or(matrix.n_cols()).max(1);
    info!("importance matrix {}x{}, c_min {c_min}, k_max {k_max}", rows, matrix.n_cols());
    let selection = select_frequent_features(&matrix, config.gamma, c_min, k_max)?;
    let names = |items: &[usize]| -> Vec<String> {
        items.iter().map(|&i| matrix.feature_names()[i].clone()).collect()
    };
    let itemsets: Vec<Json> = selection
        .itemsets
        .iter()
        .map(|s| json!({"features": names(&s.items), "count": s.count}))
        .collect();
    Ok(pretty(&json!({
        "features": names(&selection.features),
        "j_th": selection.threshold,
        "itemsets": itemsets,
    })))
}

fn target_json(target: &TargetIndicator) -> Json {
    json!({"label": target.label(), "count": target.count(), "rows": target.len()})
}

pub fn extract(data: &Path, config: &RunConfig) -> Result<String> {
    let ex = config.extraction()?;
    let ds = load_dataset(data, config)?;
    let features = resolve_features(&ds.table, config)?;
    let sets = extract_rule_sets(&ds.table, &ds.target, &features, &ex)?;
    info!("{} candidate rule sets", sets.len());
    let best = if sets.is_empty() {
        None
    } else {
        let chosen = select_best(&sets, ex.iota)?;
        sets.iter().position(|s| std::ptr::eq(s, chosen))
    };
    let rendered = sets
        .iter()
        .map(|s| rule_set_to_json(&ds.table, s))
        .collect::<Result<Vec<_>>>()?;

    if let Some(path) = &config.histograms {
        let mut per_feature = Vec::new();
        let everything = vec![true; ds.table.n_rows()];
        for &f in &features {
            if ds.table.column(f)?.kind() != ColumnKind::Numeric {
                continue;
            }
            match ratio_histogram(&ds.table, &ds.target, f, &everything, &ex) {
                Ok(h) => per_feature.push(histogram_json(&ds.table, &h)?),
                Err(CoreError::DegenerateFeature { .. }) => continue,
                Err(e) => return Err(e.into()),
            }
        }
        let best_path = match best {
            Some(b) => path_histograms(&ds.table, &ds.target, &sets[b], &ex)?
                .iter()
                .map(|h| h.as_ref().map(|h| histogram_json(&ds.table, h)).transpose())
                .collect::<Result<Vec<_>>>()?,
            None => Vec::new(),
        };
        write_output(
            Some(path),
            &pretty(&json!({"features": per_feature, "best_path": best_path})),
        )?;
    }

    if config.format == OutputFormat::Text {
        return Ok(text_table(&rendered, best));
    }
    let feature_names: Vec<&str> = features.iter().map(|&f| ds.table.feature_names()[f]).collect();
    let mut out = json!({
        "target": target_json(&ds.target),
        "features": feature_names,
        "config": {
            "s_min": ex.s_min, "l_max": ex.l_max, "n_g": ex.n_g, "k": ex.k,
            "strategy": ex.strategy.name(), "iota": ex.iota, "seed": ex.seed,
        },
        "result": if best.is_some() { "rules" } else { "none" },
        "rule_sets": rendered,
        "best": best.map(|b| &rendered[b]),
    });
    if best.is_none() {
        out["reason"] = json!(NO_RULES);
    }
    Ok(pretty(&out))
}

/// Where the sample to explain comes from.
pub enum SampleSource<'a> {
    Row(usize),
    File(&'a Path),
}

fn load_sample(table: &DataTable, source: SampleSource<'_>, config: &RunConfig) -> Result<Vec<Value>> {
    match source {
        SampleSource::Row(r) => Ok(table.row(r)?),
        SampleSource::File(path) => {
            let mut kinds = schema(config);
            for c in table.columns() {
                kinds = kinds.with(c.name(), c.kind());
            }
            let sample = load_csv(path, &kinds, &config.missing)?;
            let row = sample.row(0)?;
            table
                .feature_names()
                .iter()
                .map(|name| Ok(row[column_index(&sample, name)?].clone()))
                .collect()
        }
    }
}

pub fn explain(data: &Path, source: SampleSource<'_>, config: &RunConfig) -> Result<String> {
    let ex = config.extraction()?;
    let ds = load_dataset(data, config)?;
    let features = resolve_features(&ds.table, config)?;
    let sample = load_sample(&ds.table, source, config)?;
    let out = match extract_local(&ds.table, &ds.target, &features, &sample, &ex)? {
        Some(set) => {
            let rendered = rule_set_to_json(&ds.table, &set)?;
            if config.format == OutputFormat::Text {
                return Ok(text_table(&[rendered], Some(0)));
            }
            json!({"result": "rules", "rule_set": rendered})
        }
        None => {
            if config.format == OutputFormat::Text {
                return Ok(text_table(&[], None));
            }
            json!({"result": "none", "reason": NO_RULES})
        }
    };
    Ok(pretty(&out))
}

/// Rule sets from an `extract` output (`rule_sets`), an `explain` output
/// (`rule_set`), or a bare rule set.
fn rule_sets_in(value: &Json) -> Result<Vec<RuleSetJson>> {
    let parse = |v: &Json| -> Result<RuleSetJson> {
        serde_json::from_value(v.clone()).map_err(|e| CliError::Usage(format!("rules file: {e}")))
    };
    if let Some(list) = value.get("rule_sets").and_then(Json::as_array) {
        return list.iter().map(parse).collect();
    }
    if let Some(one) = value.get("rule_set") {
        return Ok(vec![parse(one)?]);
    }
    if value.get("rules").is_some() {
        return Ok(vec![parse(value)?]);
    }
    Err(CliError::Usage("rules file holds no rule sets".into()))
}

/// Recomputes every statistic on `data`. Rules are taken in their stored
/// order, which is the order they were found in.
pub fn evaluate(data: &Path, rules: &Path, config: &RunConfig) -> Result<String> {
    let ds = load_dataset(data, config)?;
    let input: Json = read_json(rules)?;
    let mut out = Vec::new();
    for entry in rule_sets_in(&input)? {
        let parsed = entry
            .rules
            .iter()
            .map(|r| rule_from_json(&ds.table, r))
            .collect::<Result<Vec<_>>>()?;
        let steps = step_ratios(&ds.table, &ds.target, &parsed)?;
        let stats = rule_stats(&ds.table, &ds.target, &parsed, steps)?;
        out.push(rule_set_to_json(&ds.table, &RuleSet { rules: parsed, stats })?);
    }
    if config.format == OutputFormat::Text {
        return Ok(text_table(&out, None));
    }
    Ok(pretty(&json!({"target": target_json(&ds.target), "rule_sets": out})))
}

pub fn threshold(data: &Path, probability: &str, label: &str, positive: &str, config: &RunConfig) -> Result<String> {
    let schema = Schema::numeric_by_default().with(label, ColumnKind::Categorical);
    let table = load_csv(data, &schema, &config.missing)?;
    let probs = complete_numbers(&table, numeric_index(&table, probability)?)?;
    let column = table.column(column_index(&table, label)?)?;
    let labels: Vec<bool> = (0..table.n_rows())
        .map(|r| column.value(r) == Value::Category(positive.to_owned()))
        .collect();
    let t = roc_threshold(&probs, &labels)?;
    Ok(pretty(&json!({"threshold": t, "rows": probs.len()})))
}

/// Writes the two-mode planted fixture with a `target` column of `1`/`0`.
pub fn synth(output: &Path, seed: u64, rows: Option<usize>) -> Result<String> {
    let mut spec = PlantedSpec::two_mode(seed);
    if let Some(n) = rows {
        spec.n_rows = n;
    }
    let data = gen_synthetic(&spec)?;
    let target: Vec<String> = data.target.flags().iter().map(|&t| u8::from(t).to_string()).collect();
    write_csv(output, &data.table, &[("target", target)])?;
    let boxes: Vec<Json> = data
        .modes
        .iter()
        .enumerate()
        .map(|(m, mode)| json!({"bounds": mode.bounds, "purity": mode.purity, "rows": spec.mode_rows(m)}))
        .collect();
    Ok(pretty(&json!({
        "output": output.display().to_string(),
        "rows": spec.n_rows,
        "seed": seed,
        "target_rows": data.target.count(),
        "background_rate": spec.background_rate,
        "modes": boxes,
    })))
}

pub fn oracle(data: &Path, config: &RunConfig) -> Result<String> {
    let ex = config.extraction()?;
    let ds = load_dataset(data, config)?;
    let features = resolve_features(&ds.table, config)?;
    let columns = features
        .iter()
        .map(|&f| ds.table.column(f).cloned())
        .collect::<subrule_core::Result<Vec<_>>>()?;
    let table = DataTable::new(columns)?;
    let best = brute_force_best(&table, &ds.target, &ex)?;
    let rendered = rule_set_to_json(&table, &best)?;
    if config.format == OutputFormat::Text {
        return Ok(text_table(&[rendered], Some(0)));
    }
    Ok(pretty(&json!({"target": target_json(&ds.target), "best": rendered})))
}
