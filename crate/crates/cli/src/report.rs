//! JSON and text renderings of rules, rule sets and histograms.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use subrule_core::binning::GridHistogram;
use subrule_core::extraction::{Predicate, Rule, RuleSet};
use subrule_core::table::DataTable;
use subrule_core::Error as CoreError;

use crate::error::Result;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum PredicateJson {
    /// `lo <= x < hi`; `null` leaves that side open.
    InInterval { lo: Option<f64>, hi: Option<f64> },
    Eq { value: String },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RuleJson {
    pub feature: String,
    #[serde(flatten)]
    pub predicate: PredicateJson,
    /// Human-readable form with bounds rounded to 6 significant digits.
    #[serde(default, skip_deserializing)]
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RuleSetJson {
    pub rules: Vec<RuleJson>,
    pub support: usize,
    #[serde(default)]
    pub target_support: usize,
    pub confidence: f64,
    pub fitness: f64,
    #[serde(default)]
    pub step_ratios: Vec<f64>,
}

/// `v` rounded to 6 significant digits, printed without trailing zeros.
pub fn sig6(v: f64) -> String {
    let rounded: f64 = format!("{v:.5e}").parse().unwrap_or(v);
    rounded.to_string()
}

pub fn rule_text(feature: &str, predicate: &Predicate) -> String {
    match predicate {
        Predicate::Interval { lo: Some(lo), hi: Some(hi) } => {
            format!("{} <= {feature} < {}", sig6(*lo), sig6(*hi))
        }
        Predicate::Interval { lo: Some(lo), hi: None } => format!("{feature} >= {}", sig6(*lo)),
        Predicate::Interval { lo: None, hi: Some(hi) } => format!("{feature} < {}", sig6(*hi)),
        Predicate::Interval { lo: None, hi: None } => format!("{feature} is present"),
        Predicate::CategoryEquals(value) => format!("{feature} == {value}"),
    }
}

fn feature_name(table: &DataTable, feature: usize) -> Result<String> {
    Ok(table.column(feature)?.name().to_owned())
}

pub fn rule_to_json(table: &DataTable, rule: &Rule) -> Result<RuleJson> {
    let feature = feature_name(table, rule.feature)?;
    let predicate = match &rule.predicate {
        Predicate::Interval { lo, hi } => PredicateJson::InInterval { lo: *lo, hi: *hi },
        Predicate::CategoryEquals(value) => PredicateJson::Eq { value: value.clone() },
    };
    Ok(RuleJson {
        text: rule_text(&feature, &rule.predicate),
        feature,
        predicate,
    })
}

pub fn rule_from_json(table: &DataTable, rule: &RuleJson) -> Result<Rule> {
    let feature = table
        .index_of(&rule.feature)
        .ok_or_else(|| CoreError::Schema(format!("unknown feature {:?}", rule.feature)))?;
    Ok(match &rule.predicate {
        PredicateJson::InInterval { lo, hi } => Rule::interval(feature, *lo, *hi),
        PredicateJson::Eq { value } => Rule::category(feature, value.clone()),
    })
}

pub fn rule_set_to_json(table: &DataTable, set: &RuleSet) -> Result<RuleSetJson> {
    Ok(RuleSetJson {
        rules: set
            .rules
            .iter()
            .map(|r| rule_to_json(table, r))
            .collect::<Result<_>>()?,
        support: set.stats.support,
        target_support: set.stats.target_support,
        confidence: set.stats.confidence,
        fitness: set.stats.fitness,
        step_ratios: set.stats.step_ratios.iter().map(|r| r.to_f64()).collect(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HistogramJson {
    pub feature: String,
    /// Rows the histogram was built over.
    pub condition_rows: u64,
    pub condition_target: u64,
    pub edges: Vec<f64>,
    pub target_counts: Vec<u64>,
    pub total_counts: Vec<u64>,
    pub ratios: Vec<f64>,
}

pub fn histogram_json(table: &DataTable, hist: &GridHistogram) -> Result<HistogramJson> {
    Ok(HistogramJson {
        feature: feature_name(table, hist.feature)?,
        condition_rows: hist.condition_total,
        condition_target: hist.condition_target,
        edges: hist.edges.clone(),
        target_counts: hist.target_counts.clone(),
        total_counts: hist.total_counts.clone(),
        ratios: (0..hist.n_grids()).map(|i| hist.ratio(i).to_f64()).collect(),
    })
}

/// Fixed-width table of rule sets; the entry at `best` is starred.
pub fn text_table(sets: &[RuleSetJson], best: Option<usize>) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{:>3}  {:>8}  {:>10}  {:>8}  rules", "#", "support", "confidence", "fitness");
    for (i, s) in sets.iter().enumerate() {
        let mark = if Some(i) == best { "*" } else { " " };
        let rules: Vec<&str> = s.rules.iter().map(|r| r.text.as_str()).collect();
        let _ = writeln!(
            out,
            "{:>2}{mark}  {:>8}  {:>10.4}  {:>8.4}  {}",
            i + 1,
            s.support,
            s.confidence,
            s.fitness,
            rules.join(" AND ")
        );
    }
    if sets.is_empty() {
        out.push_str("no rules: no interval has a ratio above 1\n");
    }
    out
}
