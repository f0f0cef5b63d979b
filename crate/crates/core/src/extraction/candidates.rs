use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use super::interval::{find_peaks, gen_feature_interval, grid_ratios, GridSpan};
use super::{ExtractionConfig, Rule};
use crate::binning::{grid_counts, grid_index, make_grids, merge_grids, GridHistogram};
use crate::table::{ColumnData, DataTable, TargetIndicator, Value};
use crate::{Error, Ratio, Result};

/// A proposed rule for one feature with its counts inside the condition.
#[derive(Debug, Clone, PartialEq)]
pub struct Candidate {
    pub rule: Rule,
    pub ratio: Ratio,
    pub support: u64,
    pub target_support: u64,
    /// Interval start grid, or category code; last tie-breaker.
    pub position: usize,
}

/// Ranking: ratio descending, support descending, feature, position.
pub(crate) fn rank(a: &Candidate, b: &Candidate) -> Ordering {
    b.ratio
        .cmp(&a.ratio)
        .then(b.support.cmp(&a.support))
        .then(a.rule.feature.cmp(&b.rule.feature))
        .then(a.position.cmp(&b.position))
}

/// Merged ratio histogram of a numeric feature over the condition rows.
pub fn ratio_histogram(
    table: &DataTable,
    target: &TargetIndicator,
    feature: usize,
    condition: &[bool],
    config: &ExtractionConfig,
) -> Result<GridHistogram> {
    let values = table.column(feature)?.numeric_values().ok_or_else(|| {
        Error::Schema(alloc::format!("feature {feature} is not numeric"))
    })?;
    let present: Vec<f64> = values
        .iter()
        .zip(condition)
        .filter_map(|(v, &keep)| if keep { *v } else { None })
        .collect();
    let edges = make_grids(&present, config.n_g, config.strategy, config.seed).map_err(|e| {
        match e {
            Error::DegenerateFeature { .. } => Error::DegenerateFeature { feature },
            other => other,
        }
    })?;
    let raw = grid_counts(feature, &edges, values, target.flags(), condition);
    Ok(merge_grids(&raw))
}

fn span_candidate(hist: &GridHistogram, span: GridSpan) -> Candidate {
    Candidate {
        rule: Rule::from_grid_span(hist.feature, &hist.edges, span.first, span.last),
        ratio: span.ratio,
        support: span.support,
        target_support: span.target,
        position: span.first,
    }
}

fn peak_spans(hist: &GridHistogram, s_min: u64) -> Result<Vec<GridSpan>> {
    let ratios = grid_ratios(hist)?;
    let mut spans: Vec<GridSpan> = Vec::new();
    for peak in find_peaks(&ratios, &Ratio::ONE) {
        if let Some(span) = gen_feature_interval(hist, peak, s_min) {
            if !spans.iter().any(|s| (s.first, s.last) == (span.first, span.last)) {
                spans.push(span);
            }
        }
    }
    Ok(spans)
}

/// Per-category counts `(target, total)` over condition rows.
fn category_counts(
    codes: &[Option<u32>],
    n_levels: usize,
    target: &[bool],
    condition: &[bool],
) -> (Vec<(u64, u64)>, u64, u64) {
    let mut counts = vec![(0u64, 0u64); n_levels];
    let (mut cond_target, mut cond_total) = (0, 0);
    for ((code, &t), &keep) in codes.iter().zip(target).zip(condition) {
        if !keep {
            continue;
        }
        cond_total += 1;
        cond_target += t as u64;
        if let Some(c) = code {
            counts[*c as usize].0 += t as u64;
            counts[*c as usize].1 += 1;
        }
    }
    (counts, cond_target, cond_total)
}

fn category_candidate(
    feature: usize,
    levels: &[alloc::string::String],
    code: usize,
    (t, n): (u64, u64),
    cond_target: u64,
    cond_total: u64,
    s_min: u64,
) -> Option<Candidate> {
    let ratio = Ratio::from_counts(t, n, cond_target, cond_total);
    (n >= s_min && ratio.exceeds_one()).then(|| Candidate {
        rule: Rule::category(feature, levels[code].clone()),
        ratio,
        support: n,
        target_support: t,
        position: code,
    })
}

fn top_k(mut cands: Vec<Candidate>, k: usize) -> Vec<Candidate> {
    cands.sort_by(rank);
    cands.truncate(k);
    cands
}

/// Up to `K` candidate rules for `feature` among the rows where `condition`
/// holds, every one with ratio above 1 and support at least `s_min`.
///
/// Numeric features: grids, counts, merge, peaks, interval growth from every
/// peak. Categorical features: one candidate per category.
pub fn get_candidate_rules(
    table: &DataTable,
    target: &TargetIndicator,
    feature: usize,
    condition: &[bool],
    config: &ExtractionConfig,
) -> Result<Vec<Candidate>> {
    let s_min = config.s_min as u64;
    let column = table.column(feature)?;
    match column.data() {
        ColumnData::Numeric(_) => {
            let hist = ratio_histogram(table, target, feature, condition, config)?;
            let cands = peak_spans(&hist, s_min)?
                .into_iter()
                .map(|s| span_candidate(&hist, s))
                .collect();
            Ok(top_k(cands, config.k))
        }
        ColumnData::Categorical { levels, codes } => {
            let (counts, ct, cn) = category_counts(codes, levels.len(), target.flags(), condition);
            if ct == 0 {
                return Err(Error::NoTarget);
            }
            let cands = counts
                .iter()
                .enumerate()
                .filter_map(|(code, &c)| category_candidate(feature, levels, code, c, ct, cn, s_min))
                .collect();
            Ok(top_k(cands, config.k))
        }
    }
}

/// Like [`get_candidate_rules`], but every candidate must contain `sample`'s
/// value. Peak-grown intervals that already contain it are kept; otherwise a
/// single interval is grown from the grid holding the sample (values outside
/// the grid range are clamped to the boundary grid). Categorical features
/// only consider the sample's own category.
pub fn get_local_candidate_rules(
    table: &DataTable,
    target: &TargetIndicator,
    feature: usize,
    condition: &[bool],
    sample: &Value,
    config: &ExtractionConfig,
) -> Result<Vec<Candidate>> {
    let s_min = config.s_min as u64;
    let column = table.column(feature)?;
    match (column.data(), sample) {
        (ColumnData::Numeric(_), Value::Number(v)) => {
            let hist = ratio_histogram(table, target, feature, condition, config)?;
            let home = grid_index(&hist.edges, *v);
            let mut spans: Vec<GridSpan> = peak_spans(&hist, s_min)?
                .into_iter()
                .filter(|s| s.contains(home))
                .collect();
            if spans.is_empty() {
                spans.extend(gen_feature_interval(&hist, home, s_min));
            }
            let cands = spans.into_iter().map(|s| span_candidate(&hist, s)).collect();
            Ok(top_k(cands, config.k))
        }
        (ColumnData::Categorical { levels, codes }, Value::Category(token)) => {
            let (counts, ct, cn) = category_counts(codes, levels.len(), target.flags(), condition);
            if ct == 0 {
                return Err(Error::NoTarget);
            }
            Ok(column
                .level_code(token)
                .and_then(|code| {
                    let code = code as usize;
                    category_candidate(feature, levels, code, counts[code], ct, cn, s_min)
                })
                .into_iter()
                .collect())
        }
        (_, Value::Missing) => Err(Error::Domain(alloc::format!(
            "sample has no value for feature {:?}",
            column.name()
        ))),
        _ => Err(Error::Schema(alloc::format!(
            "sample value kind does not match feature {:?}",
            column.name()
        ))),
    }
}
