//! Integrated-gradient importances and frequently-important feature sets.
//!
//! Each (baseline, test) pair of samples yields one row of normalised
//! importances: the integrated gradient of every feature along the straight
//! path between the two samples, divided by the total output shift. Rows are
//! then thresholded into feature-index transactions and mined with FP-Growth.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::itemsets::{fp_growth, pick_feature_set, FrequentItemset};
use crate::table::{DataTable, TargetIndicator};
use crate::{Error, Result};

pub const DEFAULT_STEPS: usize = 50;
pub const DEFAULT_EPS: f64 = 1e-9;
pub const DEFAULT_GAMMA: f64 = 0.99;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScorerKind {
    Linear,
    Logistic,
}

/// `w . x + b`, optionally squashed through the logistic function.
#[derive(Debug, Clone, PartialEq)]
pub struct DifferentiableScorer {
    pub kind: ScorerKind,
    pub weights: Vec<f64>,
    pub bias: f64,
}

fn sigmoid(z: f64) -> f64 {
    1.0 / (1.0 + libm::exp(-z))
}

impl DifferentiableScorer {
    pub fn new(kind: ScorerKind, weights: Vec<f64>, bias: f64) -> Self {
        DifferentiableScorer { kind, weights, bias }
    }

    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    fn check(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.weights.len() {
            return Err(Error::Shape {
                expected: self.weights.len(),
                found: x.len(),
            });
        }
        Ok(())
    }

    fn logit(&self, x: &[f64]) -> f64 {
        self.weights.iter().zip(x).map(|(w, v)| w * v).sum::<f64>() + self.bias
    }

    pub fn score(&self, x: &[f64]) -> Result<f64> {
        self.check(x)?;
        let z = self.logit(x);
        Ok(match self.kind {
            ScorerKind::Linear => z,
            ScorerKind::Logistic => sigmoid(z),
        })
    }

    /// d score / d z at `x`; the gradient is this times the weights.
    fn slope(&self, x: &[f64]) -> f64 {
        match self.kind {
            ScorerKind::Linear => 1.0,
            ScorerKind::Logistic => {
                let s = sigmoid(self.logit(x));
                s * (1.0 - s)
            }
        }
    }
}

/// Integrated gradient of every feature for the shift from `test` to
/// `baseline`. Linear scorers use the closed form `w_i (x_i - x~_i)`; others
/// a midpoint Riemann sum with `steps` points along the straight path.
pub fn integrated_gradient(
    scorer: &DifferentiableScorer,
    baseline: &[f64],
    test: &[f64],
    steps: usize,
) -> Result<Vec<f64>> {
    scorer.check(baseline)?;
    scorer.check(test)?;
    if steps == 0 {
        return Err(Error::InvalidConfig("integration steps must be >= 1".into()));
    }
    let delta: Vec<f64> = baseline.iter().zip(test).map(|(x, t)| x - t).collect();
    let mean_slope = match scorer.kind {
        ScorerKind::Linear => 1.0,
        ScorerKind::Logistic => {
            let mut point = vec![0.0; delta.len()];
            let mut acc = 0.0;
            for k in 0..steps {
                let lambda = (k as f64 + 0.5) / steps as f64;
                for ((p, t), d) in point.iter_mut().zip(test).zip(&delta) {
                    *p = t + lambda * d;
                }
                acc += scorer.slope(&point);
            }
            acc / steps as f64
        }
    };
    Ok(delta
        .iter()
        .zip(&scorer.weights)
        .map(|(d, w)| d * w * mean_slope)
        .collect())
}

/// Normalised importances `|j_i / (y - y~)|`, or `None` when the output shift
/// is below `eps` and the pair should be skipped.
pub fn importance_scores(j: &[f64], y: f64, y_tilde: f64, eps: f64) -> Option<Vec<f64>> {
    let shift = y - y_tilde;
    if shift.abs() < eps {
        return None;
    }
    Some(j.iter().map(|v| (v / shift).abs()).collect())
}

/// Rows of non-negative feature importances.
#[derive(Debug, Clone, PartialEq)]
pub struct ImportanceMatrix {
    feature_names: Vec<String>,
    scores: Vec<f64>,
    /// (baseline, test) indices when the row came from a pair.
    pairs: Vec<Option<(usize, usize)>>,
}

impl ImportanceMatrix {
    pub fn from_rows(feature_names: Vec<String>, rows: Vec<Vec<f64>>) -> Result<Self> {
        let d = feature_names.len();
        let mut scores = Vec::with_capacity(rows.len() * d);
        for (r, row) in rows.iter().enumerate() {
            if row.len() != d {
                return Err(Error::Shape {
                    expected: d,
                    found: row.len(),
                });
            }
            for (c, &v) in row.iter().enumerate() {
                if !v.is_finite() || v < 0.0 {
                    return Err(Error::Domain(format!(
                        "importance score {v} at row {}, column {:?} is not a non-negative number",
                        r + 1,
                        feature_names[c]
                    )));
                }
            }
            scores.extend_from_slice(row);
        }
        let pairs = vec![None; rows.len()];
        Ok(ImportanceMatrix {
            feature_names,
            scores,
            pairs,
        })
    }

    pub fn with_feature_names(mut self, names: Vec<String>) -> Result<Self> {
        if names.len() != self.feature_names.len() {
            return Err(Error::Shape {
                expected: self.feature_names.len(),
                found: names.len(),
            });
        }
        self.feature_names = names;
        Ok(self)
    }

    pub fn n_rows(&self) -> usize {
        self.pairs.len()
    }

    pub fn n_cols(&self) -> usize {
        self.feature_names.len()
    }

    pub fn feature_names(&self) -> &[String] {
        &self.feature_names
    }

    pub fn row(&self, r: usize) -> &[f64] {
        let d = self.n_cols();
        &self.scores[r * d..(r + 1) * d]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        (0..self.n_rows()).map(move |r| self.row(r))
    }

    pub fn pair(&self, r: usize) -> Option<(usize, usize)> {
        self.pairs[r]
    }
}

/// One row per (baseline, test) pair whose output shift is at least `eps`,
/// in baseline-major order. Columns are named `f0, f1, ...`.
pub fn build_importance_matrix(
    scorer: &DifferentiableScorer,
    baselines: &[Vec<f64>],
    tests: &[Vec<f64>],
    steps: usize,
    eps: f64,
) -> Result<ImportanceMatrix> {
    if baselines.is_empty() || tests.is_empty() {
        return Err(Error::InvalidConfig(
            "need at least one baseline and one test sample".into(),
        ));
    }
    if eps.is_nan() || eps <= 0.0 {
        return Err(Error::InvalidConfig(format!("eps = {eps}, expected > 0")));
    }
    let d = scorer.dim();
    let mut scores = Vec::new();
    let mut pairs = Vec::new();
    for (b, baseline) in baselines.iter().enumerate() {
        let y = scorer.score(baseline)?;
        for (m, test) in tests.iter().enumerate() {
            let y_tilde = scorer.score(test)?;
            let j = integrated_gradient(scorer, baseline, test, steps)?;
            if let Some(row) = importance_scores(&j, y, y_tilde, eps) {
                scores.extend(row);
                pairs.push(Some((b, m)));
            }
        }
    }
    if pairs.is_empty() {
        return Err(Error::EmptyMatrix);
    }
    Ok(ImportanceMatrix {
        feature_names: (0..d).map(|i| format!("f{i}")).collect(),
        scores,
        pairs,
    })
}

fn min_rows(gamma: f64, rows: usize) -> Result<usize> {
    if !(gamma > 0.0 && gamma <= 1.0) {
        return Err(Error::InvalidConfig(format!("gamma = {gamma}, expected (0, 1]")));
    }
    let need = libm::ceil(gamma * rows as f64 - 1e-9) as usize;
    if need < 1 {
        return Err(Error::InvalidConfig(format!(
            "gamma * rows = {} is below one row",
            gamma * rows as f64
        )));
    }
    Ok(need)
}

/// Number of features whose score reaches `threshold` in at least `need` rows.
pub fn qualifying_features(matrix: &ImportanceMatrix, threshold: f64, need: usize) -> usize {
    (0..matrix.n_cols())
        .filter(|&f| matrix.rows().filter(|row| row[f] >= threshold).count() >= need)
        .count()
}

/// Smallest positive score level at which exactly one feature reaches it in
/// at least `ceil(gamma * rows)` rows. If the count drops from two or more
/// straight to zero, the last level that still kept two or more is returned.
pub fn scan_threshold(matrix: &ImportanceMatrix, gamma: f64) -> Result<f64> {
    if matrix.n_rows() == 0 {
        return Err(Error::EmptyMatrix);
    }
    let need = min_rows(gamma, matrix.n_rows())?;
    let mut levels: Vec<f64> = matrix.scores.iter().copied().filter(|&v| v > 0.0).collect();
    levels.sort_by(f64::total_cmp);
    levels.dedup();

    let mut last_multi = None;
    for t in levels {
        match qualifying_features(matrix, t, need) {
            0 => break,
            1 => return Ok(t),
            _ => last_multi = Some(t),
        }
    }
    last_multi.ok_or(Error::NoFeature)
}

/// Per row, the features scoring at least `threshold`; empty rows are dropped.
pub fn to_feature_sequences(matrix: &ImportanceMatrix, threshold: f64) -> Vec<Vec<usize>> {
    matrix
        .rows()
        .map(|row| {
            row.iter()
                .enumerate()
                .filter(|(_, &v)| v >= threshold)
                .map(|(i, _)| i)
                .collect::<Vec<_>>()
        })
        .filter(|s| !s.is_empty())
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct FeatureSelection {
    pub features: Vec<usize>,
    pub threshold: f64,
    pub itemsets: Vec<FrequentItemset>,
}

/// Threshold scan, transaction building, FP-Growth and final set choice.
pub fn select_frequent_features(
    matrix: &ImportanceMatrix,
    gamma: f64,
    c_min: usize,
    k_max: usize,
) -> Result<FeatureSelection> {
    if c_min < 1 || k_max < 1 {
        return Err(Error::InvalidConfig("c_min and k_max must be >= 1".into()));
    }
    let threshold = scan_threshold(matrix, gamma)?;
    let transactions = to_feature_sequences(matrix, threshold);
    let itemsets = fp_growth(&transactions, c_min, k_max);
    let features = pick_feature_set(&itemsets)?;
    Ok(FeatureSelection {
        features,
        threshold,
        itemsets,
    })
}

/// Complete numeric rows of `features`; rows with a missing value are left out.
/// Returns the kept row indices alongside the vectors.
pub fn numeric_rows(table: &DataTable, features: &[usize]) -> Result<(Vec<usize>, Vec<Vec<f64>>)> {
    let cols = features
        .iter()
        .map(|&f| {
            table.column(f)?.numeric_values().ok_or_else(|| {
                Error::Schema(format!("feature {f} is not numeric"))
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut index = Vec::new();
    let mut rows = Vec::new();
    'rows: for r in 0..table.n_rows() {
        let mut row = Vec::with_capacity(cols.len());
        for col in &cols {
            match col[r] {
                Some(v) => row.push(v),
                None => continue 'rows,
            }
        }
        index.push(r);
        rows.push(row);
    }
    Ok((index, rows))
}

/// Feature centroids of the target and non-target rows (the classes that are
/// present), used as baselines.
pub fn class_centroids(
    table: &DataTable,
    target: &TargetIndicator,
    features: &[usize],
) -> Result<Vec<Vec<f64>>> {
    target.check_aligned(table)?;
    let (index, rows) = numeric_rows(table, features)?;
    let mut out = Vec::new();
    for class in [true, false] {
        let members: Vec<&Vec<f64>> = index
            .iter()
            .zip(&rows)
            .filter(|(&r, _)| target.flags()[r] == class)
            .map(|(_, row)| row)
            .collect();
        if members.is_empty() {
            continue;
        }
        let mut centre = vec![0.0; features.len()];
        for row in &members {
            for (c, v) in centre.iter_mut().zip(row.iter()) {
                *c += v;
            }
        }
        for c in &mut centre {
            *c /= members.len() as f64;
        }
        out.push(centre);
    }
    Ok(out)
}

/// Seeded class-balanced test rows: `m / classes` from each class present
/// (fewer when a class is smaller), drawn without replacement.
pub fn balanced_test_rows(
    table: &DataTable,
    target: &TargetIndicator,
    features: &[usize],
    m: usize,
    seed: u64,
) -> Result<Vec<Vec<f64>>> {
    target.check_aligned(table)?;
    let (index, rows) = numeric_rows(table, features)?;
    let groups: Vec<Vec<usize>> = [true, false]
        .iter()
        .map(|&class| {
            (0..index.len())
                .filter(|&k| target.flags()[index[k]] == class)
                .collect::<Vec<_>>()
        })
        .filter(|g| !g.is_empty())
        .collect();
    if groups.is_empty() {
        return Err(Error::EmptyResult);
    }
    let per_class = (m / groups.len()).max(1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for group in &groups {
        let take = per_class.min(group.len());
        let mut picked: Vec<usize> = sample(&mut rng, group.len(), take)
            .into_iter()
            .map(|i| group[i])
            .collect();
        picked.sort_unstable();
        out.extend(picked.into_iter().map(|k| rows[k].clone()));
    }
    Ok(out)
}
