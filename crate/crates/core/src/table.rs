//! Column-typed tabular data and the binary target indicator.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ColumnKind {
    Numeric,
    Categorical,
}

/// Cell storage for one column. Categorical cells are codes into `levels`,
/// which is kept sorted so codes do not depend on row order.
#[derive(Debug, Clone, PartialEq)]
pub enum ColumnData {
    Numeric(Vec<Option<f64>>),
    Categorical {
        levels: Vec<String>,
        codes: Vec<Option<u32>>,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct FeatureColumn {
    name: String,
    data: ColumnData,
}

impl FeatureColumn {
    /// Numeric column; `None` marks a missing cell. Non-finite numbers are rejected.
    pub fn numeric(name: impl Into<String>, values: Vec<Option<f64>>) -> Result<Self> {
        let name = name.into();
        if let Some(row) = values
            .iter()
            .position(|v| matches!(v, Some(x) if !x.is_finite()))
        {
            return Err(Error::Parse {
                row: row + 1,
                column: name,
            });
        }
        Ok(FeatureColumn {
            name,
            data: ColumnData::Numeric(values),
        })
    }

    pub fn categorical<I, S>(name: impl Into<String>, tokens: I) -> Self
    where
        I: IntoIterator<Item = Option<S>>,
        S: AsRef<str>,
    {
        let raw: Vec<Option<String>> = tokens
            .into_iter()
            .map(|t| t.map(|s| s.as_ref().to_string()))
            .collect();
        let mut index: BTreeMap<&str, u32> = BTreeMap::new();
        for token in raw.iter().flatten() {
            index.insert(token.as_str(), 0);
        }
        for (code, slot) in index.values_mut().enumerate() {
            *slot = code as u32;
        }
        let codes = raw
            .iter()
            .map(|t| t.as_deref().map(|s| index[s]))
            .collect();
        let levels = index.keys().map(|s| s.to_string()).collect();
        FeatureColumn {
            name: name.into(),
            data: ColumnData::Categorical { levels, codes },
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn kind(&self) -> ColumnKind {
        match self.data {
            ColumnData::Numeric(_) => ColumnKind::Numeric,
            ColumnData::Categorical { .. } => ColumnKind::Categorical,
        }
    }

    pub fn data(&self) -> &ColumnData {
        &self.data
    }

    pub fn len(&self) -> usize {
        match &self.data {
            ColumnData::Numeric(v) => v.len(),
            ColumnData::Categorical { codes, .. } => codes.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn numeric_values(&self) -> Option<&[Option<f64>]> {
        match &self.data {
            ColumnData::Numeric(v) => Some(v),
            ColumnData::Categorical { .. } => None,
        }
    }

    pub fn levels(&self) -> Option<&[String]> {
        match &self.data {
            ColumnData::Categorical { levels, .. } => Some(levels),
            ColumnData::Numeric(_) => None,
        }
    }

    pub fn codes(&self) -> Option<&[Option<u32>]> {
        match &self.data {
            ColumnData::Categorical { codes, .. } => Some(codes),
            ColumnData::Numeric(_) => None,
        }
    }

    pub fn level_code(&self, token: &str) -> Option<u32> {
        self.levels()?
            .binary_search_by(|l| l.as_str().cmp(token))
            .ok()
            .map(|i| i as u32)
    }

    pub fn value(&self, row: usize) -> Value {
        match &self.data {
            ColumnData::Numeric(v) => match v[row] {
                Some(x) => Value::Number(x),
                None => Value::Missing,
            },
            ColumnData::Categorical { levels, codes } => match codes[row] {
                Some(c) => Value::Category(levels[c as usize].clone()),
                None => Value::Missing,
            },
        }
    }
}

/// A single cell, detached from its column.
#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Number(f64),
    Category(String),
    Missing,
}

/// Immutable, column-major table. All columns share one row count and names
/// are unique.
#[derive(Debug, Clone, PartialEq)]
pub struct DataTable {
    columns: Vec<FeatureColumn>,
    n_rows: usize,
}

impl DataTable {
    pub fn new(columns: Vec<FeatureColumn>) -> Result<Self> {
        let n_rows = columns.first().map_or(0, FeatureColumn::len);
        let mut seen = BTreeMap::new();
        for col in &columns {
            if col.len() != n_rows {
                return Err(Error::Schema(format!(
                    "column {:?} has {} rows, expected {}",
                    col.name,
                    col.len(),
                    n_rows
                )));
            }
            if seen.insert(col.name.as_str(), ()).is_some() {
                return Err(Error::Schema(format!("duplicate column name {:?}", col.name)));
            }
        }
        Ok(DataTable { columns, n_rows })
    }

    /// Empty table with the given named columns, used for header-only inputs.
    pub fn empty(names: &[(&str, ColumnKind)]) -> Result<Self> {
        let columns = names
            .iter()
            .map(|(name, kind)| match kind {
                ColumnKind::Numeric => FeatureColumn::numeric(*name, Vec::new()),
                ColumnKind::Categorical => {
                    Ok(FeatureColumn::categorical(*name, Vec::<Option<&str>>::new()))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        DataTable::new(columns)
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_features(&self) -> usize {
        self.columns.len()
    }

    pub fn columns(&self) -> &[FeatureColumn] {
        &self.columns
    }

    pub fn column(&self, feature: usize) -> Result<&FeatureColumn> {
        self.columns
            .get(feature)
            .ok_or_else(|| Error::Schema(format!("unknown feature index {feature}")))
    }

    pub fn feature_names(&self) -> Vec<&str> {
        self.columns.iter().map(|c| c.name.as_str()).collect()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c.name == name)
    }

    pub fn row(&self, row: usize) -> Result<Vec<Value>> {
        if row >= self.n_rows {
            return Err(Error::Range {
                index: row,
                len: self.n_rows,
            });
        }
        Ok(self.columns.iter().map(|c| c.value(row)).collect())
    }

    /// Indices of the numeric columns, in table order.
    pub fn numeric_features(&self) -> Vec<usize> {
        self.columns
            .iter()
            .enumerate()
            .filter(|(_, c)| c.kind() == ColumnKind::Numeric)
            .map(|(i, _)| i)
            .collect()
    }
}

/// Row-aligned membership flags for the target subgroup.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TargetIndicator {
    flags: Vec<bool>,
    label: String,
}

impl TargetIndicator {
    pub fn new(flags: Vec<bool>, label: impl Into<String>) -> Self {
        TargetIndicator {
            flags,
            label: label.into(),
        }
    }

    pub fn flags(&self) -> &[bool] {
        &self.flags
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn len(&self) -> usize {
        self.flags.len()
    }

    pub fn is_empty(&self) -> bool {
        self.flags.is_empty()
    }

    pub fn count(&self) -> usize {
        self.flags.iter().filter(|&&f| f).count()
    }

    pub fn check_aligned(&self, table: &DataTable) -> Result<()> {
        if self.flags.len() != table.n_rows() {
            return Err(Error::Shape {
                expected: table.n_rows(),
                found: self.flags.len(),
            });
        }
        Ok(())
    }
}

/// Predicted-positive flags: `probabilities[n] > threshold`.
pub fn make_target(probabilities: &[f64], threshold: f64) -> Result<TargetIndicator> {
    if !threshold.is_finite() {
        return Err(Error::Domain(format!("threshold {threshold} is not finite")));
    }
    let mut flags = Vec::with_capacity(probabilities.len());
    for (i, &p) in probabilities.iter().enumerate() {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::Domain(format!(
                "probability {p} at row {} is outside [0, 1]",
                i + 1
            )));
        }
        flags.push(p > threshold);
    }
    Ok(TargetIndicator::new(flags, "1"))
}

/// Threshold maximising TPR - FPR over the midpoints of consecutive distinct
/// probabilities plus one candidate below the minimum. Ties go to the smallest
/// threshold.
pub fn roc_threshold(probabilities: &[f64], labels: &[bool]) -> Result<f64> {
    if probabilities.len() != labels.len() {
        return Err(Error::Shape {
            expected: probabilities.len(),
            found: labels.len(),
        });
    }
    if probabilities.iter().any(|p| !p.is_finite()) {
        return Err(Error::Domain("non-finite probability".into()));
    }
    let positives = labels.iter().filter(|&&l| l).count() as i128;
    let negatives = labels.len() as i128 - positives;
    if positives == 0 || negatives == 0 {
        return Err(Error::DegenerateLabels);
    }

    let mut order: Vec<usize> = (0..probabilities.len()).collect();
    order.sort_by(|&a, &b| probabilities[a].total_cmp(&probabilities[b]));

    // Sweep thresholds upwards: everything strictly above the threshold is
    // predicted positive. Start below the minimum with all rows positive.
    let min = probabilities[order[0]];
    let mut best_threshold = if min > 0.0 { 0.0 } else { min - 1.0 };
    let (mut tp, mut fp) = (positives, negatives);
    // TPR - FPR compared exactly as tp * N - fp * P.
    let mut best_score = tp * negatives - fp * positives;

    let mut i = 0;
    while i < order.len() {
        let value = probabilities[order[i]];
        while i < order.len() && probabilities[order[i]] == value {
            if labels[order[i]] {
                tp -= 1;
            } else {
                fp -= 1;
            }
            i += 1;
        }
        if i == order.len() {
            break;
        }
        let candidate = value + (probabilities[order[i]] - value) / 2.0;
        let score = tp * negatives - fp * positives;
        if score > best_score {
            best_score = score;
            best_threshold = candidate;
        }
    }
    Ok(best_threshold)
}
