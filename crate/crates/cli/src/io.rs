//! CSV tables, importance matrices and output files.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use subrule_core::attribution::ImportanceMatrix;
use subrule_core::table::{ColumnKind, DataTable, FeatureColumn, Value};
use subrule_core::Error as CoreError;

use crate::error::{CliError, Result};

/// Declared kind per column name, with an optional fallback for undeclared
/// columns.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Schema {
    kinds: BTreeMap<String, ColumnKind>,
    default: Option<ColumnKind>,
}

impl Schema {
    /// Every column must be declared.
    pub fn strict() -> Self {
        Schema::default()
    }

    /// Undeclared columns are numeric.
    pub fn numeric_by_default() -> Self {
        Schema {
            kinds: BTreeMap::new(),
            default: Some(ColumnKind::Numeric),
        }
    }

    pub fn with(mut self, name: impl Into<String>, kind: ColumnKind) -> Self {
        self.kinds.insert(name.into(), kind);
        self
    }

    pub fn kind_of(&self, name: &str) -> Option<ColumnKind> {
        self.kinds.get(name).copied().or(self.default)
    }
}

fn open(path: &Path) -> Result<File> {
    File::open(path).map_err(|e| CliError::io(path, e))
}

fn csv_error(path: &Path, source: csv::Error) -> CliError {
    CliError::Csv {
        path: path.to_path_buf(),
        source,
    }
}

pub fn load_csv(path: &Path, schema: &Schema, missing_token: &str) -> Result<DataTable> {
    read_csv(open(path)?, path, schema, missing_token)
}

/// Parses a headed CSV into a table. Cells equal to `missing_token` become
/// missing values. `path` is used for error messages only.
pub fn read_csv(reader: impl Read, path: &Path, schema: &Schema, missing_token: &str) -> Result<DataTable> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(reader);
    let header: Vec<String> = rdr
        .headers()
        .map_err(|e| csv_error(path, e))?
        .iter()
        .map(str::to_owned)
        .collect();
    let mut kinds = Vec::with_capacity(header.len());
    for name in &header {
        let kind = schema
            .kind_of(name)
            .ok_or_else(|| CoreError::Schema(format!("no declared kind for column {name:?}")))?;
        kinds.push(kind);
    }

    let mut cells: Vec<Vec<Option<String>>> = vec![Vec::new(); header.len()];
    for record in rdr.records() {
        let record = record.map_err(|e| csv_error(path, e))?;
        for (col, cell) in cells.iter_mut().zip(record.iter()) {
            col.push((cell != missing_token).then(|| cell.to_owned()));
        }
    }

    let mut columns = Vec::with_capacity(header.len());
    for ((name, kind), col) in header.iter().zip(kinds).zip(cells) {
        columns.push(match kind {
            ColumnKind::Numeric => {
                let mut values = Vec::with_capacity(col.len());
                for (row, cell) in col.iter().enumerate() {
                    values.push(match cell {
                        None => None,
                        Some(s) => Some(s.trim().parse::<f64>().map_err(|_| CoreError::Parse {
                            row: row + 1,
                            column: name.clone(),
                        })?),
                    });
                }
                FeatureColumn::numeric(name.clone(), values)?
            }
            ColumnKind::Categorical => FeatureColumn::categorical(name.clone(), col),
        });
    }
    Ok(DataTable::new(columns)?)
}

/// Reads a score matrix. A first line that is not entirely numeric is taken
/// as the header; otherwise columns are named `f0, f1, ...`.
pub fn load_importance_csv(path: &Path) -> Result<ImportanceMatrix> {
    read_importance_csv(open(path)?, path)
}

pub fn read_importance_csv(reader: impl Read, path: &Path) -> Result<ImportanceMatrix> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_reader(reader);
    let mut names: Option<Vec<String>> = None;
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (line, record) in rdr.records().enumerate() {
        let record = record.map_err(|e| csv_error(path, e))?;
        let parsed: Vec<Option<f64>> = record.iter().map(|c| c.trim().parse().ok()).collect();
        if line == 0 && parsed.iter().any(Option::is_none) {
            names = Some(record.iter().map(|c| c.trim().to_owned()).collect());
            continue;
        }
        let width = names.as_ref().map_or_else(|| rows.first().map_or(parsed.len(), Vec::len), Vec::len);
        let row_no = rows.len() + 1;
        let column_name = |c: usize| {
            names
                .as_ref()
                .and_then(|n| n.get(c).cloned())
                .unwrap_or_else(|| format!("f{c}"))
        };
        if parsed.len() != width {
            return Err(CoreError::Parse {
                row: row_no,
                column: column_name(parsed.len().min(width)),
            }
            .into());
        }
        let mut row = Vec::with_capacity(width);
        for (c, v) in parsed.into_iter().enumerate() {
            row.push(v.ok_or_else(|| CoreError::Parse {
                row: row_no,
                column: column_name(c),
            })?);
        }
        rows.push(row);
    }
    let width = names.as_ref().map_or_else(|| rows.first().map_or(0, Vec::len), Vec::len);
    let names = names.unwrap_or_else(|| (0..width).map(|i| format!("f{i}")).collect());
    Ok(ImportanceMatrix::from_rows(names, rows)?)
}

fn cell(value: &Value) -> String {
    match value {
        Value::Number(v) => v.to_string(),
        Value::Category(s) => s.clone(),
        Value::Missing => String::new(),
    }
}

/// Writes a table with optional extra columns appended on the right.
/// Numbers use the shortest representation that reads back exactly.
pub fn write_csv(path: &Path, table: &DataTable, extra: &[(&str, Vec<String>)]) -> Result<()> {
    let file = File::create(path).map_err(|e| CliError::io(path, e))?;
    let mut wtr = csv::Writer::from_writer(file);
    let mut header: Vec<&str> = table.feature_names();
    header.extend(extra.iter().map(|(name, _)| *name));
    wtr.write_record(&header).map_err(|e| csv_error(path, e))?;
    for r in 0..table.n_rows() {
        let mut record: Vec<String> = table.row(r)?.iter().map(cell).collect();
        record.extend(extra.iter().map(|(_, col)| col[r].clone()));
        wtr.write_record(&record).map_err(|e| csv_error(path, e))?;
    }
    wtr.flush().map_err(|e| CliError::io(path, e))
}

/// Writes `text` to `path`, or to stdout when no path is given.
pub fn write_output(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::io(p, e)),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| CliError::io("<stdout>", e))
        }
    }
}

pub fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    serde_json::from_reader(std::io::BufReader::new(open(path)?)).map_err(|source| CliError::Json {
        path: path.to_path_buf(),
        source,
    })
}
