use alloc::string::String;
use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Column layout problem: duplicate names, ragged columns, unknown feature,
    /// predicate kind not matching column kind.
    Schema(String),
    /// A cell could not be parsed. `row` is 1-based over data rows.
    Parse { row: usize, column: String },
    /// A value lies outside its admissible domain.
    Domain(String),
    /// Vector lengths disagree.
    Shape { expected: usize, found: usize },
    /// ROC thresholding needs both classes.
    DegenerateLabels,
    /// Every (baseline, test) pair had a degenerate output shift.
    EmptyMatrix,
    /// No feature qualifies at any importance threshold.
    NoFeature,
    /// Nothing left to choose from.
    EmptyResult,
    /// A numeric feature has fewer than two distinct values.
    DegenerateFeature { feature: usize },
    /// The target subgroup is empty.
    NoTarget,
    /// Rule metrics requested for a rule set no row satisfies.
    ZeroSupport,
    /// The configuration cannot be satisfied by the data (e.g. s_min > rows).
    InfeasibleConfig(String),
    /// A parameter violates its own precondition.
    InvalidConfig(String),
    /// Synthetic fixture description is inconsistent.
    Spec(String),
    /// Oracle tractability guard exceeded.
    TooLarge(String),
    /// Row index out of range.
    Range { index: usize, len: usize },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Schema(msg) => write!(f, "schema error: {msg}"),
            Error::Parse { row, column } => {
                write!(f, "parse error at row {row}, column {column:?}")
            }
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::Shape { expected, found } => {
                write!(f, "shape mismatch: expected length {expected}, found {found}")
            }
            Error::DegenerateLabels => f.write_str("labels contain a single class"),
            Error::EmptyMatrix => {
                f.write_str("importance matrix is empty: every pair had a degenerate shift")
            }
            Error::NoFeature => f.write_str("no feature qualifies at any importance threshold"),
            Error::EmptyResult => f.write_str("empty result"),
            Error::DegenerateFeature { feature } => {
                write!(f, "feature {feature} has fewer than two distinct values")
            }
            Error::NoTarget => f.write_str("target subgroup is empty"),
            Error::ZeroSupport => f.write_str("rule set has zero support"),
            Error::InfeasibleConfig(msg) => write!(f, "infeasible configuration: {msg}"),
            Error::InvalidConfig(msg) => write!(f, "invalid configuration: {msg}"),
            Error::Spec(msg) => write!(f, "invalid synthetic spec: {msg}"),
            Error::TooLarge(msg) => write!(f, "instance too large for the oracle: {msg}"),
            Error::Range { index, len } => {
                write!(f, "index {index} out of range for {len} rows")
            }
        }
    }
}

impl core::error::Error for Error {}
