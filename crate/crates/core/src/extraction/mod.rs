//! Rule search for a target subgroup.
//!
//! A rule set is grown one feature at a time. At each step every remaining
//! feature proposes candidate rules from its ratio histogram, computed over the
//! rows satisfying the rules chosen so far; the `K` best candidates across all
//! features each open a branch of the rule tree. Every root-to-node path is a
//! candidate rule set, and [`select_best`] picks the final one.

pub(crate) mod candidates;
mod interval;
mod tree;

use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::binning::BinningStrategy;
use crate::table::{ColumnData, DataTable};
use crate::{Error, Ratio, Result};

pub use candidates::{get_candidate_rules, get_local_candidate_rules, ratio_histogram, Candidate};
pub use interval::{find_peaks, gen_feature_interval, grid_ratios, GridSpan};
pub use tree::{extract_local, extract_rule_sets, path_histograms, RuleNode, RuleTree};

/// What a rule asks of its feature.
#[derive(Debug, Clone, PartialEq)]
pub enum Predicate {
    /// `lo <= x < hi`; a `None` side is unbounded.
    Interval { lo: Option<f64>, hi: Option<f64> },
    CategoryEquals(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Rule {
    pub feature: usize,
    pub predicate: Predicate,
}

impl Rule {
    pub fn interval(feature: usize, lo: Option<f64>, hi: Option<f64>) -> Self {
        Rule {
            feature,
            predicate: Predicate::Interval { lo, hi },
        }
    }

    pub fn category(feature: usize, token: impl Into<String>) -> Self {
        Rule {
            feature,
            predicate: Predicate::CategoryEquals(token.into()),
        }
    }

    /// Interval covering grids `first..=last` of `edges`. Spans touching the
    /// outer grids are left open on that side.
    pub fn from_grid_span(feature: usize, edges: &[f64], first: usize, last: usize) -> Self {
        let g = edges.len() - 1;
        let lo = (first > 0).then(|| edges[first]);
        let hi = (last + 1 < g).then(|| edges[last + 1]);
        Rule::interval(feature, lo, hi)
    }

    /// Binds the rule to its column. Fails when the feature does not exist or
    /// has the wrong kind.
    pub fn matcher<'a>(&self, table: &'a DataTable) -> Result<RowMatcher<'a>> {
        let column = table.column(self.feature)?;
        match (&self.predicate, column.data()) {
            (Predicate::Interval { lo, hi }, ColumnData::Numeric(values)) => {
                if let (Some(l), Some(h)) = (lo, hi) {
                    if l > h {
                        return Err(Error::Domain(alloc::format!(
                            "interval lower bound {l} exceeds upper bound {h}"
                        )));
                    }
                }
                Ok(RowMatcher::Interval {
                    values,
                    lo: *lo,
                    hi: *hi,
                })
            }
            (Predicate::CategoryEquals(token), ColumnData::Categorical { codes, .. }) => {
                Ok(RowMatcher::Category {
                    codes,
                    code: column.level_code(token),
                })
            }
            _ => Err(Error::Schema(alloc::format!(
                "rule kind does not match column {:?}",
                column.name()
            ))),
        }
    }

    fn canonical_cmp(&self, other: &Rule) -> Ordering {
        self.feature.cmp(&other.feature).then_with(|| {
            match (&self.predicate, &other.predicate) {
                (
                    Predicate::Interval { lo: a, hi: b },
                    Predicate::Interval { lo: c, hi: d },
                ) => bound_cmp(*a, *c).then(bound_cmp(*b, *d)),
                (Predicate::CategoryEquals(a), Predicate::CategoryEquals(b)) => a.cmp(b),
                (Predicate::Interval { .. }, _) => Ordering::Less,
                _ => Ordering::Greater,
            }
        })
    }
}

fn bound_cmp(a: Option<f64>, b: Option<f64>) -> Ordering {
    match (a, b) {
        (Some(x), Some(y)) => x.total_cmp(&y),
        (None, None) => Ordering::Equal,
        (None, _) => Ordering::Less,
        (_, None) => Ordering::Greater,
    }
}

pub enum RowMatcher<'a> {
    Interval {
        values: &'a [Option<f64>],
        lo: Option<f64>,
        hi: Option<f64>,
    },
    Category {
        codes: &'a [Option<u32>],
        code: Option<u32>,
    },
}

impl RowMatcher<'_> {
    /// Missing cells never match.
    pub fn matches(&self, row: usize) -> bool {
        match self {
            RowMatcher::Interval { values, lo, hi } => match values[row] {
                Some(v) => lo.is_none_or(|l| v >= l) && hi.is_none_or(|h| v < h),
                None => false,
            },
            RowMatcher::Category { codes, code } => code.is_some() && codes[row] == *code,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RuleStats {
    pub support: usize,
    /// Covered rows that are in the target subgroup.
    pub target_support: usize,
    pub target_count: usize,
    pub confidence: f64,
    pub fitness: f64,
    /// Ratio accepted at each extraction step, in extraction order.
    pub step_ratios: Vec<Ratio>,
}

impl RuleStats {
    pub fn from_counts(
        support: usize,
        target_support: usize,
        target_count: usize,
        step_ratios: Vec<Ratio>,
    ) -> Self {
        let false_hits = support - target_support;
        RuleStats {
            support,
            target_support,
            target_count,
            confidence: target_support as f64 / support as f64,
            fitness: (target_support as f64 - false_hits as f64) / target_count as f64,
            step_ratios,
        }
    }

    /// TP - FP, the numerator of fitness.
    pub fn fitness_numer(&self) -> i64 {
        2 * self.target_support as i64 - self.support as i64
    }
}

/// A conjunction of rules, at most one per feature, in extraction order.
#[derive(Debug, Clone, PartialEq)]
pub struct RuleSet {
    pub rules: Vec<Rule>,
    pub stats: RuleStats,
}

impl RuleSet {
    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    /// Rules sorted by feature, for order-insensitive comparison.
    pub fn canonical_rules(&self) -> Vec<Rule> {
        let mut rules = self.rules.clone();
        rules.sort_by(Rule::canonical_cmp);
        rules
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExtractionConfig {
    /// Minimum number of rows a rule set must cover.
    pub s_min: usize,
    /// Maximum number of rules in a set.
    pub l_max: usize,
    /// Initial number of grids per numeric feature.
    pub n_g: usize,
    /// Branching factor of the rule tree.
    pub k: usize,
    pub strategy: BinningStrategy,
    /// Confidence lower bound used by [`select_best`].
    pub iota: f64,
    pub seed: u64,
}

impl ExtractionConfig {
    pub fn new(s_min: usize) -> Self {
        ExtractionConfig {
            s_min,
            l_max: 2,
            n_g: 7,
            k: 3,
            strategy: BinningStrategy::Uniform,
            iota: 0.8,
            seed: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidConfig(msg.into()));
        if self.s_min < 1 {
            return bad("s_min must be >= 1");
        }
        if self.l_max < 1 {
            return bad("l_max must be >= 1");
        }
        if self.k < 1 {
            return bad("K must be >= 1");
        }
        if self.n_g < 2 {
            return bad("n_g must be >= 2");
        }
        if !(0.0..=1.0).contains(&self.iota) {
            return bad("iota must lie in [0, 1]");
        }
        Ok(())
    }
}

/// Order used to pick the best rule set: higher fitness, then higher
/// confidence, fewer rules, larger support. `Less` means `a` is better.
pub(crate) fn preference(a: &RuleSet, b: &RuleSet) -> Ordering {
    let conf = |s: &RuleStats, o: &RuleStats| {
        (s.target_support as u128 * o.support as u128)
            .cmp(&(o.target_support as u128 * s.support as u128))
    };
    // fitness numerators share the denominator |target|
    b.stats
        .fitness_numer()
        .cmp(&a.stats.fitness_numer())
        .then_with(|| conf(&b.stats, &a.stats))
        .then(a.rules.len().cmp(&b.rules.len()))
        .then(b.stats.support.cmp(&a.stats.support))
}

/// Highest-fitness rule set among those with confidence at least `iota`; if
/// none reaches the bound, the highest-fitness one overall.
pub fn select_best(rule_sets: &[RuleSet], iota: f64) -> Result<&RuleSet> {
    most_preferred(rule_sets.iter().filter(|rs| rs.stats.confidence >= iota))
        .or_else(|| most_preferred(rule_sets.iter()))
        .ok_or(Error::EmptyResult)
}

fn most_preferred<'a>(pool: impl Iterator<Item = &'a RuleSet>) -> Option<&'a RuleSet> {
    let mut best: Option<&RuleSet> = None;
    for rs in pool {
        if best.is_none_or(|b| preference(rs, b) == Ordering::Less) {
            best = Some(rs);
        }
    }
    best
}
