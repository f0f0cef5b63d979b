//! Planted-rectangle datasets and an exhaustive grid-aligned rule search.
//!
//! The generator uses ChaCha8 seeded from a `u64`, so a planted layout and seed always
//! produce the same table.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::binning::make_grids;
use crate::extraction::{preference, ExtractionConfig, Rule, RuleSet, RuleStats};
use crate::table::{ColumnData, DataTable, FeatureColumn, TargetIndicator};
use crate::{Error, Ratio, Result};

pub const MAX_FEATURES: usize = 3;
pub const MAX_GRIDS: usize = 8;
pub const MAX_RULES: usize = 2;

/// Axis-aligned box `[lo, hi)` per feature with its own label rate.
#[derive(Debug, Clone, PartialEq)]
pub struct PlantedMode {
    pub bounds: Vec<(f64, f64)>,
    /// Probability that a row inside the box is a target row.
    pub purity: f64,
    /// Fraction of all rows drawn inside the box.
    pub weight: f64,
}

impl PlantedMode {
    pub fn contains(&self, x: &[f64]) -> bool {
        self.bounds.iter().zip(x).all(|(&(lo, hi), &v)| lo <= v && v < hi)
    }

    fn overlaps(&self, other: &PlantedMode) -> bool {
        self.bounds
            .iter()
            .zip(&other.bounds)
            .all(|(a, b)| a.0 < b.1 && b.0 < a.1)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlantedSpec {
    pub n_rows: usize,
    /// `[lo, hi)` range of each feature; its length sets the feature count.
    pub domain: Vec<(f64, f64)>,
    pub modes: Vec<PlantedMode>,
    /// Label rate for rows outside every box.
    pub background_rate: f64,
    pub seed: u64,
}

impl PlantedSpec {
    /// Two disjoint boxes on `[0, 10)^2`: A = `[2,4)^2` holding 20% of 2,000
    /// rows and B = `[6,8)^2` holding 12%, both pure, with a 5% background
    /// rate. Both boxes line up with a five-grid uniform partition.
    pub fn two_mode(seed: u64) -> Self {
        PlantedSpec {
            n_rows: 2000,
            domain: vec![(0.0, 10.0), (0.0, 10.0)],
            modes: vec![
                PlantedMode {
                    bounds: vec![(2.0, 4.0), (2.0, 4.0)],
                    purity: 1.0,
                    weight: 0.2,
                },
                PlantedMode {
                    bounds: vec![(6.0, 8.0), (6.0, 8.0)],
                    purity: 1.0,
                    weight: 0.12,
                },
            ],
            background_rate: 0.05,
            seed,
        }
    }

    pub fn n_features(&self) -> usize {
        self.domain.len()
    }

    /// Rows drawn inside mode `m`.
    pub fn mode_rows(&self, m: usize) -> usize {
        libm::floor(self.modes[m].weight * self.n_rows as f64) as usize
    }

    pub fn validate(&self) -> Result<()> {
        let d = self.n_features();
        if d == 0 || d > MAX_FEATURES {
            return Err(Error::Spec(format!("{d} features, expected 1 to {MAX_FEATURES}")));
        }
        if self.n_rows == 0 {
            return Err(Error::Spec("n_rows must be positive".into()));
        }
        let unit = |p: f64| (0.0..=1.0).contains(&p);
        if !unit(self.background_rate) {
            return Err(Error::Spec(format!("background rate {} outside [0, 1]", self.background_rate)));
        }
        for (j, &(lo, hi)) in self.domain.iter().enumerate() {
            if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                return Err(Error::Spec(format!("feature {j} has an empty domain")));
            }
        }
        let mut total_weight = 0.0;
        for (m, mode) in self.modes.iter().enumerate() {
            if mode.bounds.len() != d {
                return Err(Error::Spec(format!("mode {m} has {} bounds for {d} features", mode.bounds.len())));
            }
            if !unit(mode.purity) || !unit(mode.weight) {
                return Err(Error::Spec(format!("mode {m}: purity and weight must lie in [0, 1]")));
            }
            for (&(lo, hi), &(dlo, dhi)) in mode.bounds.iter().zip(&self.domain) {
                if !(dlo <= lo && lo < hi && hi <= dhi) {
                    return Err(Error::Spec(format!("mode {m} box leaves the feature domain")));
                }
            }
            total_weight += mode.weight;
        }
        if total_weight > 1.0 {
            return Err(Error::Spec("mode weights sum above 1".into()));
        }
        for a in 0..self.modes.len() {
            for b in a + 1..self.modes.len() {
                if self.modes[a].overlaps(&self.modes[b]) {
                    return Err(Error::Spec(format!("modes {a} and {b} overlap")));
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticData {
    /// Numeric columns `x1`, `x2`, ...
    pub table: DataTable,
    pub target: TargetIndicator,
    pub modes: Vec<PlantedMode>,
    /// Mode each row was drawn from, `None` for background rows.
    pub mode_of_row: Vec<Option<usize>>,
}

const MAX_REJECTIONS: usize = 10_000;

pub fn gen_synthetic(spec: &PlantedSpec) -> Result<SyntheticData> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let d = spec.n_features();
    let mut rows: Vec<(Vec<f64>, bool, Option<usize>)> = Vec::with_capacity(spec.n_rows);

    for (m, mode) in spec.modes.iter().enumerate() {
        for _ in 0..spec.mode_rows(m) {
            let x = mode.bounds.iter().map(|&(lo, hi)| rng.gen_range(lo..hi)).collect();
            rows.push((x, rng.gen_bool(mode.purity), Some(m)));
        }
    }
    while rows.len() < spec.n_rows {
        let mut tries = 0;
        let x = loop {
            let x: Vec<f64> = spec.domain.iter().map(|&(lo, hi)| rng.gen_range(lo..hi)).collect();
            if !spec.modes.iter().any(|m| m.contains(&x)) {
                break x;
            }
            tries += 1;
            if tries == MAX_REJECTIONS {
                return Err(Error::Spec("boxes leave no room for background rows".into()));
            }
        };
        rows.push((x, rng.gen_bool(spec.background_rate), None));
    }
    rows.shuffle(&mut rng);

    let columns = (0..d)
        .map(|j| FeatureColumn::numeric(format!("x{}", j + 1), rows.iter().map(|r| Some(r.0[j])).collect()))
        .collect::<Result<Vec<_>>>()?;
    Ok(SyntheticData {
        table: DataTable::new(columns)?,
        target: TargetIndicator::new(rows.iter().map(|r| r.1).collect(), "1"),
        modes: spec.modes.clone(),
        mode_of_row: rows.iter().map(|r| r.2).collect(),
    })
}

/// Row set as packed bits.
#[derive(Clone)]
struct Bits(Vec<u64>);

impl Bits {
    fn from_fn(n: usize, f: impl Fn(usize) -> bool) -> Self {
        let mut words = vec![0u64; n.div_ceil(64)];
        for row in (0..n).filter(|&r| f(r)) {
            words[row / 64] |= 1 << (row % 64);
        }
        Bits(words)
    }

    fn and(&self, other: &Bits) -> Bits {
        Bits(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect())
    }

    fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    fn count_and(&self, other: &Bits) -> usize {
        self.0.iter().zip(&other.0).map(|(a, b)| (a & b).count_ones() as usize).sum()
    }
}

/// Every contiguous grid interval (numeric) or single level (categorical).
fn feature_options(table: &DataTable, feature: usize, config: &ExtractionConfig) -> Result<Vec<(Rule, Bits)>> {
    let n = table.n_rows();
    let column = table.column(feature)?;
    let mut out = Vec::new();
    match column.data() {
        ColumnData::Numeric(values) => {
            let present: Vec<f64> = values.iter().flatten().copied().collect();
            let edges = match make_grids(&present, config.n_g, config.strategy, config.seed) {
                Ok(edges) => edges,
                Err(Error::DegenerateFeature { .. }) => return Ok(out),
                Err(e) => return Err(e),
            };
            let g = edges.len() - 1;
            for first in 0..g {
                for last in first..g {
                    let rule = Rule::from_grid_span(feature, &edges, first, last);
                    let matcher = rule.matcher(table)?;
                    let bits = Bits::from_fn(n, |r| matcher.matches(r));
                    out.push((rule, bits));
                }
            }
        }
        ColumnData::Categorical { levels, codes } => {
            for (code, level) in levels.iter().enumerate() {
                let bits = Bits::from_fn(n, |r| codes[r] == Some(code as u32));
                out.push((Rule::category(feature, level.clone()), bits));
            }
        }
    }
    Ok(out)
}

/// Ratio of each rule inside the rows satisfying the rules before it.
fn step_ratios(table: &DataTable, target: &Bits, steps: &[&Bits]) -> Vec<Ratio> {
    let mut condition = Bits::from_fn(table.n_rows(), |_| true);
    let mut ratios = Vec::with_capacity(steps.len());
    for bits in steps {
        let inside = condition.and(bits);
        ratios.push(Ratio::from_counts(
            inside.count_and(target) as u64,
            inside.count() as u64,
            condition.count_and(target) as u64,
            condition.count() as u64,
        ));
        condition = inside;
    }
    ratios
}

/// Highest-fitness conjunction of grid-aligned intervals with support at
/// least `config.s_min`, found by enumerating every option on every feature
/// subset of size up to `config.l_max`.
///
/// Grids are built once per feature over all rows, not re-binned per branch,
/// so this bounds what the tree search can reach on the same grids rather
/// than replicating it. `k` and `iota` are ignored; ties are broken as in
/// [`crate::extraction::select_best`].
pub fn brute_force_best(table: &DataTable, target: &TargetIndicator, config: &ExtractionConfig) -> Result<RuleSet> {
    config.validate()?;
    target.check_aligned(table)?;
    let d = table.n_features();
    if d > MAX_FEATURES || config.n_g > MAX_GRIDS || config.l_max > MAX_RULES {
        return Err(Error::TooLarge(format!(
            "{d} features, {} grids, {} rules (limits {MAX_FEATURES}, {MAX_GRIDS}, {MAX_RULES})",
            config.n_g, config.l_max
        )));
    }
    let target_count = target.count();
    if target_count == 0 {
        return Err(Error::NoTarget);
    }
    let flags = target.flags();
    let target_bits = Bits::from_fn(table.n_rows(), |r| flags[r]);
    let options = (0..d)
        .map(|f| feature_options(table, f, config))
        .collect::<Result<Vec<_>>>()?;

    // choices are (feature, option index) pairs
    let mut best: Option<(RuleSet, Vec<(usize, usize)>)> = None;
    let mut consider = |chosen: &[(usize, usize)], rows: &Bits| {
        let support = rows.count();
        if support == 0 || support < config.s_min {
            return;
        }
        let hits = rows.count_and(&target_bits);
        let set = RuleSet {
            rules: chosen.iter().map(|&(f, i)| options[f][i].0.clone()).collect(),
            stats: RuleStats::from_counts(support, hits, target_count, Vec::new()),
        };
        if best.as_ref().is_none_or(|(b, _)| preference(&set, b) == Ordering::Less) {
            best = Some((set, chosen.to_vec()));
        }
    };

    for (f, opts) in options.iter().enumerate() {
        for (i, opt) in opts.iter().enumerate() {
            consider(&[(f, i)], &opt.1);
        }
    }
    if config.l_max >= 2 {
        for f in 0..d {
            for g in f + 1..d {
                for (i, a) in options[f].iter().enumerate() {
                    for (j, b) in options[g].iter().enumerate() {
                        consider(&[(f, i), (g, j)], &a.1.and(&b.1));
                    }
                }
            }
        }
    }

    let (mut set, chosen) = best.ok_or(Error::EmptyResult)?;
    let steps: Vec<&Bits> = chosen.iter().map(|&(f, i)| &options[f][i].1).collect();
    set.stats.step_ratios = step_ratios(table, &target_bits, &steps);
    Ok(set)
}
