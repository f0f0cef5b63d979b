//! Support, confidence and fitness of conjunctive rule sets.
//!
//! All three are computed against whatever target indicator the caller
//! supplies, usually the model's predicted class rather than ground truth.

use alloc::vec;
use alloc::vec::Vec;

use crate::extraction::{Rule, RuleStats};
use crate::table::{DataTable, TargetIndicator};
use crate::{Error, Ratio, Result};

/// Rows satisfying every rule. An empty rule list is satisfied by all rows.
pub fn satisfying_mask(table: &DataTable, rules: &[Rule]) -> Result<Vec<bool>> {
    let mut mask = vec![true; table.n_rows()];
    for rule in rules {
        let matcher = rule.matcher(table)?;
        for (row, keep) in mask.iter_mut().enumerate() {
            if *keep {
                *keep = matcher.matches(row);
            }
        }
    }
    Ok(mask)
}

pub fn support(table: &DataTable, rules: &[Rule]) -> Result<usize> {
    Ok(satisfying_mask(table, rules)?.iter().filter(|&&m| m).count())
}

/// (rows satisfying the rules, of which in the target)
fn covered(table: &DataTable, target: &TargetIndicator, rules: &[Rule]) -> Result<(usize, usize)> {
    target.check_aligned(table)?;
    let mask = satisfying_mask(table, rules)?;
    let mut support = 0;
    let mut hits = 0;
    for (&m, &t) in mask.iter().zip(target.flags()) {
        if m {
            support += 1;
            hits += t as usize;
        }
    }
    Ok((support, hits))
}

pub fn confidence(table: &DataTable, target: &TargetIndicator, rules: &[Rule]) -> Result<f64> {
    let (support, hits) = covered(table, target, rules)?;
    if support == 0 {
        return Err(Error::ZeroSupport);
    }
    Ok(hits as f64 / support as f64)
}

/// `(TP - FP) / |target|`, where TP and FP count covered target and
/// non-target rows. Negative when the rules mostly cover non-target rows.
pub fn fitness(table: &DataTable, target: &TargetIndicator, rules: &[Rule]) -> Result<f64> {
    let target_count = target.count();
    if target_count == 0 {
        return Err(Error::NoTarget);
    }
    let (support, hits) = covered(table, target, rules)?;
    let false_hits = support - hits;
    Ok((hits as f64 - false_hits as f64) / target_count as f64)
}

/// Full statistics for a rule set; `step_ratios` is carried through as given.
pub fn rule_stats(
    table: &DataTable,
    target: &TargetIndicator,
    rules: &[Rule],
    step_ratios: Vec<Ratio>,
) -> Result<RuleStats> {
    let target_count = target.count();
    if target_count == 0 {
        return Err(Error::NoTarget);
    }
    let (support, hits) = covered(table, target, rules)?;
    if support == 0 {
        return Err(Error::ZeroSupport);
    }
    Ok(RuleStats::from_counts(support, hits, target_count, step_ratios))
}

/// Ratio of each rule inside the rows satisfying the rules before it, taking
/// `rules` in the order they were applied.
pub fn step_ratios(table: &DataTable, target: &TargetIndicator, rules: &[Rule]) -> Result<Vec<Ratio>> {
    target.check_aligned(table)?;
    let mut out = Vec::with_capacity(rules.len());
    let mut prev = (table.n_rows() as u64, target.count() as u64);
    for k in 1..=rules.len() {
        let (n, t) = covered(table, target, &rules[..k])?;
        let (n, t) = (n as u64, t as u64);
        out.push(Ratio::from_counts(t, n, prev.1, prev.0));
        prev = (n, t);
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvaluationReport {
    pub entries: Vec<RuleStats>,
    pub target_count: usize,
    pub table_rows: usize,
}

/// Re-evaluates rule sets on a table. Each entry keeps the step ratios passed
/// in alongside its rules; [`step_ratios`] recomputes them on this table.
pub fn evaluate(
    table: &DataTable,
    target: &TargetIndicator,
    rule_sets: &[(Vec<Rule>, Vec<Ratio>)],
) -> Result<EvaluationReport> {
    let entries = rule_sets
        .iter()
        .map(|(rules, steps)| rule_stats(table, target, rules, steps.clone()))
        .collect::<Result<Vec<_>>>()?;
    Ok(EvaluationReport {
        entries,
        target_count: target.count(),
        table_rows: table.n_rows(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::table::FeatureColumn;
    use alloc::string::ToString;

    fn table() -> (DataTable, TargetIndicator) {
        // binning fixture: grids [0,1),[1,2),[2,3),[3,4] with target counts 1,3,5,1
        let mut values = Vec::new();
        let mut flags = Vec::new();
        for (g, t) in [(0u32, 1usize), (1, 3), (2, 5), (3, 1)] {
            for k in 0..5 {
                values.push(Some(g as f64 + 0.1 + 0.2 * k as f64));
                flags.push(k < t);
            }
        }
        let colour = FeatureColumn::categorical(
            "colour",
            (0..20).map(|i| Some(if i % 2 == 0 { "red" } else { "blue" })),
        );
        let x = FeatureColumn::numeric("x", values).unwrap();
        (
            DataTable::new(vec![x, colour]).unwrap(),
            TargetIndicator::new(flags, "1"),
        )
    }

    #[test]
    fn empty_rule_set_covers_everything() {
        let (t, y) = table();
        assert_eq!(support(&t, &[]).unwrap(), 20);
        assert_eq!(confidence(&t, &y, &[]).unwrap(), 0.5);
    }

    #[test]
    fn fixture_conjunction() {
        let (t, y) = table();
        let rules = [Rule::interval(0, Some(1.0), Some(3.0))];
        assert_eq!(support(&t, &rules).unwrap(), 10);
        assert_eq!(confidence(&t, &y, &rules).unwrap(), 0.8);
        assert!((fitness(&t, &y, &rules).unwrap() - 0.6).abs() < 1e-15);
    }

    #[test]
    fn prefix_step_ratios() {
        let (t, y) = table();
        // [1,3) holds 8 of 10 target rows; red rows inside it hold 4 of 5
        let rules = [Rule::interval(0, Some(1.0), Some(3.0)), Rule::category(1, "red")];
        let steps = step_ratios(&t, &y, &rules).unwrap();
        assert_eq!(steps, vec![Ratio::new(8, 5), Ratio::ONE]);
        assert_eq!(step_ratios(&t, &y, &[]).unwrap(), Vec::new());
    }

    #[test]
    fn excluding_everything() {
        let (t, y) = table();
        let rules = [Rule::interval(0, Some(10.0), None)];
        assert_eq!(support(&t, &rules).unwrap(), 0);
        assert_eq!(confidence(&t, &y, &rules), Err(Error::ZeroSupport));
        let rules = [Rule::category(1, "green")];
        assert_eq!(support(&t, &rules).unwrap(), 0);
    }

    #[test]
    fn negative_fitness() {
        let (t, y) = table();
        // grid 3 holds 1 target row out of 5
        let rules = [Rule::interval(0, Some(3.0), None)];
        assert!(fitness(&t, &y, &rules).unwrap() < 0.0);
    }

    #[test]
    fn counts_formula() {
        // TP = 8, FP = 2, |target| = 10
        let s = RuleStats::from_counts(10, 8, 10, Vec::new());
        assert!((s.fitness - 0.6).abs() < 1e-15);
        let s = RuleStats::from_counts(4, 3, 10, Vec::new());
        assert_eq!(s.confidence, 0.75);
    }

    #[test]
    fn diabetes_fitness_identity() {
        let support = 2736.0;
        let confidence = 0.993;
        let target_count = 13379.0;
        let fit: f64 = support * (2.0 * confidence - 1.0) / target_count;
        assert!((fit - 0.202).abs() < 1e-3);
    }

    #[test]
    fn schema_errors() {
        let (t, y) = table();
        assert!(matches!(
            support(&t, &[Rule::interval(9, None, None)]),
            Err(Error::Schema(_))
        ));
        assert!(matches!(
            support(&t, &[Rule::category(0, "red")]),
            Err(Error::Schema(_))
        ));
        let empty = TargetIndicator::new(vec![false; 20], "1".to_string());
        assert_eq!(fitness(&t, &empty, &[]), Err(Error::NoTarget));
        let _ = y;
    }
}
