use alloc::vec;
use alloc::vec::Vec;

use super::candidates::{get_candidate_rules, get_local_candidate_rules, rank, ratio_histogram, Candidate};
use super::{select_best, ExtractionConfig, Rule, RuleSet};
use crate::binning::GridHistogram;
use crate::metrics::{rule_stats, satisfying_mask};
use crate::table::{ColumnKind, DataTable, TargetIndicator, Value};
use crate::{Error, Ratio, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct RuleNode {
    /// `None` only at the root.
    pub rule: Option<Rule>,
    pub ratio: Option<Ratio>,
    pub parent: Option<usize>,
    pub children: Vec<usize>,
    pub depth: usize,
    /// Rows satisfying every rule on the path to this node.
    pub condition: Vec<bool>,
}

/// Search tree of candidate rules; node 0 is the unconditioned root and each
/// node has at most `K` children.
#[derive(Debug, Clone, PartialEq)]
pub struct RuleTree {
    pub nodes: Vec<RuleNode>,
}

impl RuleTree {
    fn path(&self, mut node: usize) -> (Vec<Rule>, Vec<Ratio>) {
        let mut rules = Vec::new();
        let mut ratios = Vec::new();
        while let Some(parent) = self.nodes[node].parent {
            rules.extend(self.nodes[node].rule.clone());
            ratios.extend(self.nodes[node].ratio);
            node = parent;
        }
        rules.reverse();
        ratios.reverse();
        (rules, ratios)
    }

    /// Every root-to-node path with at least one rule, depth-first, with
    /// duplicate conjunctions (same rules in another order) removed.
    pub fn rule_sets(&self, table: &DataTable, target: &TargetIndicator) -> Result<Vec<RuleSet>> {
        let mut out: Vec<RuleSet> = Vec::new();
        let mut keys: Vec<Vec<Rule>> = Vec::new();
        let mut stack = vec![0usize];
        while let Some(node) = stack.pop() {
            stack.extend(self.nodes[node].children.iter().rev());
            if node == 0 {
                continue;
            }
            let (rules, ratios) = self.path(node);
            let stats = rule_stats(table, target, &rules, ratios)?;
            let set = RuleSet { rules, stats };
            let key = set.canonical_rules();
            match keys.iter().position(|k| *k == key) {
                Some(i) => {
                    if set.stats.fitness > out[i].stats.fitness {
                        out[i] = set;
                    }
                }
                None => {
                    keys.push(key);
                    out.push(set);
                }
            }
        }
        Ok(out)
    }
}

enum Mode<'a> {
    Global,
    Local(&'a [Value]),
}

struct Search<'a> {
    table: &'a DataTable,
    target: &'a TargetIndicator,
    config: &'a ExtractionConfig,
    mode: Mode<'a>,
    tree: RuleTree,
}

impl Search<'_> {
    fn candidates(&self, feature: usize, condition: &[bool]) -> Result<Vec<Candidate>> {
        let found = match self.mode {
            Mode::Global => {
                get_candidate_rules(self.table, self.target, feature, condition, self.config)
            }
            Mode::Local(sample) => get_local_candidate_rules(
                self.table,
                self.target,
                feature,
                condition,
                &sample[feature],
                self.config,
            ),
        };
        match found {
            // too few distinct values left under this condition
            Err(Error::DegenerateFeature { .. }) => Ok(Vec::new()),
            other => other,
        }
    }

    fn add_rules(&mut self, parent: usize, features: &[usize]) -> Result<()> {
        if features.is_empty() {
            return Ok(());
        }
        let condition = self.tree.nodes[parent].condition.clone();
        let mut pool = Vec::new();
        for &f in features {
            pool.extend(self.candidates(f, &condition)?);
        }
        pool.sort_by(rank);
        pool.truncate(self.config.k);

        let depth = self.tree.nodes[parent].depth + 1;
        for cand in pool {
            let matcher = cand.rule.matcher(self.table)?;
            let child_condition: Vec<bool> = condition
                .iter()
                .enumerate()
                .map(|(row, &c)| c && matcher.matches(row))
                .collect();
            debug_assert_eq!(
                child_condition.iter().filter(|&&c| c).count() as u64,
                cand.support
            );
            let id = self.tree.nodes.len();
            let feature = cand.rule.feature;
            self.tree.nodes.push(RuleNode {
                rule: Some(cand.rule),
                ratio: Some(cand.ratio),
                parent: Some(parent),
                children: Vec::new(),
                depth,
                condition: child_condition,
            });
            self.tree.nodes[parent].children.push(id);
            if depth < self.config.l_max {
                let rest: Vec<usize> = features.iter().copied().filter(|&f| f != feature).collect();
                self.add_rules(id, &rest)?;
            }
        }
        Ok(())
    }
}

fn check_inputs(
    table: &DataTable,
    target: &TargetIndicator,
    features: &[usize],
    config: &ExtractionConfig,
) -> Result<Vec<usize>> {
    config.validate()?;
    target.check_aligned(table)?;
    if features.is_empty() {
        return Err(Error::InvalidConfig("feature set is empty".into()));
    }
    for &f in features {
        table.column(f)?;
    }
    if target.count() == 0 {
        return Err(Error::NoTarget);
    }
    if config.s_min > table.n_rows() {
        return Err(Error::InfeasibleConfig(alloc::format!(
            "s_min = {} exceeds the {} available rows",
            config.s_min,
            table.n_rows()
        )));
    }
    let mut unique = features.to_vec();
    unique.sort_unstable();
    unique.dedup();
    Ok(unique)
}

fn build(
    table: &DataTable,
    target: &TargetIndicator,
    features: &[usize],
    config: &ExtractionConfig,
    mode: Mode<'_>,
) -> Result<RuleTree> {
    let features = check_inputs(table, target, features, config)?;
    let mut search = Search {
        table,
        target,
        config,
        mode,
        tree: RuleTree {
            nodes: vec![RuleNode {
                rule: None,
                ratio: None,
                parent: None,
                children: Vec::new(),
                depth: 0,
                condition: vec![true; table.n_rows()],
            }],
        },
    };
    search.add_rules(0, &features)?;
    Ok(search.tree)
}

impl RuleTree {
    pub fn build(
        table: &DataTable,
        target: &TargetIndicator,
        features: &[usize],
        config: &ExtractionConfig,
    ) -> Result<Self> {
        build(table, target, features, config, Mode::Global)
    }
}

/// All candidate rule sets found by the K-branch search over `features`.
pub fn extract_rule_sets(
    table: &DataTable,
    target: &TargetIndicator,
    features: &[usize],
    config: &ExtractionConfig,
) -> Result<Vec<RuleSet>> {
    RuleTree::build(table, target, features, config)?.rule_sets(table, target)
}

/// Best rule set whose every rule contains the given sample, or `None` when
/// no interval around the sample has a ratio above 1. `sample` holds one value
/// per table column.
pub fn extract_local(
    table: &DataTable,
    target: &TargetIndicator,
    features: &[usize],
    sample: &[Value],
    config: &ExtractionConfig,
) -> Result<Option<RuleSet>> {
    if sample.len() != table.n_features() {
        return Err(Error::Shape {
            expected: table.n_features(),
            found: sample.len(),
        });
    }
    for &f in features {
        if matches!(sample.get(f), Some(Value::Missing)) {
            return Err(Error::Domain(alloc::format!(
                "sample has no value for feature {:?}",
                table.column(f)?.name()
            )));
        }
    }
    let tree = build(table, target, features, config, Mode::Local(sample))?;
    let sets = tree.rule_sets(table, target)?;
    if sets.is_empty() {
        return Ok(None);
    }
    Ok(Some(select_best(&sets, config.iota)?.clone()))
}

/// Histogram behind each numeric step of a rule set: step `k` is binned over
/// the rows satisfying the first `k` rules. Categorical steps yield `None`.
pub fn path_histograms(
    table: &DataTable,
    target: &TargetIndicator,
    rule_set: &RuleSet,
    config: &ExtractionConfig,
) -> Result<Vec<Option<GridHistogram>>> {
    let mut out = Vec::with_capacity(rule_set.rules.len());
    for k in 0..rule_set.rules.len() {
        let feature = rule_set.rules[k].feature;
        if table.column(feature)?.kind() == ColumnKind::Categorical {
            out.push(None);
            continue;
        }
        let condition = satisfying_mask(table, &rule_set.rules[..k])?;
        out.push(Some(ratio_histogram(table, target, feature, &condition, config)?));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::super::candidates::tests::fixture_table;
    use super::*;
    use crate::table::FeatureColumn;

    fn config(s_min: usize) -> ExtractionConfig {
        let mut c = ExtractionConfig::new(s_min);
        c.n_g = 4;
        c.k = 1;
        c
    }

    #[test]
    fn fixture_single_feature() {
        let (t, y) = fixture_table();
        let sets = extract_rule_sets(&t, &y, &[0], &config(8)).unwrap();
        assert_eq!(sets.len(), 1);
        assert_eq!(sets[0].rules, vec![Rule::interval(0, Some(1.0), Some(3.0))]);
        assert_eq!(sets[0].stats.support, 10);
        assert_eq!(sets[0].stats.confidence, 0.8);
    }

    #[test]
    fn all_target_yields_nothing() {
        let (t, _) = fixture_table();
        let y = TargetIndicator::new(vec![true; 20], "1");
        assert!(extract_rule_sets(&t, &y, &[0], &config(2)).unwrap().is_empty());
    }

    #[test]
    fn errors() {
        let (t, y) = fixture_table();
        assert!(matches!(
            extract_rule_sets(&t, &y, &[0], &config(21)),
            Err(Error::InfeasibleConfig(_))
        ));
        let none = TargetIndicator::new(vec![false; 20], "1");
        assert_eq!(extract_rule_sets(&t, &none, &[0], &config(2)), Err(Error::NoTarget));
        assert!(matches!(
            extract_rule_sets(&t, &y, &[3], &config(2)),
            Err(Error::Schema(_))
        ));
    }

    #[test]
    fn local_inside_matches_global() {
        let (t, y) = fixture_table();
        let cfg = config(8);
        let global = extract_rule_sets(&t, &y, &[0], &cfg).unwrap();
        let local = extract_local(&t, &y, &[0], &[Value::Number(1.5)], &cfg)
            .unwrap()
            .unwrap();
        assert_eq!(local, global[0]);
    }

    #[test]
    fn local_outlier_is_none() {
        let (t, y) = fixture_table();
        let out = extract_local(&t, &y, &[0], &[Value::Number(0.4)], &config(8)).unwrap();
        assert_eq!(out, None);
    }

    #[test]
    fn two_feature_tree_shape() {
        // x picks the target band, c refines it
        let n = 40;
        let x = FeatureColumn::numeric("x", (0..n).map(|i| Some(i as f64)).collect()).unwrap();
        let c = FeatureColumn::categorical(
            "c",
            (0..n).map(|i| Some(if i % 4 == 0 { "u" } else { "v" })),
        );
        let flags = (0..n).map(|i| (20..30).contains(&i) && i % 4 != 0).collect();
        let t = DataTable::new(vec![x, c]).unwrap();
        let y = TargetIndicator::new(flags, "1");
        let mut cfg = ExtractionConfig::new(3);
        cfg.n_g = 4;
        cfg.k = 2;
        cfg.l_max = 2;
        let tree = RuleTree::build(&t, &y, &[0, 1], &cfg).unwrap();
        for (id, node) in tree.nodes.iter().enumerate() {
            assert!(node.children.len() <= 2);
            assert!(node.depth <= 2);
            if let Some(p) = node.parent {
                let parent = &tree.nodes[p].condition;
                assert!(node.condition.iter().zip(parent).all(|(&c, &p)| !c || p), "node {id}");
            }
        }
        let sets = tree.rule_sets(&t, &y).unwrap();
        assert!(sets.iter().any(|s| s.len() == 2));
        for s in &sets {
            assert!(s.stats.support >= 3);
            assert!(s.stats.step_ratios.iter().all(Ratio::exceeds_one));
            let mut feats: Vec<usize> = s.rules.iter().map(|r| r.feature).collect();
            feats.dedup();
            assert_eq!(feats.len(), s.rules.len());
        }
        let best = select_best(&sets, 0.8).unwrap();
        assert!(best.stats.confidence > 0.8);
    }

    #[test]
    fn path_histograms_follow_conditions() {
        let (t, y) = fixture_table();
        let sets = extract_rule_sets(&t, &y, &[0], &config(8)).unwrap();
        let hists = path_histograms(&t, &y, &sets[0], &config(8)).unwrap();
        assert_eq!(hists.len(), 1);
        let h = hists[0].as_ref().unwrap();
        assert_eq!(h.condition_total, 20);
        assert_eq!(h.target_counts, vec![1, 3, 5, 1]);
    }
}
