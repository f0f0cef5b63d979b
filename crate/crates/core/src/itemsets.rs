//! FP-Growth over feature-index transactions.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::{Error, Result};

/// An itemset together with the exact number of transactions containing it.
/// `items` is sorted ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrequentItemset {
    pub items: Vec<usize>,
    pub count: usize,
}

/// Output order: size ascending, count descending, items lexicographic.
fn canonical_order(a: &FrequentItemset, b: &FrequentItemset) -> Ordering {
    a.items
        .len()
        .cmp(&b.items.len())
        .then(b.count.cmp(&a.count))
        .then_with(|| a.items.cmp(&b.items))
}

struct Node {
    item: usize,
    count: usize,
    parent: Option<usize>,
    children: Vec<usize>,
}

/// FP-tree: prefix tree over transactions with items ordered by descending
/// support (ties by ascending index), plus per-item node lists.
struct FpTree {
    nodes: Vec<Node>,
    /// (item, support) in tree order: most frequent first.
    header: Vec<(usize, usize)>,
    links: BTreeMap<usize, Vec<usize>>,
}

impl FpTree {
    /// Builds a tree from weighted transactions, dropping items whose total
    /// weight is below `c_min`.
    fn build(transactions: &[(Vec<usize>, usize)], c_min: usize) -> Self {
        let mut support: BTreeMap<usize, usize> = BTreeMap::new();
        for (items, weight) in transactions {
            for &item in items {
                *support.entry(item).or_default() += weight;
            }
        }
        let mut header: Vec<(usize, usize)> = support
            .into_iter()
            .filter(|&(_, s)| s >= c_min)
            .collect();
        header.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
        let rank: BTreeMap<usize, usize> = header
            .iter()
            .enumerate()
            .map(|(r, &(item, _))| (item, r))
            .collect();

        let mut tree = FpTree {
            nodes: vec![Node {
                item: usize::MAX,
                count: 0,
                parent: None,
                children: Vec::new(),
            }],
            header,
            links: BTreeMap::new(),
        };
        let mut path = Vec::new();
        for (items, weight) in transactions {
            path.clear();
            path.extend(items.iter().copied().filter(|i| rank.contains_key(i)));
            path.sort_by_key(|i| rank[i]);
            path.dedup();
            tree.insert(&path, *weight);
        }
        tree
    }

    fn insert(&mut self, path: &[usize], weight: usize) {
        let mut cur = 0;
        for &item in path {
            let existing = self.nodes[cur]
                .children
                .iter()
                .copied()
                .find(|&c| self.nodes[c].item == item);
            cur = match existing {
                Some(child) => {
                    self.nodes[child].count += weight;
                    child
                }
                None => {
                    let id = self.nodes.len();
                    self.nodes.push(Node {
                        item,
                        count: weight,
                        parent: Some(cur),
                        children: Vec::new(),
                    });
                    self.nodes[cur].children.push(id);
                    self.links.entry(item).or_default().push(id);
                    id
                }
            };
        }
    }

    /// Prefix paths ending just above each occurrence of `item`.
    fn conditional_base(&self, item: usize) -> Vec<(Vec<usize>, usize)> {
        let mut base = Vec::new();
        for &node in self.links.get(&item).map(Vec::as_slice).unwrap_or(&[]) {
            let mut prefix = Vec::new();
            let mut cur = self.nodes[node].parent;
            while let Some(p) = cur {
                if p == 0 {
                    break;
                }
                prefix.push(self.nodes[p].item);
                cur = self.nodes[p].parent;
            }
            if !prefix.is_empty() {
                base.push((prefix, self.nodes[node].count));
            }
        }
        base
    }

    fn mine(
        &self,
        suffix: &mut Vec<usize>,
        c_min: usize,
        k_max: usize,
        out: &mut Vec<FrequentItemset>,
    ) {
        // Least frequent first, as in the classic formulation.
        for &(item, support) in self.header.iter().rev() {
            suffix.push(item);
            let mut items = suffix.clone();
            items.sort_unstable();
            out.push(FrequentItemset {
                items,
                count: support,
            });
            if suffix.len() < k_max {
                let base = self.conditional_base(item);
                if !base.is_empty() {
                    let sub = FpTree::build(&base, c_min);
                    if !sub.header.is_empty() {
                        sub.mine(suffix, c_min, k_max, out);
                    }
                }
            }
            suffix.pop();
        }
    }
}

/// All itemsets with support at least `c_min` and at most `k_max` items, each
/// with its exact support, in canonical order.
pub fn fp_growth(transactions: &[Vec<usize>], c_min: usize, k_max: usize) -> Vec<FrequentItemset> {
    let c_min = c_min.max(1);
    if k_max == 0 || transactions.is_empty() {
        return Vec::new();
    }
    let weighted: Vec<(Vec<usize>, usize)> = transactions
        .iter()
        .map(|t| {
            let mut items = t.clone();
            items.sort_unstable();
            items.dedup();
            (items, 1)
        })
        .collect();
    let tree = FpTree::build(&weighted, c_min);
    let mut out = Vec::new();
    tree.mine(&mut Vec::new(), c_min, k_max, &mut out);
    out.sort_by(canonical_order);
    out
}

/// The longest itemset; ties go to the higher count, then to the
/// lexicographically smallest item list.
pub fn pick_feature_set(itemsets: &[FrequentItemset]) -> Result<Vec<usize>> {
    itemsets
        .iter()
        .min_by(|a, b| {
            b.items
                .len()
                .cmp(&a.items.len())
                .then(b.count.cmp(&a.count))
                .then_with(|| a.items.cmp(&b.items))
        })
        .map(|s| s.items.clone())
        .ok_or(Error::EmptyResult)
}
