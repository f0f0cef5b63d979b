use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::binning::GridHistogram;
use crate::{Error, Ratio, Result};

/// Per-grid ratios of a histogram. Empty grids get ratio 0.
pub fn grid_ratios(hist: &GridHistogram) -> Result<Vec<Ratio>> {
    if hist.condition_target == 0 || hist.condition_total == 0 {
        return Err(Error::NoTarget);
    }
    Ok((0..hist.n_grids()).map(|i| hist.ratio(i)).collect())
}

/// Local maxima strictly above `one` and strictly above each existing
/// neighbour, sorted by value descending (ties: lower index first).
pub fn find_peaks<R: PartialOrd>(ratios: &[R], one: &R) -> Vec<usize> {
    let mut peaks: Vec<usize> = (0..ratios.len())
        .filter(|&i| {
            let r = &ratios[i];
            r > one
                && (i == 0 || r > &ratios[i - 1])
                && (i + 1 == ratios.len() || r > &ratios[i + 1])
        })
        .collect();
    peaks.sort_by(|&a, &b| {
        ratios[b]
            .partial_cmp(&ratios[a])
            .unwrap_or(Ordering::Equal)
            .then(a.cmp(&b))
    });
    peaks
}

/// Contiguous run of grids `first..=last` with its pooled counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GridSpan {
    pub first: usize,
    pub last: usize,
    pub target: u64,
    pub support: u64,
    pub ratio: Ratio,
}

impl GridSpan {
    pub fn contains(&self, grid: usize) -> bool {
        self.first <= grid && grid <= self.last
    }
}

/// Grows an interval outward from grid `start`.
///
/// While the interval covers fewer than `s_min` rows it annexes the neighbour
/// with the higher ratio (ties: more rows, then left). Once support is met it
/// keeps growing only while its ratio is above 1, and only into a neighbour
/// whose ratio beats both the other neighbour and the interval itself, so the
/// interval ratio strictly increases. Returns `None` unless the final interval
/// has enough support and a ratio above 1.
pub fn gen_feature_interval(hist: &GridHistogram, start: usize, s_min: u64) -> Option<GridSpan> {
    let g = hist.n_grids();
    if start >= g {
        return None;
    }
    let (mut first, mut last) = (start, start);
    let (mut target, mut support) = hist.span_counts(start, start);
    let ratio_of = |t: u64, n: u64| {
        Ratio::from_counts(t, n, hist.condition_target, hist.condition_total)
    };

    loop {
        let ratio = ratio_of(target, support);
        let left = first.checked_sub(1);
        let right = (last + 1 < g).then_some(last + 1);
        let pick = if support < s_min {
            match (left, right) {
                (Some(l), Some(r)) => {
                    let by_ratio = hist.ratio(l).cmp(&hist.ratio(r));
                    let by_rows = hist.total_counts[l].cmp(&hist.total_counts[r]);
                    if by_ratio.then(by_rows) == Ordering::Less {
                        Some(r)
                    } else {
                        Some(l)
                    }
                }
                (one, None) | (None, one) => one,
            }
        } else if ratio.exceeds_one() {
            let beats = |cand: usize, other: Option<usize>| {
                let rc = hist.ratio(cand);
                rc > ratio && other.is_none_or(|o| rc > hist.ratio(o))
            };
            match (left, right) {
                (Some(l), _) if beats(l, right) => Some(l),
                (_, Some(r)) if beats(r, left) => Some(r),
                _ => None,
            }
        } else {
            None
        };

        let Some(next) = pick else { break };
        target += hist.target_counts[next];
        support += hist.total_counts[next];
        if next < first {
            first = next;
        } else {
            last = next;
        }
    }

    let ratio = ratio_of(target, support);
    (support >= s_min && ratio.exceeds_one()).then_some(GridSpan {
        first,
        last,
        target,
        support,
        ratio,
    })
}
