//! Per-feature grids, occupancy counts and grid merging.
//!
//! Grid `i` covers `[edges[i], edges[i + 1])`; the last grid is closed on the
//! right. Values outside `[edges[0], edges[g]]` are clamped to the boundary
//! grids, which only matters for samples that were not part of the data the
//! grid was built from.

use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::{Error, Ratio, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BinningStrategy {
    #[default]
    Uniform,
    KMeans,
    Quantile,
}

impl BinningStrategy {
    pub fn name(&self) -> &'static str {
        match self {
            BinningStrategy::Uniform => "uniform",
            BinningStrategy::KMeans => "kmeans",
            BinningStrategy::Quantile => "quantile",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "uniform" => Some(BinningStrategy::Uniform),
            "kmeans" => Some(BinningStrategy::KMeans),
            "quantile" => Some(BinningStrategy::Quantile),
            _ => None,
        }
    }
}

const KMEANS_MAX_ITER: usize = 100;

/// Grid edges for `values` (missing values already removed). Duplicate edges
/// are collapsed, so fewer than `n_g` grids may come back.
///
/// `seed` only affects the k-means++ initialisation.
pub fn make_grids(
    values: &[f64],
    n_g: usize,
    strategy: BinningStrategy,
    seed: u64,
) -> Result<Vec<f64>> {
    if n_g < 2 {
        return Err(Error::InvalidConfig(alloc::format!("n_g = {n_g}, expected >= 2")));
    }
    let mut sorted: Vec<f64> = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let (min, max) = match (sorted.first(), sorted.last()) {
        (Some(&lo), Some(&hi)) if lo < hi => (lo, hi),
        // feature index is filled in by callers that know it
        _ => return Err(Error::DegenerateFeature { feature: usize::MAX }),
    };

    let mut edges = match strategy {
        BinningStrategy::Uniform => {
            let width = (max - min) / n_g as f64;
            let mut e: Vec<f64> = (0..n_g).map(|i| min + width * i as f64).collect();
            e.push(max);
            e
        }
        BinningStrategy::Quantile => {
            let mut e: Vec<f64> = (0..=n_g)
                .map(|i| quantile_sorted(&sorted, i as f64 / n_g as f64))
                .collect();
            e[0] = min;
            e[n_g] = max;
            e
        }
        BinningStrategy::KMeans => {
            let centers = kmeans_1d(&sorted, n_g, seed);
            let mut e = Vec::with_capacity(centers.len() + 1);
            e.push(min);
            for w in centers.windows(2) {
                e.push(w[0] + (w[1] - w[0]) / 2.0);
            }
            e.push(max);
            e
        }
    };
    edges.dedup_by(|b, a| *b <= *a);
    Ok(edges)
}

/// Linear-interpolation quantile of sorted data.
fn quantile_sorted(sorted: &[f64], p: f64) -> f64 {
    let pos = p * (sorted.len() - 1) as f64;
    let lo = libm::floor(pos) as usize;
    let hi = (lo + 1).min(sorted.len() - 1);
    let frac = pos - lo as f64;
    sorted[lo] + (sorted[hi] - sorted[lo]) * frac
}

/// 1-D k-means with k-means++ seeding; returns sorted, distinct centres.
fn kmeans_1d(sorted: &[f64], k: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut centers = vec![sorted[rng.gen_range(0..sorted.len())]];
    let mut dist2: Vec<f64> = Vec::with_capacity(sorted.len());
    while centers.len() < k {
        dist2.clear();
        dist2.extend(sorted.iter().map(|&x| {
            centers
                .iter()
                .map(|&c| (x - c) * (x - c))
                .fold(f64::INFINITY, f64::min)
        }));
        let total: f64 = dist2.iter().sum();
        if total <= 0.0 {
            // every point already coincides with a centre
            break;
        }
        let mut draw = rng.gen::<f64>() * total;
        let mut pick = sorted.len() - 1;
        for (i, &d) in dist2.iter().enumerate() {
            if d > 0.0 && draw < d {
                pick = i;
                break;
            }
            draw -= d;
        }
        if dist2[pick] == 0.0 {
            // rounding pushed past the end; take the farthest point instead
            pick = dist2
                .iter()
                .enumerate()
                .max_by(|a, b| a.1.total_cmp(b.1))
                .map(|(i, _)| i)
                .unwrap_or(0);
        }
        centers.push(sorted[pick]);
    }
    centers.sort_by(f64::total_cmp);

    for _ in 0..KMEANS_MAX_ITER {
        let mut sums = vec![0.0; centers.len()];
        let mut counts = vec![0usize; centers.len()];
        // Sorted data and sorted centres: assignment boundaries are midpoints.
        let mut c = 0;
        for &x in sorted {
            while c + 1 < centers.len() && (x - centers[c]) > (centers[c + 1] - x) {
                c += 1;
            }
            sums[c] += x;
            counts[c] += 1;
        }
        let mut next = centers.clone();
        for i in 0..centers.len() {
            if counts[i] > 0 {
                next[i] = sums[i] / counts[i] as f64;
            }
        }
        next.sort_by(f64::total_cmp);
        let converged = next == centers;
        centers = next;
        if converged {
            break;
        }
    }
    centers.dedup();
    centers
}

/// Grid holding `value`, clamped to the boundary grids.
pub fn grid_index(edges: &[f64], value: f64) -> usize {
    let g = edges.len() - 1;
    // number of interior edges <= value
    edges[1..g].partition_point(|&e| e <= value)
}

/// Occupancy of one feature's grids, restricted to the rows satisfying the
/// previously chosen rules.
#[derive(Debug, Clone, PartialEq)]
pub struct GridHistogram {
    pub feature: usize,
    pub edges: Vec<f64>,
    pub target_counts: Vec<u64>,
    pub total_counts: Vec<u64>,
    /// Rows satisfying the condition, including rows missing this feature.
    pub condition_total: u64,
    /// Condition rows that are in the target subgroup.
    pub condition_target: u64,
}

impl GridHistogram {
    pub fn n_grids(&self) -> usize {
        self.total_counts.len()
    }

    /// Exact ratio of grid `i`.
    pub fn ratio(&self, i: usize) -> Ratio {
        self.span_ratio(i, i)
    }

    pub fn span_counts(&self, first: usize, last: usize) -> (u64, u64) {
        let t = self.target_counts[first..=last].iter().sum();
        let n = self.total_counts[first..=last].iter().sum();
        (t, n)
    }

    pub fn span_ratio(&self, first: usize, last: usize) -> Ratio {
        let (t, n) = self.span_counts(first, last);
        Ratio::from_counts(t, n, self.condition_target, self.condition_total)
    }
}

/// Counts target and total rows per grid over rows where `condition` holds
/// and the feature is present.
pub fn grid_counts(
    feature: usize,
    edges: &[f64],
    values: &[Option<f64>],
    target: &[bool],
    condition: &[bool],
) -> GridHistogram {
    let g = edges.len() - 1;
    let mut target_counts = vec![0u64; g];
    let mut total_counts = vec![0u64; g];
    let mut condition_total = 0;
    let mut condition_target = 0;
    for ((value, &is_target), &keep) in values.iter().zip(target).zip(condition) {
        if !keep {
            continue;
        }
        condition_total += 1;
        condition_target += is_target as u64;
        if let Some(v) = value {
            let i = grid_index(edges, *v);
            total_counts[i] += 1;
            target_counts[i] += is_target as u64;
        }
    }
    GridHistogram {
        feature,
        edges: edges.to_vec(),
        target_counts,
        total_counts,
        condition_total,
        condition_target,
    }
}

/// Merges grid `i + 1` into grid `i`.
fn absorb_right(h: &mut GridHistogram, i: usize) {
    h.target_counts[i] += h.target_counts[i + 1];
    h.total_counts[i] += h.total_counts[i + 1];
    h.target_counts.remove(i + 1);
    h.total_counts.remove(i + 1);
    h.edges.remove(i + 1);
}

/// Applies the two merge rules until nothing changes:
///
/// 1. adjacent non-empty grids with identical target fractions are joined
///    (`t_i * n_j == t_j * n_i`);
/// 2. an empty grid is joined to the neighbour with the higher ratio (ties and
///    two empty neighbours go left, a single neighbour takes it).
pub fn merge_grids(hist: &GridHistogram) -> GridHistogram {
    let mut h = hist.clone();
    loop {
        let mut changed = false;

        let mut i = 0;
        while i + 1 < h.n_grids() {
            let (ti, ni) = (h.target_counts[i], h.total_counts[i]);
            let (tj, nj) = (h.target_counts[i + 1], h.total_counts[i + 1]);
            if ni > 0 && nj > 0 && ti * nj == tj * ni {
                absorb_right(&mut h, i);
                changed = true;
            } else {
                i += 1;
            }
        }

        if let Some(e) = (0..h.n_grids()).find(|&i| h.total_counts[i] == 0) {
            if h.n_grids() > 1 {
                let left = e.checked_sub(1);
                let right = (e + 1 < h.n_grids()).then_some(e + 1);
                let into_left = match (left, right) {
                    (Some(l), Some(r)) => h.ratio(l) >= h.ratio(r),
                    (Some(_), None) => true,
                    _ => false,
                };
                if into_left {
                    absorb_right(&mut h, e - 1);
                } else {
                    absorb_right(&mut h, e);
                }
                changed = true;
            }
        }

        if !changed {
            return h;
        }
    }
}
