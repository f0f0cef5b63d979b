//! Exact probability ratios built from integer counts.
//!
//! A ratio compares the share of the target subgroup that falls inside an
//! interval with the share of all conditioned rows that falls inside it:
//!
//! ```text
//! r = (t / T) / (n / N) = (t * N) / (T * n)
//! ```
//!
//! with `t`, `n` the target and total counts of the interval and `T`, `N` the
//! target and total counts of the conditioning subset. Both halves are kept as
//! integers so ordering and equality are decided by cross-multiplication.

use core::cmp::Ordering;
use core::fmt;

#[derive(Clone, Copy)]
pub struct Ratio {
    num: u128,
    den: u128,
}

impl Ratio {
    pub const ZERO: Ratio = Ratio { num: 0, den: 1 };
    pub const ONE: Ratio = Ratio { num: 1, den: 1 };

    /// `num / den`; a zero denominator is read as the zero ratio.
    pub fn new(num: u128, den: u128) -> Self {
        if den == 0 {
            Ratio::ZERO
        } else {
            Ratio { num, den }
        }
    }

    /// Ratio of an interval holding `target` target rows out of `total` rows,
    /// inside a condition with `cond_target` target rows out of `cond_total`.
    /// Empty intervals get ratio 0.
    pub fn from_counts(target: u64, total: u64, cond_target: u64, cond_total: u64) -> Self {
        Ratio::new(
            target as u128 * cond_total as u128,
            cond_target as u128 * total as u128,
        )
    }

    pub fn numer(&self) -> u128 {
        self.num
    }

    pub fn denom(&self) -> u128 {
        self.den
    }

    pub fn exceeds_one(&self) -> bool {
        self.num > self.den
    }

    pub fn to_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl PartialEq for Ratio {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Ratio {}

impl PartialOrd for Ratio {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Ratio {
    fn cmp(&self, other: &Self) -> Ordering {
        // Counts stay below 2^32 in practice, so each side is below 2^128.
        (self.num * other.den).cmp(&(other.num * self.den))
    }
}

impl fmt::Debug for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_f64())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixture_ratios() {
        // condition: 10 target rows out of 20
        let r = |t, n| Ratio::from_counts(t, n, 10, 20);
        assert_eq!(r(1, 5), Ratio::new(2, 5));
        assert_eq!(r(3, 5), Ratio::new(6, 5));
        assert_eq!(r(5, 5), Ratio::new(2, 1));
        assert!(r(5, 5) > r(3, 5));
        assert!(r(3, 5).exceeds_one());
        assert!(!r(2, 4).exceeds_one());
    }

    #[test]
    fn empty_interval_is_zero() {
        assert_eq!(Ratio::from_counts(0, 0, 10, 20), Ratio::ZERO);
        assert!(Ratio::from_counts(0, 3, 10, 20) == Ratio::ZERO);
    }
}
