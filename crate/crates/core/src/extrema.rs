//! Local maxima and minima of functions on `Z`.
//!
//! `n` is a local maximum of `g` when `g(n-1) <= g(n) > g(n+1)` and a local
//! minimum when `g(n-1) >= g(n) < g(n+1)`. The asymmetric comparisons mean a
//! plateau is represented by its right edge only.
//!
//! Read literally, those inequalities also fire at the right edge of a flat
//! step inside a monotone run (`4, 3, 3, 2` has a "maximum" at the second
//! `3`), and then maxima and minima stop alternating. The chain therefore
//! keeps only turning points: right edges of plateaus where the last strict
//! move and the next one point in opposite directions. Each of them satisfies
//! the inequalities above.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::sequence::Sequence;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExtremumKind {
    Max,
    Min,
}

/// Strictly interleaved local maxima and minima, in increasing index order.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtremaChain {
    pub maxima: Vec<i64>,
    pub minima: Vec<i64>,
}

pub fn is_local_max(prev: &Rational, here: &Rational, next: &Rational) -> bool {
    prev <= here && here > next
}

pub fn is_local_min(prev: &Rational, here: &Rational, next: &Rational) -> bool {
    prev >= here && here < next
}

impl ExtremaChain {
    /// Turning points in `[lo, hi]`. The step `lo - 1 -> lo` must already
    /// show the direction `g` arrives with (or `g` must be flat before it), and
    /// `g` must not turn after `hi`.
    pub fn scan(lo: i64, hi: i64, g: impl Fn(i64) -> Rational) -> Result<Self> {
        let mut chain = Self::default();
        if lo > hi {
            return Ok(chain);
        }
        let mut rising: Option<bool> = None;
        let mut here = g(lo - 1);
        for n in lo - 1..=hi {
            let next = g(n + 1);
            let step = match next.cmp(&here) {
                std::cmp::Ordering::Greater => Some(true),
                std::cmp::Ordering::Less => Some(false),
                std::cmp::Ordering::Equal => None,
            };
            if let Some(up) = step {
                match rising {
                    Some(true) if !up => chain.maxima.push(n),
                    Some(false) if up => chain.minima.push(n),
                    _ => {}
                }
                rising = Some(up);
            }
            here = next;
        }
        chain.check_interleaving()?;
        Ok(chain)
    }

    /// Extrema of a finitely supported sequence with its zero tails.
    pub fn of_sequence(f: &Sequence) -> Result<Self> {
        match f.support() {
            None => Ok(Self::default()),
            Some((a, b)) => Self::scan(a - 1, b, |n| f.get(n)),
        }
    }

    /// All extrema in increasing index order.
    pub fn ordered(&self) -> Vec<(i64, ExtremumKind)> {
        let mut all: Vec<_> = self
            .maxima
            .iter()
            .map(|&n| (n, ExtremumKind::Max))
            .chain(self.minima.iter().map(|&n| (n, ExtremumKind::Min)))
            .collect();
        all.sort_unstable_by_key(|e| e.0);
        all
    }

    pub fn is_empty(&self) -> bool {
        self.maxima.is_empty() && self.minima.is_empty()
    }

    pub fn first_kind(&self) -> Option<ExtremumKind> {
        self.ordered().first().map(|e| e.1)
    }

    pub fn last_kind(&self) -> Option<ExtremumKind> {
        self.ordered().last().map(|e| e.1)
    }

    /// The minimum immediately preceding the maximum `a`, if any.
    pub fn preceding_min(&self, a: i64) -> Option<i64> {
        self.minima.iter().rev().copied().find(|&b| b < a)
    }

    fn check_interleaving(&self) -> Result<()> {
        let ordered = self.ordered();
        for pair in ordered.windows(2) {
            if pair[0].1 == pair[1].1 || pair[0].0 == pair[1].0 {
                return Err(Error::Consistency(format!(
                    "extrema do not interleave at {} and {}",
                    pair[0].0, pair[1].0
                )));
            }
        }
        Ok(())
    }

    /// Re-checks every listed index against the definitions using `g`.
    pub fn verify_against(&self, g: impl Fn(i64) -> Rational) -> bool {
        let ok = |n: i64, test: fn(&Rational, &Rational, &Rational) -> bool| {
            test(&g(n - 1), &g(n), &g(n + 1))
        };
        self.maxima.iter().all(|&n| ok(n, is_local_max))
            && self.minima.iter().all(|&n| ok(n, is_local_min))
            && self.check_interleaving().is_ok()
    }
}
