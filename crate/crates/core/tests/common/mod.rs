//! Brute-force oracles written straight from the definitions, plus seeded
//! generators. Nothing here calls into the transform or verify modules.
#![allow(dead_code)]

use dtm_core::rational::{frac, int};
use dtm_core::{Rational, Sequence, Side};
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn mag(f: &Sequence, k: i64) -> Rational {
    f.get(k).abs()
}

fn sum(f: &Sequence, lo: i64, hi: i64) -> Rational {
    (lo..=hi).map(|k| mag(f, k)).sum()
}

/// Radii up to this bound cover every window that can matter, with slack.
fn reach(f: &Sequence, n: i64) -> i64 {
    match f.support() {
        Some((a, b)) => (n - a).abs().max((n - b).abs()) + 3,
        None => 3,
    }
}

/// `max_r (2r+1)^-1 sum_{|k|<=r} |f(n+k)|` and the first radius attaining it.
pub fn centered(f: &Sequence, n: i64) -> (Rational, u64) {
    let mut best = (Rational::zero(), 0);
    for r in 0..=reach(f, n) {
        let avg = sum(f, n - r, n + r) / int(2 * r + 1);
        if avg > best.0 {
            best = (avg, r as u64);
        }
    }
    best
}

/// `max_{r,s} (r+s+1)^-1 sum_{-r<=k<=s} |f(n+k)|`.
pub fn noncentered(f: &Sequence, n: i64) -> Rational {
    let big = reach(f, n);
    let mut best = Rational::zero();
    for r in 0..=big {
        for s in 0..=big {
            let avg = sum(f, n - r, n + s) / int(r + s + 1);
            if avg > best {
                best = avg;
            }
        }
    }
    best
}

/// `max_s (s + 1/2)^-1 (|f(n)|/2 + sum_{k=1..s} |f(n +- k)|)`.
pub fn one_sided(f: &Sequence, n: i64, side: Side) -> Rational {
    let dir = if side == Side::Right { 1 } else { -1 };
    let mut best = Rational::zero();
    for s in 0..=reach(f, n) {
        let num = mag(f, n) * frac(1, 2) + (1..=s).map(|k| mag(f, n + dir * k)).sum::<Rational>();
        let avg = num / (int(s) + frac(1, 2));
        if avg > best {
            best = avg;
        }
    }
    best
}

/// Variation over `Z` of a function that is tabulated on `[lo, hi]` and
/// decays monotonically to 0 outside it.
pub fn variation_with_tails(values: &[Rational]) -> Rational {
    let (Some(first), Some(last)) = (values.first(), values.last()) else {
        return Rational::zero();
    };
    let inner: Rational = values.windows(2).map(|w| (&w[1] - &w[0]).abs()).sum();
    first.abs() + inner + last.abs()
}

/// Variation over `Z` of `g` by tabulating a generous window; checks that the
/// tails really are monotone on 5 extra points per side.
pub fn variation_of(f: &Sequence, g: impl Fn(i64) -> Rational) -> Rational {
    let Some((a, b)) = f.support() else {
        return Rational::zero();
    };
    let (lo, hi) = (a - 8, b + 8);
    for k in lo - 5..lo {
        assert!(g(k) <= g(k + 1), "left tail not monotone at {k}");
    }
    for k in hi..hi + 5 {
        assert!(g(k) >= g(k + 1), "right tail not monotone at {k}");
    }
    let values: Vec<Rational> = (lo..=hi).map(g).collect();
    variation_with_tails(&values)
}

/// Variation of a finitely supported sequence, straight from the definition.
pub fn sequence_variation(f: &Sequence) -> Rational {
    let Some((a, b)) = f.support() else {
        return Rational::zero();
    };
    (a - 1..=b).map(|k| (f.get(k + 1) - f.get(k)).abs()).sum()
}

/// Nonzero integer sequence with width in `1..=max_width` and values in
/// `[lo, hi]`, placed at a random offset.
pub fn random_ints(rng: &mut ChaCha8Rng, max_width: usize, lo: i64, hi: i64) -> Sequence {
    loop {
        let width = rng.random_range(1..=max_width);
        let values: Vec<i64> = (0..width).map(|_| rng.random_range(lo..=hi)).collect();
        let f = Sequence::trimmed(
            rng.random_range(-20..=20),
            values.into_iter().map(int).collect(),
        );
        if !f.is_zero() {
            return f;
        }
    }
}

/// Nonzero sequence with signed rational values `p/q`, `|p| <= 9`, `q <= 6`.
pub fn random_rationals(rng: &mut ChaCha8Rng, max_width: usize) -> Sequence {
    loop {
        let width = rng.random_range(1..=max_width);
        let values: Vec<Rational> = (0..width)
            .map(|_| frac(rng.random_range(-9..=9), rng.random_range(1..=6)))
            .collect();
        let f = Sequence::trimmed(rng.random_range(-20..=20), values);
        if !f.is_zero() {
            return f;
        }
    }
}
