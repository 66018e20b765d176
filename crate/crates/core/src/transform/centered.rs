//! Centered maximal transform `Mf(n) = max_r A_r|f|(n)`.
//!
//! Truncation: for `n` in the support `[a, b]` the maximum is attained with
//! `r <= max(n - a, b - n)`. Past that radius the window already covers the
//! support, so the numerator is frozen at `||f||_1` while `2r + 1` grows.
//! The smallest maximizing radius is recorded.

use num_traits::{Signed, Zero};
use rayon::prelude::*;

use super::kernel::{greater, int, prefix, Int, Scaled, Weights};
use crate::rational::{self, Rational};
use crate::sequence::Sequence;

/// `A_r|f|(n) = (2r + 1)^-1 sum_{k=-r..r} |f(n + k)|`.
pub fn centered_average(f: &Sequence, n: i64, r: u64) -> Rational {
    let r = r as i64;
    window_sum(f, n - r, n + r) / rational::int(2 * r + 1)
}

pub(crate) fn window_sum(f: &Sequence, lo: i64, hi: i64) -> Rational {
    let Some((a, b)) = f.support() else {
        return Rational::zero();
    };
    let (lo, hi) = (lo.max(a), hi.min(b));
    (lo..=hi)
        .filter_map(|k| f.get_ref(k))
        .map(|v| v.abs())
        .sum()
}

const PARALLEL_MIN_WIDTH: usize = 1024;

fn kernel<T: Int>(w: &[T]) -> Vec<(T, T, u64)> {
    let p = prefix(w);
    let width = w.len();
    let at = |i: usize| {
        let reach = i.max(width - 1 - i);
        let mut best = (w[i].clone(), T::from(1), 0u64);
        for r in 1..=reach {
            let lo = i.saturating_sub(r);
            let hi = (i + r).min(width - 1);
            let num = p[hi + 1].clone() - p[lo].clone();
            let den: T = int(2 * r + 1);
            // Strict improvement keeps the smallest maximizing radius.
            if greater(&num, &den, &best.0, &best.1) {
                best = (num, den, r as u64);
            }
        }
        best
    };
    if width >= PARALLEL_MIN_WIDTH {
        (0..width).into_par_iter().map(at).collect()
    } else {
        (0..width).map(at).collect()
    }
}

/// Values and smallest optimal radii on the support of `f` (nonzero).
pub(crate) fn tabulate(f: &Sequence) -> (Vec<Rational>, Vec<u64>) {
    let scaled = Scaled::new(f);
    let rows: Vec<(Rational, u64)> = match &scaled.weights {
        Weights::Small(w) => kernel(w)
            .into_iter()
            .map(|(n, d, r)| (scaled.rational(n, d), r))
            .collect(),
        Weights::Big(w) => kernel(w)
            .into_iter()
            .map(|(n, d, r)| (scaled.rational(n, d), r))
            .collect(),
    };
    rows.into_iter().unzip()
}

/// Value and smallest optimal radius at a point outside the support.
///
/// For `n < a` every radius below `a - n` sees no mass, and past `b - n` the
/// window covers the support.
pub(crate) fn outside(f: &Sequence, n: i64) -> (Rational, u64) {
    let Some((a, b)) = f.support() else {
        return (Rational::zero(), 0);
    };
    debug_assert!(n < a || n > b);
    let (near, far) = if n < a {
        (a - n, b - n)
    } else {
        (n - b, n - a)
    };
    let mut best = (Rational::zero(), 0u64);
    let mut mass = Rational::zero();
    for r in near..=far {
        let k = if n < a { n + r } else { n - r };
        mass += f.get(k).abs();
        let avg = &mass / rational::int(2 * r + 1);
        if avg > best.0 {
            best = (avg, r as u64);
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    #[test]
    fn average_examples() {
        let ex2 = Sequence::from_ints(-4, &[10, 0, 0, 0, 0, 0, 0, 0, 10]);
        assert_eq!(centered_average(&Sequence::delta(0), 0, 0), int(1));
        assert_eq!(centered_average(&ex2, 0, 4), frac(20, 9));
        assert_eq!(centered_average(&Sequence::delta(0), 2, 1), int(0));
    }

    #[test]
    fn ex2_center_radius() {
        let ex2 = Sequence::from_ints(-4, &[10, 0, 0, 0, 0, 0, 0, 0, 10]);
        let (values, radii) = tabulate(&ex2);
        assert_eq!(values[4], frac(20, 9));
        assert_eq!(radii[4], 4);
        assert_eq!(values[0], int(10));
        assert_eq!(radii[0], 0);
    }

    #[test]
    fn outside_spike() {
        assert_eq!(outside(&Sequence::delta(0), 7), (frac(1, 15), 7));
        assert_eq!(outside(&Sequence::delta(0), -3), (frac(1, 7), 3));
    }
}
