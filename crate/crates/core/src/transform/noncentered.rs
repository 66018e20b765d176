//! Non-centered maximal transform: the best average of `|f|` over any window
//! `[n - r, n + s]` containing `n`.
//!
//! Windows may be clipped to `[min(n, a), max(n, b)]`: stretching a window past
//! the support adds zeros to the numerator while the length grows.
//!
//! The fast path works on prefix sums `S`. The average over `[j + 1, m]` is the
//! slope between `(j, S(j))` and `(m, S(m))`, so `M~f(n)` is the steepest slope
//! from a point with `j <= n - 1` to a point with `m >= n`. That maximum is
//! attained between a vertex of the lower hull of the left points and a vertex
//! of the upper hull of the right points. The left hull grows as `n` sweeps
//! right; the right hull shrinks, which is handled by building it right to
//! left once and then undoing the pushes in reverse order.

use num_traits::{Signed, Zero};
use rayon::prelude::*;

use super::kernel::{greater, int, prefix, Int, Scaled, Weights};
use crate::rational::{self, Rational};
use crate::sequence::Sequence;

/// Average of `|f|` over `[n - r, n + s]`.
pub fn window_average(f: &Sequence, n: i64, r: u64, s: u64) -> Rational {
    let (r, s) = (r as i64, s as i64);
    super::centered::window_sum(f, n - r, n + s) / rational::int(r + s + 1)
}

/// Direct maximization over all clipped windows. Used as the reference.
pub(crate) fn tabulate_naive(f: &Sequence) -> Vec<Rational> {
    if f.is_zero() {
        return Vec::new();
    }
    let width = f.width();
    let mut p = Vec::with_capacity(width + 1);
    p.push(Rational::zero());
    for (_, v) in f.iter() {
        let next = p.last().unwrap() + v.abs();
        p.push(next);
    }
    let at = |i: usize| {
        let mut best = Rational::zero();
        for lo in 0..=i {
            for hi in i..width {
                let avg = (&p[hi + 1] - &p[lo]) / rational::int((hi - lo + 1) as i64);
                if avg > best {
                    best = avg;
                }
            }
        }
        best
    };
    if width >= 256 {
        (0..width).into_par_iter().map(at).collect()
    } else {
        (0..width).map(at).collect()
    }
}

pub(crate) fn tabulate_fast(f: &Sequence) -> Vec<Rational> {
    let scaled = Scaled::new(f);
    match &scaled.weights {
        Weights::Small(w) => bridge_kernel(w)
            .into_iter()
            .map(|(n, d)| scaled.rational(n, d))
            .collect(),
        Weights::Big(w) => bridge_kernel(w)
            .into_iter()
            .map(|(n, d)| scaled.rational(n, d))
            .collect(),
    }
}

/// Hull vertices are abscissae `x` into the prefix array; the point is
/// `(x, p[x])`. A window `[x1, x2 - 1]` has average `(p[x2] - p[x1]) / (x2 - x1)`.
fn bridge_kernel<T: Int>(w: &[T]) -> Vec<(T, T)> {
    let width = w.len();
    let p = prefix(w);
    let rise = |x1: usize, x2: usize| p[x2].clone() - p[x1].clone();

    // Is (x1, p[x1]) on or below the segment from (x0, p[x0]) to (x2, p[x2])?
    let on_or_below = |x0: usize, x1: usize, x2: usize| {
        rise(x0, x1) * int::<T>(x2 - x0) <= rise(x0, x2) * int::<T>(x1 - x0)
    };

    // Upper hull of {x >= i + 1}, stored with the leftmost vertex last.
    let mut right: Vec<usize> = Vec::with_capacity(width);
    let mut undo: Vec<usize> = Vec::new();
    let mut undo_len: Vec<usize> = vec![0; width];
    for i in (0..width).rev() {
        let x = i + 1;
        let mut popped = 0;
        while right.len() >= 2 {
            let t1 = right[right.len() - 1];
            let t2 = right[right.len() - 2];
            if on_or_below(x, t1, t2) {
                undo.push(right.pop().unwrap());
                popped += 1;
            } else {
                break;
            }
        }
        undo_len[i] = popped;
        right.push(x);
    }

    // Lower hull of {x <= i}, rightmost vertex last.
    let mut left: Vec<usize> = Vec::with_capacity(width + 1);
    let mut out = Vec::with_capacity(width);
    for i in 0..width {
        if i > 0 {
            // Drop vertex x = i from the right hull, restoring what it evicted.
            debug_assert_eq!(right.last(), Some(&i));
            right.pop();
            for _ in 0..undo_len[i - 1] {
                right.push(undo.pop().unwrap());
            }
        }
        let x = i;
        while left.len() >= 2 {
            let t1 = left[left.len() - 1];
            let t0 = left[left.len() - 2];
            // Remove t1 when it is on or above the segment t0 -> x.
            if rise(t0, t1) * int::<T>(x - t0) >= rise(t0, x) * int::<T>(t1 - t0) {
                left.pop();
            } else {
                break;
            }
        }
        left.push(x);
        out.push(steepest_bridge(&left, &right, &rise));
    }
    out
}

/// Alternating ascent between the two hulls. Along a strictly convex chain
/// the slope towards an outside point is unimodal, so each inner walk finds the
/// best partner; a pair that is mutually best supports both hulls and is the
/// global maximum.
fn steepest_bridge<T: Int>(
    left: &[usize],
    right: &[usize],
    rise: &impl Fn(usize, usize) -> T,
) -> (T, T) {
    let slope = |l: usize, r: usize| (rise(left[l], right[r]), int::<T>(right[r] - left[l]));
    let better = |cand: &(T, T), cur: &(T, T)| greater(&cand.0, &cand.1, &cur.0, &cur.1);
    let (mut l, mut r) = (left.len() - 1, right.len() - 1);
    let mut cur = slope(l, r);
    loop {
        let mut moved = false;
        for step in [-1isize, 1] {
            loop {
                let next = l as isize + step;
                if next < 0 || next as usize >= left.len() {
                    break;
                }
                let cand = slope(next as usize, r);
                if !better(&cand, &cur) {
                    break;
                }
                l = next as usize;
                cur = cand;
                moved = true;
            }
        }
        for step in [-1isize, 1] {
            loop {
                let next = r as isize + step;
                if next < 0 || next as usize >= right.len() {
                    break;
                }
                let cand = slope(l, next as usize);
                if !better(&cand, &cur) {
                    break;
                }
                r = next as usize;
                cur = cand;
                moved = true;
            }
        }
        if !moved {
            return cur;
        }
    }
}

/// Value at a point outside the support: the window must reach from `n` into
/// the support, and the best one ends (or starts) inside it.
pub(crate) fn outside(f: &Sequence, n: i64) -> Rational {
    let Some((a, b)) = f.support() else {
        return Rational::zero();
    };
    debug_assert!(n < a || n > b);
    let mut best = Rational::zero();
    let mut mass = Rational::zero();
    let points: Box<dyn Iterator<Item = i64>> = if n < a {
        Box::new(a..=b)
    } else {
        Box::new((a..=b).rev())
    };
    for k in points {
        mass += f.get(k).abs();
        let avg = &mass / rational::int((k - n).abs() + 1);
        if avg > best {
            best = avg;
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    #[test]
    fn window_average_examples() {
        let ex2 = Sequence::from_ints(-4, &[10, 0, 0, 0, 0, 0, 0, 0, 10]);
        assert_eq!(window_average(&Sequence::delta(0), 2, 2, 0), frac(1, 3));
        let f = Sequence::from_ints(-1, &[3, -5, 2]);
        assert_eq!(window_average(&f, 0, 0, 0), int(5));
        assert_eq!(window_average(&ex2, 0, 4, 4), frac(20, 9));
    }

    #[test]
    fn fast_matches_naive_on_small_cases() {
        for values in [
            vec![1],
            vec![1, 1],
            vec![3, 0, 0, 1, 4],
            vec![1, 0, 5, 0, 1, 2, 7, 0, 0, 3],
            vec![10, 0, 0, 0, 0, 0, 0, 0, 10],
            vec![2, 2, 2, 2],
        ] {
            let f = Sequence::from_ints(3, &values);
            assert_eq!(tabulate_fast(&f), tabulate_naive(&f), "{values:?}");
        }
    }

    #[test]
    fn outside_spike() {
        assert_eq!(outside(&Sequence::delta(0), -3), frac(1, 4));
        assert_eq!(outside(&Sequence::delta(0), 9), frac(1, 10));
    }
}
