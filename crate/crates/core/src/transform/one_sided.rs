//! One-sided maximal transforms
//!
//! ```text
//! M_R f(n) = max_s (s + 1/2)^-1 ( |f(n)|/2 + sum_{k=1..s} |f(n+k)| )
//! ```
//!
//! and `M_L` symmetrically. Doubling numerator and denominator gives
//! `(|f(n)| + 2 sum) / (2s + 1)`: the density of an item list whose head is
//! `(mass |f(n)|, length 1)` followed by items `(2|f(k)|, 2)`.
//!
//! The sweep runs right to left and keeps, for every start `i`, the maximal
//! block `[i, end(i)]` of the decomposition of the suffix into segments of
//! strictly decreasing density. Those block boundaries are the vertices of the
//! upper hull of the suffix prefix-sum points, and the `end` pointers store
//! that hull persistently. The best window from `i` is found by absorbing
//! blocks while the running density does not exceed the next block's. The
//! half-weight head never absorbs more blocks than the full-weight one does
//! (its running density is always at least as large), so the whole sweep is
//! linear.

use num_traits::{Signed, Zero};

use super::kernel::{int, Int, Scaled, Weights};
use super::Side;
use crate::rational::{self, Rational};
use crate::sequence::Sequence;

/// Exact one-sided value by scanning every reach up to the support edge.
pub fn one_sided_value(f: &Sequence, n: i64, side: Side) -> Rational {
    let Some((a, b)) = f.support() else {
        return Rational::zero();
    };
    let (reach, dir) = match side {
        Side::Right => (b - n, 1),
        Side::Left => (n - a, -1),
    };
    let head = f.get(n).abs();
    let mut best = head.clone();
    let mut num = head;
    let two = rational::int(2);
    for s in 1..=reach {
        num += &two * f.get(n + dir * s).abs();
        let avg = &num / rational::int(2 * s + 1);
        if avg > best {
            best = avg;
        }
    }
    best
}

pub(crate) fn tabulate_scan(f: &Sequence, side: Side) -> Vec<Rational> {
    let Some((a, b)) = f.support() else {
        return Vec::new();
    };
    (a..=b).map(|n| one_sided_value(f, n, side)).collect()
}

pub(crate) fn tabulate_hull(f: &Sequence, side: Side) -> Vec<Rational> {
    if side == Side::Left {
        let mut values = tabulate_hull(&f.reflect(), Side::Right);
        values.reverse();
        return values;
    }
    let scaled = Scaled::new(f);
    match &scaled.weights {
        Weights::Small(w) => right_kernel(w)
            .into_iter()
            .map(|(n, d)| scaled.rational(n, d))
            .collect(),
        Weights::Big(w) => right_kernel(w)
            .into_iter()
            .map(|(n, d)| scaled.rational(n, d))
            .collect(),
    }
}

fn right_kernel<T: Int>(w: &[T]) -> Vec<(T, T)> {
    let width = w.len();
    let two = T::from(2);
    let mut end = vec![0usize; width];
    let mut mass: Vec<T> = vec![T::zero(); width];
    let mut len = vec![0usize; width];
    let mut out = vec![(T::zero(), T::from(1)); width];
    for i in (0..width).rev() {
        // Half-weight head; absorbed blocks count double.
        let (mut num, mut den) = (w[i].clone(), T::from(1));
        let mut q = i + 1;
        while q < width && num.clone() * int::<T>(len[q]) <= mass[q].clone() * den.clone() {
            num = num + two.clone() * mass[q].clone();
            den = den + int::<T>(2 * len[q]);
            q = end[q] + 1;
        }
        out[i] = (num, den);

        // Full-weight block starting at i.
        let (mut m, mut l, mut e) = (w[i].clone(), 1usize, i);
        while e + 1 < width && m.clone() * int::<T>(len[e + 1]) <= mass[e + 1].clone() * int::<T>(l)
        {
            m = m + mass[e + 1].clone();
            l += len[e + 1];
            e = end[e + 1];
        }
        end[i] = e;
        mass[i] = m;
        len[i] = l;
    }
    out
}

/// Value at a point outside the support.
pub(crate) fn outside(f: &Sequence, n: i64, side: Side) -> Rational {
    one_sided_value(f, n, side)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    #[test]
    fn spike_values() {
        let d = Sequence::delta(0);
        assert_eq!(one_sided_value(&d, 0, Side::Right), int(1));
        assert_eq!(one_sided_value(&d, -1, Side::Right), frac(2, 3));
        assert_eq!(one_sided_value(&d, -1, Side::Left), int(0));
        assert_eq!(one_sided_value(&d, 5, Side::Right), int(0));
    }

    #[test]
    fn hull_matches_scan_on_small_cases() {
        for values in [
            vec![1],
            vec![1, 3],
            vec![3, 0, 0, 1, 4],
            vec![1, 0, 5, 0, 1, 2, 7, 0, 0, 3],
            vec![5, 4, 3, 2, 1],
            vec![1, 2, 3, 4, 5],
            vec![2, 2, 2, 2],
        ] {
            let f = Sequence::from_ints(-2, &values);
            for side in [Side::Left, Side::Right] {
                assert_eq!(
                    tabulate_hull(&f, side),
                    tabulate_scan(&f, side),
                    "{values:?} {side:?}"
                );
            }
        }
    }
}
