//! Canonical representatives under translation, reflection and positive
//! scaling, and the enumeration spaces of the exhaustive search.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::sequence::Sequence;

/// Translates the support to start at 0, clears denominators and divides by the
/// gcd, then keeps the lexicographically smaller of the result and its mirror
/// image. Every variation ratio is invariant under these moves.
pub fn canonicalize(f: &Sequence) -> Result<Sequence> {
    if f.is_zero() {
        return Err(Error::Precondition(
            "cannot canonicalize the zero sequence".into(),
        ));
    }
    if !f.is_nonnegative() {
        return Err(Error::Precondition(
            "canonical forms need a nonnegative sequence".into(),
        ));
    }
    let lcm = f
        .values()
        .iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
    let ints: Vec<BigInt> = f
        .values()
        .iter()
        .map(|v| v.numer() * (&lcm / v.denom()))
        .collect();
    let gcd = ints.iter().fold(BigInt::zero(), |acc, v| acc.gcd(v));
    let ints: Vec<BigInt> = ints.into_iter().map(|v| v / &gcd).collect();
    let mut mirrored = ints.clone();
    mirrored.reverse();
    let chosen = if mirrored < ints { mirrored } else { ints };
    Ok(Sequence::trimmed(
        0,
        chosen.into_iter().map(Rational::from_integer).collect(),
    ))
}

fn is_canonical(values: &[i64]) -> bool {
    let gcd = values.iter().fold(0i64, |acc, &v| acc.gcd(&v));
    gcd == 1 && values.iter().le(values.iter().rev())
}

/// Every canonical nonnegative integer sequence with support width `<= max_len`
/// and values `<= max_value`, exactly once, ordered by width and then
/// lexicographically.
pub fn enumerate_canonical(max_len: usize, max_value: i64) -> impl Iterator<Item = Sequence> {
    (1..=max_len).flat_map(move |width| {
        Odometer::new(width, max_value)
            .filter(|v| is_canonical(v))
            .map(|v| Sequence::from_ints(0, &v))
    })
}

/// Vectors of the given width over `0..=max` with nonzero ends, in
/// lexicographic order.
struct Odometer {
    digits: Vec<i64>,
    max: i64,
    done: bool,
}

impl Odometer {
    fn new(width: usize, max: i64) -> Self {
        let mut digits = vec![0; width];
        digits[0] = 1;
        digits[width - 1] = 1;
        Self {
            digits,
            max,
            done: max < 1,
        }
    }

    fn advance(&mut self) -> bool {
        let w = self.digits.len();
        for i in (0..w).rev() {
            let min = if i == 0 || i == w - 1 { 1 } else { 0 };
            if self.digits[i] < self.max {
                self.digits[i] += 1;
                return true;
            }
            self.digits[i] = min;
        }
        false
    }
}

impl Iterator for Odometer {
    type Item = Vec<i64>;

    fn next(&mut self) -> Option<Vec<i64>> {
        if self.done {
            return None;
        }
        let out = self.digits.clone();
        self.done = !self.advance();
        Some(out)
    }
}

/// Strictly increasing sequences of length `1..=max_len` inside `[lo, hi]`,
/// ordered by length and then lexicographically.
pub fn increasing_sequences(max_len: usize, lo: i64, hi: i64) -> impl Iterator<Item = Vec<i64>> {
    (1..=max_len).flat_map(move |k| Combinations::new(k, lo, hi))
}

struct Combinations {
    current: Option<Vec<i64>>,
    hi: i64,
}

impl Combinations {
    fn new(k: usize, lo: i64, hi: i64) -> Self {
        let fits = k > 0 && hi - lo + 1 >= k as i64;
        Self {
            current: fits.then(|| (0..k as i64).map(|i| lo + i).collect()),
            hi,
        }
    }
}

impl Iterator for Combinations {
    type Item = Vec<i64>;

    fn next(&mut self) -> Option<Vec<i64>> {
        let out = self.current.clone()?;
        let c = self.current.as_mut().unwrap();
        let k = c.len();
        let mut i = k;
        loop {
            if i == 0 {
                self.current = None;
                break;
            }
            i -= 1;
            // Position i may rise to hi - (k - 1 - i).
            if c[i] < self.hi - (k - 1 - i) as i64 {
                c[i] += 1;
                for j in i + 1..k {
                    c[j] = c[j - 1] + 1;
                }
                break;
            }
        }
        Some(out)
    }
}

/// Signed magnitude helper used by the stochastic search.
pub(crate) fn as_ints(f: &Sequence) -> Vec<i64> {
    f.values()
        .iter()
        .map(|v| {
            debug_assert!(v.is_integer() && !v.is_negative());
            i64::try_from(v.to_integer()).expect("small integer")
        })
        .collect()
}
