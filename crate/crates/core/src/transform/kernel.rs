//! Integer weights for the optimized transform kernels.
//!
//! `|f|` is multiplied by the lcm `D` of its denominators so that every kernel
//! runs on integers; results are divided by `D` when converted back. Kernels
//! are generic over the integer type and use `i128` whenever every product
//! they form provably fits.

use std::ops::{Add, Mul, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::rational::Rational;
use crate::sequence::Sequence;

pub(crate) trait Int:
    Clone
    + Ord
    + Zero
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + From<i64>
    + Into<BigInt>
    + Send
    + Sync
{
}

impl<T> Int for T where
    T: Clone
        + Ord
        + Zero
        + Add<Output = T>
        + Sub<Output = T>
        + Mul<Output = T>
        + From<i64>
        + Into<BigInt>
        + Send
        + Sync
{
}

pub(crate) enum Weights {
    Small(Vec<i128>),
    Big(Vec<BigInt>),
}

pub(crate) struct Scaled {
    pub weights: Weights,
    pub scale: BigInt,
}

impl Scaled {
    /// Scales `|f|` on its support to integers.
    pub fn new(f: &Sequence) -> Self {
        let scale = f
            .values()
            .iter()
            .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
        let big: Vec<BigInt> = f
            .values()
            .iter()
            .map(|v| (v.numer() * (&scale / v.denom())).abs())
            .collect();
        let total: BigInt = big.iter().sum();
        // Largest product any kernel forms is below total * (8W + 8).
        let headroom = BigInt::from(8 * big.len() as u64 + 8);
        let weights = if total.bits() + headroom.bits() <= 124 {
            Weights::Small(
                big.iter()
                    .map(|w| i128::try_from(w).expect("checked"))
                    .collect(),
            )
        } else {
            Weights::Big(big)
        };
        Self { weights, scale }
    }

    pub fn rational(&self, num: impl Into<BigInt>, den: impl Into<BigInt>) -> Rational {
        Rational::new(num.into(), den.into() * &self.scale)
    }
}

pub(crate) fn prefix<T: Int>(w: &[T]) -> Vec<T> {
    let mut p = Vec::with_capacity(w.len() + 1);
    let mut acc = T::zero();
    p.push(acc.clone());
    for x in w {
        acc = acc + x.clone();
        p.push(acc.clone());
    }
    p
}

pub(crate) fn int<T: Int>(n: usize) -> T {
    T::from(n as i64)
}

/// `a_num / a_den > b_num / b_den` for positive denominators.
pub(crate) fn greater<T: Int>(a_num: &T, a_den: &T, b_num: &T, b_den: &T) -> bool {
    a_num.clone() * b_den.clone() > b_num.clone() * a_den.clone()
}
