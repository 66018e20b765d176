//! Sums over strictly increasing integer sequences that bound how much a single
//! point `f(n)` can contribute to the variation of the centered transform.

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::{CheckInput, CheckName, Outcome, VerificationReport, Witness};
use crate::error::{Error, Result};
use crate::rational::{self, Rational};

/// Universal bound on [`lemma_sum`].
pub fn lemma_bound() -> Rational {
    rational::frac(4, 3)
}

/// Bound on [`lemma_sum`] when consecutive terms differ by at least 2:
/// `1 + 1/5 + 1/7 - 1/9`.
pub fn lemma_gap2_bound() -> Rational {
    rational::frac(388, 315)
}

/// Constant in `Var(Mf) <= C ||f||_1`: `2 + 146/315`.
pub fn centered_constant() -> Rational {
    rational::frac(776, 315)
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<i64>", into = "Vec<i64>")]
pub struct IncreasingIntSeq {
    terms: Vec<i64>,
}

impl IncreasingIntSeq {
    pub fn new(terms: Vec<i64>) -> Result<Self> {
        if let Some(w) = terms.windows(2).find(|w| w[0] >= w[1]) {
            return Err(Error::Precondition(format!(
                "sequence must be strictly increasing ({} then {})",
                w[0], w[1]
            )));
        }
        Ok(Self { terms })
    }

    pub fn terms(&self) -> &[i64] {
        &self.terms
    }

    pub fn min_gap(&self) -> Option<i64> {
        self.terms.windows(2).map(|w| w[1] - w[0]).min()
    }

    /// Whether the refined bound applies: at least one gap, all of them `>= 2`.
    pub fn gaps_at_least_two(&self) -> bool {
        self.min_gap().is_some_and(|g| g >= 2)
    }
}

impl TryFrom<Vec<i64>> for IncreasingIntSeq {
    type Error = Error;

    fn try_from(terms: Vec<i64>) -> Result<Self> {
        Self::new(terms)
    }
}

impl From<IncreasingIntSeq> for Vec<i64> {
    fn from(seq: IncreasingIntSeq) -> Self {
        seq.terms
    }
}

/// `1/(2d + 1) - 1/(2(d + gap) + 1)` with `d = |n - a|`.
pub fn pair_term(n: i64, a: i64, gap: i64) -> Rational {
    let d = (n - a).abs();
    rational::frac(1, 2 * d + 1) - rational::frac(1, 2 * (d + gap) + 1)
}

/// `sum_i [1/(2|n - a_i| + 1) - 1/(2(|n - a_i| + a_i - a_{i-1}) + 1)]` over
/// consecutive pairs. Fewer than two terms give `0`.
pub fn lemma_sum(n: i64, a: &IncreasingIntSeq) -> Rational {
    a.terms
        .windows(2)
        .map(|w| pair_term(n, w[1], w[1] - w[0]))
        .sum()
}

/// [`lemma_sum`] for a sequence that terminates on the left: the first term
/// has its predecessor at `-inf` and contributes `1/(2|n - a_0| + 1)`.
pub fn lemma_sum_left_terminated(n: i64, a: &IncreasingIntSeq) -> Rational {
    match a.terms.first() {
        Some(&first) => rational::frac(1, 2 * (n - first).abs() + 1) + lemma_sum(n, a),
        None => Rational::zero(),
    }
}

#[derive(Debug, Clone, Serialize)]
struct LemmaDetail {
    gaps_at_least_two: bool,
    #[serde(with = "rational::as_string")]
    bound: Rational,
}

pub fn check_lemma_bounds(n: i64, a: &IncreasingIntSeq) -> VerificationReport {
    let input = CheckInput::Lemma { n, a: a.clone() };
    if a.terms.len() < 2 {
        return VerificationReport::new(CheckName::LemmaBounds, input, Outcome::Vacuous)
            .with_ratio(Rational::zero());
    }
    let sum = lemma_sum(n, a);
    let gap2 = a.gaps_at_least_two();
    let bound = if gap2 {
        lemma_gap2_bound()
    } else {
        lemma_bound()
    };
    let outcome = if sum <= bound {
        Outcome::Holds
    } else {
        Outcome::Violated
    };
    let mut report = VerificationReport::new(CheckName::LemmaBounds, input, outcome)
        .with_ratio(sum.clone())
        .with_detail(&LemmaDetail {
            gaps_at_least_two: gap2,
            bound: bound.clone(),
        });
    if outcome == Outcome::Violated {
        report
            .witness
            .push(Witness::new(None, sum, bound, "lemma sum exceeds bound"));
    }
    report
}

/// Two sides of `1/(2m+1) - 1/(2(2m - n)+1) <= 1/(2(n+1)+1) - 1/(2(m+1)+1)`.
pub fn key_inequality_sides(n: i64, m: i64) -> (Rational, Rational) {
    let lhs = rational::frac(1, 2 * m + 1) - rational::frac(1, 2 * (m + (m - n)) + 1);
    let rhs = rational::frac(1, 2 * (n + 1) + 1) - rational::frac(1, 2 * (m + 1) + 1);
    (lhs, rhs)
}

#[derive(Debug, Clone, Serialize)]
struct KeyDetail {
    #[serde(with = "rational::as_string")]
    lhs: Rational,
    #[serde(with = "rational::as_string")]
    rhs: Rational,
    equality: bool,
}

/// Requires integers `m > n >= 0`.
pub fn check_key_inequality(n: i64, m: i64) -> Result<VerificationReport> {
    if !(0 <= n && n < m) {
        return Err(Error::Precondition(format!(
            "need 0 <= n < m, got n={n}, m={m}"
        )));
    }
    let (lhs, rhs) = key_inequality_sides(n, m);
    let outcome = if lhs <= rhs {
        Outcome::Holds
    } else {
        Outcome::Violated
    };
    let ratio = &lhs / &rhs;
    let mut report =
        VerificationReport::new(CheckName::KeyInequality, CheckInput::Pair { n, m }, outcome)
            .with_ratio(ratio)
            .with_detail(&KeyDetail {
                lhs: lhs.clone(),
                rhs: rhs.clone(),
                equality: lhs == rhs,
            });
    if outcome == Outcome::Violated {
        report
            .witness
            .push(Witness::new(None, lhs, rhs, "left side exceeds right side"));
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    fn seq(terms: &[i64]) -> IncreasingIntSeq {
        IncreasingIntSeq::new(terms.to_vec()).unwrap()
    }

    #[test]
    fn constants() {
        assert_eq!(
            int(1) + frac(1, 5) + frac(1, 7) - frac(1, 9),
            lemma_gap2_bound()
        );
        assert_eq!(int(2) + frac(146, 315), centered_constant());
        assert_eq!(int(2) * lemma_gap2_bound(), centered_constant());
    }

    #[test]
    fn lemma_sum_examples() {
        assert_eq!(lemma_sum(0, &seq(&[0, 2])), frac(4, 45));
        assert_eq!(lemma_sum(0, &seq(&[5])), int(0));
        assert_eq!(lemma_sum(0, &seq(&[0, 1])), frac(1, 3) - frac(1, 5));
        // (-1,0,1,2): a_i = 0 (d 0, gap 1), 1 (d 1, gap 1), 2 (d 2, gap 1)
        let expected =
            (int(1) - frac(1, 3)) + (frac(1, 3) - frac(1, 5)) + (frac(1, 5) - frac(1, 7));
        assert_eq!(lemma_sum(0, &seq(&[-1, 0, 1, 2])), expected);
        assert!(expected <= lemma_bound());
    }

    #[test]
    fn left_terminated_adds_first_term() {
        assert_eq!(lemma_sum_left_terminated(0, &seq(&[0])), int(1));
        assert_eq!(
            lemma_sum_left_terminated(0, &seq(&[0, 2])),
            int(1) + frac(4, 45)
        );
    }

    #[test]
    fn rejects_non_increasing() {
        assert!(IncreasingIntSeq::new(vec![1, 1]).is_err());
        assert!(IncreasingIntSeq::new(vec![3, 2]).is_err());
        assert!(serde_json::from_str::<IncreasingIntSeq>("[2,1]").is_err());
    }

    #[test]
    fn lemma_bound_reports() {
        let r = check_lemma_bounds(0, &seq(&[0, 2]));
        assert_eq!(r.outcome, Outcome::Holds);
        assert_eq!(r.ratio, Some(frac(4, 45)));
        assert_eq!(check_lemma_bounds(0, &seq(&[5])).outcome, Outcome::Vacuous);
    }

    #[test]
    fn key_inequality_examples() {
        assert_eq!(
            key_inequality_sides(0, 1),
            (frac(1, 3) - frac(1, 5), frac(1, 3) - frac(1, 5))
        );
        let (lhs, rhs) = key_inequality_sides(0, 2);
        assert_eq!((lhs, rhs), (frac(4, 45), frac(4, 21)));
        assert_eq!(check_key_inequality(0, 2).unwrap().outcome, Outcome::Holds);
        assert!(check_key_inequality(2, 2).is_err());
        assert!(check_key_inequality(-1, 2).is_err());
    }
}
