use num_traits::{Signed, Zero};
use serde::Serialize;

use super::lemma::{centered_constant, lemma_bound, lemma_sum_left_terminated, IncreasingIntSeq};
use super::{CheckInput, CheckName, Outcome, VerificationReport, Witness};
use crate::error::{Error, Result};
use crate::extrema::{ExtremaChain, ExtremumKind};
use crate::rational::{self, Rational};
use crate::sequence::Sequence;
use crate::transform::{self, centered_average, Kind, MaximalTransform, Side};

fn require_nonzero(f: &Sequence) -> Result<()> {
    if f.is_zero() {
        Err(Error::Precondition("sequence must be nonzero".into()))
    } else {
        Ok(())
    }
}

/// `lhs <= rhs` with `ratio = lhs / denominator` (vacuous when it is zero).
fn ratio_check(
    name: CheckName,
    f: &Sequence,
    lhs: Rational,
    rhs: Rational,
    denominator: Rational,
    note: &str,
) -> VerificationReport {
    let input = CheckInput::sequence(f);
    if denominator.is_zero() {
        return VerificationReport::new(name, input, Outcome::Vacuous);
    }
    let ratio = &lhs / &denominator;
    if lhs <= rhs {
        VerificationReport::new(name, input, Outcome::Holds).with_ratio(ratio)
    } else {
        let mut report = VerificationReport::new(name, input, Outcome::Violated).with_ratio(ratio);
        report.witness.push(Witness::new(None, lhs, rhs, note));
        report
    }
}

/// `Var(M~f) <= Var(f)`.
pub fn check_tanaka(f: &Sequence) -> Result<VerificationReport> {
    let var_max = transform::noncentered(f).total_variation()?;
    let var_f = f.total_variation();
    Ok(ratio_check(
        CheckName::Tanaka,
        f,
        var_max,
        var_f.clone(),
        var_f,
        "Var(noncentered) exceeds Var(f)",
    ))
}

/// `Var(Mf) <= (776/315) ||f||_1`, ratio `Var(Mf) / ||f||_1`.
pub fn check_centered_bound(f: &Sequence) -> Result<VerificationReport> {
    let var_max = transform::centered(f).total_variation()?;
    let l1 = f.l1_norm();
    Ok(ratio_check(
        CheckName::CenteredBound,
        f,
        var_max,
        centered_constant() * &l1,
        l1,
        "Var(centered) exceeds (776/315)*||f||_1",
    ))
}

/// Whether `Var(Mf) <= Var(f)`. A violation is a counterexample to an open
/// question, not a defect.
pub fn check_question_b(f: &Sequence) -> Result<VerificationReport> {
    let var_max = transform::centered(f).total_variation()?;
    let var_f = f.total_variation();
    Ok(ratio_check(
        CheckName::QuestionB,
        f,
        var_max,
        var_f.clone(),
        var_f,
        "Var(centered) exceeds Var(f)",
    ))
}

#[derive(Debug, Serialize)]
struct TouchDetail {
    kind: Kind,
    maxima: Vec<i64>,
    touching: usize,
}

/// Every local maximum `n` of the chosen transform of `|f|` has
/// `T(n) = |f(n)|`. Expected to fail for the centered kind.
pub fn check_local_max_touch(f: &Sequence, kind: Kind) -> Result<VerificationReport> {
    let t = transform::transform(f, kind);
    let chain = t.extrema_chain()?;
    let mut witness = Vec::new();
    for &n in &chain.maxima {
        let (value, base) = (t.value_at(n), f.get(n).abs());
        if value != base {
            witness.push(Witness::new(
                Some(n),
                value,
                base,
                "local maximum does not touch |f|",
            ));
        }
    }
    let outcome = if witness.is_empty() {
        Outcome::Holds
    } else {
        Outcome::Violated
    };
    let detail = TouchDetail {
        kind,
        touching: chain.maxima.len() - witness.len(),
        maxima: chain.maxima,
    };
    let mut report =
        VerificationReport::new(CheckName::Touch, CheckInput::with_kind(f, kind), outcome)
            .with_detail(&detail);
    report.witness = witness;
    Ok(report)
}

/// Pointwise comparison of `M~f(n)` with `max(M_L f(n), M_R f(n))`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OneSidedCensus {
    pub range: (i64, i64),
    pub less: usize,
    pub equal: usize,
    pub greater: usize,
    /// Points where `M~f(n) < max(M_L f(n), M_R f(n))`.
    pub strict: Vec<StrictPoint>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StrictPoint {
    pub n: i64,
    #[serde(with = "rational::as_string")]
    pub noncentered: Rational,
    #[serde(with = "rational::as_string")]
    pub one_sided_max: Rational,
}

/// Asserts `M~f <= max(M_L f, M_R f)` on `[a - W, b + W]` and records every
/// point where the inequality is strict.
pub fn check_one_sided_relation(f: &Sequence) -> Result<VerificationReport> {
    require_nonzero(f)?;
    let (a, b) = f.support().expect("nonzero");
    let w = f.width() as i64;
    let tilde = transform::noncentered(f);
    let left = transform::one_sided(f, Side::Left);
    let right = transform::one_sided(f, Side::Right);
    let mut census = OneSidedCensus {
        range: (a - w, b + w),
        less: 0,
        equal: 0,
        greater: 0,
        strict: Vec::new(),
    };
    let mut witness = Vec::new();
    for n in a - w..=b + w {
        let nc = tilde.value_at(n);
        let side_max = std::cmp::max(left.value_at(n), right.value_at(n));
        match nc.cmp(&side_max) {
            std::cmp::Ordering::Less => {
                census.less += 1;
                census.strict.push(StrictPoint {
                    n,
                    noncentered: nc,
                    one_sided_max: side_max,
                });
            }
            std::cmp::Ordering::Equal => census.equal += 1,
            std::cmp::Ordering::Greater => {
                census.greater += 1;
                witness.push(Witness::new(
                    Some(n),
                    nc,
                    side_max,
                    "noncentered exceeds max of one-sided values",
                ));
            }
        }
    }
    let outcome = if witness.is_empty() {
        Outcome::Holds
    } else {
        Outcome::Violated
    };
    let mut report = VerificationReport::new(CheckName::OneSided, CheckInput::sequence(f), outcome)
        .with_detail(&census);
    report.witness = witness;
    Ok(report)
}

/// `2 sum T(a_i) - 2 sum T(b_i)` over the extrema chain, where a minimum at
/// either end of the chain contributes nothing (the tail on its outer side
/// descends to the same limit 0 it rises from).
pub fn extrema_variation_sum(t: &MaximalTransform, chain: &ExtremaChain) -> Rational {
    let ordered = chain.ordered();
    let last = ordered.len().saturating_sub(1);
    let two = rational::int(2);
    ordered
        .iter()
        .enumerate()
        .map(|(i, &(n, kind))| match kind {
            ExtremumKind::Max => &two * t.value_at(n),
            ExtremumKind::Min if i == 0 || i == last => Rational::zero(),
            ExtremumKind::Min => -(&two * t.value_at(n)),
        })
        .sum()
}

#[derive(Debug, Serialize)]
struct IdentityDetail {
    kind: Kind,
    chain: ExtremaChain,
    #[serde(with = "rational::as_string")]
    telescoping: Rational,
    #[serde(with = "rational::as_string")]
    extrema_sum: Rational,
}

/// Variation computed by telescoping with tails equals the alternating
/// extrema sum.
pub fn check_extrema_variation_identity(f: &Sequence, kind: Kind) -> Result<VerificationReport> {
    require_nonzero(f)?;
    let t = transform::transform(f, kind);
    let telescoping = t.total_variation()?;
    let chain = t.extrema_chain()?;
    let extrema_sum = extrema_variation_sum(&t, &chain);
    let outcome = if telescoping == extrema_sum {
        Outcome::Holds
    } else {
        Outcome::Violated
    };
    let mut report = VerificationReport::new(
        CheckName::ExtremaIdentity,
        CheckInput::with_kind(f, kind),
        outcome,
    )
    .with_detail(&IdentityDetail {
        kind,
        chain,
        telescoping: telescoping.clone(),
        extrema_sum: extrema_sum.clone(),
    });
    if outcome == Outcome::Violated {
        report.witness.push(Witness::new(
            None,
            telescoping,
            extrema_sum,
            "variation mismatch",
        ));
    }
    Ok(report)
}

/// The chain `Var(Mf) <= link1 <= link2 <= link3` for `|f|`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AuditDetail {
    pub maxima: Vec<i64>,
    /// Smallest optimal radius at each maximum.
    pub radii: Vec<u64>,
    /// Preceding minimum and its radius `r_i + (a_i - b_i)`, per maximum.
    pub paired_minima: Vec<Option<(i64, u64)>>,
    #[serde(with = "rational::as_string")]
    pub variation: Rational,
    /// `2 sum_i (A_{r_i} f(a_i) - A_{s_i} f(b_i))`.
    #[serde(with = "rational::as_string")]
    pub average_sum: Rational,
    /// `2 sum_n |f(n)| * L(n)`, `L` the left-terminated lemma sum over maxima.
    #[serde(with = "rational::as_string")]
    pub contribution_sum: Rational,
    /// `(8/3) ||f||_1`.
    #[serde(with = "rational::as_string")]
    pub l1_bound: Rational,
}

/// Rebuilds the bound on `Var(Mf)` from the smallest optimal radii at the
/// local maxima, pairing each maximum with the minimum just before it. The
/// first maximum has no partner and contributes `2 A_{r} f(a)` on its own.
pub fn contribution_bound_audit(f: &Sequence) -> Result<VerificationReport> {
    require_nonzero(f)?;
    let g = f.abs();
    let t = transform::centered(&g);
    let variation = t.total_variation()?;
    let chain = t.extrema_chain()?;
    let two = rational::int(2);

    let mut radii = Vec::new();
    let mut paired = Vec::new();
    let mut average_sum = Rational::zero();
    for &a in &chain.maxima {
        let r = t.radius_at(a).expect("centered transform has radii");
        radii.push(r);
        average_sum += &two * centered_average(&g, a, r);
        let partner = chain.preceding_min(a).map(|b| (b, r + (a - b) as u64));
        if let Some((b, s)) = partner {
            average_sum -= &two * centered_average(&g, b, s);
        }
        paired.push(partner);
    }

    let maxima = IncreasingIntSeq::new(chain.maxima.clone())?;
    let contribution_sum: Rational = g
        .iter()
        .map(|(n, v)| &two * v * lemma_sum_left_terminated(n, &maxima))
        .sum();
    let l1_bound = &two * lemma_bound() * g.l1_norm();

    let links = [
        (
            &variation,
            &average_sum,
            "Var(Mf) exceeds the sum of paired averages",
        ),
        (
            &average_sum,
            &contribution_sum,
            "paired averages exceed per-point contributions",
        ),
        (
            &contribution_sum,
            &l1_bound,
            "per-point contributions exceed (8/3)||f||_1",
        ),
    ];
    let mut witness = Vec::new();
    for (i, (lhs, rhs, note)) in links.iter().enumerate() {
        if lhs > rhs {
            witness.push(Witness::new(
                Some(i as i64 + 1),
                (*lhs).clone(),
                (*rhs).clone(),
                note,
            ));
        }
    }
    let outcome = if witness.is_empty() {
        Outcome::Holds
    } else {
        Outcome::Violated
    };
    let ratio = &variation / g.l1_norm();
    let detail = AuditDetail {
        maxima: chain.maxima,
        radii,
        paired_minima: paired,
        variation,
        average_sum,
        contribution_sum,
        l1_bound,
    };
    let mut report = VerificationReport::new(CheckName::Audit, CheckInput::sequence(f), outcome)
        .with_ratio(ratio)
        .with_detail(&detail);
    report.witness = witness;
    Ok(report)
}
