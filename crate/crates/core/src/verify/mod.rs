//! Exact checkers returning structured evidence.
//!
//! Every check is a deterministic function of its [`CheckInput`], so any
//! report (in particular one with `outcome = violated`) can be re-derived from
//! its serialized input alone via [`VerificationReport::recheck`].

mod checks;
mod lemma;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};
use crate::sequence::Sequence;
use crate::transform::Kind;

pub use checks::{
    check_centered_bound, check_extrema_variation_identity, check_local_max_touch,
    check_one_sided_relation, check_question_b, check_tanaka, contribution_bound_audit,
    extrema_variation_sum, AuditDetail, OneSidedCensus,
};
pub use lemma::{
    centered_constant, check_key_inequality, check_lemma_bounds, key_inequality_sides, lemma_bound,
    lemma_gap2_bound, lemma_sum, lemma_sum_left_terminated, pair_term, IncreasingIntSeq,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckName {
    Tanaka,
    CenteredBound,
    QuestionB,
    Touch,
    OneSided,
    ExtremaIdentity,
    Audit,
    KeyInequality,
    LemmaBounds,
}

impl CheckName {
    pub const ALL: [CheckName; 9] = [
        CheckName::Tanaka,
        CheckName::CenteredBound,
        CheckName::QuestionB,
        CheckName::Touch,
        CheckName::OneSided,
        CheckName::ExtremaIdentity,
        CheckName::Audit,
        CheckName::KeyInequality,
        CheckName::LemmaBounds,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            CheckName::Tanaka => "tanaka",
            CheckName::CenteredBound => "centered-bound",
            CheckName::QuestionB => "question-b",
            CheckName::Touch => "touch",
            CheckName::OneSided => "one-sided",
            CheckName::ExtremaIdentity => "extrema-identity",
            CheckName::Audit => "audit",
            CheckName::KeyInequality => "key-inequality",
            CheckName::LemmaBounds => "lemma-bounds",
        }
    }
}

impl fmt::Display for CheckName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CheckName {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Self::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| format!("unknown check {s:?}"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Holds,
    Violated,
    Vacuous,
}

/// Canonical input of a check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CheckInput {
    Sequence {
        sequence: Sequence,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        kind: Option<Kind>,
    },
    Pair {
        n: i64,
        m: i64,
    },
    Lemma {
        n: i64,
        a: IncreasingIntSeq,
    },
}

impl CheckInput {
    pub fn sequence(f: &Sequence) -> Self {
        CheckInput::Sequence {
            sequence: f.clone(),
            kind: None,
        }
    }

    pub fn with_kind(f: &Sequence, kind: Kind) -> Self {
        CheckInput::Sequence {
            sequence: f.clone(),
            kind: Some(kind),
        }
    }
}

/// Both sides of a failed comparison, optionally at an index.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub index: Option<i64>,
    #[serde(with = "rational::as_string")]
    pub lhs: Rational,
    #[serde(with = "rational::as_string")]
    pub rhs: Rational,
    pub note: String,
}

impl Witness {
    pub fn new(index: Option<i64>, lhs: Rational, rhs: Rational, note: &str) -> Self {
        Self {
            index,
            lhs,
            rhs,
            note: note.to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub name: CheckName,
    pub input: CheckInput,
    pub outcome: Outcome,
    #[serde(
        with = "rational::opt_string",
        default,
        skip_serializing_if = "Option::is_none"
    )]
    pub ratio: Option<Rational>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub witness: Vec<Witness>,
    #[serde(default, skip_serializing_if = "serde_json::Value::is_null")]
    pub detail: serde_json::Value,
}

impl VerificationReport {
    pub(crate) fn new(name: CheckName, input: CheckInput, outcome: Outcome) -> Self {
        Self {
            name,
            input,
            outcome,
            ratio: None,
            witness: Vec::new(),
            detail: serde_json::Value::Null,
        }
    }

    pub(crate) fn with_ratio(mut self, ratio: Rational) -> Self {
        self.ratio = Some(ratio);
        self
    }

    pub(crate) fn with_detail(mut self, detail: &impl Serialize) -> Self {
        self.detail = serde_json::to_value(detail).expect("detail serialization");
        self
    }

    pub fn holds(&self) -> bool {
        self.outcome != Outcome::Violated
    }

    /// One JSON line.
    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("report serialization")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Domain(format!("bad report: {e}")))
    }

    /// Re-runs the check from the serialized input and compares.
    pub fn recheck(&self) -> Result<bool> {
        Ok(run(self.name, &self.input)? == *self)
    }
}

/// Dispatches a named check on a canonical input.
pub fn run(name: CheckName, input: &CheckInput) -> Result<VerificationReport> {
    let mismatch = || Error::Precondition(format!("input does not fit check {name}"));
    match (name, input) {
        (CheckName::KeyInequality, CheckInput::Pair { n, m }) => check_key_inequality(*n, *m),
        (CheckName::LemmaBounds, CheckInput::Lemma { n, a }) => Ok(check_lemma_bounds(*n, a)),
        (_, CheckInput::Sequence { sequence: f, kind }) => match name {
            CheckName::Tanaka => check_tanaka(f),
            CheckName::CenteredBound => check_centered_bound(f),
            CheckName::QuestionB => check_question_b(f),
            CheckName::Touch => check_local_max_touch(f, kind.ok_or_else(mismatch)?),
            CheckName::OneSided => check_one_sided_relation(f),
            CheckName::ExtremaIdentity => {
                check_extrema_variation_identity(f, kind.ok_or_else(mismatch)?)
            }
            CheckName::Audit => contribution_bound_audit(f),
            CheckName::KeyInequality | CheckName::LemmaBounds => Err(mismatch()),
        },
        _ => Err(mismatch()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn check_names_round_trip() {
        for c in CheckName::ALL {
            assert_eq!(c.as_str().parse::<CheckName>(), Ok(c));
            assert_eq!(
                serde_json::to_string(&c).unwrap(),
                format!("\"{}\"", c.as_str())
            );
        }
        assert!("nope".parse::<CheckName>().is_err());
    }

    #[test]
    fn inputs_deserialize_to_the_right_variant() {
        let pair: CheckInput = serde_json::from_str(r#"{"n":0,"m":2}"#).unwrap();
        assert_eq!(pair, CheckInput::Pair { n: 0, m: 2 });
        let lemma: CheckInput = serde_json::from_str(r#"{"n":1,"a":[0,2]}"#).unwrap();
        assert!(matches!(lemma, CheckInput::Lemma { n: 1, .. }));
        let seq: CheckInput =
            serde_json::from_str(r#"{"sequence":{"offset":0,"values":["1"]},"kind":"centered"}"#)
                .unwrap();
        assert_eq!(
            seq,
            CheckInput::with_kind(&Sequence::delta(0), Kind::Centered)
        );
    }

    #[test]
    fn reports_round_trip_and_recheck() {
        let report = check_key_inequality(3, 9).unwrap();
        let back = VerificationReport::from_json(&report.to_json_line()).unwrap();
        assert_eq!(back, report);
        assert!(back.recheck().unwrap());
    }
}
