//! Finitely supported sequences `f: Z -> Q`.
//!
//! A [`Sequence`] stores the dense values on its support `[a, b]` together with
//! the offset `a`. Outside the support the value is zero. The first and last
//! stored values are always nonzero, so `[a, b]` is exactly the support; the
//! zero sequence has no stored values.
//!
//! Two serialized forms are accepted:
//!
//! * JSON: `{"offset": <int>, "values": ["<p>/<q>" | "<int>", ...]}`
//! * text: one `<index> <rational>` pair per line, indices strictly
//!   increasing, blank lines and `#` comments ignored. Missing indices are
//!   zero.

use std::fmt::Write as _;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, ParseError, Result};
use crate::rational::{self, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Sequence {
    offset: i64,
    values: Vec<Rational>,
}

/// Exponent of an `l^p` norm: a positive integer or infinity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exponent {
    Finite(u32),
    Infinity,
}

impl Exponent {
    pub fn finite(p: i64) -> Result<Self> {
        if p <= 0 {
            return Err(Error::Domain(format!(
                "norm exponent must be positive, got {p}"
            )));
        }
        u32::try_from(p)
            .map(Exponent::Finite)
            .map_err(|_| Error::Domain(format!("norm exponent {p} too large")))
    }

    fn is_exact(self) -> bool {
        matches!(self, Exponent::Finite(1) | Exponent::Infinity)
    }
}

/// Result of [`Sequence::lp_norm`].
///
/// For `p = 1` and `p = inf` the norm is rational. For other `p` only the
/// power sum `sum |f(n)|^p` is returned, which is what callers compare.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NormValue {
    Exact(Rational),
    PowerSum { p: u32, sum: Rational },
}

impl NormValue {
    pub fn value(&self) -> &Rational {
        match self {
            NormValue::Exact(v) | NormValue::PowerSum { sum: v, .. } => v,
        }
    }
}

/// Result of [`Sequence::wkp_norm`]: exact for `p` in `{1, inf}`, otherwise the
/// per-derivative power sums (the norm is their sum of `p`-th roots).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WkpNorm {
    Exact(Rational),
    PowerSums { p: u32, sums: Vec<Rational> },
}

impl Sequence {
    pub fn zero() -> Self {
        Self::default()
    }

    /// Builds a sequence whose stored values must already be support-tight.
    pub fn new(offset: i64, values: Vec<Rational>) -> Result<Self, ParseError> {
        if let Some(first) = values.first() {
            if first.is_zero() {
                return Err(ParseError::NotTight {
                    side: "first",
                    index: offset,
                });
            }
        }
        if let Some(last) = values.last() {
            if last.is_zero() {
                let index = offset + values.len() as i64 - 1;
                return Err(ParseError::NotTight {
                    side: "last",
                    index,
                });
            }
        }
        Ok(Self { offset, values })
    }

    /// Builds a sequence, dropping zero values at both ends.
    pub fn trimmed(offset: i64, mut values: Vec<Rational>) -> Self {
        let lead = values.iter().take_while(|v| v.is_zero()).count();
        if lead == values.len() {
            return Self::zero();
        }
        let tail = values.iter().rev().take_while(|v| v.is_zero()).count();
        values.truncate(values.len() - tail);
        values.drain(..lead);
        Self {
            offset: offset + lead as i64,
            values,
        }
    }

    pub fn from_ints(offset: i64, values: &[i64]) -> Self {
        Self::trimmed(offset, values.iter().map(|&v| rational::int(v)).collect())
    }

    /// The unit spike at `at`.
    pub fn delta(at: i64) -> Self {
        Self {
            offset: at,
            values: vec![rational::int(1)],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    pub fn offset(&self) -> i64 {
        self.offset
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    /// Support interval `[a, b]`, or `None` for the zero sequence.
    pub fn support(&self) -> Option<(i64, i64)> {
        if self.values.is_empty() {
            None
        } else {
            Some((self.offset, self.offset + self.values.len() as i64 - 1))
        }
    }

    pub fn width(&self) -> usize {
        self.values.len()
    }

    pub fn get(&self, n: i64) -> Rational {
        self.get_ref(n).cloned().unwrap_or_else(Rational::zero)
    }

    pub(crate) fn get_ref(&self, n: i64) -> Option<&Rational> {
        let i = n.checked_sub(self.offset)?;
        usize::try_from(i).ok().and_then(|i| self.values.get(i))
    }

    /// `(index, value)` pairs over the support.
    pub fn iter(&self) -> impl Iterator<Item = (i64, &Rational)> + '_ {
        self.values
            .iter()
            .enumerate()
            .map(move |(i, v)| (self.offset + i as i64, v))
    }

    pub fn abs(&self) -> Self {
        Self {
            offset: self.offset,
            values: self.values.iter().map(|v| v.abs()).collect(),
        }
    }

    pub fn is_nonnegative(&self) -> bool {
        self.values.iter().all(|v| !v.is_negative())
    }

    pub fn translate(&self, by: i64) -> Self {
        Self {
            offset: self.offset + by,
            values: self.values.clone(),
        }
    }

    /// `n -> f(-n)`.
    pub fn reflect(&self) -> Self {
        match self.support() {
            None => Self::zero(),
            Some((_, b)) => Self {
                offset: -b,
                values: self.values.iter().rev().cloned().collect(),
            },
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            offset: self.offset,
            values: self.values.iter().map(|v| v * c).collect(),
        }
    }

    pub fn lp_norm(&self, p: Exponent) -> NormValue {
        match p {
            Exponent::Infinity => NormValue::Exact(
                self.values
                    .iter()
                    .map(|v| v.abs())
                    .max()
                    .unwrap_or_else(Rational::zero),
            ),
            Exponent::Finite(1) => NormValue::Exact(self.values.iter().map(|v| v.abs()).sum()),
            Exponent::Finite(p) => NormValue::PowerSum {
                p,
                sum: self
                    .values
                    .iter()
                    .map(|v| num_traits::pow(v.abs(), p as usize))
                    .sum(),
            },
        }
    }

    pub fn l1_norm(&self) -> Rational {
        self.values.iter().map(|v| v.abs()).sum()
    }

    /// `k`-fold forward difference, `f'(n) = f(n+1) - f(n)`.
    pub fn derivative(&self, k: u32) -> Self {
        let mut current = self.clone();
        for _ in 0..k {
            let Some((a, b)) = current.support() else {
                break;
            };
            let next = (a - 1..=b)
                .map(|n| current.get(n + 1) - current.get(n))
                .collect();
            current = Self::trimmed(a - 1, next);
        }
        current
    }

    /// `Var(f) = sum_n |f(n+1) - f(n)|`.
    pub fn total_variation(&self) -> Rational {
        let Some((a, b)) = self.support() else {
            return Rational::zero();
        };
        (a - 1..=b)
            .map(|n| (self.get(n + 1) - self.get(n)).abs())
            .sum()
    }

    /// `sum_{j=0..k} ||f^(j)||_p`.
    pub fn wkp_norm(&self, k: u32, p: Exponent) -> WkpNorm {
        let parts = (0..=k).map(|j| self.derivative(j).lp_norm(p));
        if p.is_exact() {
            WkpNorm::Exact(parts.map(|v| v.value().clone()).sum())
        } else {
            let Exponent::Finite(p) = p else {
                unreachable!()
            };
            WkpNorm::PowerSums {
                p,
                sums: parts.map(|v| v.value().clone()).collect(),
            }
        }
    }

    /// Parses either serialized form; JSON is recognized by a leading `{`.
    pub fn parse(text: &str, trim: bool) -> Result<Self, ParseError> {
        let body = text.trim_start();
        if body.is_empty() {
            return Err(ParseError::Empty);
        }
        if body.starts_with('{') {
            Self::from_json(body, trim)
        } else {
            Self::from_text(text, trim)
        }
    }

    pub fn from_json(text: &str, trim: bool) -> Result<Self, ParseError> {
        let raw: RawSequence =
            serde_json::from_str(text).map_err(|e| ParseError::Json(e.to_string()))?;
        raw.build(trim)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&RawSequence::from(self)).expect("sequence serialization")
    }

    pub fn from_text(text: &str, trim: bool) -> Result<Self, ParseError> {
        let mut entries: Vec<(i64, Rational)> = Vec::new();
        let mut saw_content = false;
        for (lineno, line) in text.lines().enumerate() {
            let line_no = lineno + 1;
            let content = line.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                saw_content |= line.trim_start().starts_with('#');
                continue;
            }
            saw_content = true;
            let err = |message: String| ParseError::Line {
                line: line_no,
                message,
            };
            let mut parts = content.split_whitespace();
            let (Some(index), Some(value), None) = (parts.next(), parts.next(), parts.next())
            else {
                return Err(err(format!(
                    "expected `<index> <rational>`, got {content:?}"
                )));
            };
            let index: i64 = index
                .parse()
                .map_err(|_| err(format!("non-integer index {index:?}")))?;
            let value = rational::parse(value)
                .ok_or_else(|| err(format!("malformed rational {value:?}")))?;
            if let Some(&(prev, _)) = entries.last() {
                if index == prev {
                    return Err(err(format!("duplicate index {index}")));
                }
                if index < prev {
                    return Err(err(format!(
                        "index {index} after {prev}; indices must increase"
                    )));
                }
            }
            entries.push((index, value));
        }
        if !saw_content {
            return Err(ParseError::Empty);
        }
        let Some(&(first, _)) = entries.first() else {
            return Ok(Self::zero());
        };
        let last = entries.last().map(|e| e.0).unwrap_or(first);
        let width = usize::try_from(last - first + 1).map_err(|_| ParseError::Line {
            line: 1,
            message: "support too wide".into(),
        })?;
        let mut values = vec![Rational::zero(); width];
        for (index, value) in entries {
            values[(index - first) as usize] = value;
        }
        if trim {
            Ok(Self::trimmed(first, values))
        } else {
            Self::new(first, values)
        }
    }

    pub fn to_text(&self) -> String {
        if self.is_zero() {
            return "# zero sequence\n".to_string();
        }
        let mut out = String::new();
        for (n, v) in self.iter() {
            let _ = writeln!(out, "{n} {v}");
        }
        out
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSequence {
    offset: i64,
    values: Vec<RawValue>,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum RawValue {
    Text(String),
    Int(i64),
}

impl From<&Sequence> for RawSequence {
    fn from(seq: &Sequence) -> Self {
        Self {
            offset: seq.offset,
            values: seq
                .values
                .iter()
                .map(|v| RawValue::Text(v.to_string()))
                .collect(),
        }
    }
}

impl RawSequence {
    fn build(self, trim: bool) -> Result<Sequence, ParseError> {
        let values = self
            .values
            .into_iter()
            .enumerate()
            .map(|(position, v)| match v {
                RawValue::Int(i) => Ok(rational::int(i)),
                RawValue::Text(text) => {
                    rational::parse(&text).ok_or(ParseError::Rational { position, text })
                }
            })
            .collect::<Result<Vec<_>, _>>()?;
        if trim {
            Ok(Sequence::trimmed(self.offset, values))
        } else {
            Sequence::new(self.offset, values)
        }
    }
}

impl Serialize for Sequence {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        RawSequence::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Sequence {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        RawSequence::deserialize(d)?
            .build(false)
            .map_err(serde::de::Error::custom)
    }
}
