//! Discrete maximal transforms of finitely supported sequences.
//!
//! Every transform is computed from `|f|` and tabulated exactly on the support
//! `[a, b]`. Off the support the transforms obey a tail law: non-decreasing on
//! `(-inf, a]`, non-increasing on `[b, inf)`, tending to `0` at both ends. On
//! each tail the transform is either strictly monotone or identically zero past
//! the support, so the variation over all of `Z` and every local extremum is
//! determined by the values on `[a - 1, b + 1]`.

mod centered;
mod kernel;
mod noncentered;
mod one_sided;

use std::fmt::{self, Write as _};
use std::str::FromStr;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, ParseError, Result};
use crate::extrema::ExtremaChain;
use crate::rational::{self, Rational};
use crate::sequence::Sequence;

pub use centered::centered_average;
pub use noncentered::window_average;
pub use one_sided::one_sided_value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Centered,
    Noncentered,
    Left,
    Right,
}

impl Kind {
    pub const ALL: [Kind; 4] = [Kind::Centered, Kind::Noncentered, Kind::Left, Kind::Right];

    pub fn name(self) -> &'static str {
        match self {
            Kind::Centered => "centered",
            Kind::Noncentered => "noncentered",
            Kind::Left => "left",
            Kind::Right => "right",
        }
    }

    /// The kind obtained after reflecting the input.
    pub fn mirrored(self) -> Kind {
        match self {
            Kind::Left => Kind::Right,
            Kind::Right => Kind::Left,
            k => k,
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Kind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "centered" => Ok(Kind::Centered),
            "noncentered" => Ok(Kind::Noncentered),
            "left" => Ok(Kind::Left),
            "right" => Ok(Kind::Right),
            other => Err(format!("unknown transform kind {other:?}")),
        }
    }
}

pub const TAIL_LAW: &str =
    "non-decreasing on (-inf,a]; non-increasing on [b,+inf); limit 0 at +-inf";

/// One maximal operator applied to `|f|`, tabulated on the support of `f`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaximalTransform {
    kind: Kind,
    base: Sequence,
    magnitude: Sequence,
    values: Vec<Rational>,
    optimal_radius: Option<Vec<u64>>,
}

/// Centered transform with smallest optimal radii.
pub fn centered(f: &Sequence) -> MaximalTransform {
    let magnitude = f.abs();
    let (values, radii) = if f.is_zero() {
        (Vec::new(), Vec::new())
    } else {
        centered::tabulate(&magnitude)
    };
    MaximalTransform {
        kind: Kind::Centered,
        base: f.clone(),
        magnitude,
        values,
        optimal_radius: Some(radii),
    }
}

/// Non-centered transform by direct enumeration of windows. Cubic in the
/// support width.
pub fn noncentered_naive(f: &Sequence) -> MaximalTransform {
    let magnitude = f.abs();
    let values = noncentered::tabulate_naive(&magnitude);
    MaximalTransform::plain(Kind::Noncentered, f, magnitude, values)
}

/// Non-centered transform via prefix-sum hulls; identical to
/// [`noncentered_naive`].
pub fn noncentered(f: &Sequence) -> MaximalTransform {
    let magnitude = f.abs();
    let values = if f.is_zero() {
        Vec::new()
    } else {
        noncentered::tabulate_fast(&magnitude)
    };
    MaximalTransform::plain(Kind::Noncentered, f, magnitude, values)
}

/// One-sided transform in linear time.
pub fn one_sided(f: &Sequence, side: Side) -> MaximalTransform {
    let magnitude = f.abs();
    let values = if f.is_zero() {
        Vec::new()
    } else {
        one_sided::tabulate_hull(&magnitude, side)
    };
    MaximalTransform::plain(side.into(), f, magnitude, values)
}

/// One-sided transform tabulated point by point with [`one_sided_value`].
pub fn one_sided_scan(f: &Sequence, side: Side) -> MaximalTransform {
    let magnitude = f.abs();
    let values = one_sided::tabulate_scan(&magnitude, side);
    MaximalTransform::plain(side.into(), f, magnitude, values)
}

pub fn transform(f: &Sequence, kind: Kind) -> MaximalTransform {
    match kind {
        Kind::Centered => centered(f),
        Kind::Noncentered => noncentered(f),
        Kind::Left => one_sided(f, Side::Left),
        Kind::Right => one_sided(f, Side::Right),
    }
}

impl From<Side> for Kind {
    fn from(side: Side) -> Kind {
        match side {
            Side::Left => Kind::Left,
            Side::Right => Kind::Right,
        }
    }
}

impl MaximalTransform {
    fn plain(kind: Kind, base: &Sequence, magnitude: Sequence, values: Vec<Rational>) -> Self {
        Self {
            kind,
            base: base.clone(),
            magnitude,
            values,
            optimal_radius: None,
        }
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn base(&self) -> &Sequence {
        &self.base
    }

    /// Support `[a, b]` of `|f|`; `None` for the zero sentinel.
    pub fn window(&self) -> Option<(i64, i64)> {
        self.magnitude.support()
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn optimal_radii(&self) -> Option<&[u64]> {
        self.optimal_radius.as_deref()
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    /// Value at any integer, evaluating the tails when `n` is off the window.
    pub fn value_at(&self, n: i64) -> Rational {
        let Some((a, b)) = self.window() else {
            return Rational::zero();
        };
        if (a..=b).contains(&n) {
            return self.values[(n - a) as usize].clone();
        }
        let f = &self.magnitude;
        match self.kind {
            Kind::Centered => centered::outside(f, n).0,
            Kind::Noncentered => noncentered::outside(f, n),
            Kind::Left => one_sided::outside(f, n, Side::Left),
            Kind::Right => one_sided::outside(f, n, Side::Right),
        }
    }

    /// Smallest maximizing radius at `n` (centered kind only).
    pub fn radius_at(&self, n: i64) -> Option<u64> {
        let radii = self.optimal_radius.as_ref()?;
        let (a, b) = self.window()?;
        if (a..=b).contains(&n) {
            Some(radii[(n - a) as usize])
        } else {
            Some(centered::outside(&self.magnitude, n).1)
        }
    }

    /// Checks the tail law on the margins `[a - depth, a]` and `[b, b + depth]`.
    pub fn check_tail_law(&self, depth: i64) -> Result<()> {
        let Some((a, b)) = self.window() else {
            return Ok(());
        };
        for n in a - depth..a {
            if self.value_at(n) > self.value_at(n + 1) {
                return Err(Error::Consistency(format!(
                    "{} transform decreases at left margin {n}",
                    self.kind
                )));
            }
        }
        for n in b..b + depth {
            if self.value_at(n) < self.value_at(n + 1) {
                return Err(Error::Consistency(format!(
                    "{} transform increases at right margin {n}",
                    self.kind
                )));
            }
        }
        Ok(())
    }

    /// Variation over all of `Z`: `T(a) + sum |T(n+1) - T(n)| + T(b)`.
    pub fn total_variation(&self) -> Result<Rational> {
        let Some((a, b)) = self.window() else {
            return Ok(Rational::zero());
        };
        self.check_tail_law(2)?;
        let mut var = self.values[0].clone() + self.values.last().unwrap();
        for pair in self.values.windows(2) {
            var += num_traits::Signed::abs(&(&pair[1] - &pair[0]));
        }
        debug_assert_eq!(self.values.len() as i64, b - a + 1);
        Ok(var)
    }

    /// Local extrema over all of `Z`.
    pub fn extrema_chain(&self) -> Result<ExtremaChain> {
        let Some((a, b)) = self.window() else {
            return Ok(ExtremaChain::default());
        };
        self.check_tail_law(3)?;
        ExtremaChain::scan(a - 1, b + 1, |n| self.value_at(n))
    }

    /// CSV export of rows `n` in `[a - pad, b + pad]`.
    pub fn to_csv(&self, pad: u64, decimal: bool) -> String {
        let mut out = String::new();
        let support = match self.window() {
            Some((a, b)) => format!("[{a},{b}]"),
            None => "empty".to_string(),
        };
        let _ = writeln!(
            out,
            "# kind={} support={} tail_law=\"{}\"",
            self.kind, support, TAIL_LAW
        );
        let radius = self.optimal_radius.is_some();
        out.push_str("n,value_num,value_den");
        if radius {
            out.push_str(",optimal_radius");
        }
        if decimal {
            out.push_str(",value_approx");
        }
        out.push('\n');
        let Some((a, b)) = self.window() else {
            return out;
        };
        let pad = pad as i64;
        for n in a - pad..=b + pad {
            let v = self.value_at(n);
            let _ = write!(out, "{n},{},{}", v.numer(), v.denom());
            if radius {
                let _ = write!(out, ",{}", self.radius_at(n).unwrap_or(0));
            }
            if decimal {
                let _ = write!(out, ",{:.12}", rational::approx(&v));
            }
            out.push('\n');
        }
        out
    }
}

/// A parsed transform CSV export.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransformTable {
    pub kind: Kind,
    pub support: Option<(i64, i64)>,
    pub rows: Vec<TransformRow>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransformRow {
    pub n: i64,
    pub value: Rational,
    pub optimal_radius: Option<u64>,
}

impl TransformTable {
    pub fn parse_csv(text: &str) -> Result<Self, ParseError> {
        let err = |line: usize, message: String| ParseError::Line { line, message };
        let mut lines = text.lines().enumerate();
        let (_, header) = lines.next().ok_or(ParseError::Empty)?;
        let meta = header
            .strip_prefix("# ")
            .ok_or_else(|| err(1, "missing metadata header".into()))?;
        let field = |key: &str| {
            meta.split_whitespace()
                .find_map(|kv| kv.strip_prefix(key).and_then(|v| v.strip_prefix('=')))
                .ok_or_else(|| err(1, format!("missing {key}")))
        };
        let kind: Kind = field("kind")?.parse().map_err(|e| err(1, e))?;
        let support = match field("support")? {
            "empty" => None,
            s => {
                let inner = s
                    .strip_prefix('[')
                    .and_then(|s| s.strip_suffix(']'))
                    .and_then(|s| s.split_once(','))
                    .ok_or_else(|| err(1, format!("bad support {s:?}")))?;
                let a = inner
                    .0
                    .parse()
                    .map_err(|_| err(1, format!("bad support {s:?}")))?;
                let b = inner
                    .1
                    .parse()
                    .map_err(|_| err(1, format!("bad support {s:?}")))?;
                Some((a, b))
            }
        };
        let (_, columns) = lines
            .next()
            .ok_or_else(|| err(2, "missing column header".into()))?;
        let columns: Vec<&str> = columns.split(',').collect();
        let radius_col = columns.iter().position(|c| *c == "optimal_radius");
        let mut rows = Vec::new();
        for (i, line) in lines {
            let line_no = i + 1;
            if line.trim().is_empty() {
                continue;
            }
            let cells: Vec<&str> = line.split(',').collect();
            if cells.len() != columns.len() {
                return Err(err(line_no, format!("expected {} cells", columns.len())));
            }
            let n = cells[0].parse().map_err(|_| err(line_no, "bad n".into()))?;
            let value = rational::parse(&format!("{}/{}", cells[1], cells[2]))
                .ok_or_else(|| err(line_no, "bad value".into()))?;
            let optimal_radius = match radius_col {
                Some(c) => Some(
                    cells[c]
                        .parse()
                        .map_err(|_| err(line_no, "bad radius".into()))?,
                ),
                None => None,
            };
            rows.push(TransformRow {
                n,
                value,
                optimal_radius,
            });
        }
        Ok(Self {
            kind,
            support,
            rows,
        })
    }
}
