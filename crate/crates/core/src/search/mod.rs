//! Exhaustive and seeded stochastic search for extremal ratios.
//!
//! Sequence objectives run over canonical nonnegative integer sequences (see
//! [`canonicalize`]); the lemma objective runs over increasing integer
//! sequences paired with an anchor. Work is split into shards by item index
//! modulo the shard count, and partial results are combined by
//! [`SearchReport::merge`], a max-reduction whose ties go to the smallest
//! candidate. Results never depend on thread count or shard layout.

mod enumerate;
mod stochastic;

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use enumerate::{canonicalize, enumerate_canonical, increasing_sequences};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};
use crate::sequence::Sequence;
use crate::verify::{
    check_centered_bound, check_lemma_bounds, check_question_b, check_tanaka, lemma_gap2_bound,
    lemma_sum, CheckName, IncreasingIntSeq, Outcome, VerificationReport,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exhaustive,
    Stochastic,
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exhaustive" => Ok(Mode::Exhaustive),
            "stochastic" => Ok(Mode::Stochastic),
            _ => Err(Error::Domain(format!("unknown mode {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Objective {
    /// `Var(M~f) / Var(f)`.
    #[serde(alias = "tanaka_ratio")]
    Tanaka,
    /// `Var(Mf) / ||f||_1`.
    #[serde(alias = "centered_l1_ratio")]
    CenteredL1,
    /// `Var(Mf) / Var(f)`.
    #[serde(alias = "question_b_ratio")]
    QuestionB,
    /// The pair sum over an increasing sequence at an anchor.
    #[serde(alias = "lemma_sum")]
    LemmaSum,
}

impl Objective {
    pub const ALL: [Objective; 4] = [
        Objective::Tanaka,
        Objective::CenteredL1,
        Objective::QuestionB,
        Objective::LemmaSum,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Objective::Tanaka => "tanaka",
            Objective::CenteredL1 => "centered-l1",
            Objective::QuestionB => "question-b",
            Objective::LemmaSum => "lemma-sum",
        }
    }

    /// The check whose ratio this objective maximizes.
    pub fn check(self) -> CheckName {
        match self {
            Objective::Tanaka => CheckName::Tanaka,
            Objective::CenteredL1 => CheckName::CenteredBound,
            Objective::QuestionB => CheckName::QuestionB,
            Objective::LemmaSum => CheckName::LemmaBounds,
        }
    }

    pub fn on_sequences(self) -> bool {
        self != Objective::LemmaSum
    }
}

impl fmt::Display for Objective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Objective {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "tanaka" | "tanaka_ratio" => Ok(Objective::Tanaka),
            "centered-l1" | "centered_l1_ratio" => Ok(Objective::CenteredL1),
            "question-b" | "question_b_ratio" => Ok(Objective::QuestionB),
            "lemma-sum" | "lemma_sum" => Ok(Objective::LemmaSum),
            _ => Err(Error::Domain(format!("unknown objective {s:?}"))),
        }
    }
}

/// Shard `index` of `count`: the items whose position is `index` modulo `count`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Shard {
    pub index: u64,
    pub count: u64,
}

impl Shard {
    pub const WHOLE: Shard = Shard { index: 0, count: 1 };

    pub fn new(index: u64, count: u64) -> Result<Self> {
        if count == 0 || index >= count {
            return Err(Error::Domain(format!("invalid shard {index}/{count}")));
        }
        Ok(Self { index, count })
    }

    pub fn owns(&self, position: u64) -> bool {
        position % self.count == self.index
    }

    pub fn all(count: u64) -> Result<Vec<Shard>> {
        (0..count).map(|i| Shard::new(i, count)).collect()
    }
}

impl fmt::Display for Shard {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.index, self.count)
    }
}

impl FromStr for Shard {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Domain(format!("shard must look like i/N, got {s:?}"));
        let (i, n) = s.split_once('/').ok_or_else(bad)?;
        Shard::new(
            i.trim().parse().map_err(|_| bad())?,
            n.trim().parse().map_err(|_| bad())?,
        )
    }
}

impl TryFrom<String> for Shard {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<Shard> for String {
    fn from(s: Shard) -> String {
        s.to_string()
    }
}

/// Bounds of the lemma search space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LemmaSpace {
    pub len_max: usize,
    pub lo: i64,
    pub hi: i64,
    pub anchor_lo: i64,
    pub anchor_hi: i64,
}

impl Default for LemmaSpace {
    fn default() -> Self {
        Self {
            len_max: 5,
            lo: -10,
            hi: 10,
            anchor_lo: -12,
            anchor_hi: 12,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub mode: Mode,
    pub objective: Objective,
    pub support_len_max: usize,
    pub value_max: i64,
    pub seed: u64,
    /// Total evaluations in stochastic mode.
    pub budget: u64,
    /// Evaluations per restart in stochastic mode.
    pub restart_budget: u64,
    pub shard: Shard,
    pub lemma: LemmaSpace,
    /// Candidates at or above this value are listed in the report.
    #[serde(
        with = "rational::opt_string",
        default,
        skip_serializing_if = "Option::is_none"
    )]
    pub threshold: Option<Rational>,
}

impl SearchConfig {
    pub fn new(mode: Mode, objective: Objective) -> Self {
        Self {
            mode,
            objective,
            support_len_max: 6,
            value_max: 4,
            seed: 0,
            budget: 10_000,
            restart_budget: 200,
            shard: Shard::WHOLE,
            lemma: LemmaSpace::default(),
            threshold: None,
        }
    }

    pub fn exhaustive(objective: Objective, len: usize, vmax: i64) -> Self {
        Self {
            support_len_max: len,
            value_max: vmax,
            ..Self::new(Mode::Exhaustive, objective)
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.support_len_max < 1 || self.value_max < 1 {
            return Err(Error::Domain(
                "support length and value bound must be at least 1".into(),
            ));
        }
        Shard::new(self.shard.index, self.shard.count)?;
        let l = &self.lemma;
        if l.len_max < 1 || l.lo > l.hi || l.anchor_lo > l.anchor_hi {
            return Err(Error::Domain("empty lemma search space".into()));
        }
        if self.mode == Mode::Stochastic && self.restart_budget == 0 {
            return Err(Error::Domain("restart budget must be positive".into()));
        }
        Ok(())
    }

    fn same_run(&self, other: &SearchConfig) -> bool {
        SearchConfig {
            shard: Shard::WHOLE,
            ..self.clone()
        } == SearchConfig {
            shard: Shard::WHOLE,
            ..other.clone()
        }
    }
}

/// A maximizing candidate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Candidate {
    Sequence(Sequence),
    Lemma { n: i64, a: IncreasingIntSeq },
}

impl Candidate {
    /// Tie-break order: lexicographic on values, or on `(terms, n)`.
    fn order(&self, other: &Candidate) -> Ordering {
        match (self, other) {
            (Candidate::Sequence(f), Candidate::Sequence(g)) => f.values().cmp(g.values()),
            (Candidate::Lemma { n, a }, Candidate::Lemma { n: m, a: b }) => {
                (a.terms(), n).cmp(&(b.terms(), m))
            }
            (Candidate::Sequence(_), Candidate::Lemma { .. }) => Ordering::Less,
            (Candidate::Lemma { .. }, Candidate::Sequence(_)) => Ordering::Greater,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Scored {
    pub candidate: Candidate,
    #[serde(with = "rational::as_string")]
    pub value: Rational,
}

impl Scored {
    /// Higher value first, then the smaller candidate.
    fn rank(&self, other: &Scored) -> Ordering {
        other
            .value
            .cmp(&self.value)
            .then_with(|| self.candidate.order(&other.candidate))
    }
}

/// Partial result of a search; combining is associative and commutative.
#[derive(Debug, Clone, Default)]
pub(crate) struct Tally {
    best: Option<Scored>,
    examined: u64,
    violations: Vec<VerificationReport>,
    above: Vec<Scored>,
}

impl Tally {
    fn offer(&mut self, scored: Scored, threshold: Option<&Rational>) {
        self.examined += 1;
        if threshold.is_some_and(|t| scored.value >= *t) {
            self.above.push(scored.clone());
        }
        if self
            .best
            .as_ref()
            .is_none_or(|b| scored.rank(b) == Ordering::Less)
        {
            self.best = Some(scored);
        }
    }

    fn count_only(&mut self) {
        self.examined += 1;
    }

    fn merge(mut self, other: Tally) -> Tally {
        self.examined += other.examined;
        self.violations.extend(other.violations);
        self.above.extend(other.above);
        self.best = match (self.best, other.best) {
            (Some(a), Some(b)) => Some(if b.rank(&a) == Ordering::Less { b } else { a }),
            (a, b) => a.or(b),
        };
        self
    }

    fn into_report(mut self, config: &SearchConfig) -> SearchReport {
        normalize(&mut self.violations, &mut self.above);
        let (best_value, argmax) = match self.best {
            Some(s) => (Some(s.value), Some(s.candidate)),
            None => (None, None),
        };
        SearchReport {
            objective: config.objective,
            best_value,
            argmax,
            count_examined: self.examined,
            violations: self.violations,
            above_threshold: self.above,
            config: config.clone(),
        }
    }
}

fn normalize(violations: &mut Vec<VerificationReport>, above: &mut Vec<Scored>) {
    violations.sort_by_cached_key(|r| r.to_json_line());
    violations.dedup();
    above.sort_by(|a, b| a.rank(b));
    above.dedup();
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchReport {
    pub objective: Objective,
    #[serde(with = "rational::opt_string")]
    pub best_value: Option<Rational>,
    pub argmax: Option<Candidate>,
    pub count_examined: u64,
    pub violations: Vec<VerificationReport>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub above_threshold: Vec<Scored>,
    pub config: SearchConfig,
}

impl SearchReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Domain(format!("bad search report: {e}")))
    }

    /// Combines the reports of all shards of one run into the report of the
    /// unsharded run.
    pub fn merge(reports: Vec<SearchReport>) -> Result<SearchReport> {
        let first = reports
            .first()
            .ok_or_else(|| Error::Domain("nothing to merge".into()))?;
        let count = first.config.shard.count;
        let mut seen = vec![false; count as usize];
        for r in &reports {
            if !first.config.same_run(&r.config) || r.config.shard.count != count {
                return Err(Error::Domain("reports come from different runs".into()));
            }
            if std::mem::replace(&mut seen[r.config.shard.index as usize], true) {
                return Err(Error::Domain(format!(
                    "shard {} given twice",
                    r.config.shard
                )));
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::Domain("missing shards".into()));
        }
        let config = SearchConfig {
            shard: Shard::WHOLE,
            ..first.config.clone()
        };
        let mut tally = Tally::default();
        for r in reports {
            let best = r
                .best_value
                .zip(r.argmax)
                .map(|(value, candidate)| Scored { candidate, value });
            tally = tally.merge(Tally {
                best,
                examined: r.count_examined,
                violations: r.violations,
                above: r.above_threshold,
            });
        }
        Ok(tally.into_report(&config))
    }

    /// Recomputes `best_value` from `argmax` through the matching check.
    pub fn recheck_best(&self) -> Result<bool> {
        match (&self.argmax, &self.best_value) {
            (None, None) => Ok(true),
            (Some(c), Some(v)) => Ok(evaluate(self.objective, c)? == *v),
            _ => Ok(false),
        }
    }

    /// CSV of the candidates at or above the threshold.
    pub fn threshold_csv(&self) -> String {
        let mut out = String::from("candidate,value_num,value_den\n");
        for s in &self.above_threshold {
            let candidate = serde_json::to_string(&s.candidate).expect("candidate serialization");
            let quoted = format!("\"{}\"", candidate.replace('"', "\"\""));
            out.push_str(&format!(
                "{quoted},{},{}\n",
                s.value.numer(),
                s.value.denom()
            ));
        }
        out
    }
}

/// Objective value of a candidate. Sequences are canonicalized first.
pub fn evaluate(objective: Objective, candidate: &Candidate) -> Result<Rational> {
    match (objective, candidate) {
        (Objective::LemmaSum, Candidate::Lemma { n, a }) => Ok(lemma_sum(*n, a)),
        (Objective::LemmaSum, _) | (_, Candidate::Lemma { .. }) => Err(Error::Precondition(
            format!("candidate does not fit objective {objective}"),
        )),
        (_, Candidate::Sequence(f)) => {
            let report = sequence_report(objective, &canonicalize(f)?)?;
            Ok(report.ratio.unwrap_or_default())
        }
    }
}

fn sequence_report(objective: Objective, f: &Sequence) -> Result<VerificationReport> {
    match objective {
        Objective::Tanaka => check_tanaka(f),
        Objective::CenteredL1 => check_centered_bound(f),
        Objective::QuestionB => check_question_b(f),
        Objective::LemmaSum => Err(Error::Precondition("lemma objective on a sequence".into())),
    }
}

/// Evaluates a canonical sequence into the tally.
fn score_sequence(config: &SearchConfig, f: Sequence, tally: &mut Tally) -> Result<Rational> {
    let report = sequence_report(config.objective, &f)?;
    let value = report.ratio.clone().unwrap_or_default();
    if report.outcome == Outcome::Violated {
        tally.violations.push(report);
    }
    tally.offer(
        Scored {
            candidate: Candidate::Sequence(f),
            value: value.clone(),
        },
        config.threshold.as_ref(),
    );
    Ok(value)
}

fn score_lemma(config: &SearchConfig, n: i64, a: &IncreasingIntSeq, tally: &mut Tally) -> Rational {
    let value = lemma_sum(n, a);
    // The gap >= 2 bound is the smaller one, so nothing below it can fail.
    if value > lemma_gap2_bound() {
        let report = check_lemma_bounds(n, a);
        if report.outcome == Outcome::Violated {
            tally.violations.push(report);
        }
    }
    let candidate = Candidate::Lemma { n, a: a.clone() };
    tally.offer(
        Scored {
            candidate,
            value: value.clone(),
        },
        config.threshold.as_ref(),
    );
    value
}

pub fn exhaustive_search(config: &SearchConfig) -> Result<SearchReport> {
    config.validate()?;
    if config.mode != Mode::Exhaustive {
        return Err(Error::Domain(
            "exhaustive search needs mode=exhaustive".into(),
        ));
    }
    let shard = config.shard;
    let tally = if config.objective.on_sequences() {
        let items: Vec<Sequence> = enumerate_canonical(config.support_len_max, config.value_max)
            .enumerate()
            .filter(|(i, _)| shard.owns(*i as u64))
            .map(|(_, f)| f)
            .collect();
        items
            .into_par_iter()
            .map(|f| {
                let mut t = Tally::default();
                score_sequence(config, f, &mut t)?;
                Ok::<_, Error>(t)
            })
            .try_reduce(Tally::default, |a, b| Ok(a.merge(b)))?
    } else {
        let l = config.lemma;
        let anchors = (l.anchor_hi - l.anchor_lo + 1) as u64;
        let seqs: Vec<Vec<i64>> = increasing_sequences(l.len_max, l.lo, l.hi).collect();
        seqs.into_par_iter()
            .enumerate()
            .map(|(i, terms)| {
                let a = IncreasingIntSeq::new(terms)?;
                let mut t = Tally::default();
                for (j, n) in (l.anchor_lo..=l.anchor_hi).enumerate() {
                    if shard.owns(i as u64 * anchors + j as u64) {
                        score_lemma(config, n, &a, &mut t);
                    }
                }
                Ok::<_, Error>(t)
            })
            .try_reduce(Tally::default, |a, b| Ok(a.merge(b)))?
    };
    let report = tally.into_report(config);
    log::info!(
        "exhaustive {} shard {}: {} examined, best {:?}, {} violations",
        config.objective,
        config.shard,
        report.count_examined,
        report.best_value.as_ref().map(rational::render),
        report.violations.len()
    );
    Ok(report)
}

pub fn stochastic_search(config: &SearchConfig) -> Result<SearchReport> {
    config.validate()?;
    if config.mode != Mode::Stochastic {
        return Err(Error::Domain(
            "stochastic search needs mode=stochastic".into(),
        ));
    }
    let report = stochastic::run(config)?.into_report(config);
    log::info!(
        "stochastic {} seed {} shard {}: {} evaluations, best {:?}",
        config.objective,
        config.seed,
        config.shard,
        report.count_examined,
        report.best_value.as_ref().map(rational::render)
    );
    Ok(report)
}

/// Dispatches on the configured mode.
pub fn search(config: &SearchConfig) -> Result<SearchReport> {
    match config.mode {
        Mode::Exhaustive => exhaustive_search(config),
        Mode::Stochastic => stochastic_search(config),
    }
}
