//! Seeded hill climbing with restarts.
//!
//! The budget is cut into restarts of `restart_budget` evaluations each.
//! Restart `k` draws from a ChaCha stream selected by `k` under the global
//! seed, so restarts are independent and can run on any thread. Inside a
//! restart the climber moves to the best strictly improving neighbor and jumps
//! to a fresh random point at a local optimum, until the restart's evaluations
//! are spent. Revisited points count against the budget but are not re-scored.

use std::cmp::Ordering;
use std::collections::HashMap;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::enumerate::{as_ints, canonicalize};
use super::{score_lemma, score_sequence, SearchConfig, Tally};
use crate::error::Result;
use crate::rational::Rational;
use crate::sequence::Sequence;
use crate::verify::IncreasingIntSeq;

pub(crate) fn run(config: &SearchConfig) -> Result<Tally> {
    if config.budget == 0 {
        return Ok(Tally::default());
    }
    let restarts = config.budget.div_ceil(config.restart_budget);
    let mine: Vec<u64> = (0..restarts).filter(|k| config.shard.owns(*k)).collect();
    mine.into_par_iter()
        .map(|k| {
            let allowance = config
                .restart_budget
                .min(config.budget - k * config.restart_budget);
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
            rng.set_stream(k);
            log::debug!("restart {k}: {allowance} evaluations");
            if config.objective.on_sequences() {
                climb(&SequenceSpace { config }, &mut rng, allowance)
            } else {
                climb(&LemmaSpace { config }, &mut rng, allowance)
            }
        })
        .try_reduce(Tally::default, |a, b| Ok(a.merge(b)))
}

trait Space {
    type Point: Clone + Eq + std::hash::Hash + Ord;

    fn random(&self, rng: &mut ChaCha8Rng) -> Self::Point;
    fn neighbors(&self, p: &Self::Point) -> Vec<Self::Point>;
    /// Scores a point, recording it in the tally.
    fn score(&self, p: &Self::Point, tally: &mut Tally) -> Result<Rational>;
}

fn climb<S: Space>(space: &S, rng: &mut ChaCha8Rng, allowance: u64) -> Result<Tally> {
    let mut tally = Tally::default();
    let mut seen: HashMap<S::Point, Rational> = HashMap::new();
    let mut left = allowance;
    let mut eval = |p: &S::Point, tally: &mut Tally, left: &mut u64| -> Result<Rational> {
        *left -= 1;
        if let Some(v) = seen.get(p) {
            tally.count_only();
            return Ok(v.clone());
        }
        let v = space.score(p, tally)?;
        seen.insert(p.clone(), v.clone());
        Ok(v)
    };
    while left > 0 {
        let mut cur = space.random(rng);
        let mut cur_value = eval(&cur, &mut tally, &mut left)?;
        'climb: loop {
            let mut best: Option<(S::Point, Rational)> = None;
            for q in space.neighbors(&cur) {
                if left == 0 {
                    break 'climb;
                }
                let v = eval(&q, &mut tally, &mut left)?;
                let better = match &best {
                    None => true,
                    Some((bq, bv)) => match v.cmp(bv) {
                        Ordering::Greater => true,
                        Ordering::Equal => q < *bq,
                        Ordering::Less => false,
                    },
                };
                if better {
                    best = Some((q, v));
                }
            }
            match best {
                Some((q, v)) if v > cur_value => {
                    cur = q;
                    cur_value = v;
                }
                _ => break,
            }
        }
    }
    Ok(tally)
}

/// Canonical nonnegative integer sequences in the `(L, V)` box.
struct SequenceSpace<'a> {
    config: &'a SearchConfig,
}

impl SequenceSpace<'_> {
    fn canonical(&self, values: Vec<i64>) -> Option<Vec<i64>> {
        let f = Sequence::from_ints(0, &values);
        if f.is_zero() {
            return None;
        }
        Some(as_ints(&canonicalize(&f).expect("nonnegative nonzero")))
    }
}

impl Space for SequenceSpace<'_> {
    type Point = Vec<i64>;

    fn random(&self, rng: &mut ChaCha8Rng) -> Vec<i64> {
        let (len, vmax) = (self.config.support_len_max, self.config.value_max);
        let width = rng.random_range(1..=len);
        let mut v: Vec<i64> = (0..width).map(|_| rng.random_range(0..=vmax)).collect();
        v[0] = rng.random_range(1..=vmax);
        v[width - 1] = rng.random_range(1..=vmax);
        self.canonical(v).expect("nonzero ends")
    }

    fn neighbors(&self, p: &Vec<i64>) -> Vec<Vec<i64>> {
        let (len, vmax) = (self.config.support_len_max, self.config.value_max);
        let mut raw: Vec<Vec<i64>> = Vec::new();
        for i in 0..p.len() {
            for next in [p[i] - 1, p[i] + 1, (2 * p[i]).min(vmax)] {
                if (0..=vmax).contains(&next) && next != p[i] {
                    let mut q = p.clone();
                    q[i] = next;
                    raw.push(q);
                }
            }
        }
        if p.len() < len {
            raw.push([&[1], p.as_slice()].concat());
            raw.push([p.as_slice(), &[1]].concat());
        }
        if p.len() > 1 {
            raw.push(p[1..].to_vec());
            raw.push(p[..p.len() - 1].to_vec());
        }
        let mut out: Vec<Vec<i64>> = raw.into_iter().filter_map(|q| self.canonical(q)).collect();
        out.sort();
        out.dedup();
        out.retain(|q| q != p);
        out
    }

    fn score(&self, p: &Vec<i64>, tally: &mut Tally) -> Result<Rational> {
        score_sequence(self.config, Sequence::from_ints(0, p), tally)
    }
}

/// Increasing sequences inside `[lo, hi]` with an anchor. Points are
/// `(terms, n)`.
struct LemmaSpace<'a> {
    config: &'a SearchConfig,
}

impl LemmaSpace<'_> {
    fn admissible(&self, terms: &[i64], n: i64) -> bool {
        let l = self.config.lemma;
        !terms.is_empty()
            && terms.len() <= l.len_max
            && terms.windows(2).all(|w| w[0] < w[1])
            && terms[0] >= l.lo
            && terms[terms.len() - 1] <= l.hi
            && (l.anchor_lo..=l.anchor_hi).contains(&n)
    }
}

impl Space for LemmaSpace<'_> {
    type Point = (Vec<i64>, i64);

    fn random(&self, rng: &mut ChaCha8Rng) -> (Vec<i64>, i64) {
        let l = self.config.lemma;
        let span = (l.hi - l.lo + 1) as usize;
        let max_len = l.len_max.min(span);
        let k = rng.random_range(max_len.min(2)..=max_len);
        let mut terms: Vec<i64> = sample(rng, span, k)
            .into_iter()
            .map(|i| l.lo + i as i64)
            .collect();
        terms.sort_unstable();
        (terms, rng.random_range(l.anchor_lo..=l.anchor_hi))
    }

    fn neighbors(&self, (terms, n): &(Vec<i64>, i64)) -> Vec<(Vec<i64>, i64)> {
        let mut raw = Vec::new();
        for i in 0..terms.len() {
            for d in [-1, 1] {
                let mut t = terms.clone();
                t[i] += d;
                raw.push((t, *n));
            }
        }
        raw.push((terms.clone(), n - 1));
        raw.push((terms.clone(), n + 1));
        let (first, last) = (terms[0], terms[terms.len() - 1]);
        raw.push(([&[first - 1], terms.as_slice()].concat(), *n));
        raw.push(([terms.as_slice(), &[last + 1]].concat(), *n));
        if terms.len() > 1 {
            raw.push((terms[1..].to_vec(), *n));
            raw.push((terms[..terms.len() - 1].to_vec(), *n));
        }
        // Doubling every distance from the first term.
        raw.push((terms.iter().map(|t| first + 2 * (t - first)).collect(), *n));
        let mut out: Vec<_> = raw
            .into_iter()
            .filter(|(t, m)| self.admissible(t, *m))
            .collect();
        out.sort();
        out.dedup();
        out.retain(|(t, m)| !(t == terms && m == n));
        out
    }

    fn score(&self, (terms, n): &(Vec<i64>, i64), tally: &mut Tally) -> Result<Rational> {
        let a = IncreasingIntSeq::new(terms.clone())?;
        Ok(score_lemma(self.config, *n, &a, tally))
    }
}

#[cfg(test)]
mod tests {
    use super::super::{stochastic_search, Mode, Objective, SearchConfig};
    use crate::rational::int;

    fn config(objective: Objective, seed: u64, budget: u64) -> SearchConfig {
        SearchConfig {
            seed,
            budget,
            ..SearchConfig::new(Mode::Stochastic, objective)
        }
    }

    #[test]
    fn zero_budget_is_empty() {
        let r = stochastic_search(&config(Objective::Tanaka, 1, 0)).unwrap();
        assert_eq!(r.count_examined, 0);
        assert!(r.best_value.is_none() && r.argmax.is_none());
    }

    #[test]
    fn reproducible_and_budgeted() {
        for objective in [Objective::Tanaka, Objective::LemmaSum] {
            let c = config(objective, 42, 750);
            let a = stochastic_search(&c).unwrap();
            assert_eq!(a.count_examined, 750);
            assert_eq!(a, stochastic_search(&c).unwrap());
            assert!(a.violations.is_empty());
            assert!(a.recheck_best().unwrap());
        }
    }

    #[test]
    fn noncentered_climber_finds_spike_ratio() {
        let r = stochastic_search(&config(Objective::Tanaka, 7, 2000)).unwrap();
        assert_eq!(r.best_value, Some(int(1)));
    }
}
