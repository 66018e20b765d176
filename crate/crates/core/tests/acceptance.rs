//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails. All comparisons are exact rationals, so
//! the numeric tolerance of every criterion is zero.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use dtm_core::rational::{frac, int, render};
use dtm_core::search::{
    enumerate_canonical, exhaustive_search, stochastic_search, Candidate, Mode, Objective,
    SearchConfig, SearchReport, Shard,
};
use dtm_core::transform::{self, Kind};
use dtm_core::verify::{self, IncreasingIntSeq, Outcome};
use dtm_core::{Rational, Sequence, Side};
use rand::Rng;

const LEN: usize = 6;
const VMAX: i64 = 4;
const EXACT: &str = "exact, tolerance 0";

type Verdict = Result<String, String>;
type Criterion = (u32, &'static str, fn() -> Verdict);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn run_search(objective: Objective, len: usize, vmax: i64) -> SearchReport {
    exhaustive_search(&SearchConfig::exhaustive(objective, len, vmax)).expect("search runs")
}

fn in_pool<T: Send>(threads: usize, job: impl FnOnce() -> T + Send) -> T {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .unwrap()
        .install(job)
}

fn argmax_text(r: &SearchReport) -> String {
    serde_json::to_string(&r.argmax).unwrap()
}

fn spike() -> Candidate {
    Candidate::Sequence(Sequence::delta(0))
}

fn enumerated() -> Vec<Sequence> {
    enumerate_canonical(LEN, VMAX).collect()
}

fn noncentered_bound() -> Verdict {
    let r = run_search(Objective::Tanaka, LEN, VMAX);
    ensure!(r.violations.is_empty(), "{} violations", r.violations.len());
    ensure!(
        r.best_value == Some(int(1)),
        "max ratio {:?}",
        r.best_value.map(|v| render(&v))
    );
    ensure!(r.argmax == Some(spike()), "argmax {}", argmax_text(&r));
    ensure!(r.recheck_best().unwrap(), "best value does not re-verify");
    Ok(format!(
        "{} sequences, max Var(M~f)/Var(f) = 1 at {}",
        r.count_examined,
        argmax_text(&r)
    ))
}

fn centered_bound() -> Verdict {
    let r = run_search(Objective::CenteredL1, LEN, VMAX);
    let best = r.best_value.clone().unwrap();
    let spike_ratio = verify::check_centered_bound(&Sequence::delta(0))
        .unwrap()
        .ratio
        .unwrap();
    ensure!(r.violations.is_empty(), "{} violations", r.violations.len());
    ensure!(
        spike_ratio == int(2),
        "spike ratio {}",
        render(&spike_ratio)
    );
    ensure!(best >= int(2), "max {} below 2", render(&best));
    ensure!(
        best <= verify::centered_constant(),
        "max {} above 776/315",
        render(&best)
    );
    ensure!(r.recheck_best().unwrap(), "best value does not re-verify");
    let strict = if best < verify::centered_constant() {
        "strictly below"
    } else {
        "equal to"
    };
    Ok(format!(
        "{} sequences, max Var(Mf)/||f||_1 = {} at {} ({strict} 776/315), spike = 2",
        r.count_examined,
        render(&best),
        argmax_text(&r)
    ))
}

fn question_b() -> Verdict {
    let r = run_search(Objective::QuestionB, LEN, VMAX);
    let best = r.best_value.clone().unwrap();
    for v in &r.violations {
        ensure!(
            v.recheck().unwrap(),
            "witness does not re-verify: {}",
            v.to_json_line()
        );
    }
    ensure!(
        r.violations.is_empty() && best <= int(1),
        "FINDING: {} sequences with Var(Mf) > Var(f), max {} at {}",
        r.violations.len(),
        render(&best),
        argmax_text(&r)
    );
    Ok(format!(
        "{} sequences, max Var(Mf)/Var(f) = {} at {}, no counterexample",
        r.count_examined,
        render(&best),
        argmax_text(&r)
    ))
}

fn touching_maxima() -> Verdict {
    let seqs = enumerated();
    for f in &seqs {
        for kind in [Kind::Noncentered, Kind::Left, Kind::Right] {
            let report = verify::check_local_max_touch(f, kind).unwrap();
            ensure!(report.holds(), "{}", report.to_json_line());
        }
    }
    let ex2 = Sequence::from_ints(-4, &[10, 0, 0, 0, 0, 0, 0, 0, 10]);
    let report = verify::check_local_max_touch(&ex2, Kind::Centered).unwrap();
    let w = report.witness.iter().find(|w| w.index == Some(0));
    ensure!(
        report.outcome == Outcome::Violated,
        "centered check on the two-spike input holds"
    );
    ensure!(
        w.is_some_and(|w| w.lhs == frac(20, 9) && w.rhs == int(0)),
        "witness at 0: {:?}",
        w
    );
    Ok(format!(
        "{} sequences x 3 kinds touch; centered two-spike maximum at n=0 is 20/9 vs f(0)=0",
        seqs.len()
    ))
}

fn one_sided_relation() -> Verdict {
    let seqs = enumerated();
    let mut lines = Vec::new();
    let (mut with_strict, mut strict_points) = (0usize, 0usize);
    for f in &seqs {
        let report = verify::check_one_sided_relation(f).unwrap();
        ensure!(report.holds(), "{}", report.to_json_line());
        let less = report.detail["less"].as_u64().unwrap() as usize;
        if less > 0 {
            with_strict += 1;
            strict_points += less;
            lines.push(report.to_json_line());
        }
    }
    let spike = verify::check_one_sided_relation(&Sequence::delta(0)).unwrap();
    let at_minus_one = spike.detail["strict"]
        .as_array()
        .and_then(|s| s.iter().find(|p| p["n"] == -1))
        .cloned();
    ensure!(
        at_minus_one
            .as_ref()
            .is_some_and(|p| p["noncentered"] == "1/2" && p["one_sided_max"] == "2/3"),
        "spike at -1: {at_minus_one:?}"
    );
    let path = std::path::Path::new(env!("CARGO_TARGET_TMPDIR")).join("one_sided_census.jsonl");
    std::fs::write(&path, lines.join("\n") + "\n").map_err(|e| e.to_string())?;
    Ok(format!(
        "<= holds everywhere on {} sequences; strict at {strict_points} points in {with_strict} sequences \
         (spike n=-1: 1/2 vs 2/3); census in {}",
        seqs.len(),
        path.display()
    ))
}

fn lemma_bounds() -> Verdict {
    let mut config = SearchConfig::exhaustive(Objective::LemmaSum, 1, 1);
    config.lemma = Default::default();
    let r = exhaustive_search(&config).unwrap();
    ensure!(r.violations.is_empty(), "{} violations", r.violations.len());
    let best = r.best_value.clone().unwrap();
    ensure!(best <= verify::lemma_bound(), "max {}", render(&best));

    // Gap >= 2 maximum over the same space, by direct evaluation.
    let mut gap2_best = Rational::from_integer(0.into());
    for terms in dtm_core::search::increasing_sequences(5, -10, 10) {
        let a = IncreasingIntSeq::new(terms).unwrap();
        if a.gaps_at_least_two() {
            for n in -12..=12 {
                let v = verify::lemma_sum(n, &a);
                if v > gap2_best {
                    gap2_best = v;
                }
            }
        }
    }
    ensure!(
        gap2_best <= verify::lemma_gap2_bound(),
        "gap-2 max {}",
        render(&gap2_best)
    );

    let mut rng = common::rng(61);
    let mut random_best = Rational::from_integer(0.into());
    for _ in 0..10_000 {
        let len = rng.random_range(2..=30);
        let mut terms: Vec<i64> = rand::seq::index::sample(&mut rng, 101, len)
            .into_iter()
            .map(|i| i as i64 - 50)
            .collect();
        terms.sort_unstable();
        let a = IncreasingIntSeq::new(terms).unwrap();
        let n = rng.random_range(-60..=60);
        let report = verify::check_lemma_bounds(n, &a);
        ensure!(report.holds(), "{}", report.to_json_line());
        random_best = random_best.max(report.ratio.unwrap());
    }
    Ok(format!(
        "{} exhaustive (sequence, anchor) pairs, max {} <= 4/3; gap>=2 max {} <= 388/315; \
         10^4 random sequences (length <= 30, [-50,50]) max {}",
        r.count_examined,
        render(&best),
        render(&gap2_best),
        render(&random_best)
    ))
}

fn key_inequality() -> Verdict {
    let mut pairs = 0;
    for m in 1..=500 {
        for n in 0..m {
            let (lhs, rhs) = verify::key_inequality_sides(n, m);
            ensure!(
                lhs <= rhs,
                "fails at n={n}, m={m}: {} > {}",
                render(&lhs),
                render(&rhs)
            );
            ensure!(
                (lhs == rhs) == (m == n + 1),
                "equality pattern broken at n={n}, m={m}"
            );
            pairs += 1;
        }
    }
    Ok(format!(
        "{pairs} pairs 0 <= n < m <= 500 hold, equality exactly at m = n+1"
    ))
}

fn contribution_audit() -> Verdict {
    let mut rng = common::rng(81);
    let mut inputs: Vec<Sequence> = (0..500)
        .map(|_| common::random_ints(&mut rng, 12, 0, 20))
        .collect();
    let randoms = inputs.len();
    inputs.extend(enumerate_canonical(4, VMAX));
    for f in &inputs {
        let report = verify::contribution_bound_audit(f).unwrap();
        ensure!(report.holds(), "{}", report.to_json_line());
    }
    let spike = verify::contribution_bound_audit(&Sequence::delta(0)).unwrap();
    let d = &spike.detail;
    ensure!(
        d["variation"] == "2" && d["average_sum"] == "2" && d["l1_bound"] == "8/3",
        "spike chain {d}"
    );
    Ok(format!(
        "all three links hold on {randoms} random and {} enumerated sequences; spike 2 <= 2 <= 8/3",
        inputs.len() - randoms
    ))
}

fn closed_forms() -> Verdict {
    let d = Sequence::delta(0);
    let (m, mt) = (transform::centered(&d), transform::noncentered(&d));
    for n in -50i64..=50 {
        ensure!(
            m.value_at(n) == frac(1, 2 * n.abs() + 1),
            "Md at {n}: {}",
            render(&m.value_at(n))
        );
        ensure!(
            mt.value_at(n) == frac(1, n.abs() + 1),
            "M~d at {n}: {}",
            render(&mt.value_at(n))
        );
    }
    let (vm, vmt) = (m.total_variation().unwrap(), mt.total_variation().unwrap());
    ensure!(
        vm == int(2) && vmt == int(2),
        "variations {} and {}",
        render(&vm),
        render(&vmt)
    );
    Ok("Md(n) = 1/(2|n|+1), M~d(n) = 1/(|n|+1) for |n| <= 50; both variations = 2".into())
}

fn oracles_and_speed() -> Verdict {
    let mut rng = common::rng(101);
    for _ in 0..1000 {
        let f = common::random_ints(&mut rng, 30, -20, 20);
        let fast = transform::noncentered(&f);
        ensure!(
            fast == transform::noncentered_naive(&f),
            "noncentered mismatch on {}",
            f.to_json()
        );
        for side in [Side::Left, Side::Right] {
            ensure!(
                transform::one_sided(&f, side) == transform::one_sided_scan(&f, side),
                "one-sided mismatch on {}",
                f.to_json()
            );
        }
    }

    let big: Vec<i64> = (0..100_000).map(|_| rng.random_range(0..=100)).collect();
    let f = Sequence::trimmed(0, big.iter().map(|&v| int(v)).collect());
    let clock = Instant::now();
    let _ = transform::one_sided(&f, Side::Right);
    let hull_time = clock.elapsed();
    ensure!(
        hull_time < Duration::from_secs(10),
        "one-sided hull took {hull_time:?}"
    );

    let g = Sequence::trimmed(0, big[..10_000].iter().map(|&v| int(v)).collect());
    let clock = Instant::now();
    let _ = transform::noncentered(&g);
    let fast_time = clock.elapsed();
    ensure!(
        fast_time < Duration::from_secs(60),
        "fast noncentered took {fast_time:?}"
    );

    for objective in [Objective::Tanaka, Objective::CenteredL1] {
        let one = in_pool(1, || run_search(objective, LEN, VMAX));
        let four = in_pool(4, || run_search(objective, LEN, VMAX));
        ensure!(
            one.to_json() == four.to_json(),
            "{objective} report depends on thread count"
        );
    }
    Ok(format!(
        "1000 random widths <= 30 agree exactly; hull 10^5 points {:.2}s (< 10s); \
         noncentered 10^4 points {:.2}s (< 60s); 1 vs 4 threads identical",
        hull_time.as_secs_f64(),
        fast_time.as_secs_f64()
    ))
}

fn determinism() -> Verdict {
    let config = SearchConfig {
        seed: 42,
        budget: 10_000,
        ..SearchConfig::new(Mode::Stochastic, Objective::Tanaka)
    };
    let a = in_pool(1, || stochastic_search(&config).unwrap()).to_json();
    let b = in_pool(4, || stochastic_search(&config).unwrap()).to_json();
    ensure!(a == b, "stochastic reports differ across runs");
    let stochastic = SearchReport::from_json(&a).unwrap();
    ensure!(
        stochastic.violations.is_empty(),
        "stochastic run visited a violation"
    );

    for objective in [
        Objective::Tanaka,
        Objective::CenteredL1,
        Objective::QuestionB,
    ] {
        let whole = run_search(objective, LEN, VMAX);
        ensure!(
            stochastic.objective != objective || stochastic.best_value <= whole.best_value,
            "stochastic best exceeds exhaustive best"
        );
        for count in [2u64, 3, 7] {
            let parts = Shard::all(count)
                .unwrap()
                .into_iter()
                .map(|shard| {
                    exhaustive_search(&SearchConfig {
                        shard,
                        ..SearchConfig::exhaustive(objective, LEN, VMAX)
                    })
                    .unwrap()
                })
                .collect();
            let merged = SearchReport::merge(parts).unwrap();
            ensure!(merged == whole, "{objective} with {count} shards differs");
        }
    }
    Ok(
        "seed 42 budget 10^4 byte-identical on 1 and 4 threads; shard counts 2, 3, 7 merge to the \
        single-shard report"
            .into(),
    )
}

fn main() {
    let criteria: [Criterion; 11] = [
        (
            1,
            "noncentered variation bound, exhaustive L=6 V=4",
            noncentered_bound,
        ),
        (
            2,
            "centered variation vs l1 norm, exhaustive L=6 V=4",
            centered_bound,
        ),
        (
            3,
            "centered variation vs Var(f), exhaustive L=6 V=4",
            question_b,
        ),
        (4, "local maxima touch f", touching_maxima),
        (5, "noncentered <= max of one-sided", one_sided_relation),
        (6, "pair-sum bounds 4/3 and 388/315", lemma_bounds),
        (7, "key inequality", key_inequality),
        (8, "contribution chain audit", contribution_audit),
        (9, "spike closed forms", closed_forms),
        (10, "oracle equivalence and performance", oracles_and_speed),
        (11, "determinism", determinism),
    ];
    let mut failed = 0;
    for (id, title, body) in criteria {
        let clock = Instant::now();
        let verdict = catch_unwind(AssertUnwindSafe(body))
            .unwrap_or_else(|p| Err(format!("panicked: {:?}", p.downcast_ref::<String>())));
        let secs = clock.elapsed().as_secs_f64();
        match verdict {
            Ok(summary) => println!("[PASS] C{id:<2} {title} | {summary} | {EXACT} | {secs:.1}s"),
            Err(reason) => {
                failed += 1;
                println!("[FAIL] C{id:<2} {title} | {reason} | {EXACT} | {secs:.1}s");
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
