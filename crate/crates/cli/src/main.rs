//! `dtm`: exact discrete maximal transforms from the command line.
//!
//! Exit status: 0 on success, 1 when a check or search reports a violation or
//! finding, 2 on usage and input errors.

use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use serde_json::json;

use dtm_core::rational::{self, Rational};
use dtm_core::search::{self, LemmaSpace, Mode, Objective, SearchConfig, Shard};
use dtm_core::transform::{self, Kind};
use dtm_core::verify::{self, CheckInput, CheckName, IncreasingIntSeq, Outcome};
use dtm_core::Sequence;

#[derive(Parser)]
#[command(
    name = "dtm",
    version,
    about = "Exact discrete Hardy-Littlewood maximal transforms"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Tabulate a maximal transform as CSV.
    Transform {
        #[command(flatten)]
        seq: SeqArgs,
        /// centered, noncentered, noncentered-naive, left or right.
        #[arg(long, default_value = "centered")]
        kind: String,
        /// Extra rows on each side of the support.
        #[arg(long, default_value_t = 0)]
        pad: u64,
        #[arg(long)]
        decimal: bool,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Total variation of a sequence and of its transforms.
    Var {
        #[command(flatten)]
        seq: SeqArgs,
        /// Restrict to one transform kind.
        #[arg(long)]
        kind: Option<Kind>,
        #[arg(long)]
        decimal: bool,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Run one exact check and print its report.
    Verify {
        #[arg(long)]
        check: CheckName,
        #[command(flatten)]
        input: SeqArgs,
        #[arg(long)]
        kind: Option<Kind>,
        #[arg(long, allow_hyphen_values = true)]
        n: Option<i64>,
        #[arg(long, allow_hyphen_values = true)]
        m: Option<i64>,
        /// Increasing integers for lemma-bounds.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        seq: Option<Vec<i64>>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Exhaustive or seeded stochastic search for extremal ratios.
    Search(SearchArgs),
    /// Evaluate the pair sum of an increasing sequence at an anchor.
    LemmaSum {
        #[arg(long, allow_hyphen_values = true)]
        n: i64,
        #[arg(
            long,
            value_delimiter = ',',
            allow_hyphen_values = true,
            required = true
        )]
        seq: Vec<i64>,
        #[arg(long)]
        decimal: bool,
    },
}

#[derive(Args)]
struct SeqArgs {
    /// Sequence file (text or JSON); `-` reads stdin.
    #[arg(long, conflicts_with = "seq_values")]
    input: Option<PathBuf>,
    /// Inline values `v1,v2,...`, each `p` or `p/q`.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    seq_values: Option<Vec<String>>,
    /// Index of the first inline value.
    #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
    seq_offset: i64,
    /// Drop zero values at either end instead of rejecting them.
    #[arg(long)]
    trim: bool,
}

#[derive(Args)]
struct SearchArgs {
    #[arg(long, default_value = "exhaustive")]
    mode: Mode,
    #[arg(long, default_value = "tanaka")]
    objective: Objective,
    /// Largest support width.
    #[arg(long, default_value_t = 6)]
    len: usize,
    /// Largest value.
    #[arg(long, default_value_t = 4)]
    vmax: i64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Evaluations in stochastic mode.
    #[arg(long, default_value_t = 10_000)]
    budget: u64,
    /// Evaluations per restart in stochastic mode.
    #[arg(long, default_value_t = 200)]
    restart_budget: u64,
    /// Run only shard `i/N`.
    #[arg(long)]
    shard: Option<Shard>,
    /// Worker threads.
    #[arg(long)]
    parallel: Option<usize>,
    /// Longest increasing sequence for the lemma objective.
    #[arg(long, default_value_t = 5)]
    lemma_len: usize,
    /// Term range `lo,hi` for the lemma objective.
    #[arg(long, value_delimiter = ',', num_args = 2, allow_hyphen_values = true, default_values_t = [-10, 10])]
    lemma_range: Vec<i64>,
    /// Anchor range `lo,hi` for the lemma objective.
    #[arg(long, value_delimiter = ',', num_args = 2, allow_hyphen_values = true, default_values_t = [-12, 12])]
    anchor_range: Vec<i64>,
    /// List candidates scoring at least this value.
    #[arg(long)]
    threshold: Option<String>,
    /// Write the listed candidates as CSV.
    #[arg(long, requires = "threshold")]
    csv: Option<PathBuf>,
    #[arg(long)]
    output: Option<PathBuf>,
}

/// Outcome of a command that ran to completion.
enum Status {
    Ok,
    Finding,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().filter_or("DTM_LOG", "warn")).init();
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(Status::Ok) => ExitCode::SUCCESS,
        Ok(Status::Finding) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> anyhow::Result<Status> {
    match command {
        Command::Transform {
            seq,
            kind,
            pad,
            decimal,
            output,
        } => {
            let f = seq.load()?;
            let t = match kind.as_str() {
                "noncentered-naive" => transform::noncentered_naive(&f),
                other => {
                    transform::transform(&f, other.parse::<Kind>().map_err(anyhow::Error::msg)?)
                }
            };
            emit(output.as_deref(), &t.to_csv(pad, decimal))?;
            Ok(Status::Ok)
        }
        Command::Var {
            seq,
            kind,
            decimal,
            output,
        } => {
            let f = seq.load()?;
            let kinds = kind.map_or(Kind::ALL.to_vec(), |k| vec![k]);
            let mut transforms = serde_json::Map::new();
            for k in kinds {
                let v = transform::transform(&f, k).total_variation()?;
                transforms.insert(k.name().to_string(), number(&v, decimal));
            }
            let doc = json!({
                "sequence": f,
                "variation": number(&f.total_variation(), decimal),
                "l1_norm": number(&f.l1_norm(), decimal),
                "transforms": transforms,
            });
            emit(
                output.as_deref(),
                &format!("{}\n", serde_json::to_string_pretty(&doc)?),
            )?;
            Ok(Status::Ok)
        }
        Command::Verify {
            check,
            input: seq_args,
            kind,
            n,
            m,
            seq,
            output,
        } => {
            let input = match check {
                CheckName::KeyInequality => CheckInput::Pair {
                    n: n.context("--n is required")?,
                    m: m.context("--m is required")?,
                },
                CheckName::LemmaBounds => CheckInput::Lemma {
                    n: n.context("--n is required")?,
                    a: IncreasingIntSeq::new(seq.context("--seq is required")?)?,
                },
                CheckName::Touch | CheckName::ExtremaIdentity => CheckInput::Sequence {
                    sequence: seq_args.load()?,
                    kind: Some(kind.context("--kind is required for this check")?),
                },
                _ => CheckInput::Sequence {
                    sequence: seq_args.load()?,
                    kind: None,
                },
            };
            let report = verify::run(check, &input)?;
            emit(output.as_deref(), &format!("{}\n", report.to_json_line()))?;
            let mut finding = report.outcome == Outcome::Violated;
            if finding {
                eprintln!("FINDING: check {check} violated; the report carries the witness");
            }
            if check == CheckName::OneSided {
                let strict = report.detail["less"].as_u64().unwrap_or(0);
                if strict > 0 {
                    eprintln!(
                        "FINDING: noncentered value strictly below the one-sided maximum at {strict} point(s)"
                    );
                    finding = true;
                }
            }
            Ok(if finding { Status::Finding } else { Status::Ok })
        }
        Command::Search(args) => search_command(args),
        Command::LemmaSum { n, seq, decimal } => {
            let a = IncreasingIntSeq::new(seq)?;
            let value = verify::lemma_sum(n, &a);
            let vacuous = a.terms().len() < 2;
            let verdict = |bound: &Rational, applies: bool| {
                if vacuous {
                    "vacuous"
                } else if !applies {
                    "not applicable"
                } else if value <= *bound {
                    "holds"
                } else {
                    "violated"
                }
            };
            let general = verdict(&verify::lemma_bound(), true);
            let gap2 = verdict(&verify::lemma_gap2_bound(), a.gaps_at_least_two());
            let doc = json!({
                "n": n,
                "a": a,
                "value": number(&value, decimal),
                "bound": {"value": "4/3", "verdict": general},
                "gap2_bound": {"value": "388/315", "verdict": gap2},
            });
            println!("{}", serde_json::to_string_pretty(&doc)?);
            Ok(if general == "violated" || gap2 == "violated" {
                Status::Finding
            } else {
                Status::Ok
            })
        }
    }
}

fn search_command(args: SearchArgs) -> anyhow::Result<Status> {
    let threshold = match &args.threshold {
        Some(t) => Some(rational::parse(t).with_context(|| format!("malformed threshold {t:?}"))?),
        None => None,
    };
    let config = SearchConfig {
        mode: args.mode,
        objective: args.objective,
        support_len_max: args.len,
        value_max: args.vmax,
        seed: args.seed,
        budget: args.budget,
        restart_budget: args.restart_budget,
        shard: args.shard.unwrap_or(Shard::WHOLE),
        lemma: LemmaSpace {
            len_max: args.lemma_len,
            lo: args.lemma_range[0],
            hi: args.lemma_range[1],
            anchor_lo: args.anchor_range[0],
            anchor_hi: args.anchor_range[1],
        },
        threshold,
    };
    config.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(args.parallel.unwrap_or(0))
        .build()
        .context("cannot start worker threads")?;
    let report = pool.install(|| search::search(&config))?;
    emit(args.output.as_deref(), &format!("{}\n", report.to_json()))?;
    if let Some(path) = &args.csv {
        std::fs::write(path, report.threshold_csv())
            .with_context(|| format!("cannot write {}", path.display()))?;
    }
    if report.violations.is_empty() {
        Ok(Status::Ok)
    } else {
        eprintln!(
            "FINDING: {} candidate(s) violate the {} bound; each entry in `violations` re-verifies standalone",
            report.violations.len(),
            report.objective
        );
        Ok(Status::Finding)
    }
}

impl SeqArgs {
    fn load(&self) -> anyhow::Result<Sequence> {
        if let Some(values) = &self.seq_values {
            let parsed = values
                .iter()
                .map(|v| rational::parse(v).with_context(|| format!("malformed rational {v:?}")))
                .collect::<anyhow::Result<Vec<_>>>()?;
            return Ok(if self.trim {
                Sequence::trimmed(self.seq_offset, parsed)
            } else {
                Sequence::new(self.seq_offset, parsed)?
            });
        }
        let Some(path) = &self.input else {
            bail!("give a sequence with --input PATH or --seq-values");
        };
        let text = if path == Path::new("-") {
            let mut text = String::new();
            std::io::stdin().read_to_string(&mut text)?;
            text
        } else {
            std::fs::read_to_string(path)
                .with_context(|| format!("cannot read {}", path.display()))?
        };
        Sequence::parse(&text, self.trim).with_context(|| format!("in {}", path.display()))
    }
}

/// `"p/q"`, or `{"exact": "p/q", "approx": x}` with `--decimal`.
fn number(q: &Rational, decimal: bool) -> serde_json::Value {
    if decimal {
        json!({"exact": rational::render(q), "approx": rational::approx(q)})
    } else {
        json!(rational::render(q))
    }
}

fn emit(path: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).with_context(|| format!("cannot write {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
