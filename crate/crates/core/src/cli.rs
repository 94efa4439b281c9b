//! The `submax-lie` command line.
//!
//! Exit codes: 0 success or match, 1 verification mismatch, 2 usage or input
//! error, 3 budget refusal. Diagnostics go to standard error prefixed with
//! `error:` or `refused:`.

use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::actions::weyl_conjugacy_search;
use crate::commuting::{
    enumerate_commuting, identify_named, max_commuting_size, max_table, p_rank, predicted_tags, Level, NamedSet,
    DEFAULT_NODE_BUDGET,
};
use crate::error::{Error, Result};
use crate::nilradical::FieldSpec;
use crate::ordering::TotalOrder;
use crate::report::{self, Format};
use crate::roots::{Rank, RootSet};
use crate::solver::{
    classify_fiber, dichotomy_check, lt_fiber, predicted_family, sampled_lt_lemma_check, FiberProblem, Strategy,
    DEFAULT_FIBER_BUDGET, MAX_FIBER_SOLUTIONS,
};
use crate::verify::{run_suite, VerifyOptions};

pub const EXIT_OK: i32 = 0;
pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_REFUSED: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "submax-lie", version, about = "Elementary subalgebras of submaximal rank in the nilradical of sl_(n+1)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Common {
    /// Rank n of A_n.
    #[arg(long)]
    n: usize,
    #[arg(long, value_enum, default_value = "md")]
    format: Format,
}

#[derive(Debug, Args)]
struct FieldArgs {
    /// Prime; defaults to the smallest prime not dividing n+1.
    #[arg(long)]
    p: Option<u32>,
    /// Accept a prime dividing n+1.
    #[arg(long)]
    allow_nonstandard: bool,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum LevelArg {
    Rk,
    Submax,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum StrategyArg {
    Search,
    Replay,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Experiment {
    LtLemma,
    Dichotomy,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Expectation {
    Found,
    None,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// p-rank and submaximal rank.
    Rank {
        #[command(flatten)]
        common: Common,
        /// Also compute the maximum commuting-set size by search.
        #[arg(long)]
        brute_force: bool,
        #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
        budget: u64,
    },
    /// Predicted maximal commuting sets next to the enumeration.
    Tables {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value = "submax")]
        level: LevelArg,
        #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
        budget: u64,
    },
    /// Commuting root sets of a given size.
    Enumerate {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        r: usize,
        /// Keep only sets with no commuting single-root extension.
        #[arg(long)]
        maximal: bool,
        #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
        budget: u64,
    },
    /// All elementary subalgebras with a given leading-term set.
    Fiber {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        field: FieldArgs,
        /// rad:k, odd, ev-low, ev-high, or a root list such as "1-3,2-4".
        #[arg(long)]
        lt: String,
        #[arg(long, value_enum, default_value = "search")]
        strategy: StrategyArg,
        /// "paper" or "revlex:<simple-root indices, least first>".
        #[arg(long, default_value = "paper")]
        order: String,
        #[arg(long, default_value_t = DEFAULT_FIBER_BUDGET)]
        budget: u64,
    },
    /// Search for a permutation carrying one root set onto another.
    Conjugacy {
        #[command(flatten)]
        common: Common,
        /// Named set or root list.
        #[arg(long)]
        r1: String,
        #[arg(long)]
        r2: String,
        /// Exit 1 unless the outcome is as stated.
        #[arg(long, value_enum)]
        expect: Option<Expectation>,
    },
    /// Seeded sampling experiments.
    Sample {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long, value_enum, default_value = "lt-lemma")]
        experiment: Experiment,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run the acceptance criteria up to a rank bound.
    Verify {
        /// "all" or a comma list of criterion numbers.
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 6)]
        n_max: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Overrides every criterion's sample count.
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long, value_enum, default_value = "md")]
        format: Format,
    },
}

/// Parses `argv` (program name first) and runs, writing to the given streams.
pub fn run_with(argv: &[String], out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    EXIT_OK
                }
                _ => {
                    let text = e.to_string();
                    let body = text.strip_prefix("error: ").unwrap_or(&text);
                    let _ = write!(err, "error: {body}");
                    EXIT_USAGE
                }
            };
        }
    };
    match execute(cli.command, out, err) {
        Ok(code) => code,
        Err(e @ Error::BudgetExceeded { .. }) => {
            let _ = writeln!(err, "refused: {e}");
            EXIT_REFUSED
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}

pub fn run(argv: &[String]) -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(argv, &mut stdout.lock(), &mut stderr.lock())
}

fn field_for(rank: Rank, args: &FieldArgs) -> Result<FieldSpec> {
    let p = args.p.unwrap_or_else(|| FieldSpec::default_prime(rank));
    if args.allow_nonstandard {
        FieldSpec::new_nonstandard(p, rank)
    } else {
        FieldSpec::new(p, rank)
    }
}

/// A named set or an explicit root list.
fn root_set_arg(rank: Rank, text: &str) -> Result<(RootSet, Option<NamedSet>)> {
    match text.parse::<NamedSet>() {
        Ok(tag) => Ok((tag.resolve(rank)?, Some(tag))),
        Err(_) => {
            let set = RootSet::parse(rank, text)?;
            Ok((set, identify_named(&set)))
        }
    }
}

fn emit(out: &mut dyn Write, text: &str) -> Result<()> {
    out.write_all(text.as_bytes()).map_err(|e| Error::Precondition(format!("write failed: {e}")))
}

fn execute(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    match command {
        Command::Rank { common, brute_force, budget } => {
            let rank = Rank::new(common.n)?;
            let rk = p_rank(rank);
            let computed = if brute_force { Some(max_commuting_size(rank, budget)?) } else { None };
            let r = report::RankReport { n: rank.n(), rk, submax: rk - 1, brute_force: computed, matches: computed.map(|c| c == rk) };
            emit(out, &report::render_rank(&r, common.format))?;
            Ok(if r.matches == Some(false) { EXIT_MISMATCH } else { EXIT_OK })
        }
        Command::Tables { common, level, budget } => {
            let rank = Rank::new(common.n)?;
            let level = match level {
                LevelArg::Rk => Level::Rk,
                LevelArg::Submax => Level::Submax,
            };
            let table = max_table(rank, level, budget)?;
            emit(out, &report::render_table(&table, common.format))?;
            if let Some(reason) = &table.refused {
                let _ = writeln!(err, "refused: {reason}");
                return Ok(EXIT_REFUSED);
            }
            Ok(if table.matches == Some(true) { EXIT_OK } else { EXIT_MISMATCH })
        }
        Command::Enumerate { common, r, maximal, budget } => {
            let rank = Rank::new(common.n)?;
            let sets = enumerate_commuting(rank, r, maximal, budget)?;
            let e = report::EnumerationReport { n: rank.n(), r, maximal_only: maximal, count: sets.len(), sets };
            emit(out, &report::render_enumeration(&e, common.format))?;
            Ok(EXIT_OK)
        }
        Command::Fiber { common, field, lt, strategy, order, budget } => {
            let rank = Rank::new(common.n)?;
            let f = field_for(rank, &field)?;
            let ord = TotalOrder::parse(rank, &order)?;
            let (pivots, tag) = root_set_arg(rank, &lt)?;
            let strategy = match strategy {
                StrategyArg::Search => Strategy::Search,
                StrategyArg::Replay => Strategy::Replay,
            };
            let mut problem = FiberProblem::new(&f, &ord, pivots, strategy).with_budget(budget);
            problem.case = tag;
            let result = lt_fiber(&problem)?;
            let family_case = match tag {
                Some(t) if rank.n() >= 5 && predicted_tags(rank, Level::Submax).is_ok_and(|v| v.contains(&t)) => Some(t),
                _ => None,
            };
            let classification = match family_case {
                Some(t) if result.complete => Some(classify_fiber(&result, &predicted_family(t, rank)?, &f, &ord)?),
                _ => None,
            };
            let complete = result.complete;
            let rep = report::FiberReport {
                problem,
                matches_family: classification.as_ref().map(|c| c.matches),
                classification,
                result,
            };
            if !complete {
                let _ = match strategy {
                    Strategy::Search if rep.result.len() >= MAX_FIBER_SOLUTIONS => writeln!(
                        err,
                        "refused: the fiber has more than {MAX_FIBER_SOLUTIONS} members; the search stopped"
                    ),
                    Strategy::Search => writeln!(err, "refused: search budget of {budget} nodes exhausted; the fiber is incomplete"),
                    Strategy::Replay => writeln!(err, "refused: propagation did not determine every coefficient"),
                };
                return Ok(EXIT_REFUSED);
            }
            emit(out, &report::render_fiber(&rep, common.format))?;
            Ok(if rep.matches_family == Some(false) { EXIT_MISMATCH } else { EXIT_OK })
        }
        Command::Conjugacy { common, r1, r2, expect } => {
            let rank = Rank::new(common.n)?;
            let (a, _) = root_set_arg(rank, &r1)?;
            let (b, _) = root_set_arg(rank, &r2)?;
            let w = weyl_conjugacy_search(&a, &b)?;
            let expected = expect.map(|e| matches!(e, Expectation::Found));
            let found = w.is_some();
            let rep = report::ConjugacyReport {
                n: rank.n(),
                r1: a,
                r2: b,
                action: "strict",
                found,
                permutation: w,
                expected,
                matches: expected.map(|e| e == found),
            };
            emit(out, &report::render_conjugacy(&rep, common.format))?;
            Ok(if rep.matches == Some(false) { EXIT_MISMATCH } else { EXIT_OK })
        }
        Command::Sample { common, field, experiment, samples, seed } => {
            let rank = Rank::new(common.n)?;
            let f = field_for(rank, &field)?;
            let (text, violations, inconclusive) = match experiment {
                Experiment::LtLemma => {
                    let r = sampled_lt_lemma_check(rank, &f, samples, seed)?;
                    let bad = r.violations + usize::from(!r.pool_valid);
                    (report::render_lt_lemma(&r, common.format), bad, r.inconclusive)
                }
                Experiment::Dichotomy => {
                    let r = dichotomy_check(rank, &f, samples, seed)?;
                    (report::render_dichotomy(&r, common.format), r.violations, r.inconclusive)
                }
            };
            emit(out, &text)?;
            if violations > 0 {
                return Ok(EXIT_MISMATCH);
            }
            if inconclusive > 0 {
                let _ = writeln!(err, "refused: {inconclusive} samples exceeded the coset budget");
                return Ok(EXIT_REFUSED);
            }
            Ok(EXIT_OK)
        }
        Command::Verify { suite, n_max, seed, samples, format } => {
            let criteria: Vec<u8> = if suite == "all" {
                (1..=10).collect()
            } else {
                suite
                    .split(',')
                    .map(|s| s.trim().parse::<u8>().map_err(|_| Error::Parse(format!("bad criterion {s:?}"))))
                    .collect::<Result<_>>()?
            };
            let rep = run_suite(&criteria, &VerifyOptions { n_max, seed, samples })?;
            emit(out, &report::render_verify(&rep, format))?;
            Ok(if rep.passed { EXIT_OK } else { EXIT_MISMATCH })
        }
    }
}
