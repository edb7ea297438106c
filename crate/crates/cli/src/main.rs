use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;

use lctrs::analysis::{analyze, ccps, cpcps, AnalysisConfig, Criterion, SearchConfig};
use lctrs::grounding::{check_cp_correspondence, check_step_equivalence, ground_fragment, trs_closedness_check};
use lctrs::logic::smtlib::SmtBackend;
use lctrs::logic::Solver;
use lctrs::pcp::{build_rp, check_candidate, decode, default_fuel, PcpInstance};
use lctrs::rewriting::{Lctrs, ValueDomain};
use lctrs_cli::report;

#[derive(Parser)]
#[command(name = "lctrs", version, about = "Confluence analysis for logically constrained rewrite systems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: Opts,
}

#[derive(Args)]
struct Opts {
    /// Criteria to try, comma separated (wo, adc, pc).
    #[arg(long, global = true, default_value = "wo,adc,pc")]
    criteria: String,
    /// Bound on rewrite tails when closing critical pairs.
    #[arg(long, global = true, default_value_t = 4)]
    depth: usize,
    /// Integer values used for ground instances, as LO..HI.
    #[arg(long, global = true, default_value = "-4..4", allow_hyphen_values = true)]
    values: String,
    /// External SMT-LIB solver command for constraints outside linear arithmetic.
    #[arg(long, global = true)]
    smt: Option<String>,
    /// Timeout per external solver call in milliseconds.
    #[arg(long, global = true, default_value_t = 2000)]
    timeout: u64,
    /// Sampled models or terms per system for `check`.
    #[arg(long, global = true, default_value_t = 200)]
    samples: usize,
    /// Machine-readable output.
    #[arg(long, global = true)]
    json: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Decide confluence: prints YES, NO or MAYBE followed by a report.
    Analyze { file: PathBuf },
    /// List the constrained critical pairs.
    Ccp { file: PathBuf },
    /// List the constrained parallel critical pairs.
    Cpcp { file: PathBuf },
    /// Show the ground fragment over the value range and check it directly.
    Ground { file: PathBuf },
    /// Compare the constrained analysis against the ground fragment.
    Check { file: PathBuf },
    /// Print the system encoding a PCP instance such as "1,101;10,00;011,11".
    GenPcp {
        pairs: String,
        /// Instead, rewrite the candidate with this code to top or bot.
        #[arg(long)]
        candidate: Option<BigInt>,
    },
}

/// Marks errors in the user's input, reported with exit status 1.
fn input<E: Into<anyhow::Error>>(e: E) -> anyhow::Error {
    anyhow::Error::new(InputErrorMarker).context(e.into().to_string())
}

#[derive(Debug, thiserror::Error)]
#[error("input error")]
struct InputErrorMarker;

fn parse_values(s: &str) -> anyhow::Result<(i64, i64)> {
    let (lo, hi) = s
        .split_once("..")
        .ok_or_else(|| anyhow!("--values expects LO..HI, got `{s}`"))?;
    let lo: i64 = lo.trim().parse().with_context(|| format!("bad lower bound `{lo}`"))?;
    let hi: i64 = hi.trim().parse().with_context(|| format!("bad upper bound `{hi}`"))?;
    if lo > hi {
        bail!("empty value range {lo}..{hi}");
    }
    Ok((lo, hi))
}

fn load(path: &PathBuf) -> anyhow::Result<Lctrs> {
    let text = std::fs::read_to_string(path).map_err(|e| input(anyhow!("{}: {e}", path.display())))?;
    lctrs_cli::parse(&text).map_err(|e| input(anyhow!("{}:{e}", path.display())))
}

fn solver(opts: &Opts) -> anyhow::Result<Solver> {
    match &opts.smt {
        None => Ok(Solver::internal()),
        Some(cmd) => SmtBackend::new(cmd, Duration::from_millis(opts.timeout))
            .map(Solver::with_backend)
            .ok_or_else(|| input(anyhow!("cannot start SMT solver `{cmd}`"))),
    }
}

fn print_json(v: &serde_json::Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("serializable"));
}

fn run(cli: Cli) -> anyhow::Result<()> {
    let opts = &cli.opts;
    let (lo, hi) = parse_values(&opts.values).map_err(input)?;
    let criteria = opts
        .criteria
        .split(',')
        .map(|s| Criterion::parse(s.trim()).ok_or_else(|| input(anyhow!("unknown criterion `{s}`"))))
        .collect::<anyhow::Result<Vec<_>>>()?;
    match &cli.command {
        Command::Analyze { file } => {
            let r = load(file)?;
            let solver = solver(opts)?;
            let config = AnalysisConfig {
                criteria,
                search: SearchConfig {
                    depth: opts.depth,
                    ..SearchConfig::default()
                },
                domain: ValueDomain::for_system(lo, hi, &r),
                ..AnalysisConfig::default()
            };
            let rep = analyze(&r, &config, &solver);
            if opts.json {
                print_json(&report::report_json(&rep));
            } else {
                print!("{}", report::report_text(&rep));
            }
        }
        Command::Ccp { file } | Command::Cpcp { file } => {
            let r = load(file)?;
            let solver = solver(opts)?;
            let pairs = if matches!(cli.command, Command::Ccp { .. }) {
                ccps(&r, &solver)
            } else {
                cpcps(&r, &solver)
            };
            if opts.json {
                print_json(&serde_json::Value::Array(pairs.iter().map(report::pair_json).collect()));
            } else {
                print!("{}", report::pairs_text(&pairs));
            }
        }
        Command::Ground { file } => {
            let r = load(file)?;
            let solver = solver(opts)?;
            let f = ground_fragment(&r, &ValueDomain::for_system(lo, hi, &r));
            let cps = f.critical_pairs(&solver);
            let pcps = f.parallel_critical_pairs(&solver);
            let closed = trs_closedness_check(&f, opts.depth, SearchConfig::default().nesting, &solver);
            if opts.json {
                print_json(&report::fragment_json(&f, &cps, &pcps, &closed));
            } else {
                print!("{}", report::fragment_text(&f, &cps, &pcps, &closed));
            }
        }
        Command::Check { file } => {
            let r = load(file)?;
            let solver = solver(opts)?;
            let d = ValueDomain::for_system(lo, hi, &r);
            let corr = check_cp_correspondence(&r, &d, opts.samples, &solver);
            let steps = check_step_equivalence(&r, &d, opts.samples, 0, &solver);
            if opts.json {
                print_json(&report::check_json(&corr, &steps));
            } else {
                print!("{}", report::check_text(&corr, &steps));
            }
            if !corr.violations.is_empty() || !steps.violations.is_empty() {
                bail!("the constrained analysis disagrees with the ground fragment");
            }
        }
        Command::GenPcp { pairs, candidate } => {
            let p = PcpInstance::parse(pairs).map_err(input)?;
            match candidate {
                None => print!("{}", lctrs_cli::print(&build_rp(&p))),
                Some(code) => {
                    if *code <= BigInt::from(0) {
                        return Err(input(anyhow!("candidate codes are positive")));
                    }
                    let w: Vec<String> = decode(code, p.len()).iter().map(ToString::to_string).collect();
                    let result = check_candidate(&p, code, default_fuel(&p, code));
                    println!("{result:?} (indices {})", w.join(" "));
                }
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match std::panic::catch_unwind(|| run(cli)) {
        Ok(Ok(())) => ExitCode::SUCCESS,
        Ok(Err(e)) if e.is::<InputErrorMarker>() => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
        Ok(Err(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
        Err(_) => ExitCode::from(2),
    }
}
