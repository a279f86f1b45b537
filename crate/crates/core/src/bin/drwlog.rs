use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use drwlog_core::cli::{self, InlineModel, RunOptions, ScenarioConfig, EXIT_CONFIG, EXIT_FAILED, EXIT_OK};
use drwlog_core::Error;

#[derive(Parser)]
#[command(name = "drwlog", version, about = "Finite-precision verifier for log de Rham-Witt sheaves with zeros")]
struct Args {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run the suites of every scenario in a config file.
    Verify {
        #[arg(long)]
        config: PathBuf,
        /// Worker threads.
        #[arg(long)]
        jobs: Option<usize>,
        /// Write the JSON report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Report `elapsed_ms = 0`.
        #[arg(long)]
        no_timing: bool,
    },
    /// Factor a log form into dlog products.
    Decompose {
        /// e.g. "p=3, e=1, f=1, g=1, r=[1], N=5"
        #[arg(long)]
        model: String,
        #[arg(long)]
        form: String,
    },
    /// Scan models for strict inclusions between the comparison filtrations.
    Explore {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        jobs: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        no_timing: bool,
    },
}

fn fail(e: &Error) -> ExitCode {
    eprintln!("drwlog: {e}");
    ExitCode::from(cli::exit_code_of(e) as u8)
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<(), Error> {
    match out {
        Some(p) => std::fs::write(p, format!("{text}\n")).map_err(|e| Error::Io(format!("{}: {e}", p.display()))),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let args = Args::parse();
    match args.cmd {
        Cmd::Verify { config, jobs, out, no_timing } => {
            let cfg = match ScenarioConfig::load(&config) {
                Ok(c) => c,
                Err(e) => return fail(&e),
            };
            let outcome = match cli::run(&cfg, &RunOptions { jobs, no_timing }) {
                Ok(o) => o,
                Err(e) => return fail(&e),
            };
            for r in &outcome.reports {
                let verdict = if r.passed() { "pass" } else { "FAIL" };
                eprintln!("{verdict} {} {} lhs={} rhs={}", r.scenario, r.suite, r.lhs_dim, r.rhs_dim);
                for s in r.failures() {
                    eprintln!("    {}: {}", s.name, s.detail);
                }
            }
            let json = match cli::reports_json(&outcome.reports) {
                Ok(j) => j,
                Err(e) => return fail(&e),
            };
            if let Err(e) = emit(&json, out.as_ref()) {
                return fail(&e);
            }
            ExitCode::from(outcome.exit_code as u8)
        }
        Cmd::Decompose { model, form } => {
            let model = match InlineModel::parse(&model) {
                Ok(m) => m,
                Err(e) => return fail(&e),
            };
            match cli::decompose_text(&model, &form) {
                Ok(t) => {
                    println!("{t}");
                    ExitCode::from(EXIT_OK as u8)
                }
                Err(e @ (Error::Parse { .. } | Error::Type(_))) => {
                    eprintln!("drwlog: {e}");
                    ExitCode::from(EXIT_CONFIG as u8)
                }
                Err(e) => {
                    eprintln!("drwlog: {e}");
                    ExitCode::from(EXIT_FAILED as u8)
                }
            }
        }
        Cmd::Explore { config, jobs, out, no_timing } => {
            let cfg = match config.map(|c| ScenarioConfig::load(&c)).transpose() {
                Ok(c) => c.unwrap_or_default(),
                Err(e) => return fail(&e),
            };
            let (res, code) = match cli::run_explore(&cfg, &RunOptions { jobs, no_timing }) {
                Ok(x) => x,
                Err(e) => return fail(&e),
            };
            eprintln!("{:>2} {:<12} {:>2}  gk<ours ours<jsz  log: gk<ours ours<jsz  violations", "p", "r", "q");
            for row in res.rows.iter().filter(|r| r.gk_ours_strict || r.ours_jsz_strict || r.gk_ours_log_strict || r.ours_jsz_log_strict) {
                eprintln!(
                    "{:>2} {:<12} {:>2}  {:>7} {:>8}  {:>12} {:>8}  {}",
                    row.p,
                    format!("{:?}", row.r),
                    row.q,
                    row.gk_ours_strict,
                    row.ours_jsz_strict,
                    row.gk_ours_log_strict,
                    row.ours_jsz_log_strict,
                    row.violations.len()
                );
            }
            let json = match serde_json::to_string_pretty(&res) {
                Ok(j) => j,
                Err(e) => return fail(&Error::Io(e.to_string())),
            };
            if let Err(e) = emit(&json, out.as_ref()) {
                return fail(&e);
            }
            ExitCode::from(code as u8)
        }
    }
}
