//! `verify`: run the identity suites against a configuration and emit a
//! JSON-lines report.
//!
//! Exit codes: 0 when every identity passes, 1 when any fails, 2 on
//! configuration errors.

mod config;
mod runner;

use clap::{Parser, Subcommand};
use std::io::Write;
use std::process::ExitCode;

use config::SuiteConfig;
use sklyanin_core::suites;

#[derive(Parser)]
#[command(name = "verify", about = "Certify the elliptic identity suites with quantified residuals")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run suites and write one JSON report line per identity.
    Run {
        /// Configuration file (line-based key = value with [sections]).
        #[arg(long)]
        config: Option<String>,
        /// Restrict to these suites (repeatable); default: all enabled.
        #[arg(long = "suite")]
        suite: Vec<String>,
        /// Report output path; stdout when omitted.
        #[arg(long)]
        out: Option<String>,
        /// Worker threads.
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// List the suites and the identities they check.
    List,
    /// Describe one suite or one identity.
    Explain { name: String },
}

fn main() -> ExitCode {
    match dispatch() {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

/// Print without panicking when the consumer closes the pipe early.
fn print_out(text: &str) {
    let mut stdout = std::io::stdout().lock();
    let _ = stdout.write_all(text.as_bytes());
}

fn dispatch() -> sklyanin_core::Result<ExitCode> {
    let cli = Cli::parse();
    match cli.command {
        Command::List => {
            let mut text = String::new();
            for s in suites::suites() {
                text.push_str(&format!("{}\n", s.name));
                for (id, anchor, _) in s.identities {
                    text.push_str(&format!("    {id}  [{anchor}]\n"));
                }
            }
            print_out(&text);
            Ok(ExitCode::SUCCESS)
        }
        Command::Explain { name } => match suites::explain(&name) {
            Some(text) => {
                print_out(&text);
                Ok(ExitCode::SUCCESS)
            }
            None => {
                eprintln!(
                    "unknown suite `{name}`; valid suites: {}",
                    suites::suite_names().join(", ")
                );
                Ok(ExitCode::from(2))
            }
        },
        Command::Run {
            config,
            suite,
            out,
            jobs,
        } => run_command(config, suite, out, jobs),
    }
}

fn run_command(
    config: Option<String>,
    suite_filter: Vec<String>,
    out: Option<String>,
    jobs: Option<usize>,
) -> sklyanin_core::Result<ExitCode> {
    let mut cfg = match config {
        Some(path) => {
            let text = std::fs::read_to_string(&path)
                .map_err(|e| sklyanin_core::Error::Config(format!("{path}: {e}")))?;
            SuiteConfig::parse(&text)?
        }
        None => SuiteConfig::default(),
    };
    if let Ok(seed) = std::env::var("VERIFY_SEED") {
        cfg.seed = seed
            .parse()
            .map_err(|e| sklyanin_core::Error::Config(format!("VERIFY_SEED: {e}")))?;
    }
    if let Some(j) = jobs {
        cfg.jobs = j;
    }
    if let Some(o) = out {
        cfg.out = Some(o);
    }

    let all_names = suites::suite_names();
    let selected: Vec<String> = if !suite_filter.is_empty() {
        for name in &suite_filter {
            if !all_names.contains(&name.as_str()) {
                return Err(sklyanin_core::Error::UnknownSuite(name.clone()));
            }
        }
        suite_filter
    } else {
        all_names
            .iter()
            .filter(|n| {
                cfg.suites
                    .as_ref()
                    .map(|list| list.iter().any(|x| x == *n))
                    .unwrap_or(true)
            })
            .filter(|n| cfg.overrides.get(**n).map(|o| o.enabled).unwrap_or(true))
            .map(|n| n.to_string())
            .collect()
    };
    if let Some(list) = &cfg.suites {
        for name in list {
            if !all_names.contains(&name.as_str()) {
                return Err(sklyanin_core::Error::UnknownSuite(name.clone()));
            }
        }
    }

    let outcome = runner::run(&cfg, &selected)?;
    let mut body = String::new();
    for r in &outcome.reports {
        body.push_str(&r.json_line());
        body.push('\n');
    }
    match &cfg.out {
        Some(path) => {
            let mut f = std::fs::File::create(path)
                .map_err(|e| sklyanin_core::Error::Config(format!("{path}: {e}")))?;
            f.write_all(body.as_bytes())
                .map_err(|e| sklyanin_core::Error::Config(format!("{path}: {e}")))?;
        }
        None => print_out(&body),
    }
    let passed = outcome.reports.iter().filter(|r| r.pass).count();
    eprintln!(
        "{passed}/{} identities passed across {} suites",
        outcome.reports.len(),
        selected.len()
    );
    Ok(if outcome.all_pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}
