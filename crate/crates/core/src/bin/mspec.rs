//! Command-line front end for the verification suites.
//!
//! Exit codes: 0 when every verdict passes, 2 when the suite ran but at
//! least one verdict failed, 1 on execution errors (unknown suite,
//! unreadable config, output collision without `--force`, ...). Artifacts
//! are written before the exit code is decided, so a failing run still
//! leaves its report behind for inspection.

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use morrey_spectral::harness::corpus::standard_corpus;
use morrey_spectral::harness::report::merge_reports;
use morrey_spectral::harness::{run_suite, HarnessError, SuiteConfig, SuiteId};
use serde::Serialize;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "mspec",
    version,
    about = "Spectral Morrey inequality verification harness"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one suite and write report.json + rows.csv under the output dir.
    Run {
        /// Suite id; see `list-suites`.
        suite: String,
        /// Path to a JSON config file, or the literal `default`.
        #[arg(long)]
        config: String,
        /// Output root; artifacts land in `<out>/<suite>/`. Falls back to
        /// the MSPEC_OUT environment variable, then to the config's
        /// `out_dir` field.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Worker threads; overrides the config (and MSPEC_THREADS).
        #[arg(long)]
        threads: Option<usize>,
        /// Re-run with halved spacing and doubled extent and append the
        /// stability block.
        #[arg(long)]
        refine: bool,
        /// Overwrite an existing report in the output directory.
        #[arg(long)]
        force: bool,
    },
    /// List the available suite ids with one-line descriptions.
    ListSuites,
    /// Write the deterministic corpus manifest as JSON.
    Corpus {
        /// Destination file for the manifest.
        #[arg(long)]
        manifest: PathBuf,
        /// Number of corpus functions to describe.
        #[arg(long, default_value_t = 12)]
        size: usize,
        /// Base seed for the mollified-noise members.
        #[arg(long, default_value_t = 7)]
        seed: u64,
        /// Ambient dimension.
        #[arg(long, default_value_t = 1)]
        n_dims: usize,
    },
    /// Merge every report.json found under a directory into one overview.
    Report {
        /// Directory holding per-suite subdirectories (or a report.json
        /// directly); writes `merged.json` next to them.
        #[arg(long)]
        merge: PathBuf,
    },
}

#[derive(Serialize)]
struct CorpusManifest {
    n_dims: usize,
    size: usize,
    seed: u64,
    entries: Vec<morrey_spectral::harness::corpus::CorpusEntry>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            // Help and version requests are not failures; everything else
            // (bad flags, missing args) is an execution error, exit 1.
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    match dispatch(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(err) => {
            eprintln!("mspec: {err}");
            ExitCode::from(1)
        }
    }
}

/// Returns whether every verdict passed; `Err` means the command itself
/// could not be carried out.
fn dispatch(command: Command) -> Result<bool, HarnessError> {
    match command {
        Command::Run {
            suite,
            config,
            out,
            threads,
            refine,
            force,
        } => cmd_run(&suite, &config, out, threads, refine, force),
        Command::ListSuites => {
            for id in SuiteId::ALL {
                println!("{:<22} {}", id.id(), id.blurb());
            }
            Ok(true)
        }
        Command::Corpus {
            manifest,
            size,
            seed,
            n_dims,
        } => {
            let entries = standard_corpus(n_dims, size, seed);
            let doc = CorpusManifest {
                n_dims,
                size,
                seed,
                entries,
            };
            let mut text = serde_json::to_string_pretty(&doc)?;
            text.push('\n');
            std::fs::write(&manifest, text)?;
            println!("wrote corpus manifest: {}", manifest.display());
            Ok(true)
        }
        Command::Report { merge } => {
            let (entries, all_passed) = merge_reports(&merge)?;
            if entries.is_empty() {
                return Err(HarnessError::Config(format!(
                    "no report.json found under {}",
                    merge.display()
                )));
            }
            let mut text = serde_json::to_string_pretty(&entries)?;
            text.push('\n');
            std::fs::write(merge.join("merged.json"), text)?;
            for e in &entries {
                println!(
                    "{:<22} {}  verdicts {}/{} pass  max ratio {:.6e}  [{}{}]",
                    e.suite,
                    if e.passed { "PASS" } else { "FAIL" },
                    e.verdicts_total - e.verdicts_failed,
                    e.verdicts_total,
                    e.max_ratio,
                    &e.config_hash[..12.min(e.config_hash.len())],
                    if e.refined { ", refined" } else { "" }
                );
            }
            Ok(all_passed)
        }
    }
}

fn cmd_run(
    suite: &str,
    config: &str,
    out: Option<PathBuf>,
    threads: Option<usize>,
    refine: bool,
    force: bool,
) -> Result<bool, HarnessError> {
    let id = SuiteId::parse(suite)?;
    let mut cfg = if config == "default" {
        SuiteConfig::default_for(id.id())
    } else {
        let text = std::fs::read_to_string(config)
            .map_err(|e| HarnessError::Config(format!("{config}: {e}")))?;
        SuiteConfig::from_json(&text).map_err(|e| HarnessError::Config(format!("{config}: {e}")))?
    };
    // Thread count is part of the recorded config; the output root is
    // plumbing only, so the same config hash lands in every destination.
    let threads = match threads {
        Some(k) => Some(k),
        None => env_threads()?,
    };
    if let Some(k) = threads {
        cfg.threads = k;
    }
    let out_root = out
        .or_else(|| std::env::var_os("MSPEC_OUT").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from(&cfg.out_dir));
    let dest = out_root.join(id.id());
    if dest.join("report.json").exists() && !force {
        return Err(HarnessError::OutputCollision(dest));
    }

    let report = run_suite(id, &cfg, refine)?;
    report.write_to(&dest)?;

    println!(
        "suite {}  config {}  threads {}  rows {}",
        report.suite,
        &report.config_hash[..12],
        report.threads,
        report.rows.len()
    );
    println!(
        "max ratio {:.6e} at {}",
        report.summary.max_ratio, report.summary.argmax_function
    );
    for v in &report.verdicts {
        if v.tolerance.is_nan() {
            println!(
                "  {}  {:<28} observed {:.6e}  ({})",
                if v.passed { "PASS" } else { "FAIL" },
                v.name,
                v.observed,
                v.detail
            );
        } else {
            println!(
                "  {}  {:<28} observed {:.6e} vs tol {:.3e}  ({})",
                if v.passed { "PASS" } else { "FAIL" },
                v.name,
                v.observed,
                v.tolerance,
                v.detail
            );
        }
    }
    if let Some(st) = &report.stability {
        println!(
            "stability: sup ratio {:.6e} -> {:.6e} (drift {:.3e}), worst spread {:.3e} -> {:.3e}",
            st.base_max_ratio,
            st.refined_max_ratio,
            st.drift,
            st.base_worst_spread,
            st.refined_worst_spread
        );
    }
    println!("wrote {}", dest.display());
    Ok(report.all_passed())
}

/// MSPEC_THREADS must be a positive integer when set; anything else is a
/// config error rather than a silent fallback.
fn env_threads() -> Result<Option<usize>, HarnessError> {
    match std::env::var("MSPEC_THREADS") {
        Ok(text) => {
            let k: usize = text
                .trim()
                .parse()
                .map_err(|_| HarnessError::Config(format!("MSPEC_THREADS={text}: not a count")))?;
            if k == 0 {
                return Err(HarnessError::Config(
                    "MSPEC_THREADS=0: need at least one thread".into(),
                ));
            }
            Ok(Some(k))
        }
        Err(_) => Ok(None),
    }
}
