//! Command-line frontend for the `liftcodes` library.
//!
//! Exit codes: 0 success, 1 failed invariant, 2 usage or config error,
//! 3 refused by the enumeration cap.

pub mod commands;
pub mod config;
pub mod export;
pub mod report;

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use commands::{run_tasks, Job, RunError, RunOptions};
use config::{parse_config, MatrixTarget, Task};

#[derive(Debug, Parser)]
#[command(name = "liftcodes", version, about = "Lifted-product codes and Tanner-code diagnostics")]
struct Cli {
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads for enumerations and trials.
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,
    /// Enumeration cap in bits (log2 of the number of vectors visited).
    #[arg(long, global = true)]
    cap: Option<u32>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// Build the job and run every task listed in [tasks].
    Construct { config: PathBuf },
    /// Structural invariants: chain condition, CSS condition, incidences.
    Check { config: PathBuf },
    /// Exhaustive CSS distance.
    Distance { config: PathBuf },
    /// Product-expansion of the local code pair.
    Pexp { config: PathBuf },
    /// Soundness profile of a parity-check matrix.
    Soundness { config: PathBuf },
    /// Monte-Carlo decoding trials.
    Decode { config: PathBuf },
    /// Write a matrix or the full report to a file.
    Export {
        config: PathBuf,
        #[arg(long, value_enum)]
        format: Format,
        #[arg(long)]
        out: PathBuf,
        /// Matrix to export: tanner, hx or hz.
        #[arg(long, default_value = "hx")]
        matrix: String,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Alist,
    Mm,
    Report,
}

fn execute(cli: Cli, out: &mut dyn Write) -> Result<Vec<RunError>, RunError> {
    let opts = RunOptions {
        seed: cli.seed,
        threads: cli.threads.max(1),
        cap_bits: cli.cap.unwrap_or(RunOptions::default().cap_bits),
    };
    let (path, tasks): (&PathBuf, Option<Vec<Task>>) = match &cli.cmd {
        Cmd::Construct { config } => (config, None),
        Cmd::Check { config } => (config, Some(vec![Task::Check])),
        Cmd::Distance { config } => (config, Some(vec![Task::Distance])),
        Cmd::Pexp { config } => (config, Some(vec![Task::Pexp])),
        Cmd::Soundness { config } => (config, Some(vec![Task::Soundness])),
        Cmd::Decode { config } => (config, Some(vec![Task::Decode])),
        Cmd::Export { config, .. } => (config, None),
    };
    let cfg = parse_config(path).map_err(|e| RunError::Usage(format!("{}: {e}", path.display())))?;
    let tasks = tasks.unwrap_or_else(|| cfg.tasks.clone());
    let job = Job::build(cfg)?;
    if let Cmd::Export {
        format, out: dest, matrix, ..
    } = &cli.cmd
    {
        let text = match format {
            Format::Report => {
                let (r, failures) = run_tasks(&job, &tasks, &opts)?;
                std::fs::write(dest, r.render()).map_err(|e| RunError::Usage(e.to_string()))?;
                return Ok(failures);
            }
            Format::Alist | Format::Mm => {
                let target = MatrixTarget::from_name(matrix)
                    .ok_or_else(|| RunError::Usage(format!("unknown matrix '{matrix}' (tanner, hx, hz)")))?;
                let m = job.matrix(target)?;
                match format {
                    Format::Alist => export::to_alist(&m).map_err(|e| RunError::Usage(e.to_string()))?,
                    _ => export::to_matrix_market(&m),
                }
            }
        };
        std::fs::write(dest, text).map_err(|e| RunError::Usage(e.to_string()))?;
        let _ = writeln!(out, "wrote {}", dest.display());
        return Ok(Vec::new());
    }
    let (r, failures) = run_tasks(&job, &tasks, &opts)?;
    let _ = out.write_all(r.render().as_bytes());
    Ok(failures)
}

/// Parses `args` (program name first) and runs the command; returns the
/// process exit code.
pub fn run_command(args: &[String], out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            if code == 0 {
                let _ = out.write_all(text.as_bytes());
            } else {
                let _ = err.write_all(text.as_bytes());
            }
            return code;
        }
    };
    match execute(cli, out) {
        Ok(failures) => {
            for f in &failures {
                let _ = writeln!(err, "error: {f}");
            }
            if failures.is_empty() {
                0
            } else {
                1
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}
