use std::ops::RangeInclusive;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use tweq_cli::{load_spec, render_json, render_text, run, RunOptions};
use tweq_core::verifier::Suite;

#[derive(Parser)]
#[command(name = "tweq", version, about = "Exact twisted equivariant cohomology of torus and formal models")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the action data against the extended action axioms.
    Validate(Common),
    /// Cohomology of one truncation (or one per k with `--k`).
    Cohomology(Common),
    /// The Ω-degree tower with its transition maps and limit.
    Tower(Common),
    /// Only the inverse limit of the tower.
    Limit(Common),
    /// Randomized identity checks.
    Verify(Common),
    /// Completed cohomology against the uncompleted one tensored with series.
    Compare(Common),
    /// Run a list of tasks.
    Run {
        #[command(flatten)]
        common: Common,
        /// Task names; defaults to the spec's own list.
        #[arg(long = "task", value_name = "TASK")]
        tasks: Vec<String>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args)]
struct Common {
    /// Problem spec (JSON).
    spec: PathBuf,
    /// Ω-degree truncation level (top of the tower).
    #[arg(long)]
    levels: Option<u32>,
    /// Fourier mode cap on torus backends.
    #[arg(long)]
    mode_cap: Option<u32>,
    #[arg(long)]
    seed: Option<u64>,
    /// Probes per randomized check.
    #[arg(long, default_value_t = 200)]
    probes: usize,
    /// Range of k for the S¹ × CPᵏ preset, e.g. `1..5` (inclusive).
    #[arg(long, value_parser = parse_range)]
    k: Option<RangeInclusive<usize>>,
    /// Restrict `verify` to these suites.
    #[arg(long = "suite", value_name = "SUITE")]
    suites: Vec<Suite>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_range(s: &str) -> Result<RangeInclusive<usize>, String> {
    let (a, b) = s
        .split_once("..=")
        .or_else(|| s.split_once(".."))
        .ok_or_else(|| format!("expected a range like 1..5, got {s}"))?;
    let a: usize = a.trim().parse().map_err(|e| format!("{e}"))?;
    let b: usize = b.trim().parse().map_err(|e| format!("{e}"))?;
    if a > b {
        return Err(format!("empty range {s}"));
    }
    Ok(a..=b)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (common, tasks) = match cli.command {
        Command::Validate(c) => (c, vec!["validate".to_string()]),
        Command::Cohomology(c) => (c, vec!["cohomology".into()]),
        Command::Tower(c) => (c, vec!["tower".into()]),
        Command::Limit(c) => (c, vec!["limit".into()]),
        Command::Verify(c) => (c, vec!["verify".into()]),
        Command::Compare(c) => (c, vec!["compare".into()]),
        Command::Run { common, tasks } => (common, tasks),
    };
    let spec = match load_spec(&common.spec) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("{e}");
            return ExitCode::from(2);
        }
    };
    let opts = RunOptions {
        levels: common.levels,
        mode_cap: common.mode_cap,
        seed: common.seed,
        probes: common.probes,
        k_range: common.k,
        suites: if common.suites.is_empty() { Suite::ALL.to_vec() } else { common.suites },
    };
    let report = match run(&spec, &tasks, &opts) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("{e}");
            return ExitCode::from(2);
        }
    };
    let text = match common.format {
        Format::Text => render_text(&report),
        Format::Json => render_json(&report) + "\n",
    };
    match &common.out {
        Some(p) => {
            if let Err(e) = std::fs::write(p, &text) {
                eprintln!("{}: {e}", p.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{text}"),
    }
    if report.passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

#[cfg(test)]
mod tests {
    use super::parse_range;

    #[test]
    fn ranges() {
        assert_eq!(parse_range("1..5").unwrap(), 1..=5);
        assert_eq!(parse_range("2..=3").unwrap(), 2..=3);
        assert!(parse_range("5..1").is_err());
        assert!(parse_range("x").is_err());
    }
}
