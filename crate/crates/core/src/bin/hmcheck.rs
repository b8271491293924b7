use std::fs;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};

use hmcheck::cli::{run, Command, Format, RunConfig, EXIT_BUDGET_OR_IO, EXIT_USAGE};

#[derive(Clone, Copy, Debug, ValueEnum)]
enum CommandArg {
    Lemmas,
    Laws,
    Fiber,
    Probe,
    All,
}

impl From<CommandArg> for Command {
    fn from(c: CommandArg) -> Self {
        match c {
            CommandArg::Lemmas => Command::Lemmas,
            CommandArg::Laws => Command::Laws,
            CommandArg::Fiber => Command::Fiber,
            CommandArg::Probe => Command::Probe,
            CommandArg::All => Command::All,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
    Text,
}

fn parse_range(s: &str) -> Result<(usize, usize), String> {
    let (lo, hi) = s
        .split_once(':')
        .ok_or_else(|| format!("expected LOW:HIGH, got {s:?}"))?;
    let lo: usize = lo.parse().map_err(|e| format!("bad LOW: {e}"))?;
    let hi: usize = hi.parse().map_err(|e| format!("bad HIGH: {e}"))?;
    if lo == 0 || lo > hi {
        return Err(format!("need 1 <= LOW <= HIGH, got {lo}:{hi}"));
    }
    Ok((lo, hi))
}

/// Exact verification of the Hartman-Mycielski monad obstruction.
#[derive(Parser, Debug)]
#[command(name = "hmcheck", version)]
struct Args {
    /// Suite to run (same as --command)
    #[arg(value_enum)]
    suite: Option<CommandArg>,

    #[arg(long, value_enum)]
    command: Option<CommandArg>,

    /// Range of staircase sizes n, as LOW:HIGH
    #[arg(long, value_parser = parse_range, conflicts_with = "n")]
    n_range: Option<(usize, usize)>,

    /// Single staircase size; shorthand for --n-range N:N
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    n: Option<u64>,

    /// Grid refinement m for the fiber oracle and convergence windows
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u64).range(1..))]
    grid: u64,

    #[arg(long, default_value_t = 500, value_parser = clap::value_parser!(u64).range(1..))]
    samples: u64,

    #[arg(long, default_value_t = 1)]
    seed: u64,

    /// diagonal, constant-left or pinned-last
    #[arg(long, default_value = "diagonal")]
    candidate: String,

    #[arg(long, value_enum, default_value = "json")]
    format: FormatArg,

    /// Write the report here instead of stdout
    #[arg(long)]
    out: Option<String>,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let command = match (args.suite, args.command) {
        (Some(a), Some(b)) if Command::from(a) != Command::from(b) => {
            eprintln!("error: positional suite {a:?} conflicts with --command {b:?}");
            return ExitCode::from(EXIT_USAGE as u8);
        }
        (a, b) => a.or(b).map(Command::from).unwrap_or(Command::All),
    };
    let defaults = RunConfig::default();
    let config = RunConfig {
        command,
        n_range: args
            .n
            .map(|n| (n as usize, n as usize))
            .or(args.n_range)
            .unwrap_or(defaults.n_range),
        grid: args.grid as usize,
        samples: args.samples,
        seed: args.seed,
        candidate: args.candidate,
        format: match args.format {
            FormatArg::Json => Format::Json,
            FormatArg::Csv => Format::Csv,
            FormatArg::Text => Format::Text,
        },
        out: args.out,
    };

    let outcome = run(&config);
    if let Some(msg) = &outcome.message {
        eprintln!("error: {msg}");
    }
    if let Some(text) = &outcome.output {
        match &config.out {
            Some(path) => {
                if let Err(e) = fs::write(path, text) {
                    eprintln!("error: cannot write {path}: {e}");
                    return ExitCode::from(EXIT_BUDGET_OR_IO as u8);
                }
            }
            None => print!("{text}"),
        }
    }
    ExitCode::from(outcome.exit_code as u8)
}
