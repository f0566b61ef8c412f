mod commands;
mod output;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use output::Format;

#[derive(Parser)]
#[command(
    name = "jmfree",
    version,
    about = "Exact experiments with the Jucys-Murphy matrix model and a free projection"
)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value = "json")]
    format: Format,
    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write to a file instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModelArg {
    Right,
    Left,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum RouteArg {
    Matrix,
    Tuple,
    Partitions,
    All,
}

#[derive(Subcommand)]
pub enum Command {
    /// state(X^j) against the moments of the transition measure.
    Moments {
        #[arg(long)]
        lambda: String,
        #[arg(long = "L")]
        len: usize,
    },
    /// State of one word, by one or all routes.
    Mixed {
        #[arg(long)]
        word: String,
        #[arg(long)]
        lambda: String,
        #[arg(long)]
        k: usize,
        #[arg(long, value_enum)]
        model: ModelArg,
        #[arg(long, value_enum, default_value = "all")]
        route: RouteArg,
    },
    /// Mixed moment against its free target along a diagram family.
    Converge {
        #[arg(long)]
        word: String,
        /// `square`, `rectangle` (2:1) or a JSON file holding a list of diagrams.
        #[arg(long)]
        family: String,
        /// Values of n for the built-in families, e.g. `4,9,16`.
        #[arg(long)]
        grid: Option<String>,
        #[arg(long)]
        c: String,
    },
    /// Kreweras complement of a noncrossing partition such as `[[1,2],[3,4]]`.
    Kreweras { partition: String },
    /// Free cumulants of a moment sequence or of a transition measure.
    Cumulants {
        #[arg(
            long,
            conflicts_with = "moments",
            required_unless_present = "moments",
            requires = "len"
        )]
        lambda: Option<String>,
        /// Comma-separated exact moments m_1, m_2, ...
        #[arg(long)]
        moments: Option<String>,
        #[arg(long = "L")]
        len: Option<usize>,
    },
    /// Moments of PXP against the free compression of the transition measure.
    Compress {
        #[arg(long)]
        lambda: String,
        #[arg(long)]
        c: String,
        #[arg(long = "L")]
        len: usize,
    },
    /// Exhaustive combinatorial checks up to word length kmax.
    VerifyLemmas {
        #[arg(long)]
        kmax: usize,
        /// Random cumulant draws for the free-formula oracle.
        #[arg(long, default_value_t = 20)]
        trials: usize,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Moments { .. } => "moments",
            Command::Mixed { .. } => "mixed",
            Command::Converge { .. } => "converge",
            Command::Kreweras { .. } => "kreweras",
            Command::Cumulants { .. } => "cumulants",
            Command::Compress { .. } => "compress",
            Command::VerifyLemmas { .. } => "verify-lemmas",
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (config, report) = match commands::run(&cli.command, cli.seed) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    };
    let mut config = config;
    config["format"] = cli.format.name().into();
    config["seed"] = cli.seed.into();
    let mut out: Box<dyn Write> = match &cli.output {
        Some(path) => match File::create(path) {
            Ok(f) => Box::new(BufWriter::new(f)),
            Err(e) => {
                eprintln!("error: --output {}: {e}", path.display());
                return ExitCode::from(2);
            }
        },
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    if let Err(e) = output::write(&mut *out, cli.format, cli.command.name(), &config, &report)
        .and_then(|_| Ok(out.flush()?))
    {
        eprintln!("error: {e:#}");
        return ExitCode::from(2);
    }
    if report.passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
