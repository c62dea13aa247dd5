use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use roommates_cli::{
    cmd_bench, cmd_check, cmd_gen, cmd_oracle, generate::DEFAULT_SOLO_PROB, ReportFormat,
    EXIT_ERROR,
};

/// Pareto efficiency checks for roommates matchings.
#[derive(Parser)]
#[command(name = "roommates", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Decide efficiency with the quadratic checker.
    Check {
        path: PathBuf,
        /// Print a dominating matching when inefficient.
        #[arg(long)]
        witness: bool,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        /// Write G and the modified graph in DOT form to this file.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Decide efficiency by enumerating every matching (n at most 12).
    Oracle { path: PathBuf },
    /// Print a seeded random instance.
    Gen {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_SOLO_PROB)]
        solo_prob: f64,
    },
    /// Time the checker over several sizes and fit a log-log slope.
    Bench {
        #[arg(long, value_delimiter = ',', required = true)]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 5)]
        reps: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_SOLO_PROB)]
        solo_prob: f64,
        #[arg(long)]
        out: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_ERROR as u8 } else { 0 });
        }
    };
    let result = match cli.command {
        Command::Check {
            path,
            witness,
            format,
            dot,
        } => {
            let format = match format {
                Format::Text => ReportFormat::Text,
                Format::Json => ReportFormat::Json,
            };
            cmd_check(&path, witness, format, dot.as_deref())
        }
        Command::Oracle { path } => cmd_oracle(&path),
        Command::Gen { n, seed, solo_prob } => cmd_gen(n, seed, solo_prob),
        Command::Bench {
            sizes,
            reps,
            seed,
            solo_prob,
            out,
        } => cmd_bench(&sizes, reps, seed, solo_prob, &out),
    };
    match result {
        Ok(outcome) => {
            print!("{}", outcome.stdout);
            ExitCode::from(outcome.code as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_ERROR as u8)
        }
    }
}
