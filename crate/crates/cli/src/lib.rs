//! File I/O, reporting and benchmarking around `roommates-core`.
//!
//! Every command returns an [`Outcome`] holding the exit status and the text
//! for standard output. Exit status 0 means efficient, 1 inefficient, 2 error.

pub mod bench;
pub mod format;
pub mod generate;

use std::path::Path;

use serde::Serialize;
use thiserror::Error;

use roommates_core::graph::{build_graph, build_modified_graph};
use roommates_core::oracle::{oracle_efficient, OracleError};
use roommates_core::{check_with_stats, CheckError, Instance, ModelError, Verdict};

pub use format::{parse_instance, render_instance};

pub const EXIT_EFFICIENT: i32 = 0;
pub const EXIT_INEFFICIENT: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Check(#[from] CheckError),
    #[error("{0}")]
    BadArgs(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ReportFormat {
    #[default]
    Text,
    Json,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Report {
    pub efficient: bool,
    pub cause: Option<String>,
    pub witness: Option<Vec<usize>>,
    pub iterations: usize,
}

impl Report {
    pub fn from_verdict(verdict: &Verdict, iterations: usize) -> Self {
        Report {
            efficient: verdict.is_efficient(),
            cause: verdict.cause().map(|c| c.tag().to_string()),
            witness: verdict.witness().map(|w| w.to_partners()),
            iterations,
        }
    }

    pub fn exit_code(&self) -> i32 {
        if self.efficient {
            EXIT_EFFICIENT
        } else {
            EXIT_INEFFICIENT
        }
    }

    pub fn render(&self, format: ReportFormat, with_witness: bool) -> String {
        match format {
            ReportFormat::Json => serde_json::to_string(self).expect("report serialises") + "\n",
            ReportFormat::Text => {
                let mut out = match &self.cause {
                    None => "efficient\n".to_string(),
                    Some(cause) => format!("inefficient ({cause})\n"),
                };
                if let (true, Some(w)) = (with_witness, &self.witness) {
                    let line: Vec<String> = w.iter().map(usize::to_string).collect();
                    out.push_str(&line.join(" "));
                    out.push('\n');
                }
                out
            }
        }
    }
}

pub fn read_instance(path: &Path) -> Result<Instance, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_instance(&text)
}

/// Graphviz text for G followed by G′, for debugging.
pub fn dot_export(instance: &Instance) -> String {
    let g = build_graph(instance);
    let g2 = build_modified_graph(&g);
    format!("{}\n{}", g.to_dot(), g2.to_dot())
}

pub fn cmd_check(
    path: &Path,
    with_witness: bool,
    format: ReportFormat,
    dot: Option<&Path>,
) -> Result<Outcome, CliError> {
    let instance = read_instance(path)?;
    if let Some(dot_path) = dot {
        std::fs::write(dot_path, dot_export(&instance)).map_err(|source| CliError::Io {
            path: dot_path.display().to_string(),
            source,
        })?;
    }
    let (verdict, stats) = check_with_stats(&instance)?;
    let report = Report::from_verdict(&verdict, stats.passes);
    Ok(Outcome {
        code: report.exit_code(),
        stdout: report.render(format, with_witness),
    })
}

pub fn cmd_oracle(path: &Path) -> Result<Outcome, CliError> {
    let instance = read_instance(path)?;
    let (efficient, dominator) = oracle_efficient(&instance)?;
    let mut stdout = String::from(if efficient {
        "efficient\n"
    } else {
        "inefficient\n"
    });
    if let Some(m) = dominator {
        stdout.push_str(&format!("{m}\n"));
    }
    let code = if efficient {
        EXIT_EFFICIENT
    } else {
        EXIT_INEFFICIENT
    };
    Ok(Outcome { code, stdout })
}

pub fn cmd_gen(n: usize, seed: u64, solo_prob: f64) -> Result<Outcome, CliError> {
    let instance = generate::generate(n, seed, solo_prob)?;
    let stdout = format!(
        "# roommates gen --n {n} --seed {seed} --solo-prob {solo_prob}\n{}",
        render_instance(&instance)
    );
    Ok(Outcome { code: 0, stdout })
}

pub fn cmd_bench(
    sizes: &[usize],
    reps: usize,
    seed: u64,
    solo_prob: f64,
    out: &Path,
) -> Result<Outcome, CliError> {
    generate::validate(*sizes.iter().min().unwrap_or(&0), solo_prob)?;
    let records = bench::run_bench(sizes, reps, seed, solo_prob)?;
    bench::write_csv(out, &records)?;
    Ok(Outcome {
        code: 0,
        stdout: bench::summary(&records),
    })
}
