//! The instance file format.
//!
//! Line oriented, whitespace-separated integers, `#` starts a comment that
//! runs to the end of the line, blank lines are ignored:
//!
//! ```text
//! # n
//! 4
//! # one full ranking per agent, most preferred first, self included
//! 3 2 1 4
//! 2 1 3 4
//! 1 4 3 2
//! 4 3 1 2
//! # matching: the j at position i means i is matched to j (i itself = alone)
//! 2 1 4 3
//! ```

use std::fmt::Write as _;

use roommates_core::model::{Instance, Matching, PreferenceProfile};

use crate::CliError;

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(k, line)| {
        let content = line.split('#').next().unwrap_or("").trim();
        (!content.is_empty()).then_some((k + 1, content))
    })
}

fn integers(line_no: usize, line: &str) -> Result<Vec<usize>, CliError> {
    line.split_whitespace()
        .map(|tok| {
            tok.parse::<usize>().map_err(|_| CliError::Parse {
                line: line_no,
                message: format!("expected a non-negative integer, found `{tok}`"),
            })
        })
        .collect()
}

/// Parses and validates an instance file.
pub fn parse_instance(text: &str) -> Result<Instance, CliError> {
    let mut lines = content_lines(text);
    let (first, header) = lines.next().ok_or(CliError::Parse {
        line: 1,
        message: "empty input, expected the agent count".into(),
    })?;
    let header = integers(first, header)?;
    let [n] = header[..] else {
        return Err(CliError::Parse {
            line: first,
            message: format!(
                "expected a single agent count, found {} values",
                header.len()
            ),
        });
    };

    let mut last_line = first;
    let mut next_row = |what: &str| -> Result<Vec<usize>, CliError> {
        match lines.next() {
            Some((no, line)) => {
                last_line = no;
                integers(no, line)
            }
            None => Err(CliError::Parse {
                line: last_line + 1,
                message: format!("unexpected end of input, expected {what}"),
            }),
        }
    };

    // validate the size before reading n rows
    if n < roommates_core::model::MIN_AGENTS {
        return Err(roommates_core::ModelError::TooSmall(n).into());
    }
    let rows = (1..=n)
        .map(|i| next_row(&format!("the ranking of agent {i}")))
        .collect::<Result<Vec<_>, _>>()?;
    let partners = next_row("the matching line")?;
    if let Some((no, _)) = lines.next() {
        return Err(CliError::Parse {
            line: no,
            message: "unexpected content after the matching line".into(),
        });
    }

    let profile = PreferenceProfile::new(n, &rows)?;
    let matching = Matching::new(n, &partners)?;
    Ok(Instance::new(profile, matching)?)
}

/// Renders `instance` in the file format, without comments.
pub fn render_instance(instance: &Instance) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{}", instance.n());
    for row in instance.profile.to_rows() {
        let line: Vec<String> = row.iter().map(usize::to_string).collect();
        let _ = writeln!(out, "{}", line.join(" "));
    }
    let _ = writeln!(out, "{}", instance.matching);
    out
}
