//! Scaling benchmark for the checker.
//!
//! Each record times one `check` call on a generated instance with its
//! irrational pairs dissolved. Uniform random matchings almost always contain
//! such a pair, and the checker answers those from an O(n) scan. Dissolving
//! them makes every timed call run the graph construction and the reduction.

use std::path::Path;
use std::time::Instant;

use serde::Serialize;

use roommates_core::check_with_stats;

use crate::generate::{dissolve_irrational_pairs, generate};
use crate::CliError;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRecord {
    pub n: usize,
    pub rep: usize,
    pub elapsed_ms: f64,
    pub iterations: usize,
    pub verdict: bool,
}

/// Per-record seed, `seed + mix(n, rep)` with a splitmix64 finaliser.
pub fn record_seed(seed: u64, n: usize, rep: usize) -> u64 {
    let mut z = ((n as u64) << 32 ^ rep as u64).wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    seed.wrapping_add(z ^ (z >> 31))
}

pub fn bench_instance(
    n: usize,
    rep: usize,
    seed: u64,
    solo_prob: f64,
) -> Result<roommates_core::Instance, CliError> {
    let raw = generate(n, record_seed(seed, n, rep), solo_prob)?;
    Ok(dissolve_irrational_pairs(&raw))
}

pub fn run_bench(
    sizes: &[usize],
    reps: usize,
    seed: u64,
    solo_prob: f64,
) -> Result<Vec<BenchRecord>, CliError> {
    if sizes.is_empty() || reps == 0 {
        return Err(CliError::BadArgs(
            "need at least one size and one rep".into(),
        ));
    }
    let mut records = Vec::with_capacity(sizes.len() * reps);
    for &n in sizes {
        for rep in 0..reps {
            let instance = bench_instance(n, rep, seed, solo_prob)?;
            let start = Instant::now();
            let (verdict, stats) = check_with_stats(&instance)?;
            let elapsed_ms = start.elapsed().as_secs_f64() * 1e3;
            records.push(BenchRecord {
                n,
                rep,
                elapsed_ms,
                iterations: stats.passes,
                verdict: verdict.is_efficient(),
            });
        }
    }
    Ok(records)
}

fn median(values: &mut [f64]) -> f64 {
    values.sort_by(f64::total_cmp);
    let m = values.len() / 2;
    if values.len() % 2 == 1 {
        values[m]
    } else {
        (values[m - 1] + values[m]) / 2.0
    }
}

/// Median elapsed milliseconds per size, in ascending size order.
pub fn medians(records: &[BenchRecord]) -> Vec<(usize, f64)> {
    let mut sizes: Vec<usize> = records.iter().map(|r| r.n).collect();
    sizes.sort_unstable();
    sizes.dedup();
    sizes
        .into_iter()
        .map(|n| {
            let mut t: Vec<f64> = records
                .iter()
                .filter(|r| r.n == n)
                .map(|r| r.elapsed_ms)
                .collect();
            (n, median(&mut t))
        })
        .collect()
}

/// Least-squares slope of ln(median) against ln(n); `None` below two sizes.
pub fn fit_slope(records: &[BenchRecord]) -> Option<f64> {
    let points: Vec<(f64, f64)> = medians(records)
        .into_iter()
        .map(|(n, t)| ((n as f64).ln(), t.max(1e-9).ln()))
        .collect();
    if points.len() < 2 {
        return None;
    }
    let k = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / k;
    let my = points.iter().map(|p| p.1).sum::<f64>() / k;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    Some(sxy / sxx)
}

pub fn write_csv(path: &Path, records: &[BenchRecord]) -> Result<(), CliError> {
    let io = |e: csv::Error| CliError::Io {
        path: path.display().to_string(),
        source: e.into(),
    };
    let mut w = csv::Writer::from_path(path).map_err(io)?;
    for r in records {
        w.serialize(r).map_err(io)?;
    }
    w.flush().map_err(|e| CliError::Io {
        path: path.display().to_string(),
        source: e,
    })
}

pub fn summary(records: &[BenchRecord]) -> String {
    let mut out = String::new();
    for (n, t) in medians(records) {
        out.push_str(&format!("n={n} median_ms={t:.3}\n"));
    }
    match fit_slope(records) {
        Some(s) => out.push_str(&format!("slope: {s:.3}\n")),
        None => out.push_str("slope: not available (need at least two sizes)\n"),
    }
    out
}
