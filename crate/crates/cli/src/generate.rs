//! Seeded random instances.
//!
//! The stream is `ChaCha8Rng::seed_from_u64(seed)`. Each agent's ranking is an
//! independent uniform shuffle of `1..=n`, drawn for agents 1, 2, ... in order.
//! The matching then shuffles the agents once and scans that order: with
//! probability `solo_prob` the next agent stays alone, otherwise it pairs with
//! the agent after it. A last leftover agent stays alone.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use roommates_core::model::{find_irrational_pairs, Instance, Matching, MIN_AGENTS};

use crate::CliError;

pub const DEFAULT_SOLO_PROB: f64 = 0.2;

pub fn validate(n: usize, solo_prob: f64) -> Result<(), CliError> {
    if n < MIN_AGENTS {
        return Err(CliError::BadArgs(format!(
            "--n must be at least {MIN_AGENTS}, got {n}"
        )));
    }
    if !(0.0..=1.0).contains(&solo_prob) {
        return Err(CliError::BadArgs(format!(
            "--solo-prob must lie in [0, 1], got {solo_prob}"
        )));
    }
    Ok(())
}

pub fn generate(n: usize, seed: u64, solo_prob: f64) -> Result<Instance, CliError> {
    validate(n, solo_prob)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rows: Vec<Vec<usize>> = (0..n)
        .map(|_| {
            let mut row: Vec<usize> = (1..=n).collect();
            row.shuffle(&mut rng);
            row
        })
        .collect();

    let mut order: Vec<usize> = (1..=n).collect();
    order.shuffle(&mut rng);
    let mut partners: Vec<usize> = (1..=n).collect();
    let mut k = 0;
    while k < n {
        if k + 1 == n || rng.gen_bool(solo_prob) {
            k += 1;
        } else {
            let (a, b) = (order[k], order[k + 1]);
            partners[a - 1] = b;
            partners[b - 1] = a;
            k += 2;
        }
    }
    Ok(Instance::from_raw(n, &rows, &partners)?)
}

/// Splits every pair whose members both prefer being alone.
///
/// The result has no irrational pairs, so the checker runs its full reduction
/// on it instead of answering from the pair scan alone.
pub fn dissolve_irrational_pairs(instance: &Instance) -> Instance {
    let mut partners = instance.matching.to_partners();
    for (i, j) in find_irrational_pairs(instance) {
        partners[i.index()] = i.get();
        partners[j.index()] = j.get();
    }
    let matching = Matching::new(instance.n(), &partners).expect("dissolving keeps an involution");
    Instance::new(instance.profile.clone(), matching).expect("same size")
}
