//! Pareto efficiency testing for matchings in the roommates problem.
//!
//! Agents may stay unmatched and may be matched to partners they find
//! unacceptable. Given a strict preference profile and a matching,
//! [`checker::check`] decides in `O(n^2)` time whether any other matching
//! Pareto dominates it, and if so returns one as a witness.
//!
//! The pipeline:
//!
//! 1. reject matchings with an irrational pair (both partners prefer being alone);
//! 2. build the efficiency graph ([`graph::EfficiencyGraph`]) and its
//!    modified form with virtual vertices ([`graph::ModifiedGraph`]);
//! 3. repeatedly decompose into biconnected blocks and evict vertices whose
//!    special edge lies outside their block ([`checker::reduce_to_fixed_point`]);
//! 4. the matching is efficient iff every remaining block is trivial.
//!
//! [`oracle`] holds exhaustive reference implementations used by the tests.

pub mod checker;
pub mod decomposition;
pub mod graph;
mod matching_search;
pub mod model;
pub mod oracle;

pub use checker::{check, check_with_stats, CheckError, CheckStats};
pub use graph::{AlternatingCycle, EdgeKind, EfficiencyGraph, ModifiedGraph};
pub use model::{AgentId, Cause, Instance, Matching, ModelError, PreferenceProfile, Verdict};
