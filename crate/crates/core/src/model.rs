//! Agents, preference profiles, matchings and Pareto dominance.
//!
//! Agent ids are 1-based at every public boundary; storage is 0-based.

use std::fmt;

use thiserror::Error;

use crate::graph::AlternatingCycle;

/// Smallest instance size the model accepts.
pub const MIN_AGENTS: usize = 3;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("an instance needs at least {MIN_AGENTS} agents, got {0}")]
    TooSmall(usize),
    #[error("expected {expected} {what}, found {found}")]
    BadSize {
        what: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("ranking of agent {agent} is not a permutation of 1..={n}")]
    NotPermutation { agent: usize, n: usize },
    #[error("matching is not an involution: agent {agent} is matched to {partner}, but {partner} is matched to {back}")]
    NotInvolution {
        agent: usize,
        partner: usize,
        back: usize,
    },
    #[error("agent id {value} is outside 1..={n}")]
    OutOfRange { value: usize, n: usize },
}

/// A 1-based agent identifier.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AgentId(u32);

impl AgentId {
    /// Wraps a 1-based id.
    ///
    /// # Panics
    ///
    /// Panics if `value` is zero.
    pub fn new(value: usize) -> Self {
        assert!(value >= 1, "agent ids are 1-based");
        AgentId(value as u32)
    }

    pub fn from_index(index: usize) -> Self {
        AgentId(index as u32 + 1)
    }

    /// The 1-based value.
    pub fn get(self) -> usize {
        self.0 as usize
    }

    /// The 0-based storage index.
    pub fn index(self) -> usize {
        self.0 as usize - 1
    }
}

impl fmt::Display for AgentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Strict preferences of every agent over all agents, self included.
///
/// An agent ranked below `i` in `i`'s own list is unacceptable to `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PreferenceProfile {
    n: usize,
    // row-major n x n, 0-based agent indices, most preferred first
    rankings: Vec<u32>,
    // rank[i * n + a] = position of a in i's ranking
    rank: Vec<u32>,
}

impl PreferenceProfile {
    /// Validates raw 1-based rankings, one row per agent.
    pub fn new(n: usize, raw_rankings: &[Vec<usize>]) -> Result<Self, ModelError> {
        if n < MIN_AGENTS {
            return Err(ModelError::TooSmall(n));
        }
        if raw_rankings.len() != n {
            return Err(ModelError::BadSize {
                what: "ranking rows",
                expected: n,
                found: raw_rankings.len(),
            });
        }
        let mut rankings = Vec::with_capacity(n * n);
        let mut rank = vec![u32::MAX; n * n];
        for (i, row) in raw_rankings.iter().enumerate() {
            if row.len() != n {
                return Err(ModelError::BadSize {
                    what: "entries in a ranking row",
                    expected: n,
                    found: row.len(),
                });
            }
            for (pos, &a) in row.iter().enumerate() {
                if a == 0 || a > n || rank[i * n + a - 1] != u32::MAX {
                    return Err(ModelError::NotPermutation { agent: i + 1, n });
                }
                rank[i * n + a - 1] = pos as u32;
                rankings.push((a - 1) as u32);
            }
        }
        Ok(PreferenceProfile { n, rankings, rank })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Agent `i`'s ranking, most preferred first.
    pub fn ranking(&self, i: AgentId) -> impl Iterator<Item = AgentId> + '_ {
        let row = &self.rankings[i.index() * self.n..(i.index() + 1) * self.n];
        row.iter().map(|&a| AgentId::from_index(a as usize))
    }

    /// 0-based position of `a` in `i`'s ranking.
    pub fn rank(&self, i: AgentId, a: AgentId) -> usize {
        self.rank_idx(i.index(), a.index())
    }

    /// Whether `i` strictly prefers `a` to `b`.
    pub fn prefers(&self, i: AgentId, a: AgentId, b: AgentId) -> bool {
        self.prefers_idx(i.index(), a.index(), b.index())
    }

    #[inline]
    pub(crate) fn rank_idx(&self, i: usize, a: usize) -> usize {
        self.rank[i * self.n + a] as usize
    }

    #[inline]
    pub(crate) fn prefers_idx(&self, i: usize, a: usize, b: usize) -> bool {
        self.rank[i * self.n + a] < self.rank[i * self.n + b]
    }

    /// 1-based rows, as accepted by [`PreferenceProfile::new`].
    pub fn to_rows(&self) -> Vec<Vec<usize>> {
        self.rankings
            .chunks(self.n)
            .map(|row| row.iter().map(|&a| a as usize + 1).collect())
            .collect()
    }
}

/// An involution on agents; fixed points are unmatched agents.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Matching {
    partner: Vec<u32>,
}

impl Matching {
    /// Validates a 1-based partner array: `partners[i - 1]` is the partner of `i`.
    pub fn new(n: usize, partners: &[usize]) -> Result<Self, ModelError> {
        if partners.len() != n {
            return Err(ModelError::BadSize {
                what: "matching entries",
                expected: n,
                found: partners.len(),
            });
        }
        if let Some(&value) = partners.iter().find(|&&p| p == 0 || p > n) {
            return Err(ModelError::OutOfRange { value, n });
        }
        for (i, &p) in partners.iter().enumerate() {
            let back = partners[p - 1];
            if back != i + 1 {
                return Err(ModelError::NotInvolution {
                    agent: i + 1,
                    partner: p,
                    back,
                });
            }
        }
        Ok(Matching {
            partner: partners.iter().map(|&p| (p - 1) as u32).collect(),
        })
    }

    /// Everybody alone.
    pub fn empty(n: usize) -> Self {
        Matching {
            partner: (0..n as u32).collect(),
        }
    }

    /// Builds a matching from 1-based pairs; agents not listed stay alone.
    pub fn from_pairs(n: usize, pairs: &[(usize, usize)]) -> Result<Self, ModelError> {
        let mut partners: Vec<usize> = (1..=n).collect();
        for &(a, b) in pairs {
            for v in [a, b] {
                if v == 0 || v > n {
                    return Err(ModelError::OutOfRange { value: v, n });
                }
            }
            partners[a - 1] = b;
            partners[b - 1] = a;
        }
        Matching::new(n, &partners)
    }

    pub(crate) fn from_indices(partner: Vec<u32>) -> Self {
        debug_assert!(partner
            .iter()
            .enumerate()
            .all(|(i, &p)| partner[p as usize] as usize == i));
        Matching { partner }
    }

    pub fn len(&self) -> usize {
        self.partner.len()
    }

    pub fn is_empty(&self) -> bool {
        self.partner.is_empty()
    }

    pub fn partner(&self, i: AgentId) -> AgentId {
        AgentId::from_index(self.partner[i.index()] as usize)
    }

    #[inline]
    pub(crate) fn partner_idx(&self, i: usize) -> usize {
        self.partner[i] as usize
    }

    pub fn is_alone(&self, i: AgentId) -> bool {
        self.partner[i.index()] as usize == i.index()
    }

    /// 1-based partner array, the inverse of [`Matching::new`].
    pub fn to_partners(&self) -> Vec<usize> {
        self.partner.iter().map(|&p| p as usize + 1).collect()
    }

    /// Matched pairs `(i, j)` with `i < j`, ascending by `i`.
    pub fn pairs(&self) -> impl Iterator<Item = (AgentId, AgentId)> + '_ {
        self.partner
            .iter()
            .enumerate()
            .filter(|&(i, &p)| i < p as usize)
            .map(|(i, &p)| (AgentId::from_index(i), AgentId::from_index(p as usize)))
    }
}

impl fmt::Display for Matching {
    /// The 1-based partner line, space separated.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, &p) in self.partner.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{}", p + 1)?;
        }
        Ok(())
    }
}

/// A preference profile together with the matching under test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub profile: PreferenceProfile,
    pub matching: Matching,
}

impl Instance {
    pub fn new(profile: PreferenceProfile, matching: Matching) -> Result<Self, ModelError> {
        if matching.len() != profile.n() {
            return Err(ModelError::BadSize {
                what: "matching entries",
                expected: profile.n(),
                found: matching.len(),
            });
        }
        Ok(Instance { profile, matching })
    }

    /// Validates raw 1-based rankings and partners in one go.
    pub fn from_raw(
        n: usize,
        rankings: &[Vec<usize>],
        partners: &[usize],
    ) -> Result<Self, ModelError> {
        let profile = PreferenceProfile::new(n, rankings)?;
        let matching = Matching::new(n, partners)?;
        Instance::new(profile, matching)
    }

    pub fn n(&self) -> usize {
        self.profile.n()
    }
}

/// Whether `candidate` Pareto dominates `baseline`: the two differ and
/// every agent weakly prefers its `candidate` partner.
pub fn pareto_dominates(
    profile: &PreferenceProfile,
    candidate: &Matching,
    baseline: &Matching,
) -> bool {
    if candidate == baseline {
        return false;
    }
    (0..profile.n()).all(|i| {
        let c = candidate.partner_idx(i);
        let b = baseline.partner_idx(i);
        c == b || profile.prefers_idx(i, c, b)
    })
}

/// Matched pairs in which both members prefer being alone, ascending.
pub fn find_irrational_pairs(instance: &Instance) -> Vec<(AgentId, AgentId)> {
    let profile = &instance.profile;
    instance
        .matching
        .pairs()
        .filter(|&(i, j)| profile.prefers(i, i, j) && profile.prefers(j, j, i))
        .collect()
}

/// Why a matching was found inefficient.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Cause {
    IrrationalPairs(Vec<(AgentId, AgentId)>),
    AlternatingCycle(AlternatingCycle),
}

impl Cause {
    /// Stable tag used in reports.
    pub fn tag(&self) -> &'static str {
        match self {
            Cause::IrrationalPairs(_) => "irrational-pair",
            Cause::AlternatingCycle(_) => "alternating-cycle",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Efficient,
    /// `witness` Pareto dominates the matching under test.
    Inefficient {
        witness: Matching,
        cause: Cause,
    },
}

impl Verdict {
    pub fn is_efficient(&self) -> bool {
        matches!(self, Verdict::Efficient)
    }

    pub fn witness(&self) -> Option<&Matching> {
        match self {
            Verdict::Efficient => None,
            Verdict::Inefficient { witness, .. } => Some(witness),
        }
    }

    pub fn cause(&self) -> Option<&Cause> {
        match self {
            Verdict::Efficient => None,
            Verdict::Inefficient { cause, .. } => Some(cause),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a(v: usize) -> AgentId {
        AgentId::new(v)
    }

    fn profile(rows: &[&[usize]]) -> PreferenceProfile {
        let rows: Vec<Vec<usize>> = rows.iter().map(|r| r.to_vec()).collect();
        PreferenceProfile::new(rows.len(), &rows).unwrap()
    }

    #[test]
    fn validate_profile_accepts_permutations() {
        let p = profile(&[&[2, 1, 3], &[1, 2, 3], &[3, 1, 2]]);
        assert_eq!(p.n(), 3);
        assert_eq!(p.rank(a(1), a(2)), 0);
        assert_eq!(p.rank(a(3), a(2)), 2);
        assert_eq!(
            p.to_rows(),
            vec![vec![2, 1, 3], vec![1, 2, 3], vec![3, 1, 2]]
        );
    }

    #[test]
    fn validate_profile_rejects_duplicates() {
        let rows = vec![vec![2, 2, 3], vec![1, 2, 3], vec![3, 1, 2]];
        assert_eq!(
            PreferenceProfile::new(3, &rows),
            Err(ModelError::NotPermutation { agent: 1, n: 3 })
        );
        let rows = vec![vec![2, 1, 3], vec![1, 2, 4], vec![3, 1, 2]];
        assert!(matches!(
            PreferenceProfile::new(3, &rows),
            Err(ModelError::NotPermutation { agent: 2, .. })
        ));
    }

    #[test]
    fn validate_profile_rejects_small_and_misshapen() {
        let rows = vec![vec![1, 2], vec![2, 1]];
        assert_eq!(
            PreferenceProfile::new(2, &rows),
            Err(ModelError::TooSmall(2))
        );
        let rows = vec![vec![1, 2, 3], vec![1, 2, 3]];
        assert!(matches!(
            PreferenceProfile::new(3, &rows),
            Err(ModelError::BadSize {
                expected: 3,
                found: 2,
                ..
            })
        ));
        let rows = vec![vec![1, 2, 3], vec![1, 2], vec![1, 2, 3]];
        assert!(matches!(
            PreferenceProfile::new(3, &rows),
            Err(ModelError::BadSize {
                expected: 3,
                found: 2,
                ..
            })
        ));
    }

    #[test]
    fn validate_matching_cases() {
        let m = Matching::new(4, &[2, 1, 4, 3]).unwrap();
        assert_eq!(
            m.pairs()
                .map(|(x, y)| (x.get(), y.get()))
                .collect::<Vec<_>>(),
            vec![(1, 2), (3, 4)]
        );
        let m = Matching::new(3, &[1, 2, 3]).unwrap();
        assert_eq!(m, Matching::empty(3));
        assert!(m.is_alone(a(2)));
        assert!(matches!(
            Matching::new(3, &[2, 3, 1]),
            Err(ModelError::NotInvolution {
                agent: 1,
                partner: 2,
                back: 3
            })
        ));
        assert_eq!(
            Matching::new(3, &[2, 1, 4]),
            Err(ModelError::OutOfRange { value: 4, n: 3 })
        );
        assert_eq!(
            Matching::new(3, &[0, 2, 3]),
            Err(ModelError::OutOfRange { value: 0, n: 3 })
        );
        assert!(matches!(
            Matching::new(3, &[1, 2]),
            Err(ModelError::BadSize { .. })
        ));
    }

    #[test]
    fn matching_display_is_partner_line() {
        let m = Matching::from_pairs(5, &[(1, 4), (2, 3)]).unwrap();
        assert_eq!(m.to_string(), "4 3 2 1 5");
        assert_eq!(m.to_partners(), vec![4, 3, 2, 1, 5]);
    }

    #[test]
    fn prefers_reads_ranking() {
        let p = profile(&[&[3, 2, 1, 4], &[1, 2, 3, 4], &[1, 2, 3, 4], &[1, 2, 3, 4]]);
        assert!(p.prefers(a(1), a(3), a(2)));
        assert!(!p.prefers(a(1), a(4), a(1)));
        for i in 1..=4 {
            for x in 1..=4 {
                assert!(!p.prefers(a(i), a(x), a(x)));
            }
        }
    }

    // Instance B: a single alternating 4-cycle 1 -S- 2 -N- 4 -S- 3 -N- 1.
    fn instance_b_profile() -> PreferenceProfile {
        profile(&[&[3, 2, 1, 4], &[4, 1, 2, 3], &[1, 4, 3, 2], &[2, 3, 4, 1]])
    }

    #[test]
    fn dominance_examples() {
        let p = instance_b_profile();
        let base = Matching::from_pairs(4, &[(1, 2), (3, 4)]).unwrap();
        let cand = Matching::from_pairs(4, &[(1, 3), (2, 4)]).unwrap();
        assert!(pareto_dominates(&p, &cand, &base));
        assert!(!pareto_dominates(&p, &base, &cand));
        assert!(!pareto_dominates(&p, &base, &base));

        // 2 loses 1 and ends alone, which it ranks below 1; everyone else gains.
        let mixed = Matching::from_pairs(4, &[(1, 3)]).unwrap();
        assert!(p.prefers(a(1), a(3), a(2)));
        assert!(p.prefers(a(2), a(1), a(2)));
        assert!(!pareto_dominates(&p, &mixed, &base));
    }

    #[test]
    fn irrational_pairs_examples() {
        // Instance D
        let d = Instance::from_raw(
            4,
            &[
                vec![1, 2, 3, 4],
                vec![2, 1, 3, 4],
                vec![4, 3, 1, 2],
                vec![3, 4, 1, 2],
            ],
            &[2, 1, 4, 3],
        )
        .unwrap();
        assert_eq!(find_irrational_pairs(&d), vec![(a(1), a(2))]);

        // Instance E: only 1 prefers being alone
        let e = Instance::from_raw(
            3,
            &[vec![1, 2, 3], vec![1, 2, 3], vec![3, 1, 2]],
            &[2, 1, 3],
        )
        .unwrap();
        assert!(find_irrational_pairs(&e).is_empty());

        // everyone with their top choice
        let top = Instance::from_raw(
            4,
            &[
                vec![2, 1, 3, 4],
                vec![1, 2, 3, 4],
                vec![4, 3, 1, 2],
                vec![3, 4, 1, 2],
            ],
            &[2, 1, 4, 3],
        )
        .unwrap();
        assert!(find_irrational_pairs(&top).is_empty());
    }

    #[test]
    fn instance_rejects_size_mismatch() {
        let p = instance_b_profile();
        assert!(matches!(
            Instance::new(p, Matching::empty(5)),
            Err(ModelError::BadSize { .. })
        ));
    }

    #[test]
    fn cause_tags() {
        assert_eq!(Cause::IrrationalPairs(vec![]).tag(), "irrational-pair");
    }
}
