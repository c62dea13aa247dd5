//! Exhaustive reference engines for small instances.
//!
//! Everything here is exponential and guarded by [`MAX_AGENTS`]. The
//! engines share no code with the checker's reduction or cycle extraction,
//! so they can serve as independent ground truth in tests.

use thiserror::Error;

use crate::graph::{AlternatingCycle, EdgeKind, EfficiencyGraph, ModifiedGraph};
use crate::model::{pareto_dominates, AgentId, Instance, Matching};

/// Largest instance the exhaustive engines accept.
pub const MAX_AGENTS: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("exhaustive search is limited to {MAX_AGENTS} agents, got {0}")]
    TooLarge(usize),
    #[error("the given matching does not Pareto dominate the instance's matching")]
    NotADominator,
}

fn guard(n: usize) -> Result<(), OracleError> {
    if n > MAX_AGENTS {
        Err(OracleError::TooLarge(n))
    } else {
        Ok(())
    }
}

/// Number of involutions on `n` elements.
pub fn telephone_number(n: usize) -> u64 {
    let (mut prev, mut cur) = (1u64, 1u64);
    for k in 2..=n as u64 {
        let next = cur + (k - 1) * prev;
        prev = cur;
        cur = next;
    }
    cur
}

const UNSET: u32 = u32::MAX;

/// Every matching on `n` agents, each exactly once.
///
/// The smallest unresolved agent is decided first: alone, then each
/// unresolved partner in ascending order.
pub struct Matchings {
    partner: Vec<u32>,
    // (agent, choice)
    stack: Vec<(u32, u32)>,
    started: bool,
}

impl Matchings {
    fn descend(&mut self) {
        let mut from = self.stack.last().map_or(0, |&(a, _)| a as usize);
        while let Some(a) = (from..self.partner.len()).find(|&a| self.partner[a] == UNSET) {
            self.partner[a] = a as u32;
            self.stack.push((a as u32, a as u32));
            from = a + 1;
        }
    }

    fn current(&self) -> Matching {
        Matching::from_indices(self.partner.clone())
    }
}

impl Iterator for Matchings {
    type Item = Matching;

    fn next(&mut self) -> Option<Matching> {
        if !self.started {
            self.started = true;
            self.descend();
            return Some(self.current());
        }
        while let Some((a, c)) = self.stack.pop() {
            self.partner[a as usize] = UNSET;
            self.partner[c as usize] = UNSET;
            let start = c as usize + 1;
            if let Some(b) = (start..self.partner.len()).find(|&b| self.partner[b] == UNSET) {
                self.partner[a as usize] = b as u32;
                self.partner[b] = a;
                self.stack.push((a, b as u32));
                self.descend();
                return Some(self.current());
            }
        }
        None
    }
}

pub fn enumerate_matchings(n: usize) -> Result<Matchings, OracleError> {
    guard(n)?;
    Ok(Matchings {
        partner: vec![UNSET; n],
        stack: Vec::new(),
        started: false,
    })
}

/// Brute-force efficiency: `(true, None)` if nothing dominates, otherwise
/// `(false, Some(first dominator in enumeration order))`.
pub fn oracle_efficient(instance: &Instance) -> Result<(bool, Option<Matching>), OracleError> {
    let dominator = enumerate_matchings(instance.n())?
        .find(|m| pareto_dominates(&instance.profile, m, &instance.matching));
    Ok((dominator.is_none(), dominator))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StructureKind {
    Path,
    Cycle,
}

/// An alternating path or cycle in the efficiency graph `G`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlternatingStructure {
    pub kind: StructureKind,
    pub vertices: Vec<AgentId>,
    /// `edges[k]` joins `vertices[k]` and `vertices[k + 1]`; for a cycle the
    /// last entry closes back to `vertices[0]`.
    pub edges: Vec<EdgeKind>,
    /// Self-loop kinds at the first and last vertex of a path.
    pub terminal_loops: Option<(EdgeKind, EdgeKind)>,
}

impl AlternatingStructure {
    /// Whether every structural invariant holds against `g`.
    pub fn is_valid_in(&self, g: &EfficiencyGraph) -> bool {
        let vs = &self.vertices;
        if vs.iter().any(|v| v.get() > g.n()) {
            return false;
        }
        let mut sorted = vs.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != vs.len() {
            return false;
        }
        let closed = self.kind == StructureKind::Cycle;
        let expected_edges = if closed {
            vs.len()
        } else {
            vs.len().saturating_sub(1)
        };
        if self.edges.len() != expected_edges || self.edges.is_empty() {
            return false;
        }
        let alternates = self.edges.windows(2).all(|w| w[0] != w[1])
            && (!closed || self.edges[0] != self.edges[self.edges.len() - 1]);
        if !alternates {
            return false;
        }
        let edges_exist = self.edges.iter().enumerate().all(|(k, &kind)| {
            let (u, v) = (vs[k], vs[(k + 1) % vs.len()]);
            u != v && g.has_edge(u, v, kind)
        });
        if !edges_exist {
            return false;
        }
        match (self.kind, self.terminal_loops) {
            (StructureKind::Cycle, None) => vs.len() >= 4,
            (StructureKind::Path, Some((first, last))) => {
                let (v0, vk) = (vs[0], vs[vs.len() - 1]);
                first == self.edges[0].other()
                    && last == self.edges[self.edges.len() - 1].other()
                    && g.has_loop(v0, first)
                    && g.has_loop(vk, last)
            }
            _ => false,
        }
    }
}

/// The improvement a structure encodes: endpoints of each normal edge are
/// matched, a normal self-loop sends its agent away alone, and everyone
/// else keeps their partner.
pub fn improve_from_structure(matching: &Matching, structure: &AlternatingStructure) -> Matching {
    let mut partners = matching.to_partners();
    let vs = &structure.vertices;
    for (k, &kind) in structure.edges.iter().enumerate() {
        if kind == EdgeKind::Normal {
            let (u, v) = (vs[k], vs[(k + 1) % vs.len()]);
            partners[u.index()] = v.get();
            partners[v.index()] = u.get();
        }
    }
    if let Some((first, last)) = structure.terminal_loops {
        for (v, kind) in [(vs[0], first), (vs[vs.len() - 1], last)] {
            if kind == EdgeKind::Normal {
                partners[v.index()] = v.get();
            }
        }
    }
    Matching::new(matching.len(), &partners).expect("structure improvement is a matching")
}

struct StructureSearch<'g> {
    g: &'g EfficiencyGraph,
    path: Vec<AgentId>,
    kinds: Vec<EdgeKind>,
    on_path: Vec<bool>,
}

impl StructureSearch<'_> {
    fn steps(&self, v: AgentId, kind: EdgeKind) -> Vec<AgentId> {
        match kind {
            EdgeKind::Special if self.g.has_special_loop(v) => Vec::new(),
            EdgeKind::Special => vec![self.g.special_partner(v)],
            EdgeKind::Normal => self.g.normal_neighbors(v).collect(),
        }
    }

    fn push(&mut self, v: AgentId, kind: Option<EdgeKind>) {
        self.path.push(v);
        self.on_path[v.index()] = true;
        if let Some(k) = kind {
            self.kinds.push(k);
        }
    }

    fn pop(&mut self) {
        let v = self.path.pop().expect("non-empty path");
        self.on_path[v.index()] = false;
        self.kinds.pop();
    }

    // Alternating cycles through path[0], next edge of `kind`.
    fn cycle(&mut self, kind: EdgeKind) -> bool {
        let v = *self.path.last().expect("non-empty path");
        let start = self.path[0];
        for w in self.steps(v, kind) {
            if w == start && kind == EdgeKind::Normal && self.path.len() >= 4 {
                self.kinds.push(kind);
                return true;
            }
            if !self.on_path[w.index()] {
                self.push(w, Some(kind));
                if self.cycle(kind.other()) {
                    return true;
                }
                self.pop();
            }
        }
        false
    }

    // Alternating paths from path[0], ending at a vertex with the opposite loop.
    fn open_path(&mut self, kind: EdgeKind) -> bool {
        let v = *self.path.last().expect("non-empty path");
        for w in self.steps(v, kind) {
            if self.on_path[w.index()] {
                continue;
            }
            self.push(w, Some(kind));
            if self.g.has_loop(w, kind.other()) || self.open_path(kind.other()) {
                return true;
            }
            self.pop();
        }
        false
    }
}

/// Exhaustive search for any alternating path or cycle in `G`.
pub fn search_alternating_structures(
    g: &EfficiencyGraph,
) -> Result<Option<AlternatingStructure>, OracleError> {
    guard(g.n())?;
    let mut search = StructureSearch {
        g,
        path: Vec::new(),
        kinds: Vec::new(),
        on_path: vec![false; g.n()],
    };
    for s in (1..=g.n()).map(AgentId::new) {
        search.push(s, None);
        if search.cycle(EdgeKind::Special) {
            return Ok(Some(AlternatingStructure {
                kind: StructureKind::Cycle,
                vertices: std::mem::take(&mut search.path),
                edges: std::mem::take(&mut search.kinds),
                terminal_loops: None,
            }));
        }
        search.pop();
    }
    for s in (1..=g.n()).map(AgentId::new) {
        for loop_kind in [EdgeKind::Special, EdgeKind::Normal] {
            if !g.has_loop(s, loop_kind) {
                continue;
            }
            search.push(s, None);
            if search.open_path(loop_kind.other()) {
                let last = search.kinds[search.kinds.len() - 1].other();
                return Ok(Some(AlternatingStructure {
                    kind: StructureKind::Path,
                    vertices: std::mem::take(&mut search.path),
                    edges: std::mem::take(&mut search.kinds),
                    terminal_loops: Some((loop_kind, last)),
                }));
            }
            search.pop();
        }
    }
    Ok(None)
}

/// Exhaustive search for an alternating cycle anywhere in `G'`.
pub fn search_alternating_cycle(
    g2: &ModifiedGraph,
) -> Result<Option<AlternatingCycle>, OracleError> {
    guard(g2.agent_count())?;
    fn extend(g2: &ModifiedGraph, path: &mut Vec<usize>, on_path: &mut [bool]) -> bool {
        // path alternates S, N, ... starting at path[0]; its length parity
        // says which kind comes next
        let v = *path.last().expect("non-empty path");
        if path.len() % 2 == 1 {
            let w = g2.special_partner(v);
            if on_path[w] {
                return false;
            }
            path.push(w);
            on_path[w] = true;
            if extend(g2, path, on_path) {
                return true;
            }
            on_path[w] = false;
            path.pop();
            return false;
        }
        for &w in g2.normal_list(v) {
            let w = w as usize;
            if w == path[0] && path.len() >= 4 {
                return true;
            }
            if !on_path[w] {
                path.push(w);
                on_path[w] = true;
                if extend(g2, path, on_path) {
                    return true;
                }
                on_path[w] = false;
                path.pop();
            }
        }
        false
    }
    let mut on_path = vec![false; g2.vertex_bound() + 1];
    for s in g2.vertices() {
        let mut path = vec![s];
        on_path[s] = true;
        if extend(g2, &mut path, &mut on_path) {
            let cycle = AlternatingCycle::new(path, g2).expect("search yields a valid cycle");
            return Ok(Some(cycle));
        }
        on_path[s] = false;
    }
    Ok(None)
}

/// Reads off the alternating structure that a dominating matching traces
/// through `G`.
///
/// The symmetric difference of the two matchings splits into paths and
/// cycles. A path is followed from an agent alone under the instance's
/// matching if there is one, otherwise from an agent alone under the
/// dominator; failing both, the cycle through the smallest disagreeing
/// agent is returned.
pub fn structure_from_dominator(
    instance: &Instance,
    dominator: &Matching,
) -> Result<AlternatingStructure, OracleError> {
    let mu = &instance.matching;
    if dominator.len() != mu.len() || !pareto_dominates(&instance.profile, dominator, mu) {
        return Err(OracleError::NotADominator);
    }
    let disagreeing: Vec<AgentId> = (1..=mu.len())
        .map(AgentId::new)
        .filter(|&i| mu.partner(i) != dominator.partner(i))
        .collect();
    let step = |v: AgentId, kind: EdgeKind| match kind {
        EdgeKind::Special => mu.partner(v),
        EdgeKind::Normal => dominator.partner(v),
    };

    let start = disagreeing
        .iter()
        .find(|&&i| mu.is_alone(i))
        .map(|&i| (i, EdgeKind::Special))
        .or_else(|| {
            disagreeing
                .iter()
                .find(|&&i| dominator.is_alone(i))
                .map(|&i| (i, EdgeKind::Normal))
        });

    if let Some((i, loop_kind)) = start {
        let mut vertices = vec![i];
        let mut edges = Vec::new();
        let mut kind = loop_kind.other();
        let mut v = i;
        loop {
            let w = step(v, kind);
            if w == v {
                let last = kind;
                return Ok(AlternatingStructure {
                    kind: StructureKind::Path,
                    vertices,
                    edges,
                    terminal_loops: Some((loop_kind, last)),
                });
            }
            vertices.push(w);
            edges.push(kind);
            v = w;
            kind = kind.other();
        }
    }

    let i = disagreeing[0];
    let mut vertices = vec![i];
    let mut edges = vec![EdgeKind::Special];
    let mut v = mu.partner(i);
    while v != i {
        vertices.push(v);
        let kind = edges[edges.len() - 1].other();
        edges.push(kind);
        v = step(v, kind);
    }
    Ok(AlternatingStructure {
        kind: StructureKind::Cycle,
        vertices,
        edges,
        terminal_loops: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_graph, build_modified_graph};
    use EdgeKind::{Normal, Special};

    fn ids(v: &[usize]) -> Vec<AgentId> {
        v.iter().map(|&x| AgentId::new(x)).collect()
    }

    fn instance(rows: &[&[usize]], partners: &[usize]) -> Instance {
        let rows: Vec<Vec<usize>> = rows.iter().map(|r| r.to_vec()).collect();
        Instance::from_raw(rows.len(), &rows, partners).unwrap()
    }

    fn instance_a() -> Instance {
        instance(
            &[&[3, 2, 1, 4], &[2, 1, 3, 4], &[1, 4, 3, 2], &[4, 3, 1, 2]],
            &[2, 1, 4, 3],
        )
    }

    fn instance_b() -> Instance {
        instance(
            &[&[3, 2, 1, 4], &[4, 1, 2, 3], &[1, 4, 3, 2], &[2, 3, 4, 1]],
            &[2, 1, 4, 3],
        )
    }

    fn instance_c() -> Instance {
        instance(
            &[&[2, 1, 3, 4], &[1, 2, 3, 4], &[4, 3, 1, 2], &[3, 4, 1, 2]],
            &[2, 1, 4, 3],
        )
    }

    fn instance_e() -> Instance {
        instance(&[&[1, 2, 3], &[1, 2, 3], &[3, 1, 2]], &[2, 1, 3])
    }

    fn instance_f() -> Instance {
        instance(&[&[2, 1, 3], &[1, 2, 3], &[3, 1, 2]], &[1, 2, 3])
    }

    #[test]
    fn enumerates_three_agents_in_order() {
        let all: Vec<Vec<usize>> = enumerate_matchings(3)
            .unwrap()
            .map(|m| m.to_partners())
            .collect();
        assert_eq!(
            all,
            vec![vec![1, 2, 3], vec![1, 3, 2], vec![2, 1, 3], vec![3, 2, 1]]
        );
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(enumerate_matchings(4).unwrap().count(), 10);
        assert_eq!(enumerate_matchings(8).unwrap().count(), 764);
        assert_eq!(telephone_number(8), 764);
        for n in 1..=10 {
            let all: Vec<Matching> = enumerate_matchings(n).unwrap().collect();
            assert_eq!(all.len() as u64, telephone_number(n), "n = {n}");
            let mut unique = all.clone();
            unique.sort_by_key(|m| m.to_partners());
            unique.dedup();
            assert_eq!(unique.len(), all.len());
        }
        assert_eq!(telephone_number(12), 140_152);
        assert!(matches!(
            enumerate_matchings(13),
            Err(OracleError::TooLarge(13))
        ));
    }

    #[test]
    fn oracle_examples() {
        assert_eq!(oracle_efficient(&instance_c()).unwrap(), (true, None));
        assert_eq!(oracle_efficient(&instance_e()).unwrap(), (true, None));
        let (eff, dom) = oracle_efficient(&instance_b()).unwrap();
        assert!(!eff);
        assert_eq!(dom.unwrap().to_partners(), vec![3, 4, 1, 2]);
    }

    #[test]
    fn structure_search_examples() {
        let g = build_graph(&instance_a());
        let s = search_alternating_structures(&g).unwrap().unwrap();
        assert_eq!(s.kind, StructureKind::Path);
        assert_eq!(s.vertices, ids(&[2, 1, 3, 4]));
        assert_eq!(s.edges, vec![Special, Normal, Special]);
        assert_eq!(s.terminal_loops, Some((Normal, Normal)));
        assert!(s.is_valid_in(&g));

        let g = build_graph(&instance_b());
        let s = search_alternating_structures(&g).unwrap().unwrap();
        assert_eq!(s.kind, StructureKind::Cycle);
        assert_eq!(s.vertices, ids(&[1, 2, 4, 3]));
        assert_eq!(s.edges, vec![Special, Normal, Special, Normal]);
        assert!(s.is_valid_in(&g));

        let g = build_graph(&instance_c());
        assert_eq!(search_alternating_structures(&g).unwrap(), None);
    }

    #[test]
    fn cycle_search_examples() {
        let g2 = build_modified_graph(&build_graph(&instance_f()));
        let c = search_alternating_cycle(&g2).unwrap().unwrap();
        let mut vs = c.vertices().to_vec();
        vs.sort_unstable();
        assert_eq!(vs, vec![1, 2, 4, 5]);

        let g2 = build_modified_graph(&build_graph(&instance_e()));
        assert_eq!(search_alternating_cycle(&g2).unwrap(), None);

        let g2 = ModifiedGraph::from_edges(&[(1, 2), (3, 4)], &[]).unwrap();
        assert_eq!(search_alternating_cycle(&g2).unwrap(), None);
    }

    #[test]
    fn structures_from_dominators() {
        let b = instance_b();
        let dom = Matching::from_pairs(4, &[(1, 3), (2, 4)]).unwrap();
        let s = structure_from_dominator(&b, &dom).unwrap();
        assert_eq!(s.kind, StructureKind::Cycle);
        assert_eq!(s.vertices, ids(&[1, 2, 4, 3]));
        assert!(s.is_valid_in(&build_graph(&b)));

        let f = instance_f();
        let dom = Matching::from_pairs(3, &[(1, 2)]).unwrap();
        let s = structure_from_dominator(&f, &dom).unwrap();
        assert_eq!(s.kind, StructureKind::Path);
        assert_eq!(s.vertices, ids(&[1, 2]));
        assert_eq!(s.edges, vec![Normal]);
        assert_eq!(s.terminal_loops, Some((Special, Special)));
        assert!(s.is_valid_in(&build_graph(&f)));

        let a = instance_a();
        let dom = Matching::from_pairs(4, &[(1, 3)]).unwrap();
        let s = structure_from_dominator(&a, &dom).unwrap();
        assert_eq!(s.vertices, ids(&[2, 1, 3, 4]));
        assert_eq!(s.edges, vec![Special, Normal, Special]);
        assert_eq!(s.terminal_loops, Some((Normal, Normal)));
        assert!(s.is_valid_in(&build_graph(&a)));
        assert_eq!(improve_from_structure(&a.matching, &s), dom);

        assert_eq!(
            structure_from_dominator(&a, &a.matching),
            Err(OracleError::NotADominator)
        );
    }

    #[test]
    fn validity_rejects_broken_structures() {
        let g = build_graph(&instance_a());
        // same-kind terminal loop as the incident edge
        let bad = AlternatingStructure {
            kind: StructureKind::Path,
            vertices: ids(&[2, 1, 3, 4]),
            edges: vec![Special, Normal, Special],
            terminal_loops: Some((Special, Normal)),
        };
        assert!(!bad.is_valid_in(&g));
        let not_alternating = AlternatingStructure {
            kind: StructureKind::Path,
            vertices: ids(&[1, 3, 4]),
            edges: vec![Normal, Normal],
            terminal_loops: Some((Special, Special)),
        };
        assert!(!not_alternating.is_valid_in(&g));
    }
}
