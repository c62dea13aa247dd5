//! The efficiency graph of a matching and its modified form.
//!
//! In the efficiency graph `G` every agent is a vertex. Special edges join
//! matched partners (a self-loop for an unmatched agent). A normal edge joins
//! two agents who strictly prefer each other to their current partners, and a
//! normal self-loop marks an agent who prefers being alone to its partner.
//!
//! The modified graph `G'` pairs each unmatched agent `i` with a virtual
//! vertex `i + n`, joins every two non-adjacent qualifying vertices (virtual,
//! or carrying a normal self-loop in `G`) by a normal edge, and drops all
//! self-loops. Its special edges form a perfect matching, so alternating
//! paths in `G` become alternating cycles in `G'`.

use std::fmt::Write as _;

use thiserror::Error;

use crate::model::{AgentId, Instance};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EdgeKind {
    Special,
    Normal,
}

impl EdgeKind {
    pub fn other(self) -> EdgeKind {
        match self {
            EdgeKind::Special => EdgeKind::Normal,
            EdgeKind::Normal => EdgeKind::Special,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("vertex {0} is not in the graph")]
    UnknownVertex(usize),
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("special edges do not form a perfect matching at vertex {0}")]
    NotPerfectMatching(usize),
}

/// Dense symmetric bit matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct BitMatrix {
    dim: usize,
    words_per_row: usize,
    bits: Vec<u64>,
}

impl BitMatrix {
    pub(crate) fn new(dim: usize) -> Self {
        let words_per_row = dim.div_ceil(64);
        BitMatrix {
            dim,
            words_per_row,
            bits: vec![0; dim * words_per_row],
        }
    }

    #[inline]
    pub(crate) fn get(&self, r: usize, c: usize) -> bool {
        debug_assert!(r < self.dim && c < self.dim);
        self.bits[r * self.words_per_row + c / 64] >> (c % 64) & 1 == 1
    }

    #[inline]
    fn put(&mut self, r: usize, c: usize, value: bool) {
        let w = &mut self.bits[r * self.words_per_row + c / 64];
        if value {
            *w |= 1 << (c % 64);
        } else {
            *w &= !(1 << (c % 64));
        }
    }

    pub(crate) fn set_sym(&mut self, a: usize, b: usize, value: bool) {
        self.put(a, b, value);
        self.put(b, a, value);
    }
}

/// The efficiency graph `G` of an instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EfficiencyGraph {
    n: usize,
    special: Vec<u32>,
    normal: BitMatrix,
    normal_lists: Vec<Vec<u32>>,
    normal_self_loop: Vec<bool>,
    normal_edge_count: usize,
}

/// Builds `G` for `instance` in `O(n^2)`.
pub fn build_graph(instance: &Instance) -> EfficiencyGraph {
    let n = instance.n();
    let profile = &instance.profile;
    let mu = &instance.matching;
    let mut normal = BitMatrix::new(n);
    let mut normal_lists = vec![Vec::new(); n];
    let mut normal_edge_count = 0;
    // improves[i * n + j]: i strictly prefers j to its current partner
    let improves: Vec<bool> = (0..n)
        .flat_map(|i| {
            let current = profile.rank_idx(i, mu.partner_idx(i));
            (0..n).map(move |j| (i, j, current))
        })
        .map(|(i, j, current)| profile.rank_idx(i, j) < current)
        .collect();
    for i in 0..n {
        for j in i + 1..n {
            if improves[i * n + j] && improves[j * n + i] {
                normal.set_sym(i, j, true);
                normal_lists[i].push(j as u32);
                normal_lists[j].push(i as u32);
                normal_edge_count += 1;
            }
        }
    }
    let normal_self_loop = (0..n).map(|i| improves[i * n + i]).collect();
    EfficiencyGraph {
        n,
        special: (0..n).map(|i| mu.partner_idx(i) as u32).collect(),
        normal,
        normal_lists,
        normal_self_loop,
        normal_edge_count,
    }
}

impl EfficiencyGraph {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn special_partner(&self, i: AgentId) -> AgentId {
        AgentId::from_index(self.special[i.index()] as usize)
    }

    pub fn has_special_loop(&self, i: AgentId) -> bool {
        self.special[i.index()] as usize == i.index()
    }

    pub fn has_normal_loop(&self, i: AgentId) -> bool {
        self.normal_self_loop[i.index()]
    }

    /// Whether `i` carries a self-loop of `kind`.
    pub fn has_loop(&self, i: AgentId, kind: EdgeKind) -> bool {
        match kind {
            EdgeKind::Special => self.has_special_loop(i),
            EdgeKind::Normal => self.has_normal_loop(i),
        }
    }

    /// Normal edge between distinct agents. Self-loops are reported by
    /// [`EfficiencyGraph::has_normal_loop`] instead.
    pub fn is_normal(&self, i: AgentId, j: AgentId) -> bool {
        self.normal.get(i.index(), j.index())
    }

    /// Whether `i` and `j` are joined by an edge of `kind` (self-loops included).
    pub fn has_edge(&self, i: AgentId, j: AgentId, kind: EdgeKind) -> bool {
        match kind {
            EdgeKind::Special => self.special_partner(i) == j,
            EdgeKind::Normal if i == j => self.has_normal_loop(i),
            EdgeKind::Normal => self.is_normal(i, j),
        }
    }

    pub fn normal_neighbors(&self, i: AgentId) -> impl Iterator<Item = AgentId> + '_ {
        self.normal_lists[i.index()]
            .iter()
            .map(|&j| AgentId::from_index(j as usize))
    }

    pub fn normal_edge_count(&self) -> usize {
        self.normal_edge_count
    }

    /// DOT-like dump: special edges drawn doubled, normal edges single.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph G {\n");
        for i in 0..self.n {
            let _ = writeln!(out, "  {};", i + 1);
        }
        for i in 0..self.n {
            let p = self.special[i] as usize;
            if i <= p {
                let _ = writeln!(out, "  {} -- {} [color=\"black:black\"];", i + 1, p + 1);
            }
            if self.normal_self_loop[i] {
                let _ = writeln!(out, "  {} -- {};", i + 1, i + 1);
            }
            for &j in &self.normal_lists[i] {
                if (j as usize) > i {
                    let _ = writeln!(out, "  {} -- {};", i + 1, j + 1);
                }
            }
        }
        out.push_str("}\n");
        out
    }
}

/// The modified graph `G'`.
///
/// Vertex ids are 1-based over the universe `1..=2n`; a virtual vertex
/// `i + n` exists only when agent `i` is unmatched.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModifiedGraph {
    n: usize,
    bound: usize,
    present: Vec<bool>,
    // 0 for absent vertices
    special: Vec<u32>,
    normal: BitMatrix,
    added: BitMatrix,
    normal_lists: Vec<Vec<u32>>,
    normal_edge_count: usize,
}

/// Builds `G'` from `G` in `O(n^2)`.
pub fn build_modified_graph(g: &EfficiencyGraph) -> ModifiedGraph {
    let n = g.n;
    let bound = 2 * n;
    let mut present = vec![false; bound + 1];
    let mut special = vec![0u32; bound + 1];
    for i in 0..n {
        let v = i + 1;
        present[v] = true;
        let p = g.special[i] as usize;
        if p == i {
            present[v + n] = true;
            special[v] = (v + n) as u32;
            special[v + n] = v as u32;
        } else {
            special[v] = (p + 1) as u32;
        }
    }

    let mut normal = BitMatrix::new(bound + 1);
    let mut added = BitMatrix::new(bound + 1);
    let mut normal_lists = vec![Vec::new(); bound + 1];
    let mut normal_edge_count = 0;
    for i in 0..n {
        for &j in &g.normal_lists[i] {
            let (u, v) = (i + 1, j as usize + 1);
            if u < v {
                normal.set_sym(u, v, true);
                normal_edge_count += 1;
            }
        }
    }

    let qualifying: Vec<usize> = (1..=bound)
        .filter(|&v| present[v] && (v > n || g.normal_self_loop[v - 1]))
        .collect();
    for (k, &u) in qualifying.iter().enumerate() {
        for &v in &qualifying[k + 1..] {
            if special[u] as usize != v && !normal.get(u, v) {
                normal.set_sym(u, v, true);
                added.set_sym(u, v, true);
                normal_edge_count += 1;
            }
        }
    }

    for u in 1..=bound {
        if present[u] {
            normal_lists[u] = (1..=bound)
                .filter(|&v| normal.get(u, v))
                .map(|v| v as u32)
                .collect();
        }
    }

    ModifiedGraph {
        n,
        bound,
        present,
        special,
        normal,
        added,
        normal_lists,
        normal_edge_count,
    }
}

impl ModifiedGraph {
    /// Builds a graph directly from its edges, for hand-made fixtures.
    ///
    /// Vertices are the endpoints of `special_pairs`, which must form a
    /// perfect matching on them. Every edge is tagged as original and no
    /// vertex is virtual.
    pub fn from_edges(
        special_pairs: &[(usize, usize)],
        normal_edges: &[(usize, usize)],
    ) -> Result<Self, GraphError> {
        let bound = special_pairs
            .iter()
            .chain(normal_edges)
            .flat_map(|&(u, v)| [u, v])
            .max()
            .unwrap_or(0);
        let mut present = vec![false; bound + 1];
        let mut special = vec![0u32; bound + 1];
        for &(u, v) in special_pairs {
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            for w in [u, v] {
                if w == 0 {
                    return Err(GraphError::UnknownVertex(0));
                }
                if present[w] {
                    return Err(GraphError::NotPerfectMatching(w));
                }
                present[w] = true;
            }
            special[u] = v as u32;
            special[v] = u as u32;
        }
        let mut normal = BitMatrix::new(bound + 1);
        let mut normal_lists = vec![Vec::new(); bound + 1];
        let mut normal_edge_count = 0;
        for &(u, v) in normal_edges {
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            for w in [u, v] {
                if !present[w] {
                    return Err(GraphError::NotPerfectMatching(w));
                }
            }
            if special[u] as usize == v || normal.get(u, v) {
                continue;
            }
            normal.set_sym(u, v, true);
            normal_lists[u].push(v as u32);
            normal_lists[v].push(u as u32);
            normal_edge_count += 1;
        }
        for list in &mut normal_lists {
            list.sort_unstable();
        }
        Ok(ModifiedGraph {
            n: bound,
            bound,
            present,
            special,
            normal,
            added: BitMatrix::new(bound + 1),
            normal_lists,
            normal_edge_count,
        })
    }

    /// Number of agents of the underlying instance.
    pub fn agent_count(&self) -> usize {
        self.n
    }

    /// Largest possible vertex id.
    pub fn vertex_bound(&self) -> usize {
        self.bound
    }

    pub fn contains(&self, v: usize) -> bool {
        v >= 1 && v <= self.bound && self.present[v]
    }

    /// Present vertex ids, ascending.
    pub fn vertices(&self) -> impl Iterator<Item = usize> + '_ {
        (1..=self.bound).filter(|&v| self.present[v])
    }

    pub fn vertex_count(&self) -> usize {
        self.present.iter().filter(|&&p| p).count()
    }

    pub fn is_virtual(&self, v: usize) -> bool {
        v > self.n && self.contains(v)
    }

    pub fn virtual_count(&self) -> usize {
        self.vertices().filter(|&v| v > self.n).count()
    }

    /// # Panics
    ///
    /// Panics if `v` is not in the graph.
    pub fn special_partner(&self, v: usize) -> usize {
        assert!(self.contains(v), "vertex {v} is not in the graph");
        self.special[v] as usize
    }

    pub fn is_normal(&self, u: usize, v: usize) -> bool {
        self.contains(u) && self.contains(v) && self.normal.get(u, v)
    }

    /// Whether the normal edge `{u, v}` was inserted while building `G'`.
    pub fn is_added(&self, u: usize, v: usize) -> bool {
        self.is_normal(u, v) && self.added.get(u, v)
    }

    pub fn has_edge(&self, u: usize, v: usize, kind: EdgeKind) -> bool {
        match kind {
            EdgeKind::Special => self.contains(u) && self.special[u] as usize == v,
            EdgeKind::Normal => self.is_normal(u, v),
        }
    }

    /// Special partner as a one-element list, or sorted normal neighbours.
    pub fn neighbors(&self, v: usize, kind: EdgeKind) -> Result<Vec<usize>, GraphError> {
        if !self.contains(v) {
            return Err(GraphError::UnknownVertex(v));
        }
        Ok(match kind {
            EdgeKind::Special => vec![self.special[v] as usize],
            EdgeKind::Normal => self.normal_lists[v].iter().map(|&u| u as usize).collect(),
        })
    }

    pub(crate) fn normal_list(&self, v: usize) -> &[u32] {
        &self.normal_lists[v]
    }

    /// Normal edges `(u, v)` with `u < v`, ascending.
    pub fn normal_edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.vertices().flat_map(move |u| {
            self.normal_lists[u]
                .iter()
                .map(|&v| v as usize)
                .filter(move |&v| v > u)
                .map(move |v| (u, v))
        })
    }

    /// Special edges `(u, v)` with `u < v`, ascending.
    pub fn special_edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.vertices()
            .filter(move |&u| (self.special[u] as usize) > u)
            .map(move |u| (u, self.special[u] as usize))
    }

    pub fn normal_edge_count(&self) -> usize {
        self.normal_edge_count
    }

    /// Deletes normal edges. Special edges cannot be deleted.
    pub(crate) fn remove_normal_edges(&mut self, edges: &[(usize, usize)]) {
        let mut touched = Vec::with_capacity(edges.len() * 2);
        for &(u, v) in edges {
            if self.normal.get(u, v) {
                self.normal.set_sym(u, v, false);
                self.added.set_sym(u, v, false);
                self.normal_edge_count -= 1;
                touched.push(u);
                touched.push(v);
            }
        }
        touched.sort_unstable();
        touched.dedup();
        for u in touched {
            let normal = &self.normal;
            self.normal_lists[u].retain(|&v| normal.get(u, v as usize));
        }
    }

    /// DOT-like dump: special edges drawn doubled, normal edges single,
    /// added edges dashed.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph G_prime {\n");
        for v in self.vertices() {
            if self.is_virtual(v) {
                let _ = writeln!(out, "  {v} [shape=box];");
            } else {
                let _ = writeln!(out, "  {v};");
            }
        }
        for (u, v) in self.special_edges() {
            let _ = writeln!(out, "  {u} -- {v} [color=\"black:black\"];");
        }
        for (u, v) in self.normal_edges() {
            if self.added.get(u, v) {
                let _ = writeln!(out, "  {u} -- {v} [style=dashed];");
            } else {
                let _ = writeln!(out, "  {u} -- {v};");
            }
        }
        out.push_str("}\n");
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CycleError {
    #[error("an alternating cycle needs an even number of at least 4 vertices, got {0}")]
    BadLength(usize),
    #[error("vertex {0} appears twice")]
    Repeated(usize),
    #[error("missing {kind:?} edge {u} -- {v}")]
    MissingEdge { u: usize, v: usize, kind: EdgeKind },
}

/// A cycle in `G'` whose edges alternate special and normal.
///
/// Stored as `v0 -S- v1 -N- v2 -S- v3 ... -N- v0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlternatingCycle {
    vertices: Vec<usize>,
}

impl AlternatingCycle {
    /// Checks the alternation and membership invariants against `g`.
    pub fn new(vertices: Vec<usize>, g: &ModifiedGraph) -> Result<Self, CycleError> {
        let len = vertices.len();
        if len < 4 || !len.is_multiple_of(2) {
            return Err(CycleError::BadLength(len));
        }
        let mut sorted = vertices.clone();
        sorted.sort_unstable();
        if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
            return Err(CycleError::Repeated(w[0]));
        }
        let cycle = AlternatingCycle { vertices };
        for (u, v, kind) in cycle.edges() {
            if !g.has_edge(u, v, kind) {
                return Err(CycleError::MissingEdge { u, v, kind });
            }
        }
        Ok(cycle)
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Edges in cycle order, starting with the special edge `v0 -- v1`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, EdgeKind)> + '_ {
        let len = self.vertices.len();
        (0..len).map(move |k| {
            let kind = if k % 2 == 0 {
                EdgeKind::Special
            } else {
                EdgeKind::Normal
            };
            (self.vertices[k], self.vertices[(k + 1) % len], kind)
        })
    }

    /// The partner of `v` along the cycle's normal edge, if `v` is on it.
    pub fn normal_mate(&self, v: usize) -> Option<usize> {
        let len = self.vertices.len();
        let k = self.vertices.iter().position(|&u| u == v)?;
        Some(if k % 2 == 0 {
            self.vertices[(k + len - 1) % len]
        } else {
            self.vertices[(k + 1) % len]
        })
    }
}
