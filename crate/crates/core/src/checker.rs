//! Iterative biconnected component decomposition and witness construction.
//!
//! After irrational pairs are ruled out, the modified graph `G'` has an
//! alternating cycle iff the matching is inefficient. The reduction
//! repeatedly decomposes `G'` into blocks and deletes, inside each block,
//! the edges of every vertex whose special edge lies in another block. At
//! the fixed point each vertex sits in exactly one block together with its
//! special edge, and a non-trivial block exists iff `G'` has an alternating
//! cycle.

use thiserror::Error;

use crate::decomposition::{Block, BlockFinder, Decomposition};
use crate::graph::{
    build_graph, build_modified_graph, AlternatingCycle, CycleError, EdgeKind, EfficiencyGraph,
    ModifiedGraph,
};
use crate::matching_search::AlternatingSearch;
use crate::model::{find_irrational_pairs, AgentId, Cause, Instance, Matching, Verdict};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CheckError {
    #[error("no alternating cycle in a non-trivial fixed-point block")]
    NoCycleFound,
    #[error("invalid alternating cycle: {0}")]
    InvalidCycle(#[from] CycleError),
    #[error("block is trivial and cannot hold an alternating cycle")]
    TrivialBlock,
    #[error("vertex {0} has its special edge outside the block")]
    NotAtFixedPoint(usize),
    #[error("no irrational pairs given")]
    EmptyPairList,
    #[error("agents {0} and {1} are not matched to each other")]
    NotMatched(usize, usize),
    #[error("cycle assigns agent {0} inconsistently")]
    InconsistentWitness(usize),
}

/// One eviction of `vertex` from a block during pass `pass` (1-based).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Removal {
    pub pass: usize,
    pub vertex: usize,
}

/// `G'` after the reduction deleted some of its normal edges.
#[derive(Debug, Clone)]
pub struct ReducedGraph {
    pub graph: ModifiedGraph,
    pub removals: Vec<Removal>,
    /// Normal edges deleted by each pass; the last entry is always zero.
    pub deleted_per_pass: Vec<usize>,
    /// Normal edge count before the first pass.
    pub initial_normal_edges: usize,
}

impl ReducedGraph {
    /// Number of decomposition passes, including the final one that deleted nothing.
    pub fn passes(&self) -> usize {
        self.deleted_per_pass.len()
    }

    /// Normal edge count before each pass, followed by the final count.
    pub fn normal_edge_history(&self) -> Vec<usize> {
        let mut counts = vec![self.initial_normal_edges];
        for &d in &self.deleted_per_pass {
            let last = *counts.last().unwrap_or(&0);
            counts.push(last - d);
        }
        counts
    }

    /// Vertices evicted during `pass`, ascending and deduplicated.
    pub fn removed_in_pass(&self, pass: usize) -> Vec<usize> {
        let mut v: Vec<usize> = self
            .removals
            .iter()
            .filter(|r| r.pass == pass)
            .map(|r| r.vertex)
            .collect();
        v.sort_unstable();
        v.dedup();
        v
    }
}

/// Runs decompose-and-evict passes until one deletes nothing.
///
/// Only the remainders of blocks that lost edges are decomposed again:
/// every block of the reduced graph lies inside a single block of the
/// graph it came from.
pub fn reduce_to_fixed_point(g2: &ModifiedGraph) -> (ReducedGraph, Decomposition) {
    let bound = g2.vertex_bound();
    let mut edges: Vec<(u32, u32)> = Vec::new();
    let mut kinds: Vec<EdgeKind> = Vec::new();
    for (u, v) in g2.special_edges() {
        edges.push((u as u32, v as u32));
        kinds.push(EdgeKind::Special);
    }
    for (u, v) in g2.normal_edges() {
        edges.push((u as u32, v as u32));
        kinds.push(EdgeKind::Normal);
    }

    let mut graph = g2.clone();
    let mut finder = BlockFinder::new(bound + 1);
    // block id (into `blocks`) holding each vertex's special edge
    let mut special_block = vec![u32::MAX; bound + 1];
    let mut blocks: Vec<Vec<u32>> = Vec::new();
    let mut settled: Vec<u32> = Vec::new();
    let mut removals = Vec::new();
    let mut deleted_per_pass = Vec::new();
    let mut mark = vec![false; bound + 1];

    let mut pending: Vec<Vec<u32>> = vec![(0..edges.len() as u32).collect()];
    let mut local_edges: Vec<(u32, u32)> = Vec::new();
    while !pending.is_empty() {
        let pass = deleted_per_pass.len() + 1;
        let first_new = blocks.len();
        for group in &pending {
            local_edges.clear();
            local_edges.extend(group.iter().map(|&e| edges[e as usize]));
            for local_block in finder.edge_blocks(&local_edges) {
                let id = blocks.len() as u32;
                let block: Vec<u32> = local_block.iter().map(|&k| group[k as usize]).collect();
                for &e in &block {
                    if kinds[e as usize] == EdgeKind::Special {
                        let (u, v) = edges[e as usize];
                        special_block[u as usize] = id;
                        special_block[v as usize] = id;
                    }
                }
                blocks.push(block);
            }
        }

        let mut next = Vec::new();
        let mut doomed_pairs = Vec::new();
        for (id, block) in blocks.iter().enumerate().skip(first_new) {
            let id32 = id as u32;
            let outside = |w: u32| special_block[w as usize] != id32;
            let mut kept = Vec::with_capacity(block.len());
            let mut doomed = 0;
            for &e in block {
                let (u, v) = edges[e as usize];
                if kinds[e as usize] == EdgeKind::Normal && (outside(u) || outside(v)) {
                    doomed_pairs.push((u as usize, v as usize));
                    doomed += 1;
                    for w in [u, v] {
                        if outside(w) && !mark[w as usize] {
                            mark[w as usize] = true;
                            removals.push(Removal {
                                pass,
                                vertex: w as usize,
                            });
                        }
                    }
                } else {
                    kept.push(e);
                }
            }
            for &e in block {
                let (u, v) = edges[e as usize];
                mark[u as usize] = false;
                mark[v as usize] = false;
            }
            if doomed == 0 {
                settled.push(id32);
            } else if !kept.is_empty() {
                next.push(kept);
            }
        }
        graph.remove_normal_edges(&doomed_pairs);
        deleted_per_pass.push(doomed_pairs.len());
        pending = next;
    }
    if deleted_per_pass.last() != Some(&0) {
        // The last pass emptied every remainder; the next pass would have
        // nothing to decompose and delete nothing.
        deleted_per_pass.push(0);
    }

    settled.sort_unstable_by_key(|&id| blocks[id as usize][0]);
    let final_blocks = settled
        .iter()
        .map(|&id| {
            let block_edges: Vec<(usize, usize, EdgeKind)> = blocks[id as usize]
                .iter()
                .map(|&e| {
                    let (u, v) = edges[e as usize];
                    (u as usize, v as usize, kinds[e as usize])
                })
                .collect();
            let mut vertices: Vec<usize> =
                block_edges.iter().flat_map(|&(u, v, _)| [u, v]).collect();
            vertices.sort_unstable();
            vertices.dedup();
            Block {
                vertices,
                edges: block_edges,
            }
        })
        .collect();

    let reduced = ReducedGraph {
        graph,
        removals,
        deleted_per_pass,
        initial_normal_edges: g2.normal_edge_count(),
    };
    (reduced, Decomposition::from_blocks(final_blocks))
}

/// Finds an alternating cycle inside a non-trivial fixed-point block.
///
/// Matched edges of the block are tried in order of their smaller endpoint;
/// for each, an augmenting-path search looks for a way around it.
pub fn extract_alternating_cycle(
    reduced: &ReducedGraph,
    block: &Block,
) -> Result<AlternatingCycle, CheckError> {
    if block.is_trivial() {
        return Err(CheckError::TrivialBlock);
    }
    let k = block.vertices.len();
    let local = |v: usize| {
        block
            .vertices
            .binary_search(&v)
            .expect("edge endpoint in block") as u32
    };
    let mut adj = vec![Vec::new(); k];
    let mut mate = vec![u32::MAX; k];
    let mut specials = Vec::new();
    for &(u, v, kind) in &block.edges {
        let (lu, lv) = (local(u), local(v));
        match kind {
            EdgeKind::Special => {
                mate[lu as usize] = lv;
                mate[lv as usize] = lu;
                specials.push((lu.min(lv), lu.max(lv)));
            }
            EdgeKind::Normal => {
                adj[lu as usize].push(lv);
                adj[lv as usize].push(lu);
            }
        }
    }
    if let Some(lv) = mate.iter().position(|&m| m == u32::MAX) {
        return Err(CheckError::NotAtFixedPoint(block.vertices[lv]));
    }
    specials.sort_unstable();

    let mut search = AlternatingSearch::new(&adj, &mate);
    for (s, t) in specials {
        if let Some(cycle) = search.cycle_through(s, t) {
            let vertices = cycle.iter().map(|&l| block.vertices[l as usize]).collect();
            return Ok(AlternatingCycle::new(vertices, &reduced.graph)?);
        }
    }
    Err(CheckError::NoCycleFound)
}

/// Turns an alternating cycle of `G'` into a Pareto improvement of `matching`.
///
/// Each real agent on the cycle takes its normal-edge neighbour when that
/// edge is an edge of `G`, and is left alone otherwise. Agents off the cycle
/// keep their partners.
pub fn improve_from_cycle(
    matching: &Matching,
    cycle: &AlternatingCycle,
    g: &EfficiencyGraph,
) -> Result<Matching, CheckError> {
    let n = g.n();
    let is_virtual = |v: usize| v > n;
    let agent = |v: usize| AgentId::new(v);
    for (u, v, kind) in cycle.edges() {
        let valid = match (kind, is_virtual(u), is_virtual(v)) {
            (_, _, _) if u == 0 || v == 0 || u > 2 * n || v > 2 * n => false,
            (EdgeKind::Special, false, false) => g.special_partner(agent(u)) == agent(v),
            (EdgeKind::Special, false, true) => v == u + n && g.has_special_loop(agent(u)),
            (EdgeKind::Special, true, false) => u == v + n && g.has_special_loop(agent(v)),
            (EdgeKind::Special, true, true) => false,
            (EdgeKind::Normal, false, false) => {
                g.is_normal(agent(u), agent(v))
                    || (g.has_normal_loop(agent(u)) && g.has_normal_loop(agent(v)))
            }
            (EdgeKind::Normal, false, true) => g.has_normal_loop(agent(u)),
            (EdgeKind::Normal, true, false) => g.has_normal_loop(agent(v)),
            (EdgeKind::Normal, true, true) => true,
        };
        if !valid {
            return Err(CycleError::MissingEdge { u, v, kind }.into());
        }
    }

    let mut partner: Vec<u32> = (0..n).map(|i| matching.partner_idx(i) as u32).collect();
    for &v in cycle.vertices() {
        if is_virtual(v) {
            continue;
        }
        let mate = cycle.normal_mate(v).expect("vertex on cycle");
        partner[v - 1] = if !is_virtual(mate) && g.is_normal(agent(v), agent(mate)) {
            (mate - 1) as u32
        } else {
            (v - 1) as u32
        };
    }
    if let Some(i) = (0..n).find(|&i| partner[partner[i] as usize] as usize != i) {
        return Err(CheckError::InconsistentWitness(i + 1));
    }
    Ok(Matching::from_indices(partner))
}

/// Dissolves every listed pair.
pub fn improve_from_irrational(
    matching: &Matching,
    pairs: &[(AgentId, AgentId)],
) -> Result<Matching, CheckError> {
    if pairs.is_empty() {
        return Err(CheckError::EmptyPairList);
    }
    let mut partner: Vec<u32> = (0..matching.len())
        .map(|i| matching.partner_idx(i) as u32)
        .collect();
    for &(i, j) in pairs {
        if i == j || matching.partner(i) != j {
            return Err(CheckError::NotMatched(i.get(), j.get()));
        }
        partner[i.index()] = i.index() as u32;
        partner[j.index()] = j.index() as u32;
    }
    Ok(Matching::from_indices(partner))
}

/// Work done by one [`check_with_stats`] call.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct CheckStats {
    /// Reduction passes; zero when an irrational pair settled the verdict.
    pub passes: usize,
    pub vertices: usize,
    pub initial_normal_edges: usize,
    pub final_normal_edges: usize,
}

/// Decides whether `instance.matching` is Pareto efficient.
pub fn check(instance: &Instance) -> Result<Verdict, CheckError> {
    check_with_stats(instance).map(|(verdict, _)| verdict)
}

pub fn check_with_stats(instance: &Instance) -> Result<(Verdict, CheckStats), CheckError> {
    let pairs = find_irrational_pairs(instance);
    if !pairs.is_empty() {
        let witness = improve_from_irrational(&instance.matching, &pairs)?;
        debug_assert!(crate::model::pareto_dominates(
            &instance.profile,
            &witness,
            &instance.matching
        ));
        let verdict = Verdict::Inefficient {
            witness,
            cause: Cause::IrrationalPairs(pairs),
        };
        return Ok((verdict, CheckStats::default()));
    }

    let g = build_graph(instance);
    let g2 = build_modified_graph(&g);
    let (reduced, decomposition) = reduce_to_fixed_point(&g2);
    let stats = CheckStats {
        passes: reduced.passes(),
        vertices: g2.vertex_count(),
        initial_normal_edges: reduced.initial_normal_edges,
        final_normal_edges: reduced.graph.normal_edge_count(),
    };

    let Some(block) = decomposition
        .blocks
        .iter()
        .filter(|b| !b.is_trivial())
        .min_by_key(|b| b.vertices[0])
    else {
        return Ok((Verdict::Efficient, stats));
    };
    let cycle = extract_alternating_cycle(&reduced, block)?;
    let witness = improve_from_cycle(&instance.matching, &cycle, &g)?;
    debug_assert!(crate::model::pareto_dominates(
        &instance.profile,
        &witness,
        &instance.matching
    ));
    let verdict = Verdict::Inefficient {
        witness,
        cause: Cause::AlternatingCycle(cycle),
    };
    Ok((verdict, stats))
}
