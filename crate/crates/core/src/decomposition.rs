//! Biconnected component (block) decomposition.
//!
//! Iterative lowpoint DFS with an edge stack, linear in vertices plus edges.
//! Vertex ids are arbitrary `usize` values; isolated vertices belong to no
//! block. Disconnected inputs are decomposed per component.

use thiserror::Error;

use crate::graph::EdgeKind;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecompositionError {
    #[error("self-loop at vertex {0}")]
    SelfLoopPresent(usize),
}

/// A maximal subgraph without a cut-vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Block {
    /// Sorted ascending.
    pub vertices: Vec<usize>,
    /// In input order.
    pub edges: Vec<(usize, usize, EdgeKind)>,
}

impl Block {
    pub fn is_trivial(&self) -> bool {
        is_trivial(self)
    }

    pub fn contains(&self, v: usize) -> bool {
        self.vertices.binary_search(&v).is_ok()
    }
}

/// A block with exactly two vertices.
pub fn is_trivial(block: &Block) -> bool {
    block.vertices.len() == 2
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    /// Ordered by the smallest input edge index each block contains.
    pub blocks: Vec<Block>,
    /// Vertices lying in two or more blocks, ascending.
    pub cut_vertices: Vec<usize>,
    // indexed by vertex id
    membership: Vec<Vec<usize>>,
}

impl Decomposition {
    pub(crate) fn from_blocks(blocks: Vec<Block>) -> Self {
        let bound = blocks
            .iter()
            .flat_map(|b| b.vertices.last().copied())
            .max()
            .map_or(0, |m| m + 1);
        let mut membership = vec![Vec::new(); bound];
        for (k, block) in blocks.iter().enumerate() {
            for &v in &block.vertices {
                membership[v].push(k);
            }
        }
        let cut_vertices = (0..bound).filter(|&v| membership[v].len() >= 2).collect();
        Decomposition {
            blocks,
            cut_vertices,
            membership,
        }
    }

    /// Indices of the blocks containing `v`, ascending.
    pub fn blocks_of(&self, v: usize) -> &[usize] {
        self.membership.get(v).map_or(&[], Vec::as_slice)
    }

    pub fn all_trivial(&self) -> bool {
        self.blocks.iter().all(Block::is_trivial)
    }
}

/// Decomposes the undirected simple graph given by `edges` into blocks.
pub fn biconnected_components(
    edges: &[(usize, usize, EdgeKind)],
) -> Result<Decomposition, DecompositionError> {
    if let Some(&(u, _, _)) = edges.iter().find(|&&(u, v, _)| u == v) {
        return Err(DecompositionError::SelfLoopPresent(u));
    }
    let bound = edges
        .iter()
        .map(|&(u, v, _)| u.max(v) + 1)
        .max()
        .unwrap_or(0);
    let pairs: Vec<(u32, u32)> = edges
        .iter()
        .map(|&(u, v, _)| (u as u32, v as u32))
        .collect();
    let mut finder = BlockFinder::new(bound);
    let blocks = finder
        .edge_blocks(&pairs)
        .into_iter()
        .map(|ids| {
            let block_edges: Vec<_> = ids.iter().map(|&e| edges[e as usize]).collect();
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
    Ok(Decomposition::from_blocks(blocks))
}

const UNSEEN: u32 = u32::MAX;

/// Reusable scratch space for repeated decompositions over a fixed id range.
///
/// Each call touches memory proportional to the edges it is given, so many
/// small calls stay cheap.
pub(crate) struct BlockFinder {
    local: Vec<u32>,
    // per local vertex
    ids: Vec<u32>,
    disc: Vec<u32>,
    low: Vec<u32>,
    offsets: Vec<u32>,
    // CSR: (neighbour, edge index)
    adjacency: Vec<(u32, u32)>,
}

struct Frame {
    vertex: u32,
    parent_edge: u32,
    next: u32,
}

impl BlockFinder {
    pub(crate) fn new(vertex_bound: usize) -> Self {
        BlockFinder {
            local: vec![UNSEEN; vertex_bound],
            ids: Vec::new(),
            disc: Vec::new(),
            low: Vec::new(),
            offsets: Vec::new(),
            adjacency: Vec::new(),
        }
    }

    /// Blocks as lists of ascending edge indices, ordered by their smallest
    /// edge index. Edges must not be self-loops.
    pub(crate) fn edge_blocks(&mut self, edges: &[(u32, u32)]) -> Vec<Vec<u32>> {
        self.ids.clear();
        for &(u, v) in edges {
            for w in [u, v] {
                if self.local[w as usize] == UNSEEN {
                    self.local[w as usize] = self.ids.len() as u32;
                    self.ids.push(w);
                }
            }
        }
        let count = self.ids.len();

        self.offsets.clear();
        self.offsets.resize(count + 1, 0);
        for &(u, v) in edges {
            self.offsets[self.local[u as usize] as usize + 1] += 1;
            self.offsets[self.local[v as usize] as usize + 1] += 1;
        }
        for k in 0..count {
            self.offsets[k + 1] += self.offsets[k];
        }
        self.adjacency.clear();
        self.adjacency.resize(edges.len() * 2, (0, 0));
        let mut fill: Vec<u32> = self.offsets[..count].to_vec();
        for (e, &(u, v)) in edges.iter().enumerate() {
            let (lu, lv) = (self.local[u as usize], self.local[v as usize]);
            self.adjacency[fill[lu as usize] as usize] = (lv, e as u32);
            fill[lu as usize] += 1;
            self.adjacency[fill[lv as usize] as usize] = (lu, e as u32);
            fill[lv as usize] += 1;
        }

        self.disc.clear();
        self.disc.resize(count, UNSEEN);
        self.low.clear();
        self.low.resize(count, 0);

        let mut blocks = Vec::new();
        let mut edge_stack: Vec<u32> = Vec::new();
        let mut frames: Vec<Frame> = Vec::new();
        let mut time = 0u32;
        for root in 0..count as u32 {
            if self.disc[root as usize] != UNSEEN {
                continue;
            }
            self.disc[root as usize] = time;
            self.low[root as usize] = time;
            time += 1;
            frames.push(Frame {
                vertex: root,
                parent_edge: UNSEEN,
                next: self.offsets[root as usize],
            });
            while let Some(top) = frames.last_mut() {
                let v = top.vertex as usize;
                if top.next < self.offsets[v + 1] {
                    let (w, e) = self.adjacency[top.next as usize];
                    top.next += 1;
                    if e == top.parent_edge {
                        continue;
                    }
                    let w = w as usize;
                    if self.disc[w] == UNSEEN {
                        self.disc[w] = time;
                        self.low[w] = time;
                        time += 1;
                        edge_stack.push(e);
                        frames.push(Frame {
                            vertex: w as u32,
                            parent_edge: e,
                            next: self.offsets[w],
                        });
                    } else if self.disc[w] < self.disc[v] {
                        edge_stack.push(e);
                        self.low[v] = self.low[v].min(self.disc[w]);
                    }
                } else {
                    let done = frames.pop().expect("frame present");
                    if let Some(parent) = frames.last() {
                        let u = parent.vertex as usize;
                        self.low[u] = self.low[u].min(self.low[v]);
                        if self.low[v] >= self.disc[u] {
                            let mut block = Vec::new();
                            while let Some(e) = edge_stack.pop() {
                                block.push(e);
                                if e == done.parent_edge {
                                    break;
                                }
                            }
                            block.sort_unstable();
                            blocks.push(block);
                        }
                    }
                }
            }
        }

        for &w in &self.ids {
            self.local[w as usize] = UNSEEN;
        }
        blocks.sort_unstable_by_key(|b: &Vec<u32>| b[0]);
        blocks
    }
}
