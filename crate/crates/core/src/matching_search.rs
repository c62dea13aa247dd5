//! Alternating-cycle search through a chosen matched edge.
//!
//! A matched edge `{s, t}` lies on an alternating cycle iff, once it is
//! unmatched, an augmenting path joins `t` to `s` avoiding that edge. The
//! search is Edmonds' blossom-shrinking BFS from a single root, `O(k^2 + m)`
//! on `k` vertices and `m` edges. Plain DFS over (vertex, parity) states is
//! not enough here because odd cycles can hide the path.

const NONE: u32 = u32::MAX;

/// Local graph: vertices `0..k`, `mate` a perfect matching, `adj` the
/// non-matching edges.
pub(crate) struct AlternatingSearch<'a> {
    adj: &'a [Vec<u32>],
    mate: Vec<u32>,
    parent: Vec<u32>,
    base: Vec<u32>,
    used: Vec<bool>,
    in_blossom: Vec<bool>,
    on_path: Vec<bool>,
    queue: Vec<u32>,
}

impl<'a> AlternatingSearch<'a> {
    pub(crate) fn new(adj: &'a [Vec<u32>], mate: &[u32]) -> Self {
        let k = adj.len();
        AlternatingSearch {
            adj,
            mate: mate.to_vec(),
            parent: vec![NONE; k],
            base: (0..k as u32).collect(),
            used: vec![false; k],
            in_blossom: vec![false; k],
            on_path: vec![false; k],
            queue: Vec::with_capacity(k),
        }
    }

    /// An alternating cycle `[s, t, x1, ..., xm]` with `s -- t` the matched
    /// edge and the closing edge `xm -- s` unmatched, or `None` if the
    /// matched edge `{s, t}` is in every perfect matching.
    pub(crate) fn cycle_through(&mut self, s: u32, t: u32) -> Option<Vec<u32>> {
        debug_assert_eq!(self.mate[s as usize], t);
        self.mate[s as usize] = NONE;
        self.mate[t as usize] = NONE;
        let found = self.augmenting_path(t, s);
        self.mate[s as usize] = t;
        self.mate[t as usize] = s;
        let path = found?;
        // path runs s, ..., t; the cycle starts with the matched edge s -- t
        let mut cycle = Vec::with_capacity(path.len());
        cycle.push(s);
        cycle.extend(path[1..].iter().rev());
        Some(cycle)
    }

    fn reset(&mut self) {
        self.parent.fill(NONE);
        self.used.fill(false);
        for (i, b) in self.base.iter_mut().enumerate() {
            *b = i as u32;
        }
        self.queue.clear();
    }

    fn lca(&mut self, mut a: u32, mut b: u32) -> u32 {
        self.on_path.fill(false);
        loop {
            a = self.base[a as usize];
            self.on_path[a as usize] = true;
            if self.mate[a as usize] == NONE {
                break;
            }
            a = self.parent[self.mate[a as usize] as usize];
        }
        loop {
            b = self.base[b as usize];
            if self.on_path[b as usize] {
                return b;
            }
            b = self.parent[self.mate[b as usize] as usize];
        }
    }

    fn mark_path(&mut self, mut v: u32, b: u32, mut child: u32) {
        while self.base[v as usize] != b {
            let m = self.mate[v as usize];
            self.in_blossom[self.base[v as usize] as usize] = true;
            self.in_blossom[self.base[m as usize] as usize] = true;
            self.parent[v as usize] = child;
            child = m;
            v = self.parent[m as usize];
        }
    }

    /// Augmenting path from exposed `root` to exposed `target`, listed from
    /// `target` back to `root`.
    fn augmenting_path(&mut self, root: u32, target: u32) -> Option<Vec<u32>> {
        self.reset();
        self.used[root as usize] = true;
        self.queue.push(root);
        let mut head = 0;
        while head < self.queue.len() {
            let v = self.queue[head];
            head += 1;
            for &to in &self.adj[v as usize] {
                if self.base[v as usize] == self.base[to as usize] || self.mate[v as usize] == to {
                    continue;
                }
                let to_mate = self.mate[to as usize];
                if to == root || (to_mate != NONE && self.parent[to_mate as usize] != NONE) {
                    let cur = self.lca(v, to);
                    self.in_blossom.fill(false);
                    self.mark_path(v, cur, to);
                    self.mark_path(to, cur, v);
                    for i in 0..self.adj.len() {
                        if self.in_blossom[self.base[i] as usize] {
                            self.base[i] = cur;
                            if !self.used[i] {
                                self.used[i] = true;
                                self.queue.push(i as u32);
                            }
                        }
                    }
                } else if self.parent[to as usize] == NONE {
                    self.parent[to as usize] = v;
                    if to_mate == NONE {
                        if to != target {
                            // only `root` and `target` are exposed
                            continue;
                        }
                        return Some(self.trace(to, root));
                    }
                    self.used[to_mate as usize] = true;
                    self.queue.push(to_mate);
                }
            }
        }
        None
    }

    fn trace(&self, target: u32, root: u32) -> Vec<u32> {
        let mut path = vec![target];
        let mut v = target;
        loop {
            let pv = self.parent[v as usize];
            path.push(pv);
            if pv == root {
                return path;
            }
            let ppv = self.mate[pv as usize];
            path.push(ppv);
            v = ppv;
        }
    }
}
