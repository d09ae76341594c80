//! Oriented trees: rooted trees in which every edge carries a direction,
//! either away from the root or toward it.
//!
//! The parent array is the single source of truth; children lists and
//! levels are derived at construction. Vertex ids are `0..m` and the root
//! may be any vertex. A tree is *out-directed* when every edge points
//! away from the root, *in-directed* when every edge points toward it.

use crate::bitset::VertexSet;
use crate::rng::{rng_from_seed, uniform_below, BitStream};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

/// Direction of the edge between a vertex and its parent.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum EdgeDir {
    /// Edge points parent -> child (away from the root).
    Away,
    /// Edge points child -> parent (toward the root).
    Toward,
}

/// How a random tree's edges are directed.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum TreeOrientation {
    /// Each edge direction is a fair coin.
    Uniform,
    /// All edges away from the root.
    Out,
    /// All edges toward the root.
    In,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TreeError {
    #[error("tree must have exactly one root, found {0}")]
    RootCount(usize),
    #[error("parent id {parent} of vertex {vertex} is out of range")]
    ParentRange { vertex: usize, parent: usize },
    #[error("parent links do not form a tree (cycle or disconnection)")]
    NotATree,
}

#[derive(Clone, PartialEq, Eq)]
pub struct OrientedTree {
    /// `parent[v]` is `None` exactly for the root.
    parent: Vec<Option<(usize, EdgeDir)>>,
    children: Vec<Vec<usize>>,
    level: Vec<usize>,
    root: usize,
}

impl OrientedTree {
    /// Builds and validates a tree from parent links.
    pub fn new(parent: Vec<Option<(usize, EdgeDir)>>) -> Result<Self, TreeError> {
        let m = parent.len();
        let roots: Vec<usize> = (0..m).filter(|&v| parent[v].is_none()).collect();
        if roots.len() != 1 {
            return Err(TreeError::RootCount(roots.len()));
        }
        let root = roots[0];
        let mut children = vec![Vec::new(); m];
        for v in 0..m {
            if let Some((p, _)) = parent[v] {
                if p >= m || p == v {
                    return Err(TreeError::ParentRange { vertex: v, parent: p });
                }
                children[p].push(v);
            }
        }
        // Reachability from the root proves acyclicity and connectivity.
        let mut level = vec![usize::MAX; m];
        level[root] = 0;
        let mut queue = vec![root];
        let mut seen = 1;
        while let Some(v) = queue.pop() {
            for &c in &children[v] {
                debug_assert_eq!(level[c], usize::MAX);
                level[c] = level[v] + 1;
                seen += 1;
                queue.push(c);
            }
        }
        if seen != m {
            return Err(TreeError::NotATree);
        }
        Ok(OrientedTree { parent, children, level, root })
    }

    /// Single vertex.
    pub fn singleton() -> Self {
        Self::new(vec![None]).unwrap()
    }

    /// The path `0 -> 1 -> ... -> m-1`, rooted at 0.
    pub fn out_path(m: usize) -> Self {
        assert!(m >= 1);
        let parent = (0..m)
            .map(|v| if v == 0 { None } else { Some((v - 1, EdgeDir::Away)) })
            .collect();
        Self::new(parent).unwrap()
    }

    /// The path `m-1 -> ... -> 1 -> 0`, rooted at 0.
    pub fn in_path(m: usize) -> Self {
        assert!(m >= 1);
        let parent = (0..m)
            .map(|v| if v == 0 { None } else { Some((v - 1, EdgeDir::Toward)) })
            .collect();
        Self::new(parent).unwrap()
    }

    /// Root 0 with `m - 1` out-children.
    pub fn out_star(m: usize) -> Self {
        assert!(m >= 1);
        let parent = (0..m)
            .map(|v| if v == 0 { None } else { Some((0, EdgeDir::Away)) })
            .collect();
        Self::new(parent).unwrap()
    }

    #[inline]
    pub fn m(&self) -> usize {
        self.parent.len()
    }

    #[inline]
    pub fn root(&self) -> usize {
        self.root
    }

    #[inline]
    pub fn parent_of(&self, v: usize) -> Option<(usize, EdgeDir)> {
        self.parent[v]
    }

    #[inline]
    pub fn children(&self, v: usize) -> &[usize] {
        &self.children[v]
    }

    /// Distance from the root.
    #[inline]
    pub fn level(&self, v: usize) -> usize {
        self.level[v]
    }

    pub fn underlying_degree(&self, v: usize) -> usize {
        self.children[v].len() + usize::from(self.parent[v].is_some())
    }

    /// Oriented edges as `(tail, head)` pairs, one per non-root vertex.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.m()).filter_map(move |v| {
            self.parent[v].map(|(p, dir)| match dir {
                EdgeDir::Away => (p, v),
                EdgeDir::Toward => (v, p),
            })
        })
    }

    /// Out-degree of `v` inside the tree (oriented edges leaving `v`).
    pub fn out_degree(&self, v: usize) -> usize {
        let from_children = self
            .children[v]
            .iter()
            .filter(|&&c| matches!(self.parent[c], Some((_, EdgeDir::Away))))
            .count();
        let from_parent = matches!(self.parent[v], Some((_, EdgeDir::Toward))) as usize;
        from_children + from_parent
    }

    pub fn in_degree(&self, v: usize) -> usize {
        self.underlying_degree(v) - self.out_degree(v)
    }

    /// Vertices of underlying degree exactly 1. For a single-vertex tree
    /// this is empty: the isolated root has degree 0.
    pub fn leaves(&self) -> Vec<usize> {
        (0..self.m()).filter(|&v| self.underlying_degree(v) == 1).collect()
    }

    /// Vertices of underlying degree at least 3.
    pub fn branching_vertices(&self) -> Vec<usize> {
        (0..self.m()).filter(|&v| self.underlying_degree(v) >= 3).collect()
    }

    pub fn is_out_directed(&self) -> bool {
        (0..self.m()).all(|v| !matches!(self.parent[v], Some((_, EdgeDir::Toward))))
    }

    pub fn is_in_directed(&self) -> bool {
        (0..self.m()).all(|v| !matches!(self.parent[v], Some((_, EdgeDir::Away))))
    }

    /// True when the underlying tree is a path and all edges point the
    /// same way along it.
    pub fn is_directed_path(&self) -> bool {
        if self.m() == 1 {
            return true;
        }
        if self.branching_vertices().is_empty() {
            // A path rooted anywhere; directed iff one endpoint reaches the
            // other along consistently oriented edges.
            let seq = self.path_sequence();
            seq.is_some()
        } else {
            false
        }
    }

    /// For a tree whose underlying graph is a path: the vertices in order
    /// from the source end to the sink end, provided every edge points
    /// forward along the path. `None` if edges disagree or the tree
    /// branches.
    pub fn path_sequence(&self) -> Option<Vec<usize>> {
        let m = self.m();
        if m == 1 {
            return Some(vec![0]);
        }
        if !self.branching_vertices().is_empty() {
            return None;
        }
        // Walk the underlying path from one endpoint.
        let ends = self.leaves();
        debug_assert_eq!(ends.len(), 2);
        let mut order = Vec::with_capacity(m);
        let mut prev = usize::MAX;
        let mut cur = ends[0];
        loop {
            order.push(cur);
            let mut next = None;
            if let Some((p, _)) = self.parent[cur] {
                if p != prev {
                    next = Some(p);
                }
            }
            for &c in &self.children[cur] {
                if c != prev {
                    debug_assert!(next.is_none());
                    next = Some(c);
                }
            }
            match next {
                Some(nx) => {
                    prev = cur;
                    cur = nx;
                }
                None => break,
            }
        }
        debug_assert_eq!(order.len(), m);
        let forward = order.windows(2).all(|w| self.oriented_edge(w[0], w[1]));
        if forward {
            return Some(order);
        }
        let backward = order.windows(2).all(|w| self.oriented_edge(w[1], w[0]));
        if backward {
            order.reverse();
            return Some(order);
        }
        None
    }

    /// True when the tree has the oriented edge `tail -> head`.
    pub fn oriented_edge(&self, tail: usize, head: usize) -> bool {
        match self.parent[head] {
            Some((p, EdgeDir::Away)) if p == tail => return true,
            _ => {}
        }
        matches!(self.parent[tail], Some((p, EdgeDir::Toward)) if p == head)
    }

    /// Root-first order with children visited in increasing id.
    pub fn bfs_order(&self) -> Vec<usize> {
        let mut order = Vec::with_capacity(self.m());
        let mut queue = std::collections::VecDeque::new();
        queue.push_back(self.root);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            for &c in &self.children[v] {
                queue.push_back(c);
            }
        }
        order
    }

    /// Preorder depth-first walk, children in increasing id.
    pub fn dfs_preorder(&self) -> Vec<usize> {
        let mut order = Vec::with_capacity(self.m());
        let mut stack = vec![self.root];
        while let Some(v) = stack.pop() {
            order.push(v);
            for &c in self.children[v].iter().rev() {
                stack.push(c);
            }
        }
        order
    }

    /// Self-inclusive descendant counts: `counts[v]` is the size of the
    /// subtree below (and including) `v`.
    pub fn descendant_counts(&self) -> Vec<usize> {
        let mut counts = vec![1usize; self.m()];
        for &v in self.bfs_order().iter().rev() {
            if let Some((p, _)) = self.parent[v] {
                counts[p] += counts[v];
            }
        }
        counts
    }

    /// Vertices of the subtree rooted at `v`, in BFS order.
    pub fn subtree_vertices(&self, v: usize) -> Vec<usize> {
        let mut order = vec![v];
        let mut i = 0;
        while i < order.len() {
            let u = order[i];
            i += 1;
            order.extend_from_slice(&self.children[u]);
        }
        order
    }

    /// The `k`-core: vertices whose self-inclusive descendant count
    /// exceeds `m / k`. The comparison is `count * k > m`; for `k >= 1`
    /// the root always qualifies, so the core is a nonempty top part of
    /// the tree (membership is inherited upward).
    pub fn k_core(&self, k: f64) -> VertexSet {
        assert!(k > 1.0, "k_core needs k > 1");
        let m = self.m();
        let counts = self.descendant_counts();
        VertexSet::from_iter(
            m,
            (0..m).filter(|&v| counts[v] as f64 * k > m as f64),
        )
    }

    /// Relabels the subtree induced by `keep` as a standalone tree.
    ///
    /// Exactly one kept vertex may lack a kept parent (it becomes the
    /// root); otherwise the selection is a forest and the result is
    /// `None`. New ids follow ascending old ids; the returned map sends
    /// new id to old id.
    pub fn induced(&self, keep: &VertexSet) -> Option<(OrientedTree, Vec<usize>)> {
        let old_ids: Vec<usize> = keep.iter().collect();
        if old_ids.is_empty() {
            return None;
        }
        let mut new_id = vec![usize::MAX; self.m()];
        for (new, &old) in old_ids.iter().enumerate() {
            new_id[old] = new;
        }
        let mut roots = 0;
        let parent = old_ids
            .iter()
            .map(|&old| match self.parent[old] {
                Some((p, dir)) if keep.contains(p) => Some((new_id[p], dir)),
                _ => {
                    roots += 1;
                    None
                }
            })
            .collect();
        if roots != 1 {
            return None;
        }
        let tree = OrientedTree::new(parent).ok()?;
        Some((tree, old_ids))
    }

    /// The same tree with every edge direction flipped.
    pub fn reversed(&self) -> OrientedTree {
        let parent = self
            .parent
            .iter()
            .map(|slot| {
                slot.map(|(p, dir)| {
                    let flipped = match dir {
                        EdgeDir::Away => EdgeDir::Toward,
                        EdgeDir::Toward => EdgeDir::Away,
                    };
                    (p, flipped)
                })
            })
            .collect();
        Self::new(parent).unwrap()
    }

    // =====================================================================
    // Random generation
    // =====================================================================

    /// Uniformly random labeled tree on `m` vertices, rooted at 0, with
    /// edge directions per `mode`.
    ///
    /// The shape comes from a uniform Prüfer sequence (so every labeled
    /// tree is equally likely); `Uniform` mode then draws one fair bit per
    /// non-root vertex in increasing id order, a set bit meaning the edge
    /// to the parent points away from the root.
    pub fn random(m: usize, mode: TreeOrientation, seed: u64) -> Self {
        assert!(m >= 1);
        let mut rng = rng_from_seed(seed);
        let adjacency = random_tree_adjacency(m, &mut rng);
        Self::from_adjacency_rooted(m, &adjacency, 0, mode, &mut rng)
    }

    /// Random tree with at most `max_leaves` leaves: a small random
    /// skeleton with few leaves, then random edge subdivisions up to `m`
    /// vertices (subdividing never changes the leaf count). Used to fuzz
    /// decompositions whose preconditions cap the leaf count.
    pub fn random_with_max_leaves(
        m: usize,
        max_leaves: usize,
        mode: TreeOrientation,
        seed: u64,
    ) -> Self {
        assert!(m >= 1 && max_leaves >= 2);
        let mut rng = rng_from_seed(seed);
        if m <= 2 {
            let adjacency = random_tree_adjacency(m, &mut rng);
            return Self::from_adjacency_rooted(m, &adjacency, 0, mode, &mut rng);
        }
        // Skeleton: retry small random trees until the leaf budget holds;
        // a plain path always qualifies as the fallback.
        let max_skeleton = m.min(3 * max_leaves).max(2);
        let mut skeleton: Option<Vec<Vec<usize>>> = None;
        for _ in 0..64 {
            let s = 2 + uniform_below(&mut rng, (max_skeleton - 1) as u64) as usize;
            let adj = random_tree_adjacency(s, &mut rng);
            let leaf_count = adj.iter().filter(|nb| nb.len() == 1).count();
            if leaf_count <= max_leaves {
                skeleton = Some(adj);
                break;
            }
        }
        let skeleton = skeleton.unwrap_or_else(|| {
            let s = max_skeleton;
            let mut adj = vec![Vec::new(); s];
            for v in 1..s {
                adj[v - 1].push(v);
                adj[v].push(v - 1);
            }
            adj
        });
        let s = skeleton.len();
        // Spread the remaining vertices over the skeleton edges.
        let mut edges: Vec<(usize, usize)> = Vec::new();
        for v in 0..s {
            for &w in &skeleton[v] {
                if v < w {
                    edges.push((v, w));
                }
            }
        }
        let mut extra = vec![0usize; edges.len()];
        for _ in 0..m - s {
            let e = uniform_below(&mut rng, edges.len() as u64) as usize;
            extra[e] += 1;
        }
        let mut adjacency = vec![Vec::new(); m];
        let mut next_id = s;
        let link = |adj: &mut Vec<Vec<usize>>, a: usize, b: usize| {
            adj[a].push(b);
            adj[b].push(a);
        };
        for (e, &(a, b)) in edges.iter().enumerate() {
            let mut prev = a;
            for _ in 0..extra[e] {
                link(&mut adjacency, prev, next_id);
                prev = next_id;
                next_id += 1;
            }
            link(&mut adjacency, prev, b);
        }
        debug_assert_eq!(next_id, m);
        Self::from_adjacency_rooted(m, &adjacency, 0, mode, &mut rng)
    }

    fn from_adjacency_rooted(
        m: usize,
        adjacency: &[Vec<usize>],
        root: usize,
        mode: TreeOrientation,
        rng: &mut ChaCha8Rng,
    ) -> Self {
        let mut parent_id = vec![usize::MAX; m];
        parent_id[root] = root;
        let mut queue = std::collections::VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            let mut nb = adjacency[v].clone();
            nb.sort_unstable();
            for w in nb {
                if parent_id[w] == usize::MAX {
                    parent_id[w] = v;
                    queue.push_back(w);
                }
            }
        }
        let mut bits = BitStream::from_rng(rng.clone());
        let parent = (0..m)
            .map(|v| {
                if v == root {
                    None
                } else {
                    let dir = match mode {
                        TreeOrientation::Out => EdgeDir::Away,
                        TreeOrientation::In => EdgeDir::Toward,
                        TreeOrientation::Uniform => {
                            if bits.next_bit() {
                                EdgeDir::Away
                            } else {
                                EdgeDir::Toward
                            }
                        }
                    };
                    Some((parent_id[v], dir))
                }
            })
            .collect();
        Self::new(parent).expect("generated links form a tree")
    }
}

/// Uniform random labeled tree as an adjacency list, via Prüfer decode.
fn random_tree_adjacency(m: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<usize>> {
    let mut adjacency = vec![Vec::new(); m];
    if m == 1 {
        return adjacency;
    }
    if m == 2 {
        adjacency[0].push(1);
        adjacency[1].push(0);
        return adjacency;
    }
    let seq: Vec<usize> = (0..m - 2)
        .map(|_| uniform_below(rng, m as u64) as usize)
        .collect();
    for (a, b) in prufer_decode(m, &seq) {
        adjacency[a].push(b);
        adjacency[b].push(a);
    }
    adjacency
}

/// Decodes a Prüfer sequence into the edges of the unique tree with that
/// code. `seq` has length `m - 2` with entries in `0..m`.
pub(crate) fn prufer_decode(m: usize, seq: &[usize]) -> Vec<(usize, usize)> {
    debug_assert_eq!(seq.len(), m - 2);
    let mut degree = vec![1usize; m];
    for &a in seq {
        degree[a] += 1;
    }
    let mut edges = Vec::with_capacity(m - 1);
    let mut ptr = 0;
    while degree[ptr] != 1 {
        ptr += 1;
    }
    let mut leaf = ptr;
    for &a in seq {
        edges.push((leaf, a));
        degree[a] -= 1;
        if degree[a] == 1 && a < ptr {
            leaf = a;
        } else {
            ptr += 1;
            while degree[ptr] != 1 {
                ptr += 1;
            }
            leaf = ptr;
        }
    }
    edges.push((leaf, m - 1));
    edges
}

impl std::fmt::Debug for OrientedTree {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "OrientedTree(m={}, root={})", self.m(), self.root)
    }
}
