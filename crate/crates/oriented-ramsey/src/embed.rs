//! Constructive embedding procedures: DFS embedding into transitive
//! hosts, greedy embedding under degree guarantees, the sparse-colour
//! tree finder, long cycles from out-degree, low-out-degree orderings,
//! mindegree pairs, and a complete backtracking embedder used as the
//! exact oracle.
//!
//! Every procedure that returns an [`Embedding`] is checked in tests by
//! the independent [`validate_embedding`]; greedy host choices always
//! take the lowest-index eligible vertex so runs are reproducible.

use crate::bitset::VertexSet;
use crate::coloring::{Color, ColoredTournament};
use crate::rng::rng_from_seed;
use crate::tree::{EdgeDir, OrientedTree};
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// A placement of a pattern tree inside a host tournament:
/// `map[pattern vertex] = host vertex`. When `color` is set, every edge
/// of the copy must carry that colour.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Embedding {
    pub map: Vec<usize>,
    pub color: Option<Color>,
}

impl Embedding {
    pub fn with_color(mut self, color: Color) -> Self {
        self.color = Some(color);
        self
    }

    /// `(pattern vertex, host vertex)` pairs, the serialization used by
    /// the command-line output.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        self.map.iter().copied().enumerate().collect()
    }

    /// Host vertices used by the copy.
    pub fn image(&self, n: usize) -> VertexSet {
        VertexSet::from_iter(n, self.map.iter().copied())
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("invalid embedding: {0}")]
pub struct EmbedViolation(pub String);

/// Re-checks an embedding from scratch: injectivity, range, edge
/// orientation, and (when constrained) edge colour.
pub fn validate_embedding(
    g: &ColoredTournament,
    t: &OrientedTree,
    emb: &Embedding,
) -> Result<(), EmbedViolation> {
    let n = g.n();
    if emb.map.len() != t.m() {
        return Err(EmbedViolation(format!(
            "map covers {} of {} pattern vertices",
            emb.map.len(),
            t.m()
        )));
    }
    let mut used = VertexSet::empty(n);
    for (v, &h) in emb.map.iter().enumerate() {
        if h >= n {
            return Err(EmbedViolation(format!("vertex {v} mapped outside the host")));
        }
        if used.contains(h) {
            return Err(EmbedViolation(format!("host vertex {h} used twice")));
        }
        used.insert(h);
    }
    for (tail, head) in t.edges() {
        let (ht, hh) = (emb.map[tail], emb.map[head]);
        if !g.tournament().has_edge(ht, hh) {
            return Err(EmbedViolation(format!(
                "pattern edge {tail} -> {head} lands on missing host edge {ht} -> {hh}"
            )));
        }
        if let Some(c) = emb.color {
            if !g.has_colored_edge(c, ht, hh) {
                return Err(EmbedViolation(format!(
                    "host edge {ht} -> {hh} is not {c}"
                )));
            }
        }
    }
    Ok(())
}

/// A pair of disjoint sets where every `a` in A has at least `k`
/// colour-out-neighbours in B and every `b` in B at least `k`
/// colour-in-neighbours in A.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MindegreePair {
    pub a: VertexSet,
    pub b: VertexSet,
    pub k: usize,
    pub color: Color,
}

/// Direct degree recount of the mindegree-pair guarantee.
pub fn validate_mindegree_pair(
    g: &ColoredTournament,
    pair: &MindegreePair,
) -> Result<(), EmbedViolation> {
    if !pair.a.is_disjoint(&pair.b) {
        return Err(EmbedViolation("pair sets overlap".into()));
    }
    if pair.a.is_empty() || pair.b.is_empty() {
        return Err(EmbedViolation("pair side empty".into()));
    }
    for a in pair.a.iter() {
        let d = g.out_count_in(pair.color, a, &pair.b);
        if d < pair.k {
            return Err(EmbedViolation(format!(
                "vertex {a} has only {d} < {} {} out-neighbours in B",
                pair.k, pair.color
            )));
        }
    }
    for b in pair.b.iter() {
        let d = g.in_count_in(pair.color, b, &pair.a);
        if d < pair.k {
            return Err(EmbedViolation(format!(
                "vertex {b} has only {d} < {} {} in-neighbours in A",
                pair.k, pair.color
            )));
        }
    }
    Ok(())
}

#[derive(Debug, Error, PartialEq)]
pub enum EmbedError {
    #[error("need {needed} host vertices, got {got}")]
    TooFewHosts { needed: usize, got: usize },
    #[error("tree is neither out- nor in-directed")]
    NotDirected,
    #[error("stuck embedding pattern vertex {pattern}: no unused {color} neighbour of host vertex {host}")]
    Stuck { pattern: usize, host: usize, color: Color },
    #[error("{edges} blue edges inside U exceed the sparsity cap {cap:.2}")]
    TooManyBlueEdges { edges: u64, cap: f64 },
    #[error("tree of size {m} exceeds the guarantee (epsilon/4)|U| = {cap:.2}")]
    TreeTooLarge { m: usize, cap: f64 },
    #[error("{side} low-degree set has {size} vertices, allowed (epsilon/4)|U| = {cap:.2}; host not pseudorandom enough")]
    CleanupFailed { side: &'static str, size: usize, cap: f64, witness: VertexSet },
    #[error("vertex {vertex} has no {color} out-edge inside U")]
    ZeroOutDegree { vertex: usize, color: Color },
    #[error("only {edges} {color} edges inside U, need delta |U|^2 = {needed:.2}")]
    TooSparse { edges: u64, color: Color, needed: f64 },
    #[error("no bipartition reached the crossing-edge target in {trials} trials")]
    BipartitionFailed { trials: u64 },
    #[error("search budget of {budget} nodes exhausted before a definitive answer")]
    Indeterminate { budget: u64 },
}

/// Smallest integer at least `x`, snapping values within 1e-9 of an
/// integer first.
pub(crate) fn int_ceil(x: f64) -> usize {
    debug_assert!(x >= 0.0);
    let r = x.round();
    if (x - r).abs() < 1e-9 {
        r as usize
    } else {
        x.ceil() as usize
    }
}

/// Embeds a directed tree into a transitive host along its depth-first
/// order: for an out-directed tree every edge points to a later DFS
/// vertex, so mapping the i-th DFS vertex to `hosts[i]` works; an
/// in-directed tree uses the hosts in reverse.
///
/// `hosts` must list vertices so that all relevant host edges point
/// toward the higher index (the caller's transitive order).
pub fn embed_in_transitive(
    t: &OrientedTree,
    hosts: &[usize],
) -> Result<Embedding, EmbedError> {
    let m = t.m();
    if hosts.len() < m {
        return Err(EmbedError::TooFewHosts { needed: m, got: hosts.len() });
    }
    let reversed = if t.is_out_directed() {
        false
    } else if t.is_in_directed() {
        true
    } else {
        return Err(EmbedError::NotDirected);
    };
    let mut map = vec![usize::MAX; m];
    for (i, v) in t.dfs_preorder().into_iter().enumerate() {
        map[v] = if reversed { hosts[m - 1 - i] } else { hosts[i] };
    }
    Ok(Embedding { map, color: None })
}

/// Greedy placement in host order: the root takes the lowest-index
/// vertex of `U`, and each further pattern vertex (breadth-first) takes
/// the lowest unused colour-neighbour of its parent's image on the
/// correct side. Succeeds whenever the colour subgraph on `U` has
/// minimum in- and out-degree at least the tree size; a violated degree
/// assumption surfaces as a [`EmbedError::Stuck`] naming the vertex.
pub fn greedy_min_degree_embed(
    g: &ColoredTournament,
    u: &VertexSet,
    t: &OrientedTree,
    color: Color,
) -> Result<Embedding, EmbedError> {
    let m = t.m();
    let mut map = vec![usize::MAX; m];
    let mut used = VertexSet::empty(g.n());
    for v in t.bfs_order() {
        let chosen = match t.parent_of(v) {
            None => u.iter().find(|&h| !used.contains(h)),
            Some((p, dir)) => {
                let mut pool = match dir {
                    EdgeDir::Away => g.out_set(color, map[p]),
                    EdgeDir::Toward => g.in_set(color, map[p]),
                };
                pool.intersect_with(u);
                pool.subtract(&used);
                pool.first()
            }
        };
        match chosen {
            Some(h) => {
                map[v] = h;
                used.insert(h);
            }
            None => {
                let host = t.parent_of(v).map_or(usize::MAX, |(p, _)| map[p]);
                return Err(EmbedError::Stuck { pattern: v, host, color });
            }
        }
    }
    Ok(Embedding { map, color: Some(color) })
}

/// Finds a copy of `t` in the colour opposite to the sparse one: when
/// the `color.other()` edges inside `U` number at most
/// (epsilon^2/32)|U|^2 and the tree has at most (epsilon/4)|U| vertices,
/// dropping the vertices of low `color`-out- or in-degree (below
/// (3 epsilon/4)|U|) leaves minimum degrees of at least (epsilon/4)|U|,
/// and the greedy embedding goes through.
///
/// Both dropped sets must stay within (epsilon/4)|U| vertices; a larger
/// one is returned as a witness that the host is not pseudorandom
/// enough.
pub fn find_tree_in_sparse_complement(
    g: &ColoredTournament,
    u: &VertexSet,
    t: &OrientedTree,
    color: Color,
    epsilon: f64,
) -> Result<Embedding, EmbedError> {
    assert!(epsilon > 0.0 && epsilon < 0.5, "needs 0 < epsilon < 1/2");
    let usz = u.count() as f64;
    let sparse_cap = epsilon * epsilon / 32.0 * usz * usz;
    let other_edges = g.edges_within(u, Some(color.other()));
    if other_edges as f64 > sparse_cap + 1e-9 {
        return Err(EmbedError::TooManyBlueEdges { edges: other_edges, cap: sparse_cap });
    }
    let size_cap = epsilon / 4.0 * usz;
    if t.m() as f64 > size_cap + 1e-9 {
        return Err(EmbedError::TreeTooLarge { m: t.m(), cap: size_cap });
    }
    let degree_floor = 3.0 * epsilon / 4.0 * usz;
    let low_out = VertexSet::from_iter(
        g.n(),
        u.iter().filter(|&v| (g.out_count_in(color, v, u) as f64) + 1e-9 < degree_floor),
    );
    let low_in = VertexSet::from_iter(
        g.n(),
        u.iter().filter(|&v| (g.in_count_in(color, v, u) as f64) + 1e-9 < degree_floor),
    );
    for (side, set) in [("out", &low_out), ("in", &low_in)] {
        if set.count() as f64 > size_cap + 1e-9 {
            return Err(EmbedError::CleanupFailed {
                side,
                size: set.count(),
                cap: size_cap,
                witness: set.clone(),
            });
        }
    }
    let mut rest = u.clone();
    rest.subtract(&low_out);
    rest.subtract(&low_in);
    greedy_min_degree_embed(g, &rest, t, color)
}

/// The red-against-sparse-blue specialisation.
pub fn find_red_tree_in_sparse_blue(
    g: &ColoredTournament,
    u: &VertexSet,
    t: &OrientedTree,
    epsilon: f64,
) -> Result<Embedding, EmbedError> {
    find_tree_in_sparse_complement(g, u, t, Color::Red, epsilon)
}

/// A cycle in the colour subgraph on `U` of length at least d+1, where
/// d is the minimum colour-out-degree: extend a path greedily (lowest
/// eligible vertex first) until the endpoint's colour-out-neighbours
/// all lie on the path, then close at the earliest one.
pub fn long_cycle(
    g: &ColoredTournament,
    color: Color,
    u: &VertexSet,
) -> Result<Vec<usize>, EmbedError> {
    for v in u.iter() {
        if g.out_count_in(color, v, u) == 0 {
            return Err(EmbedError::ZeroOutDegree { vertex: v, color });
        }
    }
    let start = u.first().expect("U must be non-empty");
    let mut on_path = VertexSet::empty(g.n());
    let mut path = vec![start];
    on_path.insert(start);
    loop {
        let tail = *path.last().unwrap();
        let mut pool = g.out_set(color, tail);
        pool.intersect_with(u);
        pool.subtract(&on_path);
        match pool.first() {
            Some(next) => {
                path.push(next);
                on_path.insert(next);
            }
            None => break,
        }
    }
    let tail = *path.last().unwrap();
    let closing = path
        .iter()
        .position(|&v| g.has_colored_edge(color, tail, v))
        .expect("endpoint keeps its out-degree on the path");
    Ok(path[closing..].to_vec())
}

/// Outcome of the low-out-degree peeling: either a full ordering with
/// at most `threshold` forward colour edges per vertex, or the subset
/// that resisted; its minimum colour-out-degree exceeds the threshold,
/// which makes it a long-cycle witness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LowOutDegree {
    Ordering(Vec<usize>),
    DenseWitness(VertexSet),
}

/// Repeatedly extracts the lowest-index vertex whose colour-out-degree
/// within the remaining set is at most `threshold`.
pub fn low_outdegree_ordering(
    g: &ColoredTournament,
    color: Color,
    u: &VertexSet,
    threshold: usize,
) -> LowOutDegree {
    let mut remaining = u.clone();
    let mut deg = vec![0usize; g.n()];
    for v in u.iter() {
        deg[v] = g.out_count_in(color, v, u);
    }
    let mut order = Vec::with_capacity(u.count());
    while !remaining.is_empty() {
        let Some(v) = remaining.iter().find(|&v| deg[v] <= threshold) else {
            return LowOutDegree::DenseWitness(remaining);
        };
        order.push(v);
        remaining.remove(v);
        let feeders: Vec<usize> = g.iter_in_in(color, v, &remaining).collect();
        for w in feeders {
            deg[w] -= 1;
        }
    }
    LowOutDegree::Ordering(order)
}

/// Seeks disjoint sets A, B within `U` such that every A-vertex has at
/// least k colour-out-neighbours in B and vice versa, with
/// k = ceil((delta/4)|U|). Requires at least delta |U|^2 colour edges
/// inside `U`; samples seeded random bipartitions until one crosses
/// (delta/4)|U|^2 edges, then trims low-cross-degree vertices. Runs out
/// of trials loudly rather than looping forever.
pub fn mindegree_pair(
    g: &ColoredTournament,
    color: Color,
    u: &VertexSet,
    delta: f64,
    seed: u64,
    max_trials: u64,
) -> Result<MindegreePair, EmbedError> {
    assert!(delta > 0.0 && delta < 0.25, "needs 0 < delta < 1/4");
    let usz = u.count() as f64;
    let edges = g.edges_within(u, Some(color));
    let needed = delta * usz * usz;
    if (edges as f64) + 1e-9 < needed {
        return Err(EmbedError::TooSparse { edges, color, needed });
    }
    let cross_target = delta / 4.0 * usz * usz;
    let degree_floor = delta / 4.0 * usz;
    let k = int_ceil(degree_floor);
    let mut rng = rng_from_seed(seed);
    for _ in 0..max_trials {
        let mut x = VertexSet::empty(g.n());
        let mut y = VertexSet::empty(g.n());
        for v in u.iter() {
            if rng.random::<bool>() {
                x.insert(v);
            } else {
                y.insert(v);
            }
        }
        let cross: u64 = x.iter().map(|v| g.out_count_in(color, v, &y) as u64).sum();
        if (cross as f64) + 1e-9 < cross_target {
            continue;
        }
        // Trim vertices that cannot meet the degree floor; counting
        // against the shrinking opposite side keeps this a fixpoint.
        loop {
            let bad_x = x
                .iter()
                .find(|&a| (g.out_count_in(color, a, &y) as f64) + 1e-9 < degree_floor);
            if let Some(a) = bad_x {
                x.remove(a);
                continue;
            }
            let bad_y = y
                .iter()
                .find(|&b| (g.in_count_in(color, b, &x) as f64) + 1e-9 < degree_floor);
            if let Some(b) = bad_y {
                y.remove(b);
                continue;
            }
            break;
        }
        if !x.is_empty() && !y.is_empty() {
            return Ok(MindegreePair { a: x, b: y, k, color });
        }
    }
    Err(EmbedError::BipartitionFailed { trials: max_trials })
}

/// Complete backtracking search for a copy of `t` in `g`, optionally
/// colour-constrained. Pattern vertices are assigned in breadth-first
/// order, so each new vertex is constrained by exactly one already
/// placed neighbour; candidates are pruned by colour-degree counts.
/// Explores at most `budget` assignments, then reports indeterminate
/// rather than guessing.
pub fn exact_embed(
    g: &ColoredTournament,
    t: &OrientedTree,
    color: Option<Color>,
    budget: u64,
) -> Result<Option<Embedding>, EmbedError> {
    let n = g.n();
    let m = t.m();
    if m > n {
        return Ok(None);
    }
    let full = VertexSet::full(n);
    let host_out: Vec<usize> = (0..n)
        .map(|h| match color {
            Some(c) => g.out_count_in(c, h, &full),
            None => g.tournament().out_degree(h),
        })
        .collect();
    let host_in: Vec<usize> = (0..n)
        .map(|h| match color {
            Some(c) => g.in_count_in(c, h, &full),
            None => g.tournament().in_degree(h),
        })
        .collect();
    let pat_out: Vec<usize> = (0..m).map(|v| t.out_degree(v)).collect();
    let pat_in: Vec<usize> = (0..m).map(|v| t.in_degree(v)).collect();
    let order = t.bfs_order();

    struct Search<'a> {
        g: &'a ColoredTournament,
        t: &'a OrientedTree,
        color: Option<Color>,
        order: &'a [usize],
        host_out: &'a [usize],
        host_in: &'a [usize],
        pat_out: &'a [usize],
        pat_in: &'a [usize],
        map: Vec<usize>,
        used: VertexSet,
        nodes_left: u64,
    }

    impl Search<'_> {
        fn admissible(&self, v: usize, h: usize) -> bool {
            self.host_out[h] >= self.pat_out[v] && self.host_in[h] >= self.pat_in[v]
        }

        fn descend(&mut self, depth: usize) -> Result<bool, EmbedError> {
            if depth == self.order.len() {
                return Ok(true);
            }
            let v = self.order[depth];
            let pool = match self.t.parent_of(v) {
                None => VertexSet::full(self.g.n()),
                Some((p, dir)) => match (dir, self.color) {
                    (EdgeDir::Away, Some(c)) => self.g.out_set(c, self.map[p]),
                    (EdgeDir::Toward, Some(c)) => self.g.in_set(c, self.map[p]),
                    (EdgeDir::Away, None) => self.g.tournament().out_set(self.map[p]),
                    (EdgeDir::Toward, None) => self.g.tournament().in_set(self.map[p]),
                },
            };
            for h in pool.iter() {
                if self.used.contains(h) || !self.admissible(v, h) {
                    continue;
                }
                if self.nodes_left == 0 {
                    return Err(EmbedError::Indeterminate { budget: 0 });
                }
                self.nodes_left -= 1;
                self.map[v] = h;
                self.used.insert(h);
                if self.descend(depth + 1)? {
                    return Ok(true);
                }
                self.used.remove(h);
                self.map[v] = usize::MAX;
            }
            Ok(false)
        }
    }

    let mut search = Search {
        g,
        t,
        color,
        order: &order,
        host_out: &host_out,
        host_in: &host_in,
        pat_out: &pat_out,
        pat_in: &pat_in,
        map: vec![usize::MAX; m],
        used: VertexSet::empty(n),
        nodes_left: budget,
    };
    match search.descend(0) {
        Ok(true) => Ok(Some(Embedding { map: search.map, color })),
        Ok(false) => Ok(None),
        Err(_) => Err(EmbedError::Indeterminate { budget }),
    }
}
