//! Decompositions of oriented trees: subtree splits, path splits, the
//! iterated-core layering, disjoint path layers, and alternating
//! in/out-forest layers.
//!
//! Every split comes with a standalone validator that re-checks the
//! advertised structural clauses from scratch and names the first one
//! violated. The constructions themselves are deterministic; wherever the
//! underlying argument allows an arbitrary choice we take the
//! lowest-index candidate.
//!
//! Fractional size thresholds (powers like m^alpha) are compared against
//! integer sizes directly in floating point with a tiny snap tolerance,
//! so an exact power such as 16^(3/4) = 8 is treated as 8 rather than
//! 7.999... .

use crate::bitset::VertexSet;
use crate::tree::{EdgeDir, OrientedTree};
use thiserror::Error;

/// A part of a decomposition: a connected subtree given by its root and
/// vertex set (ids refer to the original tree).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subtree {
    pub root: usize,
    pub vertices: VertexSet,
}

#[derive(Debug, Error, PartialEq)]
pub enum SplitError {
    #[error("tree has {leaves} leaves, allowed at most m^alpha = {bound:.3} (m = {m}, alpha = {alpha})")]
    TooManyLeaves { leaves: usize, bound: f64, m: usize, alpha: f64 },
    #[error("this split needs an out-directed tree")]
    NotOutDirected,
}

/// First violated clause of a split's contract.
#[derive(Debug, Error, PartialEq, Eq)]
#[error("clause {clause} violated: {detail}")]
pub struct SplitViolation {
    pub clause: &'static str,
    pub detail: String,
}

fn violated(clause: &'static str, detail: impl Into<String>) -> Result<(), SplitViolation> {
    Err(SplitViolation { clause, detail: detail.into() })
}

/// Largest integer at most `x`, snapping values within 1e-9 of an
/// integer first (so 7.9999999996 counts as 8).
pub(crate) fn int_cap(x: f64) -> usize {
    debug_assert!(x >= 0.0);
    let r = x.round();
    if (x - r).abs() < 1e-9 {
        r as usize
    } else {
        x.floor() as usize
    }
}

fn check_leaf_bound(t: &OrientedTree, alpha: f64) -> Result<(), SplitError> {
    let m = t.m();
    let bound = (m as f64).powf(alpha);
    let leaves = t.leaves().len();
    if leaves as f64 > bound + 1e-9 {
        return Err(SplitError::TooManyLeaves { leaves, bound, m, alpha });
    }
    Ok(())
}

/// Partition check shared by all validators: every vertex in exactly one
/// part.
fn check_partition(m: usize, parts: impl Iterator<Item = VertexSet>) -> Result<(), SplitViolation> {
    let mut seen = VertexSet::empty(m);
    for part in parts {
        if part.is_empty() {
            return violated("partition", "empty part");
        }
        if !seen.is_disjoint(&part) {
            let v = seen.intersection(&part).first().unwrap();
            return violated("partition", format!("vertex {v} in two parts"));
        }
        seen.union_with(&part);
    }
    if seen.count() != m {
        return violated(
            "partition",
            format!("{} of {m} vertices covered", seen.count()),
        );
    }
    Ok(())
}

/// A part must induce a connected subtree whose only parentless-in-part
/// vertex is the designated root.
fn check_subtree(t: &OrientedTree, part: &Subtree) -> Result<(), SplitViolation> {
    if !part.vertices.contains(part.root) {
        return violated("connectivity", format!("root {} outside its part", part.root));
    }
    for v in part.vertices.iter() {
        let parent_inside = match t.parent_of(v) {
            Some((p, _)) => part.vertices.contains(p),
            None => false,
        };
        if parent_inside == (v == part.root) {
            return violated(
                "connectivity",
                format!("vertex {v} breaks the single-root subtree shape"),
            );
        }
    }
    Ok(())
}

// =========================================================================
// Tree split
// =========================================================================

/// Partition of an out-directed tree into subtrees, each either a closed
/// leaf-tree or a grown part whose boundary consists of well-placed
/// extending-leaves.
#[derive(Clone, Debug)]
pub struct TreeSplit {
    pub parts: Vec<Subtree>,
    /// Parts with no edges leaving them.
    pub leaf_flags: Vec<bool>,
    /// Out-directed tree on part indices; edges follow the unique T-edge
    /// crossing between the parts.
    pub quotient: OrientedTree,
    pub part_of: Vec<usize>,
}

/// Two-stage subtree decomposition. A part rooted at v either swallows
/// all of v's descendants (when there are at most m^(c*alpha) of them)
/// and becomes a leaf-tree, or grows breadth-wise to size at least
/// m^(c*alpha) and is then expanded until every boundary leaf sits on an
/// even level of its part and has out-degree exactly one in the host
/// tree.
///
/// Requires c >= 2, 0 < alpha <= 1/(2c) and at most m^alpha leaves.
pub fn tree_split(t: &OrientedTree, c: f64, alpha: f64) -> Result<TreeSplit, SplitError> {
    assert!(c >= 2.0, "tree_split needs c >= 2");
    assert!(
        alpha > 0.0 && alpha <= 1.0 / (2.0 * c) + 1e-12,
        "tree_split needs 0 < alpha <= 1/(2c)"
    );
    if !t.is_out_directed() {
        return Err(SplitError::NotOutDirected);
    }
    check_leaf_bound(t, alpha)?;

    let m = t.m();
    let grow_target = (m as f64).powf(c * alpha);
    let desc = t.descendant_counts();

    let mut parts: Vec<Subtree> = Vec::new();
    let mut leaf_flags: Vec<bool> = Vec::new();
    let mut part_of = vec![usize::MAX; m];
    let mut covered = VertexSet::empty(m);
    let mut next_root = Some(t.root());

    while let Some(v) = next_root {
        let mut part = VertexSet::empty(m);
        part.insert(v);
        let is_leaf_tree = desc[v] as f64 <= grow_target + 1e-9;
        if is_leaf_tree {
            for u in t.subtree_vertices(v) {
                part.insert(u);
            }
        } else {
            // Stage 1: grow until the size target is met. A grow candidate
            // has no child inside the part yet but does have children in
            // T; with the part still a singleton that is the root itself.
            while (part.count() as f64) + 1e-9 < grow_target {
                let u = part
                    .iter()
                    .find(|&u| {
                        !t.children(u).is_empty()
                            && t.children(u).iter().all(|&ch| !part.contains(ch))
                    })
                    .expect("a grow candidate exists while below the size target");
                for &ch in t.children(u) {
                    part.insert(ch);
                }
            }
            // Stage 2: a boundary leaf is bad when its level within the
            // part is odd or it has out-degree other than one in T; bad
            // leaves absorb their children until none remain.
            loop {
                let bad = part.iter().find(|&u| {
                    !t.children(u).is_empty()
                        && t.children(u).iter().all(|&ch| !part.contains(ch))
                        && ((t.level(u) - t.level(v)) % 2 == 1 || t.children(u).len() != 1)
                });
                match bad {
                    Some(u) => {
                        for &ch in t.children(u) {
                            part.insert(ch);
                        }
                    }
                    None => break,
                }
            }
        }
        for u in part.iter() {
            part_of[u] = parts.len();
            covered.insert(u);
        }
        parts.push(Subtree { root: v, vertices: part });
        leaf_flags.push(is_leaf_tree);

        // Next root: the unique uncovered child of the lowest-index
        // covered vertex that still has one.
        next_root = covered.iter().find_map(|u| {
            let free: Vec<usize> = t
                .children(u)
                .iter()
                .copied()
                .filter(|&ch| !covered.contains(ch))
                .collect();
            debug_assert!(free.len() <= 1, "boundary vertex {u} with several uncovered children");
            free.first().copied()
        });
    }

    let quotient = quotient_of(t, &parts, &part_of);
    Ok(TreeSplit { parts, leaf_flags, quotient, part_of })
}

/// Contracts each part to a vertex; the parent of part i is the part
/// holding the T-parent of part i's root. Parts must be listed with
/// parents before children (construction order guarantees it).
fn quotient_of(t: &OrientedTree, parts: &[Subtree], part_of: &[usize]) -> OrientedTree {
    let links = parts
        .iter()
        .map(|part| {
            t.parent_of(part.root)
                .map(|(p, _)| (part_of[p], EdgeDir::Away))
        })
        .collect();
    OrientedTree::new(links).expect("contracting a split yields a tree")
}

/// Checks a tree split against the full contract: exact partition,
/// subtree shape, the five clauses, and quotient consistency.
pub fn validate_tree_split(
    t: &OrientedTree,
    c: f64,
    alpha: f64,
    split: &TreeSplit,
) -> Result<(), SplitViolation> {
    let m = t.m();
    check_partition(m, split.parts.iter().map(|p| p.vertices.clone()))?;
    for part in &split.parts {
        check_subtree(t, part)?;
    }
    let size_cap = 6.0 * (m as f64).powf(c * alpha);
    for (i, part) in split.parts.iter().enumerate() {
        // (i): in-edges from outside must enter at the root. In a tree the
        // only candidate is the parent edge of each vertex.
        for v in part.vertices.iter() {
            if v == part.root {
                continue;
            }
            if let Some((p, _)) = t.parent_of(v) {
                if !part.vertices.contains(p) {
                    return violated("(i)", format!("in-edge into non-root vertex {v} of part {i}"));
                }
            }
        }
        // (ii) and (iii): edges leave only from extending-leaves, which
        // sit on even part-levels and have out-degree one in T.
        let root_level = t.level(part.root);
        for v in part.vertices.iter() {
            let child_out = t.children(v).iter().any(|&ch| !part.vertices.contains(ch));
            if !child_out {
                continue;
            }
            let is_part_leaf = t.children(v).iter().all(|&ch| !part.vertices.contains(ch));
            if !is_part_leaf || v == part.root {
                return violated(
                    "(ii)",
                    format!("edge leaves part {i} from non-boundary vertex {v}"),
                );
            }
            if (t.level(v) - root_level) % 2 == 1 {
                return violated("(iii)", format!("extending-leaf {v} of part {i} on odd level"));
            }
            if t.children(v).len() != 1 {
                return violated(
                    "(iii)",
                    format!("extending-leaf {v} of part {i} has out-degree {}", t.children(v).len()),
                );
            }
        }
        // (iv)
        if part.vertices.count() as f64 > size_cap + 1e-9 {
            return violated(
                "(iv)",
                format!("part {i} has {} vertices, cap {size_cap:.2}", part.vertices.count()),
            );
        }
        if split.leaf_flags[i] {
            let leaks = part
                .vertices
                .iter()
                .any(|v| t.children(v).iter().any(|&ch| !part.vertices.contains(ch)));
            if leaks {
                return violated("(ii)", format!("leaf-tree {i} has an outgoing edge"));
            }
        }
    }
    // (v)
    let part_cap = 2.0 * (m as f64).powf(1.0 - c * alpha);
    if split.parts.len() as f64 > part_cap + 1e-9 {
        return violated(
            "(v)",
            format!("{} parts, cap {part_cap:.2}", split.parts.len()),
        );
    }
    check_quotient(
        t,
        &split.part_of,
        &split.quotient,
        &split.parts.iter().map(|p| p.root).collect::<Vec<_>>(),
    )
}

/// Contracting the parts must reproduce the stored quotient edge for
/// edge, with no duplicate crossing edges.
fn check_quotient(
    t: &OrientedTree,
    part_of: &[usize],
    quotient: &OrientedTree,
    roots: &[usize],
) -> Result<(), SplitViolation> {
    let mut crossing: Vec<(usize, usize)> = t
        .edges()
        .filter(|&(u, w)| part_of[u] != part_of[w])
        .map(|(u, w)| (part_of[u], part_of[w]))
        .collect();
    crossing.sort_unstable();
    let before = crossing.len();
    crossing.dedup();
    if crossing.len() != before {
        return violated("quotient", "two T-edges cross between the same pair of parts");
    }
    let mut quotient_edges: Vec<(usize, usize)> = quotient.edges().collect();
    quotient_edges.sort_unstable();
    if crossing != quotient_edges {
        return violated(
            "quotient",
            format!("crossing edges {crossing:?} differ from quotient edges {quotient_edges:?}"),
        );
    }
    if !quotient.is_out_directed() {
        return violated("quotient", "quotient is not out-directed");
    }
    for (idx, &r) in roots.iter().enumerate() {
        if part_of[r] != idx {
            return violated("quotient", format!("part {idx} root {r} mapped elsewhere"));
        }
    }
    Ok(())
}

// =========================================================================
// Path split
// =========================================================================

/// Partition of an out-directed tree into directed subpaths: every
/// junction (leaf or branching vertex) is a singleton part, and the
/// junction-free chains in between are chopped into bounded chunks.
#[derive(Clone, Debug)]
pub struct PathSplit {
    /// Each part in path order (start vertex first).
    pub parts: Vec<Vec<usize>>,
    pub junction_flags: Vec<bool>,
    pub quotient: OrientedTree,
    pub part_of: Vec<usize>,
}

/// Junctions are the leaves and branching vertices, plus the root when
/// it has two or more children: no directed path can run through a
/// vertex without an in-edge, even though its underlying degree is 2.
fn path_junction(t: &OrientedTree, v: usize) -> bool {
    let deg = t.underlying_degree(v);
    deg == 1 || deg >= 3 || (v == t.root() && t.children(v).len() >= 2)
}

/// Requires 0 < alpha <= 1/4 and at most m^alpha leaves. Chunks have at
/// most m^(3*alpha) vertices and are cut greedily from the root side of
/// each chain.
pub fn path_split(t: &OrientedTree, alpha: f64) -> Result<PathSplit, SplitError> {
    assert!(alpha > 0.0 && alpha <= 0.25 + 1e-12, "path_split needs 0 < alpha <= 1/4");
    if !t.is_out_directed() {
        return Err(SplitError::NotOutDirected);
    }
    check_leaf_bound(t, alpha)?;

    let m = t.m();
    let cap = int_cap((m as f64).powf(3.0 * alpha)).max(1);
    let is_junction = |v: usize| path_junction(t, v);

    let mut parts: Vec<Vec<usize>> = Vec::new();
    let mut junction_flags: Vec<bool> = Vec::new();
    let mut part_of = vec![usize::MAX; m];
    for v in t.bfs_order() {
        if part_of[v] != usize::MAX {
            continue;
        }
        if is_junction(v) {
            part_of[v] = parts.len();
            parts.push(vec![v]);
            junction_flags.push(true);
            continue;
        }
        // Top of a junction-free chain: walk it to the end.
        let mut chain = vec![v];
        let mut cur = v;
        loop {
            debug_assert!(t.children(cur).len() <= 1);
            match t.children(cur).first() {
                Some(&ch) if !is_junction(ch) => {
                    chain.push(ch);
                    cur = ch;
                }
                _ => break,
            }
        }
        for chunk in chain.chunks(cap) {
            for &u in chunk {
                part_of[u] = parts.len();
            }
            parts.push(chunk.to_vec());
            junction_flags.push(false);
        }
    }
    let subtrees: Vec<Subtree> = parts
        .iter()
        .map(|p| Subtree { root: p[0], vertices: VertexSet::from_iter(m, p.iter().copied()) })
        .collect();
    let quotient = quotient_of(t, &subtrees, &part_of);
    Ok(PathSplit { parts, junction_flags, quotient, part_of })
}

pub fn validate_path_split(
    t: &OrientedTree,
    alpha: f64,
    split: &PathSplit,
) -> Result<(), SplitViolation> {
    let m = t.m();
    check_partition(
        m,
        split.parts.iter().map(|p| VertexSet::from_iter(m, p.iter().copied())),
    )?;
    let is_junction = |v: usize| path_junction(t, v);
    let size_cap = (m as f64).powf(3.0 * alpha);
    for (i, part) in split.parts.iter().enumerate() {
        // Parts are directed subpaths of T.
        for w in part.windows(2) {
            if !t.oriented_edge(w[0], w[1]) {
                return violated(
                    "path-shape",
                    format!("part {i} not a directed path at {} -> {}", w[0], w[1]),
                );
            }
        }
        // (i)
        let has_junction = part.iter().any(|&v| is_junction(v));
        if has_junction != split.junction_flags[i] {
            return violated("(i)", format!("part {i} junction flag wrong"));
        }
        if has_junction && part.len() != 1 {
            return violated("(i)", format!("junction part {i} has {} vertices", part.len()));
        }
        // (ii): in-edges only at the start; out-edges (for non-junctions)
        // only at the end.
        let inside = VertexSet::from_iter(m, part.iter().copied());
        for &v in part {
            if let Some((p, _)) = t.parent_of(v) {
                if !inside.contains(p) && v != part[0] {
                    return violated("(ii)", format!("in-edge into interior vertex {v} of part {i}"));
                }
            }
            let leaving = t.children(v).iter().filter(|&&ch| !inside.contains(ch)).count();
            if !has_junction && leaving > 0 {
                if v != *part.last().unwrap() {
                    return violated(
                        "(ii)",
                        format!("out-edge from interior vertex {v} of part {i}"),
                    );
                }
                if leaving > 1 {
                    return violated("(ii)", format!("part {i} end has {leaving} out-edges"));
                }
            }
        }
        // (iii)
        if part.len() as f64 > size_cap + 1e-9 {
            return violated(
                "(iii)",
                format!("part {i} has {} vertices, cap {size_cap:.2}", part.len()),
            );
        }
    }
    // (iv)
    let count_cap = 5.0 * (m as f64).powf(1.0 - 3.0 * alpha);
    if split.parts.len() as f64 > count_cap + 1e-9 {
        return violated(
            "(iv)",
            format!("{} parts, cap {count_cap:.2}", split.parts.len()),
        );
    }
    check_quotient(
        t,
        &split.part_of,
        &split.quotient,
        &split.parts.iter().map(|p| p[0]).collect::<Vec<_>>(),
    )
}

// =========================================================================
// Core split
// =========================================================================

/// Iterated-core layering: layer 1 is the k-core of the whole tree, and
/// each later layer consists of the k-cores of the residual forest's
/// trees.
#[derive(Clone, Debug)]
pub struct CoreSplit {
    /// `layers[i]` holds the layer-(i+1) forest, trees sorted by root.
    pub layers: Vec<Vec<Subtree>>,
}

/// The core of a subtree keeps the vertices with more than |S|/k
/// descendants (within S, self included); since residual components are
/// always full subtrees of T, global descendant counts suffice.
pub fn core_split(t: &OrientedTree, k: usize) -> CoreSplit {
    assert!(k >= 2, "core_split needs k >= 2");
    let m = t.m();
    let desc = t.descendant_counts();
    let mut layers: Vec<Vec<Subtree>> = Vec::new();
    let mut frontier = vec![t.root()];
    while !frontier.is_empty() {
        frontier.sort_unstable();
        let mut layer = Vec::with_capacity(frontier.len());
        let mut next_frontier = Vec::new();
        for &r in &frontier {
            let total = desc[r];
            let mut core = VertexSet::empty(m);
            let mut stack = vec![r];
            while let Some(v) = stack.pop() {
                if desc[v] * k > total {
                    core.insert(v);
                    stack.extend_from_slice(t.children(v));
                } else {
                    next_frontier.push(v);
                }
            }
            debug_assert!(core.contains(r));
            layer.push(Subtree { root: r, vertices: core });
        }
        layers.push(layer);
        frontier = next_frontier;
    }
    CoreSplit { layers }
}

/// Validates the core split: partition, subtree shape, a single tree in
/// layer 1, order of layer-i trees at most ceil(m / k^(i-1)), and at
/// most k leaves per tree. `max_layers` optionally caps the layer count.
pub fn validate_core_split(
    t: &OrientedTree,
    k: usize,
    split: &CoreSplit,
    max_layers: Option<usize>,
) -> Result<(), SplitViolation> {
    let m = t.m();
    check_partition(
        m,
        split.layers.iter().flatten().map(|s| s.vertices.clone()),
    )?;
    if split.layers.first().map(|l| l.len()) != Some(1) {
        return violated("layer-1", "first layer is not a single tree");
    }
    for (li, layer) in split.layers.iter().enumerate() {
        let k_pow = (k as u64).saturating_pow(li as u32);
        let order_cap = (m as u64).div_ceil(k_pow);
        for tree in layer {
            check_subtree(t, tree)?;
            let order = tree.vertices.count() as u64;
            if order > order_cap {
                return violated(
                    "(i)",
                    format!(
                        "layer {} tree at {} has order {order}, cap {order_cap}",
                        li + 1,
                        tree.root
                    ),
                );
            }
            // Leaves within the induced subtree.
            let leaves = tree
                .vertices
                .iter()
                .filter(|&v| {
                    let kids =
                        t.children(v).iter().filter(|&&ch| tree.vertices.contains(ch)).count();
                    let has_parent = v != tree.root;
                    kids + usize::from(has_parent) == 1
                })
                .count();
            if leaves > k {
                return violated(
                    "(ii)",
                    format!("layer {} tree at {} has {leaves} leaves > k", li + 1, tree.root),
                );
            }
        }
    }
    if let Some(cap) = max_layers {
        if split.layers.len() > cap {
            return violated(
                "layer-count",
                format!("{} layers, cap {cap}", split.layers.len()),
            );
        }
    }
    Ok(())
}

// =========================================================================
// Disjoint paths layer
// =========================================================================

/// The bottom path fringe of an out-directed tree: one directed path per
/// non-root leaf, starting one vertex below the nearest
/// branching-or-root ancestor. A singleton tree is its own layer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DplResult {
    /// Paths top-down, ordered by their leaf.
    pub paths: Vec<Vec<usize>>,
    pub remainder: VertexSet,
}

impl DplResult {
    /// The remainder as a standalone tree with its id map, or `None` when
    /// the layer consumed everything.
    pub fn remainder_tree(&self, t: &OrientedTree) -> Option<(OrientedTree, Vec<usize>)> {
        t.induced(&self.remainder)
    }
}

pub fn dpl(t: &OrientedTree) -> DplResult {
    assert!(t.is_out_directed(), "dpl is defined for out-directed trees");
    let m = t.m();
    if m == 1 {
        return DplResult {
            paths: vec![vec![t.root()]],
            remainder: VertexSet::empty(1),
        };
    }
    let root = t.root();
    let branching: Vec<bool> = (0..m).map(|v| t.underlying_degree(v) >= 3).collect();
    let mut in_layer = VertexSet::empty(m);
    let mut paths = Vec::new();
    for u in t.leaves() {
        if u == root {
            continue;
        }
        // Climb to the nearest branching-or-root ancestor; the path
        // starts right below it.
        let mut start = u;
        loop {
            let (p, _) = t.parent_of(start).expect("non-root vertex has a parent");
            if p == root || branching[p] {
                break;
            }
            start = p;
        }
        let mut path = Vec::new();
        let mut cur = start;
        loop {
            path.push(cur);
            in_layer.insert(cur);
            if cur == u {
                break;
            }
            debug_assert_eq!(t.children(cur).len(), 1);
            cur = t.children(cur)[0];
        }
        paths.push(path);
    }
    let remainder = in_layer.complement();
    DplResult { paths, remainder }
}

/// Validates the layer: paths are disjoint directed paths ending at
/// non-root leaves, the remainder is an out-directed subtree containing
/// the root, and its non-root leaf count is at most half the input's.
pub fn validate_dpl(t: &OrientedTree, result: &DplResult) -> Result<(), SplitViolation> {
    let m = t.m();
    let mut all_parts: Vec<VertexSet> =
        result.paths.iter().map(|p| VertexSet::from_iter(m, p.iter().copied())).collect();
    if !result.remainder.is_empty() {
        all_parts.push(result.remainder.clone());
    }
    check_partition(m, all_parts.into_iter())?;
    if m == 1 {
        if result.paths != vec![vec![t.root()]] {
            return violated("(i)", "singleton tree must be its own layer");
        }
        return Ok(());
    }
    let root = t.root();
    for (i, path) in result.paths.iter().enumerate() {
        for w in path.windows(2) {
            if !t.oriented_edge(w[0], w[1]) {
                return violated("(i)", format!("path {i} broken at {} -> {}", w[0], w[1]));
            }
        }
        let last = *path.last().unwrap();
        if last == root || t.underlying_degree(last) != 1 {
            return violated("(i)", format!("path {i} does not end at a non-root leaf"));
        }
    }
    // (ii): remainder is a subtree containing the root (out-direction is
    // inherited from T).
    if !result.remainder.contains(root) {
        return violated("(ii)", "remainder lost the root");
    }
    for v in result.remainder.iter() {
        if v == root {
            continue;
        }
        let (p, _) = t.parent_of(v).unwrap();
        if !result.remainder.contains(p) {
            return violated("(ii)", format!("remainder disconnected at {v}"));
        }
    }
    // (iii)
    let nrl = |set: &VertexSet| -> usize {
        set.iter()
            .filter(|&v| {
                v != root && {
                    let kids = t.children(v).iter().filter(|&&c| set.contains(c)).count();
                    kids == 0
                }
            })
            .count()
    };
    let full = VertexSet::full(m);
    let before = nrl(&full);
    let after = nrl(&result.remainder);
    if 2 * after > before {
        return violated("(iii)", format!("non-root leaves {before} -> {after}, not halved"));
    }
    Ok(())
}

// =========================================================================
// In/out layers
// =========================================================================

/// Alternating layering of an arbitrary oriented tree: layer 1 is the
/// maximal in-directed subtree containing the root, and each subsequent
/// layer flips polarity. Odd layers (1-based) are in-directed forests,
/// even layers out-directed.
#[derive(Clone, Debug)]
pub struct InOutSplit {
    /// `layers[i]` is layer i+1, trees sorted by root.
    pub layers: Vec<Vec<Subtree>>,
    pub layer_of: Vec<usize>,
}

pub fn in_out_split(t: &OrientedTree) -> InOutSplit {
    let m = t.m();
    let mut layer_of = vec![0usize; m];
    let mut tree_root = vec![usize::MAX; m];
    tree_root[t.root()] = t.root();
    for v in t.bfs_order() {
        if v == t.root() {
            continue;
        }
        let (p, dir) = t.parent_of(v).unwrap();
        // Odd (1-based) layers absorb edges pointing toward the parent,
        // even layers edges pointing away; a mismatch starts the next
        // layer.
        let expected = if layer_of[p] % 2 == 0 { EdgeDir::Toward } else { EdgeDir::Away };
        if dir == expected {
            layer_of[v] = layer_of[p];
            tree_root[v] = tree_root[p];
        } else {
            layer_of[v] = layer_of[p] + 1;
            tree_root[v] = v;
        }
    }
    let depth = layer_of.iter().max().map_or(0, |&d| d + 1);
    let mut layers: Vec<Vec<Subtree>> = vec![Vec::new(); depth];
    let mut roots: Vec<usize> = (0..m).filter(|&v| tree_root[v] == v).collect();
    roots.sort_unstable();
    for r in roots {
        let vertices =
            VertexSet::from_iter(m, (0..m).filter(|&v| tree_root[v] == r));
        layers[layer_of[r]].push(Subtree { root: r, vertices });
    }
    InOutSplit { layers, layer_of }
}

pub fn validate_in_out_split(t: &OrientedTree, split: &InOutSplit) -> Result<(), SplitViolation> {
    let m = t.m();
    check_partition(
        m,
        split.layers.iter().flatten().map(|s| s.vertices.clone()),
    )?;
    match split.layers.first() {
        Some(first) if first.iter().any(|s| s.vertices.contains(t.root())) => {}
        _ => return violated("layer-1", "root not in the first layer"),
    }
    for (li, layer) in split.layers.iter().enumerate() {
        for tree in layer {
            check_subtree(t, tree)?;
        }
        if layer.is_empty() {
            return violated("layering", format!("layer {} is empty", li + 1));
        }
    }
    // Every edge: intra-layer edges match the layer's polarity,
    // cross-layer edges connect consecutive layers in the right
    // direction (odd layer -> next, previous <- even layer, 1-based).
    for v in 0..m {
        let Some((p, dir)) = t.parent_of(v) else { continue };
        let (lv, lp) = (split.layer_of[v], split.layer_of[p]);
        if lv == lp {
            let expected = if lp % 2 == 0 { EdgeDir::Toward } else { EdgeDir::Away };
            if dir != expected {
                return violated(
                    "polarity",
                    format!("edge at {v} disagrees with layer {} polarity", lp + 1),
                );
            }
        } else if lv == lp + 1 {
            // Child one layer deeper: for odd parent layer the edge must
            // run parent -> child, for even the other way.
            let expected = if lp % 2 == 0 { EdgeDir::Away } else { EdgeDir::Toward };
            if dir != expected {
                return violated(
                    "direction",
                    format!("cross-layer edge at {v} runs the wrong way"),
                );
            }
        } else {
            return violated(
                "layering",
                format!("edge at {v} jumps from layer {} to {}", lp + 1, lv + 1),
            );
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::TreeOrientation;

    fn qualifying_tree(m: usize, alpha: f64, seed: u64) -> OrientedTree {
        let budget = int_cap((m as f64).powf(alpha)).max(2);
        let t = OrientedTree::random_with_max_leaves(m, budget, TreeOrientation::Out, seed);
        assert!(t.leaves().len() as f64 <= (m as f64).powf(alpha) + 1e-9);
        t
    }

    #[test]
    fn tree_split_on_out_path_16() {
        let t = OrientedTree::out_path(16);
        let s = tree_split(&t, 2.0, 0.25).unwrap();
        validate_tree_split(&t, 2.0, 0.25, &s).unwrap();
        assert!(s.parts.len() <= 8);
        // Hand-traced: parts {0..4}, {5..9}, {10..14}, {15}.
        assert_eq!(s.parts.len(), 4);
        assert_eq!(s.parts[0].vertices.to_vec(), vec![0, 1, 2, 3, 4]);
        assert_eq!(s.parts[3].vertices.to_vec(), vec![15]);
        assert!(s.leaf_flags[3] && !s.leaf_flags[0]);
        assert_eq!(s.quotient.m(), 4);
    }

    #[test]
    fn tree_split_single_vertex() {
        let t = OrientedTree::singleton();
        let s = tree_split(&t, 2.0, 0.2).unwrap();
        assert_eq!(s.parts.len(), 1);
        assert!(s.leaf_flags[0]);
        validate_tree_split(&t, 2.0, 0.2, &s).unwrap();
    }

    #[test]
    fn tree_split_rejects_leafy_trees() {
        let t = OrientedTree::out_star(20);
        // 19 leaves > 20^(1/6).
        match tree_split(&t, 2.0, 1.0 / 6.0) {
            Err(SplitError::TooManyLeaves { leaves, .. }) => assert_eq!(leaves, 19),
            other => panic!("expected leaf-bound error, got {other:?}"),
        }
        let p = OrientedTree::in_path(5);
        assert_eq!(tree_split(&p, 2.0, 0.2).unwrap_err(), SplitError::NotOutDirected);
    }

    #[test]
    fn tree_split_fuzz_both_parameterisations() {
        let alpha = 1.0 / 6.0;
        for seed in 0..120u64 {
            let m = 64 + (seed as usize * 31) % 400;
            let t = qualifying_tree(m, alpha, seed);
            for c in [2.0, 3.0] {
                let s = tree_split(&t, c, alpha).unwrap();
                if let Err(v) = validate_tree_split(&t, c, alpha, &s) {
                    panic!("seed {seed} m {m} c {c}: {v}");
                }
            }
        }
    }

    #[test]
    fn path_split_on_out_path_16() {
        let t = OrientedTree::out_path(16);
        let s = path_split(&t, 0.25).unwrap();
        validate_path_split(&t, 0.25, &s).unwrap();
        assert_eq!(s.parts.len(), 4);
        assert_eq!(s.parts[0], vec![0]);
        assert_eq!(s.parts[1], (1..9).collect::<Vec<_>>());
        assert_eq!(s.parts[2], (9..15).collect::<Vec<_>>());
        assert_eq!(s.parts[3], vec![15]);
        assert_eq!(s.junction_flags, vec![true, false, false, true]);
    }

    #[test]
    fn path_split_single_vertex() {
        let t = OrientedTree::singleton();
        let s = path_split(&t, 0.25).unwrap();
        assert_eq!(s.parts, vec![vec![0]]);
        validate_path_split(&t, 0.25, &s).unwrap();
    }

    #[test]
    fn path_split_fuzz() {
        let alpha = 1.0 / 6.0;
        for seed in 0..150u64 {
            let m = 64 + (seed as usize * 29) % 600;
            let t = qualifying_tree(m, alpha, 1000 + seed);
            let s = path_split(&t, alpha).unwrap();
            if let Err(v) = validate_path_split(&t, alpha, &s) {
                panic!("seed {seed} m {m}: {v}");
            }
        }
    }

    #[test]
    fn core_split_out_path_9() {
        let t = OrientedTree::out_path(9);
        let s = core_split(&t, 3);
        validate_core_split(&t, 3, &s, None).unwrap();
        assert_eq!(s.layers.len(), 3);
        assert_eq!(s.layers[0][0].vertices.to_vec(), vec![0, 1, 2, 3, 4, 5]);
        assert_eq!(s.layers[1][0].vertices.to_vec(), vec![6, 7]);
        assert_eq!(s.layers[2][0].vertices.to_vec(), vec![8]);
    }

    #[test]
    fn core_split_star_and_small_trees() {
        let star = OrientedTree::out_star(9);
        let s = core_split(&star, 3);
        validate_core_split(&star, 3, &s, None).unwrap();
        assert_eq!(s.layers[0][0].vertices.to_vec(), vec![0]);
        assert_eq!(s.layers[1].len(), 8);

        // Order <= k collapses to a single layer.
        let t = OrientedTree::random(5, TreeOrientation::Uniform, 3);
        let s = core_split(&t, 6);
        assert_eq!(s.layers.len(), 1);
        assert_eq!(s.layers[0][0].vertices.count(), 5);
        validate_core_split(&t, 6, &s, Some(1)).unwrap();
    }

    #[test]
    fn core_split_fuzz_sixth_root() {
        for seed in 0..200u64 {
            let m = 2 + (seed as usize * 37) % 999;
            let t = OrientedTree::random(m, TreeOrientation::Uniform, 2000 + seed);
            let k = ((m as f64).powf(1.0 / 6.0).ceil() as usize).max(2);
            let s = core_split(&t, k);
            if let Err(v) = validate_core_split(&t, k, &s, Some(6)) {
                panic!("seed {seed} m {m} k {k}: {v}");
            }
        }
    }

    #[test]
    fn dpl_path_spider_singleton() {
        let t = OrientedTree::out_path(6);
        let r = dpl(&t);
        validate_dpl(&t, &r).unwrap();
        assert_eq!(r.paths, vec![vec![1, 2, 3, 4, 5]]);
        assert_eq!(r.remainder.to_vec(), vec![0]);

        // Root with three legs of two vertices each.
        let spider = OrientedTree::new(vec![
            None,
            Some((0, EdgeDir::Away)),
            Some((1, EdgeDir::Away)),
            Some((0, EdgeDir::Away)),
            Some((3, EdgeDir::Away)),
            Some((0, EdgeDir::Away)),
            Some((5, EdgeDir::Away)),
        ])
        .unwrap();
        let r = dpl(&spider);
        validate_dpl(&spider, &r).unwrap();
        assert_eq!(r.paths, vec![vec![1, 2], vec![3, 4], vec![5, 6]]);
        assert_eq!(r.remainder.to_vec(), vec![0]);

        let one = OrientedTree::singleton();
        let r = dpl(&one);
        assert_eq!(r.paths, vec![vec![0]]);
        assert!(r.remainder.is_empty());
        validate_dpl(&one, &r).unwrap();
    }

    #[test]
    fn dpl_iterates_to_the_root() {
        for seed in 0..100u64 {
            let m = 1 + (seed as usize * 23) % 600;
            let mut t = OrientedTree::random(m, TreeOrientation::Out, 3000 + seed);
            let mut rounds = 0;
            loop {
                let r = dpl(&t);
                if let Err(v) = validate_dpl(&t, &r) {
                    panic!("seed {seed} m {m} round {rounds}: {v}");
                }
                match r.remainder_tree(&t) {
                    Some((next, _)) => t = next,
                    None => break,
                }
                rounds += 1;
                assert!(rounds <= m, "dpl failed to shrink");
            }
        }
    }

    #[test]
    fn in_out_split_examples() {
        // In-directed tree: one layer.
        let t = OrientedTree::random(30, TreeOrientation::In, 1);
        let s = in_out_split(&t);
        validate_in_out_split(&t, &s).unwrap();
        assert_eq!(s.layers.len(), 1);
        assert_eq!(s.layers[0][0].vertices.count(), 30);

        // Alternating path 0 -> 1 <- 2 -> 3 rooted at 0: four layers.
        let alt = OrientedTree::new(vec![
            None,
            Some((0, EdgeDir::Away)),
            Some((1, EdgeDir::Toward)),
            Some((2, EdgeDir::Away)),
        ])
        .unwrap();
        let s = in_out_split(&alt);
        validate_in_out_split(&alt, &s).unwrap();
        assert_eq!(s.layers.len(), 4);
        for (i, layer) in s.layers.iter().enumerate() {
            assert_eq!(layer.len(), 1);
            assert_eq!(layer[0].vertices.to_vec(), vec![i]);
        }
    }

    #[test]
    fn in_out_split_fuzz() {
        for seed in 0..200u64 {
            let m = 1 + (seed as usize * 19) % 500;
            let t = OrientedTree::random(m, TreeOrientation::Uniform, 4000 + seed);
            let s = in_out_split(&t);
            if let Err(v) = validate_in_out_split(&t, &s) {
                panic!("seed {seed} m {m}: {v}");
            }
        }
    }

    #[test]
    fn int_cap_snaps_near_integers() {
        assert_eq!(int_cap(8.0), 8);
        assert_eq!(int_cap(7.9999999995), 8);
        assert_eq!(int_cap(7.9), 7);
        assert_eq!(int_cap(16f64.powf(0.75)), 8);
        assert_eq!(int_cap(0.3), 0);
    }

    #[test]
    fn validators_catch_planted_defects() {
        let t = OrientedTree::out_path(16);
        let mut s = tree_split(&t, 2.0, 0.25).unwrap();
        // Move a vertex across parts: partition still exact, but the
        // subtree shape and clauses break.
        let moved = 9;
        s.parts[1].vertices.remove(moved);
        s.parts[2].vertices.insert(moved);
        assert!(validate_tree_split(&t, 2.0, 0.25, &s).is_err());

        let s = path_split(&t, 0.25).unwrap();
        let mut broken = s.clone();
        broken.junction_flags[0] = false;
        assert_eq!(
            validate_path_split(&t, 0.25, &broken).unwrap_err().clause,
            "(i)"
        );
        let mut broken = s.clone();
        broken.parts[1].reverse();
        assert!(validate_path_split(&t, 0.25, &broken).is_err());

        let r = dpl(&t);
        let mut broken = r.clone();
        broken.paths[0].pop();
        assert!(validate_dpl(&t, &broken).is_err());
    }
}
