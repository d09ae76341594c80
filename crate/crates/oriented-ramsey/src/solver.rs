//! The strategy ladder that hunts for a monochromatic copy of an
//! oriented tree in a 2-coloured tournament, plus the assembly glue the
//! individual strategies share: split skeletons, per-part candidate
//! sets, and the pipeline that turns a red-blue pair family into either
//! a red tree or a long blue path.

use std::collections::HashMap;

use serde::Serialize;

use crate::bitset::VertexSet;
use crate::coloring::{Color, ColoredTournament};
use crate::embed::{
    exact_embed, find_tree_in_sparse_complement, int_ceil, long_cycle, low_outdegree_ordering,
    mindegree_pair, validate_embedding, Embedding, LowOutDegree, MindegreePair,
};
use crate::machinery::{
    build_aux_digraph, greedy_rooted, red_blue_pairs_from_cycles, AuxRule, AuxiliaryDigraph,
    CycleMode, MachineryError, PairsOrPath, RedBluePairs, SolverConfig,
};
use crate::rng::derive_seed;
use crate::split::{in_out_split, int_cap, path_split, tree_split, PathSplit, TreeSplit};
use crate::tree::{EdgeDir, OrientedTree};

// =========================================================================
// Split skeletons and candidate sets
// =========================================================================

/// A split of the target tree reduced to what assembly needs: which tree
/// vertices form each part, where each part is rooted, and through which
/// vertex of which earlier part the part hangs off the rest of the tree.
#[derive(Clone, Debug)]
pub struct SplitSkeleton {
    /// Tree vertices of each part (ground set = tree order).
    pub parts: Vec<VertexSet>,
    /// Root of each part.
    pub roots: Vec<usize>,
    /// For every part except the one holding the tree root: the parent
    /// part and the tree vertex inside it whose child is this part's root.
    pub connectors: Vec<Option<(usize, usize)>>,
}

impl SplitSkeleton {
    pub fn from_tree_split(t: &OrientedTree, split: &TreeSplit) -> Self {
        let parts: Vec<VertexSet> = split.parts.iter().map(|p| p.vertices.clone()).collect();
        let roots: Vec<usize> = split.parts.iter().map(|p| p.root).collect();
        let connectors = roots
            .iter()
            .map(|&r| t.parent_of(r).map(|(p, _)| (split.part_of[p], p)))
            .collect();
        SplitSkeleton {
            parts,
            roots,
            connectors,
        }
    }

    pub fn from_path_split(t: &OrientedTree, split: &PathSplit) -> Self {
        let m = t.m();
        let parts: Vec<VertexSet> = split
            .parts
            .iter()
            .map(|p| VertexSet::from_iter(m, p.iter().copied()))
            .collect();
        // The root of a part is its unique vertex whose tree parent lies
        // outside the part (or is absent).
        let roots: Vec<usize> = split
            .parts
            .iter()
            .enumerate()
            .map(|(i, p)| {
                *p.iter()
                    .find(|&&v| match t.parent_of(v) {
                        None => true,
                        Some((pa, _)) => !parts[i].contains(pa),
                    })
                    .expect("every part hangs off one vertex")
            })
            .collect();
        let connectors = roots
            .iter()
            .map(|&r| t.parent_of(r).map(|(p, _)| (split.part_of[p], p)))
            .collect();
        SplitSkeleton {
            parts,
            roots,
            connectors,
        }
    }
}

/// Per-part host material: `sets[i]` is where part i's root may land,
/// `regions[i]` is where the whole part must stay. Regions are pairwise
/// disjoint, so parts can never collide across regions and a part
/// embedder only needs to keep its own image injective.
#[derive(Clone, Debug)]
pub struct CandidateSets {
    pub sets: Vec<VertexSet>,
    pub regions: Vec<VertexSet>,
}

impl CandidateSets {
    pub fn check(&self, skeleton: &SplitSkeleton) -> Result<(), MachineryError> {
        if self.sets.len() != skeleton.parts.len() || self.regions.len() != skeleton.parts.len() {
            return Err(MachineryError::BadConfig {
                reason: format!(
                    "{} candidate sets and {} regions for {} parts",
                    self.sets.len(),
                    self.regions.len(),
                    skeleton.parts.len()
                ),
            });
        }
        for (i, set) in self.sets.iter().enumerate() {
            if set.is_empty() {
                return Err(MachineryError::EmptyCandidates { part: i });
            }
            if !set.is_subset_of(&self.regions[i]) {
                return Err(MachineryError::BadConfig {
                    reason: format!("candidate set of part {i} leaves its region"),
                });
            }
        }
        for i in 0..self.regions.len() {
            for j in i + 1..self.regions.len() {
                if !self.regions[i].is_disjoint(&self.regions[j]) {
                    return Err(MachineryError::OverlappingParts { i, j });
                }
            }
        }
        Ok(())
    }
}

/// Embeds the target part by part, parents first. The root of part 0
/// takes the first free candidate; every later part root must be a
/// colour-out-neighbour (or in-neighbour, for edges pointing toward the
/// root) of its connector's image among its own candidates. The part
/// embedder receives `(part, root_host)` and returns
/// `(tree vertex, host)` pairs covering exactly that part, or `None`.
pub fn assemble_from_candidates(
    g: &ColoredTournament,
    color: Color,
    t: &OrientedTree,
    skeleton: &SplitSkeleton,
    cands: &CandidateSets,
    embedder: &mut dyn FnMut(usize, usize) -> Option<Vec<(usize, usize)>>,
) -> Result<Embedding, MachineryError> {
    cands.check(skeleton)?;
    let n = g.n();
    let mut map = vec![usize::MAX; t.m()];
    let mut used = VertexSet::empty(n);
    for part in 0..skeleton.parts.len() {
        let root_host = match skeleton.connectors[part] {
            None => cands.sets[part].iter().find(|&h| !used.contains(h)),
            Some((parent_part, u)) => {
                debug_assert!(parent_part < part, "parents are assembled first");
                let hu = map[u];
                debug_assert_ne!(hu, usize::MAX);
                let (_, dir) = t.parent_of(skeleton.roots[part]).expect("connector edge");
                match dir {
                    EdgeDir::Away => g
                        .iter_out_in(color, hu, &cands.sets[part])
                        .find(|&h| !used.contains(h)),
                    EdgeDir::Toward => g
                        .iter_in_in(color, hu, &cands.sets[part])
                        .find(|&h| !used.contains(h)),
                }
            }
        }
        .ok_or(MachineryError::NoConnection { part, color })?;
        let local = embedder(part, root_host).ok_or(MachineryError::PartEmbedFailed { part })?;
        // Contract checks: the pairs must cover this part exactly, stay
        // inside its region, avoid earlier parts, and pin the root.
        let mut seen = VertexSet::empty(t.m());
        let mut hosts = VertexSet::empty(n);
        for &(tv, host) in &local {
            let fresh = skeleton.parts[part].contains(tv)
                && !seen.contains(tv)
                && cands.regions[part].contains(host)
                && !used.contains(host)
                && !hosts.contains(host)
                && (tv != skeleton.roots[part] || host == root_host);
            if !fresh {
                return Err(MachineryError::PartEmbedFailed { part });
            }
            seen.insert(tv);
            hosts.insert(host);
        }
        if seen.count() != skeleton.parts[part].count() || !seen.contains(skeleton.roots[part]) {
            return Err(MachineryError::PartEmbedFailed { part });
        }
        for &(tv, host) in &local {
            map[tv] = host;
            used.insert(host);
        }
    }
    Ok(Embedding {
        map,
        color: Some(color),
    })
}

/// Default part embedder: walks the part's subtree breadth-first and
/// gives each child the first free host of the right colour adjacency
/// inside the region.
pub fn greedy_part_embed(
    g: &ColoredTournament,
    color: Color,
    t: &OrientedTree,
    part: &VertexSet,
    root: usize,
    region: &VertexSet,
    root_host: usize,
) -> Option<Vec<(usize, usize)>> {
    if !region.contains(root_host) {
        return None;
    }
    let mut used = VertexSet::empty(g.n());
    used.insert(root_host);
    let mut host_of: HashMap<usize, usize> = HashMap::new();
    host_of.insert(root, root_host);
    let mut out = vec![(root, root_host)];
    let mut queue = vec![root];
    let mut qi = 0;
    while qi < queue.len() {
        let v = queue[qi];
        qi += 1;
        let hv = host_of[&v];
        for &c in t.children(v) {
            if !part.contains(c) {
                continue;
            }
            let (_, dir) = t.parent_of(c).expect("child has a parent");
            let host = match dir {
                EdgeDir::Away => g.iter_out_in(color, hv, region).find(|&h| !used.contains(h)),
                EdgeDir::Toward => g.iter_in_in(color, hv, region).find(|&h| !used.contains(h)),
            }?;
            used.insert(host);
            host_of.insert(c, host);
            out.push((c, host));
            queue.push(c);
        }
    }
    Some(out)
}

// =========================================================================
// In/out layering over a mindegree pair
// =========================================================================

/// Embeds a mixed-orientation tree across a mindegree pair: the layers
/// of the in/out split alternate between the two sides, so every edge
/// that crosses layers runs from A out into B or into B from A, which is
/// exactly what the pair certifies. Each layer tree is handed to
/// `embedder(free, allowed_roots, local_tree)`, which must return a host
/// per local vertex with the root inside `allowed_roots`.
pub fn inout_embed(
    g: &ColoredTournament,
    pair: &MindegreePair,
    t: &OrientedTree,
    embedder: &mut dyn FnMut(&VertexSet, &VertexSet, &OrientedTree) -> Option<Vec<usize>>,
) -> Result<Embedding, MachineryError> {
    let split = in_out_split(t);
    let n = g.n();
    let color = pair.color;
    let mut map = vec![usize::MAX; t.m()];
    let mut used = VertexSet::empty(n);
    for (li, layer) in split.layers.iter().enumerate() {
        let side = if li % 2 == 0 { &pair.a } else { &pair.b };
        for sub in layer {
            let free = side.difference(&used);
            let roots_pool = if sub.root == t.root() {
                free.clone()
            } else {
                let (p, dir) = t.parent_of(sub.root).expect("non-root layer tree");
                let hp = map[p];
                debug_assert_ne!(hp, usize::MAX, "previous layers are embedded");
                let mut pool = match dir {
                    EdgeDir::Away => g.out_set(color, hp),
                    EdgeDir::Toward => g.in_set(color, hp),
                };
                pool.intersect_with(&free);
                pool
            };
            if roots_pool.is_empty() {
                return Err(MachineryError::LayerStarved { layer: li + 1 });
            }
            let (local, old_ids) = t.induced(&sub.vertices).expect("layer trees are subtrees");
            let lmap = embedder(&free, &roots_pool, &local)
                .ok_or(MachineryError::LayerStarved { layer: li + 1 })?;
            if lmap.len() != local.m() || !roots_pool.contains(lmap[local.root()]) {
                return Err(MachineryError::BadConfig {
                    reason: format!("layer {} embedder broke its contract", li + 1),
                });
            }
            for (lv, &host) in lmap.iter().enumerate() {
                if !free.contains(host) || used.contains(host) {
                    return Err(MachineryError::BadConfig {
                        reason: format!("layer {} embedder broke its contract", li + 1),
                    });
                }
                map[old_ids[lv]] = host;
                used.insert(host);
            }
        }
    }
    Ok(Embedding {
        map,
        color: Some(color),
    })
}

// =========================================================================
// From red-blue pairs to a red tree or a long blue path
// =========================================================================

/// What the pair pipeline produced: a full copy of the target in red, or
/// a blue path long enough to host any order-m directed path.
#[derive(Clone, Debug)]
pub enum PairsOutcome {
    RedTree(Embedding),
    BluePath(Vec<usize>),
}

/// Runs the pair family against the target: build the auxiliary digraph
/// on the A-sets, look for a red copy of the target's split quotient and
/// pull it down through nested candidate sets; if that fails and the
/// target is a directed path, lift a blue path of the auxiliary digraph
/// through the stored spanning paths instead.
pub fn tree_from_pairs(
    g: &ColoredTournament,
    t: &OrientedTree,
    rbp: &RedBluePairs,
    cfg: &SolverConfig,
) -> Result<PairsOutcome, MachineryError> {
    cfg.check()?;
    if let Err(v) = crate::machinery::validate_red_blue_pairs(g, rbp) {
        return Err(MachineryError::BadPairs {
            detail: format!("{}: {}", v.clause, v.detail),
        });
    }
    let k = rbp.k;
    let dense_count = int_ceil((1.0 - cfg.epsilon / 4.0) * k as f64).max(1);
    let degree_floor = int_ceil(cfg.epsilon / 2.0 * k as f64).max(1);
    let parts: Vec<VertexSet> = rbp.pairs.iter().map(|(a, _)| a.clone()).collect();
    let aux = build_aux_digraph(
        g,
        parts,
        &AuxRule::DenseOutDegree {
            counted: Color::Blue,
            dense_count,
            degree_floor,
        },
    )?;
    match red_tree_branch(g, t, rbp, &aux, cfg) {
        Ok(emb) => Ok(PairsOutcome::RedTree(emb)),
        Err(red_err) => {
            if t.path_sequence().is_some() {
                if let Some(path) = blue_path_branch(g, rbp, &aux, degree_floor) {
                    if path.len() >= t.m() {
                        return Ok(PairsOutcome::BluePath(path));
                    }
                }
            }
            Err(red_err)
        }
    }
}

fn red_tree_branch(
    g: &ColoredTournament,
    t: &OrientedTree,
    rbp: &RedBluePairs,
    aux: &AuxiliaryDigraph,
    cfg: &SolverConfig,
) -> Result<Embedding, MachineryError> {
    let split = tree_split(t, 2.0, cfg.alpha).map_err(|e| MachineryError::BadConfig {
        reason: e.to_string(),
    })?;
    let np = split.parts.len();
    if np > rbp.pairs.len() {
        return Err(MachineryError::NotEnoughPairs {
            needed: np,
            have: rbp.pairs.len(),
        });
    }
    let kappa = red_quotient_embed(aux, &split.quotient).ok_or(MachineryError::QuotientEmbedFailed)?;

    // Candidate sets, leaves up. For part i with children j (in quotient
    // order): X_s collects A-vertices with a red edge into the child's
    // ready set D_j; Y collects B-vertices feeding every X_s (the whole
    // A-set for childless parts) heavily enough to survive the greedy
    // part embedding; D_i collects A-vertices feeding Y.
    let n = g.n();
    let margin = (cfg.sigma * (n as f64).log2()).ceil() as usize;
    let mut d_sets = vec![VertexSet::empty(n); np];
    let mut y_sets = vec![VertexSet::empty(n); np];
    let mut x_sets: Vec<Vec<VertexSet>> = vec![Vec::new(); np];
    for i in (0..np).rev() {
        let (a_i, b_i) = &rbp.pairs[kappa[i]];
        let ti = split.parts[i].vertices.count();
        let need = ti + margin;
        let kids = split.quotient.children(i);
        let xs: Vec<VertexSet> = kids
            .iter()
            .map(|&j| {
                VertexSet::from_iter(
                    n,
                    a_i.iter()
                        .filter(|&v| g.first_out_in(Color::Red, v, &d_sets[j]).is_some()),
                )
            })
            .collect();
        let y = VertexSet::from_iter(
            n,
            b_i.iter().filter(|&w| {
                if xs.is_empty() {
                    g.out_count_in(Color::Red, w, a_i) >= need
                } else {
                    xs.iter().all(|x| g.out_count_in(Color::Red, w, x) >= need)
                }
            }),
        );
        let mut d = VertexSet::from_iter(
            n,
            a_i.iter()
                .filter(|&v| g.out_count_in(Color::Red, v, &y) >= ti),
        );
        // A part root that itself extends into child parts must also see
        // those children from wherever it lands.
        for (s, &j) in kids.iter().enumerate() {
            let (w, _) = t.parent_of(split.parts[j].root).expect("child part root");
            if w == split.parts[i].root {
                d.intersect_with(&xs[s]);
            }
        }
        if d.is_empty() {
            return Err(MachineryError::EmptyCandidates { part: i });
        }
        x_sets[i] = xs;
        y_sets[i] = y;
        d_sets[i] = d;
    }

    let skeleton = SplitSkeleton::from_tree_split(t, &split);
    let regions: Vec<VertexSet> = (0..np)
        .map(|i| {
            let (a, b) = &rbp.pairs[kappa[i]];
            a.union(b)
        })
        .collect();
    let cands = CandidateSets {
        sets: d_sets,
        regions,
    };

    let mut embedder = |part: usize, root_host: usize| -> Option<Vec<(usize, usize)>> {
        let (a_i, _) = &rbp.pairs[kappa[part]];
        let sub = &split.parts[part];
        let kids = split.quotient.children(part);
        let mut ext: HashMap<usize, usize> = HashMap::new();
        for (s, &j) in kids.iter().enumerate() {
            let (w, _) = t.parent_of(split.parts[j].root).expect("child part root");
            ext.insert(w, s);
        }
        let base_level = t.level(sub.root);
        let mut used = VertexSet::empty(n);
        used.insert(root_host);
        let mut host_of: HashMap<usize, usize> = HashMap::new();
        host_of.insert(sub.root, root_host);
        let mut out = vec![(sub.root, root_host)];
        let mut queue = vec![sub.root];
        let mut qi = 0;
        while qi < queue.len() {
            let v = queue[qi];
            qi += 1;
            let hv = host_of[&v];
            for &c in t.children(v) {
                if !sub.vertices.contains(c) {
                    continue;
                }
                // Odd depths inside the part live in Y on the B-side;
                // even depths stay on the A-side, routed into the
                // child-facing X-set where the part extends.
                let target: &VertexSet = if (t.level(c) - base_level) % 2 == 1 {
                    &y_sets[part]
                } else if let Some(&s) = ext.get(&c) {
                    &x_sets[part][s]
                } else if !x_sets[part].is_empty() {
                    &x_sets[part][0]
                } else {
                    a_i
                };
                let host = g
                    .iter_out_in(Color::Red, hv, target)
                    .find(|&h| !used.contains(h))?;
                used.insert(host);
                host_of.insert(c, host);
                out.push((c, host));
                queue.push(c);
            }
        }
        Some(out)
    };
    assemble_from_candidates(g, Color::Red, t, &skeleton, &cands, &mut embedder)
}

/// Small backtracking search for a red copy of the quotient tree in the
/// auxiliary digraph. The digraph is complete but not a tournament, so
/// the generic embedders do not apply.
fn red_quotient_embed(aux: &AuxiliaryDigraph, q: &OrientedTree) -> Option<Vec<usize>> {
    let tp = aux.order();
    if q.m() > tp {
        return None;
    }
    let order = q.bfs_order();
    let mut assign = vec![usize::MAX; q.m()];
    let mut used = vec![false; tp];
    let mut budget: u64 = 1 << 20;
    if place_quotient(aux, q, &order, 0, &mut assign, &mut used, &mut budget) {
        Some(assign)
    } else {
        None
    }
}

fn place_quotient(
    aux: &AuxiliaryDigraph,
    q: &OrientedTree,
    order: &[usize],
    pos: usize,
    assign: &mut [usize],
    used: &mut [bool],
    budget: &mut u64,
) -> bool {
    if pos == order.len() {
        return true;
    }
    let v = order[pos];
    let parent = q.parent_of(v).map(|(p, dir)| (assign[p], dir));
    for cand in 0..aux.order() {
        if used[cand] {
            continue;
        }
        if let Some((pa, dir)) = parent {
            let ok = match dir {
                EdgeDir::Away => aux.color(pa, cand) == Color::Red,
                EdgeDir::Toward => aux.color(cand, pa) == Color::Red,
            };
            if !ok {
                continue;
            }
        }
        if *budget == 0 {
            return false;
        }
        *budget -= 1;
        assign[v] = cand;
        used[cand] = true;
        if place_quotient(aux, q, order, pos + 1, assign, used, budget) {
            return true;
        }
        used[cand] = false;
        assign[v] = usize::MAX;
    }
    false
}

/// Walks a blue path of the auxiliary digraph down to the hosts: inside
/// each A-set the stored spanning path is cut to start at the first
/// vertex reachable from the previous segment's end and to stop at the
/// last vertex that still feeds the next A-set heavily.
fn blue_path_branch(
    g: &ColoredTournament,
    rbp: &RedBluePairs,
    aux: &AuxiliaryDigraph,
    degree_floor: usize,
) -> Option<Vec<usize>> {
    let kpath = longest_blue_kpath(aux);
    lift_blue_kpath(g, rbp, &kpath, degree_floor)
}

fn longest_blue_kpath(aux: &AuxiliaryDigraph) -> Vec<usize> {
    let tp = aux.order();
    if tp == 0 {
        return Vec::new();
    }
    if tp <= 14 {
        // Subset dynamic programming: dp[mask] holds the feasible path
        // endpoints over that vertex set.
        let full = 1usize << tp;
        let mut dp = vec![0u16; full];
        for v in 0..tp {
            dp[1 << v] = 1 << v;
        }
        let mut best_mask = 1usize;
        for mask in 1..full {
            if dp[mask] == 0 {
                continue;
            }
            if mask.count_ones() > best_mask.count_ones() {
                best_mask = mask;
            }
            for last in 0..tp {
                if dp[mask] & (1 << last) == 0 {
                    continue;
                }
                for next in 0..tp {
                    if mask & (1 << next) == 0 && aux.color(last, next) == Color::Blue {
                        dp[mask | (1 << next)] |= 1 << next;
                    }
                }
            }
        }
        let mut mask = best_mask;
        let mut last = (0..tp).find(|&v| dp[mask] & (1 << v) != 0).expect("endpoint");
        let mut path = vec![last];
        while mask.count_ones() > 1 {
            let prev_mask = mask & !(1 << last);
            let prev = (0..tp)
                .find(|&p| dp[prev_mask] & (1 << p) != 0 && aux.color(p, last) == Color::Blue)
                .expect("dp transition has a source");
            mask = prev_mask;
            last = prev;
            path.push(prev);
        }
        path.reverse();
        path
    } else {
        // Greedy from every start, first free blue out-neighbour each step.
        let mut best: Vec<usize> = Vec::new();
        for start in 0..tp {
            let mut used = vec![false; tp];
            used[start] = true;
            let mut path = vec![start];
            loop {
                let tail = *path.last().unwrap();
                let next = (0..tp)
                    .find(|&v| !used[v] && aux.color(tail, v) == Color::Blue);
                match next {
                    Some(v) => {
                        used[v] = true;
                        path.push(v);
                    }
                    None => break,
                }
            }
            if path.len() > best.len() {
                best = path;
            }
        }
        best
    }
}

fn lift_blue_kpath(
    g: &ColoredTournament,
    rbp: &RedBluePairs,
    kpath: &[usize],
    degree_floor: usize,
) -> Option<Vec<usize>> {
    if kpath.is_empty() {
        return None;
    }
    let mut out: Vec<usize> = Vec::new();
    let mut prev_end: Option<usize> = None;
    for (step, &pi) in kpath.iter().enumerate() {
        let (a, _) = &rbp.pairs[pi];
        let seq = &rbp.blue_paths[pi];
        let us: Vec<usize> = seq.iter().copied().filter(|&v| a.contains(v)).collect();
        let p = match prev_end {
            None => 0,
            Some(v) => us
                .iter()
                .position(|&u| g.has_colored_edge(Color::Blue, v, u))?,
        };
        let q = if step + 1 == kpath.len() {
            us.len() - 1
        } else {
            let next_a = &rbp.pairs[kpath[step + 1]].0;
            us.iter()
                .rposition(|&u| g.out_count_in(Color::Blue, u, next_a) >= degree_floor)?
        };
        if p > q {
            return None;
        }
        // The first segment takes the whole prefix of its path and the
        // last takes the whole suffix; only interior cut points carry
        // the reachability and continuation constraints.
        let from = if step == 0 {
            0
        } else {
            seq.iter().position(|&x| x == us[p]).expect("u on its path")
        };
        let to = if step + 1 == kpath.len() {
            seq.len() - 1
        } else {
            seq.iter().position(|&x| x == us[q]).expect("u on its path")
        };
        out.extend_from_slice(&seq[from..=to]);
        prev_end = Some(us[q]);
    }
    Some(out)
}

// =========================================================================
// The strategy ladder
// =========================================================================

/// One line of the solve trace: which strategy spoke and what it said.
#[derive(Clone, Debug, Serialize)]
pub struct TraceEvent {
    pub strategy: &'static str,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub enum SolveOutcome {
    Found {
        color: Color,
        embedding: Embedding,
        strategy: &'static str,
    },
    /// `refuted` is set only when the exhaustive fallback completed in
    /// both colours without finding a copy.
    NotFound { refuted: bool },
}

#[derive(Clone, Debug, Serialize)]
pub struct SolveReport {
    pub outcome: SolveOutcome,
    pub trace: Vec<TraceEvent>,
}

impl SolveReport {
    pub fn found(&self) -> bool {
        matches!(self.outcome, SolveOutcome::Found { .. })
    }
}

fn ev(strategy: &'static str, detail: String) -> TraceEvent {
    TraceEvent { strategy, detail }
}

/// Tries the cheap certificates first and the exhaustive search last:
/// sparse complement, low-out-degree bucket assembly, dense cores and
/// cycle pairs, mindegree-pair layering, then exact backtracking. Every
/// candidate embedding is re-validated against the host before it is
/// reported; `NotFound { refuted: true }` means the exact search proved
/// there is no copy in either colour.
pub fn find_monochromatic_tree(
    g: &ColoredTournament,
    t: &OrientedTree,
    cfg: &SolverConfig,
) -> SolveReport {
    let mut trace: Vec<TraceEvent> = Vec::new();
    let n = g.n();
    let m = t.m();
    if let Err(e) = cfg.check() {
        trace.push(ev("config", e.to_string()));
        return SolveReport {
            outcome: SolveOutcome::NotFound { refuted: false },
            trace,
        };
    }
    if m > n {
        trace.push(ev("size", format!("target order {m} exceeds host order {n}")));
        return SolveReport {
            outcome: SolveOutcome::NotFound { refuted: true },
            trace,
        };
    }
    if m == 1 {
        return SolveReport {
            outcome: SolveOutcome::Found {
                color: Color::Red,
                embedding: Embedding {
                    map: vec![0],
                    color: Some(Color::Red),
                },
                strategy: "single",
            },
            trace,
        };
    }
    let full = VertexSet::full(n);

    // Sparse complement: if one colour is rare, greedy embedding in the
    // other colour succeeds outright.
    for color in [Color::Red, Color::Blue] {
        match find_tree_in_sparse_complement(g, &full, t, color, cfg.epsilon) {
            Ok(emb) => {
                if let Some(report) = accept(g, t, emb, "sparse", &mut trace) {
                    return report;
                }
            }
            Err(e) => trace.push(ev("sparse", format!("{color}: {e}"))),
        }
    }

    // Bucket assembly along a low-out-degree ordering of the other colour.
    for color in [Color::Red, Color::Blue] {
        match bucket_strategy(g, t, color, cfg) {
            Ok(emb) => {
                if let Some(report) = accept(g, t, emb, "buckets", &mut trace) {
                    return report;
                }
            }
            Err(msg) => trace.push(ev("buckets", format!("{color}: {msg}"))),
        }
    }

    // Directed-path shortcut: a core of high colour-out-degree carries a
    // cycle long enough to read the path off directly.
    if t.path_sequence().is_some() {
        for color in [Color::Red, Color::Blue] {
            match dense_path_shortcut(g, t, color) {
                Ok(emb) => {
                    if let Some(report) = accept(g, t, emb, "cycle-path", &mut trace) {
                        return report;
                    }
                }
                Err(msg) => trace.push(ev("cycle-path", msg)),
            }
        }
    }

    // Full cycle pipeline: peel blue cycles, form red-blue pairs, run
    // the pair machinery.
    for color in [Color::Red, Color::Blue] {
        match cycle_pairs_strategy(g, t, color, cfg) {
            Ok(emb) => {
                if let Some(report) = accept(g, t, emb, "cycle-pairs", &mut trace) {
                    return report;
                }
            }
            Err(msg) => trace.push(ev("cycle-pairs", format!("{color}: {msg}"))),
        }
    }

    // Mindegree pair plus in/out layering.
    for color in [Color::Red, Color::Blue] {
        let seed = derive_seed(cfg.seed, "solver-pair", color_index(color));
        match mindegree_pair(g, color, &full, cfg.delta_inout, seed, cfg.mindegree_trials) {
            Ok(pair) => {
                let mut layer_embedder =
                    |allowed: &VertexSet, roots: &VertexSet, sub: &OrientedTree| {
                        greedy_rooted(g, color, allowed, roots, sub)
                    };
                match inout_embed(g, &pair, t, &mut layer_embedder) {
                    Ok(emb) => {
                        if let Some(report) = accept(g, t, emb, "inout", &mut trace) {
                            return report;
                        }
                    }
                    Err(e) => trace.push(ev("inout", format!("{color}: {e}"))),
                }
            }
            Err(e) => trace.push(ev("inout", format!("{color}: {e}"))),
        }
    }

    // Exhaustive fallback.
    let mut refuted = true;
    for color in [Color::Red, Color::Blue] {
        match exact_embed(g, t, Some(color), cfg.exact_budget) {
            Ok(Some(emb)) => match accept(g, t, emb, "exact", &mut trace) {
                Some(report) => return report,
                None => refuted = false,
            },
            Ok(None) => trace.push(ev("exact", format!("{color}: no copy"))),
            Err(e) => {
                refuted = false;
                trace.push(ev("exact", format!("{color}: {e}")));
            }
        }
    }
    SolveReport {
        outcome: SolveOutcome::NotFound { refuted },
        trace,
    }
}

fn color_index(c: Color) -> u64 {
    match c {
        Color::Red => 0,
        Color::Blue => 1,
    }
}

/// Re-validates a candidate embedding; a failure is recorded and the
/// ladder keeps going.
fn accept(
    g: &ColoredTournament,
    t: &OrientedTree,
    emb: Embedding,
    strategy: &'static str,
    trace: &mut Vec<TraceEvent>,
) -> Option<SolveReport> {
    match validate_embedding(g, t, &emb) {
        Ok(()) => {
            let color = emb.color.expect("strategies claim a colour");
            trace.push(ev(strategy, format!("{color} copy confirmed")));
            Some(SolveReport {
                outcome: SolveOutcome::Found {
                    color,
                    embedding: emb,
                    strategy,
                },
                trace: std::mem::take(trace),
            })
        }
        Err(violation) => {
            trace.push(ev(strategy, format!("rejected: {violation}")));
            None
        }
    }
}

/// Orders the hosts so later vertices receive few edges of the opposite
/// colour from earlier ones, cuts the ordering into one interval per
/// part of the target's path split, and assembles part by part with each
/// part confined to its interval. Parts are laid out in quotient
/// preorder so every connector points forward. In-directed targets run
/// against the reversed host.
fn bucket_strategy(
    g: &ColoredTournament,
    t: &OrientedTree,
    color: Color,
    cfg: &SolverConfig,
) -> Result<Embedding, String> {
    if t.is_in_directed() && !t.is_out_directed() {
        let emb = bucket_strategy(&g.reversed(), &t.reversed(), color, cfg)?;
        return Ok(Embedding {
            map: emb.map,
            color: Some(color),
        });
    }
    if !t.is_out_directed() {
        return Err("needs a directed target".into());
    }
    let n = g.n();
    let full = VertexSet::full(n);
    let threshold = int_cap(cfg.medium_low()).max(1);
    let ord = if threshold >= n {
        // Any vertex qualifies at every step, so the peel is the
        // identity.
        (0..n).collect()
    } else {
        match low_outdegree_ordering(g, color.other(), &full, threshold) {
            LowOutDegree::Ordering(o) => o,
            LowOutDegree::DenseWitness(w) => {
                return Err(format!(
                    "{} core of {} vertices above out-degree {}",
                    color.other(),
                    w.count(),
                    threshold
                ))
            }
        }
    };
    let split = path_split(t, cfg.alpha).map_err(|e| e.to_string())?;
    let np = split.parts.len();
    let bucket = n / np;
    if bucket == 0 {
        return Err(format!("{np} parts but only {n} hosts"));
    }
    let pre = split.quotient.dfs_preorder();
    let mut slot = vec![0usize; np];
    for (pos, &p) in pre.iter().enumerate() {
        slot[p] = pos;
    }
    let sets: Vec<VertexSet> = (0..np)
        .map(|p| {
            let b = slot[p];
            VertexSet::from_iter(n, ord[b * bucket..(b + 1) * bucket].iter().copied())
        })
        .collect();
    let skeleton = SplitSkeleton::from_path_split(t, &split);
    let cands = CandidateSets {
        sets: sets.clone(),
        regions: sets,
    };
    let mut embedder = |part: usize, root_host: usize| {
        greedy_part_embed(
            g,
            color,
            t,
            &skeleton.parts[part],
            skeleton.roots[part],
            &cands.regions[part],
            root_host,
        )
    };
    assemble_from_candidates(g, color, t, &skeleton, &cands, &mut embedder).map_err(|e| e.to_string())
}

/// For directed-path targets: a set where every vertex keeps colour-out-
/// degree at least m-1 carries a colour cycle of order at least m, and
/// the path reads off its consecutive edges.
fn dense_path_shortcut(g: &ColoredTournament, t: &OrientedTree, color: Color) -> Result<Embedding, String> {
    let m = t.m();
    let full = VertexSet::full(g.n());
    let threshold = m.saturating_sub(2);
    let witness = match low_outdegree_ordering(g, color, &full, threshold) {
        LowOutDegree::DenseWitness(w) => w,
        LowOutDegree::Ordering(_) => {
            return Err(format!("{color}: no core above out-degree {threshold}"))
        }
    };
    let cyc = long_cycle(g, color, &witness).map_err(|e| format!("{color}: {e}"))?;
    if cyc.len() < m {
        return Err(format!("{color}: cycle of order {} is short of {m}", cyc.len()));
    }
    path_embedding(t, &cyc, color).ok_or_else(|| format!("{color}: target is not a path"))
}

/// Lays a directed-path target along consecutive hosts.
fn path_embedding(t: &OrientedTree, hosts: &[usize], color: Color) -> Option<Embedding> {
    let seq = t.path_sequence()?;
    if hosts.len() < seq.len() {
        return None;
    }
    let mut map = vec![0usize; t.m()];
    for (i, &tv) in seq.iter().enumerate() {
        map[tv] = hosts[i];
    }
    Some(Embedding {
        map,
        color: Some(color),
    })
}

/// The full cycle pipeline for one choice of tree colour. The tree
/// colour is normalised to red (swapping the host's colours when
/// needed) and in-directed targets run reversed, so the pair machinery
/// can keep its fixed red/blue roles. Blue cycles are collected by
/// peeling: every peel-resistant core has high blue out-degree and so
/// carries a long blue cycle; cycles inside the medium window and the
/// long leftovers are tried separately.
fn cycle_pairs_strategy(
    g: &ColoredTournament,
    t: &OrientedTree,
    color: Color,
    cfg: &SolverConfig,
) -> Result<Embedding, String> {
    let swapped = color == Color::Blue;
    let host0 = if swapped { g.color_swapped() } else { g.clone() };
    let flip = t.is_in_directed() && !t.is_out_directed();
    let (host, tree) = if flip {
        (host0.reversed(), t.reversed())
    } else {
        (host0, t.clone())
    };
    if !tree.is_out_directed() && tree.path_sequence().is_none() {
        return Err("target is neither out-directed nor a path".into());
    }
    let n = host.n();
    let m = tree.m();
    let med_lo = int_ceil(cfg.medium_low()).max(1);
    let med_hi = int_cap(cfg.medium_high());
    let threshold = med_lo.saturating_sub(2).max(1);
    let mut remaining = VertexSet::full(n);
    let mut cycles: Vec<Vec<usize>> = Vec::new();
    while !remaining.is_empty() && cycles.len() < 256 {
        match low_outdegree_ordering(&host, Color::Blue, &remaining, threshold) {
            LowOutDegree::Ordering(_) => break,
            LowOutDegree::DenseWitness(w) => {
                let cyc = long_cycle(&host, Color::Blue, &w).map_err(|e| e.to_string())?;
                for &v in &cyc {
                    remaining.remove(v);
                }
                cycles.push(cyc);
            }
        }
    }
    if cycles.is_empty() {
        return Err(format!("no blue cycle at scale {med_lo}"));
    }
    let medium: Vec<Vec<usize>> = cycles
        .iter()
        .filter(|c| c.len() >= med_lo && c.len() <= med_hi)
        .cloned()
        .collect();
    let long: Vec<Vec<usize>> = cycles.iter().filter(|c| c.len() > med_hi).cloned().collect();
    let mut last_err = String::new();
    for (mode, family) in [(CycleMode::Medium, medium), (CycleMode::Long, long)] {
        if family.is_empty() {
            continue;
        }
        let lifted = match red_blue_pairs_from_cycles(&host, &family, mode, cfg) {
            Ok(PairsOrPath::Pairs(rbp)) => match tree_from_pairs(&host, &tree, &rbp, cfg) {
                Ok(PairsOutcome::RedTree(emb)) => Some((emb.map, Color::Red)),
                Ok(PairsOutcome::BluePath(p)) => match path_embedding(&tree, &p, Color::Blue) {
                    Some(emb) => Some((emb.map, Color::Blue)),
                    None => {
                        last_err = "lifted blue path does not fit the target".into();
                        None
                    }
                },
                Err(e) => {
                    last_err = e.to_string();
                    None
                }
            },
            Ok(PairsOrPath::BluePath(p)) => {
                if p.len() >= m {
                    match path_embedding(&tree, &p, Color::Blue) {
                        Some(emb) => Some((emb.map, Color::Blue)),
                        None => {
                            last_err = "blue path but the target is not a path".into();
                            None
                        }
                    }
                } else {
                    last_err = format!("blue path of order {} is short of {m}", p.len());
                    None
                }
            }
            Err(e) => {
                last_err = e.to_string();
                None
            }
        };
        if let Some((map, host_color)) = lifted {
            // Reversing host and tree together preserves the map, and the
            // colour swap undoes itself.
            let final_color = if swapped { host_color.other() } else { host_color };
            return Ok(Embedding {
                map,
                color: Some(final_color),
            });
        }
    }
    Err(if last_err.is_empty() {
        "no cycle family inside the windows".into()
    } else {
        last_err
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coloring::block_coloring;
    use crate::tournament::Tournament;
    use crate::tree::TreeOrientation;

    fn transitive(n: usize) -> Tournament {
        Tournament::from_fn(n, |_, _| true)
    }

    fn all_red(n: usize, seed: u64) -> ColoredTournament {
        ColoredTournament::monochromatic(Tournament::random(n, seed), Color::Red)
    }

    #[test]
    fn skeletons_from_both_splits_are_consistent() {
        for seed in 0..12u64 {
            let t = OrientedTree::random_with_max_leaves(81, 3, TreeOrientation::Out, seed);
            let ts = tree_split(&t, 2.0, 0.25).unwrap();
            let ps = path_split(&t, 0.25).unwrap();
            for skeleton in [
                SplitSkeleton::from_tree_split(&t, &ts),
                SplitSkeleton::from_path_split(&t, &ps),
            ] {
                let mut seen = VertexSet::empty(t.m());
                for (i, part) in skeleton.parts.iter().enumerate() {
                    assert!(part.contains(skeleton.roots[i]));
                    for v in part.iter() {
                        assert!(!seen.contains(v));
                        seen.insert(v);
                    }
                }
                assert_eq!(seen.count(), t.m());
                for (i, conn) in skeleton.connectors.iter().enumerate() {
                    match conn {
                        None => assert_eq!(skeleton.roots[i], t.root()),
                        Some((pp, u)) => {
                            assert!(*pp < i, "parents come first");
                            assert!(skeleton.parts[*pp].contains(*u));
                            let (p, _) = t.parent_of(skeleton.roots[i]).unwrap();
                            assert_eq!(p, *u);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn skeleton_of_path_sixteen_matches_hand_split() {
        let t = OrientedTree::out_path(16);
        let ts = tree_split(&t, 2.0, 0.25).unwrap();
        let skeleton = SplitSkeleton::from_tree_split(&t, &ts);
        assert_eq!(skeleton.roots, vec![0, 5, 10, 15]);
        assert_eq!(skeleton.connectors[0], None);
        assert_eq!(skeleton.connectors[1], Some((0, 4)));
        assert_eq!(skeleton.connectors[2], Some((1, 9)));
        assert_eq!(skeleton.connectors[3], Some((2, 14)));
    }

    #[test]
    fn candidate_checks_reject_bad_families() {
        let skeleton = SplitSkeleton {
            parts: vec![VertexSet::from_iter(4, 0..2), VertexSet::from_iter(4, 2..4)],
            roots: vec![0, 2],
            connectors: vec![None, Some((0, 1))],
        };
        let np = skeleton.parts.len();
        let region = |lo: usize, hi: usize| VertexSet::from_iter(8, lo..hi);
        let good = CandidateSets {
            sets: (0..np).map(|i| region(2 * i, 2 * i + 1)).collect(),
            regions: (0..np).map(|i| region(2 * i, 2 * i + 2)).collect(),
        };
        assert!(good.check(&skeleton).is_ok());

        let mut short = good.clone();
        short.sets.pop();
        assert!(matches!(
            short.check(&skeleton),
            Err(MachineryError::BadConfig { .. })
        ));

        let mut empty = good.clone();
        empty.sets[0] = VertexSet::empty(8);
        assert_eq!(
            empty.check(&skeleton),
            Err(MachineryError::EmptyCandidates { part: 0 })
        );

        let mut escape = good.clone();
        escape.sets[1] = region(0, 1);
        assert!(matches!(
            escape.check(&skeleton),
            Err(MachineryError::BadConfig { .. })
        ));

        let mut overlap = good;
        overlap.regions[1] = region(0, 4);
        overlap.sets[1] = region(2, 3);
        assert_eq!(
            overlap.check(&skeleton),
            Err(MachineryError::OverlappingParts { i: 0, j: 1 })
        );
    }

    #[test]
    fn assemble_follows_connectors_and_reports_starvation() {
        // Transitive orientation; only the edges out of vertex 1 into
        // {3, 4, 5} are blue, everything else red.
        let g = ColoredTournament::from_fn(transitive(8), |i, j| {
            if i == 1 && (3..6).contains(&j) {
                Color::Blue
            } else {
                Color::Red
            }
        });
        let t = OrientedTree::out_path(4);
        let skeleton = SplitSkeleton {
            parts: vec![VertexSet::from_iter(4, 0..2), VertexSet::from_iter(4, 2..4)],
            roots: vec![0, 2],
            connectors: vec![None, Some((0, 1))],
        };
        let sets = vec![VertexSet::from_iter(8, [0]), VertexSet::from_iter(8, [4])];
        let regions = vec![VertexSet::from_iter(8, 0..2), VertexSet::from_iter(8, 4..6)];
        let cands = CandidateSets {
            sets,
            regions: regions.clone(),
        };
        let mut embedder = |part: usize, root_host: usize| {
            greedy_part_embed(
                &g,
                Color::Red,
                &t,
                &skeleton.parts[part],
                skeleton.roots[part],
                &regions[part],
                root_host,
            )
        };
        // 1 -> 4 is blue, so the red connector cannot reach part 1.
        let err = assemble_from_candidates(&g, Color::Red, &t, &skeleton, &cands, &mut embedder)
            .unwrap_err();
        assert_eq!(
            err,
            MachineryError::NoConnection {
                part: 1,
                color: Color::Red
            }
        );
        // Widening the candidate set past the blue fan fixes it.
        let cands = CandidateSets {
            sets: vec![
                VertexSet::from_iter(8, [0]),
                VertexSet::from_iter(8, [4, 6]),
            ],
            regions: vec![VertexSet::from_iter(8, 0..2), VertexSet::from_iter(8, [4, 6, 7])],
        };
        let regions2 = cands.regions.clone();
        let mut embedder = |part: usize, root_host: usize| {
            greedy_part_embed(
                &g,
                Color::Red,
                &t,
                &skeleton.parts[part],
                skeleton.roots[part],
                &regions2[part],
                root_host,
            )
        };
        let emb = assemble_from_candidates(&g, Color::Red, &t, &skeleton, &cands, &mut embedder)
            .unwrap();
        assert_eq!(emb.map, vec![0, 1, 6, 7]);
        validate_embedding(&g, &t, &emb).unwrap();
    }

    #[test]
    fn greedy_part_embed_handles_both_edge_directions() {
        // Rotational tournament on 7 vertices: i -> j when j - i mod 7
        // is a square; every in- and out-degree is 3.
        let rot = Tournament::from_fn(7, |i, j| matches!((j + 7 - i) % 7, 1 | 2 | 4));
        let g = ColoredTournament::monochromatic(rot, Color::Red);
        let t = OrientedTree::in_path(3);
        let part = VertexSet::full(3);
        let region = VertexSet::full(7);
        let local = greedy_part_embed(&g, Color::Red, &t, &part, 0, &region, 2).unwrap();
        let mut map = vec![0; 3];
        for (tv, h) in local {
            map[tv] = h;
        }
        let emb = Embedding {
            map,
            color: Some(Color::Red),
        };
        validate_embedding(&g, &t, &emb).unwrap();
    }

    #[test]
    fn inout_embeds_mixed_trees_across_a_constructed_pair() {
        let g = all_red(100, 77);
        let n = g.n();
        let a = VertexSet::from_iter(n, (0..n).filter(|v| v % 2 == 0));
        let b = VertexSet::from_iter(n, (0..n).filter(|v| v % 2 == 1));
        let k_ab = a
            .iter()
            .map(|v| g.out_count_in(Color::Red, v, &b))
            .min()
            .unwrap();
        let k_ba = b
            .iter()
            .map(|v| g.in_count_in(Color::Red, v, &a))
            .min()
            .unwrap();
        let pair = MindegreePair {
            a,
            b,
            k: k_ab.min(k_ba),
            color: Color::Red,
        };
        crate::embed::validate_mindegree_pair(&g, &pair).unwrap();
        assert!(pair.k >= 12);
        for seed in 0..30u64 {
            let t = OrientedTree::random(8, TreeOrientation::Uniform, seed);
            let split = in_out_split(&t);
            let mut layer_embedder =
                |allowed: &VertexSet, roots: &VertexSet, sub: &OrientedTree| {
                    greedy_rooted(&g, Color::Red, allowed, roots, sub)
                };
            let emb = inout_embed(&g, &pair, &t, &mut layer_embedder)
                .unwrap_or_else(|e| panic!("seed {seed}: {e}"));
            validate_embedding(&g, &t, &emb).unwrap();
            for v in 0..t.m() {
                // Layers at even index (the in-directed ones) sit on the
                // even-vertex side.
                let expect_even = split.layer_of[v] % 2 == 0;
                assert_eq!(emb.map[v] % 2 == 0, expect_even, "seed {seed} vertex {v}");
            }
        }
    }

    #[test]
    fn inout_reports_starved_layers() {
        let g = ColoredTournament::monochromatic(transitive(6), Color::Red);
        let pair = MindegreePair {
            a: VertexSet::from_iter(6, 0..5),
            b: VertexSet::from_iter(6, [5]),
            k: 1,
            color: Color::Red,
        };
        crate::embed::validate_mindegree_pair(&g, &pair).unwrap();
        let t = OrientedTree::out_star(4);
        let mut layer_embedder = |allowed: &VertexSet, roots: &VertexSet, sub: &OrientedTree| {
            greedy_rooted(&g, Color::Red, allowed, roots, sub)
        };
        let err = inout_embed(&g, &pair, &t, &mut layer_embedder).unwrap_err();
        assert_eq!(err, MachineryError::LayerStarved { layer: 2 });
    }

    /// Sixteen red-blue pairs on an 8192-vertex host. Each 512-block
    /// splits into A (first 256) and B (last 256); A-internal
    /// consecutive edges are blue and form the spanning paths, A and B
    /// trade red edges in both directions via the parity rule, and
    /// everything across blocks is red and forward.
    fn pairs_host() -> (ColoredTournament, RedBluePairs) {
        let n = 8192;
        let block = 512;
        let half = 256;
        let orient = Tournament::from_fn(n, |i, j| {
            let same = i / block == j / block;
            if same && i % block < half && j % block >= half {
                // Within a block, half the A-B edges point back from B
                // so the B-side can feed A.
                (i % block + j % block) % 2 == 0
            } else {
                true
            }
        });
        let g = ColoredTournament::from_fn(orient, |tail, head| {
            let (lo, hi) = (tail.min(head), tail.max(head));
            let same = lo / block == hi / block;
            if same && lo % block < half && hi % block < half && hi == lo + 1 {
                Color::Blue
            } else {
                Color::Red
            }
        });
        let pairs: Vec<(VertexSet, VertexSet)> = (0..16)
            .map(|i| {
                let base = i * block;
                (
                    VertexSet::from_iter(n, base..base + half),
                    VertexSet::from_iter(n, base + half..base + block),
                )
            })
            .collect();
        let blue_paths: Vec<Vec<usize>> = (0..16)
            .map(|i| (i * block..i * block + half).collect())
            .collect();
        (
            g,
            RedBluePairs {
                k: half,
                pairs,
                blue_paths,
            },
        )
    }

    #[test]
    fn pairs_pipeline_builds_a_red_tree() {
        let (g, rbp) = pairs_host();
        crate::machinery::validate_red_blue_pairs(&g, &rbp).unwrap();
        let t = OrientedTree::out_path(64);
        let cfg = SolverConfig::for_tree(t.m());
        let split = tree_split(&t, 2.0, cfg.alpha).unwrap();
        assert!(split.parts.len() <= rbp.pairs.len(), "host has enough pairs");
        match tree_from_pairs(&g, &t, &rbp, &cfg).unwrap() {
            PairsOutcome::RedTree(emb) => {
                assert_eq!(emb.color, Some(Color::Red));
                validate_embedding(&g, &t, &emb).unwrap();
            }
            PairsOutcome::BluePath(_) => panic!("expected the red branch"),
        }
    }

    #[test]
    fn pairs_pipeline_falls_back_to_a_blue_path() {
        // Same block layout, but all edges between different A-sets are
        // blue: the auxiliary digraph becomes transitively blue, the red
        // branch starves, and the blue lift crosses all eight pairs.
        let n = 1024;
        let block = 128;
        let half = 64;
        let g = ColoredTournament::from_fn(transitive(n), |tail, head| {
            let (lo, hi) = (tail.min(head), tail.max(head));
            let same = lo / block == hi / block;
            let a_side = |v: usize| v % block < half;
            if same && a_side(lo) && a_side(hi) && hi == lo + 1 {
                Color::Blue
            } else if !same && a_side(lo) && a_side(hi) {
                Color::Blue
            } else {
                Color::Red
            }
        });
        let pairs: Vec<(VertexSet, VertexSet)> = (0..8)
            .map(|i| {
                let base = i * block;
                (
                    VertexSet::from_iter(n, base..base + half),
                    VertexSet::from_iter(n, base + half..base + block),
                )
            })
            .collect();
        let blue_paths: Vec<Vec<usize>> = (0..8)
            .map(|i| (i * block..i * block + half).collect())
            .collect();
        let rbp = RedBluePairs {
            k: half,
            pairs,
            blue_paths,
        };
        crate::machinery::validate_red_blue_pairs(&g, &rbp).unwrap();
        let t = OrientedTree::out_path(30);
        let cfg = SolverConfig::for_tree(30);
        match tree_from_pairs(&g, &t, &rbp, &cfg).unwrap() {
            PairsOutcome::BluePath(p) => {
                assert_eq!(p.len(), 8 * half, "every pair contributes its whole path");
                let emb = path_embedding(&t, &p, Color::Blue).unwrap();
                validate_embedding(&g, &t, &emb).unwrap();
            }
            PairsOutcome::RedTree(_) => panic!("red branch cannot cross blocks backwards"),
        }
    }

    #[test]
    fn quotient_embedding_respects_red_edges() {
        // Two pairs whose auxiliary edge is blue one way and red the
        // other force the orientation of the quotient copy.
        let n = 64;
        let half = 32;
        let g = ColoredTournament::from_fn(transitive(n), |tail, head| {
            if tail < half && head >= half {
                Color::Blue
            } else {
                Color::Red
            }
        });
        let parts = vec![
            VertexSet::from_iter(n, 0..half),
            VertexSet::from_iter(n, half..n),
        ];
        let aux = build_aux_digraph(
            &g,
            parts,
            &AuxRule::DenseOutDegree {
                counted: Color::Blue,
                dense_count: 1,
                degree_floor: 1,
            },
        )
        .unwrap();
        assert_eq!(aux.color(0, 1), Color::Blue);
        assert_eq!(aux.color(1, 0), Color::Red);
        let q = OrientedTree::out_path(2);
        // The only red copy maps the path 0 -> 1 onto the pair (1, 0).
        assert_eq!(red_quotient_embed(&aux, &q), Some(vec![1, 0]));
    }

    #[test]
    fn solver_finds_trees_in_sparse_hosts() {
        let g = all_red(256, 9);
        let t = OrientedTree::random(10, TreeOrientation::Uniform, 4);
        let report = find_monochromatic_tree(&g, &t, &SolverConfig::for_tree(10));
        match report.outcome {
            SolveOutcome::Found {
                color,
                embedding,
                strategy,
            } => {
                assert_eq!(color, Color::Red);
                assert_eq!(strategy, "sparse");
                validate_embedding(&g, &t, &embedding).unwrap();
            }
            SolveOutcome::NotFound { .. } => panic!("monochromatic host must contain the tree"),
        }
    }

    #[test]
    fn solver_handles_degenerate_sizes() {
        let g = all_red(3, 1);
        let single = OrientedTree::singleton();
        let report = find_monochromatic_tree(&g, &single, &SolverConfig::for_tree(1));
        assert!(report.found());

        let big = OrientedTree::out_path(5);
        let report = find_monochromatic_tree(&g, &big, &SolverConfig::for_tree(5));
        match report.outcome {
            SolveOutcome::NotFound { refuted } => assert!(refuted),
            SolveOutcome::Found { .. } => panic!("five vertices cannot embed in three"),
        }
    }

    #[test]
    fn solver_refutes_block_hosts_and_keeps_a_trace() {
        // The 9-vertex block host has no monochromatic path on four
        // vertices.
        let g = block_coloring(4);
        let t = OrientedTree::out_path(4);
        let report = find_monochromatic_tree(&g, &t, &SolverConfig::for_tree(4));
        match report.outcome {
            SolveOutcome::NotFound { refuted } => assert!(refuted),
            SolveOutcome::Found { ref embedding, .. } => {
                panic!("block host refutes P4, got {:?}", embedding)
            }
        }
        let strategies: Vec<&str> = report.trace.iter().map(|e| e.strategy).collect();
        assert!(strategies.contains(&"sparse"));
        assert!(strategies.contains(&"exact"));
    }

    #[test]
    fn solver_agrees_with_exhaustive_search() {
        let modes = [
            TreeOrientation::Out,
            TreeOrientation::In,
            TreeOrientation::Uniform,
        ];
        for i in 0..48u64 {
            let n = 6 + (i as usize) % 7;
            let host = Tournament::random(n, derive_seed(400, "host", i));
            let g = ColoredTournament::random_coloring(host, derive_seed(400, "colors", i));
            let m = 2 + (i as usize) % 5;
            let t = OrientedTree::random(m, modes[(i as usize) % 3], derive_seed(400, "tree", i));
            let reference = exact_embed(&g, &t, Some(Color::Red), 10_000_000)
                .unwrap()
                .is_some()
                || exact_embed(&g, &t, Some(Color::Blue), 10_000_000)
                    .unwrap()
                    .is_some();
            let report = find_monochromatic_tree(&g, &t, &SolverConfig::for_tree(m));
            match report.outcome {
                SolveOutcome::Found { .. } => {
                    assert!(reference, "case {i}: solver found a copy the search misses")
                }
                SolveOutcome::NotFound { refuted } => {
                    assert!(!reference, "case {i}: solver missed an existing copy");
                    assert!(refuted, "case {i}: absence must be certified");
                }
            }
        }
    }

    #[test]
    fn buckets_embed_directed_trees_both_ways() {
        // The leaf bound of the path split caps targets at m^alpha
        // leaves, so directed paths need order 64 at alpha = 1/6.
        let g = all_red(192, 15);
        let cfg = SolverConfig::for_tree(64);
        for t in [
            OrientedTree::out_path(64),
            OrientedTree::in_path(64),
            OrientedTree::random_with_max_leaves(64, 2, TreeOrientation::Out, 8),
        ] {
            let emb = bucket_strategy(&g, &t, Color::Red, &cfg)
                .unwrap_or_else(|e| panic!("{e}"));
            assert_eq!(emb.color, Some(Color::Red));
            validate_embedding(&g, &t, &emb).unwrap();
        }
    }

    #[test]
    fn dense_cores_carry_directed_paths() {
        let g = ColoredTournament::random_coloring(Tournament::random(256, 31), 32);
        for t in [OrientedTree::out_path(20), OrientedTree::in_path(20)] {
            let emb = dense_path_shortcut(&g, &t, Color::Red).unwrap();
            validate_embedding(&g, &t, &emb).unwrap();
        }
    }

    #[test]
    fn cycle_strategy_rides_planted_blue_blocks() {
        // Eight disjoint 7-vertex rotational blocks, all blue inside and
        // red forward across: peeling finds each block as a dense core,
        // the 7-cycles sit in the medium window for a = 2, and with the
        // sigma-log margin far above k the pipeline settles on a blue
        // path inside one block.
        let n = 56;
        let rot = Tournament::from_fn(n, |i, j| {
            if i / 7 == j / 7 {
                matches!((j + n - i) % 7, 1 | 2 | 4)
            } else {
                true
            }
        });
        let g = ColoredTournament::from_fn(rot, |tail, head| {
            if tail / 7 == head / 7 {
                Color::Blue
            } else {
                Color::Red
            }
        });
        let t = OrientedTree::out_path(6);
        let mut cfg = SolverConfig::for_tree(6);
        cfg.a = 2;
        cfg.b = 16;
        let emb = cycle_pairs_strategy(&g, &t, Color::Red, &cfg).unwrap();
        assert_eq!(emb.color, Some(Color::Blue));
        validate_embedding(&g, &t, &emb).unwrap();
    }

    #[test]
    fn ladder_solves_random_colourings_of_paths() {
        for seed in 0..6u64 {
            let host = Tournament::random(256, derive_seed(500, "host", seed));
            let g = ColoredTournament::random_coloring(host, derive_seed(500, "colors", seed));
            let t = OrientedTree::out_path(24);
            let report = find_monochromatic_tree(&g, &t, &SolverConfig::for_tree(24));
            match report.outcome {
                SolveOutcome::Found { embedding, .. } => {
                    validate_embedding(&g, &t, &embedding).unwrap()
                }
                SolveOutcome::NotFound { .. } => {
                    panic!("seed {seed}: random colouring of 256 hosts a path on 24")
                }
            }
        }
    }
}
