//! Composite structures the tree-finding strategies are assembled from:
//! auxiliary digraphs over vertex partitions, matchings inside them, paths
//! lifted through chains of cycles, and red/blue pair systems that later
//! host split trees.
//!
//! Everything here is deterministic given the config seed. Sets of
//! candidate vertices are always consumed lowest-id-first so reruns
//! reproduce byte-identical structures.

use std::collections::HashMap;

use thiserror::Error;

use crate::bitset::VertexSet;
use crate::coloring::{Color, ColoredTournament};
use crate::embed::int_ceil;
use crate::pseudo::{binomial, each_combination};
use crate::rng::{derive_seed, rng_from_seed, uniform_below};
use crate::split::int_cap;
use crate::tournament::Tournament;
use crate::tree::{EdgeDir, OrientedTree};

/// Knobs shared by the composite strategies. The asymptotic analysis picks
/// `a` proportional to `1/epsilon^2`; at practical sizes that makes every
/// cycle "short", so the multiplier stays configurable and only the shape
/// constraints below are enforced.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    /// Density floor used by pseudorandomness-style arguments.
    pub epsilon: f64,
    /// Log-factor slack for candidate-set margins.
    pub sigma: f64,
    /// Split exponent; must stay in (0, 1/6].
    pub alpha: f64,
    /// Cycle-length multiplier: medium cycles start at `a * m^(2 alpha)`.
    pub a: usize,
    /// Upper multiplier for medium cycles; always `8 * a`.
    pub b: usize,
    /// Order of the tree being hunted; scales the cycle-length windows.
    pub tree_size: usize,
    /// A colour class this sparse (fraction of n^2) counts as negligible.
    pub delta_sparse: f64,
    /// Same role for per-layer-core density arguments.
    pub delta_core: f64,
    /// Density floor handed to the min-degree pair strategy.
    pub delta_inout: f64,
    /// Node budget for exhaustive embedding fallbacks.
    pub exact_budget: u64,
    /// Subset-pair rule: enumerate exactly up to this many tail subsets.
    pub subset_exact_limit: u128,
    /// Subset-pair rule: sampled witness attempts above the exact limit.
    pub subset_samples: u64,
    /// Bipartition attempts for the min-degree pair strategy.
    pub mindegree_trials: u64,
    /// Root seed; strategy-local streams are derived, never shared.
    pub seed: u64,
}

impl SolverConfig {
    /// Defaults for hunting a tree of order `m`.
    pub fn for_tree(m: usize) -> Self {
        let epsilon = 0.25f64;
        let a = (128.0 / (epsilon * epsilon)).ceil() as usize;
        SolverConfig {
            epsilon,
            sigma: 4.0,
            alpha: 1.0 / 6.0,
            a,
            b: 8 * a,
            tree_size: m.max(1),
            delta_sparse: epsilon * epsilon / 32.0,
            delta_core: epsilon * epsilon / 192.0,
            delta_inout: 0.2,
            exact_budget: 2_000_000,
            subset_exact_limit: 100_000,
            subset_samples: 256,
            mindegree_trials: 64,
            seed: 0,
        }
    }

    /// `m^(2 alpha)`, the unit all cycle-length windows are measured in.
    pub fn scale(&self) -> f64 {
        (self.tree_size as f64).powf(2.0 * self.alpha)
    }

    /// Shortest medium cycle, `a * m^(2 alpha)`.
    pub fn medium_low(&self) -> f64 {
        self.a as f64 * self.scale()
    }

    /// Longest medium cycle, `b * m^(2 alpha)`; anything longer is long.
    pub fn medium_high(&self) -> f64 {
        self.b as f64 * self.scale()
    }

    pub fn check(&self) -> Result<(), MachineryError> {
        let bad = |reason: &str| {
            Err(MachineryError::BadConfig { reason: reason.to_string() })
        };
        if !(self.epsilon > 0.0 && self.epsilon < 1.0) {
            return bad("epsilon must lie in (0, 1)");
        }
        if !(self.alpha > 0.0 && self.alpha <= 1.0 / 6.0 + 1e-12) {
            return bad("alpha must lie in (0, 1/6]");
        }
        if self.sigma <= 0.0 {
            return bad("sigma must be positive");
        }
        if self.a == 0 || self.b != 8 * self.a {
            return bad("cycle multipliers need a >= 1 and b = 8a");
        }
        if self.tree_size == 0 {
            return bad("tree_size must be at least 1");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MachineryError {
    #[error("config rejected: {reason}")]
    BadConfig { reason: String },
    #[error("parts {i} and {j} share a vertex")]
    OverlappingParts { i: usize, j: usize },
    #[error("part {index} is empty")]
    EmptyPart { index: usize },
    #[error("cycle {index} is not a directed {color} cycle")]
    NotAColorCycle { index: usize, color: Color },
    #[error("cycles {i} and {j} share a vertex")]
    OverlappingCycles { i: usize, j: usize },
    #[error("cycle {index} has length {len}, outside the medium window {low}..={high}")]
    NotMedium { index: usize, len: usize, low: usize, high: usize },
    #[error("cycle {index} has length {len}, but long cycles exceed {min}")]
    NotLong { index: usize, len: usize, min: usize },
    #[error("cycle {cycle} has no {color} edge into the next cycle")]
    LiftStuck { cycle: usize, color: Color },
    #[error("blue chord {tail} -> {head} closes a blue cycle of order {span} inside cycle {cycle}")]
    BlueChord { cycle: usize, tail: usize, head: usize, span: usize },
    #[error("no red-red matching pair kept a usable end set")]
    NoPairs,
    #[error("part {part} could not be embedded inside its region")]
    PartEmbedFailed { part: usize },
    #[error("no usable {color} out-neighbour reaches the candidates of part {part}")]
    NoConnection { part: usize, color: Color },
    #[error("layer {layer} ran out of hosts")]
    LayerStarved { layer: usize },
    #[error("pair family rejected: {detail}")]
    BadPairs { detail: String },
    #[error("need {needed} pairs, have {have}")]
    NotEnoughPairs { needed: usize, have: usize },
    #[error("no red copy of the quotient in the auxiliary digraph")]
    QuotientEmbedFailed,
    #[error("candidate set for part {part} is empty")]
    EmptyCandidates { part: usize },
}

// =========================================================================
// Auxiliary digraphs
// =========================================================================

/// Whether every aux edge colour was decided by complete enumeration or
/// some blue verdicts rest on sampling.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CertLevel {
    Exact,
    Sampled,
}

/// Rule deciding the colour of the ordered aux pair `(i, j)`: the edge
/// from part i to part j.
#[derive(Debug, Clone)]
pub enum AuxRule {
    /// Blue when at least `threshold` vertices of part i have a `counted`
    /// out-neighbour in part j; red otherwise.
    OutNeighbourCount { counted: Color, threshold: usize },
    /// Blue when at least `dense_count` vertices of part i each have at
    /// least `degree_floor` `counted` out-neighbours in part j.
    DenseOutDegree { counted: Color, dense_count: usize, degree_floor: usize },
    /// Pairs with i < j are red. For i > j the edge is blue exactly when
    /// every pair of subsets W_i of part i and W_j of part j, both of size
    /// `subset_size`, spans a `counted` edge from W_i into W_j. Red edges
    /// come with a witness pair spanning no such edge. Enumeration runs
    /// while the tail part has at most `exact_limit` candidate subsets;
    /// beyond that a greedy attempt plus `samples` seeded random subsets
    /// decide, and a blue verdict is only `Sampled`-certain.
    LargeSubsetsForced {
        counted: Color,
        subset_size: usize,
        exact_limit: u128,
        samples: u64,
        seed: u64,
    },
}

/// Complete digraph on parts of a host tournament, every ordered pair
/// coloured by the rule it was built with. Red subset-rule edges keep the
/// witness pair that proved them.
#[derive(Debug, Clone)]
pub struct AuxiliaryDigraph {
    pub parts: Vec<VertexSet>,
    colors: Vec<Color>,
    pub cert: CertLevel,
    pub witnesses: HashMap<(usize, usize), (VertexSet, VertexSet)>,
}

impl AuxiliaryDigraph {
    pub fn order(&self) -> usize {
        self.parts.len()
    }

    /// Colour of the aux edge from part `i` to part `j`.
    pub fn color(&self, i: usize, j: usize) -> Color {
        assert!(i != j, "aux edges join distinct parts");
        self.colors[i * self.parts.len() + j]
    }
}

pub fn build_aux_digraph(
    g: &ColoredTournament,
    parts: Vec<VertexSet>,
    rule: &AuxRule,
) -> Result<AuxiliaryDigraph, MachineryError> {
    for (i, p) in parts.iter().enumerate() {
        assert_eq!(p.ground(), g.n(), "parts must live on the host's vertices");
        if p.is_empty() {
            return Err(MachineryError::EmptyPart { index: i });
        }
        for (j, q) in parts.iter().enumerate().skip(i + 1) {
            if !p.is_disjoint(q) {
                return Err(MachineryError::OverlappingParts { i, j });
            }
        }
    }

    let t = parts.len();
    let mut colors = vec![Color::Red; t * t];
    let mut witnesses = HashMap::new();
    let mut cert = CertLevel::Exact;
    for i in 0..t {
        for j in 0..t {
            if i == j {
                continue;
            }
            let c = match rule {
                AuxRule::OutNeighbourCount { counted, threshold } => {
                    let hits = parts[i]
                        .iter()
                        .filter(|&v| g.first_out_in(*counted, v, &parts[j]).is_some())
                        .count();
                    if hits >= *threshold { Color::Blue } else { Color::Red }
                }
                AuxRule::DenseOutDegree { counted, dense_count, degree_floor } => {
                    let hits = parts[i]
                        .iter()
                        .filter(|&v| g.out_count_in(*counted, v, &parts[j]) >= *degree_floor)
                        .count();
                    if hits >= *dense_count { Color::Blue } else { Color::Red }
                }
                AuxRule::LargeSubsetsForced {
                    counted,
                    subset_size,
                    exact_limit,
                    samples,
                    seed,
                } => {
                    if i < j {
                        Color::Red
                    } else {
                        let pair_seed =
                            derive_seed(*seed, "aux-subset", (i * t + j) as u64);
                        let (c, level, wit) = subset_rule_edge(
                            g,
                            &parts[i],
                            &parts[j],
                            *counted,
                            *subset_size,
                            *exact_limit,
                            *samples,
                            pair_seed,
                        );
                        if level == CertLevel::Sampled {
                            cert = CertLevel::Sampled;
                        }
                        if let Some(w) = wit {
                            witnesses.insert((i, j), w);
                        }
                        c
                    }
                }
            };
            colors[i * t + j] = c;
        }
    }
    Ok(AuxiliaryDigraph { parts, colors, cert, witnesses })
}

/// `counted` out-neighbours of `v` inside `within`.
fn counted_out(g: &ColoredTournament, c: Color, v: usize, within: &VertexSet) -> VertexSet {
    let mut s = VertexSet::from_words(g.n(), g.out_row(c, v));
    s.intersect_with(within);
    s
}

/// Decides one subset-rule edge from `tail` to `head`. Red means some
/// size-`s` subset pair spans no `counted` tail-to-head edge; such a pair
/// is returned as the witness and is proof regardless of how it was found.
#[allow(clippy::too_many_arguments)]
fn subset_rule_edge(
    g: &ColoredTournament,
    tail: &VertexSet,
    head: &VertexSet,
    counted: Color,
    s: usize,
    exact_limit: u128,
    samples: u64,
    seed: u64,
) -> (Color, CertLevel, Option<(VertexSet, VertexSet)>) {
    let n = g.n();
    if tail.count() < s || head.count() < s {
        // No subset pair of the required size exists, so the forcing
        // condition holds vacuously.
        return (Color::Blue, CertLevel::Exact, None);
    }

    let uncovered_tally = |chosen: &[usize]| -> VertexSet {
        let mut covered = VertexSet::empty(n);
        for &v in chosen {
            covered.union_with(&counted_out(g, counted, v, head));
        }
        head.difference(&covered)
    };
    let finish = |chosen: &[usize], free: &VertexSet| {
        let w_tail = VertexSet::from_iter(n, chosen.iter().copied());
        let w_head = VertexSet::from_iter(n, free.iter().take(s));
        (Color::Red, CertLevel::Exact, Some((w_tail, w_head)))
    };

    // Greedy attempt first: repeatedly take the tail vertex covering the
    // fewest still-free head vertices. Finds the witness instantly in the
    // common all-red case.
    let members: Vec<usize> = tail.to_vec();
    let mut chosen: Vec<usize> = Vec::with_capacity(s);
    let mut free = head.clone();
    for _ in 0..s {
        let pick = members
            .iter()
            .copied()
            .filter(|v| !chosen.contains(v))
            .min_by_key(|&v| (g.out_count_in(counted, v, &free), v))
            .expect("tail has at least s members");
        free.subtract(&counted_out(g, counted, pick, head));
        chosen.push(pick);
    }
    if free.count() >= s {
        return finish(&chosen, &free);
    }

    if binomial(members.len(), s) <= exact_limit {
        let mut found: Option<(Vec<usize>, VertexSet)> = None;
        each_combination(&members, s, &mut |w| {
            let free = uncovered_tally(w);
            if free.count() >= s {
                found = Some((w.to_vec(), free));
                return false;
            }
            true
        });
        return match found {
            Some((w, free)) => finish(&w, &free),
            None => (Color::Blue, CertLevel::Exact, None),
        };
    }

    let mut rng = rng_from_seed(seed);
    let mut idx: Vec<usize> = (0..members.len()).collect();
    for _ in 0..samples {
        for slot in 0..s {
            let r = slot + uniform_below(&mut rng, (idx.len() - slot) as u64) as usize;
            idx.swap(slot, r);
        }
        let w: Vec<usize> = idx[..s].iter().map(|&i| members[i]).collect();
        let free = uncovered_tally(&w);
        if free.count() >= s {
            return finish(&w, &free);
        }
    }
    (Color::Blue, CertLevel::Sampled, None)
}

/// Greedy matching on part pairs whose aux edges are red in both
/// directions, taken in ascending lexicographic order. Maximal: afterwards
/// no two uncovered parts are red-red.
pub fn maximal_red_red_matching(aux: &AuxiliaryDigraph) -> Vec<(usize, usize)> {
    let t = aux.order();
    let mut covered = vec![false; t];
    let mut pairs = Vec::new();
    for i in 0..t {
        if covered[i] {
            continue;
        }
        for j in i + 1..t {
            if covered[j] {
                continue;
            }
            if aux.color(i, j) == Color::Red && aux.color(j, i) == Color::Red {
                covered[i] = true;
                covered[j] = true;
                pairs.push((i, j));
                break;
            }
        }
    }
    pairs
}

// =========================================================================
// Lifting paths through cycle chains
// =========================================================================

/// Each entry must be a directed cycle of `color` edges (closing edge
/// included), and the cycles must be pairwise disjoint.
fn check_color_cycles(
    g: &ColoredTournament,
    color: Color,
    cycles: &[Vec<usize>],
) -> Result<(), MachineryError> {
    let mut seen: Vec<VertexSet> = Vec::with_capacity(cycles.len());
    for (index, cyc) in cycles.iter().enumerate() {
        let distinct = VertexSet::from_iter(g.n(), cyc.iter().copied());
        let closed = cyc.len() >= 3
            && distinct.count() == cyc.len()
            && (0..cyc.len())
                .all(|p| g.has_colored_edge(color, cyc[p], cyc[(p + 1) % cyc.len()]));
        if !closed {
            return Err(MachineryError::NotAColorCycle { index, color });
        }
        for (i, earlier) in seen.iter().enumerate() {
            if !earlier.is_disjoint(&distinct) {
                return Err(MachineryError::OverlappingCycles { i, j: index });
            }
        }
        seen.push(distinct);
    }
    Ok(())
}

/// Threads a single `color` path through a chain of disjoint `color`
/// cycles: walk the current cycle from its entry point up to the *last*
/// vertex with a `color` out-neighbour in the next cycle, then jump to its
/// lowest such neighbour. If every cycle has `r` vertices with an exit,
/// the walk keeps at least `r` vertices per cycle, so the path has order
/// at least `r * cycles.len()`. Output vertices are grouped by cycle, in
/// input order.
pub fn lift_path_through_cycles(
    g: &ColoredTournament,
    color: Color,
    cycles: &[Vec<usize>],
) -> Result<Vec<usize>, MachineryError> {
    check_color_cycles(g, color, cycles)?;
    let mut path = Vec::new();
    let mut entry = 0usize;
    for (c_idx, cyc) in cycles.iter().enumerate() {
        let len = cyc.len();
        if c_idx + 1 == cycles.len() {
            path.extend((0..len).map(|off| cyc[(entry + off) % len]));
            break;
        }
        let next_set = VertexSet::from_iter(g.n(), cycles[c_idx + 1].iter().copied());
        let mut best: Option<(usize, usize)> = None;
        for off in 0..len {
            let v = cyc[(entry + off) % len];
            if let Some(w) = g.first_out_in(color, v, &next_set) {
                best = Some((off, w));
            }
        }
        let Some((best_off, jump)) = best else {
            return Err(MachineryError::LiftStuck { cycle: c_idx, color });
        };
        path.extend((0..=best_off).map(|off| cyc[(entry + off) % len]));
        entry = cycles[c_idx + 1]
            .iter()
            .position(|&w| w == jump)
            .expect("jump target lies on the next cycle");
    }
    Ok(path)
}

// =========================================================================
// Red/blue pair systems
// =========================================================================

/// `t` disjoint pairs (A_i, B_i) of k-sets with every host edge between
/// A_i and B_i red, in both directions, plus for each pair a blue directed
/// path through all of A_i. The paths are pairwise disjoint and avoid
/// every B_j, so trees split across the pairs never collide.
#[derive(Debug, Clone)]
pub struct RedBluePairs {
    pub k: usize,
    pub pairs: Vec<(VertexSet, VertexSet)>,
    pub blue_paths: Vec<Vec<usize>>,
}

/// First violated clause of a pair system's contract.
#[derive(Debug, Error, PartialEq, Eq)]
#[error("clause {clause} violated: {detail}")]
pub struct PairsViolation {
    pub clause: &'static str,
    pub detail: String,
}

fn pairs_violated(clause: &'static str, detail: impl Into<String>) -> Result<(), PairsViolation> {
    Err(PairsViolation { clause, detail: detail.into() })
}

pub fn validate_red_blue_pairs(
    g: &ColoredTournament,
    rbp: &RedBluePairs,
) -> Result<(), PairsViolation> {
    let n = g.n();
    if rbp.pairs.is_empty() {
        return pairs_violated("count", "no pairs");
    }
    if rbp.blue_paths.len() != rbp.pairs.len() {
        return pairs_violated(
            "count",
            format!("{} pairs but {} paths", rbp.pairs.len(), rbp.blue_paths.len()),
        );
    }

    let mut seen = VertexSet::empty(n);
    for (idx, (a, b)) in rbp.pairs.iter().enumerate() {
        for (side, s) in [("A", a), ("B", b)] {
            if s.count() != rbp.k {
                return pairs_violated(
                    "size",
                    format!("{side}_{idx} has {} vertices, expected {}", s.count(), rbp.k),
                );
            }
            if !seen.is_disjoint(s) {
                let v = seen.intersection(s).first().unwrap();
                return pairs_violated("disjoint", format!("vertex {v} reused by {side}_{idx}"));
            }
            seen.union_with(s);
        }
        for v in a.iter() {
            if g.out_count_in(Color::Blue, v, b) + g.in_count_in(Color::Blue, v, b) > 0 {
                return pairs_violated(
                    "red",
                    format!("blue edge between A_{idx} and B_{idx} at vertex {v}"),
                );
            }
        }
    }

    let mut on_paths = VertexSet::empty(n);
    let all_b = rbp
        .pairs
        .iter()
        .fold(VertexSet::empty(n), |acc, (_, b)| acc.union(b));
    for (idx, path) in rbp.blue_paths.iter().enumerate() {
        let verts = VertexSet::from_iter(n, path.iter().copied());
        if verts.count() != path.len() {
            return pairs_violated("path", format!("path {idx} repeats a vertex"));
        }
        for w in path.windows(2) {
            if !g.has_colored_edge(Color::Blue, w[0], w[1]) {
                return pairs_violated(
                    "path",
                    format!("path {idx} uses non-blue edge {} -> {}", w[0], w[1]),
                );
            }
        }
        if !rbp.pairs[idx].0.is_subset_of(&verts) {
            return pairs_violated("path", format!("path {idx} misses part of A_{idx}"));
        }
        if !on_paths.is_disjoint(&verts) {
            let v = on_paths.intersection(&verts).first().unwrap();
            return pairs_violated("path-disjoint", format!("vertex {v} on two paths"));
        }
        if !all_b.is_disjoint(&verts) {
            let v = all_b.intersection(&verts).first().unwrap();
            return pairs_violated("path-disjoint", format!("path {idx} runs through B vertex {v}"));
        }
        on_paths.union_with(&verts);
    }
    Ok(())
}

/// Which cycle-length regime `red_blue_pairs_from_cycles` should assume.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CycleMode {
    /// Lengths in `[a, b] * m^(2 alpha)`.
    Medium,
    /// Lengths above `b * m^(2 alpha)`.
    Long,
}

/// Outcome of the cycle machinery: either a pair system to split a tree
/// across, or a single long blue path found along the way.
#[derive(Debug, Clone)]
pub enum PairsOrPath {
    Pairs(RedBluePairs),
    BluePath(Vec<usize>),
}

/// Turns a family of disjoint blue cycles into red/blue pairs.
///
/// Medium mode colours an auxiliary digraph by counting blue exits between
/// cycles and takes a maximal red-red matching. A small matching leaves
/// many mutually-blue cycles, which chain into one long blue path instead.
/// A large matching yields one pair per matched cycle pair: the vertices
/// with no blue edge towards the partner cycle, the partner cycle itself
/// supplying the blue path.
///
/// Long mode demands that every chord closing a blue cycle of order at
/// least `a * m^(2 alpha)` is red (the offending chord is reported
/// otherwise), then reads the pairs off arithmetic on cycle positions:
/// early arcs pair with arcs past the midpoint, far enough apart that
/// every edge between them is such a chord.
pub fn red_blue_pairs_from_cycles(
    g: &ColoredTournament,
    cycles: &[Vec<usize>],
    mode: CycleMode,
    cfg: &SolverConfig,
) -> Result<PairsOrPath, MachineryError> {
    cfg.check()?;
    check_color_cycles(g, Color::Blue, cycles)?;
    if cycles.is_empty() {
        return Err(MachineryError::NoPairs);
    }

    let low = cfg.medium_low();
    let high = cfg.medium_high();
    for (index, cyc) in cycles.iter().enumerate() {
        let len = cyc.len();
        match mode {
            CycleMode::Medium => {
                if (len as f64) < low - 1e-9 || (len as f64) > high + 1e-9 {
                    return Err(MachineryError::NotMedium {
                        index,
                        len,
                        low: int_ceil(low),
                        high: int_cap(high),
                    });
                }
            }
            CycleMode::Long => {
                if (len as f64) <= high + 1e-9 {
                    return Err(MachineryError::NotLong { index, len, min: int_cap(high) });
                }
            }
        }
    }

    match mode {
        CycleMode::Medium => medium_pairs(g, cycles, cfg),
        CycleMode::Long => long_pairs(g, cycles, cfg),
    }
}

fn medium_pairs(
    g: &ColoredTournament,
    cycles: &[Vec<usize>],
    cfg: &SolverConfig,
) -> Result<PairsOrPath, MachineryError> {
    let n = g.n();
    let t = cycles.len();
    let sets: Vec<VertexSet> = cycles
        .iter()
        .map(|c| VertexSet::from_iter(n, c.iter().copied()))
        .collect();
    // A cycle sends a blue aux edge to another when at least a quarter of
    // the minimum medium length escapes into it.
    let exits = int_ceil(cfg.medium_low() / 4.0).max(1);
    let aux = build_aux_digraph(
        g,
        sets.clone(),
        &AuxRule::OutNeighbourCount { counted: Color::Blue, threshold: exits },
    )?;
    let matching = maximal_red_red_matching(&aux);

    if 2 * matching.len() <= t / 2 {
        // Mostly-blue aux digraph: order the uncovered cycles along a
        // hamiltonian path of their blue directions and lift.
        let covered: Vec<bool> = {
            let mut c = vec![false; t];
            for &(i, j) in &matching {
                c[i] = true;
                c[j] = true;
            }
            c
        };
        let free: Vec<usize> = (0..t).filter(|&i| !covered[i]).collect();
        let order = Tournament::from_fn(free.len(), |x, y| {
            let forward = aux.color(free[x], free[y]) == Color::Blue;
            debug_assert!(forward || aux.color(free[y], free[x]) == Color::Blue);
            forward
        });
        let chain: Vec<Vec<usize>> = order
            .hamiltonian_path()
            .into_iter()
            .map(|x| cycles[free[x]].clone())
            .collect();
        let path = lift_path_through_cycles(g, Color::Blue, &chain)?;
        debug_assert!(path.len() >= exits * chain.len());
        return Ok(PairsOrPath::BluePath(path));
    }

    // Red-red pair: almost no vertex of either cycle has a blue edge into
    // the other, and the zero-exit vertices face each other all-red.
    let mut quals: Vec<(Vec<usize>, Vec<usize>)> = Vec::new();
    for &(i, j) in &matching {
        let a_side: Vec<usize> = cycles[i]
            .iter()
            .copied()
            .filter(|&v| g.out_count_in(Color::Blue, v, &sets[j]) == 0)
            .collect();
        let b_side: Vec<usize> = cycles[j]
            .iter()
            .copied()
            .filter(|&v| g.out_count_in(Color::Blue, v, &sets[i]) == 0)
            .collect();
        if !a_side.is_empty() && !b_side.is_empty() {
            quals.push((a_side, b_side));
        }
    }
    if quals.is_empty() {
        return Err(MachineryError::NoPairs);
    }
    let target = int_cap(0.75 * cfg.medium_low()).max(1);
    let k = quals
        .iter()
        .map(|(a, b)| a.len().min(b.len()))
        .min()
        .unwrap()
        .min(target);

    let mut pairs = Vec::new();
    let mut blue_paths = Vec::new();
    for (slot, (a_side, b_side)) in quals.iter().enumerate() {
        pairs.push((
            VertexSet::from_iter(n, a_side.iter().copied().take(k)),
            VertexSet::from_iter(n, b_side.iter().copied().take(k)),
        ));
        // The matched cycle minus its closing edge spans A_slot in blue.
        let (i, _) = matching[slot];
        blue_paths.push(cycles[i].clone());
    }
    Ok(PairsOrPath::Pairs(RedBluePairs { k, pairs, blue_paths }))
}

fn long_pairs(
    g: &ColoredTournament,
    cycles: &[Vec<usize>],
    cfg: &SolverConfig,
) -> Result<PairsOrPath, MachineryError> {
    let n = g.n();
    let k = int_cap(cfg.medium_low()).max(1);

    // Every blue chord that closes a blue cycle of order >= k must be
    // absent; pairs below rely on exactly this.
    for (c_idx, cyc) in cycles.iter().enumerate() {
        let r = cyc.len();
        let set = VertexSet::from_iter(n, cyc.iter().copied());
        let pos: HashMap<usize, usize> =
            cyc.iter().enumerate().map(|(p, &v)| (v, p)).collect();
        for p in 0..r {
            for q_vert in g.iter_out_in(Color::Blue, cyc[p], &set) {
                let q = pos[&q_vert];
                if q == (p + 1) % r {
                    continue;
                }
                let span = (p + r - q) % r + 1;
                if span >= k {
                    return Err(MachineryError::BlueChord {
                        cycle: c_idx,
                        tail: cyc[p],
                        head: q_vert,
                        span,
                    });
                }
            }
        }
    }

    let mut pairs = Vec::new();
    let mut blue_paths = Vec::new();
    for cyc in cycles {
        let r = cyc.len();
        let half = r / 2;
        if half < 3 * k {
            continue;
        }
        // Positions [0, half - 2k) pair with positions [half - k, r - k]:
        // any edge between the two ranges closes a cycle of order >= k in
        // one direction or the other, so the chord check above forces it
        // red. Chop both ranges into aligned k-blocks.
        let blocks = (half - 2 * k) / k;
        for blk in 0..blocks {
            let a_lo = blk * k;
            let b_lo = half - k + blk * k;
            pairs.push((
                VertexSet::from_iter(n, (a_lo..a_lo + k).map(|p| cyc[p])),
                VertexSet::from_iter(n, (b_lo..b_lo + k).map(|p| cyc[p])),
            ));
            blue_paths.push((a_lo..a_lo + k).map(|p| cyc[p]).collect());
        }
    }
    if pairs.is_empty() {
        return Err(MachineryError::NoPairs);
    }
    Ok(PairsOrPath::Pairs(RedBluePairs { k, pairs, blue_paths }))
}

// =========================================================================
// Rooted greedy embedding
// =========================================================================

/// Embeds `t` in colour `color` with every image inside `allowed` and the
/// root's image additionally inside `roots`, assigning hosts in BFS order
/// and always taking the lowest-id usable neighbour. Returns the map from
/// tree vertex to host, or None when some vertex runs out of hosts.
pub fn greedy_rooted(
    g: &ColoredTournament,
    color: Color,
    allowed: &VertexSet,
    roots: &VertexSet,
    t: &OrientedTree,
) -> Option<Vec<usize>> {
    let n = g.n();
    let mut map = vec![usize::MAX; t.m()];
    let mut used = VertexSet::empty(n);
    let root_host = roots.intersection(allowed).first()?;
    map[t.root()] = root_host;
    used.insert(root_host);
    for v in t.bfs_order() {
        if v == t.root() {
            continue;
        }
        let (p, dir) = t.parent_of(v).expect("non-root has a parent");
        let ph = map[p];
        let host = match dir {
            EdgeDir::Away => g.iter_out_in(color, ph, allowed).find(|&h| !used.contains(h)),
            EdgeDir::Toward => g.iter_in_in(color, ph, allowed).find(|&h| !used.contains(h)),
        }?;
        map[v] = host;
        used.insert(host);
    }
    Some(map)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coloring::block_coloring;
    use crate::embed::{validate_embedding, Embedding};
    use crate::tree::TreeOrientation;

    fn part(n: usize, verts: &[usize]) -> VertexSet {
        VertexSet::from_iter(n, verts.iter().copied())
    }

    /// Host made of `c` disjoint blue `len`-cycles on consecutive vertex
    /// ranges; `cross` decides the colour of every other edge, which all
    /// point lowest-to-highest except each cycle's closing edge.
    fn cycle_host(c: usize, len: usize, cross: Color) -> (ColoredTournament, Vec<Vec<usize>>) {
        let n = c * len;
        let closing = |i: usize, j: usize| j == i + len - 1 && i % len == 0;
        let t = Tournament::from_fn(n, |i, j| !closing(i, j));
        let g = ColoredTournament::from_fn(t, |tail, head| {
            let same = tail / len == head / len;
            let forward = same && head == tail + 1;
            let closes = same && closing(head, tail);
            if forward || closes {
                Color::Blue
            } else if same {
                Color::Red
            } else {
                cross
            }
        });
        let cycles = (0..c).map(|i| (i * len..(i + 1) * len).collect()).collect();
        (g, cycles)
    }

    fn medium_cfg() -> SolverConfig {
        // scale = 8^(1/3) = 2, so the medium window is [4, 32].
        let mut cfg = SolverConfig::for_tree(8);
        cfg.a = 2;
        cfg.b = 16;
        cfg
    }

    #[test]
    fn config_invariants_enforced() {
        let cfg = SolverConfig::for_tree(64);
        cfg.check().unwrap();
        assert!((cfg.scale() - 4.0).abs() < 1e-9);
        assert_eq!(cfg.a, 2048);
        assert_eq!(cfg.b, 8 * cfg.a);

        let mut bad = SolverConfig::for_tree(64);
        bad.b = 100;
        assert!(matches!(bad.check(), Err(MachineryError::BadConfig { .. })));
        let mut bad = SolverConfig::for_tree(64);
        bad.alpha = 0.3;
        assert!(matches!(bad.check(), Err(MachineryError::BadConfig { .. })));
    }

    #[test]
    fn count_rule_matches_direct_recount() {
        let mut checked = 0;
        for seed in 0..4 {
            let g = ColoredTournament::random_coloring(Tournament::random(60, seed), seed ^ 9);
            let parts: Vec<VertexSet> = (0..6)
                .map(|i| part(60, &(10 * i..10 * (i + 1)).collect::<Vec<_>>()))
                .collect();
            let aux = build_aux_digraph(
                &g,
                parts.clone(),
                &AuxRule::OutNeighbourCount { counted: Color::Blue, threshold: 4 },
            )
            .unwrap();
            let dense = build_aux_digraph(
                &g,
                parts.clone(),
                &AuxRule::DenseOutDegree { counted: Color::Blue, dense_count: 5, degree_floor: 3 },
            )
            .unwrap();
            for i in 0..6 {
                for j in 0..6 {
                    if i == j {
                        continue;
                    }
                    let vs: Vec<usize> = parts[i].to_vec();
                    let ws: Vec<usize> = parts[j].to_vec();
                    let with_exit = vs
                        .iter()
                        .filter(|&&v| ws.iter().any(|&w| g.color_of(v, w) == Some(Color::Blue)))
                        .count();
                    let expect = if with_exit >= 4 { Color::Blue } else { Color::Red };
                    assert_eq!(aux.color(i, j), expect, "count rule at ({i},{j}) seed {seed}");

                    let heavy = vs
                        .iter()
                        .filter(|&&v| {
                            ws.iter().filter(|&&w| g.color_of(v, w) == Some(Color::Blue)).count()
                                >= 3
                        })
                        .count();
                    let expect = if heavy >= 5 { Color::Blue } else { Color::Red };
                    assert_eq!(dense.color(i, j), expect, "dense rule at ({i},{j}) seed {seed}");
                    checked += 2;
                }
            }
        }
        assert_eq!(checked, 240);
        assert!(checked >= 100);
    }

    #[test]
    fn aux_rejects_bad_parts() {
        let g = ColoredTournament::monochromatic(Tournament::transitive(6), Color::Red);
        let rule = AuxRule::OutNeighbourCount { counted: Color::Red, threshold: 1 };
        let overlapping = vec![part(6, &[0, 1, 2]), part(6, &[2, 3])];
        assert_eq!(
            build_aux_digraph(&g, overlapping, &rule).unwrap_err(),
            MachineryError::OverlappingParts { i: 0, j: 1 }
        );
        let empty = vec![part(6, &[0, 1]), part(6, &[])];
        assert_eq!(
            build_aux_digraph(&g, empty, &rule).unwrap_err(),
            MachineryError::EmptyPart { index: 1 }
        );
    }

    #[test]
    fn subset_rule_agrees_with_brute_force() {
        let s = 2;
        for seed in 0..30 {
            let g = ColoredTournament::random_coloring(Tournament::random(12, seed), seed + 77);
            let parts = vec![part(12, &[0, 1, 2, 3, 4, 5]), part(12, &[6, 7, 8, 9, 10, 11])];
            let aux = build_aux_digraph(
                &g,
                parts.clone(),
                &AuxRule::LargeSubsetsForced {
                    counted: Color::Blue,
                    subset_size: s,
                    exact_limit: 1 << 20,
                    samples: 16,
                    seed,
                },
            )
            .unwrap();
            assert_eq!(aux.color(0, 1), Color::Red, "lower-to-higher is red by fiat");
            assert_eq!(aux.cert, CertLevel::Exact);

            // Brute force over both subsets at once.
            let tail: Vec<usize> = parts[1].to_vec();
            let head: Vec<usize> = parts[0].to_vec();
            let mut exists = false;
            each_combination(&tail, s, &mut |wt| {
                each_combination(&head, s, &mut |wh| {
                    if wt.iter().all(|&a| {
                        wh.iter().all(|&b| g.color_of(a, b) != Some(Color::Blue))
                    }) {
                        exists = true;
                    }
                    !exists
                });
                !exists
            });
            let expect = if exists { Color::Red } else { Color::Blue };
            assert_eq!(aux.color(1, 0), expect, "seed {seed}");

            if let Some((wt, wh)) = aux.witnesses.get(&(1, 0)) {
                assert_eq!(aux.color(1, 0), Color::Red);
                assert_eq!(wt.count(), s);
                assert_eq!(wh.count(), s);
                assert!(wt.is_subset_of(&parts[1]));
                assert!(wh.is_subset_of(&parts[0]));
                for a in wt.iter() {
                    assert_eq!(g.out_count_in(Color::Blue, a, wh), 0);
                }
            } else {
                assert_eq!(aux.color(1, 0), Color::Blue);
            }
        }
    }

    #[test]
    fn subset_rule_sampling_paths() {
        // Part order places {0..5} as the tail of the checked (1, 0) edge,
        // so the transitive host has every tail-to-head edge present.
        let parts = vec![part(12, &[6, 7, 8, 9, 10, 11]), part(12, &[0, 1, 2, 3, 4, 5])];

        // All edges red: the greedy pre-pass finds a witness without
        // enumeration, so the verdict stays exact even with no budget.
        let g = ColoredTournament::monochromatic(Tournament::transitive(12), Color::Red);
        let aux = build_aux_digraph(
            &g,
            parts.clone(),
            &AuxRule::LargeSubsetsForced {
                counted: Color::Blue,
                subset_size: 3,
                exact_limit: 0,
                samples: 0,
                seed: 1,
            },
        )
        .unwrap();
        assert_eq!(aux.color(1, 0), Color::Red);
        assert_eq!(aux.cert, CertLevel::Exact);

        // All edges blue: no witness exists, and with enumeration priced
        // out the blue verdict is only sampled-certain.
        let g = ColoredTournament::monochromatic(Tournament::transitive(12), Color::Blue);
        let aux = build_aux_digraph(
            &g,
            parts.clone(),
            &AuxRule::LargeSubsetsForced {
                counted: Color::Blue,
                subset_size: 3,
                exact_limit: 0,
                samples: 5,
                seed: 1,
            },
        )
        .unwrap();
        assert_eq!(aux.color(1, 0), Color::Blue);
        assert_eq!(aux.cert, CertLevel::Sampled);

        // Parts too small for the subset size: vacuously blue, exactly.
        let tiny = vec![part(12, &[0]), part(12, &[1])];
        let aux = build_aux_digraph(
            &g,
            tiny,
            &AuxRule::LargeSubsetsForced {
                counted: Color::Blue,
                subset_size: 3,
                exact_limit: 0,
                samples: 0,
                seed: 1,
            },
        )
        .unwrap();
        assert_eq!(aux.color(1, 0), Color::Blue);
        assert_eq!(aux.cert, CertLevel::Exact);
    }

    #[test]
    fn matching_is_maximal() {
        for seed in 0..40 {
            let g = ColoredTournament::random_coloring(Tournament::random(40, seed), !seed);
            let parts: Vec<VertexSet> = (0..8)
                .map(|i| part(40, &(5 * i..5 * (i + 1)).collect::<Vec<_>>()))
                .collect();
            let aux = build_aux_digraph(
                &g,
                parts,
                &AuxRule::OutNeighbourCount { counted: Color::Blue, threshold: 3 },
            )
            .unwrap();
            let m = maximal_red_red_matching(&aux);
            let mut covered = vec![false; aux.order()];
            for &(i, j) in &m {
                assert!(i < j);
                assert!(!covered[i] && !covered[j], "matching reuses a part");
                covered[i] = true;
                covered[j] = true;
                assert_eq!(aux.color(i, j), Color::Red);
                assert_eq!(aux.color(j, i), Color::Red);
            }
            for i in 0..aux.order() {
                for j in i + 1..aux.order() {
                    if !covered[i]
                        && !covered[j]
                        && aux.color(i, j) == Color::Red
                        && aux.color(j, i) == Color::Red
                    {
                        panic!("uncovered red-red pair ({i},{j}) left behind");
                    }
                }
            }
        }
    }

    #[test]
    fn lift_takes_last_exit() {
        // Three blue 4-cycles; exits placed so the walk must pass the
        // earlier exit at vertex 1 and leave from vertex 3.
        let n = 12;
        let back = [(0, 3), (4, 7), (8, 11)];
        let t = Tournament::from_fn(n, |i, j| !back.contains(&(i, j)));
        let blue: &[(usize, usize)] = &[
            (0, 1), (1, 2), (2, 3), (3, 0),
            (4, 5), (5, 6), (6, 7), (7, 4),
            (8, 9), (9, 10), (10, 11), (11, 8),
            (1, 5), (3, 4), (5, 9),
        ];
        let g = ColoredTournament::from_fn(t, |i, j| {
            if blue.contains(&(i, j)) { Color::Blue } else { Color::Red }
        });
        let cycles: Vec<Vec<usize>> =
            vec![vec![0, 1, 2, 3], vec![4, 5, 6, 7], vec![8, 9, 10, 11]];
        let path = lift_path_through_cycles(&g, Color::Blue, &cycles).unwrap();
        assert_eq!(path, vec![0, 1, 2, 3, 4, 5, 9, 10, 11, 8]);

        // Starve the second hop and the error names the stuck cycle.
        let g = ColoredTournament::from_fn(g.tournament().clone(), |i, j| {
            if blue.contains(&(i, j)) && (i, j) != (5, 9) { Color::Blue } else { Color::Red }
        });
        assert_eq!(
            lift_path_through_cycles(&g, Color::Blue, &cycles).unwrap_err(),
            MachineryError::LiftStuck { cycle: 1, color: Color::Blue }
        );
    }

    #[test]
    fn lift_rejects_bad_cycles() {
        let (g, cycles) = cycle_host(2, 5, Color::Red);
        let repeated = vec![cycles[0].clone(), cycles[0].clone()];
        assert_eq!(
            lift_path_through_cycles(&g, Color::Blue, &repeated).unwrap_err(),
            MachineryError::OverlappingCycles { i: 0, j: 1 }
        );
        // 2 -> 4 skips a cycle vertex and is red.
        let broken = vec![vec![0, 1, 2, 4]];
        assert_eq!(
            lift_path_through_cycles(&g, Color::Blue, &broken).unwrap_err(),
            MachineryError::NotAColorCycle { index: 0, color: Color::Blue }
        );
    }

    #[test]
    fn lift_chain_fuzz() {
        for seed in 0..60u64 {
            let c = 3 + (seed % 4) as usize;
            let len = 4 + (seed % 3) as usize;
            let (base, cycles) = cycle_host(c, len, Color::Red);
            // Sprinkle blue forward exits: vertex v of cycle i gains a blue
            // edge into cycle i+1 with probability 1/2, at least one per hop.
            let n = base.n();
            let mut rng = rng_from_seed(seed * 31 + 7);
            let mut extra: Vec<(usize, usize)> = Vec::new();
            for i in 0..c - 1 {
                let mut any = false;
                for off in 0..len {
                    let v = i * len + off;
                    if uniform_below(&mut rng, 2) == 0 {
                        let w = (i + 1) * len + uniform_below(&mut rng, len as u64) as usize;
                        extra.push((v, w));
                        any = true;
                    }
                }
                if !any {
                    extra.push((i * len, (i + 1) * len));
                }
            }
            let g = ColoredTournament::from_fn(base.tournament().clone(), |i, j| {
                if base.color_of(i, j) == Some(Color::Blue) || extra.contains(&(i, j)) {
                    Color::Blue
                } else {
                    Color::Red
                }
            });
            let r_min = (0..c - 1)
                .map(|i| {
                    let next = part(n, &cycles[i + 1]);
                    cycles[i]
                        .iter()
                        .filter(|&&v| g.first_out_in(Color::Blue, v, &next).is_some())
                        .count()
                })
                .min()
                .unwrap();
            assert!(r_min >= 1);

            let path = lift_path_through_cycles(&g, Color::Blue, &cycles).unwrap();
            assert!(path.len() >= r_min * (c - 1) + len, "seed {seed}");
            let distinct = part(n, &path);
            assert_eq!(distinct.count(), path.len());
            for w in path.windows(2) {
                assert_eq!(g.color_of(w[0], w[1]), Some(Color::Blue));
            }
            // Grouped by cycle, in chain order.
            let indices: Vec<usize> = path.iter().map(|v| v / len).collect();
            let mut dedup = indices.clone();
            dedup.dedup();
            assert_eq!(dedup, (0..c).collect::<Vec<_>>(), "seed {seed}");
        }
    }

    #[test]
    fn medium_all_red_crossings_give_pairs() {
        let (g, cycles) = cycle_host(4, 6, Color::Red);
        let out = red_blue_pairs_from_cycles(&g, &cycles, CycleMode::Medium, &medium_cfg());
        let PairsOrPath::Pairs(rbp) = out.unwrap() else {
            panic!("expected pairs");
        };
        assert_eq!(rbp.pairs.len(), 2);
        assert_eq!(rbp.k, 3);
        validate_red_blue_pairs(&g, &rbp).unwrap();
        // Pairs come from the matching (0,1), (2,3); A sets sit on the
        // lower cycle of each pair, in cycle order.
        assert_eq!(rbp.pairs[0].0.to_vec(), vec![0, 1, 2]);
        assert_eq!(rbp.pairs[0].1.to_vec(), vec![6, 7, 8]);
        assert_eq!(rbp.blue_paths[0], vec![0, 1, 2, 3, 4, 5]);
    }

    #[test]
    fn medium_all_blue_crossings_give_a_path() {
        let (g, cycles) = cycle_host(4, 6, Color::Blue);
        let out = red_blue_pairs_from_cycles(&g, &cycles, CycleMode::Medium, &medium_cfg());
        let PairsOrPath::BluePath(path) = out.unwrap() else {
            panic!("expected a path");
        };
        // One exit per cycle is guaranteed by the aux threshold; here every
        // hop is available so the lift keeps whole cycles.
        assert_eq!(path.len(), 24);
        for w in path.windows(2) {
            assert_eq!(g.color_of(w[0], w[1]), Some(Color::Blue));
        }
    }

    #[test]
    fn medium_rejects_out_of_window_lengths() {
        let (g, cycles) = cycle_host(2, 3, Color::Red);
        assert_eq!(
            red_blue_pairs_from_cycles(&g, &cycles, CycleMode::Medium, &medium_cfg()).unwrap_err(),
            MachineryError::NotMedium { index: 0, len: 3, low: 4, high: 32 }
        );
        let (g, cycles) = cycle_host(1, 6, Color::Red);
        assert_eq!(
            red_blue_pairs_from_cycles(&g, &cycles, CycleMode::Long, &medium_cfg()).unwrap_err(),
            MachineryError::NotLong { index: 0, len: 6, min: 32 }
        );
    }

    /// One blue 40-cycle, everything else red: 0 -> 1 -> ... -> 39 -> 0.
    fn long_cycle_host() -> (ColoredTournament, Vec<Vec<usize>>) {
        cycle_host(1, 40, Color::Red)
    }

    #[test]
    fn long_cycle_reads_off_interval_pairs() {
        let (g, cycles) = long_cycle_host();
        let cfg = medium_cfg();
        let out = red_blue_pairs_from_cycles(&g, &cycles, CycleMode::Long, &cfg);
        let PairsOrPath::Pairs(rbp) = out.unwrap() else {
            panic!("expected pairs");
        };
        assert_eq!(rbp.k, 4);
        assert_eq!(rbp.pairs.len(), 3);
        validate_red_blue_pairs(&g, &rbp).unwrap();
        assert_eq!(rbp.pairs[0].0.to_vec(), vec![0, 1, 2, 3]);
        assert_eq!(rbp.pairs[0].1.to_vec(), vec![16, 17, 18, 19]);
        assert_eq!(rbp.pairs[2].0.to_vec(), vec![8, 9, 10, 11]);
        assert_eq!(rbp.pairs[2].1.to_vec(), vec![24, 25, 26, 27]);
        assert_eq!(rbp.blue_paths[1], vec![4, 5, 6, 7]);
    }

    #[test]
    fn long_cycle_blue_chord_is_reported() {
        let (base, cycles) = long_cycle_host();
        // A forward blue chord 0 -> 20 closes the blue cycle
        // 20 -> 21 -> ... -> 39 -> 0 -> 20 of order 21: rejected.
        let g = ColoredTournament::from_fn(base.tournament().clone(), |i, j| {
            if base.color_of(i, j) == Some(Color::Blue) || (i, j) == (0, 20) {
                Color::Blue
            } else {
                Color::Red
            }
        });
        assert_eq!(
            red_blue_pairs_from_cycles(&g, &cycles, CycleMode::Long, &medium_cfg()).unwrap_err(),
            MachineryError::BlueChord { cycle: 0, tail: 0, head: 20, span: 21 }
        );

        // A short back-chord 7 -> 5 closes a blue triangle, order 3 < k:
        // allowed, pairs unaffected.
        let t = Tournament::from_fn(40, |i, j| {
            if (i, j) == (0, 39) || (i, j) == (5, 7) {
                false
            } else {
                true
            }
        });
        let g = ColoredTournament::from_fn(t, |tail, head| {
            if head == tail + 1 || (tail, head) == (39, 0) || (tail, head) == (7, 5) {
                Color::Blue
            } else {
                Color::Red
            }
        });
        let out = red_blue_pairs_from_cycles(&g, &cycles, CycleMode::Long, &medium_cfg());
        let PairsOrPath::Pairs(rbp) = out.unwrap() else {
            panic!("expected pairs");
        };
        validate_red_blue_pairs(&g, &rbp).unwrap();
    }

    #[test]
    fn pairs_validator_catches_planted_defects() {
        let (g, cycles) = long_cycle_host();
        let cfg = medium_cfg();
        let ok = match red_blue_pairs_from_cycles(&g, &cycles, CycleMode::Long, &cfg).unwrap() {
            PairsOrPath::Pairs(p) => p,
            PairsOrPath::BluePath(_) => unreachable!(),
        };

        // Cycle-successor 4 moved into B_0: the blue edge 3 -> 4 now sits
        // between A_0 and B_0.
        let mut bad = ok.clone();
        bad.pairs[0].1 = part(40, &[4, 17, 18, 19]);
        assert_eq!(validate_red_blue_pairs(&g, &bad).unwrap_err().clause, "red");

        let mut bad = ok.clone();
        bad.pairs[1].0 = ok.pairs[0].0.clone();
        assert_eq!(validate_red_blue_pairs(&g, &bad).unwrap_err().clause, "disjoint");

        let mut bad = ok.clone();
        bad.pairs[0].1.remove(16);
        assert_eq!(validate_red_blue_pairs(&g, &bad).unwrap_err().clause, "size");

        // Path 0 no longer spans A_0.
        let mut bad = ok.clone();
        bad.blue_paths[0] = vec![0, 1, 2];
        assert_eq!(validate_red_blue_pairs(&g, &bad).unwrap_err().clause, "path");

        // Red chord 0 -> 2 inside a path.
        let mut bad = ok.clone();
        bad.blue_paths[0] = vec![0, 2, 3];
        assert_eq!(validate_red_blue_pairs(&g, &bad).unwrap_err().clause, "path");

        // Paths 1 and 2 share vertex 7.
        let mut bad = ok.clone();
        bad.blue_paths[2] = vec![7, 8, 9, 10, 11];
        assert_eq!(validate_red_blue_pairs(&g, &bad).unwrap_err().clause, "path-disjoint");

        // Path 2 stretched to 16, which belongs to B_0.
        let mut bad = ok.clone();
        bad.blue_paths[2] = (8..=16).collect();
        assert_eq!(validate_red_blue_pairs(&g, &bad).unwrap_err().clause, "path-disjoint");

        // Stretching only to 12 stays clear of every B set: still valid.
        let mut bad = ok;
        bad.blue_paths[2] = vec![8, 9, 10, 11, 12];
        validate_red_blue_pairs(&g, &bad).unwrap();
    }

    #[test]
    fn greedy_rooted_respects_pools() {
        let g = ColoredTournament::monochromatic(Tournament::transitive(10), Color::Red);
        let star = OrientedTree::out_star(4);
        let allowed = part(10, &[2, 3, 4, 5, 6]);
        let roots = part(10, &[3]);
        let map = greedy_rooted(&g, Color::Red, &allowed, &roots, &star).unwrap();
        assert_eq!(map, vec![3, 4, 5, 6]);
        let emb = Embedding { map, color: Some(Color::Red) };
        validate_embedding(&g, &star, &emb).unwrap();

        // Root pool outside the allowed set: nothing to start from.
        assert!(greedy_rooted(&g, Color::Red, &allowed, &part(10, &[8]), &star).is_none());
        // Too few hosts after the root.
        let tight = part(10, &[7, 8]);
        assert!(greedy_rooted(&g, Color::Red, &tight, &tight, &star).is_none());
    }

    #[test]
    fn greedy_rooted_handles_mixed_orientations() {
        for seed in 0..20 {
            let g = ColoredTournament::random_coloring(Tournament::random(48, seed), seed * 3 + 1);
            let t = OrientedTree::random(7, TreeOrientation::Uniform, seed ^ 0x5a);
            let all = VertexSet::full(48);
            if let Some(map) = greedy_rooted(&g, Color::Blue, &all, &all, &t) {
                let emb = Embedding { map, color: Some(Color::Blue) };
                validate_embedding(&g, &t, &emb).unwrap();
            }
        }
    }

    #[test]
    fn block_coloring_aux_sees_its_structure() {
        // block_coloring(4): transitive on 9 vertices, blocks of 3, blue
        // inside a block and red forward between blocks. Counting red
        // out-neighbours per vertex recovers exactly the block order.
        let g = block_coloring(4);
        let parts: Vec<VertexSet> =
            (0..3).map(|i| part(9, &[3 * i, 3 * i + 1, 3 * i + 2])).collect();
        let aux = build_aux_digraph(
            &g,
            parts,
            &AuxRule::OutNeighbourCount { counted: Color::Red, threshold: 3 },
        )
        .unwrap();
        // Forward pairs are all-red between blocks; backward pairs have no
        // edges at all in that direction (the tournament is transitive).
        for i in 0..3 {
            for j in 0..3 {
                if i == j {
                    continue;
                }
                let expect = if i < j { Color::Blue } else { Color::Red };
                assert_eq!(aux.color(i, j), expect);
            }
        }
    }
}
