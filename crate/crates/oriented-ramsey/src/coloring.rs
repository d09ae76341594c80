//! Two-edge-colourings of tournaments, plus the structured colourings
//! that pin down how long monochromatic paths must be.
//!
//! A [`ColoredTournament`] keeps four packed adjacency matrices (out/in
//! rows per colour), all derived once from the orientation and a red
//! mask, so colour-restricted degree queries cost a handful of word
//! operations regardless of direction.

use crate::bitset::{BitMatrix, VertexSet};
use crate::rng::BitStream;
use crate::tournament::{OverlapError, Tournament};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Color {
    Red,
    Blue,
}

impl Color {
    pub const BOTH: [Color; 2] = [Color::Red, Color::Blue];

    #[inline]
    pub fn other(self) -> Color {
        match self {
            Color::Red => Color::Blue,
            Color::Blue => Color::Red,
        }
    }

    #[inline]
    pub(crate) fn index(self) -> usize {
        match self {
            Color::Red => 0,
            Color::Blue => 1,
        }
    }
}

impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Color::Red => "red",
            Color::Blue => "blue",
        })
    }
}

impl FromStr for Color {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "red" | "r" => Ok(Color::Red),
            "blue" | "b" => Ok(Color::Blue),
            other => Err(format!("unknown color {other:?} (expected red or blue)")),
        }
    }
}

/// A tournament together with a red/blue colour for every edge.
#[derive(Clone, PartialEq, Eq)]
pub struct ColoredTournament {
    t: Tournament,
    out: [BitMatrix; 2],
    inn: [BitMatrix; 2],
}

impl ColoredTournament {
    /// Core constructor: `red_out` must be a sub-matrix of the orientation
    /// (a red bit on a missing or reversed edge is a caller bug).
    pub fn from_red_mask(t: Tournament, red_out: BitMatrix) -> Self {
        let n = t.n();
        let mut blue_out = BitMatrix::zero(n);
        for i in 0..n {
            let orient = t.out_row(i).to_vec();
            let red = red_out.row(i);
            for (k, w) in red.iter().enumerate() {
                assert!(w & !orient[k] == 0, "red mask covers a non-edge at row {i}");
            }
            let red = red.to_vec();
            let dst = blue_out.row_mut(i);
            for k in 0..dst.len() {
                dst[k] = orient[k] & !red[k];
            }
        }
        let red_in = red_out.transposed();
        let blue_in = blue_out.transposed();
        ColoredTournament {
            t,
            out: [red_out, blue_out],
            inn: [red_in, blue_in],
        }
    }

    /// Colours each edge by `f(tail, head)` over present edges, visiting
    /// pairs in lexicographic order.
    pub fn from_fn(t: Tournament, mut f: impl FnMut(usize, usize) -> Color) -> Self {
        let n = t.n();
        let mut red = BitMatrix::zero(n);
        for i in 0..n {
            for j in i + 1..n {
                let (tail, head) = if t.has_edge(i, j) { (i, j) } else { (j, i) };
                if f(tail, head) == Color::Red {
                    red.set(tail, head, true);
                }
            }
        }
        Self::from_red_mask(t, red)
    }

    /// Uniformly random colour per edge: pairs in lexicographic order,
    /// one fair ChaCha8 bit each, a set bit meaning red.
    pub fn random_coloring(t: Tournament, seed: u64) -> Self {
        let mut bits = BitStream::new(seed);
        Self::from_fn(t, |_, _| if bits.next_bit() { Color::Red } else { Color::Blue })
    }

    pub fn monochromatic(t: Tournament, color: Color) -> Self {
        Self::from_fn(t, |_, _| color)
    }

    /// Flips every edge while keeping its colour, so red in-neighbourhoods
    /// become red out-neighbourhoods and vice versa.
    pub fn reversed(&self) -> Self {
        let flipped = self.t.reverse();
        Self::from_fn(flipped, |tail, head| {
            self.color_of(head, tail).expect("edge present in the original")
        })
    }

    /// Same orientation, colours exchanged.
    pub fn color_swapped(&self) -> Self {
        Self::from_fn(self.t.clone(), |tail, head| {
            self.color_of(tail, head).expect("edge present").other()
        })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.t.n()
    }

    #[inline]
    pub fn tournament(&self) -> &Tournament {
        &self.t
    }

    /// Colour of the edge `i -> j`, or `None` when that edge is absent
    /// (including when it points the other way).
    pub fn color_of(&self, i: usize, j: usize) -> Option<Color> {
        if !self.t.has_edge(i, j) {
            None
        } else if self.out[0].get(i, j) {
            Some(Color::Red)
        } else {
            Some(Color::Blue)
        }
    }

    #[inline]
    pub fn has_colored_edge(&self, c: Color, i: usize, j: usize) -> bool {
        self.out[c.index()].get(i, j)
    }

    #[inline]
    pub fn out_row(&self, c: Color, v: usize) -> &[u64] {
        self.out[c.index()].row(v)
    }

    #[inline]
    pub fn in_row(&self, c: Color, v: usize) -> &[u64] {
        self.inn[c.index()].row(v)
    }

    pub fn out_set(&self, c: Color, v: usize) -> VertexSet {
        VertexSet::from_words(self.n(), self.out_row(c, v))
    }

    pub fn in_set(&self, c: Color, v: usize) -> VertexSet {
        VertexSet::from_words(self.n(), self.in_row(c, v))
    }

    #[inline]
    pub fn out_count_in(&self, c: Color, v: usize, within: &VertexSet) -> usize {
        self.out[c.index()].row_count_in(v, within)
    }

    #[inline]
    pub fn in_count_in(&self, c: Color, v: usize, within: &VertexSet) -> usize {
        self.inn[c.index()].row_count_in(v, within)
    }

    #[inline]
    pub fn first_out_in(&self, c: Color, v: usize, within: &VertexSet) -> Option<usize> {
        self.out[c.index()].row_first_in(v, within)
    }

    #[inline]
    pub fn first_in_in(&self, c: Color, v: usize, within: &VertexSet) -> Option<usize> {
        self.inn[c.index()].row_first_in(v, within)
    }

    pub fn iter_out_in<'a>(
        &'a self,
        c: Color,
        v: usize,
        within: &'a VertexSet,
    ) -> impl Iterator<Item = usize> + 'a {
        self.out[c.index()].row_iter_in(v, within)
    }

    pub fn iter_in_in<'a>(
        &'a self,
        c: Color,
        v: usize,
        within: &'a VertexSet,
    ) -> impl Iterator<Item = usize> + 'a {
        self.inn[c.index()].row_iter_in(v, within)
    }

    /// Total number of edges of colour `c`.
    pub fn edge_total(&self, c: Color) -> u64 {
        self.out[c.index()].count()
    }

    /// Number of edges with both ends in `set`, optionally restricted to
    /// one colour. Each edge is counted once, at its tail.
    pub fn edges_within(&self, set: &VertexSet, filter: Option<Color>) -> u64 {
        set.iter()
            .map(|v| match filter {
                Some(c) => self.out_count_in(c, v, set) as u64,
                None => self.t.out_count_in(v, set) as u64,
            })
            .sum()
    }

    /// Number of edges directed from `a` into `b`, optionally restricted
    /// to one colour.
    pub fn edge_count(
        &self,
        a: &VertexSet,
        b: &VertexSet,
        filter: Option<Color>,
    ) -> Result<u64, OverlapError> {
        if !a.is_disjoint(b) {
            return Err(OverlapError);
        }
        Ok(a.iter()
            .map(|v| match filter {
                Some(c) => self.out_count_in(c, v, b) as u64,
                None => self.t.out_count_in(v, b) as u64,
            })
            .sum())
    }
}

impl fmt::Debug for ColoredTournament {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "ColoredTournament(n={}, red={}, blue={})",
            self.n(),
            self.edge_total(Color::Red),
            self.edge_total(Color::Blue)
        )
    }
}

// =========================================================================
// Structured colourings
// =========================================================================

/// Ceiling of the square root, exactly.
fn ceil_sqrt(n: usize) -> usize {
    let s = n.isqrt();
    if s * s < n {
        s + 1
    } else {
        s
    }
}

/// Smallest `b >= 1` with `4^b >= n`, which is exactly `ceil(log2(n) / 2)`
/// for `n >= 2`, computed without floating point.
fn half_log2_ceil(n: usize) -> usize {
    let mut b = 1usize;
    let mut pow = 4usize;
    while pow < n {
        b += 1;
        pow = pow.saturating_mul(4);
    }
    b
}

/// The colouring of the transitive tournament on `(n-1)^2` vertices whose
/// longest monochromatic directed path has exactly `n - 1` vertices:
/// consecutive blocks of `n - 1`, blue inside a block, red between blocks.
///
/// # Panics
///
/// Panics if `n < 2`.
pub fn block_coloring(n: usize) -> ColoredTournament {
    assert!(n >= 2, "block_coloring needs n >= 2");
    let b = n - 1;
    let t = Tournament::transitive(b * b);
    ColoredTournament::from_fn(t, |i, j| {
        if i / b == j / b {
            Color::Blue
        } else {
            Color::Red
        }
    })
}

/// The block partition behind [`interval_coloring`].
///
/// Index 0 is the remainder (fewer than `sqrt(n)` vertices, listed in the
/// order of a Hamiltonian path of its induced subtournament; possibly
/// empty). Indices `1..` are the extracted transitive blocks of size
/// `ceil(log2(n) / 2)` each, listed in their transitive order.
pub fn interval_blocks(g: &Tournament) -> Vec<Vec<usize>> {
    let n = g.n();
    assert!(n >= 4, "interval_coloring needs n >= 4");
    let bs = half_log2_ceil(n);
    let mut remaining = VertexSet::full(n);
    let mut main_blocks: Vec<Vec<usize>> = Vec::new();
    // Keep extracting while at least sqrt(n) vertices remain.
    while remaining.count() * remaining.count() >= n {
        let order = g.transitive_subtournament_in(&remaining);
        assert!(order.len() >= bs, "transitive extraction fell short");
        let block: Vec<usize> = order[..bs].to_vec();
        for &v in &block {
            remaining.remove(v);
        }
        main_blocks.push(block);
    }
    let mut blocks = Vec::with_capacity(main_blocks.len() + 1);
    blocks.push(g.hamiltonian_path_in(&remaining));
    blocks.extend(main_blocks);
    blocks
}

/// An adversarial colouring of an arbitrary tournament whose longest
/// monochromatic path is O(n / sqrt(log n)).
///
/// Transitive blocks are extracted greedily ([`interval_blocks`]); edges
/// from a lower-indexed block to a higher-indexed one are blue and the
/// reverse direction red. Inside a block, its transitive order is cut
/// into chunks of `ceil(sqrt(block size))`: blue within a chunk, red
/// between chunks. The remainder block is ordered by a Hamiltonian path
/// and coloured red along it, blue against it. Every colour class is
/// acyclic by construction, so exact longest-path values stay cheap.
///
/// # Panics
///
/// Panics if `g.n() < 4`.
pub fn interval_coloring(g: &Tournament) -> ColoredTournament {
    let n = g.n();
    let blocks = interval_blocks(g);
    let mut block_of = vec![0usize; n];
    let mut pos_in_block = vec![0usize; n];
    for (b, block) in blocks.iter().enumerate() {
        for (p, &v) in block.iter().enumerate() {
            block_of[v] = b;
            pos_in_block[v] = p;
        }
    }
    let chunk = ceil_sqrt(blocks.get(1).map_or(1, |b| b.len())).max(1);
    ColoredTournament::from_fn(g.clone(), |tail, head| {
        let (bt, bh) = (block_of[tail], block_of[head]);
        if bt != bh {
            if bt < bh {
                Color::Blue
            } else {
                Color::Red
            }
        } else if bt == 0 {
            // Remainder: red along the Hamiltonian order, blue against it.
            if pos_in_block[tail] < pos_in_block[head] {
                Color::Red
            } else {
                Color::Blue
            }
        } else if pos_in_block[tail] / chunk == pos_in_block[head] / chunk {
            Color::Blue
        } else {
            Color::Red
        }
    })
}
