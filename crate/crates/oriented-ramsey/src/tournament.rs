//! Tournaments: complete graphs with every edge oriented.
//!
//! The adjacency lives in a packed [`BitMatrix`]; bit `(i, j)` means the
//! edge between `i` and `j` points `i -> j`. Exactly one of `(i, j)` and
//! `(j, i)` is set for every pair, so in-neighbourhoods never need their
//! own storage: the in-row of `v` is the complement of its out-row minus
//! `v` itself.

use crate::bitset::{words_for, BitMatrix, VertexSet};
use crate::rng::BitStream;
use thiserror::Error;

/// Directed counts between vertex sets require disjoint sides.
#[derive(Debug, Error, PartialEq, Eq)]
#[error("vertex sets overlap; directed edge counts need disjoint sides")]
pub struct OverlapError;

#[derive(Clone, PartialEq, Eq)]
pub struct Tournament {
    n: usize,
    out: BitMatrix,
}

impl Tournament {
    /// Builds from an orientation choice per unordered pair: `forward(i, j)`
    /// with `i < j` returns true when the edge points `i -> j`.
    pub fn from_fn(n: usize, mut forward: impl FnMut(usize, usize) -> bool) -> Self {
        assert!(n >= 1, "tournaments need at least one vertex");
        let mut out = BitMatrix::zero(n);
        for i in 0..n {
            for j in i + 1..n {
                if forward(i, j) {
                    out.set(i, j, true);
                } else {
                    out.set(j, i, true);
                }
            }
        }
        Tournament { n, out }
    }

    /// Uniformly random orientation of each pair. Pairs are visited in
    /// lexicographic order `(i, j)`, `i < j`, consuming one fair bit each
    /// from the ChaCha8 stream for `seed`; a set bit points `i -> j`.
    pub fn random(n: usize, seed: u64) -> Self {
        let mut bits = BitStream::new(seed);
        Self::from_fn(n, |_, _| bits.next_bit())
    }

    /// The transitive tournament: `i -> j` exactly when `i < j`.
    pub fn transitive(n: usize) -> Self {
        Self::from_fn(n, |_, _| true)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.out.get(i, j)
    }

    #[inline]
    pub fn out_row(&self, v: usize) -> &[u64] {
        self.out.row(v)
    }

    /// Out-neighbourhood as a set.
    pub fn out_set(&self, v: usize) -> VertexSet {
        VertexSet::from_words(self.n, self.out.row(v))
    }

    /// In-neighbourhood as a set: everything that is neither `v` nor an
    /// out-neighbour.
    pub fn in_set(&self, v: usize) -> VertexSet {
        let mut s = self.out_set(v).complement();
        s.remove(v);
        s
    }

    pub fn out_degree(&self, v: usize) -> usize {
        self.out.row(v).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn in_degree(&self, v: usize) -> usize {
        self.n - 1 - self.out_degree(v)
    }

    /// `|out(v) ∩ within|`.
    #[inline]
    pub fn out_count_in(&self, v: usize, within: &VertexSet) -> usize {
        self.out.row_count_in(v, within)
    }

    /// `|in(v) ∩ within|`, derived without an in-adjacency matrix.
    #[inline]
    pub fn in_count_in(&self, v: usize, within: &VertexSet) -> usize {
        within.count() - self.out_count_in(v, within) - usize::from(within.contains(v))
    }

    /// The tournament with every edge reversed.
    pub fn reverse(&self) -> Tournament {
        let n = self.n;
        let w = words_for(n);
        let mut full = vec![!0u64; w];
        if n % 64 != 0 {
            full[w - 1] = (1u64 << (n % 64)) - 1;
        }
        let mut out = BitMatrix::zero(n);
        for i in 0..n {
            let src = self.out.row(i).to_vec();
            let dst = out.row_mut(i);
            for k in 0..w {
                dst[k] = !src[k] & full[k];
            }
            dst[i / 64] &= !(1u64 << (i % 64));
        }
        Tournament { n, out }
    }

    /// Number of edges directed from `a` into `b`.
    pub fn edges_between(&self, a: &VertexSet, b: &VertexSet) -> Result<u64, OverlapError> {
        if !a.is_disjoint(b) {
            return Err(OverlapError);
        }
        Ok(a.iter().map(|v| self.out_count_in(v, b) as u64).sum())
    }

    /// A directed Hamiltonian path, found by sequential insertion: each
    /// vertex in increasing id order is placed before the head, after the
    /// tail, or between the unique consecutive pair that admits it.
    pub fn hamiltonian_path(&self) -> Vec<usize> {
        self.hamiltonian_path_in(&VertexSet::full(self.n))
    }

    /// Hamiltonian path of the subtournament induced on `within`.
    pub fn hamiltonian_path_in(&self, within: &VertexSet) -> Vec<usize> {
        let mut path: Vec<usize> = Vec::with_capacity(within.count());
        for v in within.iter() {
            if path.is_empty() {
                path.push(v);
                continue;
            }
            if self.has_edge(v, path[0]) {
                path.insert(0, v);
                continue;
            }
            if self.has_edge(*path.last().unwrap(), v) {
                path.push(v);
                continue;
            }
            // Somewhere the path switches from beating v to losing to v.
            let mut placed = false;
            for i in 0..path.len() - 1 {
                if self.has_edge(path[i], v) && self.has_edge(v, path[i + 1]) {
                    path.insert(i + 1, v);
                    placed = true;
                    break;
                }
            }
            assert!(placed, "insertion point must exist in a tournament");
        }
        path
    }

    /// An ordered transitive subtournament of size at least
    /// `floor(log2 n) + 1`, by repeatedly keeping the larger half of the
    /// lowest remaining vertex's neighbourhoods. All edges point from
    /// earlier to later positions of the returned order.
    pub fn transitive_subtournament(&self) -> Vec<usize> {
        self.transitive_subtournament_in(&VertexSet::full(self.n))
    }

    /// Restriction of [`Self::transitive_subtournament`] to `within`.
    pub fn transitive_subtournament_in(&self, within: &VertexSet) -> Vec<usize> {
        let mut front: Vec<usize> = Vec::new();
        let mut back: Vec<usize> = Vec::new();
        let mut cur = within.clone();
        while let Some(v) = cur.first() {
            let mut out = self.out_set(v);
            out.intersect_with(&cur);
            let mut inn = cur.clone();
            inn.subtract(&out);
            inn.remove(v);
            if out.count() >= inn.count() {
                front.push(v);
                cur = out;
            } else {
                back.push(v);
                cur = inn;
            }
        }
        back.reverse();
        front.extend(back);
        front
    }
}

impl std::fmt::Debug for Tournament {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Tournament(n={})", self.n)
    }
}
