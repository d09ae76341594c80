//! Vertex sets and square bit matrices over a fixed vertex range `0..n`.
//!
//! Everything in this crate that touches adjacency goes through these two
//! types, so they stay deliberately small: `u64` blocks, no growth, no
//! spare abstraction. Vertex ids are plain `usize` indices.

use std::fmt;

/// Number of `u64` words needed for `n` bits.
#[inline]
pub(crate) const fn words_for(n: usize) -> usize {
    n.div_ceil(64)
}

/// A subset of the vertices `0..n`, stored as a little-endian bit vector.
///
/// Bits at positions `>= n` are always zero; every operation below keeps
/// that invariant so `count()` and word-level loops never need masking.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct VertexSet {
    n: usize,
    words: Vec<u64>,
}

impl VertexSet {
    /// Empty subset of `0..n`.
    pub fn empty(n: usize) -> Self {
        VertexSet { n, words: vec![0; words_for(n)] }
    }

    /// The full set `0..n`.
    pub fn full(n: usize) -> Self {
        let mut s = VertexSet { n, words: vec![!0u64; words_for(n)] };
        s.trim();
        s
    }

    /// Set containing exactly `v`.
    pub fn singleton(n: usize, v: usize) -> Self {
        let mut s = Self::empty(n);
        s.insert(v);
        s
    }

    /// Builds a set from an iterator of vertex ids.
    pub fn from_iter<I: IntoIterator<Item = usize>>(n: usize, iter: I) -> Self {
        let mut s = Self::empty(n);
        for v in iter {
            s.insert(v);
        }
        s
    }

    /// Builds a set over `0..n` from raw little-endian words; bits beyond
    /// `n` are cleared.
    pub(crate) fn from_words(n: usize, words: &[u64]) -> Self {
        debug_assert_eq!(words.len(), words_for(n));
        let mut s = VertexSet { n, words: words.to_vec() };
        s.trim();
        s
    }

    /// Clears bits at positions `>= n` after a whole-word operation.
    #[inline]
    fn trim(&mut self) {
        let r = self.n % 64;
        if r != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << r) - 1;
            }
        }
    }

    /// Size of the ground range `0..n` (not the cardinality).
    #[inline]
    pub fn ground(&self) -> usize {
        self.n
    }

    /// Number of members.
    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    #[inline]
    pub fn contains(&self, v: usize) -> bool {
        debug_assert!(v < self.n);
        self.words[v / 64] >> (v % 64) & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, v: usize) {
        assert!(v < self.n, "vertex {v} out of range 0..{}", self.n);
        self.words[v / 64] |= 1u64 << (v % 64);
    }

    #[inline]
    pub fn remove(&mut self, v: usize) {
        debug_assert!(v < self.n);
        self.words[v / 64] &= !(1u64 << (v % 64));
    }

    /// Lowest member, if any. Deterministic tie-breaking throughout the
    /// crate picks this vertex.
    pub fn first(&self) -> Option<usize> {
        for (i, &w) in self.words.iter().enumerate() {
            if w != 0 {
                return Some(i * 64 + w.trailing_zeros() as usize);
            }
        }
        None
    }

    /// Iterates members in increasing order.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let v = i * 64 + w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(v)
                }
            })
        })
    }

    /// Members as a vector, increasing order.
    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    #[inline]
    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn union_with(&mut self, other: &VertexSet) {
        debug_assert_eq!(self.n, other.n);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn intersect_with(&mut self, other: &VertexSet) {
        debug_assert_eq!(self.n, other.n);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
    }

    pub fn subtract(&mut self, other: &VertexSet) {
        debug_assert_eq!(self.n, other.n);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= !b;
        }
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        let mut s = self.clone();
        s.union_with(other);
        s
    }

    pub fn intersection(&self, other: &VertexSet) -> VertexSet {
        let mut s = self.clone();
        s.intersect_with(other);
        s
    }

    pub fn difference(&self, other: &VertexSet) -> VertexSet {
        let mut s = self.clone();
        s.subtract(other);
        s
    }

    /// Complement within `0..n`.
    pub fn complement(&self) -> VertexSet {
        let mut s = VertexSet {
            n: self.n,
            words: self.words.iter().map(|w| !w).collect(),
        };
        s.trim();
        s
    }

    pub fn is_disjoint(&self, other: &VertexSet) -> bool {
        debug_assert_eq!(self.n, other.n);
        self.words.iter().zip(&other.words).all(|(a, b)| a & b == 0)
    }

    pub fn is_subset_of(&self, other: &VertexSet) -> bool {
        debug_assert_eq!(self.n, other.n);
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    /// `|self ∩ other|` without materialising the intersection.
    pub fn intersection_count(&self, other: &VertexSet) -> usize {
        debug_assert_eq!(self.n, other.n);
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    /// `|row ∩ self|` for a raw adjacency row of the same ground range.
    #[inline]
    pub(crate) fn count_against(&self, row: &[u64]) -> usize {
        debug_assert_eq!(self.words.len(), row.len());
        self.words
            .iter()
            .zip(row)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    /// Lowest member of `self ∩ row`, if any.
    #[inline]
    pub(crate) fn first_against(&self, row: &[u64]) -> Option<usize> {
        for (i, (a, b)) in self.words.iter().zip(row).enumerate() {
            let w = a & b;
            if w != 0 {
                return Some(i * 64 + w.trailing_zeros() as usize);
            }
        }
        None
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

// Serialized as the ground-set size plus a sorted member list, so reports
// stay readable and round-trip exactly.
impl serde::Serialize for VertexSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("VertexSet", 2)?;
        st.serialize_field("n", &self.n)?;
        st.serialize_field("members", &self.to_vec())?;
        st.end()
    }
}

impl<'de> serde::Deserialize<'de> for VertexSet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(serde::Deserialize)]
        struct Repr {
            n: usize,
            members: Vec<usize>,
        }
        let repr = Repr::deserialize(d)?;
        let mut set = VertexSet::empty(repr.n);
        for v in repr.members {
            if v >= repr.n {
                return Err(serde::de::Error::custom(format!(
                    "member {v} outside ground set 0..{}",
                    repr.n
                )));
            }
            set.insert(v);
        }
        Ok(set)
    }
}

// =========================================================================
// Bit matrices
// =========================================================================

/// A square `n x n` bit matrix with row-major `u64` packing.
///
/// Row `i` answers "which `j` have the bit `(i, j)` set"; the diagonal is
/// always zero. Used for adjacency (bit = edge `i -> j`) and for colour
/// masks restricted to present edges.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BitMatrix {
    n: usize,
    w: usize,
    words: Vec<u64>,
}

impl BitMatrix {
    pub fn zero(n: usize) -> Self {
        let w = words_for(n);
        BitMatrix { n, w, words: vec![0; n * w] }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[u64] {
        debug_assert!(i < self.n);
        &self.words[i * self.w..(i + 1) * self.w]
    }

    #[inline]
    pub(crate) fn row_mut(&mut self, i: usize) -> &mut [u64] {
        debug_assert!(i < self.n);
        &mut self.words[i * self.w..(i + 1) * self.w]
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        debug_assert!(i < self.n && j < self.n);
        self.row(i)[j / 64] >> (j % 64) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        debug_assert!(i < self.n && j < self.n && i != j);
        let idx = i * self.w + j / 64;
        let bit = 1u64 << (j % 64);
        if value {
            self.words[idx] |= bit;
        } else {
            self.words[idx] &= !bit;
        }
    }

    /// Number of set bits in row `i` restricted to `within`.
    #[inline]
    pub fn row_count_in(&self, i: usize, within: &VertexSet) -> usize {
        within.count_against(self.row(i))
    }

    /// Lowest `j` in `within` with bit `(i, j)` set.
    #[inline]
    pub fn row_first_in(&self, i: usize, within: &VertexSet) -> Option<usize> {
        within.first_against(self.row(i))
    }

    /// Iterates set bits of row `i` restricted to `within`, ascending.
    pub fn row_iter_in<'a>(
        &'a self,
        i: usize,
        within: &'a VertexSet,
    ) -> impl Iterator<Item = usize> + 'a {
        let row = self.row(i);
        within.words().iter().enumerate().flat_map(move |(k, &w)| {
            let mut w = w & row[k];
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let v = k * 64 + w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(v)
                }
            })
        })
    }

    /// Transposed copy: bit `(i, j)` of the result equals bit `(j, i)`.
    pub fn transposed(&self) -> BitMatrix {
        let mut t = BitMatrix::zero(self.n);
        for i in 0..self.n {
            let row = self.row(i);
            for k in 0..self.w {
                let mut w = row[k];
                while w != 0 {
                    let j = k * 64 + w.trailing_zeros() as usize;
                    w &= w - 1;
                    t.set(j, i, true);
                }
            }
        }
        t
    }

    /// Total number of set bits.
    pub fn count(&self) -> u64 {
        self.words.iter().map(|w| w.count_ones() as u64).sum()
    }
}
