//! (epsilon, k)-pseudorandomness: every ordered pair of disjoint vertex
//! sets of size at least k must carry at least an epsilon fraction of its
//! possible forward edges.
//!
//! Two checkers share the report shape. The exhaustive one enumerates all
//! disjoint pairs of size exactly k, which suffices: for |A|, |B| >= k the
//! directed density e(A, B) / |A||B| is an average of the densities of the
//! size-k sub-pairs, so the size-k minimum bounds every larger pair. The
//! sampled one runs a deterministic sweep of degree-ordered interval pairs
//! first (these refute strongly ordered hosts such as transitive
//! tournaments almost immediately, which uniform random pairs essentially
//! never do) and spends the rest of its trial budget on uniform pairs.

use crate::bitset::VertexSet;
use crate::rng::{rng_from_seed, uniform_below, uniform_in};
use crate::tournament::Tournament;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Thresholds for the density test. `k` may be pinned explicitly;
/// otherwise it is derived per host as `max(1, ceil(sigma * log2 n))`.
#[derive(Clone, Copy, Debug)]
pub struct PseudoParams {
    epsilon: f64,
    sigma: f64,
    k: Option<usize>,
}

impl Default for PseudoParams {
    fn default() -> Self {
        PseudoParams { epsilon: 0.25, sigma: 4.0, k: None }
    }
}

impl PseudoParams {
    pub fn new(epsilon: f64) -> Self {
        assert!(epsilon > 0.0 && epsilon < 0.5, "epsilon must lie in (0, 1/2)");
        PseudoParams { epsilon, ..Default::default() }
    }

    pub fn with_k(mut self, k: usize) -> Self {
        assert!(k >= 1);
        self.k = Some(k);
        self
    }

    pub fn with_sigma(mut self, sigma: f64) -> Self {
        assert!(sigma > 0.0);
        self.sigma = sigma;
        self
    }

    #[inline]
    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    /// The set-size threshold for an n-vertex host.
    pub fn k_for(&self, n: usize) -> usize {
        if let Some(k) = self.k {
            return k;
        }
        if n <= 1 {
            return 1;
        }
        let raw = self.sigma * (n as f64).log2();
        // Snap near-integers before the ceiling so 40.000000001 stays 40.
        let rounded = raw.round();
        let k = if (raw - rounded).abs() < 1e-9 { rounded } else { raw.ceil() };
        (k as usize).max(1)
    }
}

/// An edge count over a pair of sets, kept as the exact fraction
/// `edges / pairs` with `pairs = |A| * |B|`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Density {
    pub edges: u64,
    pub pairs: u64,
}

impl Density {
    pub fn value(&self) -> f64 {
        self.edges as f64 / self.pairs as f64
    }

    /// Exact comparison by cross-multiplication; no rounding.
    pub fn cmp_value(&self, other: &Density) -> std::cmp::Ordering {
        let lhs = self.edges as u128 * other.pairs as u128;
        let rhs = other.edges as u128 * self.pairs as u128;
        lhs.cmp(&rhs)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PseudoVerdict {
    CertifiedExhaustive,
    CertifiedSampled,
    Refuted,
}

/// A violating pair: `edges` forward edges from `a` to `b`, fewer than
/// `epsilon * |a| * |b|`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PseudoWitness {
    pub a: VertexSet,
    pub b: VertexSet,
    pub edges: u64,
}

impl PseudoWitness {
    /// Independent recount of everything the witness claims.
    pub fn validates(&self, g: &Tournament, epsilon: f64, k: usize) -> bool {
        if self.a.count() < k || self.b.count() < k {
            return false;
        }
        if !self.a.is_disjoint(&self.b) {
            return false;
        }
        let mut recount = 0u64;
        for u in self.a.iter() {
            for v in self.b.iter() {
                recount += u64::from(g.has_edge(u, v));
            }
        }
        recount == self.edges
            && (recount as f64) < epsilon * (self.a.count() * self.b.count()) as f64
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PseudoReport {
    pub verdict: PseudoVerdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<PseudoWitness>,
    pub trials: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub min_density: Option<Density>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PseudoError {
    #[error(
        "exhaustive check needs {required} pair evaluations but the budget is {budget}; \
         too large for exhaustive mode"
    )]
    TooLarge { required: u128, budget: u64 },
}

// =========================================================================
// Exhaustive check
// =========================================================================

/// Enumerates every ordered pair of disjoint size-k sets in lexicographic
/// order, stopping at the first violation. `k > n/2` certifies vacuously.
/// Refuses (rather than silently sampling) when the pair count exceeds
/// `budget`.
pub fn check_exhaustive(
    g: &Tournament,
    params: &PseudoParams,
    budget: u64,
) -> Result<PseudoReport, PseudoError> {
    let n = g.n();
    let k = params.k_for(n);
    if 2 * k > n {
        return Ok(PseudoReport {
            verdict: PseudoVerdict::CertifiedExhaustive,
            witness: None,
            trials: 0,
            min_density: None,
        });
    }
    let required = binomial(n, k).saturating_mul(binomial(n - k, k));
    if required > budget as u128 {
        return Err(PseudoError::TooLarge { required, budget });
    }

    let all: Vec<usize> = (0..n).collect();
    let mut tracker = DensityTracker::new(params.epsilon);
    let mut b_ids: Vec<usize> = Vec::with_capacity(n - k);
    each_combination(&all, k, &mut |a_ids| {
        b_ids.clear();
        b_ids.extend((0..n).filter(|v| !a_ids.contains(v)));
        each_combination(&b_ids, k, &mut |b_sel| tracker.evaluate(g, a_ids, b_sel))
    });
    Ok(tracker.into_report(PseudoVerdict::CertifiedExhaustive))
}

/// Exact binomial coefficient, saturating at u128::MAX.
pub(crate) fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul((n - i) as u128) / (i + 1) as u128;
    }
    acc
}

/// Visits the k-subsets of `items` in lexicographic order. `visit`
/// returns false to stop the walk; the return value says whether the walk
/// ran to completion.
pub(crate) fn each_combination(
    items: &[usize],
    k: usize,
    visit: &mut impl FnMut(&[usize]) -> bool,
) -> bool {
    let n = items.len();
    if k > n {
        return true;
    }
    if k == 0 {
        return visit(&[]);
    }
    let mut idx: Vec<usize> = (0..k).collect();
    let mut chosen = vec![0usize; k];
    loop {
        for (slot, &i) in idx.iter().enumerate() {
            chosen[slot] = items[i];
        }
        if !visit(&chosen) {
            return false;
        }
        // Rightmost index that can still move.
        let mut t = k;
        loop {
            if t == 0 {
                return true;
            }
            t -= 1;
            if idx[t] < n - k + t {
                break;
            }
        }
        idx[t] += 1;
        for j in t + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

// =========================================================================
// Sampled check
// =========================================================================

/// Budgeted check: deterministic degree-interval probes first, uniform
/// disjoint pairs (sizes uniform in `[k, n/2]`) for the remaining trials.
/// `n < 2k` certifies vacuously with zero trials.
pub fn check_sampled(
    g: &Tournament,
    params: &PseudoParams,
    trials: u64,
    seed: u64,
) -> PseudoReport {
    let n = g.n();
    let k = params.k_for(n);
    if n < 2 * k {
        return PseudoReport {
            verdict: PseudoVerdict::CertifiedSampled,
            witness: None,
            trials: 0,
            min_density: None,
        };
    }
    let half = n / 2;
    let mut tracker = DensityTracker::new(params.epsilon);

    // Probe phase: intervals of the out-degree order, sizes doubling from
    // k up to n/2, both orientations. A transitive host fails the
    // (low-degree block, high-degree block) probe with zero forward edges.
    let mut by_degree: Vec<usize> = (0..n).collect();
    by_degree.sort_by_key(|&v| (g.out_degree(v), v));
    let mut sizes: Vec<usize> = Vec::new();
    let mut s = k;
    while s <= half {
        sizes.push(s);
        if s == half {
            break;
        }
        s = (s * 2).min(half);
    }
    'probing: for &s in &sizes {
        let bottom = &by_degree[..s];
        let top = &by_degree[n - s..];
        for (a, b) in [(bottom, top), (top, bottom)] {
            if tracker.trials == trials || !tracker.evaluate(g, a, b) {
                break 'probing;
            }
        }
    }

    if tracker.violation.is_none() {
        let mut rng = rng_from_seed(seed);
        let mut pool: Vec<usize> = Vec::with_capacity(n);
        while tracker.trials < trials {
            let s = uniform_in(&mut rng, k as u64, half as u64) as usize;
            pool.clear();
            pool.extend(0..n);
            for i in 0..2 * s {
                let j = i + uniform_below(&mut rng, (n - i) as u64) as usize;
                pool.swap(i, j);
            }
            if !tracker.evaluate(g, &pool[..s], &pool[s..2 * s]) {
                break;
            }
        }
    }
    tracker.into_report(PseudoVerdict::CertifiedSampled)
}

/// Shared evaluation core: counts e(A, B), tracks the exact minimum
/// density, and captures the first violation.
struct DensityTracker {
    epsilon: f64,
    trials: u64,
    min: Option<Density>,
    violation: Option<PseudoWitness>,
}

impl DensityTracker {
    fn new(epsilon: f64) -> Self {
        DensityTracker { epsilon, trials: 0, min: None, violation: None }
    }

    /// Returns false when a violation was recorded (stop the walk).
    fn evaluate(&mut self, g: &Tournament, a_ids: &[usize], b_ids: &[usize]) -> bool {
        let n = g.n();
        let b_mask = VertexSet::from_iter(n, b_ids.iter().copied());
        let edges: u64 = a_ids
            .iter()
            .map(|&a| b_mask.count_against(g.out_row(a)) as u64)
            .sum();
        self.trials += 1;
        let here = Density { edges, pairs: (a_ids.len() * b_ids.len()) as u64 };
        match &self.min {
            Some(best) if here.cmp_value(best).is_ge() => {}
            _ => self.min = Some(here),
        }
        if (edges as f64) < self.epsilon * here.pairs as f64 {
            self.violation = Some(PseudoWitness {
                a: VertexSet::from_iter(n, a_ids.iter().copied()),
                b: b_mask,
                edges,
            });
            return false;
        }
        true
    }

    fn into_report(self, certified: PseudoVerdict) -> PseudoReport {
        let verdict = if self.violation.is_some() {
            PseudoVerdict::Refuted
        } else {
            certified
        };
        PseudoReport {
            verdict,
            witness: self.violation,
            trials: self.trials,
            min_density: self.min,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn three_cycle() -> Tournament {
        // 0 -> 1 -> 2 -> 0.
        Tournament::from_fn(3, |i, j| (i, j) != (0, 2))
    }

    #[test]
    fn transitive_is_refuted_exhaustively() {
        let g = Tournament::transitive(8);
        let p = PseudoParams::new(0.1).with_k(4);
        let report = check_exhaustive(&g, &p, 1_000_000).unwrap();
        assert_eq!(report.verdict, PseudoVerdict::Refuted);
        let w = report.witness.expect("refutation carries a witness");
        assert!(w.validates(&g, 0.1, 4));
        // The canonical violating pair: top half as source, bottom half as
        // target, zero forward edges.
        let top = VertexSet::from_iter(8, 4..8);
        let bottom = VertexSet::from_iter(8, 0..4);
        assert_eq!(g.edges_between(&top, &bottom).unwrap(), 0);
        assert_eq!(report.min_density.unwrap().edges, w.edges);
    }

    #[test]
    fn oversized_k_certifies_vacuously() {
        let g = Tournament::random(9, 3);
        let p = PseudoParams::new(0.3).with_k(5);
        let report = check_exhaustive(&g, &p, 10).unwrap();
        assert_eq!(report.verdict, PseudoVerdict::CertifiedExhaustive);
        assert_eq!(report.trials, 0);
        assert!(report.min_density.is_none() && report.witness.is_none());
    }

    #[test]
    fn three_cycle_verdict_depends_on_epsilon() {
        let g = three_cycle();
        // Ordered singleton pairs: three have the edge forward (density 1)
        // and three have it backward (density 0), so any epsilon > 0
        // refutes with some backward pair.
        let p = PseudoParams::new(0.4).with_k(1);
        let report = check_exhaustive(&g, &p, 100).unwrap();
        assert_eq!(report.verdict, PseudoVerdict::Refuted);
        let w = report.witness.unwrap();
        assert!(w.validates(&g, 0.4, 1));
        assert_eq!(w.edges, 0);
        assert_eq!(report.min_density.unwrap(), Density { edges: 0, pairs: 1 });
    }

    #[test]
    fn budget_overflow_is_an_error_not_a_sample() {
        let g = Tournament::random(40, 1);
        let p = PseudoParams::new(0.25).with_k(10);
        let err = check_exhaustive(&g, &p, 1000).unwrap_err();
        match err {
            PseudoError::TooLarge { required, budget } => {
                assert_eq!(budget, 1000);
                assert!(required > 1000);
            }
        }
    }

    #[test]
    fn exhaustive_enumeration_is_complete() {
        // Count pairs on a certified host: must equal C(n,k) * C(n-k,k).
        let g = Tournament::random(10, 7);
        let p = PseudoParams::new(0.01).with_k(2);
        let report = check_exhaustive(&g, &p, 10_000_000).unwrap();
        if report.verdict == PseudoVerdict::CertifiedExhaustive {
            assert_eq!(report.trials, 45 * 28);
        }
        // Either way the minimum density is a genuine pair density.
        let d = report.min_density.unwrap();
        assert_eq!(d.pairs, 4);
    }

    #[test]
    fn monotone_in_epsilon_and_k() {
        for seed in 0..12 {
            let n = 10 + (seed as usize) % 5;
            let g = Tournament::random(n, seed);
            for k in [2usize, 3] {
                let base = check_exhaustive(&g, &PseudoParams::new(0.3).with_k(k), u64::MAX >> 1)
                    .unwrap();
                if base.verdict != PseudoVerdict::CertifiedExhaustive {
                    continue;
                }
                for eps in [0.2, 0.1, 0.05] {
                    let r = check_exhaustive(&g, &PseudoParams::new(eps).with_k(k), u64::MAX >> 1)
                        .unwrap();
                    assert_eq!(r.verdict, PseudoVerdict::CertifiedExhaustive);
                }
                let bigger = check_exhaustive(&g, &PseudoParams::new(0.3).with_k(k + 1), u64::MAX >> 1)
                    .unwrap();
                assert_eq!(bigger.verdict, PseudoVerdict::CertifiedExhaustive);
            }
        }
    }

    #[test]
    fn exhaustive_certificate_implies_sampled_agreement() {
        for seed in 0..10 {
            let n = 10 + (seed as usize) % 5;
            let g = Tournament::random(n, 100 + seed);
            let p = PseudoParams::new(0.2).with_k(3);
            let exhaustive = check_exhaustive(&g, &p, u64::MAX >> 1).unwrap();
            if exhaustive.verdict != PseudoVerdict::CertifiedExhaustive {
                continue;
            }
            for sample_seed in 0..4 {
                let sampled = check_sampled(&g, &p, 500, sample_seed);
                assert_eq!(
                    sampled.verdict,
                    PseudoVerdict::CertifiedSampled,
                    "seed {seed}/{sample_seed} refuted a certified host"
                );
            }
        }
    }

    #[test]
    fn sampled_refutes_transitive_with_interval_witness() {
        let g = Tournament::transitive(1024);
        let p = PseudoParams::default(); // epsilon 1/4, sigma 4 => k = 40
        assert_eq!(p.k_for(1024), 40);
        let report = check_sampled(&g, &p, 10_000, 11);
        assert_eq!(report.verdict, PseudoVerdict::Refuted);
        // The very first probe pair (bottom out-degrees vs top) violates.
        assert_eq!(report.trials, 1);
        let w = report.witness.unwrap();
        assert!(w.validates(&g, 0.25, 40));
        assert_eq!(w.edges, 0, "interval witness should have no forward edges");
    }

    #[test]
    fn sampled_certifies_random_hosts() {
        let g = Tournament::random(256, 0xbeef);
        let p = PseudoParams::default();
        let report = check_sampled(&g, &p, 2000, 5);
        assert_eq!(report.verdict, PseudoVerdict::CertifiedSampled);
        assert_eq!(report.trials, 2000);
        let d = report.min_density.unwrap();
        assert!(d.value() >= 0.25, "min density {} under threshold", d.value());
        // Determinism: identical run, identical report.
        let again = check_sampled(&g, &p, 2000, 5);
        assert_eq!(report.min_density, again.min_density);
        assert_eq!(report.trials, again.trials);
    }

    #[test]
    fn sampled_vacuous_and_empty_cases() {
        let g = Tournament::random(10, 2);
        let p = PseudoParams::new(0.25).with_k(6);
        let report = check_sampled(&g, &p, 100, 0);
        assert_eq!(report.verdict, PseudoVerdict::CertifiedSampled);
        assert_eq!(report.trials, 0);
        assert!(report.min_density.is_none());

        let p = PseudoParams::new(0.25).with_k(3);
        let report = check_sampled(&g, &p, 0, 0);
        assert_eq!(report.verdict, PseudoVerdict::CertifiedSampled);
        assert_eq!(report.trials, 0);
        assert!(report.min_density.is_none());
    }

    #[test]
    fn density_comparison_is_exact() {
        let a = Density { edges: 1, pairs: 3 };
        let b = Density { edges: 333_333_333, pairs: 1_000_000_000 };
        assert_eq!(a.cmp_value(&b), std::cmp::Ordering::Greater);
        let c = Density { edges: 2, pairs: 6 };
        assert_eq!(a.cmp_value(&c), std::cmp::Ordering::Equal);
        assert_ne!(a, c);
    }

    #[test]
    fn derived_k_tracks_sigma_log() {
        let p = PseudoParams::default();
        assert_eq!(p.k_for(1024), 40);
        assert_eq!(p.k_for(512), 36);
        assert_eq!(p.k_for(2048), 44);
        assert_eq!(p.k_for(1), 1);
        let tight = PseudoParams::new(0.1).with_sigma(0.5);
        assert_eq!(tight.k_for(4), 1);
    }

    #[test]
    fn reports_round_trip_through_json() {
        let g = Tournament::transitive(8);
        let p = PseudoParams::new(0.1).with_k(4);
        let report = check_exhaustive(&g, &p, 1_000_000).unwrap();
        let text = serde_json::to_string_pretty(&report).unwrap();
        let back: PseudoReport = serde_json::from_str(&text).unwrap();
        assert_eq!(back.verdict, report.verdict);
        assert_eq!(back.witness, report.witness);
        assert_eq!(back.min_density, report.min_density);
        assert_eq!(back.trials, report.trials);
    }
}
