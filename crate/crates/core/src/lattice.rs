//! Exhaustive computation of `H_k` and `I_k` over the subset lattice.
//!
//! Joint entropies are computed by partition refinement: the occupied boxes of
//! the joint law are the "rows", and the partition of rows induced by a subset
//! `S ∪ {v}` is the partition of `S` refined by the values of `v`. The lattice
//! is split into chunks of `2^LOW_BITS` consecutive masks sharing their high
//! bits; each chunk walks its low bits depth-first, so every mask costs one
//! `O(rows)` refinement. Class ids are assigned in first-occurrence row order,
//! which makes the count sequence, and so the floating-point entropy, a pure
//! function of the mask. Mutual informations then follow from one subset zeta
//! transform.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::discretize::JointDistribution;
use crate::error::{Error, Result};
use crate::exec::Executor;
use crate::info::EntropySource;
use crate::mask::{binomial, subsets_of_size, SubsetMask, ENUMERATION_LIMIT, MAX_VARIABLES};
use crate::mobius;
use crate::rng::{exponential, seeded};

const LOW_BITS: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LandscapeOptions {
    /// Largest subset size evaluated.
    pub k_max: usize,
    /// Lifts the [`ENUMERATION_LIMIT`] guard (up to [`MAX_VARIABLES`]).
    pub allow_large: bool,
}

impl LandscapeOptions {
    pub fn new(k_max: usize) -> Self {
        LandscapeOptions { k_max, allow_large: false }
    }
}

/// Per-subset `H` and `I` values for every subset of size `1..=k_max`.
///
/// Tables are dense and indexed by mask; entries of larger subsets are unused.
#[derive(Debug, Clone, PartialEq)]
pub struct Landscape {
    n: usize,
    m: u64,
    bins: Vec<u32>,
    k_max: usize,
    entropy: Vec<f64>,
    information: Vec<f64>,
}

/// One face of the lattice.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Record {
    pub mask: SubsetMask,
    pub k: usize,
    pub entropy: f64,
    pub information: f64,
}

/// Statistics of the values of one degree `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct DegreeSummary {
    pub k: usize,
    pub count: u64,
    pub mean_entropy: f64,
    pub mean_information: f64,
    pub mean_total_correlation: f64,
    pub min_information: f64,
    pub max_information: f64,
    /// First subset (in mask order) reaching the minimum.
    pub argmin: SubsetMask,
    pub argmax: SubsetMask,
}

/// Fixed-width histogram; bin `b` covers `[origin + b·width, origin + (b+1)·width)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Histogram {
    pub k: usize,
    pub width: f64,
    pub origin: f64,
    pub counts: Vec<u64>,
}

/// One point of the `(H_k, I_k)` scatter of a degree.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScatterPoint {
    pub mask: SubsetMask,
    pub entropy: f64,
    pub information: f64,
}

/// Computes the landscape of `joint` up to degree `opts.k_max`.
pub fn compute_landscape<E: Executor>(joint: &JointDistribution, opts: LandscapeOptions, exec: &E) -> Result<Landscape> {
    let n = joint.n();
    check_capacity(n, opts)?;
    if opts.k_max == 0 || opts.k_max > n {
        return Err(Error::Config(format!("k_max {} outside 1..={n}", opts.k_max)));
    }
    let entropy = entropy_table(joint, opts.k_max, exec);
    let mut information = entropy.clone();
    mobius::interaction_from_entropy(&mut information, n);
    Ok(Landscape { n, m: joint.m(), bins: joint.bins().to_vec(), k_max: opts.k_max, entropy, information })
}

fn check_capacity(n: usize, opts: LandscapeOptions) -> Result<()> {
    if n > MAX_VARIABLES {
        return Err(Error::Capacity { n, limit: MAX_VARIABLES });
    }
    if n > ENUMERATION_LIMIT && !opts.allow_large {
        return Err(Error::Capacity { n, limit: ENUMERATION_LIMIT });
    }
    Ok(())
}

/// Dense joint-entropy table over all masks of size `≤ k_max` (others are 0).
pub fn entropy_table<E: Executor>(joint: &JointDistribution, k_max: usize, exec: &E) -> Vec<f64> {
    let n = joint.n();
    let engine = Refiner::new(joint, k_max);
    let low = n.min(LOW_BITS);
    let mut table = vec![0.0; 1usize << n];
    exec.for_each_chunk(&mut table, 1usize << low, |chunk_index, chunk| {
        engine.fill_chunk(chunk_index, low, chunk);
    });
    table
}

struct Level {
    labels: Vec<u32>,
    counts: Vec<u64>,
}

struct Refiner<'a> {
    columns: Vec<Vec<u32>>,
    weights: &'a [u64],
    total: u64,
    log_total: f64,
    stride: usize,
    k_max: usize,
    clog: Vec<f64>,
}

impl<'a> Refiner<'a> {
    fn new(joint: &'a JointDistribution, k_max: usize) -> Self {
        let n = joint.n();
        let columns = (0..n).map(|v| joint.iter().map(|(atom, _)| atom[v]).collect()).collect();
        let table_len = if joint.m() <= 1 << 20 { joint.m() as usize + 1 } else { 0 };
        let clog = (0..table_len).map(|c| if c > 1 { c as f64 * libm::log2(c as f64) } else { 0.0 }).collect();
        Refiner {
            columns,
            weights: joint.counts(),
            total: joint.m(),
            log_total: libm::log2(joint.m() as f64),
            stride: joint.bins().iter().copied().max().unwrap_or(1) as usize + 1,
            k_max,
            clog,
        }
    }

    fn rows(&self) -> usize {
        self.weights.len()
    }

    fn c_log_c(&self, c: u64) -> f64 {
        match self.clog.get(c as usize) {
            Some(&v) => v,
            None => c as f64 * libm::log2(c as f64),
        }
    }

    fn entropy(&self, level: &Level) -> f64 {
        if level.counts.len() <= 1 {
            return 0.0;
        }
        let s: f64 = level.counts.iter().map(|&c| self.c_log_c(c)).sum();
        self.log_total - s / self.total as f64
    }

    fn refine(&self, src: &Level, dst: &mut Level, var: usize, scratch: &mut [u32]) {
        let col = &self.columns[var];
        dst.counts.clear();
        for r in 0..self.rows() {
            let key = src.labels[r] as usize * self.stride + col[r] as usize;
            let mut id = scratch[key];
            if id == u32::MAX {
                id = dst.counts.len() as u32;
                scratch[key] = id;
                dst.counts.push(0);
            }
            dst.labels[r] = id;
            dst.counts[id as usize] += self.weights[r];
        }
        for r in 0..self.rows() {
            scratch[src.labels[r] as usize * self.stride + col[r] as usize] = u32::MAX;
        }
    }

    fn fill_chunk(&self, chunk_index: usize, low: usize, out: &mut [f64]) {
        let high = (chunk_index as u32) << low;
        let high_size = high.count_ones() as usize;
        if high_size > self.k_max {
            return;
        }
        let rows = self.rows();
        let mut levels: Vec<Level> =
            (0..=low + 1).map(|_| Level { labels: vec![0; rows], counts: Vec::with_capacity(rows) }).collect();
        let mut scratch = vec![u32::MAX; rows * self.stride];
        levels[0].counts.push(self.total);
        // base partition for the high variables, built in levels[0] via levels[1]
        for var in SubsetMask::from_bits(high).iter() {
            let (a, b) = levels.split_at_mut(1);
            self.refine(&a[0], &mut b[0], var, &mut scratch);
            levels.swap(0, 1);
        }
        if high != 0 {
            out[0] = self.entropy(&levels[0]);
        }
        self.descend(&mut levels, 0, 0, low, 0, high_size, out, &mut scratch);
    }

    #[allow(clippy::too_many_arguments)]
    fn descend(
        &self,
        levels: &mut [Level],
        depth: usize,
        start: usize,
        low: usize,
        low_mask: usize,
        size: usize,
        out: &mut [f64],
        scratch: &mut [u32],
    ) {
        if size >= self.k_max || start >= low {
            return;
        }
        if levels[depth].counts.len() == self.rows() {
            // every box already separated: all supersets in this branch share the value
            let value = out[low_mask];
            let free = ((1usize << low) - 1) & !((1usize << start) - 1);
            let budget = self.k_max - size;
            for t in SubsetMask::from_bits(free as u32).subsets() {
                if t.len() <= budget {
                    out[low_mask | t.index()] = value;
                }
            }
            return;
        }
        for bit in start..low {
            let (a, b) = levels.split_at_mut(depth + 1);
            self.refine(&a[depth], &mut b[0], bit, scratch);
            let mask = low_mask | 1 << bit;
            out[mask] = self.entropy(&b[0]);
            self.descend(levels, depth + 1, bit + 1, low, mask, size + 1, out, scratch);
        }
    }
}

impl Landscape {
    pub fn n(&self) -> usize {
        self.n
    }

    /// Sample size of the underlying law.
    pub fn m(&self) -> u64 {
        self.m
    }

    pub fn bins(&self) -> &[u32] {
        &self.bins
    }

    pub fn k_max(&self) -> usize {
        self.k_max
    }

    /// Whether `mask` is a face covered by this landscape.
    pub fn covers(&self, mask: SubsetMask) -> bool {
        !mask.is_empty() && mask.len() <= self.k_max && mask.fits(self.n)
    }

    /// `H(X_mask)`; meaningful when [`Landscape::covers`] holds.
    pub fn entropy(&self, mask: SubsetMask) -> f64 {
        debug_assert!(mask.is_empty() || self.covers(mask));
        self.entropy[mask.index()]
    }

    /// `I_k(X_mask)`; meaningful when [`Landscape::covers`] holds.
    pub fn information(&self, mask: SubsetMask) -> f64 {
        debug_assert!(mask.is_empty() || self.covers(mask));
        self.information[mask.index()]
    }

    pub fn total_correlation(&self, mask: SubsetMask) -> f64 {
        let marginals: f64 = mask.iter().map(|i| self.entropy[1 << i]).sum();
        marginals - self.entropy(mask)
    }

    pub fn get(&self, mask: SubsetMask) -> Option<Record> {
        self.covers(mask).then(|| self.record(mask))
    }

    fn record(&self, mask: SubsetMask) -> Record {
        Record {
            mask,
            k: mask.len(),
            entropy: self.entropy[mask.index()],
            information: self.information[mask.index()],
        }
    }

    /// Raw tables indexed by mask.
    pub fn entropy_table(&self) -> &[f64] {
        &self.entropy
    }

    pub fn information_table(&self) -> &[f64] {
        &self.information
    }

    /// `Σ_{k=1}^{k_max} C(n, k)`.
    pub fn record_count(&self) -> u64 {
        (1..=self.k_max).map(|k| binomial(self.n, k)).sum()
    }

    /// All records in increasing mask order.
    pub fn records(&self) -> impl Iterator<Item = Record> + '_ {
        (1..self.entropy.len() as u32)
            .map(SubsetMask::from_bits)
            .filter(move |m| m.len() <= self.k_max)
            .map(move |m| self.record(m))
    }

    /// Records of one degree in increasing mask order.
    pub fn degree(&self, k: usize) -> impl Iterator<Item = Record> + '_ {
        let k = if k <= self.k_max { k } else { 0 };
        subsets_of_size(self.n, k).map(move |m| self.record(m))
    }

    pub fn summary(&self, k: usize) -> Result<DegreeSummary> {
        self.check_degree(k)?;
        let mut s = DegreeSummary {
            k,
            count: 0,
            mean_entropy: 0.0,
            mean_information: 0.0,
            mean_total_correlation: 0.0,
            min_information: f64::INFINITY,
            max_information: f64::NEG_INFINITY,
            argmin: SubsetMask::EMPTY,
            argmax: SubsetMask::EMPTY,
        };
        let (mut sum_h, mut sum_i, mut sum_g) = (0.0, 0.0, 0.0);
        for r in self.degree(k) {
            s.count += 1;
            sum_h += r.entropy;
            sum_i += r.information;
            sum_g += self.total_correlation(r.mask);
            if r.information < s.min_information {
                s.min_information = r.information;
                s.argmin = r.mask;
            }
            if r.information > s.max_information {
                s.max_information = r.information;
                s.argmax = r.mask;
            }
        }
        let c = s.count as f64;
        s.mean_entropy = sum_h / c;
        s.mean_information = sum_i / c;
        s.mean_total_correlation = sum_g / c;
        Ok(s)
    }

    pub fn summaries(&self) -> Vec<DegreeSummary> {
        (1..=self.k_max).map(|k| self.summary(k).expect("degree in range")).collect()
    }

    /// `I_k` values of degree `k`, sorted ascending.
    pub fn sorted_information(&self, k: usize) -> Result<Vec<f64>> {
        self.check_degree(k)?;
        let mut v: Vec<f64> = self.degree(k).map(|r| r.information).collect();
        v.sort_by(f64::total_cmp);
        Ok(v)
    }

    pub fn histogram(&self, k: usize, width: f64) -> Result<Histogram> {
        self.check_degree(k)?;
        if !(width > 0.0) || !width.is_finite() {
            return Err(Error::Config(format!("histogram width {width} must be positive")));
        }
        let values: Vec<f64> = self.degree(k).map(|r| r.information).collect();
        let (lo, hi) = values.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
        let first = libm::floor(lo / width);
        let last = libm::floor(hi / width);
        let mut counts = vec![0u64; (last - first) as usize + 1];
        for v in values {
            counts[(libm::floor(v / width) - first) as usize] += 1;
        }
        Ok(Histogram { k, width, origin: first * width, counts })
    }

    /// The `(H_k, I_k)` pairs of every `k`-subset, in mask order.
    pub fn entropy_vs_energy(&self, k: usize) -> Result<Vec<ScatterPoint>> {
        self.check_degree(k)?;
        Ok(self
            .degree(k)
            .map(|r| ScatterPoint { mask: r.mask, entropy: r.entropy, information: r.information })
            .collect())
    }

    fn check_degree(&self, k: usize) -> Result<()> {
        if k == 0 || k > self.k_max {
            Err(Error::Config(format!("degree {k} outside 1..={}", self.k_max)))
        } else {
            Ok(())
        }
    }
}

impl EntropySource for Landscape {
    fn n(&self) -> usize {
        self.n
    }

    /// Only subsets of size `≤ k_max` are available.
    fn entropy(&self, mask: SubsetMask) -> f64 {
        assert!(mask.len() <= self.k_max, "subset {mask} beyond k_max {}", self.k_max);
        self.entropy[mask.index()]
    }
}

/// Saturation of joint entropies at the undersampling ceiling `log₂ m`.
#[derive(Debug, Clone, PartialEq)]
pub struct UndersamplingReport {
    /// Fraction of `k`-subsets with `H ≥ log₂ m − ε`, for `k = 1..=k_max`.
    pub fractions: Vec<f64>,
    /// Largest degree whose fraction stays `≤ p_u` (0 if even single variables exceed it).
    pub k_u: usize,
    /// First degree whose fraction exceeds `p_u`, if any within `k_max`.
    pub first_exceeding: Option<usize>,
    pub p_u: f64,
    pub epsilon: f64,
    pub ceiling: f64,
}

pub fn undersampling_dimension(l: &Landscape, m: u64, p_u: f64, epsilon: f64) -> Result<UndersamplingReport> {
    if !(0.0..=1.0).contains(&p_u) {
        return Err(Error::Config(format!("p_u {p_u} outside [0, 1]")));
    }
    if m == 0 || !(epsilon >= 0.0) {
        return Err(Error::Config(format!("invalid sample size {m} or tolerance {epsilon}")));
    }
    let ceiling = libm::log2(m as f64);
    let fractions: Vec<f64> = (1..=l.k_max())
        .map(|k| {
            let total = binomial(l.n(), k) as f64;
            let saturated = l.degree(k).filter(|r| r.entropy >= ceiling - epsilon).count();
            saturated as f64 / total
        })
        .collect();
    let first_exceeding = fractions.iter().position(|&f| f > p_u).map(|i| i + 1);
    let k_u = first_exceeding.map_or(l.k_max(), |k| k - 1);
    Ok(UndersamplingReport { fractions, k_u, first_exceeding, p_u, epsilon, ceiling })
}

/// Fraction of `draws` laws, uniform on the simplex over `r^k` boxes, whose
/// entropy is at least `ε·k·log₂ r`.
pub fn simplex_entropy_exceedance(r: u32, k: u32, epsilon: f64, draws: usize, seed: u64) -> Result<f64> {
    if r < 2 || k == 0 || draws == 0 {
        return Err(Error::Config(format!("invalid simplex parameters r={r} k={k} draws={draws}")));
    }
    let boxes = (r as usize).checked_pow(k).filter(|&b| b <= 1 << 24).ok_or_else(|| {
        Error::Config(format!("r^k = {r}^{k} boxes is too large"))
    })?;
    let threshold = epsilon * k as f64 * libm::log2(r as f64);
    let mut rng = seeded(seed, &[0x5117]);
    let mut weights = vec![0.0; boxes];
    let mut hits = 0usize;
    for _ in 0..draws {
        // normalised standard exponentials are uniform on the simplex
        for w in weights.iter_mut() {
            *w = exponential(&mut rng);
        }
        let total: f64 = weights.iter().sum();
        let h: f64 = weights
            .iter()
            .map(|&w| w / total)
            .filter(|&p| p > 0.0)
            .map(|p| -p * libm::log2(p))
            .sum();
        if h >= threshold {
            hits += 1;
        }
    }
    Ok(hits as f64 / draws as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exec::Sequential;
    use crate::info::tests::{independent_coins, parity};
    use crate::info::mutual_information;

    fn scrambled(n: usize, m: usize, bins: u32, seed: u64) -> JointDistribution {
        use crate::rng::Rng;
        let mut rng = seeded(seed, &[]);
        let entries = (0..m).map(|_| ((0..n).map(|_| rng.gen_range(1..=bins)).collect::<Vec<u32>>(), 1u64));
        JointDistribution::from_counts(vec![bins; n], entries).unwrap()
    }

    #[test]
    fn parity_landscape() {
        let l = compute_landscape(&parity(), LandscapeOptions::new(3), &Sequential).unwrap();
        assert_eq!(l.record_count(), 7);
        let i: Vec<f64> = l.records().map(|r| r.information).collect();
        let want = [1.0, 1.0, 0.0, 1.0, 0.0, 0.0, -1.0];
        for (a, b) in i.iter().zip(want) {
            assert!((a - b).abs() < 1e-12);
        }
        let pts = l.entropy_vs_energy(3).unwrap();
        assert_eq!(pts.len(), 1);
        assert!((pts[0].entropy - 2.0).abs() < 1e-12 && (pts[0].information + 1.0).abs() < 1e-12);
    }

    #[test]
    fn independent_binaries_null_landscape() {
        let l = compute_landscape(&independent_coins(5), LandscapeOptions::new(5), &Sequential).unwrap();
        for r in l.records() {
            if r.k == 1 {
                assert!((r.information - 1.0).abs() < 1e-12);
            } else {
                assert!(r.information.abs() < 1e-9);
            }
        }
    }

    #[test]
    fn degree_one_information_equals_entropy_exactly() {
        let l = compute_landscape(&scrambled(6, 40, 3, 1), LandscapeOptions::new(4), &Sequential).unwrap();
        for r in l.degree(1) {
            assert_eq!(r.information.to_bits(), r.entropy.to_bits());
        }
        for r in l.entropy_vs_energy(1).unwrap() {
            assert_eq!(r.entropy, r.information);
        }
        assert_eq!(l.entropy_vs_energy(2).unwrap().len(), 15);
    }

    #[test]
    fn table_matches_direct_marginals() {
        for seed in 0..5 {
            let j = scrambled(7, 60, 4, seed);
            let l = compute_landscape(&j, LandscapeOptions::new(7), &Sequential).unwrap();
            for r in l.records() {
                assert!((r.entropy - j.entropy(r.mask)).abs() < 1e-12, "{:?}", r.mask);
                let direct = mutual_information(&j, r.mask).unwrap();
                assert!((r.information - direct).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn truncated_landscape_agrees_with_full() {
        let j = scrambled(14, 30, 5, 3);
        let full = compute_landscape(&j, LandscapeOptions::new(14), &Sequential).unwrap();
        let part = compute_landscape(&j, LandscapeOptions::new(4), &Sequential).unwrap();
        assert_eq!(part.record_count(), 14 + 91 + 364 + 1001);
        for r in part.records() {
            assert_eq!(r.entropy.to_bits(), full.entropy(r.mask).to_bits());
            assert_eq!(r.information.to_bits(), full.information(r.mask).to_bits());
        }
    }

    #[test]
    fn saturated_supersets_stay_saturated() {
        let j = scrambled(10, 40, 9, 11);
        let l = compute_landscape(&j, LandscapeOptions::new(10), &Sequential).unwrap();
        let ceiling = libm::log2(40.0);
        for r in l.records() {
            if r.entropy >= ceiling - 1e-9 {
                for v in 0..10 {
                    let sup = r.mask.with(v);
                    assert!(l.entropy(sup) >= ceiling - 1e-9);
                }
            }
        }
    }

    #[test]
    fn all_distinct_boxes_saturate_at_full_degree() {
        let entries = (0..4u32).map(|i| (vec![i + 1, (i % 2) + 1, (i / 2) + 1], 1u64));
        let j = JointDistribution::from_counts(vec![4, 2, 2], entries).unwrap();
        let l = compute_landscape(&j, LandscapeOptions::new(3), &Sequential).unwrap();
        assert_eq!(l.entropy(SubsetMask::full(3)), 2.0);
        let rep = undersampling_dimension(&l, 4, 0.05, 1e-9).unwrap();
        assert_eq!(rep.fractions[2], 1.0);
        assert!(rep.fractions.windows(2).all(|w| w[0] <= w[1]));
        // X1 alone already separates the four points
        assert_eq!(rep.fractions[0], 1.0 / 3.0);
        assert_eq!(rep.k_u, 0);
    }

    #[test]
    fn single_atom_law_is_flat() {
        let j = JointDistribution::from_counts(vec![3, 3], [(vec![2, 3], 9)]).unwrap();
        let l = compute_landscape(&j, LandscapeOptions::new(2), &Sequential).unwrap();
        assert!(l.records().all(|r| r.entropy == 0.0 && r.information == 0.0));
    }

    #[test]
    fn summaries_and_histogram() {
        let l = compute_landscape(&parity(), LandscapeOptions::new(3), &Sequential).unwrap();
        let s2 = l.summary(2).unwrap();
        assert_eq!(s2.count, 3);
        assert!(s2.mean_information.abs() < 1e-12);
        assert!((s2.mean_entropy - 2.0).abs() < 1e-12);
        let s3 = l.summary(3).unwrap();
        assert_eq!(s3.argmin, SubsetMask::full(3));
        assert!((s3.mean_total_correlation - 1.0).abs() < 1e-12);
        let h = l.histogram(1, 0.5).unwrap();
        assert_eq!(h.counts.iter().sum::<u64>(), 3);
        assert!(l.summary(4).is_err());
        assert!(l.histogram(1, 0.0).is_err());
    }

    #[test]
    fn guards() {
        let j = parity();
        assert!(matches!(compute_landscape(&j, LandscapeOptions::new(0), &Sequential), Err(Error::Config(_))));
        assert!(matches!(compute_landscape(&j, LandscapeOptions::new(4), &Sequential), Err(Error::Config(_))));
        let wide = JointDistribution::from_counts(vec![2; 26], [(vec![1; 26], 1)]).unwrap();
        assert!(matches!(
            compute_landscape(&wide, LandscapeOptions::new(1), &Sequential),
            Err(Error::Capacity { n: 26, limit: 25 })
        ));
    }

    #[test]
    fn simplex_exceedance_is_large() {
        let f = simplex_entropy_exceedance(2, 4, 1.0 / core::f64::consts::E, 1000, 1).unwrap();
        assert!(f >= 1.0 - 1.0 / core::f64::consts::E - 0.03);
    }
}
