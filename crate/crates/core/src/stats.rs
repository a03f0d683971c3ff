//! Shuffle test of k-dependence.
//!
//! Each variable's column is permuted independently, which keeps every
//! single-variable marginal and destroys the joint arrangement. The `I_k`
//! values of all `k`-subsets of many shuffled samples are pooled per degree
//! into a null distribution; observed `I_k` beyond the empirical quantiles of
//! that pool are flagged. Degree 2 is tested one-sided (upper tail), higher
//! degrees two-sided since `I_k` can be negative there. The null describes
//! random dependences with the observed marginals, so a flag measures the
//! specificity of a k-dependence rather than departure from independence.

use alloc::format;
use alloc::vec::Vec;

use rand::seq::SliceRandom;

use crate::discretize::{estimate_joint, DiscretizedSample};
use crate::error::{Error, Result};
use crate::exec::{Executor, Sequential};
use crate::lattice::{compute_landscape, Landscape, LandscapeOptions};
use crate::mask::{subsets_of_size, SubsetMask};
use crate::rng::seeded;

/// Default number of shuffles.
pub const DEFAULT_SHUFFLES: usize = 17;

/// Permutes every column of `s` independently. The generator of column `j` is
/// the stream `(seed, index, j)`.
pub fn shuffle_matrix(s: &DiscretizedSample, seed: u64, index: u64) -> DiscretizedSample {
    let columns = s
        .columns()
        .iter()
        .enumerate()
        .map(|(j, col)| {
            let mut col = col.clone();
            col.shuffle(&mut seeded(seed, &[index, j as u64]));
            col
        })
        .collect();
    s.with_columns(columns)
}

/// Pooled `I_k` values of shuffled samples, per degree.
#[derive(Debug, Clone, PartialEq)]
pub struct NullDistribution {
    pub n: usize,
    pub k_max: usize,
    pub shuffles: usize,
    pub seed: u64,
    /// `pools[k-1]` holds `shuffles × C(n, k)` values, shuffle by shuffle in mask order.
    pools: Vec<Vec<f64>>,
}

impl NullDistribution {
    pub fn pool(&self, k: usize) -> &[f64] {
        if k == 0 || k > self.pools.len() {
            &[]
        } else {
            &self.pools[k - 1]
        }
    }

    /// Pool of degree `k`, sorted ascending.
    pub fn sorted_pool(&self, k: usize) -> Vec<f64> {
        let mut v = self.pool(k).to_vec();
        v.sort_by(f64::total_cmp);
        v
    }

    /// Thresholds of degree `k` at the given significance levels.
    pub fn thresholds(&self, k: usize, levels: SignificanceLevels) -> Result<DegreeThresholds> {
        levels.validate()?;
        let sorted = self.sorted_pool(k);
        if sorted.is_empty() {
            return Err(Error::Config(format!("empty null pool for degree {k}")));
        }
        Ok(thresholds_from_sorted(k, &sorted, levels))
    }
}

/// Shuffles `s` `shuffles` times and pools the `I_k` of every subset of size
/// `≤ k_max`. Shuffles run through `exec`; pooling follows shuffle order.
pub fn null_distributions<E: Executor>(
    s: &DiscretizedSample,
    shuffles: usize,
    k_max: usize,
    seed: u64,
    exec: &E,
) -> Result<NullDistribution> {
    if shuffles == 0 {
        return Err(Error::Config("at least one shuffle is required".into()));
    }
    let n = s.n();
    let per_shuffle: Vec<Result<Vec<Vec<f64>>>> = exec.map_indexed(shuffles, |index| {
        let shuffled = shuffle_matrix(s, seed, index as u64);
        let l = compute_landscape(&estimate_joint(&shuffled), LandscapeOptions::new(k_max), &Sequential)?;
        Ok((1..=k_max).map(|k| l.degree(k).map(|r| r.information).collect()).collect())
    });
    let mut pools: Vec<Vec<f64>> = (0..k_max).map(|_| Vec::new()).collect();
    for one in per_shuffle {
        for (pool, values) in pools.iter_mut().zip(one?) {
            pool.extend(values);
        }
    }
    Ok(NullDistribution { n, k_max, shuffles, seed, pools })
}

/// Significance levels: `pairwise` is the one-sided level for `k = 2`,
/// `higher` the total two-sided level for `k ≥ 3` (split evenly per tail).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignificanceLevels {
    pub pairwise: f64,
    pub higher: f64,
}

impl Default for SignificanceLevels {
    fn default() -> Self {
        SignificanceLevels { pairwise: 0.05, higher: 0.1 }
    }
}

impl SignificanceLevels {
    fn validate(&self) -> Result<()> {
        for p in [self.pairwise, self.higher] {
            if !(p > 0.0 && p < 1.0) {
                return Err(Error::Config(format!("significance level {p} outside (0, 1)")));
            }
        }
        Ok(())
    }
}

/// Value of the `⌈q·N⌉`-th order statistic (1-based, clamped to `1..=N`).
pub fn order_statistic(sorted: &[f64], q: f64) -> f64 {
    let n = sorted.len();
    let rank = (libm::ceil(q * n as f64) as usize).clamp(1, n);
    sorted[rank - 1]
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DegreeThresholds {
    pub k: usize,
    pub pool_size: usize,
    /// Absent for the one-sided pairwise test.
    pub lower: Option<f64>,
    pub upper: f64,
}

fn thresholds_from_sorted(k: usize, sorted: &[f64], levels: SignificanceLevels) -> DegreeThresholds {
    if k <= 2 {
        DegreeThresholds { k, pool_size: sorted.len(), lower: None, upper: order_statistic(sorted, 1.0 - levels.pairwise) }
    } else {
        let tail = levels.higher / 2.0;
        DegreeThresholds {
            k,
            pool_size: sorted.len(),
            lower: Some(order_statistic(sorted, tail)),
            upper: order_statistic(sorted, 1.0 - tail),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    SignificantPositive,
    SignificantNegative,
    NotSignificant,
}

impl Verdict {
    pub fn name(self) -> &'static str {
        match self {
            Verdict::SignificantPositive => "significant-positive",
            Verdict::SignificantNegative => "significant-negative",
            Verdict::NotSignificant => "not-significant",
        }
    }

    fn judge(observed: f64, t: &DegreeThresholds) -> Verdict {
        if observed > t.upper {
            Verdict::SignificantPositive
        } else if t.lower.is_some_and(|lo| observed < lo) {
            Verdict::SignificantNegative
        } else {
            Verdict::NotSignificant
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerdictRow {
    pub mask: SubsetMask,
    pub k: usize,
    pub observed: f64,
    pub lower: Option<f64>,
    pub upper: f64,
    pub verdict: Verdict,
}

/// Per-subset verdicts for degrees `2..=min(k_max)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DependenceReport {
    pub levels: SignificanceLevels,
    pub degrees: Vec<DegreeThresholds>,
    pub rows: Vec<VerdictRow>,
}

impl DependenceReport {
    pub fn flagged(&self) -> impl Iterator<Item = &VerdictRow> {
        self.rows.iter().filter(|r| r.verdict != Verdict::NotSignificant)
    }

    pub fn verdict(&self, mask: SubsetMask) -> Option<Verdict> {
        self.rows.iter().find(|r| r.mask == mask).map(|r| r.verdict)
    }
}

/// Tests every subset of degree `≥ 2` of `l` against the pooled null.
pub fn dependence_test(l: &Landscape, nulls: &NullDistribution, levels: SignificanceLevels) -> Result<DependenceReport> {
    levels.validate()?;
    if nulls.n != l.n() {
        return Err(Error::Config(format!("null built for {} variables, landscape has {}", nulls.n, l.n())));
    }
    let top = l.k_max().min(nulls.k_max);
    let mut degrees = Vec::new();
    let mut rows = Vec::new();
    for k in 2..=top {
        let t = nulls.thresholds(k, levels)?;
        for r in l.degree(k) {
            rows.push(VerdictRow {
                mask: r.mask,
                k,
                observed: r.information,
                lower: t.lower,
                upper: t.upper,
                verdict: Verdict::judge(r.information, &t),
            });
        }
        degrees.push(t);
    }
    Ok(DependenceReport { levels, degrees, rows })
}

/// Per-subset nulls: the `I_k` of each subset across shuffles, kept separately.
/// Memory grows as `shuffles × 2^n`; meant for small `n`.
#[derive(Debug, Clone, PartialEq)]
pub struct PerTupleNull {
    pub n: usize,
    pub k_max: usize,
    tables: Vec<Vec<f64>>,
}

/// Largest `n` accepted by [`per_tuple_nulls`].
pub const PER_TUPLE_LIMIT: usize = 16;

pub fn per_tuple_nulls<E: Executor>(
    s: &DiscretizedSample,
    shuffles: usize,
    k_max: usize,
    seed: u64,
    exec: &E,
) -> Result<PerTupleNull> {
    if shuffles == 0 {
        return Err(Error::Config("at least one shuffle is required".into()));
    }
    if s.n() > PER_TUPLE_LIMIT {
        return Err(Error::Capacity { n: s.n(), limit: PER_TUPLE_LIMIT });
    }
    let tables: Vec<Result<Vec<f64>>> = exec.map_indexed(shuffles, |index| {
        let shuffled = shuffle_matrix(s, seed, index as u64);
        let l = compute_landscape(&estimate_joint(&shuffled), LandscapeOptions::new(k_max), &Sequential)?;
        Ok(l.information_table().to_vec())
    });
    Ok(PerTupleNull { n: s.n(), k_max, tables: tables.into_iter().collect::<Result<_>>()? })
}

/// Like [`dependence_test`] but each subset is judged against its own shuffles.
pub fn per_tuple_test(l: &Landscape, nulls: &PerTupleNull, levels: SignificanceLevels) -> Result<DependenceReport> {
    levels.validate()?;
    if nulls.n != l.n() {
        return Err(Error::Config(format!("null built for {} variables, landscape has {}", nulls.n, l.n())));
    }
    let top = l.k_max().min(nulls.k_max);
    let mut rows = Vec::new();
    for k in 2..=top {
        for mask in subsets_of_size(l.n(), k) {
            let mut pool: Vec<f64> = nulls.tables.iter().map(|t| t[mask.index()]).collect();
            pool.sort_by(f64::total_cmp);
            let t = thresholds_from_sorted(k, &pool, levels);
            let observed = l.information(mask);
            rows.push(VerdictRow { mask, k, observed, lower: t.lower, upper: t.upper, verdict: Verdict::judge(observed, &t) });
        }
    }
    Ok(DependenceReport { levels, degrees: Vec::new(), rows })
}
