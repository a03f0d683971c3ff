//! Iso-graining and iso-sample-size scans of mean information curves.
//!
//! For every pair of bin count `N` and sample size `m′`, a row subsample of
//! size `m′` is re-binned into `N` equal-width bins, its landscape computed,
//! and the per-degree means of `I_k` and `H_k` reported together with the
//! cell's undersampling dimension.

use alloc::format;
use alloc::vec::Vec;

use rand::seq::index::sample;

use crate::discretize::{discretize, estimate_joint, make_bin_spec, Bins};
use crate::error::{Error, Result};
use crate::exec::Executor;
use crate::lattice::{compute_landscape, undersampling_dimension, LandscapeOptions, UndersamplingReport};
use crate::matrix::DataMatrix;
use crate::rng::seeded;

#[derive(Debug, Clone, PartialEq)]
pub struct ScanCell {
    pub bins: u32,
    pub m: usize,
    /// Mean `I_k` over all `k`-subsets, `k = 1..=k_max`.
    pub mean_information: Vec<f64>,
    pub mean_entropy: Vec<f64>,
    pub undersampling: UndersamplingReport,
}

impl ScanCell {
    pub fn k_u(&self) -> usize {
        self.undersampling.k_u
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanGrid {
    pub seed: u64,
    pub k_max: usize,
    /// Cells ordered by bin count, then sample size, as given.
    pub cells: Vec<ScanCell>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanOptions {
    pub k_max: usize,
    pub p_u: f64,
    pub epsilon: f64,
}

/// Sorted indices of the `m_sub` rows kept for sample size `m_sub`. The
/// whole sample is kept as is; otherwise the subset depends only on
/// `(seed, m_sub)`, so all bin counts see the same rows.
pub fn subsample_rows(m: usize, m_sub: usize, seed: u64) -> Vec<usize> {
    if m_sub >= m {
        return (0..m).collect();
    }
    let mut rows = sample(&mut seeded(seed, &[m_sub as u64]), m, m_sub).into_vec();
    rows.sort_unstable();
    rows
}

pub fn mean_path_scan<E: Executor>(
    d: &DataMatrix,
    bin_values: &[u32],
    m_values: &[usize],
    seed: u64,
    opts: ScanOptions,
    exec: &E,
) -> Result<ScanGrid> {
    if bin_values.is_empty() || m_values.is_empty() {
        return Err(Error::Config("scan needs at least one bin count and one sample size".into()));
    }
    if let Some(&bad) = m_values.iter().find(|&&m| m < 2 || m > d.rows()) {
        return Err(Error::Config(format!("sample size {bad} outside 2..={}", d.rows())));
    }
    let all_cols: Vec<usize> = (0..d.cols()).collect();
    let mut cells = Vec::with_capacity(bin_values.len() * m_values.len());
    for &bins in bin_values {
        for &m_sub in m_values {
            let sub = d.select(&subsample_rows(d.rows(), m_sub, seed), &all_cols)?;
            let spec = make_bin_spec(&sub, &Bins::Uniform(bins))?;
            let joint = estimate_joint(&discretize(&sub, &spec)?);
            let l = compute_landscape(&joint, LandscapeOptions::new(opts.k_max), exec)?;
            let (mean_information, mean_entropy) =
                l.summaries().iter().map(|s| (s.mean_information, s.mean_entropy)).unzip();
            let undersampling = undersampling_dimension(&l, m_sub as u64, opts.p_u, opts.epsilon)?;
            cells.push(ScanCell { bins, m: m_sub, mean_information, mean_entropy, undersampling });
        }
    }
    Ok(ScanGrid { seed, k_max: opts.k_max, cells })
}
