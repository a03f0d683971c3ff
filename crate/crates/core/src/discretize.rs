//! Equal-width graining and the empirical joint law.
//!
//! Each variable's observed range `[min, max]` is cut into `N_j` bins of equal
//! width. Bins are half-open `[bmin, bmax)` except the top one, which is closed
//! so that the maximum lands in bin `N_j`. Bin indices are 1-based.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::mask::SubsetMask;
use crate::matrix::DataMatrix;

/// Graining request: one bin count for every variable, or one per variable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Bins {
    Uniform(u32),
    PerVariable(Vec<u32>),
}

/// Per-variable bin counts and observed ranges.
#[derive(Debug, Clone, PartialEq)]
pub struct BinSpec {
    bins: Vec<u32>,
    ranges: Vec<(f64, f64)>,
}

impl BinSpec {
    pub fn new(bins: Vec<u32>, ranges: Vec<(f64, f64)>) -> Result<Self> {
        if bins.len() != ranges.len() {
            return Err(Error::Shape(format!(
                "{} bin counts for {} ranges",
                bins.len(),
                ranges.len()
            )));
        }
        if let Some(j) = bins.iter().position(|&b| b == 0) {
            return Err(Error::Config(format!("variable {j} has zero bins")));
        }
        if let Some(j) = ranges.iter().position(|&(lo, hi)| !(lo <= hi) || !lo.is_finite() || !hi.is_finite()) {
            return Err(Error::Config(format!("variable {j} has an invalid range")));
        }
        Ok(BinSpec { bins, ranges })
    }

    pub fn n(&self) -> usize {
        self.bins.len()
    }

    pub fn bins(&self) -> &[u32] {
        &self.bins
    }

    pub fn range(&self, var: usize) -> (f64, f64) {
        self.ranges[var]
    }

    /// Number of boxes of the full grid, `N_1 · … · N_n` (saturating).
    pub fn box_count(&self) -> u128 {
        self.bins.iter().fold(1u128, |acc, &b| acc.saturating_mul(b as u128))
    }

    /// Edges `(bmin, bmax)` of the 1-based bin `a` of variable `var`.
    pub fn edges(&self, var: usize, a: u32) -> (f64, f64) {
        let (lo, hi) = self.ranges[var];
        let n = self.bins[var] as f64;
        let w = hi - lo;
        (lo + (a - 1) as f64 * w / n, lo + a as f64 * w / n)
    }

    /// The 1-based bin holding `x`; values outside the range are clamped.
    pub fn bin_of(&self, var: usize, x: f64) -> u32 {
        let (lo, hi) = self.ranges[var];
        let n = self.bins[var];
        if hi <= lo {
            return 1;
        }
        let raw = libm::floor(n as f64 * (x - lo) / (hi - lo));
        let a = if raw < 0.0 { 0 } else if raw >= n as f64 { n - 1 } else { raw as u32 };
        a + 1
    }
}

/// Builds the graining from the observed per-variable minima and maxima.
pub fn make_bin_spec(d: &DataMatrix, bins: &Bins) -> Result<BinSpec> {
    let n = d.cols();
    let counts = match bins {
        Bins::Uniform(b) => alloc::vec![*b; n],
        Bins::PerVariable(v) => {
            if v.len() != n {
                return Err(Error::Config(format!("{} bin counts for {n} variables", v.len())));
            }
            v.clone()
        }
    };
    if counts.contains(&0) {
        return Err(Error::Config(String::from("bin count must be at least 1")));
    }
    let ranges = (0..n)
        .map(|j| {
            d.column(j)
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), x| (lo.min(x), hi.max(x)))
        })
        .collect();
    BinSpec::new(counts, ranges)
}

/// An `m × n` grid of 1-based bin indices, stored column by column.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiscretizedSample {
    columns: Vec<Vec<u32>>,
    bins: Vec<u32>,
    row_labels: Vec<String>,
    col_labels: Vec<String>,
}

impl DiscretizedSample {
    pub fn from_columns(
        columns: Vec<Vec<u32>>,
        bins: Vec<u32>,
        row_labels: Vec<String>,
        col_labels: Vec<String>,
    ) -> Result<Self> {
        let m = row_labels.len();
        if m == 0 {
            return Err(Error::Shape(String::from("sample without observations")));
        }
        if columns.len() != bins.len() || columns.len() != col_labels.len() {
            return Err(Error::Shape(format!(
                "{} columns, {} bin counts, {} labels",
                columns.len(),
                bins.len(),
                col_labels.len()
            )));
        }
        for (j, col) in columns.iter().enumerate() {
            if col.len() != m {
                return Err(Error::Shape(format!("column {j} has {} rows, expected {m}", col.len())));
            }
            if let Some(&a) = col.iter().find(|&&a| a == 0 || a > bins[j]) {
                return Err(Error::Config(format!("bin index {a} outside 1..={} in column {j}", bins[j])));
            }
        }
        Ok(DiscretizedSample { columns, bins, row_labels, col_labels })
    }

    /// Generated labels `o1..om`, `X1..Xn`.
    pub fn with_default_labels(columns: Vec<Vec<u32>>, bins: Vec<u32>) -> Result<Self> {
        let m = columns.first().map_or(0, Vec::len);
        let n = columns.len();
        DiscretizedSample::from_columns(
            columns,
            bins,
            (1..=m).map(|i| format!("o{i}")).collect(),
            (1..=n).map(|j| format!("X{j}")).collect(),
        )
    }

    pub fn m(&self) -> usize {
        self.row_labels.len()
    }

    pub fn n(&self) -> usize {
        self.columns.len()
    }

    pub fn bins(&self) -> &[u32] {
        &self.bins
    }

    pub fn column(&self, var: usize) -> &[u32] {
        &self.columns[var]
    }

    pub fn columns(&self) -> &[Vec<u32>] {
        &self.columns
    }

    pub fn value(&self, row: usize, var: usize) -> u32 {
        self.columns[var][row]
    }

    pub fn row_labels(&self) -> &[String] {
        &self.row_labels
    }

    pub fn col_labels(&self) -> &[String] {
        &self.col_labels
    }

    /// Same labels and bins, new columns. Used by the shuffle test.
    pub(crate) fn with_columns(&self, columns: Vec<Vec<u32>>) -> DiscretizedSample {
        DiscretizedSample {
            columns,
            bins: self.bins.clone(),
            row_labels: self.row_labels.clone(),
            col_labels: self.col_labels.clone(),
        }
    }
}

pub fn discretize(d: &DataMatrix, spec: &BinSpec) -> Result<DiscretizedSample> {
    if spec.n() != d.cols() {
        return Err(Error::Shape(format!(
            "bin spec covers {} variables, matrix has {}",
            spec.n(),
            d.cols()
        )));
    }
    let columns = (0..d.cols())
        .map(|j| d.column(j).map(|x| spec.bin_of(j, x)).collect())
        .collect();
    Ok(DiscretizedSample {
        columns,
        bins: spec.bins().to_vec(),
        row_labels: d.row_labels().to_vec(),
        col_labels: d.col_labels().to_vec(),
    })
}

/// Sparse empirical law: occupied boxes with integer counts summing to `m`.
///
/// Boxes are kept in lexicographic order of their (1-based) index tuples.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JointDistribution {
    bins: Vec<u32>,
    atoms: Vec<u32>,
    counts: Vec<u64>,
    total: u64,
}

impl JointDistribution {
    /// Builds a law from `(box, count)` pairs. Repeated boxes are merged and
    /// zero counts dropped.
    pub fn from_counts<I>(bins: Vec<u32>, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<u32>, u64)>,
    {
        let n = bins.len();
        if n == 0 {
            return Err(Error::Shape(String::from("joint law over zero variables")));
        }
        let mut map: BTreeMap<Vec<u32>, u64> = BTreeMap::new();
        for (idx, c) in entries {
            if idx.len() != n {
                return Err(Error::Shape(format!("box of arity {} in a law over {n} variables", idx.len())));
            }
            if let Some((j, &a)) = idx.iter().enumerate().find(|&(j, &a)| a == 0 || a > bins[j]) {
                return Err(Error::Config(format!("bin index {a} outside 1..={} for variable {j}", bins[j])));
            }
            if c > 0 {
                *map.entry(idx).or_insert(0) += c;
            }
        }
        Self::from_map(bins, map)
    }

    fn from_map(bins: Vec<u32>, map: BTreeMap<Vec<u32>, u64>) -> Result<Self> {
        let total: u64 = map.values().sum();
        if total == 0 {
            return Err(Error::Distribution(String::from("joint law has no mass")));
        }
        let mut atoms = Vec::with_capacity(map.len() * bins.len());
        let mut counts = Vec::with_capacity(map.len());
        for (idx, c) in map {
            atoms.extend_from_slice(&idx);
            counts.push(c);
        }
        Ok(JointDistribution { bins, atoms, counts, total })
    }

    /// Number of variables.
    pub fn n(&self) -> usize {
        self.bins.len()
    }

    /// Total count (sample size).
    pub fn m(&self) -> u64 {
        self.total
    }

    pub fn bins(&self) -> &[u32] {
        &self.bins
    }

    /// Number of occupied boxes.
    pub fn support_len(&self) -> usize {
        self.counts.len()
    }

    pub fn atom(&self, i: usize) -> &[u32] {
        let n = self.n();
        &self.atoms[i * n..(i + 1) * n]
    }

    pub fn count(&self, i: usize) -> u64 {
        self.counts[i]
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn iter(&self) -> impl Iterator<Item = (&[u32], u64)> + '_ {
        self.atoms.chunks_exact(self.n()).zip(self.counts.iter().copied())
    }

    /// Count of one box (0 when unoccupied).
    pub fn count_of(&self, idx: &[u32]) -> u64 {
        let n = self.n();
        let (mut lo, mut hi) = (0usize, self.counts.len());
        while lo < hi {
            let mid = (lo + hi) / 2;
            match self.atoms[mid * n..(mid + 1) * n].cmp(idx) {
                core::cmp::Ordering::Less => lo = mid + 1,
                core::cmp::Ordering::Greater => hi = mid,
                core::cmp::Ordering::Equal => return self.counts[mid],
            }
        }
        0
    }

    pub fn probability(&self, idx: &[u32]) -> f64 {
        self.count_of(idx) as f64 / self.total as f64
    }

    /// Law of the variables in `subset`, renumbered `0..|subset|` in increasing
    /// order of their original index.
    pub fn marginalize(&self, subset: SubsetMask) -> Result<JointDistribution> {
        self.check_mask(subset)?;
        if subset.is_empty() {
            return Err(Error::Subset(String::from("cannot marginalize onto the empty set")));
        }
        let vars = subset.to_vec();
        let mut map: BTreeMap<Vec<u32>, u64> = BTreeMap::new();
        for (atom, c) in self.iter() {
            let key: Vec<u32> = vars.iter().map(|&v| atom[v]).collect();
            *map.entry(key).or_insert(0) += c;
        }
        Self::from_map(vars.iter().map(|&v| self.bins[v]).collect(), map)
    }

    /// Count vector of the marginal on `subset`, in lexicographic box order.
    pub fn marginal_counts(&self, subset: SubsetMask) -> Vec<u64> {
        let vars = subset.to_vec();
        let mut map: BTreeMap<Vec<u32>, u64> = BTreeMap::new();
        for (atom, c) in self.iter() {
            let key: Vec<u32> = vars.iter().map(|&v| atom[v]).collect();
            *map.entry(key).or_insert(0) += c;
        }
        map.into_values().collect()
    }

    /// Splits the law by the values taken on `given`. Each slice keeps all `n`
    /// coordinates and carries its own mass; zero-mass conditions never appear.
    pub fn condition_on(&self, given: SubsetMask) -> Result<Vec<JointDistribution>> {
        self.check_mask(given)?;
        let vars = given.to_vec();
        let mut groups: BTreeMap<Vec<u32>, BTreeMap<Vec<u32>, u64>> = BTreeMap::new();
        for (atom, c) in self.iter() {
            let key: Vec<u32> = vars.iter().map(|&v| atom[v]).collect();
            groups.entry(key).or_default().insert(atom.to_vec(), c);
        }
        groups
            .into_values()
            .map(|map| Self::from_map(self.bins.clone(), map))
            .collect()
    }

    pub(crate) fn check_mask(&self, mask: SubsetMask) -> Result<()> {
        if mask.fits(self.n()) {
            Ok(())
        } else {
            Err(Error::Subset(format!("mask {mask} exceeds {} variables", self.n())))
        }
    }
}

/// Counts observations per occupied box.
pub fn estimate_joint(s: &DiscretizedSample) -> JointDistribution {
    let mut map: BTreeMap<Vec<u32>, u64> = BTreeMap::new();
    for i in 0..s.m() {
        let key: Vec<u32> = s.columns.iter().map(|c| c[i]).collect();
        *map.entry(key).or_insert(0) += 1;
    }
    JointDistribution::from_map(s.bins.clone(), map).expect("non-empty sample has mass")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{seeded, Rng};
    use proptest::prelude::*;

    fn matrix(rows: &[Vec<f64>]) -> DataMatrix {
        DataMatrix::from_rows(rows).unwrap()
    }

    #[test]
    fn nine_by_nine_grid_for_two_variables() {
        let d = matrix(&[vec![0.0, 1.0], vec![3.0, 5.0], vec![9.0, 2.0]]);
        let spec = make_bin_spec(&d, &Bins::Uniform(9)).unwrap();
        assert_eq!(spec.box_count(), 81);
        assert_eq!(spec.edges(0, 1), (0.0, 1.0));
        assert_eq!(spec.edges(0, 9), (8.0, 9.0));
    }

    #[test]
    fn boundaries_map_to_first_and_last_bin() {
        let d = matrix(&[vec![2.0], vec![4.0], vec![10.0]]);
        let spec = make_bin_spec(&d, &Bins::Uniform(4)).unwrap();
        let s = discretize(&d, &spec).unwrap();
        assert_eq!(s.column(0), &[1, 2, 4]);
        // interior edge belongs to the upper bin
        assert_eq!(spec.bin_of(0, 4.0), 2);
    }

    #[test]
    fn constant_variable_goes_to_bin_one() {
        let d = matrix(&[vec![3.0], vec![3.0], vec![3.0]]);
        let spec = make_bin_spec(&d, &Bins::Uniform(9)).unwrap();
        let s = discretize(&d, &spec).unwrap();
        assert_eq!(s.column(0), &[1, 1, 1]);
    }

    #[test]
    fn single_bin_holds_everything() {
        let d = matrix(&[vec![0.0, 5.0], vec![1.0, -2.0], vec![7.0, 3.3]]);
        let spec = make_bin_spec(&d, &Bins::Uniform(1)).unwrap();
        let s = discretize(&d, &spec).unwrap();
        assert!(s.columns().iter().flatten().all(|&a| a == 1));
    }

    #[test]
    fn uniform_grid_puts_one_point_per_bin() {
        for n_bins in [2u32, 7, 9, 11] {
            let rows: Vec<Vec<f64>> =
                (0..n_bins).map(|i| vec![-1.0 + 3.0 * i as f64 / (n_bins - 1) as f64]).collect();
            let d = matrix(&rows);
            let spec = make_bin_spec(&d, &Bins::Uniform(n_bins)).unwrap();
            let s = discretize(&d, &spec).unwrap();
            assert_eq!(s.column(0), (1..=n_bins).collect::<Vec<_>>().as_slice());
        }
    }

    #[test]
    fn zero_bins_is_config_error() {
        let d = matrix(&[vec![0.0], vec![1.0]]);
        assert!(matches!(make_bin_spec(&d, &Bins::Uniform(0)), Err(Error::Config(_))));
        assert!(matches!(make_bin_spec(&d, &Bins::PerVariable(vec![2, 2])), Err(Error::Config(_))));
    }

    #[test]
    fn dimension_mismatch_is_shape_error() {
        let d = matrix(&[vec![0.0, 1.0], vec![1.0, 0.0]]);
        let spec = BinSpec::new(vec![2], vec![(0.0, 1.0)]).unwrap();
        assert!(matches!(discretize(&d, &spec), Err(Error::Shape(_))));
    }

    #[test]
    fn identical_points_make_one_box() {
        let s = DiscretizedSample::with_default_labels(vec![vec![2; 4], vec![1; 4]], vec![3, 3]).unwrap();
        let j = estimate_joint(&s);
        assert_eq!(j.support_len(), 1);
        assert_eq!(j.probability(&[2, 1]), 1.0);
    }

    #[test]
    fn distinct_points_make_distinct_boxes() {
        let s = DiscretizedSample::with_default_labels(vec![vec![1, 2, 3, 4]], vec![4]).unwrap();
        let j = estimate_joint(&s);
        assert_eq!(j.support_len(), 4);
        assert!(j.iter().all(|(_, c)| c == 1));
        assert_eq!(j.probability(&[3]), 0.25);
    }

    #[test]
    fn empty_marginal_rejected() {
        let s = DiscretizedSample::with_default_labels(vec![vec![1, 2]], vec![2]).unwrap();
        let j = estimate_joint(&s);
        assert!(matches!(j.marginalize(SubsetMask::EMPTY), Err(Error::Subset(_))));
    }

    /// Per-column histogram computed straight from the sample, sharing no code
    /// with `marginalize`.
    fn column_histogram(s: &DiscretizedSample, var: usize) -> Vec<u64> {
        let mut h = vec![0u64; s.bins()[var] as usize];
        for &a in s.column(var) {
            h[a as usize - 1] += 1;
        }
        h.into_iter().filter(|&c| c > 0).collect()
    }

    #[test]
    fn marginals_match_column_histograms() {
        let mut rng = seeded(7, &[]);
        let cols: Vec<Vec<u32>> = (0..3).map(|_| (0..50).map(|_| rng.gen_range(1..=4)).collect()).collect();
        let s = DiscretizedSample::with_default_labels(cols, vec![4, 4, 4]).unwrap();
        let j = estimate_joint(&s);
        for v in 0..3 {
            let m = j.marginalize(SubsetMask::singleton(v)).unwrap();
            assert_eq!(m.counts().to_vec(), column_histogram(&s, v));
            assert_eq!(m.m(), 50);
        }
    }

    fn arb_sample() -> impl Strategy<Value = DiscretizedSample> {
        (1usize..5, 1usize..40).prop_flat_map(|(n, m)| {
            proptest::collection::vec(proptest::collection::vec(1u32..=3, m), n)
                .prop_map(move |cols| DiscretizedSample::with_default_labels(cols, vec![3; n]).unwrap())
        })
    }

    proptest! {
        #[test]
        fn joint_invariants(s in arb_sample()) {
            let j = estimate_joint(&s);
            prop_assert_eq!(j.m() as usize, s.m());
            prop_assert!(j.support_len() <= s.m());
            let full = SubsetMask::full(s.n());
            prop_assert_eq!(j.marginalize(full).unwrap(), j.clone());
            for sub in full.subsets() {
                let once = j.marginalize(sub).unwrap();
                prop_assert_eq!(once.m(), j.m());
                prop_assert_eq!(once.marginalize(SubsetMask::full(sub.len())).unwrap(), once.clone());
                // tower: marginalizing inside `sub` equals marginalizing directly
                for (pos, v) in sub.iter().enumerate() {
                    let via = once.marginalize(SubsetMask::singleton(pos)).unwrap();
                    let direct = j.marginalize(SubsetMask::singleton(v)).unwrap();
                    prop_assert_eq!(via, direct);
                }
            }
        }
    }
}
