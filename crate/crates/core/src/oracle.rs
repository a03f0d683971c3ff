//! Exact reference laws and brute-force recomputation.
//!
//! Laws are dense tables of integer weights over every box, with probability
//! `weight / denominator`. All quantities here are recomputed by dense
//! marginalization and direct summation, sharing no code with the sparse
//! engine, so the two can be checked against each other.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::discretize::{DiscretizedSample, JointDistribution};
use crate::error::{Error, Result};
use crate::mask::SubsetMask;
use crate::rng::{exponential, seeded, Rng};

/// Largest number of variables of a dense law.
pub const DENSE_VARIABLE_LIMIT: usize = 6;
/// Largest number of boxes of a dense law.
pub const DENSE_BOX_LIMIT: usize = 1 << 16;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnalyticDistribution {
    bins: Vec<u32>,
    /// Row-major over boxes, variable 0 most significant; values are 0-based.
    weights: Vec<u64>,
    denominator: u64,
}

impl AnalyticDistribution {
    pub fn new(bins: Vec<u32>, weights: Vec<u64>) -> Result<Self> {
        if bins.is_empty() || bins.len() > DENSE_VARIABLE_LIMIT {
            return Err(Error::Config(format!("dense laws need 1..={DENSE_VARIABLE_LIMIT} variables")));
        }
        if bins.contains(&0) {
            return Err(Error::Config("alphabet sizes must be positive".into()));
        }
        let boxes = bins
            .iter()
            .try_fold(1usize, |acc, &r| acc.checked_mul(r as usize))
            .filter(|&b| b <= DENSE_BOX_LIMIT)
            .ok_or_else(|| Error::Config("too many boxes for a dense law".into()))?;
        if weights.len() != boxes {
            return Err(Error::Config(format!("expected {boxes} weights, got {}", weights.len())));
        }
        let denominator = weights
            .iter()
            .try_fold(0u64, |acc, &w| acc.checked_add(w))
            .ok_or_else(|| Error::Config("weights overflow".into()))?;
        if denominator == 0 {
            return Err(Error::Config("a law needs positive total weight".into()));
        }
        Ok(AnalyticDistribution { bins, weights, denominator })
    }

    pub fn n(&self) -> usize {
        self.bins.len()
    }

    pub fn bins(&self) -> &[u32] {
        &self.bins
    }

    pub fn weights(&self) -> &[u64] {
        &self.weights
    }

    pub fn denominator(&self) -> u64 {
        self.denominator
    }

    pub fn box_count(&self) -> usize {
        self.weights.len()
    }

    /// 0-based values of box `flat`.
    pub fn decode(&self, flat: usize) -> Vec<u32> {
        let mut out = vec![0; self.n()];
        let mut rest = flat;
        for (slot, &r) in out.iter_mut().zip(&self.bins).rev() {
            *slot = (rest % r as usize) as u32;
            rest /= r as usize;
        }
        out
    }

    pub fn encode(&self, values: &[u32]) -> usize {
        values.iter().zip(&self.bins).fold(0, |acc, (&v, &r)| acc * r as usize + v as usize)
    }

    pub fn probability(&self, values: &[u32]) -> f64 {
        self.weights[self.encode(values)] as f64 / self.denominator as f64
    }

    /// The law as counts over 1-based bin indices.
    pub fn to_joint(&self) -> JointDistribution {
        let entries = (0..self.box_count())
            .filter(|&f| self.weights[f] > 0)
            .map(|f| (self.decode(f).into_iter().map(|v| v + 1).collect::<Vec<u32>>(), self.weights[f]));
        JointDistribution::from_counts(self.bins.clone(), entries).expect("a valid dense law is a valid joint")
    }

    /// Dense marginal weights of the variables in `mask`, row-major in
    /// increasing variable order.
    pub fn marginal_weights(&self, mask: SubsetMask) -> Vec<u64> {
        let vars = mask.to_vec();
        let size: usize = vars.iter().map(|&v| self.bins[v] as usize).product();
        let mut out = vec![0u64; size];
        for flat in 0..self.box_count() {
            let values = self.decode(flat);
            let idx = vars.iter().fold(0usize, |acc, &v| acc * self.bins[v] as usize + values[v] as usize);
            out[idx] += self.weights[flat];
        }
        out
    }

    /// Probabilities of the product of this law's single-variable marginals.
    pub fn marginal_product(&self) -> Vec<f64> {
        let d = self.denominator as f64;
        let marginals: Vec<Vec<u64>> = (0..self.n()).map(|i| self.marginal_weights(SubsetMask::singleton(i))).collect();
        (0..self.box_count())
            .map(|f| {
                self.decode(f)
                    .iter()
                    .enumerate()
                    .map(|(i, &v)| marginals[i][v as usize] as f64 / d)
                    .product()
            })
            .collect()
    }
}

/// Named families of exact laws.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Family {
    /// `n` copies of one fair coin.
    IdenticalCoins(usize),
    /// `n − 1` copies of a fair coin and its negation in the last place.
    OppositeCoins(usize),
    /// Uniform on the binary words of even parity.
    EvenParity(usize),
    OddParity(usize),
    /// Product of the given (unnormalized) marginal weights.
    ProductOfMarginals(Vec<Vec<u64>>),
    Uniform(Vec<u32>),
    /// All mass on one box; `atom` holds 0-based values.
    SingleAtom { bins: Vec<u32>, atom: Vec<u32> },
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::IdenticalCoins(_) => "identical-coins",
            Family::OppositeCoins(_) => "opposite-coins",
            Family::EvenParity(_) => "even-parity",
            Family::OddParity(_) => "odd-parity",
            Family::ProductOfMarginals(_) => "product-of-marginals",
            Family::Uniform(_) => "uniform",
            Family::SingleAtom { .. } => "single-atom",
        }
    }
}

fn binary_words<F: Fn(u32) -> bool>(n: usize, keep: F) -> Result<AnalyticDistribution> {
    if n == 0 {
        return Err(Error::Config("a binary family needs at least one variable".into()));
    }
    if n > DENSE_VARIABLE_LIMIT {
        return Err(Error::Config(format!("at most {DENSE_VARIABLE_LIMIT} variables")));
    }
    // box index bit (n-1-i) is variable i
    let weights = (0..1u32 << n).map(|w| u64::from(keep(w))).collect();
    AnalyticDistribution::new(vec![2; n], weights)
}

pub fn make_named(family: &Family) -> Result<AnalyticDistribution> {
    match family {
        Family::IdenticalCoins(n) => {
            let all = (1u32 << n) - 1;
            binary_words(*n, |w| w == 0 || w == all)
        }
        Family::OppositeCoins(n) => {
            if *n < 2 {
                return Err(Error::Config("opposite coins need at least two variables".into()));
            }
            let all = (1u32 << n) - 1;
            binary_words(*n, |w| w == 1 || w == all ^ 1)
        }
        Family::EvenParity(n) => binary_words(*n, |w| w.count_ones() % 2 == 0),
        Family::OddParity(n) => binary_words(*n, |w| w.count_ones() % 2 == 1),
        Family::ProductOfMarginals(marginals) => {
            if marginals.iter().any(|m| m.is_empty() || m.iter().all(|&w| w == 0)) {
                return Err(Error::Config("every marginal needs positive weight".into()));
            }
            let bins: Vec<u32> = marginals.iter().map(|m| m.len() as u32).collect();
            let shell = AnalyticDistribution::new(bins.clone(), vec![1; bins.iter().map(|&r| r as usize).product()])?;
            let weights = (0..shell.box_count())
                .map(|f| {
                    shell.decode(f).iter().enumerate().try_fold(1u64, |acc, (i, &v)| acc.checked_mul(marginals[i][v as usize]))
                })
                .collect::<Option<Vec<u64>>>()
                .ok_or_else(|| Error::Config("product weights overflow".into()))?;
            AnalyticDistribution::new(bins, weights)
        }
        Family::Uniform(bins) => {
            let boxes = bins.iter().try_fold(1usize, |acc, &r| acc.checked_mul(r as usize)).unwrap_or(usize::MAX);
            if bins.is_empty() || boxes > DENSE_BOX_LIMIT {
                return Err(Error::Config("invalid uniform alphabet sizes".into()));
            }
            AnalyticDistribution::new(bins.clone(), vec![1; boxes])
        }
        Family::SingleAtom { bins, atom } => {
            if atom.len() != bins.len() || atom.iter().zip(bins).any(|(&a, &r)| a >= r) {
                return Err(Error::Config(format!("atom {atom:?} does not fit alphabets {bins:?}")));
            }
            let boxes = bins.iter().try_fold(1usize, |acc, &r| acc.checked_mul(r as usize)).unwrap_or(usize::MAX);
            if bins.is_empty() || boxes > DENSE_BOX_LIMIT {
                return Err(Error::Config("invalid alphabet sizes".into()));
            }
            let mut weights = vec![0; boxes];
            let shell = AnalyticDistribution::new(bins.clone(), vec![1; boxes])?;
            weights[shell.encode(atom)] = 1;
            AnalyticDistribution::new(bins.clone(), weights)
        }
    }
}

/// Random law over the given alphabets: each box gets a seeded standard
/// exponential scaled to an integer weight (a discretized flat Dirichlet
/// draw); about a quarter of the boxes are emptied to exercise sparse support.
pub fn random_distribution(bins: &[u32], seed: u64, stream: &[u64]) -> Result<AnalyticDistribution> {
    let boxes: usize = bins.iter().map(|&r| r as usize).product();
    let mut rng = seeded(seed, stream);
    let mut weights: Vec<u64> = (0..boxes)
        .map(|_| if rng.gen_bool(0.25) { 0 } else { 1 + (exponential(&mut rng) * 1000.0) as u64 })
        .collect();
    if weights.iter().all(|&w| w == 0) {
        weights[rng.gen_range(0..boxes.max(1))] = 1;
    }
    AnalyticDistribution::new(bins.to_vec(), weights)
}

/// Random product law with integer marginal weights in `1..=20`.
pub fn random_product(bins: &[u32], seed: u64, stream: &[u64]) -> Result<AnalyticDistribution> {
    let mut rng = seeded(seed, stream);
    let marginals = bins.iter().map(|&r| (0..r).map(|_| rng.gen_range(1..=20)).collect()).collect();
    make_named(&Family::ProductOfMarginals(marginals))
}

fn entropy_of_weights(weights: &[u64], denominator: u64) -> f64 {
    let d = denominator as f64;
    weights
        .iter()
        .filter(|&&w| w > 0)
        .map(|&w| {
            let p = w as f64 / d;
            -p * libm::log2(p)
        })
        .sum()
}

/// `H(X_mask)` by dense marginalization; the empty mask gives 0.
pub fn brute_entropy(a: &AnalyticDistribution, mask: SubsetMask) -> f64 {
    if mask.is_empty() {
        return 0.0;
    }
    entropy_of_weights(&a.marginal_weights(mask), a.denominator)
}

/// Alternating sum of joint entropies over the non-empty subsets of `mask`.
pub fn brute_information(a: &AnalyticDistribution, mask: SubsetMask) -> f64 {
    let mut total = 0.0;
    for bits in 1..1u32 << a.n() {
        let t = SubsetMask::from_bits(bits);
        if t.is_subset_of(mask) {
            let h = brute_entropy(a, t);
            total += if t.len() % 2 == 1 { h } else { -h };
        }
    }
    total
}

pub fn brute_total_correlation(a: &AnalyticDistribution, mask: SubsetMask) -> f64 {
    mask.iter().map(|i| brute_entropy(a, SubsetMask::singleton(i))).sum::<f64>() - brute_entropy(a, mask)
}

/// `Σ_y P(y) H(X_z | Y = y)`, with each conditional law formed explicitly.
pub fn brute_conditional_entropy(a: &AnalyticDistribution, z: SubsetMask, given: SubsetMask) -> f64 {
    if given.is_empty() {
        return brute_entropy(a, z);
    }
    let both = a.marginal_weights(z.union(given));
    let given_weights = a.marginal_weights(given);
    // row-major over increasing variable order: split the index into the
    // given part and the z part
    let vars = z.union(given).to_vec();
    let mut slices: Vec<Vec<u64>> = vec![Vec::new(); given_weights.len()];
    for (idx, &w) in both.iter().enumerate() {
        let mut rest = idx;
        let mut values = vec![0usize; vars.len()];
        for (slot, &v) in values.iter_mut().zip(&vars).rev() {
            *slot = rest % a.bins[v] as usize;
            rest /= a.bins[v] as usize;
        }
        let g = vars
            .iter()
            .zip(&values)
            .filter(|(v, _)| given.contains(**v))
            .fold(0usize, |acc, (&v, &x)| acc * a.bins[v] as usize + x);
        slices[g].push(w);
    }
    let d = a.denominator as f64;
    slices
        .iter()
        .zip(&given_weights)
        .filter(|(_, &gw)| gw > 0)
        .map(|(slice, &gw)| gw as f64 / d * entropy_of_weights(slice, gw))
        .sum()
}

/// `I(X_{i_1}; …; X_{i_k} | X_given)` as the alternating sum of conditional entropies.
pub fn brute_conditional_information(a: &AnalyticDistribution, vars: SubsetMask, given: SubsetMask) -> f64 {
    let mut total = 0.0;
    for bits in 1..1u32 << a.n() {
        let t = SubsetMask::from_bits(bits);
        if t.is_subset_of(vars) {
            let h = brute_conditional_entropy(a, t, given);
            total += if t.len() % 2 == 1 { h } else { -h };
        }
    }
    total
}

/// `η_J`: information of `J` conditioned on every other variable.
pub fn brute_eta(a: &AnalyticDistribution, set: SubsetMask) -> f64 {
    brute_conditional_information(a, set, SubsetMask::full(a.n()).difference(set))
}

/// `m` i.i.d. draws from `a`, as 1-based bin indices.
pub fn sample_from(a: &AnalyticDistribution, m: usize, seed: u64) -> Result<DiscretizedSample> {
    if m == 0 {
        return Err(Error::Config("sample size must be at least 1".into()));
    }
    let cumulative: Vec<u64> = a
        .weights
        .iter()
        .scan(0u64, |acc, &w| {
            *acc += w;
            Some(*acc)
        })
        .collect();
    let mut rng = seeded(seed, &[0x5a3]);
    let mut columns = vec![Vec::with_capacity(m); a.n()];
    for _ in 0..m {
        let u = rng.gen_range(0..a.denominator);
        let flat = cumulative.partition_point(|&c| c <= u);
        for (col, v) in columns.iter_mut().zip(a.decode(flat)) {
            col.push(v + 1);
        }
    }
    DiscretizedSample::with_default_labels(columns, a.bins.clone())
}

/// Outcome of [`independence_grid_search`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSearchReport {
    pub resolution: u32,
    pub laws_checked: u64,
    /// Laws whose every `|I_k|`, `k ≥ 2`, is below the zero tolerance.
    pub vanishing: u64,
    /// Vanishing laws farther than the distance tolerance from the product of their marginals.
    pub counterexamples: u64,
    /// Largest max-norm distance to the marginal product among vanishing laws.
    pub worst_distance: f64,
}

/// Enumerates every law on three binary variables whose probabilities are
/// multiples of `1 / resolution` and checks that vanishing `I_2`, `I_3`
/// imply a product law.
pub fn independence_grid_search(resolution: u32, zero_tol: f64, distance_tol: f64) -> Result<GridSearchReport> {
    if resolution == 0 || resolution > 256 {
        return Err(Error::Config(format!("grid resolution {resolution} outside 1..=256")));
    }
    let r = resolution as usize;
    let d = resolution as f64;
    // H = log₂ d − Σ w log₂ w / d for integer weights w summing to d
    let wlog: Vec<f64> = (0..=r).map(|w| if w == 0 { 0.0 } else { w as f64 * libm::log2(w as f64) }).collect();
    let log_d = libm::log2(d);
    let h = |ws: &[usize]| log_d - ws.iter().map(|&w| wlog[w]).sum::<f64>() / d;

    let mut report = GridSearchReport { resolution, laws_checked: 0, vanishing: 0, counterexamples: 0, worst_distance: 0.0 };
    let mut w = [0usize; 8];
    // box index b = 4·x0 + 2·x1 + x2
    let mut visit = |w: &[usize; 8]| {
        report.laws_checked += 1;
        let x0 = [w[0] + w[1] + w[2] + w[3], w[4] + w[5] + w[6] + w[7]];
        let x1 = [w[0] + w[1] + w[4] + w[5], w[2] + w[3] + w[6] + w[7]];
        let x2 = [w[0] + w[2] + w[4] + w[6], w[1] + w[3] + w[5] + w[7]];
        let x01 = [w[0] + w[1], w[2] + w[3], w[4] + w[5], w[6] + w[7]];
        let x02 = [w[0] + w[2], w[1] + w[3], w[4] + w[6], w[5] + w[7]];
        let x12 = [w[0] + w[4], w[1] + w[5], w[2] + w[6], w[3] + w[7]];
        let (h0, h1, h2) = (h(&x0), h(&x1), h(&x2));
        let (h01, h02, h12, h012) = (h(&x01), h(&x02), h(&x12), h(&w[..]));
        let i01 = h0 + h1 - h01;
        let i02 = h0 + h2 - h02;
        let i12 = h1 + h2 - h12;
        let i012 = h0 + h1 + h2 - h01 - h02 - h12 + h012;
        if [i01, i02, i12, i012].iter().all(|i| libm::fabs(*i) < zero_tol) {
            report.vanishing += 1;
            let mut dist: f64 = 0.0;
            for (b, &wb) in w.iter().enumerate() {
                let prod = x0[b >> 2] as f64 * x1[(b >> 1) & 1] as f64 * x2[b & 1] as f64 / (d * d * d);
                dist = dist.max(libm::fabs(wb as f64 / d - prod));
            }
            report.worst_distance = report.worst_distance.max(dist);
            if dist > distance_tol {
                report.counterexamples += 1;
            }
        }
    };
    compositions(&mut w, 0, r, &mut visit);
    Ok(report)
}

fn compositions<F: FnMut(&[usize; 8])>(w: &mut [usize; 8], pos: usize, left: usize, visit: &mut F) {
    if pos == 7 {
        w[7] = left;
        visit(w);
        return;
    }
    for x in 0..=left {
        w[pos] = x;
        compositions(w, pos + 1, left - x, visit);
    }
}
