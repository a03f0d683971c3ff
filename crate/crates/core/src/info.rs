//! Information functions of a joint law: entropies, multivariate mutual
//! informations, conditional variants, total correlation and η-coordinates.
//!
//! Unconditioned quantities only need joint entropies of variable subsets and
//! are written against [`EntropySource`], so that they can read from a cached
//! table. Conditional quantities are evaluated by their definition, as the
//! mass-weighted average over the slices of the conditioning variables; the
//! entropy-difference forms are checked against them in tests.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::sync::atomic::{AtomicU64, Ordering};

use crate::discretize::JointDistribution;
use crate::error::{Error, Result};
use crate::mask::{subsets_of_size, SubsetMask, ENUMERATION_LIMIT};
use crate::mobius;

/// Default absolute tolerance for identity and "is zero" checks.
pub const IDENTITY_TOLERANCE: f64 = 1e-9;

/// Anything that can report the joint entropy (bits) of a subset of its variables.
pub trait EntropySource {
    fn n(&self) -> usize;

    /// `H(X_mask)`; the empty mask has entropy 0.
    fn entropy(&self, mask: SubsetMask) -> f64;
}

impl EntropySource for JointDistribution {
    fn n(&self) -> usize {
        JointDistribution::n(self)
    }

    fn entropy(&self, mask: SubsetMask) -> f64 {
        if mask.is_empty() {
            return 0.0;
        }
        entropy_from_counts(self.marginal_counts(mask).into_iter(), self.m())
    }
}

impl<T: EntropySource + ?Sized> EntropySource for &T {
    fn n(&self) -> usize {
        (**self).n()
    }

    fn entropy(&self, mask: SubsetMask) -> f64 {
        (**self).entropy(mask)
    }
}

/// Shannon entropy `-Σ p log₂ p` of a probability vector.
pub fn entropy(p: &[f64]) -> Result<f64> {
    if let Some(x) = p.iter().find(|x| !(**x >= 0.0) || !x.is_finite()) {
        return Err(Error::Distribution(format!("invalid probability mass {x}")));
    }
    let total: f64 = p.iter().sum();
    if libm::fabs(total - 1.0) > 1e-9 {
        return Err(Error::Distribution(format!("probabilities sum to {total}")));
    }
    Ok(p.iter().filter(|&&x| x > 0.0).map(|&x| -x * libm::log2(x)).sum())
}

/// Entropy of the law with the given integer counts out of `total`, computed
/// as `log₂ total − Σ c log₂ c / total` so that all-singleton supports give
/// exactly `log₂ total`.
pub fn entropy_from_counts<I: Iterator<Item = u64>>(counts: I, total: u64) -> f64 {
    let t = total as f64;
    let s: f64 = counts.filter(|&c| c > 1).map(|c| c as f64 * libm::log2(c as f64)).sum();
    libm::log2(t) - s / t
}

fn check_nonempty<S: EntropySource + ?Sized>(src: &S, mask: SubsetMask, what: &str) -> Result<()> {
    if mask.is_empty() {
        return Err(Error::Subset(format!("{what} requires a non-empty subset")));
    }
    check_fits(src, mask)
}

fn check_fits<S: EntropySource + ?Sized>(src: &S, mask: SubsetMask) -> Result<()> {
    if mask.fits(src.n()) {
        Ok(())
    } else {
        Err(Error::Subset(format!("mask {mask} exceeds {} variables", src.n())))
    }
}

pub fn joint_entropy<S: EntropySource + ?Sized>(src: &S, mask: SubsetMask) -> Result<f64> {
    check_nonempty(src, mask, "joint entropy")?;
    Ok(src.entropy(mask))
}

/// Sum of the joint entropies of every `degree`-sized sub-collection of `vars`.
pub fn sum_entropy<S: EntropySource + ?Sized>(src: &S, vars: &[SubsetMask], degree: usize) -> Result<f64> {
    if degree == 0 || degree > vars.len() {
        return Err(Error::Config(format!("degree {degree} outside 1..={}", vars.len())));
    }
    if vars.len() > 31 {
        return Err(Error::Config(String::from("too many variable groups")));
    }
    for &v in vars {
        check_nonempty(src, v, "sum entropy")?;
    }
    Ok(subsets_of_size(vars.len(), degree)
        .map(|pick| src.entropy(pick.iter().fold(SubsetMask::EMPTY, |acc, i| acc.union(vars[i]))))
        .sum())
}

/// `I_k(X_I) = Σ_{∅≠T⊆I} (−1)^{|T|−1} H(X_T)`; `I_1 = H`.
pub fn mutual_information<S: EntropySource + ?Sized>(src: &S, mask: SubsetMask) -> Result<f64> {
    check_nonempty(src, mask, "mutual information")?;
    Ok(alternating_sum(src, mask))
}

pub(crate) fn alternating_sum<S: EntropySource + ?Sized>(src: &S, mask: SubsetMask) -> f64 {
    mask.subsets()
        .map(|t| {
            let h = src.entropy(t);
            if t.len() % 2 == 1 { h } else { -h }
        })
        .sum()
}

/// `G(X_I) = Σ_{i∈I} H(X_i) − H(X_I)`.
pub fn total_correlation<S: EntropySource + ?Sized>(src: &S, mask: SubsetMask) -> Result<f64> {
    check_nonempty(src, mask, "total correlation")?;
    let marginals: f64 = mask.iter().map(|i| src.entropy(SubsetMask::singleton(i))).sum();
    Ok(marginals - src.entropy(mask))
}

fn check_disjoint(a: SubsetMask, b: SubsetMask) -> Result<()> {
    if a.is_disjoint(b) {
        Ok(())
    } else {
        Err(Error::Subset(format!("subsets {a} and {b} overlap")))
    }
}

/// `H(X_Z | X_Y) = Σ_y P(y) H(X_Z | Y = y)`, summed over conditions with mass.
pub fn conditional_entropy(j: &JointDistribution, z: SubsetMask, given: SubsetMask) -> Result<f64> {
    check_nonempty(j, z, "conditional entropy")?;
    check_nonempty(j, given, "conditioning")?;
    check_disjoint(z, given)?;
    let m = j.m() as f64;
    Ok(j.condition_on(given)?
        .iter()
        .map(|slice| slice.m() as f64 / m * slice.entropy(z))
        .sum())
}

/// `I_k(X_{i_1};…;X_{i_k} | X_J) = Σ_z P(z) I_k(…; P | J = z)`. An empty `given`
/// reduces to [`mutual_information`].
pub fn conditional_mutual_information(j: &JointDistribution, vars: SubsetMask, given: SubsetMask) -> Result<f64> {
    check_nonempty(j, vars, "conditional mutual information")?;
    check_fits(j, given)?;
    check_disjoint(vars, given)?;
    if given.is_empty() {
        return Ok(alternating_sum(j, vars));
    }
    let m = j.m() as f64;
    Ok(j.condition_on(given)?
        .iter()
        .map(|slice| slice.m() as f64 / m * alternating_sum(slice, vars))
        .sum())
}

/// η-coordinate `η_J = X_{[n]∖J}.I_{|J|}(X_J)`: the information shared by the
/// variables of `J` conditioned on all the others.
pub fn eta(j: &JointDistribution, set: SubsetMask) -> Result<f64> {
    check_nonempty(j, set, "eta")?;
    let rest = SubsetMask::full(j.n()).difference(set);
    conditional_mutual_information(j, set, rest)
}

/// `I(X_{B_1}; …; X_{B_k} | X_K)` for blocks of joint variables, computed from
/// joint entropies. In debug builds (and `n ≤ 12`) the value is cross-checked
/// against the sum of η-coordinates over the atoms that meet every block and
/// avoid `K`.
pub fn general_information<S: EntropySource + ?Sized>(
    src: &S,
    blocks: &[SubsetMask],
    given: SubsetMask,
) -> Result<f64> {
    if blocks.is_empty() {
        return Err(Error::Subset(String::from("at least one block is required")));
    }
    if blocks.len() > 31 {
        return Err(Error::Config(String::from("too many blocks")));
    }
    check_fits(src, given)?;
    for &b in blocks {
        check_nonempty(src, b, "information block")?;
        check_disjoint(b, given)?;
    }
    let h_given = src.entropy(given);
    let value = SubsetMask::full(blocks.len())
        .subsets()
        .map(|pick| {
            let union = pick.iter().fold(given, |acc, i| acc.union(blocks[i]));
            let h = src.entropy(union) - h_given;
            if pick.len() % 2 == 1 { h } else { -h }
        })
        .sum();

    #[cfg(debug_assertions)]
    if src.n() <= 12 {
        let via_atoms = general_information_from_eta(src, blocks, given);
        debug_assert!(
            libm::fabs(value - via_atoms) < IDENTITY_TOLERANCE,
            "entropy route {value} vs η route {via_atoms}"
        );
    }
    Ok(value)
}

/// The η-atom route: Σ η_J over J meeting every block and disjoint from `given`.
pub fn general_information_from_eta<S: EntropySource + ?Sized>(
    src: &S,
    blocks: &[SubsetMask],
    given: SubsetMask,
) -> f64 {
    let n = src.n();
    let mut table: Vec<f64> = (0..1u32 << n).map(|b| src.entropy(SubsetMask::from_bits(b))).collect();
    mobius::interaction_from_entropy(&mut table, n);
    mobius::eta_from_interaction(&mut table, n);
    SubsetMask::full(n)
        .subsets()
        .filter(|j| j.is_disjoint(given) && blocks.iter().all(|b| !j.is_disjoint(*b)))
        .map(|j| table[j.index()])
        .sum()
}

/// Outcome of [`markov_check`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MarkovCheck {
    pub holds: bool,
    /// Largest `|I_{k}(X_first; X_J; X_last) − I_2(X_first; X_last)|` seen.
    pub worst_violation: f64,
}

/// Tests whether the variables, in `ordering`, can form a Markov chain: every
/// information between the two endpoints and any set of middle variables must
/// equal the endpoints' pairwise information.
pub fn markov_check<S: EntropySource + ?Sized>(src: &S, ordering: &[usize], tol: f64) -> Result<MarkovCheck> {
    let n = src.n();
    let mut seen = SubsetMask::EMPTY;
    for &v in ordering {
        if v >= n || seen.contains(v) {
            return Err(Error::Config(format!("ordering is not a permutation of 0..{n}")));
        }
        seen = seen.with(v);
    }
    if ordering.len() != n {
        return Err(Error::Config(format!("ordering is not a permutation of 0..{n}")));
    }
    if n <= 2 {
        return Ok(MarkovCheck { holds: true, worst_violation: 0.0 });
    }
    let ends = SubsetMask::singleton(ordering[0]).with(ordering[n - 1]);
    let middle = SubsetMask::from_indices(&ordering[1..n - 1])?;
    let pairwise = alternating_sum(src, ends);
    let worst = middle
        .subsets()
        .map(|mid| libm::fabs(alternating_sum(src, mid.union(ends)) - pairwise))
        .fold(0.0, f64::max);
    Ok(MarkovCheck { holds: worst <= tol, worst_violation: worst })
}

/// Lazily filled entropy cache over all `2^n` subsets of one joint law.
///
/// Slots are written with compare-and-swap; racing writers compute the same
/// bits, so whichever wins the result is identical.
pub struct EntropyMemo<'a> {
    joint: &'a JointDistribution,
    slots: Vec<AtomicU64>,
}

const EMPTY_SLOT: u64 = u64::MAX;

impl<'a> EntropyMemo<'a> {
    pub fn new(joint: &'a JointDistribution) -> Result<Self> {
        let n = joint.n();
        if n > ENUMERATION_LIMIT {
            return Err(Error::Capacity { n, limit: ENUMERATION_LIMIT });
        }
        let slots = (0..1usize << n).map(|_| AtomicU64::new(EMPTY_SLOT)).collect();
        Ok(EntropyMemo { joint, slots })
    }

    /// Number of cached subsets.
    pub fn filled(&self) -> usize {
        self.slots.iter().filter(|s| s.load(Ordering::Relaxed) != EMPTY_SLOT).count()
    }
}

impl EntropySource for EntropyMemo<'_> {
    fn n(&self) -> usize {
        self.joint.n()
    }

    fn entropy(&self, mask: SubsetMask) -> f64 {
        let slot = &self.slots[mask.index()];
        let cached = slot.load(Ordering::Acquire);
        if cached != EMPTY_SLOT {
            return f64::from_bits(cached);
        }
        let h = self.joint.entropy(mask);
        let _ = slot.compare_exchange(EMPTY_SLOT, h.to_bits(), Ordering::AcqRel, Ordering::Acquire);
        h
    }
}
