//! Residuals of the algebraic identities linking entropies, informations and
//! η-coordinates, evaluated on one joint law. Used as a self-check on data.

use alloc::vec::Vec;

use crate::discretize::JointDistribution;
use crate::error::{Error, Result};
use crate::exec::Sequential;
use crate::info::{
    conditional_entropy, conditional_mutual_information, eta, general_information, mutual_information,
    total_correlation, EntropySource,
};
use crate::lattice::{compute_landscape, LandscapeOptions};
use crate::mask::{subsets_of_size, SubsetMask};
use crate::mobius;

/// Largest number of variables accepted by [`check_identities`].
pub const IDENTITY_VARIABLE_LIMIT: usize = 10;

/// Largest absolute residual of each identity.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct IdentityResiduals {
    /// `H(Z|Y) = H(Y,Z) − H(Y)`.
    pub chain_rule: f64,
    /// `I_{k+1}(X_0;…;X_k) = I_k(X_1;…;X_k) − X_0.I_k(X_1;…;X_k)`.
    pub recursion: f64,
    /// `I(X;(Y,Z)) + I(Y;Z) = I((X,Y);Z) + I(X;Y)`.
    pub cocycle: f64,
    /// `H(X_1,…,X_n) = Σ_k (−1)^{k−1} Σ_{|I|=k} I_k(X_I)`.
    pub alternating_sum: f64,
    /// `G_n = Σ_{k≥2} (−1)^k Σ_{|I|=k} I_k(X_I)`.
    pub total_correlation: f64,
    /// `G_2 = I_2`.
    pub pairwise: f64,
    /// η from Möbius inversion against the conditional definition, and `H`
    /// rebuilt from η.
    pub mobius_round_trip: f64,
}

impl IdentityResiduals {
    pub fn named(&self) -> [(&'static str, f64); 7] {
        [
            ("chain-rule", self.chain_rule),
            ("recursion", self.recursion),
            ("cocycle", self.cocycle),
            ("alternating-sum", self.alternating_sum),
            ("total-correlation", self.total_correlation),
            ("pairwise", self.pairwise),
            ("mobius-round-trip", self.mobius_round_trip),
        ]
    }

    pub fn max(&self) -> f64 {
        self.named().iter().map(|(_, r)| *r).fold(0.0, f64::max)
    }
}

fn worst(acc: &mut f64, a: f64, b: f64) {
    *acc = acc.max(libm::fabs(a - b));
}

pub fn check_identities(j: &JointDistribution) -> Result<IdentityResiduals> {
    let n = j.n();
    if n > IDENTITY_VARIABLE_LIMIT {
        return Err(Error::Capacity { n, limit: IDENTITY_VARIABLE_LIMIT });
    }
    let l = compute_landscape(j, LandscapeOptions::new(n), &Sequential)?;
    let h = l.entropy_table();
    let info = l.information_table();
    let full = SubsetMask::full(n);
    let mut r = IdentityResiduals::default();

    for s in full.subsets() {
        for z in s.subsets().filter(|&z| z != s) {
            let y = s.difference(z);
            worst(&mut r.chain_rule, conditional_entropy(j, z, y)?, h[s.index()] - h[y.index()]);
        }
        if s.len() >= 2 {
            for x in s.iter() {
                let rest = s.without(x);
                let conditioned = conditional_mutual_information(j, rest, SubsetMask::singleton(x))?;
                worst(&mut r.recursion, mutual_information(j, s)?, info[rest.index()] - conditioned);
            }
        }
    }

    for x in 0..n {
        for y in (0..n).filter(|&y| y != x) {
            for z in (0..n).filter(|&z| z != x && z != y) {
                let (sx, sy, sz) = (SubsetMask::singleton(x), SubsetMask::singleton(y), SubsetMask::singleton(z));
                let e = SubsetMask::EMPTY;
                let left = general_information(j, &[sx, sy.union(sz)], e)? + general_information(j, &[sy, sz], e)?;
                let right = general_information(j, &[sx.union(sy), sz], e)? + general_information(j, &[sx, sy], e)?;
                worst(&mut r.cocycle, left, right);
            }
        }
    }

    let per_degree: Vec<f64> = (1..=n).map(|k| subsets_of_size(n, k).map(|s| info[s.index()]).sum()).collect();
    let signed: f64 = per_degree.iter().enumerate().map(|(i, v)| if i % 2 == 0 { *v } else { -*v }).sum();
    worst(&mut r.alternating_sum, h[full.index()], signed);
    let g_from_i: f64 = per_degree.iter().enumerate().skip(1).map(|(i, v)| if i % 2 == 1 { *v } else { -*v }).sum();
    worst(&mut r.total_correlation, total_correlation(j, full)?, g_from_i);

    for pair in subsets_of_size(n, 2) {
        worst(&mut r.pairwise, total_correlation(j, pair)?, mutual_information(j, pair)?);
    }

    let mut table = info.to_vec();
    mobius::eta_from_interaction(&mut table, n);
    for s in full.subsets() {
        worst(&mut r.mobius_round_trip, table[s.index()], eta(j, s)?);
    }
    let rebuilt = mobius::entropy_from_eta(&table, n);
    for s in full.subsets() {
        worst(&mut r.mobius_round_trip, rebuilt[s.index()], j.entropy(s));
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::info::tests::{copied_coin, parity};

    #[test]
    fn reference_laws_satisfy_identities() {
        for j in [parity(), copied_coin()] {
            let r = check_identities(&j).unwrap();
            assert!(r.max() < 1e-12, "{r:?}");
        }
    }
}
