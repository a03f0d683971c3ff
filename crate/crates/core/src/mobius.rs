//! Zeta and Möbius transforms on the Boolean lattice of `n` variables.
//!
//! Tables are dense, indexed by subset bit mask, length `2^n`. Every transform
//! runs in `O(n 2^n)` with a fixed update order, so results are bit-stable.
//!
//! Relations used throughout the crate:
//! - `I(S) = Σ_{∅≠T⊆S} (−1)^{|T|−1} H(T)`
//! - `I(S) = Σ_{J⊇S} η_J` and its inverse `η_J = Σ_{S⊇J} (−1)^{|S|−|J|} I(S)`
//! - `H(S) = Σ_{J∩S≠∅} η_J`

fn sign_for(mask: usize) -> f64 {
    if mask.count_ones() % 2 == 1 { 1.0 } else { -1.0 }
}

fn subset_zeta(t: &mut [f64], n: usize) {
    for bit in 0..n {
        let b = 1usize << bit;
        for mask in 0..t.len() {
            if mask & b != 0 {
                t[mask] += t[mask ^ b];
            }
        }
    }
}

fn subset_mobius(t: &mut [f64], n: usize) {
    for bit in 0..n {
        let b = 1usize << bit;
        for mask in 0..t.len() {
            if mask & b != 0 {
                t[mask] -= t[mask ^ b];
            }
        }
    }
}

fn superset_zeta(t: &mut [f64], n: usize) {
    for bit in 0..n {
        let b = 1usize << bit;
        for mask in 0..t.len() {
            if mask & b == 0 {
                t[mask] += t[mask | b];
            }
        }
    }
}

fn superset_mobius(t: &mut [f64], n: usize) {
    for bit in 0..n {
        let b = 1usize << bit;
        for mask in 0..t.len() {
            if mask & b == 0 {
                t[mask] -= t[mask | b];
            }
        }
    }
}

/// Entropies → multivariate mutual informations, in place.
///
/// Only a downward-closed set of entries needs to be meaningful: the value at a
/// mask depends on its submasks alone.
pub fn interaction_from_entropy(t: &mut [f64], n: usize) {
    debug_assert_eq!(t.len(), 1 << n);
    t[0] = 0.0;
    for (mask, v) in t.iter_mut().enumerate().skip(1) {
        *v *= sign_for(mask);
    }
    subset_zeta(t, n);
}

/// Multivariate mutual informations → entropies, in place.
pub fn entropy_from_interaction(t: &mut [f64], n: usize) {
    debug_assert_eq!(t.len(), 1 << n);
    t[0] = 0.0;
    subset_mobius(t, n);
    for (mask, v) in t.iter_mut().enumerate().skip(1) {
        *v *= sign_for(mask);
    }
}

/// Mutual informations → η-coordinates (Möbius inversion over supersets).
pub fn eta_from_interaction(t: &mut [f64], n: usize) {
    debug_assert_eq!(t.len(), 1 << n);
    t[0] = 0.0;
    superset_mobius(t, n);
    t[0] = 0.0;
}

/// η-coordinates → mutual informations: `I(S) = Σ_{J⊇S} η_J`.
pub fn interaction_from_eta(t: &mut [f64], n: usize) {
    debug_assert_eq!(t.len(), 1 << n);
    t[0] = 0.0;
    superset_zeta(t, n);
    t[0] = 0.0;
}

/// η-coordinates → entropies: `H(S) = Σ_{J meets S} η_J`.
pub fn entropy_from_eta(eta: &[f64], n: usize) -> alloc::vec::Vec<f64> {
    debug_assert_eq!(eta.len(), 1 << n);
    let mut below = eta.to_vec();
    below[0] = 0.0;
    subset_zeta(&mut below, n);
    let full = (1usize << n) - 1;
    let total = below[full];
    (0..=full).map(|s| total - below[full ^ s]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::info::tests::{independent_coins, parity};
    use crate::info::EntropySource;
    use crate::mask::SubsetMask;
    use alloc::vec::Vec;

    fn entropies<S: EntropySource>(s: &S) -> Vec<f64> {
        (0..1u32 << s.n()).map(|b| s.entropy(SubsetMask::from_bits(b))).collect()
    }

    #[test]
    fn parity_informations() {
        let mut t = entropies(&parity());
        interaction_from_entropy(&mut t, 3);
        let expect = [0.0, 1.0, 1.0, 0.0, 1.0, 0.0, 0.0, -1.0];
        for (got, want) in t.iter().zip(expect) {
            assert!((got - want).abs() < 1e-12);
        }
    }

    #[test]
    fn independent_coin_etas() {
        let mut t = entropies(&independent_coins(2));
        interaction_from_entropy(&mut t, 2);
        eta_from_interaction(&mut t, 2);
        assert!((t[0b01] - 1.0).abs() < 1e-12);
        assert!((t[0b10] - 1.0).abs() < 1e-12);
        assert!(t[0b11].abs() < 1e-12);
    }

    #[test]
    fn round_trips() {
        let h = entropies(&parity());
        let mut t = h.clone();
        interaction_from_entropy(&mut t, 3);
        let i = t.clone();
        eta_from_interaction(&mut t, 3);
        let eta = t.clone();
        let h_back = entropy_from_eta(&eta, 3);
        interaction_from_eta(&mut t, 3);
        for s in 1..8 {
            assert!((t[s] - i[s]).abs() < 1e-12);
            assert!((h_back[s] - h[s]).abs() < 1e-12);
        }
        let mut back = i.clone();
        entropy_from_interaction(&mut back, 3);
        for s in 1..8 {
            assert!((back[s] - h[s]).abs() < 1e-12);
        }
    }
}
