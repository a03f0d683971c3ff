//! Compact variable-subset identifiers.

use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};

/// Default guard on the number of variables for exhaustive lattice enumeration.
pub const ENUMERATION_LIMIT: usize = 25;

/// Hard limit imposed by the 32-bit mask representation (with override).
pub const MAX_VARIABLES: usize = 30;

/// A subset of variable indices `0..n`, one bit per variable.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct SubsetMask(u32);

impl SubsetMask {
    pub const EMPTY: SubsetMask = SubsetMask(0);

    pub const fn from_bits(bits: u32) -> Self {
        SubsetMask(bits)
    }

    pub const fn bits(self) -> u32 {
        self.0
    }

    pub const fn index(self) -> usize {
        self.0 as usize
    }

    pub fn singleton(var: usize) -> Self {
        debug_assert!(var < 32);
        SubsetMask(1 << var)
    }

    /// The full set `{0, …, n-1}`.
    pub fn full(n: usize) -> Self {
        debug_assert!(n <= 32);
        if n >= 32 {
            SubsetMask(u32::MAX)
        } else {
            SubsetMask((1u32 << n) - 1)
        }
    }

    pub fn from_indices(indices: &[usize]) -> Result<Self> {
        let mut bits = 0u32;
        for &i in indices {
            if i >= 32 {
                return Err(Error::Subset(alloc::format!("variable index {i} out of mask range")));
            }
            if bits & (1 << i) != 0 {
                return Err(Error::Subset(alloc::format!("duplicate variable index {i}")));
            }
            bits |= 1 << i;
        }
        Ok(SubsetMask(bits))
    }

    /// Cardinality `k`.
    pub const fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub const fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub const fn contains(self, var: usize) -> bool {
        var < 32 && self.0 & (1 << var) != 0
    }

    pub const fn with(self, var: usize) -> Self {
        SubsetMask(self.0 | (1 << var))
    }

    pub const fn without(self, var: usize) -> Self {
        SubsetMask(self.0 & !(1 << var))
    }

    pub const fn union(self, other: Self) -> Self {
        SubsetMask(self.0 | other.0)
    }

    pub const fn intersection(self, other: Self) -> Self {
        SubsetMask(self.0 & other.0)
    }

    pub const fn difference(self, other: Self) -> Self {
        SubsetMask(self.0 & !other.0)
    }

    pub const fn is_subset_of(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    pub const fn is_disjoint(self, other: Self) -> bool {
        self.0 & other.0 == 0
    }

    /// True when every variable lies in `0..n`.
    pub fn fits(self, n: usize) -> bool {
        self.is_subset_of(SubsetMask::full(n))
    }

    /// Variable indices in increasing order.
    pub fn iter(self) -> Indices {
        Indices(self.0)
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }

    /// Non-empty subsets of `self`, in increasing numeric order.
    pub fn subsets(self) -> Subsets {
        Subsets { set: self.0, next: self.0 & self.0.wrapping_neg(), done: self.0 == 0 }
    }
}

impl fmt::Debug for SubsetMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl fmt::Display for SubsetMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (pos, v) in self.iter().enumerate() {
            if pos > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

pub struct Indices(u32);

impl Iterator for Indices {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let i = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(i)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for Indices {}

/// Carry-rippler enumeration of the non-empty submasks of a set.
pub struct Subsets {
    set: u32,
    next: u32,
    done: bool,
}

impl Iterator for Subsets {
    type Item = SubsetMask;

    fn next(&mut self) -> Option<SubsetMask> {
        if self.done {
            return None;
        }
        let cur = self.next;
        self.next = self.next.wrapping_sub(self.set) & self.set;
        if self.next == 0 {
            self.done = true;
        }
        Some(SubsetMask(cur))
    }
}

/// All `k`-subsets of `{0, …, n-1}` in increasing numeric order (Gosper's hack).
pub fn subsets_of_size(n: usize, k: usize) -> impl Iterator<Item = SubsetMask> {
    let limit: u64 = 1u64 << n;
    let start: u64 = if k == 0 || k > n { limit } else { (1u64 << k) - 1 };
    let mut cur = start;
    core::iter::from_fn(move || {
        if cur >= limit {
            return None;
        }
        let out = SubsetMask(cur as u32);
        let c = cur & cur.wrapping_neg();
        let r = cur + c;
        cur = (((r ^ cur) >> 2) / c) | r;
        Some(out)
    })
}

/// Binomial coefficient, exact in `u64` for the sizes used here.
pub fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u64 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u64 / (i + 1) as u64;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subsets_cover_powerset() {
        let s = SubsetMask::from_indices(&[0, 2, 5]).unwrap();
        let subs: Vec<u32> = s.subsets().map(|m| m.bits()).collect();
        assert_eq!(subs, vec![1, 4, 5, 32, 33, 36, 37]);
        assert_eq!(SubsetMask::EMPTY.subsets().count(), 0);
    }

    #[test]
    fn gosper_counts_match_binomials() {
        for n in 0..=10 {
            for k in 0..=n {
                let masks: Vec<_> = subsets_of_size(n, k).collect();
                if k == 0 {
                    assert!(masks.is_empty());
                    continue;
                }
                assert_eq!(masks.len() as u64, binomial(n, k), "n={n} k={k}");
                assert!(masks.iter().all(|m| m.len() == k && m.fits(n)));
                assert!(masks.windows(2).all(|w| w[0] < w[1]));
            }
        }
    }

    #[test]
    fn duplicate_index_rejected() {
        assert!(matches!(SubsetMask::from_indices(&[1, 1]), Err(Error::Subset(_))));
    }

    #[test]
    fn binomial_values() {
        assert_eq!(binomial(21, 2), 210);
        assert_eq!(binomial(21, 3), 1330);
        assert_eq!(binomial(5, 7), 0);
    }
}
