//! Subsets of the ground set `V = {1..n}` packed into a machine word.
//!
//! Vertex `i` (1-indexed) lives in bit `i - 1`. The ground-set size is not
//! stored in the mask; every operator carries its own `n` and range-checks
//! masks at its public boundary.

use core::fmt;
use core::ops::{BitAnd, BitAndAssign, BitOr, BitOrAssign, Sub};

/// Largest ground set a mask can address.
pub const MAX_VERTICES: usize = 64;

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Subset(u64);

impl Subset {
    pub const EMPTY: Subset = Subset(0);

    #[inline]
    pub const fn from_bits(bits: u64) -> Self {
        Subset(bits)
    }

    #[inline]
    pub const fn bits(self) -> u64 {
        self.0
    }

    /// The whole ground set `{1..n}`.
    #[inline]
    pub const fn full(n: usize) -> Self {
        if n >= 64 {
            Subset(u64::MAX)
        } else {
            Subset((1u64 << n) - 1)
        }
    }

    /// `{v}` for a 1-indexed vertex.
    #[inline]
    pub fn singleton(v: usize) -> Self {
        debug_assert!((1..=MAX_VERTICES).contains(&v));
        Subset(1u64 << (v - 1))
    }

    /// Builds a subset from 1-indexed vertices.
    pub fn from_vertices<I: IntoIterator<Item = usize>>(vertices: I) -> Self {
        vertices
            .into_iter()
            .fold(Subset::EMPTY, |acc, v| acc | Subset::singleton(v))
    }

    #[inline]
    pub const fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    #[inline]
    pub const fn is_empty(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub fn contains(self, v: usize) -> bool {
        v >= 1 && v <= MAX_VERTICES && self.0 >> (v - 1) & 1 == 1
    }

    #[inline]
    pub const fn is_subset_of(self, other: Subset) -> bool {
        self.0 & !other.0 == 0
    }

    #[inline]
    pub const fn intersects(self, other: Subset) -> bool {
        self.0 & other.0 != 0
    }

    #[inline]
    pub fn with(self, v: usize) -> Self {
        self | Subset::singleton(v)
    }

    #[inline]
    pub fn without(self, v: usize) -> Self {
        self - Subset::singleton(v)
    }

    /// `V \ X` relative to a ground set of size `n`.
    #[inline]
    pub const fn complement(self, n: usize) -> Self {
        Subset(!self.0 & Subset::full(n).0)
    }

    /// True when every element lies in `{1..n}`.
    #[inline]
    pub const fn fits(self, n: usize) -> bool {
        self.is_subset_of(Subset::full(n))
    }

    /// Smallest element, 1-indexed.
    #[inline]
    pub fn min(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize + 1)
    }

    /// Largest element, 1-indexed.
    #[inline]
    pub fn max(self) -> Option<usize> {
        (self.0 != 0).then(|| 64 - self.0.leading_zeros() as usize)
    }

    /// Elements in increasing order, 1-indexed.
    pub fn vertices(self) -> Vertices {
        Vertices(self.0)
    }

    /// All subsets of `self`, in increasing order of bits.
    pub fn subsets(self) -> Submasks {
        Submasks {
            mask: self.0,
            next: Some(0),
        }
    }

    /// Subsets of `self` with exactly `k` elements, in increasing order of bits.
    pub fn subsets_of_size(self, k: usize) -> KSubsets {
        KSubsets::new(self, k)
    }

    /// Subsets of `self` by increasing cardinality, ties by increasing bits.
    pub fn subsets_by_size(self) -> impl Iterator<Item = Subset> {
        (0..=self.len()).flat_map(move |k| self.subsets_of_size(k))
    }
}

impl BitOr for Subset {
    type Output = Subset;
    #[inline]
    fn bitor(self, rhs: Subset) -> Subset {
        Subset(self.0 | rhs.0)
    }
}

impl BitOrAssign for Subset {
    #[inline]
    fn bitor_assign(&mut self, rhs: Subset) {
        self.0 |= rhs.0;
    }
}

impl BitAnd for Subset {
    type Output = Subset;
    #[inline]
    fn bitand(self, rhs: Subset) -> Subset {
        Subset(self.0 & rhs.0)
    }
}

impl BitAndAssign for Subset {
    #[inline]
    fn bitand_assign(&mut self, rhs: Subset) {
        self.0 &= rhs.0;
    }
}

impl Sub for Subset {
    type Output = Subset;
    #[inline]
    fn sub(self, rhs: Subset) -> Subset {
        Subset(self.0 & !rhs.0)
    }
}

impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, v) in self.vertices().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

pub struct Vertices(u64);

impl Iterator for Vertices {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let v = self.0.trailing_zeros() as usize + 1;
        self.0 &= self.0 - 1;
        Some(v)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let k = self.0.count_ones() as usize;
        (k, Some(k))
    }
}

impl ExactSizeIterator for Vertices {}

pub struct Submasks {
    mask: u64,
    next: Option<u64>,
}

impl Iterator for Submasks {
    type Item = Subset;

    #[inline]
    fn next(&mut self) -> Option<Subset> {
        let cur = self.next?;
        // next submask in increasing order: set the lowest clear bit of the
        // mask-restricted counter
        self.next = if cur == self.mask {
            None
        } else {
            Some(cur.wrapping_sub(self.mask) & self.mask)
        };
        Some(Subset(cur))
    }
}

/// k-subsets of a mask in increasing bit order.
///
/// Runs Gosper's hack over the positions of the mask and deposits the
/// selected positions back; the deposit is monotone, so order is kept.
pub struct KSubsets {
    positions: [u8; 64],
    width: usize,
    k: usize,
    state: Option<u64>,
}

impl KSubsets {
    fn new(mask: Subset, k: usize) -> Self {
        let mut positions = [0u8; 64];
        let mut width = 0;
        for v in mask.vertices() {
            positions[width] = (v - 1) as u8;
            width += 1;
        }
        let state = if k > width {
            None
        } else if k == 0 {
            Some(0)
        } else {
            Some(if k == 64 { u64::MAX } else { (1u64 << k) - 1 })
        };
        KSubsets {
            positions,
            width,
            k,
            state,
        }
    }

    fn deposit(&self, compact: u64) -> u64 {
        let mut out = 0u64;
        let mut c = compact;
        while c != 0 {
            let i = c.trailing_zeros() as usize;
            out |= 1u64 << self.positions[i];
            c &= c - 1;
        }
        out
    }
}

impl Iterator for KSubsets {
    type Item = Subset;

    fn next(&mut self) -> Option<Subset> {
        let cur = self.state?;
        let out = Subset(self.deposit(cur));
        self.state = if self.k == 0 {
            None
        } else {
            let c = cur & cur.wrapping_neg();
            let r = cur.wrapping_add(c);
            if r == 0 {
                None
            } else {
                let next = (((r ^ cur) >> 2) / c) | r;
                if self.width < 64 && next >> self.width != 0 {
                    None
                } else {
                    Some(next)
                }
            }
        };
        Some(out)
    }
}

/// Every subset of `{1..n}` in increasing bit order (`n` at most 63).
pub fn all_subsets(n: usize) -> impl Iterator<Item = Subset> {
    debug_assert!(n < 64);
    (0..(1u64 << n)).map(Subset)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec::Vec;

    #[test]
    fn display_is_sorted_and_one_indexed() {
        let x = Subset::from_vertices([3, 1]);
        assert_eq!(alloc::format!("{x}"), "{1,3}");
        assert_eq!(alloc::format!("{}", Subset::EMPTY), "{}");
    }

    #[test]
    fn submasks_cover_everything_once() {
        let m = Subset::from_bits(0b1011_0010);
        let subs: Vec<_> = m.subsets().collect();
        assert_eq!(subs.len(), 16);
        assert!(subs.windows(2).all(|w| w[0] < w[1]));
        assert!(subs.iter().all(|s| s.is_subset_of(m)));
    }

    #[test]
    fn k_subsets_match_filter() {
        let m = Subset::from_bits(0b1101_0110);
        for k in 0..=6 {
            let got: Vec<_> = m.subsets_of_size(k).collect();
            let want: Vec<_> = m.subsets().filter(|s| s.len() == k).collect();
            assert_eq!(got, want, "k = {k}");
        }
    }

    #[test]
    fn k_subsets_of_wide_masks() {
        let v = Subset::full(42);
        assert_eq!(v.subsets_of_size(2).count(), 861);
        assert_eq!(v.subsets_of_size(0).count(), 1);
        assert_eq!(Subset::full(64).subsets_of_size(64).count(), 1);
        assert_eq!(Subset::full(64).subsets_of_size(1).count(), 64);
    }

    #[test]
    fn min_max_complement() {
        let x = Subset::from_vertices([2, 5]);
        assert_eq!(x.min(), Some(2));
        assert_eq!(x.max(), Some(5));
        assert_eq!(x.complement(5), Subset::from_vertices([1, 3, 4]));
        assert_eq!(Subset::EMPTY.max(), None);
    }
}
