//! Set partitions of a finite carrier `{0..m-1}` and their entropy.
//!
//! A partition is stored as its restricted-growth string: element `i` gets
//! the index of its part, parts numbered by first appearance. That form is
//! unique per set partition, so equality of partitions is equality of
//! vectors.

use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    assign: Vec<u32>,
    parts: u32,
}

impl Partition {
    /// Canonicalizes arbitrary part labels.
    pub fn from_labels<T: Ord + Copy>(labels: &[T]) -> Self {
        let mut seen: Vec<(T, u32)> = Vec::new();
        let mut assign = Vec::with_capacity(labels.len());
        for &l in labels {
            let id = match seen.iter().find(|(k, _)| *k == l) {
                Some(&(_, id)) => id,
                None => {
                    let id = seen.len() as u32;
                    seen.push((l, id));
                    id
                }
            };
            assign.push(id);
        }
        Partition {
            parts: seen.len() as u32,
            assign,
        }
    }

    /// Like [`Partition::from_labels`] for small dense labels.
    pub fn from_dense_labels(labels: &[usize]) -> Self {
        let bound = labels.iter().copied().max().map_or(0, |m| m + 1);
        let mut map = vec![u32::MAX; bound];
        let mut parts = 0u32;
        let assign = labels
            .iter()
            .map(|&l| {
                if map[l] == u32::MAX {
                    map[l] = parts;
                    parts += 1;
                }
                map[l]
            })
            .collect();
        Partition { assign, parts }
    }

    /// Accepts a restricted-growth string, rejecting anything else.
    pub fn from_rgs(rgs: &[u32]) -> Result<Self> {
        let mut next = 0u32;
        for (i, &x) in rgs.iter().enumerate() {
            if x > next {
                return Err(Error::InvalidArgument(alloc::format!(
                    "not a restricted-growth string: position {i} jumps to {x}"
                )));
            }
            if x == next {
                next += 1;
            }
        }
        Ok(Partition {
            assign: rgs.to_vec(),
            parts: next,
        })
    }

    /// One part holding everything.
    pub fn universal(m: usize) -> Self {
        Partition {
            assign: vec![0; m],
            parts: u32::from(m > 0),
        }
    }

    /// Every element alone.
    pub fn equality(m: usize) -> Self {
        Partition {
            assign: (0..m as u32).collect(),
            parts: m as u32,
        }
    }

    /// Carrier size.
    pub fn len(&self) -> usize {
        self.assign.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assign.is_empty()
    }

    pub fn parts(&self) -> usize {
        self.parts as usize
    }

    pub fn rgs(&self) -> &[u32] {
        &self.assign
    }

    pub fn part_of(&self, element: usize) -> usize {
        self.assign[element] as usize
    }

    pub fn is_universal(&self) -> bool {
        self.parts <= 1
    }

    pub fn is_equality(&self) -> bool {
        self.parts as usize == self.assign.len()
    }

    pub fn part_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0usize; self.parts()];
        for &a in &self.assign {
            sizes[a as usize] += 1;
        }
        sizes
    }

    /// Common refinement: parts are the nonempty intersections.
    pub fn join(&self, other: &Partition) -> Result<Partition> {
        if self.len() != other.len() {
            return Err(Error::CarrierMismatch {
                left: self.len(),
                right: other.len(),
            });
        }
        Ok(self.join_unchecked(other))
    }

    pub(crate) fn join_unchecked(&self, other: &Partition) -> Partition {
        if other.is_universal() {
            return self.clone();
        }
        if self.is_universal() {
            return other.clone();
        }
        let width = other.parts();
        let mut map = vec![u32::MAX; self.parts() * width];
        let mut parts = 0u32;
        let assign = self
            .assign
            .iter()
            .zip(&other.assign)
            .map(|(&a, &b)| {
                let slot = &mut map[a as usize * width + b as usize];
                if *slot == u32::MAX {
                    *slot = parts;
                    parts += 1;
                }
                *slot
            })
            .collect();
        Partition { assign, parts }
    }

    /// Every part of `self` lies inside a part of `other`.
    pub fn refines(&self, other: &Partition) -> bool {
        self.len() == other.len()
            && self.join_unchecked(other).parts == self.parts
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Partition(")?;
        for a in &self.assign {
            write!(f, "{a}")?;
        }
        write!(f, ")")
    }
}

/// Join of a family; the empty join is the universal partition.
pub fn join_all<'a, I>(m: usize, parts: I) -> Result<Partition>
where
    I: IntoIterator<Item = &'a Partition>,
{
    let mut acc = Partition::universal(m);
    for p in parts {
        acc = acc.join(p)?;
    }
    Ok(acc)
}

/// Entropy value: exact when every `log_q |P|` is rational.
#[derive(Clone, Debug, PartialEq)]
pub enum Entropy {
    Exact(BigRational),
    Approx(f64),
}

/// Absolute tolerance when an inexact entropy is compared.
pub const ENTROPY_TOLERANCE: f64 = 1e-12;

impl Entropy {
    pub fn zero() -> Self {
        Entropy::Exact(BigRational::zero())
    }

    pub fn integer(k: usize) -> Self {
        Entropy::Exact(BigRational::from_integer(BigInt::from(k)))
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Entropy::Exact(q) => q.to_f64().unwrap_or(f64::NAN),
            Entropy::Approx(x) => *x,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Entropy::Exact(_))
    }

    pub fn as_exact(&self) -> Option<&BigRational> {
        match self {
            Entropy::Exact(q) => Some(q),
            Entropy::Approx(_) => None,
        }
    }

    /// Exact comparison when both sides are exact, otherwise within
    /// [`ENTROPY_TOLERANCE`].
    pub fn compare(&self, other: &Entropy) -> Ordering {
        match (self, other) {
            (Entropy::Exact(a), Entropy::Exact(b)) => a.cmp(b),
            _ => {
                let (a, b) = (self.to_f64(), other.to_f64());
                if (a - b).abs() <= ENTROPY_TOLERANCE {
                    Ordering::Equal
                } else if a < b {
                    Ordering::Less
                } else {
                    Ordering::Greater
                }
            }
        }
    }

    pub fn le(&self, other: &Entropy) -> bool {
        self.compare(other) != Ordering::Greater
    }

    pub fn same(&self, other: &Entropy) -> bool {
        self.compare(other) == Ordering::Equal
    }

    pub fn add(&self, other: &Entropy) -> Entropy {
        match (self, other) {
            (Entropy::Exact(a), Entropy::Exact(b)) => Entropy::Exact(a + b),
            _ => Entropy::Approx(self.to_f64() + other.to_f64()),
        }
    }

    pub fn sub(&self, other: &Entropy) -> Entropy {
        match (self, other) {
            (Entropy::Exact(a), Entropy::Exact(b)) => Entropy::Exact(a - b),
            _ => Entropy::Approx(self.to_f64() - other.to_f64()),
        }
    }
}

impl fmt::Display for Entropy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Entropy::Exact(q) => write!(f, "{q}"),
            Entropy::Approx(x) => write!(f, "{x}"),
        }
    }
}

/// `Some(r)` when `m = q^r`.
pub fn exponent_of(m: usize, q: usize) -> Option<usize> {
    if q < 2 || m == 0 {
        return None;
    }
    let mut r = 0;
    let mut acc = 1usize;
    while acc < m {
        acc = acc.checked_mul(q)?;
        r += 1;
    }
    (acc == m).then_some(r)
}

/// Smallest `p` with `q = p^d`, and that `d`.
fn perfect_power_root(q: usize) -> (usize, usize) {
    let mut best = (q, 1);
    let mut d = 2;
    while (1usize << d) <= q {
        let guess = libm::round(libm::pow(q as f64, 1.0 / d as f64)) as usize;
        for p in guess.saturating_sub(1)..=guess + 1 {
            if p >= 2 && exponent_of(q, p) == Some(d) && p < best.0 {
                best = (p, d);
            }
        }
        d += 1;
    }
    best
}

/// `H(g) = r - q^{-r} Σ_i |P_i| log_q |P_i|` on a carrier of size `q^r`.
///
/// Exact when every part size is a power of the smallest root of `q`;
/// otherwise a float.
pub fn partition_entropy(g: &Partition, q: usize) -> Result<Entropy> {
    let m = g.len();
    let r = exponent_of(m, q).ok_or(Error::CarrierMismatch { left: m, right: q })?;
    let sizes = g.part_sizes();
    let (p, d) = perfect_power_root(q);
    let exps: Option<Vec<usize>> = sizes.iter().map(|&s| exponent_of(s, p)).collect();
    match exps {
        Some(exps) => {
            // Σ |P| e / d, over m
            let weighted: usize = sizes.iter().zip(&exps).map(|(s, e)| s * e).sum();
            let loss = BigRational::new(BigInt::from(weighted), BigInt::from(m * d));
            Ok(Entropy::Exact(
                BigRational::from_integer(BigInt::from(r)) - loss,
            ))
        }
        None => {
            let ln_q = libm::log(q as f64);
            let sum: f64 = sizes
                .iter()
                .map(|&s| s as f64 * libm::log(s as f64) / ln_q)
                .sum();
            Ok(Entropy::Approx(r as f64 - sum / m as f64))
        }
    }
}

/// All canonical partitions of `m` elements into at most `max_parts`
/// parts, in lexicographic order of their restricted-growth strings.
pub fn canonical_partitions(m: usize, max_parts: usize) -> Vec<Partition> {
    let mut out = Vec::new();
    if m == 0 {
        out.push(Partition::universal(0));
        return out;
    }
    if max_parts == 0 {
        return out;
    }
    let mut rgs = vec![0u32; m];
    // prefix maxima + 1
    let mut width = vec![1u32; m];
    loop {
        out.push(Partition {
            parts: width[m - 1],
            assign: rgs.clone(),
        });
        // rightmost position that can still grow
        let mut i = m - 1;
        loop {
            if i == 0 {
                return out;
            }
            let limit = width[i - 1].min(max_parts as u32 - 1);
            if rgs[i] < limit {
                break;
            }
            i -= 1;
        }
        rgs[i] += 1;
        width[i] = width[i - 1].max(rgs[i] + 1);
        for j in i + 1..m {
            rgs[j] = 0;
            width[j] = width[i];
        }
    }
}

/// Number of partitions of `m` elements into at most `max_parts` parts
/// (a sum of Stirling numbers of the second kind).
pub fn count_partitions(m: usize, max_parts: usize) -> u128 {
    // s[k] = S(i, k) for the current i
    let mut s = vec![0u128; max_parts + 1];
    s[0] = 1;
    for _ in 0..m {
        for k in (1..=max_parts).rev() {
            s[k] = s[k].saturating_mul(k as u128).saturating_add(s[k - 1]);
        }
        s[0] = 0;
    }
    s.iter().fold(0u128, |a, &b| a.saturating_add(b))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: i64, b: i64) -> Entropy {
        Entropy::Exact(BigRational::new(a.into(), b.into()))
    }

    #[test]
    fn join_examples() {
        let f = Partition::from_labels(&[0, 0, 1, 1]);
        let g = Partition::from_labels(&[0, 1, 0, 1]);
        assert_eq!(f.join(&f).unwrap(), f);
        assert_eq!(f.join(&g).unwrap(), Partition::equality(4));
        assert_eq!(f.join(&Partition::universal(4)).unwrap(), f);
        assert!(f.join(&Partition::universal(3)).is_err());
        assert_eq!(join_all(4, []).unwrap(), Partition::universal(4));
    }

    #[test]
    fn canonical_form_is_unique() {
        let a = Partition::from_labels(&[7, 3, 7, 9]);
        let b = Partition::from_labels(&['x', 'y', 'x', 'z']);
        assert_eq!(a, b);
        assert_eq!(a.rgs(), &[0, 1, 0, 2]);
        assert!(Partition::from_rgs(&[0, 2]).is_err());
    }

    #[test]
    fn entropy_extremes() {
        assert_eq!(partition_entropy(&Partition::equality(8), 2).unwrap(), q(3, 1));
        assert_eq!(partition_entropy(&Partition::universal(8), 2).unwrap(), q(0, 1));
        assert!(partition_entropy(&Partition::universal(6), 2).is_err());
    }

    #[test]
    fn entropy_exact_through_common_root() {
        // carrier 16 = 4^2, parts of size 8: log_4 8 = 3/2
        let g = Partition::from_dense_labels(&(0..16).map(|x| x & 1).collect::<Vec<_>>());
        assert_eq!(partition_entropy(&g, 4).unwrap(), q(1, 2));
    }

    #[test]
    fn entropy_inexact_falls_back_to_float() {
        // sizes 3 and 1 on carrier 4, q = 2
        let g = Partition::from_labels(&[0, 0, 0, 1]);
        let h = partition_entropy(&g, 2).unwrap();
        assert!(!h.is_exact());
        let want = 2.0 - 3.0 * libm::log2(3.0) / 4.0;
        assert!((h.to_f64() - want).abs() < ENTROPY_TOLERANCE);
    }

    #[test]
    fn enumeration_matches_counts() {
        for m in 0..=7 {
            for k in 0..=4 {
                let all = canonical_partitions(m, k);
                assert_eq!(all.len() as u128, count_partitions(m, k), "m={m} k={k}");
                assert!(all.windows(2).all(|w| w[0].rgs() < w[1].rgs()));
                assert!(all.iter().all(|p| p.parts() <= k.max(usize::from(m == 0))));
            }
        }
        assert_eq!(count_partitions(4, 2), 8);
        assert_eq!(count_partitions(5, 5), 52);
    }

    #[test]
    fn equality_uniquely_attains_full_entropy() {
        for m in [1usize, 2, 4, 8] {
            let r = exponent_of(m, 2).unwrap();
            for g in canonical_partitions(m, m) {
                let h = partition_entropy(&g, 2).unwrap();
                assert!(Entropy::zero().le(&h) && h.le(&Entropy::integer(r)));
                assert_eq!(h.same(&Entropy::integer(r)), g.is_equality(), "{g:?}");
            }
        }
    }

    #[test]
    fn refinement() {
        let fine = Partition::equality(4);
        let coarse = Partition::from_labels(&[0, 0, 1, 1]);
        assert!(fine.refines(&coarse));
        assert!(!coarse.refines(&fine));
    }
}
