//! Problem instances and the bitmask encoding of subsets.
//!
//! Element `a_i` (1-based everywhere outside this crate) lives at bit `i - 1`
//! of a [`SubsetMask`]. Moments of the set-splitting device use the same
//! encoding, so a moment and the subset it identifies share one integer.

use std::fmt;

use crate::error::{Error, Result};

/// Largest supported universe size; keeps every moment inside a `u64`.
pub const MAX_N: u32 = 63;

pub(crate) fn check_n(n: u32) -> Result<()> {
    if (1..=MAX_N).contains(&n) {
        Ok(())
    } else {
        Err(Error::SizeOutOfRange(n as u64))
    }
}

/// `2^n - 1`, the mask of the whole universe.
pub(crate) fn full_bits(n: u32) -> u64 {
    debug_assert!(n <= 64);
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// A subset of `{a_1, ..., a_n}`; bit `i - 1` set means `a_i` is present.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct SubsetMask(pub u64);

impl SubsetMask {
    pub const EMPTY: SubsetMask = SubsetMask(0);

    pub fn full(n: u32) -> Self {
        SubsetMask(full_bits(n))
    }

    /// Builds a mask from 1-based element indices.
    pub fn from_elements<I: IntoIterator<Item = u32>>(elements: I) -> Self {
        SubsetMask(elements.into_iter().fold(0, |acc, i| {
            debug_assert!((1..=64).contains(&i));
            acc | 1u64 << (i - 1)
        }))
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn len(self) -> u32 {
        self.0.count_ones()
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn fits(self, n: u32) -> bool {
        self.0 & !full_bits(n) == 0
    }

    /// True when `other` is a subset of `self`.
    pub fn contains(self, other: SubsetMask) -> bool {
        self.0 & other.0 == other.0
    }

    pub fn is_disjoint(self, other: SubsetMask) -> bool {
        self.0 & other.0 == 0
    }

    /// 1-based element indices in ascending order.
    pub fn elements(self) -> impl Iterator<Item = u32> {
        let mut rest = self.0;
        std::iter::from_fn(move || {
            if rest == 0 {
                return None;
            }
            let bit = rest.trailing_zeros();
            rest &= rest - 1;
            Some(bit + 1)
        })
    }
}

impl fmt::Display for SubsetMask {
    /// Formats as `{1,3}` using 1-based indices.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (pos, e) in self.elements().enumerate() {
            if pos > 0 {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str("}")
    }
}

/// `A - mask` within a universe of `n` elements.
pub fn complement(mask: SubsetMask, n: u32) -> Result<SubsetMask> {
    check_n(n)?;
    if !mask.fits(n) {
        return Err(Error::MaskOutOfRange { mask: mask.0, n });
    }
    Ok(SubsetMask(full_bits(n) ^ mask.0))
}

/// A split of `A` into two disjoint sides covering it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Partition {
    pub a1: SubsetMask,
    pub a2: SubsetMask,
}

impl Partition {
    /// The partition whose first side is `a1`.
    pub fn from_first(a1: SubsetMask, n: u32) -> Result<Self> {
        let a2 = complement(a1, n)?;
        Ok(Partition { a1, a2 })
    }

    /// Neither side wholly contains any family member.
    pub fn splits(&self, family: &[SubsetMask]) -> bool {
        family
            .iter()
            .all(|&f| !self.a1.contains(f) && !self.a2.contains(f))
    }
}

/// Arrival moment of a beam, kept as integer base-delay units plus the
/// number of arcs traversed. Each arc adds one ε pad; ε only enters at
/// presentation time.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExactMoment {
    pub core: u64,
    pub hops: u32,
}

impl ExactMoment {
    pub fn new(core: u64, hops: u32) -> Self {
        ExactMoment { core, hops }
    }

    /// Physical time `core * unit_delay + hops * epsilon`.
    pub fn seconds(&self, unit_delay: f64, epsilon: f64) -> f64 {
        self.core as f64 * unit_delay + self.hops as f64 * epsilon
    }
}

impl fmt::Display for ExactMoment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}+{}ε", self.core, self.hops)
    }
}

/// Set-splitting input: a universe `{a_1..a_n}` and a family `F` of subsets.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SplitInstance {
    n: u32,
    family: Vec<SubsetMask>,
}

impl SplitInstance {
    pub fn new(n: u32, family: Vec<SubsetMask>) -> Result<Self> {
        check_n(n)?;
        for (i, f) in family.iter().enumerate() {
            if f.is_empty() {
                return Err(Error::EmptyFamilySet(i + 1));
            }
            if !f.fits(n) {
                return Err(Error::MaskOutOfRange { mask: f.0, n });
            }
        }
        Ok(SplitInstance { n, family })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn family(&self) -> &[SubsetMask] {
        &self.family
    }

    /// Copy of this instance with one more family member.
    pub fn with_set(&self, set: SubsetMask) -> Result<Self> {
        let mut family = self.family.clone();
        family.push(set);
        SplitInstance::new(self.n, family)
    }
}

/// Subset-sum input: positive values `a_1..a_n` and a positive target `B`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SubsetSumInstance {
    values: Vec<u64>,
    target: u64,
}

impl SubsetSumInstance {
    pub fn new(values: Vec<u64>, target: u64) -> Result<Self> {
        if values.is_empty() || values.len() > MAX_N as usize {
            return Err(Error::ValueCount(values.len()));
        }
        if let Some(i) = values.iter().position(|&v| v == 0) {
            return Err(Error::ZeroValue(i + 1));
        }
        if target == 0 {
            return Err(Error::ZeroTarget);
        }
        values
            .iter()
            .try_fold(0u64, |acc, &v| acc.checked_add(v))
            .ok_or(Error::SumOverflow)?;
        Ok(SubsetSumInstance { values, target })
    }

    pub fn n(&self) -> u32 {
        self.values.len() as u32
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }

    pub fn target(&self) -> u64 {
        self.target
    }

    /// Sum of the values selected by `mask`.
    pub fn subset_sum(&self, mask: SubsetMask) -> u64 {
        mask.elements().map(|e| self.values[e as usize - 1]).sum()
    }
}
