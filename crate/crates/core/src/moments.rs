//! Moment arithmetic for the set-splitting device.
//!
//! Moment `k` of the power-of-two device identifies the subset `A_1` whose
//! element bits are the binary digits of `k`. A moment is *blocked* when its
//! split leaves some family member wholly on one side.
//!
//! Two blocked sets are provided. [`blocked_moments_literal`] is the union of
//! the superset moments of each family member, which only catches members
//! lying inside `A_1`. [`blocked_moments_full`] adds the reflections
//! `2^n - 1 - k`, catching members inside `A_2` as well; it is the one that
//! agrees with the splitting predicate and the one the solver uses. On the
//! four-element instance with `F = {{a1,a2},{a1,a3}}` they differ: moment 2
//! (`A_1 = {a2}`) is outside the literal set although `A_2 = {a1,a3,a4}`
//! contains `{a1,a3}`.

use std::fmt;

use crate::error::{Error, Result};
use crate::types::{check_n, full_bits, SplitInstance, SubsetMask};

/// Largest moment set (log2 of member count) that will be materialized.
pub const MATERIALIZE_LIMIT_BITS: u32 = 32;

/// Universe sizes up to this use a bitset while accumulating unions.
const DENSE_ACCUMULATE_MAX_N: u32 = 30;

#[derive(Debug, Clone)]
enum Repr {
    /// Strictly increasing members.
    Sparse(Vec<u64>),
    Dense {
        words: Vec<u64>,
        len: u64,
    },
}

/// A set of moments in `[0, 2^n)`.
///
/// Stored as a sorted list below density 1/64 and as a bitset above it; at
/// that threshold both take the same number of words.
#[derive(Debug, Clone)]
pub struct MomentSet {
    n: u32,
    repr: Repr,
}

fn universe(n: u32) -> u64 {
    1u64 << n
}

fn prefers_dense(n: u32, len: u64) -> bool {
    len.saturating_mul(64) >= universe(n)
}

fn dense_words(n: u32) -> usize {
    universe(n).div_ceil(64) as usize
}

impl MomentSet {
    pub fn empty(n: u32) -> Self {
        MomentSet {
            n,
            repr: Repr::Sparse(Vec::new()),
        }
    }

    /// Every moment in `[0, 2^n)`.
    pub fn full(n: u32) -> Result<Self> {
        check_materializable(n)?;
        let mut words = vec![u64::MAX; dense_words(n)];
        if n < 6 {
            words[0] = full_bits(1 << n);
        }
        Ok(MomentSet {
            n,
            repr: Repr::Dense {
                words,
                len: universe(n),
            },
        })
    }

    /// Collects arbitrary moments; fails on any moment outside `[0, 2^n)`.
    pub fn from_moments<I: IntoIterator<Item = u64>>(n: u32, moments: I) -> Result<Self> {
        check_n(n)?;
        let mut v: Vec<u64> = moments.into_iter().collect();
        if let Some(&k) = v.iter().find(|&&k| k >= universe(n)) {
            return Err(Error::MomentOutOfRange { k, n });
        }
        v.sort_unstable();
        v.dedup();
        Ok(Self::from_sorted(n, v))
    }

    fn from_sorted(n: u32, v: Vec<u64>) -> Self {
        if prefers_dense(n, v.len() as u64) {
            let mut words = vec![0u64; dense_words(n)];
            for &k in &v {
                words[(k >> 6) as usize] |= 1 << (k & 63);
            }
            MomentSet {
                n,
                repr: Repr::Dense {
                    words,
                    len: v.len() as u64,
                },
            }
        } else {
            MomentSet {
                n,
                repr: Repr::Sparse(v),
            }
        }
    }

    fn from_words(n: u32, words: Vec<u64>) -> Self {
        let len: u64 = words.iter().map(|w| w.count_ones() as u64).sum();
        let set = MomentSet {
            n,
            repr: Repr::Dense { words, len },
        };
        if prefers_dense(n, len) {
            set
        } else {
            MomentSet {
                n,
                repr: Repr::Sparse(set.iter().collect()),
            }
        }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn len(&self) -> u64 {
        match &self.repr {
            Repr::Sparse(v) => v.len() as u64,
            Repr::Dense { len, .. } => *len,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// True when the set holds every moment of the universe.
    pub fn is_full(&self) -> bool {
        self.len() == universe(self.n)
    }

    pub fn is_dense(&self) -> bool {
        matches!(self.repr, Repr::Dense { .. })
    }

    pub fn contains(&self, k: u64) -> bool {
        match &self.repr {
            Repr::Sparse(v) => v.binary_search(&k).is_ok(),
            Repr::Dense { words, .. } => words
                .get((k >> 6) as usize)
                .is_some_and(|w| w >> (k & 63) & 1 == 1),
        }
    }

    /// Members in ascending order.
    pub fn iter(&self) -> Box<dyn Iterator<Item = u64> + '_> {
        match &self.repr {
            Repr::Sparse(v) => Box::new(v.iter().copied()),
            Repr::Dense { words, .. } => Box::new(words.iter().enumerate().flat_map(|(i, &w)| {
                let mut rest = w;
                std::iter::from_fn(move || {
                    if rest == 0 {
                        return None;
                    }
                    let bit = rest.trailing_zeros() as u64;
                    rest &= rest - 1;
                    Some(((i as u64) << 6) | bit)
                })
            })),
        }
    }

    pub fn to_vec(&self) -> Vec<u64> {
        self.iter().collect()
    }

    pub fn union(&self, other: &MomentSet) -> Result<MomentSet> {
        if self.n != other.n {
            return Err(Error::param("moment set", "universe sizes differ"));
        }
        if self.n <= DENSE_ACCUMULATE_MAX_N {
            let mut words = self.to_words();
            other.or_into(&mut words);
            return Ok(Self::from_words(self.n, words));
        }
        let mut v: Vec<u64> = self.iter().chain(other.iter()).collect();
        v.sort_unstable();
        v.dedup();
        Ok(Self::from_sorted(self.n, v))
    }

    /// `{2^n - 1 - k}`: the same splits seen from the other side.
    pub fn reflect(&self) -> MomentSet {
        let full = full_bits(self.n);
        let mut v: Vec<u64> = self.iter().map(|k| full - k).collect();
        v.reverse();
        Self::from_sorted(self.n, v)
    }

    /// Moments of `[0, 2^n)` not in this set.
    pub fn complement(&self) -> Result<MomentSet> {
        check_materializable(self.n)?;
        let mut words = self.to_words();
        for w in words.iter_mut() {
            *w = !*w;
        }
        if self.n < 6 {
            words[0] &= full_bits(1 << self.n);
        }
        Ok(Self::from_words(self.n, words))
    }

    fn to_words(&self) -> Vec<u64> {
        let mut words = vec![0u64; dense_words(self.n)];
        self.or_into(&mut words);
        words
    }

    fn or_into(&self, words: &mut [u64]) {
        match &self.repr {
            Repr::Dense { words: mine, .. } => {
                for (w, m) in words.iter_mut().zip(mine) {
                    *w |= m;
                }
            }
            Repr::Sparse(v) => {
                for &k in v {
                    words[(k >> 6) as usize] |= 1 << (k & 63);
                }
            }
        }
    }
}

impl PartialEq for MomentSet {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.len() == other.len() && self.iter().eq(other.iter())
    }
}

impl Eq for MomentSet {}

impl fmt::Display for MomentSet {
    /// Comma-separated ascending decimals.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, k) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{k}")?;
        }
        Ok(())
    }
}

fn check_materializable(n: u32) -> Result<()> {
    check_n(n)?;
    if n > MATERIALIZE_LIMIT_BITS {
        return Err(Error::SetTooLarge {
            log2_len: n,
            limit: MATERIALIZE_LIMIT_BITS,
        });
    }
    Ok(())
}

/// The subset identified by moment `k`.
pub fn decode_moment(k: u64, n: u32) -> Result<SubsetMask> {
    check_n(n)?;
    if k >= universe(n) {
        return Err(Error::MomentOutOfRange { k, n });
    }
    Ok(SubsetMask(k))
}

/// The moment at which the beam for `mask` arrives.
pub fn encode_moment(mask: SubsetMask) -> u64 {
    mask.bits()
}

/// Moments of every superset of `f`: all `k` with `k & f == f`.
pub fn superset_moments(f: SubsetMask, n: u32) -> Result<MomentSet> {
    check_n(n)?;
    if f.is_empty() {
        return Err(Error::EmptySubset);
    }
    if !f.fits(n) {
        return Err(Error::MaskOutOfRange { mask: f.bits(), n });
    }
    let free = full_bits(n) & !f.bits();
    let log2_len = free.count_ones();
    if log2_len > MATERIALIZE_LIMIT_BITS {
        return Err(Error::SetTooLarge {
            log2_len,
            limit: MATERIALIZE_LIMIT_BITS,
        });
    }
    // carry-rippler walk of the subsets of `free`, ascending
    let mut out = Vec::with_capacity(1usize << log2_len);
    let mut sub = 0u64;
    loop {
        out.push(sub | f.bits());
        sub = sub.wrapping_sub(free) & free;
        if sub == 0 {
            break;
        }
    }
    Ok(MomentSet::from_sorted(n, out))
}

/// Union over the family of [`superset_moments`]; only violations inside `A_1`.
pub fn blocked_moments_literal(inst: &SplitInstance) -> Result<MomentSet> {
    let n = inst.n();
    if n <= DENSE_ACCUMULATE_MAX_N {
        let mut words = vec![0u64; dense_words(n)];
        for &f in inst.family() {
            let free = full_bits(n) & !f.bits();
            let mut sub = 0u64;
            loop {
                let k = sub | f.bits();
                words[(k >> 6) as usize] |= 1 << (k & 63);
                sub = sub.wrapping_sub(free) & free;
                if sub == 0 {
                    break;
                }
            }
        }
        return Ok(MomentSet::from_words(n, words));
    }
    inst.family()
        .iter()
        .try_fold(MomentSet::empty(n), |acc, &f| {
            acc.union(&superset_moments(f, n)?)
        })
}

/// Moments whose split leaves some family member wholly in `A_1` or in `A_2`.
pub fn blocked_moments_full(inst: &SplitInstance) -> Result<MomentSet> {
    let literal = blocked_moments_literal(inst)?;
    literal.union(&literal.reflect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Polarity {
    /// The held moments are blocked; any other arrival is a solution.
    WatchBlocked,
    /// The held moments are exactly the solutions.
    WatchSolutions,
}

/// The smaller of the blocked set and its complement, tagged with which one it is.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WatchStrategy {
    pub moments: MomentSet,
    pub polarity: Polarity,
}

impl WatchStrategy {
    pub fn is_solution(&self, k: u64) -> bool {
        match self.polarity {
            Polarity::WatchBlocked => !self.moments.contains(k),
            Polarity::WatchSolutions => self.moments.contains(k),
        }
    }

    /// True when no moment can signal a solution.
    pub fn no_solution(&self) -> bool {
        self.polarity == Polarity::WatchSolutions && self.moments.is_empty()
    }
}

pub fn choose_watch(blocked: &MomentSet) -> Result<WatchStrategy> {
    let half = universe(blocked.n()) / 2;
    if blocked.len() < half {
        Ok(WatchStrategy {
            moments: blocked.clone(),
            polarity: Polarity::WatchBlocked,
        })
    } else {
        Ok(WatchStrategy {
            moments: blocked.complement()?,
            polarity: Polarity::WatchSolutions,
        })
    }
}

/// Whether the arrival at moment `k` encodes a valid split.
pub fn is_solution_moment(k: u64, inst: &SplitInstance) -> Result<bool> {
    let a1 = decode_moment(k, inst.n())?;
    let a2 = SubsetMask(full_bits(inst.n()) ^ a1.bits());
    Ok(inst
        .family()
        .iter()
        .all(|&f| !a1.contains(f) && !a2.contains(f)))
}
