use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::ops::Add;

/// Beam intensity relative to the source pulse, `numerator / 2^exponent`.
///
/// Every splitter halves a beam, so all intensities in a device are dyadic
/// and sums stay exact. Values are kept in lowest terms: the numerator is
/// odd unless the value is zero, in which case the exponent is zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DyadicIntensity {
    numerator: u64,
    exponent: u32,
}

impl DyadicIntensity {
    pub const ZERO: DyadicIntensity = DyadicIntensity {
        numerator: 0,
        exponent: 0,
    };
    pub const ONE: DyadicIntensity = DyadicIntensity {
        numerator: 1,
        exponent: 0,
    };

    pub fn new(numerator: u64, exponent: u32) -> Self {
        if numerator == 0 {
            return Self::ZERO;
        }
        let shift = numerator.trailing_zeros().min(exponent);
        DyadicIntensity {
            numerator: numerator >> shift,
            exponent: exponent - shift,
        }
    }

    /// Share carried by `paths` of the `2^n` paths of an `n`-layer device.
    pub fn from_paths(paths: u64, n: u32) -> Self {
        Self::new(paths, n)
    }

    pub fn numerator(&self) -> u64 {
        self.numerator
    }

    pub fn exponent(&self) -> u32 {
        self.exponent
    }

    /// `None` if the reduced sum no longer fits the representation.
    pub fn checked_add(self, rhs: Self) -> Option<Self> {
        let exponent = self.exponent.max(rhs.exponent);
        let lhs = (self.numerator as u128).checked_shl(exponent - self.exponent)?;
        let rhs_n = (rhs.numerator as u128).checked_shl(exponent - rhs.exponent)?;
        // checked_shl only rejects shift amounts, not lost bits
        if lhs >> (exponent - self.exponent) != self.numerator as u128
            || rhs_n >> (exponent - rhs.exponent) != rhs.numerator as u128
        {
            return None;
        }
        let sum = lhs.checked_add(rhs_n)?;
        if sum == 0 {
            return Some(Self::ZERO);
        }
        let shift = sum.trailing_zeros().min(exponent);
        let numerator = u64::try_from(sum >> shift).ok()?;
        Some(DyadicIntensity {
            numerator,
            exponent: exponent - shift,
        })
    }

    pub fn to_f64(&self) -> f64 {
        self.numerator as f64 * (-(self.exponent as f64)).exp2()
    }
}

impl Default for DyadicIntensity {
    fn default() -> Self {
        Self::ZERO
    }
}

impl Add for DyadicIntensity {
    type Output = DyadicIntensity;

    fn add(self, rhs: Self) -> Self {
        self.checked_add(rhs).expect("dyadic intensity overflow")
    }
}

impl Sum for DyadicIntensity {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::ZERO, Add::add)
    }
}

impl PartialOrd for DyadicIntensity {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for DyadicIntensity {
    fn cmp(&self, other: &Self) -> Ordering {
        // Scale the coarser value up to the finer exponent. A nonzero numerator
        // shifted by 64 or more outranks any u64.
        let scaled = |n: u64, shift: u32| -> u128 {
            if n == 0 {
                0
            } else if shift >= 64 {
                u128::MAX
            } else {
                (n as u128) << shift
            }
        };
        let e = self.exponent.max(other.exponent);
        scaled(self.numerator, e - self.exponent).cmp(&scaled(other.numerator, e - other.exponent))
    }
}

impl fmt::Display for DyadicIntensity {
    /// `1`, `3/8`, or `1/2^40` once the denominator gets unwieldy.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.exponent {
            0 => write!(f, "{}", self.numerator),
            e if e <= 20 => write!(f, "{}/{}", self.numerator, 1u64 << e),
            e => write!(f, "{}/2^{}", self.numerator, e),
        }
    }
}
