//! Dyadic rationals (`mantissa / 2^exponent`) and the bit budgets that decide
//! which of them a finite-resolution instrument can realise.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_rational::Ratio;
use serde::Serialize;

use super::NumError;

/// Global resolution parameter `N`: parameters must fit in `N` fractional
/// bits and sample spaces are bit strings of length `2^N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct BitBudget(u32);

impl BitBudget {
    /// Upper bound keeping every derived quantity inside 128-bit arithmetic.
    pub const MAX_BITS: u32 = 62;

    pub fn new(bits: u32) -> Result<Self, NumError> {
        if (2..=Self::MAX_BITS).contains(&bits) {
            Ok(BitBudget(bits))
        } else {
            Err(NumError::InvalidBudget(bits))
        }
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    /// Length `2^N` of the bit strings this budget indexes.
    pub fn string_len(self) -> u64 {
        1u64 << self.0
    }
}

impl fmt::Display for BitBudget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// An exact dyadic rational `mantissa / 2^exponent`.
///
/// Canonical form: the mantissa is odd, or zero, or the exponent is zero
/// (so even integers keep their unique representation with a non-negative
/// exponent). Zero is always `(0, 0)`.
///
/// Arithmetic is exact and panics on 128-bit overflow, which is unreachable
/// for the bounded parameter ranges this crate works in (`|x| <= 4`,
/// exponents within a [`BitBudget`]).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Dyadic {
    mantissa: i128,
    exponent: u32,
}

impl Dyadic {
    pub const ZERO: Dyadic = Dyadic { mantissa: 0, exponent: 0 };
    pub const ONE: Dyadic = Dyadic { mantissa: 1, exponent: 0 };
    pub const TWO: Dyadic = Dyadic { mantissa: 2, exponent: 0 };

    /// Builds `mantissa / 2^exponent` and reduces to canonical form.
    pub fn new(mantissa: i128, exponent: u32) -> Self {
        let mut m = mantissa;
        let mut e = exponent;
        if m == 0 {
            return Dyadic::ZERO;
        }
        while m % 2 == 0 && e > 0 {
            m /= 2;
            e -= 1;
        }
        Dyadic { mantissa: m, exponent: e }
    }

    pub fn from_int(value: i128) -> Self {
        Dyadic::new(value, 0)
    }

    pub fn mantissa(self) -> i128 {
        self.mantissa
    }

    pub fn exponent(self) -> u32 {
        self.exponent
    }

    pub fn is_zero(self) -> bool {
        self.mantissa == 0
    }

    pub fn is_integer(self) -> bool {
        self.exponent == 0
    }

    pub fn abs(self) -> Self {
        Dyadic { mantissa: self.mantissa.abs(), exponent: self.exponent }
    }

    /// Exact multiplication by `2^shift` (negative shifts halve).
    pub fn mul_pow2(self, shift: i32) -> Self {
        if self.mantissa == 0 {
            return Dyadic::ZERO;
        }
        if shift >= 0 {
            let s = shift as u32;
            if s >= self.exponent {
                let m = self
                    .mantissa
                    .checked_shl(s - self.exponent)
                    .expect("dyadic shift overflow");
                Dyadic { mantissa: m, exponent: 0 }
            } else {
                Dyadic::new(self.mantissa, self.exponent - s)
            }
        } else {
            Dyadic::new(self.mantissa, self.exponent + (-shift) as u32)
        }
    }

    /// `self * 2^shift` as an integer, when that product is exact.
    pub fn scaled_int(self, shift: u32) -> Option<i128> {
        if self.exponent <= shift {
            self.mantissa.checked_shl(shift - self.exponent)
        } else {
            None
        }
    }

    pub fn to_f64(self) -> f64 {
        self.mantissa as f64 / (self.exponent as f64).exp2()
    }

    pub fn to_ratio(self) -> Ratio<i128> {
        Ratio::new(self.mantissa, 1i128 << self.exponent.min(126))
    }

    /// Converts an exact rational when its reduced denominator is a power of
    /// two; `None` otherwise.
    pub fn try_from_ratio(r: Ratio<i128>) -> Option<Self> {
        let den = *r.denom();
        if den <= 0 || den.count_ones() != 1 {
            return None;
        }
        Some(Dyadic::new(*r.numer(), den.trailing_zeros()))
    }

    fn aligned(self, other: Dyadic) -> (i128, i128, u32) {
        let e = self.exponent.max(other.exponent);
        let a = self
            .mantissa
            .checked_shl(e - self.exponent)
            .expect("dyadic alignment overflow");
        let b = other
            .mantissa
            .checked_shl(e - other.exponent)
            .expect("dyadic alignment overflow");
        (a, b, e)
    }
}

impl Add for Dyadic {
    type Output = Dyadic;
    fn add(self, rhs: Dyadic) -> Dyadic {
        let (a, b, e) = self.aligned(rhs);
        Dyadic::new(a.checked_add(b).expect("dyadic addition overflow"), e)
    }
}

impl Sub for Dyadic {
    type Output = Dyadic;
    fn sub(self, rhs: Dyadic) -> Dyadic {
        let (a, b, e) = self.aligned(rhs);
        Dyadic::new(a.checked_sub(b).expect("dyadic subtraction overflow"), e)
    }
}

impl Mul for Dyadic {
    type Output = Dyadic;
    fn mul(self, rhs: Dyadic) -> Dyadic {
        let m = self
            .mantissa
            .checked_mul(rhs.mantissa)
            .expect("dyadic multiplication overflow");
        Dyadic::new(m, self.exponent + rhs.exponent)
    }
}

impl Neg for Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        Dyadic { mantissa: -self.mantissa, exponent: self.exponent }
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let (a, b, _) = self.aligned(*other);
        a.cmp(&b)
    }
}

impl fmt::Display for Dyadic {
    /// Prints the reduced fraction, e.g. `3/8`, `-1/2`, `2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exponent == 0 {
            write!(f, "{}", self.mantissa)
        } else if self.exponent <= 126 {
            write!(f, "{}/{}", self.mantissa, 1u128 << self.exponent)
        } else {
            write!(f, "{}*2^-{}", self.mantissa, self.exponent)
        }
    }
}

impl Serialize for Dyadic {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl FromStr for Dyadic {
    type Err = String;

    /// Parses `m` or `m/q` where `q` is a positive power of two.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.split_once('/') {
            None => {
                let m: i128 = s.trim().parse().map_err(|e| format!("bad integer: {e}"))?;
                Ok(Dyadic::from_int(m))
            }
            Some((num, den)) => {
                let m: i128 = num.trim().parse().map_err(|e| format!("bad numerator: {e}"))?;
                let q: i128 = den.trim().parse().map_err(|e| format!("bad denominator: {e}"))?;
                if q <= 0 {
                    return Err("denominator must be positive".into());
                }
                if q.count_ones() != 1 {
                    return Err(format!("denominator {q} is not a power of two"));
                }
                Ok(Dyadic::new(m, q.trailing_zeros()))
            }
        }
    }
}

/// True iff the fractional binary expansion of `x` terminates within `N`
/// digits (canonical exponent at most `N`) and `|x| <= 2`, the parameter
/// range the negation/permutation operators use.
pub fn fits_budget(x: Dyadic, b: BitBudget) -> bool {
    x.exponent <= b.bits() && x.abs() <= Dyadic::TWO
}

/// A witness that budget-representable values are not closed under
/// multiplication: returns `(x, y)` with `fits_budget(x)`, `fits_budget(y)`
/// and `!fits_budget(x * y)`. Exists for every valid budget.
pub fn closure_counterexample(b: BitBudget) -> (Dyadic, Dyadic) {
    let n = b.bits();
    // (2^N - 1) / 2^N squares to an odd mantissa over 2^(2N).
    let x = Dyadic::new((1i128 << n) - 1, n);
    debug_assert!(fits_budget(x, b));
    debug_assert!(!fits_budget(x * x, b));
    (x, x)
}
