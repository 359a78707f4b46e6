//! Fixed-point big-integer arithmetic at 240 fractional bits, used where a
//! sequence of cosine values must be resolved far below any clustering
//! tolerance. Only cosine at rational multiples of pi is provided; this is
//! deliberately not a general transcendental library.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Number of fractional bits carried by [`FixedPoint`].
pub const SCALE_BITS: u32 = 240;

/// A real value stored as `units / 2^SCALE_BITS`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct FixedPoint(BigInt);

impl FixedPoint {
    pub fn zero() -> Self {
        FixedPoint(BigInt::zero())
    }

    pub fn from_int(v: i64) -> Self {
        FixedPoint(BigInt::from(v) << SCALE_BITS)
    }

    /// Raw scaled units (`value * 2^SCALE_BITS`).
    pub fn units(&self) -> &BigInt {
        &self.0
    }

    pub fn to_f64(&self) -> f64 {
        let scale = BigInt::one() << SCALE_BITS;
        BigRational::new(self.0.clone(), scale).to_f64().unwrap_or(f64::NAN)
    }

    pub fn to_rational(&self) -> BigRational {
        BigRational::new(self.0.clone(), BigInt::one() << SCALE_BITS)
    }

    pub fn abs_diff(&self, other: &FixedPoint) -> FixedPoint {
        FixedPoint((&self.0 - &other.0).abs())
    }

    /// True when `|self - other| < 2^(SCALE_BITS - tol_bits)`, i.e. the two
    /// values agree to `tol_bits` fractional bits.
    pub fn within_bits(&self, other: &FixedPoint, tol_bits: u32) -> bool {
        self.abs_diff(other).0 < (BigInt::one() << (SCALE_BITS - tol_bits))
    }

    fn mul(&self, other: &FixedPoint) -> FixedPoint {
        FixedPoint((&self.0 * &other.0) >> SCALE_BITS)
    }

    fn div_int(&self, d: i64) -> FixedPoint {
        FixedPoint(&self.0 / BigInt::from(d))
    }

    /// Exact multiplication by a small integer.
    pub fn mul_int(&self, m: i64) -> FixedPoint {
        FixedPoint(&self.0 * BigInt::from(m))
    }

    /// Decimal rendering with the given number of fractional digits.
    pub fn to_decimal_string(&self, digits: usize) -> String {
        let negative = self.0.is_negative();
        let abs = self.0.abs();
        let int_part = &abs >> SCALE_BITS;
        let mut frac = &abs - (&int_part << SCALE_BITS);
        let mut out = String::new();
        if negative {
            out.push('-');
        }
        out.push_str(&int_part.to_string());
        if digits > 0 {
            out.push('.');
            for _ in 0..digits {
                frac *= 10;
                let digit = &frac >> SCALE_BITS;
                out.push_str(&digit.to_string());
                frac -= digit << SCALE_BITS;
            }
        }
        out
    }
}

impl fmt::Display for FixedPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_decimal_string(45))
    }
}

/// `atan(1/k)` by the alternating inverse-power series, exact to within a few
/// units in the last place.
fn atan_inv(k: i64) -> FixedPoint {
    let one = BigInt::one() << SCALE_BITS;
    let k = BigInt::from(k);
    let k2 = &k * &k;
    let mut power = k.clone(); // k^(2j+1)
    let mut sum = BigInt::zero();
    let mut j = 0u32;
    loop {
        let term = &one / (&power * BigInt::from(2 * j + 1));
        if term.is_zero() {
            break;
        }
        if j % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
        power *= &k2;
        j += 1;
    }
    FixedPoint(sum)
}

/// Pi from the Machin identity `pi = 16 atan(1/5) - 4 atan(1/239)`,
/// computed once and cached.
pub fn pi() -> FixedPoint {
    static PI: std::sync::OnceLock<BigInt> = std::sync::OnceLock::new();
    let units = PI.get_or_init(|| {
        let a = atan_inv(5).mul_int(16);
        let b = atan_inv(239).mul_int(4);
        a.0 - b.0
    });
    FixedPoint(units.clone())
}

/// `cos(pi * num / den)` for a rational multiple of pi, `den > 0`.
///
/// The angle is reduced exactly in the rationals before any numeric work, so
/// arbitrarily large numerators lose no precision.
pub fn cos_pi(num: i128, den: i128) -> FixedPoint {
    assert!(den > 0, "denominator must be positive");
    // Reduce num/den mod 2 (full turns), then fold cos(2pi - x) = cos(x)
    // so the series argument lies in [0, pi].
    let two_den = 2 * den;
    let mut t = num.rem_euclid(two_den);
    if t > den {
        t = two_den - t;
    }
    let x = FixedPoint(pi().0 * BigInt::from(t) / BigInt::from(den));
    cos_series(&x)
}

/// Maclaurin cosine, valid for |x| <= pi at this precision.
fn cos_series(x: &FixedPoint) -> FixedPoint {
    let x2 = x.mul(x);
    let mut term = FixedPoint::from_int(1);
    let mut sum = term.clone();
    let mut j = 0i64;
    loop {
        term = term.mul(&x2).div_int((2 * j + 1) * (2 * j + 2));
        if term.0.is_zero() {
            break;
        }
        if j % 2 == 0 {
            sum.0 -= &term.0;
        } else {
            sum.0 += &term.0;
        }
        j += 1;
    }
    sum
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pi_matches_f64() {
        assert!((pi().to_f64() - std::f64::consts::PI).abs() < 1e-15);
    }

    #[test]
    fn exact_cosines() {
        // cos(pi/3) = 1/2, cos(pi/2) = 0, cos(pi) = -1: all to ~200 bits.
        let half = FixedPoint(BigInt::one() << (SCALE_BITS - 1));
        assert!(cos_pi(1, 3).within_bits(&half, 200));
        assert!(cos_pi(1, 2).within_bits(&FixedPoint::zero(), 200));
        assert!(cos_pi(1, 1).within_bits(&FixedPoint::from_int(-1), 200));
        assert!(cos_pi(0, 1).within_bits(&FixedPoint::from_int(1), 200));
    }

    #[test]
    fn angle_reduction_is_exact() {
        // cos(pi * (2^40 + 1) / 3) = cos(pi * t / 3) with t = (2^40 + 1) mod 6.
        let big = (1i128 << 40) + 1;
        let reduced = big.rem_euclid(6);
        assert!(cos_pi(big, 3).within_bits(&cos_pi(reduced, 3), 200));
    }

    #[test]
    fn sqrt_two_over_two() {
        let v = cos_pi(1, 4);
        let twice_sq = v.mul(&v).mul_int(2);
        assert!(twice_sq.within_bits(&FixedPoint::from_int(1), 200));
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(FixedPoint::from_int(1).to_decimal_string(3), "1.000");
        assert_eq!(FixedPoint::from_int(-2).to_decimal_string(2), "-2.00");
        let half = FixedPoint(BigInt::one() << (SCALE_BITS - 1));
        assert_eq!(half.to_decimal_string(4), "0.5000");
    }
}
