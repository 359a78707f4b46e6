//! Rational multiples of pi and the classification of their cosines.
//!
//! For reduced `phi/pi = m/n` the cosine is rational exactly when the reduced
//! denominator (after discarding full turns) is 1, 2 or 3, and then takes one
//! of the values 0, +-1/2, +-1. The classifier implements that finite
//! characterisation; a high-precision numeric probe exists only in test code.

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Ratio;
use serde::Serialize;

use super::highprec::{cos_pi, FixedPoint};
use super::NumError;

/// An angle recorded as the exact fraction `phi / pi = num / den`, reduced,
/// with a positive denominator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RationalAngle {
    num: i128,
    den: i128,
}

impl RationalAngle {
    pub const ZERO: RationalAngle = RationalAngle { num: 0, den: 1 };

    pub fn new(num: i128, den: i128) -> Result<Self, NumError> {
        if den == 0 {
            return Err(NumError::ZeroDenominator);
        }
        let sign = if den < 0 { -1 } else { 1 };
        let g = num.gcd(&den);
        if g == 0 {
            return Ok(RationalAngle::ZERO);
        }
        Ok(RationalAngle { num: sign * num / g, den: sign * den / g })
    }

    pub fn num(self) -> i128 {
        self.num
    }

    pub fn den(self) -> i128 {
        self.den
    }

    /// The same direction with `phi/pi` brought into `[0, 2)`.
    pub fn reduced_mod_two(self) -> Self {
        RationalAngle { num: self.num.rem_euclid(2 * self.den), den: self.den }
    }

    pub fn to_ratio(self) -> Ratio<i128> {
        Ratio::new(self.num, self.den)
    }

    /// Angle in radians, for display and floating-point consumers.
    pub fn radians(self) -> f64 {
        std::f64::consts::PI * self.num as f64 / self.den as f64
    }

    /// `cos(phi)` at 240 fractional bits.
    pub fn cos_highprec(self) -> FixedPoint {
        cos_pi(self.num, self.den)
    }
}

impl fmt::Display for RationalAngle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl Serialize for RationalAngle {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl FromStr for RationalAngle {
    type Err = String;

    /// Parses `p/q` or a bare integer, as a fraction of pi.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (num, den) = match s.split_once('/') {
            None => (s.trim().parse().map_err(|e| format!("bad integer: {e}"))?, 1),
            Some((p, q)) => (
                p.trim().parse().map_err(|e| format!("bad numerator: {e}"))?,
                q.trim().parse().map_err(|e| format!("bad denominator: {e}"))?,
            ),
        };
        RationalAngle::new(num, den).map_err(|e| e.to_string())
    }
}

/// Outcome of the rational-cosine classification.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NivenClass {
    /// `cos(phi)` is rational; carries the exact value (0, +-1/2 or +-1).
    RationalCos(Ratio<i128>),
    /// `cos(phi)` is irrational.
    IrrationalCos,
}

/// Classifies `cos(phi)` for `phi/pi = r` by the denominator criterion.
pub fn niven_classify(r: RationalAngle) -> NivenClass {
    let r = r.reduced_mod_two();
    let m = r.num;
    match r.den {
        1 => NivenClass::RationalCos(Ratio::from_integer(if m % 2 == 0 { 1 } else { -1 })),
        2 => NivenClass::RationalCos(Ratio::from_integer(0)),
        3 => {
            // m coprime to 3; cos(m pi / 3) = 1/2 for m = +-1 mod 6, -1/2 otherwise.
            let sign = if m % 6 == 1 || m % 6 == 5 { 1 } else { -1 };
            NivenClass::RationalCos(Ratio::new(sign, 2))
        }
        _ => NivenClass::IrrationalCos,
    }
}

/// Tolerance (in fractional bits) used to cluster doubling-sequence values.
pub const DOUBLING_TOLERANCE_BITS: u32 = 40;

/// A doubling sequence `2 cos(2^k phi)` for `k = 0..=k_max`, with the count
/// of distinct values at the clustering tolerance.
#[derive(Debug, Clone)]
pub struct DoublingSequence {
    pub values: Vec<FixedPoint>,
    pub distinct: usize,
}

/// Evaluates `2 cos(2^k phi)` for `k = 0..=k_max` at 240 fractional bits.
///
/// The argument `2^k phi` is reduced exactly modulo full turns before each
/// evaluation, so no precision is lost at large `k`. Values are clustered at
/// tolerance `2^-40`, far below the minimum gap between genuinely distinct
/// values for the denominators this crate exercises.
pub fn doubling_sequence(r: RationalAngle, k_max: u32) -> DoublingSequence {
    let n = r.den;
    let two_n = 2 * n;
    let mut t = r.num.rem_euclid(two_n);
    let mut values = Vec::with_capacity(k_max as usize + 1);
    for _ in 0..=k_max {
        values.push(cos_pi(t, n).mul_int(2));
        t = (2 * t).rem_euclid(two_n);
    }
    let distinct = count_clusters(&values);
    DoublingSequence { values, distinct }
}

fn count_clusters(values: &[FixedPoint]) -> usize {
    let mut sorted: Vec<&FixedPoint> = values.iter().collect();
    sorted.sort();
    let mut count = 0;
    let mut last: Option<&FixedPoint> = None;
    for v in sorted {
        match last {
            Some(prev) if v.within_bits(prev, DOUBLING_TOLERANCE_BITS) => {}
            _ => {
                count += 1;
                last = Some(v);
            }
        }
    }
    count
}
