//! Length-`2^N` bit strings as hidden-variable sample spaces, the
//! quaternionic generator operators, and the two-parameter
//! negation/permutation family acting on them.
//!
//! The generators act recursively on half-strings `(u, v)`:
//!
//! - negation flips every bit,
//! - `i(u, v) = (v, !u)`,
//! - `j(u, v) = (i(v), i(u))` with the inner `i` recursing into halves,
//! - `k = i . j` (apply `j`, then `i`).
//!
//! These satisfy the quaternion relations `i^2 = j^2 = k^2 = negation`,
//! `i.j = k` and `j.i = negation.k` on every string whose length is a power
//! of two at least 4.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::numkit::{fits_budget, BitBudget, Dyadic};

/// Largest budget for which strings are materialised (`2^26` bits = 64 MiB
/// as one byte per bit).
pub const MAX_MATERIAL_BITS: u32 = 26;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BitStringError {
    #[error("bit string length {0} is not a power of two at least 4")]
    BadLength(usize),
    #[error("bit string of 2^{0} bits exceeds the materialisation limit 2^{max}", max = MAX_MATERIAL_BITS)]
    TooLarge(u32),
    #[error("operator budget N={op} does not match string budget N={string}")]
    BudgetMismatch { op: u32, string: u32 },
    #[error("alpha = {0} out of range: need a budget-representable dyadic in [0, 2] with alpha*2^(N-1) integral")]
    BadAlpha(Dyadic),
    #[error("beta = {0} out of range: need a dyadic in [0, 4) with at most N fractional bits")]
    BadBeta(Dyadic),
    #[error("generator word must be non-empty")]
    EmptyWord,
    #[error("invalid hex digit {0:?}")]
    BadHexDigit(char),
    #[error("hex string of {0} digits does not describe a 2^N-bit string with N >= 2")]
    BadHexLength(usize),
}

/// A bit string of length `2^N` tied to its budget.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BitString {
    bits: Vec<bool>,
    budget: BitBudget,
}

impl BitString {
    pub fn zeros(budget: BitBudget) -> Result<Self, BitStringError> {
        if budget.bits() > MAX_MATERIAL_BITS {
            return Err(BitStringError::TooLarge(budget.bits()));
        }
        Ok(BitString { bits: vec![false; budget.string_len() as usize], budget })
    }

    pub fn ones(budget: BitBudget) -> Result<Self, BitStringError> {
        let mut s = Self::zeros(budget)?;
        s.bits.iter_mut().for_each(|b| *b = true);
        Ok(s)
    }

    /// Wraps an explicit bit sequence; the length must equal `2^N` for the
    /// given budget.
    pub fn from_bits(bits: Vec<bool>, budget: BitBudget) -> Result<Self, BitStringError> {
        if bits.len() as u64 != budget.string_len() {
            return Err(BitStringError::BadLength(bits.len()));
        }
        Ok(BitString { bits, budget })
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        false // length is always 2^N >= 4
    }

    pub fn budget(&self) -> BitBudget {
        self.budget
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn count_zeros(&self) -> u64 {
        self.bits.iter().filter(|&&b| !b).count() as u64
    }

    pub fn count_ones(&self) -> u64 {
        self.len() as u64 - self.count_zeros()
    }

    /// Hexadecimal rendering, most significant position first; four bits per
    /// digit, so the length `2^N` (N >= 2) maps to `2^(N-2)` digits.
    pub fn to_hex(&self) -> String {
        self.bits
            .chunks(4)
            .map(|c| {
                let v = (c[0] as u8) << 3 | (c[1] as u8) << 2 | (c[2] as u8) << 1 | c[3] as u8;
                char::from_digit(v as u32, 16).unwrap()
            })
            .collect()
    }

    /// Parses the [`to_hex`](Self::to_hex) rendering; the digit count fixes
    /// the budget.
    pub fn from_hex(hex: &str) -> Result<Self, BitStringError> {
        let digits = hex.trim();
        let len = digits.len();
        if len == 0 || !len.is_power_of_two() {
            return Err(BitStringError::BadHexLength(len));
        }
        let n = len.trailing_zeros() + 2;
        let budget = BitBudget::new(n).map_err(|_| BitStringError::BadHexLength(len))?;
        let mut bits = Vec::with_capacity(len * 4);
        for c in digits.chars() {
            let v = c.to_digit(16).ok_or(BitStringError::BadHexDigit(c))? as u8;
            for shift in (0..4).rev() {
                bits.push(v >> shift & 1 == 1);
            }
        }
        Self::from_bits(bits, budget)
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

/// Exact frequency of the symbol `0`: zero count over `2^N`.
pub fn zero_frequency(s: &BitString) -> Dyadic {
    Dyadic::new(s.count_zeros() as i128, s.budget.bits())
}

/// One generator of the operator algebra.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Generator {
    Identity,
    Negation,
    I,
    J,
    K,
}

/// A non-empty word over the generators, applied left to right.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorWord(Vec<Generator>);

impl GeneratorWord {
    pub fn new(word: Vec<Generator>) -> Result<Self, BitStringError> {
        if word.is_empty() {
            return Err(BitStringError::EmptyWord);
        }
        Ok(GeneratorWord(word))
    }

    pub fn generators(&self) -> &[Generator] {
        &self.0
    }
}

fn negate_bits(bits: &mut [bool]) {
    bits.iter_mut().for_each(|b| *b = !*b);
}

/// `i(u, v) = (v, !u)`, defined down to length-2 strings.
fn apply_i(bits: &[bool]) -> Vec<bool> {
    debug_assert!(bits.len() >= 2 && bits.len().is_power_of_two());
    let half = bits.len() / 2;
    let mut out = Vec::with_capacity(bits.len());
    out.extend_from_slice(&bits[half..]);
    out.extend(bits[..half].iter().map(|&b| !b));
    out
}

/// `j(u, v) = (i(v), i(u))`, needing length at least 4.
fn apply_j(bits: &[bool]) -> Vec<bool> {
    debug_assert!(bits.len() >= 4 && bits.len().is_power_of_two());
    let half = bits.len() / 2;
    let mut out = apply_i(&bits[half..]);
    out.extend(apply_i(&bits[..half]));
    out
}

fn apply_one(g: Generator, bits: Vec<bool>) -> Vec<bool> {
    match g {
        Generator::Identity => bits,
        Generator::Negation => {
            let mut b = bits;
            negate_bits(&mut b);
            b
        }
        Generator::I => apply_i(&bits),
        Generator::J => apply_j(&bits),
        Generator::K => apply_i(&apply_j(&bits)),
    }
}

/// Applies a generator word left to right: the first letter acts first.
pub fn apply_generator(word: &GeneratorWord, s: &BitString) -> BitString {
    let mut bits = s.bits.clone();
    for &g in word.generators() {
        bits = apply_one(g, bits);
    }
    BitString { bits, budget: s.budget }
}

/// Single-generator convenience used pervasively in tests.
pub fn apply_single(g: Generator, s: &BitString) -> BitString {
    BitString { bits: apply_one(g, s.bits.clone()), budget: s.budget }
}

/// The two-parameter negation/permutation operator.
///
/// Acting on the all-zeros string it leaves the symbol `0` at frequency
/// `|1 - alpha/2|` exactly; `beta` permutes without changing frequencies.
/// Construction: negate the `alpha * 2^(N-1)` positions that come first in
/// bit-reversed index order (a van der Corput spread), then rotate left by
/// `floor(beta * 2^(N-2))` positions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct EOperator {
    alpha: Dyadic,
    beta: Dyadic,
    budget: BitBudget,
}

impl EOperator {
    pub fn new(alpha: Dyadic, beta: Dyadic, budget: BitBudget) -> Result<Self, BitStringError> {
        let n = budget.bits();
        // alpha in [0, 2], within budget, and alpha * 2^(N-1) integral so the
        // zero frequency below is exact.
        if alpha < Dyadic::ZERO
            || alpha > Dyadic::TWO
            || !fits_budget(alpha, budget)
            || alpha.scaled_int(n - 1).is_none()
        {
            return Err(BitStringError::BadAlpha(alpha));
        }
        // beta in [0, 4) with at most N fractional bits. The generic budget
        // check bounds |x| by 2, which would wrongly reject phases in [2, 4);
        // the range check here is the operator's own.
        if beta < Dyadic::ZERO || beta >= Dyadic::from_int(4) || beta.exponent() > n {
            return Err(BitStringError::BadBeta(beta));
        }
        Ok(EOperator { alpha, beta, budget })
    }

    pub fn alpha(self) -> Dyadic {
        self.alpha
    }

    pub fn beta(self) -> Dyadic {
        self.beta
    }

    pub fn budget(self) -> BitBudget {
        self.budget
    }

    /// Number of positions negated: `alpha * 2^(N-1)`, exact by invariant.
    pub fn negation_count(self) -> u64 {
        self.alpha.scaled_int(self.budget.bits() - 1).unwrap() as u64
    }

    /// Left-rotation amount: `floor(beta * 2^(N-2))`, always below `2^N`.
    pub fn rotation(self) -> u64 {
        let n = self.budget.bits();
        // beta * 2^N is integral (at most N fractional bits); divide by 4.
        let scaled = self.beta.scaled_int(n).unwrap() as u64;
        scaled >> 2
    }
}

fn bit_reverse(index: u64, n: u32) -> u64 {
    index.reverse_bits() >> (64 - n)
}

/// Applies the operator: negate the first `alpha*2^(N-1)` positions in
/// bit-reversed order, then rotate left by `floor(beta*2^(N-2))`.
pub fn apply_e(e: &EOperator, s: &BitString) -> Result<BitString, BitStringError> {
    if e.budget != s.budget {
        return Err(BitStringError::BudgetMismatch {
            op: e.budget.bits(),
            string: s.budget.bits(),
        });
    }
    let n = e.budget.bits();
    let cutoff = e.negation_count();
    let mut bits = s.bits.clone();
    for (p, bit) in bits.iter_mut().enumerate() {
        if bit_reverse(p as u64, n) < cutoff {
            *bit = !*bit;
        }
    }
    bits.rotate_left(e.rotation() as usize);
    Ok(BitString { bits, budget: s.budget })
}
