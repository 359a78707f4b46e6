//! Cantor constructions with exact rational accounting: iterates and their
//! measure, digit-level membership, the digit maps between the ternary set
//! and binary values, and the perturbation probes that distinguish on-set
//! from off-set noise.

use num_rational::Ratio;
use num_traits::Signed;

use super::DynSysError;

/// Guard on exact arithmetic: `base^(total digits)` must stay within 2^120.
const MAX_DENOMINATOR_BITS: f64 = 120.0;
/// Guard on interval materialisation.
const MAX_INTERVALS: u128 = 1 << 21;

/// A base-`b` Cantor construction keeping only the given digits, iterated to
/// a finite depth.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CantorSpec {
    base: u32,
    allowed: Vec<u8>,
    depth: u32,
}

impl CantorSpec {
    pub fn new(base: u32, allowed: impl Into<Vec<u8>>, depth: u32) -> Result<Self, DynSysError> {
        if base < 3 {
            return Err(DynSysError::BadCantorSpec(format!("base {base} < 3")));
        }
        let mut allowed: Vec<u8> = allowed.into();
        allowed.sort_unstable();
        allowed.dedup();
        if allowed.is_empty() {
            return Err(DynSysError::BadCantorSpec("no allowed digits".into()));
        }
        if allowed.len() as u32 >= base {
            return Err(DynSysError::BadCantorSpec(
                "allowed digits must be a proper subset".into(),
            ));
        }
        if let Some(&d) = allowed.iter().find(|&&d| d as u32 >= base) {
            return Err(DynSysError::BadDigit { digit: d, base });
        }
        Ok(CantorSpec { base, allowed, depth })
    }

    /// The ternary set (base 3, digits {0, 2}) at the given depth.
    pub fn ternary(depth: u32) -> Self {
        CantorSpec { base: 3, allowed: vec![0, 2], depth }
    }

    pub fn base(&self) -> u32 {
        self.base
    }

    pub fn allowed(&self) -> &[u8] {
        &self.allowed
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn is_allowed(&self, digit: u8) -> bool {
        self.allowed.binary_search(&digit).is_ok()
    }

    /// Exact measure of the depth iterate: `(|allowed|/base)^depth`.
    pub fn measure(&self) -> Ratio<i128> {
        let a = Ratio::new(self.allowed.len() as i128, self.base as i128);
        let mut m = Ratio::from_integer(1);
        for _ in 0..self.depth {
            m *= a;
        }
        m
    }

    fn digit_bits(&self, digits: u32) -> Result<(), DynSysError> {
        if digits as f64 * (self.base as f64).log2() > MAX_DENOMINATOR_BITS {
            return Err(DynSysError::DigitsTooLong);
        }
        Ok(())
    }
}

/// A materialised iterate: closed intervals plus their exact total measure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CantorIterate {
    pub intervals: Vec<(Ratio<i128>, Ratio<i128>)>,
    pub measure: Ratio<i128>,
}

/// Builds the depth-`k` iterate's interval list. Each surviving digit splits
/// an interval into a copy scaled by `1/base`, so the measure shrinks by
/// `|allowed|/base` per level.
pub fn cantor_intervals(spec: &CantorSpec) -> Result<CantorIterate, DynSysError> {
    let count = (spec.allowed.len() as u128).checked_pow(spec.depth).filter(|&c| c <= MAX_INTERVALS);
    let Some(_) = count else {
        return Err(DynSysError::TooManyIntervals(
            (spec.allowed.len() as u128).saturating_pow(spec.depth),
        ));
    };
    spec.digit_bits(spec.depth)?;

    let mut intervals = vec![(Ratio::from_integer(0), Ratio::from_integer(1))];
    let base = Ratio::from_integer(spec.base as i128);
    for _ in 0..spec.depth {
        let mut next = Vec::with_capacity(intervals.len() * spec.allowed.len());
        for (lo, hi) in &intervals {
            let width = (*hi - *lo) / base;
            for &d in &spec.allowed {
                let start = *lo + width * Ratio::from_integer(d as i128);
                next.push((start, start + width));
            }
        }
        intervals = next;
    }
    Ok(CantorIterate { intervals, measure: spec.measure() })
}

/// Membership of a rational point at the spec's depth. Points with two
/// base-`b` expansions (exact digit boundaries) belong when either expansion
/// stays inside the allowed digits, preferring the allowed one.
pub fn cantor_membership(x: Ratio<i128>, spec: &CantorSpec) -> Result<bool, DynSysError> {
    if x < Ratio::from_integer(0) || x > Ratio::from_integer(1) {
        return Err(DynSysError::PointOutOfRange(x.to_string()));
    }
    Ok(member_rec(x, spec, spec.depth))
}

fn member_rec(x: Ratio<i128>, spec: &CantorSpec, depth: u32) -> bool {
    if depth == 0 {
        return true;
    }
    let top = spec.base as u8 - 1;
    if x == Ratio::from_integer(1) {
        // 1 = 0.(b-1)(b-1)... in the only expansion below the integer one.
        return spec.is_allowed(top) && member_rec(x, spec, depth - 1);
    }
    let scaled = x * Ratio::from_integer(spec.base as i128);
    let digit = scaled.floor().to_integer() as u8;
    let rest = scaled - Ratio::from_integer(digit as i128);
    if rest == Ratio::from_integer(0) && digit > 0 {
        // Boundary: digit followed by zeros, or digit-1 followed by (b-1)s.
        let zeros_ok = spec.is_allowed(digit) && (depth == 1 || spec.is_allowed(0));
        let nines_ok = spec.is_allowed(digit - 1) && (depth == 1 || spec.is_allowed(top));
        return zeros_ok || nines_ok;
    }
    spec.is_allowed(digit) && member_rec(rest, spec, depth - 1)
}

/// A digit sequence `0.d0 d1 d2 ...`, finite or eventually periodic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DigitStream {
    lead: Vec<u8>,
    cycle: Vec<u8>,
}

impl DigitStream {
    pub fn finite(digits: impl Into<Vec<u8>>) -> Self {
        DigitStream { lead: digits.into(), cycle: Vec::new() }
    }

    pub fn repeating(lead: impl Into<Vec<u8>>, cycle: impl Into<Vec<u8>>) -> Self {
        DigitStream { lead: lead.into(), cycle: cycle.into() }
    }

    pub fn lead(&self) -> &[u8] {
        &self.lead
    }

    pub fn cycle(&self) -> &[u8] {
        &self.cycle
    }

    /// First `count` digits, the cycle unrolled (zeros after a finite lead).
    pub fn digits_to(&self, count: usize) -> Vec<u8> {
        let mut out = Vec::with_capacity(count);
        for i in 0..count {
            if i < self.lead.len() {
                out.push(self.lead[i]);
            } else if self.cycle.is_empty() {
                out.push(0);
            } else {
                out.push(self.cycle[(i - self.lead.len()) % self.cycle.len()]);
            }
        }
        out
    }

    fn check_digits(&self, base: u32) -> Result<(), DynSysError> {
        for &d in self.lead.iter().chain(self.cycle.iter()) {
            if d as u32 >= base {
                return Err(DynSysError::BadDigit { digit: d, base });
            }
        }
        Ok(())
    }

    /// Exact value of the expansion in the given base.
    pub fn value(&self, base: u32) -> Result<Ratio<i128>, DynSysError> {
        self.check_digits(base)?;
        let digits = (self.lead.len() + self.cycle.len()) as f64;
        if digits * (base as f64).log2() > MAX_DENOMINATOR_BITS {
            return Err(DynSysError::DigitsTooLong);
        }
        let b = base as i128;
        let mut lead_num: i128 = 0;
        let mut lead_den: i128 = 1;
        for &d in &self.lead {
            lead_num = lead_num * b + d as i128;
            lead_den *= b;
        }
        let mut value = Ratio::new(lead_num, lead_den);
        if !self.cycle.is_empty() {
            let mut cyc_num: i128 = 0;
            let mut cyc_den: i128 = 1;
            for &d in &self.cycle {
                cyc_num = cyc_num * b + d as i128;
                cyc_den *= b;
            }
            value += Ratio::new(cyc_num, lead_den * (cyc_den - 1));
        }
        Ok(value)
    }
}

/// Maps a ternary-set digit stream (digits in {0, 2}) to the value obtained
/// by rewriting 2 -> 1 and reading the digits as binary. Surjective onto
/// finite-precision binary values; the digit-for-digit witness that the set
/// has as many points as the interval.
pub fn ternary_to_binary_map(x: &DigitStream) -> Result<Ratio<i128>, DynSysError> {
    let rewrite = |d: &u8| match d {
        0 => Ok(0u8),
        2 => Ok(1u8),
        _ => Err(DynSysError::BadDigit { digit: *d, base: 3 }),
    };
    let lead = x.lead.iter().map(rewrite).collect::<Result<Vec<_>, _>>()?;
    let cycle = x.cycle.iter().map(rewrite).collect::<Result<Vec<_>, _>>()?;
    DigitStream { lead, cycle }.value(2)
}

/// Maps a binary digit stream onto the ternary set by `e_n = 2 d_n`:
/// injective and continuous in the digit metric.
pub fn dyadic_integer_map(bits: &DigitStream) -> Result<DigitStream, DynSysError> {
    let rewrite = |d: &u8| match d {
        0 => Ok(0u8),
        1 => Ok(2u8),
        _ => Err(DynSysError::BadDigit { digit: *d, base: 2 }),
    };
    Ok(DigitStream {
        lead: bits.lead.iter().map(rewrite).collect::<Result<Vec<_>, _>>()?,
        cycle: bits.cycle.iter().map(rewrite).collect::<Result<Vec<_>, _>>()?,
    })
}

/// A constructed neighbor: the witness that no member point is isolated.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Neighbor {
    pub digits: Vec<u8>,
    pub value: Ratio<i128>,
    pub distance: Ratio<i128>,
}

/// Returns a distinct member within `epsilon` of the member `x` (given as
/// its digit string), built by altering one sufficiently deep digit to
/// another allowed digit.
///
/// The depth needed grows like `log_base((base-1)/epsilon)`; when the spec's
/// depth cannot reach it the error names the depth that would suffice.
pub fn perfect_set_neighbor(
    x: &[u8],
    epsilon: Ratio<i128>,
    spec: &CantorSpec,
) -> Result<Neighbor, DynSysError> {
    if epsilon <= Ratio::from_integer(0) {
        return Err(DynSysError::BadEpsilon);
    }
    if spec.allowed.len() < 2 {
        return Err(DynSysError::NeedTwoDigits);
    }
    for &d in x {
        if !spec.is_allowed(d) {
            return Err(DynSysError::BadDigit { digit: d, base: spec.base });
        }
    }

    // Smallest position p (1-indexed) where any single-digit change stays
    // under epsilon: (base-1)/base^p < epsilon.
    let b = spec.base as i128;
    let top = Ratio::from_integer(b - 1);
    let mut p: u32 = 1;
    let mut power = Ratio::new(1, b);
    while top * power >= epsilon {
        p += 1;
        if p > spec.depth {
            return Err(DynSysError::DepthTooShallow { required: p, available: spec.depth });
        }
        power /= Ratio::from_integer(b);
    }
    if p > spec.depth {
        return Err(DynSysError::DepthTooShallow { required: p, available: spec.depth });
    }

    let fill = if spec.is_allowed(0) { 0 } else { spec.allowed[0] };
    let mut digits: Vec<u8> = x.to_vec();
    while digits.len() < p as usize {
        digits.push(fill);
    }
    let idx = p as usize - 1;
    let current = digits[idx];
    // Nearest allowed digit different from the current one.
    let replacement = spec
        .allowed
        .iter()
        .copied()
        .filter(|&d| d != current)
        .min_by_key(|&d| (d as i32 - current as i32).unsigned_abs())
        .expect("at least two allowed digits");
    digits[idx] = replacement;

    let x_value = DigitStream::finite(x.to_vec()).value(spec.base)?;
    let value = DigitStream::finite(digits.clone()).value(spec.base)?;
    let distance = (value - x_value).abs();
    // Exact post-condition check; can only fail when 0 is disallowed and the
    // padding pushed the value away from x.
    if distance >= epsilon || distance == Ratio::from_integer(0) {
        return Err(DynSysError::EpsilonUnreachable);
    }
    Ok(Neighbor { digits, value, distance })
}

/// On-set perturbation: changes the digit at `digit_index` (0-based) to the
/// closest different allowed digit. Membership at the spec depth is
/// preserved by construction. The string is padded with the smallest
/// allowed digit when the index lies beyond it.
pub fn perturb_on_set(
    x: &[u8],
    digit_index: usize,
    spec: &CantorSpec,
) -> Result<Vec<u8>, DynSysError> {
    if digit_index as u32 >= spec.depth {
        return Err(DynSysError::DigitIndexOutOfRange { index: digit_index, depth: spec.depth });
    }
    for &d in x {
        if !spec.is_allowed(d) {
            return Err(DynSysError::BadDigit { digit: d, base: spec.base });
        }
    }
    let fill = if spec.is_allowed(0) { 0 } else { spec.allowed[0] };
    let mut digits: Vec<u8> = x.to_vec();
    while digits.len() <= digit_index {
        digits.push(fill);
    }
    let current = digits[digit_index];
    let replacement = spec
        .allowed
        .iter()
        .copied()
        .filter(|&d| d != current)
        .min_by_key(|&d| (d as i32 - current as i32).unsigned_abs())
        .ok_or(DynSysError::NeedTwoDigits)?;
    digits[digit_index] = replacement;
    Ok(digits)
}

/// All single-digit on-set perturbations at the spec depth: exactly
/// `(|allowed| - 1) * depth` distinct member strings.
pub fn on_set_perturbations(x: &[u8], spec: &CantorSpec) -> Result<Vec<Vec<u8>>, DynSysError> {
    let fill = if spec.is_allowed(0) { 0 } else { *spec.allowed.first().unwrap() };
    let mut padded: Vec<u8> = x.to_vec();
    while (padded.len() as u32) < spec.depth {
        padded.push(fill);
    }
    let mut out = Vec::new();
    for idx in 0..spec.depth as usize {
        for &d in &spec.allowed {
            if d != padded[idx] {
                let mut v = padded.clone();
                v[idx] = d;
                out.push(v);
            }
        }
    }
    Ok(out)
}

/// Result of an off-set perturbation probe.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OffSetProbe {
    pub perturbed: Ratio<i128>,
    pub member_at_depth: bool,
}

/// Off-set perturbation: adds an offset that is generic with respect to the
/// interval's uniform measure and reports membership at the spec depth. The
/// limit set has measure zero, so a random offset lands off it with
/// probability one; specific rational offsets can of course land back on.
pub fn perturb_off_set(
    x: Ratio<i128>,
    offset: Ratio<i128>,
    spec: &CantorSpec,
) -> Result<OffSetProbe, DynSysError> {
    let perturbed = x + offset;
    let member_at_depth = if perturbed < Ratio::from_integer(0) || perturbed > Ratio::from_integer(1)
    {
        false
    } else {
        cantor_membership(perturbed, spec)?
    };
    Ok(OffSetProbe { perturbed, member_at_depth })
}
