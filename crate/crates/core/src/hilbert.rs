//! Correspondence between negation/permutation operators and single-qubit
//! state descriptors.
//!
//! A state is recorded as `cos^2(theta/2)` (exactly dyadic by construction)
//! and the phase fraction `phi/pi`; the polar angle itself is never stored,
//! since it is generically irrational while its squared half-cosine is not.
//! States whose parameters no budget of the requested size can carry are not
//! errors: they come back as an [`Undefinable`] verdict, the model's way of
//! saying the configuration corresponds to nothing physically real.

use num_rational::Ratio;
use serde::Serialize;
use thiserror::Error;

use crate::bitstring::{apply_e, zero_frequency, BitString, BitStringError, EOperator};
use crate::numkit::{fits_budget, BitBudget, Dyadic, RationalAngle};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HilbertError {
    #[error("cos^2(theta/2) = {0} outside [0, 1]")]
    ProbabilityOutOfRange(Ratio<i128>),
    #[error("state descriptor invariant violated: {0}")]
    BadDescriptor(String),
    #[error(transparent)]
    BitString(#[from] BitStringError),
}

/// Why a requested state has no representation at the given budget.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum UndefinableReason {
    /// The probability is a rational with a non-power-of-two denominator, so
    /// no finite bit budget can ever carry it.
    NonDyadicProbability,
    /// The probability is dyadic but needs more fractional bits than N-1.
    ProbabilityOverBudget,
    /// The phase is not a dyadic fraction of pi.
    NonDyadicPhase,
    /// The phase is dyadic but needs more fractional bits than the budget.
    PhaseOverBudget,
}

impl std::fmt::Display for UndefinableReason {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            UndefinableReason::NonDyadicProbability => "non-dyadic probability",
            UndefinableReason::ProbabilityOverBudget => "probability over budget",
            UndefinableReason::NonDyadicPhase => "non-dyadic phase",
            UndefinableReason::PhaseOverBudget => "phase over budget",
        };
        f.write_str(s)
    }
}

/// Outcome of mapping a requested object onto the invariant-set sample
/// spaces: either it exists, or the request was physically unreal. This is a
/// value, not an error; callers branch on it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Definability<T> {
    Defined(T),
    Undefinable(UndefinableReason),
}

impl<T> Definability<T> {
    pub fn is_defined(&self) -> bool {
        matches!(self, Definability::Defined(_))
    }

    pub fn defined(self) -> Option<T> {
        match self {
            Definability::Defined(t) => Some(t),
            Definability::Undefinable(_) => None,
        }
    }
}

/// A single-qubit descriptor `(cos^2(theta/2), phi/pi)` at a bit budget.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct QubitState {
    cos_half_sq: Dyadic,
    #[serde(rename = "phase_over_pi")]
    phase: RationalAngle,
    #[serde(rename = "N")]
    budget: BitBudget,
}

impl QubitState {
    pub fn new(
        cos_half_sq: Dyadic,
        phase: RationalAngle,
        budget: BitBudget,
    ) -> Result<Self, HilbertError> {
        if cos_half_sq < Dyadic::ZERO || cos_half_sq > Dyadic::ONE {
            return Err(HilbertError::ProbabilityOutOfRange(cos_half_sq.to_ratio()));
        }
        if !fits_budget(cos_half_sq, budget) {
            return Err(HilbertError::BadDescriptor(format!(
                "cos^2(theta/2) = {cos_half_sq} does not fit budget N={budget}"
            )));
        }
        let phase = phase.reduced_mod_two();
        if phase.den().count_ones() != 1 {
            return Err(HilbertError::BadDescriptor(format!(
                "phase phi/pi = {phase} is not dyadic"
            )));
        }
        // phase = beta/2 with beta within budget: denominator at most 2^(N+1).
        if phase.den().trailing_zeros() > budget.bits() + 1 {
            return Err(HilbertError::BadDescriptor(format!(
                "phase phi/pi = {phase} needs more than N={budget} bits"
            )));
        }
        Ok(QubitState { cos_half_sq, phase, budget })
    }

    /// `cos^2(theta/2)`, the exact |0> outcome probability.
    pub fn cos_half_sq(self) -> Dyadic {
        self.cos_half_sq
    }

    /// Phase as the exact fraction `phi/pi` in [0, 2).
    pub fn phase(self) -> RationalAngle {
        self.phase
    }

    pub fn budget(self) -> BitBudget {
        self.budget
    }

    /// `cos(theta) = 2 cos^2(theta/2) - 1`, still exact.
    pub fn cos_theta(self) -> Dyadic {
        self.cos_half_sq.mul_pow2(1) - Dyadic::ONE
    }
}

/// Reads the state descriptor off an operator: `cos^2(theta/2) = |1 - alpha/2|`
/// and `phi = pi beta / 2`, both exact.
pub fn e_to_state(e: &EOperator) -> QubitState {
    let cos_half_sq = (Dyadic::ONE - e.alpha().mul_pow2(-1)).abs();
    let beta = e.beta();
    let phase = RationalAngle::new(beta.mantissa(), 1i128 << (beta.exponent() + 1))
        .expect("power-of-two denominator");
    QubitState::new(cos_half_sq, phase, e.budget()).expect("operator parameters are in range")
}

/// Inverse of [`e_to_state`]: builds the operator with
/// `alpha = 2(1 - cos^2(theta/2))` and `beta = 2 phi/pi` when both fit the
/// budget, and an [`Undefinable`](Definability::Undefinable) verdict when
/// they do not. Inputs outside [0, 1] are structural errors, distinct from
/// the verdict.
pub fn state_to_e(
    cos_half_sq: Ratio<i128>,
    phase: RationalAngle,
    budget: BitBudget,
) -> Result<Definability<EOperator>, HilbertError> {
    if cos_half_sq < Ratio::from_integer(0) || cos_half_sq > Ratio::from_integer(1) {
        return Err(HilbertError::ProbabilityOutOfRange(cos_half_sq));
    }
    let Some(c) = Dyadic::try_from_ratio(cos_half_sq) else {
        return Ok(Definability::Undefinable(UndefinableReason::NonDyadicProbability));
    };
    let alpha = (Dyadic::ONE - c).mul_pow2(1);
    if !fits_budget(alpha, budget) || alpha.scaled_int(budget.bits() - 1).is_none() {
        return Ok(Definability::Undefinable(UndefinableReason::ProbabilityOverBudget));
    }
    let phase = phase.reduced_mod_two();
    if phase.den().count_ones() != 1 {
        return Ok(Definability::Undefinable(UndefinableReason::NonDyadicPhase));
    }
    // beta = 2 * phase: with phase = p / 2^d this is p / 2^(d-1).
    let d = phase.den().trailing_zeros();
    let beta = if d == 0 {
        Dyadic::from_int(2 * phase.num())
    } else {
        Dyadic::new(phase.num(), d - 1)
    };
    if beta.exponent() > budget.bits() {
        return Ok(Definability::Undefinable(UndefinableReason::PhaseOverBudget));
    }
    let op = EOperator::new(alpha, beta, budget).map_err(HilbertError::BitString)?;
    Ok(Definability::Defined(op))
}

/// Measurement probability of outcome `0`, read off the sample space itself:
/// the zero frequency of the operator applied to the all-zeros string. Equal,
/// exactly, to `cos^2(theta/2)` of [`e_to_state`].
pub fn born_probability(e: &EOperator) -> Result<Dyadic, HilbertError> {
    let zeros = BitString::zeros(e.budget())?;
    Ok(zero_frequency(&apply_e(e, &zeros)?))
}
