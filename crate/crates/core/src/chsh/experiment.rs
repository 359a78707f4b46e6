//! Sub-experiments on disjoint hidden-variable ensembles, exact correlation
//! and S-statistic computation, and the measurement-independence metric.
//!
//! Hidden variables are positions in a product bit string (symbol `0` means
//! the two outcomes agree); each sub-experiment owns a seed-labelled
//! ensemble, and distinct seeds realise the protocol's pairwise-disjoint
//! sample spaces.

use std::collections::BTreeMap;

use num_rational::Ratio;
use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bitstring::{apply_e, zero_frequency, BitString, EOperator};
use crate::hilbert::{Definability, UndefinableReason};
use crate::numkit::{fits_budget, BitBudget, Dyadic, RationalAngle};

use super::config::{
    joint_definability, ChshConfig, DefinabilityAnalysis, PairVerdict, SettingPair,
};
use super::{serialize_ratio, ChshError};

/// One sub-experiment: a setting pair, its ensemble label, and the product
/// string whose positions are the hidden variables.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SubExperiment {
    pair: SettingPair,
    /// Ensemble label; the construction seed.
    ensemble: u64,
    cos_theta: Dyadic,
    #[serde(skip)]
    product: BitString,
}

impl SubExperiment {
    pub fn pair(&self) -> SettingPair {
        self.pair
    }

    pub fn ensemble(&self) -> u64 {
        self.ensemble
    }

    pub fn cos_theta(&self) -> Dyadic {
        self.cos_theta
    }

    pub fn product(&self) -> &BitString {
        &self.product
    }

    pub fn budget(&self) -> BitBudget {
        self.product.budget()
    }

    /// The empirical hidden-variable distribution: uniform over the
    /// positions of this ensemble's product string. Materialises `2^N`
    /// entries; meant for moderate budgets.
    pub fn lambda_distribution(&self) -> LambdaDistribution {
        LambdaDistribution::uniform(
            (0..self.product.len() as u64).map(|p| LambdaId { ensemble: self.ensemble, position: p }),
        )
    }
}

/// Builds the product string for a setting pair at angle cosine `cos_theta`.
///
/// Zero frequency is exactly `(1 + cos_theta)/2 = cos^2(theta/2)`; the seed
/// picks the permutation phase, so distinct seeds give disjoint ensembles
/// with identical statistics. A budget the cosine does not fit is an
/// `Undefinable` verdict, not an error.
pub fn build_subexperiment(
    pair: SettingPair,
    cos_theta: Dyadic,
    budget: BitBudget,
    seed: u64,
) -> Result<Definability<SubExperiment>, ChshError> {
    if cos_theta.abs() > Dyadic::ONE {
        return Err(ChshError::CosineOutOfRange(cos_theta));
    }
    if !fits_budget(cos_theta, budget) {
        return Ok(Definability::Undefinable(UndefinableReason::ProbabilityOverBudget));
    }
    // Zero frequency (1 + cos)/2 means alpha = 1 - cos; exactness of the
    // construction needs alpha * 2^(N-1) integral.
    let alpha = Dyadic::ONE - cos_theta;
    if alpha.scaled_int(budget.bits() - 1).is_none() {
        return Ok(Definability::Undefinable(UndefinableReason::ProbabilityOverBudget));
    }
    let n = budget.bits();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rotation: u64 = rng.gen_range(0..budget.string_len());
    // beta = 4 * rotation / 2^N, a budget-valid dyadic in [0, 4).
    let beta = Dyadic::new(rotation as i128, n - 2);
    let op = EOperator::new(alpha, beta, budget)?;
    let product = apply_e(&op, &BitString::zeros(budget)?)?;
    Ok(Definability::Defined(SubExperiment { pair, ensemble: seed, cos_theta, product }))
}

/// Exact correlation of a sub-experiment:
/// `(zeros - ones)/2^N = 2 * zero_frequency - 1 = cos_theta`.
pub fn corr(sub: &SubExperiment) -> Dyadic {
    zero_frequency(sub.product()).mul_pow2(1) - Dyadic::ONE
}

/// The four correlations keyed by setting pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CorrelationSet {
    pub a1b1: Dyadic,
    pub a1b2: Dyadic,
    pub a2b1: Dyadic,
    pub a2b2: Dyadic,
}

/// Full experiment report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChshReport {
    #[serde(rename = "N")]
    pub n_bits: u32,
    pub seeds: [u64; 4],
    pub correlations: CorrelationSet,
    #[serde(rename = "S")]
    pub s: Dyadic,
    /// Floating-point view of S for human readers.
    pub s_value: f64,
    /// S beyond 2 is impossible for any single-ensemble local model and is
    /// admissible here only because the four ensembles are disjoint.
    pub exceeds_classical_bound: bool,
    /// Verdicts of the four sub-experiments (the experimental protocol; all
    /// definable whenever the report exists).
    pub definability: DefinabilityAnalysis,
    /// Maximum total-variation distance between the hidden-variable
    /// distributions conditioned on the setting pair.
    #[serde(serialize_with = "serialize_ratio")]
    pub mi_violation: Ratio<i128>,
    /// Joint (common-ensemble) analysis, present when the report was built
    /// from a full configuration.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub joint_analysis: Option<DefinabilityAnalysis>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub snaps: Vec<super::config::SnapRecord>,
}

impl ChshReport {
    /// Recomputes `S = |C11 - C12| + |C21 + C22|` from the stored
    /// correlations; always equal to the stored value.
    pub fn recompute_s(&self) -> Dyadic {
        let c = &self.correlations;
        (c.a1b1 - c.a1b2).abs() + (c.a2b1 + c.a2b2).abs()
    }
}

/// Computes the CHSH statistic from four sub-experiments on pairwise
/// distinct ensembles, ordered `(a1b1, a1b2, a2b1, a2b2)`.
pub fn chsh_statistic(
    s11: &SubExperiment,
    s12: &SubExperiment,
    s21: &SubExperiment,
    s22: &SubExperiment,
) -> Result<ChshReport, ChshError> {
    let subs = [s11, s12, s21, s22];
    for (sub, expected) in subs.iter().zip(SettingPair::ALL) {
        if sub.pair() != expected {
            return Err(ChshError::PairMismatch { expected, got: sub.pair() });
        }
    }
    if subs.iter().any(|s| s.budget() != s11.budget()) {
        return Err(ChshError::MixedBudgets);
    }
    let mut labels: Vec<u64> = subs.iter().map(|s| s.ensemble()).collect();
    labels.sort_unstable();
    labels.dedup();
    if labels.len() != 4 {
        return Err(ChshError::DuplicateEnsembles);
    }

    let correlations = CorrelationSet {
        a1b1: corr(s11),
        a1b2: corr(s12),
        a2b1: corr(s21),
        a2b2: corr(s22),
    };
    let s = (correlations.a1b1 - correlations.a1b2).abs()
        + (correlations.a2b1 + correlations.a2b2).abs();

    // Positions are uniformly weighted within every ensemble, so the
    // total-variation distance between two sub-ensembles reduces exactly to
    // the distance between their label point masses.
    let mi = mi_violation(&subs.map(|sub| {
        (sub.pair(), LambdaDistribution::point(LambdaId { ensemble: sub.ensemble(), position: 0 }))
    }))?;

    let definability = DefinabilityAnalysis {
        a1b1: PairVerdict::Definable { cos: s11.cos_theta() },
        a1b2: PairVerdict::Definable { cos: s12.cos_theta() },
        a2b1: PairVerdict::Definable { cos: s21.cos_theta() },
        a2b2: PairVerdict::Definable { cos: s22.cos_theta() },
        definable_count: 4,
        exceptional_apex: false,
    };

    Ok(ChshReport {
        n_bits: s11.budget().bits(),
        seeds: [s11.ensemble(), s12.ensemble(), s21.ensemble(), s22.ensemble()],
        exceeds_classical_bound: s > Dyadic::TWO,
        s_value: s.to_f64(),
        correlations,
        s,
        definability,
        mi_violation: mi,
        joint_analysis: None,
        snaps: Vec::new(),
    })
}

/// A hidden variable: an ensemble label and a string position.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct LambdaId {
    pub ensemble: u64,
    pub position: u64,
}

/// An exact empirical distribution over hidden variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LambdaDistribution {
    weights: BTreeMap<LambdaId, Ratio<i128>>,
}

impl LambdaDistribution {
    /// Uniform distribution over the given ids (duplicates accumulate).
    pub fn uniform(ids: impl IntoIterator<Item = LambdaId>) -> Self {
        let mut counts: BTreeMap<LambdaId, i128> = BTreeMap::new();
        for id in ids {
            *counts.entry(id).or_insert(0) += 1;
        }
        let total: i128 = counts.values().sum();
        let weights = counts
            .into_iter()
            .map(|(id, c)| (id, Ratio::new(c, total.max(1))))
            .collect();
        LambdaDistribution { weights }
    }

    pub fn point(id: LambdaId) -> Self {
        LambdaDistribution { weights: BTreeMap::from([(id, Ratio::from_integer(1))]) }
    }

    pub fn support_len(&self) -> usize {
        self.weights.len()
    }

    /// Exact total-variation distance `(1/2) sum |p - q|`.
    pub fn tv_distance(&self, other: &LambdaDistribution) -> Ratio<i128> {
        let zero = Ratio::from_integer(0);
        let mut sum = zero;
        for (id, p) in &self.weights {
            let q = other.weights.get(id).copied().unwrap_or(zero);
            sum += (*p - q).abs();
        }
        for (id, q) in &other.weights {
            if !self.weights.contains_key(id) {
                sum += q.abs();
            }
        }
        sum / 2
    }
}

/// Maximum total-variation distance between the hidden-variable
/// distributions of different setting pairs: exactly zero for a
/// settings-independent model, positive whenever the ensembles differ.
pub fn mi_violation(
    ensembles: &[(SettingPair, LambdaDistribution)],
) -> Result<Ratio<i128>, ChshError> {
    if ensembles.len() < 2 {
        return Err(ChshError::TooFewEnsembles);
    }
    let mut max = Ratio::from_integer(0);
    for (i, (_, a)) in ensembles.iter().enumerate() {
        for (_, b) in ensembles.iter().skip(i + 1) {
            let tv = a.tv_distance(b);
            if tv > max {
                max = tv;
            }
        }
    }
    Ok(max)
}

/// Runs the four-sub-ensemble protocol at explicitly given pair cosines
/// (ordered `a1b1, a1b2, a2b1, a2b2`). Propagates an `Undefinable` verdict
/// when any cosine fails its budget.
pub fn run_exact_experiment(
    cosines: [Dyadic; 4],
    budget: BitBudget,
    base_seed: u64,
) -> Result<Definability<ChshReport>, ChshError> {
    let seeds = [
        base_seed,
        base_seed.wrapping_add(1),
        base_seed.wrapping_add(2),
        base_seed.wrapping_add(3),
    ];
    let mut subs = Vec::with_capacity(4);
    for ((pair, cos), seed) in SettingPair::ALL.iter().zip(cosines).zip(seeds) {
        match build_subexperiment(*pair, cos, budget, seed)? {
            Definability::Defined(sub) => subs.push(sub),
            Definability::Undefinable(reason) => return Ok(Definability::Undefinable(reason)),
        }
    }
    let report = chsh_statistic(&subs[0], &subs[1], &subs[2], &subs[3])?;
    Ok(Definability::Defined(report))
}

/// Runs the full planar experiment: snap the four pair cosines onto the
/// `2^-(N-1)` grid, build the four disjoint sub-experiments, and attach the
/// joint common-ensemble analysis.
pub fn run_planar_experiment(
    angles_deg: [f64; 4],
    budget: BitBudget,
    base_seed: u64,
    apex_alice: RationalAngle,
    apex_bob: RationalAngle,
) -> Result<ChshReport, ChshError> {
    let bits = budget.bits() - 1;
    let [a1, a2, b1, b2] = angles_deg.map(|d| d.to_radians());
    let raw = [
        (SettingPair::A1B1, (a1 - b1).cos()),
        (SettingPair::A1B2, (a1 - b2).cos()),
        (SettingPair::A2B1, (a2 - b1).cos()),
        (SettingPair::A2B2, (a2 - b2).cos()),
    ];
    let mut cosines = [Dyadic::ZERO; 4];
    let mut snaps = Vec::with_capacity(4);
    for (i, (pair, value)) in raw.iter().enumerate() {
        let snapped = super::config::snap_to_grid(*value, bits)?;
        cosines[i] = snapped;
        snaps.push(super::config::SnapRecord {
            pair: *pair,
            raw_cos: *value,
            snapped_cos: snapped,
            cos_error: (*value - snapped.to_f64()).abs(),
            angle_error_rad: (value.clamp(-1.0, 1.0).acos()
                - snapped.to_f64().clamp(-1.0, 1.0).acos())
            .abs(),
        });
    }

    let mut report = match run_exact_experiment(cosines, budget, base_seed)? {
        Definability::Defined(r) => r,
        // Snapped cosines always fit the grid the operators need.
        Definability::Undefinable(reason) => {
            unreachable!("snapped configuration undefinable: {reason}")
        }
    };

    let cfg = ChshConfig::from_planar_angles_deg(
        angles_deg,
        SettingPair::A1B1,
        apex_alice,
        apex_bob,
        budget,
    )?;
    report.joint_analysis = Some(joint_definability(&cfg)?);
    report.snaps = snaps;
    Ok(report)
}
