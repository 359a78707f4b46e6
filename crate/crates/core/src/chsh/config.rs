//! Four-direction configurations, instrument snapping, and the joint
//! (common-ensemble) definability analysis.
//!
//! A configuration is specified by pairwise angle data, never by embedded
//! coordinates: the re-preparation cosines (a1a2, b1b2) and the actually
//! chosen pair are exact dyadics, the remaining pairs are derived through
//! the spherical cosine rule with rational apex fractions of pi.

use std::fmt;

use serde::Serialize;

use crate::numkit::{fits_budget, BitBudget, Dyadic, RationalAngle};

use super::triangle::{triangle_third_cosine, ThirdCosine};
use super::ChshError;

/// One of the four joint instrument settings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SettingPair {
    A1B1,
    A1B2,
    A2B1,
    A2B2,
}

impl SettingPair {
    pub const ALL: [SettingPair; 4] =
        [SettingPair::A1B1, SettingPair::A1B2, SettingPair::A2B1, SettingPair::A2B2];

    /// Alice's setting index (1 or 2).
    pub fn alice(self) -> usize {
        match self {
            SettingPair::A1B1 | SettingPair::A1B2 => 1,
            SettingPair::A2B1 | SettingPair::A2B2 => 2,
        }
    }

    /// Bob's setting index (1 or 2).
    pub fn bob(self) -> usize {
        match self {
            SettingPair::A1B1 | SettingPair::A2B1 => 1,
            SettingPair::A1B2 | SettingPair::A2B2 => 2,
        }
    }

    pub fn flip_alice(self) -> Self {
        match self {
            SettingPair::A1B1 => SettingPair::A2B1,
            SettingPair::A1B2 => SettingPair::A2B2,
            SettingPair::A2B1 => SettingPair::A1B1,
            SettingPair::A2B2 => SettingPair::A1B2,
        }
    }

    pub fn flip_bob(self) -> Self {
        match self {
            SettingPair::A1B1 => SettingPair::A1B2,
            SettingPair::A1B2 => SettingPair::A1B1,
            SettingPair::A2B1 => SettingPair::A2B2,
            SettingPair::A2B2 => SettingPair::A2B1,
        }
    }

    pub fn flip_both(self) -> Self {
        self.flip_alice().flip_bob()
    }
}

impl fmt::Display for SettingPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            SettingPair::A1B1 => "a1b1",
            SettingPair::A1B2 => "a1b2",
            SettingPair::A2B1 => "a2b1",
            SettingPair::A2B2 => "a2b2",
        };
        f.write_str(s)
    }
}

/// A pairwise angle descriptor: exactly representable, or a high-precision
/// stand-in for a value known not to be.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AngleDescriptor {
    ExactDyadicCos(Dyadic),
    Irrational(f64),
}

/// Nearest multiple of `2^-N`, ties toward zero; the error is at most
/// `2^-(N+1)`.
pub fn snap_to_dyadic(value: f64, budget: BitBudget) -> Result<Dyadic, ChshError> {
    snap_to_grid(value, budget.bits())
}

/// Snapping onto an explicit `2^-bits` grid; the experiment drivers use
/// `bits = N - 1` so that derived operator parameters stay exact at N.
pub(crate) fn snap_to_grid(value: f64, bits: u32) -> Result<Dyadic, ChshError> {
    if !(-1.0..=1.0).contains(&value) {
        return Err(ChshError::SnapOutOfRange(value));
    }
    if bits > 52 {
        return Err(ChshError::SnapTooFine);
    }
    let scaled = value.abs() * (bits as f64).exp2();
    // Round half toward zero on the magnitude, then restore the sign.
    let magnitude = (scaled - 0.5).ceil() as i128;
    let mantissa = if value < 0.0 { -magnitude } else { magnitude };
    Ok(Dyadic::new(mantissa, bits))
}

/// Record of one instrument snap, kept for reporting.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SnapRecord {
    pub pair: SettingPair,
    pub raw_cos: f64,
    pub snapped_cos: Dyadic,
    /// |raw - snapped| on the cosine.
    pub cos_error: f64,
    /// |acos(raw) - acos(snapped)|, the angular tolerance actually used.
    pub angle_error_rad: f64,
}

impl SnapRecord {
    fn new(pair: SettingPair, raw_cos: f64, snapped_cos: Dyadic) -> Self {
        let snapped = snapped_cos.to_f64();
        SnapRecord {
            pair,
            raw_cos,
            snapped_cos,
            cos_error: (raw_cos - snapped).abs(),
            angle_error_rad: (raw_cos.clamp(-1.0, 1.0).acos() - snapped.clamp(-1.0, 1.0).acos())
                .abs(),
        }
    }
}

/// A four-direction configuration built from pairwise angle data.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChshConfig {
    budget: BitBudget,
    /// The pair Alice and Bob actually measure.
    chosen: SettingPair,
    /// Re-preparation cosine between Alice's two settings.
    cos_a1a2: Dyadic,
    /// Re-preparation cosine between Bob's two settings.
    cos_b1b2: Dyadic,
    /// Cosine of the chosen pair, snapped onto the invariant set.
    cos_chosen: Dyadic,
    /// Cosine of the both-flipped pair. Not reachable from the chosen pair
    /// by any single spherical triangle, hence carried as configuration data
    /// in its own right.
    cos_counterpart: Dyadic,
    /// Apex at the chosen Alice point between her other setting and the
    /// chosen Bob point, as a fraction of pi.
    apex_alice: RationalAngle,
    /// Apex at the chosen Bob point between his other setting and the chosen
    /// Alice point.
    apex_bob: RationalAngle,
    snaps: Vec<SnapRecord>,
}

impl ChshConfig {
    /// Builds a configuration from explicit descriptors. The re-preparation
    /// cosines are forced: a descriptor that is not an exact dyadic within
    /// budget is rejected here, because both of Alice's (and Bob's) settings
    /// can act on one and the same particle in sequence.
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        budget: BitBudget,
        chosen: SettingPair,
        cos_a1a2: AngleDescriptor,
        cos_b1b2: AngleDescriptor,
        cos_chosen: Dyadic,
        cos_counterpart: Dyadic,
        apex_alice: RationalAngle,
        apex_bob: RationalAngle,
    ) -> Result<Self, ChshError> {
        let cos_a1a2 = Self::require_dyadic("a1a2", cos_a1a2, budget)?;
        let cos_b1b2 = Self::require_dyadic("b1b2", cos_b1b2, budget)?;
        for c in [cos_chosen, cos_counterpart] {
            if c.abs() > Dyadic::ONE {
                return Err(ChshError::CosineOutOfRange(c));
            }
        }
        Ok(ChshConfig {
            budget,
            chosen,
            cos_a1a2,
            cos_b1b2,
            cos_chosen,
            cos_counterpart,
            apex_alice,
            apex_bob,
            snaps: Vec::new(),
        })
    }

    fn require_dyadic(
        which: &str,
        d: AngleDescriptor,
        budget: BitBudget,
    ) -> Result<Dyadic, ChshError> {
        match d {
            AngleDescriptor::ExactDyadicCos(c) if c.abs() <= Dyadic::ONE && fits_budget(c, budget) => {
                Ok(c)
            }
            _ => Err(ChshError::NonDyadicSetting(which.to_string())),
        }
    }

    /// Convenience constructor from coplanar instrument angles in degrees
    /// (`[a1, a2, b1, b2]`). Every stored cosine is snapped onto the
    /// `2^-(N-1)` grid and the snap errors are recorded.
    pub fn from_planar_angles_deg(
        angles_deg: [f64; 4],
        chosen: SettingPair,
        apex_alice: RationalAngle,
        apex_bob: RationalAngle,
        budget: BitBudget,
    ) -> Result<Self, ChshError> {
        let bits = budget.bits() - 1;
        let rad: Vec<f64> = angles_deg.iter().map(|a| a.to_radians()).collect();
        let (a1, a2, b1, b2) = (rad[0], rad[1], rad[2], rad[3]);
        let chosen_alice = if chosen.alice() == 1 { a1 } else { a2 };
        let chosen_bob = if chosen.bob() == 1 { b1 } else { b2 };
        let other_alice = if chosen.alice() == 1 { a2 } else { a1 };
        let other_bob = if chosen.bob() == 1 { b2 } else { b1 };

        let snap = |v: f64| snap_to_grid(v, bits);
        let cos_a1a2 = snap((a1 - a2).cos())?;
        let cos_b1b2 = snap((b1 - b2).cos())?;
        let cos_chosen = snap((chosen_alice - chosen_bob).cos())?;
        let cos_counterpart = snap((other_alice - other_bob).cos())?;

        let snaps = vec![
            SnapRecord::new(chosen, (chosen_alice - chosen_bob).cos(), cos_chosen),
            SnapRecord::new(chosen.flip_both(), (other_alice - other_bob).cos(), cos_counterpart),
        ];

        let mut cfg = ChshConfig::new(
            budget,
            chosen,
            AngleDescriptor::ExactDyadicCos(cos_a1a2),
            AngleDescriptor::ExactDyadicCos(cos_b1b2),
            cos_chosen,
            cos_counterpart,
            apex_alice,
            apex_bob,
        )?;
        cfg.snaps = snaps;
        Ok(cfg)
    }

    pub fn budget(&self) -> BitBudget {
        self.budget
    }

    pub fn chosen(&self) -> SettingPair {
        self.chosen
    }

    pub fn cos_chosen(&self) -> Dyadic {
        self.cos_chosen
    }

    pub fn cos_counterpart(&self) -> Dyadic {
        self.cos_counterpart
    }

    pub fn snaps(&self) -> &[SnapRecord] {
        &self.snaps
    }
}

/// Why a correlation is not representable on the common ensemble.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NonDyadicReason {
    /// Provably irrational (rational apex cosine with irrational sine
    /// product, or irrational apex cosine with certified sine product).
    ProvenIrrational,
    /// Irrational by the rational-cosine theorem, assuming the sine product
    /// does not conspire to cancel the irrationality.
    AssumedIrrational,
    /// Exactly rational, but not a power-of-two denominator.
    RationalNotDyadic,
    /// Dyadic, but finer than the budget carries.
    OverBudget,
}

/// Per-correlation verdict of the joint analysis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum PairVerdict {
    Definable { cos: Dyadic },
    NonDyadic { reason: NonDyadicReason },
}

impl PairVerdict {
    pub fn is_definable(&self) -> bool {
        matches!(self, PairVerdict::Definable { .. })
    }
}

/// Result of [`joint_definability`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DefinabilityAnalysis {
    pub a1b1: PairVerdict,
    pub a1b2: PairVerdict,
    pub a2b1: PairVerdict,
    pub a2b2: PairVerdict,
    pub definable_count: usize,
    /// True when a counterfactual pair became definable through an
    /// exceptional (rational-cosine) apex angle.
    pub exceptional_apex: bool,
}

impl DefinabilityAnalysis {
    pub fn verdict(&self, pair: SettingPair) -> &PairVerdict {
        match pair {
            SettingPair::A1B1 => &self.a1b1,
            SettingPair::A1B2 => &self.a1b2,
            SettingPair::A2B1 => &self.a2b1,
            SettingPair::A2B2 => &self.a2b2,
        }
    }
}

/// Classifies all four correlations against one common hidden-variable
/// ensemble: the chosen pair and its double counterfactual are read off the
/// configuration, the two single counterfactuals are propagated through
/// [`triangle_third_cosine`].
pub fn joint_definability(cfg: &ChshConfig) -> Result<DefinabilityAnalysis, ChshError> {
    let mut verdicts = [PairVerdict::NonDyadic { reason: NonDyadicReason::AssumedIrrational }; 4];
    let mut exceptional = false;

    let set = |verdicts: &mut [PairVerdict; 4], pair: SettingPair, v: PairVerdict| {
        let idx = SettingPair::ALL.iter().position(|p| *p == pair).unwrap();
        verdicts[idx] = v;
    };

    set(&mut verdicts, cfg.chosen, PairVerdict::Definable { cos: cfg.cos_chosen });
    set(
        &mut verdicts,
        cfg.chosen.flip_both(),
        PairVerdict::Definable { cos: cfg.cos_counterpart },
    );

    let alice_side = derived_verdict(cfg.cos_a1a2, cfg.cos_chosen, cfg.apex_alice, cfg.budget)?;
    exceptional |= alice_side.1;
    set(&mut verdicts, cfg.chosen.flip_alice(), alice_side.0);

    let bob_side = derived_verdict(cfg.cos_b1b2, cfg.cos_chosen, cfg.apex_bob, cfg.budget)?;
    exceptional |= bob_side.1;
    set(&mut verdicts, cfg.chosen.flip_bob(), bob_side.0);

    let definable_count = verdicts.iter().filter(|v| v.is_definable()).count();
    let [a1b1, a1b2, a2b1, a2b2] = verdicts;
    Ok(DefinabilityAnalysis {
        a1b1,
        a1b2,
        a2b1,
        a2b2,
        definable_count,
        exceptional_apex: exceptional,
    })
}

/// Verdict for a single counterfactual pair; the boolean reports whether an
/// exceptional apex made it definable.
fn derived_verdict(
    cos_repreparation: Dyadic,
    cos_chosen: Dyadic,
    apex: RationalAngle,
    budget: BitBudget,
) -> Result<(PairVerdict, bool), ChshError> {
    // Coincident or antipodal settings collapse the triangle: the third
    // side is the chosen side (up to reflection), exactly.
    if cos_repreparation == Dyadic::ONE {
        return Ok((PairVerdict::Definable { cos: cos_chosen }, false));
    }
    if cos_repreparation == -Dyadic::ONE {
        return Ok((PairVerdict::Definable { cos: -cos_chosen }, false));
    }
    if cos_chosen == Dyadic::ONE {
        return Ok((PairVerdict::Definable { cos: cos_repreparation }, false));
    }
    if cos_chosen == -Dyadic::ONE {
        return Ok((PairVerdict::Definable { cos: -cos_repreparation }, false));
    }

    let verdict = match triangle_third_cosine(cos_repreparation, cos_chosen, apex)? {
        ThirdCosine::ExactRational(v) => match Dyadic::try_from_ratio(v) {
            Some(c) if fits_budget(c, budget) => {
                return Ok((PairVerdict::Definable { cos: c }, true));
            }
            Some(_) => PairVerdict::NonDyadic { reason: NonDyadicReason::OverBudget },
            None => PairVerdict::NonDyadic { reason: NonDyadicReason::RationalNotDyadic },
        },
        ThirdCosine::NonDyadic => {
            PairVerdict::NonDyadic { reason: NonDyadicReason::ProvenIrrational }
        }
        ThirdCosine::IrrationalVerdict { assumed: false } => {
            PairVerdict::NonDyadic { reason: NonDyadicReason::ProvenIrrational }
        }
        ThirdCosine::IrrationalVerdict { assumed: true } => {
            PairVerdict::NonDyadic { reason: NonDyadicReason::AssumedIrrational }
        }
    };
    Ok((verdict, false))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn budget(n: u32) -> BitBudget {
        BitBudget::new(n).unwrap()
    }

    fn quarter_apex() -> RationalAngle {
        RationalAngle::new(1, 4).unwrap()
    }

    fn standard_config(n: u32) -> ChshConfig {
        ChshConfig::from_planar_angles_deg(
            [0.0, 90.0, 45.0, 135.0],
            SettingPair::A1B1,
            quarter_apex(),
            quarter_apex(),
            budget(n),
        )
        .unwrap()
    }

    #[test]
    fn snap_examples() {
        let b10 = budget(10);
        let snapped = snap_to_dyadic(45f64.to_radians().cos(), b10).unwrap();
        assert_eq!(snapped, Dyadic::new(181, 8)); // 181/256 = 724/1024
        assert_eq!(snap_to_dyadic(0.5, budget(4)).unwrap(), Dyadic::new(1, 1));
        assert_eq!(snap_to_dyadic(1.0, budget(7)).unwrap(), Dyadic::ONE);
        assert!(snap_to_dyadic(1.5, b10).is_err());
    }

    #[test]
    fn snap_ties_go_toward_zero() {
        // 0.75 on the half-integer grid is a tie: snaps to 1/2, not 1.
        assert_eq!(snap_to_grid(0.75, 1).unwrap(), Dyadic::new(1, 1));
        assert_eq!(snap_to_grid(-0.75, 1).unwrap(), Dyadic::new(-1, 1));
        // Non-ties round to nearest.
        assert_eq!(snap_to_grid(0.8, 1).unwrap(), Dyadic::ONE);
        assert_eq!(snap_to_grid(0.7, 1).unwrap(), Dyadic::new(1, 1));
    }

    #[test]
    fn snap_error_bound() {
        let b = budget(10);
        for k in 0..200 {
            let v = -1.0 + 0.01 * k as f64;
            if !(-1.0..=1.0).contains(&v) {
                continue;
            }
            let s = snap_to_dyadic(v, b).unwrap();
            assert!((s.to_f64() - v).abs() <= 0.5f64.powi(11) + 1e-15);
        }
    }

    #[test]
    fn standard_quadruple_has_two_definable() {
        let analysis = joint_definability(&standard_config(10)).unwrap();
        assert_eq!(analysis.definable_count, 2);
        assert!(analysis.a1b1.is_definable());
        assert!(analysis.a2b2.is_definable());
        assert_eq!(
            analysis.a1b2,
            PairVerdict::NonDyadic { reason: NonDyadicReason::AssumedIrrational }
        );
        assert_eq!(
            analysis.a2b1,
            PairVerdict::NonDyadic { reason: NonDyadicReason::AssumedIrrational }
        );
        assert!(!analysis.exceptional_apex);
    }

    #[test]
    fn identical_points_all_definable() {
        let cfg = ChshConfig::from_planar_angles_deg(
            [0.0; 4],
            SettingPair::A1B1,
            quarter_apex(),
            quarter_apex(),
            budget(8),
        )
        .unwrap();
        let analysis = joint_definability(&cfg).unwrap();
        assert_eq!(analysis.definable_count, 4);
        for pair in SettingPair::ALL {
            assert_eq!(*analysis.verdict(pair), PairVerdict::Definable { cos: Dyadic::ONE });
        }
    }

    #[test]
    fn exceptional_apex_flagged() {
        // Sides with cosine 1/2 and an apex of pi/3 give an exact 5/8 for
        // Alice's counterfactual; Bob's side keeps a generic apex.
        let cfg = ChshConfig::new(
            budget(8),
            SettingPair::A1B1,
            AngleDescriptor::ExactDyadicCos(Dyadic::new(1, 1)),
            AngleDescriptor::ExactDyadicCos(Dyadic::new(1, 1)),
            Dyadic::new(1, 1),
            Dyadic::new(1, 1),
            RationalAngle::new(1, 3).unwrap(),
            quarter_apex(),
        )
        .unwrap();
        let analysis = joint_definability(&cfg).unwrap();
        assert_eq!(analysis.definable_count, 3);
        assert!(analysis.exceptional_apex);
        assert_eq!(
            analysis.a2b1,
            PairVerdict::Definable { cos: Dyadic::new(5, 3) }
        );
        assert_eq!(
            analysis.a1b2,
            PairVerdict::NonDyadic { reason: NonDyadicReason::ProvenIrrational }
        );
    }

    #[test]
    fn forced_dyadicity_rejected_at_construction() {
        let err = ChshConfig::new(
            budget(8),
            SettingPair::A1B1,
            AngleDescriptor::Irrational(std::f64::consts::FRAC_1_SQRT_2),
            AngleDescriptor::ExactDyadicCos(Dyadic::ZERO),
            Dyadic::new(1, 1),
            Dyadic::new(1, 1),
            quarter_apex(),
            quarter_apex(),
        );
        assert!(matches!(err, Err(ChshError::NonDyadicSetting(ref s)) if s == "a1a2"));

        // Dyadic but finer than the budget is equally rejected.
        let err = ChshConfig::new(
            budget(4),
            SettingPair::A1B1,
            AngleDescriptor::ExactDyadicCos(Dyadic::new(1, 9)),
            AngleDescriptor::ExactDyadicCos(Dyadic::ZERO),
            Dyadic::new(1, 1),
            Dyadic::new(1, 1),
            quarter_apex(),
            quarter_apex(),
        );
        assert!(matches!(err, Err(ChshError::NonDyadicSetting(_))));
    }

    #[test]
    fn chosen_pair_orientation_respected() {
        let cfg = ChshConfig::from_planar_angles_deg(
            [0.0, 90.0, 45.0, 135.0],
            SettingPair::A2B1,
            quarter_apex(),
            quarter_apex(),
            budget(10),
        )
        .unwrap();
        let analysis = joint_definability(&cfg).unwrap();
        assert_eq!(analysis.definable_count, 2);
        assert!(analysis.a2b1.is_definable());
        assert!(analysis.a1b2.is_definable());
    }
}
