//! The spherical cosine rule as a definability gate.
//!
//! For sides `s1`, `s2` meeting at apex angle `phi`,
//! `cos s3 = cos s1 cos s2 + sin s1 sin s2 cos phi`. With both side cosines
//! dyadic and `phi/pi` an exact rational, the classification of `cos phi`
//! decides whether the third side can ever be representable.

use num_integer::Roots;
use num_rational::Ratio;

use crate::numkit::{niven_classify, Dyadic, NivenClass, RationalAngle};

use super::ChshError;

/// Verdict on the third side's cosine.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ThirdCosine {
    /// Every term evaluated exactly; the value is this rational.
    ExactRational(Ratio<i128>),
    /// Provably not base-2 rational: the apex cosine is rational but the
    /// sine product is irrational, so the sum is irrational outright.
    NonDyadic,
    /// Irrational by the rational-cosine theorem. `assumed` is true when the
    /// sine product could not be certified rational, in which case the
    /// verdict leans on the unproven premise that the product of the two
    /// irrational factors does not conspire to a rational.
    IrrationalVerdict { assumed: bool },
}

/// Exact square root of a non-negative rational, if it is rational.
fn rational_sqrt(r: Ratio<i128>) -> Option<Ratio<i128>> {
    let (n, d) = (*r.numer(), *r.denom());
    if n < 0 {
        return None;
    }
    let sn = n.sqrt();
    let sd = d.sqrt();
    (sn * sn == n && sd * sd == d).then(|| Ratio::new(sn, sd))
}

/// Evaluates the definability of `cos s3` from two dyadic side cosines and a
/// rational apex fraction of pi in `(0, 1/2]`.
pub fn triangle_third_cosine(
    cos_s1: Dyadic,
    cos_s2: Dyadic,
    apex: RationalAngle,
) -> Result<ThirdCosine, ChshError> {
    let one = Dyadic::ONE;
    for c in [cos_s1, cos_s2] {
        if c.abs() > one {
            return Err(ChshError::CosineOutOfRange(c));
        }
        if c.abs() == one {
            return Err(ChshError::DegenerateTriangle(c));
        }
    }
    let apex_value = apex.to_ratio();
    if apex_value <= Ratio::from_integer(0) || apex_value > Ratio::new(1, 2) {
        return Err(ChshError::ApexOutOfRange(apex.to_string()));
    }

    let c1 = cos_s1.to_ratio();
    let c2 = cos_s2.to_ratio();
    let first_term = c1 * c2;
    // sin s1 sin s2 is the positive root of (1 - c1^2)(1 - c2^2); sides lie
    // strictly inside (0, pi) so it is nonzero.
    let one = Ratio::from_integer(1);
    let sin_product_sq = (one - c1 * c1) * (one - c2 * c2);
    let sin_product = rational_sqrt(sin_product_sq);

    match niven_classify(apex) {
        NivenClass::RationalCos(q) => {
            if q == Ratio::from_integer(0) {
                // Orthogonal apex: the second term vanishes regardless of
                // the sine product.
                Ok(ThirdCosine::ExactRational(first_term))
            } else if let Some(p) = sin_product {
                Ok(ThirdCosine::ExactRational(first_term + p * q))
            } else {
                // rational + nonzero rational * irrational: irrational.
                Ok(ThirdCosine::NonDyadic)
            }
        }
        NivenClass::IrrationalCos => Ok(ThirdCosine::IrrationalVerdict {
            assumed: sin_product.is_none(),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(m: i128, e: u32) -> Dyadic {
        Dyadic::new(m, e)
    }

    fn apex(n: i128, q: i128) -> RationalAngle {
        RationalAngle::new(n, q).unwrap()
    }

    #[test]
    fn exceptional_apex_evaluates_exactly() {
        // cos s3 = 1/4 + (3/4)(1/2) = 5/8.
        let got = triangle_third_cosine(d(1, 1), d(1, 1), apex(1, 3)).unwrap();
        assert_eq!(got, ThirdCosine::ExactRational(Ratio::new(5, 8)));
    }

    #[test]
    fn orthogonal_apex() {
        let got = triangle_third_cosine(d(1, 1), d(1, 1), apex(1, 2)).unwrap();
        assert_eq!(got, ThirdCosine::ExactRational(Ratio::new(1, 4)));
        // Second term vanishes even when the sine product is irrational.
        let got = triangle_third_cosine(d(1, 1), d(1, 2), apex(1, 2)).unwrap();
        assert_eq!(got, ThirdCosine::ExactRational(Ratio::new(1, 8)));
    }

    #[test]
    fn generic_apex_is_irrational() {
        // sin product = 3/4 rational, cos(pi/4) irrational: proven.
        let got = triangle_third_cosine(d(1, 1), d(1, 1), apex(1, 4)).unwrap();
        assert_eq!(got, ThirdCosine::IrrationalVerdict { assumed: false });
        // sin product irrational as well: the verdict carries the flag.
        let got = triangle_third_cosine(d(1, 1), d(1, 2), apex(1, 4)).unwrap();
        assert_eq!(got, ThirdCosine::IrrationalVerdict { assumed: true });
    }

    #[test]
    fn rational_apex_with_irrational_sine_product() {
        // (1 - 1/4)(1 - 1/16) = 45/64, not a rational square, cos(pi/3) = 1/2.
        let got = triangle_third_cosine(d(1, 1), d(1, 2), apex(1, 3)).unwrap();
        assert_eq!(got, ThirdCosine::NonDyadic);
    }

    #[test]
    fn structural_errors() {
        assert!(matches!(
            triangle_third_cosine(Dyadic::ONE, d(1, 1), apex(1, 3)),
            Err(ChshError::DegenerateTriangle(_))
        ));
        assert!(matches!(
            triangle_third_cosine(d(-1, 0), d(1, 1), apex(1, 3)),
            Err(ChshError::DegenerateTriangle(_))
        ));
        assert!(matches!(
            triangle_third_cosine(d(3, 1), d(1, 1), apex(1, 3)),
            Err(ChshError::CosineOutOfRange(_))
        ));
        assert!(matches!(
            triangle_third_cosine(d(1, 1), d(1, 1), apex(2, 3)),
            Err(ChshError::ApexOutOfRange(_))
        ));
        assert!(matches!(
            triangle_third_cosine(d(1, 1), d(1, 1), apex(0, 1)),
            Err(ChshError::ApexOutOfRange(_))
        ));
    }
}
