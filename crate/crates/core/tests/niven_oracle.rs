//! Numeric oracle for the rational-cosine classifier.
//!
//! The classifier itself is pure denominator arithmetic; this oracle takes
//! the entirely independent route of evaluating the cosine at 240 fractional
//! bits and probing for a nearby rational with small denominator via the
//! continued-fraction expansion. Agreement over every reduced fraction with
//! denominator up to 50 is acceptance criterion 4's first half.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Signed, ToPrimitive, Zero};

use isl_core::numkit::highprec::cos_pi;
use isl_core::numkit::{niven_classify, NivenClass, RationalAngle};

/// Denominator ceiling for the rational probe.
const MAX_DEN: u64 = 1_000_000;
/// A candidate must match the high-precision value this closely (in bits)
/// to count as rational. The cosine itself is good to ~200 bits.
const MATCH_BITS: u32 = 150;

/// Best rational approximation with denominator <= MAX_DEN via continued
/// fractions, returned with its absolute error.
fn continued_fraction_probe(v: &BigRational) -> (BigRational, BigRational) {
    let mut x = v.clone();
    // Convergents h/k via the standard recurrence.
    let (mut h0, mut k0) = (BigInt::one(), BigInt::zero());
    let (mut h1, mut k1) = (x.to_integer(), BigInt::one());
    loop {
        let frac = &x - BigRational::from_integer(x.to_integer());
        if frac.is_zero() {
            break;
        }
        x = frac.recip();
        let a = x.to_integer();
        let h2 = &a * &h1 + &h0;
        let k2 = &a * &k1 + &k0;
        if k2 > BigInt::from(MAX_DEN) {
            break;
        }
        h0 = std::mem::replace(&mut h1, h2);
        k0 = std::mem::replace(&mut k1, k2);
    }
    let best = BigRational::new(h1, k1);
    let err = (v - &best).abs();
    (best, err)
}

/// Oracle verdict: `Some(p/q)` when a denominator-<=10^6 rational matches the
/// 240-bit cosine to MATCH_BITS bits, `None` otherwise.
fn numeric_verdict(angle: RationalAngle) -> Option<BigRational> {
    let v = cos_pi(angle.num(), angle.den()).to_rational();
    let (best, err) = continued_fraction_probe(&v);
    let tol = BigRational::new(BigInt::one(), BigInt::one() << MATCH_BITS);
    (err < tol).then_some(best)
}

fn as_big(r: Ratio<i128>) -> BigRational {
    BigRational::new(BigInt::from(*r.numer()), BigInt::from(*r.denom()))
}

#[test]
fn classifier_matches_numeric_oracle_up_to_den_50() {
    let mut checked = 0u32;
    for n in 1i128..=50 {
        for m in 0..(2 * n) {
            if m.gcd(&n) != 1 && !(m == 0 && n == 1) {
                continue;
            }
            let angle = RationalAngle::new(m, n).unwrap();
            let numeric = numeric_verdict(angle);
            match niven_classify(angle) {
                NivenClass::RationalCos(value) => {
                    let found = numeric.unwrap_or_else(|| {
                        panic!("classifier says rational for {angle}, oracle found none")
                    });
                    assert_eq!(found, as_big(value), "value mismatch at {angle}");
                }
                NivenClass::IrrationalCos => {
                    assert!(
                        numeric.is_none(),
                        "classifier says irrational for {angle}, oracle found {numeric:?}"
                    );
                }
            }
            checked += 1;
        }
    }
    // Full circle for every denominator: a sizeable family.
    assert!(checked > 1500, "only {checked} cases checked");
}

#[test]
fn oracle_recovers_exact_values() {
    // Spot checks that the probe itself behaves: exact cosines recovered,
    // quadratic irrationals rejected.
    let half = numeric_verdict(RationalAngle::new(1, 3).unwrap()).unwrap();
    assert_eq!(half, BigRational::new(BigInt::one(), BigInt::from(2)));
    assert!(numeric_verdict(RationalAngle::new(1, 4).unwrap()).is_none());
    assert!(numeric_verdict(RationalAngle::new(1, 7).unwrap()).is_none());
    let minus_one = numeric_verdict(RationalAngle::new(1, 1).unwrap()).unwrap();
    assert_eq!(minus_one.to_f64().unwrap(), -1.0);
}
