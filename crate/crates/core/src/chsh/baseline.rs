//! The conventional locally causal baseline: deterministic outcome tables
//! over a settings-independent hidden-variable distribution. Its S statistic
//! never exceeds 2, which is the bound the invariant-set protocol beats.

use num_rational::Ratio;
use num_traits::Signed;

use super::ChshError;

/// Sign type for outcome tables.
pub type Sign = i8;

/// One deterministic hidden-variable strategy: fixed outcomes for each of
/// Alice's and Bob's settings.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DeterministicStrategy {
    /// Outcomes A(a1), A(a2), each +1 or -1.
    pub a: [Sign; 2],
    /// Outcomes B(b1), B(b2).
    pub b: [Sign; 2],
}

/// All sixteen deterministic strategies.
pub fn all_deterministic_strategies() -> Vec<DeterministicStrategy> {
    let signs = [1i8, -1i8];
    let mut out = Vec::with_capacity(16);
    for a1 in signs {
        for a2 in signs {
            for b1 in signs {
                for b2 in signs {
                    out.push(DeterministicStrategy { a: [a1, a2], b: [b1, b2] });
                }
            }
        }
    }
    out
}

/// Exact S statistic of a normalized mixture of deterministic strategies.
/// Always at most 2.
pub fn local_hv_baseline(
    mixture: &[(DeterministicStrategy, Ratio<i128>)],
) -> Result<Ratio<i128>, ChshError> {
    let zero = Ratio::from_integer(0);
    let mut total = zero;
    for (strategy, w) in mixture {
        for s in strategy.a.iter().chain(strategy.b.iter()) {
            debug_assert!(*s == 1 || *s == -1, "outcomes must be +1 or -1");
        }
        if *w < zero {
            return Err(ChshError::NotNormalized(*w));
        }
        total += *w;
    }
    if total != Ratio::from_integer(1) {
        return Err(ChshError::NotNormalized(total));
    }

    let mut c = [[zero; 2]; 2];
    for (strategy, w) in mixture {
        for (i, row) in c.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell += *w * Ratio::from_integer((strategy.a[i] * strategy.b[j]) as i128);
            }
        }
    }
    Ok((c[0][0] - c[0][1]).abs() + (c[1][0] + c[1][1]).abs())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one() -> Ratio<i128> {
        Ratio::from_integer(1)
    }

    #[test]
    fn constant_strategy_reaches_two() {
        let s = DeterministicStrategy { a: [1, 1], b: [1, 1] };
        assert_eq!(local_hv_baseline(&[(s, one())]).unwrap(), Ratio::from_integer(2));
    }

    #[test]
    fn every_deterministic_strategy_scores_exactly_two() {
        for s in all_deterministic_strategies() {
            assert_eq!(local_hv_baseline(&[(s, one())]).unwrap(), Ratio::from_integer(2));
        }
    }

    #[test]
    fn uniform_mixture_scores_zero() {
        let w = Ratio::new(1, 16);
        let mixture: Vec<_> =
            all_deterministic_strategies().into_iter().map(|s| (s, w)).collect();
        assert_eq!(local_hv_baseline(&mixture).unwrap(), Ratio::from_integer(0));
    }

    #[test]
    fn normalization_enforced() {
        let s = DeterministicStrategy { a: [1, -1], b: [1, 1] };
        assert!(matches!(
            local_hv_baseline(&[(s, Ratio::new(1, 2))]),
            Err(ChshError::NotNormalized(_))
        ));
        assert!(matches!(
            local_hv_baseline(&[(s, Ratio::new(-1, 1)), (s, Ratio::new(2, 1))]),
            Err(ChshError::NotNormalized(_))
        ));
    }
}
