//! Extensions `0 → S → S′ → O → 0` given by a class `c ∈ H¹(Y, S)`.
//!
//! The class enters only through the HN level at which it survives: the
//! index `n` such that `c` maps to zero in `H¹(S_k / S_{k-1})` for `k > n` but
//! not for `k = n`. Computing that level for a concrete class needs
//! cohomology of actual sheaves and is left to the caller.
//!
//! When the surviving quotient has slope `μ_n ≥ 0` the HN data of `S′` is
//! explicit and `μ_HK(S′) = μ_HK(S)`. When `μ_n < 0` the torsor is affine and
//! the Hilbert-Kunz slope drops strictly, but the HN data of `S′` is not
//! determined by that of `S`.

use std::num::NonZeroUsize;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::hn::{HnBlock, HnData, SlopeVector};
use crate::rational::Rational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExtensionError {
    #[error("class level {level} outside 1..={blocks}")]
    LevelOutOfRange { level: usize, blocks: usize },
    #[error("length mismatch: {0}")]
    LengthMismatch(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
}

/// HN level at which a cohomology class survives; `None` for the zero class.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct ClassLevel(Option<NonZeroUsize>);

impl ClassLevel {
    pub const ZERO_CLASS: ClassLevel = ClassLevel(None);

    /// Level `n` (1-based). `n = 0` is out of range for every filtration.
    pub fn at(n: usize) -> Result<Self, ExtensionError> {
        NonZeroUsize::new(n)
            .map(|n| ClassLevel(Some(n)))
            .ok_or(ExtensionError::LevelOutOfRange {
                level: 0,
                blocks: 0,
            })
    }

    pub fn level(&self) -> Option<usize> {
        self.0.map(NonZeroUsize::get)
    }

    fn checked(&self, s: &HnData) -> Result<Option<usize>, ExtensionError> {
        match self.level() {
            Some(n) if n > s.len() => Err(ExtensionError::LevelOutOfRange {
                level: n,
                blocks: s.len(),
            }),
            other => Ok(other),
        }
    }
}

impl From<NonZeroUsize> for ClassLevel {
    fn from(n: NonZeroUsize) -> Self {
        ClassLevel(Some(n))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExtensionResult {
    /// HN data of `S′`.
    Exact(HnData),
    /// Only bounds are known: `lower ≤ μ_HK(S′) < strict_upper`.
    Indeterminate {
        strict_upper: Rational,
        lower: Option<Rational>,
    },
}

impl ExtensionResult {
    pub fn exact(&self) -> Option<&HnData> {
        match self {
            ExtensionResult::Exact(hn) => Some(hn),
            ExtensionResult::Indeterminate { .. } => None,
        }
    }
}

/// HN data (or bounds on `μ_HK`) of the extension of `S` by `O` at `level`.
pub fn extension_hn(s: &HnData, level: ClassLevel) -> Result<ExtensionResult, ExtensionError> {
    let Some(n) = level.checked(s)? else {
        // c = 0: the sequence splits
        return Ok(ExtensionResult::Exact(s.direct_sum(&HnData::trivial())));
    };

    let blocks = s.blocks();
    if blocks[n - 1].degree().is_negative() {
        let lower = s.is_semistable().then(|| {
            let degree = s.total_degree();
            Rational::new(&degree * &degree, s.total_rank() + BigInt::one())
        });
        return Ok(ExtensionResult::Indeterminate {
            strict_upper: s.mu_hk(),
            lower,
        });
    }

    // last index with μ_i ≥ 0; n ≤ i since slopes decrease
    let i = blocks
        .iter()
        .rposition(|b| !b.degree().is_negative())
        .expect("block n has nonnegative slope");
    let mut out = Vec::with_capacity(blocks.len() + 1);
    out.extend_from_slice(&blocks[..i]);
    if blocks[i].degree().is_zero() {
        out.push(HnBlock::new(blocks[i].rank() + BigInt::one(), 0).expect("positive rank"));
    } else {
        out.push(blocks[i].clone());
        out.push(HnBlock::new(1, 0).expect("positive rank"));
    }
    out.extend_from_slice(&blocks[i + 1..]);
    let hn = HnData::from_blocks(out).expect("inserting slope 0 keeps slopes strictly decreasing");
    Ok(ExtensionResult::Exact(hn))
}

/// Whether the torsor `P(S′^∨) − P(S^∨)` is affine: the class survives on a
/// quotient `S / S_{n-1}` whose maximal slope `μ_n` is negative.
pub fn is_affine_torsor(s: &HnData, level: ClassLevel) -> Result<bool, ExtensionError> {
    Ok(match level.checked(s)? {
        Some(n) => blocks_slope_negative(s, n),
        None => false,
    })
}

/// Whether `μ_HK(S′) < μ_HK(S)`. Equivalent to [`is_affine_torsor`].
pub fn hk_drops(s: &HnData, level: ClassLevel) -> Result<bool, ExtensionError> {
    is_affine_torsor(s, level)
}

fn blocks_slope_negative(s: &HnData, n: usize) -> bool {
    s.blocks()[n - 1].degree().is_negative()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NumkritReport {
    /// Both sequences non-decreasing and nonnegative, `α_i ≥ β_{i+1}`, equal sums.
    pub hypotheses_hold: bool,
    /// `Σ β² ≤ Σ α²`.
    pub inequality_holds: bool,
    /// `Σ β² = Σ α²`.
    pub equality: bool,
}

/// Evaluates the square-sum comparison for `α` of length `r` against `β` of
/// length `r + 1`.
///
/// Under the hypotheses the inequality `Σ β² ≤ Σ α²` always holds, with
/// equality exactly when `α_i = β_{i+1}` for every `i`. Entries may be zero.
pub fn numkrit_check(
    alphas: &[Rational],
    betas: &[Rational],
) -> Result<NumkritReport, ExtensionError> {
    if betas.len() != alphas.len() + 1 {
        return Err(ExtensionError::LengthMismatch(format!(
            "expected {} betas for {} alphas, got {}",
            alphas.len() + 1,
            alphas.len(),
            betas.len()
        )));
    }
    let non_decreasing = |v: &[Rational]| v.windows(2).all(|w| w[0] <= w[1]);
    let nonnegative = |v: &[Rational]| v.iter().all(|x| !x.is_negative());
    let dominated = alphas.iter().zip(&betas[1..]).all(|(a, b)| a >= b);
    let sum_alpha: Rational = alphas.iter().sum();
    let sum_beta: Rational = betas.iter().sum();
    let hypotheses_hold = non_decreasing(alphas)
        && non_decreasing(betas)
        && nonnegative(alphas)
        && nonnegative(betas)
        && dominated
        && sum_alpha == sum_beta;

    let sq_alpha: Rational = alphas.iter().map(Rational::square).sum();
    let sq_beta: Rational = betas.iter().map(Rational::square).sum();
    Ok(NumkritReport {
        hypotheses_hold,
        inequality_holds: sq_beta <= sq_alpha,
        equality: sq_beta == sq_alpha,
    })
}

/// Compares slope vectors of a subsheaf `σ` and the ambient sheaf `τ`:
/// `σ_i ≤ τ_i` for all `i`, or `σ_i ≤ τ_{i+1}` when `shifted`.
pub fn interleave_check(
    sigma: &SlopeVector,
    tau: &SlopeVector,
    shifted: bool,
) -> Result<bool, ExtensionError> {
    let offset = usize::from(shifted);
    if sigma.len() + offset > tau.len() {
        return Err(ExtensionError::LengthMismatch(format!(
            "sigma has {} entries, tau has {} (shifted = {shifted})",
            sigma.len(),
            tau.len()
        )));
    }
    Ok(sigma
        .entries()
        .iter()
        .zip(&tau.entries()[offset..])
        .all(|(s, t)| s <= t))
}

/// `μ_HK(S) − μ_HK(S′)` for an extension `S′` of `S` by `O`.
///
/// No sign is asserted in general; for the extensions covered above it is
/// zero when the class survives at nonnegative slope and positive otherwise.
pub fn hk_defect(s: &HnData, s_prime: &HnData) -> Result<Rational, ExtensionError> {
    if s_prime.total_rank() != s.total_rank() + BigInt::one()
        || s_prime.total_degree() != s.total_degree()
    {
        return Err(ExtensionError::ShapeMismatch(format!(
            "extension by O must have rank {} and degree {}, got rank {} and degree {}",
            s.total_rank() + BigInt::one(),
            s.total_degree(),
            s_prime.total_rank(),
            s_prime.total_degree()
        )));
    }
    Ok(s.mu_hk() - s_prime.mu_hk())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hn::validate_hn;
    use crate::strategies::arb_hn;
    use proptest::prelude::*;

    fn hn(pairs: &[(i64, i64)]) -> HnData {
        validate_hn(pairs.iter().copied()).unwrap()
    }

    fn lvl(n: usize) -> ClassLevel {
        ClassLevel::at(n).unwrap()
    }

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| Rational::integer(x)).collect()
    }

    #[test]
    fn extension_positive_slope_inserts_trivial_block() {
        let s = hn(&[(1, 2), (1, -3)]);
        let e = extension_hn(&s, lvl(1)).unwrap();
        let exact = e.exact().unwrap();
        assert_eq!(exact, &hn(&[(1, 2), (1, 0), (1, -3)]));
        assert_eq!(exact.mu_hk(), Rational::integer(13));
        assert_eq!(s.mu_hk(), Rational::integer(13));
    }

    #[test]
    fn extension_zero_slope_enlarges_block() {
        let s = hn(&[(2, 0), (1, -3)]);
        assert_eq!(
            extension_hn(&s, lvl(1)).unwrap(),
            ExtensionResult::Exact(hn(&[(3, 0), (1, -3)]))
        );
        // class surviving higher up still lands at the last nonnegative block
        let s = hn(&[(1, 4), (2, 0), (1, -3)]);
        assert_eq!(
            extension_hn(&s, lvl(1)).unwrap(),
            ExtensionResult::Exact(hn(&[(1, 4), (3, 0), (1, -3)]))
        );
    }

    #[test]
    fn extension_negative_slope_is_indeterminate() {
        let s = hn(&[(1, -3)]);
        assert_eq!(
            extension_hn(&s, lvl(1)).unwrap(),
            ExtensionResult::Indeterminate {
                strict_upper: Rational::integer(9),
                lower: Some(q(9, 2)),
            }
        );
        let s = hn(&[(1, 2), (1, -3)]);
        assert_eq!(
            extension_hn(&s, lvl(2)).unwrap(),
            ExtensionResult::Indeterminate {
                strict_upper: Rational::integer(13),
                lower: None,
            }
        );
    }

    #[test]
    fn zero_class_splits() {
        let s = hn(&[(1, 2), (1, -1)]);
        assert_eq!(
            extension_hn(&s, ClassLevel::ZERO_CLASS).unwrap(),
            ExtensionResult::Exact(hn(&[(1, 2), (1, 0), (1, -1)]))
        );
        // splitting with an existing slope-0 block coalesces
        let s = hn(&[(2, 0)]);
        assert_eq!(
            extension_hn(&s, ClassLevel::ZERO_CLASS).unwrap(),
            ExtensionResult::Exact(hn(&[(3, 0)]))
        );
    }

    #[test]
    fn level_out_of_range() {
        let s = hn(&[(1, 2), (1, -1)]);
        assert_eq!(
            extension_hn(&s, lvl(3)),
            Err(ExtensionError::LevelOutOfRange {
                level: 3,
                blocks: 2
            })
        );
        assert!(is_affine_torsor(&s, lvl(3)).is_err());
        assert!(hk_drops(&s, lvl(5)).is_err());
        assert!(ClassLevel::at(0).is_err());
    }

    #[test]
    fn affine_torsor_examples() {
        let neg = hn(&[(1, -3)]);
        let pos = hn(&[(1, 2), (1, -3)]);
        assert!(is_affine_torsor(&neg, lvl(1)).unwrap());
        assert!(!is_affine_torsor(&pos, lvl(1)).unwrap());
        assert!(!is_affine_torsor(&neg, ClassLevel::ZERO_CLASS).unwrap());
        assert!(hk_drops(&neg, lvl(1)).unwrap());
        assert!(!hk_drops(&pos, lvl(1)).unwrap());
        assert!(!hk_drops(&neg, ClassLevel::ZERO_CLASS).unwrap());
        assert!(is_affine_torsor(&pos, lvl(2)).unwrap());
    }

    #[test]
    fn numkrit_examples() {
        let strict = numkrit_check(&ints(&[2, 2]), &[q(1, 1), q(3, 2), q(3, 2)]).unwrap();
        assert_eq!(
            strict,
            NumkritReport {
                hypotheses_hold: true,
                inequality_holds: true,
                equality: false
            }
        );
        // Σβ² = 1 + 9/4 + 9/4 = 11/2 against Σα² = 8
        let beta_sq: Rational = [q(1, 1), q(3, 2), q(3, 2)]
            .iter()
            .map(Rational::square)
            .sum();
        assert_eq!(beta_sq, q(11, 2));

        let eq = numkrit_check(&ints(&[1, 1]), &ints(&[0, 1, 1])).unwrap();
        assert!(eq.hypotheses_hold && eq.inequality_holds && eq.equality);

        let bad = numkrit_check(&ints(&[1, 2]), &ints(&[0, 1, 1])).unwrap();
        assert!(!bad.hypotheses_hold);

        assert!(matches!(
            numkrit_check(&ints(&[1, 2]), &ints(&[0, 1])),
            Err(ExtensionError::LengthMismatch(_))
        ));
    }

    #[test]
    fn numkrit_hypothesis_failures() {
        // decreasing alphas
        assert!(
            !numkrit_check(&ints(&[2, 1]), &ints(&[0, 1, 2]))
                .unwrap()
                .hypotheses_hold
        );
        // negative entry
        assert!(
            !numkrit_check(&ints(&[1, 1]), &ints(&[-1, 1, 2]))
                .unwrap()
                .hypotheses_hold
        );
        // α_1 < β_2
        assert!(
            !numkrit_check(&ints(&[1, 3]), &ints(&[0, 2, 2]))
                .unwrap()
                .hypotheses_hold
        );
        // empty alpha, single beta 0
        let r = numkrit_check(&[], &ints(&[0])).unwrap();
        assert!(r.hypotheses_hold && r.equality);
    }

    #[test]
    fn interleave_examples() {
        let sv = |v: &[i64]| SlopeVector::new(ints(v)).unwrap();
        assert!(interleave_check(&sv(&[-2]), &sv(&[-1, -1]), true).unwrap());
        assert!(!interleave_check(&sv(&[-2]), &sv(&[-3, -4]), false).unwrap());
        assert!(SlopeVector::new(ints(&[-3, -1])).is_err());
        let v = sv(&[3, 1, 1, -2]);
        assert!(interleave_check(&v, &v, false).unwrap());
        assert!(matches!(
            interleave_check(&v, &v, true),
            Err(ExtensionError::LengthMismatch(_))
        ));
        assert!(matches!(
            interleave_check(&sv(&[1, 1]), &sv(&[1]), false),
            Err(ExtensionError::LengthMismatch(_))
        ));
    }

    #[test]
    fn hk_defect_examples() {
        let s = hn(&[(1, 2), (1, -3)]);
        let e = extension_hn(&s, lvl(1)).unwrap();
        assert_eq!(hk_defect(&s, e.exact().unwrap()).unwrap(), Rational::zero());
        assert_eq!(
            hk_defect(&hn(&[(1, -4)]), &hn(&[(2, -6)])),
            Err(ExtensionError::ShapeMismatch(
                "extension by O must have rank 2 and degree -4, got rank 2 and degree -6".into()
            ))
        );
        assert_eq!(
            hk_defect(&hn(&[(1, -2)]), &hn(&[(2, -2)])).unwrap(),
            Rational::integer(2)
        );
    }

    proptest! {
        #[test]
        fn nonnegative_levels_give_exact_data(s in arb_hn()) {
            for n in 1..=s.len() {
                let result = extension_hn(&s, lvl(n)).unwrap();
                let nonneg = !s.blocks()[n - 1].degree().is_negative();
                prop_assert_eq!(result.exact().is_some(), nonneg);
                prop_assert_eq!(is_affine_torsor(&s, lvl(n)).unwrap(), !nonneg);
                prop_assert_eq!(hk_drops(&s, lvl(n)).unwrap(), !nonneg);
                match result {
                    ExtensionResult::Exact(e) => {
                        prop_assert_eq!(e.mu_hk(), s.mu_hk());
                        prop_assert_eq!(e.total_rank(), s.total_rank() + 1);
                        prop_assert_eq!(e.total_degree(), s.total_degree());
                        prop_assert!(!e.ss_defect().is_negative());
                        prop_assert_eq!(hk_defect(&s, &e).unwrap(), Rational::zero());
                        let mut expected = s.expand_slopes().entries().to_vec();
                        expected.push(Rational::zero());
                        expected.sort_by(|a, b| b.cmp(a));
                        prop_assert_eq!(e.expand_slopes().entries().to_vec(), expected);
                    }
                    ExtensionResult::Indeterminate { strict_upper, lower } => {
                        prop_assert_eq!(&strict_upper, &s.mu_hk());
                        prop_assert_eq!(lower.is_some(), s.is_semistable());
                        if let Some(lower) = lower {
                            prop_assert!(lower < strict_upper);
                        }
                    }
                }
            }
        }

        /// β_1 = Σδ, β_{i+1} = α_i − δ_i, filtered to satisfy the hypotheses.
        #[test]
        fn numkrit_delta_construction(
            raw in prop::collection::vec((0i64..30, 0i64..4), 1..6),
        ) {
            let mut alphas: Vec<Rational> = raw.iter().map(|&(a, _)| Rational::integer(a)).collect();
            alphas.sort();
            let deltas: Vec<Rational> = raw.iter().map(|&(_, d)| Rational::new(d, 2)).collect();
            let mut betas = vec![deltas.iter().sum::<Rational>()];
            betas.extend(alphas.iter().zip(&deltas).map(|(a, d)| a - d));
            let ok = betas.windows(2).all(|w| w[0] <= w[1]) && betas.iter().all(|b| !b.is_negative());
            prop_assume!(ok);
            let report = numkrit_check(&alphas, &betas).unwrap();
            prop_assert!(report.hypotheses_hold);
            prop_assert!(report.inequality_holds);
            prop_assert_eq!(report.equality, deltas.iter().all(Rational::is_zero));
        }
    }
}
