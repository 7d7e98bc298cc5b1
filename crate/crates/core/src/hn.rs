//! Harder-Narasimhan data of a vector bundle on a smooth projective curve
//! (characteristic zero) and the Hilbert-Kunz slope calculus on it.
//!
//! A bundle enters only through its HN filtration `S_1 ⊂ … ⊂ S_t = S`,
//! recorded as the `(rank, degree)` pairs of the semistable quotients
//! `S_k / S_{k-1}` in order of strictly decreasing slope. The curve itself is
//! never represented, so whether a given block list is realized by an actual
//! bundle on a given curve is not checked: data is taken at face value.
//!
//! The Hilbert-Kunz slope is `μ_HK(S) = Σ r_k μ_k² = Σ deg_k² / r_k`.

use std::cmp::Ordering;
use std::fmt;
use std::num::NonZeroU64;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::rational::Rational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HnError {
    #[error("HN data needs at least one block")]
    Empty,
    #[error("block {index} has non-positive rank {rank}")]
    NonPositiveRank { index: usize, rank: BigInt },
    #[error("slopes of blocks {index} and {} are not strictly decreasing ({left} then {right})", index + 1)]
    NonDecreasingSlopes {
        /// 1-based index of the first block of the offending adjacent pair.
        index: usize,
        left: Box<Rational>,
        right: Box<Rational>,
    },
}

/// One semistable quotient `S_k / S_{k-1}` of the filtration.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HnBlock {
    rank: BigInt,
    degree: BigInt,
}

impl HnBlock {
    /// Fails with [`HnError::NonPositiveRank`] (index 1) if `rank < 1`.
    pub fn new(rank: impl Into<BigInt>, degree: impl Into<BigInt>) -> Result<Self, HnError> {
        let rank = rank.into();
        if !rank.is_positive() {
            return Err(HnError::NonPositiveRank { index: 1, rank });
        }
        Ok(HnBlock {
            rank,
            degree: degree.into(),
        })
    }

    pub fn rank(&self) -> &BigInt {
        &self.rank
    }

    pub fn degree(&self) -> &BigInt {
        &self.degree
    }

    pub fn slope(&self) -> Rational {
        Rational::new(self.degree.clone(), self.rank.clone())
    }

    /// `deg² / rank`, the contribution of this block to `μ_HK`.
    pub fn mu_hk(&self) -> Rational {
        Rational::new(&self.degree * &self.degree, self.rank.clone())
    }

    /// Compares slopes by cross-multiplication; ranks are positive.
    fn cmp_slope(&self, other: &HnBlock) -> Ordering {
        (&self.degree * &other.rank).cmp(&(&other.degree * &self.rank))
    }
}

/// HN filtration data: blocks with positive ranks and strictly decreasing slopes.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HnData {
    blocks: Vec<HnBlock>,
}

/// Validates raw `(rank, degree)` pairs into [`HnData`].
pub fn validate_hn<R, D>(blocks: impl IntoIterator<Item = (R, D)>) -> Result<HnData, HnError>
where
    R: Into<BigInt>,
    D: Into<BigInt>,
{
    let blocks = blocks
        .into_iter()
        .enumerate()
        .map(|(i, (r, d))| {
            HnBlock::new(r, d).map_err(|e| match e {
                HnError::NonPositiveRank { rank, .. } => {
                    HnError::NonPositiveRank { index: i + 1, rank }
                }
                other => other,
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    HnData::from_blocks(blocks)
}

impl HnData {
    pub fn from_blocks(blocks: Vec<HnBlock>) -> Result<Self, HnError> {
        if blocks.is_empty() {
            return Err(HnError::Empty);
        }
        for (i, pair) in blocks.windows(2).enumerate() {
            if pair[0].cmp_slope(&pair[1]) != Ordering::Greater {
                return Err(HnError::NonDecreasingSlopes {
                    index: i + 1,
                    left: Box::new(pair[0].slope()),
                    right: Box::new(pair[1].slope()),
                });
            }
        }
        Ok(HnData { blocks })
    }

    /// A semistable bundle of the given rank and degree.
    pub fn semistable(rank: impl Into<BigInt>, degree: impl Into<BigInt>) -> Result<Self, HnError> {
        Ok(HnData {
            blocks: vec![HnBlock::new(rank, degree)?],
        })
    }

    /// Sorts blocks by decreasing slope and merges blocks of equal slope.
    ///
    /// A direct sum of semistable bundles of one slope is semistable, so this
    /// is the HN data of the direct sum of the given semistable pieces.
    pub(crate) fn canonicalize(mut blocks: Vec<HnBlock>) -> HnData {
        debug_assert!(!blocks.is_empty());
        blocks.sort_by(|a, b| b.cmp_slope(a));
        let mut merged: Vec<HnBlock> = Vec::with_capacity(blocks.len());
        for block in blocks {
            match merged.last_mut() {
                Some(last) if last.cmp_slope(&block) == Ordering::Equal => {
                    last.rank += block.rank;
                    last.degree += block.degree;
                }
                _ => merged.push(block),
            }
        }
        HnData { blocks: merged }
    }

    pub fn blocks(&self) -> &[HnBlock] {
        &self.blocks
    }

    /// Number of filtration steps `t`.
    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    /// Always false; kept for API symmetry with `len`.
    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn is_semistable(&self) -> bool {
        self.blocks.len() == 1
    }

    pub fn total_rank(&self) -> BigInt {
        self.blocks.iter().map(|b| &b.rank).sum()
    }

    pub fn total_degree(&self) -> BigInt {
        self.blocks.iter().map(|b| &b.degree).sum()
    }

    pub fn slope(&self) -> Rational {
        Rational::new(self.total_degree(), self.total_rank())
    }

    /// Slope of the `k`-th quotient, 1-based.
    pub fn slope_at(&self, k: usize) -> Option<Rational> {
        k.checked_sub(1)
            .and_then(|i| self.blocks.get(i))
            .map(HnBlock::slope)
    }

    pub fn mu_max(&self) -> Rational {
        self.blocks[0].slope()
    }

    pub fn mu_min(&self) -> Rational {
        self.blocks[self.blocks.len() - 1].slope()
    }

    /// Hilbert-Kunz slope `Σ deg_k² / r_k`.
    pub fn mu_hk(&self) -> Rational {
        self.blocks.iter().map(HnBlock::mu_hk).sum()
    }

    /// The slope of each quotient repeated rank-many times, non-increasing.
    ///
    /// Panics if the total rank does not fit in memory as a vector length.
    pub fn expand_slopes(&self) -> SlopeVector {
        let mut entries = Vec::new();
        for block in &self.blocks {
            let count = block
                .rank
                .to_usize()
                .expect("rank too large to expand into a slope vector");
            let slope = block.slope();
            entries.extend(std::iter::repeat_n(slope, count));
        }
        SlopeVector(entries)
    }

    /// HN data of the dual bundle: blocks reversed, degrees negated.
    pub fn dual(&self) -> HnData {
        HnData {
            blocks: self
                .blocks
                .iter()
                .rev()
                .map(|b| HnBlock {
                    rank: b.rank.clone(),
                    degree: -&b.degree,
                })
                .collect(),
        }
    }

    /// Tensor with a line bundle of degree `line_degree`.
    pub fn twist(&self, line_degree: impl Into<BigInt>) -> HnData {
        let l = line_degree.into();
        HnData {
            blocks: self
                .blocks
                .iter()
                .map(|b| HnBlock {
                    rank: b.rank.clone(),
                    degree: &b.degree + &b.rank * &l,
                })
                .collect(),
        }
    }

    pub fn direct_sum(&self, other: &HnData) -> HnData {
        HnData::canonicalize(self.blocks.iter().chain(&other.blocks).cloned().collect())
    }

    /// Tensor product. In characteristic zero the tensor product of
    /// semistable bundles is semistable, so the quotients are the pairwise
    /// products of quotients, coalesced by slope.
    pub fn tensor(&self, other: &HnData) -> HnData {
        let mut blocks = Vec::with_capacity(self.blocks.len() * other.blocks.len());
        for s in &self.blocks {
            for t in &other.blocks {
                blocks.push(HnBlock {
                    rank: &s.rank * &t.rank,
                    degree: &t.rank * &s.degree + &s.rank * &t.degree,
                });
            }
        }
        HnData::canonicalize(blocks)
    }

    /// Pull-back along a finite map of degree `n`.
    pub fn pullback(&self, n: NonZeroU64) -> HnData {
        let n = BigInt::from(n.get());
        HnData {
            blocks: self
                .blocks
                .iter()
                .map(|b| HnBlock {
                    rank: b.rank.clone(),
                    degree: &b.degree * &n,
                })
                .collect(),
        }
    }

    /// `μ_HK(S) − deg(S)²/rk(S)`: nonnegative, zero exactly for semistable data,
    /// and unchanged by twisting.
    pub fn ss_defect(&self) -> Rational {
        let degree = self.total_degree();
        self.mu_hk() - Rational::new(&degree * &degree, self.total_rank())
    }

    /// Raw `(rank, degree)` pairs, for display and encoding.
    pub fn pairs(&self) -> Vec<(BigInt, BigInt)> {
        self.blocks
            .iter()
            .map(|b| (b.rank.clone(), b.degree.clone()))
            .collect()
    }

    /// The trivial line bundle `O`.
    pub fn trivial() -> HnData {
        HnData {
            blocks: vec![HnBlock {
                rank: BigInt::one(),
                degree: BigInt::zero(),
            }],
        }
    }
}

impl fmt::Display for HnData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, b) in self.blocks.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "[{},{}]", b.rank, b.degree)?;
        }
        f.write_str("]")
    }
}

/// Slopes of the HN quotients, each repeated rank-many times.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SlopeVector(Vec<Rational>);

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("slope vector is not non-increasing at position {index}")]
pub struct NotNonIncreasing {
    pub index: usize,
}

impl SlopeVector {
    pub fn new(entries: Vec<Rational>) -> Result<Self, NotNonIncreasing> {
        if let Some(i) = entries.windows(2).position(|w| w[0] < w[1]) {
            return Err(NotNonIncreasing { index: i + 1 });
        }
        Ok(SlopeVector(entries))
    }

    pub fn entries(&self) -> &[Rational] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn sum(&self) -> Rational {
        self.0.iter().sum()
    }

    pub fn sum_of_squares(&self) -> Rational {
        self.0.iter().map(Rational::square).sum()
    }
}
