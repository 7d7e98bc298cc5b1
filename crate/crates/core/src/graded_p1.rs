//! Monomial ideals in `K[x, y]` and their syzygy bundles on `Y = P¹`.
//!
//! An `(x, y)`-primary monomial ideal is a staircase of generators
//! `y^{b_1}, x^{a_2} y^{b_2}, …, x^{a_n}` with `a` strictly increasing and `b`
//! strictly decreasing. Its Hilbert-Burch resolution has one syzygy per pair
//! of adjacent corners, of degree `a_{j+1} + b_j`, so
//! `Syz(f_1, …, f_n)(0) ≅ ⊕ O(−e_j)` and the HN data is read off directly.
//!
//! Two independent routes to `e_HK` are provided: [`ehk`] evaluates the
//! slope formula on the syzygy bundle, [`ehk_oracle`] counts monomials under
//! the staircase of bracket powers.

use std::fmt;
use std::num::{NonZeroU32, NonZeroU64};
use std::str::FromStr;

use num_bigint::BigInt;
use thiserror::Error;

use crate::hn::{HnBlock, HnData};
use crate::rational::Rational;

/// Largest exponent accepted by the parsers. Keeps every bracket power used
/// by the oracle and every colength comfortably inside machine integers.
pub const MAX_EXPONENT: u32 = 1 << 20;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IdealError {
    #[error("no generators given")]
    Empty,
    #[error("ideal is not (x,y)-primary: {0}")]
    NotPrimary(String),
    #[error("oracle ratios disagree across bracket powers: {0}")]
    OracleInconsistency(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("cannot parse {input:?}: {reason}")]
    Parse { input: String, reason: String },
}

fn parse_err(input: &str, reason: impl Into<String>) -> IdealError {
    IdealError::Parse {
        input: input.to_string(),
        reason: reason.into(),
    }
}

/// The monomial `x^a y^b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    pub a: u32,
    pub b: u32,
}

impl Monomial {
    pub const fn new(a: u32, b: u32) -> Self {
        Monomial { a, b }
    }

    pub fn degree(&self) -> u64 {
        u64::from(self.a) + u64::from(self.b)
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.a <= other.a && self.b <= other.b
    }

    pub fn is_one(&self) -> bool {
        self.a == 0 && self.b == 0
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let factor = |var: char, e: u32| match e {
            0 => None,
            1 => Some(var.to_string()),
            e => Some(format!("{var}^{e}")),
        };
        let parts: Vec<String> = [factor('x', self.a), factor('y', self.b)]
            .into_iter()
            .flatten()
            .collect();
        if parts.is_empty() {
            f.write_str("1")
        } else {
            f.write_str(&parts.join("*"))
        }
    }
}

/// Parses `x^2*y^3`, `x*y`, `y`, `1`, or an exponent pair `[2,3]`.
impl FromStr for Monomial {
    type Err = IdealError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let text = s.trim();
        if text.is_empty() {
            return Err(parse_err(s, "empty monomial"));
        }
        if let Some(inner) = text.strip_prefix('[') {
            let inner = inner
                .strip_suffix(']')
                .ok_or_else(|| parse_err(s, "unterminated exponent pair"))?;
            let parts: Vec<&str> = inner.split(',').map(str::trim).collect();
            let [a, b] = parts.as_slice() else {
                return Err(parse_err(s, "exponent pair needs exactly two entries"));
            };
            return Ok(Monomial::new(parse_exponent(s, a)?, parse_exponent(s, b)?));
        }
        if text == "1" {
            return Ok(Monomial::new(0, 0));
        }
        let mut mono = Monomial::new(0, 0);
        for factor in text.split('*').map(str::trim) {
            let (var, exp) = match factor.split_once('^') {
                Some((v, e)) => (v.trim(), parse_exponent(s, e)?),
                None => (factor, 1),
            };
            let slot = match var {
                "x" => &mut mono.a,
                "y" => &mut mono.b,
                "1" if exp == 1 => continue,
                _ => return Err(parse_err(s, format!("unknown factor {factor:?}"))),
            };
            *slot = slot
                .checked_add(exp)
                .filter(|e| *e <= MAX_EXPONENT)
                .ok_or_else(|| parse_err(s, format!("exponent exceeds {MAX_EXPONENT}")))?;
        }
        Ok(mono)
    }
}

fn parse_exponent(input: &str, text: &str) -> Result<u32, IdealError> {
    let e: u32 = text
        .trim()
        .parse()
        .map_err(|_| parse_err(input, format!("bad exponent {text:?}")))?;
    if e > MAX_EXPONENT {
        return Err(parse_err(input, format!("exponent exceeds {MAX_EXPONENT}")));
    }
    Ok(e)
}

/// Minimal generators of an `(x, y)`-primary monomial ideal, sorted by
/// ascending `x`-exponent (so `y`-exponents strictly descend).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MonomialIdeal {
    gens: Vec<Monomial>,
}

impl MonomialIdeal {
    /// Drops every generator divisible by another and checks primarity.
    pub fn minimalize(raw: impl IntoIterator<Item = Monomial>) -> Result<Self, IdealError> {
        let mut all: Vec<Monomial> = raw.into_iter().collect();
        if all.is_empty() {
            return Err(IdealError::Empty);
        }
        all.sort();
        let mut gens: Vec<Monomial> = Vec::with_capacity(all.len());
        for m in all {
            // earlier entries have a ≤ m.a, so m is redundant iff some b ≤ m.b
            if gens.last().is_none_or(|g| m.b < g.b) {
                gens.push(m);
            }
        }
        if gens[0].is_one() {
            return Err(IdealError::NotPrimary("unit ideal".into()));
        }
        if gens[0].a != 0 {
            return Err(IdealError::NotPrimary("no pure power of y".into()));
        }
        if gens[gens.len() - 1].b != 0 {
            return Err(IdealError::NotPrimary("no pure power of x".into()));
        }
        Ok(MonomialIdeal { gens })
    }

    pub fn gens(&self) -> &[Monomial] {
        &self.gens
    }

    /// Number of minimal generators, always at least 2.
    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn degrees(&self) -> Vec<u64> {
        self.gens.iter().map(Monomial::degree).collect()
    }

    pub fn contains(&self, f: &Monomial) -> bool {
        membership_direct(self, f)
    }

    /// The ideal `(I, f)`, minimalized. Fails only for `f = 1`.
    pub fn with_element(&self, f: Monomial) -> Result<MonomialIdeal, IdealError> {
        MonomialIdeal::minimalize(self.gens.iter().copied().chain([f]))
    }

    /// `I ⊆ J`.
    pub fn is_subset_of(&self, other: &MonomialIdeal) -> bool {
        self.gens.iter().all(|g| other.contains(g))
    }
}

impl fmt::Display for MonomialIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, g) in self.gens.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{g}")?;
        }
        Ok(())
    }
}

/// Parses a comma-separated list `y^2, x*y, x^2` or a JSON-style array of
/// exponent pairs `[[0,2],[1,1],[2,0]]`, then minimalizes.
impl FromStr for MonomialIdeal {
    type Err = IdealError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let text = s.trim();
        let monomials = if let Some(inner) = text
            .strip_prefix('[')
            .filter(|t| t.trim_start().starts_with('['))
        {
            let inner = inner
                .trim_end()
                .strip_suffix(']')
                .ok_or_else(|| parse_err(s, "unterminated generator list"))?;
            split_pairs(s, inner)?
                .into_iter()
                .map(|p| p.parse())
                .collect::<Result<Vec<Monomial>, _>>()?
        } else {
            text.split(',')
                .filter(|p| !p.trim().is_empty())
                .map(str::parse)
                .collect::<Result<Vec<Monomial>, _>>()?
        };
        MonomialIdeal::minimalize(monomials)
    }
}

/// Splits `[a,b], [c,d]` into bracketed pieces.
fn split_pairs<'a>(input: &str, text: &'a str) -> Result<Vec<&'a str>, IdealError> {
    let mut out = Vec::new();
    let mut rest = text.trim();
    while !rest.is_empty() {
        if !rest.starts_with('[') {
            return Err(parse_err(input, "expected '[' in generator list"));
        }
        let end = rest
            .find(']')
            .ok_or_else(|| parse_err(input, "unterminated exponent pair"))?;
        out.push(&rest[..=end]);
        rest = rest[end + 1..].trim_start();
        if let Some(r) = rest.strip_prefix(',') {
            rest = r.trim_start();
            if rest.is_empty() {
                return Err(parse_err(input, "trailing comma"));
            }
        } else if !rest.is_empty() {
            return Err(parse_err(input, "expected ',' between exponent pairs"));
        }
    }
    Ok(out)
}

/// Number of monomials outside `I`: `Σ a_{j+1} (b_j − b_{j+1})`.
pub fn colength(ideal: &MonomialIdeal) -> u128 {
    ideal
        .gens
        .windows(2)
        .map(|w| u128::from(w[1].a) * u128::from(w[0].b - w[1].b))
        .sum()
}

/// `I^{[q]}`, generated by the `q`-th powers of the generators.
///
/// Panics if an exponent overflows `u32`; parsed inputs stay below
/// [`MAX_EXPONENT`], far from that for the small `q` used here.
pub fn bracket_power(ideal: &MonomialIdeal, q: NonZeroU32) -> MonomialIdeal {
    let q = q.get();
    let scale = |e: u32| e.checked_mul(q).expect("bracket power exponent overflow");
    MonomialIdeal {
        gens: ideal
            .gens
            .iter()
            .map(|g| Monomial::new(scale(g.a), scale(g.b)))
            .collect(),
    }
}

/// `e_HK(I) = colength(I^{[q]}) / q²`, checked to agree for `q = 1, 2, 3`.
///
/// Over the polynomial ring the ratio does not depend on `q`, so this is the
/// limit defining the Hilbert-Kunz multiplicity.
pub fn ehk_oracle(ideal: &MonomialIdeal) -> Result<Rational, IdealError> {
    let ratios: Vec<Rational> = (1u32..=3)
        .map(|q| {
            let len = colength(&bracket_power(ideal, NonZeroU32::new(q).unwrap()));
            Rational::new(BigInt::from(len), BigInt::from(q * q))
        })
        .collect();
    if ratios.iter().any(|r| r != &ratios[0]) {
        let shown: Vec<String> = ratios.iter().map(ToString::to_string).collect();
        return Err(IdealError::OracleInconsistency(format!(
            "ideal ({ideal}) gives ratios {}",
            shown.join(", ")
        )));
    }
    Ok(ratios[0].clone())
}

/// Twists `e_j` with `Syz(f_1, …, f_n)(0) ≅ ⊕ O(−e_j)`, sorted ascending.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SyzygySplitting(Vec<u64>);

impl SyzygySplitting {
    pub fn twists(&self) -> &[u64] {
        &self.0
    }

    /// Rank of the syzygy bundle, `n − 1`.
    pub fn rank(&self) -> usize {
        self.0.len()
    }
}

/// Adjacent-corner syzygies: `e_j = a_{j+1} + b_j`.
pub fn syzygy_splitting(ideal: &MonomialIdeal) -> SyzygySplitting {
    let mut twists: Vec<u64> = ideal
        .gens
        .windows(2)
        .map(|w| u64::from(w[1].a) + u64::from(w[0].b))
        .collect();
    twists.sort_unstable();
    SyzygySplitting(twists)
}

/// HN data of `Syz(f_1, …, f_n)(m)` on `P¹`.
pub fn syzygy_hn(ideal: &MonomialIdeal, m: i64) -> HnData {
    let m = BigInt::from(m);
    let blocks = syzygy_splitting(ideal)
        .0
        .into_iter()
        .map(|e| HnBlock::new(1, &m - BigInt::from(e)).expect("rank 1"))
        .collect();
    HnData::canonicalize(blocks)
}

/// `e_HK = (μ_HK(Syz(0)) − deg(Y)² Σ d_i²) / (2 deg(Y))` from HN data of the
/// syzygy bundle of generators of degrees `d_i` on a curve of degree `deg(Y)`.
pub fn ehk_from_hn(
    deg_y: NonZeroU64,
    degrees: &[u64],
    syz0: &HnData,
) -> Result<Rational, IdealError> {
    let deg_y = BigInt::from(deg_y.get());
    if degrees.len() < 2 {
        return Err(IdealError::ShapeMismatch(format!(
            "need at least two generator degrees, got {}",
            degrees.len()
        )));
    }
    let expected_rank = BigInt::from(degrees.len() - 1);
    if syz0.total_rank() != expected_rank {
        return Err(IdealError::ShapeMismatch(format!(
            "syzygy bundle has rank {}, expected {expected_rank}",
            syz0.total_rank()
        )));
    }
    let degree_sum: BigInt = degrees.iter().map(|&d| BigInt::from(d)).sum();
    let expected_degree = -(&deg_y * degree_sum);
    if syz0.total_degree() != expected_degree {
        return Err(IdealError::ShapeMismatch(format!(
            "syzygy bundle has degree {}, expected {expected_degree}",
            syz0.total_degree()
        )));
    }
    let square_sum: BigInt = degrees
        .iter()
        .map(|&d| BigInt::from(d) * BigInt::from(d))
        .sum();
    let numerator = syz0.mu_hk() - Rational::integer(&deg_y * &deg_y * square_sum);
    Ok(numerator / Rational::integer(BigInt::from(2) * deg_y))
}

/// `e_HK(I)` via the syzygy bundle on `P¹`.
pub fn ehk(ideal: &MonomialIdeal) -> Rational {
    ehk_from_hn(NonZeroU64::MIN, &ideal.degrees(), &syzygy_hn(ideal, 0))
        .expect("Hilbert-Burch syzygies balance the presenting sequence")
}

/// Some generator divides `f`.
pub fn membership_direct(ideal: &MonomialIdeal, f: &Monomial) -> bool {
    ideal.gens.iter().any(|g| g.divides(f))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HkMembership {
    pub member: bool,
    pub ehk_ideal: Rational,
    pub ehk_extended: Rational,
}

/// Decides `f ∈ I*` by comparing `e_HK(I)` with `e_HK((I, f))`.
///
/// For `f = 1` the extended ideal is the unit ideal, whose colength and
/// Hilbert-Kunz multiplicity are 0.
pub fn hk_membership(ideal: &MonomialIdeal, f: &Monomial) -> HkMembership {
    let ehk_ideal = ehk(ideal);
    let ehk_extended = match ideal.with_element(*f) {
        Ok(extended) => ehk(&extended),
        Err(_) => Rational::zero(),
    };
    HkMembership {
        member: ehk_ideal == ehk_extended,
        ehk_ideal,
        ehk_extended,
    }
}

pub fn membership_via_hk(ideal: &MonomialIdeal, f: &Monomial) -> bool {
    hk_membership(ideal, f).member
}

/// Checks on one instance that `e_HK(I) = e_HK((I, f))` exactly when the
/// syzygy bundles twisted by `m = deg f` have equal Hilbert-Kunz slopes.
///
/// `f = 1` yields the unit ideal, which has no syzygy bundle of the required
/// kind, and is rejected with [`IdealError::NotPrimary`].
pub fn hk_slope_bridge_check(ideal: &MonomialIdeal, f: &Monomial) -> Result<bool, IdealError> {
    let extended = ideal.with_element(*f)?;
    let m = i64::try_from(f.degree()).expect("degree bounded by 2 * u32::MAX");
    let same_ehk = ehk(ideal) == ehk(&extended);
    let same_slope = syzygy_hn(ideal, m).mu_hk() == syzygy_hn(&extended, m).mu_hk();
    Ok(same_ehk == same_slope)
}
