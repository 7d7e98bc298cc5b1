//! Exact Hilbert-Kunz slopes of vector bundles on curves and
//! characteristic-zero Hilbert-Kunz multiplicities.
//!
//! * [`hn`]: Harder-Narasimhan data as `(rank, degree)` blocks and the
//!   operation algebra of the Hilbert-Kunz slope `μ_HK = Σ r_k μ_k²`.
//! * [`extension`]: extensions of a bundle by the structure sheaf, the
//!   affineness / slope-drop criterion and the two numerical lemmas behind it.
//! * [`graded_p1`]: monomial ideals in `K[x, y]`, their syzygy bundles on
//!   `P¹`, `e_HK` by the slope formula and by staircase counting, and solid
//!   closure membership via `e_HK(I) = e_HK((I, f))`.
//! * [`sweep`]: exhaustive cross-checks over small monomial ideals.
//! * [`json`]: the JSON encodings used by the command line.
//!
//! All arithmetic is exact; there is no floating point anywhere.
//!
//! ```
//! use hkslope::graded_p1::{ehk, ehk_oracle, membership_via_hk, Monomial, MonomialIdeal};
//! use hkslope::Rational;
//!
//! let ideal: MonomialIdeal = "y^2, x*y, x^2".parse().unwrap();
//! assert_eq!(ehk(&ideal), Rational::integer(3));
//! assert_eq!(ehk_oracle(&ideal).unwrap(), Rational::integer(3));
//!
//! let i: MonomialIdeal = "y^2, x^2".parse().unwrap();
//! assert!(!membership_via_hk(&i, &Monomial::new(1, 1)));
//! ```

pub mod extension;
pub mod graded_p1;
pub mod hn;
pub mod json;
pub mod rational;
pub mod sweep;

pub use extension::{
    extension_hn, hk_defect, hk_drops, interleave_check, is_affine_torsor, numkrit_check,
    ClassLevel, ExtensionError, ExtensionResult, NumkritReport,
};
pub use hn::{validate_hn, HnBlock, HnData, HnError, SlopeVector};
pub use rational::Rational;
