//! Exact MacLane–Vaquié chains over `(Q, v_p)`.
//!
//! The crate evaluates valuations on `Q[x]` built from a depth-zero root by
//! ordinary and limit augmentations, computes truncations and the `ε`
//! invariant, and converts between complete finite chains and complete sets
//! of abstract key polynomials.
//!
//! Polynomial arithmetic is generic over a [`Scalar`] field type; everything
//! that touches a p-adic valuation is fixed to exact rationals through the
//! aliases below.

pub mod base;
pub mod convert;
pub mod corpus;
pub mod error;
pub mod family;
pub mod fixtures;
pub mod invariants;
pub mod json;
pub mod poly;
pub mod rational;
pub mod report;
pub mod scalar;
pub mod suite;
pub mod valuation;
pub mod values;

pub use base::BaseValuation;
pub use convert::{AbkpGroup, AbkpSet};
pub use corpus::{CorpusSource, CorpusSpec};
pub use error::{Error, Result};
pub use family::{ContinuousFamily, FamilyItem, StableResult};
pub use poly::Poly;
pub use report::{Finding, Report, Status};
pub use scalar::Scalar;
pub use valuation::{Chain, DepthZero, LimitStep, OrdinaryStep, Step, TruncationView, Valuator};
pub use values::Value;

/// Arbitrary-precision rational number, always in lowest terms.
pub type Rational = num_rational::BigRational;

/// Polynomial with exact rational coefficients.
pub type QPoly = Poly<Rational>;

/// Polynomial with `f64` coefficients; useful for quick numeric work only.
pub type F64Poly = Poly<f64>;

/// Default number of family members generated before a stability decision.
pub const DEFAULT_BUDGET: usize = 64;
