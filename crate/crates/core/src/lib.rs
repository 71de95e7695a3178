//! Exact arithmetic for heights of subschemes of projective space over Q,
//! discrepancies of log pairs on simple normal crossing models, resolution
//! of plane curve singularities with multiplier-like ideal membership, and
//! experiments relating gcds of integer points to curve multiplicities.
//!
//! All quantities that are integers or rationals in the mathematics are kept
//! exact. Logarithms are carried symbolically as [`LogExpr`] until a float is
//! requested, so identities such as `h_O = (m/d) h` can be checked with zero
//! tolerance.

pub mod curveres;
pub mod error;
pub mod experiments;
pub mod heights;
pub mod json;
pub mod logexpr;
pub mod places;
pub mod poly;
pub mod snc;

pub use error::{Error, Result};
pub use logexpr::LogExpr;
pub use places::{local_log_norm, padic_valuation, LogValue, Place, Rat};
