//! Exact polynomial arithmetic over Q used by the resolution and sampling code.

mod bivariate;
mod univariate;

pub use bivariate::BiPoly;
pub use univariate::UniPoly;
