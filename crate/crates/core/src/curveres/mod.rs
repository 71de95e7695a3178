//! Resolution of plane curve singularities at rational centers, valuation
//! data of the exceptional curves, discrepancies of `(A^2, c C)`, log
//! canonical thresholds, and membership in the ideals `H`, `J`, `I`.

mod ideals;
mod tree;

pub use ideals::{
    classify_pair, ideal_member, ideal_member_on, lct, lct_of_tree, ord_along, pair_discrepancies,
    resolved_snc_pair, thresholds, IdealKind, OrderData, ValuationData, STRICT_ID,
};
pub use tree::{resolve, Chart, NodeSummary, ResolutionTree, TreeNode, DEFAULT_MAX_DEPTH};

use crate::error::{Error, Result};
use crate::places::Rat;
use crate::poly::BiPoly;

/// Reduced plane curve `f = 0` with rational coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineCurve {
    f: BiPoly,
}

impl AffineCurve {
    pub fn new(f: BiPoly) -> Result<Self> {
        match f.total_degree() {
            None => return Err(Error::InvalidCurve("zero polynomial".into())),
            Some(0) => return Err(Error::InvalidCurve("constant polynomial".into())),
            _ => {}
        }
        if !f.is_squarefree() {
            return Err(Error::NotSquarefree);
        }
        Ok(AffineCurve { f })
    }

    pub fn poly(&self) -> &BiPoly {
        &self.f
    }

    /// The same curve in coordinates centered at `(a, b)`.
    pub fn centered_at(&self, a: &Rat, b: &Rat) -> AffineCurve {
        AffineCurve {
            f: self.f.translate(a, b),
        }
    }
}

/// Order of the lowest form of `f` at `(a, b)`; zero off the curve.
pub fn multiplicity_at(f: &AffineCurve, a: &Rat, b: &Rat) -> u32 {
    f.f.translate(a, b).order().expect("nonzero curve")
}
