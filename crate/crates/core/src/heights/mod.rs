//! Weil functions, heights, counting and proximity functions of closed
//! subschemes of `P^n` over Q with `S = {inf}`.
//!
//! Every subscheme is given by a fixed list of homogeneous integer
//! generators and the local Weil function at a place `v` is
//!
//! ```text
//! lambda_v(x) = min_i -log( ||f_i(x)||_v / max_j ||x_j||_v^deg f_i )
//! ```
//!
//! evaluated at the primitive integer representative of `x`. At a prime the
//! denominator is 1, so the counting function is `log gcd_i f_i(x)`.

mod homog;

use std::cmp::Ordering;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

pub use homog::HomogPoly;

use crate::error::{Error, Result};
use crate::logexpr::LogExpr;
use crate::places::{int_valuation, LogValue, Place, Rat};

/// Point of `P^n(Q)` in primitive integer coordinates whose first nonzero
/// coordinate is positive.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjPoint {
    coords: Vec<BigInt>,
}

impl ProjPoint {
    /// Normalizes integer coordinates.
    pub fn new(coords: Vec<BigInt>) -> Result<Self> {
        let g = coords.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        if g.is_zero() {
            return Err(Error::AllZero);
        }
        let lead_negative = coords
            .iter()
            .find(|c| !c.is_zero())
            .is_some_and(|c| c.is_negative());
        let g = if lead_negative { -g } else { g };
        Ok(ProjPoint {
            coords: coords.into_iter().map(|c| c / &g).collect(),
        })
    }

    pub fn from_ints(coords: &[i64]) -> Result<Self> {
        ProjPoint::new(coords.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len() - 1
    }

    /// `max_j |x_j|`, at least 1.
    pub fn max_abs(&self) -> BigUint {
        self.coords
            .iter()
            .map(|c| c.magnitude().clone())
            .max()
            .expect("nonempty")
    }
}

impl std::fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(":"))
    }
}

/// Clears denominators, divides by the content and fixes the sign.
pub fn normalize_point(raw: &[Rat]) -> Result<ProjPoint> {
    if raw.is_empty() {
        return Err(Error::AllZero);
    }
    let lcm = raw.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    ProjPoint::new(
        raw.iter()
            .map(|q| (q * Rat::from_integer(lcm.clone())).to_integer())
            .collect(),
    )
}

/// Closed subscheme of `P^n` presented by homogeneous generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subscheme {
    generators: Vec<HomogPoly>,
}

impl Subscheme {
    pub fn new(generators: Vec<HomogPoly>) -> Result<Self> {
        let Some(first) = generators.first() else {
            return Err(Error::InvalidPolynomial(
                "subscheme needs at least one generator".into(),
            ));
        };
        let vars = first.vars();
        if let Some(g) = generators.iter().find(|g| g.vars() != vars) {
            return Err(Error::DimensionMismatch {
                expected: vars,
                got: g.vars(),
            });
        }
        Ok(Subscheme { generators })
    }

    /// The linear subspace `x_0 = ... = x_l = 0` of `P^n`.
    pub fn coordinate_subspace(n: usize, l: usize) -> Self {
        Subscheme::new((0..=l).map(|i| HomogPoly::coordinate(n + 1, i)).collect())
            .expect("coordinates")
    }

    pub fn generators(&self) -> &[HomogPoly] {
        &self.generators
    }

    /// Ambient `n` in `P^n`.
    pub fn ambient_dim(&self) -> usize {
        self.generators[0].vars() - 1
    }

    /// Subscheme of the product ideal, generated by pairwise products.
    pub fn product(&self, other: &Subscheme) -> Result<Subscheme> {
        self.check_same_ambient(other)?;
        Subscheme::new(
            self.generators
                .iter()
                .flat_map(|f| other.generators.iter().map(move |g| f.mul(g)))
                .collect(),
        )
    }

    /// Subscheme of the sum ideal (scheme-theoretic intersection).
    pub fn intersection(&self, other: &Subscheme) -> Result<Subscheme> {
        self.check_same_ambient(other)?;
        let mut gens = self.generators.clone();
        gens.extend(other.generators.iter().cloned());
        Subscheme::new(gens)
    }

    fn check_same_ambient(&self, other: &Subscheme) -> Result<()> {
        if self.ambient_dim() != other.ambient_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim(),
                got: other.ambient_dim(),
            });
        }
        Ok(())
    }

    fn values(&self, x: &ProjPoint) -> Result<Vec<BigInt>> {
        if x.dim() != self.ambient_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim(),
                got: x.dim(),
            });
        }
        Ok(self.generators.iter().map(|f| f.eval(x.coords())).collect())
    }

    /// True when every generator vanishes at `x`.
    pub fn contains(&self, x: &ProjPoint) -> Result<bool> {
        Ok(self.values(x)?.iter().all(|v| v.is_zero()))
    }
}

/// Formal Q-linear combination of subschemes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QSubscheme {
    terms: Vec<(Subscheme, Rat)>,
}

impl QSubscheme {
    pub fn new(terms: Vec<(Subscheme, Rat)>) -> Result<Self> {
        if terms.iter().any(|(_, c)| c.is_zero()) {
            return Err(Error::InvalidParameter(
                "Q-subscheme coefficients must be nonzero".into(),
            ));
        }
        Ok(QSubscheme { terms })
    }

    pub fn terms(&self) -> &[(Subscheme, Rat)] {
        &self.terms
    }
}

/// `(h, N, m)` with `h = N + m`, carried exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactHeightTriple {
    pub height: LogExpr,
    pub counting: LogExpr,
    pub proximity: LogExpr,
}

impl ExactHeightTriple {
    fn zero() -> Self {
        ExactHeightTriple {
            height: LogExpr::zero(),
            counting: LogExpr::zero(),
            proximity: LogExpr::zero(),
        }
    }

    pub fn to_values(&self) -> HeightTriple {
        HeightTriple {
            height: LogValue::from(&self.height),
            counting: LogValue::from(&self.counting),
            proximity: LogValue::from(&self.proximity),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HeightTriple {
    pub height: LogValue,
    pub counting: LogValue,
    pub proximity: LogValue,
}

/// Exact local Weil function; `None` stands for `+inf` (point in the support).
pub fn weil_local_exact(z: &Subscheme, x: &ProjPoint, v: Place) -> Result<Option<LogExpr>> {
    let values = z.values(x)?;
    match v {
        Place::Finite(p) => {
            let min = values
                .iter()
                .filter(|a| !a.is_zero())
                .map(|a| int_valuation(a, p))
                .min();
            Ok(
                min.map(|k| {
                    LogExpr::ln_uint(&BigUint::from(p)).scale(&Rat::from_integer(k.into()))
                }),
            )
        }
        Place::Archimedean => Ok(archimedean_weil(z, x, &values)),
    }
}

/// `min_i (deg f_i log M - log |f_i(x)|)` with `M = max_j |x_j|`; the minimizer
/// is chosen by exact integer comparison.
fn archimedean_weil(z: &Subscheme, x: &ProjPoint, values: &[BigInt]) -> Option<LogExpr> {
    let m = BigInt::from(x.max_abs());
    let mut best: Option<(usize, BigInt)> = None;
    for (i, (f, a)) in z.generators.iter().zip(values).enumerate() {
        if a.is_zero() {
            continue;
        }
        let a = a.abs();
        best = match best {
            None => Some((i, a)),
            Some((j, b)) => {
                let dj = z.generators[j].degree();
                // ratio_i > ratio_j  <=>  |a_i| M^deg_j > |a_j| M^deg_i
                let lhs = &a * m.pow(dj);
                let rhs = &b * m.pow(f.degree());
                if lhs.cmp(&rhs) == Ordering::Greater {
                    Some((i, a))
                } else {
                    Some((j, b))
                }
            }
        };
    }
    best.map(|(i, a)| {
        let deg = Rat::from_integer(z.generators[i].degree().into());
        &LogExpr::ln_abs(&m).scale(&deg) - &LogExpr::ln_abs(&a)
    })
}

pub fn weil_local(z: &Subscheme, x: &ProjPoint, v: Place) -> Result<LogValue> {
    Ok(weil_local_exact(z, x, v)?
        .map(|e| LogValue::from(&e))
        .unwrap_or(LogValue::INFINITE))
}

/// Exact `(h, N, m)` for `S = {inf}`: `N = log gcd_i f_i(x)`, `m = lambda_inf`.
pub fn arakelov_decompose_exact(z: &Subscheme, x: &ProjPoint) -> Result<ExactHeightTriple> {
    let values = z.values(x)?;
    let g = values.iter().fold(BigInt::zero(), |acc, a| acc.gcd(a));
    if g.is_zero() {
        return Err(Error::SupportPoint { term: None });
    }
    let counting = LogExpr::ln_abs(&g);
    let proximity = archimedean_weil(z, x, &values).expect("some generator is nonzero");
    Ok(ExactHeightTriple {
        height: &counting + &proximity,
        counting,
        proximity,
    })
}

pub fn arakelov_decompose(z: &Subscheme, x: &ProjPoint) -> Result<HeightTriple> {
    arakelov_decompose_exact(z, x).map(|t| t.to_values())
}

pub fn standard_height_exact(x: &ProjPoint) -> LogExpr {
    LogExpr::ln_uint(&x.max_abs())
}

/// `log max_j |x_j|`.
pub fn standard_height(x: &ProjPoint) -> LogValue {
    LogValue::from(&standard_height_exact(x))
}

pub fn q_decompose_exact(d: &QSubscheme, x: &ProjPoint) -> Result<ExactHeightTriple> {
    let mut acc = ExactHeightTriple::zero();
    for (i, (z, c)) in d.terms.iter().enumerate() {
        let t = arakelov_decompose_exact(z, x).map_err(|e| match e {
            Error::SupportPoint { .. } => Error::SupportPoint { term: Some(i) },
            other => other,
        })?;
        acc.height = &acc.height + &t.height.scale(c);
        acc.counting = &acc.counting + &t.counting.scale(c);
        acc.proximity = &acc.proximity + &t.proximity.scale(c);
    }
    Ok(acc)
}

/// Coefficient-weighted sum of the per-term triples.
pub fn q_decompose(d: &QSubscheme, x: &ProjPoint) -> Result<HeightTriple> {
    q_decompose_exact(d, x).map(|t| t.to_values())
}
