use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::places::Rat;
use crate::poly::BiPoly;

/// Homogeneous polynomial with integer coefficients in `n + 1` variables.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HomogPoly {
    vars: usize,
    degree: u32,
    terms: BTreeMap<Vec<u32>, BigInt>,
}

impl HomogPoly {
    /// Validates the term list: equal-length exponent vectors of a common
    /// total degree, no duplicates, no zero coefficients, at least one term.
    pub fn new(vars: usize, terms: Vec<(Vec<u32>, BigInt)>) -> Result<Self> {
        if vars == 0 {
            return Err(Error::InvalidPolynomial("no variables".into()));
        }
        if terms.is_empty() {
            return Err(Error::InvalidPolynomial("zero polynomial".into()));
        }
        let degree: u32 = terms[0].0.iter().sum();
        let mut map = BTreeMap::new();
        for (exps, c) in terms {
            if exps.len() != vars {
                return Err(Error::InvalidPolynomial(format!(
                    "exponent vector {exps:?} has length {}, expected {vars}",
                    exps.len()
                )));
            }
            if exps.iter().sum::<u32>() != degree {
                return Err(Error::InvalidPolynomial(format!(
                    "exponent vector {exps:?} is not of degree {degree}"
                )));
            }
            if c.is_zero() {
                return Err(Error::InvalidPolynomial(format!(
                    "zero coefficient at {exps:?}"
                )));
            }
            if map.insert(exps.clone(), c).is_some() {
                return Err(Error::InvalidPolynomial(format!(
                    "duplicate exponent {exps:?}"
                )));
            }
        }
        Ok(HomogPoly {
            vars,
            degree,
            terms: map,
        })
    }

    /// Builds from small integer data; panics on invalid input. Meant for tests
    /// and literals.
    pub fn from_ints(vars: usize, terms: &[(&[u32], i64)]) -> Self {
        HomogPoly::new(
            vars,
            terms
                .iter()
                .map(|(e, c)| (e.to_vec(), BigInt::from(*c)))
                .collect(),
        )
        .expect("valid homogeneous polynomial")
    }

    /// The coordinate function `x_i`.
    pub fn coordinate(vars: usize, i: usize) -> Self {
        let mut e = vec![0; vars];
        e[i] = 1;
        HomogPoly::new(vars, vec![(e, BigInt::one())]).expect("coordinate")
    }

    fn from_map(vars: usize, degree: u32, mut terms: BTreeMap<Vec<u32>, BigInt>) -> Option<Self> {
        terms.retain(|_, c| !c.is_zero());
        if terms.is_empty() {
            None
        } else {
            Some(HomogPoly {
                vars,
                degree,
                terms,
            })
        }
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &BigInt)> {
        self.terms.iter()
    }

    pub fn eval(&self, x: &[BigInt]) -> BigInt {
        assert_eq!(x.len(), self.vars, "point dimension");
        self.terms
            .iter()
            .map(|(e, c)| {
                e.iter()
                    .zip(x)
                    .fold(c.clone(), |acc, (&k, xi)| acc * xi.pow(k))
            })
            .sum()
    }

    pub fn mul(&self, other: &HomogPoly) -> HomogPoly {
        assert_eq!(self.vars, other.vars);
        let mut out: BTreeMap<Vec<u32>, BigInt> = BTreeMap::new();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                *out.entry(e).or_insert_with(BigInt::zero) += c1 * c2;
            }
        }
        HomogPoly::from_map(self.vars, self.degree + other.degree, out)
            .expect("product of nonzero polynomials over Z is nonzero")
    }

    /// `self(subs_0, ..., subs_n)`; `None` when the result vanishes identically.
    /// All substituted polynomials must share one variable count and degree.
    pub fn compose(&self, subs: &[HomogPoly]) -> Option<HomogPoly> {
        assert_eq!(subs.len(), self.vars);
        let inner_vars = subs[0].vars;
        let e = subs[0].degree;
        let mut out: BTreeMap<Vec<u32>, BigInt> = BTreeMap::new();
        for (exps, c) in &self.terms {
            let mut acc: BTreeMap<Vec<u32>, BigInt> = BTreeMap::new();
            acc.insert(vec![0; inner_vars], c.clone());
            for (s, &k) in subs.iter().zip(exps) {
                for _ in 0..k {
                    let mut next: BTreeMap<Vec<u32>, BigInt> = BTreeMap::new();
                    for (ea, ca) in &acc {
                        for (eb, cb) in &s.terms {
                            let m: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                            *next.entry(m).or_insert_with(BigInt::zero) += ca * cb;
                        }
                    }
                    acc = next;
                }
            }
            for (m, c) in acc {
                *out.entry(m).or_insert_with(BigInt::zero) += c;
            }
        }
        HomogPoly::from_map(inner_vars, self.degree * e, out)
    }

    /// Affine chart `x_last = 1`, for polynomials in three variables:
    /// returns `f(x, y, 1)`.
    pub fn dehomogenize(&self) -> BiPoly {
        assert_eq!(self.vars, 3, "dehomogenization is defined for plane curves");
        BiPoly::from_terms(
            self.terms
                .iter()
                .map(|(e, c)| ((e[0], e[1]), Rat::from_integer(c.clone()))),
        )
    }
}

impl fmt::Display for HomogPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, c) in self.terms.iter().rev() {
            let neg = c.is_negative();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let mut factors = Vec::new();
            let mag = c.abs();
            if !mag.is_one() || e.iter().all(|&k| k == 0) {
                factors.push(mag.to_string());
            }
            for (i, &k) in e.iter().enumerate() {
                match k {
                    0 => {}
                    1 => factors.push(format!("x{i}")),
                    _ => factors.push(format!("x{i}^{k}")),
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}
