//! Exact rational combinations of logarithms of positive integers.
//!
//! A [`LogExpr`] is `sum c_i ln b_i` with rational `c_i` and integer `b_i > 1`.
//! After every operation the bases are refined into a pairwise coprime set.
//! Logarithms of pairwise coprime integers are linearly independent over Q,
//! so the reduced form is zero iff it has no terms, and evaluating a zero
//! expression yields exactly `0.0`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::places::{ln_biguint, Rat};

#[derive(Debug, Clone, Default)]
pub struct LogExpr {
    terms: BTreeMap<BigUint, Rat>,
}

impl LogExpr {
    pub fn zero() -> Self {
        LogExpr::default()
    }

    /// `ln n` for `n >= 1`.
    pub fn ln_uint(n: &BigUint) -> Self {
        assert!(!n.is_zero(), "logarithm of zero");
        let mut e = LogExpr::zero();
        if !n.is_one() {
            e.terms.insert(n.clone(), Rat::one());
        }
        e
    }

    /// `ln |n|` for nonzero `n`.
    pub fn ln_abs(n: &BigInt) -> Self {
        LogExpr::ln_uint(n.magnitude())
    }

    /// `ln |q|` for nonzero `q`.
    pub fn ln_rat(q: &Rat) -> Self {
        &LogExpr::ln_abs(q.numer()) - &LogExpr::ln_abs(q.denom())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&BigUint, &Rat)> {
        self.terms.iter()
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return LogExpr::zero();
        }
        LogExpr {
            terms: self.terms.iter().map(|(b, k)| (b.clone(), k * c)).collect(),
        }
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        self.terms
            .iter()
            .map(|(b, c)| c.to_f64().unwrap_or(f64::NAN) * ln_biguint(b))
            .sum()
    }

    /// Exact sign of the represented real number.
    pub fn signum(&self) -> Ordering {
        if self.is_zero() {
            return Ordering::Equal;
        }
        let lcm = self
            .terms
            .values()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let mut pos = BigUint::one();
        let mut neg = BigUint::one();
        for (b, c) in &self.terms {
            let e = (c * Rat::from_integer(lcm.clone())).to_integer();
            let k = e
                .abs()
                .to_u32()
                .expect("exponent too large for exact comparison");
            if e.is_positive() {
                pos *= b.pow(k);
            } else {
                neg *= b.pow(k);
            }
        }
        pos.cmp(&neg)
    }

    fn insert(&mut self, base: BigUint, c: Rat) {
        if base.is_one() || c.is_zero() {
            return;
        }
        let slot = self.terms.entry(base).or_insert_with(Rat::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    /// Refines the bases until they are pairwise coprime.
    fn reduce(mut self) -> Self {
        loop {
            let keys: Vec<BigUint> = self.terms.keys().cloned().collect();
            let mut split = None;
            'search: for (i, a) in keys.iter().enumerate() {
                for b in &keys[i + 1..] {
                    let g = a.gcd(b);
                    if !g.is_one() {
                        split = Some((a.clone(), b.clone(), g));
                        break 'search;
                    }
                }
            }
            let Some((a, b, g)) = split else {
                return self;
            };
            let ca = self.terms.remove(&a).expect("present");
            let cb = self.terms.remove(&b).expect("present");
            self.insert(&a / &g, ca.clone());
            self.insert(&b / &g, cb.clone());
            self.insert(g, ca + cb);
        }
    }
}

impl PartialEq for LogExpr {
    fn eq(&self, other: &Self) -> bool {
        (self - other).is_zero()
    }
}

impl PartialOrd for LogExpr {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some((self - other).signum())
    }
}

impl Add for &LogExpr {
    type Output = LogExpr;
    fn add(self, rhs: &LogExpr) -> LogExpr {
        let mut out = self.clone();
        for (b, c) in &rhs.terms {
            out.insert(b.clone(), c.clone());
        }
        out.reduce()
    }
}

impl Sub for &LogExpr {
    type Output = LogExpr;
    fn sub(self, rhs: &LogExpr) -> LogExpr {
        self + &(-rhs)
    }
}

impl Neg for &LogExpr {
    type Output = LogExpr;
    fn neg(self) -> LogExpr {
        LogExpr {
            terms: self.terms.iter().map(|(b, c)| (b.clone(), -c)).collect(),
        }
    }
}

impl Add for LogExpr {
    type Output = LogExpr;
    fn add(self, rhs: LogExpr) -> LogExpr {
        &self + &rhs
    }
}

impl Sub for LogExpr {
    type Output = LogExpr;
    fn sub(self, rhs: LogExpr) -> LogExpr {
        &self - &rhs
    }
}

impl std::iter::Sum for LogExpr {
    fn sum<I: Iterator<Item = LogExpr>>(iter: I) -> Self {
        iter.fold(LogExpr::zero(), |a, b| a + b)
    }
}

impl fmt::Display for LogExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(b, c)| format!("{c}*ln({b})"))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ln(n: u64) -> LogExpr {
        LogExpr::ln_uint(&BigUint::from(n))
    }

    fn r(n: i64, d: i64) -> Rat {
        Rat::new(n.into(), d.into())
    }

    #[test]
    fn power_identities_are_exact_zero() {
        let e = &ln(8) - &ln(2).scale(&r(3, 1));
        assert!(e.is_zero());
        assert!(e.to_f64() == 0.0 && e.to_f64().is_sign_positive());
        let e = &(&ln(12) - &ln(4)) - &ln(3);
        assert!(e.is_zero());
        // m ln|a| - (m/d) ln|a|^d for a = 7, m = 2, d = 5
        let e = &ln(49) - &ln(16807).scale(&r(2, 5));
        assert!(e.is_zero());
    }

    #[test]
    fn nonzero_detected() {
        let e = &ln(6) - &ln(2);
        assert!(!e.is_zero());
        assert!((e.to_f64() - 3f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn exact_sign() {
        // 3 ln 2 < 2 ln 3 since 8 < 9
        let e = &ln(2).scale(&r(3, 1)) - &ln(3).scale(&r(2, 1));
        assert_eq!(e.signum(), Ordering::Less);
        assert!(ln(9) > ln(8));
        assert_eq!(LogExpr::zero().signum(), Ordering::Equal);
    }

    #[test]
    fn rational_argument() {
        let e = LogExpr::ln_rat(&r(-9, 20));
        assert!((e.to_f64() - (9.0f64 / 20.0).ln()).abs() < 1e-12);
    }
}
