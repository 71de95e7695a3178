//! Places of Q, p-adic valuations, and logarithmic local norms.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::logexpr::LogExpr;

/// Exact rational number with arbitrary-precision numerator and denominator.
///
/// `BigRational` keeps itself reduced with a positive denominator.
pub type Rat = num_rational::BigRational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Place {
    Archimedean,
    Finite(u64),
}

impl Place {
    /// Finite place at `p`, rejecting composites.
    pub fn finite(p: u64) -> Result<Self> {
        if is_prime(p) {
            Ok(Place::Finite(p))
        } else {
            Err(Error::NotPrime(BigInt::from(p)))
        }
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Archimedean => write!(f, "inf"),
            Place::Finite(p) => write!(f, "{p}"),
        }
    }
}

/// A natural-log-scale real number that may be `+inf`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct LogValue(f64);

impl LogValue {
    pub const INFINITE: LogValue = LogValue(f64::INFINITY);
    pub const ZERO: LogValue = LogValue(0.0);

    pub fn finite(v: f64) -> Self {
        debug_assert!(v.is_finite());
        LogValue(v)
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn is_infinite(self) -> bool {
        self.0.is_infinite()
    }
}

impl From<&LogExpr> for LogValue {
    fn from(e: &LogExpr) -> Self {
        LogValue(e.to_f64())
    }
}

impl fmt::Display for LogValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_infinite() {
            write!(f, "+inf")
        } else {
            write!(f, "{}", self.0)
        }
    }
}

/// Deterministic Miller-Rabin; the twelve prime bases cover all of `u64`.
pub fn is_prime(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &p in &BASES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    let mul = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let pow = |mut b: u64, mut e: u64| {
        let mut r = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                r = mul(r, b);
            }
            b = mul(b, b);
            e >>= 1;
        }
        r
    };
    'witness: for &a in &BASES {
        let mut x = pow(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Largest `k` with `p^k | n`, for nonzero `n`.
pub(crate) fn int_valuation(n: &BigInt, p: u64) -> u64 {
    debug_assert!(!n.is_zero());
    let p = BigInt::from(p);
    let mut n = n.abs();
    let mut k = 0;
    loop {
        let (q, r) = n.div_rem(&p);
        if !r.is_zero() {
            return k;
        }
        n = q;
        k += 1;
    }
}

/// `v` such that `q = p^v * u` with `u` a p-adic unit.
pub fn padic_valuation(q: &Rat, p: u64) -> Result<i64> {
    if q.is_zero() {
        return Err(Error::ZeroInput);
    }
    if !is_prime(p) {
        return Err(Error::NotPrime(BigInt::from(p)));
    }
    let num = int_valuation(q.numer(), p) as i64;
    let den = int_valuation(q.denom(), p) as i64;
    Ok(num - den)
}

/// `log ||q||_v` as an exact log-linear expression.
pub fn local_log_norm_exact(q: &Rat, v: Place) -> Result<LogExpr> {
    match v {
        Place::Archimedean => {
            if q.is_zero() {
                return Err(Error::ZeroInput);
            }
            Ok(LogExpr::ln_rat(q))
        }
        Place::Finite(p) => {
            let k = padic_valuation(q, p)?;
            Ok(LogExpr::ln_uint(&BigUint::from(p)).scale(&Rat::from_integer(BigInt::from(-k))))
        }
    }
}

/// `log ||q||_v`: `-v_p(q) log p` at a prime, `log |q|` at infinity.
pub fn local_log_norm(q: &Rat, v: Place) -> Result<LogValue> {
    local_log_norm_exact(q, v).map(|e| LogValue::from(&e))
}

/// Natural log of a positive big integer without overflowing `f64`.
pub(crate) fn ln_biguint(n: &BigUint) -> f64 {
    debug_assert!(!n.is_zero());
    let bits = n.bits();
    if bits <= 1000 {
        return n.to_f64().expect("fits in f64").ln();
    }
    let shift = bits - 64;
    let top = (n >> shift).to_f64().expect("64-bit value");
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// Primes dividing a nonzero integer, by trial division.
pub fn prime_divisors(n: &BigInt) -> Vec<u64> {
    let mut n = n.abs().to_biguint().expect("nonnegative");
    let mut out = Vec::new();
    if n.is_zero() {
        return out;
    }
    let mut p = 2u64;
    while BigUint::from(p) * BigUint::from(p) <= n {
        let pb = BigUint::from(p);
        if (&n % &pb).is_zero() {
            out.push(p);
            while (&n % &pb).is_zero() {
                n /= &pb;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if !n.is_one() {
        out.push(n.to_u64().expect("remaining prime factor exceeds u64"));
    }
    out
}
