use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::binomial;
use num_traits::{One, Signed, Zero};

use super::UniPoly;
use crate::places::Rat;

/// Sparse polynomial in `x, y` over Q. Keys are exponent pairs `(i, j)` for
/// `x^i y^j`; no stored coefficient is zero.
///
/// Key order is lexicographic with `x > y`, which is the monomial order used
/// by [`BiPoly::div_exact`].
#[derive(Debug, Clone, PartialEq, Eq, Default, Hash)]
pub struct BiPoly {
    terms: BTreeMap<(u32, u32), Rat>,
}

impl BiPoly {
    pub fn zero() -> Self {
        BiPoly::default()
    }

    pub fn one() -> Self {
        BiPoly::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Self {
        BiPoly::monomial(0, 0, c)
    }

    pub fn x() -> Self {
        BiPoly::monomial(1, 0, Rat::one())
    }

    pub fn y() -> Self {
        BiPoly::monomial(0, 1, Rat::one())
    }

    pub fn monomial(i: u32, j: u32, c: Rat) -> Self {
        let mut p = BiPoly::zero();
        p.add_term(i, j, c);
        p
    }

    pub fn from_terms<I: IntoIterator<Item = ((u32, u32), Rat)>>(terms: I) -> Self {
        let mut p = BiPoly::zero();
        for ((i, j), c) in terms {
            p.add_term(i, j, c);
        }
        p
    }

    /// Convenience constructor from small integer coefficients.
    pub fn from_ints(terms: &[((u32, u32), i64)]) -> Self {
        BiPoly::from_terms(
            terms
                .iter()
                .map(|&(e, c)| (e, Rat::from_integer(BigInt::from(c)))),
        )
    }

    fn add_term(&mut self, i: u32, j: u32, c: Rat) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry((i, j)).or_insert_with(Rat::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&(i, j));
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &Rat)> {
        self.terms.iter()
    }

    pub fn coeff(&self, i: u32, j: u32) -> Rat {
        self.terms.get(&(i, j)).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|(i, j)| i + j).max()
    }

    /// Lowest total degree of a term: the multiplicity at the origin.
    /// `None` for the zero polynomial.
    pub fn order(&self) -> Option<u32> {
        self.terms.keys().map(|(i, j)| i + j).min()
    }

    pub fn degree_x(&self) -> Option<u32> {
        self.terms.keys().map(|(i, _)| *i).max()
    }

    pub fn scale(&self, c: &Rat) -> Self {
        BiPoly::from_terms(self.terms.iter().map(|(e, a)| (*e, a * c)))
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(BiPoly::one(), |acc, _| &acc * self)
    }

    pub fn eval(&self, x: &Rat, y: &Rat) -> Rat {
        self.terms
            .iter()
            .map(|(&(i, j), c)| c * pow_rat(x, i) * pow_rat(y, j))
            .fold(Rat::zero(), |a, b| a + b)
    }

    /// Degree-`k` homogeneous part.
    pub fn homogeneous_part(&self, k: u32) -> Self {
        BiPoly::from_terms(
            self.terms
                .iter()
                .filter(|((i, j), _)| i + j == k)
                .map(|(e, c)| (*e, c.clone())),
        )
    }

    /// Substitutes `x -> sx`, `y -> sy` for arbitrary polynomials.
    pub fn compose(&self, sx: &BiPoly, sy: &BiPoly) -> Self {
        let mut xpows = vec![BiPoly::one()];
        let mut ypows = vec![BiPoly::one()];
        let mut out = BiPoly::zero();
        for (&(i, j), c) in &self.terms {
            while xpows.len() <= i as usize {
                let next = xpows.last().expect("nonempty") * sx;
                xpows.push(next);
            }
            while ypows.len() <= j as usize {
                let next = ypows.last().expect("nonempty") * sy;
                ypows.push(next);
            }
            out = &out + &(&xpows[i as usize] * &ypows[j as usize]).scale(c);
        }
        out
    }

    /// `f(x + a, y + b)`: recenters the polynomial at `(a, b)`.
    pub fn translate(&self, a: &Rat, b: &Rat) -> Self {
        let mut out = BiPoly::zero();
        for (&(i, j), c) in &self.terms {
            for p in 0..=i {
                let cx = Rat::from_integer(binomial(BigInt::from(i), BigInt::from(p)))
                    * pow_rat(a, i - p);
                for q in 0..=j {
                    let cy = Rat::from_integer(binomial(BigInt::from(j), BigInt::from(q)))
                        * pow_rat(b, j - q);
                    out.add_term(p, q, c * &cx * &cy);
                }
            }
        }
        out
    }

    pub fn derivative_x(&self) -> Self {
        BiPoly::from_terms(
            self.terms
                .iter()
                .filter(|((i, _), _)| *i > 0)
                .map(|(&(i, j), c)| ((i - 1, j), c * Rat::from_integer(BigInt::from(i)))),
        )
    }

    pub fn derivative_y(&self) -> Self {
        BiPoly::from_terms(
            self.terms
                .iter()
                .filter(|((_, j), _)| *j > 0)
                .map(|(&(i, j), c)| ((i, j - 1), c * Rat::from_integer(BigInt::from(j)))),
        )
    }

    /// `f(0, t)` as a polynomial in `t`.
    pub fn restrict_x_zero(&self) -> UniPoly {
        self.restrict(|i, j| (i == 0).then_some(j))
    }

    /// `f(t, 0)` as a polynomial in `t`.
    pub fn restrict_y_zero(&self) -> UniPoly {
        self.restrict(|i, j| (j == 0).then_some(i))
    }

    fn restrict(&self, pick: impl Fn(u32, u32) -> Option<u32>) -> UniPoly {
        let mut coeffs: Vec<Rat> = Vec::new();
        for (&(i, j), c) in &self.terms {
            if let Some(k) = pick(i, j) {
                let k = k as usize;
                if coeffs.len() <= k {
                    coeffs.resize(k + 1, Rat::zero());
                }
                coeffs[k] += c;
            }
        }
        UniPoly::new(coeffs)
    }

    /// Quotient by `d` if `d` divides `self` exactly.
    pub fn div_exact(&self, d: &BiPoly) -> Option<BiPoly> {
        let (&(di, dj), dc) = d.terms.iter().next_back()?;
        let mut rem = self.clone();
        let mut quo = BiPoly::zero();
        while let Some((&(ri, rj), rc)) = rem.terms.iter().next_back() {
            if ri < di || rj < dj {
                return None;
            }
            let t = BiPoly::monomial(ri - di, rj - dj, rc / dc);
            rem = &rem - &(&t * d);
            quo = &quo + &t;
        }
        Some(quo)
    }

    /// Largest `e` with `d^e | self`; `self` must be nonzero and `d` nonconstant.
    pub fn power_dividing(&self, d: &BiPoly) -> u32 {
        assert!(!self.is_zero());
        assert!(d.total_degree().unwrap_or(0) > 0);
        let mut e = 0;
        let mut cur = self.clone();
        while let Some(q) = cur.div_exact(d) {
            cur = q;
            e += 1;
        }
        e
    }

    /// Divides every term by `x^a y^b`; `None` if some term is not divisible.
    pub fn div_monomial(&self, a: u32, b: u32) -> Option<BiPoly> {
        if self.terms.keys().any(|&(i, j)| i < a || j < b) {
            return None;
        }
        Some(BiPoly::from_terms(
            self.terms
                .iter()
                .map(|(&(i, j), c)| ((i - a, j - b), c.clone())),
        ))
    }

    fn to_recursive(&self) -> Vec<UniPoly> {
        let n = self.degree_x().map_or(0, |d| d as usize + 1);
        let mut rows: Vec<Vec<Rat>> = vec![Vec::new(); n];
        for (&(i, j), c) in &self.terms {
            let row = &mut rows[i as usize];
            if row.len() <= j as usize {
                row.resize(j as usize + 1, Rat::zero());
            }
            row[j as usize] = c.clone();
        }
        rows.into_iter().map(UniPoly::new).collect()
    }

    fn from_recursive(rows: &[UniPoly]) -> Self {
        BiPoly::from_terms(rows.iter().enumerate().flat_map(|(i, row)| {
            row.coeffs()
                .iter()
                .enumerate()
                .map(move |(j, c)| ((i as u32, j as u32), c.clone()))
        }))
    }

    /// Normalized gcd over Q: leading coefficient (in key order) is 1.
    pub fn gcd(&self, other: &BiPoly) -> BiPoly {
        if self.is_zero() {
            return other.normalized();
        }
        if other.is_zero() {
            return self.normalized();
        }
        let a = self.to_recursive();
        let b = other.to_recursive();
        let ca = rec_content(&a);
        let cb = rec_content(&b);
        let content = ca.gcd(&cb);
        let mut pa = rec_div_content(&a, &ca);
        let mut pb = rec_div_content(&b, &cb);
        if pa.len() < pb.len() {
            std::mem::swap(&mut pa, &mut pb);
        }
        while pb.len() > 1 {
            let r = rec_prem(&pa, &pb);
            if r.is_empty() {
                break;
            }
            pa = pb;
            let cr = rec_content(&r);
            pb = rec_div_content(&r, &cr);
        }
        let prim = if pb.len() > 1 {
            BiPoly::from_recursive(&pb)
        } else {
            BiPoly::one()
        };
        let content = BiPoly::from_terms(
            content
                .coeffs()
                .iter()
                .enumerate()
                .map(|(j, c)| ((0, j as u32), c.clone())),
        );
        (&prim * &content).normalized()
    }

    /// Squarefree over Q iff `gcd(f, f_x, f_y)` is constant.
    pub fn is_squarefree(&self) -> bool {
        let g = self.gcd(&self.derivative_x()).gcd(&self.derivative_y());
        g.total_degree() == Some(0)
    }

    fn normalized(&self) -> BiPoly {
        match self.terms.values().next_back() {
            Some(lead) => self.scale(&(Rat::one() / lead)),
            None => BiPoly::zero(),
        }
    }
}

fn pow_rat(a: &Rat, k: u32) -> Rat {
    (0..k).fold(Rat::one(), |acc, _| acc * a)
}

fn rec_content(p: &[UniPoly]) -> UniPoly {
    p.iter().fold(UniPoly::zero(), |acc, c| acc.gcd(c))
}

fn rec_div_content(p: &[UniPoly], c: &UniPoly) -> Vec<UniPoly> {
    p.iter()
        .map(|a| {
            let (q, r) = a.div_rem(c);
            debug_assert!(r.is_zero());
            q
        })
        .collect()
}

fn rec_trim(mut p: Vec<UniPoly>) -> Vec<UniPoly> {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

/// Pseudo-remainder in `Q[y][x]`.
fn rec_prem(a: &[UniPoly], b: &[UniPoly]) -> Vec<UniPoly> {
    let db = b.len() - 1;
    let lb = &b[db];
    let mut r = rec_trim(a.to_vec());
    while r.len() > db && !r.is_empty() {
        let shift = r.len() - 1 - db;
        let lr = r.last().expect("nonempty").clone();
        let mut next: Vec<UniPoly> = r.iter().map(|c| c.mul(lb)).collect();
        for (i, c) in b.iter().enumerate() {
            next[i + shift] = next[i + shift].sub(&c.mul(&lr));
        }
        r = rec_trim(next);
    }
    r
}

impl Add for &BiPoly {
    type Output = BiPoly;
    fn add(self, rhs: &BiPoly) -> BiPoly {
        let mut out = self.clone();
        for (&(i, j), c) in &rhs.terms {
            out.add_term(i, j, c.clone());
        }
        out
    }
}

impl Sub for &BiPoly {
    type Output = BiPoly;
    fn sub(self, rhs: &BiPoly) -> BiPoly {
        let mut out = self.clone();
        for (&(i, j), c) in &rhs.terms {
            out.add_term(i, j, -c.clone());
        }
        out
    }
}

impl Mul for &BiPoly {
    type Output = BiPoly;
    fn mul(self, rhs: &BiPoly) -> BiPoly {
        let mut out = BiPoly::zero();
        for (&(i, j), a) in &self.terms {
            for (&(k, l), b) in &rhs.terms {
                out.add_term(i + k, j + l, a * b);
            }
        }
        out
    }
}

impl Neg for &BiPoly {
    type Output = BiPoly;
    fn neg(self) -> BiPoly {
        self.scale(&-Rat::one())
    }
}

impl fmt::Display for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        // Highest total degree first reads more naturally.
        let mut keys: Vec<_> = self.terms.iter().collect();
        keys.sort_by_key(|(&(i, j), _)| (std::cmp::Reverse(i + j), std::cmp::Reverse(i)));
        for (&(i, j), c) in keys {
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let mut factors = Vec::new();
            if !mag.is_one() || (i == 0 && j == 0) {
                factors.push(mag.to_string());
            }
            match i {
                0 => {}
                1 => factors.push("x".into()),
                _ => factors.push(format!("x^{i}")),
            }
            match j {
                0 => {}
                1 => factors.push("y".into()),
                _ => factors.push(format!("y^{j}")),
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn cusp() -> BiPoly {
        BiPoly::from_ints(&[((0, 2), 1), ((3, 0), -1)])
    }

    #[test]
    fn order_and_tangent_cone() {
        let f = cusp();
        assert_eq!(f.order(), Some(2));
        assert_eq!(f.homogeneous_part(2), BiPoly::from_ints(&[((0, 2), 1)]));
        assert_eq!(f.to_string(), "-x^3 + y^2");
    }

    #[test]
    fn translate_matches_compose() {
        let f = BiPoly::from_ints(&[((2, 1), 3), ((0, 3), -1), ((1, 0), 5)]);
        let a = Rat::new(1.into(), 2.into());
        let b = Rat::from_integer((-3).into());
        let via_compose = f.compose(
            &(&BiPoly::x() + &BiPoly::constant(a.clone())),
            &(&BiPoly::y() + &BiPoly::constant(b.clone())),
        );
        assert_eq!(f.translate(&a, &b), via_compose);
    }

    #[test]
    fn squarefree_detection() {
        assert!(cusp().is_squarefree());
        let sq = &cusp() * &cusp();
        assert!(!sq.is_squarefree());
        let l = BiPoly::from_ints(&[((0, 1), 1), ((1, 0), -1)]);
        assert!(!(&(&l * &l) * &BiPoly::x()).is_squarefree());
        assert!((&l * &BiPoly::x()).is_squarefree());
        // y^2 alone: repeated factor free of x
        assert!(!BiPoly::from_ints(&[((0, 2), 1)]).is_squarefree());
    }

    #[test]
    fn exact_division() {
        let f = cusp();
        let g = &(&f * &f) * &BiPoly::x();
        assert_eq!(g.power_dividing(&f), 2);
        assert_eq!(BiPoly::x().power_dividing(&f), 0);
        assert!(BiPoly::y().div_exact(&f).is_none());
    }

    fn small_poly() -> impl Strategy<Value = BiPoly> {
        prop::collection::vec(((0u32..4, 0u32..4), -5i64..=5), 1..6)
            .prop_map(|t| BiPoly::from_ints(&t))
    }

    proptest! {
        #[test]
        fn gcd_divides_both(a in small_poly(), b in small_poly(), c in small_poly()) {
            prop_assume!(!a.is_zero() && !b.is_zero() && !c.is_zero());
            let pa = &a * &c;
            let pb = &b * &c;
            let g = pa.gcd(&pb);
            prop_assert!(pa.div_exact(&g).is_some());
            prop_assert!(pb.div_exact(&g).is_some());
            // the common factor survives
            prop_assert!(g.div_exact(&c.gcd(&c)).is_some());
        }

        #[test]
        fn product_then_divide(a in small_poly(), b in small_poly()) {
            prop_assume!(!b.is_zero());
            let p = &a * &b;
            prop_assert_eq!(p.div_exact(&b), Some(a));
        }
    }
}
