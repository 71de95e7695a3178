use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::Serialize;

use super::{is_origin, multiplicity_at_origin};
use crate::error::{Error, Result};
use crate::heights::{HomogPoly, ProjPoint};
use crate::logexpr::LogExpr;
use crate::places::Rat;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum GcdFamily {
    /// `gcd(a^m, a^d) = |a|^m`
    Pure,
    /// `gcd(a^m - 1, a^d - 1) = |a - 1|`
    Shifted,
    /// `gcd(a^m, a^d - 1) = 1`
    Mixed,
}

impl std::str::FromStr for GcdFamily {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "pure" => Ok(GcdFamily::Pure),
            "shifted" => Ok(GcdFamily::Shifted),
            "mixed" => Ok(GcdFamily::Mixed),
            _ => Err(Error::Parse(format!("unknown gcd family {s}"))),
        }
    }
}

impl GcdFamily {
    /// `(gcd, expected)` at `a`.
    pub fn evaluate(self, d: u32, m: u32, a: i64) -> (BigInt, BigInt) {
        let a = BigInt::from(a);
        let one = BigInt::from(1);
        let (am, ad) = (a.pow(m), a.pow(d));
        match self {
            GcdFamily::Pure => (am.gcd(&ad), am.abs()),
            GcdFamily::Shifted => ((am - &one).gcd(&(ad - &one)), (a - one).abs()),
            GcdFamily::Mixed => (am.gcd(&(ad - &one)), one),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GcdViolation {
    pub a: i64,
    pub gcd: String,
    pub expected: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GcdFamilyReport {
    pub kind: GcdFamily,
    pub d: u32,
    pub m: u32,
    pub amin: i64,
    pub amax: i64,
    pub checked: usize,
    /// Values `|a| <= 1` left out of the shifted family.
    pub skipped: usize,
    pub violations: Vec<GcdViolation>,
}

/// Checks the exact gcd identity of `kind` for every `a` in `[amin, amax]`.
pub fn gcd_family_check(
    kind: GcdFamily,
    d: u32,
    m: u32,
    amin: i64,
    amax: i64,
) -> Result<GcdFamilyReport> {
    if !(d > m && m >= 1) {
        return Err(Error::InvalidExponents { d, m });
    }
    if d.gcd(&m) != 1 {
        return Err(Error::NotCoprime { d, m });
    }
    if amin > amax {
        return Err(Error::BadRange { lo: amin, hi: amax });
    }
    let mut report = GcdFamilyReport {
        kind,
        d,
        m,
        amin,
        amax,
        checked: 0,
        skipped: 0,
        violations: Vec::new(),
    };
    for a in amin..=amax {
        if kind == GcdFamily::Shifted && a.abs() <= 1 {
            report.skipped += 1;
            continue;
        }
        report.checked += 1;
        let (g, expected) = kind.evaluate(d, m, a);
        if g != expected {
            report.violations.push(GcdViolation {
                a,
                gcd: g.to_string(),
                expected: expected.to_string(),
            });
        }
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GcdBoundsReport {
    pub m: u32,
    pub d: u32,
    pub eps: f64,
    pub delta: f64,
    pub used: usize,
    pub filtered_out: usize,
    /// `[m/d - eps, m/d + eps]`.
    pub exponent_window: (f64, f64),
    /// Largest `C1'` with `C1' M^(m/d - eps) <= gcd` on the sample.
    pub c1: f64,
    /// Smallest `C2'` with `gcd <= C2' M^(m/d + eps)` on the sample.
    pub c2: f64,
    pub log_c1: f64,
    pub log_c2: f64,
    /// Points that fail the fitted bounds when rechecked in floating point.
    pub violations: usize,
}

/// Passes the filter `max(|x/z|, |y/z|) >= delta`; points at infinity pass.
fn far_enough(x: &ProjPoint, delta: f64) -> bool {
    let c = x.coords();
    if c[2].is_zero() {
        return true;
    }
    let m = Rat::new(c[0].abs().max(c[1].abs()), c[2].abs());
    // exact comparison against the binary value of delta
    match Rat::from_float(delta) {
        Some(d) => m >= d,
        None => false,
    }
}

/// Fits `C1'`, `C2'` in `C1' M^(m/d - eps) <= gcd(x, y) <= C2' M^(m/d + eps)`
/// with `M = max(|x|, |y|)` over the points passing the `delta` filter.
pub fn gcd_bounds_check(
    f: &HomogPoly,
    points: &[ProjPoint],
    eps: f64,
    delta: f64,
) -> Result<GcdBoundsReport> {
    if !(eps >= 0.0 && eps.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "eps must be finite and nonnegative, got {eps}"
        )));
    }
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "delta must be finite and positive, got {delta}"
        )));
    }
    if f.vars() != 3 {
        return Err(Error::DimensionMismatch {
            expected: 3,
            got: f.vars(),
        });
    }
    if let Some(x) = points.iter().find(|x| x.dim() != 2) {
        return Err(Error::DimensionMismatch {
            expected: 2,
            got: x.dim(),
        });
    }
    let m = multiplicity_at_origin(f)?;
    let d = f.degree();
    let ratio = Rat::new(m.into(), d.into());
    let used: Vec<&ProjPoint> = points
        .iter()
        .filter(|x| !is_origin(x) && far_enough(x, delta))
        .collect();
    if used.is_empty() {
        return Err(Error::EmptyAfterFilter);
    }
    // per point: exact log gcd - (m/d) log M, then log M
    let logs: Vec<(f64, f64)> = used
        .iter()
        .map(|x| {
            let c = x.coords();
            let g = c[0].gcd(&c[1]);
            let big_m = c[0].abs().max(c[1].abs());
            let base = &LogExpr::ln_abs(&g) - &LogExpr::ln_abs(&big_m).scale(&ratio);
            let base = if base.is_zero() { 0.0 } else { base.to_f64() };
            (base, LogExpr::ln_abs(&big_m).to_f64())
        })
        .collect();
    let log_c1 = logs
        .iter()
        .map(|(b, lm)| b + eps * lm)
        .fold(f64::INFINITY, f64::min);
    let log_c2 = logs
        .iter()
        .map(|(b, lm)| b - eps * lm)
        .fold(f64::NEG_INFINITY, f64::max);
    let tol = 1e-12;
    let violations = logs
        .iter()
        .filter(|(b, lm)| b + eps * lm < log_c1 - tol || b - eps * lm > log_c2 + tol)
        .count();
    let r = m as f64 / d as f64;
    Ok(GcdBoundsReport {
        m,
        d,
        eps,
        delta,
        used: used.len(),
        filtered_out: points.len() - used.len(),
        exponent_window: (r - eps, r + eps),
        c1: log_c1.exp(),
        c2: log_c2.exp(),
        log_c1,
        log_c2,
        violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn family_examples() {
        assert_eq!(GcdFamily::Pure.evaluate(3, 2, 5), (25.into(), 25.into()));
        assert_eq!(GcdFamily::Shifted.evaluate(3, 2, 4), (3.into(), 3.into()));
        assert_eq!(GcdFamily::Mixed.evaluate(3, 2, 4), (1.into(), 1.into()));
        let r = gcd_family_check(GcdFamily::Shifted, 3, 2, -5, 5).unwrap();
        assert_eq!((r.checked, r.skipped), (8, 3));
        assert!(r.violations.is_empty());
    }

    #[test]
    fn family_errors() {
        assert_eq!(
            gcd_family_check(GcdFamily::Pure, 4, 2, 0, 3),
            Err(Error::NotCoprime { d: 4, m: 2 })
        );
        assert_eq!(
            gcd_family_check(GcdFamily::Pure, 2, 3, 0, 3),
            Err(Error::InvalidExponents { d: 2, m: 3 })
        );
        assert_eq!(
            gcd_family_check(GcdFamily::Pure, 3, 2, 4, 3),
            Err(Error::BadRange { lo: 4, hi: 3 })
        );
    }

    fn cusp() -> HomogPoly {
        HomogPoly::from_ints(3, &[(&[3, 0, 0], 1), (&[0, 2, 1], -1)])
    }

    #[test]
    fn bounds_on_pure_family_are_exact() {
        let pts: Vec<ProjPoint> = (2..=30i64)
            .flat_map(|a| [a, -a])
            .map(|a| {
                ProjPoint::new(vec![
                    BigInt::from(a).pow(2),
                    BigInt::from(a).pow(3),
                    1.into(),
                ])
                .unwrap()
            })
            .collect();
        let r = gcd_bounds_check(&cusp(), &pts, 0.0, 1.0).unwrap();
        assert_eq!((r.m, r.d), (2, 3));
        assert_eq!(r.c1, 1.0);
        assert_eq!(r.c2, 1.0);
        assert_eq!(r.violations, 0);
        assert_eq!(r.used, pts.len());
    }

    #[test]
    fn bounds_filter() {
        let tiny = [ProjPoint::from_ints(&[0, 0, 1]).unwrap()];
        assert_eq!(
            gcd_bounds_check(&cusp(), &tiny, 0.05, 1.0),
            Err(Error::EmptyAfterFilter)
        );
        let small = [ProjPoint::from_ints(&[1, 1, 2]).unwrap()];
        assert_eq!(
            gcd_bounds_check(&cusp(), &small, 0.05, 1.0),
            Err(Error::EmptyAfterFilter)
        );
        assert!(gcd_bounds_check(&cusp(), &small, 0.05, 0.0).is_err());
        assert!(gcd_bounds_check(&cusp(), &small, -1.0, 1.0).is_err());
    }
}
