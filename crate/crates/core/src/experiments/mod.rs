//! Numerical harness: rational points sampled from parametrized plane curves,
//! the height law `h_O = (m/d) h + O(1)` for the origin `O = (0:0:1)`, gcd
//! identities along power sequences, and empirical gcd growth constants.

mod gcd;

pub use gcd::{
    gcd_bounds_check, gcd_family_check, GcdBoundsReport, GcdFamily, GcdFamilyReport, GcdViolation,
};

use std::io::Write;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use serde::Serialize;

use crate::curveres::{multiplicity_at, AffineCurve};
use crate::error::{Error, Result};
use crate::heights::{
    arakelov_decompose_exact, standard_height_exact, HomogPoly, ProjPoint, Subscheme,
};
use crate::logexpr::LogExpr;
use crate::places::{LogValue, Rat};
use crate::poly::UniPoly;

/// Plane curve `F = 0` with a parametrization `(P0 : P1 : P2)` by binary forms
/// in `(s, t)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParamCurve {
    params: [HomogPoly; 3],
    curve: HomogPoly,
}

/// `P(s, 1)` as a polynomial in `s`.
fn binary_form_at_t1(p: &HomogPoly) -> UniPoly {
    let mut coeffs = vec![Rat::zero(); p.degree() as usize + 1];
    for (e, c) in p.terms() {
        coeffs[e[0] as usize] = Rat::from_integer(c.clone());
    }
    UniPoly::new(coeffs)
}

impl ParamCurve {
    pub fn new(params: [HomogPoly; 3], curve: HomogPoly) -> Result<Self> {
        if curve.vars() != 3 {
            return Err(Error::InvalidParametrization(format!(
                "target curve must be in 3 variables, got {}",
                curve.vars()
            )));
        }
        let e = params[0].degree();
        if params.iter().any(|p| p.vars() != 2) {
            return Err(Error::InvalidParametrization(
                "parameters must be binary forms".into(),
            ));
        }
        if params.iter().any(|p| p.degree() != e) {
            return Err(Error::InvalidParametrization(
                "parameters have different degrees".into(),
            ));
        }
        if e == 0 {
            return Err(Error::InvalidParametrization(
                "constant parametrization".into(),
            ));
        }
        // a common factor either survives t = 1 or is a power of t
        let t_divides_all = params
            .iter()
            .all(|p| p.terms().all(|(exps, _)| exps[1] > 0));
        let g = params
            .iter()
            .map(binary_form_at_t1)
            .fold(UniPoly::zero(), |acc, p| acc.gcd(&p));
        if t_divides_all || g.degree().is_some_and(|k| k > 0) {
            return Err(Error::InvalidParametrization(
                "parameters share a common factor".into(),
            ));
        }
        if let Some(rest) = curve.compose(&params) {
            return Err(Error::InvalidParametrization(format!(
                "F(P0, P1, P2) = {rest} is not identically zero"
            )));
        }
        Ok(ParamCurve { params, curve })
    }

    pub fn params(&self) -> &[HomogPoly; 3] {
        &self.params
    }

    pub fn curve(&self) -> &HomogPoly {
        &self.curve
    }

    /// Integer image of `(p, q)`, before normalization.
    pub fn eval(&self, p: &BigInt, q: &BigInt) -> [BigInt; 3] {
        let st = [p.clone(), q.clone()];
        [
            self.params[0].eval(&st),
            self.params[1].eval(&st),
            self.params[2].eval(&st),
        ]
    }
}

/// A sampled point together with the parameter that produced it first.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SamplePoint {
    pub p: i64,
    pub q: i64,
    #[serde(serialize_with = "ser_point")]
    pub point: ProjPoint,
    /// The point is `O = (0:0:1)`.
    pub is_o: bool,
}

fn ser_point<S: serde::Serializer>(x: &ProjPoint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(x.coords().iter().map(|c| c.to_string()))
}

pub fn is_origin(x: &ProjPoint) -> bool {
    x.dim() == 2 && x.coords()[0].is_zero() && x.coords()[1].is_zero()
}

/// Images of all primitive `(p, q)` with `|p|, |q| <= bound`, one per projective
/// parameter (`q > 0`, or `(p, q) = (1, 0)`). Images that vanish are dropped,
/// repeated images keep their first parameter, and the result is sorted by
/// `(p, q)`.
pub fn sample_param_points(pc: &ParamCurve, bound: i64) -> Result<Vec<SamplePoint>> {
    if bound < 1 {
        return Err(Error::InvalidParameter(format!(
            "bound must be at least 1, got {bound}"
        )));
    }
    let mut params = vec![(1i64, 0i64)];
    for p in -bound..=bound {
        for q in 1..=bound {
            if p.gcd(&q) == 1 {
                params.push((p, q));
            }
        }
    }
    params.sort();
    let mut seen = std::collections::HashSet::new();
    let mut out = Vec::new();
    for (p, q) in params {
        let img = pc.eval(&BigInt::from(p), &BigInt::from(q));
        let Ok(point) = ProjPoint::new(img.to_vec()) else {
            continue;
        };
        if seen.insert(point.clone()) {
            let is_o = is_origin(&point);
            out.push(SamplePoint { p, q, point, is_o });
        }
    }
    Ok(out)
}

/// Exact values behind one [`ExperimentRecord`].
#[derive(Debug, Clone, PartialEq)]
pub struct ExactRecord {
    pub h: LogExpr,
    pub h_o: LogExpr,
    pub n_o: LogExpr,
    pub residual: LogExpr,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentRecord {
    #[serde(serialize_with = "ser_point")]
    pub point: ProjPoint,
    pub h: LogValue,
    #[serde(rename = "hO")]
    pub h_o: LogValue,
    #[serde(rename = "N_O")]
    pub n_o: LogValue,
    /// `h_O - (m/d) h`.
    pub residual: f64,
    /// The residual vanishes identically as a combination of logarithms.
    pub residual_exact_zero: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SlopeReport {
    pub m: u32,
    pub d: u32,
    pub samples: usize,
    pub max_abs_residual: f64,
    /// Over samples with `h >= h_min`; `None` when there are none.
    pub max_abs_residual_high: Option<f64>,
    pub high_samples: usize,
    pub h_min: f64,
    pub slope_fit: f64,
    pub exact_zero_residuals: usize,
}

/// Multiplicity of `F = 0` at `O`.
pub fn multiplicity_at_origin(f: &HomogPoly) -> Result<u32> {
    let curve = AffineCurve::new(f.dehomogenize())?;
    let zero = Rat::zero();
    Ok(multiplicity_at(&curve, &zero, &zero))
}

fn exact_record(x: &ProjPoint, ratio: &Rat) -> Result<ExactRecord> {
    if is_origin(x) {
        return Err(Error::PointIsO);
    }
    if x.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            got: x.dim(),
        });
    }
    let t = arakelov_decompose_exact(&Subscheme::coordinate_subspace(2, 1), x)?;
    let h = standard_height_exact(x);
    let residual = &t.height - &h.scale(ratio);
    Ok(ExactRecord {
        h,
        h_o: t.height,
        n_o: t.counting,
        residual,
    })
}

/// Per-point records and their summary; `O` itself is rejected.
pub fn mdlaw_records(
    f: &HomogPoly,
    points: &[ProjPoint],
    h_min: f64,
) -> Result<(SlopeReport, Vec<ExperimentRecord>)> {
    if points.is_empty() {
        return Err(Error::EmptyAfterFilter);
    }
    if f.vars() != 3 {
        return Err(Error::DimensionMismatch {
            expected: 3,
            got: f.vars(),
        });
    }
    let m = multiplicity_at_origin(f)?;
    let d = f.degree();
    let ratio = Rat::new(m.into(), d.into());
    let mut records = Vec::with_capacity(points.len());
    for x in points {
        let e = exact_record(x, &ratio)?;
        let zero = e.residual.is_zero();
        records.push(ExperimentRecord {
            point: x.clone(),
            h: LogValue::from(&e.h),
            h_o: LogValue::from(&e.h_o),
            n_o: LogValue::from(&e.n_o),
            residual: if zero { 0.0 } else { e.residual.to_f64() },
            residual_exact_zero: zero,
        });
    }
    let abs = |r: &ExperimentRecord| r.residual.abs();
    let high: Vec<&ExperimentRecord> = records.iter().filter(|r| r.h.value() >= h_min).collect();
    let report = SlopeReport {
        m,
        d,
        samples: records.len(),
        max_abs_residual: records.iter().map(abs).fold(0.0, f64::max),
        max_abs_residual_high: (!high.is_empty())
            .then(|| high.iter().map(|r| abs(r)).fold(0.0, f64::max)),
        high_samples: high.len(),
        h_min,
        slope_fit: slope_fit(&records),
        exact_zero_residuals: records.iter().filter(|r| r.residual_exact_zero).count(),
    };
    Ok((report, records))
}

pub fn mdlaw_report(f: &HomogPoly, points: &[ProjPoint], h_min: f64) -> Result<SlopeReport> {
    mdlaw_records(f, points, h_min).map(|(r, _)| r)
}

/// Least-squares slope of `h_O` against `h` with intercept; 0 when all `h` agree.
fn slope_fit(records: &[ExperimentRecord]) -> f64 {
    let n = records.len() as f64;
    let mx = records.iter().map(|r| r.h.value()).sum::<f64>() / n;
    let my = records.iter().map(|r| r.h_o.value()).sum::<f64>() / n;
    let (sxy, sxx) = records.iter().fold((0.0, 0.0), |(sxy, sxx), r| {
        let dx = r.h.value() - mx;
        (sxy + dx * (r.h_o.value() - my), sxx + dx * dx)
    });
    if sxx > 0.0 {
        sxy / sxx
    } else {
        0.0
    }
}

/// Samples `pc`, drops `O`, and runs the height law on the rest. Records stay
/// paired with their parameters.
pub fn mdlaw_param(
    pc: &ParamCurve,
    bound: i64,
    h_min: f64,
) -> Result<(SlopeReport, Vec<(SamplePoint, ExperimentRecord)>)> {
    let samples: Vec<SamplePoint> = sample_param_points(pc, bound)?
        .into_iter()
        .filter(|s| !s.is_o)
        .collect();
    let points: Vec<ProjPoint> = samples.iter().map(|s| s.point.clone()).collect();
    let (report, records) = mdlaw_records(pc.curve(), &points, h_min)?;
    Ok((report, samples.into_iter().zip(records).collect()))
}

/// C `%.{digits}g` formatting.
pub fn format_g(x: f64, digits: usize) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return if x.is_nan() {
            "nan".into()
        } else if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    let digits = digits.max(1);
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    let trim = |s: &str| -> String {
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s.to_string()
        }
    };
    if exp < -4 || exp >= digits as i32 {
        format!(
            "{}e{}{:02}",
            trim(mantissa),
            if exp < 0 { '-' } else { '+' },
            exp.abs()
        )
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim(&format!("{:.*}", decimals, x))
    }
}

pub const CSV_HEADER: &str = "p,q,x0,x1,x2,h,hO,N_O,residual";

/// One CSV row; `pq` is left empty for points not coming from a parameter.
pub fn csv_row(pq: Option<(i64, i64)>, r: &ExperimentRecord) -> String {
    let (p, q) = pq
        .map(|(p, q)| (p.to_string(), q.to_string()))
        .unwrap_or_default();
    let c = r.point.coords();
    let g = |v: f64| format_g(v, 12);
    format!(
        "{p},{q},{},{},{},{},{},{},{}",
        c[0],
        c[1],
        c[2],
        g(r.h.value()),
        g(r.h_o.value()),
        g(r.n_o.value()),
        g(r.residual)
    )
}

pub fn write_csv<W: Write>(
    mut w: W,
    rows: &[(SamplePoint, ExperimentRecord)],
) -> std::io::Result<()> {
    writeln!(w, "{CSV_HEADER}")?;
    for (s, r) in rows {
        writeln!(w, "{}", csv_row(Some((s.p, s.q)), r))?;
    }
    Ok(())
}
