//! JSON input formats.
//!
//! Numbers may be given as JSON integers or as strings (`"-3"`, `"5/6"`), the
//! latter being needed for values beyond 64 bits.
//!
//! ```text
//! poly       {"vars": 3, "terms": [[[2, 1, 0], "-3"], ...]}
//! subscheme  {"generators": [poly, ...]}
//!            {"components": [{"coeff": "1/2", "generators": [poly, ...]}, ...]}
//! point      ["3", "6", "1"]
//! curve      {"f": [[[i, j], "c"], ...], "at": ["a", "b"]}
//! snc pair   {"divisors": [{"id": "E1", "c": "1/2"}, ...], "edges": [["E1", "E2"], ...]}
//! param      {"params": [poly, poly, poly], "curve": poly}
//! ```

use num_bigint::BigInt;
use serde::{Deserialize, Serialize, Serializer};

use crate::curveres::AffineCurve;
use crate::error::{Error, Result};
use crate::experiments::ParamCurve;
use crate::heights::{HomogPoly, ProjPoint, QSubscheme, Subscheme};
use crate::places::Rat;
use crate::poly::BiPoly;
use crate::snc::SncPair;

pub fn ser_rat<S: Serializer>(q: &Rat, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&q.to_string())
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(untagged)]
pub enum Num {
    Int(i64),
    Str(String),
}

impl Num {
    pub fn to_int(&self) -> Result<BigInt> {
        match self {
            Num::Int(n) => Ok(BigInt::from(*n)),
            Num::Str(s) => s
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("not an integer: {s}"))),
        }
    }

    pub fn to_rat(&self) -> Result<Rat> {
        match self {
            Num::Int(n) => Ok(Rat::from_integer((*n).into())),
            Num::Str(s) => parse_rat(s),
        }
    }
}

pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    let err = || Error::Parse(format!("not a rational number: {s}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| err())?;
            let d: BigInt = d.trim().parse().map_err(|_| err())?;
            if d == BigInt::from(0) {
                return Err(err());
            }
            Ok(Rat::new(n, d))
        }
        None => Ok(Rat::from_integer(s.parse().map_err(|_| err())?)),
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolyJson {
    pub vars: usize,
    pub terms: Vec<(Vec<u32>, Num)>,
}

impl PolyJson {
    pub fn build(&self) -> Result<HomogPoly> {
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| Ok((e.clone(), c.to_int()?)))
            .collect::<Result<Vec<_>>>()?;
        HomogPoly::new(self.vars, terms)
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComponentJson {
    pub coeff: Num,
    pub generators: Vec<PolyJson>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum SubschemeJson {
    Plain { generators: Vec<PolyJson> },
    Weighted { components: Vec<ComponentJson> },
}

fn build_subscheme(gens: &[PolyJson]) -> Result<Subscheme> {
    Subscheme::new(gens.iter().map(PolyJson::build).collect::<Result<_>>()?)
}

impl SubschemeJson {
    /// A plain subscheme becomes the Q-subscheme with coefficient 1.
    pub fn build(&self) -> Result<QSubscheme> {
        match self {
            SubschemeJson::Plain { generators } => QSubscheme::new(vec![(
                build_subscheme(generators)?,
                Rat::from_integer(1.into()),
            )]),
            SubschemeJson::Weighted { components } => QSubscheme::new(
                components
                    .iter()
                    .map(|c| Ok((build_subscheme(&c.generators)?, c.coeff.to_rat()?)))
                    .collect::<Result<_>>()?,
            ),
        }
    }
}

pub fn parse_subscheme(s: &str) -> Result<QSubscheme> {
    serde_json::from_str::<SubschemeJson>(s)?.build()
}

pub fn parse_point(s: &str) -> Result<ProjPoint> {
    let raw: Vec<Num> = serde_json::from_str(s)?;
    ProjPoint::new(raw.iter().map(Num::to_int).collect::<Result<_>>()?)
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveJson {
    pub f: Vec<((u32, u32), Num)>,
    #[serde(default)]
    pub at: Option<(Num, Num)>,
}

impl CurveJson {
    /// The curve recentered so the requested point is the origin.
    pub fn build(&self) -> Result<AffineCurve> {
        let f = BiPoly::from_terms(
            self.f
                .iter()
                .map(|(e, c)| Ok((*e, c.to_rat()?)))
                .collect::<Result<Vec<_>>>()?,
        );
        let curve = AffineCurve::new(f)?;
        match &self.at {
            None => Ok(curve),
            Some((a, b)) => {
                AffineCurve::new(curve.centered_at(&a.to_rat()?, &b.to_rat()?).poly().clone())
            }
        }
    }
}

pub fn parse_curve(s: &str) -> Result<AffineCurve> {
    serde_json::from_str::<CurveJson>(s)?.build()
}

/// Plain polynomial `{"terms": [[[i, j], "c"], ...]}` in the affine coordinates.
pub fn parse_bipoly(s: &str) -> Result<BiPoly> {
    #[derive(Deserialize)]
    #[serde(deny_unknown_fields)]
    struct Terms {
        terms: Vec<((u32, u32), Num)>,
    }
    let t: Terms = serde_json::from_str(s)?;
    Ok(BiPoly::from_terms(
        t.terms
            .iter()
            .map(|(e, c)| Ok((*e, c.to_rat()?)))
            .collect::<Result<Vec<_>>>()?,
    ))
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DivisorJson {
    pub id: String,
    pub c: Num,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SncPairJson {
    pub divisors: Vec<DivisorJson>,
    #[serde(default)]
    pub edges: Vec<(String, String)>,
}

pub fn parse_snc_pair(s: &str) -> Result<SncPair> {
    let j: SncPairJson = serde_json::from_str(s)?;
    SncPair::new(
        j.divisors
            .iter()
            .map(|d| Ok((d.id.clone(), d.c.to_rat()?)))
            .collect::<Result<_>>()?,
        j.edges,
    )
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamCurveJson {
    pub params: [PolyJson; 3],
    pub curve: PolyJson,
}

pub fn parse_param_curve(s: &str) -> Result<ParamCurve> {
    let j: ParamCurveJson = serde_json::from_str(s)?;
    let [p0, p1, p2] = &j.params;
    ParamCurve::new([p0.build()?, p1.build()?, p2.build()?], j.curve.build()?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers() {
        assert_eq!(parse_rat("5/6").unwrap(), Rat::new(5.into(), 6.into()));
        assert_eq!(parse_rat(" -4 ").unwrap(), Rat::from_integer((-4).into()));
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("x").is_err());
        let big: Num = serde_json::from_str("\"123456789012345678901234567890\"").unwrap();
        assert_eq!(
            big.to_int().unwrap().to_string(),
            "123456789012345678901234567890"
        );
    }

    #[test]
    fn subschemes_and_points() {
        let z = parse_subscheme(r#"{"generators": [{"vars": 3, "terms": [[[1,0,0], 1]]}, {"vars": 3, "terms": [[[0,1,0], "1"]]}]}"#).unwrap();
        assert_eq!(z.terms().len(), 1);
        let q = parse_subscheme(
            r#"{"components": [{"coeff": "1/2", "generators": [{"vars": 2, "terms": [[[1,0], 1]]}]}]}"#,
        )
        .unwrap();
        assert_eq!(q.terms()[0].1, Rat::new(1.into(), 2.into()));
        assert_eq!(
            parse_point(r#"["-6", 4, "2"]"#).unwrap(),
            ProjPoint::from_ints(&[3, -2, -1]).unwrap()
        );
        assert_eq!(parse_point("[0, 0]"), Err(Error::AllZero));
        assert!(parse_subscheme(
            r#"{"generators": [{"vars": 3, "terms": [[[1,1,0], 1], [[1,0,0], 1]]}]}"#
        )
        .is_err());
    }

    #[test]
    fn curves_and_pairs() {
        let c = parse_curve(r#"{"f": [[[0,2], 1], [[3,0], -1]]}"#).unwrap();
        assert_eq!(c.poly(), &BiPoly::from_ints(&[((0, 2), 1), ((3, 0), -1)]));
        let moved =
            parse_curve(r#"{"f": [[[0,2], 1], [[3,0], -1], [[0,0], 0]], "at": [1, 1]}"#).unwrap();
        assert_eq!(moved.poly().order(), Some(1));
        assert!(parse_curve(r#"{"f": [[[0,2], 1]]}"#).is_err());

        let p = parse_snc_pair(r#"{"divisors": [{"id": "A", "c": "1/2"}, {"id": "B", "c": 1}], "edges": [["A", "B"]]}"#)
            .unwrap();
        assert_eq!(p.divisors().len(), 2);
        assert!(
            parse_snc_pair(r#"{"divisors": [{"id": "A", "c": 1}], "edges": [["A", "Z"]]}"#)
                .is_err()
        );
    }
}
