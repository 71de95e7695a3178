//! Discrepancies and singularity classes of log pairs given by simple normal
//! crossing data, loci of non-strongly-canonical / non-klt / non-lc points,
//! and the reduced divisor `ceil(K + eps f^*D) - floor(K)`.
//!
//! A pair `(X, sum c_i F_i)` on a smooth `X` with `F_i` SNC is described only by
//! its coefficients and which components meet; that is all the classification
//! needs.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::places::Rat;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SncPair {
    divisors: Vec<(String, Rat)>,
    edges: Vec<(usize, usize)>,
}

impl SncPair {
    pub fn new(divisors: Vec<(String, Rat)>, edges: Vec<(String, String)>) -> Result<Self> {
        let mut index = HashMap::new();
        for (i, (id, _)) in divisors.iter().enumerate() {
            if index.insert(id.clone(), i).is_some() {
                return Err(Error::InvalidSncPair(format!("duplicate id {id}")));
            }
        }
        let mut resolved = BTreeSet::new();
        for (a, b) in edges {
            if a == b {
                return Err(Error::InvalidSncPair(format!("self-loop on {a}")));
            }
            let lookup = |id: &String| {
                index.get(id).copied().ok_or_else(|| {
                    Error::InvalidSncPair(format!("edge references unknown id {id}"))
                })
            };
            let (i, j) = (lookup(&a)?, lookup(&b)?);
            resolved.insert((i.min(j), i.max(j)));
        }
        Ok(SncPair {
            divisors,
            edges: resolved.into_iter().collect(),
        })
    }

    pub fn divisors(&self) -> &[(String, Rat)] {
        &self.divisors
    }

    pub fn edges(&self) -> impl Iterator<Item = (&str, &str)> {
        self.edges
            .iter()
            .map(|&(i, j)| (self.divisors[i].0.as_str(), self.divisors[j].0.as_str()))
    }

    fn coeff(&self, i: usize) -> &Rat {
        &self.divisors[i].1
    }
}

/// Rationals extended by `-inf`, which sorts below every finite value.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExtRat {
    NegInfinity,
    Finite(Rat),
}

impl ExtRat {
    pub fn finite(&self) -> Option<&Rat> {
        match self {
            ExtRat::Finite(r) => Some(r),
            ExtRat::NegInfinity => None,
        }
    }
}

impl fmt::Display for ExtRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtRat::NegInfinity => write!(f, "-inf"),
            ExtRat::Finite(r) => write!(f, "{r}"),
        }
    }
}

/// Strictest class attained; `StronglyCanonical` implies klt implies lc.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum PairClass {
    StronglyCanonical,
    KawamataLogTerminal,
    LogCanonical,
    NotLogCanonical,
}

impl fmt::Display for PairClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            PairClass::StronglyCanonical => "strongly canonical",
            PairClass::KawamataLogTerminal => "klt",
            PairClass::LogCanonical => "log canonical",
            PairClass::NotLogCanonical => "not log canonical",
        };
        f.write_str(s)
    }
}

fn int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// `min{1, min_i (1 - c_i), min_{F_i meets F_j} (1 - c_i - c_j)}`, or `-inf`
/// as soon as some `c_i > 1`.
pub fn discrep(p: &SncPair) -> ExtRat {
    if p.divisors.iter().any(|(_, c)| c > &Rat::one()) {
        return ExtRat::NegInfinity;
    }
    let one = Rat::one();
    let singles = p.divisors.iter().map(|(_, c)| &one - c);
    let pairs = p.edges.iter().map(|&(i, j)| &one - p.coeff(i) - p.coeff(j));
    let min = singles.chain(pairs).fold(one.clone(), |m, v| m.min(v));
    ExtRat::Finite(min)
}

/// `min{0, min_i (-c_i), discrep}` with `-inf` propagated.
pub fn totaldiscrep(p: &SncPair) -> ExtRat {
    match discrep(p) {
        ExtRat::NegInfinity => ExtRat::NegInfinity,
        ExtRat::Finite(d) => {
            let min = p
                .divisors
                .iter()
                .map(|(_, c)| -c)
                .fold(Rat::zero().min(d), |m, v| m.min(v));
            ExtRat::Finite(min)
        }
    }
}

/// Coefficient criterion: all `c_i <= 0` / `< 1` / `<= 1`.
pub fn classify(p: &SncPair) -> PairClass {
    let coeffs = || p.divisors.iter().map(|(_, c)| c);
    let one = Rat::one();
    if coeffs().all(|c| !c.is_positive()) {
        PairClass::StronglyCanonical
    } else if coeffs().all(|c| c < &one) {
        PairClass::KawamataLogTerminal
    } else if coeffs().all(|c| c <= &one) {
        PairClass::LogCanonical
    } else {
        PairClass::NotLogCanonical
    }
}

/// Threshold reading of `totaldiscrep`: `>= 0`, `> -1`, `>= -1`.
pub fn classify_via_totaldiscrep(p: &SncPair) -> PairClass {
    match totaldiscrep(p) {
        ExtRat::NegInfinity => PairClass::NotLogCanonical,
        ExtRat::Finite(t) => {
            if !t.is_negative() {
                PairClass::StronglyCanonical
            } else if t > int(-1) {
                PairClass::KawamataLogTerminal
            } else if t >= int(-1) {
                PairClass::LogCanonical
            } else {
                PairClass::NotLogCanonical
            }
        }
    }
}

/// One prime divisor on a log resolution: its discrepancy `a` and its
/// multiplicity `b` in the pulled-back boundary.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DiscrepancyRow {
    pub id: String,
    #[serde(serialize_with = "crate::json::ser_rat")]
    pub a: Rat,
    #[serde(serialize_with = "crate::json::ser_rat")]
    pub b: Rat,
    pub exceptional: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ResolvedPairData {
    rows: Vec<DiscrepancyRow>,
}

impl ResolvedPairData {
    pub fn new(rows: Vec<DiscrepancyRow>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for r in &rows {
            if !seen.insert(r.id.as_str()) {
                return Err(Error::InvalidSncPair(format!("duplicate id {}", r.id)));
            }
        }
        Ok(ResolvedPairData { rows })
    }

    pub fn rows(&self) -> &[DiscrepancyRow] {
        &self.rows
    }

    pub fn row(&self, id: &str) -> Option<&DiscrepancyRow> {
        self.rows.iter().find(|r| r.id == id)
    }

    /// The SNC pair `(Y, -K_{Y/(X,D)})` on the resolved model, whose total
    /// discrepancy equals that of `(X, D)`.
    pub fn to_snc_pair(&self, edges: Vec<(String, String)>) -> Result<SncPair> {
        SncPair::new(
            self.rows
                .iter()
                .map(|r| (r.id.clone(), -r.a.clone()))
                .collect(),
            edges,
        )
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Loci {
    pub non_sc: BTreeSet<String>,
    pub non_klt: BTreeSet<String>,
    pub non_lc: BTreeSet<String>,
}

/// Divisors with `a < 0`, `a <= -1`, `a < -1`.
pub fn loci_divisors(r: &ResolvedPairData) -> Loci {
    let minus_one = int(-1);
    let mut loci = Loci::default();
    for row in &r.rows {
        if row.a.is_negative() {
            loci.non_sc.insert(row.id.clone());
        }
        if row.a <= minus_one {
            loci.non_klt.insert(row.id.clone());
        }
        if row.a < minus_one {
            loci.non_lc.insert(row.id.clone());
        }
    }
    loci
}

/// Support of `ceil(K + eps f^*D) - floor(K)` for all small `eps > 0`.
///
/// A divisor is in it iff `a` is not an integer, or `a` is an integer and
/// `b > 0`.
pub fn vojta_reduced_divisor(r: &ResolvedPairData) -> Result<BTreeSet<String>> {
    let mut out = BTreeSet::new();
    for row in &r.rows {
        if row.b.is_negative() {
            return Err(Error::NegativeB(row.id.clone()));
        }
        if !row.a.is_integer() || row.b.is_positive() {
            out.insert(row.id.clone());
        }
    }
    Ok(out)
}

/// `totaldiscrep = discrep = 2/n - 1` for the quotient singularity `1/n(1,1)`.
pub fn quotient_discrepancy_1_1(n: i64) -> Result<Rat> {
    if n < 2 {
        return Err(Error::BadOrder(n));
    }
    Ok(Rat::new(2.into(), n.into()) - Rat::one())
}
