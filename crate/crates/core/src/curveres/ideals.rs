use num_bigint::BigInt;
use num_traits::{One, Signed};
use serde::Serialize;

use super::tree::{resolve, ResolutionTree, DEFAULT_MAX_DEPTH};
use super::AffineCurve;
use crate::error::{Error, Result};
use crate::places::Rat;
use crate::poly::BiPoly;
use crate::snc::{classify, DiscrepancyRow, PairClass, ResolvedPairData, SncPair};

/// Row id of the strict transform of the curve.
pub const STRICT_ID: &str = "C";

fn exceptional_id(i: usize) -> String {
    format!("E{}", i + 1)
}

/// Per exceptional curve `E_i`: `k_i` = coefficient in `K_{Y/X}`,
/// `v_i` = coefficient in the total transform of the curve.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValuationData {
    pub k: Vec<i64>,
    pub v: Vec<i64>,
}

impl ValuationData {
    /// `k_i = 1 + sum k_j`, `v_i = m_i + sum v_j`, sums over the centers `p_i`
    /// is proximate to.
    pub fn new(t: &ResolutionTree) -> Self {
        let mut k = Vec::with_capacity(t.len());
        let mut v = Vec::with_capacity(t.len());
        for node in t.nodes() {
            let pk: i64 = node.proximate_to.iter().map(|&j| k[j]).sum();
            let pv: i64 = node.proximate_to.iter().map(|&j| v[j]).sum();
            k.push(1 + pk);
            v.push(node.multiplicity as i64 + pv);
        }
        ValuationData { k, v }
    }
}

/// Rows of `K_{Y/X} - c f^*C`: `a = k_i - c v_i`, `b = c v_i` on each `E_i`, and
/// `a = -c`, `b = c` on the strict transform.
pub fn pair_discrepancies(
    t: &ResolutionTree,
    vd: &ValuationData,
    c: &Rat,
) -> Result<ResolvedPairData> {
    if c.is_negative() {
        return Err(Error::InvalidParameter(format!(
            "boundary coefficient {c} is negative"
        )));
    }
    let mut rows: Vec<DiscrepancyRow> = (0..t.len())
        .map(|i| {
            let b = c * Rat::from_integer(vd.v[i].into());
            DiscrepancyRow {
                id: exceptional_id(i),
                a: Rat::from_integer(vd.k[i].into()) - &b,
                b,
                exceptional: true,
            }
        })
        .collect();
    rows.push(DiscrepancyRow {
        id: STRICT_ID.to_string(),
        a: -c.clone(),
        b: c.clone(),
        exceptional: false,
    });
    ResolvedPairData::new(rows)
}

/// The SNC pair `(Y, -K_{Y/(X, cC)})` with the dual graph of the final model.
pub fn resolved_snc_pair(t: &ResolutionTree, rows: &ResolvedPairData) -> Result<SncPair> {
    let mut edges: Vec<(String, String)> = t
        .exceptional_edges()
        .into_iter()
        .map(|(i, j)| (exceptional_id(i), exceptional_id(j)))
        .collect();
    edges.extend(
        t.curve_meets()
            .into_iter()
            .map(|i| (exceptional_id(i), STRICT_ID.to_string())),
    );
    rows.to_snc_pair(edges)
}

pub fn classify_pair(t: &ResolutionTree, vd: &ValuationData, c: &Rat) -> Result<PairClass> {
    let rows = pair_discrepancies(t, vd, c)?;
    Ok(classify(&resolved_snc_pair(t, &rows)?))
}

/// `min(1, min_i (k_i + 1) / v_i)`.
pub fn lct_of_tree(vd: &ValuationData) -> Rat {
    vd.k.iter()
        .zip(&vd.v)
        .filter(|(_, &v)| v > 0)
        .map(|(&k, &v)| Rat::new((k + 1).into(), v.into()))
        .fold(Rat::one(), |m, x| m.min(x))
}

/// Log canonical threshold of the germ at the origin.
pub fn lct(f: &AffineCurve) -> Result<Rat> {
    let t = resolve(f, DEFAULT_MAX_DEPTH)?;
    Ok(lct_of_tree(&ValuationData::new(&t)))
}

/// Vanishing orders of an auxiliary function along the resolution.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrderData {
    /// `ord_{E_i}(g)`.
    pub exceptional: Vec<i64>,
    /// Largest power of the curve equation dividing `g`.
    pub strict: u32,
}

/// Orders of `g` along every divisor of the resolution.
///
/// The strict transform of `g` is carried through the same charts; its
/// multiplicities `m_i(g)` feed `w_i = m_i(g) + sum_{j proximate} w_j`.
pub fn ord_along(t: &ResolutionTree, g: &BiPoly) -> Result<OrderData> {
    if g.is_zero() {
        return Err(Error::ZeroInput);
    }
    let mut strict: Vec<BiPoly> = Vec::with_capacity(t.len());
    let mut mult: Vec<u32> = Vec::with_capacity(t.len());
    let mut w: Vec<i64> = Vec::with_capacity(t.len());
    for node in t.nodes() {
        let sg = match (node.parent, &node.chart) {
            (Some(p), Some(chart)) => chart.transform(&strict[p], mult[p]),
            _ => g.clone(),
        };
        let m = sg.order().expect("strict transform of a nonzero function");
        let prox: i64 = node.proximate_to.iter().map(|&j| w[j]).sum();
        w.push(m as i64 + prox);
        mult.push(m);
        strict.push(sg);
    }
    Ok(OrderData {
        exceptional: w,
        strict: g.power_dividing(t.curve()),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum IdealKind {
    /// Round-down: `f_* O(floor K_{Y/(X,D)})`.
    H,
    /// Multiplier ideal: `f_* O(ceil K_{Y/(X,D)})`.
    J,
    /// Multiplier ideal of `(1 - eps) D` for small `eps > 0`.
    I,
}

impl std::str::FromStr for IdealKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "H" | "h" => Ok(IdealKind::H),
            "J" | "j" => Ok(IdealKind::J),
            "I" | "i" => Ok(IdealKind::I),
            _ => Err(Error::Parse(format!("unknown ideal kind {s}"))),
        }
    }
}

fn ceil(a: &Rat) -> BigInt {
    a.ceil().to_integer()
}

fn floor(a: &Rat) -> BigInt {
    a.floor().to_integer()
}

/// Minimal vanishing order demanded along each row: `-floor(a)` for `H`,
/// `-ceil(a)` for `J`, and `-ceil(a + eps b)` in the limit `eps -> 0+` for `I`.
pub fn thresholds(rows: &ResolvedPairData, kind: IdealKind) -> Vec<BigInt> {
    rows.rows()
        .iter()
        .map(|r| match kind {
            IdealKind::H => -floor(&r.a),
            IdealKind::J => -ceil(&r.a),
            IdealKind::I => {
                if r.a.is_integer() && r.b.is_positive() {
                    -r.a.to_integer() - BigInt::one()
                } else {
                    -ceil(&r.a)
                }
            }
        })
        .collect()
}

/// Membership of `g` in the ideal of kind `kind` for `(A^2, c C)` at the origin,
/// using an existing resolution.
pub fn ideal_member_on(
    t: &ResolutionTree,
    vd: &ValuationData,
    c: &Rat,
    g: &BiPoly,
    kind: IdealKind,
) -> Result<bool> {
    let rows = pair_discrepancies(t, vd, c)?;
    let ords = ord_along(t, g)?;
    let orders = ords
        .exceptional
        .iter()
        .map(|&w| BigInt::from(w))
        .chain(std::iter::once(BigInt::from(ords.strict)));
    Ok(thresholds(&rows, kind)
        .iter()
        .zip(orders)
        .all(|(need, have)| have >= *need))
}

pub fn ideal_member(f: &AffineCurve, c: &Rat, g: &BiPoly, kind: IdealKind) -> Result<bool> {
    let t = resolve(f, DEFAULT_MAX_DEPTH)?;
    let vd = ValuationData::new(&t);
    ideal_member_on(&t, &vd, c, g, kind)
}
