use std::collections::BTreeSet;
use std::fmt;

use num_traits::Zero;
use serde::Serialize;

use super::AffineCurve;
use crate::error::{Error, Result};
use crate::places::Rat;
use crate::poly::{BiPoly, UniPoly};

/// Default bound on the length of a chain of infinitely near points.
pub const DEFAULT_MAX_DEPTH: usize = 64;

/// Affine chart of a point blowup, written in coordinates centered at the new
/// point.
///
/// * `Direction(t)`: `x = u`, `y = u (w + t)`; the exceptional curve is `u = 0`.
/// * `Vertical`: `x = u w`, `y = w`; the exceptional curve is `w = 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Chart {
    Direction(Rat),
    Vertical,
}

impl Chart {
    /// Pulls `p` back through the chart and divides by the `power`-th power of
    /// the exceptional equation. With `power = 0` this is the total transform;
    /// with `power = mult(p)` it is the strict transform.
    pub fn transform(&self, p: &BiPoly, power: u32) -> BiPoly {
        let mut out = BiPoly::zero();
        match self {
            Chart::Direction(t) => {
                // x^i y^j -> u^(i+j-power) (w + t)^j
                let shift = &BiPoly::y() + &BiPoly::constant(t.clone());
                let mut pows = vec![BiPoly::one()];
                for (&(i, j), c) in p.terms() {
                    while pows.len() <= j as usize {
                        let next = pows.last().expect("nonempty") * &shift;
                        pows.push(next);
                    }
                    let e = (i + j)
                        .checked_sub(power)
                        .expect("power exceeds multiplicity");
                    let term = &BiPoly::monomial(e, 0, c.clone()) * &pows[j as usize];
                    out = &out + &term;
                }
            }
            Chart::Vertical => {
                // x^i y^j -> u^i w^(i+j-power)
                for (&(i, j), c) in p.terms() {
                    let e = (i + j)
                        .checked_sub(power)
                        .expect("power exceeds multiplicity");
                    out = &out + &BiPoly::monomial(i, e, c.clone());
                }
            }
        }
        out
    }

    /// `(x, y)` as polynomials in the new coordinates.
    pub fn coordinate_map(&self) -> (BiPoly, BiPoly) {
        match self {
            Chart::Direction(t) => (
                BiPoly::x(),
                &BiPoly::x() * &(&BiPoly::y() + &BiPoly::constant(t.clone())),
            ),
            Chart::Vertical => (&BiPoly::x() * &BiPoly::y(), BiPoly::y()),
        }
    }

    fn exceptional_axis(&self) -> Axis {
        match self {
            Chart::Direction(_) => Axis::First,
            Chart::Vertical => Axis::Second,
        }
    }
}

impl fmt::Display for Chart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Chart::Direction(t) => write!(f, "y = {t}x"),
            Chart::Vertical => write!(f, "x = 0"),
        }
    }
}

/// Which local coordinate vanishes along an exceptional curve through a center.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub(crate) enum Axis {
    First,
    Second,
}

/// Infinitely near point of the plane.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeNode {
    pub id: usize,
    pub parent: Option<usize>,
    /// Chart of the parent's blowup containing this center.
    pub chart: Option<Chart>,
    /// Earlier centers whose exceptional curves pass through this one.
    pub proximate_to: BTreeSet<usize>,
    /// Multiplicity of the strict transform of the curve at this center.
    pub multiplicity: u32,
    pub(crate) strict: BiPoly,
    pub(crate) axes: Vec<(usize, Axis)>,
}

/// Point of the final model where the strict transform of the curve meets
/// the exceptional locus.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct CurvePoint {
    pub on: usize,
    pub chart: Chart,
    pub meets: Vec<usize>,
}

/// Sequence of point blowups making the total transform of a curve germ
/// simple normal crossing. Node ids are creation order (depth-first), so
/// every proximity reference points to a smaller id.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResolutionTree {
    curve: BiPoly,
    nodes: Vec<TreeNode>,
    curve_points: Vec<CurvePoint>,
}

#[derive(Debug, Clone, Serialize)]
pub struct NodeSummary {
    pub id: String,
    pub parent: Option<String>,
    pub proximate_to: Vec<String>,
    pub multiplicity: u32,
}

pub(crate) fn label(id: usize) -> String {
    format!("p{}", id + 1)
}

fn restriction_order(p: &UniPoly) -> Option<usize> {
    p.coeffs().iter().position(|c| !c.is_zero())
}

/// True when the strict transform together with the exceptional axes through
/// the origin fails to be simple normal crossing there.
fn needs_blowup(strict: &BiPoly, axes: &[(usize, Axis)]) -> bool {
    match strict.order() {
        None | Some(0) => false,
        Some(1) => match axes {
            [] => false,
            [(_, axis)] => {
                let r = match axis {
                    Axis::First => strict.restrict_x_zero(),
                    Axis::Second => strict.restrict_y_zero(),
                };
                restriction_order(&r).is_none_or(|k| k >= 2)
            }
            _ => true,
        },
        Some(_) => true,
    }
}

/// Rational points of the exceptional curve hit by the strict transform.
fn tangent_charts(strict: &BiPoly, m: u32, depth: usize) -> Result<Vec<Chart>> {
    let cone = strict.homogeneous_part(m);
    // cone(x, y) = sum c_j x^(m-j) y^j  ->  sum c_j t^j
    let dehom = UniPoly::new((0..=m).map(|j| cone.coeff(m - j, j)).collect::<Vec<Rat>>());
    let deg = dehom.degree().expect("tangent cone is nonzero") as u32;
    let (roots, rest) = dehom.rational_roots();
    if rest.degree().unwrap_or(0) > 0 {
        return Err(Error::NonRationalCenter { depth });
    }
    let mut charts: Vec<Chart> = roots
        .into_iter()
        .map(|(t, _)| Chart::Direction(t))
        .collect();
    if deg < m {
        charts.push(Chart::Vertical);
    }
    Ok(charts)
}

fn transfer_axes(axes: &[(usize, Axis)], chart: &Chart, new_id: usize) -> Vec<(usize, Axis)> {
    let mut out = vec![(new_id, chart.exceptional_axis())];
    let kept = match chart {
        Chart::Direction(t) if t.is_zero() => Some(Axis::Second),
        Chart::Direction(_) => None,
        Chart::Vertical => Some(Axis::First),
    };
    if let Some(kept) = kept {
        out.extend(axes.iter().filter(|(_, a)| *a == kept).cloned());
    }
    out
}

impl ResolutionTree {
    pub fn nodes(&self) -> &[TreeNode] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn curve(&self) -> &BiPoly {
        &self.curve
    }

    pub fn multiplicities(&self) -> Vec<u32> {
        self.nodes.iter().map(|n| n.multiplicity).collect()
    }

    pub fn summary(&self) -> Vec<NodeSummary> {
        self.nodes
            .iter()
            .map(|n| NodeSummary {
                id: label(n.id),
                parent: n.parent.map(label),
                proximate_to: n.proximate_to.iter().map(|&j| label(j)).collect(),
                multiplicity: n.multiplicity,
            })
            .collect()
    }

    /// Exceptional curves met by the strict transform on the final model.
    pub fn curve_meets(&self) -> BTreeSet<usize> {
        self.curve_points
            .iter()
            .flat_map(|p| p.meets.iter().copied())
            .collect()
    }

    /// Pairs of exceptional curves that intersect on the final model.
    ///
    /// `E_i` and `E_j` (`i < j`) meet iff `p_j` is proximate to `p_i` and no
    /// later center is proximate to both.
    pub fn exceptional_edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for j in 0..self.nodes.len() {
            for &i in &self.nodes[j].proximate_to {
                let separated = self.nodes[j + 1..]
                    .iter()
                    .any(|k| k.proximate_to.contains(&i) && k.proximate_to.contains(&j));
                if !separated {
                    out.push((i, j));
                }
            }
        }
        out
    }

    fn push_node(
        &mut self,
        parent: Option<usize>,
        chart: Option<Chart>,
        strict: BiPoly,
        axes: Vec<(usize, Axis)>,
    ) -> usize {
        let id = self.nodes.len();
        self.nodes.push(TreeNode {
            id,
            parent,
            chart,
            proximate_to: axes.iter().map(|(j, _)| *j).collect(),
            multiplicity: strict.order().unwrap_or(0),
            strict,
            axes,
        });
        id
    }

    fn expand(&mut self, id: usize, depth: usize, max_depth: usize) -> Result<()> {
        let node = self.nodes[id].clone();
        let m = node.multiplicity;
        if m == 0 {
            return Ok(());
        }
        for chart in tangent_charts(&node.strict, m, depth)? {
            let strict = chart.transform(&node.strict, m);
            let axes = transfer_axes(&node.axes, &chart, id);
            if needs_blowup(&strict, &axes) {
                if depth + 1 > max_depth {
                    return Err(Error::DepthExceeded(max_depth));
                }
                let child = self.push_node(Some(id), Some(chart), strict, axes);
                self.expand(child, depth + 1, max_depth)?;
            } else {
                self.curve_points.push(CurvePoint {
                    on: id,
                    chart,
                    meets: axes.iter().map(|(j, _)| *j).collect(),
                });
            }
        }
        Ok(())
    }

    /// Blows up one more rational point of the final model: the point of
    /// `E_parent` in `chart`, or the original point when the tree is empty and
    /// `parent` is `None`. The total transform stays simple normal crossing.
    pub fn with_extra_blowup(&self, parent: Option<usize>, chart: Chart) -> Result<ResolutionTree> {
        let mut out = self.clone();
        let Some(p) = parent else {
            if !self.nodes.is_empty() {
                return Err(Error::InvalidCenter(
                    "the original point is already blown up".into(),
                ));
            }
            let id = out.push_node(None, None, self.curve.clone(), Vec::new());
            out.expand(id, 1, 1)?;
            return Ok(out);
        };
        let Some(pnode) = self.nodes.get(p) else {
            return Err(Error::InvalidCenter(format!("no node {}", label(p))));
        };
        if self
            .nodes
            .iter()
            .any(|n| n.parent == Some(p) && n.chart.as_ref() == Some(&chart))
        {
            return Err(Error::InvalidCenter(format!(
                "{} on E{} is already a center",
                chart,
                p + 1
            )));
        }
        let strict = chart.transform(&pnode.strict, pnode.multiplicity);
        let axes = transfer_axes(&pnode.axes, &chart, p);
        out.curve_points
            .retain(|cp| !(cp.on == p && cp.chart == chart));
        let id = out.push_node(Some(p), Some(chart), strict, axes);
        let before = out.nodes.len();
        out.expand(id, 1, 1)?;
        debug_assert_eq!(
            before,
            out.nodes.len(),
            "extra blowup must keep the model SNC"
        );
        Ok(out)
    }
}

/// Resolves the germ of `f` at the origin by iterated point blowups.
///
/// A germ that is smooth (or absent) at the origin gives an empty tree.
/// Every center must be Q-rational: a tangent cone with an irreducible factor
/// of degree at least two is rejected with [`Error::NonRationalCenter`].
pub fn resolve(f: &AffineCurve, max_depth: usize) -> Result<ResolutionTree> {
    let curve = f.poly().clone();
    let mut tree = ResolutionTree {
        curve: curve.clone(),
        nodes: Vec::new(),
        curve_points: Vec::new(),
    };
    if curve.order().unwrap_or(0) <= 1 {
        return Ok(tree);
    }
    if max_depth == 0 {
        return Err(Error::DepthExceeded(0));
    }
    let root = tree.push_node(None, None, curve, Vec::new());
    tree.expand(root, 1, max_depth)?;
    Ok(tree)
}
