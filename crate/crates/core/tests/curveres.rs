use arithgeom::curveres::{
    classify_pair, lct, lct_of_tree, ord_along, resolve, AffineCurve, Chart, ResolutionTree,
    ValuationData,
};
use arithgeom::json::parse_curve;
use arithgeom::poly::BiPoly;
use arithgeom::snc::PairClass;
use arithgeom::Rat;
use proptest::prelude::*;

fn r(n: i64, d: i64) -> Rat {
    Rat::new(n.into(), d.into())
}

fn curve(terms: &[((u32, u32), i64)]) -> AffineCurve {
    AffineCurve::new(BiPoly::from_ints(terms)).unwrap()
}

fn examples() -> Vec<(&'static str, AffineCurve)> {
    vec![
        ("cusp", curve(&[((0, 2), 1), ((3, 0), -1)])),
        ("node", curve(&[((0, 2), 1), ((3, 0), -1), ((2, 0), -1)])),
        ("tacnode", curve(&[((0, 2), 1), ((4, 0), -1)])),
        ("triple", curve(&[((0, 3), 1), ((2, 1), -1)])),
        ("e8", curve(&[((0, 3), 1), ((5, 0), -1)])),
        ("a4", curve(&[((0, 2), 1), ((5, 0), -1)])),
        ("vertical cusp", curve(&[((2, 0), 1), ((0, 3), -1)])),
    ]
}

/// Order of `g` along `E_i` read off the total transform: pull `g` back along
/// the chain of charts to the center of node `i`, then through one more chart
/// of its blowup, and take the power of the exceptional coordinate.
fn total_transform_order(t: &ResolutionTree, g: &BiPoly, i: usize) -> i64 {
    let mut path = Vec::new();
    let mut cur = Some(i);
    while let Some(k) = cur {
        path.push(k);
        cur = t.nodes()[k].parent;
    }
    path.reverse();
    let mut h = g.clone();
    for &k in &path[1..] {
        let (sx, sy) = t.nodes()[k]
            .chart
            .as_ref()
            .expect("child has a chart")
            .coordinate_map();
        h = h.compose(&sx, &sy);
    }
    let (sx, sy) = Chart::Direction(Rat::from_integer(0.into())).coordinate_map();
    h = h.compose(&sx, &sy);
    h.terms()
        .map(|(&(a, _), _)| a as i64)
        .min()
        .expect("nonzero")
}

#[test]
fn published_thresholds() {
    let want = [
        r(5, 6),
        r(1, 1),
        r(3, 4),
        r(2, 3),
        r(8, 15),
        r(7, 10),
        r(5, 6),
    ];
    for ((name, f), w) in examples().iter().zip(want) {
        assert_eq!(lct(f).unwrap(), w, "{name}");
    }
}

#[test]
fn ord_along_matches_total_transform() {
    let gs = [
        BiPoly::x(),
        BiPoly::y(),
        BiPoly::from_ints(&[((0, 1), 1), ((2, 0), -1)]),
        BiPoly::from_ints(&[((1, 1), 3), ((3, 0), 1), ((0, 4), -2)]),
        BiPoly::from_ints(&[((0, 0), 1), ((1, 0), 1)]),
    ];
    for (name, f) in examples() {
        let t = resolve(&f, 64).unwrap();
        for g in gs.iter().chain(std::iter::once(f.poly())) {
            let o = ord_along(&t, g).unwrap();
            for i in 0..t.len() {
                assert_eq!(
                    o.exceptional[i],
                    total_transform_order(&t, g, i),
                    "{name}, g = {g}, E{}",
                    i + 1
                );
            }
        }
        // the curve itself has v_i as its orders
        let vd = ValuationData::new(&t);
        assert_eq!(ord_along(&t, f.poly()).unwrap().exceptional, vd.v, "{name}");
    }
}

#[test]
fn classes_change_exactly_at_the_threshold() {
    for (name, f) in examples() {
        let t = resolve(&f, 64).unwrap();
        let vd = ValuationData::new(&t);
        let c = lct_of_tree(&vd);
        let below = &c - r(1, 1000);
        let above = &c + r(1, 1000);
        assert!(
            classify_pair(&t, &vd, &below).unwrap() <= PairClass::KawamataLogTerminal,
            "{name}"
        );
        assert_eq!(
            classify_pair(&t, &vd, &c).unwrap(),
            PairClass::LogCanonical,
            "{name}"
        );
        assert_eq!(
            classify_pair(&t, &vd, &above).unwrap(),
            PairClass::NotLogCanonical,
            "{name}"
        );
    }
}

#[test]
fn curves_from_json() {
    let c = parse_curve(r#"{"f": [[[0, 2], 1], [[3, 0], "-1"]]}"#).unwrap();
    assert_eq!(lct(&c).unwrap(), r(5, 6));
    // the node of y^2 = x^2 (x + 1) moved to (1, 2)
    let moved = AffineCurve::new(examples()[1].1.poly().translate(&r(-1, 1), &r(-2, 1))).unwrap();
    let recentered = moved.centered_at(&r(1, 1), &r(2, 1));
    assert_eq!(lct(&recentered).unwrap(), r(1, 1));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// `y^m = x^d` with coprime exponents has threshold `1/m + 1/d` (capped at 1).
    #[test]
    fn quasi_homogeneous_threshold(m in 2u32..6, d in 2u32..8) {
        prop_assume!(num_integer::gcd(m, d) == 1);
        let f = curve(&[((0, m), 1), ((d, 0), -1)]);
        let want = (r(1, m as i64) + r(1, d as i64)).min(r(1, 1));
        prop_assert_eq!(lct(&f).unwrap(), want);
    }

    /// Random auxiliary functions: proximity recursion equals total-transform orders.
    #[test]
    fn ord_along_random(coeffs in proptest::collection::vec(-3i64..=3, 10)) {
        let monos = [(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2), (3, 0), (2, 1), (0, 3), (4, 1)];
        let terms: Vec<((u32, u32), i64)> = monos.iter().copied().zip(coeffs).collect();
        let g = BiPoly::from_ints(&terms);
        prop_assume!(!g.is_zero());
        let f = curve(&[((0, 2), 1), ((5, 0), -1)]);
        let t = resolve(&f, 64).unwrap();
        let o = ord_along(&t, &g).unwrap();
        for i in 0..t.len() {
            prop_assert_eq!(o.exceptional[i], total_transform_order(&t, &g, i));
        }
    }
}
