use arithgeom::experiments::{
    gcd_bounds_check, mdlaw_param, mdlaw_records, sample_param_points, write_csv, ParamCurve,
    CSV_HEADER,
};
use arithgeom::heights::{HomogPoly, ProjPoint};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn nodal_cubic() -> ParamCurve {
    let f = HomogPoly::from_ints(3, &[(&[0, 2, 1], 1), (&[3, 0, 0], -1), (&[2, 0, 1], -1)]);
    let p0 = HomogPoly::from_ints(2, &[(&[2, 1], 1), (&[0, 3], -1)]);
    let p1 = HomogPoly::from_ints(2, &[(&[3, 0], 1), (&[1, 2], -1)]);
    let p2 = HomogPoly::from_ints(2, &[(&[0, 3], 1)]);
    ParamCurve::new([p0, p1, p2], f).unwrap()
}

/// Real root of `r^3 = r + 1`; `log` of it bounds `|h_O - 2/3 h|` on the nodal cubic.
fn plastic() -> f64 {
    let mut r = 1.3f64;
    for _ in 0..50 {
        r -= (r * r * r - r - 1.0) / (3.0 * r * r - 1.0);
    }
    r
}

#[test]
fn nodal_cubic_residual_bounded_by_closed_form() {
    let pc = nodal_cubic();
    let bound = plastic().ln();
    let mut last = 0.0;
    for b in [15, 30, 60, 120] {
        let (rep, _) = mdlaw_param(&pc, b, 20.0).unwrap();
        assert_eq!((rep.m, rep.d), (2, 3));
        assert!(
            rep.max_abs_residual < bound,
            "bound {b}: {}",
            rep.max_abs_residual
        );
        assert!(rep.max_abs_residual >= last);
        last = rep.max_abs_residual;
    }
    assert!(bound - last < 1e-3);
}

#[test]
fn nodal_cubic_height_ratio_at_large_parameters() {
    let pc = nodal_cubic();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut points = Vec::new();
    while points.len() < 300 {
        let p: i64 = rng.gen_range(-20_000..=20_000);
        let q: i64 = rng.gen_range(5_000..=20_000);
        if p.gcd(&q) != 1 || p.abs() == q {
            continue;
        }
        let img = pc.eval(&BigInt::from(p), &BigInt::from(q));
        points.push(ProjPoint::new(img.to_vec()).unwrap());
    }
    let (rep, recs) = mdlaw_records(pc.curve(), &points, 20.0).unwrap();
    assert_eq!(rep.high_samples, points.len());
    for r in &recs {
        assert!(r.h.value() >= 20.0);
        assert!((r.h_o.value() / r.h.value() - 2.0 / 3.0).abs() <= 0.05);
    }
    assert!((rep.slope_fit - 2.0 / 3.0).abs() < 0.05);
}

#[test]
fn samples_lie_on_curve_and_are_distinct() {
    let pc = nodal_cubic();
    let pts = sample_param_points(&pc, 25).unwrap();
    let mut seen = std::collections::HashSet::new();
    for s in &pts {
        assert!(pc.curve().eval(s.point.coords()).is_zero());
        assert!(seen.insert(s.point.clone()));
    }
    assert_eq!(pts.iter().filter(|s| s.is_o).count(), 1);
}

#[test]
fn csv_is_sorted_by_parameter() {
    let (_, rows) = mdlaw_param(&nodal_cubic(), 10, 20.0).unwrap();
    let mut buf = Vec::new();
    write_csv(&mut buf, &rows).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some(CSV_HEADER));
    let keys: Vec<(i64, i64)> = lines
        .map(|l| {
            let mut it = l.split(',');
            (
                it.next().unwrap().parse().unwrap(),
                it.next().unwrap().parse().unwrap(),
            )
        })
        .collect();
    assert!(keys.windows(2).all(|w| w[0] < w[1]));
    assert_eq!(keys.len(), rows.len());
}

#[test]
fn gcd_bounds_on_nodal_sample() {
    let pc = nodal_cubic();
    let pts: Vec<ProjPoint> = sample_param_points(&pc, 40)
        .unwrap()
        .into_iter()
        .map(|s| s.point)
        .collect();
    let rep = gcd_bounds_check(pc.curve(), &pts, 0.05, 1.0).unwrap();
    assert!(rep.c1.is_finite() && rep.c1 > 0.0);
    assert!(rep.c2.is_finite() && rep.c2 >= rep.c1);
    assert_eq!(rep.violations, 0);
    assert!(rep.used > 0 && rep.used + rep.filtered_out == pts.len());
    assert!(rep.exponent_window.0 < rep.exponent_window.1);
}
