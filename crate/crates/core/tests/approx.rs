use wh_core::approx::{
    approximation_chain, bernstein_exp_sum, cutoff, mollify, rational_transform, sandwich_check, Bump, Mollified,
    Sampled,
};

fn decaying() -> Sampled {
    Sampled::from_fn(-60.0, 60.0, 1e-3, |x: f64| (-x.abs()).exp())
}

#[test]
fn cutoff_error_shrinks_with_eps() {
    let g = decaying();
    let errs: Vec<f64> = [0.4, 0.2, 0.1, 0.05]
        .iter()
        .map(|&e| cutoff(&g, e).l1_distance(&g))
        .collect();
    assert!(errs.windows(2).all(|w| w[1] < w[0]), "{errs:?}");
    assert!(errs[3] < 0.1);
}

#[test]
fn box_mollifier_distance_is_order_delta() {
    let v = Sampled::from_fn(-2.0, 2.0, 1e-3, |x: f64| if x.abs() <= 1.0 { 1.0 } else { 0.0 });
    for delta in [0.1, 0.05, 0.025] {
        let d = mollify(&v, delta).l1_distance(&v);
        assert!(d <= 2.0 * delta, "delta {delta}: {d}");
        assert!(mollify(&v, delta).l1_norm() <= v.l1_norm() + 1e-12);
    }
}

#[test]
fn bump_chain_meets_bounds() {
    let c = bernstein_exp_sum(&Bump { a: 1.0, b: 2.0 }, 40, 1).unwrap();
    assert_eq!(c.derivative_errors.len(), 3);
    assert!(c.bounds_hold());
    assert!(c.derivative_errors.iter().all(|d| d.measured.is_finite()));
}

#[test]
fn sup_error_does_not_grow_with_degree() {
    let h = Bump { a: 1.0, b: 2.0 };
    let a = bernstein_exp_sum(&h, 40, 0).unwrap();
    let b = bernstein_exp_sum(&h, 80, 0).unwrap();
    assert!(b.sup_errors[0] <= a.sup_errors[0] * 1.1);
}

#[test]
fn full_chain_stages() {
    let c = approximation_chain(&decaying(), 0.2, 0.05, 40, 1, false).unwrap();
    let names: Vec<&str> = c.stages.iter().map(|s| s.stage.as_str()).collect();
    assert_eq!(names, ["cutoff", "mollify", "bernstein", "total"]);
    assert!(c
        .stages
        .iter()
        .all(|s| s.measured.is_finite() && s.measured <= s.claimed));
    let flipped = approximation_chain(&decaying(), 0.2, 0.05, 40, 1, true).unwrap();
    assert!(rational_transform(&flipped).poles.iter().all(|p| p.im >= 1.0));
}

#[test]
fn chain_rejects_bad_parameters() {
    assert!(approximation_chain(&decaying(), 1.5, 0.05, 40, 1, false).is_err());
    assert!(approximation_chain(&decaying(), 0.2, 0.2, 40, 1, false).is_err());
}

#[test]
fn mollified_bump_sandwich() {
    let v = Sampled::from_fn(0.0, 4.0, 1e-3, |x: f64| if (1.0..=3.0).contains(&x) { x } else { 0.0 });
    let h = Mollified::new(v, 0.2);
    let rep = sandwich_check(&h, 2, 1.0, 3.0);
    assert!(rep.holds, "{rep:?}");
}
