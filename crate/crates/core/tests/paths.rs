use proptest::prelude::*;
use stasheff_core::paths::*;

fn coeff() -> impl Strategy<Value = f64> {
    -1.0f64..1.0
}

fn vecd(d: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(coeff(), d)
}

fn curve() -> impl Strategy<Value = Curve> {
    (1usize..=3).prop_flat_map(|d| {
        prop_oneof![
            prop::collection::vec(vecd(d), 1..=4).prop_map(|coeffs| Curve::Poly { coeffs }),
            (vecd(d), vecd(d), vecd(d), 1.0f64..3.0).prop_map(|(offset, cos, sin, freq)| Curve::Trig { offset, cos, sin, freq }),
            vecd(d).prop_map(|value| Curve::Const { value }),
            (vecd(d), vecd(d), prop::collection::vec(vecd(d), 0..=3)).prop_map(|(a, b, q)| Curve::Bridge { a, b, q }),
        ]
    })
}

/// A polynomial `R^d → R` of degree at most 3.
fn functional(d: usize) -> impl Strategy<Value = Functional> {
    let monomial = (coeff(), prop::collection::vec(0u32..=3, d)).prop_filter("degree <= 3", |(_, e)| e.iter().sum::<u32>() <= 3);
    prop::collection::vec(monomial, 1..=4).prop_map(|terms| Functional { terms })
}

fn curve_and_functional() -> impl Strategy<Value = (Curve, Functional)> {
    curve().prop_flat_map(|c| {
        let d = c.dim();
        (Just(c), functional(d))
    })
}

proptest! {
    #[test]
    fn paths_factor_through_clamp(c in curve(), t in -2.0f64..3.0, bump in prop_oneof![Just(Bump::Exp), Just(Bump::ExpSquared)]) {
        let u = SmoothPath::from_curve(c, bump).unwrap();
        prop_assert_eq!(u.eval(t), u.eval(clamp(t)));
    }

    #[test]
    fn factory_paths_are_flat_at_the_ends((c, phi) in curve_and_functional()) {
        prop_assert!(phi.degree() <= 3);
        let u = make_path(c).unwrap();
        for t0 in [0.0, 1.0] {
            for e in flatness_probe(&u, &phi, t0, 3, 1e-2, 1e-5) {
                prop_assert!(e.pass, "t0={} {:?}", t0, e);
            }
        }
    }

    #[test]
    fn factory_paths_are_smooth_inside(c in curve(), t0 in 0.2f64..0.8) {
        let u = make_path(c).unwrap();
        for e in smoothness_probe(&u, t0, 2, ProbeConfig::default()) {
            prop_assert!(e.pass, "t0={} {:?}", t0, e);
        }
    }
}

#[test]
fn bump_properties_on_a_dense_sample() {
    for bump in [Bump::Exp, Bump::ExpSquared] {
        let mut prev = 0.0;
        for i in 0..10_000 {
            let t = -0.5 + 2.0 * i as f64 / 9_999.0;
            let v = bump.eval(t);
            assert!((0.0..=1.0).contains(&v));
            if t <= 0.0 {
                assert_eq!(v, 0.0);
            }
            if t >= 1.0 {
                assert_eq!(v, 1.0);
            }
            assert!((v + bump.eval(1.0 - t) - 1.0).abs() < 1e-15, "{bump:?} at {t}");
            assert!(v >= prev);
            prev = v;
        }
        // strictly increasing where the values resolve in double precision;
        // symmetry covers the upper half
        let grid: Vec<f64> = (0..=90).map(|i| 0.05 + 0.45 * i as f64 / 90.0).collect();
        assert!(grid.windows(2).all(|w| bump.eval(w[0]) < bump.eval(w[1])), "{bump:?}");
    }
}

#[test]
fn factory_examples() {
    let line = make_path(Curve::Poly { coeffs: vec![vec![0.0], vec![1.0]] }).unwrap();
    assert_eq!(line.eval(0.0), vec![0.0]);
    assert_eq!(line.eval(1.0), vec![1.0]);
    assert_eq!(line.eval(0.5), vec![0.5]);

    let c = make_path(Curve::Const { value: vec![2.0, -1.0] }).unwrap();
    let iota = SmoothPath::constant(vec![2.0, -1.0]);
    for t in [-1.0, 0.0, 0.3, 1.0, 4.0] {
        assert_eq!(c.eval(t), iota.eval(t));
    }

    let circle = make_path(Curve::Trig { offset: vec![0.0, 0.0], cos: vec![1.0, 0.0], sin: vec![0.0, 1.0], freq: 1.0 }).unwrap();
    assert_eq!(circle.start(), &[1.0, 0.0]);
    let end = circle.end();
    assert!((end[0] + 1.0).abs() < 1e-15 && end[1].abs() < 1e-15);
}

#[test]
fn finite_difference_examples() {
    for t0 in [-1.0, 0.0, 0.7, 3.0] {
        assert!((finite_diff(&|t| t * t, t0, 2, 1e-2) - 2.0).abs() < 1e-8);
    }
    assert!((finite_diff(&libm::sin, 0.0, 1, 1e-2) - 1.0).abs() < 1e-8);
    // oracle: sixth-order forward differences
    let forward = one_sided_diff(&bump, 0.5, 1, 1e-3, 6, 1.0);
    assert!((finite_diff(&bump, 0.5, 1, 1e-2) - forward).abs() < 1e-6);
}

#[test]
fn flatness_non_examples() {
    let c = SmoothPath::constant(vec![1.0, 2.0]);
    let phi = Functional { terms: vec![(1.0, vec![2, 1]), (-0.5, vec![0, 3])] };
    for t0 in [0.0, 1.0] {
        assert!(flatness_probe(&c, &phi, t0, 3, 1e-2, 1e-5).iter().all(|e| e.estimate == 0.0));
    }
    let kink = SmoothPath::from_fn(1, |t| vec![clamp(t)]);
    let r = flatness_probe(&kink, &Functional::coordinate(1, 0), 0.0, 1, 1e-2, 1e-5);
    assert!(!r[0].pass);
}

#[test]
fn junction_probes() {
    let u = make_path(Curve::Bridge { a: vec![0.0, 1.0], b: vec![1.0, -0.5], q: vec![vec![0.3, 0.7]] }).unwrap();
    let v = make_path(Curve::Bridge { a: vec![1.0, -0.5], b: vec![0.2, 0.4], q: vec![vec![0.9, -0.7]] }).unwrap();
    let (u2, v2) = (u.clone(), v.clone());
    let glued = SmoothPath::from_fn(2, move |t| if t <= 0.5 { u2.eval(2.0 * t) } else { v2.eval(2.0 * t - 1.0) });
    assert!(smoothness_probe(&glued, 0.5, 3, ProbeConfig::default()).iter().all(|e| e.pass));

    // the same curves without the bump: slopes 2γ'(1) and 2γ'(0) disagree
    let naive = SmoothPath::from_fn(1, |t| vec![if t <= 0.5 { 2.0 * t } else { 1.0 + 3.0 * (2.0 * t - 1.0) }]);
    assert!(!smoothness_probe(&naive, 0.5, 1, ProbeConfig::default())[0].pass);
}

#[test]
fn chains_are_composable() {
    let nodes = vec![vec![0.0], vec![1.0], vec![-2.0]];
    let chain = bridge_chain(&nodes, &[vec![vec![0.5]], vec![]], Bump::Exp).unwrap();
    assert_eq!(chain[0].end(), chain[1].start());
    assert!(bridge_chain(&nodes, &[vec![]], Bump::Exp).is_err());
}
