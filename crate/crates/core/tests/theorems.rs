use std::f64::consts::PI;

use shearconv_core::verify::{counterexample_search, direction_convexity_check};
use shearconv_core::*;

fn params() -> TheoremParams {
    TheoremParams::default()
}

#[test]
fn standard_instance_reduces_to_f0_convolution() {
    let bundle = verify_theorem(
        TheoremId::T2_3,
        &TheoremParams {
            a: Some(0.0),
            ..params()
        },
        &VerifyOptions::default(),
    )
    .unwrap();
    assert_eq!(bundle.verdict(), Verdict::Pass);
    assert_eq!(bundle.reports.len(), 5);
    assert!(bundle.min_margin() > 0.0);

    let preset = verify_theorem(TheoremId::T1_3, &params(), &VerifyOptions::default()).unwrap();
    assert_eq!(preset.pair, bundle.pair);
}

#[test]
fn minus_instance_with_strip_target() {
    let bundle = verify_theorem(
        TheoremId::T3_2,
        &TheoremParams {
            b: Some(0.0),
            eta: Some(3.0 * PI / 4.0),
            n: Some(2),
            ..params()
        },
        &VerifyOptions::default(),
    )
    .unwrap();
    assert_eq!(bundle.verdict(), Verdict::Pass);
}

#[test]
fn out_of_range_coefficient_is_rejected() {
    for a in [1.2, -1.0, 1.0] {
        let p = TheoremParams {
            a: Some(a),
            ..params()
        };
        assert!(verify_theorem(TheoremId::T2_3, &p, &VerifyOptions::default()).is_err());
    }
}

#[test]
fn f0_convolution_is_convex_horizontally_on_sub_disk() {
    let order = 5120;
    let f0 = FamilySpec::new(Family::StandardF0, order);
    let t = FamilySpec::new(
        Family::PlusT {
            eta: PI,
            gamma: 0.0,
            theta: 0.0,
            n: 1,
        },
        order,
    );
    let conv = convolve_families(&f0, &t).unwrap();
    let rep = direction_convexity_check(&conv.map, 0.0, 0.99, 8192);
    assert_eq!(rep.verdict, Verdict::Pass);
}

#[test]
fn counterexample_search_reports_every_value() {
    let grid = GridSpec::new(vec![0.5, 0.9, 0.99], 256).unwrap();
    let reports =
        counterexample_search(Sign::Plus, PI, 0.0, 0.0, 2, &[0.0, 0.5, -0.5], &grid).unwrap();
    assert_eq!(reports.len(), 3);
    assert_eq!(reports[0].verdict, Verdict::Pass);
    assert_eq!(reports[1].verdict, Verdict::Pass);
    assert!(counterexample_search(Sign::Minus, PI, 0.0, 0.0, 1, &[1.5], &grid).is_err());
}

#[test]
fn series_convolution_matches_closed_dilatation() {
    let pair = ConvolutionPair {
        setting: Sign::Minus,
        coef: -0.4,
        alpha: 0.9,
        eta: 2.0,
        gamma: 0.6,
        theta: 2.2,
        n: 3,
    };
    let map = pair.convolved_series(256).unwrap();
    let closed = pair.closed_form();
    for k in 0..50 {
        let z = Complex64::from_polar(0.3 + 0.012 * k as f64, 0.37 * k as f64);
        let (hp, gp) = map.derivatives(z);
        assert!((gp / hp - closed.w(z)).norm() < 1e-8);
    }
}
