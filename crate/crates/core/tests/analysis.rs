use ramexp::decay::*;
use ramexp::*;

const LEMMA2_N: [usize; 7] = [
    1 << 10,
    1 << 11,
    1 << 12,
    1 << 13,
    1 << 14,
    1 << 15,
    1 << 16,
];

fn fit_family(fam: Family, n: usize) -> DecayFit {
    let t = SieveTables::build(n).unwrap();
    let fp = fam.fprime::<f64>(n, &t).unwrap();
    fit_decay(&expansion_coeffs(&fp, n).unwrap(), DecayModel::Power).unwrap()
}

#[test]
fn divisor_coefficients_decay_like_one_over_r() {
    let fit = fit_family(Family::Divisor, 10_000);
    assert!(fit.exponent > -1.35 && fit.exponent < -0.95, "{fit:?}");
}

#[test]
fn power_coefficients_recover_one_plus_delta() {
    let fit = fit_family(Family::Power(1.0), 10_000);
    assert!(fit.exponent > -2.2 && fit.exponent < -1.8, "{fit:?}");
    for delta in [0.25, 0.5, 1.0] {
        let fit = fit_family(Family::Power(delta), 100_000);
        assert!(
            (fit.exponent + 1.0 + delta).abs() <= 0.2,
            "δ={delta}: {fit:?}"
        );
    }
}

#[test]
fn unit_fit_is_degenerate() {
    let t = SieveTables::build(64).unwrap();
    let fp = Family::Unit.fprime::<f64>(64, &t).unwrap();
    let err = fit_decay(&expansion_coeffs(&fp, 64).unwrap(), DecayModel::Power).unwrap_err();
    assert!(matches!(err, Error::DegenerateFit(_)));
}

#[test]
fn lemma2_sup_ratios_stay_bounded() {
    let t = SieveTables::build(*LEMMA2_N.last().unwrap()).unwrap();
    let fwd = lemma2_forward_sweep(2.0, &LEMMA2_N, &t).unwrap();
    let bwd = lemma2_backward_sweep(3.0, &LEMMA2_N, &t).unwrap();
    for checks in [fwd, bwd] {
        let s = spread(checks.iter().map(|c| c.ratio.unwrap())).unwrap();
        assert!(s <= 3.0, "{checks:?}");
    }
}

#[test]
fn lemma2_directions_compose() {
    let alpha = 3.0;
    let t = SieveTables::build(*LEMMA2_N.last().unwrap()).unwrap();
    let mut ratios = Vec::new();
    for &n in &LEMMA2_N {
        let fhat = log_coefficient_expansion(alpha, n).unwrap();
        let fprime = dual_invert(&fhat, &t).unwrap();
        let fwd = lemma2_forward_check(&fhat, &fprime, alpha).unwrap();
        let back = expansion_coeffs(&fprime, n).unwrap();
        let bwd = lemma2_backward_check(&fprime, &back, alpha - 1.0).unwrap();
        ratios.push(bwd.conclusion_sup / fwd.hypothesis_sup);
    }
    let s = spread(ratios.iter().copied()).unwrap();
    assert!(s <= 5.0, "{ratios:?}");
}

#[test]
fn trivial_lemma2_cases() {
    let t = SieveTables::build(64).unwrap();
    let mut coeffs = vec![0.0; 64];
    coeffs[0] = 1.0;
    let fhat = FiniteExpansion::from_coeffs("delta", coeffs).unwrap();
    let fp = dual_invert(&fhat, &t).unwrap();
    let c = lemma2_forward_check(&fhat, &fp, 2.0).unwrap();
    assert_eq!(c.conclusion_sup, 0.0);
    assert_eq!(c.ratio, None);
    assert!(lemma2_forward_check(&fhat, &fp, 1.0).is_err());
    let c = lemma2_backward_check(&fp, &fhat, 2.0).unwrap();
    assert_eq!(c.conclusion_sup, 0.0);
    let pw = Family::Power(0.5).fprime::<f64>(64, &t).unwrap();
    let c = lemma2_backward_check(&pw, &expansion_coeffs(&pw, 64).unwrap(), 2.0).unwrap();
    assert!(c.hypothesis_sup.is_finite() && c.conclusion_sup.is_finite());
}

#[test]
fn ingham_ratio_approaches_one() {
    let t = SieveTables::build(1_000_006).unwrap();
    for h in [1, 2, 6] {
        let rows = ingham_check(h, &[1_000, 1_000_000], &t).unwrap();
        assert!(
            rows[1].ratio > 0.5 && rows[1].ratio < 1.5,
            "h={h}: {rows:?}"
        );
        assert!(
            (rows[1].ratio - 1.0).abs() < (rows[0].ratio - 1.0).abs(),
            "h={h}: {rows:?}"
        );
    }
    assert_eq!(ingham_check(2, &[4], &t).unwrap()[0].lhs, 24);
}

#[test]
fn unit_sweep_is_degenerate() {
    let t = SieveTables::build(2_000).unwrap();
    let env = Envelope::new(BoundKind::PowerDelta, 0.5).unwrap();
    let r = error_sweep::<f64>(
        &Family::Unit,
        &Family::Unit,
        env,
        1,
        &[100, 200, 400, 800, 1600],
        &t,
    )
    .unwrap();
    assert!(r.rows.iter().all(|row| row.error.to_f64() == 0.0));
    assert_eq!(r.fitted_slope, None);
    assert!(matches!(r.require_slope(), Err(Error::DegenerateFit(_))));
}

#[test]
fn power_half_regression_baseline() {
    let n = 1024;
    let t = SieveTables::build(n + 1).unwrap();
    let f = Family::Power(0.5);
    let p = ConvolutionProblem::new(
        f.fprime::<f64>(n, &t).unwrap(),
        f.fprime::<f64>(n + 1, &t).unwrap(),
        n,
        1,
    )
    .unwrap();
    let env = Envelope::new(BoundKind::PowerDelta, 0.5).unwrap();
    let r = report(&p, Some(&env), &t).unwrap();
    let err = r.error.to_f64();
    assert!((err - -40.9829889727).abs() < 1e-8, "{err}");
    assert!((r.ratio.unwrap() - 0.0266391487809).abs() < 1e-12, "{r:?}");
}
