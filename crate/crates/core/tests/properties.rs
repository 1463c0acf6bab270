mod common;

use common::*;
use num::Signed;
use proptest::prelude::*;
use ramexp::sieve::dirichlet_convolve;
use ramexp::*;

fn entries(max_len: usize) -> impl Strategy<Value = Vec<(i64, i64)>> {
    prop::collection::vec((-9i64..=9, 1i64..=6), 1..=max_len)
}

fn nonneg_entries(max_len: usize) -> impl Strategy<Value = Vec<(i64, i64)>> {
    prop::collection::vec((0i64..=9, 1i64..=6), 1..=max_len)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn reconstruction_is_exact(vals in entries(80)) {
        let fp = table_from(&vals);
        let n = fp.n_max();
        let t = SieveTables::build(n).unwrap();
        let exp = expansion_coeffs(&fp, n).unwrap();
        for m in 1..=n {
            prop_assert_eq!(evaluate(&exp, m, &t).unwrap(), divisor_sum(&fp, m, n));
        }
    }

    #[test]
    fn dual_inversion_round_trips(vals in entries(80)) {
        let fp = table_from(&vals);
        let n = fp.n_max();
        let t = SieveTables::build(n).unwrap();
        let exp = expansion_coeffs(&fp, n).unwrap();
        let back = dual_invert(&exp, &t).unwrap();
        prop_assert_eq!(back.as_slice(), fp.as_slice());
        let again = expansion_coeffs(&back, n).unwrap();
        prop_assert_eq!(again.as_slice(), exp.as_slice());
    }

    #[test]
    fn dirichlet_convolution_laws(a in entries(40), b in entries(40), c in entries(40)) {
        let n = a.len().min(b.len()).min(c.len());
        let (a, b, c) = (table_from(&a[..n]), table_from(&b[..n]), table_from(&c[..n]));
        let ab = dirichlet_convolve(&a, &b).unwrap();
        let ba = dirichlet_convolve(&b, &a).unwrap();
        prop_assert_eq!(ab.as_slice(), ba.as_slice());
        let left = dirichlet_convolve(&ab, &c).unwrap();
        let right = dirichlet_convolve(&a, &dirichlet_convolve(&b, &c).unwrap()).unwrap();
        prop_assert_eq!(left.as_slice(), right.as_slice());
    }

    #[test]
    fn float_tracks_exact(vals in entries(80)) {
        let fp = table_from(&vals);
        let n = fp.n_max();
        let t = SieveTables::build(n).unwrap();
        let exact = expansion_coeffs(&fp, n).unwrap();
        let float = expansion_coeffs(&to_float(&fp), n).unwrap();
        for m in 1..=n {
            let e = evaluate(&exact, m, &t).unwrap().to_f64();
            let f = evaluate(&float, m, &t).unwrap();
            prop_assert!((e - f).abs() <= 1e-9 * e.abs().max(1.0), "n={} exact={} float={}", m, e, f);
        }
    }

    #[test]
    fn double_expansion_matches_brute_force(f in entries(30), g in entries(40), h in 0usize..=8) {
        let n = f.len().min(g.len().saturating_sub(h)).max(1);
        let gv: Vec<(i64, i64)> = g.iter().cycle().take(n + h).copied().collect();
        let p = ConvolutionProblem::new(table_from(&f[..n.min(f.len())]), table_from(&gv), n, h);
        prop_assume!(p.is_ok());
        let p = p.unwrap();
        let t = SieveTables::build(n + h).unwrap();
        prop_assert_eq!(brute_force(&p, &t).unwrap(), double_expansion(&p, &t).unwrap());
    }

    #[test]
    fn singular_series_rearrangement(f in entries(60), g in entries(72), h in 0usize..=12) {
        let n = f.len();
        let gv: Vec<(i64, i64)> = g.iter().cycle().take(n + h).copied().collect();
        let p = ConvolutionProblem::new(table_from(&f), table_from(&gv), n, h).unwrap();
        let t = SieveTables::build(n + h).unwrap();
        let nn = Exact::from_i64(n as i64);
        prop_assert_eq!(nn * singular_series(&p, &t).unwrap(), main_term(&p, &t).unwrap());
    }

    #[test]
    fn truncation_is_neutral(f in entries(60), g in entries(80), n in 1usize..=40, h in 0usize..=10) {
        let fv: Vec<(i64, i64)> = f.iter().cycle().take(n + 20).copied().collect();
        let gv: Vec<(i64, i64)> = g.iter().cycle().take(n + h + 20).copied().collect();
        let (fp, gp) = (table_from(&fv), table_from(&gv));
        let t = SieveTables::build(n + h + 20).unwrap();
        let full = ConvolutionProblem::new(fp.clone(), gp.clone(), n, h).unwrap();
        let cut = ConvolutionProblem::new(
            truncate_support(&fp, n).unwrap(),
            truncate_support(&gp, n + h).unwrap(),
            n,
            h,
        )
        .unwrap();
        prop_assert_eq!(brute_force(&full, &t).unwrap(), brute_force(&cut, &t).unwrap());
    }

    #[test]
    fn zero_shift_autocorrelation_is_nonnegative(f in nonneg_entries(60)) {
        let n = f.len();
        let fp = table_from(&f);
        let p = ConvolutionProblem::new(fp.clone(), fp, n, 0).unwrap();
        let t = SieveTables::build(n).unwrap();
        let c = brute_force(&p, &t).unwrap();
        prop_assert!(!c.is_negative());
    }

    #[test]
    fn convolution_float_tracks_exact(f in entries(200), g in entries(200), h in 1usize..=20) {
        let n = f.len();
        let gv: Vec<(i64, i64)> = g.iter().cycle().take(n + h).copied().collect();
        let (fp, gp) = (table_from(&f), table_from(&gv));
        let t = SieveTables::build(n + h).unwrap();
        let pe = ConvolutionProblem::new(fp.clone(), gp.clone(), n, h).unwrap();
        let pf = ConvolutionProblem::new(to_float(&fp), to_float(&gp), n, h).unwrap();
        for (e, f) in [
            (brute_force(&pe, &t).unwrap(), brute_force(&pf, &t).unwrap()),
            (main_term(&pe, &t).unwrap(), main_term(&pf, &t).unwrap()),
        ] {
            let e = e.to_f64();
            prop_assert!((e - f).abs() <= 1e-8 * e.abs().max(1.0), "exact={} float={}", e, f);
        }
    }

    #[test]
    fn ramanujan_sum_is_periodic(r in 1usize..=500, n in 0usize..=2000) {
        let t = SieveTables::build(500).unwrap();
        prop_assert_eq!(ramanujan_sum(r, n, &t).unwrap(), ramanujan_sum(r, n % r, &t).unwrap());
    }
}

#[test]
fn float_reconstruction_at_scale() {
    let n = 10_000;
    let t = SieveTables::build(n).unwrap();
    let mut r = rng(7);
    let fp = random_exact_table(&mut r, n);
    let float = expansion_coeffs(&to_float(&fp), n).unwrap();
    for m in [1, 2, 720, 5040, 9240, 9973, 10_000] {
        let e = divisor_sum(&fp, m, n).to_f64();
        let f = evaluate(&float, m, &t).unwrap();
        assert!(
            (e - f).abs() <= 1e-9 * e.abs().max(1.0),
            "n={m}: {e} vs {f}"
        );
    }
}
