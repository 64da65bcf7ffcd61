use deltashock::kernels::{KernelKind, MollifierKernel, StepProfile};
use deltashock::pairing::{
    dyadic_grid, estimate_order, extrapolate, pair, richardson_limit, verify_lemma31, Expansion, Heaviside, Piecewise,
    TestFunction, RICHARDSON_TERMS,
};
use proptest::prelude::*;

fn gauss(a: f64, x0: f64) -> impl Fn(f64) -> f64 + Sync {
    move |x: f64| (-(x - x0) * (x - x0) * a).exp()
}

#[test]
fn lemma_table_for_both_kernels() {
    let grid = dyadic_grid(3, 12);
    for (kernel, c) in [(MollifierKernel::quartic(), 0.375), (MollifierKernel::exponential(), 0.2)] {
        let report = verify_lemma31(&kernel, c, &grid).unwrap();
        assert_eq!(report.expansions.len(), 14);
        assert!(report.pass, "{:?}", report.kernel);
        let w = kernel.omega0();
        let rr = report.get(Expansion::RSquared).unwrap();
        assert!((rr.measured_a - w).abs() < 1e-6);
        let hd = report.get(Expansion::HDeltaDx).unwrap();
        assert!((hd.measured_b - c).abs() < 1e-6);
        for e in [Expansion::RDelta, Expansion::RDeltaDx] {
            assert_eq!(report.get(e).unwrap().identically_zero, Some(true));
        }
    }
}

#[test]
fn quartic_normalization_oracle() {
    let k = MollifierKernel::quartic();
    assert!((k.omega0() - 5.0 / 7.0).abs() < 1e-12);
    assert_eq!(k.kind(), KernelKind::QuarticPolynomialBump);
}

#[test]
fn correction_and_delta_never_overlap() {
    let kernel = MollifierKernel::exponential();
    for eps in dyadic_grid(3, 12) {
        for i in 0..=10_000 {
            let x = -5.0 * eps + 10.0 * eps * i as f64 / 10_000.0;
            assert_eq!(kernel.correction(x, eps) * kernel.delta(x, eps), 0.0);
        }
    }
}

#[test]
fn heaviside_pairing_matches_partial_integral() {
    let phi = TestFunction::plain(0.2, 0.7);
    let h = Heaviside { x0: 0.1, jump: 1.0, left: true };
    let got = pair(&h, &phi).unwrap();
    assert!((got - phi.integral_below(0.1).unwrap()).abs() < 1e-14);
    let total = phi.integral().unwrap();
    let right = pair(&Heaviside { x0: 0.1, jump: 1.0, left: false }, &phi).unwrap();
    assert!((got + right - total).abs() < 1e-13);
}

#[test]
fn step_pairing_converges_at_first_order() {
    let kernel = MollifierKernel::quartic();
    let phi = TestFunction::plain(0.1, 1.0);
    let grid = dyadic_grid(3, 12);
    let exact = pair(&Heaviside { x0: 0.0, jump: 1.0, left: false }, &phi).unwrap();
    let diffs: Vec<f64> = grid
        .iter()
        .map(|&eps| {
            let h = StepProfile::new(0.3, eps, kernel.clone()).unwrap();
            let f = Piecewise::new(|x| h.value(x), h.breakpoints(), None);
            pair(&f, &phi).unwrap() - exact
        })
        .collect();
    let o = estimate_order(&grid, &diffs, 0.0).unwrap();
    assert!(o.order >= 0.99, "{}", o.order);
}

#[test]
fn extrapolation_recovers_half_power_ladder() {
    let grid = dyadic_grid(3, 12);
    let values: Vec<f64> = grid.iter().map(|&e| 1.5 - 0.7 * e.sqrt() + 2.0 * e - 3.0 * e * e.sqrt()).collect();
    let fit = richardson_limit(&grid, &values, RICHARDSON_TERMS).unwrap();
    assert!((fit.limit - 1.5).abs() < 1e-10, "{}", fit.limit);
    let ex = extrapolate(&grid, &values).unwrap();
    assert!((ex.limit - 1.5).abs() < 1e-4, "{}", ex.limit);
}

#[test]
fn order_estimator_reads_exact_powers() {
    let grid = dyadic_grid(3, 12);
    for p in [0.5, 1.0, 2.0] {
        let v: Vec<f64> = grid.iter().map(|e| 3.0 * e.powf(p)).collect();
        let o = estimate_order(&grid, &v, 0.0).unwrap();
        assert!((o.order - p).abs() < 1e-10);
    }
}

proptest! {
    #[test]
    fn pairing_is_bilinear(
        a in -3.0..3.0f64,
        b in -3.0..3.0f64,
        x0 in -0.5..0.5f64,
        w in 1.0..20.0f64,
        center in -0.5..0.5f64,
        hw in 0.2..1.5f64,
    ) {
        let phi = TestFunction::plain(center, hw);
        let f = gauss(w, x0);
        let g = |x: f64| x.sin();
        let pf = pair(&Piecewise::new(&f, vec![], None), &phi).unwrap();
        let pg = pair(&Piecewise::new(g, vec![], None), &phi).unwrap();
        let combo = pair(&Piecewise::new(|x| a * f(x) + b * g(x), vec![], None), &phi).unwrap();
        prop_assert!((combo - a * pf - b * pg).abs() < 1e-12 * (1.0 + pf.abs() + pg.abs()) * (1.0 + a.abs() + b.abs()));

        // The modulated bump is x - centre times the plain one.
        let lin = TestFunction::linear(center, hw);
        let fi = Piecewise::new(&f, vec![], None);
        let pl = pair(&fi, &lin).unwrap();
        let direct = pair(&Piecewise::new(|x| f(x) * (x - center), vec![], None), &phi).unwrap();
        prop_assert!((pl - direct).abs() < 1e-12 * (1.0 + pl.abs()));
    }

    #[test]
    fn pairing_is_translation_covariant(
        s in -2.0..2.0f64,
        x0 in -0.5..0.5f64,
        eps in 0.001..0.1f64,
        center in -0.3..0.3f64,
    ) {
        let kernel = MollifierKernel::quartic();
        let phi = TestFunction::plain(center, 1.0);
        let base = Piecewise::new(
            |x| kernel.delta(x - x0, eps),
            kernel.delta_breakpoints(eps).iter().map(|b| b + x0).collect(),
            None,
        );
        let moved = Piecewise::new(
            |x| kernel.delta(x - x0 - s, eps),
            kernel.delta_breakpoints(eps).iter().map(|b| b + x0 + s).collect(),
            None,
        );
        let p0 = pair(&base, &phi).unwrap();
        let p1 = pair(&moved, &phi.shifted(s)).unwrap();
        prop_assert!((p0 - p1).abs() < 1e-11 * (1.0 + p0.abs()), "{} vs {}", p0, p1);
    }
}
