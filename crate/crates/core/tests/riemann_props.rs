use deltashock::ansatz::RiemannJumpData;
use deltashock::dynamics::volpert_relations;
use deltashock::pairing::TestFunction;
use deltashock::riemann::{
    eval_riemann, intermediate_state, k_limit_gap, k_limit_study, regime_sweep, solve_riemann, Regime, Region, Wave,
};
use deltashock::Error;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn worked_example() {
    let sol = solve_riemann((2.0, 1.0), (0.0, 0.0), 1.0).unwrap();
    assert!((sol.star.0 - 0.5).abs() < 1e-15);
    assert!((sol.star.1 + 0.5).abs() < 1e-15);
    assert_eq!(sol.wave1, Wave::Shock { speed: 0.25 });
    assert_eq!(sol.wave2, Wave::Shock { speed: 1.25 });
    assert_eq!(sol.regime, Regime::Classical);
    assert_eq!(sol.eval(0.0, 1.0).unwrap().2, Region::Left);
    assert_eq!(sol.eval(1.0, 1.0).unwrap(), (0.5, -0.5, Region::Star));
    assert_eq!(sol.eval(2.0, 1.0).unwrap(), (0.0, 0.0, Region::Right));
}

#[test]
fn classical_solver_needs_positive_k() {
    assert!(matches!(intermediate_state((1.0, 0.0), (0.0, 0.0), 0.0), Err(Error::InvalidParameter(_))));
}

#[test]
fn equal_velocities_leave_first_wave_absent() {
    // σ_R - σ_L = k(u_L - u_R) puts the intermediate state at u_L.
    let sol = solve_riemann((1.0, 0.0), (0.0, 0.5), 0.5).unwrap();
    assert!(matches!(sol.wave1, Wave::Absent));
}

#[test]
fn strong_compression_gives_delta_regime() {
    let sol = solve_riemann((3.0, 0.0), (0.0, 0.0), 0.2).unwrap();
    assert_eq!(sol.regime, Regime::DeltaShock);
    assert!(matches!(eval_riemann(&sol, 0.0, 1.0), Err(Error::NotApplicable(_))));
}

#[test]
fn crossing_without_overcompression_has_no_solution() {
    // u1 < 2k rules out the δ-shock, σ1 large makes the waves cross.
    let sol = solve_riemann((1.0, 3.0), (0.0, 0.0), 0.6).unwrap();
    assert!(sol.wave1.span().unwrap().1 > sol.wave2.span().unwrap().0);
    assert_eq!(sol.regime, Regime::NoSolutionConstructed);
}

#[test]
fn classification_survives_tiny_perturbations() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let cases = [((2.0, 1.0), (0.0, 0.0), 1.0), ((1.0, 0.0), (0.0, 0.5), 0.5), ((3.0, 0.0), (0.0, 0.0), 0.2)];
    for (l, r, k) in cases {
        let base = solve_riemann(l, r, k).unwrap();
        for _ in 0..100 {
            let mut d = || rng.gen_range(-1e-12..1e-12);
            let p = solve_riemann((l.0 + d(), l.1 + d()), (r.0 + d(), r.1 + d()), k).unwrap();
            assert_eq!(p.regime, base.regime);
            assert_eq!(std::mem::discriminant(&p.wave1), std::mem::discriminant(&base.wave1));
            assert_eq!(std::mem::discriminant(&p.wave2), std::mem::discriminant(&base.wave2));
        }
    }
}

#[test]
fn sweep_covers_grid() {
    let rows = regime_sweep(0.0, 0.0, &[0.5, 2.0, 4.0], &[-1.0, 0.0, 1.0], &[0.2, 1.0]).unwrap();
    assert_eq!(rows.len(), 18);
    assert!(rows.iter().any(|r| r.regime == Regime::DeltaShock));
    assert!(rows.iter().any(|r| r.regime == Regime::Classical));
}

#[test]
fn k_limit_gaps_are_quadratic() {
    let d = RiemannJumpData::new(0.0, 2.0, 0.0, 0.5, 0.1, 0.1).unwrap();
    let phi = TestFunction::plain(0.75, 1.0);
    let study = k_limit_study(&d, &[0.1, 0.05, 0.025], 1.0, &phi).unwrap();
    for g in &study.gaps {
        assert!((g.sigma_gap - g.exact).abs() < 1e-10);
        assert_eq!(g.u_gap, 0.0);
    }
    assert!((study.order - 2.0).abs() < 0.01);
}

#[test]
fn k_limit_rejects_inadmissible_k() {
    let d = RiemannJumpData::new(0.0, 2.0, 0.0, 0.5, 0.1, 0.0).unwrap();
    let phi = TestFunction::plain(0.0, 1.0);
    assert!(matches!(k_limit_gap(&d, 1.5, 1.0, &phi), Err(Error::Inadmissible(_))));
}

fn state() -> impl Strategy<Value = (f64, f64)> {
    (-3.0..3.0f64, -3.0..3.0f64)
}

proptest! {
    #[test]
    fn intermediate_state_lies_on_both_curves(l in state(), r in state(), k in 0.05..3.0f64) {
        let (u, s) = intermediate_state(l, r, k).unwrap();
        let scale = 1.0 + u.abs() + s.abs() + l.0.abs() + l.1.abs() + r.0.abs() + r.1.abs();
        prop_assert!(((s - k * u) - (l.1 - k * l.0)).abs() < 1e-12 * scale * (1.0 + k));
        prop_assert!(((s + k * u) - (r.1 + k * r.0)).abs() < 1e-12 * scale * (1.0 + k));
    }

    #[test]
    fn shocks_satisfy_jump_relation_and_lax(l in state(), r in state(), k in 0.05..3.0f64) {
        let sol = solve_riemann(l, r, k).unwrap();
        let star = sol.star;
        if let Wave::Shock { speed } = sol.wave1 {
            let (r1, _) = volpert_relations(l.0, star.0, l.1, star.1, speed);
            prop_assert!(r1.abs() < 1e-11 * (1.0 + l.0.abs() + star.0.abs()).powi(2));
            prop_assert!(star.0 - k < speed && speed < l.0 - k);
        }
        if let Wave::Shock { speed } = sol.wave2 {
            let (r1, _) = volpert_relations(star.0, r.0, star.1, r.1, speed);
            prop_assert!(r1.abs() < 1e-11 * (1.0 + r.0.abs() + star.0.abs()).powi(2));
            prop_assert!(r.0 + k < speed && speed < star.0 + k);
        }
    }

    #[test]
    fn classical_profiles_are_continuous_across_fans(l in state(), r in state(), k in 0.05..3.0f64) {
        let sol = solve_riemann(l, r, k).unwrap();
        prop_assume!(sol.regime == Regime::Classical);
        for wave in [sol.wave1, sol.wave2] {
            if let Wave::Rarefaction { head, tail } = wave {
                let h = 1e-9 * (1.0 + head.abs() + tail.abs());
                let a = sol.eval(head - h, 1.0).unwrap();
                let b = sol.eval(head + h, 1.0).unwrap();
                let c = sol.eval(tail - h, 1.0).unwrap();
                let d = sol.eval(tail + h, 1.0).unwrap();
                let tol = 4.0 * h * (1.0 + k);
                prop_assert!((a.0 - b.0).abs() < tol && (a.1 - b.1).abs() < tol);
                prop_assert!((c.0 - d.0).abs() < tol && (c.1 - d.1).abs() < tol);
                let mid = sol.eval(0.5 * (head + tail), 1.0).unwrap();
                prop_assert!(b.0 <= mid.0 && mid.0 <= c.0);
            }
        }
    }

    #[test]
    fn self_similarity(l in state(), r in state(), k in 0.05..3.0f64, xi in -6.0..6.0f64, t in 0.1..10.0f64) {
        let sol = solve_riemann(l, r, k).unwrap();
        prop_assume!(sol.regime == Regime::Classical);
        let a = sol.eval(xi, 1.0).unwrap();
        let b = sol.eval(xi * t, t).unwrap();
        prop_assert!((a.0 - b.0).abs() < 1e-9 && (a.1 - b.1).abs() < 1e-9 * (1.0 + k));
    }
}
