use deltashock::ansatz::{RiemannJumpData, SmoothAnsatz};
use deltashock::dynamics::{solve_front, FrontTrajectory};
use deltashock::kernels::MollifierKernel;
use deltashock::pairing::dyadic_grid;
use deltashock::verifier::{
    default_test_suite, replay_derivation, replay_time, residual_coefficients, residuals, sample_admissible, time_grid,
    verify_weak_solution, Equation, FreeCoefficients,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn worked(k: f64) -> RiemannJumpData {
    RiemannJumpData::new(0.0, 2.0, 0.0, 0.5, 0.1, k).unwrap()
}

#[test]
fn worked_data_pass_on_a_short_grid() {
    let grid = dyadic_grid(3, 10);
    let times = time_grid(1.0, 9);
    for k in [0.1, 0.0] {
        let a = SmoothAnsatz::solved(worked(k), MollifierKernel::quartic()).unwrap();
        let suite = default_test_suite(a.front(), 1.0);
        let report = verify_weak_solution(&a, k, &suite, &times, &grid).unwrap();
        assert!(report.pass, "{}", report.summary());
        assert!(report.order_full(Equation::Stress) > 0.85, "{}", report.summary());
        assert!(report.order(Equation::Velocity) > 0.4, "{}", report.summary());
        assert_eq!(report.series.len(), 2 * 2 * suite.len());
    }
}

#[test]
fn wrong_speed_fails_verification() {
    let data = worked(0.1);
    let kernel = MollifierKernel::quartic();
    let mut front = solve_front(&data, kernel.omega0()).unwrap();
    front.phi_dot += 0.1;
    let a = SmoothAnsatz::new(data, front, kernel).unwrap();
    let suite = default_test_suite(a.front(), 1.0);
    let report = verify_weak_solution(&a, 0.1, &suite, &time_grid(1.0, 9), &dyadic_grid(3, 10)).unwrap();
    assert!(!report.pass);
    let bad = report.first_failure().unwrap();
    assert!(report.summary().contains("failing"));
    assert!(bad.order.order < 0.25);
}

#[test]
fn wrong_rate_fails_verification() {
    let data = worked(0.0);
    let kernel = MollifierKernel::quartic();
    let base = solve_front(&data, kernel.omega0()).unwrap();
    let front = FrontTrajectory { e_rate: base.e_rate + 0.2, ..base };
    let a = SmoothAnsatz::new(data, front, kernel).unwrap();
    let suite = default_test_suite(a.front(), 1.0);
    let report = verify_weak_solution(&a, 0.0, &suite, &time_grid(1.0, 9), &dyadic_grid(3, 10)).unwrap();
    assert!(!report.pass);
}

#[test]
fn residuals_pair_to_zero_away_from_front() {
    let a = SmoothAnsatz::solved(worked(0.1), MollifierKernel::quartic()).unwrap();
    let r = residuals(&a, 0.1).unwrap();
    let phi = deltashock::pairing::TestFunction::plain(5.0, 1.0);
    let (ru, rs) = r.pairing(1.0, 0.01, &phi).unwrap();
    assert_eq!(ru.norm(), 0.0);
    assert_eq!(rs.norm(), 0.0);
}

#[test]
fn plateau_offset_shows_up_in_delta_prime_coefficient() {
    let data = worked(0.1);
    let kernel = MollifierKernel::quartic();
    let grid = dyadic_grid(3, 12);
    let a = SmoothAnsatz::solved(data, kernel.clone()).unwrap();
    let c = a.plateau();
    let t = 1.0;
    let exact = residual_coefficients(&a, 0.1, t, &grid).unwrap();
    assert!(exact.b_sigma.abs() < 1e-4, "{exact:?}");
    let shifted = SmoothAnsatz::solved(data, kernel).unwrap().with_plateau(c + 0.1);
    let off = residual_coefficients(&shifted, 0.1, t, &grid).unwrap();
    let e = a.front().e(t);
    assert!((off.b_sigma - 0.1 * data.u1 * e).abs() < 1e-4, "{} vs {}", off.b_sigma, 0.1 * data.u1 * e);
}

#[test]
fn replay_matches_closed_forms_on_random_data() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let kernel = MollifierKernel::exponential();
    let grid = dyadic_grid(3, 12);
    for i in 0..4 {
        let k_fraction = if i % 2 == 0 { 0.0 } else { rng.gen::<f64>() };
        let data = sample_admissible(rng.gen(), k_fraction);
        let front = solve_front(&data, kernel.omega0()).unwrap();
        let t = replay_time(&front);
        let exact = FreeCoefficients::from_front(&front, t);
        let on = replay_derivation(&data, &kernel, exact, t, &grid).unwrap();
        assert!(on.max_measured() < 1e-3, "{on:?}");
        assert!(on.max_deviation() < 1e-3);
        let mut free = exact;
        free.phi_dot += rng.gen_range(-1.0..1.0);
        free.e_dot += rng.gen_range(-1.0..1.0);
        let off = replay_derivation(&data, &kernel, free, t, &grid).unwrap();
        assert!(off.max_deviation() < 1e-3, "{off:?}");
        assert!(off.max_measured() > 1e-2);
    }
}

#[test]
fn sampled_data_are_admissible() {
    let mut rng = ChaCha8Rng::seed_from_u64(32);
    for _ in 0..1000 {
        let d = sample_admissible(rng.gen(), rng.gen());
        assert!(deltashock::dynamics::overcompressivity(&d).admissible, "{d:?}");
    }
}
