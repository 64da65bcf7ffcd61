use deltashock::ansatz::{RiemannJumpData, SmoothAnsatz};
use deltashock::dynamics::{overcompressivity, solve_front, Overcompressivity};
use deltashock::kernels::{make_kernel, plateau_for_jumps};
use deltashock::pairing::{fmt_num, verify_lemma31, TestFunction};
use deltashock::riemann::{k_limit_study, regime_sweep, solve_riemann, sweep_csv, Regime, Wave};
use deltashock::verifier::{
    default_test_suite, replay_derivation, replay_time, sample_admissible, time_grid, verify_weak_solution,
    FreeCoefficients, Replay,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::{CliError, Ctx, Format};

type CmdResult = Result<bool, CliError>;

fn lib<T>(r: deltashock::Result<T>) -> Result<T, CliError> {
    r.map_err(CliError::from_lib)
}

fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    let n = n.max(2);
    (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()
}

fn print_margins(oc: &Overcompressivity) {
    for (name, m) in Overcompressivity::MARGIN_NAMES.iter().zip(oc.margins) {
        println!("margin {name}: {m}");
    }
    println!("admissible: {}", oc.admissible);
}

#[derive(Serialize)]
struct LemmaOutput<'a> {
    plateau_consistent: bool,
    data_plateau: Option<f64>,
    report: &'a deltashock::pairing::LemmaReport,
}

pub fn verify_expansions(ctx: &Ctx) -> CmdResult {
    let cfg = &ctx.config;
    let grid = cfg.eps_grid()?;
    let kernel = make_kernel(cfg.kernel.kind);
    let data_plateau = plateau_for_jumps(cfg.data.u1, cfg.data.sigma1).ok();
    let plateau = match (cfg.kernel.plateau, data_plateau) {
        (Some(c), _) | (None, Some(c)) => c,
        (None, None) => return Err(CliError::Math("u1 = 0: no plateau constant and none configured".into())),
    };
    let consistent = data_plateau.is_some_and(|c| (c - plateau).abs() <= 1e-12);
    if !consistent {
        println!(
            "warning: plateau c = {plateau} is inconsistent with the data (1/2 - sigma1/u1^2 = {}); \
             the H*d(delta) coefficient reflects the configured c",
            data_plateau.map_or("undefined".to_string(), |c| c.to_string())
        );
    }
    let report = lib(verify_lemma31(&kernel, plateau, &grid))?;
    println!("kernel {:?}, omega0 = {}, c = {plateau}", report.kernel, report.omega0);
    for r in &report.expansions {
        println!(
            "{:<10} A = {:>+.10e} (expect {:+}) B = {:>+.10e} (expect {:+}) order = {:.4} {}",
            r.id,
            r.measured_a,
            r.expected_a,
            r.measured_b,
            r.expected_b,
            r.order,
            if r.pass { "ok" } else { "FAIL" }
        );
        ctx.write(&format!("lemma31_{}_value.csv", r.id), &r.value_probe.to_csv())?;
        ctx.write(&format!("lemma31_{}_slope.csv", r.id), &r.slope_probe.to_csv())?;
    }
    ctx.write_json("lemma31_report.json", &LemmaOutput { plateau_consistent: consistent, data_plateau, report: &report })?;
    println!("{}", if report.pass { "PASS" } else { "FAIL" });
    Ok(report.pass)
}

#[derive(Serialize)]
struct FrontOutput {
    data: RiemannJumpData,
    phi_dot: f64,
    e_rate: f64,
    omega0: f64,
    overcompressivity: Overcompressivity,
    trajectory: Vec<deltashock::dynamics::TrajectoryRow>,
}

pub fn front(ctx: &Ctx) -> CmdResult {
    let cfg = &ctx.config;
    let data = cfg.data.jump_data()?;
    let kernel = make_kernel(cfg.kernel.kind);
    let traj = lib(solve_front(&data, kernel.omega0()))?;
    let times = linspace(0.0, cfg.front.t_max, cfg.front.points);
    let oc = overcompressivity(&data);
    println!("phi_dot = {}", traj.phi_dot);
    println!("e_rate = {}", traj.e_rate);
    println!("omega0 = {}", traj.omega0);
    print_margins(&oc);
    print!("{}", traj.to_csv(&times));
    match ctx.format {
        Format::Csv => ctx.write("front.csv", &traj.to_csv(&times))?,
        Format::Json => ctx.write_json(
            "front.json",
            &FrontOutput {
                data,
                phi_dot: traj.phi_dot,
                e_rate: traj.e_rate,
                omega0: traj.omega0,
                overcompressivity: oc,
                trajectory: traj.table(&times),
            },
        )?,
    }
    Ok(true)
}

pub fn verify_solution(ctx: &Ctx) -> CmdResult {
    let cfg = &ctx.config;
    let data = cfg.data.jump_data()?;
    if let Some(msg) = overcompressivity(&data).violation() {
        return Err(CliError::Math(format!("inadmissible data: {msg}")));
    }
    let grid = cfg.eps_grid()?;
    let kernel = make_kernel(cfg.kernel.kind);
    let ansatz = lib(SmoothAnsatz::solved(data, kernel))?;
    let times = time_grid(cfg.grid.t_max, cfg.grid.t_points);
    let suite = default_test_suite(ansatz.front(), cfg.grid.t_max);
    let report = lib(verify_weak_solution(&ansatz, data.k, &suite, &times, &grid))?;
    ctx.write_json("residual_report.json", &report)?;
    println!("{}", report.summary());
    Ok(report.pass)
}

fn describe(wave: &Wave, family: u8) -> String {
    match *wave {
        Wave::Shock { speed } => format!("wave{family}: shock s{family} = {speed}"),
        Wave::Rarefaction { head, tail } => format!("wave{family}: rarefaction fan [{head}, {tail}]"),
        Wave::Absent => format!("wave{family}: absent"),
    }
}

#[derive(Serialize)]
struct ProfileRow {
    xi: f64,
    u: f64,
    sigma: f64,
    region: &'static str,
}

pub fn riemann(ctx: &Ctx) -> CmdResult {
    let r = &ctx.config.riemann;
    let left = (r.left[0], r.left[1]);
    let right = (r.right[0], r.right[1]);
    let sol = solve_riemann(left, right, r.k).map_err(|e| CliError::Usage(e.to_string()))?;
    println!("u* = {}", sol.star.0);
    println!("sigma* = {}", sol.star.1);
    println!("{}", describe(&sol.wave1, 1));
    println!("{}", describe(&sol.wave2, 2));
    println!("regime: {}", sol.regime.label());
    let mut ok = true;
    match sol.regime {
        Regime::Classical => {
            let xis = linspace(r.xi_min, r.xi_max, r.xi_points);
            match ctx.format {
                Format::Csv => ctx.write("riemann.csv", &lib(sol.profile_csv(&xis))?)?,
                Format::Json => {
                    let rows = xis
                        .iter()
                        .map(|&xi| {
                            let (u, sigma, region) = lib(sol.eval(xi, 1.0))?;
                            Ok(ProfileRow { xi, u, sigma, region: region.label() })
                        })
                        .collect::<Result<Vec<_>, CliError>>()?;
                    ctx.write_json("riemann.json", &rows)?;
                }
            }
        }
        Regime::DeltaShock => {
            let data = lib(RiemannJumpData::from_states(left, right, 0.0, r.k))?;
            let traj = lib(solve_front(&data, make_kernel(ctx.config.kernel.kind).omega0()))?;
            println!("delta-shock speed = {}", traj.phi_dot);
            println!("delta-shock e_rate = {}", traj.e_rate);
        }
        Regime::NoSolutionConstructed => {
            println!("no solution constructed: waves cross and the data are not overcompressive");
            ok = false;
        }
    }
    if let Some(s) = &ctx.config.sweep {
        let rows = regime_sweep(s.u0, s.sigma0, &s.u1, &s.sigma1, &s.k).map_err(|e| CliError::Usage(e.to_string()))?;
        match ctx.format {
            Format::Csv => ctx.write("riemann_sweep.csv", &sweep_csv(&rows))?,
            Format::Json => ctx.write_json("riemann_sweep.json", &rows)?,
        }
        println!("sweep: {} points", rows.len());
    }
    Ok(ok)
}

pub fn k_limit(ctx: &Ctx) -> CmdResult {
    let cfg = &ctx.config;
    let data = cfg.data.jump_data()?;
    let base = lib(data.with_k(0.0))?;
    let t = cfg.k_limit.t;
    let front = lib(solve_front(&base, 1.0))?;
    let phi = TestFunction::new(front.phi(t), cfg.k_limit.halfwidth, deltashock::pairing::Modulation::PlainBump)
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let study = lib(k_limit_study(&data, &cfg.k_limit.ks, t, &phi))?;
    for g in &study.gaps {
        println!(
            "k = {} sigma_gap = {} exact = {} u_gap = {}",
            fmt_num(g.k),
            fmt_num(g.sigma_gap),
            fmt_num(g.exact),
            fmt_num(g.u_gap)
        );
    }
    println!("fitted order = {:.4}", study.order);
    match ctx.format {
        Format::Csv => ctx.write("klimit.csv", &study.to_csv())?,
        Format::Json => ctx.write_json("klimit.json", &study)?,
    }
    Ok(true)
}

#[derive(Serialize)]
struct ReplayOutput {
    seed: u64,
    tolerance: f64,
    max_deviation: f64,
    max_on_front_equations: f64,
    cases: Vec<ReplayCase>,
}

#[derive(Serialize)]
struct ReplayCase {
    data: RiemannJumpData,
    on_front_equations: Replay,
    perturbed: Replay,
}

pub fn replay(ctx: &Ctx) -> CmdResult {
    let cfg = &ctx.config;
    let grid = cfg.eps_grid()?;
    let kernel = make_kernel(cfg.kernel.kind);
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed);
    let mut cases = Vec::with_capacity(cfg.replay.samples);
    for i in 0..cfg.replay.samples {
        let k_fraction = if i % 2 == 0 { 0.0 } else { rng.gen::<f64>() };
        let data = sample_admissible(rng.gen(), k_fraction);
        let front = lib(solve_front(&data, kernel.omega0()))?;
        let t = replay_time(&front);
        let exact = FreeCoefficients::from_front(&front, t);
        let mut shifted = exact;
        shifted.phi_dot += rng.gen_range(-1.0..1.0);
        shifted.e_dot += rng.gen_range(-1.0..1.0);
        shifted.e += rng.gen_range(-0.2..0.2);
        let on = lib(replay_derivation(&data, &kernel, exact, t, &grid))?;
        let off = lib(replay_derivation(&data, &kernel, shifted, t, &grid))?;
        cases.push(ReplayCase { data, on_front_equations: on, perturbed: off });
    }
    let max_deviation = cases
        .iter()
        .map(|c| c.on_front_equations.max_deviation().max(c.perturbed.max_deviation()))
        .fold(0.0, f64::max);
    let max_on = cases.iter().map(|c| c.on_front_equations.max_measured()).fold(0.0, f64::max);
    let tol = cfg.replay.tolerance;
    let pass = max_deviation <= tol && max_on <= tol;
    println!("samples = {}", cases.len());
    println!("max |measured - closed form| = {max_deviation:e}");
    println!("max |coefficient| on front equations = {max_on:e}");
    println!("{}", if pass { "PASS" } else { "FAIL" });
    ctx.write_json(
        "replay.json",
        &ReplayOutput { seed: ctx.seed, tolerance: tol, max_deviation, max_on_front_equations: max_on, cases },
    )?;
    Ok(pass)
}
