//! Residual verification of the smooth ansatz.
//!
//! The ansatz is substituted into
//!
//! ```text
//! u_t + u u_x - σ_x          = 0
//! σ_t + u σ_x - k² u_x       = 0
//! ```
//!
//! and the residuals are paired in `x` with test functions at fixed `t`.
//! A weak asymptotic solution is one whose pairings vanish as `ε → 0`
//! uniformly in `t`. The same residuals, read through the `δ`/`δ'`
//! extraction of [`crate::pairing`], reproduce the coefficient equations
//! that determine the front.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::ansatz::{AnsatzSlice, RiemannJumpData, SmoothAnsatz};
use crate::dynamics::{Front, FrontState};
use crate::error::{Error, Result};
use crate::kernels::MollifierKernel;
use crate::pairing::{
    estimate_order, estimate_order_tail, extract_point_coeffs, pair, serialize_extended, validate_grid, EpsFamily, OrderEstimate,
    Piecewise, TestFunction,
};

/// Number of points in the default time grid.
pub const DEFAULT_TIME_POINTS: usize = 33;

/// Smallest order accepted by [`verify_weak_solution`].
pub const PASS_MIN_ORDER: f64 = 0.25;

/// Residuals of the two equations at one point of a slice.
pub fn residual_at(slice: &AnsatzSlice, k: f64, x: f64) -> (Complex64, Complex64) {
    let (u, _) = slice.fields(x);
    let d = slice.derivatives(x);
    let ru = d.u_t + u * d.u_x - d.sigma_x;
    let rs = d.sigma_t + u * d.sigma_x - k * k * d.u_x;
    (ru, rs)
}

/// Pointwise residual evaluator for an ansatz and system parameter `k`.
pub struct Residuals<'a, F> {
    ansatz: &'a SmoothAnsatz<F>,
    k: f64,
}

/// Builds the residual evaluators.
pub fn residuals<F: Front>(ansatz: &SmoothAnsatz<F>, k: f64) -> Result<Residuals<'_, F>> {
    if !(k.is_finite() && k >= 0.0) {
        return Err(Error::InvalidParameter(format!("k must be nonnegative, got {k}")));
    }
    Ok(Residuals { ansatz, k })
}

impl<F: Front> Residuals<'_, F> {
    pub fn k(&self) -> f64 {
        self.k
    }

    /// `(u-residual, σ-residual)` at `(x, t, ε)`.
    pub fn at(&self, x: f64, t: f64, eps: f64) -> Result<(Complex64, Complex64)> {
        Ok(residual_at(&self.ansatz.slice(t, eps)?, self.k, x))
    }

    /// Pairings of both residuals with `phi` at `(t, ε)`.
    pub fn pairing(&self, t: f64, eps: f64, phi: &TestFunction) -> Result<(Complex64, Complex64)> {
        pair_residuals(&self.ansatz.slice(t, eps)?, self.k, phi)
    }
}

fn pair_residuals(slice: &AnsatzSlice, k: f64, phi: &TestFunction) -> Result<(Complex64, Complex64)> {
    let bps = slice.breakpoints();
    let sup = Some(slice.support());
    let part = |pick: fn((Complex64, Complex64)) -> f64| -> Result<f64> {
        pair(&Piecewise::new(|x| pick(residual_at(slice, k, x)), bps.clone(), sup), phi)
    };
    let u_re = part(|r| r.0.re)?;
    let u_im = part(|r| r.0.im)?;
    let s_re = part(|r| r.1.re)?;
    let s_im = part(|r| r.1.im)?;
    Ok((Complex64::new(u_re, u_im), Complex64::new(s_re, s_im)))
}

/// Which residual.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Equation {
    Velocity,
    Stress,
}

impl Equation {
    pub fn label(&self) -> &'static str {
        match self {
            Equation::Velocity => "u",
            Equation::Stress => "sigma",
        }
    }
}

/// Real or imaginary part.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Part {
    Re,
    Im,
}

/// `max_t |⟨residual(·,t,ε), φ⟩|` over the ε grid for one equation, part and
/// test function.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResidualSeries {
    pub equation: Equation,
    pub part: Part,
    pub test_function: usize,
    pub max_abs: Vec<f64>,
    /// Time attaining the maximum, per ε.
    pub argmax_t: Vec<f64>,
    /// Order fitted on the smallest-ε tail.
    pub order: OrderEstimate,
    /// Least-squares order over the whole grid.
    #[serde(serialize_with = "serialize_extended")]
    pub order_full: f64,
    /// `max_t / min_t` of the pairing magnitudes at the smallest ε.
    #[serde(serialize_with = "serialize_extended")]
    pub t_spread: f64,
    pub pass: bool,
}

impl ResidualSeries {
    fn vanishes(&self) -> bool {
        self.max_abs.iter().all(|v| *v == 0.0)
    }
}

/// Outcome of [`verify_weak_solution`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub k: f64,
    pub data: RiemannJumpData,
    pub epsilon: Vec<f64>,
    pub times: Vec<f64>,
    pub test_functions: Vec<TestFunction>,
    pub series: Vec<ResidualSeries>,
    pub pass: bool,
}

impl VerificationReport {
    /// Smallest tail order among the non-vanishing series of `equation`.
    pub fn order(&self, equation: Equation) -> f64 {
        self.series
            .iter()
            .filter(|s| s.equation == equation && !s.vanishes())
            .map(|s| s.order.order)
            .fold(f64::INFINITY, f64::min)
    }

    /// Smallest whole-grid order among the non-vanishing series of `equation`.
    pub fn order_full(&self, equation: Equation) -> f64 {
        self.series
            .iter()
            .filter(|s| s.equation == equation && !s.vanishes())
            .map(|s| s.order_full)
            .fold(f64::INFINITY, f64::min)
    }

    /// First failing series, if any.
    pub fn first_failure(&self) -> Option<&ResidualSeries> {
        self.series.iter().find(|s| !s.pass)
    }

    /// One-line summary.
    pub fn summary(&self) -> String {
        let head = format!(
            "{} k={} tail order(u)={:.4} order(sigma)={:.4}; full-grid order(u)={:.4} order(sigma)={:.4}",
            if self.pass { "PASS" } else { "FAIL" },
            self.k,
            self.order(Equation::Velocity),
            self.order(Equation::Stress),
            self.order_full(Equation::Velocity),
            self.order_full(Equation::Stress)
        );
        match self.first_failure() {
            None => head,
            Some(s) => {
                let n = s.argmax_t.len();
                format!(
                    "{head} failing: equation={} part={:?} test_function={} t*={}",
                    s.equation.label(),
                    s.part,
                    s.test_function,
                    s.argmax_t[n - 1]
                )
            }
        }
    }
}

/// `n` equispaced times on `[0, t_max]`.
pub fn time_grid(t_max: f64, n: usize) -> Vec<f64> {
    let n = n.max(2);
    (0..n).map(|i| t_max * i as f64 / (n - 1) as f64).collect()
}

/// Plain, linear and off-centre bumps covering the front's path over
/// `[0, t_max]` with a margin of 1 on either side.
pub fn default_test_suite(front: &impl Front, t_max: f64) -> Vec<TestFunction> {
    let a = front.state(0.0).phi;
    let b = front.state(t_max).phi;
    let (lo, hi) = (a.min(b), a.max(b));
    let mid = 0.5 * (lo + hi);
    let hw = 0.5 * (hi - lo) + 1.0;
    vec![TestFunction::plain(mid, hw), TestFunction::linear(mid, hw), TestFunction::plain(mid - 0.3 * hw, hw)]
}

/// Pairs both residuals with every test function at every `(t, ε)` and
/// checks that the worst case over `t` decays in `ε`.
///
/// A series passes when it vanishes identically, or when its tail order
/// exceeds [`PASS_MIN_ORDER`] and the value at the smallest `ε` is below
/// `(ε_min/ε_max)^PASS_MIN_ORDER` times the value at the largest.
pub fn verify_weak_solution<F: Front>(
    ansatz: &SmoothAnsatz<F>,
    k: f64,
    suite: &[TestFunction],
    times: &[f64],
    grid: &[f64],
) -> Result<VerificationReport> {
    validate_grid(grid, crate::pairing::ORDER_TAIL)?;
    if times.is_empty() || suite.is_empty() {
        return Err(Error::InvalidParameter("need at least one time and one test function".into()));
    }
    let res = residuals(ansatz, k)?;
    let jobs: Vec<(usize, usize)> = (0..grid.len()).flat_map(|i| (0..times.len()).map(move |j| (i, j))).collect();
    // pairings[i][j][f] = (u, σ) at ε_i, t_j, φ_f
    let flat: Vec<Vec<(Complex64, Complex64)>> = jobs
        .par_iter()
        .map(|&(i, j)| {
            let slice = ansatz.slice(times[j], grid[i])?;
            suite.iter().map(|phi| pair_residuals(&slice, res.k, phi)).collect()
        })
        .collect::<Result<_>>()?;
    let at = |i: usize, j: usize, f: usize| flat[i * times.len() + j][f];

    let decay = (grid[grid.len() - 1] / grid[0]).powf(PASS_MIN_ORDER);
    let mut series = Vec::new();
    for equation in [Equation::Velocity, Equation::Stress] {
        for part in [Part::Re, Part::Im] {
            for f in 0..suite.len() {
                let pick = |i: usize, j: usize| {
                    let (ru, rs) = at(i, j, f);
                    let z = if equation == Equation::Velocity { ru } else { rs };
                    match part {
                        Part::Re => z.re.abs(),
                        Part::Im => z.im.abs(),
                    }
                };
                let mut max_abs = Vec::with_capacity(grid.len());
                let mut argmax_t = Vec::with_capacity(grid.len());
                for i in 0..grid.len() {
                    let (jm, vm) = (0..times.len())
                        .map(|j| (j, pick(i, j)))
                        .fold((0, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
                    max_abs.push(vm);
                    argmax_t.push(times[jm]);
                }
                let last = grid.len() - 1;
                let (tmin, tmax) = (0..times.len())
                    .map(|j| pick(last, j))
                    .fold((f64::INFINITY, 0.0f64), |(a, b), v| (a.min(v), b.max(v)));
                let t_spread = if tmax == 0.0 { 1.0 } else { tmax / tmin };
                let order = estimate_order(grid, &max_abs, 0.0)?;
                let order_full = estimate_order_tail(grid, &max_abs, 0.0, grid.len())?.order;
                let vanishes = max_abs.iter().all(|v| *v == 0.0);
                let pass = vanishes
                    || (order.order > PASS_MIN_ORDER && max_abs[last] < decay * max_abs[0]);
                series.push(ResidualSeries {
                    equation,
                    part,
                    test_function: f,
                    max_abs,
                    argmax_t,
                    order,
                    order_full,
                    t_spread,
                    pass,
                });
            }
        }
    }
    let pass = series.iter().all(|s| s.pass);
    Ok(VerificationReport {
        k,
        data: *ansatz.data(),
        epsilon: grid.to_vec(),
        times: times.to_vec(),
        test_functions: suite.to_vec(),
        series,
        pass,
    })
}

/// Front quantities supplied by hand instead of by the front equations.
/// `e` and `p` are held fixed in time; `φ = φ̇ t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FreeCoefficients {
    pub phi_dot: f64,
    pub e: f64,
    pub e_dot: f64,
    pub p: Complex64,
    pub p_dot: Complex64,
}

impl FreeCoefficients {
    /// The values the front equations prescribe at time `t`.
    pub fn from_front(front: &impl Front, t: f64) -> Self {
        let s = front.state(t);
        Self { phi_dot: s.phi_dot, e: s.e, e_dot: s.e_dot, p: s.p, p_dot: s.p_dot }
    }
}

impl Front for FreeCoefficients {
    fn state(&self, t: f64) -> FrontState {
        FrontState { t, phi: self.phi_dot * t, phi_dot: self.phi_dot, e: self.e, e_dot: self.e_dot, p: self.p, p_dot: self.p_dot }
    }
}

/// `δ` and `δ'` coefficients of the real parts of both residuals at the
/// front.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ResidualCoefficients {
    pub a_u: f64,
    pub b_u: f64,
    pub a_sigma: f64,
    pub b_sigma: f64,
}

struct ResidualFamily<'a, F> {
    ansatz: &'a SmoothAnsatz<F>,
    k: f64,
    t: f64,
    equation: Equation,
}

impl<F: Front> EpsFamily for ResidualFamily<'_, F> {
    fn eval(&self, x: f64, eps: f64) -> f64 {
        let slice = self.ansatz.slice(self.t, eps).expect("validated time and ε");
        let (ru, rs) = residual_at(&slice, self.k, x);
        match self.equation {
            Equation::Velocity => ru.re,
            Equation::Stress => rs.re,
        }
    }

    fn breakpoints(&self, eps: f64) -> Vec<f64> {
        self.ansatz.slice(self.t, eps).map(|s| s.breakpoints()).unwrap_or_default()
    }

    fn support(&self, eps: f64) -> Option<(f64, f64)> {
        let phi = self.ansatz.front().state(self.t).phi;
        Some((phi - 4.0 * eps, phi + 4.0 * eps))
    }
}

/// Extracts the residual coefficients of `ansatz` at time `t`.
pub fn residual_coefficients<F: Front>(
    ansatz: &SmoothAnsatz<F>,
    k: f64,
    t: f64,
    grid: &[f64],
) -> Result<ResidualCoefficients> {
    ansatz.slice(t, grid.last().copied().unwrap_or(f64::NAN))?;
    let x0 = ansatz.front().state(t).phi;
    let fam = |equation| ResidualFamily { ansatz, k, t, equation };
    let u = extract_point_coeffs("u-residual", &fam(Equation::Velocity), x0, None, grid)?;
    let s = extract_point_coeffs("sigma-residual", &fam(Equation::Stress), x0, None, grid)?;
    Ok(ResidualCoefficients { a_u: u.a, b_u: u.b, a_sigma: s.a, b_sigma: s.b })
}

/// Closed forms of the coefficients in terms of the free quantities.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClosedForms {
    /// `u1φ̇ - u0u1 - ½u1² + σ1`.
    pub a_u: f64,
    /// `½p²ω₀ - e` (real part).
    pub b_u: f64,
    /// `ė + σ1φ̇ - ½u1σ1 - u0σ1 + k²u1`.
    pub a_sigma: f64,
}

impl ClosedForms {
    pub fn evaluate(data: &RiemannJumpData, free: &FreeCoefficients, omega0: f64) -> Self {
        let RiemannJumpData { u0, u1, sigma1, k, .. } = *data;
        Self {
            a_u: u1 * free.phi_dot - u0 * u1 - 0.5 * u1 * u1 + sigma1,
            b_u: (0.5 * free.p * free.p * omega0).re - free.e,
            a_sigma: free.e_dot + sigma1 * free.phi_dot - 0.5 * u1 * sigma1 - u0 * sigma1 + k * k * u1,
        }
    }
}

/// Measured coefficients next to their closed forms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Replay {
    pub t: f64,
    pub free: FreeCoefficients,
    pub measured: ResidualCoefficients,
    pub closed: ClosedForms,
}

impl Replay {
    /// Largest deviation among `(A_u, B_u, A_σ)`.
    pub fn max_deviation(&self) -> f64 {
        (self.measured.a_u - self.closed.a_u)
            .abs()
            .max((self.measured.b_u - self.closed.b_u).abs())
            .max((self.measured.a_sigma - self.closed.a_sigma).abs())
    }

    /// Largest of `|A_u|, |B_u|, |A_σ|` as measured.
    pub fn max_measured(&self) -> f64 {
        self.measured.a_u.abs().max(self.measured.b_u.abs()).max(self.measured.a_sigma.abs())
    }
}

/// Builds the ansatz on `free`, extracts `(A_u, B_u, A_σ)` from its
/// residuals at time `t` and pairs them with the closed forms.
pub fn replay_derivation(
    data: &RiemannJumpData,
    kernel: &MollifierKernel,
    free: FreeCoefficients,
    t: f64,
    grid: &[f64],
) -> Result<Replay> {
    let ansatz = SmoothAnsatz::with_front(*data, free, kernel.clone())?;
    let measured = residual_coefficients(&ansatz, data.k, t, grid)?;
    Ok(Replay { t, free, measured, closed: ClosedForms::evaluate(data, &free, kernel.omega0()) })
}

/// Maps a point of the unit cube to overcompressive jump data.
///
/// `unit = [a, b, c, d, e]` gives `u0 ∈ [-1, 1]`, `u1 ∈ [0.5, 3]`,
/// `σ1/u1` inside 80% of the admissible window, `σ0 ∈ [-1, 1]` and
/// `e0 ∈ [0.05, 0.5]`. `k_fraction ∈ [0, 1)` sets `k = 0.45·k_fraction·u1`.
pub fn sample_admissible(unit: [f64; 5], k_fraction: f64) -> RiemannJumpData {
    let [a, b, c, d, e] = unit.map(|v| v.clamp(0.0, 1.0));
    let u1 = 0.5 + 2.5 * b;
    let k = 0.45 * k_fraction.clamp(0.0, 0.999) * u1;
    let half = 0.5 * u1 - k;
    RiemannJumpData {
        u0: -1.0 + 2.0 * a,
        u1,
        sigma0: -1.0 + 2.0 * d,
        sigma1: u1 * half * (-0.8 + 1.6 * c),
        e0: 0.05 + 0.45 * e,
        k,
    }
}

/// A time in `{0.5, 0.25, 0}` at which `e` stays at least `0.025` away from
/// zero, so that `ṗ` is moderate.
pub fn replay_time(front: &impl Front) -> f64 {
    [0.5, 0.25].into_iter().find(|&t| front.state(t).e.abs() >= 0.025).unwrap_or(0.0)
}
