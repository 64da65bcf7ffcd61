//! Distributional pairing engine.
//!
//! `⟨f, φ⟩` is computed by composite Gauss–Legendre quadrature on the
//! intersection of supports, split at every breakpoint of either factor.
//! On top of that sit the tools used to read off weak limits: convergence
//! order fits in `ε`, three-point extrapolation, and extraction of the
//! `δ`/`δ'` coefficients at a point with a pair of dual test functions.

mod lemma;

pub use lemma::{verify_lemma31, Expansion, ExpansionReport, FamilyClass, LemmaReport};

use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::quadrature::{integrate_composite, normalize_breakpoints};

/// A real function of `x` with known smoothness breakpoints.
pub trait Integrand: Sync {
    fn eval(&self, x: f64) -> f64;

    /// Points where the function (or a low derivative) may be non-smooth,
    /// including the ends of its support. Order does not matter.
    fn breakpoints(&self) -> Vec<f64>;

    /// Closed interval outside which the function vanishes. `None` means
    /// the support is unbounded.
    fn support(&self) -> Option<(f64, f64)> {
        None
    }
}

/// An `ε`-indexed family of integrands.
pub trait EpsFamily: Sync {
    fn eval(&self, x: f64, eps: f64) -> f64;

    fn breakpoints(&self, eps: f64) -> Vec<f64>;

    fn support(&self, _eps: f64) -> Option<(f64, f64)> {
        None
    }

    /// Freezes `ε`.
    fn at(&self, eps: f64) -> AtEps<'_, Self>
    where
        Self: Sized,
    {
        AtEps { family: self, eps }
    }
}

/// One member of an [`EpsFamily`].
pub struct AtEps<'a, F: ?Sized> {
    family: &'a F,
    eps: f64,
}

impl<F: EpsFamily + ?Sized> Integrand for AtEps<'_, F> {
    fn eval(&self, x: f64) -> f64 {
        self.family.eval(x, self.eps)
    }

    fn breakpoints(&self) -> Vec<f64> {
        self.family.breakpoints(self.eps)
    }

    fn support(&self) -> Option<(f64, f64)> {
        self.family.support(self.eps)
    }
}

/// Closure-backed [`Integrand`].
pub struct Piecewise<F> {
    f: F,
    breakpoints: Vec<f64>,
    support: Option<(f64, f64)>,
}

impl<F: Fn(f64) -> f64 + Sync> Piecewise<F> {
    pub fn new(f: F, breakpoints: Vec<f64>, support: Option<(f64, f64)>) -> Self {
        Self { f, breakpoints, support }
    }
}

impl<F: Fn(f64) -> f64 + Sync> Integrand for Piecewise<F> {
    fn eval(&self, x: f64) -> f64 {
        (self.f)(x)
    }

    fn breakpoints(&self) -> Vec<f64> {
        self.breakpoints.clone()
    }

    fn support(&self) -> Option<(f64, f64)> {
        self.support
    }
}

/// Closure-backed [`EpsFamily`].
pub struct FnFamily<E, B> {
    eval: E,
    breakpoints: B,
    support_in_eps: Option<(f64, f64)>,
}

impl<E, B> FnFamily<E, B>
where
    E: Fn(f64, f64) -> f64 + Sync,
    B: Fn(f64) -> Vec<f64> + Sync,
{
    /// `support_in_eps`, when given, is `(lo, hi)` such that the member at
    /// `ε` vanishes outside `[lo·ε, hi·ε]`.
    pub fn new(eval: E, breakpoints: B, support_in_eps: Option<(f64, f64)>) -> Self {
        Self { eval, breakpoints, support_in_eps }
    }
}

impl<E, B> EpsFamily for FnFamily<E, B>
where
    E: Fn(f64, f64) -> f64 + Sync,
    B: Fn(f64) -> Vec<f64> + Sync,
{
    fn eval(&self, x: f64, eps: f64) -> f64 {
        (self.eval)(x, eps)
    }

    fn breakpoints(&self, eps: f64) -> Vec<f64> {
        (self.breakpoints)(eps)
    }

    fn support(&self, eps: f64) -> Option<(f64, f64)> {
        self.support_in_eps.map(|(lo, hi)| (lo * eps, hi * eps))
    }
}

/// The zero function.
pub struct Zero;

impl Integrand for Zero {
    fn eval(&self, _x: f64) -> f64 {
        0.0
    }

    fn breakpoints(&self) -> Vec<f64> {
        Vec::new()
    }

    fn support(&self) -> Option<(f64, f64)> {
        Some((0.0, 0.0))
    }
}

/// Jump of height `jump` at `x0`: `jump` to the left of `x0` when
/// `left = true`, to the right otherwise.
#[derive(Debug, Clone, Copy)]
pub struct Heaviside {
    pub x0: f64,
    pub jump: f64,
    pub left: bool,
}

impl Integrand for Heaviside {
    fn eval(&self, x: f64) -> f64 {
        let on = if self.left { x < self.x0 } else { x > self.x0 };
        if on {
            self.jump
        } else {
            0.0
        }
    }

    fn breakpoints(&self) -> Vec<f64> {
        vec![self.x0]
    }
}

/// Shape of a [`TestFunction`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Modulation {
    /// `exp(1 - 1/(1-s²))`, so the value at the centre is 1 and the slope 0.
    PlainBump,
    /// `(x - a)·bump`, so the value at the centre is 0 and the slope 1.
    LinearTimesBump,
}

/// Panel edges (in units of the half-width) for test-function integrals.
/// Graded towards the flat ends of the bump.
const TEST_PANELS: [f64; 23] = [
    -1.0, -0.99, -0.96, -0.92, -0.86, -0.78, -0.68, -0.56, -0.42, -0.28, -0.14, 0.0, 0.14, 0.28, 0.42,
    0.56, 0.68, 0.78, 0.86, 0.92, 0.96, 0.99, 1.0,
];

/// A compactly supported smooth test function on `(a - b, a + b)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, serde::Deserialize)]
pub struct TestFunction {
    pub center: f64,
    pub halfwidth: f64,
    pub modulation: Modulation,
}

impl TestFunction {
    pub fn new(center: f64, halfwidth: f64, modulation: Modulation) -> Result<Self> {
        if !(halfwidth.is_finite() && halfwidth > 0.0) || !center.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "test function needs finite centre and positive half-width, got ({center}, {halfwidth})"
            )));
        }
        Ok(Self { center, halfwidth, modulation })
    }

    pub fn plain(center: f64, halfwidth: f64) -> Self {
        Self::new(center, halfwidth, Modulation::PlainBump).expect("valid test function")
    }

    pub fn linear(center: f64, halfwidth: f64) -> Self {
        Self::new(center, halfwidth, Modulation::LinearTimesBump).expect("valid test function")
    }

    fn bump(&self, x: f64) -> (f64, f64) {
        let s = (x - self.center) / self.halfwidth;
        if s.abs() >= 1.0 {
            return (0.0, 0.0);
        }
        let q = 1.0 - s * s;
        let v = (1.0 - 1.0 / q).exp();
        let d = v * (-2.0 * s / (q * q)) / self.halfwidth;
        (v, d)
    }

    pub fn value(&self, x: f64) -> f64 {
        let (v, _) = self.bump(x);
        match self.modulation {
            Modulation::PlainBump => v,
            Modulation::LinearTimesBump => (x - self.center) * v,
        }
    }

    pub fn derivative(&self, x: f64) -> f64 {
        let (v, d) = self.bump(x);
        match self.modulation {
            Modulation::PlainBump => d,
            Modulation::LinearTimesBump => v + (x - self.center) * d,
        }
    }

    pub fn support(&self) -> (f64, f64) {
        (self.center - self.halfwidth, self.center + self.halfwidth)
    }

    /// Same shape moved by `s`.
    pub fn shifted(&self, s: f64) -> Self {
        Self { center: self.center + s, ..*self }
    }

    fn panels(&self) -> impl Iterator<Item = f64> + '_ {
        TEST_PANELS.iter().map(move |s| self.center + self.halfwidth * s)
    }

    /// `∫ φ` over `x < z`.
    pub fn integral_below(&self, z: f64) -> Result<f64> {
        pair(&Heaviside { x0: z, jump: 1.0, left: true }, self)
    }

    /// `∫ φ`.
    pub fn integral(&self) -> Result<f64> {
        let (lo, hi) = self.support();
        let pts: Vec<f64> = self.panels().filter(|x| *x >= lo && *x <= hi).collect();
        integrate_composite(&pts, |x| self.value(x))
    }
}

/// `⟨f, φ⟩ = ∫ f φ dx`.
pub fn pair<I: Integrand + ?Sized>(f: &I, phi: &TestFunction) -> Result<f64> {
    let (mut lo, mut hi) = phi.support();
    if let Some((a, b)) = f.support() {
        lo = lo.max(a);
        hi = hi.min(b);
    }
    if lo >= hi {
        return Ok(0.0);
    }
    let mut pts: Vec<f64> = phi.panels().chain(f.breakpoints()).filter(|x| *x > lo && *x < hi).collect();
    pts.push(lo);
    pts.push(hi);
    normalize_breakpoints(&mut pts);
    integrate_composite(&pts, |x| {
        let fx = f.eval(x);
        if fx == 0.0 {
            0.0
        } else {
            fx * phi.value(x)
        }
    })
}

/// Pairs each member of `family` on `grid` with `phi`. Evaluated in
/// parallel; results are ordered as the grid.
pub fn pair_over_grid<F: EpsFamily + ?Sized>(family: &F, phi: &TestFunction, grid: &[f64]) -> Result<Vec<f64>> {
    grid.par_iter()
        .map(|&eps| pair(&AtEps { family, eps }, phi))
        .collect()
}

/// Validates an `ε` grid: positive, finite, strictly decreasing, at least
/// `min_len` points.
pub fn validate_grid(grid: &[f64], min_len: usize) -> Result<()> {
    if grid.len() < min_len {
        return Err(Error::InvalidGrid(format!("need at least {min_len} points, got {}", grid.len())));
    }
    if let Some(bad) = grid.iter().find(|e| !(e.is_finite() && **e > 0.0)) {
        return Err(Error::InvalidGrid(format!("entries must be positive and finite, found {bad}")));
    }
    if let Some(w) = grid.windows(2).find(|w| w[1] >= w[0]) {
        return Err(Error::InvalidGrid(format!("grid must be strictly decreasing ({} then {})", w[0], w[1])));
    }
    Ok(())
}

/// `ε = 2^{-j}` for `j` in `first..=last`.
pub fn dyadic_grid(first: i32, last: i32) -> Vec<f64> {
    (first..=last).map(|j| 2f64.powi(-j)).collect()
}

/// Number of smallest-`ε` points used when fitting orders.
pub const ORDER_TAIL: usize = 5;

/// Least-squares decay order of `|value - limit|` in `ε`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OrderEstimate {
    /// Slope of `log|v - L|` against `log ε`; `+∞` when every value equals
    /// the limit to machine precision.
    #[serde(serialize_with = "serialize_extended")]
    pub order: f64,
    /// Root-mean-square residual of the fit in log space.
    pub residual: f64,
    /// Points that entered the fit.
    pub points: usize,
}

impl OrderEstimate {
    pub fn is_exact(&self) -> bool {
        self.order == f64::INFINITY
    }
}

pub(crate) fn serialize_extended<S: Serializer>(v: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if v.is_finite() {
        s.serialize_f64(*v)
    } else if v.is_nan() {
        s.serialize_str("nan")
    } else if *v > 0.0 {
        s.serialize_str("inf")
    } else {
        s.serialize_str("-inf")
    }
}

/// Fits the decay order over the last [`ORDER_TAIL`] points of the grid.
pub fn estimate_order(grid: &[f64], values: &[f64], limit: f64) -> Result<OrderEstimate> {
    estimate_order_tail(grid, values, limit, ORDER_TAIL)
}

/// Fits the decay order over the last `tail` points (all points when
/// `tail >= grid.len()`).
pub fn estimate_order_tail(grid: &[f64], values: &[f64], limit: f64, tail: usize) -> Result<OrderEstimate> {
    validate_grid(grid, 4)?;
    if grid.len() != values.len() {
        return Err(Error::InvalidGrid(format!("{} grid points but {} values", grid.len(), values.len())));
    }
    if !limit.is_finite() {
        return Err(Error::InvalidParameter(format!("limit must be finite, got {limit}")));
    }
    if let Some(v) = values.iter().find(|v| !v.is_finite()) {
        return Err(Error::InvalidParameter(format!("non-finite pairing value {v}")));
    }
    let start = grid.len().saturating_sub(tail.max(2));
    let pts: Vec<(f64, f64)> = grid[start..]
        .iter()
        .zip(&values[start..])
        .filter_map(|(&e, &v)| {
            let dev = (v - limit).abs();
            let floor = 8.0 * f64::EPSILON * v.abs().max(limit.abs());
            (dev > floor).then(|| (e.ln(), dev.ln()))
        })
        .collect();
    if pts.len() < 2 {
        return Ok(OrderEstimate { order: f64::INFINITY, residual: 0.0, points: pts.len() });
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rss: f64 = pts.iter().map(|p| (p.1 - intercept - slope * p.0).powi(2)).sum();
    Ok(OrderEstimate { order: slope, residual: (rss / n).sqrt(), points: pts.len() })
}

/// Result of three-point extrapolation to `ε → 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Extrapolation {
    pub limit: f64,
    /// Fitted exponent `α` in `v ≈ L + Cε^α`; `+∞` when the tail is flat.
    #[serde(serialize_with = "serialize_extended")]
    pub exponent: f64,
    /// False when the last two increments do not shrink.
    pub contracting: bool,
}

/// Extrapolation to `ε → 0` fitting `v = L + C ε^α` with `α` unknown. On a
/// geometric grid the three-point fit is Aitken's Δ² formula.
///
/// The fit is applied to every consecutive triple, and then again to the
/// resulting sequence of limits, which removes the next correction term
/// as well. A further level is kept only while it keeps contracting.
/// `exponent` and `contracting` describe the first level on the last triple.
pub fn extrapolate(grid: &[f64], values: &[f64]) -> Result<Extrapolation> {
    validate_grid(grid, 3)?;
    if grid.len() != values.len() {
        return Err(Error::InvalidGrid(format!("{} grid points but {} values", grid.len(), values.len())));
    }
    let n = grid.len();
    let first = extrapolate3(&grid[n - 3..], &values[n - 3..]);
    if !first.contracting || first.exponent.is_infinite() {
        return Ok(first);
    }
    let mut eps = grid.to_vec();
    let mut vals = values.to_vec();
    let mut limit = first.limit;
    for _ in 0..MAX_EXTRAPOLATION_LEVELS {
        if vals.len() < 3 {
            break;
        }
        // Longest contracting run of triples ending at the finest point.
        let mut next = Vec::with_capacity(vals.len() - 2);
        for i in (0..vals.len() - 2).rev() {
            let ex = extrapolate3(&eps[i..i + 3], &vals[i..i + 3]);
            if !ex.contracting {
                break;
            }
            next.push(ex.limit);
        }
        next.reverse();
        let m = next.len();
        if m == 0 {
            break;
        }
        let settles = m < 2 || (next[m - 1] - next[m - 2]).abs() < (vals[vals.len() - 1] - vals[vals.len() - 2]).abs();
        if !settles {
            break;
        }
        limit = next[m - 1];
        eps = eps[eps.len() - m..].to_vec();
        vals = next;
    }
    Ok(Extrapolation { limit, exponent: first.exponent, contracting: true })
}

/// Number of times the three-point fit is applied on top of itself.
const MAX_EXTRAPOLATION_LEVELS: usize = 3;

fn extrapolate3(grid: &[f64], values: &[f64]) -> Extrapolation {
    let (e1, e2, e3) = (grid[0], grid[1], grid[2]);
    let (v1, v2, v3) = (values[0], values[1], values[2]);
    let d1 = v1 - v2;
    let d2 = v2 - v3;
    let noise = 64.0 * f64::EPSILON * v1.abs().max(v2.abs()).max(v3.abs()).max(f64::MIN_POSITIVE);
    let stuck = Extrapolation { limit: v3, exponent: f64::NAN, contracting: false };
    if d2.abs() <= noise {
        return Extrapolation { limit: v3, exponent: f64::INFINITY, contracting: true };
    }
    let q = d2 / d1;
    if !(q.is_finite() && q > 0.0) {
        return stuck;
    }
    let r1 = e1 / e2;
    let r2 = e2 / e3;
    let alpha = if ((r1 - r2) / r2).abs() < 1e-12 {
        if q >= 1.0 {
            return stuck;
        }
        -q.ln() / r2.ln()
    } else {
        match solve_exponent(e1, e2, e3, q) {
            Some(a) => a,
            None => return stuck,
        }
    };
    let scale = d1 / (e1.powf(alpha) - e2.powf(alpha));
    Extrapolation { limit: v3 - scale * e3.powf(alpha), exponent: alpha, contracting: true }
}

// Solves (e2^a - e3^a)/(e1^a - e2^a) = q for a > 0 by bisection; the left
// side decreases monotonically in a.
fn solve_exponent(e1: f64, e2: f64, e3: f64, q: f64) -> Option<f64> {
    let g = |a: f64| (e2.powf(a) - e3.powf(a)) / (e1.powf(a) - e2.powf(a)) - q;
    let (mut lo, mut hi) = (1e-6, 30.0);
    if g(lo) < 0.0 || g(hi) > 0.0 {
        return None;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if g(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}

/// Number of correction terms `ε^{1/2}, ε, …, ε^{m/2}` eliminated by
/// [`richardson_limit`].
pub const RICHARDSON_TERMS: usize = 5;

/// Largest disagreement, relative to the size of the values, between the
/// fits on the last window and on the window one point coarser before a
/// sequence is declared unsettled.
pub const SETTLE_TOL: f64 = 1e-3;

/// Limit of `values` modelled as `L + Σ_{j=1..m} c_j ε^{j/2}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RichardsonFit {
    pub limit: f64,
    /// Number of correction terms used.
    pub terms: usize,
    /// `|L_m - L_{m-1}|`, the change from dropping the last term.
    pub spread: f64,
    /// Change of the limit when the window is moved one point coarser.
    pub shift: f64,
    /// False when `shift` exceeds [`SETTLE_TOL`] times the largest value in
    /// the windows, as happens for divergent sequences.
    pub settling: bool,
}

/// Richardson extrapolation on the half-integer power ladder.
///
/// Every pairing in this crate has an expansion in powers of `ε^{1/2}`:
/// the correction term carries `ε^{1/2}` and Taylor expansion of the test
/// function contributes integer powers. Interpolating the last `m + 1`
/// points with that model removes the first `m` corrections exactly, and
/// unlike [`extrapolate`] it does not need the increments to keep one sign.
pub fn richardson_limit(grid: &[f64], values: &[f64], terms: usize) -> Result<RichardsonFit> {
    validate_grid(grid, 3)?;
    if grid.len() != values.len() {
        return Err(Error::InvalidGrid(format!("{} grid points but {} values", grid.len(), values.len())));
    }
    let n = grid.len();
    let m = terms.clamp(1, n - 2);
    let limit = ladder_fit(&grid[n - m - 1..], &values[n - m - 1..], m);
    let coarser = if m > 1 { ladder_fit(&grid[n - m..], &values[n - m..], m - 1) } else { values[n - 1] };
    let earlier = ladder_fit(&grid[n - m - 2..n - 1], &values[n - m - 2..n - 1], m);
    let scale = values[n - m - 2..].iter().fold(f64::MIN_POSITIVE, |a, v| a.max(v.abs()));
    let shift = (limit - earlier).abs();
    Ok(RichardsonFit {
        limit,
        terms: m,
        spread: (limit - coarser).abs(),
        shift,
        settling: shift <= SETTLE_TOL * scale,
    })
}

// Solves the square system for L + Σ c_j (ε/ε_0)^{j/2} through the given points.
fn ladder_fit(grid: &[f64], values: &[f64], m: usize) -> f64 {
    let e0 = grid[0];
    let a = nalgebra::DMatrix::from_fn(m + 1, m + 1, |i, j| (grid[i] / e0).powf(0.5 * j as f64));
    let b = nalgebra::DVector::from_column_slice(values);
    match a.lu().solve(&b) {
        Some(x) => x[0],
        None => f64::NAN,
    }
}

/// Pairing values over an `ε` grid with their extrapolated limit and
/// decay order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairingReport {
    pub epsilon: Vec<f64>,
    pub values: Vec<f64>,
    pub extrapolated_limit: f64,
    /// Limit against which `order` was fitted.
    pub order_reference: f64,
    pub order: OrderEstimate,
}

impl PairingReport {
    /// Extrapolates and fits the order against the extrapolated limit.
    pub fn new(epsilon: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        let ex = extrapolate(&epsilon, &values)?;
        Self::with_reference(epsilon, values, ex.limit)
    }

    /// Uses `limit` both as the extrapolated limit and as the order
    /// reference.
    pub fn with_limit(epsilon: Vec<f64>, values: Vec<f64>, limit: f64) -> Result<Self> {
        let order = estimate_order(&epsilon, &values, limit)?;
        Ok(Self { epsilon, values, extrapolated_limit: limit, order_reference: limit, order })
    }

    /// Extrapolates and fits the order against `reference`.
    pub fn with_reference(epsilon: Vec<f64>, values: Vec<f64>, reference: f64) -> Result<Self> {
        let ex = extrapolate(&epsilon, &values)?;
        let order = estimate_order(&epsilon, &values, reference)?;
        Ok(Self { epsilon, values, extrapolated_limit: ex.limit, order_reference: reference, order })
    }

    /// CSV with columns `epsilon,value,abs_error_vs_limit`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("epsilon,value,abs_error_vs_limit\n");
        for (e, v) in self.epsilon.iter().zip(&self.values) {
            out.push_str(&format!("{},{},{}\n", fmt_num(*e), fmt_num(*v), fmt_num((v - self.extrapolated_limit).abs())));
        }
        out
    }
}

/// Formats a float with 17 significant digits.
pub fn fmt_num(v: f64) -> String {
    if v == 0.0 {
        "0".to_string()
    } else if v.is_finite() {
        format!("{v:.16e}")
    } else {
        v.to_string()
    }
}

/// Coefficients `A`, `B` in `f_ε - g ≈ A δ(x - x0) + B δ'(x - x0)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PointCoefficients {
    pub a: f64,
    pub b: f64,
    /// Pairings against the value-selecting test function.
    pub value_probe: PairingReport,
    /// Pairings against the slope-selecting test function.
    pub slope_probe: PairingReport,
}

/// Test functions used to probe a point `x0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Probes {
    /// `φ₁(x0) = 1`, `φ₁'(x0) = 0`.
    pub value: TestFunction,
    /// `φ₂(x0) = 0`, `φ₂'(x0) = 1`.
    pub slope: TestFunction,
}

impl Probes {
    pub fn at(x0: f64, halfwidth: f64) -> Self {
        Self { value: TestFunction::plain(x0, halfwidth), slope: TestFunction::linear(x0, halfwidth) }
    }
}

/// Default half-width of the probe test functions.
pub const PROBE_HALFWIDTH: f64 = 1.0;

/// Extracts the `δ` and `δ'` coefficients of `family - regular` at `x0`.
///
/// `A = lim ⟨f_ε - g, φ₁⟩` and `B = -lim ⟨f_ε - g, φ₂⟩`, with limits taken
/// by [`richardson_limit`] over `grid`.
pub fn extract_point_coeffs<F: EpsFamily + ?Sized>(
    name: &str,
    family: &F,
    x0: f64,
    regular: Option<&dyn Integrand>,
    grid: &[f64],
) -> Result<PointCoefficients> {
    validate_grid(grid, 4)?;
    let probes = Probes::at(x0, PROBE_HALFWIDTH);
    let probe = |phi: &TestFunction| -> Result<PairingReport> {
        let shift = match regular {
            Some(g) => pair(g, phi)?,
            None => 0.0,
        };
        let values: Vec<f64> = pair_over_grid(family, phi, grid)?.into_iter().map(|v| v - shift).collect();
        let fit = richardson_limit(grid, &values, RICHARDSON_TERMS)?;
        if !fit.settling || !fit.limit.is_finite() {
            let n = values.len();
            return Err(Error::Extraction {
                family: name.to_string(),
                reason: format!(
                    "pairings do not settle: last values {:.6e}, {:.6e}, {:.6e}",
                    values[n - 3],
                    values[n - 2],
                    values[n - 1]
                ),
            });
        }
        PairingReport::with_limit(grid.to_vec(), values, fit.limit)
    };
    let value_probe = probe(&probes.value)?;
    let slope_probe = probe(&probes.slope)?;
    Ok(PointCoefficients {
        a: value_probe.extrapolated_limit,
        b: -slope_probe.extrapolated_limit,
        value_probe,
        slope_probe,
    })
}
