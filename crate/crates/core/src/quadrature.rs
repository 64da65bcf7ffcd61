//! Gauss–Legendre quadrature.
//!
//! Every integrand in this crate is piecewise smooth with known breakpoints,
//! so a fixed-order rule applied on each piece between consecutive
//! breakpoints is both fast and accurate. An adaptive variant is kept for
//! the handful of one-off constants (kernel normalization, `omega0`).

use std::sync::OnceLock;

use crate::error::{Error, Result};

/// Number of nodes used by the composite rule on every subinterval.
pub const PANEL_NODES: usize = 16;

/// Nodes and weights of an `n`-point Gauss–Legendre rule on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// Computes the rule by Newton iteration on the Legendre recurrence.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "a quadrature rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let m = n.div_ceil(2);
        for i in 0..m {
            // Tricomi initial guess for the i-th positive root.
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() <= 1e-16 * x.abs().max(1.0) {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Self { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Integrates `f` over `[a, b]` without checking the samples.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let mut acc = 0.0;
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            acc += w * f(mid + half * x);
        }
        acc * half
    }

    /// Integrates `f` over `[a, b]`, failing on the first non-finite sample.
    pub fn integrate_checked<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> Result<f64> {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let mut acc = 0.0;
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            let xi = mid + half * x;
            let v = f(xi);
            if !v.is_finite() {
                return Err(Error::NonFiniteIntegrand { x: xi, value: v });
            }
            acc += w * v;
        }
        Ok(acc * half)
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// The shared 16-point rule.
pub fn panel_rule() -> &'static GaussLegendre {
    static RULE: OnceLock<GaussLegendre> = OnceLock::new();
    RULE.get_or_init(|| GaussLegendre::new(PANEL_NODES))
}

/// Sorts `points`, drops non-finite entries and near-duplicates.
pub fn normalize_breakpoints(points: &mut Vec<f64>) {
    points.retain(|x| x.is_finite());
    points.sort_by(|a, b| a.total_cmp(b));
    points.dedup_by(|a, b| (*a - *b).abs() <= 1e-15 * a.abs().max(b.abs()).max(1e-300));
}

/// Composite rule: applies the panel rule between each pair of consecutive
/// (sorted, deduplicated) breakpoints.
pub fn integrate_composite<F: FnMut(f64) -> f64>(breakpoints: &[f64], mut f: F) -> Result<f64> {
    let rule = panel_rule();
    let mut acc = 0.0;
    for w in breakpoints.windows(2) {
        if w[1] > w[0] {
            acc += rule.integrate_checked(w[0], w[1], &mut f)?;
        }
    }
    Ok(acc)
}

/// Adaptive bisection on top of the panel rule. Stops refining a panel once
/// its two halves agree with the whole to within `tol` scaled by the panel's
/// share of the interval.
pub fn integrate_adaptive<F: Fn(f64) -> f64>(a: f64, b: f64, tol: f64, f: &F) -> f64 {
    fn recurse<F: Fn(f64) -> f64>(a: f64, b: f64, whole: f64, tol: f64, depth: u32, f: &F) -> f64 {
        let rule = panel_rule();
        let m = 0.5 * (a + b);
        let left = rule.integrate(a, m, f);
        let right = rule.integrate(m, b, f);
        if depth == 0 || (left + right - whole).abs() <= tol {
            return left + right;
        }
        recurse(a, m, left, 0.5 * tol, depth - 1, f) + recurse(m, b, right, 0.5 * tol, depth - 1, f)
    }
    let whole = panel_rule().integrate(a, b, f);
    recurse(a, b, whole, tol, 40, f)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_sum_to_interval_length() {
        for n in [1, 2, 5, 16, 33] {
            let rule = GaussLegendre::new(n);
            let s: f64 = rule.weights().iter().sum();
            assert!((s - 2.0).abs() < 1e-14, "n={n}: {s}");
        }
    }

    #[test]
    fn exact_for_polynomials_up_to_degree_2n_minus_1() {
        let rule = panel_rule();
        for deg in 0..(2 * PANEL_NODES) {
            let got = rule.integrate(0.0, 1.0, |x| x.powi(deg as i32));
            let want = 1.0 / (deg as f64 + 1.0);
            assert!((got - want).abs() < 1e-15, "degree {deg}: {got} vs {want}");
        }
    }

    #[test]
    fn known_sixteen_point_node() {
        let rule = panel_rule();
        // Largest node of the 16-point rule.
        assert!((rule.nodes()[15] - 0.989_400_934_991_649_9).abs() < 1e-15);
        assert!((rule.weights()[15] - 0.027_152_459_411_754_04).abs() < 1e-15);
    }

    #[test]
    fn composite_reports_non_finite_location() {
        let err = integrate_composite(&[0.0, 1.0], |x| if x > 0.5 { f64::NAN } else { 1.0 }).unwrap_err();
        match err {
            Error::NonFiniteIntegrand { x, .. } => assert!(x > 0.5),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn adaptive_handles_flat_bump() {
        let f = |x: f64| if x.abs() < 1.0 { (-1.0 / (1.0 - x * x)).exp() } else { 0.0 };
        let a = integrate_adaptive(-1.0, 1.0, 1e-15, &f);
        // Reference value of the unnormalized bump integral.
        assert!((a - 0.443_993_816_168_079_4).abs() < 1e-14, "{a}");
    }
}
