//! Mollifier kernels and the three regularized profiles built from them.
//!
//! With a kernel `ω` (even, non-negative, unit mass, supported in `(-1, 1)`):
//!
//! * correction `R(x, ε) = ε^{-1/2} ω((x - 2ε)/ε)`, supported in `(ε, 3ε)`;
//! * regularized delta `δ(x, ε) = ε^{-1} ω((x + 2ε)/ε)`, supported in `(-3ε, -ε)`;
//! * regularized step `H(ξ, ε)` with a plateau of height `c` on `|ξ| ≤ 3ε`
//!   and smooth ramps on `3ε < |ξ| < 4ε`.
//!
//! Both small supports sit strictly inside the plateau and are disjoint from
//! each other, which is what makes products like `R·δ` vanish identically.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{check_eps, Result};
use crate::quadrature::{integrate_adaptive, panel_rule};

/// Kernel families.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum KernelKind {
    /// `C·exp(-1/(1-x²))`, infinitely smooth.
    #[serde(alias = "exponential")]
    SmoothExponentialBump,
    /// `(15/16)(1-x²)²`, with closed-form moments.
    #[default]
    #[serde(alias = "quartic")]
    QuarticPolynomialBump,
}

impl std::str::FromStr for KernelKind {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "quartic" | "quartic-polynomial-bump" => Ok(KernelKind::QuarticPolynomialBump),
            "exponential" | "smooth-exponential-bump" => Ok(KernelKind::SmoothExponentialBump),
            other => Err(crate::Error::InvalidParameter(format!("unknown kernel kind `{other}`"))),
        }
    }
}

const QUARTIC_NORMALIZATION: f64 = 15.0 / 16.0;

/// Panel edges (in kernel units) used when integrating anything built from
/// the exponential bump. Graded towards the flat ends.
const EXPONENTIAL_PANELS: [f64; 15] = [
    -1.0, -0.97, -0.9, -0.8, -0.65, -0.45, -0.25, 0.0, 0.25, 0.45, 0.65, 0.8, 0.9, 0.97, 1.0,
];
const QUARTIC_PANELS: [f64; 3] = [-1.0, 0.0, 1.0];

/// Intervals in the cumulative table of the exponential bump.
const CDF_CELLS: usize = 128;

/// A normalized mollifier `ω` with its cached second moment `ω₀ = ∫ω²`.
#[derive(Debug, Clone)]
pub struct MollifierKernel {
    kind: KernelKind,
    normalization: f64,
    omega0: f64,
    // Cumulative mass at the cell edges of a uniform grid on [-1, 1].
    // Only populated for kernels without a closed-form antiderivative.
    cdf: Option<Arc<[f64]>>,
}

impl PartialEq for MollifierKernel {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
    }
}

/// Builds the kernel of the given family.
pub fn make_kernel(kind: KernelKind) -> MollifierKernel {
    MollifierKernel::new(kind)
}

impl MollifierKernel {
    pub fn new(kind: KernelKind) -> Self {
        match kind {
            KernelKind::QuarticPolynomialBump => {
                let mut k = Self { kind, normalization: QUARTIC_NORMALIZATION, omega0: 0.0, cdf: None };
                k.omega0 = k.quadrature_omega0();
                k
            }
            KernelKind::SmoothExponentialBump => {
                let raw = |x: f64| exp_bump_raw(x);
                let mass = integrate_adaptive(-1.0, 1.0, 1e-16, &raw);
                let normalization = 1.0 / mass;
                let mut k = Self { kind, normalization, omega0: 0.0, cdf: None };
                k.omega0 = k.quadrature_omega0();
                k.cdf = Some(k.build_cdf());
                k
            }
        }
    }

    pub fn quartic() -> Self {
        Self::new(KernelKind::QuarticPolynomialBump)
    }

    pub fn exponential() -> Self {
        Self::new(KernelKind::SmoothExponentialBump)
    }

    pub fn kind(&self) -> KernelKind {
        self.kind
    }

    /// Constant in front of the unnormalized bump shape.
    pub fn normalization(&self) -> f64 {
        self.normalization
    }

    /// `∫ω²`.
    pub fn omega0(&self) -> f64 {
        self.omega0
    }

    /// `ω(y)`.
    pub fn value(&self, y: f64) -> f64 {
        if y.abs() >= 1.0 {
            return 0.0;
        }
        match self.kind {
            KernelKind::QuarticPolynomialBump => {
                let s = 1.0 - y * y;
                self.normalization * s * s
            }
            KernelKind::SmoothExponentialBump => self.normalization * exp_bump_raw(y),
        }
    }

    /// `ω'(y)`.
    pub fn derivative(&self, y: f64) -> f64 {
        if y.abs() >= 1.0 {
            return 0.0;
        }
        match self.kind {
            KernelKind::QuarticPolynomialBump => -4.0 * self.normalization * y * (1.0 - y * y),
            KernelKind::SmoothExponentialBump => {
                let s = 1.0 - y * y;
                self.normalization * exp_bump_raw(y) * (-2.0 * y / (s * s))
            }
        }
    }

    /// `W(y) = ∫_{-1}^{y} ω`, rising from 0 to 1 across the support.
    pub fn cumulative(&self, y: f64) -> f64 {
        if y <= -1.0 {
            return 0.0;
        }
        if y >= 1.0 {
            return 1.0;
        }
        match (&self.cdf, self.kind) {
            (_, KernelKind::QuarticPolynomialBump) => {
                let y3 = y * y * y;
                let y5 = y3 * y * y;
                0.5 + self.normalization * (y - 2.0 * y3 / 3.0 + y5 / 5.0)
            }
            (Some(cdf), KernelKind::SmoothExponentialBump) => {
                let h = 2.0 / CDF_CELLS as f64;
                let cell = (((y + 1.0) / h) as usize).min(CDF_CELLS - 1);
                let left = -1.0 + cell as f64 * h;
                cdf[cell] + panel_rule().integrate(left, y, |s| self.value(s))
            }
            (None, KernelKind::SmoothExponentialBump) => unreachable!("exponential kernel always carries its table"),
        }
    }

    /// Panel edges on `[-1, 1]` at which composite quadrature should split
    /// any integrand containing this kernel.
    pub fn panel_edges(&self) -> &'static [f64] {
        match self.kind {
            KernelKind::QuarticPolynomialBump => &QUARTIC_PANELS,
            KernelKind::SmoothExponentialBump => &EXPONENTIAL_PANELS,
        }
    }

    fn quadrature_omega0(&self) -> f64 {
        let sq = |y: f64| {
            let w = self.value(y);
            w * w
        };
        integrate_adaptive(-1.0, 1.0, 1e-16, &sq)
    }

    fn build_cdf(&self) -> Arc<[f64]> {
        let h = 2.0 / CDF_CELLS as f64;
        let mut acc = 0.0;
        let mut table = Vec::with_capacity(CDF_CELLS + 1);
        table.push(0.0);
        let f = |y: f64| self.value(y);
        for i in 0..CDF_CELLS {
            let a = -1.0 + i as f64 * h;
            acc += integrate_adaptive(a, a + h, 1e-17, &f);
            table.push(acc);
        }
        table.into()
    }

    /// `R(x, ε) = ε^{-1/2} ω((x - 2ε)/ε)`.
    pub fn correction(&self, x: f64, eps: f64) -> f64 {
        if x <= eps || x >= 3.0 * eps {
            return 0.0;
        }
        self.value((x - 2.0 * eps) / eps) / eps.sqrt()
    }

    /// `∂R/∂x`.
    pub fn correction_dx(&self, x: f64, eps: f64) -> f64 {
        if x <= eps || x >= 3.0 * eps {
            return 0.0;
        }
        self.derivative((x - 2.0 * eps) / eps) / (eps * eps.sqrt())
    }

    /// `δ(x, ε) = ε^{-1} ω((x + 2ε)/ε)`.
    pub fn delta(&self, x: f64, eps: f64) -> f64 {
        if x <= -3.0 * eps || x >= -eps {
            return 0.0;
        }
        self.value((x + 2.0 * eps) / eps) / eps
    }

    /// `∂δ/∂x`.
    pub fn delta_dx(&self, x: f64, eps: f64) -> f64 {
        if x <= -3.0 * eps || x >= -eps {
            return 0.0;
        }
        self.derivative((x + 2.0 * eps) / eps) / (eps * eps)
    }

    /// Quadrature breakpoints covering the support `(ε, 3ε)` of `R`.
    pub fn correction_breakpoints(&self, eps: f64) -> Vec<f64> {
        self.panel_edges().iter().map(|y| 2.0 * eps + eps * y).collect()
    }

    /// Quadrature breakpoints covering the support `(-3ε, -ε)` of `δ(·, ε)`.
    pub fn delta_breakpoints(&self, eps: f64) -> Vec<f64> {
        self.panel_edges().iter().map(|y| -2.0 * eps + eps * y).collect()
    }
}

fn exp_bump_raw(y: f64) -> f64 {
    if y.abs() >= 1.0 {
        0.0
    } else {
        (-1.0 / (1.0 - y * y)).exp()
    }
}

/// Checked `R(x, ε)`.
pub fn eval_correction(x: f64, eps: f64, kernel: &MollifierKernel) -> Result<f64> {
    check_eps(eps)?;
    Ok(kernel.correction(x, eps))
}

/// Checked `δ(x, ε)`.
pub fn eval_delta_reg(x: f64, eps: f64, kernel: &MollifierKernel) -> Result<f64> {
    check_eps(eps)?;
    Ok(kernel.delta(x, eps))
}

/// Which side of the step carries the value 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum StepOrientation {
    /// 0 for `ξ ≤ -4ε`, 1 for `ξ ≥ 4ε`: a regularized Heaviside `H(ξ)`.
    #[default]
    Rising,
    /// 1 for `ξ ≤ -4ε`, 0 for `ξ ≥ 4ε`: the mirror image `H(-ξ)`.
    Falling,
}

/// Regularized step with a plateau of height `c` on `|ξ| ≤ 3ε`.
///
/// The ramps on `3ε < |ξ| < 4ε` are affinely rescaled copies of the kernel's
/// cumulative mass `W`, so the profile is as smooth as `W` and its derivative
/// is a rescaled kernel.
#[derive(Debug, Clone)]
pub struct StepProfile {
    plateau: f64,
    eps: f64,
    kernel: MollifierKernel,
    orientation: StepOrientation,
}

impl StepProfile {
    pub fn new(plateau: f64, eps: f64, kernel: MollifierKernel) -> Result<Self> {
        Self::with_orientation(plateau, eps, kernel, StepOrientation::Rising)
    }

    pub fn with_orientation(
        plateau: f64,
        eps: f64,
        kernel: MollifierKernel,
        orientation: StepOrientation,
    ) -> Result<Self> {
        check_eps(eps)?;
        if !plateau.is_finite() {
            return Err(crate::Error::InvalidParameter(format!("plateau constant must be finite, got {plateau}")));
        }
        Ok(Self { plateau, eps, kernel, orientation })
    }

    pub fn plateau(&self) -> f64 {
        self.plateau
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn kernel(&self) -> &MollifierKernel {
        &self.kernel
    }

    pub fn orientation(&self) -> StepOrientation {
        self.orientation
    }

    /// Profile value at `xi`.
    pub fn value(&self, xi: f64) -> f64 {
        match self.orientation {
            StepOrientation::Rising => self.rising(xi),
            StepOrientation::Falling => self.rising(-xi),
        }
    }

    /// Exact derivative of [`value`](Self::value) with respect to `xi`.
    pub fn derivative(&self, xi: f64) -> f64 {
        match self.orientation {
            StepOrientation::Rising => self.rising_dx(xi),
            StepOrientation::Falling => -self.rising_dx(-xi),
        }
    }

    fn rising(&self, xi: f64) -> f64 {
        let e = self.eps;
        let c = self.plateau;
        if xi <= -4.0 * e {
            0.0
        } else if xi < -3.0 * e {
            c * self.kernel.cumulative(self.band_coord(xi + 3.5 * e))
        } else if xi <= 3.0 * e {
            c
        } else if xi < 4.0 * e {
            c + (1.0 - c) * self.kernel.cumulative(self.band_coord(xi - 3.5 * e))
        } else {
            1.0
        }
    }

    fn rising_dx(&self, xi: f64) -> f64 {
        let e = self.eps;
        let scale = 2.0 / e;
        if xi <= -4.0 * e || (-3.0 * e..=3.0 * e).contains(&xi) || xi >= 4.0 * e {
            0.0
        } else if xi < 0.0 {
            self.plateau * scale * self.kernel.value(self.band_coord(xi + 3.5 * e))
        } else {
            (1.0 - self.plateau) * scale * self.kernel.value(self.band_coord(xi - 3.5 * e))
        }
    }

    // Maps a band of width ε centred at 0 onto the kernel support (-1, 1).
    fn band_coord(&self, offset: f64) -> f64 {
        2.0 * offset / self.eps
    }

    /// The four junction points `±3ε`, `±4ε`.
    pub fn junctions(&self) -> [f64; 4] {
        let e = self.eps;
        [-4.0 * e, -3.0 * e, 3.0 * e, 4.0 * e]
    }

    /// Quadrature breakpoints in `ξ` covering both transition bands.
    pub fn breakpoints(&self) -> Vec<f64> {
        let e = self.eps;
        let edges = self.kernel.panel_edges();
        let mut pts = Vec::with_capacity(2 * edges.len());
        for centre in [-3.5 * e, 3.5 * e] {
            pts.extend(edges.iter().map(|y| centre + 0.5 * e * y));
        }
        pts
    }
}

/// Step value `H(ξ, ε)`.
pub fn eval_step(xi: f64, profile: &StepProfile) -> f64 {
    profile.value(xi)
}

/// Step derivative `dH/dξ`.
pub fn eval_step_dx(xi: f64, profile: &StepProfile) -> f64 {
    profile.derivative(xi)
}

/// The plateau height `c = 1/2 - σ₁/u₁²` that cancels the `δ'` budget of the
/// stress equation.
pub fn plateau_for_jumps(u1: f64, sigma1: f64) -> Result<f64> {
    if u1 == 0.0 || !u1.is_finite() {
        return Err(crate::Error::DegenerateJump);
    }
    Ok(0.5 - sigma1 / (u1 * u1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::integrate_composite;

    fn kernels() -> [MollifierKernel; 2] {
        [MollifierKernel::quartic(), MollifierKernel::exponential()]
    }

    fn integrate_on(edges: &[f64], f: impl Fn(f64) -> f64) -> f64 {
        integrate_composite(edges, f).unwrap()
    }

    #[test]
    fn quartic_closed_forms() {
        let k = MollifierKernel::quartic();
        assert_eq!(k.normalization(), 15.0 / 16.0);
        assert!((k.omega0() - 5.0 / 7.0).abs() < 1e-15);
        assert_eq!(k.value(0.0), 15.0 / 16.0);
    }

    #[test]
    fn exponential_moments_match_reference() {
        // Reference values from a 30-digit evaluation.
        let k = MollifierKernel::exponential();
        assert!((1.0 / k.normalization() - 0.443_993_816_168_079_4).abs() < 1e-14);
        assert!((k.omega0() - 0.675_116_813_009_697_5).abs() < 1e-13);
    }

    #[test]
    fn kernel_invariants() {
        for k in kernels() {
            for i in 0..=400 {
                let y = -1.2 + 2.4 * i as f64 / 400.0;
                assert_eq!(k.value(y), k.value(-y));
                assert!(k.value(y) >= 0.0);
                if y.abs() >= 1.0 {
                    assert_eq!(k.value(y), 0.0);
                }
            }
            let mass = integrate_on(k.panel_edges(), |y| k.value(y));
            assert!((mass - 1.0).abs() < 1e-12, "{:?}: {mass}", k.kind());
            let sq = integrate_on(k.panel_edges(), |y| k.value(y).powi(2));
            assert!((sq - k.omega0()).abs() < 1e-12);
            assert!(k.omega0() > 0.0);
        }
    }

    #[test]
    fn cumulative_is_antiderivative() {
        for k in kernels() {
            assert_eq!(k.cumulative(-1.0), 0.0);
            assert_eq!(k.cumulative(1.0), 1.0);
            assert!((k.cumulative(0.0) - 0.5).abs() < 1e-14);
            assert!((k.cumulative(1.0 - 1e-12) - 1.0).abs() < 1e-13);
            let h = 1e-6;
            for i in 1..40 {
                let y = -0.975 + 1.95 * i as f64 / 40.0;
                let fd = (k.cumulative(y + h) - k.cumulative(y - h)) / (2.0 * h);
                assert!((fd - k.value(y)).abs() < 1e-8, "{:?} y={y}: {fd} vs {}", k.kind(), k.value(y));
            }
        }
    }

    #[test]
    fn correction_and_delta_values() {
        let k = MollifierKernel::quartic();
        let eps = 0.1;
        assert!((k.correction(2.0 * eps, eps) - 15.0 / 16.0 / eps.sqrt()).abs() < 1e-15);
        // 0.1^{-1/2}·15/16 from a 30-digit evaluation.
        assert!((eval_correction(0.2, 0.1, &k).unwrap() - 2.964_635_306_407_855_5).abs() < 1e-14);
        assert_eq!(k.correction(0.0, eps), 0.0);
        assert!((k.delta(-2.0 * eps, eps) - 15.0 / 16.0 / eps).abs() < 1e-14);
        assert_eq!(k.delta(0.0, eps), 0.0);
    }

    #[test]
    fn non_positive_eps_is_rejected() {
        let k = MollifierKernel::quartic();
        for bad in [0.0, -1.0, f64::NAN] {
            assert!(eval_correction(0.0, bad, &k).is_err());
            assert!(eval_delta_reg(0.0, bad, &k).is_err());
            assert!(StepProfile::new(0.5, bad, k.clone()).is_err());
        }
    }

    #[test]
    fn supports_are_exact_and_disjoint() {
        for k in kernels() {
            let eps = 0.037;
            for i in 0..=10_000 {
                let x = -5.0 * eps + 10.0 * eps * i as f64 / 10_000.0;
                let r = k.correction(x, eps);
                let d = k.delta(x, eps);
                if !(x > eps && x < 3.0 * eps) {
                    assert_eq!(r, 0.0);
                }
                if !(x > -3.0 * eps && x < -eps) {
                    assert_eq!(d, 0.0);
                }
                assert_eq!(r * d, 0.0);
            }
        }
    }

    #[test]
    fn masses_and_scaling() {
        for k in kernels() {
            for eps in [0.5, 0.01, 1e-4] {
                let r_edges = k.correction_breakpoints(eps);
                let d_edges = k.delta_breakpoints(eps);
                let dm = integrate_on(&d_edges, |x| k.delta(x, eps));
                let rm = integrate_on(&r_edges, |x| k.correction(x, eps));
                let r2 = integrate_on(&r_edges, |x| k.correction(x, eps).powi(2));
                assert!((dm - 1.0).abs() < 1e-10);
                assert!((rm - eps.sqrt()).abs() < 1e-10 * eps.sqrt().max(1.0));
                assert!((r2 - k.omega0()).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn step_profile_levels() {
        for k in kernels() {
            let eps = 0.01;
            let p = StepProfile::new(0.3, eps, k).unwrap();
            assert_eq!(p.value(-4.0 * eps), 0.0);
            assert_eq!(p.value(-1.0), 0.0);
            assert_eq!(p.value(4.0 * eps), 1.0);
            assert_eq!(p.value(1.0), 1.0);
            for xi in [-3.0 * eps, -eps, 0.0, 2.9 * eps, 3.0 * eps] {
                assert_eq!(p.value(xi), 0.3);
                assert_eq!(p.derivative(xi), 0.0);
            }
            let falling = StepProfile::with_orientation(0.3, eps, p.kernel().clone(), StepOrientation::Falling).unwrap();
            assert_eq!(falling.value(-5.0 * eps), 1.0);
            assert_eq!(falling.value(5.0 * eps), 0.0);
            assert_eq!(falling.value(0.0), 0.3);
        }
    }

    #[test]
    fn step_profile_is_c1_at_junctions() {
        for k in kernels() {
            let eps = 0.02;
            let p = StepProfile::new(0.375, eps, k).unwrap();
            for j in p.junctions() {
                let h = 1e-9 * eps;
                assert!((p.derivative(j + h) - p.derivative(j - h)).abs() < 1e-10);
                assert!((p.value(j + h) - p.value(j - h)).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn band_integrals_of_derivative() {
        for k in kernels() {
            let eps = 0.05;
            let c = 0.375;
            let p = StepProfile::new(c, eps, k.clone()).unwrap();
            let bp = p.breakpoints();
            let n = bp.len() / 2;
            let left = integrate_on(&bp[..n], |x| p.derivative(x));
            let right = integrate_on(&bp[n..], |x| p.derivative(x));
            assert!((left - c).abs() < 1e-13);
            assert!((right - (1.0 - c)).abs() < 1e-13);

            let f = StepProfile::with_orientation(c, eps, k, StepOrientation::Falling).unwrap();
            let left = integrate_on(&bp[..n], |x| f.derivative(x));
            let right = integrate_on(&bp[n..], |x| f.derivative(x));
            assert!((left - (c - 1.0)).abs() < 1e-13);
            assert!((right - (0.0 - c)).abs() < 1e-13);
            assert!((left + right + 1.0).abs() < 1e-13);
        }
    }

    #[test]
    fn analytic_step_derivative_matches_finite_difference() {
        for k in kernels() {
            let eps = 0.1;
            let p = StepProfile::new(0.2, eps, k).unwrap();
            let h = 1e-7;
            for i in 0..200 {
                let xi = -4.5 * eps + 9.0 * eps * (i as f64 + 0.5) / 200.0;
                let fd = (p.value(xi + h) - p.value(xi - h)) / (2.0 * h);
                assert!((fd - p.derivative(xi)).abs() < 1e-6, "xi={xi}");
            }
        }
    }

    #[test]
    fn plateau_from_jump_data() {
        assert_eq!(plateau_for_jumps(2.0, 0.5).unwrap(), 0.375);
        assert!(plateau_for_jumps(0.0, 1.0).is_err());
    }
}
