//! Jump data, the singular solution and its smooth regularization.
//!
//! The smooth ansatz at `(x, t, ε)` is
//!
//! ```text
//! u = u0 + u1 H(-x + φ, ε) + p R(x - φ, ε)
//! σ = σ0 + σ1 H(-x + φ, ε) + e δ(x - φ, ε)
//! ```
//!
//! with one step profile shared by both fields. `u` is complex because `p`
//! becomes imaginary once the concentrated stress `e` turns negative.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dynamics::{solve_front, Front, FrontState, FrontTrajectory};
use crate::error::{check_eps, Error, Result};
use crate::kernels::{plateau_for_jumps, MollifierKernel, StepProfile};
use crate::pairing::{fmt_num, pair, Piecewise, TestFunction};

/// Riemann data `u = u0 + u1 H(-x)`, `σ = σ0 + σ1 H(-x) + e0 δ(x)` for the
/// system with parameter `k` (`k = 0` selects the degenerate system).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RiemannJumpData {
    /// Right velocity state.
    pub u0: f64,
    /// Velocity jump `u_L - u_R`.
    pub u1: f64,
    pub sigma0: f64,
    /// Stress jump `σ_L - σ_R`.
    pub sigma1: f64,
    /// Initial amplitude of the concentrated stress.
    pub e0: f64,
    pub k: f64,
}

impl RiemannJumpData {
    pub fn new(u0: f64, u1: f64, sigma0: f64, sigma1: f64, e0: f64, k: f64) -> Result<Self> {
        let data = Self { u0, u1, sigma0, sigma1, e0, k };
        data.validate()?;
        Ok(data)
    }

    /// Builds the jump data from left and right states.
    pub fn from_states(left: (f64, f64), right: (f64, f64), e0: f64, k: f64) -> Result<Self> {
        Self::new(right.0, left.0 - right.0, right.1, left.1 - right.1, e0, k)
    }

    pub fn validate(&self) -> Result<()> {
        let all = [self.u0, self.u1, self.sigma0, self.sigma1, self.e0, self.k];
        if all.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter(format!("jump data must be finite: {self:?}")));
        }
        if self.k < 0.0 {
            return Err(Error::InvalidParameter(format!("k must be nonnegative, got {}", self.k)));
        }
        if self.u1 == 0.0 {
            return Err(Error::DegenerateJump);
        }
        Ok(())
    }

    /// `(u_L, σ_L)`.
    pub fn left(&self) -> (f64, f64) {
        (self.u0 + self.u1, self.sigma0 + self.sigma1)
    }

    /// `(u_R, σ_R)`.
    pub fn right(&self) -> (f64, f64) {
        (self.u0, self.sigma0)
    }

    /// `c = 1/2 - σ1/u1²`.
    pub fn plateau_constant(&self) -> Result<f64> {
        plateau_for_jumps(self.u1, self.sigma1)
    }

    pub fn with_k(&self, k: f64) -> Result<Self> {
        Self::new(self.u0, self.u1, self.sigma0, self.sigma1, self.e0, k)
    }
}

/// The distributional solution: a single jump at `x = φ(t)` with a point
/// mass `e(t)δ(x - φ(t))` in `σ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SingularSolution {
    pub data: RiemannJumpData,
    pub front: FrontTrajectory,
}

impl SingularSolution {
    pub fn new(data: RiemannJumpData, omega0: f64) -> Result<Self> {
        Ok(Self { data, front: solve_front(&data, omega0)? })
    }

    pub fn phi(&self, t: f64) -> f64 {
        self.front.phi(t)
    }

    pub fn e(&self, t: f64) -> f64 {
        self.front.e(t)
    }

    /// `(⟨u, φ⟩, ⟨σ, φ⟩)` at time `t`.
    pub fn pairing(&self, t: f64, phi_test: &TestFunction) -> Result<(f64, f64)> {
        singular_limit_pairing(self, t, phi_test)
    }
}

/// Closed-form pairing of the singular solution with a test function:
/// `⟨u, φ⟩ = u0∫φ + u1∫_{x<φ(t)}φ` and
/// `⟨σ, φ⟩ = σ0∫φ + σ1∫_{x<φ(t)}φ + e(t)φ(φ(t))`.
pub fn singular_limit_pairing(solution: &SingularSolution, t: f64, phi_test: &TestFunction) -> Result<(f64, f64)> {
    if !(t.is_finite() && t >= 0.0) {
        return Err(Error::InvalidParameter(format!("time must be nonnegative, got {t}")));
    }
    let d = &solution.data;
    let x = solution.phi(t);
    let total = phi_test.integral()?;
    let below = phi_test.integral_below(x)?;
    let u = d.u0 * total + d.u1 * below;
    let sigma = d.sigma0 * total + d.sigma1 * below + solution.e(t) * phi_test.value(x);
    Ok((u, sigma))
}

/// The four first-order partial derivatives of the ansatz.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Derivatives {
    pub u_t: Complex64,
    pub u_x: Complex64,
    pub sigma_t: f64,
    pub sigma_x: f64,
}

/// Smooth ansatz driven by a front `F`.
#[derive(Debug, Clone)]
pub struct SmoothAnsatz<F = FrontTrajectory> {
    data: RiemannJumpData,
    front: F,
    kernel: MollifierKernel,
    plateau: f64,
    correction: bool,
}

impl SmoothAnsatz<FrontTrajectory> {
    /// Ansatz on the given trajectory, with the plateau constant matched to
    /// the jumps.
    pub fn new(data: RiemannJumpData, front: FrontTrajectory, kernel: MollifierKernel) -> Result<Self> {
        Self::with_front(data, front, kernel)
    }

    /// Ansatz on the trajectory solving the front equations for `data`.
    pub fn solved(data: RiemannJumpData, kernel: MollifierKernel) -> Result<Self> {
        let front = solve_front(&data, kernel.omega0())?;
        Self::new(data, front, kernel)
    }
}

impl<F: Front> SmoothAnsatz<F> {
    /// Ansatz on an arbitrary front law.
    pub fn with_front(data: RiemannJumpData, front: F, kernel: MollifierKernel) -> Result<Self> {
        data.validate()?;
        let plateau = data.plateau_constant()?;
        Ok(Self { data, front, kernel, plateau, correction: true })
    }

    /// Overrides the plateau constant `c`.
    pub fn with_plateau(mut self, c: f64) -> Self {
        self.plateau = c;
        self
    }

    /// Drops the `pR` term from `u`.
    pub fn without_correction(mut self) -> Self {
        self.correction = false;
        self
    }

    pub fn data(&self) -> &RiemannJumpData {
        &self.data
    }

    pub fn front(&self) -> &F {
        &self.front
    }

    pub fn kernel(&self) -> &MollifierKernel {
        &self.kernel
    }

    pub fn plateau(&self) -> f64 {
        self.plateau
    }

    pub fn has_correction(&self) -> bool {
        self.correction
    }

    /// Freezes `(t, ε)`.
    pub fn slice(&self, t: f64, eps: f64) -> Result<AnsatzSlice> {
        check_eps(eps)?;
        if !(t.is_finite() && t >= 0.0) {
            return Err(Error::InvalidParameter(format!("time must be nonnegative, got {t}")));
        }
        let mut state = self.front.state(t);
        if !self.correction {
            state.p = Complex64::new(0.0, 0.0);
            state.p_dot = Complex64::new(0.0, 0.0);
        }
        Ok(AnsatzSlice {
            data: self.data,
            state,
            eps,
            kernel: self.kernel.clone(),
            step: StepProfile::new(self.plateau, eps, self.kernel.clone())?,
        })
    }

    pub fn eval_fields(&self, x: f64, t: f64, eps: f64) -> Result<(Complex64, f64)> {
        Ok(self.slice(t, eps)?.fields(x))
    }

    pub fn eval_derivatives(&self, x: f64, t: f64, eps: f64) -> Result<Derivatives> {
        Ok(self.slice(t, eps)?.derivatives(x))
    }

    /// `(⟨u(·,t,ε), φ⟩, ⟨σ(·,t,ε), φ⟩)`, with real and imaginary parts of
    /// `u` paired separately.
    pub fn pairing(&self, t: f64, eps: f64, phi_test: &TestFunction) -> Result<(Complex64, f64)> {
        let s = self.slice(t, eps)?;
        let bps = s.breakpoints();
        let (lo, hi) = s.support();
        let (u_l, sigma_l) = self.data.left();
        let (u_r, sigma_r) = self.data.right();
        // Pair the deviation from the sharp background, then add the
        // background's exact pairing.
        let x0 = s.state.phi;
        let background = |x: f64, l: f64, r: f64| if x < x0 { l } else { r };
        let re = Piecewise::new(|x| s.fields(x).0.re - background(x, u_l, u_r), bps.clone(), Some((lo, hi)));
        let im = Piecewise::new(|x| s.fields(x).0.im, bps.clone(), Some((lo, hi)));
        let sg = Piecewise::new(|x| s.fields(x).1 - background(x, sigma_l, sigma_r), bps, Some((lo, hi)));
        let total = phi_test.integral()?;
        let below = phi_test.integral_below(x0)?;
        let u = pair(&re, phi_test)? + u_r * total + (u_l - u_r) * below;
        let sigma = pair(&sg, phi_test)? + sigma_r * total + (sigma_l - sigma_r) * below;
        Ok((Complex64::new(u, pair(&im, phi_test)?), sigma))
    }

    /// CSV snapshot with columns `x,re_u,im_u,sigma`.
    pub fn snapshot_csv(&self, t: f64, eps: f64, xs: &[f64]) -> Result<String> {
        let s = self.slice(t, eps)?;
        let mut out = String::from("x,re_u,im_u,sigma\n");
        for &x in xs {
            let (u, sigma) = s.fields(x);
            out.push_str(&format!("{},{},{},{}\n", fmt_num(x), fmt_num(u.re), fmt_num(u.im), fmt_num(sigma)));
        }
        Ok(out)
    }
}

/// The ansatz at fixed `(t, ε)`.
#[derive(Debug, Clone)]
pub struct AnsatzSlice {
    data: RiemannJumpData,
    state: FrontState,
    eps: f64,
    kernel: MollifierKernel,
    step: StepProfile,
}

impl AnsatzSlice {
    pub fn state(&self) -> &FrontState {
        &self.state
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn data(&self) -> &RiemannJumpData {
        &self.data
    }

    /// `(u, σ)` at `x`.
    pub fn fields(&self, x: f64) -> (Complex64, f64) {
        let d = &self.data;
        let s = &self.state;
        let y = x - s.phi;
        let h = self.step.value(-y);
        let u = Complex64::new(d.u0 + d.u1 * h, 0.0) + s.p * self.kernel.correction(y, self.eps);
        let sigma = d.sigma0 + d.sigma1 * h + s.e * self.kernel.delta(y, self.eps);
        (u, sigma)
    }

    /// Exact chain-rule derivatives at `x`.
    pub fn derivatives(&self, x: f64) -> Derivatives {
        let d = &self.data;
        let s = &self.state;
        let y = x - s.phi;
        let dh = self.step.derivative(-y);
        let r = self.kernel.correction(y, self.eps);
        let dr = self.kernel.correction_dx(y, self.eps);
        let dl = self.kernel.delta(y, self.eps);
        let ddl = self.kernel.delta_dx(y, self.eps);
        let mut u_t = Complex64::new(d.u1 * s.phi_dot * dh, 0.0) - s.p * (s.phi_dot * dr);
        if r != 0.0 {
            u_t += s.p_dot * r;
        }
        Derivatives {
            u_t,
            u_x: Complex64::new(-d.u1 * dh, 0.0) + s.p * dr,
            sigma_t: d.sigma1 * s.phi_dot * dh + s.e_dot * dl - s.e * s.phi_dot * ddl,
            sigma_x: -d.sigma1 * dh + s.e * ddl,
        }
    }

    /// Quadrature breakpoints in `x`.
    pub fn breakpoints(&self) -> Vec<f64> {
        let phi = self.state.phi;
        let mut pts: Vec<f64> = self.step.breakpoints().into_iter().map(|xi| phi - xi).collect();
        pts.extend(self.kernel.correction_breakpoints(self.eps).into_iter().map(|y| phi + y));
        pts.extend(self.kernel.delta_breakpoints(self.eps).into_iter().map(|y| phi + y));
        pts
    }

    /// The band `[φ - 4ε, φ + 4ε]` outside which the fields are constant.
    pub fn support(&self) -> (f64, f64) {
        (self.state.phi - 4.0 * self.eps, self.state.phi + 4.0 * self.eps)
    }
}
