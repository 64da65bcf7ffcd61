//! Singular-front dynamics.
//!
//! Zeroing the `δ` and `δ'` coefficients of the residuals leaves ODEs with
//! constant right-hand sides, so the front position and the amplitude of
//! the stress concentration are linear in `t` and everything here is closed
//! form. Also collects the admissibility window and the jump relations
//! obtained from Volpert's product.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::ansatz::{RiemannJumpData, SmoothAnsatz};
use crate::error::{Error, Result};
use crate::kernels::MollifierKernel;
use crate::pairing::{extrapolate, pair, validate_grid, Piecewise, TestFunction};

/// Front speed `φ̇ = ([u²/2] - [σ])/[u] = u0 + u1/2 - σ1/u1`. Does not
/// depend on `k`.
pub fn front_speed(data: &RiemannJumpData) -> Result<f64> {
    if data.u1 == 0.0 {
        return Err(Error::DegenerateJump);
    }
    Ok(data.u0 + 0.5 * data.u1 - data.sigma1 / data.u1)
}

/// Growth rate of the concentrated stress, `ė = σ1²/u1 - k²u1`.
pub fn e_rate(data: &RiemannJumpData) -> Result<f64> {
    if data.u1 == 0.0 {
        return Err(Error::DegenerateJump);
    }
    Ok(data.sigma1 * data.sigma1 / data.u1 - data.k * data.k * data.u1)
}

/// Principal root of `p² = 2e/ω₀`: `p ≥ 0` for `e ≥ 0`, `p ∈ iℝ₊` otherwise.
pub fn amplitude_root(e: f64, omega0: f64) -> Complex64 {
    let r = 2.0 * e / omega0;
    if r >= 0.0 {
        Complex64::new(r.sqrt(), 0.0)
    } else {
        Complex64::new(0.0, (-r).sqrt())
    }
}

/// Front quantities at one instant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FrontState {
    pub t: f64,
    pub phi: f64,
    pub phi_dot: f64,
    pub e: f64,
    pub e_dot: f64,
    pub p: Complex64,
    pub p_dot: Complex64,
}

/// Anything that can supply the front quantities entering the ansatz.
pub trait Front: Sync {
    fn state(&self, t: f64) -> FrontState;
}

/// Closed-form solution of the front ODEs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrontTrajectory {
    pub phi_dot: f64,
    pub e_rate: f64,
    pub e0: f64,
    pub omega0: f64,
}

impl FrontTrajectory {
    pub fn phi(&self, t: f64) -> f64 {
        self.phi_dot * t
    }

    pub fn e(&self, t: f64) -> f64 {
        self.e_rate * t + self.e0
    }

    pub fn p(&self, t: f64) -> Complex64 {
        amplitude_root(self.e(t), self.omega0)
    }

    /// `ṗ = ė/(ω₀p)`, taken as 0 while both `p` and `ė` vanish. Infinite at
    /// an isolated sign change of `e`.
    pub fn p_dot(&self, t: f64) -> Complex64 {
        let p = self.p(t);
        if self.e_rate == 0.0 {
            Complex64::new(0.0, 0.0)
        } else if p == Complex64::new(0.0, 0.0) {
            Complex64::new(f64::INFINITY, 0.0)
        } else {
            Complex64::new(self.e_rate / self.omega0, 0.0) / p
        }
    }

    /// `½p²ω₀ - e`, which vanishes identically.
    pub fn defect(&self, t: f64) -> Complex64 {
        let p = self.p(t);
        0.5 * p * p * self.omega0 - self.e(t)
    }

    pub fn table(&self, times: &[f64]) -> Vec<TrajectoryRow> {
        times
            .iter()
            .map(|&t| {
                let p = self.p(t);
                TrajectoryRow { t, phi: self.phi(t), e: self.e(t), re_p: p.re, im_p: p.im }
            })
            .collect()
    }

    /// CSV with columns `t,phi,e,re_p,im_p`.
    pub fn to_csv(&self, times: &[f64]) -> String {
        use crate::pairing::fmt_num;
        let mut out = String::from("t,phi,e,re_p,im_p\n");
        for r in self.table(times) {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                fmt_num(r.t),
                fmt_num(r.phi),
                fmt_num(r.e),
                fmt_num(r.re_p),
                fmt_num(r.im_p)
            ));
        }
        out
    }
}

impl Front for FrontTrajectory {
    fn state(&self, t: f64) -> FrontState {
        FrontState {
            t,
            phi: self.phi(t),
            phi_dot: self.phi_dot,
            e: self.e(t),
            e_dot: self.e_rate,
            p: self.p(t),
            p_dot: self.p_dot(t),
        }
    }
}

/// One row of a trajectory table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrajectoryRow {
    pub t: f64,
    pub phi: f64,
    pub e: f64,
    pub re_p: f64,
    pub im_p: f64,
}

/// Builds the trajectory with `φ(0) = 0` and `e(0) = e0`.
pub fn solve_front(data: &RiemannJumpData, omega0: f64) -> Result<FrontTrajectory> {
    if !(omega0.is_finite() && omega0 > 0.0) {
        return Err(Error::InvalidParameter(format!("omega0 must be positive, got {omega0}")));
    }
    Ok(FrontTrajectory { phi_dot: front_speed(data)?, e_rate: e_rate(data)?, e0: data.e0, omega0 })
}

/// Outcome of the overcompressivity test.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Overcompressivity {
    pub admissible: bool,
    /// `u1 - 2k`, `(u1/2 - k) - σ1/u1`, `σ1/u1 + (u1/2 - k)`; all must be
    /// strictly positive.
    pub margins: [f64; 3],
}

impl Overcompressivity {
    pub const MARGIN_NAMES: [&'static str; 3] = ["u1 > 2k", "sigma1/u1 < u1/2 - k", "sigma1/u1 > -(u1/2 - k)"];

    /// Description of the first violated margin.
    pub fn violation(&self) -> Option<String> {
        self.margins
            .iter()
            .zip(Self::MARGIN_NAMES)
            .find(|(m, _)| m.is_nan() || **m <= 0.0)
            .map(|(m, name)| format!("overcompressivity margin `{name}` violated (slack {m})"))
    }
}

/// Checks that all characteristics run into the front. At `k = 0` the
/// same three margins reduce to `u1 > 0` and `|σ1/u1| < u1/2`.
pub fn overcompressivity(data: &RiemannJumpData) -> Overcompressivity {
    let half = 0.5 * data.u1 - data.k;
    let first = data.u1 - 2.0 * data.k;
    if data.u1 == 0.0 {
        return Overcompressivity { admissible: false, margins: [first, f64::NEG_INFINITY, f64::NEG_INFINITY] };
    }
    let ratio = data.sigma1 / data.u1;
    let margins = [first, half - ratio, ratio + half];
    Overcompressivity { admissible: margins.iter().all(|m| *m > 0.0), margins }
}

/// Residuals of the two jump relations across a jump moving at speed `s`,
/// with the stress product understood in Volpert's sense:
/// `r1 = -s[u] + [u²/2] - [σ]`, `r2 = -s[σ] + ½(uL + uR)[σ]`.
pub fn volpert_relations(u_l: f64, u_r: f64, sigma_l: f64, sigma_r: f64, s: f64) -> (f64, f64) {
    let du = u_l - u_r;
    let ds = sigma_l - sigma_r;
    let r1 = -s * du + 0.5 * (u_l * u_l - u_r * u_r) - ds;
    let r2 = -s * ds + 0.5 * (u_l + u_r) * ds;
    (r1, r2)
}

/// Smallest value of `max(|r1|, |r2|)` over `n` equispaced speeds in
/// `[lo, hi]`, with the minimizing speed.
pub fn volpert_floor(u_l: f64, u_r: f64, sigma_l: f64, sigma_r: f64, lo: f64, hi: f64, n: usize) -> (f64, f64) {
    let n = n.max(2);
    (0..n)
        .map(|i| {
            let s = lo + (hi - lo) * i as f64 / (n - 1) as f64;
            let (r1, r2) = volpert_relations(u_l, u_r, sigma_l, sigma_r, s);
            (r1.abs().max(r2.abs()), s)
        })
        .fold((f64::INFINITY, f64::NAN), |best, cur| if cur.0 < best.0 { cur } else { best })
}

/// Weak limit of `u ∂σ/∂x` along the regularized shock, divided by the
/// test function's value at the front: the coefficient of `δ(x - φ(t))`.
///
/// Only defined for pure shocks (`e0 = 0` and `ė = 0`).
pub fn volpert_product_pairing(
    data: &RiemannJumpData,
    kernel: &MollifierKernel,
    t: f64,
    phi_test: &TestFunction,
    grid: &[f64],
) -> Result<f64> {
    let rate = e_rate(data)?;
    let rate_scale = data.sigma1 * data.sigma1 / data.u1.abs() + data.k * data.k * data.u1.abs();
    if data.e0 != 0.0 || rate.abs() > 1e-12 * rate_scale {
        return Err(Error::NotApplicable(format!(
            "Volpert product identity needs a pure shock (e0 = 0, e_rate = 0), got e0 = {}, e_rate = {rate}",
            data.e0
        )));
    }
    validate_grid(grid, 3)?;
    let front = solve_front(data, kernel.omega0())?;
    let at_front = phi_test.value(front.phi(t));
    if at_front == 0.0 {
        return Err(Error::InvalidParameter("test function vanishes at the front".into()));
    }
    let ansatz = SmoothAnsatz::new(*data, front, kernel.clone())?;
    let values = grid
        .iter()
        .map(|&eps| {
            let slice = ansatz.slice(t, eps)?;
            let f = Piecewise::new(
                |x| {
                    let (u, _) = slice.fields(x);
                    u.re * slice.derivatives(x).sigma_x
                },
                slice.breakpoints(),
                Some(slice.support()),
            );
            pair(&f, phi_test)
        })
        .collect::<Result<Vec<f64>>>()?;
    let ex = extrapolate(grid, &values)?;
    Ok(ex.limit / at_front)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn worked(k: f64) -> RiemannJumpData {
        RiemannJumpData::new(0.0, 2.0, 0.0, 0.5, 0.1, k).unwrap()
    }

    #[test]
    fn worked_trajectory() {
        let tr = solve_front(&worked(0.1), 5.0 / 7.0).unwrap();
        assert!((tr.phi(1.0) - 0.75).abs() < 1e-15);
        assert!((tr.e(1.0) - 0.205).abs() < 1e-15);
        assert!((tr.p(1.0).re - 0.574f64.sqrt()).abs() < 1e-15);
        assert_eq!(tr.p(1.0).im, 0.0);
    }

    #[test]
    fn speed_examples() {
        let d = RiemannJumpData::new(0.0, 2.0, 0.0, 0.0, 0.0, 0.0).unwrap();
        assert_eq!(front_speed(&d).unwrap(), 1.0);
        assert_eq!(front_speed(&worked(0.1)).unwrap(), 0.75);
        assert!((e_rate(&worked(0.1)).unwrap() - 0.105).abs() < 1e-15);
    }

    #[test]
    fn negative_amplitude_takes_imaginary_branch() {
        let tr = FrontTrajectory { phi_dot: 0.0, e_rate: -1.0, e0: 0.5, omega0: 0.5 };
        let p = tr.p(1.0);
        assert_eq!(p.re, 0.0);
        assert!(p.im > 0.0);
        assert!(tr.defect(1.0).norm() < 1e-15);
        assert!(tr.p_dot(1.0).is_finite());
    }

    #[test]
    fn pure_shock_has_no_correction() {
        let d = RiemannJumpData::new(0.0, 2.0, 0.0, 0.0, 0.0, 0.0).unwrap();
        let tr = solve_front(&d, 5.0 / 7.0).unwrap();
        for t in [0.0, 1.0, 3.0] {
            assert_eq!(tr.e(t), 0.0);
            assert_eq!(tr.p(t), Complex64::new(0.0, 0.0));
            assert_eq!(tr.p_dot(t), Complex64::new(0.0, 0.0));
        }
    }

    #[test]
    fn overcompressivity_examples() {
        assert!(overcompressivity(&worked(0.1)).admissible);
        assert!(overcompressivity(&worked(0.0)).admissible);
        let back = RiemannJumpData::new(0.0, -1.0, 0.0, 0.0, 0.0, 0.0).unwrap();
        let oc = overcompressivity(&back);
        assert!(!oc.admissible);
        assert!(oc.violation().unwrap().contains("u1 > 2k"));
    }

    #[test]
    fn volpert_examples() {
        assert_eq!(volpert_relations(2.0, 0.0, 1.0, 1.0, 1.0), (0.0, 0.0));
        assert_eq!(volpert_relations(2.0, 0.0, 1.0, 0.0, 1.0), (-1.0, 0.0));
        let (floor, _) = volpert_floor(2.0, 0.0, 1.0, 0.0, -10.0, 10.0, 2001);
        assert!(floor > 0.1, "{floor}");
    }

    #[test]
    fn volpert_pairing_requires_shock() {
        let k = MollifierKernel::quartic();
        let err = volpert_product_pairing(&worked(0.1), &k, 1.0, &TestFunction::plain(0.75, 1.0), &[0.1, 0.05, 0.025]);
        assert!(matches!(err, Err(Error::NotApplicable(_))));
    }
}
