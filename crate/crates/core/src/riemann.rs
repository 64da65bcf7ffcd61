//! Classical Riemann solver for the strictly hyperbolic system (`k > 0`).
//!
//! The wave curves through a state are straight lines of slope `±k` in the
//! `(u, σ)` plane: family 1 keeps `σ - ku` fixed, family 2 keeps `σ + ku`
//! fixed. A classical solution is two waves separated by the intersection
//! state. When the two waves would cross and the data are overcompressive,
//! the solution is the δ-shock of [`crate::dynamics`] instead.

use serde::Serialize;

use crate::ansatz::{RiemannJumpData, SingularSolution};
use crate::dynamics::overcompressivity;
use crate::error::{Error, Result};
use crate::pairing::{fmt_num, TestFunction};

/// Relative size below which a wave is treated as absent.
pub const ZERO_STRENGTH_TOL: f64 = 1e-10;

/// A state `(u, σ)`.
pub type State = (f64, f64);

/// One elementary wave in the similarity variable `ξ = x/t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum Wave {
    Shock { speed: f64 },
    Rarefaction { head: f64, tail: f64 },
    Absent,
}

impl Wave {
    /// Smallest and largest `ξ` occupied by the wave.
    pub fn span(&self) -> Option<(f64, f64)> {
        match *self {
            Wave::Shock { speed } => Some((speed, speed)),
            Wave::Rarefaction { head, tail } => Some((head, tail)),
            Wave::Absent => None,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Wave::Shock { .. } => "shock",
            Wave::Rarefaction { .. } => "rarefaction",
            Wave::Absent => "absent",
        }
    }
}

/// Which kind of solution the data admit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Regime {
    Classical,
    DeltaShock,
    NoSolutionConstructed,
}

impl Regime {
    pub fn label(&self) -> &'static str {
        match self {
            Regime::Classical => "classical",
            Regime::DeltaShock => "delta-shock",
            Regime::NoSolutionConstructed => "no-solution-constructed",
        }
    }
}

/// Region of the `(x, t)` half plane for a classical solution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Region {
    Left,
    Fan1,
    Star,
    Fan2,
    Right,
}

impl Region {
    pub fn label(&self) -> &'static str {
        match self {
            Region::Left => "left",
            Region::Fan1 => "fan1",
            Region::Star => "star",
            Region::Fan2 => "fan2",
            Region::Right => "right",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RiemannSolution {
    pub left: State,
    pub right: State,
    pub k: f64,
    pub star: State,
    pub wave1: Wave,
    pub wave2: Wave,
    pub regime: Regime,
}

/// Intersection of the family-1 line through `left` with the family-2 line
/// through `right`.
pub fn intermediate_state(left: State, right: State, k: f64) -> Result<State> {
    if !(k.is_finite() && k > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "the classical solver needs k > 0, got {k}; use the singular solution for k = 0"
        )));
    }
    let u = 0.5 * (left.0 + right.0) + (right.1 - left.1) / (2.0 * k);
    Ok((u, left.1 + k * (u - left.0)))
}

fn is_zero_strength(a: f64, b: f64) -> bool {
    (a - b).abs() <= ZERO_STRENGTH_TOL * a.abs().max(b.abs()).max(1.0)
}

/// Chooses shock or rarefaction for each family and sets the regime.
pub fn classify_waves(left: State, right: State, k: f64, star: State) -> RiemannSolution {
    let (ul, us, ur) = (left.0, star.0, right.0);
    let wave1 = if is_zero_strength(us, ul) {
        Wave::Absent
    } else if us > ul {
        Wave::Rarefaction { head: ul - k, tail: us - k }
    } else {
        Wave::Shock { speed: 0.5 * (ul + us) - k }
    };
    let wave2 = if is_zero_strength(ur, us) {
        Wave::Absent
    } else if ur > us {
        Wave::Rarefaction { head: us + k, tail: ur + k }
    } else {
        Wave::Shock { speed: 0.5 * (us + ur) + k }
    };
    let ordered = match (wave1.span(), wave2.span()) {
        (Some((_, fast1)), Some((slow2, _))) => fast1 <= slow2,
        _ => true,
    };
    let regime = if ordered {
        Regime::Classical
    } else if delta_regime_test(left, right, k) {
        Regime::DeltaShock
    } else {
        Regime::NoSolutionConstructed
    };
    RiemannSolution { left, right, k, star, wave1, wave2, regime }
}

/// Full solve: intermediate state, wave types and regime.
pub fn solve_riemann(left: State, right: State, k: f64) -> Result<RiemannSolution> {
    let star = intermediate_state(left, right, k)?;
    Ok(classify_waves(left, right, k, star))
}

/// Overcompressivity of the data with `u1 = u_L - u_R`, `σ1 = σ_L - σ_R`.
pub fn delta_regime_test(left: State, right: State, k: f64) -> bool {
    match RiemannJumpData::from_states(left, right, 0.0, k) {
        Ok(data) => overcompressivity(&data).admissible,
        Err(_) => false,
    }
}

impl RiemannSolution {
    /// Self-similar value at `(x, t)`, `t > 0`, and the region it lies in.
    pub fn eval(&self, x: f64, t: f64) -> Result<(f64, f64, Region)> {
        eval_riemann(self, x, t)
    }

    /// CSV with columns `xi,u,sigma,region` over the given `ξ` values.
    pub fn profile_csv(&self, xis: &[f64]) -> Result<String> {
        let mut out = String::from("xi,u,sigma,region\n");
        for &xi in xis {
            let (u, s, r) = eval_riemann(self, xi, 1.0)?;
            out.push_str(&format!("{},{},{},{}\n", fmt_num(xi), fmt_num(u), fmt_num(s), r.label()));
        }
        Ok(out)
    }
}

/// Evaluates a classical solution at `ξ = x/t`.
pub fn eval_riemann(solution: &RiemannSolution, x: f64, t: f64) -> Result<(f64, f64, Region)> {
    if solution.regime != Regime::Classical {
        return Err(Error::NotApplicable(format!(
            "pointwise evaluation needs a classical solution, regime is {}",
            solution.regime.label()
        )));
    }
    if !(t.is_finite() && t > 0.0) {
        return Err(Error::InvalidParameter(format!("time must be positive, got {t}")));
    }
    let xi = x / t;
    let k = solution.k;
    let (ul, sl) = solution.left;
    let (ur, sr) = solution.right;
    let (us, ss) = solution.star;
    match solution.wave1 {
        Wave::Shock { speed } if xi < speed => return Ok((ul, sl, Region::Left)),
        Wave::Rarefaction { head, .. } if xi < head => return Ok((ul, sl, Region::Left)),
        Wave::Rarefaction { tail, .. } if xi < tail => {
            let u = xi + k;
            return Ok((u, sl + k * (u - ul), Region::Fan1));
        }
        Wave::Absent => {
            if let Some((slow2, _)) = solution.wave2.span() {
                if xi < slow2 {
                    return Ok((ul, sl, Region::Left));
                }
            }
        }
        _ => {}
    }
    match solution.wave2 {
        Wave::Shock { speed } if xi < speed => Ok((us, ss, Region::Star)),
        Wave::Rarefaction { head, .. } if xi < head => Ok((us, ss, Region::Star)),
        Wave::Rarefaction { tail, .. } if xi < tail => {
            let u = xi - k;
            Ok((u, ss - k * (u - us), Region::Fan2))
        }
        _ => Ok((ur, sr, Region::Right)),
    }
}

/// One row of a regime sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRow {
    pub u1: f64,
    pub sigma1: f64,
    pub k: f64,
    pub regime: Regime,
    pub u_star: f64,
    pub sigma_star: f64,
}

/// Regimes over a `(u1, σ1, k)` grid with right state `(u0, σ0)`.
pub fn regime_sweep(u0: f64, sigma0: f64, u1s: &[f64], sigma1s: &[f64], ks: &[f64]) -> Result<Vec<SweepRow>> {
    let mut rows = Vec::with_capacity(u1s.len() * sigma1s.len() * ks.len());
    for &k in ks {
        for &u1 in u1s {
            for &sigma1 in sigma1s {
                let sol = solve_riemann((u0 + u1, sigma0 + sigma1), (u0, sigma0), k)?;
                rows.push(SweepRow { u1, sigma1, k, regime: sol.regime, u_star: sol.star.0, sigma_star: sol.star.1 });
            }
        }
    }
    Ok(rows)
}

/// CSV with columns `u1,sigma1,k,regime,u_star,sigma_star`.
pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from("u1,sigma1,k,regime,u_star,sigma_star\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            fmt_num(r.u1),
            fmt_num(r.sigma1),
            fmt_num(r.k),
            r.regime.label(),
            fmt_num(r.u_star),
            fmt_num(r.sigma_star)
        ));
    }
    out
}

/// Difference between the weak limits for parameter `k` and for `k = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KGap {
    pub k: f64,
    /// `⟨σ_k(·,t) - σ_0(·,t), φ⟩`.
    pub sigma_gap: f64,
    /// `⟨u_k(·,t) - u_0(·,t), φ⟩`.
    pub u_gap: f64,
    /// `-k²u1 t φ(front)`.
    pub exact: f64,
}

/// Pairs the singular solutions for `k` and `k = 0` built from the same
/// jumps and subtracts them.
pub fn k_limit_gap(data: &RiemannJumpData, k: f64, t: f64, phi_test: &TestFunction) -> Result<KGap> {
    if !(k.is_finite() && k > 0.0) {
        return Err(Error::InvalidParameter(format!("k must be positive, got {k}")));
    }
    let with_k = data.with_k(k)?;
    let without = data.with_k(0.0)?;
    for d in [&with_k, &without] {
        if let Some(msg) = overcompressivity(d).violation() {
            return Err(Error::Inadmissible(format!("k = {}: {msg}", d.k)));
        }
    }
    // The limit pairings do not involve the kernel, so any positive ω₀ works.
    let a = SingularSolution::new(with_k, 1.0)?;
    let b = SingularSolution::new(without, 1.0)?;
    let (ua, sa) = a.pairing(t, phi_test)?;
    let (ub, sb) = b.pairing(t, phi_test)?;
    let exact = -k * k * data.u1 * t * phi_test.value(a.phi(t));
    Ok(KGap { k, sigma_gap: sa - sb, u_gap: ua - ub, exact })
}

/// Gaps along a sequence of `k` with the least-squares slope of
/// `log|σ-gap|` against `log k`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KLimitStudy {
    pub gaps: Vec<KGap>,
    pub order: f64,
}

pub fn k_limit_study(data: &RiemannJumpData, ks: &[f64], t: f64, phi_test: &TestFunction) -> Result<KLimitStudy> {
    if ks.len() < 2 {
        return Err(Error::InvalidGrid(format!("need at least two k values, got {}", ks.len())));
    }
    let gaps = ks.iter().map(|&k| k_limit_gap(data, k, t, phi_test)).collect::<Result<Vec<_>>>()?;
    let pts: Vec<(f64, f64)> = gaps.iter().map(|g| (g.k.ln(), g.sigma_gap.abs().ln())).collect();
    if pts.iter().any(|(_, y)| !y.is_finite()) {
        return Err(Error::NotApplicable("σ-gap vanishes; no order to fit".into()));
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    Ok(KLimitStudy { gaps, order: sxy / sxx })
}

impl KLimitStudy {
    /// CSV with columns `k,sigma_gap,u_gap,exact_gap`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("k,sigma_gap,u_gap,exact_gap\n");
        for g in &self.gaps {
            out.push_str(&format!("{},{},{},{}\n", fmt_num(g.k), fmt_num(g.sigma_gap), fmt_num(g.u_gap), fmt_num(g.exact)));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn worked_example() {
        let sol = solve_riemann((2.0, 1.0), (0.0, 0.0), 1.0).unwrap();
        assert_eq!(sol.star, (0.5, -0.5));
        assert_eq!(sol.wave1, Wave::Shock { speed: 0.25 });
        assert_eq!(sol.wave2, Wave::Shock { speed: 1.25 });
        assert_eq!(sol.regime, Regime::Classical);
        assert_eq!(sol.eval(0.5, 1.0).unwrap(), (0.5, -0.5, Region::Star));
    }

    #[test]
    fn constant_data() {
        let sol = solve_riemann((1.0, 2.0), (1.0, 2.0), 0.5).unwrap();
        assert_eq!(sol.star, (1.0, 2.0));
        assert_eq!((sol.wave1, sol.wave2), (Wave::Absent, Wave::Absent));
        assert_eq!(sol.eval(-3.0, 1.0).unwrap().0, 1.0);
    }

    #[test]
    fn refuses_zero_k() {
        assert!(intermediate_state((1.0, 1.0), (0.0, 0.0), 0.0).is_err());
    }

    #[test]
    fn rarefactions_stay_on_lines() {
        let k = 0.5;
        let left = (0.0, 0.0);
        let star = (1.0, k);
        let right = (2.0, star.1 - k * (2.0 - star.0));
        let sol = solve_riemann(left, right, k).unwrap();
        assert!(matches!(sol.wave1, Wave::Rarefaction { .. }));
        assert!(matches!(sol.wave2, Wave::Rarefaction { .. }));
        let (u, s, r) = sol.eval(0.2, 1.0).unwrap();
        assert_eq!(r, Region::Fan1);
        assert!((s - (left.1 + k * (u - left.0))).abs() < 1e-12);
        let (u, s, r) = sol.eval(2.0, 1.0).unwrap();
        assert_eq!(r, Region::Fan2);
        assert!((s - (sol.star.1 - k * (u - sol.star.0))).abs() < 1e-12);
    }

    #[test]
    fn crossing_waves_fall_to_delta_regime() {
        let sol = solve_riemann((2.0, 0.0), (0.0, 0.0), 0.1).unwrap();
        assert_eq!(sol.regime, Regime::DeltaShock);
        assert!(matches!(sol.eval(0.0, 1.0), Err(Error::NotApplicable(_))));
        assert!(delta_regime_test((2.0, 0.0), (0.0, 0.0), 0.1));
        assert!(!delta_regime_test((0.0, 0.0), (2.0, 0.0), 0.1));
        assert!(!delta_regime_test((0.2, 0.0), (0.0, 0.0), 0.1));
    }

    #[test]
    fn gap_example() {
        let d = RiemannJumpData::new(0.0, 2.0, 0.0, 0.5, 0.1, 0.0).unwrap();
        let phi = TestFunction::plain(0.75, 1.0);
        let g = k_limit_gap(&d, 0.1, 1.0, &phi).unwrap();
        assert!((g.sigma_gap + 0.02).abs() < 1e-12, "{}", g.sigma_gap);
        assert_eq!(g.u_gap, 0.0);
    }
}
