//! Experiment configuration.
//!
//! A TOML file with optional sections; every key has a default, so an empty
//! file (or no file) runs the worked example.

use std::path::Path;

use deltashock::ansatz::RiemannJumpData;
use deltashock::kernels::KernelKind;
use serde::Deserialize;

use crate::CliError;

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub data: DataSection,
    pub grid: GridSection,
    pub kernel: KernelSection,
    pub front: FrontSection,
    pub riemann: RiemannSection,
    pub sweep: Option<SweepSection>,
    pub k_limit: KLimitSection,
    pub replay: ReplaySection,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DataSection {
    pub u0: f64,
    pub u1: f64,
    pub sigma0: f64,
    pub sigma1: f64,
    pub e0: f64,
    pub k: f64,
}

impl Default for DataSection {
    fn default() -> Self {
        Self { u0: 0.0, u1: 2.0, sigma0: 0.0, sigma1: 0.5, e0: 0.1, k: 0.1 }
    }
}

impl DataSection {
    pub fn jump_data(&self) -> Result<RiemannJumpData, CliError> {
        RiemannJumpData::new(self.u0, self.u1, self.sigma0, self.sigma1, self.e0, self.k).map_err(CliError::from_lib)
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridSection {
    /// Explicit ε values, strictly decreasing. Overrides the dyadic range.
    pub eps: Option<Vec<f64>>,
    pub eps_max: f64,
    pub eps_min: f64,
    pub t_max: f64,
    pub t_points: usize,
}

impl Default for GridSection {
    fn default() -> Self {
        Self { eps: None, eps_max: 0.125, eps_min: 2f64.powi(-12), t_max: 1.0, t_points: 33 }
    }
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct KernelSection {
    pub kind: KernelKind,
    /// Plateau constant for the expansion check; defaults to `1/2 - σ1/u1²`.
    pub plateau: Option<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FrontSection {
    pub t_max: f64,
    pub points: usize,
}

impl Default for FrontSection {
    fn default() -> Self {
        Self { t_max: 2.0, points: 21 }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RiemannSection {
    pub left: [f64; 2],
    pub right: [f64; 2],
    pub k: f64,
    pub xi_min: f64,
    pub xi_max: f64,
    pub xi_points: usize,
}

impl Default for RiemannSection {
    fn default() -> Self {
        Self { left: [2.0, 1.0], right: [0.0, 0.0], k: 1.0, xi_min: -3.0, xi_max: 3.0, xi_points: 121 }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    pub u0: f64,
    pub sigma0: f64,
    pub u1: Vec<f64>,
    pub sigma1: Vec<f64>,
    pub k: Vec<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct KLimitSection {
    pub ks: Vec<f64>,
    pub t: f64,
    pub halfwidth: f64,
}

impl Default for KLimitSection {
    fn default() -> Self {
        Self { ks: vec![0.1, 0.05, 0.025], t: 1.0, halfwidth: 1.0 }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ReplaySection {
    pub samples: usize,
    pub tolerance: f64,
}

impl Default for ReplaySection {
    fn default() -> Self {
        Self { samples: 20, tolerance: 1e-3 }
    }
}

impl Config {
    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| CliError::Usage(format!("bad config {}: {e}", path.display())))
    }

    /// The ε grid: the explicit list if given, otherwise halvings from
    /// `eps_max` down to `eps_min`.
    pub fn eps_grid(&self) -> Result<Vec<f64>, CliError> {
        let grid = match &self.grid.eps {
            Some(list) => list.clone(),
            None => {
                let (hi, lo) = (self.grid.eps_max, self.grid.eps_min);
                if !(hi.is_finite() && lo.is_finite() && lo > 0.0 && hi > lo) {
                    return Err(CliError::Usage(format!("need 0 < eps_min < eps_max, got {lo} and {hi}")));
                }
                let mut g = vec![hi];
                while g[g.len() - 1] * 0.5 >= lo * (1.0 - 1e-12) {
                    g.push(g[g.len() - 1] * 0.5);
                }
                g
            }
        };
        deltashock::pairing::validate_grid(&grid, 5).map_err(|e| CliError::Usage(e.to_string()))?;
        Ok(grid)
    }
}
