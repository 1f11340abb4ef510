use std::path::{Path, PathBuf};

use cusplab::models::ModelParams;
use cusplab::propagate::{GridKind, GridSpec};
use cusplab::series::DEFAULT_RAY_ANGLE;
use cusplab::verify::VerifyOptions;
use cusplab::{Error, Result};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scenario {
    FreeVaporized,
    HydrogenField,
    DeltaWellField,
    Synthetic,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub scenario: Scenario,
    #[serde(default)]
    pub params: ModelParams,
    /// Falls back to the scenario default when absent.
    #[serde(default)]
    pub grid: Option<GridSpec>,
    #[serde(default)]
    pub outputs: Option<PathBuf>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub figure1: Option<Figure1Options>,
    #[serde(default)]
    pub verify: Option<VerifyOptions>,
    #[serde(default)]
    pub series: Option<SeriesOptions>,
    #[serde(default)]
    pub borel: Option<BorelOptions>,
    #[serde(default)]
    pub synthetic: Option<SyntheticOptions>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Figure1Options {
    pub times: Vec<f64>,
    pub radii: Vec<f64>,
}

impl Default for Figure1Options {
    fn default() -> Self {
        // 60 log-spaced radii on [0.01, 20]
        let radii = (0..60).map(|k| 0.01 * 2000f64.powf(k as f64 / 59.0)).collect();
        Figure1Options { times: vec![0.0, 0.2, 0.5, 1.0], radii }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeriesOptions {
    /// Highest TE order in reduced variables.
    pub m_max: usize,
    /// Coefficients kept in the c₂-branch asymptotic series.
    pub terms: usize,
}

impl Default for SeriesOptions {
    fn default() -> Self {
        SeriesOptions { m_max: 4, terms: 40 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BorelOptions {
    #[serde(default)]
    pub coefficients: Option<PathBuf>,
    #[serde(default = "default_radii")]
    pub radii: Vec<f64>,
    #[serde(default = "default_pade")]
    pub pade_order: usize,
    #[serde(default = "default_ray")]
    pub ray_angle: f64,
}

fn default_radii() -> Vec<f64> {
    vec![1.0, 2.0, 5.0, 10.0]
}
fn default_pade() -> usize {
    10
}
fn default_ray() -> f64 {
    DEFAULT_RAY_ANGLE
}

impl Default for BorelOptions {
    fn default() -> Self {
        BorelOptions { coefficients: None, radii: default_radii(), pade_order: default_pade(), ray_angle: default_ray() }
    }
}

/// Dipole `A t^ν e^{-ηt}` plus uniform noise in `[-noise, noise]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SyntheticOptions {
    pub amplitude: f64,
    pub exponent: f64,
    pub damping: f64,
    pub noise: f64,
    pub dt: f64,
    pub t_max: f64,
    /// Time window `[a, b]` for the power-law fit.
    pub fit_window: [f64; 2],
    pub omegas: Vec<f64>,
}

impl Default for SyntheticOptions {
    fn default() -> Self {
        SyntheticOptions {
            amplitude: 0.05,
            exponent: 4.5,
            damping: 0.1,
            noise: 0.0,
            dt: 1.0 / 2048.0,
            t_max: 600.0,
            fit_window: [0.01, 0.1],
            omegas: (0..=16).map(|k| 20.0 + 5.0 * k as f64).collect(),
        }
    }
}

impl RunConfig {
    pub fn default_for(scenario: Scenario) -> Self {
        let params = match scenario {
            Scenario::HydrogenField | Scenario::DeltaWellField => ModelParams::hydrogen(1.0, 0.01),
            _ => ModelParams::default(),
        };
        RunConfig {
            scenario,
            params,
            grid: None,
            outputs: None,
            seed: 0,
            figure1: None,
            verify: None,
            series: None,
            borel: None,
            synthetic: None,
        }
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        let cfg: RunConfig =
            serde_json::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Grid from the config, else the scenario default.
    pub fn grid_spec(&self) -> Option<GridSpec> {
        let radial = |extent, dt, steps, l_max| GridSpec {
            kind: GridKind::Radial,
            extent,
            spacing: 0.01,
            dt,
            steps,
            l_max,
            absorber: None,
            snapshot_every: 0,
        };
        self.grid.clone().or(match self.scenario {
            Scenario::FreeVaporized => Some(radial(40.0, 1e-4, 5000, 0)),
            Scenario::HydrogenField => Some(radial(30.0, 1e-4, 500, 2)),
            Scenario::DeltaWellField => Some(GridSpec {
                kind: GridKind::Line,
                extent: 40.0,
                spacing: 0.02,
                dt: 1e-3,
                steps: 1000,
                l_max: 0,
                absorber: None,
                snapshot_every: 0,
            }),
            Scenario::Synthetic => None,
        })
    }

    /// Scenario-specific checks; runs before any compute.
    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        let want = match self.scenario {
            Scenario::FreeVaporized | Scenario::HydrogenField => Some(GridKind::Radial),
            Scenario::DeltaWellField => Some(GridKind::Line),
            Scenario::Synthetic => None,
        };
        match (want, self.grid_spec()) {
            (None, Some(_)) => return Err(Error::Config("grid is not used by the synthetic scenario".into())),
            (Some(kind), Some(g)) => {
                g.validate()?;
                if g.kind != kind {
                    return Err(Error::Config(format!("grid.kind must be {kind:?} for this scenario").to_lowercase()));
                }
                if self.params.field != 0.0 && g.kind == GridKind::Radial && g.l_max < 1 {
                    return Err(Error::Config("grid.l_max must be ≥ 1 when params.field ≠ 0".into()));
                }
            }
            _ => {}
        }
        if self.scenario == Scenario::FreeVaporized && self.params.field != 0.0 {
            return Err(Error::Config("params.field must be 0 for free_vaporized".into()));
        }
        if let Some(f) = &self.figure1 {
            if f.times.is_empty() || f.radii.is_empty() {
                return Err(Error::Config("figure1.times and figure1.radii must be non-empty".into()));
            }
            if f.times.iter().chain(&f.radii).any(|v| !(*v >= 0.0 && v.is_finite())) {
                return Err(Error::Config("figure1.times and figure1.radii must be finite and ≥ 0".into()));
            }
        }
        if let Some(s) = &self.series {
            if s.terms < 1 {
                return Err(Error::Config("series.terms must be ≥ 1".into()));
            }
        }
        if let Some(b) = &self.borel {
            if b.radii.iter().any(|r| !(*r > 0.0 && r.is_finite())) {
                return Err(Error::Config("borel.radii must be finite and > 0".into()));
            }
        }
        if let Some(s) = &self.synthetic {
            if self.scenario != Scenario::Synthetic {
                return Err(Error::Config("synthetic section requires scenario = synthetic".into()));
            }
            let [a, b] = s.fit_window;
            let ok = s.dt > 0.0 && s.t_max > s.dt && s.noise >= 0.0 && s.damping >= 0.0 && 0.0 < a && a < b;
            if !ok || s.omegas.is_empty() {
                return Err(Error::Config(
                    "synthetic needs dt > 0, t_max > dt, noise ≥ 0, damping ≥ 0, 0 < fit_window[0] < fit_window[1] and omegas".into(),
                ));
            }
        }
        Ok(())
    }
}
