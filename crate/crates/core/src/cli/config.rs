//! Experiment configuration (JSON).
//!
//! ```json
//! {
//!   "model": {
//!     "coupling": {"kind": "sinusoidal", "gamma0": 1.0, "period_T": 1.0, "alpha": 1.0},
//!     "eps0": 0.0
//!   },
//!   "grid": {"dt": 0.001, "t_max": 3.0},
//!   "backend": "series",
//!   "backend_options": {"modes_K": 2000},
//!   "outputs": {"csv_path": "out.csv", "include_rates": true, "include_defect": false}
//! }
//! ```
//!
//! `backend_options` and `outputs` may be omitted. Unset quadrature fields
//! fall back to [`LaplaceOptions::auto`].

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::amplitude::{
    amplitude_laplace, amplitude_series, amplitude_volterra, build_discrete_modes, AmplitudeTrace,
    Backend, LaplaceOptions, ModeOptions, TimeGrid,
};
use crate::coupling::{CouplingSpec, ModelParams, ValidatedCoupling};
use crate::error::{Error, Result};

/// Mode count used when `modes_K` is not given.
pub const DEFAULT_MODES_K: usize = 2000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub dt: f64,
    pub t_max: f64,
}

impl GridConfig {
    pub fn to_grid(&self) -> Result<TimeGrid> {
        TimeGrid::spanning(self.dt, self.t_max)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BackendOptions {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub contour_height: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega_cutoff: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_quad: Option<usize>,
    #[serde(rename = "modes_K", default, skip_serializing_if = "Option::is_none")]
    pub modes_k: Option<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub csv_path: Option<PathBuf>,
    #[serde(default)]
    pub include_rates: bool,
    #[serde(default)]
    pub include_defect: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub model: ModelParams,
    pub grid: GridConfig,
    #[serde(default = "default_backend")]
    pub backend: Backend,
    #[serde(default)]
    pub backend_options: BackendOptions,
    #[serde(default)]
    pub outputs: OutputConfig,
}

fn default_backend() -> Backend {
    Backend::Series
}

impl ExperimentConfig {
    /// Parses and validates. Syntax and schema problems become
    /// [`Error::ConfigParse`]; a well-formed config with a physically invalid
    /// coupling keeps the coupling's own error kind.
    pub fn from_json(text: &str) -> Result<Self> {
        let value: serde_json::Value =
            serde_json::from_str(text).map_err(|e| Error::ConfigParse(e.to_string()))?;
        if let Some(coupling) = value.get("model").and_then(|m| m.get("coupling")) {
            if let Ok(spec) = serde_json::from_value::<CouplingSpec>(coupling.clone()) {
                ValidatedCoupling::try_from(spec)?;
            }
        }
        let config: Self =
            serde_json::from_value(value).map_err(|e| Error::ConfigParse(e.to_string()))?;
        config.check()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    fn check(&self) -> Result<()> {
        if !self.model.eps0.is_finite() {
            return Err(Error::BadParameter("eps0 must be finite".into()));
        }
        self.grid.to_grid().map(|_| ())
    }

    pub fn time_grid(&self) -> Result<TimeGrid> {
        self.grid.to_grid()
    }

    /// Laplace options: explicit fields override the automatic choice.
    pub fn laplace_options(&self, grid: &TimeGrid) -> LaplaceOptions {
        let auto = LaplaceOptions::auto(&self.model, grid);
        let o = &self.backend_options;
        LaplaceOptions {
            contour_height: o.contour_height.unwrap_or(auto.contour_height),
            omega_cutoff: o.omega_cutoff.unwrap_or(auto.omega_cutoff),
            n_quad: o.n_quad.unwrap_or(auto.n_quad),
        }
    }

    pub fn mode_options(&self) -> ModeOptions {
        ModeOptions::with_k(self.backend_options.modes_k.unwrap_or(DEFAULT_MODES_K))
    }

    /// Runs `backend` on the configured model and grid.
    pub fn compute(&self, backend: Backend) -> Result<AmplitudeTrace> {
        let grid = self.time_grid()?;
        match backend {
            Backend::Series => amplitude_series(&self.model, &grid),
            Backend::Volterra => amplitude_volterra(&self.model, &grid),
            Backend::Laplace => {
                Ok(amplitude_laplace(&self.model, &grid, &self.laplace_options(&grid))?.trace)
            }
            Backend::Modes => {
                let system = build_discrete_modes(&self.model, &self.mode_options())?;
                system.diagonalize()?.trace(&grid)
            }
        }
    }
}
