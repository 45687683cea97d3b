//! Survival amplitude `a(t)` of the excited qubit state.
//!
//! Four backends compute the same quantity by unrelated routes:
//!
//! * [`series`]: the piecewise-analytic sum of delayed exponentials times
//!   polynomials `φₙ`, built from integer-composition coefficients;
//! * [`laplace`]: quadrature of the inverse Laplace (Bromwich) integral of the
//!   resolvent `1/(ε₀ − z − Σ(z))` along a horizontal contour;
//! * [`volterra`]: time marching of the delayed convolution equation with a
//!   trapezoidal history integral;
//! * [`modes`]: exact diagonalization of a discretized bath in the
//!   one-excitation sector.
//!
//! All of them return an [`AmplitudeTrace`] on a uniform [`TimeGrid`].

pub mod arrowhead;
pub mod combinatorics;
pub mod laplace;
pub mod modes;
pub mod series;
pub mod volterra;

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use combinatorics::{b_coefficient, compositions, phi, PhiTable};
pub use laplace::{amplitude_laplace, LaplaceOptions, LaplaceTrace};
pub use modes::{
    amplitude_modes, build_discrete_modes, DiscreteModeSystem, ModeOptions, ModeSpectrum,
    ModeTrajectory,
};
pub use series::amplitude_series;
pub use volterra::amplitude_volterra;

/// Slack allowed above `|a| = 1` before a trace is rejected.
pub const NORM_SLACK: f64 = 1e-9;

/// Uniform grid `t_k = k·dt`, `k = 0..=n_steps`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimeGrid {
    dt: f64,
    n_steps: usize,
}

impl TimeGrid {
    pub fn new(dt: f64, n_steps: usize) -> Result<Self> {
        if !(dt.is_finite() && dt > 0.0) {
            return Err(Error::BadGrid(format!("dt must be positive, got {dt}")));
        }
        if n_steps == 0 {
            return Err(Error::BadGrid("n_steps must be at least 1".into()));
        }
        Ok(Self { dt, n_steps })
    }

    /// Grid with step `dt` whose last point is the largest multiple of `dt`
    /// not exceeding `t_max` (up to a relative rounding slack of 1e-9).
    pub fn spanning(dt: f64, t_max: f64) -> Result<Self> {
        if !(t_max.is_finite() && t_max > 0.0) {
            return Err(Error::BadGrid(format!(
                "t_max must be positive, got {t_max}"
            )));
        }
        if !(dt.is_finite() && dt > 0.0) || dt > t_max {
            return Err(Error::BadGrid(format!(
                "dt must lie in (0, t_max], got {dt}"
            )));
        }
        let n_steps = (t_max / dt * (1.0 + 1e-9)).floor() as usize;
        Self::new(dt, n_steps)
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn n_steps(&self) -> usize {
        self.n_steps
    }

    pub fn len(&self) -> usize {
        self.n_steps + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn time(&self, k: usize) -> f64 {
        k as f64 * self.dt
    }

    pub fn end(&self) -> f64 {
        self.time(self.n_steps)
    }

    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        (0..=self.n_steps).map(move |k| self.time(k))
    }
}

/// Which backend produced a trace.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    Series,
    Laplace,
    Volterra,
    Modes,
}

impl Backend {
    pub const ALL: [Backend; 4] = [
        Backend::Series,
        Backend::Laplace,
        Backend::Volterra,
        Backend::Modes,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Backend::Series => "series",
            Backend::Laplace => "laplace",
            Backend::Volterra => "volterra",
            Backend::Modes => "modes",
        }
    }
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Backend {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Backend::ALL
            .into_iter()
            .find(|b| b.name() == s.trim())
            .ok_or_else(|| Error::BadParameter(format!("unknown backend `{s}`")))
    }
}

/// Samples of `a(t)` on a grid, tagged with the backend that produced them.
///
/// Construction enforces `a(0) = 1` and `|a(t_k)| ≤ 1 + 1e-9`.
#[derive(Debug, Clone, PartialEq)]
pub struct AmplitudeTrace {
    grid: TimeGrid,
    values: Vec<Complex64>,
    backend: Backend,
}

impl AmplitudeTrace {
    pub fn new(grid: TimeGrid, values: Vec<Complex64>, backend: Backend) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::BadGrid(format!(
                "trace has {} samples, grid has {}",
                values.len(),
                grid.len()
            )));
        }
        if values[0] != Complex64::new(1.0, 0.0) {
            return Err(Error::InvalidAmplitude(format!(
                "a(0) must be 1, got {}",
                values[0]
            )));
        }
        for (k, v) in values.iter().enumerate() {
            let abs = v.norm();
            if !(abs <= 1.0 + NORM_SLACK) {
                return Err(Error::NormExceeded {
                    t: grid.time(k),
                    value: abs,
                });
            }
        }
        Ok(Self {
            grid,
            values,
            backend,
        })
    }

    pub fn grid(&self) -> &TimeGrid {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn backend(&self) -> Backend {
        self.backend
    }

    pub fn get(&self, k: usize) -> Option<Complex64> {
        self.values.get(k).copied()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `(t_k, a(t_k))` pairs.
    pub fn samples(&self) -> impl Iterator<Item = (f64, Complex64)> + '_ {
        self.values
            .iter()
            .enumerate()
            .map(|(k, &a)| (self.grid.time(k), a))
    }

    /// Maximum of `|a₁(t) − a₂(t)|` over a shared grid.
    pub fn max_deviation(&self, other: &AmplitudeTrace) -> Result<f64> {
        self.max_deviation_until(other, f64::INFINITY)
    }

    /// Like [`max_deviation`](Self::max_deviation), restricted to `t ≤ t_max`.
    pub fn max_deviation_until(&self, other: &AmplitudeTrace, t_max: f64) -> Result<f64> {
        if self.grid.n_steps != other.grid.n_steps
            || (self.grid.dt - other.grid.dt).abs() > 1e-15 * self.grid.dt
        {
            return Err(Error::BadGrid("traces live on different grids".into()));
        }
        Ok(self
            .samples()
            .zip(other.values.iter())
            .take_while(|((t, _), _)| *t <= t_max * (1.0 + 1e-12))
            .map(|((_, a), b)| (a - b).norm())
            .fold(0.0, f64::max))
    }
}

/// `e^{−λt}` with `λ = γ₀/2 + iε₀`.
pub(crate) fn decaying_phase(lambda: Complex64, t: f64) -> Complex64 {
    (-lambda * t).exp()
}
