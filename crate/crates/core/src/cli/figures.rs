//! Data behind the two survival-probability figures, in units where `T = 1`
//! (so the `t` column is `t/T`).
//!
//! * `fig2`: sinusoidal coupling, `α = 1`, `γ₀T ∈ {1, 4}`,
//!   `ε₀T ∈ {0, π/3, 2π/3, π}`, over `[0, 6T]`;
//! * `fig3`: unsmoothed comb, `β = 0`, `ε₀T = 0`, `γ₀T = 4`, over `[0, 10T]`.

use std::f64::consts::PI;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use super::csv::{rows_from_trace, write_csv};
use crate::amplitude::{amplitude_series, AmplitudeTrace, TimeGrid};
use crate::coupling::{CouplingSpec, ModelParams};
use crate::error::{Error, Result};

/// Samples per period in every figure file.
pub const STEPS_PER_PERIOD: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Figure {
    Fig2,
    Fig3,
}

impl FromStr for Figure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fig2" => Ok(Figure::Fig2),
            "fig3" => Ok(Figure::Fig3),
            other => Err(Error::BadParameter(format!(
                "unknown figure `{other}` (expected fig2 or fig3)"
            ))),
        }
    }
}

impl fmt::Display for Figure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Figure::Fig2 => "fig2",
            Figure::Fig3 => "fig3",
        })
    }
}

/// One curve of a figure.
#[derive(Debug, Clone)]
pub struct FigureSeries {
    /// File stem, e.g. `fig2_g4_eps2pi3`.
    pub name: String,
    pub params: ModelParams,
    pub grid: TimeGrid,
}

impl FigureSeries {
    pub fn compute(&self) -> Result<AmplitudeTrace> {
        amplitude_series(&self.params, &self.grid)
    }
}

pub fn figure_series(figure: Figure) -> Vec<FigureSeries> {
    let dt = 1.0 / STEPS_PER_PERIOD as f64;
    match figure {
        Figure::Fig2 => {
            let grid = TimeGrid::new(dt, 6 * STEPS_PER_PERIOD).expect("static grid");
            let phases = [
                ("0", 0.0),
                ("pi3", PI / 3.0),
                ("2pi3", 2.0 * PI / 3.0),
                ("pi", PI),
            ];
            [1.0, 4.0]
                .into_iter()
                .flat_map(|gamma0| {
                    phases.iter().map(move |(label, eps0)| FigureSeries {
                        name: format!("fig2_g{gamma0}_eps{label}"),
                        params: ModelParams::new(
                            CouplingSpec::Sinusoidal {
                                gamma0,
                                period: 1.0,
                                alpha: 1.0,
                            },
                            *eps0,
                        )
                        .expect("static parameters"),
                        grid,
                    })
                })
                .collect()
        }
        Figure::Fig3 => vec![FigureSeries {
            name: "fig3_comb_g4".into(),
            params: ModelParams::new(
                CouplingSpec::ExpComb {
                    gamma0: 4.0,
                    period: 1.0,
                    beta: 0.0,
                },
                0.0,
            )
            .expect("static parameters"),
            grid: TimeGrid::new(dt, 10 * STEPS_PER_PERIOD).expect("static grid"),
        }],
    }
}

/// Writes one CSV per curve into `dir` and returns the paths.
pub fn write_figure(figure: Figure, dir: &Path) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir)?;
    figure_series(figure)
        .into_iter()
        .map(|series| {
            let path = dir.join(format!("{}.csv", series.name));
            write_csv(&rows_from_trace(&series.compute()?, None), &path)?;
            Ok(path)
        })
        .collect()
}

/// Grid indices of strict local maxima of `|a|²` after `t = T`.
pub fn revivals(trace: &AmplitudeTrace, period: f64) -> Vec<usize> {
    let p: Vec<f64> = trace.values().iter().map(|a| a.norm_sqr()).collect();
    (1..p.len().saturating_sub(1))
        .filter(|&k| trace.grid().time(k) > period && p[k] > p[k - 1] && p[k] > p[k + 1])
        .collect()
}
