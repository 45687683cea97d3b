//! Piecewise-analytic series backend.
//!
//! ```text
//! a(t) = e^{−λt} + Σ_{n=1}^{⌊t/T⌋} e^{−λ(t−nT)} φₙ(γ₀(t−nT)),   λ = γ₀/2 + iε₀
//! ```
//!
//! Every term switches on at a delay `nT`; the step function is taken as
//! `θ(0) = 1`, which is immaterial because `φₙ(0) = 0`.

use num_complex::Complex64;
use rayon::prelude::*;

use super::combinatorics::PhiTable;
use super::{decaying_phase, AmplitudeTrace, Backend, TimeGrid};
use crate::coupling::ModelParams;
use crate::error::Result;

/// Evaluator for the series at arbitrary times up to a fixed horizon.
#[derive(Debug, Clone)]
pub struct SeriesEvaluator {
    lambda: Complex64,
    gamma0: f64,
    period: Option<f64>,
    table: PhiTable,
}

impl SeriesEvaluator {
    /// Prepares the `φₙ` table for all delays up to `t_max`.
    pub fn new(params: &ModelParams, t_max: f64) -> Result<Self> {
        let period = params.period().filter(|_| params.coupling.has_memory());
        let orders = period.map_or(0, |p| delay_count(t_max, p));
        Ok(Self {
            lambda: params.decay_constant(),
            gamma0: params.gamma0(),
            period,
            table: PhiTable::new(&params.coupling, orders)?,
        })
    }

    pub fn amplitude(&self, t: f64) -> Result<Complex64> {
        let mut a = decaying_phase(self.lambda, t);
        if let Some(period) = self.period {
            for n in 1..=delay_count(t, period) {
                let since = t - n as f64 * period;
                a += decaying_phase(self.lambda, since) * self.table.phi(n, self.gamma0 * since)?;
            }
        }
        Ok(a)
    }
}

/// Number of delays `nT ≤ t`, with a relative slack so that grid points that
/// land on a delay up to rounding count it.
fn delay_count(t: f64, period: f64) -> usize {
    (t / period * (1.0 + 1e-12)).floor().max(0.0) as usize
}

pub fn amplitude_series(params: &ModelParams, grid: &TimeGrid) -> Result<AmplitudeTrace> {
    let evaluator = SeriesEvaluator::new(params, grid.end())?;
    let mut values = (0..grid.len())
        .into_par_iter()
        .map(|k| evaluator.amplitude(grid.time(k)))
        .collect::<Result<Vec<_>>>()?;
    values[0] = Complex64::new(1.0, 0.0);
    AmplitudeTrace::new(*grid, values, Backend::Series)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coupling::CouplingSpec;

    fn sin_params(gamma0: f64, period: f64, eps0: f64) -> ModelParams {
        ModelParams::new(
            CouplingSpec::Sinusoidal {
                gamma0,
                period,
                alpha: 1.0,
            },
            eps0,
        )
        .unwrap()
    }

    #[test]
    fn exponential_before_first_delay() {
        let p = sin_params(1.0, 1.0, 0.0);
        let eval = SeriesEvaluator::new(&p, 3.0).unwrap();
        let a = eval.amplitude(0.5).unwrap();
        assert!((a - Complex64::new((-0.25f64).exp(), 0.0)).norm() < 1e-15);
    }

    #[test]
    fn one_correction_term() {
        let p = sin_params(1.0, 1.0, 0.0);
        let eval = SeriesEvaluator::new(&p, 3.0).unwrap();
        let a = eval.amplitude(1.5).unwrap();
        let expected = (-0.75f64).exp() + 0.25 * (-0.25f64).exp();
        assert!((a - Complex64::new(expected, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn flat_is_exponential() {
        let p = ModelParams::new(CouplingSpec::Flat { gamma0: 1.3 }, -0.7).unwrap();
        let grid = TimeGrid::new(0.01, 500).unwrap();
        let trace = amplitude_series(&p, &grid).unwrap();
        for (t, a) in trace.samples() {
            let exact = (-Complex64::new(0.65, -0.7) * t).exp();
            assert!((a - exact).norm() < 1e-15);
        }
        assert_eq!(trace.backend(), Backend::Series);
    }

    #[test]
    fn continuous_across_delays() {
        let p = sin_params(2.0, 1.0, 0.4);
        let eval = SeriesEvaluator::new(&p, 4.0).unwrap();
        let mut jumps = Vec::new();
        for dt in [1e-3, 1e-4] {
            let jump = (1..=3)
                .map(|n| {
                    let t = n as f64;
                    (eval.amplitude(t + dt).unwrap() - eval.amplitude(t - dt).unwrap()).norm()
                })
                .fold(0.0, f64::max);
            jumps.push(jump);
        }
        // Linear in dt: a tenfold smaller step gives a tenfold smaller jump.
        let ratio = jumps[0] / jumps[1];
        assert!((ratio - 10.0).abs() < 0.1, "ratio {ratio}");
    }
}
