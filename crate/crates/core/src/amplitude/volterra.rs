//! Time-domain backend: marches the delayed convolution equation
//!
//! ```text
//! a(t) = e^{−λt} − γ₀ Σₙ cₙ θ(t − nT) [a ⋆ e^{−λ·}](t − nT)
//! ```
//!
//! on a grid whose step divides `T`, so every delay lands on a node and the
//! right-hand side only involves samples that are already known.
//!
//! The convolution `I(τ) = ∫₀^τ a(s) e^{−λ(τ−s)} ds` is discretized with the
//! composite trapezoidal rule. Because the kernel is exponential the rule
//! satisfies `Iₘ = e^{−λdt} Iₘ₋₁ + dt/2 (aₘ₋₁ e^{−λdt} + aₘ)`, so the full
//! history sum is carried in one running value per node instead of being
//! re-summed. The method is second order in `dt` and inherently sequential.

use num_complex::Complex64;

use super::{decaying_phase, AmplitudeTrace, Backend, TimeGrid};
use crate::coupling::ModelParams;
use crate::error::{Error, Result};

/// Relative mismatch tolerated between `T` and an integer number of steps.
const GRID_MATCH_TOL: f64 = 1e-9;

pub fn amplitude_volterra(params: &ModelParams, grid: &TimeGrid) -> Result<AmplitudeTrace> {
    let dt = grid.dt();
    let lambda = params.decay_constant();
    let n = grid.len();

    let period = params.period().filter(|_| params.coupling.has_memory());
    let steps_per_period = match period {
        Some(period) => {
            let steps = (period / dt).round();
            if steps < 1.0 || (steps * dt - period).abs() > GRID_MATCH_TOL * period {
                return Err(Error::GridMismatch { dt, period });
            }
            Some(steps as usize)
        }
        None => None,
    };

    let mut a = Vec::with_capacity(n);
    let Some(m_per) = steps_per_period else {
        a.extend((0..n).map(|k| decaying_phase(lambda, grid.time(k))));
        a[0] = Complex64::new(1.0, 0.0);
        return AmplitudeTrace::new(*grid, a, Backend::Volterra);
    };

    let max_delays = (n - 1) / m_per;
    let weights: Vec<f64> = (1..=max_delays)
        .map(|d| params.gamma0() * params.coupling.coefficient(d))
        .collect();

    let step_decay = (-lambda * dt).exp();
    let half_dt = 0.5 * dt;
    // conv[m] = trapezoidal ∫₀^{m dt} a(s) e^{−λ(m dt − s)} ds
    let mut conv: Vec<Complex64> = Vec::with_capacity(n);

    for k in 0..n {
        let mut value = decaying_phase(lambda, grid.time(k));
        for (d, w) in weights.iter().enumerate() {
            let delay = (d + 1) * m_per;
            if delay > k {
                break;
            }
            value -= w * conv[k - delay];
        }
        if k == 0 {
            value = Complex64::new(1.0, 0.0);
            conv.push(Complex64::new(0.0, 0.0));
        } else {
            let next = step_decay * conv[k - 1] + half_dt * (a[k - 1] * step_decay + value);
            conv.push(next);
        }
        a.push(value);
    }

    AmplitudeTrace::new(*grid, a, Backend::Volterra)
}
