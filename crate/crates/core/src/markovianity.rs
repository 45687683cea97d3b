//! Semigroup-defect witness.
//!
//! The reduced dynamics is a function of the survival amplitude alone, and
//! `Λ(a)Λ(b) = Λ(ab)`, so `Λₜ₊ₛ = ΛₜΛₛ` holds exactly when
//! `a(t+s) = a(t)a(s)`. The witness therefore works with the scalar defect
//! `δ(t,s) = |a(t+s) − a(t)a(s)|`. With `D = Λ(a(t+s)) − Λ(a(t))Λ(a(s))`,
//!
//! ```text
//! ‖D‖₂ = max(√2 · | |a(t+s)|² − |a(t)a(s)|² |, δ) ,    δ ≤ ‖D‖₂ ≤ 2√2 δ ,
//! ```
//!
//! so the two vanish together and agree up to a factor of at most `2√2`.

use std::f64::consts::PI;

use crate::amplitude::{AmplitudeTrace, Backend};
use crate::channel::damping_matrix;
use crate::coupling::{CouplingSpec, ModelParams};
use crate::error::{Error, Result};

/// Default witness tolerance for a backend, matched to its accuracy.
pub fn default_tolerance(backend: Backend) -> f64 {
    match backend {
        Backend::Series | Backend::Volterra => 1e-10,
        Backend::Laplace => 1e-4,
        Backend::Modes => 1e-3,
    }
}

fn pair(trace: &AmplitudeTrace, t_index: usize, s_index: usize) -> Result<(usize, usize)> {
    let n_steps = trace.grid().n_steps();
    match t_index.checked_add(s_index) {
        Some(sum) if sum <= n_steps => Ok((t_index, s_index)),
        _ => Err(Error::IndexOutOfRange {
            t_index,
            s_index,
            n_steps,
        }),
    }
}

/// `|a(t+s) − a(t)a(s)|` at `t = t_index·dt`, `s = s_index·dt`.
pub fn semigroup_defect(trace: &AmplitudeTrace, t_index: usize, s_index: usize) -> Result<f64> {
    let (i, j) = pair(trace, t_index, s_index)?;
    let a = trace.values();
    Ok((a[i + j] - a[i] * a[j]).norm())
}

/// Spectral norm of `Λₜ₊ₛ − ΛₜΛₛ`.
pub fn superoperator_defect(trace: &AmplitudeTrace, t_index: usize, s_index: usize) -> Result<f64> {
    let (i, j) = pair(trace, t_index, s_index)?;
    let a = trace.values();
    let diff = damping_matrix(a[i + j]) - damping_matrix(a[i]) * damping_matrix(a[j]);
    Ok(diff.singular_values().max())
}

/// Largest defect over pairs with `t + s = m·dt`, and the pair attaining it.
fn worst_on_diagonal(a: &[num_complex::Complex64], m: usize) -> (usize, f64) {
    (1..=m / 2)
        .map(|i| (i, (a[m] - a[i] * a[m - i]).norm()))
        .fold(
            (0, 0.0),
            |best, cur| if cur.1 > best.1 { cur } else { best },
        )
}

/// Largest `τ` on the grid such that every sampled pair with `t + s ≤ τ` has
/// defect at most `tol`. Scans `t + s` upward and stops at the first
/// violation.
pub fn hidden_horizon(trace: &AmplitudeTrace, tol: f64) -> f64 {
    let a = trace.values();
    let grid = trace.grid();
    for m in 2..a.len() {
        if worst_on_diagonal(a, m).1 > tol {
            return grid.time(m - 1);
        }
    }
    grid.end()
}

#[derive(Debug, Clone, PartialEq)]
pub struct DefectReport {
    /// For every grid value of `τ = t + s`, the pair `(t, s)` with the
    /// largest defect and that defect.
    pub pairs: Vec<(f64, f64, f64)>,
    pub horizon_estimate: f64,
    pub tolerance_used: f64,
}

impl DefectReport {
    /// Largest defect among pairs with `t + s ≤ tau`.
    pub fn max_defect_until(&self, tau: f64) -> f64 {
        self.pairs
            .iter()
            .take_while(|(t, s, _)| t + s <= tau * (1.0 + 1e-12))
            .map(|p| p.2)
            .fold(0.0, f64::max)
    }
}

/// Full witness over the triangular pair set; `tol` defaults to the
/// backend's [`default_tolerance`].
pub fn defect_report(trace: &AmplitudeTrace, tol: Option<f64>) -> Result<DefectReport> {
    let tol = tol.unwrap_or_else(|| default_tolerance(trace.backend()));
    if !(tol > 0.0) {
        return Err(Error::BadParameter(format!(
            "witness tolerance must be positive, got {tol}"
        )));
    }
    let a = trace.values();
    let grid = trace.grid();
    let pairs = (0..a.len())
        .map(|m| {
            let (i, defect) = worst_on_diagonal(a, m);
            (grid.time(i), grid.time(m - i), defect)
        })
        .collect();
    Ok(DefectReport {
        pairs,
        horizon_estimate: hidden_horizon(trace, tol),
        tolerance_used: tol,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundStateReport {
    /// Whether the parameters sit on a bound-state resonance.
    pub predicted: bool,
    /// `min |a|²` over the last period of the trace.
    pub tail_min_abs2: f64,
    /// `max |a|²` over the last period of the trace.
    pub tail_max_abs2: f64,
    /// Asymptotic `|a|²` of the bound state when one is predicted.
    pub asymptote: Option<f64>,
    /// False when a bound state is predicted but the tail has dropped below
    /// 5% of its asymptote.
    pub consistent: bool,
}

/// Fraction of the predicted asymptote the tail must retain.
pub const BOUND_STATE_FRACTION: f64 = 0.05;

/// Checks a trace spanning at least ten periods for a trapped excitation.
/// A flat coupling has no period and `1/γ₀` takes its place.
///
/// A single-echo coupling with `|α| = 1` has a real pole of the resolvent at
/// `z = ε₀` when `α e^{iε₀T} = 1`, i.e. `ε₀T ≡ 0 (mod 2π)` for `α = 1` and
/// `ε₀T ≡ π` for `α = −1`. Its residue gives `|a|² → 1/(1 + γ₀T/2)²`.
pub fn bound_state_check(params: &ModelParams, trace: &AmplitudeTrace) -> Result<BoundStateReport> {
    let period = params.period().unwrap_or(1.0 / params.gamma0());
    let span = trace.grid().end();
    let required = 10.0 * period;
    if span < required * (1.0 - 1e-9) {
        return Err(Error::TraceTooShort { span, required });
    }

    let predicted = match params.coupling.spec() {
        CouplingSpec::Sinusoidal { alpha, period, .. } if (alpha.abs() - 1.0).abs() < 1e-12 => {
            let target = if *alpha > 0.0 { 0.0 } else { PI };
            let phase = (params.eps0 * period - target).rem_euclid(2.0 * PI);
            phase.min(2.0 * PI - phase) <= 1e-9
        }
        _ => false,
    };
    let asymptote = predicted.then(|| {
        let x = params.gamma0() * period / 2.0;
        1.0 / ((1.0 + x) * (1.0 + x))
    });

    let start = span - period;
    let (lo, hi) = trace
        .samples()
        .filter(|(t, _)| *t >= start * (1.0 - 1e-12))
        .map(|(_, a)| a.norm_sqr())
        .fold((f64::INFINITY, 0.0f64), |(lo, hi), v| {
            (lo.min(v), hi.max(v))
        });
    let consistent = asymptote.is_none_or(|floor| lo >= BOUND_STATE_FRACTION * floor);

    Ok(BoundStateReport {
        predicted,
        tail_min_abs2: lo,
        tail_max_abs2: hi,
        asymptote,
        consistent,
    })
}
