//! Bromwich-contour backend.
//!
//! The amplitude is the inverse transform of the resolvent,
//!
//! ```text
//! a(t) = (1/2πi) ∫_{ℝ+iy} e^{−izt} / (ε₀ − z − Σ(z)) dz ,   y > 0,
//! ```
//!
//! evaluated by quadrature on the horizontal line `Im z = y`.
//!
//! Writing `Σ(z) = iγ₀/2 + iγ₀ S(z)` and `r₀(z) = 1/(ε₀ − iγ₀/2 − z)`, the
//! resolvent splits exactly as
//!
//! ```text
//! r = r₀ + iγ₀ S r₀² + (iγ₀ S)² r₀² r .
//! ```
//!
//! The first two pieces are inverted in closed form (`e^{−λt}` and the delayed
//! terms `−γ₀ cₙ (t−nT) e^{−λ(t−nT)} θ(t−nT)`); only the last, which decays
//! like `|z|⁻³`, goes through the quadrature. That removes both the jump of
//! `a` at `t = 0` and the derivative kinks at the first delays from the
//! numerically transformed part.
//!
//! The line integral uses the trapezoidal rule with step `h`. For an
//! integrand analytic above the real axis this samples the periodized
//! function `Σₘ a(t + mP) e^{−ymP}` with `P = 2π/h`, so the aliasing error is
//! bounded by `e^{−yP}` times the size of the amplitude. The contour height
//! therefore trades exponential amplification `e^{yt}` of round-off and
//! truncation error against aliasing; the automatic options put `y ≈ 1/t_max`.

use std::f64::consts::{E, PI};

use num_complex::Complex64;
use rayon::prelude::*;

use super::{decaying_phase, AmplitudeTrace, Backend, TimeGrid};
use crate::coupling::ModelParams;
use crate::error::{Error, Result};

/// Smallest resolvent denominator accepted at a quadrature node.
const POLE_GUARD: f64 = 1e-14;

/// Target for the estimated truncation error of the automatic options.
const AUTO_TAIL_TARGET: f64 = 1e-7;

/// `y·P` used by the automatic options; aliasing is suppressed by `e^{−23}`.
const AUTO_ALIAS_EXPONENT: f64 = 23.0;

/// Lower bound on the node count of the automatic options.
const AUTO_MIN_NODES: usize = 200_000;

/// Number of nodes between exact phase re-evaluations in the quadrature sum.
const PHASE_RESYNC: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LaplaceOptions {
    /// `y = Im z` of the integration line.
    pub contour_height: f64,
    /// The line is truncated to `|Re z| ≤ omega_cutoff`.
    pub omega_cutoff: f64,
    /// Number of trapezoidal nodes on the truncated line.
    pub n_quad: usize,
}

impl LaplaceOptions {
    /// Options sized for `params` over `grid`: `y = 1/t_max`, node spacing
    /// chosen so that the aliasing period is `23/y`, and a cutoff large
    /// enough for the `|z|⁻³` tail to fall below `1e-7`.
    pub fn auto(params: &ModelParams, grid: &TimeGrid) -> Self {
        let t_end = grid.end();
        let height = 1.0 / t_end;
        let spacing = 2.0 * PI * height / AUTO_ALIAS_EXPONENT;
        let gamma0 = params.gamma0();
        let kernel = params.coupling.memory_kernel_bound(height);
        let tail_cutoff = gamma0 * kernel * (E / (2.0 * PI * AUTO_TAIL_TARGET)).sqrt();
        let spectral_scale = 50.0 * (params.eps0.abs() + gamma0 * (1.0 + 2.0 * kernel));
        let omega_cutoff = tail_cutoff.max(spectral_scale);
        let n_quad = ((2.0 * omega_cutoff / spacing).ceil() as usize).max(AUTO_MIN_NODES);
        Self {
            contour_height: height,
            omega_cutoff,
            n_quad,
        }
    }

    fn check(&self) -> Result<()> {
        if !(self.contour_height.is_finite() && self.contour_height > 0.0) {
            return Err(Error::BadQuadrature(format!(
                "contour height must be positive, got {}",
                self.contour_height
            )));
        }
        if !(self.omega_cutoff.is_finite() && self.omega_cutoff > 0.0) {
            return Err(Error::BadQuadrature(format!(
                "frequency cutoff must be positive, got {}",
                self.omega_cutoff
            )));
        }
        if self.n_quad < 2 {
            return Err(Error::BadQuadrature(format!(
                "need at least 2 nodes, got {}",
                self.n_quad
            )));
        }
        Ok(())
    }

    fn spacing(&self) -> f64 {
        2.0 * self.omega_cutoff / self.n_quad as f64
    }
}

/// Laplace-backend trace with a posteriori error estimates.
#[derive(Debug, Clone)]
pub struct LaplaceTrace {
    pub trace: AmplitudeTrace,
    pub options: LaplaceOptions,
    /// Bound on the contribution of `|Re z| > omega_cutoff` at the last grid time.
    pub truncation_estimate: f64,
    /// Bound on the periodization error of the trapezoidal sum.
    pub aliasing_estimate: f64,
}

pub fn amplitude_laplace(
    params: &ModelParams,
    grid: &TimeGrid,
    options: &LaplaceOptions,
) -> Result<LaplaceTrace> {
    options.check()?;
    let y = options.contour_height;
    let h = options.spacing();
    let x0 = -options.omega_cutoff + 0.5 * h;
    let gamma0 = params.gamma0();
    let lambda = params.decay_constant();
    let free_pole = Complex64::new(params.eps0, -0.5 * gamma0);
    let coupling = &params.coupling;
    let memory = coupling.has_memory();

    // Integrand of the quadrature part, without the e^{−izt} factor.
    let nodes: Vec<Complex64> = if memory {
        (0..options.n_quad)
            .into_par_iter()
            .map(|j| {
                let z = Complex64::new(x0 + j as f64 * h, y);
                let extra = Complex64::i() * gamma0 * coupling.memory_kernel(z);
                let free = 1.0 / (free_pole - z);
                let denom = free_pole - z - extra;
                if denom.norm() < POLE_GUARD {
                    return Err(Error::ResolventPole { re: z.re, im: z.im });
                }
                Ok(extra * extra * free * free / denom)
            })
            .collect::<Result<_>>()?
    } else {
        Vec::new()
    };

    let period = params.period();
    let delay_weights: Vec<f64> = match period {
        Some(p) if memory => {
            let count = (grid.end() / p * (1.0 + 1e-12)).floor() as usize;
            (1..=count)
                .map(|n| gamma0 * coupling.coefficient(n))
                .collect()
        }
        _ => Vec::new(),
    };

    let amplitude_at = |t: f64| -> Complex64 {
        let mut a = decaying_phase(lambda, t);
        if let Some(p) = period {
            for (d, w) in delay_weights.iter().enumerate() {
                let since = t - (d + 1) as f64 * p;
                if since < 0.0 {
                    break;
                }
                a -= w * since * decaying_phase(lambda, since);
            }
        }
        if !nodes.is_empty() {
            a +=
                bromwich_sum(&nodes, x0, h, t) * ((y * t).exp() * h / (2.0 * PI) * -Complex64::i());
        }
        a
    };

    let mut values: Vec<Complex64> = (0..grid.len())
        .into_par_iter()
        .map(|k| amplitude_at(grid.time(k)))
        .collect();
    values[0] = Complex64::new(1.0, 0.0);

    let (truncation_estimate, aliasing_estimate) = if memory {
        let t_end = grid.end();
        let kernel = coupling.memory_kernel_bound(y);
        let truncation = (y * t_end).exp() * (gamma0 * kernel).powi(2)
            / (2.0 * PI * options.omega_cutoff * options.omega_cutoff);
        let alias_period = 2.0 * PI / h;
        let reach = match period {
            Some(p) => ((t_end + 2.0 * alias_period) / p).ceil() as usize,
            None => 0,
        };
        let first_order: f64 = (1..=reach.min(1_000_000))
            .map(|n| coupling.coefficient(n).abs())
            .sum::<f64>()
            * 2.0
            / E;
        let damp = (-y * alias_period).exp();
        (truncation, (2.0 + first_order) * damp / (1.0 - damp))
    } else {
        (0.0, 0.0)
    };

    Ok(LaplaceTrace {
        trace: AmplitudeTrace::new(*grid, values, Backend::Laplace)?,
        options: *options,
        truncation_estimate,
        aliasing_estimate,
    })
}

/// `Σⱼ fⱼ e^{−i xⱼ t}` with `xⱼ = x0 + j h`.
fn bromwich_sum(values: &[Complex64], x0: f64, h: f64, t: f64) -> Complex64 {
    let step = Complex64::from_polar(1.0, -h * t);
    values
        .chunks(PHASE_RESYNC)
        .enumerate()
        .map(|(block, chunk)| {
            let mut phase =
                Complex64::from_polar(1.0, -(x0 + (block * PHASE_RESYNC) as f64 * h) * t);
            let mut acc = Complex64::new(0.0, 0.0);
            for v in chunk {
                acc += v * phase;
                phase *= step;
            }
            acc
        })
        .sum()
}
