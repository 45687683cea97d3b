//! Discretized-bath backend.
//!
//! The one-excitation sector of the qubit plus `2K+1` bath modes is spanned
//! by `|e₀⟩ = |0, vac⟩` and `|1, ω_k⟩`. The Hamiltonian restricted to it is
//! the arrowhead matrix with `ε₀` in the corner, mode frequencies on the
//! diagonal and couplings `g_k` in the first row and column. After one
//! diagonalization,
//!
//! ```text
//! a(t)   = Σⱼ |⟨e₀|vⱼ⟩|² e^{−iEⱼt}
//! c_k(t) = Σⱼ ⟨k|vⱼ⟩⟨vⱼ|e₀⟩ e^{−iEⱼt}
//! ```
//!
//! Two discretizations are provided.
//!
//! *Unsmoothed comb.* With `cₙ = 1` the density is `(γ₀/2π) Σ_{n∈ℤ} e^{inTω}`,
//! and Poisson summation turns it into `(γ₀/T) Σ_k δ(ω − 2πk/T)`: the bath is
//! exactly a set of modes at `ω_k = 2πk/T` with `g_k² = γ₀/T`. The symmetric
//! mode sum reproduces the dressed self-energy `−(γ₀/2) cot(Tz/2)` with no
//! energy shift, so `ε₀` enters the matrix unchanged. Truncating to
//! `|k| ≤ K` is the only approximation.
//!
//! *Flat.* A uniform grid `ω_k = kΔω` on `[−W, W]` with `g_k² = γ₀Δω/2π`
//! (Riemann sum of the flat density). It approximates the continuum only up
//! to the recurrence time `2π/Δω`.

use num_complex::Complex64;
use rayon::prelude::*;

use super::arrowhead::ArrowheadEigen;
use super::{AmplitudeTrace, Backend, TimeGrid};
use crate::coupling::{CouplingSpec, ModelParams};
use crate::error::{Error, Result};

/// Largest one-excitation dimension accepted by [`amplitude_modes`].
pub const MAX_MODE_DIMENSION: usize = 20_000;

/// Discretization settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeOptions {
    /// Modes run over `k = −K..=K`.
    pub k: usize,
    /// Half-width `W` of the frequency window for the flat coupling; `None`
    /// picks `max(200γ₀, 20|ε₀|)`.
    pub flat_half_width: Option<f64>,
}

impl ModeOptions {
    pub fn with_k(k: usize) -> Self {
        Self {
            k,
            flat_half_width: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteModeSystem {
    pub eps0: f64,
    pub mode_freqs: Vec<f64>,
    pub mode_couplings: Vec<f64>,
}

impl DiscreteModeSystem {
    pub fn new(eps0: f64, mode_freqs: Vec<f64>, mode_couplings: Vec<f64>) -> Result<Self> {
        if mode_freqs.len() != mode_couplings.len() || mode_freqs.is_empty() {
            return Err(Error::BadParameter(
                "need equally many (>0) frequencies and couplings".into(),
            ));
        }
        if mode_freqs.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::BadParameter(
                "mode frequencies must be strictly increasing".into(),
            ));
        }
        if mode_couplings.iter().any(|g| !(*g >= 0.0)) {
            return Err(Error::BadParameter(
                "mode couplings must be nonnegative".into(),
            ));
        }
        Ok(Self {
            eps0,
            mode_freqs,
            mode_couplings,
        })
    }

    /// `2K + 2`: the qubit amplitude plus one amplitude per mode.
    pub fn dimension(&self) -> usize {
        self.mode_freqs.len() + 1
    }

    pub fn diagonalize(&self) -> Result<ModeSpectrum> {
        if self.dimension() > MAX_MODE_DIMENSION {
            return Err(Error::DimensionTooLarge {
                dim: self.dimension(),
                max: MAX_MODE_DIMENSION,
            });
        }
        let eig = ArrowheadEigen::solve(self.eps0, &self.mode_freqs, &self.mode_couplings)?;
        Ok(ModeSpectrum::from_eigen(eig))
    }
}

pub fn build_discrete_modes(
    params: &ModelParams,
    options: &ModeOptions,
) -> Result<DiscreteModeSystem> {
    let k = options.k as i64;
    let (freqs, coupling) = match params.coupling.spec() {
        CouplingSpec::ExpComb {
            gamma0,
            period,
            beta,
        } if *beta == 0.0 => {
            let spacing = 2.0 * std::f64::consts::PI / period;
            let freqs = (-k..=k).map(|j| j as f64 * spacing).collect::<Vec<_>>();
            (freqs, (gamma0 / period).sqrt())
        }
        CouplingSpec::Flat { gamma0 } => {
            if options.k == 0 {
                return Err(Error::BadParameter(
                    "flat discretization needs K >= 1".into(),
                ));
            }
            let half_width = options
                .flat_half_width
                .unwrap_or_else(|| (200.0 * gamma0).max(20.0 * params.eps0.abs()));
            if !(half_width.is_finite() && half_width > 0.0) {
                return Err(Error::BadParameter(format!(
                    "window half-width must be positive, got {half_width}"
                )));
            }
            let spacing = half_width / options.k as f64;
            let freqs = (-k..=k).map(|j| j as f64 * spacing).collect::<Vec<_>>();
            (
                freqs,
                (gamma0 * spacing / (2.0 * std::f64::consts::PI)).sqrt(),
            )
        }
        CouplingSpec::ExpComb { .. } => return Err(Error::UnsupportedKind("smoothed comb")),
        CouplingSpec::Sinusoidal { .. } => return Err(Error::UnsupportedKind("sinusoidal")),
        CouplingSpec::CustomFourier { .. } => return Err(Error::UnsupportedKind("custom Fourier")),
    };
    let n = freqs.len();
    DiscreteModeSystem::new(params.eps0, freqs, vec![coupling; n])
}

/// Diagonalized mode system; evaluates amplitudes at arbitrary times.
#[derive(Debug, Clone)]
pub struct ModeSpectrum {
    eig: ArrowheadEigen,
    energies: Vec<f64>,
}

impl ModeSpectrum {
    fn from_eigen(eig: ArrowheadEigen) -> Self {
        let energies = if eig.coupled_poles() == 0 {
            vec![eig.shaft()]
        } else {
            eig.coupled_eigenvalues().collect()
        };
        Self { eig, energies }
    }

    pub fn eigen(&self) -> &ArrowheadEigen {
        &self.eig
    }

    fn weights(&self) -> &[f64] {
        if self.eig.coupled_poles() == 0 {
            &[1.0]
        } else {
            self.eig.shaft_weights()
        }
    }

    fn phases(&self, t: f64) -> Vec<Complex64> {
        self.energies
            .iter()
            .map(|&e| Complex64::from_polar(1.0, -e * t))
            .collect()
    }

    /// Qubit amplitude `a(t)`.
    pub fn amplitude(&self, t: f64) -> Complex64 {
        self.weights()
            .iter()
            .zip(&self.energies)
            .map(|(w, &e)| w * Complex64::from_polar(1.0, -e * t))
            .sum()
    }

    /// Mode amplitudes `c_k(t)` in the order of the system's frequencies.
    pub fn mode_amplitudes(&self, t: f64) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); self.eig.dim() - 1];
        let phases = self.phases(t);
        let weighted: Vec<Complex64> = phases
            .iter()
            .zip(self.weights())
            .map(|(p, w)| p * w)
            .collect();
        for k in 0..self.eig.coupled_poles() {
            let sum: Complex64 = weighted
                .iter()
                .enumerate()
                .map(|(j, wp)| wp / self.eig.gap(j, k))
                .sum();
            out[self.eig.pole_position(k)] = sum * self.eig.coupling(k);
        }
        out
    }

    pub fn trace(&self, grid: &TimeGrid) -> Result<AmplitudeTrace> {
        let mut values: Vec<Complex64> = (0..grid.len())
            .into_par_iter()
            .map(|k| self.amplitude(grid.time(k)))
            .collect();
        values[0] = Complex64::new(1.0, 0.0);
        AmplitudeTrace::new(*grid, values, Backend::Modes)
    }
}

/// Qubit trace together with every mode amplitude at every grid time.
#[derive(Debug, Clone)]
pub struct ModeTrajectory {
    pub trace: AmplitudeTrace,
    /// `mode_amplitudes[i][k] = c_k(t_i)`.
    pub mode_amplitudes: Vec<Vec<Complex64>>,
}

impl ModeTrajectory {
    /// `|a(t_i)|² + Σ_k |c_k(t_i)|²` with `a` taken before the `a(0) = 1`
    /// normalization of the trace.
    pub fn total_probability(&self, spectrum: &ModeSpectrum, i: usize) -> f64 {
        let t = self.trace.grid().time(i);
        spectrum.amplitude(t).norm_sqr()
            + self.mode_amplitudes[i]
                .iter()
                .map(|c| c.norm_sqr())
                .sum::<f64>()
    }
}

pub fn amplitude_modes(system: &DiscreteModeSystem, grid: &TimeGrid) -> Result<ModeTrajectory> {
    let spectrum = system.diagonalize()?;
    let trace = spectrum.trace(grid)?;
    let mode_amplitudes = (0..grid.len())
        .into_par_iter()
        .map(|k| spectrum.mode_amplitudes(grid.time(k)))
        .collect();
    Ok(ModeTrajectory {
        trace,
        mode_amplitudes,
    })
}
