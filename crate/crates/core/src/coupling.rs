//! Form factors of the qubit–bath coupling.
//!
//! Every supported coupling is a periodic spectral density written as a
//! Fourier cosine series,
//!
//! ```text
//! |g(ω)|² = (γ₀ / 2π) · (1 + 2 Σₙ cₙ cos(n T ω)),
//! ```
//!
//! with the flat density (all `cₙ = 0`) as the degenerate case. The
//! self-energy in the upper half-plane has the closed form
//! `Σ(z) = (iγ₀/2) · (1 + 2 Σₙ cₙ e^{inTz})`, which is what the amplitude
//! backends consume. Only the dressed qubit energy `ε₀` is modelled; bare
//! energies and renormalization shifts never appear.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Number of sample points per period used by [`validate_coupling`] when the
/// caller does not choose one.
pub const DEFAULT_POSITIVITY_SAMPLES: usize = 4096;

/// Relative slack (in units of `γ₀/2π`) below zero tolerated by the sampled
/// positivity check.
const POSITIVITY_SLACK: f64 = 1e-12;

/// Raw, unvalidated description of a form factor.
///
/// Serializes as a tagged object, e.g.
/// `{"kind": "sinusoidal", "gamma0": 1.0, "period_T": 1.0, "alpha": 1.0}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CouplingSpec {
    /// Constant density `γ₀/2π`; exponential decay at all times.
    Flat { gamma0: f64 },
    /// `c₁ = −α/2`, all other coefficients zero.
    Sinusoidal {
        gamma0: f64,
        #[serde(rename = "period_T")]
        period: f64,
        alpha: f64,
    },
    /// `cₙ = e^{−βn}`; a Dirac comb for `β = 0`, a smoothed comb otherwise.
    ExpComb {
        gamma0: f64,
        #[serde(rename = "period_T")]
        period: f64,
        beta: f64,
    },
    /// Arbitrary finite cosine series `c₁..c_N`.
    #[serde(rename = "custom")]
    CustomFourier {
        gamma0: f64,
        #[serde(rename = "period_T")]
        period: f64,
        coeffs: Vec<f64>,
    },
}

impl CouplingSpec {
    pub fn gamma0(&self) -> f64 {
        match self {
            CouplingSpec::Flat { gamma0 }
            | CouplingSpec::Sinusoidal { gamma0, .. }
            | CouplingSpec::ExpComb { gamma0, .. }
            | CouplingSpec::CustomFourier { gamma0, .. } => *gamma0,
        }
    }

    /// Period `T` of the form factor in time units, `None` for the flat case.
    pub fn period(&self) -> Option<f64> {
        match self {
            CouplingSpec::Flat { .. } => None,
            CouplingSpec::Sinusoidal { period, .. }
            | CouplingSpec::ExpComb { period, .. }
            | CouplingSpec::CustomFourier { period, .. } => Some(*period),
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            CouplingSpec::Flat { .. } => "flat",
            CouplingSpec::Sinusoidal { .. } => "sinusoidal",
            CouplingSpec::ExpComb { .. } => "exp_comb",
            CouplingSpec::CustomFourier { .. } => "custom",
        }
    }

    /// Fourier coefficient `cₙ` for `n ≥ 1` (zero beyond a finite series).
    pub fn coefficient(&self, n: usize) -> f64 {
        if n == 0 {
            return 0.0;
        }
        match self {
            CouplingSpec::Flat { .. } => 0.0,
            CouplingSpec::Sinusoidal { alpha, .. } => {
                if n == 1 {
                    -alpha / 2.0
                } else {
                    0.0
                }
            }
            CouplingSpec::ExpComb { beta, .. } => (-beta * n as f64).exp(),
            CouplingSpec::CustomFourier { coeffs, .. } => coeffs.get(n - 1).copied().unwrap_or(0.0),
        }
    }

    /// True when some `cₙ` is nonzero, i.e. the dynamics eventually departs
    /// from the exponential law.
    pub fn has_memory(&self) -> bool {
        match self {
            CouplingSpec::Flat { .. } => false,
            CouplingSpec::Sinusoidal { alpha, .. } => *alpha != 0.0,
            CouplingSpec::ExpComb { beta, .. } => beta.is_finite(),
            CouplingSpec::CustomFourier { coeffs, .. } => coeffs.iter().any(|&c| c != 0.0),
        }
    }

    fn check_parameters(&self) -> Result<()> {
        let gamma0 = self.gamma0();
        if !(gamma0.is_finite() && gamma0 > 0.0) {
            return Err(Error::BadParameter(format!(
                "gamma0 must be positive, got {gamma0}"
            )));
        }
        if let Some(period) = self.period() {
            if !(period.is_finite() && period > 0.0) {
                return Err(Error::BadParameter(format!(
                    "period_T must be positive, got {period}"
                )));
            }
        }
        match self {
            CouplingSpec::Sinusoidal { alpha, .. } if !(alpha.abs() <= 1.0) => {
                Err(Error::BadParameter(format!(
                    "sinusoidal coupling needs |alpha| <= 1, got {alpha}"
                )))
            }
            CouplingSpec::ExpComb { beta, .. } if !(*beta >= 0.0) || beta.is_nan() => Err(
                Error::BadParameter(format!("comb coupling needs beta >= 0, got {beta}")),
            ),
            CouplingSpec::CustomFourier { coeffs, .. } if coeffs.iter().any(|c| !c.is_finite()) => {
                Err(Error::BadParameter(
                    "custom Fourier coefficients must be finite".into(),
                ))
            }
            _ => Ok(()),
        }
    }

    /// Dimensionless shape `1 + 2 Σₙ cₙ cos(nTω)`; `None` for the Dirac comb.
    fn shape(&self, omega: f64) -> Option<f64> {
        match self {
            CouplingSpec::Flat { .. } => Some(1.0),
            CouplingSpec::Sinusoidal { period, alpha, .. } => {
                Some(1.0 - alpha * (period * omega).cos())
            }
            CouplingSpec::ExpComb { period, beta, .. } => {
                if *beta == 0.0 {
                    return None;
                }
                // Poisson kernel: 1 + 2 Σ e^{−βn} cos(nθ).
                let r = (-beta).exp();
                let denom = 1.0 - 2.0 * r * (period * omega).cos() + r * r;
                Some((1.0 - r * r) / denom)
            }
            CouplingSpec::CustomFourier { period, coeffs, .. } => {
                let theta = period * omega;
                let sum: f64 = coeffs
                    .iter()
                    .enumerate()
                    .map(|(i, c)| c * ((i + 1) as f64 * theta).cos())
                    .sum();
                Some(1.0 + 2.0 * sum)
            }
        }
    }
}

/// A [`CouplingSpec`] whose invariants have been checked.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "CouplingSpec", into = "CouplingSpec")]
pub struct ValidatedCoupling(CouplingSpec);

impl TryFrom<CouplingSpec> for ValidatedCoupling {
    type Error = Error;

    fn try_from(spec: CouplingSpec) -> Result<Self> {
        validate_coupling(spec, DEFAULT_POSITIVITY_SAMPLES)
    }
}

impl From<ValidatedCoupling> for CouplingSpec {
    fn from(v: ValidatedCoupling) -> Self {
        v.0
    }
}

impl std::ops::Deref for ValidatedCoupling {
    type Target = CouplingSpec;

    fn deref(&self) -> &CouplingSpec {
        &self.0
    }
}

/// Checks parameter ranges and, for the cosine-series kinds, samples the
/// density at `n_samples` equally spaced frequencies over one period.
pub fn validate_coupling(spec: CouplingSpec, n_samples: usize) -> Result<ValidatedCoupling> {
    if n_samples == 0 {
        return Err(Error::BadParameter("n_samples must be positive".into()));
    }
    spec.check_parameters()?;
    if let Some(period) = spec.period() {
        let step = 2.0 * PI / period / n_samples as f64;
        for i in 0..n_samples {
            let omega = i as f64 * step;
            let Some(shape) = spec.shape(omega) else {
                break;
            };
            if shape < -POSITIVITY_SLACK {
                return Err(Error::NonPositiveDensity {
                    omega,
                    value: spec.gamma0() / (2.0 * PI) * shape,
                });
            }
        }
    }
    Ok(ValidatedCoupling(spec))
}

impl ValidatedCoupling {
    pub fn spec(&self) -> &CouplingSpec {
        &self.0
    }

    /// `|g(ω)|²`. Fails for the unsmoothed comb, which is a distribution.
    pub fn spectral_density(&self, omega: f64) -> Result<f64> {
        let shape = self.0.shape(omega).ok_or(Error::DistributionalDensity)?;
        Ok(self.gamma0() / (2.0 * PI) * shape)
    }

    /// `S(z) = Σₙ cₙ e^{inTz}` for `Im z > 0`, so that `Σ(z) = (iγ₀/2)(1 + 2S(z))`.
    ///
    /// The caller guarantees `Im z > 0`; the comb series is summed in closed
    /// form and converges there even for `β = 0`.
    pub fn memory_kernel(&self, z: Complex64) -> Complex64 {
        match &self.0 {
            CouplingSpec::Flat { .. } => Complex64::new(0.0, 0.0),
            CouplingSpec::Sinusoidal { period, alpha, .. } => {
                -0.5 * alpha * (Complex64::i() * period * z).exp()
            }
            CouplingSpec::ExpComb { period, beta, .. } => {
                let q = (Complex64::i() * period * z - beta).exp();
                q / (1.0 - q)
            }
            CouplingSpec::CustomFourier { period, coeffs, .. } => {
                let q = (Complex64::i() * period * z).exp();
                // Horner in q, then one extra factor of q for c₁ q + c₂ q² + ...
                let poly = coeffs
                    .iter()
                    .rev()
                    .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * q + c);
                poly * q
            }
        }
    }

    /// Upper bound of `|S(z)|` on the horizontal line `Im z = height`.
    pub fn memory_kernel_bound(&self, height: f64) -> f64 {
        match &self.0 {
            CouplingSpec::Flat { .. } => 0.0,
            CouplingSpec::Sinusoidal { period, alpha, .. } => {
                0.5 * alpha.abs() * (-period * height).exp()
            }
            CouplingSpec::ExpComb { period, beta, .. } => {
                let r = (-beta - period * height).exp();
                r / (1.0 - r)
            }
            CouplingSpec::CustomFourier { period, coeffs, .. } => {
                let r = (-period * height).exp();
                coeffs
                    .iter()
                    .enumerate()
                    .map(|(i, c)| c.abs() * r.powi(i as i32 + 1))
                    .sum()
            }
        }
    }

    /// Dressed self-energy `Σ(z)` in the open upper half-plane.
    pub fn self_energy(&self, z: Complex64) -> Result<Complex64> {
        if !(z.im > 0.0) {
            return Err(Error::LowerHalfPlane { im: z.im });
        }
        let half_width = 0.5 * self.gamma0();
        Ok(Complex64::i() * half_width * (1.0 + 2.0 * self.memory_kernel(z)))
    }

    /// `(1/π) Im Σ(ω + iδ)`, which tends to `|g(ω)|²` as `δ → 0⁺`.
    pub fn reconstruct_density(&self, omega: f64, delta: f64) -> Result<f64> {
        if matches!(self.0, CouplingSpec::ExpComb { beta, .. } if beta == 0.0) {
            return Err(Error::DistributionalDensity);
        }
        let sigma = self.self_energy(Complex64::new(omega, delta))?;
        Ok(sigma.im / PI)
    }
}

/// The full physical input: a validated coupling and the dressed qubit
/// energy `ε₀`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub coupling: ValidatedCoupling,
    pub eps0: f64,
}

impl ModelParams {
    pub fn new(coupling: CouplingSpec, eps0: f64) -> Result<Self> {
        if !eps0.is_finite() {
            return Err(Error::BadParameter(format!(
                "eps0 must be finite, got {eps0}"
            )));
        }
        Ok(Self {
            coupling: ValidatedCoupling::try_from(coupling)?,
            eps0,
        })
    }

    pub fn gamma0(&self) -> f64 {
        self.coupling.gamma0()
    }

    pub fn period(&self) -> Option<f64> {
        self.coupling.period()
    }

    /// Complex decay constant `λ = γ₀/2 + iε₀` of the short-time exponential.
    pub fn decay_constant(&self) -> Complex64 {
        Complex64::new(0.5 * self.gamma0(), self.eps0)
    }
}
