//! Reduced qubit dynamics as an amplitude-damping channel.
//!
//! Basis convention: `|0⟩` is the excited level (`H_q = |0⟩⟨0|`) and `|1⟩` the
//! ground level, so `σ₋ = |1⟩⟨0|`. A density matrix is vectorized as
//! `(ρ₀₀, ρ₀₁, ρ₁₀, ρ₁₁)` and every [`Superoperator`] acts on that ordering.
//!
//! Given the survival amplitude `a`, the state at time `t` is
//!
//! ```text
//! ρ(t) = ⎡ |a|²ρ₀₀       aρ₀₁               ⎤
//!        ⎣ a*ρ₁₀         ρ₁₁ + (1 − |a|²)ρ₀₀ ⎦
//! ```

use nalgebra::{Matrix2, Matrix4, SymmetricEigen, Vector4};
use num_complex::Complex64;

use crate::amplitude::{AmplitudeTrace, TimeGrid, NORM_SLACK};
use crate::coupling::ModelParams;
use crate::error::{Error, Result};

/// Tolerance for the Hermiticity, trace and positivity checks on states.
pub const STATE_TOL: f64 = 1e-12;

/// Rate extraction refuses amplitudes smaller than this.
pub const MIN_AMPLITUDE: f64 = 1e-10;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Qubit density matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix {
    entries: [Complex64; 4],
}

impl DensityMatrix {
    /// Validates Hermiticity, unit trace and positivity, each within
    /// [`STATE_TOL`].
    pub fn new(r00: Complex64, r01: Complex64, r10: Complex64, r11: Complex64) -> Result<Self> {
        let entries = [r00, r01, r10, r11];
        if entries
            .iter()
            .any(|z| !(z.re.is_finite() && z.im.is_finite()))
        {
            return Err(Error::InvalidState("entries must be finite".into()));
        }
        if r00.im.abs() > STATE_TOL
            || r11.im.abs() > STATE_TOL
            || (r10 - r01.conj()).norm() > STATE_TOL
        {
            return Err(Error::InvalidState("matrix is not Hermitian".into()));
        }
        let trace = r00.re + r11.re;
        if (trace - 1.0).abs() > STATE_TOL {
            return Err(Error::InvalidState(format!("trace is {trace}, expected 1")));
        }
        let det = r00.re * r11.re - r01.norm_sqr();
        if r00.re < -STATE_TOL || r11.re < -STATE_TOL || det < -STATE_TOL {
            return Err(Error::InvalidState(format!(
                "matrix is not positive semidefinite (det = {det:e})"
            )));
        }
        Ok(Self { entries })
    }

    /// State with excited population `p` and coherence `c`.
    pub fn from_populations(p_excited: f64, coherence: Complex64) -> Result<Self> {
        Self::new(
            Complex64::new(p_excited, 0.0),
            coherence,
            coherence.conj(),
            Complex64::new(1.0 - p_excited, 0.0),
        )
    }

    /// `|0⟩⟨0|`.
    pub fn excited() -> Self {
        Self {
            entries: [ONE, ZERO, ZERO, ZERO],
        }
    }

    /// `|1⟩⟨1|`.
    pub fn ground() -> Self {
        Self {
            entries: [ZERO, ZERO, ZERO, ONE],
        }
    }

    pub fn from_vec(v: &Vector4<Complex64>) -> Result<Self> {
        Self::new(v[0], v[1], v[2], v[3])
    }

    pub fn to_vec(&self) -> Vector4<Complex64> {
        Vector4::from(self.entries)
    }

    pub fn to_matrix(&self) -> Matrix2<Complex64> {
        let [a, b, c, d] = self.entries;
        Matrix2::new(a, b, c, d)
    }

    pub fn r00(&self) -> Complex64 {
        self.entries[0]
    }

    pub fn r01(&self) -> Complex64 {
        self.entries[1]
    }

    pub fn r10(&self) -> Complex64 {
        self.entries[2]
    }

    pub fn r11(&self) -> Complex64 {
        self.entries[3]
    }

    pub fn trace(&self) -> Complex64 {
        self.entries[0] + self.entries[3]
    }

    /// Smallest eigenvalue of the (Hermitian part of the) matrix.
    pub fn min_eigenvalue(&self) -> f64 {
        let p = self.entries[0].re;
        let q = self.entries[3].re;
        let c = 0.5 * (self.entries[1] + self.entries[2].conj());
        let mean = 0.5 * (p + q);
        let radius = (0.25 * (p - q) * (p - q) + c.norm_sqr()).sqrt();
        mean - radius
    }
}

/// State at the time where the survival amplitude equals `a`.
pub fn evolve(rho0: &DensityMatrix, a: Complex64) -> Result<DensityMatrix> {
    check_amplitude(a)?;
    let v = damping_matrix(a) * rho0.to_vec();
    DensityMatrix::from_vec(&v)
}

fn check_amplitude(a: Complex64) -> Result<()> {
    if !(a.norm() <= 1.0 + NORM_SLACK) {
        return Err(Error::InvalidAmplitude(format!(
            "|a| = {} exceeds 1",
            a.norm()
        )));
    }
    Ok(())
}

/// Linear map on vectorized 2×2 matrices, ordering `(ρ₀₀, ρ₀₁, ρ₁₀, ρ₁₁)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Superoperator(pub Matrix4<Complex64>);

impl Superoperator {
    pub fn identity() -> Self {
        Self(Matrix4::identity())
    }

    pub fn matrix(&self) -> &Matrix4<Complex64> {
        &self.0
    }

    pub fn apply(&self, rho: &DensityMatrix) -> Vector4<Complex64> {
        self.0 * rho.to_vec()
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Superoperator) -> Superoperator {
        Superoperator(self.0 * other.0)
    }

    pub fn scale(&self, factor: f64) -> Superoperator {
        Superoperator(self.0 * Complex64::new(factor, 0.0))
    }

    pub fn exp(&self) -> Superoperator {
        Superoperator(self.0.exp())
    }

    /// Largest entrywise modulus of `self − other`.
    pub fn max_abs_diff(&self, other: &Superoperator) -> f64 {
        (self.0 - other.0)
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    /// Spectral norm of `self − other`.
    pub fn operator_norm_diff(&self, other: &Superoperator) -> f64 {
        (self.0 - other.0).singular_values().max()
    }

    /// Deviation of the functional `tr` after the map from `tr` before it,
    /// i.e. `max_j |M₀ⱼ + M₃ⱼ − (1,0,0,1)ⱼ|`.
    pub fn trace_defect(&self) -> f64 {
        let target = [1.0, 0.0, 0.0, 1.0];
        (0..4)
            .map(|j| (self.0[(0, j)] + self.0[(3, j)] - Complex64::new(target[j], 0.0)).norm())
            .fold(0.0, f64::max)
    }
}

/// Matrix of the damping map for any complex `a`, without range checks.
pub(crate) fn damping_matrix(a: Complex64) -> Matrix4<Complex64> {
    let p = Complex64::new(a.norm_sqr(), 0.0);
    let mut m = Matrix4::zeros();
    m[(0, 0)] = p;
    m[(1, 1)] = a;
    m[(2, 2)] = a.conj();
    m[(3, 3)] = ONE;
    m[(3, 0)] = ONE - p;
    m
}

/// `−iε ad_{H_q} − γ 𝓛` with `𝓛ρ = −σ₋ρσ₊ + ½{σ₊σ₋, ρ}`.
pub fn gkls_generator(gamma: f64, eps: f64) -> Superoperator {
    let mut m = Matrix4::zeros();
    m[(0, 0)] = Complex64::new(-gamma, 0.0);
    m[(1, 1)] = Complex64::new(-0.5 * gamma, -eps);
    m[(2, 2)] = Complex64::new(-0.5 * gamma, eps);
    m[(3, 0)] = Complex64::new(gamma, 0.0);
    Superoperator(m)
}

/// Channel reached when the survival amplitude equals `a`. Requires
/// `0 < |a| ≤ 1`; at `a = 0` the channel is not the exponential of any
/// generator in the family, so use [`evolve`] there.
pub fn channel_superoperator(a: Complex64) -> Result<Superoperator> {
    check_amplitude(a)?;
    if a == ZERO {
        return Err(Error::InvalidAmplitude("a = 0 has no logarithm".into()));
    }
    Ok(Superoperator(damping_matrix(a)))
}

/// The same channel as [`channel_superoperator`], built as
/// `exp(ln|a|² 𝓛 + i arg a · ad_{H_q})` through a numerical matrix exponential.
pub fn channel_from_generator(a: Complex64) -> Result<Superoperator> {
    channel_superoperator(a)?;
    // gkls_generator(γ, ε) = −γ𝓛 − iε·ad, so γ = −ln|a|², ε = −arg a.
    Ok(gkls_generator(-a.norm_sqr().ln(), -a.arg()).exp())
}

/// Choi matrix `Σᵢⱼ |i⟩⟨j| ⊗ Λ(|i⟩⟨j|)` with row index `2i + k`. No range
/// check on `a`: for `|a| > 1` the result has a negative eigenvalue.
pub fn choi_matrix(a: Complex64) -> Matrix4<Complex64> {
    let p = a.norm_sqr();
    let mut c = Matrix4::zeros();
    c[(0, 0)] = Complex64::new(p, 0.0);
    c[(1, 1)] = Complex64::new(1.0 - p, 0.0);
    c[(0, 3)] = a;
    c[(3, 0)] = a.conj();
    c[(3, 3)] = ONE;
    c
}

/// Eigenvalues of a Hermitian 4×4 matrix, increasing.
pub fn hermitian_eigenvalues(m: &Matrix4<Complex64>) -> [f64; 4] {
    let mut vals: [f64; 4] = SymmetricEigen::new(*m).eigenvalues.into();
    vals.sort_by(f64::total_cmp);
    vals
}

/// `γ(t)` and `ε(t)` sampled on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct RateFunctions {
    grid: TimeGrid,
    gamma: Vec<f64>,
    eps: Vec<f64>,
}

impl RateFunctions {
    pub fn new(grid: TimeGrid, gamma: Vec<f64>, eps: Vec<f64>) -> Result<Self> {
        if gamma.len() != grid.len() || eps.len() != grid.len() {
            return Err(Error::BadGrid("rate sequences must match the grid".into()));
        }
        Ok(Self { grid, gamma, eps })
    }

    pub fn grid(&self) -> &TimeGrid {
        &self.grid
    }

    pub fn gamma(&self) -> &[f64] {
        &self.gamma
    }

    pub fn eps(&self) -> &[f64] {
        &self.eps
    }

    pub fn generator(&self, k: usize) -> Superoperator {
        gkls_generator(self.gamma[k], self.eps[k])
    }
}

/// Rates from finite differences of `ln|a|` and of the unwrapped phase:
/// `γ = −2 d ln|a|/dt`, `ε = −d arg a/dt`. Second-order central differences
/// inside, second-order one-sided stencils at both ends.
pub fn extract_rates(trace: &AmplitudeTrace) -> Result<RateFunctions> {
    let grid = *trace.grid();
    if grid.len() < 3 {
        return Err(Error::BadGrid(
            "rate extraction needs at least 3 samples".into(),
        ));
    }
    let values = trace.values();
    let mut log_abs = Vec::with_capacity(values.len());
    for (t, a) in trace.samples() {
        let abs = a.norm();
        if !(abs >= MIN_AMPLITUDE) {
            return Err(Error::AmplitudeNearZero { t, abs });
        }
        log_abs.push(abs.ln());
    }

    let mut phase = Vec::with_capacity(values.len());
    phase.push(values[0].arg());
    for k in 1..values.len() {
        let step = (values[k] * values[k - 1].conj()).arg();
        if step.abs() >= std::f64::consts::PI {
            return Err(Error::PhaseJump {
                t: grid.time(k - 1),
                step,
            });
        }
        phase.push(phase[k - 1] + step);
    }

    let dt = grid.dt();
    let gamma = derivative(&log_abs, dt)
        .into_iter()
        .map(|d| -2.0 * d)
        .collect();
    let eps = derivative(&phase, dt).into_iter().map(|d| -d).collect();
    RateFunctions::new(grid, gamma, eps)
}

fn derivative(f: &[f64], dt: f64) -> Vec<f64> {
    let n = f.len();
    let inv = 0.5 / dt;
    let mut d = Vec::with_capacity(n);
    d.push((-3.0 * f[0] + 4.0 * f[1] - f[2]) * inv);
    d.extend((1..n - 1).map(|k| (f[k + 1] - f[k - 1]) * inv));
    d.push((3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) * inv);
    d
}

/// Whether grid time `t` lies within `2dt` of a delay `nT`, `n ≥ 1`.
pub fn near_delay(t: f64, period: Option<f64>, dt: f64) -> bool {
    match period {
        Some(p) => {
            let n = (t / p).round();
            n >= 1.0 && (t - n * p).abs() <= 2.0 * dt * (1.0 + 1e-9)
        }
        None => false,
    }
}

/// Largest Frobenius-norm mismatch between the central-difference derivative
/// of `ρ(t)` and the generator with the extracted rates applied to `ρ(t)`,
/// over interior grid points away from the delays.
pub fn master_residual(
    params: &ModelParams,
    trace: &AmplitudeTrace,
    rho0: &DensityMatrix,
) -> Result<f64> {
    let rates = extract_rates(trace)?;
    let grid = trace.grid();
    let initial = rho0.to_vec();
    let states: Vec<Vector4<Complex64>> = trace
        .values()
        .iter()
        .map(|&a| damping_matrix(a) * initial)
        .collect();
    let period = params.period().filter(|_| params.coupling.has_memory());
    let dt = grid.dt();
    let scale = Complex64::new(0.5 / dt, 0.0);
    let residual = (1..grid.len() - 1)
        .filter(|&k| !near_delay(grid.time(k), period, dt))
        .map(|k| {
            let lhs = (states[k + 1] - states[k - 1]) * scale;
            let rhs = rates.generator(k).0 * states[k];
            (lhs - rhs).norm()
        })
        .fold(0.0, f64::max);
    Ok(residual)
}
