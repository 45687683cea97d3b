//! Eigendecomposition of real symmetric arrowhead matrices
//!
//! ```text
//! ⎡ d₀  z₁  z₂ … ⎤
//! ⎢ z₁  d₁       ⎥
//! ⎢ z₂      d₂   ⎥
//! ⎣ ⋮          ⋱ ⎦
//! ```
//!
//! which is the shape of the one-excitation Hamiltonian of a qubit coupled to
//! discrete modes. Eigenvalues are the roots of the secular function
//! `f(λ) = d₀ − λ − Σₖ zₖ²/(dₖ − λ)`, exactly one per gap between consecutive
//! poles plus one on each side. Each root is stored as an offset from its
//! nearest pole so that the differences `λⱼ − dₖ` entering the eigenvectors
//! keep full relative accuracy.
//!
//! Eigenvectors are built from couplings recomputed from the computed
//! eigenvalues (the Gu–Eisenstat construction), which makes them numerically
//! orthogonal even where eigenvalues crowd against poles. Total cost is
//! `O(n²)` time and `O(n)` memory.

use crate::error::{Error, Result};

const MAX_ITERATIONS: usize = 200;

#[derive(Debug, Clone)]
pub struct ArrowheadEigen {
    shaft: f64,
    /// Poles coupled to the shaft, increasing.
    poles: Vec<f64>,
    /// Position of each coupled pole in the caller's ordering.
    pole_index: Vec<usize>,
    /// Recomputed couplings, one per coupled pole.
    couplings: Vec<f64>,
    /// Each coupled eigenvalue as (anchor pole, offset).
    roots: Vec<(usize, f64)>,
    /// `v_j[0]²` for each coupled eigenvalue.
    weights: Vec<f64>,
    /// Uncoupled modes: (caller index, eigenvalue).
    deflated: Vec<(usize, f64)>,
    n_modes: usize,
}

impl ArrowheadEigen {
    /// `poles` must be strictly increasing; `couplings[k]` links pole `k` to
    /// the shaft. Couplings negligible against the matrix norm are deflated.
    pub fn solve(shaft: f64, poles: &[f64], couplings: &[f64]) -> Result<Self> {
        if poles.len() != couplings.len() {
            return Err(Error::BadParameter(format!(
                "{} poles but {} couplings",
                poles.len(),
                couplings.len()
            )));
        }
        if poles.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::BadParameter(
                "poles must be strictly increasing".into(),
            ));
        }
        if !shaft.is_finite() || poles.iter().chain(couplings).any(|v| !v.is_finite()) {
            return Err(Error::BadParameter(
                "arrowhead entries must be finite".into(),
            ));
        }

        let coupling_norm = couplings.iter().map(|z| z * z).sum::<f64>().sqrt();
        let scale = poles.iter().fold(shaft.abs(), |m, p| m.max(p.abs())) + coupling_norm;
        let deflation_tol = 8.0 * f64::EPSILON * scale;

        let mut kept_poles = Vec::new();
        let mut kept_z = Vec::new();
        let mut pole_index = Vec::new();
        let mut deflated = Vec::new();
        for (k, (&d, &z)) in poles.iter().zip(couplings).enumerate() {
            if z.abs() <= deflation_tol {
                deflated.push((k, d));
            } else {
                kept_poles.push(d);
                kept_z.push(z);
                pole_index.push(k);
            }
        }

        let secular = Secular {
            shaft,
            poles: &kept_poles,
            z2: kept_z.iter().map(|z| z * z).collect(),
        };
        let m = kept_poles.len();
        let roots: Vec<(usize, f64)> = if m == 0 {
            Vec::new()
        } else {
            (0..=m).map(|j| secular.root(j)).collect::<Result<_>>()?
        };

        let mut this = Self {
            shaft,
            poles: kept_poles,
            pole_index,
            couplings: Vec::new(),
            roots,
            weights: Vec::new(),
            deflated,
            n_modes: poles.len(),
        };
        this.couplings = this.recompute_couplings(&kept_z);
        this.weights = (0..this.roots.len())
            .map(|j| {
                let norm2 = 1.0
                    + this
                        .couplings
                        .iter()
                        .enumerate()
                        .map(|(k, z)| {
                            let r = z / this.gap(j, k);
                            r * r
                        })
                        .sum::<f64>();
                1.0 / norm2
            })
            .collect();
        Ok(this)
    }

    /// `λⱼ − dₖ` for coupled eigenvalue `j` and coupled pole `k`.
    pub(crate) fn gap(&self, j: usize, k: usize) -> f64 {
        let (anchor, offset) = self.roots[j];
        (self.poles[anchor] - self.poles[k]) + offset
    }

    /// Couplings for which the computed eigenvalues are exact:
    /// `zₖ² = −Πⱼ(λⱼ − dₖ) / Π_{i≠k}(dᵢ − dₖ)`, accumulated as ratios close
    /// to one using the interlacing `λ₀ < d₀ < λ₁ < d₁ < … < λₘ`.
    fn recompute_couplings(&self, original: &[f64]) -> Vec<f64> {
        let m = self.poles.len();
        (0..m)
            .map(|k| {
                let mut prod = -self.gap(0, k) * self.gap(m, k);
                for i in 0..m {
                    if i < k {
                        prod *= self.gap(i + 1, k) / (self.poles[i] - self.poles[k]);
                    } else if i > k {
                        prod *= self.gap(i, k) / (self.poles[i] - self.poles[k]);
                    }
                }
                prod.max(0.0).sqrt().copysign(original[k])
            })
            .collect()
    }

    /// Dimension of the full matrix.
    pub fn dim(&self) -> usize {
        self.n_modes + 1
    }

    pub fn shaft(&self) -> f64 {
        self.shaft
    }

    /// Eigenvalues coupled to the shaft, increasing.
    pub fn coupled_eigenvalues(&self) -> impl Iterator<Item = f64> + '_ {
        self.roots.iter().map(|&(a, off)| self.poles[a] + off)
    }

    /// All eigenvalues, increasing.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut all: Vec<f64> = self.coupled_eigenvalues().collect();
        if self.roots.is_empty() {
            all.push(self.shaft);
        }
        all.extend(self.deflated.iter().map(|&(_, d)| d));
        all.sort_by(f64::total_cmp);
        all
    }

    /// `|⟨e₀|vⱼ⟩|²` for every coupled eigenvalue, in the order of
    /// [`coupled_eigenvalues`](Self::coupled_eigenvalues).
    pub fn shaft_weights(&self) -> &[f64] {
        &self.weights
    }

    /// Number of eigenvectors with nonzero shaft component.
    pub fn n_coupled(&self) -> usize {
        self.roots.len().max(1)
    }

    /// Position of coupled pole `k` in the caller's ordering.
    pub(crate) fn pole_position(&self, k: usize) -> usize {
        self.pole_index[k]
    }

    pub(crate) fn coupled_poles(&self) -> usize {
        self.poles.len()
    }

    pub(crate) fn coupling(&self, k: usize) -> f64 {
        self.couplings[k]
    }

    /// Full orthonormal eigenvector basis as `(eigenvalue, vector)` pairs,
    /// vectors indexed as `[shaft, mode₀, mode₁, …]`. Dense; meant for small
    /// systems and checks.
    pub fn eigenpairs(&self) -> Vec<(f64, Vec<f64>)> {
        let dim = self.dim();
        let mut out = Vec::with_capacity(dim);
        if self.roots.is_empty() {
            let mut v = vec![0.0; dim];
            v[0] = 1.0;
            out.push((self.shaft, v));
        }
        for (j, lambda) in self.coupled_eigenvalues().enumerate() {
            let head = self.weights[j].sqrt();
            let mut v = vec![0.0; dim];
            v[0] = head;
            for k in 0..self.poles.len() {
                v[1 + self.pole_index[k]] = self.couplings[k] * head / self.gap(j, k);
            }
            out.push((lambda, v));
        }
        for &(idx, d) in &self.deflated {
            let mut v = vec![0.0; dim];
            v[1 + idx] = 1.0;
            out.push((d, v));
        }
        out.sort_by(|a, b| a.0.total_cmp(&b.0));
        out
    }
}

struct Secular<'a> {
    shaft: f64,
    poles: &'a [f64],
    z2: Vec<f64>,
}

impl Secular<'_> {
    /// `f(d_anchor + τ)` and its derivative.
    fn eval(&self, anchor: usize, tau: f64) -> (f64, f64) {
        let base = self.poles[anchor];
        let mut value = self.shaft - base - tau;
        let mut slope = -1.0;
        for (k, (&d, &z2)) in self.poles.iter().zip(&self.z2).enumerate() {
            let diff = if k == anchor { -tau } else { (d - base) - tau };
            let r = z2 / diff;
            value -= r;
            slope -= r / diff;
        }
        (value, slope)
    }

    /// Root number `j` (0 = below all poles, m = above all poles) as
    /// `(anchor, offset)`.
    fn root(&self, j: usize) -> Result<(usize, f64)> {
        let m = self.poles.len();
        let norm = self.z2.iter().sum::<f64>().sqrt();
        let (anchor, lo, hi) = if j == 0 {
            let lo = (self.shaft - self.poles[0]).min(0.0) - norm;
            (0, lo, 0.0)
        } else if j == m {
            let hi = (self.shaft - self.poles[m - 1]).max(0.0) + norm;
            (m - 1, 0.0, hi)
        } else {
            let width = self.poles[j] - self.poles[j - 1];
            let (mid_value, _) = self.eval(j - 1, 0.5 * width);
            if mid_value >= 0.0 {
                (j, -0.5 * width, 0.0)
            } else {
                (j - 1, 0.0, 0.5 * width)
            }
        };
        Ok((anchor, self.bracketed_root(anchor, lo, hi)?))
    }

    /// Safeguarded Newton iteration for the decreasing function `τ ↦ f`
    /// on `(lo, hi)` with `f(lo) ≥ 0 ≥ f(hi)`.
    fn bracketed_root(&self, anchor: usize, mut lo: f64, mut hi: f64) -> Result<f64> {
        let mut tau = 0.5 * (lo + hi);
        for _ in 0..MAX_ITERATIONS {
            let (value, slope) = self.eval(anchor, tau);
            if value == 0.0 {
                return Ok(tau);
            }
            if value > 0.0 {
                lo = tau;
            } else {
                hi = tau;
            }
            let mut next = tau - value / slope;
            if !(next > lo && next < hi) {
                next = 0.5 * (lo + hi);
            }
            let tol = 2.0 * f64::EPSILON * next.abs().max(f64::MIN_POSITIVE);
            if (next - tau).abs() <= tol || hi - lo <= tol {
                return Ok(next);
            }
            tau = next;
        }
        Err(Error::BadParameter(format!(
            "secular equation did not converge near pole {}",
            self.poles[anchor]
        )))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_by_two() {
        // [[0, g], [g, 0]] has eigenvalues ±g with equal weights.
        let g = 0.7;
        let eig = ArrowheadEigen::solve(0.0, &[0.0], &[g]).unwrap();
        let vals = eig.eigenvalues();
        assert!((vals[0] + g).abs() < 1e-15 && (vals[1] - g).abs() < 1e-15);
        for w in eig.shaft_weights() {
            assert!((w - 0.5).abs() < 1e-15);
        }
    }

    #[test]
    fn deflation() {
        let eig = ArrowheadEigen::solve(1.0, &[-1.0, 0.5, 2.0], &[0.3, 0.0, 0.2]).unwrap();
        assert_eq!(eig.dim(), 4);
        assert_eq!(eig.n_coupled(), 3);
        let vals = eig.eigenvalues();
        assert!(vals.contains(&0.5));
        let pairs = eig.eigenpairs();
        let deflated = pairs.iter().find(|(l, _)| *l == 0.5).unwrap();
        assert_eq!(deflated.1, vec![0.0, 0.0, 1.0, 0.0]);
    }

    #[test]
    fn rejects_unsorted_poles() {
        assert!(ArrowheadEigen::solve(0.0, &[1.0, 1.0], &[0.1, 0.1]).is_err());
        assert!(ArrowheadEigen::solve(0.0, &[1.0], &[0.1, 0.1]).is_err());
    }

    #[test]
    fn trace_and_weights_sum() {
        let poles: Vec<f64> = (-20..=20).map(|k| k as f64 * 0.5).collect();
        let z = vec![0.3; poles.len()];
        let eig = ArrowheadEigen::solve(0.25, &poles, &z).unwrap();
        let trace: f64 = eig.eigenvalues().iter().sum();
        let expected = 0.25 + poles.iter().sum::<f64>();
        assert!((trace - expected).abs() < 1e-11);
        let total: f64 = eig.shaft_weights().iter().sum();
        assert!((total - 1.0).abs() < 1e-13);
    }
}
