//! Integer compositions and the polynomials `φₙ` of the series solution.
//!
//! `φₙ(x) = Σ_{m=1}^{n} bₙ⁽ᵐ⁾ (−x)ᵐ / m!`, where `bₙ⁽ᵐ⁾` sums `Π cₕᵢ` over all
//! ordered `m`-tuples of positive integers adding up to `n`. The sum over
//! compositions is the coefficient of `qⁿ` in `(Σₕ cₕ qʰ)ᵐ`, which is how it is
//! computed here; explicit enumeration is available through [`compositions`].

use crate::coupling::{CouplingSpec, ModelParams, ValidatedCoupling};
use crate::error::{Error, Result};

/// Largest `n` accepted by [`compositions`]; there are `2ⁿ⁻¹` compositions
/// of `n` in total.
pub const MAX_ENUMERATION_ORDER: usize = 20;

/// Largest order held by a [`PhiTable`].
pub const MAX_PHI_ORDER: usize = 512;

/// All ordered `m`-tuples of positive integers summing to `n`, in
/// lexicographic order.
pub fn compositions(n: usize, m: usize) -> Result<Vec<Vec<usize>>> {
    if m == 0 || m > n || n > MAX_ENUMERATION_ORDER {
        return Err(Error::OutOfRange(format!(
            "compositions need 1 <= m <= n <= {MAX_ENUMERATION_ORDER}, got n = {n}, m = {m}"
        )));
    }
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(m);
    extend_compositions(n, m, &mut current, &mut out);
    Ok(out)
}

fn extend_compositions(
    remaining: usize,
    parts: usize,
    current: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    if parts == 1 {
        current.push(remaining);
        out.push(current.clone());
        current.pop();
        return;
    }
    // Leave at least one unit for each of the other parts.
    for head in 1..=remaining - (parts - 1) {
        current.push(head);
        extend_compositions(remaining - head, parts - 1, current, out);
        current.pop();
    }
}

/// `bₙ⁽ᵐ⁾` for the coefficient sequence `coeffs = (c₁, c₂, ...)`, with
/// `cₕ = 0` beyond its end.
pub fn b_coefficient(coeffs: &[f64], n: usize, m: usize) -> Result<f64> {
    if m == 0 || m > n {
        return Err(Error::OutOfRange(format!(
            "need 1 <= m <= n, got n = {n}, m = {m}"
        )));
    }
    if n > MAX_PHI_ORDER {
        return Err(Error::OutOfRange(format!(
            "order {n} exceeds {MAX_PHI_ORDER}"
        )));
    }
    let c = |h: usize| coeffs.get(h.wrapping_sub(1)).copied().unwrap_or(0.0);
    // power[j] holds the coefficient of q^j in (Σ cₕ qʰ)^p.
    let mut power = vec![0.0; n + 1];
    power[0] = 1.0;
    for p in 1..=m {
        let mut next = vec![0.0; n + 1];
        for j in p..=n {
            next[j] = (1..=j - (p - 1)).map(|h| c(h) * power[j - h]).sum();
        }
        power = next;
    }
    Ok(power[n])
}

/// Triangular table of `bₙ⁽ᵐ⁾` for `1 ≤ m ≤ n ≤ max_order`, plus the scaled
/// polynomial coefficients used to evaluate `φₙ`.
#[derive(Debug, Clone, PartialEq)]
pub struct PhiTable {
    max_order: usize,
    // b[n-1][m-1]
    b: Vec<Vec<f64>>,
    // poly[n-1][m-1] = bₙ⁽ᵐ⁾ / m!
    poly: Vec<Vec<f64>>,
}

impl PhiTable {
    pub fn new(coupling: &ValidatedCoupling, max_order: usize) -> Result<Self> {
        if max_order > MAX_PHI_ORDER {
            return Err(Error::OutOfRange(format!(
                "phi table order {max_order} exceeds {MAX_PHI_ORDER}"
            )));
        }
        let mut b = Vec::with_capacity(max_order);
        let mut poly = Vec::with_capacity(max_order);
        match coupling.spec() {
            CouplingSpec::ExpComb { beta, .. } => {
                // bₙ⁽ᵐ⁾ = C(n−1, m−1) e^{−βn}
                for n in 1..=max_order {
                    let weight = (-beta * n as f64).exp();
                    let mut row_b = Vec::with_capacity(n);
                    let mut row_p = Vec::with_capacity(n);
                    let mut binom = 1.0;
                    let mut over_factorial = 1.0;
                    for m in 1..=n {
                        if m > 1 {
                            binom *= (n - m + 1) as f64 / (m - 1) as f64;
                        }
                        over_factorial /= m as f64;
                        row_b.push(binom * weight);
                        row_p.push(binom * over_factorial * weight);
                    }
                    b.push(row_b);
                    poly.push(row_p);
                }
            }
            spec => {
                let coeffs: Vec<f64> = (1..=max_order).map(|h| spec.coefficient(h)).collect();
                let table = composition_table(&coeffs, max_order);
                for (n_idx, row) in table.into_iter().enumerate() {
                    let mut over_factorial = 1.0;
                    let row_p = row
                        .iter()
                        .enumerate()
                        .map(|(m_idx, v)| {
                            over_factorial /= (m_idx + 1) as f64;
                            v * over_factorial
                        })
                        .collect();
                    debug_assert_eq!(row.len(), n_idx + 1);
                    b.push(row);
                    poly.push(row_p);
                }
            }
        }
        Ok(Self { max_order, b, poly })
    }

    pub fn max_order(&self) -> usize {
        self.max_order
    }

    /// `bₙ⁽ᵐ⁾`, or `None` outside `1 ≤ m ≤ n ≤ max_order`.
    pub fn b(&self, n: usize, m: usize) -> Option<f64> {
        if m == 0 || n == 0 {
            return None;
        }
        self.b.get(n - 1).and_then(|row| row.get(m - 1)).copied()
    }

    /// `φₙ(x)`.
    pub fn phi(&self, n: usize, x: f64) -> Result<f64> {
        let row = n
            .checked_sub(1)
            .and_then(|i| self.poly.get(i))
            .ok_or_else(|| {
                Error::OutOfRange(format!("phi order {n} outside 1..={}", self.max_order))
            })?;
        let y = -x;
        let inner = row.iter().rev().fold(0.0, |acc, &p| acc * y + p);
        Ok(inner * y)
    }
}

/// Row `n` holds `bₙ⁽ᵐ⁾` for `m = 1..=n`, filled by the recursion
/// `bₙ⁽ᵐ⁾ = Σₕ cₕ b_{n−h}⁽ᵐ⁻¹⁾` with `b₀⁽⁰⁾ = 1`.
fn composition_table(coeffs: &[f64], max_order: usize) -> Vec<Vec<f64>> {
    // full[n][m] for 0 <= m <= n <= max_order
    let mut full = vec![vec![0.0; max_order + 1]; max_order + 1];
    full[0][0] = 1.0;
    for n in 1..=max_order {
        for m in 1..=n {
            full[n][m] = (1..=n - (m - 1))
                .map(|h| coeffs[h - 1] * full[n - h][m - 1])
                .sum();
        }
    }
    full.into_iter()
        .enumerate()
        .skip(1)
        .map(|(n, row)| row[1..=n].to_vec())
        .collect()
}

/// `φₙ(x)` for the given model; builds only the coefficients it needs.
pub fn phi(params: &ModelParams, n: usize, x: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::OutOfRange("phi order must be at least 1".into()));
    }
    if let CouplingSpec::Sinusoidal { alpha, .. } = params.coupling.spec() {
        // (αx/2)ⁿ / n!, accumulated as a product to stay in range.
        return Ok((1..=n).fold(1.0, |acc, k| acc * alpha * x / (2.0 * k as f64)));
    }
    PhiTable::new(&params.coupling, n)?.phi(n, x)
}
