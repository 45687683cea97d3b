//! The reduced dynamics is an amplitude-damping channel. Its Choi matrix
//! has eigenvalues {0, 0, 1 - |a|^2, 1 + |a|^2}, so complete positivity is
//! exactly |a| <= 1.

use hnm::channel::{
    channel_superoperator, choi_matrix, evolve, hermitian_eigenvalues, DensityMatrix,
};
use num_complex::Complex64;

fn main() -> hnm::Result<()> {
    let plus = DensityMatrix::from_populations(0.5, Complex64::new(0.5, 0.0))?;
    for r in [1.0, 0.8, 0.5, 0.0] {
        let a = Complex64::from_polar(r, 0.3);
        let rho = evolve(&plus, a)?;
        println!(
            "|a| = {r:.1}: rho00 = {:.3}, |rho01| = {:.3}, min Choi eigenvalue = {:+.3}",
            rho.r00().re,
            rho.r01().norm(),
            hermitian_eigenvalues(&choi_matrix(a))[0]
        );
    }
    println!(
        "|a| = 1.1: min Choi eigenvalue = {:+.3}",
        hermitian_eigenvalues(&choi_matrix(Complex64::new(1.1, 0.0)))[0]
    );

    let (a, b) = (
        Complex64::from_polar(0.9, 0.4),
        Complex64::from_polar(0.7, -1.1),
    );
    let product = channel_superoperator(a)?.compose(&channel_superoperator(b)?);
    println!(
        "|L(a)L(b) - L(ab)| = {:.1e}",
        product.max_abs_diff(&channel_superoperator(a * b)?)
    );
    Ok(())
}
