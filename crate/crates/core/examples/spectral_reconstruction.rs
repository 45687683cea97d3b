//! Form factor, self-energy and the density recovered from the self-energy
//! just above the real axis.

use hnm::coupling::{validate_coupling, CouplingSpec, DEFAULT_POSITIVITY_SAMPLES};
use num_complex::Complex64;

fn main() -> hnm::Result<()> {
    let coupling = validate_coupling(
        CouplingSpec::CustomFourier {
            gamma0: 1.0,
            period: 1.0,
            coeffs: vec![-0.3, 0.1, -0.05],
        },
        DEFAULT_POSITIVITY_SAMPLES,
    )?;
    println!(
        "{:>7}  {:>10}  {:>10}  {:>18}",
        "omega", "density", "recovered", "self-energy"
    );
    for k in 0..=8 {
        let omega = k as f64 * std::f64::consts::PI / 4.0;
        let sigma = coupling.self_energy(Complex64::new(omega, 1e-3))?;
        println!(
            "{omega:>7.3}  {:>10.6}  {:>10.6}  {:>8.4}{:+8.4}i",
            coupling.spectral_density(omega)?,
            coupling.reconstruct_density(omega, 1e-9)?,
            sigma.re,
            sigma.im
        );
    }

    let rejected = validate_coupling(
        CouplingSpec::CustomFourier {
            gamma0: 1.0,
            period: 1.0,
            coeffs: vec![0.9],
        },
        DEFAULT_POSITIVITY_SAMPLES,
    );
    println!("c1 = 0.9: {}", rejected.unwrap_err());
    Ok(())
}
