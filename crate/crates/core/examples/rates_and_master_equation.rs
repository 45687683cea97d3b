//! Time-dependent decay rate and frequency shift read off a(t), and the
//! check that rho(t) obeys the corresponding time-local master equation.

use hnm::amplitude::amplitude_series;
use hnm::channel::{extract_rates, master_residual, DensityMatrix};
use hnm::{CouplingSpec, ModelParams, TimeGrid};
use num_complex::Complex64;

fn main() -> hnm::Result<()> {
    let params = ModelParams::new(
        CouplingSpec::Sinusoidal {
            gamma0: 1.0,
            period: 1.0,
            alpha: 0.8,
        },
        1.0,
    )?;
    let trace = amplitude_series(&params, &TimeGrid::new(1e-3, 3000)?)?;
    let rates = extract_rates(&trace)?;

    println!("{:>5}  {:>9}  {:>9}", "t", "gamma(t)", "eps(t)");
    for k in (0..trace.len()).step_by(250) {
        println!(
            "{:>5.2}  {:>9.5}  {:>9.5}",
            trace.grid().time(k),
            rates.gamma()[k],
            rates.eps()[k]
        );
    }

    let rho0 = DensityMatrix::from_populations(0.8, Complex64::new(0.2, 0.3))?;
    println!(
        "master-equation residual: {:.2e}",
        master_residual(&params, &trace, &rho0)?
    );
    Ok(())
}
