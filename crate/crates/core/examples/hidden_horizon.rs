//! A mirror-like coupling looks perfectly Markovian until the first echo.
//!
//! Prints the worst semigroup defect |a(t+s) - a(t)a(s)| for each value of
//! t + s, and the horizon up to which it stays below 1e-10.
//!
//!     cargo run --release --example hidden_horizon

use hnm::amplitude::amplitude_series;
use hnm::markovianity::defect_report;
use hnm::{CouplingSpec, ModelParams, TimeGrid};

fn main() -> hnm::Result<()> {
    let params = ModelParams::new(
        CouplingSpec::Sinusoidal {
            gamma0: 1.0,
            period: 1.0,
            alpha: 1.0,
        },
        0.0,
    )?;
    let trace = amplitude_series(&params, &TimeGrid::new(0.001, 3000)?)?;
    let report = defect_report(&trace, Some(1e-10))?;

    println!("{:>6}  {:>12}", "t+s", "max defect");
    for (t, s, defect) in report.pairs.iter().step_by(250) {
        println!("{:>6.3}  {:>12.3e}", t + s, defect);
    }
    println!("hidden horizon: {} (period T = 1)", report.horizon_estimate);
    Ok(())
}
