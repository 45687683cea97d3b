//! Four unrelated ways of computing the survival amplitude for the
//! unsmoothed comb (beta = 0, gamma0 T = 4), compared on [0, 3T].
//!
//!     cargo run --release --example backend_agreement

use std::time::Instant;

use hnm::amplitude::{
    amplitude_laplace, amplitude_series, amplitude_volterra, build_discrete_modes, LaplaceOptions,
    ModeOptions,
};
use hnm::{AmplitudeTrace, CouplingSpec, ModelParams, TimeGrid};

fn main() -> hnm::Result<()> {
    let params = ModelParams::new(
        CouplingSpec::ExpComb {
            gamma0: 4.0,
            period: 1.0,
            beta: 0.0,
        },
        0.0,
    )?;
    let grid = TimeGrid::new(0.005, 600)?;

    let timed =
        |name: &str, f: &dyn Fn() -> hnm::Result<AmplitudeTrace>| -> hnm::Result<AmplitudeTrace> {
            let start = Instant::now();
            let trace = f()?;
            println!("{name:<9} {:>8.1?}", start.elapsed());
            Ok(trace)
        };

    let series = timed("series", &|| amplitude_series(&params, &grid))?;
    let volterra = timed("volterra", &|| amplitude_volterra(&params, &grid))?;
    let laplace = timed("laplace", &|| {
        Ok(amplitude_laplace(&params, &grid, &LaplaceOptions::auto(&params, &grid))?.trace)
    })?;
    let modes = timed("modes", &|| {
        build_discrete_modes(&params, &ModeOptions::with_k(2000))?
            .diagonalize()?
            .trace(&grid)
    })?;

    for (name, other) in [
        ("volterra", &volterra),
        ("laplace", &laplace),
        ("modes", &modes),
    ] {
        println!(
            "max |series - {name}| = {:.2e}",
            series.max_deviation(other)?
        );
    }
    Ok(())
}
