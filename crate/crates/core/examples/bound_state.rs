//! With alpha = 1 and eps0 T a multiple of 2 pi the excitation never fully
//! leaves: |a|^2 settles at 1/(1 + gamma0 T/2)^2. Half a period off
//! resonance it decays.

use std::f64::consts::PI;

use hnm::amplitude::amplitude_series;
use hnm::markovianity::bound_state_check;
use hnm::{CouplingSpec, ModelParams, TimeGrid};

fn main() -> hnm::Result<()> {
    let grid = TimeGrid::new(0.01, 1000)?;
    for eps0 in [2.0 * PI, PI] {
        let params = ModelParams::new(
            CouplingSpec::Sinusoidal {
                gamma0: 1.0,
                period: 1.0,
                alpha: 1.0,
            },
            eps0,
        )?;
        let report = bound_state_check(&params, &amplitude_series(&params, &grid)?)?;
        println!(
            "eps0 T = {:.4}: predicted {}, |a|^2 on [9T, 10T] in [{:.3e}, {:.3e}], asymptote {:?}",
            eps0, report.predicted, report.tail_min_abs2, report.tail_max_abs2, report.asymptote
        );
    }
    Ok(())
}
