//! The unsmoothed comb is exactly a ladder of bath modes at 2 pi k / T with
//! g_k^2 = gamma0 / T. Truncating to |k| <= K and diagonalizing gives every
//! amplitude in the one-excitation sector.
//!
//!     cargo run --release --example discrete_comb_modes

use hnm::amplitude::{amplitude_modes, build_discrete_modes, ModeOptions};
use hnm::{CouplingSpec, ModelParams, TimeGrid};

fn main() -> hnm::Result<()> {
    let params = ModelParams::new(
        CouplingSpec::ExpComb {
            gamma0: 4.0,
            period: 1.0,
            beta: 0.0,
        },
        0.0,
    )?;
    let system = build_discrete_modes(&params, &ModeOptions::with_k(500))?;
    let spectrum = system.diagonalize()?;
    let grid = TimeGrid::new(0.25, 12)?;
    let trajectory = amplitude_modes(&system, &grid)?;

    println!("dimension {}", system.dimension());
    println!(
        "{:>5}  {:>10}  {:>10}  {:>10}",
        "t", "|a|^2", "bath", "total - 1"
    );
    for (i, (t, a)) in trajectory.trace.samples().enumerate() {
        let bath: f64 = trajectory.mode_amplitudes[i]
            .iter()
            .map(|c| c.norm_sqr())
            .sum();
        let defect = trajectory.total_probability(&spectrum, i) - 1.0;
        println!(
            "{t:>5.2}  {:>10.6}  {bath:>10.6}  {defect:>10.1e}",
            a.norm_sqr()
        );
    }
    Ok(())
}
