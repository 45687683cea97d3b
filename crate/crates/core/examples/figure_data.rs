//! Writes the survival-probability curves behind both figures as CSV.
//!
//!     cargo run --release --example figure_data -- out/figures

use std::path::PathBuf;

use hnm::cli::figures::{write_figure, Figure};

fn main() -> hnm::Result<()> {
    let dir = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from("figures"));
    for figure in [Figure::Fig2, Figure::Fig3] {
        for path in write_figure(figure, &dir)? {
            println!("{}", path.display());
        }
    }
    Ok(())
}
