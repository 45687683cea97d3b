//! The polynomial coefficients b_n^(m) sum products of Fourier coefficients
//! over compositions of n into m parts.

use hnm::amplitude::{b_coefficient, compositions};

fn main() -> hnm::Result<()> {
    for m in 1..=4 {
        let parts: Vec<String> = compositions(4, m)?
            .iter()
            .map(|c| format!("{c:?}"))
            .collect();
        println!("4 into {m}: {}", parts.join(" "));
    }
    let coeffs = [-0.5, 0.25, -0.125, 0.0625];
    for m in 1..=4 {
        println!("b_4^({m}) = {}", b_coefficient(&coeffs, 4, m)?);
    }
    Ok(())
}
