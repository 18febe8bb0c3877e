//! Lowest levels of H, H_N and H_A at one half-length, with eigenfunctions.

use circle_oscillator::shooting::{eigenfunction, lowest_levels};
use circle_oscillator::OscillatorParams;

fn main() -> circle_oscillator::Result<()> {
    let ell = 2.0;
    for (name, beta) in [("H", 0.0), ("H_N", 1.0), ("H_A", -1.0)] {
        let params = OscillatorParams::new(ell, beta)?;
        let levels = lowest_levels(&params, 6)?;
        println!("{name} (ℓ = {ell}, β = {beta}):");
        for (n, l) in levels.levels.iter().enumerate() {
            println!("  n = {n}  {:<4} E = {:.12}  residual {:.1e}", l.parity, l.energy, l.residual);
        }
    }

    let params = OscillatorParams::new(ell, 0.0)?;
    let pair = eigenfunction(&params, 2, 513)?;
    let f = &pair.function;
    println!(
        "\nu_2 of H: E = {:.10}, norm {:.12}, jump at A {:.1e}",
        pair.energy,
        f.norm(),
        f.value_jump()
    );
    Ok(())
}
