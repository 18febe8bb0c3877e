//! How the levels move with the extension parameter β at fixed ℓ; odd
//! levels stay put.

use circle_oscillator::asymptotics::free_particle_delta_spectrum;
use circle_oscillator::shooting::lowest_levels;
use circle_oscillator::{OscillatorParams, Parity};

fn main() -> circle_oscillator::Result<()> {
    let ell = 1.0;
    println!("{:>6} {:>14} {:>14} {:>14}", "β", "E_0 (even)", "E_1 (odd)", "E_2 (even)");
    for beta in [-3.0, -2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0, 3.0] {
        let levels = lowest_levels(&OscillatorParams::new(ell, beta)?, 6)?;
        let even = levels.of_parity(Parity::Even);
        let odd = levels.of_parity(Parity::Odd);
        println!("{beta:>6.1} {:>14.9} {:>14.9} {:>14.9}", even[0], odd[0], even[1]);
    }

    println!("\nfree particle with a point interaction, ℓ = 0.1, β = 2:");
    for l in free_particle_delta_spectrum(&OscillatorParams::new(0.1, 2.0)?, 4) {
        println!("  {:<4} E = {:.6}  k = {:.6}", l.parity, l.energy, l.wavenumber);
    }
    Ok(())
}
