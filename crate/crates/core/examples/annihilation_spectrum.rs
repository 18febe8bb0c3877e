//! Eigenfunctions of a and a† on the circle: the spectrum is i/(√2 r) ℤ.

use circle_oscillator::canonical::annihilation_eigenpair;
use circle_oscillator::ladder::Ladder;
use circle_oscillator::OscillatorParams;

fn main() -> circle_oscillator::Result<()> {
    let params = OscillatorParams::from_radius(1.0, 1.0)?;
    println!("r = 1");
    for which in [Ladder::Plain, Ladder::Dagger] {
        for n in -3..=3 {
            let e = annihilation_eigenpair(n, &params, which)?;
            println!("  {which:?} n = {n:>2}: λ = {:+.6}i  mode {:>2}  residual {:.1e}", e.eigenvalue.im, e.mode, e.residual);
        }
    }
    Ok(())
}
