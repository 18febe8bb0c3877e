//! Fourier-Galerkin levels beside the shooting levels as N grows.

use circle_oscillator::galerkin::{build_matrix, oracle_spectrum, rescaling_check};
use circle_oscillator::shooting::lowest_levels;
use circle_oscillator::OscillatorParams;

fn main() -> circle_oscillator::Result<()> {
    for beta in [0.0, 1.0] {
        let params = OscillatorParams::new(2.0, beta)?;
        let exact = lowest_levels(&params, 4)?.energies();
        println!("ℓ = 2, β = {beta}; shooting {exact:.10?}");
        for n in [16, 32, 64, 128, 256] {
            let g = oracle_spectrum(&params, n, 4)?;
            let err = g.iter().zip(&exact).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            println!("  N = {n:>3}: max error {err:.2e}");
        }
    }
    // the β = 0 error hits rounding by N = 32; the delta term only converges like 1/N

    let m = build_matrix(&OscillatorParams::new(2.0, 0.0)?, 32)?;
    println!("\nasymmetry of the N = 32 matrix: {:e}", m.asymmetry());

    let r = rescaling_check(0.8, 64)?;
    println!("rescaled vs direct at r = 0.8: {:.2e} (passed: {})", r.max_eigenvalue_difference, r.passed);
    Ok(())
}
