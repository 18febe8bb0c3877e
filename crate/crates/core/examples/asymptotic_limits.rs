//! Large-ℓ harmonic limit and small-ℓ free-particle limit.

use circle_oscillator::asymptotics::{
    harmonic_limit, large_ell_envelope, pollution_state, small_ell_prediction, AsymptoticOrder,
};
use circle_oscillator::{OscillatorParams, Parity};

fn main() -> circle_oscillator::Result<()> {
    for beta in [0.0, 1.0, -1.0] {
        let r = harmonic_limit(&OscillatorParams::new(6.0, beta)?, 6)?;
        println!("ℓ = 6, β = {beta}: computed {:.9?}, max error {:.1e}", r.computed, r.max_abs_error);
    }

    let p = pollution_state(4.0)?;
    println!("\nH_A pollution state at ℓ = 4: E = {:.12}, mass beyond ℓ/2 {:.3}", p.energy, p.outer_mass);

    for order in [AsymptoticOrder::Leading, AsymptoticOrder::FirstCorrection] {
        let even = large_ell_envelope(2.1, 5.0, Parity::Even, order)?;
        let odd = large_ell_envelope(2.1, 5.0, Parity::Odd, order)?;
        println!("envelope ratios at E = 2.1, ℓ = 5 ({order:?}): even {even:.4}, odd {odd:.4}");
    }

    println!();
    for beta in [0.0, 1.0, -1.0] {
        let r = small_ell_prediction(&OscillatorParams::new(0.05, beta)?, 5)?;
        println!("ℓ = 0.05, β = {beta}: max relative error {:.2e}", r.max_rel_error);
        for (n, split) in r.splittings() {
            println!("  pair {n}: E_even - E_odd = {split:+.6}");
        }
    }
    Ok(())
}
