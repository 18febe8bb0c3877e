//! The single rung a† takes from an odd state into H_N, and a back into H_A,
//! plus the obstruction one rung further.

use circle_oscillator::grid::FINE_POINTS;
use circle_oscillator::ladder::{ladder_step_check_on, normal_even_state, obstruction_check};

fn main() -> circle_oscillator::Result<()> {
    let ell = 2.0;
    for k in 1..=3 {
        let s = ladder_step_check_on(ell, k, FINE_POINTS)?;
        println!("k = {k}: E_odd {:.8} -> H_N {:.8}", s.lower_odd_energy, s.lower_odd_energy + 1.0);
        println!(
            "  up:   residual {:.1e}, boundary {:.1e}, Rayleigh gap {:.9}, v(ℓ)/max {:.3}",
            s.up.eigen_residual, s.up_boundary_identity, s.up_rayleigh_gap, s.up_value_at_a
        );
        println!(
            "  down: residual {:.1e}, boundary {:.1e}, Rayleigh gap {:.9}, closure {:.1e}",
            s.down.eigen_residual, s.down_boundary_identity, s.down_rayleigh_gap, s.down_closure
        );
    }

    println!("\napplying a† once more to even states of H_N:");
    for k in 0..3 {
        let (energy, f) = normal_even_state(ell, k)?;
        let o = obstruction_check(&f, energy);
        println!(
            "  k = {k}: jump {:.4} vs threshold {:.4} -> discontinuous: {}",
            o.value_jump, o.threshold, o.discontinuous
        );
    }
    Ok(())
}
