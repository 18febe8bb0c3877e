//! Even and odd Weber solutions, their Wronskian, and the Hermite case.

use circle_oscillator::verify::hermite_weber;
use circle_oscillator::weber::{weber, weber_ode, wronskian};
use circle_oscillator::Parity;

fn main() -> circle_oscillator::Result<()> {
    let energy = 1.3;
    println!("E = {energy}");
    println!("{:>6} {:>14} {:>14} {:>14} {:>10}", "x", "u_e", "u_o", "W - 1", "ode diff");
    for x in [0.0, 0.5, 1.0, 2.0, 3.0, 4.0] {
        let e = weber(energy, Parity::Even, x)?;
        let o = weber(energy, Parity::Odd, x)?;
        let ode = weber_ode(energy, Parity::Even, x)?;
        let w = wronskian(energy, x)?;
        println!(
            "{x:>6.2} {:>14.6e} {:>14.6e} {:>14.2e} {:>10.2e}",
            e.value,
            o.value,
            w - 1.0,
            (ode.value - e.value).abs() / e.value.abs().max(1.0)
        );
    }

    // at E = n + 1/2 the parity solution is e^{-x²/2} H_n(x), normalized at 0
    println!("\nHermite case, n = 3:");
    for x in [0.5, 1.5, 2.5] {
        let exact = hermite_weber(3, x);
        let u = weber(3.5, Parity::Odd, x)?;
        println!("  x = {x}: {:.12} vs {:.12}", u.value, exact.value);
    }
    Ok(())
}
