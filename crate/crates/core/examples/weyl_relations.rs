//! Weyl relation e^{itq} e^{isp} = e^{-its} e^{isp} e^{itq} on the circle,
//! and the commutator [p, q] on smooth periodic states.

use circle_oscillator::canonical::{commutator_residual, periodic_bump, weyl_defect, wrapping_configuration};
use circle_oscillator::grid::Grid;

fn main() -> circle_oscillator::Result<()> {
    let ell = 3.0;
    let grid = Grid::new(ell, 513)?;
    let f = periodic_bump(grid, 0.0, 0.4);
    for (s, t) in [(0.3, 0.5), (0.7, 1.0), (1.0, 2.0)] {
        println!("s = {s}, t = {t}: defect {:.2e}", weyl_defect(s, t, &f)?);
    }

    let w = wrapping_configuration(ell)?;
    println!("bump carried through A (centre {:.3}, shift {:.2}): defect {:.3}", w.center, w.shift, w.defect);

    for beta in [0.0, 1.0, -1.0] {
        println!("β = {beta}: commutator residual {:.2e}", commutator_residual(&f, beta)?);
    }
    Ok(())
}
