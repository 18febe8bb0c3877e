//! Canonical structure on the circle: eigenvectors of `a` and `a†`, the
//! failure of the Weyl relations, and the commutator `[a_β, a_β†] = β` on
//! functions vanishing at the antipodal point.

use std::f64::consts::SQRT_2;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::{
    circular_shift, differentiate_samples, DiffMethod, Grid, SampledFunction, DEFAULT_POINTS,
};
use crate::ladder::{apply_a_beta, Ladder};
use crate::params::OscillatorParams;

/// Largest `|n|` accepted by [`annihilation_eigenpair`].
pub const MAX_MODE: i64 = 64;

#[derive(Debug, Clone, PartialEq)]
pub struct AnnihilationEigenpair {
    pub eigenvalue: Complex64,
    /// Index `m` of the sampled function `ξ_m` or `η_m`.
    pub mode: i64,
    pub function: SampledFunction,
    /// `‖(a - λ)f‖ / ‖f‖` (or with `a†`).
    pub residual: f64,
}

/// `ξ_n = e^{-x²/2} e^{inx/r}` or `η_n = e^{x²/2} e^{inx/r}` with analytic
/// derivative samples.
pub fn ladder_mode(grid: Grid, radius: f64, n: i64, which: Ladder) -> SampledFunction {
    let k = n as f64 / radius;
    let s = match which {
        Ladder::Plain => -1.0,
        Ladder::Dagger => 1.0,
    };
    let f = move |x: f64| Complex64::from_polar((0.5 * s * x * x).exp(), k * x);
    SampledFunction::from_fn(grid, f, move |x| f(x) * Complex64::new(s * x, k))
}

/// Eigenvalue `in/(√2 r)` of `a` (with `ξ_n`) or of `a†`.
///
/// `a† η_m = -im/(√2 r) η_m`, so the eigenvalue `in/(√2 r)` of `a†` belongs to
/// `η_{-n}`; that is the function returned for [`Ladder::Dagger`]. Both
/// spectra are `i/(√2 r) ℤ`.
pub fn annihilation_eigenpair(
    n: i64,
    params: &OscillatorParams,
    which: Ladder,
) -> Result<AnnihilationEigenpair> {
    annihilation_eigenpair_on(n, params, which, DEFAULT_POINTS)
}

pub fn annihilation_eigenpair_on(
    n: i64,
    params: &OscillatorParams,
    which: Ladder,
    n_points: usize,
) -> Result<AnnihilationEigenpair> {
    if n.abs() > MAX_MODE {
        return Err(Error::InvalidParams(format!("|n| = {} exceeds {MAX_MODE}", n.abs())));
    }
    let radius = params.radius();
    let grid = Grid::new(params.half_length(), n_points)?;
    let eigenvalue = Complex64::new(0.0, n as f64 / (SQRT_2 * radius));
    let mode = match which {
        Ladder::Plain => n,
        Ladder::Dagger => -n,
    };
    let function = ladder_mode(grid, radius, mode, which);
    let image = apply_a_beta(&function, 1.0, which);
    let defect: Vec<Complex64> = image
        .values()
        .iter()
        .zip(function.values())
        .map(|(a, f)| a - eigenvalue * f)
        .collect();
    let defect = SampledFunction::from_samples(grid, defect.clone(), defect)?;
    let residual = defect.norm() / function.norm();
    Ok(AnnihilationEigenpair { eigenvalue, mode, function, residual })
}

/// `x` mapped back into `[-ℓ, ℓ]`; points already inside are untouched.
fn wrap(x: f64, ell: f64) -> f64 {
    if x > ell {
        x - 2.0 * ell
    } else if x < -ell {
        x + 2.0 * ell
    } else {
        x
    }
}

/// `‖e^{itq} e^{isp} f - e^{-its} e^{isp} e^{itq} f‖ / ‖f‖` on the circle.
///
/// `e^{isp}` is the translation `f(x) -> f(x + s)` with wraparound, done by
/// Fourier interpolation of `f`; `e^{itq}` multiplies by `e^{itx}` with `x`
/// the sawtooth coordinate in `[-ℓ, ℓ]`. The translate of `e^{itq} f` is
/// `e^{it·wrap(x+s)} f(x+s)`, which avoids interpolating the phase jump.
pub fn weyl_defect(s: f64, t: f64, f: &SampledFunction) -> Result<f64> {
    let grid = *f.grid();
    let ell = grid.half_length();
    if s.abs() > ell {
        return Err(Error::InvalidParams(format!("shift |s| = {} exceeds ℓ = {ell}", s.abs())));
    }
    let shifted = if s == 0.0 {
        f.values().to_vec()
    } else {
        circular_shift(&grid, f.values(), s)
    };
    let phase = Complex64::from_polar(1.0, -t * s);
    let diff: Vec<Complex64> = grid
        .nodes()
        .iter()
        .zip(&shifted)
        .map(|(&x, &g)| {
            let lhs = Complex64::from_polar(1.0, t * x) * g;
            let rhs = phase * Complex64::from_polar(1.0, t * wrap(x + s, ell)) * g;
            lhs - rhs
        })
        .collect();
    let diff = SampledFunction::from_samples(grid, diff.clone(), diff)?;
    Ok(diff.norm() / f.norm())
}

/// A Gaussian of width `sigma` centred at `center`, periodized over the
/// circle so it is smooth at the antipodal point.
pub fn periodic_bump(grid: Grid, center: f64, sigma: f64) -> SampledFunction {
    let period = 2.0 * grid.half_length();
    let images = (3.0 * sigma / period).ceil() as i64 + 2;
    let term = move |x: f64| {
        (-images..=images).fold((0.0, 0.0), |(v, d), m| {
            let y = x - center + m as f64 * period;
            let g = (-0.5 * y * y / (sigma * sigma)).exp();
            (v + g, d - y / (sigma * sigma) * g)
        })
    };
    SampledFunction::from_real_fn(grid, term)
}

/// `‖(a_β a_β† - a_β† a_β) f - βf‖ / ‖f‖` for `f` vanishing at the antipodal
/// point.
///
/// Each operator acts through value and derivative samples; the one second
/// derivative needed, `f''`, is the Fourier derivative of the samples of `f'`.
pub fn commutator_residual(f: &SampledFunction, beta: f64) -> Result<f64> {
    let (left, _) = f.left();
    let (right, _) = f.right();
    let edge = left.norm().max(right.norm());
    if edge > 1e-10 * f.max_abs_value() {
        return Err(Error::Precondition(format!(
            "f(±ℓ) = {edge:e} does not vanish at the antipodal point"
        )));
    }
    let grid = *f.grid();
    let second = differentiate_samples(&grid, f.derivatives(), DiffMethod::Fourier)?;
    let xs = grid.nodes();
    let apply = |values: &[Complex64], derivs: &[Complex64], seconds: &[Complex64], s: f64| {
        // value and derivative of (βx g + s g')/√2
        let mut v = Vec::with_capacity(values.len());
        let mut d = Vec::with_capacity(values.len());
        for (j, &x) in xs.iter().enumerate() {
            v.push((values[j] * (beta * x) + derivs[j] * s) / SQRT_2);
            d.push((values[j] * beta + derivs[j] * (beta * x) + seconds[j] * s) / SQRT_2);
        }
        (v, d)
    };
    let (up_v, up_d) = apply(f.values(), f.derivatives(), &second, -1.0);
    let (down_v, down_d) = apply(f.values(), f.derivatives(), &second, 1.0);
    let outer = |v: &[Complex64], d: &[Complex64], s: f64| -> Vec<Complex64> {
        xs.iter().enumerate().map(|(j, &x)| (v[j] * (beta * x) + d[j] * s) / SQRT_2).collect()
    };
    let a_adag = outer(&up_v, &up_d, 1.0);
    let adag_a = outer(&down_v, &down_d, -1.0);
    let defect: Vec<Complex64> = a_adag
        .iter()
        .zip(&adag_a)
        .zip(f.values())
        .map(|((p, q), v)| p - q - v * beta)
        .collect();
    let defect = SampledFunction::from_samples(grid, defect.clone(), defect)?;
    Ok(defect.norm() / f.norm())
}

/// Report of one [`weyl_defect`] configuration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WeylCase {
    pub shift: f64,
    pub frequency: f64,
    pub center: f64,
    pub defect: f64,
}

/// The wrapping configuration: shift `ℓ/2`, frequency 1, and a bump centred
/// at `ℓ - s/4` so that part of it is carried through the antipodal point.
pub fn wrapping_configuration(ell: f64) -> Result<WeylCase> {
    let grid = Grid::new(ell, DEFAULT_POINTS)?;
    let shift = 0.5 * ell;
    let center = ell - 0.25 * shift;
    let f = periodic_bump(grid, center, 0.15 * ell);
    Ok(WeylCase { shift, frequency: 1.0, center, defect: weyl_defect(shift, 1.0, &f)? })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn ground_mode_is_v_g() {
        let p = OscillatorParams::from_radius(1.0, 1.0).unwrap();
        let e = annihilation_eigenpair(0, &p, Ladder::Plain).unwrap();
        assert_eq!(e.eigenvalue, Complex64::new(0.0, 0.0));
        for (x, v) in e.function.nodes().iter().zip(e.function.values()) {
            assert!((v.re - (-0.5 * x * x).exp()).abs() < 1e-15 && v.im == 0.0);
        }
        assert!(e.residual < 1e-12);
    }

    #[test]
    fn unit_radius_first_mode() {
        let p = OscillatorParams::from_radius(1.0, 1.0).unwrap();
        let e = annihilation_eigenpair(1, &p, Ladder::Plain).unwrap();
        assert!((e.eigenvalue.im - 1.0 / SQRT_2).abs() < 1e-15);
        assert!(e.residual <= 1e-7);
    }

    #[test]
    fn creation_eigenvalue_uses_reflected_mode() {
        let p = OscillatorParams::from_radius(2.0, 1.0).unwrap();
        let e = annihilation_eigenpair(3, &p, Ladder::Dagger).unwrap();
        assert!((e.eigenvalue.im - 3.0 / (2.0 * SQRT_2)).abs() < 1e-15);
        assert_eq!(e.mode, -3);
        assert!(e.residual <= 1e-7, "{}", e.residual);
    }

    #[test]
    fn modes_are_continuous_on_the_circle() {
        let g = Grid::new(PI, 513).unwrap();
        let f = ladder_mode(g, 1.0, 5, Ladder::Plain);
        assert!(f.value_jump() < 1e-12);
    }

    #[test]
    fn weyl_trivial_cases() {
        let g = Grid::new(2.0, 513).unwrap();
        let f = periodic_bump(g, 1.2, 0.4);
        assert!(weyl_defect(0.0, 0.7, &f).unwrap() <= 1e-10);
        assert!(weyl_defect(0.9, 0.0, &f).unwrap() <= 1e-10);
    }

    #[test]
    fn weyl_wrapping_defect_matches_wrapped_mass() {
        let ell = 2.0;
        let case = wrapping_configuration(ell).unwrap();
        assert!(case.defect > 1e-3);
        // the defect is |1 - e^{-2iℓt}| times the norm of f on the arc that
        // the shift carries through A, here [-ℓ, -ℓ + s]
        let g = Grid::new(ell, 4097).unwrap();
        let f = periodic_bump(g, case.center, 0.15 * ell);
        let wrapped: Vec<f64> = g
            .nodes()
            .iter()
            .zip(f.real_values())
            .map(|(&x, v)| if x < -ell + case.shift { v } else { 0.0 })
            .collect();
        let w = SampledFunction::from_real_samples(g, &wrapped, &wrapped).unwrap();
        let expected = (Complex64::new(1.0, 0.0) - Complex64::from_polar(1.0, -2.0 * ell)).norm()
            * w.norm()
            / f.norm();
        assert!((case.defect - expected).abs() < 2e-2 * expected, "{} vs {expected}", case.defect);
    }

    #[test]
    fn commutator_examples() {
        let ell = 2.0;
        let g = Grid::new(ell, 513).unwrap();
        let k = PI / ell;
        let f = SampledFunction::from_real_fn(g, |x| ((k * x).sin(), k * (k * x).cos()));
        assert!(commutator_residual(&f, 1.0).unwrap() <= 1e-6);
        let f2 = SampledFunction::from_real_fn(g, |x| ((2.0 * k * x).sin(), 2.0 * k * (2.0 * k * x).cos()));
        assert!(commutator_residual(&f2, 0.0).unwrap() <= 1e-6);
        let f3 = SampledFunction::from_real_fn(g, |x| {
            let e = (-x * x).exp();
            ((k * x).sin() * e, (k * (k * x).cos() - 2.0 * x * (k * x).sin()) * e)
        });
        assert!(commutator_residual(&f3, -1.0).unwrap() <= 1e-5);
    }

    #[test]
    fn commutator_requires_vanishing_at_a() {
        let g = Grid::new(1.0, 513).unwrap();
        let f = SampledFunction::from_real_fn(g, |x| ((x).cos(), -(x).sin()));
        assert!(matches!(commutator_residual(&f, 1.0), Err(Error::Precondition(_))));
    }
}
