//! Parity solutions of the oscillator equation `-½u'' + ½x²u = Eu`:
//!
//! ```text
//! u_e(E, x) = e^{-x²/2} ₁F₁(1/4 - E/2, 1/2; x²)
//! u_o(E, x) = x e^{-x²/2} ₁F₁(3/4 - E/2, 3/2; x²)
//! ```
//!
//! normalized by `u_e(0) = 1, u_e'(0) = 0, u_o(0) = 0, u_o'(0) = 1`, so the
//! Wronskian `u_e u_o' - u_e' u_o` is identically one.
//!
//! Two independent routes are provided. The series route sums `₁F₁` in
//! double-double arithmetic, which absorbs the cancellation that plain
//! doubles suffer for `E ≫ 1` and `x > 1`. The ODE route integrates from the
//! origin with [`WeberOde`]. [`weber_even`] and [`weber_odd`] use the series
//! and fall back to the ODE only where even double-double runs out of digits.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::{Grid, SampledFunction};
use crate::ode::WeberOde;
use crate::params::Parity;
use crate::special::kummer_dd;
use twofloat::TwoFloat;

/// Largest `|x|` accepted by the evaluators.
pub const MAX_X: f64 = 8.0;

/// Smallest `n_steps` accepted by [`integrate_weber`].
pub const MIN_STEPS: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeberValue {
    pub value: f64,
    pub derivative: f64,
}

impl WeberValue {
    fn reflect(self, parity: Parity, negative: bool) -> Self {
        if !negative {
            return self;
        }
        match parity {
            Parity::Even => Self { value: self.value, derivative: -self.derivative },
            Parity::Odd => Self { value: -self.value, derivative: self.derivative },
        }
    }
}

fn check_args(energy: f64, x: f64) -> Result<()> {
    if !energy.is_finite() || !x.is_finite() {
        return Err(Error::Domain(format!("non-finite Weber arguments E = {energy}, x = {x}")));
    }
    if x.abs() > MAX_X {
        return Err(Error::Domain(format!("|x| = {} exceeds {MAX_X}", x.abs())));
    }
    Ok(())
}

/// Series value and derivative in double-double, plus the estimated
/// absolute rounding error. `x` is taken as `|x|`.
fn series_dd(energy: f64, parity: Parity, x: f64) -> Result<(TwoFloat, TwoFloat, f64)> {
    let t = x.abs();
    // a and x² exactly, so both parities see the same E and x
    let z = TwoFloat::from(t) * t;
    let half_e = TwoFloat::from(0.5 * energy);
    let (a, c) = match parity {
        Parity::Even => (TwoFloat::from(0.25) - half_e, 0.5),
        Parity::Odd => (TwoFloat::from(0.75) - half_e, 1.5),
    };
    let s = kummer_dd(a, c, z).ok_or(Error::Accuracy {
        a: a.hi(),
        c,
        z: z.hi(),
        terms: crate::special::MAX_TERMS,
    })?;
    let gauss = (z * -0.5).exp();
    let (value, derivative) = match parity {
        // u_e = g M,  u_e' = x g (2M' - M)
        Parity::Even => (gauss * s.m, gauss * (s.dm * 2.0 - s.m) * t),
        // u_o = x g M,  u_o' = g ((1 - x²) M + 2x² M')
        Parity::Odd => (gauss * s.m * t, gauss * (s.m * (-z + 1.0) + s.dm * z * 2.0)),
    };
    let z = z.hi();
    let err = s.rounding_error() * gauss.hi() * (1.0 + 2.0 * z);
    Ok((value, derivative, err))
}

fn series_at(energy: f64, parity: Parity, x: f64) -> Result<(WeberValue, f64)> {
    let (v, d, err) = series_dd(energy, parity, x)?;
    let w = WeberValue { value: v.hi(), derivative: d.hi() };
    Ok((w.reflect(parity, x < 0.0), err))
}

/// `u_e` and `u_e'` by the double-double Kummer series alone.
pub fn weber_even_series(energy: f64, x: f64) -> Result<WeberValue> {
    check_args(energy, x)?;
    series_at(energy, Parity::Even, x).map(|(v, _)| v)
}

/// `u_o` and `u_o'` by the double-double Kummer series alone.
pub fn weber_odd_series(energy: f64, x: f64) -> Result<WeberValue> {
    check_args(energy, x)?;
    series_at(energy, Parity::Odd, x).map(|(v, _)| v)
}

/// The parity solution at `x` by integrating the ODE from the origin.
pub fn weber_ode(energy: f64, parity: Parity, x: f64) -> Result<WeberValue> {
    check_args(energy, x)?;
    let y0 = initial_state(parity);
    let y = WeberOde::new(energy).integrate(0.0, y0, x.abs())?;
    Ok(WeberValue { value: y[0], derivative: y[1] }.reflect(parity, x < 0.0))
}

fn initial_state(parity: Parity) -> [f64; 2] {
    match parity {
        Parity::Even => [1.0, 0.0],
        Parity::Odd => [0.0, 1.0],
    }
}

fn series_or_ode(energy: f64, parity: Parity, x: f64) -> Result<WeberValue> {
    check_args(energy, x)?;
    match series_at(energy, parity, x) {
        Ok((v, err)) if err <= 1e-12 * v.value.abs().max(v.derivative.abs()).max(1.0) => Ok(v),
        Ok(_) | Err(Error::Accuracy { .. }) => weber_ode(energy, parity, x),
        Err(e) => Err(e),
    }
}

/// `u_e(E, x)` and its `x`-derivative.
pub fn weber_even(energy: f64, x: f64) -> Result<WeberValue> {
    series_or_ode(energy, Parity::Even, x)
}

/// `u_o(E, x)` and its `x`-derivative.
pub fn weber_odd(energy: f64, x: f64) -> Result<WeberValue> {
    series_or_ode(energy, Parity::Odd, x)
}

pub fn weber(energy: f64, parity: Parity, x: f64) -> Result<WeberValue> {
    series_or_ode(energy, parity, x)
}

/// `u_e u_o' - u_e' u_o` at `x`; equal to one for every `x`.
///
/// Where both series converge the products are formed in double-double, so
/// the result does not inherit the `u_e u_o' ~ e^{x²}` cancellation of the
/// growing regime. Otherwise the parity values from [`weber_even`] and
/// [`weber_odd`] are combined in plain doubles.
pub fn wronskian(energy: f64, x: f64) -> Result<f64> {
    check_args(energy, x)?;
    if let (Ok((ev, ed, _)), Ok((ov, od, _))) =
        (series_dd(energy, Parity::Even, x), series_dd(energy, Parity::Odd, x))
    {
        // both factors flip sign together under x -> -x
        return Ok((ev * od - ed * ov).hi());
    }
    let e = weber_even(energy, x)?;
    let o = weber_odd(energy, x)?;
    Ok(e.value * o.derivative - e.derivative * o.value)
}

/// The Wronskian from the ODE route, relative to its natural scale
/// `|u_e u_o'| + |u_e' u_o|`: returns `|W - 1| / max(1, scale)`.
pub fn wronskian_defect_ode(energy: f64, x: f64) -> Result<f64> {
    let e = weber_ode(energy, Parity::Even, x)?;
    let o = weber_ode(energy, Parity::Odd, x)?;
    let a = e.value * o.derivative;
    let b = e.derivative * o.value;
    Ok((a - b - 1.0).abs() / (a.abs() + b.abs()).max(1.0))
}

/// Samples the parity solution on `[-x_max, x_max]` with `2 n_steps + 1`
/// points by integrating `u'' = (x² - 2E) u` outward from the origin and
/// reflecting by parity.
pub fn integrate_weber(
    energy: f64,
    parity: Parity,
    x_max: f64,
    n_steps: usize,
) -> Result<SampledFunction> {
    check_args(energy, x_max)?;
    if x_max <= 0.0 {
        return Err(Error::Domain(format!("x_max = {x_max} must be positive")));
    }
    if n_steps < MIN_STEPS {
        return Err(Error::Size(format!("n_steps = {n_steps} below {MIN_STEPS}")));
    }
    let grid = Grid::new(x_max, 2 * n_steps + 1)?;
    let mid = grid.mid();
    let right: Vec<f64> = (mid..grid.len()).map(|j| grid.node(j)).collect();
    let states = WeberOde::new(energy).integrate_nodes(&right, initial_state(parity))?;
    Ok(sample_by_parity(grid, parity, &states))
}

/// Extends states given on `x_mid..=x_last` to the whole grid by parity.
pub(crate) fn sample_by_parity(grid: Grid, parity: Parity, right: &[[f64; 2]]) -> SampledFunction {
    let mid = grid.mid();
    let mut values = vec![Complex64::new(0.0, 0.0); grid.len()];
    let mut derivs = values.clone();
    let s = parity.sign();
    for (i, y) in right.iter().enumerate() {
        values[mid + i] = Complex64::new(y[0], 0.0);
        derivs[mid + i] = Complex64::new(y[1], 0.0);
        values[mid - i] = Complex64::new(s * y[0], 0.0);
        derivs[mid - i] = Complex64::new(-s * y[1], 0.0);
    }
    // the origin is fixed by parity exactly
    match parity {
        Parity::Even => derivs[mid] = Complex64::new(0.0, 0.0),
        Parity::Odd => values[mid] = Complex64::new(0.0, 0.0),
    }
    SampledFunction::from_samples(grid, values, derivs).expect("grid-sized buffers")
}
