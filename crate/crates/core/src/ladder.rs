//! Generalized ladder operators `a_β = (βq + ip)/√2`, `a_β† = (βq - ip)/√2`
//! acting on sampled functions, and the checks of what survives of the
//! ladder structure on the circle.
//!
//! With `p = -i d/dx` these act as `a_β f = (βx f + f')/√2` and
//! `a_β† f = (βx f - f')/√2`; `β = 1` gives the usual `a`, `a†`.

use std::f64::consts::SQRT_2;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::{
    differentiate_samples, inner, quad_l2, simpson, DiffMethod, Grid, SampledFunction,
    DEFAULT_POINTS, FINE_POINTS,
};
use crate::params::{OscillatorParams, Parity};
use crate::shooting::{boundary_residual, eigenfunction_at, lowest_levels, Levels};

/// Which of the pair to apply.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Ladder {
    Plain,
    Dagger,
}

impl Ladder {
    /// Sign in front of `f'`.
    fn sign(self) -> f64 {
        match self {
            Ladder::Plain => 1.0,
            Ladder::Dagger => -1.0,
        }
    }

    pub fn opposite(self) -> Self {
        match self {
            Ladder::Plain => Ladder::Dagger,
            Ladder::Dagger => Ladder::Plain,
        }
    }
}

fn c(v: f64) -> Complex64 {
    Complex64::new(v, 0.0)
}

/// `(βx f ± f')/√2`. Derivative samples of the result come from fourth-order
/// differences of its values, since `f''` is not available.
pub fn apply_a_beta(f: &SampledFunction, beta: f64, which: Ladder) -> SampledFunction {
    let grid = *f.grid();
    let s = which.sign();
    let values: Vec<Complex64> = grid
        .nodes()
        .iter()
        .zip(f.values().iter().zip(f.derivatives()))
        .map(|(&x, (&v, &d))| (v * (beta * x) + d * s) / SQRT_2)
        .collect();
    let derivs = differentiate_samples(&grid, &values, DiffMethod::Fd4).expect("grid-sized samples");
    SampledFunction::from_samples(grid, values, derivs).expect("grid-sized samples")
}

/// As [`apply_a_beta`], for `f` solving `f'' = (x² - 2E) f`; the result's
/// derivative `(βf + βx f' ± f'')/√2` is then exact.
pub fn apply_a_beta_eigen(
    f: &SampledFunction,
    energy: f64,
    beta: f64,
    which: Ladder,
) -> SampledFunction {
    apply_with_curvature(f, beta, which, |x, v| v * (x * x - 2.0 * energy))
}

fn apply_with_curvature(
    f: &SampledFunction,
    beta: f64,
    which: Ladder,
    second: impl Fn(f64, Complex64) -> Complex64,
) -> SampledFunction {
    let s = which.sign();
    let mut values = Vec::with_capacity(f.len());
    let mut derivs = Vec::with_capacity(f.len());
    for (&x, (&v, &d)) in f.nodes().iter().zip(f.values().iter().zip(f.derivatives())) {
        let dd = second(x, v);
        values.push((v * (beta * x) + d * s) / SQRT_2);
        derivs.push((v * beta + d * (beta * x) + dd * s) / SQRT_2);
    }
    SampledFunction::from_samples(*f.grid(), values, derivs).expect("grid-sized samples")
}

/// The multiplication operator `S = e^{-x²/2}` and its inverse on a grid,
/// through which `a = (i/√2) S p S⁻¹`.
#[derive(Debug, Clone, PartialEq)]
pub struct SimilarityScaling {
    grid: Grid,
    forward: Vec<f64>,
    inverse: Vec<f64>,
}

impl SimilarityScaling {
    pub fn new(grid: Grid) -> Self {
        let xs = grid.nodes();
        let forward = xs.iter().map(|x| (-0.5 * x * x).exp()).collect();
        let inverse = xs.iter().map(|x| (0.5 * x * x).exp()).collect();
        Self { grid, forward, inverse }
    }

    pub fn forward(&self) -> &[f64] {
        &self.forward
    }

    pub fn inverse(&self) -> &[f64] {
        &self.inverse
    }

    /// `max |S S⁻¹ - 1|` over the grid.
    pub fn identity_defect(&self) -> f64 {
        self.forward
            .iter()
            .zip(&self.inverse)
            .map(|(a, b)| (a * b - 1.0).abs())
            .fold(0.0, f64::max)
    }

    /// `(i/√2) S p S⁻¹ f` with `p = -i d/dx`, the derivative of `S⁻¹f` taken by
    /// fourth-order differences.
    pub fn conjugated_momentum(&self, f: &SampledFunction) -> Result<SampledFunction> {
        if f.grid() != &self.grid {
            return Err(Error::Size("function and scaling live on different grids".into()));
        }
        let lifted: Vec<Complex64> =
            f.values().iter().zip(&self.inverse).map(|(v, s)| v * *s).collect();
        let d = differentiate_samples(&self.grid, &lifted, DiffMethod::Fd4)?;
        let values: Vec<Complex64> =
            d.iter().zip(&self.forward).map(|(v, s)| v * (*s / SQRT_2)).collect();
        let derivs = differentiate_samples(&self.grid, &values, DiffMethod::Fd4)?;
        SampledFunction::from_samples(self.grid, values, derivs)
    }

    /// `‖a f - (i/√2) S p S⁻¹ f‖ / ‖f‖`.
    pub fn similarity_defect(&self, f: &SampledFunction) -> Result<f64> {
        let direct = apply_a_beta(f, 1.0, Ladder::Plain);
        let conj = self.conjugated_momentum(f)?;
        Ok(direct.sub(&conj)?.norm() / f.norm())
    }
}

/// What a ladder check certifies about one produced state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LadderReport {
    /// `‖-½f'' + ½x²f - Ef‖ / (max(1, |E|) ‖f‖)` with `f''` from differences.
    pub eigen_residual: f64,
    /// [`boundary_residual`] under the target extension.
    pub boundary_defect: f64,
    /// `(|f(-ℓ) - f(ℓ)|, |f'(-ℓ) - f'(ℓ)|)`.
    pub jump_at_a: (f64, f64),
}

impl LadderReport {
    fn measure(f: &SampledFunction, energy: f64, beta: f64) -> Self {
        let (vl, dl) = f.left();
        let (vr, dr) = f.right();
        Self {
            eigen_residual: eigen_residual(f, energy),
            boundary_defect: boundary_residual(f, beta),
            jump_at_a: ((vl - vr).norm(), (dl - dr).norm()),
        }
    }
}

/// Relative defect of `-½f'' + ½x²f = Ef`, with `f''` from fourth-order
/// differences of the derivative samples.
pub fn eigen_residual(f: &SampledFunction, energy: f64) -> f64 {
    let grid = f.grid();
    let second = differentiate_samples(grid, f.derivatives(), DiffMethod::Fd4)
        .expect("grid-sized samples");
    let residual: Vec<Complex64> = grid
        .nodes()
        .iter()
        .zip(f.values().iter().zip(&second))
        .map(|(&x, (&v, &dd))| -0.5 * dd + v * (0.5 * x * x - energy))
        .collect();
    let r = SampledFunction::from_samples(*grid, residual.clone(), residual)
        .expect("grid-sized samples");
    r.norm() / (energy.abs().max(1.0) * f.norm())
}

/// `⟨f|H_β f⟩ / ‖f‖²` from the quadratic form
/// `∫ ½|f'|² + ½x²|f|² + βℓ|f(ℓ)|²`.
pub fn rayleigh_quotient(f: &SampledFunction, beta: f64) -> f64 {
    let grid = f.grid();
    let ell = grid.half_length();
    let density: Vec<Complex64> = grid
        .nodes()
        .iter()
        .zip(f.values().iter().zip(f.derivatives()))
        .map(|(&x, (v, d))| c(0.5 * d.norm_sqr() + 0.5 * x * x * v.norm_sqr()))
        .collect();
    let form = simpson(grid, &density).re + beta * ell * f.right().0.norm_sqr();
    form / quad_l2(f)
}

/// `φ_β = e^{-βx²/2}`, annihilated by `a_β`.
pub fn phi_beta(grid: Grid, beta: f64) -> SampledFunction {
    SampledFunction::from_real_fn(grid, |x| {
        let v = (-0.5 * beta * x * x).exp();
        (v, -beta * x * v)
    })
}

/// The right-hand side `β/2 + (1 - β²)⟨x²⟩/(2‖φ‖²)` of the ground-state
/// energy identity for `φ_β`.
pub fn phi_beta_energy(grid: Grid, beta: f64) -> f64 {
    let phi = phi_beta(grid, beta);
    let weighted: Vec<Complex64> =
        grid.nodes().iter().zip(phi.values()).map(|(&x, v)| c(x * x * v.norm_sqr())).collect();
    0.5 * beta + (1.0 - beta * beta) * simpson(&grid, &weighted).re / (2.0 * quad_l2(&phi))
}

/// One rung up from an odd state into `H_N`, and one rung down into `H_A`.
#[derive(Debug, Clone, Serialize)]
pub struct LadderStep {
    pub half_length: f64,
    pub k: usize,
    /// `E_{2k-1}`, the odd level lifted by `a†`.
    pub lower_odd_energy: f64,
    /// `E_{2k+1}`, the odd level lowered by `a`.
    pub upper_odd_energy: f64,
    /// `v = a† u_{2k-1}` against `H_N` at `E_{2k-1} + 1`.
    pub up: LadderReport,
    /// `w = a u_{2k+1}` against `H_A` at `E_{2k+1} - 1`.
    pub down: LadderReport,
    /// `max(|v'(-ℓ) - ℓv(ℓ)|, |v'(ℓ) + ℓv(ℓ)|) / |ℓ v(ℓ)|`.
    pub up_boundary_identity: f64,
    /// `max(|w'(-ℓ) + ℓw(ℓ)|, |w'(ℓ) - ℓw(ℓ)|) / |ℓ w(ℓ)|`.
    pub down_boundary_identity: f64,
    /// `|v(ℓ)| / max|v|`; nonzero means `v` is not in the common domain.
    pub up_value_at_a: f64,
    pub down_value_at_a: f64,
    /// Rayleigh quotient of `v` under `H_N` minus `E_{2k-1}`; should be 1.
    pub up_rayleigh_gap: f64,
    /// `E_{2k+1}` minus the Rayleigh quotient of `w` under `H_A`; should be 1.
    pub down_rayleigh_gap: f64,
    /// `‖a v/‖a v‖ - u_{2k-1}‖`.
    pub up_closure: f64,
    /// `‖a† w/‖a† w‖ - u_{2k+1}‖`.
    pub down_closure: f64,
}

/// Odd levels of the circle of half-length `ell`; they are shared by every
/// extension, so `β = 0` is used.
fn odd_levels(ell: f64, count: usize) -> Result<Vec<f64>> {
    let params = OscillatorParams::new(ell, 0.0)?;
    let mut want = 2 * count + 2;
    loop {
        let levels: Levels = lowest_levels(&params, want)?;
        let odd = levels.of_parity(Parity::Odd);
        if odd.len() >= count || levels.len() < want {
            if odd.len() < count {
                return Err(Error::Index {
                    index: count - 1,
                    available: odd.len(),
                    e_max: levels.diagnostics.e_max,
                });
            }
            return Ok(odd[..count].to_vec());
        }
        want *= 2;
    }
}

fn boundary_identity(f: &SampledFunction, beta: f64) -> f64 {
    let ell = f.half_length();
    let (_, dl) = f.left();
    let (vr, dr) = f.right();
    let target = vr * (beta * ell);
    let scale = target.norm();
    if scale == 0.0 {
        return f64::INFINITY;
    }
    // H_N: v'(-ℓ) = ℓv(ℓ) and v'(ℓ) = -ℓv(ℓ); H_A flips both signs
    ((dl - target).norm()).max((dr + target).norm()) / scale
}

fn closure(produced: &SampledFunction, back: Ladder, energy: f64, beta: f64, origin: &SampledFunction) -> Result<f64> {
    // the produced state solves the ODE at the shifted energy
    let returned = apply_a_beta_eigen(produced, energy, beta, back);
    let normalized = returned.normalized();
    let phase = inner(origin, &normalized)?;
    let aligned = if phase.re < 0.0 { normalized.scaled(c(-1.0)) } else { normalized };
    aligned.sub(origin).map(|d| d.norm())
}

/// Certifies the single surviving rung at level `k ≥ 1` on the default grid.
pub fn ladder_step_check(ell: f64, k: usize) -> Result<LadderStep> {
    ladder_step_check_on(ell, k, DEFAULT_POINTS)
}

pub fn ladder_step_check_on(ell: f64, k: usize, n_points: usize) -> Result<LadderStep> {
    if k == 0 {
        return Err(Error::InvalidParams("ladder level k must be at least 1".into()));
    }
    let normal = OscillatorParams::new(ell, 1.0)?;
    let anti = OscillatorParams::new(ell, -1.0)?;
    let odd = odd_levels(ell, k + 1)?;
    let (e_low, e_high) = (odd[k - 1], odd[k]);
    let grid = Grid::new(ell, n_points)?;
    let u_low = eigenfunction_at(&normal, e_low, Parity::Odd, grid)?;
    let u_high = eigenfunction_at(&anti, e_high, Parity::Odd, grid)?;

    let v = apply_a_beta_eigen(&u_low, e_low, 1.0, Ladder::Dagger);
    let w = apply_a_beta_eigen(&u_high, e_high, 1.0, Ladder::Plain);
    let value_at_a = |f: &SampledFunction| f.right().0.norm() / f.max_abs_value();

    Ok(LadderStep {
        half_length: ell,
        k,
        lower_odd_energy: e_low,
        upper_odd_energy: e_high,
        up: LadderReport::measure(&v, e_low + 1.0, normal.beta()),
        down: LadderReport::measure(&w, e_high - 1.0, anti.beta()),
        up_boundary_identity: boundary_identity(&v, 1.0),
        down_boundary_identity: boundary_identity(&w, -1.0),
        up_value_at_a: value_at_a(&v),
        down_value_at_a: value_at_a(&w),
        up_rayleigh_gap: rayleigh_quotient(&v, normal.beta()) - e_low,
        down_rayleigh_gap: e_high - rayleigh_quotient(&w, anti.beta()),
        up_closure: closure(&v, Ladder::Plain, e_low + 1.0, 1.0, &u_low)?,
        down_closure: closure(&w, Ladder::Dagger, e_high - 1.0, 1.0, &u_high)?,
    })
}

/// The result of applying `a†` once more to an even state of `H_N`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Obstruction {
    pub report: LadderReport,
    /// `|a†f(-ℓ) - a†f(ℓ)|`.
    pub value_jump: f64,
    pub max_amplitude: f64,
    /// `0.1 × max|a†f|`.
    pub threshold: f64,
    /// The jump exceeds the threshold: `a†f` is not continuous on the circle.
    pub discontinuous: bool,
}

/// Relative size of the value jump that counts as a genuine discontinuity.
pub const JUMP_THRESHOLD: f64 = 0.1;

/// Applies `a†` to an even eigenfunction `source` of `H_N` at `energy` and
/// measures the discontinuity of the result at the antipodal point.
pub fn obstruction_check(source: &SampledFunction, energy: f64) -> Obstruction {
    let up = apply_a_beta(source, 1.0, Ladder::Dagger);
    let (vl, _) = up.left();
    let (vr, _) = up.right();
    let value_jump = (vl - vr).norm();
    let max_amplitude = up.max_abs_value();
    let threshold = JUMP_THRESHOLD * max_amplitude;
    Obstruction {
        report: LadderReport::measure(&up, energy + 1.0, 1.0),
        value_jump,
        max_amplitude,
        threshold,
        discontinuous: value_jump > threshold,
    }
}

/// The `k`-th even eigenpair of `H_N` (`k = 0` is `v_g`) on the fine grid,
/// with its energy.
pub fn normal_even_state(ell: f64, k: usize) -> Result<(f64, SampledFunction)> {
    let params = OscillatorParams::new(ell, 1.0)?;
    let mut want = 2 * k + 2;
    loop {
        let levels = lowest_levels(&params, want)?;
        let even = levels.of_parity(Parity::Even);
        if let Some(&e) = even.get(k) {
            let grid = Grid::new(ell, FINE_POINTS)?;
            return Ok((e, eigenfunction_at(&params, e, Parity::Even, grid)?));
        }
        if levels.len() < want {
            return Err(Error::Index { index: k, available: even.len(), e_max: levels.diagnostics.e_max });
        }
        want *= 2;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(ell: f64) -> Grid {
        Grid::new(ell, DEFAULT_POINTS).unwrap()
    }

    #[test]
    fn phi_beta_is_annihilated() {
        for beta in [-1.0, 0.0, 0.6, 1.0] {
            let phi = phi_beta(grid(2.0), beta);
            let out = apply_a_beta(&phi, beta, Ladder::Plain);
            assert!(out.max_abs_value() <= 1e-9 * phi.max_abs_value(), "β = {beta}");
        }
    }

    #[test]
    fn creation_on_gaussian() {
        let g = grid(2.0);
        let vg = phi_beta(g, 1.0);
        let out = apply_a_beta(&vg, 1.0, Ladder::Dagger);
        for (x, v) in g.nodes().iter().zip(out.values()) {
            assert!((v.re - SQRT_2 * x * (-0.5 * x * x).exp()).abs() < 1e-13);
        }
        let wg = phi_beta(g, -1.0);
        let out = apply_a_beta(&wg, 1.0, Ladder::Dagger);
        assert!(out.max_abs_value() < 1e-12 * wg.max_abs_value());
    }

    #[test]
    fn scaling_is_inverse_pair() {
        let s = SimilarityScaling::new(grid(6.0));
        assert!(s.identity_defect() <= 1e-12);
        assert!(s.forward().iter().all(|&v| v > 0.0));
    }

    #[test]
    fn similarity_relation_holds() {
        let g = Grid::new(2.0, 2049).unwrap();
        let f = SampledFunction::from_real_fn(g, |x| {
            let k = std::f64::consts::PI / 2.0;
            ((k * x).cos() + 0.3 * (2.0 * k * x).sin(), -k * (k * x).sin() + 0.6 * k * (2.0 * k * x).cos())
        });
        let s = SimilarityScaling::new(g);
        assert!(s.similarity_defect(&f).unwrap() <= 1e-7);
    }

    #[test]
    fn rayleigh_identity_for_phi_beta() {
        for beta in [-1.0, 0.0, 1.0, 0.4] {
            let g = Grid::new(2.0, FINE_POINTS).unwrap();
            let q = rayleigh_quotient(&phi_beta(g, beta), beta);
            assert!((q - phi_beta_energy(g, beta)).abs() < 1e-7, "β = {beta}");
        }
        let g = Grid::new(2.0, FINE_POINTS).unwrap();
        assert!((rayleigh_quotient(&phi_beta(g, 1.0), 1.0) - 0.5).abs() < 1e-7);
        assert!((rayleigh_quotient(&phi_beta(g, -1.0), -1.0) + 0.5).abs() < 1e-7);
    }

    #[test]
    fn first_rung_at_ell_two() {
        let s = ladder_step_check(2.0, 1).unwrap();
        assert!(s.up.eigen_residual < 1e-5, "{s:?}");
        assert!(s.up.boundary_defect < 1e-6, "{s:?}");
        assert!(s.up_boundary_identity < 1e-6, "{s:?}");
        assert!((s.up_rayleigh_gap - 1.0).abs() < 1e-7, "{s:?}");
        assert!(s.up_value_at_a > 1e-3);
        assert!(s.down.eigen_residual < 1e-5, "{s:?}");
        assert!(s.down.boundary_defect < 1e-6, "{s:?}");
        assert!(s.down_boundary_identity < 1e-6, "{s:?}");
        assert!(s.up_closure < 1e-5 && s.down_closure < 1e-5, "{s:?}");
    }

    #[test]
    fn obstruction_for_ground_state_at_ell_one() {
        let g = Grid::new(1.0, FINE_POINTS).unwrap();
        let ob = obstruction_check(&phi_beta(g, 1.0), 0.5);
        let expected = 2.0 * SQRT_2 * (-0.5f64).exp();
        assert!((ob.value_jump - expected).abs() < 1e-6);
        assert!(ob.discontinuous);
    }

    #[test]
    fn second_even_state_of_normal_ordering_is_obstructed() {
        let (e, v2) = normal_even_state(2.0, 1).unwrap();
        assert!(e > 1.5);
        let ob = obstruction_check(&v2, e);
        assert!(ob.discontinuous, "{ob:?}");
    }

    #[test]
    fn ladder_level_zero_rejected() {
        assert!(ladder_step_check(2.0, 0).is_err());
    }
}
