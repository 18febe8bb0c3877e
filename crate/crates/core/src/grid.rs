//! Uniform grids on the segment `[-ℓ, ℓ]` and the sampled-function toolkit
//! (quadrature, inner products, differentiation) shared by every module.
//!
//! Both endpoints are stored. They are the same point `A` of the circle, so
//! quantities that live on the circle either compare the pair (jump
//! detection) or use the `n - 1` distinct nodes `x_0 .. x_{n-2}` (Fourier
//! work). Quadrature is plain composite Simpson over the segment.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};

/// Default resolution for eigenfunctions and operator checks.
pub const DEFAULT_POINTS: usize = 513;
/// Resolution for checks that probe the discontinuity at the antipodal point.
pub const FINE_POINTS: usize = 2049;
/// Smallest admissible sample count.
pub const MIN_POINTS: usize = 129;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    half_length: f64,
    n_points: usize,
    spacing: f64,
}

impl Grid {
    pub fn new(half_length: f64, n_points: usize) -> Result<Self> {
        if !(half_length > 0.0 && half_length.is_finite()) {
            return Err(Error::Domain(format!("grid half-length {half_length} must be positive")));
        }
        if n_points < MIN_POINTS || n_points.is_multiple_of(2) {
            return Err(Error::Size(format!(
                "grid needs an odd number of points >= {MIN_POINTS}, got {n_points}"
            )));
        }
        let spacing = 2.0 * half_length / (n_points - 1) as f64;
        Ok(Self { half_length, n_points, spacing })
    }

    pub fn half_length(&self) -> f64 {
        self.half_length
    }

    pub fn len(&self) -> usize {
        self.n_points
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn mid(&self) -> usize {
        (self.n_points - 1) / 2
    }

    /// Node `x_j`, symmetric about the midpoint so that `x_0 = -ℓ`,
    /// `x_mid = 0` and `x_last = ℓ` hold exactly.
    pub fn node(&self, j: usize) -> f64 {
        let m = self.mid();
        if j == 0 {
            -self.half_length
        } else if j == self.n_points - 1 {
            self.half_length
        } else if j >= m {
            (j - m) as f64 * self.spacing
        } else {
            -((m - j) as f64 * self.spacing)
        }
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.n_points).map(|j| self.node(j)).collect()
    }

    pub fn simpson_weights(&self) -> Vec<f64> {
        let h3 = self.spacing / 3.0;
        let last = self.n_points - 1;
        (0..self.n_points)
            .map(|j| {
                if j == 0 || j == last {
                    h3
                } else if j % 2 == 1 {
                    4.0 * h3
                } else {
                    2.0 * h3
                }
            })
            .collect()
    }

    /// Wavenumber `πm/ℓ` of FFT bin `idx` over the `n - 1` distinct nodes.
    fn wavenumber(&self, idx: usize) -> f64 {
        let m = self.n_points - 1;
        let signed = if idx <= m / 2 { idx as f64 } else { idx as f64 - m as f64 };
        PI * signed / self.half_length
    }
}

/// A wavefunction on the circle, sampled on `[-ℓ, ℓ]` together with its
/// derivative.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledFunction {
    grid: Grid,
    values: Vec<Complex64>,
    derivatives: Vec<Complex64>,
}

impl SampledFunction {
    pub fn from_samples(
        grid: Grid,
        values: Vec<Complex64>,
        derivatives: Vec<Complex64>,
    ) -> Result<Self> {
        if values.len() != grid.len() || derivatives.len() != grid.len() {
            return Err(Error::Size(format!(
                "expected {} samples, got {} values and {} derivatives",
                grid.len(),
                values.len(),
                derivatives.len()
            )));
        }
        Ok(Self { grid, values, derivatives })
    }

    pub fn from_real_samples(grid: Grid, values: &[f64], derivatives: &[f64]) -> Result<Self> {
        Self::from_samples(
            grid,
            values.iter().map(|&v| Complex64::new(v, 0.0)).collect(),
            derivatives.iter().map(|&v| Complex64::new(v, 0.0)).collect(),
        )
    }

    /// Samples `f` and its analytic derivative `df`.
    pub fn from_fn(
        grid: Grid,
        f: impl Fn(f64) -> Complex64,
        df: impl Fn(f64) -> Complex64,
    ) -> Self {
        let xs = grid.nodes();
        let values = xs.iter().map(|&x| f(x)).collect();
        let derivatives = xs.iter().map(|&x| df(x)).collect();
        Self { grid, values, derivatives }
    }

    /// Samples a real function given as `x -> (f(x), f'(x))`.
    pub fn from_real_fn(grid: Grid, f: impl Fn(f64) -> (f64, f64)) -> Self {
        let (values, derivatives) = grid
            .nodes()
            .into_iter()
            .map(|x| {
                let (v, d) = f(x);
                (Complex64::new(v, 0.0), Complex64::new(d, 0.0))
            })
            .unzip();
        Self { grid, values, derivatives }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn half_length(&self) -> f64 {
        self.grid.half_length
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn derivatives(&self) -> &[Complex64] {
        &self.derivatives
    }

    pub fn nodes(&self) -> Vec<f64> {
        self.grid.nodes()
    }

    pub fn real_values(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.re).collect()
    }

    pub fn real_derivatives(&self) -> Vec<f64> {
        self.derivatives.iter().map(|v| v.re).collect()
    }

    pub fn left(&self) -> (Complex64, Complex64) {
        (self.values[0], self.derivatives[0])
    }

    pub fn right(&self) -> (Complex64, Complex64) {
        let last = self.len() - 1;
        (self.values[last], self.derivatives[last])
    }

    /// `|f(-ℓ) - f(ℓ)|`: nonzero means the function is discontinuous at `A`.
    pub fn value_jump(&self) -> f64 {
        (self.left().0 - self.right().0).norm()
    }

    /// `|f'(-ℓ) - f'(ℓ)|`.
    pub fn derivative_jump(&self) -> f64 {
        (self.left().1 - self.right().1).norm()
    }

    pub fn max_abs_value(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_derivative(&self) -> f64 {
        self.derivatives.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn norm(&self) -> f64 {
        quad_l2(self).sqrt()
    }

    pub fn scaled(&self, factor: Complex64) -> Self {
        Self {
            grid: self.grid,
            values: self.values.iter().map(|v| v * factor).collect(),
            derivatives: self.derivatives.iter().map(|v| v * factor).collect(),
        }
    }

    /// Unit-norm copy; a zero function is returned unchanged.
    pub fn normalized(&self) -> Self {
        let n = self.norm();
        if n == 0.0 {
            self.clone()
        } else {
            self.scaled(Complex64::new(1.0 / n, 0.0))
        }
    }

    /// `self - other` sample by sample (values and derivatives).
    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same_grid(other)?;
        Ok(Self {
            grid: self.grid,
            values: self.values.iter().zip(&other.values).map(|(a, b)| a - b).collect(),
            derivatives: self
                .derivatives
                .iter()
                .zip(&other.derivatives)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    fn check_same_grid(&self, other: &Self) -> Result<()> {
        if self.grid != other.grid {
            return Err(Error::Size("sampled functions live on different grids".into()));
        }
        Ok(())
    }
}

/// Composite Simpson rule for the samples on `grid`.
pub fn simpson(grid: &Grid, samples: &[Complex64]) -> Complex64 {
    grid.simpson_weights().iter().zip(samples).map(|(w, s)| s * *w).sum()
}

/// `∫ |f|² dx` over `[-ℓ, ℓ]`.
pub fn quad_l2(f: &SampledFunction) -> f64 {
    f.grid
        .simpson_weights()
        .iter()
        .zip(&f.values)
        .map(|(w, v)| w * v.norm_sqr())
        .sum()
}

/// `⟨f, g⟩ = ∫ conj(f) g dx`.
pub fn inner(f: &SampledFunction, g: &SampledFunction) -> Result<Complex64> {
    f.check_same_grid(g)?;
    Ok(f.grid
        .simpson_weights()
        .iter()
        .zip(f.values.iter().zip(&g.values))
        .map(|(w, (a, b))| a.conj() * b * *w)
        .sum())
}

/// `L²` distance `‖f - g‖`.
pub fn distance(f: &SampledFunction, g: &SampledFunction) -> Result<f64> {
    Ok(f.sub(g)?.norm())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiffMethod {
    /// Fourth-order centered differences with one-sided closures at `±ℓ`.
    Fd4,
    /// Spectral differentiation on the circle; needs `f(-ℓ) = f(ℓ)`.
    Fourier,
}

/// Differentiates the value samples of `f`. The result carries the first
/// derivative as values and the second derivative (same method) as
/// derivative samples.
pub fn differentiate(f: &SampledFunction, method: DiffMethod) -> Result<SampledFunction> {
    let first = differentiate_samples(&f.grid, &f.values, method)?;
    let second = differentiate_samples(&f.grid, &first, method)?;
    SampledFunction::from_samples(f.grid, first, second)
}

pub fn differentiate_samples(
    grid: &Grid,
    samples: &[Complex64],
    method: DiffMethod,
) -> Result<Vec<Complex64>> {
    if samples.len() != grid.len() {
        return Err(Error::Size(format!(
            "expected {} samples, got {}",
            grid.len(),
            samples.len()
        )));
    }
    match method {
        DiffMethod::Fd4 => Ok(fd4(samples, grid.spacing)),
        DiffMethod::Fourier => {
            check_periodic(samples)?;
            Ok(spectral_apply(grid, samples, |k| Complex64::new(0.0, k), 0.0.into()))
        }
    }
}

fn fd4(f: &[Complex64], h: f64) -> Vec<Complex64> {
    let n = f.len();
    let s = 1.0 / (12.0 * h);
    (0..n)
        .map(|j| {
            let d = if j == 0 {
                -25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]
            } else if j == 1 {
                -3.0 * f[0] - 10.0 * f[1] + 18.0 * f[2] - 6.0 * f[3] + f[4]
            } else if j == n - 2 {
                3.0 * f[n - 1] + 10.0 * f[n - 2] - 18.0 * f[n - 3] + 6.0 * f[n - 4] - f[n - 5]
            } else if j == n - 1 {
                25.0 * f[n - 1] - 48.0 * f[n - 2] + 36.0 * f[n - 3] - 16.0 * f[n - 4]
                    + 3.0 * f[n - 5]
            } else {
                f[j - 2] - 8.0 * f[j - 1] + 8.0 * f[j + 1] - f[j + 2]
            };
            d * s
        })
        .collect()
}

fn check_periodic(samples: &[Complex64]) -> Result<()> {
    let scale = samples.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let jump = (samples[0] - samples[samples.len() - 1]).norm();
    if jump > 1e-8 * scale {
        return Err(Error::Periodicity { jump });
    }
    Ok(())
}

/// Applies the Fourier multiplier `symbol(k)` to the samples, treating the
/// `n - 1` distinct nodes as one period. The Nyquist bin is multiplied by
/// `nyquist` instead. The duplicated endpoint of the result is copied from
/// the first node.
pub(crate) fn spectral_apply(
    grid: &Grid,
    samples: &[Complex64],
    symbol: impl Fn(f64) -> Complex64,
    nyquist: Complex64,
) -> Vec<Complex64> {
    let m = grid.len() - 1;
    let mut planner = FftPlanner::<f64>::new();
    let fwd: Arc<dyn rustfft::Fft<f64>> = planner.plan_fft_forward(m);
    let inv = planner.plan_fft_inverse(m);
    let mut buf: Vec<Complex64> = samples[..m].to_vec();
    fwd.process(&mut buf);
    for (idx, c) in buf.iter_mut().enumerate() {
        if idx == m / 2 {
            *c *= nyquist;
        } else {
            *c *= symbol(grid.wavenumber(idx));
        }
    }
    inv.process(&mut buf);
    let scale = 1.0 / m as f64;
    let mut out: Vec<Complex64> = buf.into_iter().map(|c| c * scale).collect();
    out.push(out[0]);
    out
}

/// Circular translation `f(x) -> f(x + s)` by Fourier interpolation; exact
/// for band-limited periodic input.
pub fn circular_shift(grid: &Grid, samples: &[Complex64], shift: f64) -> Vec<Complex64> {
    let m = grid.len() - 1;
    let nyq = grid.wavenumber(m / 2).abs();
    spectral_apply(
        grid,
        samples,
        |k| Complex64::from_polar(1.0, k * shift),
        Complex64::new((nyq * shift).cos(), 0.0),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn grid_is_symmetric() {
        let g = Grid::new(std::f64::consts::PI, 513).unwrap();
        assert_eq!(g.node(0), -std::f64::consts::PI);
        assert_eq!(g.node(512), std::f64::consts::PI);
        assert_eq!(g.node(256), 0.0);
        for j in 0..513 {
            assert_eq!(g.node(j), -g.node(512 - j));
        }
    }

    #[test]
    fn grid_rejects_even_or_small() {
        assert!(Grid::new(1.0, 512).is_err());
        assert!(Grid::new(1.0, 127).is_err());
        assert!(Grid::new(0.0, 513).is_err());
    }

    #[test]
    fn quad_constant() {
        let g = Grid::new(1.0, 513).unwrap();
        let f = SampledFunction::from_real_fn(g, |_| (1.0, 0.0));
        assert!((quad_l2(&f) - 2.0).abs() < 1e-14);
    }

    #[test]
    fn quad_sine_period() {
        let l = 2.0;
        let g = Grid::new(l, 513).unwrap();
        let k = PI / l;
        let f = SampledFunction::from_real_fn(g, |x| ((k * x).sin(), k * (k * x).cos()));
        assert!((quad_l2(&f) - 2.0).abs() < 1e-8 * 2.0);
    }

    /// Richardson-extrapolated trapezoid at ten times the resolution.
    fn trapezoid_oracle(f: impl Fn(f64) -> f64, l: f64, n: usize) -> f64 {
        let trap = |n: usize| {
            let h = 2.0 * l / n as f64;
            let mut s = 0.5 * (f(-l) + f(l));
            for j in 1..n {
                s += f(-l + j as f64 * h);
            }
            s * h
        };
        let t1 = trap(n);
        let t2 = trap(2 * n);
        (4.0 * t2 - t1) / 3.0
    }

    #[test]
    fn quad_gaussian_against_oracle() {
        let l = 4.0;
        let g = Grid::new(l, 513).unwrap();
        let f = SampledFunction::from_real_fn(g, |x| ((-x * x).exp(), -2.0 * x * (-x * x).exp()));
        let oracle = trapezoid_oracle(|x| (-2.0 * x * x).exp(), l, 5120);
        // the oracle sits within 1e-15 of sqrt(pi/2) here: the tails beyond 4 are negligible
        assert!((oracle - (PI / 2.0).sqrt()).abs() < 1e-12);
        assert!((quad_l2(&f) - oracle).abs() <= 1e-8 * oracle);
    }

    #[test]
    fn quad_converges_at_fourth_order() {
        let l = 1.5;
        let exact = trapezoid_oracle(|x| (x.cos() * (0.7 * x).exp()).powi(2), l, 40000);
        let err = |n: usize| {
            let g = Grid::new(l, n).unwrap();
            let f = SampledFunction::from_real_fn(g, |x| (x.cos() * (0.7 * x).exp(), 0.0));
            (quad_l2(&f) - exact).abs()
        };
        let (e1, e2) = (err(129), err(257));
        let order = (e1 / e2).log2();
        assert!(order > 3.8, "observed order {order}");
    }

    #[test]
    fn fd4_exact_on_quadratics() {
        let g = Grid::new(1.0, 129).unwrap();
        let f = SampledFunction::from_real_fn(g, |x| (x * x, 2.0 * x));
        let d = differentiate_samples(&g, f.values(), DiffMethod::Fd4).unwrap();
        for (j, x) in g.nodes().into_iter().enumerate() {
            assert!((d[j].re - 2.0 * x).abs() < 1e-10, "node {j}");
        }
    }

    #[test]
    fn fd4_gaussian() {
        let g = Grid::new(4.0, FINE_POINTS).unwrap();
        let f = SampledFunction::from_real_fn(g, |x| ((-0.5 * x * x).exp(), 0.0));
        let d = differentiate_samples(&g, f.values(), DiffMethod::Fd4).unwrap();
        for (j, x) in g.nodes().into_iter().enumerate() {
            let exact = -x * (-0.5 * x * x).exp();
            assert!((d[j].re - exact).abs() < 1e-9, "x = {x}: {} vs {exact}", d[j].re);
        }
    }

    #[test]
    fn fourier_mode_is_eigenfunction() {
        let l = 1.7;
        let g = Grid::new(l, 257).unwrap();
        let k = PI / l;
        let f = SampledFunction::from_fn(
            g,
            |x| Complex64::from_polar(1.0, k * x),
            |x| Complex64::new(0.0, k) * Complex64::from_polar(1.0, k * x),
        );
        let d = differentiate_samples(&g, f.values(), DiffMethod::Fourier).unwrap();
        for (a, b) in d.iter().zip(f.derivatives()) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn fourier_rejects_jump() {
        let g = Grid::new(1.0, 129).unwrap();
        let f = SampledFunction::from_real_fn(g, |x| (x, 1.0));
        assert!(matches!(
            differentiate_samples(&g, f.values(), DiffMethod::Fourier),
            Err(Error::Periodicity { .. })
        ));
    }

    #[test]
    fn shift_of_band_limited_function() {
        let l = 2.0;
        let g = Grid::new(l, 257).unwrap();
        let k = PI / l;
        let f = |x: f64| (k * x).sin() + 0.3 * (3.0 * k * x).cos();
        let samples: Vec<_> = g.nodes().iter().map(|&x| c(f(x))).collect();
        let s = 0.37;
        let shifted = circular_shift(&g, &samples, s);
        for (j, x) in g.nodes().into_iter().enumerate() {
            assert!((shifted[j].re - f(x + s)).abs() < 1e-12);
            assert!(shifted[j].im.abs() < 1e-12);
        }
    }

    #[test]
    fn inner_is_conjugate_linear_in_first_slot() {
        let g = Grid::new(1.0, 129).unwrap();
        let f = SampledFunction::from_fn(g, |x| Complex64::new(x, 1.0), |_| c(1.0));
        let i = Complex64::new(0.0, 1.0);
        let a = inner(&f.scaled(i), &f).unwrap();
        let b = inner(&f, &f).unwrap();
        assert!((a - (-i) * b).norm() < 1e-14);
    }
}
