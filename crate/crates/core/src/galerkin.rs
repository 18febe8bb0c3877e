//! Fourier–Galerkin discretization of the quadratic form
//!
//! ```text
//! q_β[ψ] = ∫ ½|ψ'|² + ½x²|ψ|² dx + βℓ |ψ(ℓ)|²
//! ```
//!
//! in the basis `e_n(x) = e^{inπx/ℓ} / √(2ℓ)`, `n = -N..=N`. Every extension
//! `H_β` shares the form domain, so one matrix family covers all `β`, and the
//! eigenvalues are variational upper bounds.

use std::f64::consts::PI;

use nalgebra::{DMatrix, SymmetricEigen};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::params::{OscillatorParams, Parity};

/// Smallest truncation accepted by [`build_matrix`].
pub const MIN_MODES: usize = 8;

/// Largest truncation accepted; keeps the dense solves in the seconds range.
pub const MAX_MODES: usize = 2048;

const EIGEN_EPS: f64 = 1e-15;
const EIGEN_MAX_ITER: usize = 10_000;

/// Truncated matrix of `H_β` in the exponential basis. The closed-form
/// entries are real, so the matrix is stored as real symmetric.
#[derive(Debug, Clone)]
pub struct GalerkinMatrix {
    params: OscillatorParams,
    n_modes: usize,
    entries: DMatrix<f64>,
}

/// Kinetic, potential and delta parts of the entry `(m, n)`.
fn entry(params: &OscillatorParams, m: i64, n: i64) -> f64 {
    let ell = params.half_length();
    let k = m - n;
    let sign = if k.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
    let delta = 0.5 * params.beta() * sign;
    if k == 0 {
        let nf = n as f64;
        nf * nf * PI * PI / (2.0 * ell * ell) + ell * ell / 6.0 + delta
    } else {
        let kf = k as f64;
        ell * ell * sign / (kf * kf * PI * PI) + delta
    }
}

/// `∫ x² e^{-ikπx/ℓ} dx / (4ℓ)` by Simpson's rule on a fine grid.
#[cfg(debug_assertions)]
fn potential_by_quadrature(ell: f64, k: i64) -> f64 {
    let n = 4096;
    let h = 2.0 * ell / n as f64;
    let mut acc = 0.0;
    for j in 0..=n {
        let x = -ell + j as f64 * h;
        let w = if j == 0 || j == n {
            1.0
        } else if j % 2 == 1 {
            4.0
        } else {
            2.0
        };
        acc += w * x * x * (k as f64 * PI * x / ell).cos();
    }
    acc * h / 3.0 / (4.0 * ell)
}

#[cfg(debug_assertions)]
fn audit_potential_row(params: &OscillatorParams, n_modes: usize) {
    let ell = params.half_length();
    let free = OscillatorParams::new(ell, 0.0).expect("validated half-length");
    for k in 0..=(n_modes.min(16) as i64) {
        let closed = entry(&free, k, 0);
        let quad = potential_by_quadrature(ell, k);
        assert!(
            (closed - quad).abs() <= 1e-9 * ell * ell,
            "potential entry k = {k}: closed form {closed} vs quadrature {quad}"
        );
    }
}

/// Assembles the `(2N + 1)`-dimensional matrix.
///
/// With debug assertions on, the closed-form potential row is audited
/// against quadrature before returning.
pub fn build_matrix(params: &OscillatorParams, n_modes: usize) -> Result<GalerkinMatrix> {
    if !(MIN_MODES..=MAX_MODES).contains(&n_modes) {
        return Err(Error::Size(format!(
            "N = {n_modes} outside [{MIN_MODES}, {MAX_MODES}]"
        )));
    }
    #[cfg(debug_assertions)]
    audit_potential_row(params, n_modes);

    let dim = 2 * n_modes + 1;
    let offset = n_modes as i64;
    let entries = DMatrix::from_fn(dim, dim, |i, j| {
        entry(params, i as i64 - offset, j as i64 - offset)
    });
    Ok(GalerkinMatrix { params: *params, n_modes, entries })
}

impl GalerkinMatrix {
    pub fn params(&self) -> &OscillatorParams {
        &self.params
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &DMatrix<f64> {
        &self.entries
    }

    /// Entry between modes `m` and `n`, both in `-N..=N`.
    pub fn entry(&self, m: i64, n: i64) -> f64 {
        let off = self.n_modes as i64;
        self.entries[((m + off) as usize, (n + off) as usize)]
    }

    /// `max |M - Mᵀ|`.
    pub fn asymmetry(&self) -> f64 {
        (&self.entries - self.entries.transpose()).amax()
    }

    /// The matrix in the cosine basis `{1, √2 cos(nπx/ℓ)}` (dimension `N + 1`)
    /// and the sine basis `{√2 sin(nπx/ℓ)}` (dimension `N`). The cross terms
    /// vanish identically.
    pub fn parity_blocks(&self) -> (DMatrix<f64>, DMatrix<f64>) {
        let n = self.n_modes;
        let h = |a: i64, b: i64| self.entry(a, b);
        let s2 = std::f64::consts::SQRT_2;
        let even = DMatrix::from_fn(n + 1, n + 1, |i, j| {
            let (m, k) = (i as i64, j as i64);
            match (m, k) {
                (0, 0) => h(0, 0),
                (0, _) => (h(0, k) + h(0, -k)) / s2,
                (_, 0) => (h(m, 0) + h(-m, 0)) / s2,
                _ => 0.5 * (h(m, k) + h(m, -k) + h(-m, k) + h(-m, -k)),
            }
        });
        let odd = DMatrix::from_fn(n, n, |i, j| {
            let (m, k) = (i as i64 + 1, j as i64 + 1);
            0.5 * (h(m, k) - h(m, -k) - h(-m, k) + h(-m, -k))
        });
        (even, odd)
    }
}

fn eigenvalues(block: DMatrix<f64>) -> Result<Vec<f64>> {
    let dim = block.nrows();
    if dim == 0 {
        return Ok(Vec::new());
    }
    let eig = SymmetricEigen::try_new(block, EIGEN_EPS, EIGEN_MAX_ITER)
        .ok_or(Error::Eigensolver(dim))?;
    let mut values: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    values.sort_by(f64::total_cmp);
    Ok(values)
}

/// A Galerkin eigenvalue with its parity sector.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OracleLevel {
    pub energy: f64,
    pub parity: Parity,
}

/// All eigenvalues, labelled by parity and sorted, from the two blocks.
pub fn oracle_levels(params: &OscillatorParams, n_modes: usize) -> Result<Vec<OracleLevel>> {
    let (even, odd) = build_matrix(params, n_modes)?.parity_blocks();
    let mut levels: Vec<OracleLevel> = eigenvalues(even)?
        .into_iter()
        .map(|energy| OracleLevel { energy, parity: Parity::Even })
        .chain(
            eigenvalues(odd)?
                .into_iter()
                .map(|energy| OracleLevel { energy, parity: Parity::Odd }),
        )
        .collect();
    levels.sort_by(|a, b| a.energy.total_cmp(&b.energy));
    Ok(levels)
}

/// The `k` smallest eigenvalues of the `N`-mode matrix.
pub fn oracle_spectrum(params: &OscillatorParams, n_modes: usize, k: usize) -> Result<Vec<f64>> {
    if k > 2 * n_modes + 1 {
        return Err(Error::Size(format!("k = {k} exceeds dimension {}", 2 * n_modes + 1)));
    }
    let levels = oracle_levels(params, n_modes)?;
    Ok(levels.into_iter().take(k).map(|l| l.energy).collect())
}

/// Lowest eigenvalues of the unit-circle form of `(1/2r²)p² + (r²/2)q²`
/// beside those of the `ℓ = πr` oracle.
#[derive(Debug, Clone, Serialize)]
pub struct RescalingReport {
    pub radius: f64,
    pub n_modes: usize,
    pub rescaled: Vec<f64>,
    pub direct: Vec<f64>,
    /// `max |M_rescaled - M_direct|` over all entries.
    pub max_entry_difference: f64,
    pub max_eigenvalue_difference: f64,
    pub tolerance: f64,
    pub passed: bool,
}

const RESCALING_LEVELS: usize = 6;
const RESCALING_TOL: f64 = 1e-3;

/// Compares the unitarily rescaled operator on the unit circle (`ℓ = π`)
/// with the direct oracle at `ℓ = πr`.
pub fn rescaling_check(radius: f64, n_modes: usize) -> Result<RescalingReport> {
    if !(radius > 0.0 && radius <= 2.0) {
        return Err(Error::InvalidParams(format!("radius r = {radius} outside (0, 2]")));
    }
    let direct = build_matrix(&OscillatorParams::from_radius(radius, 0.0)?, n_modes)?;
    let dim = direct.dim();
    let offset = n_modes as i64;
    let r2 = radius * radius;
    // on ℓ = π: p has eigenvalues n, and ½x² has entries π²/6, (-1)^k/k²
    let rescaled = DMatrix::from_fn(dim, dim, |i, j| {
        let (m, n) = (i as i64 - offset, j as i64 - offset);
        let k = m - n;
        if k == 0 {
            (n * n) as f64 / (2.0 * r2) + r2 * PI * PI / 6.0
        } else {
            let sign = if k.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
            r2 * sign / (k * k) as f64
        }
    });
    let max_entry_difference = (&rescaled - direct.entries()).amax();
    let lowest = |m: DMatrix<f64>| -> Result<Vec<f64>> {
        Ok(eigenvalues(m)?.into_iter().take(RESCALING_LEVELS).collect())
    };
    let rescaled = lowest(rescaled)?;
    let direct = lowest(direct.entries)?;
    let max_eigenvalue_difference = rescaled
        .iter()
        .zip(&direct)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    Ok(RescalingReport {
        radius,
        n_modes,
        rescaled,
        direct,
        max_entry_difference,
        max_eigenvalue_difference,
        tolerance: RESCALING_TOL,
        passed: max_eigenvalue_difference <= RESCALING_TOL,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(ell: f64, beta: f64) -> OscillatorParams {
        OscillatorParams::new(ell, beta).unwrap()
    }

    #[test]
    fn origin_entry_at_ell_pi() {
        let m = build_matrix(&params(PI, 0.0), 8).unwrap();
        assert!((m.entry(0, 0) - PI * PI / 6.0).abs() < 1e-14);
    }

    #[test]
    fn delta_entries_alternate() {
        let free = build_matrix(&params(1.3, 0.0), 8).unwrap();
        let m = build_matrix(&params(1.3, 2.0), 8).unwrap();
        assert!((m.entry(3, 0) - free.entry(3, 0) + 1.0).abs() < 1e-15);
        assert!((m.entry(-2, 2) - free.entry(-2, 2) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn kinetic_diagonal_is_exact() {
        let ell = 2.0;
        let free = build_matrix(&params(ell, 0.0), 8).unwrap();
        for n in -8..=8i64 {
            let kinetic = free.entry(n, n) - ell * ell / 6.0;
            let expected = (n * n) as f64 * PI * PI / (2.0 * ell * ell);
            assert!((kinetic - expected).abs() <= 1e-15 * expected.max(1.0));
        }
    }

    #[test]
    fn symmetric_and_block_diagonal() {
        let m = build_matrix(&params(2.0, -1.3), 12).unwrap();
        assert_eq!(m.asymmetry(), 0.0);
        let h = |a: i64, b: i64| m.entry(a, b);
        // cosine/sine cross terms vanish
        for p in 1..=12i64 {
            for q in 0..=12i64 {
                let cross = h(q, p) - h(q, -p) + h(-q, p) - h(-q, -p);
                assert!(cross.abs() < 1e-13, "p = {p}, q = {q}");
            }
        }
    }

    #[test]
    fn odd_block_ignores_beta() {
        let (_, a) = build_matrix(&params(1.7, -1.0), 16).unwrap().parity_blocks();
        let (_, b) = build_matrix(&params(1.7, 2.5), 16).unwrap().parity_blocks();
        assert!((a - b).amax() < 1e-14);
    }

    #[test]
    fn size_errors() {
        assert!(matches!(build_matrix(&params(1.0, 0.0), 4), Err(Error::Size(_))));
        assert!(matches!(oracle_spectrum(&params(1.0, 0.0), 8, 18), Err(Error::Size(_))));
    }

    #[test]
    fn monotone_under_doubling() {
        let p = params(2.0, 0.0);
        let coarse = oracle_spectrum(&p, 16, 6).unwrap();
        let fine = oracle_spectrum(&p, 32, 6).unwrap();
        for (c, f) in coarse.iter().zip(&fine) {
            assert!(f <= &(c + 1e-12));
        }
    }

    #[test]
    fn block_spectrum_equals_full_spectrum() {
        let m = build_matrix(&params(1.5, 0.7), 10).unwrap();
        let full = eigenvalues(m.entries().clone()).unwrap();
        let split: Vec<f64> = oracle_levels(&params(1.5, 0.7), 10)
            .unwrap()
            .into_iter()
            .map(|l| l.energy)
            .collect();
        for (a, b) in full.iter().zip(&split) {
            assert!((a - b).abs() < 1e-11);
        }
    }

    #[test]
    fn rescaling_is_exact() {
        for r in [0.25, 0.5, 1.0, 1.7] {
            let rep = rescaling_check(r, 32).unwrap();
            assert!(rep.max_entry_difference < 1e-12, "r = {r}");
            assert!(rep.passed);
        }
    }

    #[test]
    fn small_radius_levels_scale_as_free_particle() {
        let rep = rescaling_check(0.25, 32).unwrap();
        // 8⌈n/2⌉² with the potential as a small correction
        for (i, e) in rep.direct.iter().enumerate().skip(1) {
            let n = i.div_ceil(2) as f64;
            assert!((e / (8.0 * n * n) - 1.0).abs() < 0.05, "level {i}: {e}");
        }
    }
}
