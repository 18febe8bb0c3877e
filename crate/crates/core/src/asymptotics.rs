//! Limits of the spectrum: the wide-circle gamma-pole asymptotics, the
//! narrow-circle free particle with a point interaction, and the pollution
//! state of `H_A`.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::{quad_l2, Grid, SampledFunction, DEFAULT_POINTS};
use crate::params::{OscillatorParams, Parity};
use crate::shooting::{eigenfunction_at, lowest_levels, Levels};
use crate::special::log_gamma;
use crate::weber::weber;

/// Smallest half-length at which [`large_ell_envelope`] is meaningful.
pub const LARGE_ELL_MIN: f64 = 3.0;

/// Largest half-length at which [`small_ell_prediction`] is meaningful.
pub const SMALL_ELL_MAX: f64 = 0.2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    LargeEll,
    SmallEll,
}

/// Truncation of the large-`ℓ` expansion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AsymptoticOrder {
    #[default]
    Leading,
    /// Leading term times `1 + c/ℓ²`.
    FirstCorrection,
}

/// `ln|·|` and sign of the asymptotic form of `u_e'(E, ℓ)` or `u_o(E, ℓ)`:
///
/// ```text
/// u_e'(E, ℓ) ~ √(π ℓ e^{ℓ²}) ℓ^{-E} / Γ(1/4 - E/2)
/// u_o(E, ℓ)  ~ √(π e^{ℓ²} / (4ℓ)) ℓ^{-E} / Γ(3/4 - E/2)
/// ```
///
/// The first correction multiplies by `1 + ((2a - 1) + (1 - a)(1/2 - a))/ℓ²`
/// (even, `a = 1/4 - E/2`) or `1 + (1 - a)(3/2 - a)/ℓ²` (odd, `a = 3/4 - E/2`).
pub fn asymptotic_form(
    energy: f64,
    ell: f64,
    parity: Parity,
    order: AsymptoticOrder,
) -> Result<(f64, f64)> {
    let (a, prefactor) = match parity {
        Parity::Even => (0.25 - 0.5 * energy, 0.5 * (PI * ell).ln()),
        Parity::Odd => (0.75 - 0.5 * energy, 0.5 * (PI / (4.0 * ell)).ln()),
    };
    let gamma = log_gamma(a)?;
    let mut ln_abs = prefactor + 0.5 * ell * ell - energy * ell.ln() - gamma.ln_abs;
    let mut sign = gamma.sign;
    if order == AsymptoticOrder::FirstCorrection {
        let c = match parity {
            Parity::Even => (2.0 * a - 1.0) + (1.0 - a) * (0.5 - a),
            Parity::Odd => (1.0 - a) * (1.5 - a),
        };
        let factor = 1.0 + c / (ell * ell);
        ln_abs += factor.abs().ln();
        sign *= factor.signum();
    }
    Ok((ln_abs, sign))
}

/// `u_e'(E, ℓ)` (even) or `u_o(E, ℓ)` (odd) divided by its asymptotic form;
/// tends to one as `ℓ` grows.
pub fn large_ell_envelope(
    energy: f64,
    ell: f64,
    parity: Parity,
    order: AsymptoticOrder,
) -> Result<f64> {
    if ell < LARGE_ELL_MIN {
        return Err(Error::InvalidParams(format!(
            "ℓ = {ell} below the large-ℓ range ℓ ≥ {LARGE_ELL_MIN}"
        )));
    }
    let (ln_abs, sign) = asymptotic_form(energy, ell, parity, order)?;
    let w = weber(energy, parity, ell)?;
    let exact = match parity {
        Parity::Even => w.derivative,
        Parity::Odd => w.value,
    };
    Ok(sign * exact * (-ln_abs).exp())
}

/// One predicted level beside the computed one.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LevelComparison {
    /// Mode number: `n` in `n²π²/(2ℓ²)` or in `n + 1/2`.
    pub n: usize,
    pub parity: Parity,
    pub predicted: f64,
    pub computed: f64,
    /// Relative error, or absolute where the prediction is not bounded away
    /// from zero (see the producing function).
    pub error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AsymptoticReport {
    pub regime: Regime,
    pub params: OscillatorParams,
    pub levels: Vec<LevelComparison>,
    pub predicted: Vec<f64>,
    pub computed: Vec<f64>,
    /// Largest relative error over the levels compared relatively.
    pub max_rel_error: f64,
    /// Largest absolute error over all levels.
    pub max_abs_error: f64,
}

impl AsymptoticReport {
    fn new(regime: Regime, params: OscillatorParams, levels: Vec<LevelComparison>, relative: impl Fn(&LevelComparison) -> bool) -> Self {
        let max_rel_error = levels.iter().filter(|l| relative(l)).map(|l| l.error).fold(0.0, f64::max);
        let max_abs_error =
            levels.iter().map(|l| (l.computed - l.predicted).abs()).fold(0.0, f64::max);
        Self {
            regime,
            params,
            predicted: levels.iter().map(|l| l.predicted).collect(),
            computed: levels.iter().map(|l| l.computed).collect(),
            levels,
            max_rel_error,
            max_abs_error,
        }
    }

    /// `E_even(n) - E_odd(n)` for every `n ≥ 1` present in both sectors.
    pub fn splittings(&self) -> Vec<(usize, f64)> {
        let find = |n, p| self.levels.iter().find(|l| l.n == n && l.parity == p).map(|l| l.computed);
        let mut out: Vec<(usize, f64)> = self
            .levels
            .iter()
            .filter(|l| l.parity == Parity::Odd)
            .filter_map(|l| find(l.n, Parity::Even).map(|e| (l.n, e - l.computed)))
            .collect();
        out.sort_by_key(|&(n, _)| n);
        out
    }
}

/// Free-particle prediction for a narrow circle: odd levels `n²π²/(2ℓ²)`,
/// `n ≥ 1`, even levels `n²π²/(2ℓ²) + β`, `n ≥ 1`, and an even `n = 0` level
/// near `β/2` (the constant mode sees half the point interaction).
///
/// The first `k_levels` levels in predicted order are compared with the
/// solver; errors are relative except for the `n = 0` even level, whose
/// error is absolute.
pub fn small_ell_prediction(params: &OscillatorParams, k_levels: usize) -> Result<AsymptoticReport> {
    let ell = params.half_length();
    if ell > SMALL_ELL_MAX {
        return Err(Error::InvalidParams(format!(
            "ℓ = {ell} above the small-ℓ range ℓ ≤ {SMALL_ELL_MAX}"
        )));
    }
    let beta = params.beta();
    let unit = PI * PI / (2.0 * ell * ell);
    let mut predicted: Vec<(usize, Parity, f64)> = Vec::new();
    for n in 0..=k_levels {
        let free = (n * n) as f64 * unit;
        if n == 0 {
            predicted.push((0, Parity::Even, 0.5 * beta));
        } else {
            predicted.push((n, Parity::Even, free + beta));
            predicted.push((n, Parity::Odd, free));
        }
    }
    predicted.sort_by(|a, b| a.2.total_cmp(&b.2));
    predicted.truncate(k_levels);

    let max_n = predicted.iter().map(|p| p.0).max().unwrap_or(0);
    let computed = lowest_levels(params, 2 * max_n + 2)?;
    let even = computed.of_parity(Parity::Even);
    let odd = computed.of_parity(Parity::Odd);
    let levels = predicted
        .into_iter()
        .map(|(n, parity, p)| {
            let c = match parity {
                Parity::Even => even.get(n),
                Parity::Odd => odd.get(n - 1),
            }
            .copied()
            .ok_or(Error::Index { index: n, available: computed.len(), e_max: computed.diagnostics.e_max })?;
            let error = if n == 0 { (c - p).abs() } else { (c - p).abs() / p.abs() };
            Ok(LevelComparison { n, parity, predicted: p, computed: c, error })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(AsymptoticReport::new(Regime::SmallEll, *params, levels, |l| l.n > 0))
}

/// A level of the free particle on the circle with point interaction `βℓδ_A`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FreeLevel {
    pub energy: f64,
    pub parity: Parity,
    /// Wavenumber `κ`; for a negative-energy level `E = -κ²/2`.
    pub wavenumber: f64,
}

fn bisect_root(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let mut fa = f(a);
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        let fm = f(m);
        if fm == 0.0 {
            return m;
        }
        if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

/// Exact levels without the oscillator potential: odd `κ = nπ/ℓ`; even from
/// `-κ sin(κℓ) + βℓ cos(κℓ) = 0`, i.e. `θ tan θ = βℓ²` with `θ = κℓ`, plus
/// the bound state `θ tanh θ = -βℓ²` with `E = -κ²/2` when `β < 0`.
///
/// Each even root is bracketed analytically: `θ ∈ [mπ, mπ + π/2]` for `β > 0`,
/// `θ ∈ [mπ - π/2, mπ]` for `β < 0`.
pub fn free_particle_delta_spectrum(params: &OscillatorParams, k: usize) -> Vec<FreeLevel> {
    let ell = params.half_length();
    let g = params.beta() * ell * ell;
    let mut levels = Vec::with_capacity(2 * k + 2);
    for n in 1..=k {
        let kappa = n as f64 * PI / ell;
        levels.push(FreeLevel { energy: 0.5 * kappa * kappa, parity: Parity::Odd, wavenumber: kappa });
    }
    let h = |t: f64| t * t.sin() - g * t.cos();
    let even = |theta: f64, sign: f64| {
        let kappa = theta / ell;
        FreeLevel { energy: sign * 0.5 * kappa * kappa, parity: Parity::Even, wavenumber: kappa }
    };
    if g < 0.0 {
        let hyper = |t: f64| t * t.tanh() + g;
        let theta = bisect_root(hyper, 0.0, 1.0 + g.abs());
        levels.push(even(theta, -1.0));
        for m in 1..=k {
            let mp = m as f64 * PI;
            levels.push(even(bisect_root(h, mp - 0.5 * PI, mp), 1.0));
        }
    } else if g > 0.0 {
        for m in 0..=k {
            let mp = m as f64 * PI;
            levels.push(even(bisect_root(h, mp, mp + 0.5 * PI), 1.0));
        }
    } else {
        for m in 0..=k {
            levels.push(even(m as f64 * PI, 1.0));
        }
    }
    levels.sort_by(|a, b| a.energy.total_cmp(&b.energy));
    levels.truncate(k);
    levels
}

/// `-κ sin(κℓ) + βℓ cos(κℓ)` (or its hyperbolic form for `E < 0`) at a free
/// level, scaled by `max(1, κ)`.
pub fn free_level_residual(params: &OscillatorParams, level: &FreeLevel) -> f64 {
    let ell = params.half_length();
    let beta = params.beta();
    let k = level.wavenumber;
    let r = match level.parity {
        Parity::Odd => (k * ell).sin(),
        Parity::Even if level.energy < 0.0 => k * (k * ell).sinh() + beta * ell * (k * ell).cosh(),
        Parity::Even => -k * (k * ell).sin() + beta * ell * (k * ell).cos(),
    };
    r.abs() / k.max(1.0)
}

/// Levels `n ≤ count - 1` against `n + 1/2`, skipping the `E = -1/2` state
/// when `β = -1`. Errors are relative.
pub fn harmonic_limit(params: &OscillatorParams, count: usize) -> Result<AsymptoticReport> {
    let levels: Levels = lowest_levels(params, count + 1)?;
    let pollution = params.beta() == -1.0;
    let kept: Vec<_> = levels
        .levels
        .iter()
        .filter(|l| !(pollution && (l.energy + 0.5).abs() < 1e-6))
        .take(count)
        .collect();
    let levels = kept
        .iter()
        .enumerate()
        .map(|(n, l)| {
            let predicted = n as f64 + 0.5;
            LevelComparison {
                n,
                parity: l.parity,
                predicted,
                computed: l.energy,
                error: (l.energy - predicted).abs() / predicted,
            }
        })
        .collect();
    Ok(AsymptoticReport::new(Regime::LargeEll, *params, levels, |_| true))
}

/// `(ℓ, E_0(ℓ) - 1/2)` for the lowest even level of `H` (`β = 0`).
pub fn gamma_pole_convergence(ells: &[f64]) -> Result<Vec<(f64, f64)>> {
    ells.iter()
        .map(|&ell| {
            let levels = lowest_levels(&OscillatorParams::new(ell, 0.0)?, 1)?;
            Ok((ell, levels.levels[0].energy - 0.5))
        })
        .collect()
}

/// `2ℓ² E_n / π²` against `⌈n/2⌉²` for `1 ≤ n ≤ count`.
pub fn small_ell_scaling(params: &OscillatorParams, count: usize) -> Result<Vec<(usize, f64, f64)>> {
    let ell = params.half_length();
    let levels = lowest_levels(params, count + 1)?;
    Ok(levels
        .levels
        .iter()
        .enumerate()
        .skip(1)
        .map(|(n, l)| {
            let m = n.div_ceil(2) as f64;
            (n, 2.0 * ell * ell * l.energy / (PI * PI), m * m)
        })
        .collect())
}

/// The normalized `E = -1/2` eigenfunction of `H_A` and the fraction of its
/// `L²` mass in `|x| ≥ ℓ/2`.
#[derive(Debug, Clone, PartialEq)]
pub struct PollutionState {
    pub energy: f64,
    pub function: SampledFunction,
    pub outer_mass: f64,
}

pub fn pollution_state(ell: f64) -> Result<PollutionState> {
    let params = OscillatorParams::new(ell, -1.0)?;
    let levels = lowest_levels(&params, 1)?;
    let energy = levels.levels[0].energy;
    let grid = Grid::new(ell, DEFAULT_POINTS)?;
    let function = eigenfunction_at(&params, energy, Parity::Even, grid)?;
    let outer: Vec<f64> = function
        .nodes()
        .iter()
        .zip(function.real_values())
        .map(|(x, v)| if x.abs() >= 0.5 * ell { v } else { 0.0 })
        .collect();
    let outer = SampledFunction::from_real_samples(grid, &outer, &outer)?;
    Ok(PollutionState { energy, outer_mass: quad_l2(&outer) / quad_l2(&function), function })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(ell: f64, beta: f64) -> OscillatorParams {
        OscillatorParams::new(ell, beta).unwrap()
    }

    #[test]
    fn even_envelope_ratio_near_one() {
        let r5 = large_ell_envelope(0.9, 5.0, Parity::Even, AsymptoticOrder::Leading).unwrap();
        let r6 = large_ell_envelope(0.9, 6.0, Parity::Even, AsymptoticOrder::Leading).unwrap();
        // mpmath: 0.975239 and 0.983357
        assert!((r5 - 0.975239).abs() < 1e-5, "{r5}");
        assert!((r6 - 0.983357).abs() < 1e-5, "{r6}");
        assert!((r6 - 1.0).abs() < (r5 - 1.0).abs());
    }

    #[test]
    fn odd_envelope_orders() {
        let lead = large_ell_envelope(2.1, 5.0, Parity::Odd, AsymptoticOrder::Leading).unwrap();
        let corr = large_ell_envelope(2.1, 5.0, Parity::Odd, AsymptoticOrder::FirstCorrection).unwrap();
        // mpmath: 1.10823 and 1.01338
        assert!((lead - 1.10823).abs() < 1e-5, "{lead}");
        assert!((corr - 1.01338).abs() < 1e-5, "{corr}");
    }

    #[test]
    fn envelope_pole_and_range_errors() {
        assert!(matches!(
            large_ell_envelope(0.5, 4.0, Parity::Even, AsymptoticOrder::Leading),
            Err(Error::Pole(_))
        ));
        assert!(large_ell_envelope(0.9, 2.0, Parity::Even, AsymptoticOrder::Leading).is_err());
    }

    #[test]
    fn free_spectrum_degenerate_without_delta() {
        let lv = free_particle_delta_spectrum(&params(0.05, 0.0), 7);
        assert_eq!(lv[0].energy, 0.0);
        for pair in lv[1..].chunks(2) {
            assert!((pair[0].energy - pair[1].energy).abs() <= 1e-9 * pair[0].energy);
        }
    }

    #[test]
    fn free_spectrum_negative_root() {
        let p = params(0.05, -1.0);
        let lv = free_particle_delta_spectrum(&p, 5);
        assert!(lv[0].energy < 0.0 && lv[0].parity == Parity::Even);
        for l in &lv {
            assert!(free_level_residual(&p, l) < 1e-12, "{l:?}");
        }
    }

    #[test]
    fn free_spectrum_matches_solver() {
        let p = params(0.05, 1.0);
        let free = free_particle_delta_spectrum(&p, 5);
        let full = lowest_levels(&p, 5).unwrap();
        for (f, s) in free.iter().zip(&full.levels) {
            assert_eq!(f.parity, s.parity);
            assert!((f.energy - s.energy).abs() <= 0.02 * s.energy.abs(), "{f:?} vs {s:?}");
        }
    }

    #[test]
    fn degeneracy_lifted_by_beta() {
        for beta in [-1.0, 0.0, 1.0] {
            let rep = small_ell_prediction(&params(0.05, beta), 5).unwrap();
            assert!(rep.max_rel_error <= 0.05, "{rep:?}");
            let zero = rep.levels.iter().find(|l| l.n == 0).unwrap();
            assert!(zero.error <= 0.1, "{zero:?}");
            for (n, split) in rep.splittings() {
                if beta == 0.0 {
                    let odd = rep.levels.iter().find(|l| l.n == n && l.parity == Parity::Odd).unwrap();
                    assert!(split.abs() <= 1e-3 * odd.computed, "n = {n}");
                } else {
                    assert!((split - beta).abs() <= 0.05, "n = {n}: {split}");
                }
            }
        }
    }

    #[test]
    fn harmonic_limit_at_ell_six() {
        for beta in [-1.0, 0.0, 1.0] {
            let rep = harmonic_limit(&params(6.0, beta), 6).unwrap();
            assert_eq!(rep.levels.len(), 6);
            assert!(rep.max_abs_error <= 1e-3, "{rep:?}");
        }
    }

    #[test]
    fn ground_level_approaches_pole() {
        let t = gamma_pole_convergence(&[3.0, 4.0, 5.0, 6.0]).unwrap();
        for w in t.windows(2) {
            assert!(w[1].1.abs() < w[0].1.abs(), "{t:?}");
        }
    }

    #[test]
    fn pollution_state_lives_near_a() {
        let s = pollution_state(6.0).unwrap();
        assert!((s.energy + 0.5).abs() < 1e-8);
        assert!(s.outer_mass >= 0.99);
    }

    #[test]
    fn narrow_circle_scaling() {
        for (n, scaled, target) in small_ell_scaling(&params(0.1, 0.0), 4).unwrap() {
            assert!((scaled - target).abs() <= 0.02 * target, "n = {n}");
        }
    }
}
