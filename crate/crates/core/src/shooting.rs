//! Point spectrum of `H_β` by shooting on the parity-resolved residuals
//!
//! ```text
//! F_odd(E)  = u_o(E, ℓ)
//! F_even(E) = u_e'(E, ℓ) + βℓ u_e(E, ℓ)
//! ```
//!
//! Roots are bracketed on a uniform energy scan and refined by bisection.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::galerkin::oracle_levels;
use crate::grid::{quad_l2, Grid, SampledFunction, DEFAULT_POINTS};
use crate::ode::WeberOde;
use crate::params::{OscillatorParams, Parity};
use crate::weber::{sample_by_parity, weber, weber_ode};

/// Levels the default window is widened to contain.
pub const DEFAULT_LEVEL_COUNT: usize = 12;

/// Half-lengths up to this use the series route for the residual.
const SERIES_MAX_ELL: f64 = 1.0;

/// Beyond this half-length the residual is divided by its asymptotic envelope.
const ENVELOPE_MIN_ELL: f64 = 3.0;

/// Relative bisection width.
const BISECTION_RTOL: f64 = 1e-13;

/// Top of the widening window; `|E| ≤ 10⁴` is the evaluator's range.
const MAX_ENERGY: f64 = 1e4;

/// Modes of the Galerkin matrix used for the bracket density check.
const DENSITY_MODES: usize = 64;

/// Scan refinement factor used when the density check reports a deficit.
const RESCAN_FACTOR: usize = 8;

/// `u_o(E, ℓ)` or `u_e'(E, ℓ) + βℓ u_e(E, ℓ)`, unscaled.
pub fn shooting_residual(energy: f64, params: &OscillatorParams, parity: Parity) -> Result<f64> {
    let ell = params.half_length();
    let w = if ell <= SERIES_MAX_ELL {
        weber(energy, parity, ell)?
    } else {
        weber_ode(energy, parity, ell)?
    };
    Ok(match parity {
        Parity::Odd => w.value,
        Parity::Even => w.derivative + params.beta() * ell * w.value,
    })
}

/// `ln` of the growth envelope of the non-normalizable branch at `x = ℓ`:
/// `√π e^{ℓ²/2} ℓ^{1/2 - E}` for `u_e'` and `(√π/2) e^{ℓ²/2} ℓ^{-1/2 - E}`
/// for `u_o`. No gamma factor, so the envelope never vanishes.
pub fn log_envelope(energy: f64, ell: f64, parity: Parity) -> f64 {
    let base = 0.5 * PI.ln() + 0.5 * ell * ell;
    match parity {
        Parity::Even => base + (0.5 - energy) * ell.ln(),
        Parity::Odd => base - 2f64.ln() - (0.5 + energy) * ell.ln(),
    }
}

/// The residual in bracket-scaled units: divided by the envelope for
/// `ℓ > 3` where the envelope exceeds one, unchanged otherwise.
pub fn scaled_residual(energy: f64, params: &OscillatorParams, parity: Parity) -> Result<f64> {
    let f = shooting_residual(energy, params, parity)?;
    let ell = params.half_length();
    if ell > ENVELOPE_MIN_ELL {
        // high levels are still oscillatory at ℓ; never amplify
        Ok(f * (-log_envelope(energy, ell, parity).max(0.0)).exp())
    } else {
        Ok(f)
    }
}

/// Scan spacing `min(0.25, π²/(8ℓ²))`.
pub fn scan_step(ell: f64) -> f64 {
    (PI * PI / (8.0 * ell * ell)).min(0.25)
}

/// An energy window for [`find_spectrum`]. Missing bounds take defaults:
/// `e_min = -1 - β²ℓ²/2`, and `e_max` is widened until twelve levels lie
/// below it.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Window {
    pub e_min: Option<f64>,
    pub e_max: Option<f64>,
}

impl Window {
    pub fn up_to(e_max: f64) -> Self {
        Self { e_min: None, e_max: Some(e_max) }
    }

    pub fn between(e_min: f64, e_max: f64) -> Self {
        Self { e_min: Some(e_min), e_max: Some(e_max) }
    }
}

/// A refined root of one parity residual.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Level {
    pub energy: f64,
    pub parity: Parity,
    /// Scaled residual at `energy`.
    pub residual: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct ScanDiagnostics {
    pub e_min: f64,
    pub e_max: f64,
    pub scan_step: f64,
    pub scan_points: usize,
    pub brackets: usize,
    pub refinement_iterations: usize,
    /// Bracket-miss warnings from the density check.
    pub warnings: Vec<String>,
}

/// Sorted levels of both parities with their diagnostics.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Levels {
    pub params: OscillatorParams,
    pub levels: Vec<Level>,
    pub diagnostics: ScanDiagnostics,
}

impl Levels {
    pub fn energies(&self) -> Vec<f64> {
        self.levels.iter().map(|l| l.energy).collect()
    }

    pub fn of_parity(&self, parity: Parity) -> Vec<f64> {
        self.levels.iter().filter(|l| l.parity == parity).map(|l| l.energy).collect()
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EigenPair {
    pub energy: f64,
    pub parity: Parity,
    pub index: usize,
    pub params: OscillatorParams,
    #[serde(skip)]
    pub function: SampledFunction,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Spectrum {
    pub params: OscillatorParams,
    pub pairs: Vec<EigenPair>,
    pub diagnostics: ScanDiagnostics,
}

impl Spectrum {
    pub fn energies(&self) -> Vec<f64> {
        self.pairs.iter().map(|p| p.energy).collect()
    }
}

struct Scan {
    roots: Vec<Level>,
    points: usize,
    brackets: usize,
    iterations: usize,
}

/// Sign-change scan of one parity on `[lo, hi]`, refined by bisection.
fn scan_parity(
    params: &OscillatorParams,
    parity: Parity,
    lo: f64,
    hi: f64,
    step: f64,
) -> Result<Scan> {
    let f = |e: f64| scaled_residual(e, params, parity);
    let n = ((hi - lo) / step).ceil().max(1.0) as usize;
    let mut out = Scan { roots: Vec::new(), points: n + 1, brackets: 0, iterations: 0 };
    let at = |i: usize| if i == n { hi } else { lo + i as f64 * step };
    let mut e0 = at(0);
    let mut f0 = f(e0)?;
    if f0 == 0.0 {
        out.roots.push(Level { energy: e0, parity, residual: 0.0 });
    }
    for i in 1..=n {
        let e1 = at(i);
        let f1 = f(e1)?;
        if f1 == 0.0 {
            out.roots.push(Level { energy: e1, parity, residual: 0.0 });
        } else if f0 != 0.0 && f0.signum() != f1.signum() {
            out.brackets += 1;
            let (root, iters) = bisect(&f, e0, e1, f0)?;
            out.iterations += iters;
            out.roots.push(root_level(root, parity, &f)?);
        }
        e0 = e1;
        f0 = f1;
    }
    Ok(out)
}

fn root_level(energy: f64, parity: Parity, f: &impl Fn(f64) -> Result<f64>) -> Result<Level> {
    Ok(Level { energy, parity, residual: f(energy)? })
}

/// Bisection on `[a, b]` with `f(a) = fa` of opposite sign to `f(b)`.
fn bisect(f: &impl Fn(f64) -> Result<f64>, mut a: f64, mut b: f64, mut fa: f64) -> Result<(f64, usize)> {
    let mut iters = 0;
    loop {
        let mid = 0.5 * (a + b);
        if (b - a) <= BISECTION_RTOL * mid.abs().max(1.0) || mid <= a || mid >= b {
            return Ok((mid, iters));
        }
        iters += 1;
        let fm = f(mid)?;
        if fm == 0.0 {
            return Ok((mid, iters));
        }
        if fm.signum() == fa.signum() {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }
}

fn merge(mut levels: Vec<Level>) -> Vec<Level> {
    levels.sort_by(|a, b| a.energy.total_cmp(&b.energy));
    levels
}

/// Counts Galerkin levels per parity strictly below `e_max`. The oracle is a
/// variational upper bound, so it never overcounts.
fn oracle_counts(params: &OscillatorParams, e_max: f64) -> Result<(usize, usize)> {
    let levels = oracle_levels(params, DENSITY_MODES)?;
    let count = |p| levels.iter().filter(|l| l.parity == p && l.energy < e_max).count();
    Ok((count(Parity::Even), count(Parity::Odd)))
}

fn scan_window(
    params: &OscillatorParams,
    lo: f64,
    hi: f64,
    diag: &mut ScanDiagnostics,
) -> Result<Vec<Level>> {
    let step = scan_step(params.half_length());
    let mut roots = Vec::new();
    for parity in [Parity::Even, Parity::Odd] {
        let s = scan_parity(params, parity, lo, hi, step)?;
        diag.scan_points += s.points;
        diag.brackets += s.brackets;
        diag.refinement_iterations += s.iterations;
        roots.extend(s.roots);
    }
    Ok(roots)
}

/// All levels of both parities in the window, bracketed at spacing
/// [`scan_step`] and bisected to `1e-13·max(1, |E|)`.
///
/// After the scan, the number of roots per parity is compared with the
/// Galerkin oracle below `e_max`; a deficit triggers one rescan of that
/// parity at an eight times finer step, and a remaining deficit is recorded
/// as a bracket-miss warning.
pub fn find_levels(params: &OscillatorParams, window: Window) -> Result<Levels> {
    let e_min = window.e_min.unwrap_or_else(|| params.default_energy_floor());
    let step = scan_step(params.half_length());
    let mut diag = ScanDiagnostics { e_min, scan_step: step, ..Default::default() };

    let mut levels = match window.e_max {
        Some(e_max) => {
            if e_min >= e_max || e_max.is_nan() {
                return Err(Error::InvalidParams(format!(
                    "empty energy window [{e_min}, {e_max}]"
                )));
            }
            diag.e_max = e_max;
            scan_window(params, e_min, e_max, &mut diag)?
        }
        None => {
            let mut hi = initial_upper_bound(params).max(e_min + 1.0);
            let mut found = scan_window(params, e_min, hi, &mut diag)?;
            while found.len() < DEFAULT_LEVEL_COUNT && hi < MAX_ENERGY {
                let next = (hi + (hi - e_min).max(4.0)).min(MAX_ENERGY);
                found.extend(scan_window(params, hi, next, &mut diag)?);
                hi = next;
            }
            diag.e_max = hi;
            found
        }
    };
    levels = merge(levels);
    density_check(params, &mut levels, &mut diag)?;
    Ok(Levels { params: *params, levels, diagnostics: diag })
}

/// Free-particle estimate of the twelfth level plus the largest potential
/// value, or the harmonic-oscillator value for wide circles.
fn initial_upper_bound(params: &OscillatorParams) -> f64 {
    let ell = params.half_length();
    let free = 18.0 * PI * PI / (ell * ell) + 0.5 * ell * ell + params.beta().abs();
    free.min(DEFAULT_LEVEL_COUNT as f64 + 1.0 + params.beta().abs())
}

fn density_check(
    params: &OscillatorParams,
    levels: &mut Vec<Level>,
    diag: &mut ScanDiagnostics,
) -> Result<()> {
    let (even_oracle, odd_oracle) = oracle_counts(params, diag.e_max)?;
    for (parity, expected) in [(Parity::Even, even_oracle), (Parity::Odd, odd_oracle)] {
        let have = levels.iter().filter(|l| l.parity == parity).count();
        if have >= expected {
            continue;
        }
        let fine = diag.scan_step / RESCAN_FACTOR as f64;
        let s = scan_parity(params, parity, diag.e_min, diag.e_max, fine)?;
        diag.scan_points += s.points;
        diag.brackets += s.brackets;
        diag.refinement_iterations += s.iterations;
        if s.roots.len() > have {
            levels.retain(|l| l.parity != parity);
            levels.extend(s.roots.iter().copied());
            *levels = merge(std::mem::take(levels));
        }
        let now = levels.iter().filter(|l| l.parity == parity).count();
        if now < expected {
            diag.warnings.push(format!(
                "{parity} sector: {now} roots found below E = {} but the Galerkin oracle has {expected}; \
                 adjacent scan points may straddle more than one root",
                diag.e_max
            ));
        }
    }
    Ok(())
}

/// Levels with normalized eigenfunctions on the default grid.
pub fn find_spectrum(params: &OscillatorParams, window: Window) -> Result<Spectrum> {
    find_spectrum_on(params, window, DEFAULT_POINTS)
}

pub fn find_spectrum_on(
    params: &OscillatorParams,
    window: Window,
    n_points: usize,
) -> Result<Spectrum> {
    let levels = find_levels(params, window)?;
    let grid = Grid::new(params.half_length(), n_points)?;
    let pairs = levels
        .levels
        .iter()
        .enumerate()
        .map(|(index, l)| {
            Ok(EigenPair {
                energy: l.energy,
                parity: l.parity,
                index,
                params: *params,
                function: eigenfunction_at(params, l.energy, l.parity, grid)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Spectrum { params: *params, pairs, diagnostics: levels.diagnostics })
}

/// The lowest `count` levels, widening the default window as needed.
pub fn lowest_levels(params: &OscillatorParams, count: usize) -> Result<Levels> {
    let mut window = Window::default();
    loop {
        let found = find_levels(params, window)?;
        if found.len() >= count || found.diagnostics.e_max >= MAX_ENERGY {
            let mut found = found;
            found.levels.truncate(count);
            return Ok(found);
        }
        let e_max = found.diagnostics.e_max;
        let span = (e_max - found.diagnostics.e_min).max(4.0);
        window = Window::up_to((e_max + span).min(MAX_ENERGY));
    }
}

/// The `n`-th eigenpair (counting from 0 across both parities).
pub fn eigenfunction(params: &OscillatorParams, n: usize, n_points: usize) -> Result<EigenPair> {
    let levels = lowest_levels(params, n + 1)?;
    let Some(level) = levels.levels.get(n) else {
        return Err(Error::Index {
            index: n,
            available: levels.len(),
            e_max: levels.diagnostics.e_max,
        });
    };
    let grid = Grid::new(params.half_length(), n_points)?;
    Ok(EigenPair {
        energy: level.energy,
        parity: level.parity,
        index: n,
        params: *params,
        function: eigenfunction_at(params, level.energy, level.parity, grid)?,
    })
}

/// Normalized solution at a (numerically exact) eigenvalue.
///
/// Integrates outward from the origin with parity data and inward from `ℓ`
/// with the boundary data of `H_β`, splicing the two at the last grid node
/// inside the classically allowed region so each half is integrated in its
/// stable direction. Sign convention: value at 0 positive (even) or slope
/// at 0 positive (odd).
pub fn eigenfunction_at(
    params: &OscillatorParams,
    energy: f64,
    parity: Parity,
    grid: Grid,
) -> Result<SampledFunction> {
    let ell = params.half_length();
    if (grid.half_length() - ell).abs() > 1e-12 * ell {
        return Err(Error::Size(format!(
            "grid half-length {} does not match ℓ = {ell}",
            grid.half_length()
        )));
    }
    let mid = grid.mid();
    let right: Vec<f64> = (mid..grid.len()).map(|j| grid.node(j)).collect();
    let last = right.len() - 1;
    let turning = (2.0 * energy.max(0.0)).sqrt();
    let splice = right.iter().rposition(|&x| x <= turning).unwrap_or(0);

    let ode = WeberOde::new(energy);
    let mut states = vec![[0.0; 2]; right.len()];
    if splice > 0 {
        let origin = match parity {
            Parity::Even => [1.0, 0.0],
            Parity::Odd => [0.0, 1.0],
        };
        let out = ode.integrate_nodes(&right[..=splice], origin)?;
        states[..=splice].copy_from_slice(&out);
    }
    if splice < last {
        let edge = match parity {
            Parity::Even => [1.0, -params.beta() * ell],
            Parity::Odd => [0.0, 1.0],
        };
        let reversed: Vec<f64> = right[splice..].iter().rev().copied().collect();
        let inward = ode.integrate_nodes(&reversed, edge)?;
        let inward: Vec<[f64; 2]> = inward.into_iter().rev().collect();
        let scale = if splice == 0 {
            1.0
        } else {
            let (o, i) = (states[splice], inward[0]);
            (o[0] * i[0] + o[1] * i[1]) / (i[0] * i[0] + i[1] * i[1])
        };
        for (k, s) in inward.iter().enumerate().skip(if splice == 0 { 0 } else { 1 }) {
            states[splice + k] = [scale * s[0], scale * s[1]];
        }
    }

    let f = sample_by_parity(grid, parity, &states);
    let norm = quad_l2(&f).sqrt();
    let at_origin = match parity {
        Parity::Even => f.values()[mid].re,
        Parity::Odd => f.derivatives()[mid].re,
    };
    let sign = if at_origin < 0.0 { -1.0 } else { 1.0 };
    Ok(f.scaled((sign / norm).into()))
}

/// Scale-free defect of the matching conditions at the antipodal point:
/// `max(|f(-ℓ) - f(ℓ)| / max|f|, |f'(-ℓ) - f'(ℓ) - 2ℓβ f(ℓ)| / max|f'|)`.
pub fn boundary_residual(f: &SampledFunction, beta: f64) -> f64 {
    let ell = f.half_length();
    let (vl, dl) = f.left();
    let (vr, dr) = f.right();
    let ratio = |num: f64, scale: f64| if num == 0.0 { 0.0 } else { num / scale };
    let value = ratio((vl - vr).norm(), f.max_abs_value());
    let slope = ratio((dl - dr - vr * (2.0 * ell * beta)).norm(), f.max_abs_derivative());
    value.max(slope)
}
