//! Invariant suites run by `circle-osc verify`. Each check records its
//! measured value, its tolerance and the verdict; checks never panic.

use std::f64::consts::{PI, SQRT_2};
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::asymptotics::{gamma_pole_convergence, harmonic_limit, large_ell_envelope, pollution_state, small_ell_prediction, small_ell_scaling, AsymptoticOrder};
use crate::canonical::{annihilation_eigenpair, commutator_residual, weyl_defect, periodic_bump, wrapping_configuration};
use crate::error::{Error, Result};
use crate::io::{FigureDataset, FigureTag};
use crate::galerkin::{build_matrix, oracle_spectrum, rescaling_check};
use crate::grid::{quad_l2, Grid, SampledFunction, DEFAULT_POINTS, FINE_POINTS};
use crate::ladder::{ladder_step_check_on, normal_even_state, obstruction_check, phi_beta, phi_beta_energy, rayleigh_quotient, Ladder, SimilarityScaling};
use crate::params::{OscillatorParams, Parity};
use crate::shooting::{boundary_residual, eigenfunction, lowest_levels};
use crate::weber::{integrate_weber, weber_even, weber_even_series, weber_odd, weber_odd_series, wronskian, WeberValue};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SuiteName {
    Weber,
    Shooting,
    Galerkin,
    Ladder,
    Asymptotics,
    All,
}

impl SuiteName {
    pub const ALL: [SuiteName; 5] =
        [Self::Weber, Self::Shooting, Self::Galerkin, Self::Ladder, Self::Asymptotics];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Weber => "weber",
            Self::Shooting => "shooting",
            Self::Galerkin => "galerkin",
            Self::Ladder => "ladder",
            Self::Asymptotics => "asymptotics",
            Self::All => "all",
        }
    }

    fn expand(self) -> Vec<SuiteName> {
        if self == Self::All {
            Self::ALL.to_vec()
        } else {
            vec![self]
        }
    }
}

impl fmt::Display for SuiteName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SuiteName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [Self::All].into_iter().chain(Self::ALL).find(|n| n.as_str() == s).ok_or_else(|| {
            Error::InvalidParams(format!(
                "unknown suite {s:?}; expected weber, shooting, galerkin, ladder, asymptotics or all"
            ))
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Comparison {
    /// `measured ≤ tolerance`
    AtMost,
    /// `measured > tolerance`
    Above,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub suite: SuiteName,
    pub name: String,
    pub measured: f64,
    pub tolerance: f64,
    pub comparison: Comparison,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub suite: SuiteName,
    pub checks: Vec<CheckResult>,
    /// Some check aborted with a numerical error rather than a verdict.
    pub numerical_failure: bool,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn to_dataset(&self) -> FigureDataset {
        let mut d = FigureDataset::new(FigureTag::Verify);
        for c in &self.checks {
            let comparison = match c.comparison {
                Comparison::AtMost => "at_most",
                Comparison::Above => "above",
            };
            d.push(vec![
                c.suite.as_str().into(),
                c.name.as_str().into(),
                c.measured.into(),
                c.tolerance.into(),
                comparison.into(),
                c.passed.into(),
                c.detail.as_str().into(),
            ])
            .expect("verify rows match the schema");
        }
        d.set_meta("suite", self.suite);
        d.set_meta("passed", self.passed());
        d.set_meta("numerical_failure", self.numerical_failure);
        d
    }
}

struct Recorder {
    suite: SuiteName,
    checks: Vec<CheckResult>,
    numerical: bool,
}

impl Recorder {
    fn new(suite: SuiteName) -> Self {
        Self { suite, checks: Vec::new(), numerical: false }
    }

    fn check(&mut self, name: &str, comparison: Comparison, tolerance: f64, run: impl FnOnce() -> Result<(f64, String)>) {
        let (measured, detail, passed) = match run() {
            Ok((m, d)) => {
                let ok = match comparison {
                    Comparison::AtMost => m <= tolerance,
                    Comparison::Above => m > tolerance,
                };
                (m, d, ok)
            }
            Err(e) => {
                self.numerical |= e.is_numerical();
                (f64::NAN, e.to_string(), false)
            }
        };
        self.checks.push(CheckResult {
            suite: self.suite,
            name: name.to_string(),
            measured,
            tolerance,
            comparison,
            passed,
            detail,
        });
    }

    fn at_most(&mut self, name: &str, tolerance: f64, run: impl FnOnce() -> Result<(f64, String)>) {
        self.check(name, Comparison::AtMost, tolerance, run)
    }

    fn above(&mut self, name: &str, tolerance: f64, run: impl FnOnce() -> Result<(f64, String)>) {
        self.check(name, Comparison::Above, tolerance, run)
    }
}

/// Runs `suite` (every suite for [`SuiteName::All`]), suites in parallel,
/// checks reported in a fixed order.
pub fn run(suite: SuiteName) -> VerifyReport {
    let parts: Vec<Recorder> = suite
        .expand()
        .into_par_iter()
        .map(|s| {
            let mut r = Recorder::new(s);
            match s {
                SuiteName::Weber => weber_suite(&mut r),
                SuiteName::Shooting => shooting_suite(&mut r),
                SuiteName::Galerkin => galerkin_suite(&mut r),
                SuiteName::Ladder => ladder_suite(&mut r),
                SuiteName::Asymptotics => asymptotics_suite(&mut r),
                SuiteName::All => unreachable!("expanded above"),
            }
            r
        })
        .collect();
    let numerical_failure = parts.iter().any(|r| r.numerical);
    VerifyReport { suite, checks: parts.into_iter().flat_map(|r| r.checks).collect(), numerical_failure }
}

fn params(ell: f64, beta: f64) -> Result<OscillatorParams> {
    OscillatorParams::new(ell, beta)
}

/// `(H_n(x), H_n'(x))` by the three-term recurrence.
pub fn hermite(n: usize, x: f64) -> (f64, f64) {
    let (mut prev, mut cur) = (0.0, 1.0);
    for k in 0..n {
        let next = 2.0 * x * cur - 2.0 * k as f64 * prev;
        prev = cur;
        cur = next;
    }
    (cur, 2.0 * n as f64 * prev)
}

/// The terminating Weber solution at `E = n + 1/2` in the normalization
/// `u_e(0) = 1` or `u_o'(0) = 1`.
pub fn hermite_weber(n: usize, x: f64) -> WeberValue {
    let scale = if n.is_multiple_of(2) { hermite(n, 0.0).0 } else { hermite(n, 0.0).1 };
    let (h, dh) = hermite(n, x);
    let g = (-0.5 * x * x).exp();
    WeberValue { value: h * g / scale, derivative: (dh - x * h) * g / scale }
}

fn weber_suite(r: &mut Recorder) {
    r.at_most("parity_exact", 0.0, || {
        let mut worst = 0.0f64;
        for &e in &[-1.0, 0.7, 12.3, 61.0] {
            for &x in &[0.3, 1.7, 3.9, 6.0] {
                let (p, m) = (weber_even(e, x)?, weber_even(e, -x)?);
                worst = worst.max((p.value - m.value).abs());
                let (p, m) = (weber_odd(e, x)?, weber_odd(e, -x)?);
                worst = worst.max((p.value + m.value).abs());
            }
        }
        Ok((worst, "E ∈ {-1, 0.7, 12.3, 61}, x ≤ 6".into()))
    });
    r.at_most("wronskian_constancy", 1e-8, || {
        let mut worst = 0.0f64;
        for &e in &[-1.0, 0.3, 5.0, 25.0, 100.0] {
            for j in 0..=12 {
                worst = worst.max((wronskian(e, 0.5 * j as f64)? - 1.0).abs());
            }
        }
        Ok((worst, "|W(E,x) - W(E,0)|, W(E,0) = 1, E ∈ [-1, 100], x ≤ 6".into()))
    });
    r.at_most("series_ode_agreement", 1e-8, || {
        let mut worst = (0.0f64, 0.0, Parity::Even);
        for j in 0..=12 {
            let e = -1.0 + 101.0 * j as f64 / 12.0;
            for parity in [Parity::Even, Parity::Odd] {
                let ode = integrate_weber(e, parity, 6.0, 96)?;
                let scale = ode.max_abs_value().max(1.0);
                for (x, v) in ode.nodes().iter().zip(ode.values()).filter(|(x, _)| **x >= 0.0) {
                    let s = match parity {
                        Parity::Even => weber_even_series(e, *x)?,
                        Parity::Odd => weber_odd_series(e, *x)?,
                    };
                    let d = (v.re - s.value).abs() / scale;
                    if d > worst.0 {
                        worst = (d, e, parity);
                    }
                }
            }
        }
        Ok((worst.0, format!("scale-relative; worst at E = {:.3} ({})", worst.1, worst.2)))
    });
    r.at_most("hermite_terminating_cases", 1e-9, || {
        let mut worst = 0.0f64;
        for n in 0..6 {
            let e = n as f64 + 0.5;
            for j in -120..=120 {
                let x = 0.05 * j as f64;
                let exact = hermite_weber(n, x);
                let computed = if n % 2 == 0 { weber_even(e, x)? } else { weber_odd(e, x)? };
                worst = worst
                    .max((computed.value - exact.value).abs())
                    .max((computed.derivative - exact.derivative).abs());
            }
        }
        Ok((worst, "E = 2m + 1/2 even, 2m + 3/2 odd, m ≤ 2, x ≤ 6".into()))
    });
}

fn shooting_suite(r: &mut Recorder) {
    r.at_most("exact_ground_energies", 1e-8, || {
        let mut worst = 0.0f64;
        for &ell in &[0.5, 1.0, 2.0, 4.0, 6.0] {
            for beta in [1.0, -1.0] {
                let e0 = lowest_levels(&params(ell, beta)?, 1)?.levels[0].energy;
                worst = worst.max((e0 - 0.5 * beta).abs());
            }
        }
        Ok((worst, "|E_0 ∓ 1/2| for H_N and H_A, ℓ ∈ {0.5, 1, 2, 4, 6}".into()))
    });
    r.at_most("pollution_line", 1e-8, || {
        let mut worst = 0.0f64;
        for &ell in &[0.25, 0.8, 1.5, 3.0, 4.5, 6.0] {
            let e0 = lowest_levels(&params(ell, -1.0)?, 1)?.levels[0].energy;
            worst = worst.max((e0 + 0.5).abs());
        }
        Ok((worst, "E_0 of H_A over ℓ ∈ [0.25, 6]".into()))
    });
    r.at_most("odd_sector_beta_independence", 1e-9, || {
        let mut worst = 0.0f64;
        for &ell in &[0.5, 2.0, 5.0] {
            let reference = odd_levels(ell, 0.0, 4)?;
            for beta in [-1.0, 1.0, 2.5] {
                for (a, b) in odd_levels(ell, beta, 4)?.iter().zip(&reference) {
                    worst = worst.max((a - b).abs());
                }
            }
        }
        Ok((worst, "lowest 4 odd levels, β ∈ {-1, 0, 1, 2.5}".into()))
    });
    r.at_most("interlacing_at_beta_zero", 0.0, || {
        let mut violations = 0;
        for &ell in &[0.25, 1.0, 3.0, 6.0] {
            let levels = lowest_levels(&params(ell, 0.0)?, 10)?;
            for (n, l) in levels.levels.iter().enumerate() {
                let expected = if n % 2 == 0 { Parity::Even } else { Parity::Odd };
                violations += usize::from(l.parity != expected);
            }
        }
        Ok((violations as f64, "parity sequence even, odd, even, … for ℓ ∈ {0.25, 1, 3, 6}".into()))
    });
    r.at_most("anti_normal_ordering_anomaly", 0.0, || {
        let mut violations = 0;
        for &ell in &[0.5, 1.0, 2.0, 4.0] {
            let levels = lowest_levels(&params(ell, -1.0)?, 8)?;
            for (n, l) in levels.levels.iter().enumerate() {
                let expected = if n == 0 || n % 2 == 1 { Parity::Even } else { Parity::Odd };
                violations += usize::from(l.parity != expected);
            }
        }
        Ok((violations as f64, "H_A: even, even, odd, even, … for ℓ ∈ {0.5, 1, 2, 4}".into()))
    });
    r.at_most("shifted_spectrum", 1e-8, || {
        let mut worst = 0.0f64;
        for &ell in &[1.0, 2.0, 3.0] {
            let normal = lowest_levels(&params(ell, 1.0)?, 8)?.energies();
            let anti = lowest_levels(&params(ell, -1.0)?, 12)?.energies();
            for e in normal.iter().map(|e| e - 0.5).filter(|e| e.abs() > 1e-6) {
                let d = anti.iter().map(|a| (a + 0.5 - e).abs()).fold(f64::INFINITY, f64::min);
                worst = worst.max(d);
            }
        }
        Ok((worst, "nonzero spec(a†a) ⊂ spec(aa†), ℓ ∈ {1, 2, 3}".into()))
    });
    r.at_most("eigenpair_invariants", 1e-6, || {
        let (mut norm, mut boundary, mut residual) = (0.0f64, 0.0f64, 0.0f64);
        for &(ell, beta) in &[(1.0, 0.0), (2.0, -1.0), (2.0, 1.0), (4.0, 0.4)] {
            let p = params(ell, beta)?;
            let levels = lowest_levels(&p, 6)?;
            for (n, l) in levels.levels.iter().enumerate() {
                let pair = eigenfunction(&p, n, DEFAULT_POINTS)?;
                norm = norm.max((quad_l2(&pair.function).sqrt() - 1.0).abs());
                boundary = boundary.max(boundary_residual(&pair.function, beta));
                residual = residual.max(l.residual.abs());
            }
        }
        if norm > 1e-8 || residual > 1e-10 {
            return Ok((f64::INFINITY, format!("norm defect {norm:.2e}, shooting residual {residual:.2e}")));
        }
        Ok((boundary, format!("boundary residual; norm defect {norm:.2e}, shooting residual {residual:.2e}")))
    });
}

fn odd_levels(ell: f64, beta: f64, count: usize) -> Result<Vec<f64>> {
    let mut odd = lowest_levels(&params(ell, beta)?, 2 * count + 2)?.of_parity(Parity::Odd);
    odd.truncate(count);
    Ok(odd)
}

/// Least-squares slope of `ln |err|` against `ln N` over the errors above
/// their roundoff floor; infinite when at most one such error remains.
fn decay_rate(ns: &[usize], errors: &[f64], floors: &[f64]) -> f64 {
    let pts: Vec<(f64, f64)> = ns
        .iter()
        .zip(errors.iter().zip(floors))
        .filter(|(_, (e, f))| e.abs() > **f)
        .map(|(n, (e, _))| ((*n as f64).ln(), e.abs().ln()))
        .collect();
    if pts.len() < 2 {
        return f64::INFINITY;
    }
    let m = pts.len() as f64;
    let (sx, sy) = pts.iter().fold((0.0, 0.0), |(a, b), (x, y)| (a + x, b + y));
    let (mx, my) = (sx / m, sy / m);
    let (num, den) = pts.iter().fold((0.0, 0.0), |(a, b), (x, y)| (a + (x - mx) * (y - my), b + (x - mx).powi(2)));
    -num / den
}

fn galerkin_suite(r: &mut Recorder) {
    r.at_most("hermiticity", 1e-14, || {
        let m = build_matrix(&params(2.0, 0.7)?, 64)?;
        Ok((m.asymmetry(), "max |M - M†|, ℓ = 2, β = 0.7, N = 64".into()))
    });
    r.at_most("kinetic_diagonal", 1e-13, || {
        let (ell, beta) = (1.3, 0.4);
        let m = build_matrix(&params(ell, beta)?, 32)?;
        let worst = (-32i64..=32)
            .map(|n| {
                let kinetic = (n * n) as f64 * PI * PI / (2.0 * ell * ell);
                let expected = kinetic + ell * ell / 6.0 + 0.5 * beta;
                (m.entry(n, n) - expected).abs() / expected
            })
            .fold(0.0, f64::max);
        Ok((worst, "relative, ℓ = 1.3, β = 0.4, N = 32".into()))
    });
    r.at_most("odd_block_beta_independent", 1e-15, || {
        let (_, a) = build_matrix(&params(2.0, -1.0)?, 32)?.parity_blocks();
        let (_, b) = build_matrix(&params(2.0, 2.5)?, 32)?.parity_blocks();
        Ok(((&a - &b).amax() / a.amax(), "sine block, β = -1 against β = 2.5, relative".into()))
    });
    r.at_most("cross_oracle_beta_zero", 1e-4, || {
        let p = params(2.0, 0.0)?;
        let g = oracle_spectrum(&p, 64, 6)?;
        let s = lowest_levels(&p, 6)?.energies();
        Ok((max_diff(&g, &s), "ℓ = 2, N = 64, lowest 6".into()))
    });
    r.at_most("anti_normal_ground_state", 5e-3, || {
        let g = oracle_spectrum(&params(2.0, -1.0)?, 256, 1)?;
        Ok(((g[0] + 0.5).abs(), "ℓ = 2, β = -1, N = 256".into()))
    });
    r.at_most("n_doubling_monotone", 1e-12, || {
        let p = params(2.0, 0.0)?;
        let mut worst = f64::NEG_INFINITY;
        for n in [16, 32, 64] {
            let coarse = oracle_spectrum(&p, n, 6)?;
            let fine = oracle_spectrum(&p, 2 * n, 6)?;
            for (f, c) in fine.iter().zip(&coarse) {
                worst = worst.max(f - c);
            }
        }
        Ok((worst.max(0.0), "largest increase of a level as N doubles, ℓ = 2".into()))
    });
    r.at_most("variational_bound", 1e-8, || {
        let mut worst = f64::NEG_INFINITY;
        for &ell in &[1.0, 2.0] {
            for beta in [-1.0, 0.0, 1.0] {
                let p = params(ell, beta)?;
                let g = oracle_spectrum(&p, 128, 8)?;
                let s = lowest_levels(&p, 8)?.energies();
                for (g, s) in g.iter().zip(&s) {
                    worst = worst.max(s - g);
                }
            }
        }
        Ok((worst.max(0.0), "shooting minus Galerkin, N = 128".into()))
    });
    let ns = [32, 64, 128, 256];
    for (beta, rate) in [(0.0, 3.0), (1.0, 1.0), (-1.0, 1.0)] {
        r.above(&format!("convergence_rate_beta_{beta:+}"), rate - 0.2, || {
            let p = params(2.0, beta)?;
            let exact = lowest_levels(&p, 1)?.levels[0].energy;
            let errors = ns
                .iter()
                .map(|&n| Ok(oracle_spectrum(&p, n, 1)?[0] - exact))
                .collect::<Result<Vec<_>>>()?;
            // eigensolver rounding grows with the largest kinetic entry
            let floors: Vec<f64> =
                ns.iter().map(|&n| 100.0 * f64::EPSILON * (n * n) as f64 * PI * PI / 8.0).collect();
            let shown: Vec<String> = errors.iter().map(|e| format!("{e:.2e}")).collect();
            Ok((decay_rate(&ns, &errors, &floors), format!("E_0 at ℓ = 2, N = 32..256, errors [{}]", shown.join(", "))))
        });
    }
    r.at_most("rescaling", 1e-3, || {
        let mut worst = 0.0f64;
        for radius in [0.25, 0.5, 1.0, 2.0] {
            let report = rescaling_check(radius, 64)?;
            worst = worst.max(report.max_eigenvalue_difference);
        }
        Ok((worst, "r ∈ {0.25, 0.5, 1, 2}, N = 64, lowest 6".into()))
    });
}

fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn ladder_suite(r: &mut Recorder) {
    let steps: Result<Vec<_>> = (1..=3).map(|k| ladder_step_check_on(2.0, k, FINE_POINTS)).collect();
    let steps = steps.map_err(|e| e.to_string());
    type Field = fn(&crate::ladder::LadderStep) -> f64;
    let fields: [(&str, f64, Field); 6] = [
        ("one_step_up_eigen_residual", 1e-5, |s| s.up.eigen_residual),
        ("one_step_up_boundary", 1e-6, |s| s.up.boundary_defect.max(s.up_boundary_identity)),
        ("one_step_down_eigen_residual", 1e-5, |s| s.down.eigen_residual),
        ("one_step_down_boundary", 1e-6, |s| s.down.boundary_defect.max(s.down_boundary_identity)),
        ("one_step_closure", 1e-5, |s| s.up_closure.max(s.down_closure)),
        ("one_step_rayleigh_gap", 1e-7, |s| (s.up_rayleigh_gap - 1.0).abs().max((s.down_rayleigh_gap - 1.0).abs())),
    ];
    for (name, tol, field) in fields {
        r.at_most(name, tol, || {
            let steps = steps.clone().map_err(Error::Precondition)?;
            let worst = steps.iter().map(field).fold(0.0, f64::max);
            Ok((worst, "ℓ = 2, k = 1, 2, 3".into()))
        });
    }
    r.above("one_step_value_at_a", 0.0, || {
        let steps = steps.clone().map_err(Error::Precondition)?;
        let least = steps.iter().map(|s| s.up_value_at_a.min(s.down_value_at_a)).fold(f64::INFINITY, f64::min);
        Ok((least, "|v(ℓ)| / max|v|, smallest over k".into()))
    });
    r.above("second_step_obstruction", 1.0, || {
        let mut least = f64::INFINITY;
        for ell in [1.0, 2.0] {
            let grid = Grid::new(ell, DEFAULT_POINTS)?;
            let ob = obstruction_check(&phi_beta(grid, 1.0), 0.5);
            least = least.min(ob.value_jump / ob.threshold);
            let (e, v2) = normal_even_state(ell, 1)?;
            let ob = obstruction_check(&v2, e);
            least = least.min(ob.value_jump / ob.threshold);
        }
        Ok((least, "jump / (0.1 max|a†v|) for v_g and v_2, ℓ ∈ {1, 2}".into()))
    });
    r.at_most("ground_state_jump_closed_form", 1e-6, || {
        let ob = obstruction_check(&phi_beta(Grid::new(1.0, DEFAULT_POINTS)?, 1.0), 0.5);
        let exact = 2.0 * SQRT_2 * (-0.5f64).exp();
        Ok(((ob.value_jump - exact).abs(), format!("jump {:.10} against 2√2e^(-1/2)", ob.value_jump)))
    });
    r.at_most("annihilation_spectra", 1e-7, || {
        let mut worst = 0.0f64;
        for radius in [1.0, 2.0] {
            let p = OscillatorParams::from_radius(radius, 0.0)?;
            for n in -8..=8 {
                for which in [Ladder::Plain, Ladder::Dagger] {
                    let pair = annihilation_eigenpair(n, &p, which)?;
                    let expected = Complex64::new(0.0, n as f64 / (SQRT_2 * radius));
                    if (pair.eigenvalue - expected).norm() > 1e-14 {
                        return Ok((f64::INFINITY, format!("eigenvalue {} for n = {n}", pair.eigenvalue)));
                    }
                    worst = worst.max(pair.residual);
                }
            }
        }
        Ok((worst, "r ∈ {1, 2}, |n| ≤ 8, a and a†".into()))
    });
    r.at_most("weyl_trivial_cases", 1e-10, || {
        let grid = Grid::new(2.0, DEFAULT_POINTS)?;
        let f = periodic_bump(grid, 0.7, 0.3);
        let worst = [weyl_defect(0.0, 1.3, &f)?, weyl_defect(0.9, 0.0, &f)?].into_iter().fold(0.0, f64::max);
        Ok((worst, "s = 0 and t = 0".into()))
    });
    r.above("weyl_wrapping_defect", 1e-3, || {
        let case = wrapping_configuration(2.0)?;
        Ok((case.defect, format!("s = {}, t = {}, bump at {}", case.shift, case.frequency, case.center)))
    });
    r.at_most("commutator", 1e-5, || {
        let mut worst = 0.0f64;
        for (beta, k, damp) in [(1.0, 1.0, 0.0), (0.0, 2.0, 0.0), (-1.0, 1.0, 1.0)] {
            let f = SampledFunction::from_real_fn(Grid::new(2.0, DEFAULT_POINTS)?, |x| {
                let w = k * PI / 2.0;
                let g = (-damp * x * x).exp();
                ((w * x).sin() * g, (w * (w * x).cos() - 2.0 * damp * x * (w * x).sin()) * g)
            });
            worst = worst.max(commutator_residual(&f, beta)?);
        }
        Ok((worst, "sin(πx/ℓ) at β = 1, sin(2πx/ℓ) at β = 0, sin(πx/ℓ)e^(-x²) at β = -1".into()))
    });
    r.at_most("similarity_relation", 1e-7, || {
        let grid = Grid::new(2.0, DEFAULT_POINTS)?;
        let s = SimilarityScaling::new(grid);
        let f = periodic_bump(grid, 0.4, 0.35);
        Ok((s.similarity_defect(&f)?.max(s.identity_defect()), "‖af - (i/√2)SpS⁻¹f‖/‖f‖, ℓ = 2".into()))
    });
    r.at_most("rayleigh_identity", 1e-7, || {
        let grid = Grid::new(2.0, DEFAULT_POINTS)?;
        let worst = [-1.0, 0.0, 1.0]
            .into_iter()
            .map(|beta| (rayleigh_quotient(&phi_beta(grid, beta), beta) - phi_beta_energy(grid, beta)).abs())
            .fold(0.0, f64::max);
        Ok((worst, "⟨φ_β|H_β φ_β⟩/‖φ_β‖², β ∈ {-1, 0, 1}".into()))
    });
}

fn asymptotics_suite(r: &mut Recorder) {
    for beta in [-1.0, 0.0, 1.0] {
        r.at_most(&format!("harmonic_limit_beta_{beta:+}"), 1e-3, || {
            let rep = harmonic_limit(&params(6.0, beta)?, 6)?;
            let table: Vec<String> = rep.computed.iter().map(|e| format!("{e:.9}")).collect();
            Ok((rep.max_abs_error, format!("ℓ = 6: [{}]", table.join(", "))))
        });
    }
    r.above("pollution_localization", 0.99, || {
        let s = pollution_state(6.0)?;
        Ok((s.outer_mass, "L² mass in |x| ≥ 3, ℓ = 6".into()))
    });
    r.at_most("gamma_pole_monotone", 0.0, || {
        let t = gamma_pole_convergence(&[3.0, 4.0, 5.0, 6.0])?;
        let violations = t.windows(2).filter(|w| w[1].1.abs() >= w[0].1.abs()).count();
        let table: Vec<String> = t.iter().map(|(l, d)| format!("{l}: {d:.2e}")).collect();
        Ok((violations as f64, format!("E_0 - 1/2: {}", table.join(", "))))
    });
    r.at_most("small_ell_scaling", 0.02, || {
        let worst = small_ell_scaling(&params(0.1, 0.0)?, 4)?
            .into_iter()
            .map(|(_, s, t)| (s - t).abs() / t)
            .fold(0.0, f64::max);
        Ok((worst, "2ℓ²E_n/π² against ⌈n/2⌉², ℓ = 0.1".into()))
    });
    for beta in [-1.0, 1.0] {
        r.at_most(&format!("degeneracy_lift_beta_{beta:+}"), 0.05, || {
            let rep = small_ell_prediction(&params(0.05, beta)?, 5)?;
            let worst = rep.splittings().iter().map(|(_, s)| (s - beta).abs()).fold(0.0, f64::max);
            Ok((worst, format!("ℓ = 0.05, max relative level error {:.2e}", rep.max_rel_error)))
        });
    }
    r.at_most("envelope_even", 0.1, || {
        let r5 = large_ell_envelope(0.9, 5.0, Parity::Even, AsymptoticOrder::Leading)?;
        let r6 = large_ell_envelope(0.9, 6.0, Parity::Even, AsymptoticOrder::Leading)?;
        if (r6 - 1.0).abs() >= (r5 - 1.0).abs() {
            return Ok((f64::INFINITY, format!("no improvement: {r5} at ℓ = 5, {r6} at ℓ = 6")));
        }
        Ok(((r5 - 1.0).abs(), format!("E = 0.9: ratio {r5:.6} at ℓ = 5, {r6:.6} at ℓ = 6")))
    });
    r.at_most("envelope_odd", 0.1, || {
        let ratio = large_ell_envelope(2.1, 5.0, Parity::Odd, AsymptoticOrder::FirstCorrection)?;
        Ok(((ratio - 1.0).abs(), format!("E = 2.1, ℓ = 5, first correction: ratio {ratio:.6}")))
    });
}
