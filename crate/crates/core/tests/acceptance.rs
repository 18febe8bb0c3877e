//! Acceptance criteria, one test each. Every test writes a single
//! `criterion NN PASS|FAIL ...` line to stdout (uncaptured) with the
//! measured value and wall time; a criterion passes only within its time
//! budget. Tests hold a shared lock so each is timed alone.

use std::f64::consts::SQRT_2;
use std::io::Write;
use std::sync::Mutex;
use std::time::{Duration, Instant};

use num_complex::Complex64;

use circle_oscillator::asymptotics::{harmonic_limit, pollution_state, small_ell_prediction, small_ell_scaling};
use circle_oscillator::canonical::{annihilation_eigenpair, periodic_bump, weyl_defect, wrapping_configuration};
use circle_oscillator::galerkin::oracle_spectrum;
use circle_oscillator::grid::{Grid, DEFAULT_POINTS};
use circle_oscillator::ladder::{ladder_step_check, normal_even_state, obstruction_check, phi_beta, Ladder};
use circle_oscillator::shooting::{find_spectrum, lowest_levels, Window};
use circle_oscillator::weber::{integrate_weber, weber_even, weber_even_series, weber_odd, weber_odd_series, wronskian};
use circle_oscillator::{OscillatorParams, Parity, Result};

static LOCK: Mutex<()> = Mutex::new(());

fn params(ell: f64, beta: f64) -> OscillatorParams {
    OscillatorParams::new(ell, beta).unwrap()
}

/// Runs `body` alone, prints the verdict line and asserts it.
fn criterion(id: u32, title: &str, budget_s: u64, body: impl FnOnce() -> Result<(bool, String)>) {
    let _guard = LOCK.lock().unwrap_or_else(|p| p.into_inner());
    let start = Instant::now();
    let outcome = body();
    let elapsed = start.elapsed();
    let in_time = elapsed < Duration::from_secs(budget_s);
    let (ok, detail) = match outcome {
        Ok((ok, detail)) => (ok && in_time, detail),
        Err(e) => (false, format!("error: {e}")),
    };
    let line = format!(
        "criterion {id:02} {} {title}: {detail} [{:.2} s of {budget_s} s]\n",
        if ok { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64()
    );
    std::io::stdout().lock().write_all(line.as_bytes()).unwrap();
    assert!(ok, "{line}");
}

#[test]
fn c01_exact_ground_energies() {
    criterion(1, "exact ground energies of H_N and H_A", 5, || {
        let mut worst = 0.0f64;
        for ell in [0.5, 1.0, 2.0, 4.0, 6.0] {
            for beta in [1.0, -1.0] {
                let s = find_spectrum(&params(ell, beta), Window::default())?;
                worst = worst.max((s.pairs[0].energy - 0.5 * beta).abs());
            }
        }
        Ok((worst <= 1e-8, format!("max |E_0 ∓ 1/2| = {worst:.3e} (tol 1e-8)")))
    });
}

#[test]
fn c02_harmonic_limit() {
    criterion(2, "harmonic limit at ℓ = 6", 10, || {
        let mut worst = 0.0f64;
        for beta in [-1.0, 0.0, 1.0] {
            worst = worst.max(harmonic_limit(&params(6.0, beta), 6)?.max_abs_error);
        }
        Ok((worst <= 1e-3, format!("max |E_n - (n + 1/2)|, n ≤ 5 = {worst:.3e} (tol 1e-3)")))
    });
}

#[test]
fn c03_free_limit() {
    criterion(3, "free limit at ℓ = 0.1", 5, || {
        let mut worst = 0.0f64;
        for (_, scaled, target) in small_ell_scaling(&params(0.1, 0.0), 4)? {
            worst = worst.max((scaled - target).abs() / target);
        }
        Ok((worst <= 0.02, format!("max relative |2ℓ²E_n/π² - ⌈n/2⌉²| = {worst:.3e} (tol 0.02)")))
    });
}

#[test]
fn c04_degeneracy_lift() {
    criterion(4, "degeneracy lift by β at ℓ = 0.05", 5, || {
        let mut worst = 0.0f64;
        let mut pairs = 0;
        for beta in [1.0, -1.0] {
            for (_, split) in small_ell_prediction(&params(0.05, beta), 5)?.splittings() {
                worst = worst.max((split - beta).abs() / beta.abs());
                pairs += 1;
            }
        }
        Ok((worst <= 0.05 && pairs >= 4, format!("max |split - β|/|β| over {pairs} pairs = {worst:.3e} (tol 0.05)")))
    });
}

#[test]
fn c05_oracle_agreement() {
    criterion(5, "shooting against Galerkin N = 256", 60, || {
        let mut ok = true;
        let mut notes = Vec::new();
        let mut below = f64::NEG_INFINITY;
        for ell in [0.5, 1.0, 2.0, 4.0] {
            for beta in [-1.0, 0.0, 1.0] {
                let p = params(ell, beta);
                let s = lowest_levels(&p, 8)?.energies();
                let g = oracle_spectrum(&p, 256, 8)?;
                let tol = if beta == 0.0 { 1e-4 } else { 5e-3 };
                let diff = s.iter().zip(&g).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
                below = below.max(s.iter().zip(&g).map(|(a, b)| a - b).fold(f64::NEG_INFINITY, f64::max));
                if diff > tol || s.len() < 8 {
                    ok = false;
                    notes.push(format!("(ℓ={ell}, β={beta}) {diff:.3e} > {tol:e}"));
                }
            }
        }
        ok &= below <= 1e-8;
        let detail = if notes.is_empty() {
            format!("all 12 points within tolerance; max shooting - Galerkin = {below:.1e}")
        } else {
            format!("{}; max shooting - Galerkin = {below:.1e}", notes.join(", "))
        };
        Ok((ok, detail))
    });
}

#[test]
fn c06_ladder_remnant() {
    criterion(6, "one-step ladder identities at ℓ = 2", 5, || {
        let (mut eigen, mut boundary, mut closure) = (0.0f64, 0.0f64, 0.0f64);
        for k in 1..=3 {
            let s = ladder_step_check(2.0, k)?;
            eigen = eigen.max(s.up.eigen_residual).max(s.down.eigen_residual);
            boundary = boundary
                .max(s.up.boundary_defect)
                .max(s.up_boundary_identity)
                .max(s.down.boundary_defect)
                .max(s.down_boundary_identity);
            closure = closure.max(s.up_closure).max(s.down_closure);
        }
        Ok((
            eigen <= 1e-5 && boundary <= 1e-6 && closure <= 1e-5,
            format!("eigen {eigen:.2e} (1e-5), boundary {boundary:.2e} (1e-6), closure {closure:.2e} (1e-5)"),
        ))
    });
}

#[test]
fn c07_obstruction() {
    criterion(7, "second-step obstruction at A", 2, || {
        let mut least = f64::INFINITY;
        let mut ground_jump = 0.0;
        for ell in [1.0, 2.0] {
            let vg = obstruction_check(&phi_beta(Grid::new(ell, DEFAULT_POINTS)?, 1.0), 0.5);
            let (e, v2) = normal_even_state(ell, 1)?;
            let second = obstruction_check(&v2, e);
            least = least.min(vg.value_jump / vg.threshold).min(second.value_jump / second.threshold);
            if ell == 1.0 {
                ground_jump = vg.value_jump;
            }
        }
        let exact = 2.0 * SQRT_2 * (-0.5f64).exp();
        let err = (ground_jump - exact).abs();
        Ok((
            least > 1.0 && err <= 1e-6,
            format!("min jump/(0.1 max) = {least:.3}, |jump - 2√2e^(-1/2)| at ℓ = 1 = {err:.2e} (tol 1e-6)"),
        ))
    });
}

#[test]
fn c08_spectra_of_a_and_dagger() {
    criterion(8, "eigenpairs of a and a†", 5, || {
        let mut worst = 0.0f64;
        let mut eigen_ok = true;
        for radius in [1.0, 2.0] {
            let p = OscillatorParams::from_radius(radius, 0.0)?;
            for n in -8..=8 {
                let lambda = Complex64::new(0.0, n as f64 / (SQRT_2 * radius));
                for which in [Ladder::Plain, Ladder::Dagger] {
                    let pair = annihilation_eigenpair(n, &p, which)?;
                    eigen_ok &= (pair.eigenvalue - lambda).norm() <= 1e-14;
                    worst = worst.max(pair.residual);
                }
            }
        }
        Ok((eigen_ok && worst <= 1e-7, format!("max relative residual = {worst:.3e} (tol 1e-7)")))
    });
}

#[test]
fn c09_odd_sector_universality() {
    criterion(9, "odd levels independent of β", 10, || {
        let mut worst = 0.0f64;
        for ell in [0.5, 2.0, 5.0] {
            let sets: Vec<Vec<f64>> = [-1.0, 0.0, 1.0, 2.5]
                .iter()
                .map(|&beta| {
                    let mut odd = lowest_levels(&params(ell, beta), 10)?.of_parity(Parity::Odd);
                    odd.truncate(4);
                    Ok(odd)
                })
                .collect::<Result<_>>()?;
            for a in &sets {
                for b in &sets {
                    if a.len() < 4 || b.len() < 4 {
                        return Ok((false, format!("fewer than 4 odd levels at ℓ = {ell}")));
                    }
                    worst = worst.max(a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max));
                }
            }
        }
        Ok((worst <= 1e-9, format!("max pairwise difference = {worst:.3e} (tol 1e-9)")))
    });
}

#[test]
fn c10_pollution_localization() {
    criterion(10, "H_A pollution state lives near A", 2, || {
        let s = pollution_state(6.0)?;
        Ok((s.outer_mass >= 0.99, format!("mass in |x| ≥ 3 = {:.6} (min 0.99)", s.outer_mass)))
    });
}

#[test]
fn c11_weyl_failure() {
    criterion(11, "Weyl relation fails only through wrapping", 2, || {
        let grid = Grid::new(2.0, DEFAULT_POINTS)?;
        let f = periodic_bump(grid, 0.6, 0.3);
        let trivial = weyl_defect(0.0, 1.7, &f)?.max(weyl_defect(1.1, 0.0, &f)?);
        let wrap = wrapping_configuration(2.0)?;
        Ok((
            trivial <= 1e-10 && wrap.defect > 1e-3,
            format!("s = 0 / t = 0 defect {trivial:.2e} (tol 1e-10), wrapping defect {:.3e} (min 1e-3)", wrap.defect),
        ))
    });
}

fn hermite_weber(n: usize, x: f64) -> (f64, f64) {
    let h = |x: f64| {
        let (mut prev, mut cur) = (0.0, 1.0);
        for k in 0..n {
            let next = 2.0 * x * cur - 2.0 * k as f64 * prev;
            prev = cur;
            cur = next;
        }
        (cur, 2.0 * n as f64 * prev)
    };
    let scale = if n.is_multiple_of(2) { h(0.0).0 } else { h(0.0).1 };
    let (v, d) = h(x);
    let g = (-0.5 * x * x).exp();
    (v * g / scale, (d - x * v) * g / scale)
}

#[test]
fn c12_weber_kernel() {
    criterion(12, "Weber kernel accuracy", 30, || {
        let mut cross = 0.0f64;
        for j in 0..=20 {
            let e = -1.0 + 101.0 * j as f64 / 20.0;
            for parity in [Parity::Even, Parity::Odd] {
                let ode = integrate_weber(e, parity, 6.0, 120)?;
                let scale = ode.max_abs_value().max(1.0);
                for (x, v) in ode.nodes().iter().zip(ode.values()).filter(|(x, _)| **x >= 0.0) {
                    let s = match parity {
                        Parity::Even => weber_even_series(e, *x)?,
                        Parity::Odd => weber_odd_series(e, *x)?,
                    };
                    cross = cross.max((v.re - s.value).abs() / scale);
                }
            }
        }
        let mut wr = 0.0f64;
        for j in 0..=20 {
            let e = -1.0 + 101.0 * j as f64 / 20.0 + 0.0371;
            for i in 0..=48 {
                wr = wr.max((wronskian(e, 0.125 * i as f64 + 0.011)? - 1.0).abs());
            }
        }
        let mut herm = 0.0f64;
        for m in 0..3 {
            for (n, even) in [(2 * m, true), (2 * m + 1, false)] {
                let e = n as f64 + 0.5;
                for i in 0..=120 {
                    let x = 0.05 * i as f64;
                    let (v, d) = hermite_weber(n, x);
                    let w = if even { weber_even(e, x)? } else { weber_odd(e, x)? };
                    herm = herm.max((w.value - v).abs()).max((w.derivative - d).abs());
                }
            }
        }
        Ok((
            cross <= 1e-8 && wr <= 1e-8 && herm <= 1e-9,
            format!("series/ODE {cross:.2e}, Wronskian {wr:.2e}, Hermite {herm:.2e} (tols 1e-8, 1e-8, 1e-9)"),
        ))
    });
}
