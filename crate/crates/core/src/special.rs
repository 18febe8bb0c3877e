//! Confluent hypergeometric function `₁F₁(a, c; z)` and `ln|Γ|`.

use std::f64::consts::PI;

use twofloat::TwoFloat;

use crate::error::{Error, Result};

/// Term budget for every series summation in this module.
pub const MAX_TERMS: usize = 500;

/// Largest `|z|` accepted by [`kummer_m`].
pub const MAX_KUMMER_ARG: f64 = 64.0;

/// Digits that direct summation may lose before the Kummer transformation
/// is tried.
const CANCELLATION_DIGITS: f64 = 4.0;

/// Arguments of `₁F₁(a, c; z)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KummerParams {
    pub a: f64,
    pub c: f64,
    pub z: f64,
}

impl KummerParams {
    pub fn new(a: f64, c: f64, z: f64) -> Self {
        Self { a, c, z }
    }

    fn validate(&self) -> Result<()> {
        if !(self.a.is_finite() && self.c.is_finite() && self.z.is_finite()) {
            return Err(Error::Domain(format!("non-finite Kummer arguments {self:?}")));
        }
        if self.c <= 0.0 && self.c.fract() == 0.0 {
            return Err(Error::Domain(format!("c = {} is a nonpositive integer", self.c)));
        }
        if self.z.abs() > MAX_KUMMER_ARG {
            return Err(Error::Domain(format!("|z| = {} exceeds {MAX_KUMMER_ARG}", self.z.abs())));
        }
        Ok(())
    }
}

/// Partial sum of the defining series together with the largest term seen.
#[derive(Debug, Clone, Copy)]
struct SeriesSum {
    sum: f64,
    max_term: f64,
}

impl SeriesSum {
    /// Decimal digits lost to cancellation.
    fn lost_digits(&self) -> f64 {
        if self.sum == 0.0 {
            f64::INFINITY
        } else {
            (self.max_term / self.sum.abs()).log10().max(0.0)
        }
    }
}

fn direct_series(a: f64, c: f64, z: f64) -> Option<SeriesSum> {
    let mut term = 1.0_f64;
    let mut sum = 1.0_f64;
    let mut max_term = 1.0_f64;
    for k in 0..MAX_TERMS {
        let kf = k as f64;
        let ratio = (a + kf) / (c + kf) * z / (kf + 1.0);
        term *= ratio;
        sum += term;
        max_term = max_term.max(term.abs());
        if term == 0.0 || (term.abs() <= f64::EPSILON * 0.1 * sum.abs() && ratio.abs() < 1.0) {
            return Some(SeriesSum { sum, max_term });
        }
    }
    None
}

/// `₁F₁(a, c; z)` in double precision.
///
/// Sums the defining series directly. When that loses more than four digits
/// to cancellation the Kummer transformation
/// `₁F₁(a, c; z) = e^z ₁F₁(c - a, c; -z)` is tried as well and the better
/// conditioned of the two is returned.
pub fn kummer_m(p: KummerParams) -> Result<f64> {
    p.validate()?;
    let KummerParams { a, c, z } = p;
    let direct = direct_series(a, c, z);
    if let Some(d) = direct {
        if d.lost_digits() <= CANCELLATION_DIGITS {
            return Ok(d.sum);
        }
    }
    let transformed = direct_series(c - a, c, -z).map(|t| SeriesSum {
        sum: z.exp() * t.sum,
        max_term: z.exp() * t.max_term,
    });
    match (direct, transformed) {
        (Some(d), Some(t)) => Ok(if t.lost_digits() < d.lost_digits() { t.sum } else { d.sum }),
        (Some(d), None) => Ok(d.sum),
        (None, Some(t)) => Ok(t.sum),
        (None, None) => Err(Error::Accuracy { a, c, z, terms: MAX_TERMS }),
    }
}

/// `₁F₁(a, c; z)` and its `z`-derivative summed in double-double arithmetic.
#[derive(Debug, Clone, Copy)]
pub(crate) struct KummerDd {
    pub m: TwoFloat,
    pub dm: TwoFloat,
    /// Largest term magnitude in either series.
    pub max_term: f64,
}

impl KummerDd {
    /// Estimated absolute rounding error of `m` and `dm`.
    pub fn rounding_error(&self) -> f64 {
        // 2^-104 per operation, a few operations per term
        self.max_term * 1e-31
    }
}

/// `x / y` in double-double by two correction steps.
///
/// `TwoFloat`'s own `TwoFloat / TwoFloat` drops the low word of the quotient.
pub(crate) fn dd_div(x: TwoFloat, y: TwoFloat) -> TwoFloat {
    let q1 = x.hi() / y.hi();
    let r = x - y * q1;
    let q2 = r.hi() / y.hi();
    let r = r - y * q2;
    let q3 = r.hi() / y.hi();
    TwoFloat::from(q1) + q2 + q3
}

/// Sums `M = Σ t_k` and `M' = Σ t_k (a+k)/(c+k)` with `t_{k+1} = t_k (a+k) z / ((c+k)(k+1))`.
pub(crate) fn kummer_dd(a: impl Into<TwoFloat>, c: f64, z: impl Into<TwoFloat>) -> Option<KummerDd> {
    let a = a.into();
    let c = TwoFloat::from(c);
    let z = z.into();
    let mut term = TwoFloat::from(1.0);
    let mut m = TwoFloat::from(1.0);
    let mut dm = TwoFloat::from(0.0);
    let mut max_term = 1.0_f64;
    let tiny = 1e-33;
    for k in 0..MAX_TERMS {
        let kf = TwoFloat::from(k as f64);
        let r = dd_div(term * (a + kf), c + kf);
        dm += r;
        term = r * z / (k as f64 + 1.0);
        m += term;
        let (t_abs, r_abs) = (term.hi().abs(), r.hi().abs());
        max_term = max_term.max(t_abs).max(r_abs);
        let ratio = ((a + kf + 1.0).hi() / (c + kf + 1.0).hi() * z.hi() / (kf.hi() + 2.0)).abs();
        let small = t_abs <= tiny * m.hi().abs().max(f64::MIN_POSITIVE)
            && r_abs <= tiny * dm.hi().abs().max(f64::MIN_POSITIVE);
        if (term.hi() == 0.0 && r.hi() == 0.0) || (small && ratio < 1.0) {
            return Some(KummerDd { m, dm, max_term });
        }
    }
    None
}

/// `ln|Γ(z)|` with the sign of `Γ(z)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogGamma {
    pub ln_abs: f64,
    pub sign: f64,
}

const LANCZOS_G: f64 = 7.0;
#[allow(clippy::excessive_precision)]
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Natural log of `|Γ(z)|` plus sign; Lanczos (g = 7) with reflection below 1/2.
pub fn log_gamma(z: f64) -> Result<LogGamma> {
    if !z.is_finite() {
        return Err(Error::Domain(format!("log_gamma of non-finite {z}")));
    }
    if z <= 0.0 && z.fract() == 0.0 {
        return Err(Error::Pole(z));
    }
    if z < 0.5 {
        let s = (PI * z).sin();
        let rest = log_gamma(1.0 - z)?;
        return Ok(LogGamma {
            ln_abs: PI.ln() - s.abs().ln() - rest.ln_abs,
            sign: s.signum() * rest.sign,
        });
    }
    let x = z - 1.0;
    let mut series = LANCZOS[0];
    for (i, &coef) in LANCZOS.iter().enumerate().skip(1) {
        series += coef / (x + i as f64);
    }
    let t = x + LANCZOS_G + 0.5;
    let ln_abs = 0.5 * (2.0 * PI).ln() + (x + 0.5) * t.ln() - t + series.ln();
    Ok(LogGamma { ln_abs, sign: 1.0 })
}
