//! `₁F₁` at rational arguments against partial sums in exact arithmetic.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use circle_oscillator::special::{kummer_m, KummerParams};

fn rat(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

/// Σ (a)_k z^k / ((c)_k k!) for k < terms.
fn exact(a: &BigRational, c: &BigRational, z: &BigRational, terms: usize) -> BigRational {
    let mut term = BigRational::one();
    let mut sum = BigRational::zero();
    for k in 0..terms {
        sum += &term;
        let kk = rat(k as i64, 1);
        term = term * (a + &kk) * z / ((c + &kk) * (kk + BigRational::one()));
    }
    sum
}

fn check(a: (i64, i64), c: (i64, i64), z: (i64, i64), tol: f64) {
    let reference = exact(&rat(a.0, a.1), &rat(c.0, c.1), &rat(z.0, z.1), 120).to_f64().unwrap();
    let p = KummerParams::new(a.0 as f64 / a.1 as f64, c.0 as f64 / c.1 as f64, z.0 as f64 / z.1 as f64);
    let got = kummer_m(p).unwrap();
    assert!((got - reference).abs() <= tol * reference.abs(), "{p:?}: {got} vs {reference}");
}

#[test]
fn even_parameters_at_unit_argument() {
    check((1, 4), (1, 2), (1, 1), 4e-16);
}

#[test]
fn odd_parameters_at_moderate_argument() {
    check((3, 4), (3, 2), (9, 1), 1e-15);
}

#[test]
fn negative_argument_with_cancellation() {
    check((-7, 4), (1, 2), (-4, 1), 1e-13);
}

#[test]
fn terminating_series_is_a_polynomial() {
    // a = -2: 1 - 2z/c + z²/(c(c+1)) with c = 1/2, z = 3
    check((-2, 1), (1, 2), (3, 1), 1e-15);
    assert_eq!(exact(&rat(-2, 1), &rat(1, 2), &rat(3, 1), 200), exact(&rat(-2, 1), &rat(1, 2), &rat(3, 1), 3));
}
