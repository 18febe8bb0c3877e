use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported half-circumference. Beyond this the `e^{ℓ²}` growth of
/// the non-normalizable Weber branch eats the double-precision budget.
pub const MAX_HALF_LENGTH: f64 = 8.0;

/// Parity sector of a solution of the oscillator equation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn as_str(self) -> &'static str {
        match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        }
    }

    /// `+1` for even, `-1` for odd.
    pub fn sign(self) -> f64 {
        match self {
            Parity::Even => 1.0,
            Parity::Odd => -1.0,
        }
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Circle size and self-adjoint extension: the pair `(ℓ, β)`.
///
/// `ℓ = πr` is the half-circumference, so the circle is represented by the
/// segment `[-ℓ, ℓ]` with both endpoints standing for the antipodal point.
/// `β` selects the matching condition `ψ'(-ℓ) = ψ'(ℓ) + 2ℓβ ψ(ℓ)`; `β = 0`
/// is the plain `½(p² + q²)`, `β = 1` the normal-ordered and `β = -1` the
/// anti-normal-ordered Hamiltonian.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OscillatorParams {
    half_length: f64,
    beta: f64,
}

impl OscillatorParams {
    pub fn new(half_length: f64, beta: f64) -> Result<Self> {
        if !(half_length > 0.0 && half_length <= MAX_HALF_LENGTH) {
            return Err(Error::InvalidParams(format!(
                "half-length ℓ = {half_length} outside (0, {MAX_HALF_LENGTH}]"
            )));
        }
        if !beta.is_finite() {
            return Err(Error::InvalidParams(format!("β = {beta} is not finite")));
        }
        Ok(Self { half_length, beta })
    }

    pub fn from_radius(radius: f64, beta: f64) -> Result<Self> {
        Self::new(PI * radius, beta)
    }

    pub fn half_length(&self) -> f64 {
        self.half_length
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn radius(&self) -> f64 {
        self.half_length / PI
    }

    pub fn with_beta(&self, beta: f64) -> Result<Self> {
        Self::new(self.half_length, beta)
    }

    /// Lower bound on the spectrum of `H_β`, from the quadratic form: the
    /// point interaction of strength `βℓ` cannot bind deeper than `-(βℓ)²/2`.
    pub fn default_energy_floor(&self) -> f64 {
        -1.0 - 0.5 * self.beta * self.beta * self.half_length * self.half_length
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_out_of_range() {
        assert!(OscillatorParams::new(0.0, 0.0).is_err());
        assert!(OscillatorParams::new(-1.0, 0.0).is_err());
        assert!(OscillatorParams::new(8.5, 0.0).is_err());
        assert!(OscillatorParams::new(2.0, f64::NAN).is_err());
        assert!(OscillatorParams::new(8.0, -3.0).is_ok());
    }

    #[test]
    fn radius_round_trip() {
        let p = OscillatorParams::from_radius(1.0, 0.0).unwrap();
        assert_eq!(p.half_length(), PI);
        assert!((p.radius() - 1.0).abs() < 1e-15);
    }
}
