//! Spectra of the harmonic oscillator on a circle and of its one-parameter
//! family of self-adjoint extensions `H_β`.
//!
//! The circle of radius `r` is the segment `[-ℓ, ℓ]`, `ℓ = πr`, with the
//! endpoints identified at the antipodal point `A`. `H_β` acts as
//! `-½ d²/dx² + ½ x²` with the matching condition
//! `ψ'(-ℓ) = ψ'(ℓ) + 2ℓβ ψ(ℓ)`; `β = 0` is the plain oscillator `H`,
//! `β = 1` the normal-ordered `a†a + ½` and `β = -1` the anti-normal-ordered
//! `aa† - ½`.

pub mod asymptotics;
pub mod canonical;
pub mod datasets;
pub mod error;
pub mod galerkin;
pub mod grid;
pub mod io;
pub mod ladder;
pub mod ode;
pub mod params;
pub mod shooting;
pub mod special;
pub mod verify;
pub mod weber;

pub use error::{Error, Result};
pub use params::{OscillatorParams, Parity};
