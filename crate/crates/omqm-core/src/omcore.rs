//! Shared constant set and the two modular scale-reduction maps.
//!
//! All downstream modules receive their constants through [`OmConstants`] so
//! that a sign choice or an alpha override made at the command line propagates
//! consistently.

use num_complex::Complex64;
use std::f64::consts::PI;
use thiserror::Error;

/// Reference value of the Feigenbaum constant δ, used for default constants.
/// The chaos module recomputes its own estimate; defaults deliberately use
/// this fixed reference so they do not drift with solver settings.
#[allow(clippy::excessive_precision)] // keep the full published digits
pub const FEIGENBAUM_DELTA: f64 = 4.669_201_609_102_990;

/// Reference ring dimension D used by the default fine-structure reading.
pub const RING_DIMENSION: f64 = 2.974_283_562_752;

/// Errors from scale construction.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum ScaleError {
    /// The outcome-space size `n` must be at least 1.
    #[error("outcome-space size n must be >= 1 (got {0})")]
    ZeroModulus(u64),
}

/// Sign choice for the spin constant s̃ = ±(i − 1).
///
/// Both choices square to −2i, so squared quantities are sign-independent;
/// the sign only matters for phase-like readouts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpinSign {
    /// s̃ = i − 1 (the default).
    Plus,
    /// s̃ = 1 − i.
    Minus,
}

impl SpinSign {
    /// The complex value of s̃ for this sign choice.
    pub fn value(self) -> Complex64 {
        match self {
            SpinSign::Plus => Complex64::new(-1.0, 1.0),
            SpinSign::Minus => Complex64::new(1.0, -1.0),
        }
    }
}

/// The constant set shared by every module.
#[derive(Debug, Clone, PartialEq)]
pub struct OmConstants {
    /// Base period constant p̃₀ = 4π².
    pub p0_tilde: f64,
    /// Curvature constant c̃ = −2πi.
    pub c_tilde: Complex64,
    /// Spin constant s̃ = ±(i − 1); see [`SpinSign`].
    pub s_tilde: Complex64,
    /// Unit loop volume α̃. Defaults to 1 / (D · exp(√(π·δ))) with the
    /// reference values of D and δ.
    pub alpha_tilde: f64,
    /// Fourier coefficient A = π⁴/15 of the fixed-invariant expansion.
    pub fourier_a: f64,
    /// Fourier coefficient B = 2π⁶/189 of the fixed-invariant expansion.
    pub fourier_b: f64,
}

/// Default unit loop volume for a given ring dimension:
/// α̃ = 1 / (dimension · exp(√(π·δ))) with δ the reference Feigenbaum value.
pub fn default_alpha_tilde(dimension: f64) -> f64 {
    1.0 / (dimension * (PI * FEIGENBAUM_DELTA).sqrt().exp())
}

impl OmConstants {
    /// Constants with the given spin sign and the default α̃.
    pub fn new(sign: SpinSign) -> Self {
        Self::with_alpha(sign, default_alpha_tilde(RING_DIMENSION))
    }

    /// Constants with an explicit α̃ override.
    pub fn with_alpha(sign: SpinSign, alpha_tilde: f64) -> Self {
        OmConstants {
            p0_tilde: 4.0 * PI * PI,
            c_tilde: Complex64::new(0.0, -2.0 * PI),
            s_tilde: sign.value(),
            alpha_tilde,
            fourier_a: PI.powi(4) / 15.0,
            fourier_b: 2.0 * PI.powi(6) / 189.0,
        }
    }
}

impl Default for OmConstants {
    fn default() -> Self {
        Self::new(SpinSign::Plus)
    }
}

/// A point z = u + i·t of the upper half-plane model, stored by coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexPoint {
    /// Real coordinate u.
    pub u: f64,
    /// Imaginary coordinate t.
    pub t: f64,
}

impl ComplexPoint {
    /// The complex value u + i·t.
    pub fn value(self) -> Complex64 {
        Complex64::new(self.u, self.t)
    }
}

/// An observation scale: a large integer length `l1` together with the size
/// `n` of the outcome space it is reduced into.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OmScale {
    /// The integer scale (unreduced length).
    pub l1: u64,
    /// Number of admissible outcomes; must be ≥ 1.
    pub n: u64,
}

impl OmScale {
    /// Construct a scale, rejecting `n = 0`.
    pub fn new(l1: u64, n: u64) -> Result<Self, ScaleError> {
        if n == 0 {
            return Err(ScaleError::ZeroModulus(n));
        }
        Ok(OmScale { l1, n })
    }

    /// The reduced scale `l1 mod 2n`; see [`reduce_scale`].
    pub fn reduced(self) -> u64 {
        reduce_scale(self.l1, self.n)
    }

    /// The outcome index `⌊(l1 mod 2n)/2⌋`; see [`collapse_index`].
    pub fn index(self) -> u64 {
        collapse_index(self.l1, self.n)
    }
}

/// Reduce a scale into one period of the outcome space: `l1 mod 2n`.
///
/// Total for `n ≥ 1`. The factor 2 reflects that each outcome occupies a
/// two-unit cell (one unit per orientation).
pub fn reduce_scale(l1: u64, n: u64) -> u64 {
    assert!(n >= 1, "outcome-space size n must be >= 1");
    l1 % (2 * n)
}

/// The collapse index k* = ⌊(l1 mod 2n)/2⌋ ∈ {0, …, n−1}.
pub fn collapse_index(l1: u64, n: u64) -> u64 {
    reduce_scale(l1, n) / 2
}
