//! Core library of the `omqm` workspace: a desk-scale computational model in
//! which measurement outcomes arise from modular reduction of a large integer
//! "scale" rather than from stochastic collapse.
//!
//! The crate is organised as a stack:
//!
//! * [`omcore`] — the constant set and the two scale-reduction maps everything
//!   else shares.
//! * [`numtheory`] — sieves for the Möbius and von Mangoldt functions, Mertens
//!   sums, Chebyshev psi, exact divisor sums, and a binary cache format.
//! * [`zeta`] — Euler–Maclaurin evaluation of the Riemann zeta function,
//!   its inverse on the real axis, Hardy-function zero finding, and the
//!   prime-indexed energy form built on top of the zeros.
//! * [`elliptic`] — Eisenstein series, Weierstrass ℘ with certified truncation
//!   bounds, and the fixed-invariant Fourier expansion used by the ledger.
//! * [`collapse`] — the two equivalent readings of outcome selection
//!   (key-cylinder braid walk and zeta-stretch), which must agree everywhere.
//! * [`born`] — jitter sampling of outcomes and the Gaussian envelope model
//!   the empirical histogram is compared against.
//! * [`epr`] — paired-mode collapse with shared offset and opposite
//!   orientations, plus the multiplicative volume ledger.
//! * [`chaos`] — Feigenbaum cascade, Rössler Lyapunov exponents, and the
//!   fine-structure readings derived from them.
//! * [`ledger`] — the claim registry: every numerical identity the model
//!   asserts, recomputed and graded CONFIRMED / DISCREPANT / REPORT-ONLY.

pub mod born;
pub mod chaos;
pub mod collapse;
pub mod elliptic;
pub mod epr;
pub mod ledger;
pub mod numtheory;
pub mod omcore;
pub mod zeta;
