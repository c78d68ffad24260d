//! Exact split-place local computations for unitary theta lifts: Weil
//! representation coefficients, spherical functions, local zeta integrals,
//! L-factor normalisations and the pole-order certification of the
//! Δ-replacement lemma.
//!
//! Every function of s is a rational function of t = q^{-s} over the field
//! K = Q(ζ_N)[u]/(u² − 1/q); behaviour at s = 0 is read off at t = 1.

pub mod coeffs;
pub mod error;
pub mod exec;
pub mod lattice_series;
pub mod lemma_verify;
pub mod lfactors;
pub mod padic_geometry;
pub mod repcoeff;
pub mod schwartz;
pub mod zeta;

pub use error::{Error, Result};
