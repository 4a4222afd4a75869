//! Finite free additive convolution of real-rooted polynomials.
//!
//! The crate provides:
//!
//! * a root-primary polynomial model with coefficient conversion and
//!   companion-matrix root finding ([`RealRootedPoly`]),
//! * the additive convolution `⊞_d` through its derivative formula, with a
//!   brute-force pairing-average oracle ([`convolution`]),
//! * discriminants, entropy and spread quantities computed in log space
//!   ([`spectral`]),
//! * Wronskian and interlacing machinery ([`interlacing`]),
//! * the time-dilation root flow and its monotonicity checks ([`flow`]),
//! * a reproducible randomized campaign probing the superadditivity of the
//!   normalized discriminant under convolution ([`conjecture`]), and
//! * batch verification suites for the discriminant-growth properties
//!   ([`verify`]).
//!
//! Trial-parallel work (campaigns, suites) runs on a rayon pool when the
//! default `parallel` feature is enabled and falls back to plain sequential
//! iteration without it. Results are identical either way: every trial is
//! seeded independently and merged in trial order.

pub mod conjecture;
pub mod convolution;
pub mod error;
mod exec;
pub mod flow;
pub mod interlacing;
pub mod json;
pub mod poly;
pub mod real_rooted;
pub mod roots;
pub mod spectral;
pub mod verify;

pub use error::{FfcError, Result};
pub use poly::Poly;
pub use real_rooted::{RealRootedPoly, ScaledPoly, SymmetricProfile};
