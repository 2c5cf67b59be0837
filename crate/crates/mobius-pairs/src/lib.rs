//! Möbius pairs over finite ranges.
//!
//! A pair of arithmetic functions (f, g) is a Möbius pair when
//! f(n) = Σ_{d|n} g(d) for all n; equivalently g(n) = Σ_{d|n} μ(n/d) f(d).
//! This crate tabulates such pairs exactly on [1, N] and provides the
//! machinery to study their supports at desk scale: sieve tables, the
//! Dirichlet/Möbius transforms and their truncations, empirical and
//! formula-based densities, set-of-multiples counting, mean values, the
//! prescribed-density and greedy thin-support constructions, and named
//! experiments that check the main statements numerically.
//!
//! All function values are exact signed 64-bit integers; arithmetic that
//! would overflow is reported as an error, never wrapped. Real-valued
//! outputs (densities, mean values, products over primes) use f64.

pub mod arithfn;
pub mod bitmap;
pub mod construct;
pub mod density;
pub mod error;
pub mod experiment;
pub mod io;
pub mod sieve;

pub use arithfn::{ArithFunction, MoebiusPair, MultiplicativeSpec};
pub use density::{CheckpointPlan, DensityEstimate, MultiplesBitmap};
pub use error::{Error, Result};
pub use sieve::{build_sieve, build_sieve_with_ceiling, SieveTables};
