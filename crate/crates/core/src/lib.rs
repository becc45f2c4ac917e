//! Exact p-adic analysis of hypergeometric series with rational parameters.
//!
//! The crate decides at which primes the Taylor coefficients of
//! `nF(n-1)(alphas; betas; z)` are p-adically unbounded, computes the
//! Dirichlet density of that prime set for `2F1`, and checks the level-one
//! modular Schwarz list. All arithmetic is exact.
//!
//! - [`arith`]: rationals, valuations, orders, unit groups.
//! - [`padic`]: periodic expansions, truncations, Kummer carries.
//! - [`hyper`]: parameters, the coefficient oracle, the carry formula for `v_p(A_m)`.
//! - [`classify`]: the `2F1` criterion, witnesses, densities.
//! - [`schwarz`]: the embedded Schwarz tables and their certification.

pub mod arith;
pub mod classify;
pub mod error;
pub mod hyper;
pub mod padic;
pub mod schwarz;

pub use arith::{Prime, Rational, UnitGroup, Valuation};
pub use classify::{AdmissibleTriple, DensityReport, PrimeClassification, Verdict};
pub use error::{Error, Result};
pub use hyper::{AdmissibleParams, HyperParams, ValuationProfile};
pub use padic::{CarryCount, PAdicExpansion};
