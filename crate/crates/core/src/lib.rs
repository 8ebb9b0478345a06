//! Exact-arithmetic toolkit for multivariate step functions whose averages
//! vanish over every product `A_1 × … × A_m` of disjoint sets with prescribed
//! measures `α_1, …, α_m`.
//!
//! The crate is organised bottom-up:
//!
//! - [`stepfn`]: step functions on the uniform `n^m` grid of `[0,1]^m` with
//!   exact rational-complex cell values, and their algebra.
//! - [`walsh`]: the generalized Walsh (Hoeffding) expansion `f = Σ_S F_S`.
//! - [`characterize`]: the exact decision procedure for the vanishing-average
//!   condition, with replayable certificates, and the first-variation operators.
//! - [`construct`]: generators of solutions, general and symmetric.
//! - [`oracle`]: brute-force ground truth over grid-aligned partitions.
//! - [`symmetric`]: level coefficients and the sets `K(m, r, α)`.
//! - [`quasirandom`]: graphons, homomorphism densities and the properties
//!   `P(F, α)` / `P̃(F, α)`.
//!
//! Axes are 0-based in the Rust API (axis `i` is coordinate `i + 1`); the JSON
//! formats and the CLI use 1-based coordinates.

pub mod alpha;
pub mod characterize;
pub mod construct;
mod error;
pub mod oracle;
pub mod quasirandom;
pub mod rational;
pub mod rng;
pub mod stepfn;
pub mod subset;
pub mod symmetric;
pub mod walsh;

pub use alpha::AlphaVector;
pub use characterize::{decide_vanishing, Certificate, CertificateKind, Detail, Verdict};
pub use error::{Error, Result};
pub use oracle::{brute_force_vanishes, GridPartition, OracleConfig, OracleReport};
pub use quasirandom::{GraphSpec, Graphon};
pub use rational::{Rational, RationalComplex};
pub use stepfn::{linear_combine, StepFunction};
pub use subset::SubsetMask;
pub use symmetric::{compute_k, KSet};
pub use walsh::{expand, LevelSelector, WalshExpansion};
