//! Metric-adjusted skew information and the uncertainty bounds built on it.
//!
//! The crate is `no_std` and only needs `alloc`. Everything here is a pure
//! function over small dense complex matrices (d ≤ ~32):
//!
//! - [`linalg`]: complex matrices, Hermitian eigensolver, PSD powers, commutators,
//!   validated [`Observable`] and [`DensityMatrix`] types.
//! - [`metrics`]: the closed registry of Morozova–Chentsov functions (WY, WYD(α), SLD)
//!   and the pairwise eigenvalue weight used by every skew computation.
//! - [`skewinfo`]: `Corr^c_ρ(A, B)`, `I^c_ρ(A)` and a trace-formula WYD oracle.
//! - [`loo`]: the generalized Gell-Mann basis of local orthogonal observables,
//!   the Gram matrix of correlations and its factorization `Γ = C†C`.
//! - [`bounds`]: Cauchy–Schwarz product bound, the `I_k` and `S_pq` refinement
//!   chains, permutation-maximized variants and the two sum bounds.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod bounds;
mod error;
pub mod linalg;
pub mod loo;
pub mod metrics;
pub mod skewinfo;

pub use error::{Error, Result};
pub use linalg::{C64, ComplexMatrix, DensityMatrix, Observable};
pub use metrics::{MetricKind, MetricSpec};
