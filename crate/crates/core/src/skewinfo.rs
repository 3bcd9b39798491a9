//! Correlation measure `Corr^c_ρ(A, B)` and metric-adjusted skew information.

use alloc::format;

use crate::linalg::{c64, commutator, matrix_power, C64, ComplexMatrix, DensityMatrix, Observable};
use crate::metrics::MetricSpec;
use crate::{Error, Result};

/// Imaginary residue tolerated on `Corr(A, A)`.
pub const IMAG_RESIDUE_TOL: f64 = 1e-12;

/// `Corr^c_ρ(A, B) = Σ_ij w(λ_i, λ_j) conj(Ã_ij) B̃_ij` with `Ã = V†AV`, `B̃ = V†BV`.
///
/// Conjugate-linear in `A`, linear in `B`.
pub fn correlation(
    rho: &DensityMatrix,
    a: &Observable,
    b: &Observable,
    metric: &MetricSpec,
) -> Result<C64> {
    correlation_matrices(rho, a.matrix(), b.matrix(), metric)
}

/// [`correlation`] for arbitrary (not necessarily Hermitian) matrices.
pub fn correlation_matrices(
    rho: &DensityMatrix,
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    metric: &MetricSpec,
) -> Result<C64> {
    let at = rho.to_eigenbasis(a)?;
    let bt = rho.to_eigenbasis(b)?;
    Ok(rotated_correlation(rho.eigenvalues(), &at, &bt, metric))
}

/// Correlation of two matrices already expressed in the eigenbasis of `ρ`.
pub(crate) fn rotated_correlation(
    eigenvalues: &[f64],
    at: &ComplexMatrix,
    bt: &ComplexMatrix,
    metric: &MetricSpec,
) -> C64 {
    let mut acc = c64(0.0, 0.0);
    for (i, &li) in eigenvalues.iter().enumerate() {
        for (j, &lj) in eigenvalues.iter().enumerate() {
            let w = metric.weight(li, lj);
            if w != 0.0 {
                acc += at[(i, j)].conj() * bt[(i, j)] * w;
            }
        }
    }
    acc
}

/// `I^c_ρ(A) = Corr^c_ρ(A, A)`.
pub fn skew_information(rho: &DensityMatrix, a: &Observable, metric: &MetricSpec) -> Result<f64> {
    let corr = correlation(rho, a, a, metric)?;
    real_nonnegative(corr)
}

pub(crate) fn real_nonnegative(corr: C64) -> Result<f64> {
    if corr.im.abs() > IMAG_RESIDUE_TOL {
        return Err(Error::Inconsistent(format!(
            "Corr(A, A) has imaginary part {:e}",
            corr.im
        )));
    }
    if corr.re < -IMAG_RESIDUE_TOL {
        return Err(Error::Inconsistent(format!(
            "skew information is negative ({:e})",
            corr.re
        )));
    }
    Ok(corr.re.max(0.0))
}

/// Wigner–Yanase–Dyson skew information from the trace formula
/// `−½ Tr([ρ^α, A][ρ^{1−α}, A])`, by explicit matrix products.
pub fn wyd_direct(rho: &DensityMatrix, a: &Observable, alpha: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::Domain(format!("WYD alpha {alpha} outside (0, 1)")));
    }
    if a.dim() != rho.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            found: a.dim(),
        });
    }
    let left = commutator(&matrix_power(rho, alpha)?, a.matrix())?;
    let right = commutator(&matrix_power(rho, 1.0 - alpha)?, a.matrix())?;
    let value = left.trace_product(&right)? * -0.5;
    Ok(value.re.max(0.0))
}
