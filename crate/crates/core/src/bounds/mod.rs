//! Product- and sum-form uncertainty lower bounds.
//!
//! [`evaluate_product`] and [`evaluate_sum`] run the whole pipeline from a
//! state and observables; the submodules expose the pieces that work on
//! modulus vectors directly.

pub mod chain;
pub mod permute;
pub mod sum;

use alloc::format;
use alloc::vec::Vec;

pub use chain::{chain_ik, table_spq, ProductChain, SpqEntry, SpqTable};
pub use permute::{
    best_permuted_product_bound, permutation_search, ChainIndex, ChainKind, Permutation, PermutationSearch,
    PermutedBound, Strategy, SEARCH_CAP,
};
pub use sum::{sum_bound_norm, sum_bound_theorem3, theorem3_value, NormBound, Theorem3Bound};

use crate::linalg::{DensityMatrix, Observable, C64};
use crate::loo::{expand, gram_matrix_with_gauge, loo_basis, modulus_vector, Gauge, GramFactor, ModulusVector};
use crate::metrics::MetricSpec;
use crate::skewinfo::{correlation, skew_information};
use crate::{Error, Result};

/// Slack for the self-consistency checks run on every report.
pub const CHECK_TOL: f64 = 1e-9;

/// `|Corr(A, B)|²`.
pub fn cauchy_bound(rho: &DensityMatrix, a: &Observable, b: &Observable, metric: &MetricSpec) -> Result<f64> {
    Ok(correlation(rho, a, b, metric)?.norm_sqr())
}

/// Everything computed for one product-form query.
#[derive(Clone, Debug)]
pub struct ProductReport {
    pub chain: ProductChain,
    pub corr: C64,
    pub skew_a: f64,
    pub skew_b: f64,
    pub x: ModulusVector,
    pub y: ModulusVector,
}

fn moduli(rho: &DensityMatrix, metric: &MetricSpec, gauge: Gauge, obs: &[&Observable]) -> Result<(GramFactor, Vec<ModulusVector>)> {
    let basis = loo_basis(rho.dim())?;
    let factor = gram_matrix_with_gauge(rho, &basis, metric, gauge)?;
    let vectors = obs
        .iter()
        .map(|o| modulus_vector(&factor, &expand(o, &basis)?))
        .collect::<Result<Vec<_>>>()?;
    Ok((factor, vectors))
}

fn norm_consistency(label: &str, vector: &ModulusVector, skew: f64) -> Result<()> {
    let n = vector.norm_sqr();
    if (n - skew).abs() > CHECK_TOL * skew.max(1.0) {
        return Err(Error::Inconsistent(format!(
            "|x|^2 = {n} for {label} differs from I = {skew}"
        )));
    }
    Ok(())
}

/// Product bound, `I_k` chain and `S_pq` table for `(A, B)` in the given gauge.
///
/// The chains are built from modulus vectors while `product` and `cauchy`
/// come straight from the correlation measure, so [`ProductChain::check`]
/// compares two independent routes.
pub fn evaluate_product(
    rho: &DensityMatrix,
    a: &Observable,
    b: &Observable,
    metric: &MetricSpec,
    gauge: Gauge,
) -> Result<ProductReport> {
    let (_, mut vs) = moduli(rho, metric, gauge, &[a, b])?;
    let y = vs.pop().expect("two vectors");
    let x = vs.pop().expect("two vectors");
    let skew_a = skew_information(rho, a, metric)?;
    let skew_b = skew_information(rho, b, metric)?;
    norm_consistency("A", &x, skew_a)?;
    norm_consistency("B", &y, skew_b)?;
    let corr = correlation(rho, a, b, metric)?;
    let chain = ProductChain::from_moduli(x.as_slice(), y.as_slice(), skew_a * skew_b, corr.norm_sqr())?;
    Ok(ProductReport {
        chain,
        corr,
        skew_a,
        skew_b,
        x,
        y,
    })
}

/// Both sum bounds for an ensemble of observables.
#[derive(Clone, Debug)]
pub struct SumBoundReport {
    /// `Σ_i I(A_i)`.
    pub sum: f64,
    pub individual: Vec<f64>,
    pub theorem3: Theorem3Bound,
    pub norm_bound: NormBound,
}

impl SumBoundReport {
    pub fn witness_perms(&self) -> &[Permutation] {
        &self.theorem3.witness
    }

    /// Both bounds (and every evaluated candidate) must sit below the sum.
    pub fn check(&self, tol: f64) -> Result<()> {
        if self.theorem3.value > self.sum + tol {
            return Err(Error::Inconsistent(format!(
                "sum bound {} exceeds sum {}",
                self.theorem3.value, self.sum
            )));
        }
        if let Some(bad) = self.theorem3.candidates.iter().find(|&&v| v > self.sum + tol) {
            return Err(Error::Inconsistent(format!(
                "candidate sum bound {bad} exceeds sum {}",
                self.sum
            )));
        }
        if self.norm_bound.value > self.sum + tol {
            return Err(Error::Inconsistent(format!(
                "norm bound {} exceeds sum {}",
                self.norm_bound.value, self.sum
            )));
        }
        Ok(())
    }
}

pub fn evaluate_sum(
    rho: &DensityMatrix,
    observables: &[Observable],
    metric: &MetricSpec,
    gauge: Gauge,
    strategy: Strategy,
) -> Result<SumBoundReport> {
    let refs: Vec<&Observable> = observables.iter().collect();
    let (_, vectors) = moduli(rho, metric, gauge, &refs)?;
    let individual = observables
        .iter()
        .map(|o| skew_information(rho, o, metric))
        .collect::<Result<Vec<_>>>()?;
    for (v, &s) in vectors.iter().zip(&individual) {
        norm_consistency("ensemble member", v, s)?;
    }
    let slices: Vec<&[f64]> = vectors.iter().map(ModulusVector::as_slice).collect();
    let theorem3 = sum_bound_theorem3(&slices, strategy)?;
    let norm_bound = sum_bound_norm(rho, observables, metric)?;
    Ok(SumBoundReport {
        sum: individual.iter().sum(),
        individual,
        theorem3,
        norm_bound,
    })
}
