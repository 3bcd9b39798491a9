//! Local orthogonal observables (LOOs), coefficient expansions and the Gram
//! matrix `Γ_μν = Corr^c_ρ(Ω_μ, Ω_ν)` with its factor `Γ = C†C`.

use alloc::format;
use alloc::vec::Vec;


// Inherent float methods are std-only; in a no_std build they come from here.
#[allow(unused_imports)]
use num_traits::Float;
use crate::linalg::{c64, eig_hermitian, spectral_sum, C64, ComplexMatrix, DensityMatrix, Observable};
use crate::metrics::MetricSpec;
use crate::skewinfo::rotated_correlation;
use crate::{Error, Result};

/// Eigenvalues of `Γ` below this are treated as zero when taking the square root.
pub const GRAM_CLAMP: f64 = 1e-12;
/// Negative slack allowed on the spectrum of `Γ`.
pub const GRAM_PSD_TOL: f64 = 1e-10;

/// Orthonormal Hermitian basis of `d × d` matrices under `Tr(XY)`.
///
/// Order: `I/√d`, the `d − 1` traceless diagonal elements, the symmetric
/// elements `(E_jk + E_kj)/√2`, then the antisymmetric `−i(E_jk − E_kj)/√2`,
/// off-diagonal pairs in ascending `(j, k)`. For `d = 2` this is
/// `{I, σ_z, σ_x, σ_y}/√2`.
#[derive(Clone, Debug)]
pub struct LooBasis {
    dim: usize,
    elements: Vec<ComplexMatrix>,
}

pub fn loo_basis(d: usize) -> Result<LooBasis> {
    if d < 2 {
        return Err(Error::Domain(format!("LOO basis needs d >= 2, got {d}")));
    }
    let inv_sqrt2 = 0.5f64.sqrt();
    let mut elements = Vec::with_capacity(d * d);
    elements.push(ComplexMatrix::identity(d).scale_real(1.0 / (d as f64).sqrt()));
    for l in 1..d {
        let norm = 1.0 / ((l * (l + 1)) as f64).sqrt();
        let diag: Vec<f64> = (0..d)
            .map(|i| match i.cmp(&l) {
                core::cmp::Ordering::Less => norm,
                core::cmp::Ordering::Equal => -(l as f64) * norm,
                core::cmp::Ordering::Greater => 0.0,
            })
            .collect();
        elements.push(ComplexMatrix::diagonal(&diag));
    }
    let pairs: Vec<(usize, usize)> = (0..d)
        .flat_map(|j| ((j + 1)..d).map(move |k| (j, k)))
        .collect();
    for &(j, k) in &pairs {
        elements.push(ComplexMatrix::from_fn(d, |r, c| {
            if (r, c) == (j, k) || (r, c) == (k, j) {
                c64(inv_sqrt2, 0.0)
            } else {
                c64(0.0, 0.0)
            }
        }));
    }
    for &(j, k) in &pairs {
        elements.push(ComplexMatrix::from_fn(d, |r, c| {
            if (r, c) == (j, k) {
                c64(0.0, -inv_sqrt2)
            } else if (r, c) == (k, j) {
                c64(0.0, inv_sqrt2)
            } else {
                c64(0.0, 0.0)
            }
        }));
    }
    Ok(LooBasis { dim: d, elements })
}

impl LooBasis {
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of elements, `d²`.
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[ComplexMatrix] {
        &self.elements
    }

    /// Matrix of pairwise `Tr(Ω_μ Ω_ν)`; the identity for an orthonormal basis.
    pub fn trace_gram(&self) -> ComplexMatrix {
        let n = self.len();
        ComplexMatrix::from_fn(n, |mu, nu| {
            self.elements[mu]
                .trace_product(&self.elements[nu])
                .unwrap_or(c64(f64::NAN, 0.0))
        })
    }

    /// `Σ_μ a_μ Ω_μ`.
    pub fn combine(&self, coeffs: &CoeffVector) -> Result<ComplexMatrix> {
        if coeffs.0.len() != self.len() {
            return Err(Error::LengthMismatch {
                expected: self.len(),
                found: coeffs.0.len(),
            });
        }
        let mut acc = ComplexMatrix::zeros(self.dim);
        for (a, omega) in coeffs.0.iter().zip(&self.elements) {
            acc = &acc + &omega.scale_real(*a);
        }
        Ok(acc)
    }
}

/// Real coefficients `a_μ = Tr(Ω_μ A)` of an observable.
#[derive(Clone, Debug, PartialEq)]
pub struct CoeffVector(pub Vec<f64>);

impl CoeffVector {
    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    fn as_complex(&self) -> Vec<C64> {
        self.0.iter().map(|&x| c64(x, 0.0)).collect()
    }
}

pub fn expand(a: &Observable, basis: &LooBasis) -> Result<CoeffVector> {
    if a.dim() != basis.dim {
        return Err(Error::DimensionMismatch {
            expected: basis.dim,
            found: a.dim(),
        });
    }
    basis
        .elements
        .iter()
        .map(|omega| Ok(omega.trace_product(a.matrix())?.re))
        .collect::<Result<Vec<_>>>()
        .map(CoeffVector)
}

/// Choice of `C` in `Γ = C†C`. The factor is only fixed up to a left unitary;
/// modulus vectors (and so every intermediate chain value) depend on it.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Gauge {
    /// `C = Γ^{1/2}`, the Hermitian PSD square root.
    #[default]
    HermitianSqrt,
    /// `C = L†` from the outer-product Cholesky factorization `Γ = L L†`,
    /// skipping zero pivots. Upper triangular in the LOO order.
    Cholesky,
}

/// `Γ` together with a factor `C` satisfying `C†C = Γ`.
#[derive(Clone, Debug)]
pub struct GramFactor {
    gamma: ComplexMatrix,
    factor: ComplexMatrix,
    gauge: Gauge,
}

/// `Γ` and its canonical square-root factor.
pub fn gram_matrix(rho: &DensityMatrix, basis: &LooBasis, metric: &MetricSpec) -> Result<GramFactor> {
    gram_matrix_with_gauge(rho, basis, metric, Gauge::HermitianSqrt)
}

pub fn gram_matrix_with_gauge(
    rho: &DensityMatrix,
    basis: &LooBasis,
    metric: &MetricSpec,
    gauge: Gauge,
) -> Result<GramFactor> {
    if rho.dim() != basis.dim {
        return Err(Error::DimensionMismatch {
            expected: basis.dim,
            found: rho.dim(),
        });
    }
    let rotated: Vec<ComplexMatrix> = basis
        .elements
        .iter()
        .map(|omega| rho.to_eigenbasis(omega))
        .collect::<Result<_>>()?;
    let n = rotated.len();
    let lambdas = rho.eigenvalues();
    // Entries are independent; fill the upper triangle and mirror it.
    let mut upper = alloc::vec![c64(0.0, 0.0); n * n];
    for mu in 0..n {
        for nu in mu..n {
            upper[mu * n + nu] = rotated_correlation(lambdas, &rotated[mu], &rotated[nu], metric);
        }
    }
    let gamma = ComplexMatrix::from_fn(n, |mu, nu| {
        if mu <= nu {
            upper[mu * n + nu]
        } else {
            upper[nu * n + mu].conj()
        }
    });
    let factor = match gauge {
        Gauge::HermitianSqrt => hermitian_sqrt(&gamma)?,
        Gauge::Cholesky => cholesky_factor(&gamma),
    };
    Ok(GramFactor {
        gamma,
        factor,
        gauge,
    })
}

fn gram_scale(gamma: &ComplexMatrix) -> f64 {
    gamma.max_abs().max(1.0)
}

fn hermitian_sqrt(gamma: &ComplexMatrix) -> Result<ComplexMatrix> {
    let eig = eig_hermitian(gamma)?;
    let scale = gram_scale(gamma);
    let min = eig.values.first().copied().unwrap_or(0.0);
    if min < -GRAM_PSD_TOL * scale {
        return Err(Error::NotPositive {
            min_eigenvalue: min,
        });
    }
    let roots: Vec<f64> = eig
        .values
        .iter()
        .map(|&l| if l < GRAM_CLAMP { 0.0 } else { l.sqrt() })
        .collect();
    Ok(spectral_sum(&eig.vectors, &roots))
}

fn cholesky_factor(gamma: &ComplexMatrix) -> ComplexMatrix {
    let n = gamma.dim();
    let tol = GRAM_CLAMP * gram_scale(gamma);
    let mut residual: Vec<C64> = gamma.as_slice().to_vec();
    let mut lower = alloc::vec![c64(0.0, 0.0); n * n];
    for k in 0..n {
        let pivot = residual[k * n + k].re;
        if pivot <= tol {
            continue;
        }
        let root = pivot.sqrt();
        for i in k..n {
            lower[i * n + k] = residual[i * n + k] / root;
        }
        for i in k..n {
            for j in k..n {
                let update = lower[i * n + k] * lower[j * n + k].conj();
                residual[i * n + j] -= update;
            }
        }
    }
    // C = L†
    ComplexMatrix::from_fn(n, |i, j| lower[j * n + i].conj())
}

impl GramFactor {
    pub fn gamma(&self) -> &ComplexMatrix {
        &self.gamma
    }

    pub fn factor(&self) -> &ComplexMatrix {
        &self.factor
    }

    pub fn gauge(&self) -> Gauge {
        self.gauge
    }

    /// `‖C†C − Γ‖_max`.
    pub fn factorization_error(&self) -> f64 {
        (&self.factor.adjoint() * &self.factor).max_abs_diff(&self.gamma)
    }

    /// `a†Γb`.
    pub fn quadratic_form(&self, a: &CoeffVector, b: &CoeffVector) -> Result<C64> {
        let gb = self.gamma.apply(&b.as_complex())?;
        if a.len() != gb.len() {
            return Err(Error::LengthMismatch {
                expected: gb.len(),
                found: a.len(),
            });
        }
        Ok(a.0.iter().zip(&gb).map(|(x, y)| y * *x).sum())
    }

    /// `f = C a`.
    pub fn amplitudes(&self, a: &CoeffVector) -> Result<Vec<C64>> {
        self.factor.apply(&a.as_complex()).map_err(|_| Error::LengthMismatch {
            expected: self.factor.dim(),
            found: a.len(),
        })
    }

    /// Same `Γ` with factor `U C`; `U` must be unitary.
    pub fn regauge(&self, unitary: &ComplexMatrix) -> Result<GramFactor> {
        let deviation = unitary.unitarity_deviation();
        if deviation > 1e-9 {
            return Err(Error::Domain(format!(
                "gauge transform is not unitary (deviation {deviation:e})"
            )));
        }
        Ok(GramFactor {
            gamma: self.gamma.clone(),
            factor: unitary.try_mul(&self.factor)?,
            gauge: self.gauge,
        })
    }
}

/// Entrywise moduli `x_i = |(C a)_i|`.
#[derive(Clone, Debug, PartialEq)]
pub struct ModulusVector(pub Vec<f64>);

impl ModulusVector {
    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.0.iter().map(|x| x * x).sum()
    }
}

pub fn modulus_vector(factor: &GramFactor, a: &CoeffVector) -> Result<ModulusVector> {
    Ok(ModulusVector(
        factor.amplitudes(a)?.iter().map(|z| z.norm()).collect(),
    ))
}
