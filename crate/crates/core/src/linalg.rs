//! Dense complex matrices for small quantum systems.
//!
//! Matrices are stored row-major. The Hermitian eigensolver is a cyclic complex
//! Jacobi iteration, which is accurate to a few ulps for the sizes used here and
//! keeps the crate free of LAPACK.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::ops::{Add, Index, Mul, Sub};

use num_complex::Complex;

// Inherent float methods are std-only; in a no_std build they come from here.
#[allow(unused_imports)]
use num_traits::Float;
use crate::{Error, Result};

pub type C64 = Complex<f64>;

/// Max-entry slack for Hermiticity, trace and unitarity checks.
pub const HERMITIAN_TOL: f64 = 1e-9;
/// Negative-eigenvalue slack; eigenvalues smaller than this in magnitude are zero.
pub const PSD_TOL: f64 = 1e-9;

const JACOBI_MAX_SWEEPS: usize = 100;
const JACOBI_REL_TOL: f64 = 1e-15;
const EIGEN_TIE_TOL: f64 = 1e-12;

#[inline]
pub(crate) fn c64(re: f64, im: f64) -> C64 {
    Complex::new(re, im)
}

/// Square complex matrix, row-major, all entries finite.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    pub fn new(dim: usize, data: Vec<C64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Domain("matrix dimension must be at least 1".into()));
        }
        if data.len() != dim * dim {
            return Err(Error::InvalidShape {
                expected: dim * dim,
                found: data.len(),
            });
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { dim, data })
    }

    /// Builds a matrix from nested rows.
    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self> {
        let dim = rows.len();
        let mut data = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(Error::InvalidShape {
                    expected: dim,
                    found: row.len(),
                });
            }
            data.extend_from_slice(row);
        }
        Self::new(dim, data)
    }

    /// Real-entry convenience constructor.
    pub fn from_real(dim: usize, entries: &[f64]) -> Result<Self> {
        Self::new(dim, entries.iter().map(|&x| c64(x, 0.0)).collect())
    }

    pub(crate) fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                data.push(f(i, j));
            }
        }
        Self { dim, data }
    }

    pub fn zeros(dim: usize) -> Self {
        Self::from_fn(dim, |_, _| C64::new(0.0, 0.0))
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_fn(dim, |i, j| if i == j { c64(1.0, 0.0) } else { c64(0.0, 0.0) })
    }

    pub fn diagonal(values: &[f64]) -> Self {
        Self::from_fn(values.len(), |i, j| {
            if i == j {
                c64(values[i], 0.0)
            } else {
                c64(0.0, 0.0)
            }
        })
    }

    /// Projector `|ψ⟩⟨ψ|` (no normalization applied).
    pub fn outer(psi: &[C64]) -> Self {
        Self::from_fn(psi.len(), |i, j| psi[i] * psi[j].conj())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn rows(&self) -> impl Iterator<Item = &[C64]> {
        self.data.chunks(self.dim)
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)].conj())
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    pub fn scale(&self, factor: C64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|&z| z * factor).collect(),
        }
    }

    pub fn scale_real(&self, factor: f64) -> Self {
        self.scale(c64(factor, 0.0))
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Max-entry distance; infinite when the dimensions differ.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        if self.dim != other.dim {
            return f64::INFINITY;
        }
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// `max |M_ij − conj(M_ji)|`.
    pub fn hermitian_deviation(&self) -> f64 {
        let n = self.dim;
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermitian_deviation() <= tol
    }

    /// `max |(M†M − I)_ij|`.
    pub fn unitarity_deviation(&self) -> f64 {
        (&self.adjoint() * self).max_abs_diff(&Self::identity(self.dim))
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        check_dims(self, other)?;
        Ok(self * other)
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[C64]) -> Result<Vec<C64>> {
        if v.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: v.len(),
            });
        }
        Ok(self
            .rows()
            .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
            .collect())
    }

    /// `Tr(self · other)` without forming the product.
    pub fn trace_product(&self, other: &Self) -> Result<C64> {
        check_dims(self, other)?;
        let n = self.dim;
        let mut acc = c64(0.0, 0.0);
        for i in 0..n {
            for k in 0..n {
                acc += self[(i, k)] * other[(k, i)];
            }
        }
        Ok(acc)
    }
}

fn check_dims(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<()> {
    if a.dim != b.dim {
        return Err(Error::DimensionMismatch {
            expected: a.dim,
            found: b.dim,
        });
    }
    Ok(())
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.dim + j]
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    /// Panics on dimension mismatch; use [`ComplexMatrix::try_mul`] for a checked product.
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix dimension mismatch");
        let n = self.dim;
        let mut out = vec![c64(0.0, 0.0); n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                for j in 0..n {
                    out[i * n + j] += a * rhs.data[k * n + j];
                }
            }
        }
        ComplexMatrix { dim: n, data: out }
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix dimension mismatch");
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix dimension mismatch");
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

/// `AB − BA`.
pub fn commutator(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    check_dims(a, b)?;
    Ok(&(a * b) - &(b * a))
}

/// Pauli matrices.
pub mod pauli {
    use super::{c64, ComplexMatrix};
    use alloc::vec;

    pub fn identity() -> ComplexMatrix {
        ComplexMatrix::identity(2)
    }

    pub fn x() -> ComplexMatrix {
        let z = c64(0.0, 0.0);
        let o = c64(1.0, 0.0);
        ComplexMatrix::new(2, vec![z, o, o, z]).unwrap()
    }

    pub fn y() -> ComplexMatrix {
        let z = c64(0.0, 0.0);
        ComplexMatrix::new(2, vec![z, c64(0.0, -1.0), c64(0.0, 1.0), z]).unwrap()
    }

    pub fn z() -> ComplexMatrix {
        ComplexMatrix::diagonal(&[1.0, -1.0])
    }
}

/// Eigendecomposition `H = V diag(λ) V†` with ascending eigenvalues.
#[derive(Clone, Debug)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    /// Columns are the eigenvectors.
    pub vectors: ComplexMatrix,
}

impl HermitianEigen {
    pub fn reconstruct(&self) -> ComplexMatrix {
        spectral_sum(&self.vectors, &self.values)
    }
}

/// `V diag(d) V†`.
pub(crate) fn spectral_sum(vectors: &ComplexMatrix, diag: &[f64]) -> ComplexMatrix {
    let n = vectors.dim;
    ComplexMatrix::from_fn(n, |i, j| {
        let mut acc = c64(0.0, 0.0);
        for (k, &d) in diag.iter().enumerate() {
            if d != 0.0 {
                acc += vectors[(i, k)] * vectors[(j, k)].conj() * d;
            }
        }
        acc
    })
}

/// Hermitian eigendecomposition by cyclic complex Jacobi rotations.
///
/// Eigenvalues are ascending. Each eigenvector is phase-fixed so its first
/// significant entry is real and positive; eigenvalues that tie within 1e-12
/// are ordered by their eigenvectors, lexicographically largest first, so a
/// degenerate diagonal input keeps the standard basis order.
pub fn eig_hermitian(h: &ComplexMatrix) -> Result<HermitianEigen> {
    let deviation = h.hermitian_deviation();
    if deviation > HERMITIAN_TOL {
        return Err(Error::NotHermitian { deviation });
    }
    let n = h.dim;
    // Work on the exactly Hermitian part.
    let mut a: Vec<C64> = (0..n * n)
        .map(|idx| {
            let (i, j) = (idx / n, idx % n);
            (h.data[i * n + j] + h.data[j * n + i].conj()) * 0.5
        })
        .collect();
    for i in 0..n {
        a[i * n + i].im = 0.0;
    }
    let mut v = ComplexMatrix::identity(n).data;

    let frob = a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let mut converged = frob == 0.0 || n == 1;
    let mut sweep = 0;
    while !converged {
        if sweep == JACOBI_MAX_SWEEPS {
            return Err(Error::ConvergenceFailure { sweeps: sweep });
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, n, p, q, sweep);
            }
        }
        sweep += 1;
        let off: f64 = (0..n)
            .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
            .map(|(i, j)| a[i * n + j].norm_sqr())
            .sum::<f64>()
            .sqrt();
        converged = off <= JACOBI_REL_TOL * frob;
    }

    let values: Vec<f64> = (0..n).map(|i| a[i * n + i].re).collect();
    let vectors = ComplexMatrix { dim: n, data: v };
    Ok(sort_eigenpairs(values, vectors))
}

fn rotate(a: &mut [C64], v: &mut [C64], n: usize, p: usize, q: usize, sweep: usize) {
    let apq = a[p * n + q];
    let mag = apq.norm();
    if mag == 0.0 {
        return;
    }
    let app = a[p * n + p].re;
    let aqq = a[q * n + q].re;
    // Entries negligible against both diagonal elements are dropped once the
    // first sweeps have done the bulk of the work.
    let g = 100.0 * mag;
    if sweep > 3 && app.abs() + g == app.abs() && aqq.abs() + g == aqq.abs() {
        a[p * n + q] = c64(0.0, 0.0);
        a[q * n + p] = c64(0.0, 0.0);
        return;
    }
    let phase = apq / mag;
    let tau = (aqq - app) / (2.0 * mag);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    // G = [[c, s], [-s e^{-iφ}, c e^{-iφ}]] on the (p, q) block; A ← G† A G.
    let ph_c = phase.conj();
    for k in 0..n {
        let akp = a[k * n + p];
        let akq = a[k * n + q];
        a[k * n + p] = akp * c - akq * ph_c * s;
        a[k * n + q] = akp * s + akq * ph_c * c;
        let vkp = v[k * n + p];
        let vkq = v[k * n + q];
        v[k * n + p] = vkp * c - vkq * ph_c * s;
        v[k * n + q] = vkp * s + vkq * ph_c * c;
    }
    for k in 0..n {
        let apk = a[p * n + k];
        let aqk = a[q * n + k];
        a[p * n + k] = apk * c - aqk * phase * s;
        a[q * n + k] = apk * s + aqk * phase * c;
    }
    a[p * n + q] = c64(0.0, 0.0);
    a[q * n + p] = c64(0.0, 0.0);
    a[p * n + p].im = 0.0;
    a[q * n + q].im = 0.0;
}

fn sort_eigenpairs(values: Vec<f64>, vectors: ComplexMatrix) -> HermitianEigen {
    let n = values.len();
    let columns: Vec<Vec<C64>> = (0..n)
        .map(|k| {
            let mut col: Vec<C64> = (0..n).map(|i| vectors[(i, k)]).collect();
            if let Some(lead) = col.iter().find(|z| z.norm() > 1e-8).copied() {
                let fix = lead.conj() / lead.norm();
                for z in &mut col {
                    *z *= fix;
                }
            }
            col
        })
        .collect();

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| values[i].total_cmp(&values[j]));
    let scale = values.iter().fold(1.0f64, |m, x| m.max(x.abs()));
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && values[order[end]] - values[order[end - 1]] <= EIGEN_TIE_TOL * scale {
            end += 1;
        }
        order[start..end].sort_by(|&i, &j| lex_cmp(&columns[j], &columns[i]));
        start = end;
    }

    let sorted_values = order.iter().map(|&k| values[k]).collect();
    let sorted = ComplexMatrix::from_fn(n, |i, k| columns[order[k]][i]);
    HermitianEigen {
        values: sorted_values,
        vectors: sorted,
    }
}

fn lex_cmp(a: &[C64], b: &[C64]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im)) {
            Ordering::Equal => continue,
            other => return other,
        }
    }
    Ordering::Equal
}

/// A Hermitian matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Observable {
    matrix: ComplexMatrix,
}

impl Observable {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        let deviation = matrix.hermitian_deviation();
        if deviation > HERMITIAN_TOL {
            return Err(Error::NotHermitian { deviation });
        }
        Ok(Self { matrix })
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim
    }

    /// `self + sign · other`, used for the combined observables of the sum bounds.
    pub fn combine(&self, other: &Observable, sign: f64) -> Result<Observable> {
        check_dims(&self.matrix, &other.matrix)?;
        Ok(Observable {
            matrix: &self.matrix + &other.matrix.scale_real(sign),
        })
    }
}

impl From<Observable> for ComplexMatrix {
    fn from(obs: Observable) -> Self {
        obs.matrix
    }
}

/// A validated quantum state together with its spectral decomposition.
#[derive(Clone, Debug)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
    eigenvalues: Vec<f64>,
    eigenvectors: ComplexMatrix,
}

impl DensityMatrix {
    /// Checks Hermiticity, unit trace and positivity. Eigenvalues within
    /// [`PSD_TOL`] of zero become exactly zero, the spectrum is clamped to
    /// `[0, 1]` and renormalized to sum to one.
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        let deviation = matrix.hermitian_deviation();
        if deviation > HERMITIAN_TOL {
            return Err(Error::NotHermitian { deviation });
        }
        let trace = matrix.trace();
        if (trace.re - 1.0).abs() > HERMITIAN_TOL || trace.im.abs() > HERMITIAN_TOL {
            return Err(Error::InvalidTrace { trace: trace.re });
        }
        let eig = eig_hermitian(&matrix)?;
        let min = eig.values.iter().copied().fold(f64::INFINITY, f64::min);
        if min < -PSD_TOL {
            return Err(Error::NotPositive {
                min_eigenvalue: min,
            });
        }
        let mut eigenvalues: Vec<f64> = eig
            .values
            .iter()
            .map(|&l| if l.abs() < PSD_TOL { 0.0 } else { l.clamp(0.0, 1.0) })
            .collect();
        let total: f64 = eigenvalues.iter().sum();
        for l in &mut eigenvalues {
            *l /= total;
        }
        let unitarity = eig.vectors.unitarity_deviation();
        if unitarity > HERMITIAN_TOL {
            return Err(Error::Inconsistent(format!(
                "eigenvector matrix not unitary (deviation {unitarity:e})"
            )));
        }
        Ok(Self {
            matrix,
            eigenvalues,
            eigenvectors: eig.vectors,
        })
    }

    /// Pure state `|ψ⟩⟨ψ|`. Amplitudes within 1e-6 of unit norm are
    /// renormalized; anything further off is rejected.
    pub fn from_pure(amplitudes: &[C64]) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::Domain("empty state vector".into()));
        }
        let norm = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if !norm.is_finite() || (norm - 1.0).abs() > 1e-6 {
            return Err(Error::Unnormalized { norm });
        }
        let psi: Vec<C64> = amplitudes.iter().map(|z| z / norm).collect();
        Self::new(ComplexMatrix::outer(&psi))
    }

    /// Qubit state `(I + r·σ)/2`.
    pub fn from_bloch(r: [f64; 3]) -> Result<Self> {
        let norm = (r[0] * r[0] + r[1] * r[1] + r[2] * r[2]).sqrt();
        if !norm.is_finite() || norm > 1.0 + 1e-12 {
            return Err(Error::OutsideBlochBall { norm });
        }
        let m = &(&(&pauli::identity() + &pauli::x().scale_real(r[0]))
            + &pauli::y().scale_real(r[1]))
            + &pauli::z().scale_real(r[2]);
        Self::new(m.scale_real(0.5))
    }

    pub fn maximally_mixed(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Domain("dimension must be at least 1".into()));
        }
        Self::new(ComplexMatrix::identity(dim).scale_real(1.0 / dim as f64))
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    /// Ascending, clamped to `[0, 1]`, summing to one.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn eigenvectors(&self) -> &ComplexMatrix {
        &self.eigenvectors
    }

    /// `V† X V`: `X` expressed in the eigenbasis of the state.
    pub fn to_eigenbasis(&self, x: &ComplexMatrix) -> Result<ComplexMatrix> {
        check_dims(&self.matrix, x)?;
        Ok(&(&self.eigenvectors.adjoint() * x) * &self.eigenvectors)
    }

    pub fn rank(&self) -> usize {
        self.eigenvalues.iter().filter(|&&l| l > 0.0).count()
    }
}

/// `P^s = V diag(λ^s) V†` for `s ∈ (0, 1]`, with `0^s = 0`.
pub fn matrix_power(state: &DensityMatrix, s: f64) -> Result<ComplexMatrix> {
    if !(s > 0.0 && s <= 1.0) {
        return Err(Error::Domain(format!("exponent {s} outside (0, 1]")));
    }
    let powered: Vec<f64> = state
        .eigenvalues
        .iter()
        .map(|&l| if l == 0.0 { 0.0 } else { l.powf(s) })
        .collect();
    Ok(spectral_sum(&state.eigenvectors, &powered))
}
