//! The `I_k` and `S_pq` refinements of the Cauchy–Schwarz product bound.
//!
//! Indices below are 1-based to match the usual statement of the chains; vectors
//! are ordinary 0-based slices.

use alloc::format;
use alloc::vec::Vec;

use crate::{Error, Result};

pub(crate) fn check_lengths(x: &[f64], y: &[f64]) -> Result<()> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch {
            expected: x.len(),
            found: y.len(),
        });
    }
    if x.is_empty() {
        return Err(Error::Domain("empty modulus vectors".into()));
    }
    Ok(())
}

/// `I_1, …, I_n` by direct summation:
///
/// `I_k = Σ_i x_i²y_i² + Σ_{i<j, j>k} (x_i²y_j² + x_j²y_i²) + Σ_{i<j≤k} 2 x_i y_i x_j y_j`.
pub fn chain_ik(x: &[f64], y: &[f64]) -> Result<Vec<f64>> {
    check_lengths(x, y)?;
    let n = x.len();
    let diag: f64 = x.iter().zip(y).map(|(a, b)| a * a * b * b).sum();
    let mut out = Vec::with_capacity(n);
    for k in 1..=n {
        let mut cross = 0.0;
        // j is 0-based here, so "j > k" in 1-based terms means j >= k.
        for j in k..n {
            for i in 0..j {
                cross += x[i] * x[i] * y[j] * y[j] + x[j] * x[j] * y[i] * y[i];
            }
        }
        let mut paired = 0.0;
        for j in 0..k {
            for i in 0..j {
                paired += 2.0 * x[i] * y[i] * x[j] * y[j];
            }
        }
        out.push(diag + cross + paired);
    }
    Ok(out)
}

/// One `S_pq` entry; `(1, 0)` is the head of the table.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpqEntry {
    pub p: usize,
    pub q: usize,
    pub value: f64,
}

/// `S_pq` for `p = 2…n`, `q = 1…p−1`, preceded by `S_10`, stored in the
/// descending order `S_10, S_21, S_31, S_32, S_41, …, S_n(n−1)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SpqTable {
    n: usize,
    entries: Vec<SpqEntry>,
}

impl SpqTable {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[SpqEntry] {
        &self.entries
    }

    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        self.entries.iter().map(|e| e.value)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Position of `(p, q)` in the chain order.
    pub fn position(n: usize, p: usize, q: usize) -> Option<usize> {
        if (p, q) == (1, 0) {
            return Some(0);
        }
        if p < 2 || p > n || q == 0 || q >= p {
            return None;
        }
        Some(1 + (p - 1) * (p - 2) / 2 + (q - 1))
    }

    pub fn get(&self, p: usize, q: usize) -> Option<f64> {
        Self::position(self.n, p, q).map(|i| self.entries[i].value)
    }
}

/// `S_pq = Σ_{i,j} x_i²y_j² − Σ_{j=2}^{p−1} Σ_{i<j} (x_j y_i − x_i y_j)² − Σ_{m=1}^{q} (x_p y_m − x_m y_p)²`.
pub fn table_spq(x: &[f64], y: &[f64]) -> Result<SpqTable> {
    check_lengths(x, y)?;
    let n = x.len();
    let total = x.iter().map(|a| a * a).sum::<f64>() * y.iter().map(|b| b * b).sum::<f64>();
    let mut entries = Vec::with_capacity(1 + n * (n - 1) / 2);
    entries.push(SpqEntry {
        p: 1,
        q: 0,
        value: total,
    });
    for p in 2..=n {
        let mut rows_before = 0.0;
        for j in 2..p {
            for i in 1..j {
                let d = x[j - 1] * y[i - 1] - x[i - 1] * y[j - 1];
                rows_before += d * d;
            }
        }
        for q in 1..p {
            let mut current = 0.0;
            for m in 1..=q {
                let d = x[p - 1] * y[m - 1] - x[m - 1] * y[p - 1];
                current += d * d;
            }
            entries.push(SpqEntry {
                p,
                q,
                value: total - rows_before - current,
            });
        }
    }
    Ok(SpqTable { n, entries })
}

/// Closed-form differences between neighbouring chain entries, used to
/// cross-check the direct sums.
pub mod identities {
    /// `I_{k+1} − I_k = −Σ_{i=1}^{k} (x_i y_{k+1} − x_{k+1} y_i)²` for `1 ≤ k < n`.
    pub fn ik_step(x: &[f64], y: &[f64], k: usize) -> f64 {
        let next = k; // 0-based position of entry k + 1
        -(0..k)
            .map(|i| {
                let d = x[i] * y[next] - x[next] * y[i];
                d * d
            })
            .sum::<f64>()
    }

    /// `S_21 − S_10 = −(x_2 y_1 − x_1 y_2)²`.
    pub fn s21_step(x: &[f64], y: &[f64]) -> f64 {
        let d = x[1] * y[0] - x[0] * y[1];
        -d * d
    }

    /// `S_pq − S_p(q−1) = −(x_p y_q − x_q y_p)²` for `2 ≤ q < p`.
    pub fn spq_step(x: &[f64], y: &[f64], p: usize, q: usize) -> f64 {
        let d = x[p - 1] * y[q - 1] - x[q - 1] * y[p - 1];
        -d * d
    }

    /// `S_p1 − S_(p−1)(p−2) = −(x_p y_1 − x_1 y_p)²` for `p ≥ 3`.
    pub fn row_step(x: &[f64], y: &[f64], p: usize) -> f64 {
        let d = x[p - 1] * y[0] - x[0] * y[p - 1];
        -d * d
    }

    /// `(2N−2) Σ‖X_i‖² − Σ_{i<j} ‖X_i + X_j‖² − Σ_{i<j} ‖X_i − X_j‖²`, zero by the
    /// parallelogram law.
    pub fn parallelogram_gap(vectors: &[&[f64]]) -> f64 {
        let n = vectors.len() as f64;
        let norms: f64 = vectors.iter().map(|v| v.iter().map(|x| x * x).sum::<f64>()).sum();
        let mut pairs = 0.0;
        for (i, a) in vectors.iter().enumerate() {
            for b in &vectors[i + 1..] {
                for (u, v) in a.iter().zip(b.iter()) {
                    pairs += (u + v) * (u + v) + (u - v) * (u - v);
                }
            }
        }
        (2.0 * n - 2.0) * norms - pairs
    }
}

/// Product-form bounds for one pair of observables.
#[derive(Clone, Debug)]
pub struct ProductChain {
    /// `I(A) · I(B)`.
    pub product: f64,
    /// `|Corr(A, B)|²`.
    pub cauchy: f64,
    pub ik: Vec<f64>,
    pub spq: SpqTable,
}

impl ProductChain {
    pub fn from_moduli(x: &[f64], y: &[f64], product: f64, cauchy: f64) -> Result<Self> {
        Ok(Self {
            product,
            cauchy,
            ik: chain_ik(x, y)?,
            spq: table_spq(x, y)?,
        })
    }

    /// Verifies the ordering relations, each with absolute slack `tol`.
    pub fn check(&self, tol: f64) -> Result<()> {
        let fail = |what: alloc::string::String| Err(Error::Inconsistent(what));
        let head = self.ik[0];
        if (head - self.product).abs() > tol {
            return fail(format!("I_1 = {head} differs from product {}", self.product));
        }
        let s10 = self.spq.entries[0].value;
        if (s10 - self.product).abs() > tol {
            return fail(format!("S_10 = {s10} differs from product {}", self.product));
        }
        for (k, w) in self.ik.windows(2).enumerate() {
            if w[1] > w[0] + tol {
                return fail(format!("I_{} = {} exceeds I_{} = {}", k + 2, w[1], k + 1, w[0]));
            }
        }
        let tail = *self.ik.last().unwrap_or(&head);
        if tail < self.cauchy - tol {
            return fail(format!("I_n = {tail} below |Corr|^2 = {}", self.cauchy));
        }
        for w in self.spq.entries.windows(2) {
            if w[1].value > w[0].value + tol {
                return fail(format!(
                    "S_{}{} = {} exceeds S_{}{} = {}",
                    w[1].p, w[1].q, w[1].value, w[0].p, w[0].q, w[0].value
                ));
            }
        }
        for p in 2..=self.spq.n {
            let s = self.spq.get(p, p - 1).unwrap_or(f64::NAN);
            if (s - self.ik[p - 1]).abs() > tol {
                return fail(format!("S_{p}({}) = {s} differs from I_{p} = {}", p - 1, self.ik[p - 1]));
            }
        }
        for v in self.ik.iter().copied().chain(self.spq.values()) {
            if v > self.product + tol || v < self.cauchy - tol || !v.is_finite() {
                return fail(format!(
                    "chain value {v} outside [{}, {}]",
                    self.cauchy, self.product
                ));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn single_component() {
        let x = [1.0, 0.0, 0.0, 0.0];
        assert_eq!(chain_ik(&x, &x).unwrap(), vec![1.0; 4]);
        assert!(table_spq(&x, &x).unwrap().values().all(|v| v == 1.0));
    }

    #[test]
    fn two_component_toy() {
        let x = [1.0, 1.0];
        let ik = chain_ik(&x, &x).unwrap();
        assert_eq!(ik, vec![4.0, 4.0]);
        assert_eq!(ik[1] - ik[0], identities::ik_step(&x, &x, 1));
    }

    #[test]
    fn endpoints() {
        let x = [0.3, 1.2, 0.0, 0.7];
        let y = [0.9, 0.1, 0.4, 0.5];
        let ik = chain_ik(&x, &y).unwrap();
        let nx: f64 = x.iter().map(|a| a * a).sum();
        let ny: f64 = y.iter().map(|a| a * a).sum();
        let dot: f64 = x.iter().zip(&y).map(|(a, b)| a * b).sum();
        assert!((ik[0] - nx * ny).abs() < 1e-14);
        assert!((ik[3] - dot * dot).abs() < 1e-14);
    }

    #[test]
    fn proportional_vectors_flat_table() {
        let x = [0.3, 1.2, 0.5, 0.7];
        let y: Vec<f64> = x.iter().map(|a| 2.0 * a).collect();
        let t = table_spq(&x, &y).unwrap();
        let head = t.get(1, 0).unwrap();
        assert!(t.values().all(|v| (v - head).abs() < 1e-13));
    }

    #[test]
    fn table_layout() {
        let t = table_spq(&[1.0; 4], &[1.0; 4]).unwrap();
        assert_eq!(t.len(), 7);
        let order: Vec<(usize, usize)> = t.entries().iter().map(|e| (e.p, e.q)).collect();
        assert_eq!(order, vec![(1, 0), (2, 1), (3, 1), (3, 2), (4, 1), (4, 2), (4, 3)]);
        assert_eq!(SpqTable::position(4, 4, 4), None);
        assert_eq!(SpqTable::position(4, 5, 1), None);
        assert_eq!(SpqTable::position(9, 9, 8), Some(36));
    }

    #[test]
    fn length_mismatch() {
        assert!(matches!(chain_ik(&[1.0], &[1.0, 2.0]), Err(Error::LengthMismatch { .. })));
        assert!(matches!(table_spq(&[1.0], &[1.0, 2.0]), Err(Error::LengthMismatch { .. })));
    }

    #[test]
    fn check_flags_broken_chain() {
        let x = [0.3, 1.2, 0.5];
        let y = [0.9, 0.1, 0.4];
        let nx: f64 = x.iter().map(|a| a * a).sum();
        let ny: f64 = y.iter().map(|a| a * a).sum();
        let good = ProductChain::from_moduli(&x, &y, nx * ny, 0.0).unwrap();
        good.check(1e-12).unwrap();
        let bad = ProductChain::from_moduli(&x, &y, nx * ny + 1.0, 0.0).unwrap();
        assert!(bad.check(1e-12).is_err());
        let bad = ProductChain::from_moduli(&x, &y, nx * ny, 10.0).unwrap();
        assert!(bad.check(1e-12).is_err());
    }
}
