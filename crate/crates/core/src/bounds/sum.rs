//! Sum-form lower bounds on `Σ_i I(A_i)`.

use alloc::vec::Vec;
use core::cmp::Ordering;


// Inherent float methods are std-only; in a no_std build they come from here.
#[allow(unused_imports)]
use num_traits::Float;
use super::permute::{checked_pow, factorial, random_permutation, resolve, sampler, ties, Permutation, Strategy};
use crate::linalg::{DensityMatrix, Observable};
use crate::metrics::MetricSpec;
use crate::skewinfo::skew_information;
use crate::{Error, Result};

fn check_ensemble(len: usize) -> Result<()> {
    if len < 2 {
        return Err(Error::Domain(alloc::format!(
            "sum bounds need at least two observables, got {len}"
        )));
    }
    Ok(())
}

/// `(1/(2N−2)) [ Σ_{i<j} ‖X_i + X_j‖² + (2/(N(N−1))) (Σ_{i<j} ‖X_i − X_j‖)² ]`
/// for already-permuted vectors.
pub fn theorem3_value(vectors: &[&[f64]]) -> Result<f64> {
    check_ensemble(vectors.len())?;
    let len = vectors[0].len();
    if let Some(bad) = vectors.iter().find(|v| v.len() != len) {
        return Err(Error::LengthMismatch {
            expected: len,
            found: bad.len(),
        });
    }
    let n = vectors.len() as f64;
    let mut plus = 0.0;
    let mut minus = 0.0;
    for (i, a) in vectors.iter().enumerate() {
        for b in &vectors[i + 1..] {
            let mut p2 = 0.0;
            let mut m2 = 0.0;
            for (u, v) in a.iter().zip(b.iter()) {
                p2 += (u + v) * (u + v);
                m2 += (u - v) * (u - v);
            }
            plus += p2;
            minus += m2.sqrt();
        }
    }
    Ok((plus + 2.0 / (n * (n - 1.0)) * minus * minus) / (2.0 * n - 2.0))
}

/// Best permutation-tuple value of [`theorem3_value`].
#[derive(Clone, Debug, PartialEq)]
pub struct Theorem3Bound {
    pub value: f64,
    /// One permutation per observable, applied to its modulus vector.
    pub witness: Vec<Permutation>,
    /// Every evaluated candidate value, in evaluation order.
    pub candidates: Vec<f64>,
    pub exhaustive: bool,
}

/// Maximizes [`theorem3_value`] over tuples `(π_1, …, π_N)` of component
/// permutations. Exhaustive search costs `(n!)^(N−1)` evaluations. Sampled search always tries the identity tuple, the all-ascending
/// tuple, and the tuple with the first vector ascending and the rest descending.
pub fn sum_bound_theorem3(moduli: &[&[f64]], strategy: Strategy) -> Result<Theorem3Bound> {
    check_ensemble(moduli.len())?;
    let len = moduli[0].len();
    let count = moduli.len();
    // Relabeling every vector by the same permutation leaves each norm alone, so
    // exhaustive search can pin π_1 to the identity without changing the maximum.
    // The pinned tuple is also the lexicographically smallest in its class, so
    // tie-breaking is unaffected.
    let evaluations = checked_pow(factorial(len), count - 1);
    let plan = resolve(strategy, evaluations)?;

    let mut best: Option<(f64, Vec<Permutation>)> = None;
    let mut candidates = Vec::new();
    let mut evaluate = |tuple: &[Permutation]| -> Result<()> {
        let permuted: Vec<Vec<f64>> = tuple.iter().zip(moduli).map(|(p, v)| p.apply(v)).collect();
        let refs: Vec<&[f64]> = permuted.iter().map(Vec::as_slice).collect();
        let value = theorem3_value(&refs)?;
        candidates.push(value);
        let better = match &best {
            None => true,
            Some((v, w)) if ties(value, *v) => tuple.cmp(w.as_slice()) == Ordering::Less,
            Some((v, _)) => value > *v,
        };
        if better {
            best = Some((value, tuple.to_vec()));
        }
        Ok(())
    };

    match plan {
        None => {
            let mut tuple: Vec<Permutation> = (0..count).map(|_| Permutation::identity(len)).collect();
            'outer: loop {
                evaluate(&tuple)?;
                // Odometer over the tuple, last slot fastest, so the order is lexicographic.
                for slot in (1..count).rev() {
                    if tuple[slot].advance() {
                        continue 'outer;
                    }
                    tuple[slot] = Permutation::identity(len);
                }
                break;
            }
        }
        Some((samples, seed)) => {
            let identity: Vec<Permutation> = (0..count).map(|_| Permutation::identity(len)).collect();
            let ascending: Vec<Permutation> = moduli.iter().map(|v| Permutation::sorting(v)).collect();
            let mixed: Vec<Permutation> = moduli
                .iter()
                .enumerate()
                .map(|(i, v)| {
                    if i == 0 {
                        Permutation::sorting(v)
                    } else {
                        Permutation::sorting_descending(v)
                    }
                })
                .collect();
            for tuple in [&identity, &ascending, &mixed] {
                evaluate(tuple)?;
            }
            let mut rng = sampler(seed);
            for _ in 0..samples {
                let tuple: Vec<Permutation> = (0..count).map(|_| random_permutation(len, &mut rng)).collect();
                evaluate(&tuple)?;
            }
        }
    }
    let (value, witness) = best.ok_or_else(|| Error::Inconsistent("no candidates evaluated".into()))?;
    Ok(Theorem3Bound {
        value,
        witness,
        candidates,
        exhaustive: plan.is_none(),
    })
}

/// Norm-based baseline computed from skew informations of `A_i ± A_j`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NormBound {
    pub value: f64,
    /// The maximizing `x ∈ {0, 1}`; with `x = 0` the square-root terms use `A_i + A_j`.
    pub sign: u8,
}

/// `max_{x∈{0,1}} (1/(2N−2)) [ (2/(N(N−1))) (Σ_{i<j} √I(A_i + (−1)^x A_j))²
///  + Σ_{i<j} I(A_i + (−1)^{x+1} A_j) ]`.
pub fn sum_bound_norm(rho: &DensityMatrix, observables: &[Observable], metric: &MetricSpec) -> Result<NormBound> {
    check_ensemble(observables.len())?;
    let n = observables.len() as f64;
    let mut plus = Vec::new();
    let mut minus = Vec::new();
    for (i, a) in observables.iter().enumerate() {
        for b in &observables[i + 1..] {
            plus.push(skew_information(rho, &a.combine(b, 1.0)?, metric)?);
            minus.push(skew_information(rho, &a.combine(b, -1.0)?, metric)?);
        }
    }
    let value = |roots: &[f64], direct: &[f64]| {
        let s: f64 = roots.iter().map(|&v| v.sqrt()).sum();
        (2.0 / (n * (n - 1.0)) * s * s + direct.iter().sum::<f64>()) / (2.0 * n - 2.0)
    };
    let v0 = value(&plus, &minus);
    let v1 = value(&minus, &plus);
    Ok(if v1 > v0 {
        NormBound { value: v1, sign: 1 }
    } else {
        NormBound { value: v0, sign: 0 }
    })
}
