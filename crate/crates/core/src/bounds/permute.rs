//! Permutation-maximized variants of the product chains.

use alloc::format;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::chain::{chain_ik, check_lengths, table_spq, SpqTable};
use crate::{Error, Result};

/// Upper limit on candidate evaluations for exhaustive search.
pub const SEARCH_CAP: u128 = 1_000_000;

/// Relative slack under which two candidate values count as tied.
pub(crate) const TIE_TOL: f64 = 1e-12;

/// A bijection on `{0, …, n−1}`; applied to a vector as `v'_i = v_{π(i)}`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn new(image: Vec<usize>) -> Result<Self> {
        let n = image.len();
        let mut seen = alloc::vec![false; n];
        for &i in &image {
            if i >= n || seen[i] {
                return Err(Error::Domain(format!("{image:?} is not a permutation")));
            }
            seen[i] = true;
        }
        Ok(Self(image))
    }

    pub fn identity(n: usize) -> Self {
        Self((0..n).collect())
    }

    /// Ordering that sorts `v` ascending (stable).
    pub fn sorting(v: &[f64]) -> Self {
        let mut idx: Vec<usize> = (0..v.len()).collect();
        idx.sort_by(|&a, &b| v[a].total_cmp(&v[b]));
        Self(idx)
    }

    /// Ordering that sorts `v` descending (stable).
    pub fn sorting_descending(v: &[f64]) -> Self {
        let mut idx: Vec<usize> = (0..v.len()).collect();
        idx.sort_by(|&a, &b| v[b].total_cmp(&v[a]));
        Self(idx)
    }

    pub fn image(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        self.0.iter().map(|&i| v[i]).collect()
    }

    /// Advances to the next permutation in lexicographic order; `false` after the last one.
    pub fn advance(&mut self) -> bool {
        let v = &mut self.0;
        let n = v.len();
        if n < 2 {
            return false;
        }
        let mut i = n - 1;
        while i > 0 && v[i - 1] >= v[i] {
            i -= 1;
        }
        if i == 0 {
            return false;
        }
        let mut j = n - 1;
        while v[j] <= v[i - 1] {
            j -= 1;
        }
        v.swap(i - 1, j);
        v[i..].reverse();
        true
    }

    fn shuffled(n: usize, rng: &mut ChaCha8Rng) -> Self {
        let mut v: Vec<usize> = (0..n).collect();
        v.shuffle(rng);
        Self(v)
    }
}

/// Shown 1-based, e.g. `(2 1 3 4)`.
impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (k, i) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{}", i + 1)?;
        }
        f.write_str(")")
    }
}

/// How the permutation maximum is taken.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    /// Every candidate; refused beyond [`SEARCH_CAP`] evaluations.
    Exhaustive,
    /// Deterministic candidates (identity and sorted orderings) plus `samples`
    /// seeded random ones. The result is a certified lower bound on the maximum.
    Sampled { samples: usize, seed: u64 },
    /// Exhaustive when within the cap, sampled otherwise.
    Auto { samples: usize, seed: u64 },
}

impl Default for Strategy {
    fn default() -> Self {
        Strategy::Auto {
            samples: 2000,
            seed: 0,
        }
    }
}

pub(crate) fn factorial(n: usize) -> u128 {
    (1..=n as u128).try_fold(1u128, |acc, k| acc.checked_mul(k)).unwrap_or(u128::MAX)
}

pub(crate) fn checked_pow(base: u128, exp: usize) -> u128 {
    (0..exp).try_fold(1u128, |acc, _| acc.checked_mul(base)).unwrap_or(u128::MAX)
}

/// Resolves `strategy` to `Some(sampler)` or `None` for exhaustive enumeration.
pub(crate) fn resolve(strategy: Strategy, evaluations: u128) -> Result<Option<(usize, u64)>> {
    match strategy {
        Strategy::Exhaustive if evaluations > SEARCH_CAP => Err(Error::ComplexityRefusal {
            evaluations,
            cap: SEARCH_CAP,
        }),
        Strategy::Exhaustive => Ok(None),
        Strategy::Sampled { samples, seed } => Ok(Some((samples, seed))),
        Strategy::Auto { samples, seed } => Ok(if evaluations <= SEARCH_CAP {
            None
        } else {
            Some((samples, seed))
        }),
    }
}

pub(crate) fn sampler(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub(crate) fn random_permutation(n: usize, rng: &mut ChaCha8Rng) -> Permutation {
    Permutation::shuffled(n, rng)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChainKind {
    Ik,
    Spq,
}

/// Position in a chain, 1-based: `I(k)` or `S(p, q)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChainIndex {
    I(usize),
    S(usize, usize),
}

impl fmt::Display for ChainIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ChainIndex::I(k) => write!(f, "I_{k}"),
            ChainIndex::S(p, q) => write!(f, "S_{p}_{q}"),
        }
    }
}

/// Best value found for a chain entry with its witnessing pair `(π_A, π_B)`.
#[derive(Clone, Debug, PartialEq)]
pub struct PermutedBound {
    pub value: f64,
    pub witness: (Permutation, Permutation),
    pub index: ChainIndex,
}

/// Per-entry maxima over the evaluated permutation pairs.
#[derive(Clone, Debug)]
pub struct PermutationSearch {
    /// One entry per `k = 1…n`.
    pub ik: Vec<PermutedBound>,
    /// One entry per `S_pq`, in chain order.
    pub spq: Vec<PermutedBound>,
    pub evaluated: usize,
    pub exhaustive: bool,
}

pub(crate) fn ties(a: f64, b: f64) -> bool {
    if !(a.is_finite() && b.is_finite()) {
        return false;
    }
    (a - b).abs() <= TIE_TOL * a.abs().max(b.abs()).max(1.0)
}

fn offer(slot: &mut PermutedBound, value: f64, witness: &(Permutation, Permutation)) {
    let better = if ties(value, slot.value) {
        witness.cmp(&slot.witness) == Ordering::Less
    } else {
        value > slot.value
    };
    if better {
        slot.value = value;
        slot.witness = witness.clone();
    }
}

/// Maximizes every `I_k` and `S_pq` over permutation pairs `(π_A, π_B)`.
///
/// Ties (relative 1e-12) go to the lexicographically smallest witness, so the
/// result does not depend on candidate order.
pub fn permutation_search(x: &[f64], y: &[f64], strategy: Strategy) -> Result<PermutationSearch> {
    check_lengths(x, y)?;
    let n = x.len();
    let evaluations = checked_pow(factorial(n), 2);
    let plan = resolve(strategy, evaluations)?;

    let init = {
        let id = (Permutation::identity(n), Permutation::identity(n));
        let ik = (1..=n)
            .map(|k| PermutedBound {
                value: f64::NEG_INFINITY,
                witness: id.clone(),
                index: ChainIndex::I(k),
            })
            .collect();
        let layout = table_spq(x, y)?;
        let spq = layout
            .entries()
            .iter()
            .map(|e| PermutedBound {
                value: f64::NEG_INFINITY,
                witness: id.clone(),
                index: ChainIndex::S(e.p, e.q),
            })
            .collect();
        PermutationSearch {
            ik,
            spq,
            evaluated: 0,
            exhaustive: plan.is_none(),
        }
    };
    let mut search = init;

    let evaluate = |search: &mut PermutationSearch, pa: &Permutation, pb: &Permutation| -> Result<()> {
        let xp = pa.apply(x);
        let yp = pb.apply(y);
        let ik = chain_ik(&xp, &yp)?;
        let spq: SpqTable = table_spq(&xp, &yp)?;
        let witness = (pa.clone(), pb.clone());
        for (slot, v) in search.ik.iter_mut().zip(ik) {
            offer(slot, v, &witness);
        }
        for (slot, e) in search.spq.iter_mut().zip(spq.entries()) {
            offer(slot, e.value, &witness);
        }
        search.evaluated += 1;
        Ok(())
    };

    match plan {
        None => {
            let mut pa = Permutation::identity(n);
            loop {
                let mut pb = Permutation::identity(n);
                loop {
                    evaluate(&mut search, &pa, &pb)?;
                    if !pb.advance() {
                        break;
                    }
                }
                if !pa.advance() {
                    break;
                }
            }
        }
        Some((samples, seed)) => {
            let asc_x = Permutation::sorting(x);
            let fixed = [
                (Permutation::identity(n), Permutation::identity(n)),
                (asc_x.clone(), Permutation::sorting(y)),
                (asc_x, Permutation::sorting_descending(y)),
            ];
            for (pa, pb) in &fixed {
                evaluate(&mut search, pa, pb)?;
            }
            let mut rng = sampler(seed);
            for _ in 0..samples {
                let pa = random_permutation(n, &mut rng);
                let pb = random_permutation(n, &mut rng);
                evaluate(&mut search, &pa, &pb)?;
            }
        }
    }
    Ok(search)
}

impl PermutationSearch {
    /// Largest entry of one chain. Among (near-)equal values the deepest
    /// chain position wins, since it is the most refined statement.
    pub fn best(&self, which: ChainKind) -> &PermutedBound {
        let list = match which {
            ChainKind::Ik => &self.ik,
            ChainKind::Spq => &self.spq,
        };
        let mut best = &list[0];
        for cand in &list[1..] {
            if ties(cand.value, best.value) || cand.value > best.value {
                best = cand;
            }
        }
        best
    }
}

/// Maximum over permutation pairs and chain positions of the permuted `I_k`
/// (or `S_pq`), with the witnessing pair and position.
pub fn best_permuted_product_bound(
    x: &[f64],
    y: &[f64],
    which: ChainKind,
    strategy: Strategy,
) -> Result<PermutedBound> {
    Ok(permutation_search(x, y, strategy)?.best(which).clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn lexicographic_enumeration() {
        let mut p = Permutation::identity(3);
        let mut seen = vec![p.clone()];
        while p.advance() {
            seen.push(p.clone());
        }
        assert_eq!(seen.len(), 6);
        assert!(seen.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(seen[5].image(), &[2, 1, 0]);
    }

    #[test]
    fn permutation_validation() {
        assert!(Permutation::new(vec![0, 0, 1]).is_err());
        assert!(Permutation::new(vec![0, 3, 1]).is_err());
        let p = Permutation::new(vec![2, 0, 1]).unwrap();
        assert_eq!(p.apply(&[10.0, 20.0, 30.0]), vec![30.0, 10.0, 20.0]);
        assert_eq!(alloc::format!("{p}"), "(3 1 2)");
    }

    #[test]
    fn two_element_brute_force() {
        // Enumerate S(2) × S(2) by hand: I_2 = (Σ x_{πA(i)} y_{πB(i)})².
        let x = [1.0, 2.0];
        let y = [2.0, 1.0];
        let mut manual = f64::NEG_INFINITY;
        for pa in [[0usize, 1], [1, 0]] {
            for pb in [[0usize, 1], [1, 0]] {
                let s: f64 = (0..2).map(|i| x[pa[i]] * y[pb[i]]).sum();
                manual = manual.max(s * s);
            }
        }
        assert_eq!(manual, 25.0);
        let search = permutation_search(&x, &y, Strategy::Exhaustive).unwrap();
        assert_eq!(search.evaluated, 4);
        assert_eq!(search.ik[1].value, 25.0);
        let pair = &search.ik[1].witness;
        let xs = pair.0.apply(&x);
        let ys = pair.1.apply(&y);
        // witness aligns large with large
        assert_eq!((xs[0] - xs[1]).signum(), (ys[0] - ys[1]).signum());
    }

    #[test]
    fn equal_vectors_saturate_at_tail() {
        let x = [0.5, 0.2, 0.9, 0.1];
        let best = best_permuted_product_bound(&x, &x, ChainKind::Ik, Strategy::Exhaustive).unwrap();
        let norm: f64 = x.iter().map(|a| a * a).sum();
        assert!((best.value - norm * norm).abs() < 1e-12);
        assert_eq!(best.index, ChainIndex::I(4));
        assert_eq!(best.witness.0, best.witness.1);
    }

    #[test]
    fn identity_pair_reproduces_chain() {
        let x = [0.5, 0.2, 0.9, 0.1];
        let y = [0.3, 0.8, 0.1, 0.4];
        let direct = chain_ik(&x, &y).unwrap();
        let id = Permutation::identity(4);
        assert_eq!(chain_ik(&id.apply(&x), &id.apply(&y)).unwrap(), direct);
        let search = permutation_search(&x, &y, Strategy::Exhaustive).unwrap();
        for (slot, d) in search.ik.iter().zip(&direct) {
            assert!(slot.value >= *d - 1e-15);
        }
    }

    #[test]
    fn refusal_and_auto() {
        let x = vec![0.1; 9];
        assert!(matches!(
            permutation_search(&x, &x, Strategy::Exhaustive),
            Err(Error::ComplexityRefusal { .. })
        ));
        let s = permutation_search(&x, &x, Strategy::Auto { samples: 5, seed: 1 }).unwrap();
        assert!(!s.exhaustive);
        assert_eq!(s.evaluated, 8);
        let x4 = vec![0.1; 4];
        let s = permutation_search(&x4, &x4, Strategy::Auto { samples: 5, seed: 1 }).unwrap();
        assert!(s.exhaustive);
        assert_eq!(s.evaluated, 576);
    }

    #[test]
    fn sampled_is_seed_deterministic() {
        let x = [0.5, 0.2, 0.9, 0.1, 0.4, 0.3, 0.7, 0.6, 0.05];
        let y = [0.3, 0.8, 0.1, 0.4, 0.2, 0.9, 0.5, 0.6, 0.7];
        let s = Strategy::Sampled { samples: 200, seed: 42 };
        let a = permutation_search(&x, &y, s).unwrap();
        let b = permutation_search(&x, &y, s).unwrap();
        assert_eq!(a.ik, b.ik);
        assert_eq!(a.spq, b.spq);
    }
}
