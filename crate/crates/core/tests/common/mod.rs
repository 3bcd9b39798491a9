#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use skewbound_core::linalg::eig_hermitian;
use skewbound_core::{ComplexMatrix, DensityMatrix, MetricSpec, Observable, C64};

pub fn rng(seed: u64) -> ChaCha8Rng {
    rand::SeedableRng::seed_from_u64(seed)
}

pub fn random_matrix(rng: &mut ChaCha8Rng, d: usize) -> ComplexMatrix {
    let data = (0..d * d)
        .map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    ComplexMatrix::new(d, data).unwrap()
}

pub fn random_hermitian(rng: &mut ChaCha8Rng, d: usize) -> ComplexMatrix {
    let g = random_matrix(rng, d);
    (&g + &g.adjoint()).scale_real(0.5)
}

pub fn random_observable(rng: &mut ChaCha8Rng, d: usize) -> Observable {
    Observable::new(random_hermitian(rng, d)).unwrap()
}

/// `G G† / Tr` with `G` of shape `d × rank`, so rank-deficient states show up too.
pub fn random_state_of_rank(rng: &mut ChaCha8Rng, d: usize, rank: usize) -> DensityMatrix {
    let g = random_matrix(rng, d);
    let mut cols = vec![C64::new(0.0, 0.0); d * d];
    for i in 0..d {
        for k in 0..rank {
            cols[i * d + k] = g[(i, k)];
        }
    }
    let g = ComplexMatrix::new(d, cols).unwrap();
    let p = &g * &g.adjoint();
    let t = p.trace().re;
    let rho = p.scale_real(1.0 / t);
    DensityMatrix::new((&rho + &rho.adjoint()).scale_real(0.5)).unwrap()
}

pub fn random_state(rng: &mut ChaCha8Rng, d: usize) -> DensityMatrix {
    let rank = rng.gen_range(1..=d);
    random_state_of_rank(rng, d, rank)
}

pub fn random_unitary(rng: &mut ChaCha8Rng, n: usize) -> ComplexMatrix {
    eig_hermitian(&random_hermitian(rng, n)).unwrap().vectors
}

pub fn random_metric(rng: &mut ChaCha8Rng) -> MetricSpec {
    match rng.gen_range(0..3) {
        0 => MetricSpec::wy(),
        1 => MetricSpec::sld(),
        _ => MetricSpec::wyd(rng.gen_range(0.05..0.95)).unwrap(),
    }
}

pub fn random_vector(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.gen_range(0.0..1.0)).collect()
}
