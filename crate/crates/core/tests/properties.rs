mod common;

use common::*;
use proptest::prelude::*;
use rand::Rng;
use skewbound_core::bounds::chain::identities;
use skewbound_core::bounds::{
    chain_ik, evaluate_product, evaluate_sum, permutation_search, sum_bound_theorem3, table_spq, Permutation,
    ProductChain, Strategy,
};
use skewbound_core::linalg::{commutator, eig_hermitian, matrix_power};
use skewbound_core::loo::{expand, gram_matrix, loo_basis, modulus_vector, Gauge};
use skewbound_core::skewinfo::{correlation, skew_information, wyd_direct};
use skewbound_core::{ComplexMatrix, DensityMatrix, MetricSpec, Observable};

fn cfg(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        ..ProptestConfig::default()
    }
}

proptest! {
    #![proptest_config(cfg(64))]

    #[test]
    fn eigendecomposition_reconstructs(seed: u64, d in 1usize..=6) {
        let mut r = rng(seed);
        let h = random_hermitian(&mut r, d);
        let eig = eig_hermitian(&h).unwrap();
        prop_assert!(eig.reconstruct().max_abs_diff(&h) <= 1e-10);
        prop_assert!(eig.vectors.unitarity_deviation() <= 1e-10);
        prop_assert!(eig.values.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn complementary_powers_recompose(seed: u64, d in 2usize..=4, alpha in 0.05f64..0.95) {
        let mut r = rng(seed);
        // full rank with every eigenvalue at least 0.05
        let base = random_state_of_rank(&mut r, d, d);
        let mixed = &base.matrix().scale_real(1.0 - 0.05 * d as f64)
            + &ComplexMatrix::identity(d).scale_real(0.05);
        let rho = DensityMatrix::new(mixed).unwrap();
        let prod = &matrix_power(&rho, alpha).unwrap() * &matrix_power(&rho, 1.0 - alpha).unwrap();
        prop_assert!(prod.max_abs_diff(rho.matrix()) <= 1e-10);
    }

    #[test]
    fn commutator_of_hermitians_is_anti_hermitian(seed: u64, d in 2usize..=5) {
        let mut r = rng(seed);
        let c = commutator(&random_hermitian(&mut r, d), &random_hermitian(&mut r, d)).unwrap();
        prop_assert!((&c.adjoint() + &c).max_abs() <= 1e-12);
    }

    #[test]
    fn shift_invariance(seed: u64, d in 2usize..=4, shift in -3.0f64..3.0) {
        let mut r = rng(seed);
        let rho = random_state(&mut r, d);
        let a = random_observable(&mut r, d);
        let m = random_metric(&mut r);
        let shifted = Observable::new(a.matrix() + &ComplexMatrix::identity(d).scale_real(shift)).unwrap();
        let i0 = skew_information(&rho, &a, &m).unwrap();
        let i1 = skew_information(&rho, &shifted, &m).unwrap();
        prop_assert!((i0 - i1).abs() <= 1e-12 * i0.max(1.0));
    }

    #[test]
    fn pure_states_ignore_alpha(seed: u64, d in 2usize..=4) {
        let mut r = rng(seed);
        let rho = random_state_of_rank(&mut r, d, 1);
        let a = random_observable(&mut r, d);
        let reference = skew_information(&rho, &a, &MetricSpec::wy()).unwrap();
        for alpha in [0.1, 0.25, 0.6, 0.9] {
            let v = skew_information(&rho, &a, &MetricSpec::wyd(alpha).unwrap()).unwrap();
            prop_assert!((v - reference).abs() <= 1e-10);
        }
    }

    #[test]
    fn sesquilinearity(seed: u64, d in 2usize..=4, s in -2.0f64..2.0) {
        let mut r = rng(seed);
        let rho = random_state(&mut r, d);
        let (a1, a2, b) = (random_observable(&mut r, d), random_observable(&mut r, d), random_observable(&mut r, d));
        let m = random_metric(&mut r);
        let combo = Observable::new(&a1.matrix().scale_real(s) + a2.matrix()).unwrap();
        let lhs = correlation(&rho, &combo, &b, &m).unwrap();
        let rhs = correlation(&rho, &a1, &b, &m).unwrap() * s + correlation(&rho, &a2, &b, &m).unwrap();
        prop_assert!((lhs - rhs).norm() <= 1e-12 * rhs.norm().max(1.0));
        let ba = correlation(&rho, &b, &a1, &m).unwrap();
        prop_assert!((ba - correlation(&rho, &a1, &b, &m).unwrap().conj()).norm() <= 1e-12);
    }

    #[test]
    fn completeness(seed: u64, d in 2usize..=5) {
        let mut r = rng(seed);
        let a = random_observable(&mut r, d);
        let basis = loo_basis(d).unwrap();
        let back = basis.combine(&expand(&a, &basis).unwrap()).unwrap();
        prop_assert!(back.max_abs_diff(a.matrix()) <= 1e-10);
    }

    #[test]
    fn quadratic_form_and_bridge(seed: u64, d in 2usize..=3) {
        let mut r = rng(seed);
        let rho = random_state(&mut r, d);
        let (a, b) = (random_observable(&mut r, d), random_observable(&mut r, d));
        let m = random_metric(&mut r);
        let basis = loo_basis(d).unwrap();
        let factor = gram_matrix(&rho, &basis, &m).unwrap();
        prop_assert!(factor.factorization_error() <= 1e-10);
        let (ca, cb) = (expand(&a, &basis).unwrap(), expand(&b, &basis).unwrap());
        let q = factor.quadratic_form(&ca, &ca).unwrap();
        let ia = skew_information(&rho, &a, &m).unwrap();
        prop_assert!((q.re - ia).abs() <= 1e-9 && q.im.abs() <= 1e-9);
        prop_assert!((modulus_vector(&factor, &ca).unwrap().norm_sqr() - ia).abs() <= 1e-9);
        let f = factor.amplitudes(&ca).unwrap();
        let g = factor.amplitudes(&cb).unwrap();
        let inner: skewbound_core::C64 = f.iter().zip(&g).map(|(u, v)| u.conj() * v).sum();
        let corr = correlation(&rho, &a, &b, &m).unwrap();
        prop_assert!((inner.norm() - corr.norm()).abs() <= 1e-9);
    }

    #[test]
    fn nonnegative_and_zero_iff_commuting(seed: u64, d in 2usize..=4) {
        let mut r = rng(seed);
        let rho = random_state(&mut r, d);
        let m = random_metric(&mut r);
        let a = random_observable(&mut r, d);
        prop_assert!(skew_information(&rho, &a, &m).unwrap() >= 0.0);
        // A function of ρ commutes with it.
        let commuting = Observable::new(&(rho.matrix() * rho.matrix()).scale_real(3.0) - rho.matrix()).unwrap();
        prop_assert!(skew_information(&rho, &commuting, &m).unwrap() <= 1e-12);
        let comm = commutator(rho.matrix(), a.matrix()).unwrap();
        if comm.max_abs() > 1e-3 {
            prop_assert!(skew_information(&rho, &a, &m).unwrap() > 0.0);
        }
    }

    #[test]
    fn chains_descend_and_agree(seed: u64, n in 1usize..=9) {
        let mut r = rng(seed);
        let (x, y) = (random_vector(&mut r, n), random_vector(&mut r, n));
        let product: f64 = x.iter().map(|v| v * v).sum::<f64>() * y.iter().map(|v| v * v).sum::<f64>();
        let cauchy = x.iter().zip(&y).map(|(a, b)| a * b).sum::<f64>().powi(2);
        let chain = ProductChain::from_moduli(&x, &y, product, cauchy).unwrap();
        prop_assert!(chain.check(1e-10).is_ok());
    }

    #[test]
    fn endpoints_are_permutation_invariant(seed: u64, n in 2usize..=6) {
        let mut r = rng(seed);
        let (x, y) = (random_vector(&mut r, n), random_vector(&mut r, n));
        let ik = chain_ik(&x, &y).unwrap();
        let mut shuffled = (0..n).collect::<Vec<_>>();
        for i in (1..n).rev() {
            shuffled.swap(i, r.gen_range(0..=i));
        }
        let p = Permutation::new(shuffled).unwrap();
        let q = Permutation::identity(n);
        let permuted = chain_ik(&p.apply(&x), &q.apply(&y)).unwrap();
        let nx: f64 = x.iter().map(|v| v * v).sum();
        let npx: f64 = p.apply(&x).iter().map(|v| v * v).sum();
        // Only summation order differs, so compare against the same summation.
        prop_assert!((ik[0] - permuted[0]).abs() <= 1e-15 * ik[0].max(1.0));
        prop_assert!((nx - npx).abs() <= 1e-15);
        let sx = table_spq(&p.apply(&x), &y).unwrap();
        prop_assert!((sx.entries()[0].value - ik[0]).abs() <= 1e-15 * ik[0].max(1.0));
    }

    #[test]
    fn parallelogram_identity(seed: u64, count in 2usize..=5, n in 1usize..=9) {
        let mut r = rng(seed);
        let vs: Vec<Vec<f64>> = (0..count).map(|_| random_vector(&mut r, n)).collect();
        let refs: Vec<&[f64]> = vs.iter().map(Vec::as_slice).collect();
        prop_assert!(identities::parallelogram_gap(&refs).abs() <= 1e-10);
    }
}

proptest! {
    #![proptest_config(cfg(200))]

    #[test]
    fn wyd_oracle_equivalence(seed: u64, d in 2usize..=4, k in 0usize..3) {
        let alpha = [0.25, 0.5, 0.75][k];
        let mut r = rng(seed);
        let rho = random_state(&mut r, d);
        let a = random_observable(&mut r, d);
        let via_metric = skew_information(&rho, &a, &MetricSpec::wyd(alpha).unwrap()).unwrap();
        let direct = wyd_direct(&rho, &a, alpha).unwrap();
        prop_assert!((via_metric - direct).abs() <= 1e-10);
        if k == 1 {
            let wy = skew_information(&rho, &a, &MetricSpec::wy()).unwrap();
            prop_assert!((via_metric - wy).abs() <= 1e-12);
        }
    }

    #[test]
    fn chain_validity_in_any_gauge(seed: u64, d in 2usize..=3) {
        let mut r = rng(seed);
        let rho = random_state(&mut r, d);
        let (a, b) = (random_observable(&mut r, d), random_observable(&mut r, d));
        let m = random_metric(&mut r);
        let report = evaluate_product(&rho, &a, &b, &m, Gauge::HermitianSqrt).unwrap();
        prop_assert!(report.chain.check(1e-9).is_ok());

        let basis = loo_basis(d).unwrap();
        let factor = gram_matrix(&rho, &basis, &m).unwrap();
        let (ca, cb) = (expand(&a, &basis).unwrap(), expand(&b, &basis).unwrap());
        for _ in 0..5 {
            let u = random_unitary(&mut r, d * d);
            let regauged = factor.regauge(&u).unwrap();
            let x = modulus_vector(&regauged, &ca).unwrap();
            let y = modulus_vector(&regauged, &cb).unwrap();
            let chain = ProductChain::from_moduli(x.as_slice(), y.as_slice(), report.chain.product, report.chain.cauchy).unwrap();
            if let Err(e) = chain.check(1e-9) {
                return Err(TestCaseError::fail(format!("{e}")));
            }
        }
    }
}

proptest! {
    #![proptest_config(cfg(24))]

    #[test]
    fn theorem3_holds_for_every_candidate(seed: u64, count in 2usize..=3, sampled: bool) {
        let mut r = rng(seed);
        let d = 2;
        let rho = random_state(&mut r, d);
        let ens: Vec<Observable> = (0..count).map(|_| random_observable(&mut r, d)).collect();
        let m = random_metric(&mut r);
        let strategy = if sampled {
            Strategy::Sampled { samples: 64, seed }
        } else {
            Strategy::Exhaustive
        };
        let report = evaluate_sum(&rho, &ens, &m, Gauge::HermitianSqrt, strategy).unwrap();
        prop_assert!(report.check(1e-9).is_ok());
        prop_assert!(report.theorem3.candidates.iter().all(|&v| v <= report.sum + 1e-9));
    }

    #[test]
    fn sampled_search_never_beats_exhaustive(seed: u64, n in 2usize..=4) {
        let mut r = rng(seed);
        let (x, y) = (random_vector(&mut r, n), random_vector(&mut r, n));
        let full = permutation_search(&x, &y, Strategy::Exhaustive).unwrap();
        let some = permutation_search(&x, &y, Strategy::Sampled { samples: 10, seed }).unwrap();
        for (f, s) in full.ik.iter().zip(&some.ik) {
            prop_assert!(s.value <= f.value + 1e-15);
        }
        let vs = [x.clone(), y.clone(), random_vector(&mut r, n)];
        let refs: Vec<&[f64]> = vs.iter().map(Vec::as_slice).collect();
        let total: f64 = vs.iter().flatten().map(|v| v * v).sum();
        let t = sum_bound_theorem3(&refs, Strategy::Exhaustive).unwrap();
        prop_assert!(t.value <= total + 1e-12);
    }
}
