//! Randomized property sweeps over the whole pipeline.

use dmrx_core::channel::{alice_an_projector, bob_nsp_projector, los_channel, steering, ArrayGeometry};
use dmrx_core::metrics::{secrecy_rate, sinr_bob};
use dmrx_core::numerics::{hermitian_evd, inv_hpd, inv_sqrt_hpd, CMatrix};
use dmrx_core::rbf::{self, ShermanMorrisonChain};
use dmrx_core::txmodel::random_config;
use dmrx_core::{Method, Scenario};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn scenarios(seed: u64, count: usize) -> Vec<Scenario> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| Scenario::new(random_config(&mut rng, &[2, 4, 8])).unwrap())
        .collect()
}

/// Upper bound on the second singular value: distance to the best rank-one
/// approximation built from the largest column.
fn rank_one_residual(m: &CMatrix) -> f64 {
    let j = (0..m.cols())
        .max_by(|&a, &b| m.column(a).norm().total_cmp(&m.column(b).norm()))
        .unwrap();
    let u = m.column(j).normalized(0.0).unwrap();
    let approx = &u.outer(&u) * m;
    (m - &approx).frobenius_norm()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn steering_vectors_are_unit_norm(n in 1usize..33, spacing in 0.05f64..2.0, angle in 0.0f64..=180.0) {
        let h = steering(ArrayGeometry::new(n, spacing).unwrap(), angle).unwrap();
        prop_assert!((h.entries.norm() - 1.0).abs() <= 1e-12);
        let modulus = 1.0 / (n as f64).sqrt();
        for z in h.entries.iter() {
            prop_assert!((z.norm() - modulus).abs() <= 1e-12);
        }
    }

    #[test]
    fn secrecy_rate_never_negative(rb in 0.0f64..20.0, rm in 0.0f64..20.0) {
        let sr = secrecy_rate(rb, rm);
        prop_assert!(sr >= 0.0);
        prop_assert!(sr >= rb - rm);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn channels_rank_one_and_projectors_exact(
        n_rx in 1usize..9, n_tx in 1usize..9,
        rx_deg in 0.0f64..=180.0, tx_deg in 0.0f64..=180.0,
    ) {
        let g = |n| ArrayGeometry::half_wavelength(n).unwrap();
        let ch = los_channel(steering(g(n_rx), rx_deg).unwrap(), steering(g(n_tx), tx_deg).unwrap(), 1.0).unwrap();
        prop_assert!(rank_one_residual(&ch.matrix) <= 1e-12);

        let t = alice_an_projector(&ch);
        prop_assert!(t.hermitian_defect() <= 1e-12);
        prop_assert!((&(&t * &t) - &t).frobenius_norm() <= 1e-12);
        prop_assert!((&ch.matrix * &t).frobenius_norm() <= 1e-12);
        prop_assert!((t.trace().re - (n_tx as f64 - 1.0)).abs() <= 1e-10);

        let gp = bob_nsp_projector(&ch);
        let g_mat = &gp;
        prop_assert!(g_mat.hermitian_defect() <= 1e-12);
        prop_assert!((&(g_mat * g_mat) - g_mat).frobenius_norm() <= 1e-12);
        prop_assert!((g_mat * &ch.matrix).frobenius_norm() <= 1e-12);
        let ones = hermitian_evd(g_mat).unwrap().eigenvalues.iter().filter(|l| (*l - 1.0).abs() < 1e-9).count();
        prop_assert_eq!(ones, n_rx - 1);
    }
}

#[test]
fn numerics_on_scenario_matrices() {
    for sc in scenarios(21, 100) {
        let c = &sc.covariances.c_nbar;
        let evd = hermitian_evd(c).unwrap();
        let rel = (&evd.reconstruct() - c).frobenius_norm() / c.frobenius_norm();
        assert!(rel <= 1e-10, "reconstruction {rel}");
        let q = &evd.eigenvectors;
        let n = evd.dim();
        assert!((&(&q.adjoint() * q) - &CMatrix::identity(n)).frobenius_norm() <= 1e-10);
        assert!(evd.min_eigenvalue() >= sc.config.sigma_b2 - 1e-9);

        let s = inv_sqrt_hpd(c).unwrap();
        assert!((&(&(&s * c) * &s) - &CMatrix::identity(n)).frobenius_norm() <= 1e-9);

        let o = rbf::mmse_system(&sc);
        let inv = inv_hpd(&o).unwrap();
        assert!((&(&o * &inv) - &CMatrix::identity(n)).frobenius_norm() <= 1e-9);
    }
}

#[test]
fn beamformer_invariants_over_random_scenarios() {
    for (k, sc) in scenarios(22, 200).into_iter().enumerate() {
        let sigma2 = sc.config.sigma_b2;
        let designs: Vec<_> = Method::ALL.iter().map(|m| m.design(&sc).unwrap()).collect();
        for bf in &designs {
            assert!((bf.weights.norm() - 1.0).abs() <= 1e-10, "#{k} {}", bf.method);
        }
        let sinr = |m: Method| sinr_bob(&designs[m as usize].weights, &sc.covariances, sigma2);
        let best = sinr(Method::MaxSr);
        for m in Method::MAX_SINR {
            assert!((sinr(m) - best).abs() <= 1e-8 * best, "#{k} {m}");
        }
        assert!(sinr(Method::Mrc) <= best * (1.0 + 1e-10), "#{k}");
        assert!(sinr(Method::NspMaxWfrp) <= best * (1.0 + 1e-10), "#{k}");

        let nsp = &designs[Method::NspMaxWfrp as usize].weights;
        let leak = &sc.channels.mb.matrix.adjoint() * nsp;
        assert!(leak.norm() <= 1e-10, "#{k} leak {}", leak.norm());
    }
}

#[test]
fn chain_tracks_direct_inverse() {
    for sc in scenarios(23, 200) {
        let chain = ShermanMorrisonChain::build(&sc).unwrap();
        let direct = inv_hpd(&rbf::mmse_system(&sc)).unwrap();
        let err = (&chain.o_inv - &direct).frobenius_norm() / direct.frobenius_norm();
        assert!(err <= 1e-8, "{err}");
    }
}
