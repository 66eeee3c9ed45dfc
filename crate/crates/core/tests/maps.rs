//! Superoperator and norm-optimizer properties checked against derived
//! oracles.

use cpnorm::matrix::random::{ginibre, rng_from_seed, unit_vector};
use cpnorm::matrix::{basis_vector, eigh, ui_norm};
use cpnorm::norm_opt::hermitian_reduction;
use cpnorm::superop::Verdict;
use cpnorm::{
    hermitian_induced_norm, induced_norm, sampling_oracle, ComplexMatrix, NormSpec, OptConfig,
    Superoperator, C64,
};
use rand::Rng;

fn cfg(seed: u64) -> OptConfig {
    OptConfig {
        multistarts: 24,
        ..OptConfig::with_seed(seed)
    }
}

#[test]
fn kraus_and_choi_paths_agree_on_many_inputs() {
    let mut rng = rng_from_seed(1);
    for (m, n, r) in [(2, 2, 1), (2, 3, 3), (3, 2, 2), (4, 4, 5)] {
        let map = Superoperator::random_cp_map(m, n, r, rng.random()).unwrap();
        for _ in 0..100 {
            let sigma = ginibre(&mut rng, m, m);
            let k = map.apply_via_kraus(&sigma).unwrap().unwrap();
            assert!(k.approx_eq(&map.apply_via_choi(&sigma).unwrap(), 1e-10));
        }
    }
}

#[test]
fn cp_maps_are_never_refuted_by_sampling() {
    for seed in 0..4 {
        let map = Superoperator::random_cp_map(4, 4, 1 + seed as usize, seed).unwrap();
        for k in 1..4 {
            let rep = map.is_k_positive(k, 10_000, seed).unwrap();
            assert_eq!(rep.verdict, Verdict::SampledPass, "k={k}");
        }
    }
}

#[test]
fn transpose_is_positive_but_not_two_positive() {
    let t3 = Superoperator::transpose_map(3).unwrap();
    assert_eq!(
        t3.is_k_positive(1, 10_000, 5).unwrap().verdict,
        Verdict::SampledPass
    );
    assert!(t3.is_hermiticity_preserving(1e-12));
    let t2 = Superoperator::transpose_map(2).unwrap();
    let rep = t2.is_k_positive(2, 0, 5).unwrap();
    assert!(rep.refuted() && rep.exact);
}

#[test]
fn tensoring_with_identity_composes() {
    let mut rng = rng_from_seed(2);
    let map = Superoperator::random_cp_map(2, 3, 2, 4).unwrap();
    let (j, k) = (2, 3);
    let direct = map.tensor_with_identity(j * k).unwrap();
    let nested = map
        .tensor_with_identity(k)
        .unwrap()
        .tensor_with_identity(j)
        .unwrap();
    let x = ginibre(&mut rng, 2 * j * k, 2 * j * k);
    let a = direct.apply(&x).unwrap();
    assert!(a.approx_eq(&nested.apply(&x).unwrap(), 1e-12));
    // Blockwise: block (s, t) of the output is the map applied to block (s, t).
    for s in 0..j * k {
        for t in 0..j * k {
            let blk = map.apply(&x.block(2 * s, 2 * t, 2, 2)).unwrap();
            assert!(a.block(3 * s, 3 * t, 3, 3).approx_eq(&blk, 1e-12));
        }
    }
}

#[test]
fn cp_image_of_psd_is_psd() {
    let mut rng = rng_from_seed(3);
    let map = Superoperator::random_cp_map(3, 2, 2, 6)
        .unwrap()
        .tensor_with_identity(2)
        .unwrap();
    for _ in 0..20 {
        let g = ginibre(&mut rng, 6, 6);
        let out = map.apply(&(&g * &g.adjoint())).unwrap();
        assert!(eigh(&out).unwrap().min_value() >= -1e-9 * out.max_abs().max(1.0));
    }
}

#[test]
fn non_hermitian_functional() {
    // σ ↦ ⟨e_1|σ|e_2⟩·I.
    let map =
        Superoperator::from_map_fn(2, 2, |s| ComplexMatrix::identity(2).scale(s[(0, 1)])).unwrap();
    assert!(!map.is_hermiticity_preserving(1e-9));
}

#[test]
fn identity_channel_closed_forms() {
    let id = Superoperator::identity(3).unwrap();
    for (p, q) in [(2.0, 1.0), (f64::INFINITY, 2.0), (3.0, 1.5)] {
        let est = induced_norm(&id, NormSpec::Schatten(p), NormSpec::Schatten(q), &cfg(1)).unwrap();
        let exact = 3f64.powf(1.0 / q - 1.0 / p);
        assert!((est.value - exact).abs() < 1e-9, "{p}->{q}");
        // Attained at I / m^{1/p}.
        let at = ComplexMatrix::identity(3).scale_real(3f64.powf(-1.0 / p));
        assert!((ui_norm(&at, NormSpec::Schatten(q)).unwrap() - exact).abs() < 1e-12);
    }
    let sampled = sampling_oracle(
        &Superoperator::identity(2).unwrap(),
        NormSpec::FROBENIUS,
        NormSpec::FROBENIUS,
        10_000,
        3,
        false,
    )
    .unwrap();
    assert!((0.99..=1.0 + 1e-12).contains(&sampled.value));
}

#[test]
fn rank_one_map_on_trace_ball_has_norm_one() {
    let mut rng = rng_from_seed(4);
    let u = unit_vector(&mut rng, 2);
    let w = unit_vector(&mut rng, 2);
    let map = Superoperator::from_kraus(vec![ComplexMatrix::outer(&w, &u)]).unwrap();
    // Grid over rank-one σ = |a⟩⟨b| with Bloch-type angles.
    let bloch = |theta: f64, phi: f64| {
        vec![
            C64::new((theta / 2.0).cos(), 0.0),
            C64::from_polar((theta / 2.0).sin(), phi),
        ]
    };
    let steps = 24;
    let mut grid_best: f64 = 0.0;
    for q in [NormSpec::TRACE, NormSpec::FROBENIUS, NormSpec::OPERATOR] {
        for i in 0..=steps {
            for j in 0..steps {
                for k in 0..=steps {
                    for l in 0..steps {
                        if (i + j + k + l) % 3 != 0 {
                            continue;
                        }
                        let a = bloch(
                            std::f64::consts::PI * i as f64 / steps as f64,
                            std::f64::consts::TAU * j as f64 / steps as f64,
                        );
                        let b = bloch(
                            std::f64::consts::PI * k as f64 / steps as f64,
                            std::f64::consts::TAU * l as f64 / steps as f64,
                        );
                        let v =
                            ui_norm(&map.apply(&ComplexMatrix::outer(&a, &b)).unwrap(), q).unwrap();
                        grid_best = grid_best.max(v);
                    }
                }
            }
        }
        let est = induced_norm(&map, NormSpec::TRACE, q, &cfg(2)).unwrap();
        assert!((est.value - 1.0).abs() < 1e-9);
        assert!(grid_best <= 1.0 + 1e-12 && grid_best > 0.97);
    }
}

#[test]
fn hermitian_norm_dominance_and_equality() {
    let map = Superoperator::random_cp_map(2, 2, 3, 9).unwrap();
    let (p, q) = (NormSpec::TRACE, NormSpec::OPERATOR);
    let full = induced_norm(&map, p, q, &cfg(3)).unwrap();
    let herm = hermitian_induced_norm(&map, p, q, &cfg(3)).unwrap();
    let oracle = sampling_oracle(&map, p, q, 10_000, 3, true).unwrap();
    assert!(herm.value <= full.value + 1e-8);
    assert!((full.value - herm.value).abs() <= 1e-4 * herm.value);
    assert!(oracle.value <= herm.value + 1e-8);
    assert!(herm.maximizer.is_hermitian(1e-9));
    assert!((ui_norm(&full.maximizer, p).unwrap() - 1.0).abs() < 1e-9);
}

#[test]
fn scaling_and_monotonicity_in_q() {
    let mut rng = rng_from_seed(5);
    let map = Superoperator::random_cp_map(3, 3, 2, 10).unwrap();
    let p = NormSpec::Schatten(1.5);
    let base = induced_norm(&map, p, NormSpec::FROBENIUS, &cfg(4))
        .unwrap()
        .value;
    for _ in 0..3 {
        let c: f64 = rng.random_range(0.1..10.0);
        let scaled = induced_norm(&map.scaled(c), p, NormSpec::FROBENIUS, &cfg(4))
            .unwrap()
            .value;
        assert!((scaled - c * base).abs() <= 1e-8 * (c * base).max(1.0));
    }
    let values: Vec<f64> = [1.0, 1.5, 2.0, 3.0, f64::INFINITY]
        .iter()
        .map(|&q| {
            induced_norm(&map, p, NormSpec::Schatten(q), &cfg(4))
                .unwrap()
                .value
        })
        .collect();
    for w in values.windows(2) {
        assert!(w[1] <= w[0] + 1e-8, "{values:?}");
    }
}

#[test]
fn reduction_examples() {
    let mut rng = rng_from_seed(6);
    let map = Superoperator::random_cp_map(3, 2, 2, 11).unwrap();
    let g = ginibre(&mut rng, 3, 3);
    let psd = &g * &g.adjoint();
    for q in [NormSpec::TRACE, NormSpec::Schatten(2.5), NormSpec::OPERATOR] {
        let c = hermitian_reduction(&map, &psd, q).unwrap();
        assert!((c.lhs - c.bound_product).abs() <= 1e-10 * c.lhs);
    }
    let id = Superoperator::identity(3).unwrap();
    let (u, v) = (basis_vector(3, 0), unit_vector(&mut rng, 3));
    let c =
        hermitian_reduction(&id, &ComplexMatrix::outer(&v, &u), NormSpec::Schatten(3.0)).unwrap();
    assert!((c.lhs - 1.0).abs() < 1e-12 && (c.bound_product - 1.0).abs() < 1e-12);
    for _ in 0..1000 {
        let m = rng.random_range(1..=4);
        let map = Superoperator::random_cp_map(
            m,
            rng.random_range(1..=4),
            rng.random_range(1..=3),
            rng.random(),
        )
        .unwrap();
        let sigma = ginibre(&mut rng, m, m);
        assert!(
            hermitian_reduction(&map, &sigma, NormSpec::Schatten(1.5))
                .unwrap()
                .holds
        );
    }
}
