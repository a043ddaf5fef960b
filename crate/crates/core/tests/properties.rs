//! Property tests for the structural invariants: moment identities,
//! vectorization round trips, trace preservation of the closed-form
//! propagator, and metric properties of the distances.

use num_complex::Complex64;
use proptest::prelude::*;
use sqbath_core::cmat::CMat;
use sqbath_core::diagnostics::{quadrature_variances, trace_distance};
use sqbath_core::fock::{DensityMatrix, SqueezeParams};
use sqbath_core::liouvillian::{devectorize, vectorize};
use sqbath_core::profile::GammaProfile;
use sqbath_core::su11::{damped_kminus_series, solve_gauge};

fn random_density(dim: usize, seed: &[f64]) -> DensityMatrix {
    // ρ = AA†/Tr(AA†) is Hermitian, PSD, unit trace for any A ≠ 0.
    let a = CMat::from_fn(dim, dim, |i, j| {
        let k = (i * dim + j) * 2;
        Complex64::new(seed[k % seed.len()], seed[(k + 1) % seed.len()])
    });
    let mut rho = &a * &a.adjoint();
    let tr = rho.trace();
    rho.scale_mut(Complex64::new(1.0, 0.0) / tr);
    DensityMatrix::from_matrix_with(rho, 1e-9).expect("AA†/Tr(AA†) is Hermitian PSD with unit trace")
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn squeeze_moments_satisfy_the_pair_identity(r in 0.0f64..2.5, theta in -10.0f64..10.0) {
        let p = SqueezeParams::new(r, theta).unwrap();
        let n = p.occupation();
        let m = p.pair_correlation();
        let lhs = m.norm_sqr();
        let rhs = n * (n + 1.0);
        prop_assert!((lhs - rhs).abs() <= 1e-12 * rhs.max(1.0));
    }

    #[test]
    fn vectorize_round_trip_is_bit_identical(
        dim in 2usize..9,
        seed in proptest::collection::vec(-5.0f64..5.0, 16),
    ) {
        let m = CMat::from_fn(dim, dim, |i, j| {
            let k = (i * dim + j) * 2;
            Complex64::new(seed[k % seed.len()], seed[(k + 1) % seed.len()])
        });
        let back = devectorize(&vectorize(&m), dim).unwrap();
        prop_assert!(back == m);
    }

    #[test]
    fn gauge_function_is_monotone_and_bounded(
        gamma in 0.0f64..3.0,
        t1 in 0.0f64..20.0,
        dt in 0.0f64..20.0,
    ) {
        let profile = GammaProfile::constant(gamma).unwrap();
        let s1 = solve_gauge(&profile, t1).unwrap();
        let s2 = solve_gauge(&profile, t1 + dt).unwrap();
        prop_assert!((0.0..=1.0).contains(&s1.y));
        prop_assert!(s2.y >= s1.y);
        prop_assert!(s2.gamma_int >= s1.gamma_int);
    }

    #[test]
    fn closed_form_propagation_preserves_trace_and_positivity(
        dim in 4usize..10,
        gamma_int in 0.0f64..40.0,
        seed in proptest::collection::vec(-1.0f64..1.0, 24),
    ) {
        let rho = random_density(dim, &seed);
        let out = damped_kminus_series(gamma_int, rho.matrix());
        let tr = out.trace();
        prop_assert!((tr.re - 1.0).abs() < 1e-10, "trace {tr}");
        prop_assert!(tr.im.abs() < 1e-12);
        let out_dm = DensityMatrix::from_matrix_with(out.hermitize(), 1e-8);
        prop_assert!(out_dm.is_ok(), "{out_dm:?}");
    }

    #[test]
    fn trace_distance_is_a_symmetric_metric(
        dim in 4usize..8,
        seed_a in proptest::collection::vec(-1.0f64..1.0, 24),
        seed_b in proptest::collection::vec(-1.0f64..1.0, 24),
        seed_c in proptest::collection::vec(-1.0f64..1.0, 24),
    ) {
        let a = random_density(dim, &seed_a);
        let b = random_density(dim, &seed_b);
        let c = random_density(dim, &seed_c);
        let dab = trace_distance(&a, &b).unwrap();
        let dba = trace_distance(&b, &a).unwrap();
        prop_assert!((dab - dba).abs() < 1e-10);
        prop_assert!((0.0..=1.0 + 1e-12).contains(&dab));
        prop_assert!(trace_distance(&a, &a).unwrap() < 1e-12);
        let dac = trace_distance(&a, &c).unwrap();
        let dcb = trace_distance(&c, &b).unwrap();
        prop_assert!(dab <= dac + dcb + 1e-10);
    }

    #[test]
    fn uncertainty_product_is_bounded_below(
        dim in 6usize..12,
        seed in proptest::collection::vec(-1.0f64..1.0, 24),
    ) {
        let rho = random_density(dim, &seed);
        let rep = quadrature_variances(&rho, &[]).unwrap();
        prop_assert!(rep.min_variance * rep.max_variance >= 1.0 / 16.0 - 1e-9);
        prop_assert!(rep.min_variance <= rep.max_variance);
    }
}
