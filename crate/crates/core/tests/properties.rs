use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use voa_core::fock::{inner_product, space_dimension, theta_involution, SpaceConfig};
use voa_core::identities::random_vector;
use voa_core::partition::{partition_counts, partitions};
use voa_core::scalar::{frac, parse, render};
use voa_core::vertex::{borcherds_lhs, borcherds_rhs, skew_rhs, VertexEngine};
use voa_core::GradedVector;

const CUTOFF: u32 = 11;

fn space() -> impl Strategy<Value = SpaceConfig> {
    prop_oneof![
        Just(SpaceConfig::heisenberg(CUTOFF)),
        Just(SpaceConfig::lattice(1, CUTOFF)),
        Just(SpaceConfig::lattice(2, CUTOFF)),
    ]
}

fn vector(cfg: &SpaceConfig, w: u32, seed: u64) -> GradedVector {
    random_vector(cfg, w, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn rationals_round_trip(n in -10_000i64..10_000, d in 1i64..500) {
        let q = frac(n, d);
        prop_assert_eq!(parse(&render(&q)), Some(q));
    }

    #[test]
    fn skew_symmetry(cfg in space(), wu in 0u32..4, wv in 0u32..4, t in -2i32..5, seed: u64) {
        let (u, v) = (vector(&cfg, wu, seed), vector(&cfg, wv, seed ^ 1));
        let mut eng = VertexEngine::new(cfg);
        prop_assert_eq!(eng.mode(&u, t, &v).unwrap(), skew_rhs(&mut eng, &u, t, &v).unwrap());
    }

    #[test]
    fn commutator_formula(cfg in space(), ws in (0u32..3, 0u32..3, 0u32..3), m in -2i32..3, n in -2i32..3, seed: u64) {
        let (u, v, w) = (vector(&cfg, ws.0, seed), vector(&cfg, ws.1, seed ^ 1), vector(&cfg, ws.2, seed ^ 2));
        let mut eng = VertexEngine::new(cfg);
        let l = borcherds_lhs(&mut eng, &u, m, &v, n, &w).unwrap();
        let r = borcherds_rhs(&mut eng, &u, m, &v, n, &w).unwrap();
        prop_assert_eq!(l, r);
    }

    #[test]
    fn theta_commutes_with_modes(cfg in space(), wu in 0u32..4, wv in 0u32..4, t in -3i32..5, seed: u64) {
        let (u, v) = (vector(&cfg, wu, seed), vector(&cfg, wv, seed ^ 1));
        let mut eng = VertexEngine::new(cfg);
        let l = theta_involution(&eng.mode(&u, t, &v).unwrap(), &cfg);
        let r = eng.mode(&theta_involution(&u, &cfg), t, &theta_involution(&v, &cfg)).unwrap();
        prop_assert_eq!(l, r);
    }

    #[test]
    fn theta_is_an_isometric_involution(cfg in space(), w in 0u32..6, seed: u64) {
        let (u, v) = (vector(&cfg, w, seed), vector(&cfg, w, seed ^ 1));
        let tu = theta_involution(&u, &cfg);
        prop_assert_eq!(theta_involution(&tu, &cfg), u.clone());
        prop_assert_eq!(inner_product(&tu, &theta_involution(&v, &cfg), &cfg), inner_product(&u, &v, &cfg));
    }

    #[test]
    fn form_is_symmetric(cfg in space(), w in 0u32..6, seed: u64) {
        let (u, v) = (vector(&cfg, w, seed), vector(&cfg, w, seed ^ 1));
        prop_assert_eq!(inner_product(&u, &v, &cfg), inner_product(&v, &u, &cfg));
    }

    #[test]
    fn vacuum_is_the_identity_field(cfg in space(), w in 0u32..6, seed: u64) {
        let v = vector(&cfg, w, seed);
        let mut eng = VertexEngine::new(cfg);
        prop_assert_eq!(eng.mode(&GradedVector::vacuum(), -1, &v).unwrap(), v.clone());
        prop_assert!(eng.mode(&GradedVector::vacuum(), 0, &v).unwrap().is_zero());
        prop_assert_eq!(eng.mode(&v, -1, &GradedVector::vacuum()).unwrap(), v);
    }

    #[test]
    fn heisenberg_dimensions_are_partition_numbers(w in 0u32..CUTOFF) {
        let dim = space_dimension(&SpaceConfig::heisenberg(CUTOFF), w).unwrap();
        prop_assert_eq!(partition_counts(w as usize + 1)[w as usize].to_string(), dim.to_string());
        prop_assert_eq!(partitions(w).len(), dim);
    }
}
