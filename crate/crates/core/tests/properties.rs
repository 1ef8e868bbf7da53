mod common;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::*;
use shtukalab_core::drinfeld::{local_lfactor, torsion_frobenius_oracle};
use shtukalab_core::matrix::{kernel, rank, Matrix};
use shtukalab_core::poly::ring_a;
use shtukalab_core::shtuka::random;
use shtukalab_core::Fq;

fn field(q: u32) -> Fq {
    shtukalab_core::drinfeld::field_from_spec(q, None).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn skew_ring_laws(seed in any::<u64>(), q in prop::sample::select(vec![2u32, 3, 4])) {
        let fq = field(q);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (a, b, c) = (random_tau(&fq, &mut rng, 4), random_tau(&fq, &mut rng, 4), random_tau(&fq, &mut rng, 4));
        let x = random_poly(&fq, &mut rng, 4);
        prop_assert_eq!(skew_laws(&fq, &a, &b, &c, &x), Ok(()));
    }

    #[test]
    fn phi_is_a_ring_map(seed in any::<u64>(), which in 0usize..7) {
        let e = &test_modules()[which];
        let fq = e.fq().clone();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = ring_a(&fq).from_vec(random_poly(&fq, &mut rng, 3).coeffs().to_vec());
        let b = ring_a(&fq).from_vec(random_poly(&fq, &mut rng, 3).coeffs().to_vec());
        prop_assert_eq!(phi_hom_laws(e, &a, &b, random_fq(&fq, &mut rng)), Ok(()));
    }

    #[test]
    fn rank_nullity(seed in any::<u64>(), rows in 1usize..6, cols in 1usize..6, q in prop::sample::select(vec![2u32, 3, 5])) {
        let fq = field(q);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = Matrix::from_fn(rows, cols, |_, _| random_fq(&fq, &mut rng));
        let ker = kernel(&fq, &m);
        prop_assert_eq!(rank(&fq, &m) + ker.len(), cols);
        for v in &ker {
            for r in 0..rows {
                let s = (0..cols).fold(fq.zero(), |acc, c| fq.add(acc, fq.mul(*m.get(r, c), v[c])));
                prop_assert_eq!(s, fq.zero());
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn exp_log_laws(seed in any::<u64>(), which in 0usize..4) {
        let e = [module(2, &["1"]), module(3, &["1"]), module(2, &["1", "1"]), module(3, &["x", "1"])][which].clone();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let z = random_ball_element(&e, &mut rng, 5);
        prop_assert_eq!(explog_laws(&e, &z, 20), Ok(()));
    }

    #[test]
    fn nilpotent_finite_shtukas_are_acyclic(seed in any::<u64>()) {
        let mut rng = random::rng(seed);
        let s = random::nilpotent_finite_instance(&mut rng).unwrap();
        prop_assert!(s.is_nilpotent().unwrap());
        let h = s.affine_cohomology().unwrap();
        prop_assert_eq!((h.h0_dim(), h.h1_dim()), (0, 0));
        prop_assert_eq!(s.local_l().unwrap(), s.local_l_by_norm().unwrap());
    }

    #[test]
    fn trace_families(seed in any::<u64>()) {
        let mut rng = random::rng(seed);
        let p = random::nilptrace_instance(&mut rng).unwrap();
        prop_assert!(shtukalab_core::shtuka::check_nilptrace(&p).unwrap().verdict);
        let p = random::arttrace_shifted_instance(&mut rng).unwrap();
        let r = shtukalab_core::shtuka::check_arttrace(&p).unwrap();
        prop_assert!(r.verdict && r.hypotheses_hold());
        prop_assert!(random::zeta_invariance(&p, &mut rng).unwrap());
    }

    #[test]
    fn shtuka_json_round_trip(seed in any::<u64>()) {
        let mut rng = random::rng(seed);
        let p = random::arttrace_constant_instance(&mut rng).unwrap();
        let text = serde_json::to_string(&p.to_json()).unwrap();
        let back = shtukalab_core::shtuka::POneShtuka::from_json(&text).unwrap();
        prop_assert_eq!(serde_json::to_string(&back.to_json()).unwrap(), text);
    }
}

#[test]
fn euler_product_is_thread_independent() {
    assert_eq!(thread_determinism(&module(2, &["1", "1"]), 7, 4), Ok(()));
    assert_eq!(thread_determinism(&module(3, &["x", "1"]), 4, 2), Ok(()));
}

#[test]
fn necklace_counts() {
    for q in [2, 3, 4, 5, 7, 8, 9] {
        assert_eq!(necklace_identity(&field(q), if q <= 3 { 8 } else { 4 }), Ok(()));
    }
}

#[test]
fn oracle_distinguishes_modules() {
    // the comparison has teeth: another module's c(X) disagrees somewhere
    let fq = field(2);
    let (e1, e2) = (module(2, &["1", "1"]), module(2, &["x", "1"]));
    let a = ring_a(&fq);
    let mut differ = false;
    for f in shtukalab_core::irreducible::monic_irreducibles(&fq, 3) {
        for p in shtukalab_core::irreducible::monic_irreducibles(&fq, 2) {
            let Ok(o) = torsion_frobenius_oracle(&e1, &f, &p, 24) else { continue };
            let c2: Vec<_> = local_lfactor(&e2, &f, 4).unwrap().charpoly.iter().map(|c| a.rem(c, &p).unwrap()).collect();
            differ |= o != c2;
        }
    }
    assert!(differ);
}
