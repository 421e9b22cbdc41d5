use logpois::poisson::{JacobiVerdict, LogForm, PoissonStructure};
use logpois::sample::{random_log_canonical, random_log_vector, random_poly};
use logpois::series::Ring;
use logpois::text::parse_polyvector;
use logpois::Polyvector;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn structure(rng: &mut ChaCha8Rng, n: usize, r: usize) -> PoissonStructure {
    let ring = Ring::with_leading_logs(n, r, 8, 1).unwrap();
    PoissonStructure::log_canonical(ring, &random_log_canonical(rng, n))
}

/// Log-frame 1-form with polynomial coefficients.
fn random_form(rng: &mut ChaCha8Rng, ring: Ring) -> LogForm {
    let coeffs = (0..ring.n()).map(|_| random_poly(rng, ring, 0, 2, 2)).collect();
    LogForm::from_vec(ring, coeffs)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn log_canonical_is_poisson(seed in any::<u64>(), n in 2usize..=4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = structure(&mut rng, n, n);
        prop_assert_eq!(p.check_jacobi(), JacobiVerdict::Poisson);
    }

    #[test]
    fn delta_squares_to_zero(seed in any::<u64>(), n in 2usize..=4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = structure(&mut rng, n, n);
        let f = random_poly(&mut rng, p.ring(), 0, 3, 4);
        let xf = p.lichnerowicz(&Polyvector::function(f)).unwrap();
        prop_assert!(p.lichnerowicz(&xf).unwrap().is_zero());
    }

    #[test]
    fn anchor_matches_differential_on_functions(seed in any::<u64>(), n in 2usize..=4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let r = rng.gen_range(1..=n);
        let p = structure(&mut rng, n, r);
        let f = random_poly(&mut rng, p.ring(), 0, 4, 5);
        let via_anchor = p.anchor(&LogForm::differential(&f));
        prop_assert_eq!(p.lichnerowicz(&Polyvector::function(f)).unwrap(), via_anchor);
    }

    #[test]
    fn koszul_preserves_log_forms(seed in any::<u64>(), n in 2usize..=4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let r = rng.gen_range(1..=n);
        let p = structure(&mut rng, n, r);
        let a = random_form(&mut rng, p.ring());
        let b = random_form(&mut rng, p.ring());
        let k = p.koszul(&a, &b).unwrap();
        prop_assert!(k.bracket.is_log_holomorphic());
    }

    #[test]
    fn wedge_is_graded_antisymmetric(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ring = Ring::with_leading_logs(4, 2, 8, 1).unwrap();
        let a = random_log_vector(&mut rng, ring, 2, 2);
        let b = random_log_vector(&mut rng, ring, 2, 2);
        let c = random_log_vector(&mut rng, ring, 2, 2);
        let ab = a.wedge(&b);
        prop_assert_eq!(ab.clone(), b.wedge(&a).neg());
        // grade 2 against grade 1: sign +1
        prop_assert_eq!(ab.wedge(&c), c.wedge(&ab));
    }
}

#[test]
fn coordinate_frame_input() {
    let ring = Ring::with_leading_logs(2, 1, 4, 1).unwrap();
    let l = ring.default_labels();
    let a = parse_polyvector("z1*dz1^dz2", ring, &l, 2).unwrap();
    let b = parse_polyvector("1*Lz1^dz2", ring, &l, 2).unwrap();
    assert_eq!(a, b);
}
