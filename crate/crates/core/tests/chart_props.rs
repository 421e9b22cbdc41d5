use logpois::chart::{H3Verdict, LogChart, MonomialCheck};
use logpois::error::Error;
use logpois::poisson::LogForm;
use logpois::sample::{random_log_canonical, random_monomial, random_poly, small_rational};
use logpois::series::Ring;
use logpois::{LaurentPoly, Scalar};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn chart(rng: &mut ChaCha8Rng, n: usize, r: usize, t: i32) -> LogChart {
    let ring = Ring::with_leading_logs(n, r, t, 1).unwrap();
    LogChart::log_canonical(ring, &random_log_canonical(rng, n))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn log_hamiltonians_are_poisson(seed in any::<u64>(), n in 2usize..=4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let r = rng.gen_range(1..=n);
        let ch = chart(&mut rng, n, r, 6);
        prop_assert_eq!(ch.check_h3(), H3Verdict::Ok);
        for x in ch.log_hamiltonians() {
            prop_assert!(ch.poisson().delta_vector(&x).is_zero());
        }
    }

    #[test]
    fn primitive_round_trip(seed in any::<u64>(), n in 2usize..=4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let r = rng.gen_range(1..=n);
        let ch = chart(&mut rng, n, r, 8);
        let f = random_poly(&mut rng, ch.ring(), 1, 8, 6);
        let eta = LogForm::differential(&f);
        let g = ch.log_poincare_primitive(&eta).unwrap();
        prop_assert_eq!(LogForm::differential(&g), eta);
        prop_assert_eq!(g, f);
    }

    #[test]
    fn residues_are_rejected(seed in any::<u64>(), n in 2usize..=4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ch = chart(&mut rng, n, n, 8);
        let ring = ch.ring();
        let k = rng.gen_range(0..n);
        let c = small_rational(&mut rng);
        let f = random_poly(&mut rng, ring, 1, 6, 4);
        let eta = LogForm::differential(&f).add(&LogForm::term(ring, &[k], LaurentPoly::constant(ring, c.clone())));
        match ch.log_poincare_primitive(&eta) {
            Err(Error::NonzeroResidue { coord, residue }) => {
                prop_assert_eq!(coord, k);
                prop_assert_eq!(residue, LaurentPoly::constant(ring, c).fmt_with(ch.labels()));
            }
            other => prop_assert!(false, "expected a residue witness, got {:?}", other),
        }
    }

    #[test]
    fn delta_of_log_monomials(seed in any::<u64>(), n in 2usize..=4, d in 0i32..=6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ch = chart(&mut rng, n, n, 8);
        let coords: Vec<usize> = (0..n).collect();
        let alpha = random_monomial(&mut rng, &coords, d);
        prop_assert_eq!(ch.delta_monomial_check(&alpha).unwrap(), MonomialCheck::Ok);
    }
}

#[test]
fn primitive_of_z1_dz2() {
    // d(z1 z2) in the log frame of C^2 with both axes in the divisor.
    let ring = Ring::with_leading_logs(2, 2, 4, 1).unwrap();
    let ch = LogChart::log_canonical(ring, &logpois::Matrix::zeros(2, 2));
    let f = LaurentPoly::var(ring, 0).mul(&LaurentPoly::var(ring, 1)).scale(&Scalar::int(3));
    assert_eq!(ch.log_poincare_primitive(&LogForm::differential(&f)).unwrap(), f);
}
