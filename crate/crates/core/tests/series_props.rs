use logpois::sample::random_poly;
use logpois::series::Ring;
use logpois::text::parse_poly;
use logpois::LaurentPoly;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn ring() -> Ring {
    Ring::with_leading_logs(3, 2, 6, 1).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn multiplication_associates_after_truncation(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let r = ring();
        let a = random_poly(&mut rng, r, 0, 3, 4);
        let b = random_poly(&mut rng, r, 0, 3, 4);
        let c = random_poly(&mut rng, r, 0, 3, 4);
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        prop_assert_eq!(a.mul(&b), b.mul(&a));
    }

    #[test]
    fn leibniz_rule(seed in any::<u64>(), k in 0usize..3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let r = ring();
        // Degrees kept low so the product stays below the truncation.
        let f = random_poly(&mut rng, r, 0, 3, 4);
        let g = random_poly(&mut rng, r, 0, 3, 4);
        let lhs = f.mul(&g).partial_derivative(k).unwrap();
        let rhs = f.partial_derivative(k).unwrap().mul(&g).add(&f.mul(&g.partial_derivative(k).unwrap()));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn canonical_form_is_idempotent(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let r = ring();
        let f = random_poly(&mut rng, r, 0, 6, 8);
        let again = LaurentPoly::from_terms(r, f.terms().to_vec());
        prop_assert_eq!(again.to_string(), f.to_string());
        prop_assert_eq!(again, f);
    }

    #[test]
    fn text_round_trip(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let r = ring();
        let labels = r.default_labels();
        let f = random_poly(&mut rng, r, 0, 6, 8);
        let text = f.fmt_with(&labels);
        let g = parse_poly(&text, r, &labels).unwrap();
        prop_assert_eq!(g.fmt_with(&labels), text);
    }
}
