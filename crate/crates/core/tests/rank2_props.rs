use logpois::chart::{H3Verdict, LogChart};
use logpois::connection::poisson_curvature;
use logpois::poisson::JacobiVerdict;
use logpois::rank2::*;
use logpois::sample::{random_l1111_params, random_log_canonical, random_log_vector, random_poly, small_rational};
use logpois::series::{Ring};
use logpois::{LaurentPoly, MultiIndex, Polyvector, Scalar};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn chart(rng: &mut ChaCha8Rng, n: usize) -> LogChart {
    let ring = Ring::with_leading_logs(n, n, 5, 1).unwrap();
    LogChart::log_canonical(ring, &random_log_canonical(rng, n))
}

/// A Poisson vector field: a Hamiltonian field plus log Hamiltonians.
fn poisson_field(rng: &mut ChaCha8Rng, ch: &LogChart) -> Polyvector {
    let f = random_poly(rng, ch.ring(), 1, 2, 2);
    let mut v = ch.poisson().hamiltonian(&f);
    for x in ch.log_hamiltonians() {
        v = v.add(&x.scale(&small_rational(rng)));
    }
    v
}

fn random_triple(rng: &mut ChaCha8Rng, ch: &LogChart) -> PoissonTriple {
    let ring = ch.ring();
    let zero = Polyvector::zero(ring, 1);
    match rng.gen_range(0..3) {
        0 => PoissonTriple::new(zero.clone(), poisson_field(rng, ch), zero).unwrap(),
        1 => PoissonTriple::new(zero.clone(), zero, poisson_field(rng, ch)).unwrap(),
        _ => PoissonTriple::new(
            random_log_vector(rng, ring, 2, 2),
            random_log_vector(rng, ring, 2, 2),
            random_log_vector(rng, ring, 2, 2),
        )
        .unwrap(),
    }
}

/// `v = sum_k v^k(z_k) d/dz_k`, sometimes the scaling field `sum b_k z_k d_k`.
fn separated_field(rng: &mut ChaCha8Rng, ring: Ring) -> Polyvector {
    let scaling = rng.gen_bool(0.4);
    let comps = (0..ring.n())
        .map(|k| {
            let f = if scaling {
                LaurentPoly::monomial(ring, MultiIndex::unit(k), small_rational(rng))
            } else {
                let terms = (0..rng.gen_range(0..=2))
                    .map(|_| (MultiIndex::unit(k).with(k, rng.gen_range(0..=2)), small_rational(rng)));
                LaurentPoly::from_terms(ring, terms)
            };
            (vec![k], f)
        })
        .collect();
    Polyvector::from_standard(ring, 1, comps)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn mc_system_iff_flat(seed in any::<u64>(), n in 2usize..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ch = chart(&mut rng, n);
        let t = random_triple(&mut rng, &ch);
        let report = mc_check(&ch, &t).unwrap();
        let flat = poisson_curvature(&ch, &triple_to_theta(&t).unwrap()).is_zero();
        prop_assert_eq!(report.flat(), flat);
        prop_assert_eq!(report.violations.is_empty(), report.curvature_zero);
        prop_assert!(curvature_conventions_agree(&ch, &t).unwrap());
    }

    #[test]
    fn coordinate_criterion_matches_lie_derivative(seed in any::<u64>(), n in 2usize..=4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ch = chart(&mut rng, n);
        let v = separated_field(&mut rng, ch.ring());
        let rep = coord_criterion_check(ch.poisson(), &v).unwrap();
        prop_assert_eq!(rep.ok(), ch.poisson().lichnerowicz(&v).unwrap().is_zero());
        prop_assert_eq!(rep.ok(), rep.lie_derivative_zero);
    }

    #[test]
    fn lu_conditions_match_direct_identity(seed in any::<u64>(), n in 2usize..=4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ch = chart(&mut rng, n);
        let ring = ch.ring();
        let c = ch.log_canonical_constants().unwrap();
        let crafted = rng.gen_bool(0.5);
        let cu: Vec<Scalar> = (0..n)
            .map(|k| if crafted { if k == 0 { Scalar::ONE } else { Scalar::ZERO } } else if rng.gen_bool(0.5) { Scalar::ZERO } else { small_rational(&mut rng) })
            .collect();
        let b: Vec<Scalar> = (0..n)
            .map(|k| if crafted && k > 0 { c.get(0, k).clone() } else { small_rational(&mut rng) })
            .collect();
        let u = Polyvector::from_standard(ring, 1, (0..n).map(|k| (vec![k], LaurentPoly::constant(ring, cu[k].clone()))).collect());
        let v = Polyvector::from_standard(ring, 1, (0..n).map(|k| (vec![k], LaurentPoly::monomial(ring, MultiIndex::unit(k), b[k].clone()))).collect());
        let rep = lu_uw_check(&ch, &u, &v).unwrap();
        prop_assert_eq!(rep.ok(), rep.direct);
        prop_assert_eq!(rep.direct, ch.poisson().delta_vector(&u) == u.wedge(&v));
        if crafted {
            prop_assert!(rep.ok());
        }
    }

    #[test]
    fn l1111_family(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = random_l1111_params(&mut rng);
        let ch = l1111_structure(&p, &L1111_DEFAULT_LOG, 5, 1).unwrap();
        prop_assert_eq!(ch.poisson().check_jacobi(), JacobiVerdict::Poisson);
        prop_assert_eq!(ch.check_h3(), H3Verdict::Ok);
        prop_assert_eq!(xi_closed_check(&ch).unwrap(), XiVerdict::Ok);
        for x in ch.log_hamiltonians() {
            prop_assert!(ch.poisson().delta_vector(&x).is_zero());
        }
        let t = l1111_triple(&ch).unwrap();
        prop_assert!(mc_check(&ch, &t).unwrap().flat());
    }
}
