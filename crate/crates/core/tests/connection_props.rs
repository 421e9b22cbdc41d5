use logpois::chart::LogChart;
use logpois::connection::{
    ep_principal, extract_principal, gauge_transform, poisson_curvature, poisson_curvature_column, ConnMatrix, PvMatrix,
    ResidueTuple,
};
use logpois::sample::{random_gauge, random_log_canonical, random_log_vector, random_matrix, small_rational};
use logpois::series::Ring;
use logpois::Matrix;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn chart(rng: &mut ChaCha8Rng, n: usize, t: i32) -> LogChart {
    let ring = Ring::with_leading_logs(n, n, t, 1).unwrap();
    LogChart::log_canonical(ring, &random_log_canonical(rng, n))
}

/// Principal part of random residues plus a holomorphic tail of degree >= 1.
fn random_theta(rng: &mut ChaCha8Rng, ch: &LogChart, e: usize) -> ConnMatrix {
    let ring = ch.ring();
    let a = ResidueTuple::new((0..ch.r()).map(|_| random_matrix(rng, e)).collect()).unwrap();
    let mut theta = ep_principal(ch, &a).unwrap();
    for i in 0..e {
        for j in 0..e {
            if rng.gen_bool(0.5) {
                let tail = random_log_vector(rng, ring, 2, 2).map(|f| f.filter(|m| m.degree() >= 1));
                let cur = theta.get(i, j).add(&tail);
                theta.set(i, j, cur);
            }
        }
    }
    theta
}

/// Commuting pair: two polynomials in one matrix.
fn commuting_pair(rng: &mut ChaCha8Rng, e: usize) -> (Matrix, Matrix) {
    let m = random_matrix(rng, e);
    let (a, b) = (small_rational(rng), small_rational(rng));
    let p = m.scale(&a).add(&Matrix::identity(e).scale(&b));
    let q = m.mul(&m).add(&m.scale(&b));
    (p, q)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn curvature_is_gauge_covariant(seed in any::<u64>(), n in 2usize..=3, e in 1usize..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ch = chart(&mut rng, n, 4);
        let theta = random_theta(&mut rng, &ch, e);
        let g = random_gauge(&mut rng, ch.ring(), e, 2);
        let gi = g.inverse().unwrap();
        let k = poisson_curvature(&ch, &theta);
        let k2 = poisson_curvature(&ch, &gauge_transform(&ch, &theta, &g).unwrap());
        prop_assert_eq!(k2, k.left_mul(&g).right_mul(&gi));
    }

    #[test]
    fn gauge_action_composes(seed in any::<u64>(), n in 2usize..=3, e in 1usize..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ch = chart(&mut rng, n, 4);
        let theta = random_theta(&mut rng, &ch, e);
        let g1 = random_gauge(&mut rng, ch.ring(), e, 2);
        let g2 = random_gauge(&mut rng, ch.ring(), e, 2);
        let once = gauge_transform(&ch, &theta, &g2.mul(&g1)).unwrap();
        let twice = gauge_transform(&ch, &gauge_transform(&ch, &theta, &g1).unwrap(), &g2).unwrap();
        prop_assert_eq!(once, twice);
    }

    #[test]
    fn principal_part_round_trip(seed in any::<u64>(), n in 2usize..=4, e in 1usize..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ch = chart(&mut rng, n, 4);
        // Two log coordinates keep the generators independent.
        let ring = Ring::with_leading_logs(n, 2, 4, 1).unwrap();
        let ch = LogChart::log_canonical(ring, &ch.log_canonical_constants().unwrap());
        let a = ResidueTuple::new((0..2).map(|_| random_matrix(&mut rng, e)).collect()).unwrap();
        let theta = ep_principal(&ch, &a).unwrap();
        let (back, rest) = extract_principal(&ch, &theta).unwrap();
        prop_assert_eq!(back, a);
        prop_assert!(rest.is_zero());
    }

    #[test]
    fn principal_part_flat_iff_commuting(seed in any::<u64>(), e in 1usize..=3, commuting in any::<bool>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ch = chart(&mut rng, 2, 4);
        let (a1, a2) = if commuting {
            commuting_pair(&mut rng, e)
        } else {
            (random_matrix(&mut rng, e), random_matrix(&mut rng, e))
        };
        let comm = a1.commutator(&a2);
        let a = ResidueTuple::new(vec![a1, a2]).unwrap();
        let theta = ep_principal(&ch, &a).unwrap();
        let k = poisson_curvature_column(&ch, &theta);
        prop_assert_eq!(k.is_zero(), comm.is_zero());
        let xs = ch.log_hamiltonians();
        let expected = PvMatrix::kron(&comm, &xs[0].wedge(&xs[1]));
        prop_assert_eq!(&k, &expected);
        // Row convention: delta Theta - Theta ^ Theta.
        prop_assert_eq!(poisson_curvature(&ch, &theta), expected.neg());
    }
}
