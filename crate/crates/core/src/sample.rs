//! Random instances for property checks and seeded CLI commands.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::connection::{GaugeMatrix, ResidueTuple};
use crate::linalg::Matrix;
use crate::poisson::Polyvector;
use crate::rank2::L1111Params;
use crate::scalar::Scalar;
use crate::series::{monomials_of_degree, LaurentPoly, MultiIndex, Ring};
use crate::spectral::{check_nonresonance, joint_spectrum, NonresMode, NonresVerdict};

/// Nonzero rational `n/d` with `1 <= |n| <= 5`, `1 <= d <= 3`.
pub fn small_rational<R: Rng + ?Sized>(rng: &mut R) -> Scalar {
    let n = rng.gen_range(1..=5i64) * if rng.gen_bool(0.5) { 1 } else { -1 };
    Scalar::frac(n, rng.gen_range(1..=3))
}

/// Rational in `[-bound, bound]` with denominator at most `max_den`.
pub fn rational_in<R: Rng + ?Sized>(rng: &mut R, bound: i64, max_den: i64) -> Scalar {
    let d = rng.gen_range(1..=max_den);
    Scalar::frac(rng.gen_range(-bound * d..=bound * d), d)
}

/// Antisymmetric constants for a log-canonical structure.
pub fn random_log_canonical<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Matrix {
    let mut c = Matrix::zeros(n, n);
    for i in 0..n {
        for j in i + 1..n {
            let v = small_rational(rng);
            c.set(j, i, -&v);
            c.set(i, j, v);
        }
    }
    c
}

const PALETTE: [(i64, i64); 7] = [(0, 1), (1, 2), (-1, 2), (1, 3), (-1, 3), (2, 5), (-2, 5)];

/// Diagonal residues with entries in `{0, +-1/2, +-1/3, +-2/5}`, redrawn
/// until non-resonant.
pub fn random_residues<R: Rng + ?Sized>(rng: &mut R, r: usize, e: usize) -> ResidueTuple {
    loop {
        let mats = (0..r)
            .map(|_| {
                let d: Vec<Scalar> = (0..e)
                    .map(|_| {
                        let (n, dd) = *PALETTE.choose(rng).expect("palette");
                        Scalar::frac(n, dd)
                    })
                    .collect();
                Matrix::diag(&d)
            })
            .collect();
        let a = ResidueTuple::new(mats).expect("square residues");
        let s = joint_spectrum(&a).expect("diagonal residues");
        if check_nonresonance(&s, NonresMode::Symmetric) == NonresVerdict::Nonresonant {
            return a;
        }
    }
}

/// `I` plus sparse holomorphic terms in degrees `1..=max_deg`.
pub fn random_gauge<R: Rng + ?Sized>(rng: &mut R, ring: Ring, e: usize, max_deg: i32) -> GaugeMatrix {
    let coords: Vec<usize> = (0..ring.n()).collect();
    let mut g = GaugeMatrix::identity(ring, e);
    for d in 1..=max_deg {
        let monos = monomials_of_degree(&coords, d);
        for a in 0..e {
            for b in 0..e {
                if rng.gen_bool(0.5) {
                    let m = *monos.choose(rng).expect("monomials");
                    let t = LaurentPoly::monomial(ring, m, small_rational(rng));
                    let cur = g.get(a, b).add(&t);
                    g.set(a, b, cur);
                }
            }
        }
    }
    g
}

/// Holomorphic polynomial with up to `terms` terms of degree `min_deg..=max_deg`.
pub fn random_poly<R: Rng + ?Sized>(rng: &mut R, ring: Ring, min_deg: i32, max_deg: i32, terms: usize) -> LaurentPoly {
    let coords: Vec<usize> = (0..ring.n()).collect();
    let mut out = Vec::with_capacity(terms);
    for _ in 0..terms {
        let d = rng.gen_range(min_deg..=max_deg);
        let monos = monomials_of_degree(&coords, d);
        out.push((*monos.choose(rng).expect("monomials"), small_rational(rng)));
    }
    LaurentPoly::from_terms(ring, out)
}

/// Vector field with polynomial log-frame coefficients.
pub fn random_log_vector<R: Rng + ?Sized>(rng: &mut R, ring: Ring, max_deg: i32, terms: usize) -> Polyvector {
    let coeffs = (0..ring.n())
        .map(|_| if rng.gen_bool(0.3) { LaurentPoly::zero(ring) } else { random_poly(rng, ring, 0, max_deg, terms) })
        .collect();
    Polyvector::from_vec(ring, coeffs)
}

/// Sum-zero weights in `[-5, 5]` for the L(1,1,1,1) family.
pub fn random_l1111_params<R: Rng + ?Sized>(rng: &mut R) -> L1111Params {
    loop {
        let a: Vec<Scalar> = (0..3).map(|_| rational_in(rng, 5, 4)).collect();
        let last = -(&(&a[0] + &a[1]) + &a[2]);
        if last.re.abs() <= crate::rational::Rational::from_int(5) {
            return L1111Params::new([a[0].clone(), a[1].clone(), a[2].clone(), last]).expect("sum zero");
        }
    }
}

pub fn random_matrix<R: Rng + ?Sized>(rng: &mut R, e: usize) -> Matrix {
    Matrix::from_fn(e, e, |_, _| if rng.gen_bool(0.4) { Scalar::ZERO } else { small_rational(rng) })
}

pub fn random_invertible<R: Rng + ?Sized>(rng: &mut R, e: usize) -> Matrix {
    loop {
        let m = random_matrix(rng, e);
        if m.inverse().is_some() {
            return m;
        }
    }
}

/// Monomial supported on the given coordinates, total degree `d`.
pub fn random_monomial<R: Rng + ?Sized>(rng: &mut R, coords: &[usize], d: i32) -> MultiIndex {
    *monomials_of_degree(coords, d).choose(rng).expect("monomials")
}
