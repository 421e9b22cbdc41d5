//! Roots in Q(i) of polynomials with Gaussian-rational coefficients.
//!
//! Z[i] is a unique factorisation domain, so after clearing denominators a
//! root `u/v` in lowest terms has `u` dividing the constant coefficient and
//! `v` dividing the leading one. Divisors are enumerated from the Gaussian
//! prime factorisation, which is read off the factorisation of the norm.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::rational::Rational;
use crate::scalar::Scalar;

/// Gaussian integer.
#[derive(Clone, Debug, PartialEq, Eq)]
struct GInt {
    re: BigInt,
    im: BigInt,
}

impl GInt {
    fn new(re: BigInt, im: BigInt) -> Self {
        GInt { re, im }
    }

    fn from_i(re: i64, im: i64) -> Self {
        GInt { re: re.into(), im: im.into() }
    }

    fn norm(&self) -> BigInt {
        &self.re * &self.re + &self.im * &self.im
    }

    fn mul(&self, o: &GInt) -> GInt {
        GInt::new(&self.re * &o.re - &self.im * &o.im, &self.re * &o.im + &self.im * &o.re)
    }

    /// Exact quotient if `o` divides `self`.
    fn div_exact(&self, o: &GInt) -> Option<GInt> {
        let n = o.norm();
        // self * conj(o)
        let re = &self.re * &o.re + &self.im * &o.im;
        let im = &self.im * &o.re - &self.re * &o.im;
        if (&re % &n).is_zero() && (&im % &n).is_zero() {
            Some(GInt::new(re / &n, im / &n))
        } else {
            None
        }
    }

    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    fn to_scalar(&self) -> Scalar {
        Scalar::new(Rational::from_bigints(self.re.clone(), 1.into()), Rational::from_bigints(self.im.clone(), 1.into()))
    }
}

fn factor_int(mut n: BigInt) -> Vec<(BigInt, u32)> {
    let mut out = Vec::new();
    let mut p = BigInt::from(2);
    while &p * &p <= n {
        let mut e = 0;
        while (&n % &p).is_zero() {
            n /= &p;
            e += 1;
        }
        if e > 0 {
            out.push((p.clone(), e));
        }
        p += if p == BigInt::from(2) { 1 } else { 2 };
    }
    if n > BigInt::one() {
        out.push((n, 1));
    }
    out
}

/// `a + b i` with `a^2 + b^2 = p` for a prime `p = 1 mod 4`.
fn two_squares(p: &BigInt) -> GInt {
    let pu = p.to_u128().expect("prime fits in u128");
    let mut a: u128 = 1;
    while a * a < pu {
        let rest = pu - a * a;
        let b = (rest as f64).sqrt() as u128;
        for bb in b.saturating_sub(1)..=b + 1 {
            if bb * bb == rest {
                return GInt::new(BigInt::from(a), BigInt::from(bb));
            }
        }
        a += 1;
    }
    unreachable!("prime congruent to 1 mod 4 is a sum of two squares")
}

/// Gaussian prime factorisation of a nonzero `c`, without the unit.
fn gaussian_factor(c: &GInt) -> Vec<(GInt, u32)> {
    let mut rest = c.clone();
    let mut out = Vec::new();
    for (p, _) in factor_int(c.norm()) {
        let primes: Vec<GInt> = if p == BigInt::from(2) {
            vec![GInt::from_i(1, 1)]
        } else if (&p % 4u32) == BigInt::from(3) {
            vec![GInt::new(p.clone(), BigInt::zero())]
        } else {
            let pi = two_squares(&p);
            let conj = GInt::new(pi.re.clone(), -pi.im.clone());
            vec![pi, conj]
        };
        for pi in primes {
            let mut e = 0;
            while let Some(q) = rest.div_exact(&pi) {
                rest = q;
                e += 1;
            }
            if e > 0 {
                out.push((pi, e));
            }
        }
    }
    out
}

/// Divisors up to units (one associate each).
fn divisors(c: &GInt) -> Vec<GInt> {
    let mut out = vec![GInt::from_i(1, 0)];
    for (pi, e) in gaussian_factor(c) {
        let mut next = Vec::with_capacity(out.len() * (e as usize + 1));
        for d in &out {
            let mut cur = d.clone();
            next.push(cur.clone());
            for _ in 0..e {
                cur = cur.mul(&pi);
                next.push(cur.clone());
            }
        }
        out = next;
    }
    out
}

fn eval(p: &[Scalar], x: &Scalar) -> Scalar {
    let mut acc = Scalar::ZERO;
    for c in p.iter().rev() {
        acc = &(&acc * x) + c;
    }
    acc
}

/// Divides by `(t - x)`, assuming `x` is a root.
fn deflate(p: &[Scalar], x: &Scalar) -> Vec<Scalar> {
    let d = p.len() - 1;
    let mut q = vec![Scalar::ZERO; d];
    let mut carry = Scalar::ZERO;
    for k in (1..=d).rev() {
        carry = &(&carry * x) + &p[k];
        q[k - 1] = carry.clone();
    }
    q
}

/// Multiplies by a common denominator, giving Gaussian integer coefficients.
fn clear_denominators(p: &[Scalar]) -> Vec<GInt> {
    let mut l = BigInt::one();
    for c in p {
        l = l.lcm(&c.re.denom());
        l = l.lcm(&c.im.denom());
    }
    p.iter()
        .map(|c| {
            let re = c.re.numer() * (&l / c.re.denom());
            let im = c.im.numer() * (&l / c.im.denom());
            GInt::new(re, im)
        })
        .collect()
}

/// Distinct roots in Q(i) with multiplicities, and whatever factor of
/// positive degree has no root in Q(i). Coefficients are constant first.
pub fn gaussian_roots(p: &[Scalar]) -> (Vec<(Scalar, usize)>, Vec<Scalar>) {
    let mut poly: Vec<Scalar> = p.to_vec();
    while poly.len() > 1 && poly.last().is_some_and(|c| c.is_zero()) {
        poly.pop();
    }
    let mut roots: Vec<(Scalar, usize)> = Vec::new();
    let push = |roots: &mut Vec<(Scalar, usize)>, x: Scalar| {
        if let Some(e) = roots.iter_mut().find(|(r, _)| *r == x) {
            e.1 += 1;
        } else {
            roots.push((x, 1));
        }
    };
    while poly.len() > 1 && poly[0].is_zero() {
        poly.remove(0);
        push(&mut roots, Scalar::ZERO);
    }
    'outer: while poly.len() > 1 {
        let ints = clear_denominators(&poly);
        let c0 = &ints[0];
        let cd = &ints[ints.len() - 1];
        if c0.is_zero() {
            poly.remove(0);
            push(&mut roots, Scalar::ZERO);
            continue;
        }
        let units = [GInt::from_i(1, 0), GInt::from_i(0, 1), GInt::from_i(-1, 0), GInt::from_i(0, -1)];
        let us = divisors(c0);
        let vs = divisors(cd);
        for v in &vs {
            let vs_ = v.to_scalar();
            for u in &us {
                for unit in &units {
                    let cand = &u.mul(unit).to_scalar() / &vs_;
                    if eval(&poly, &cand).is_zero() {
                        poly = deflate(&poly, &cand);
                        push(&mut roots, cand);
                        continue 'outer;
                    }
                }
            }
        }
        break;
    }
    roots.sort_by(|a, b| (&a.0.re, &a.0.im).cmp(&(&b.0.re, &b.0.im)));
    let rest = if poly.len() > 1 { poly } else { Vec::new() };
    (roots, rest)
}

/// Human-readable polynomial in `t`, highest degree first.
pub fn fmt_poly(p: &[Scalar]) -> String {
    let mut parts = Vec::new();
    for (k, c) in p.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let cs = if c.is_real() { c.to_string() } else { format!("({c})") };
        parts.push(match k {
            0 => cs,
            1 => format!("{cs}*t"),
            _ => format!("{cs}*t^{k}"),
        });
    }
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join("+")
    }
}


#[cfg(test)]
mod tests {
    use super::*;

    fn s(t: &str) -> Scalar {
        t.parse().unwrap()
    }

    #[test]
    fn finds_gaussian_roots() {
        // (t - 1/2)^2 (t - (1+i)/3)
        let a = s("1/2");
        let b = s("1/3+1/3*i");
        let mut p = vec![Scalar::ONE];
        for r in [&a, &a, &b] {
            let mut q = vec![Scalar::ZERO; p.len() + 1];
            for (k, c) in p.iter().enumerate() {
                q[k + 1] = &q[k + 1] + c;
                q[k] = &q[k] - &(c * r);
            }
            p = q;
        }
        let (roots, rest) = gaussian_roots(&p);
        assert!(rest.is_empty());
        assert_eq!(roots.len(), 2);
        assert!(roots.contains(&(a, 2)));
        assert!(roots.contains(&(b, 1)));
    }

    #[test]
    fn irrational_remainder() {
        let (roots, rest) = gaussian_roots(&[s("-2"), s("0"), s("1")]);
        assert!(roots.is_empty());
        assert_eq!(rest.len(), 3);
    }
}
