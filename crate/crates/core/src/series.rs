//! Sparse truncated multivariate Laurent polynomials over Q(i).
//!
//! A [`Ring`] fixes the number of coordinates, which of them are logarithmic
//! (may carry bounded negative exponents), the total-degree truncation and
//! the pole bound. Arithmetic silently drops terms above the truncation, so
//! every holomorphic identity holds exactly modulo `m^(trunc+1)`.
//!
//! Negative exponents below the pole bound are tolerated inside arithmetic so
//! intermediate expressions can pass through; operations that hand results
//! to callers check them with [`LaurentPoly::check_poles`].

use std::collections::HashMap;
use std::fmt;
use std::hash::{BuildHasherDefault, Hash, Hasher};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub const MAX_COORDS: usize = 8;
pub const MAX_TRUNC: i32 = 100;

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Default)]
pub struct MultiIndex(pub [i8; MAX_COORDS]);

impl Hash for MultiIndex {
    fn hash<H: Hasher>(&self, state: &mut H) {
        state.write_u64(self.key());
    }
}

impl MultiIndex {
    pub const ZERO: MultiIndex = MultiIndex([0; MAX_COORDS]);

    pub fn from_slice(e: &[i32]) -> Self {
        assert!(e.len() <= MAX_COORDS);
        let mut m = [0i8; MAX_COORDS];
        for (k, &x) in e.iter().enumerate() {
            m[k] = i8::try_from(x).expect("exponent out of range");
        }
        MultiIndex(m)
    }

    pub fn unit(k: usize) -> Self {
        let mut m = [0i8; MAX_COORDS];
        m[k] = 1;
        MultiIndex(m)
    }

    fn key(&self) -> u64 {
        u64::from_le_bytes(self.0.map(|x| x as u8))
    }

    pub fn get(&self, k: usize) -> i32 {
        self.0[k] as i32
    }

    pub fn with(&self, k: usize, e: i32) -> Self {
        let mut m = *self;
        m.0[k] = i8::try_from(e).expect("exponent out of range");
        m
    }

    pub fn degree(&self) -> i32 {
        self.0.iter().map(|&x| x as i32).sum()
    }

    pub fn add(&self, o: &MultiIndex) -> MultiIndex {
        let mut m = [0i8; MAX_COORDS];
        for k in 0..MAX_COORDS {
            m[k] = self.0[k].checked_add(o.0[k]).expect("exponent overflow");
        }
        MultiIndex(m)
    }

    pub fn sub(&self, o: &MultiIndex) -> MultiIndex {
        let mut m = [0i8; MAX_COORDS];
        for k in 0..MAX_COORDS {
            m[k] = self.0[k].checked_sub(o.0[k]).expect("exponent overflow");
        }
        MultiIndex(m)
    }

    pub fn is_nonnegative(&self) -> bool {
        self.0.iter().all(|&x| x >= 0)
    }

    pub fn to_vec(&self, n: usize) -> Vec<i32> {
        self.0[..n].iter().map(|&x| x as i32).collect()
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// Multiplicative hasher for the 64-bit packed exponent keys.
#[derive(Default)]
pub(crate) struct KeyHasher(u64);

impl Hasher for KeyHasher {
    fn finish(&self) -> u64 {
        self.0
    }
    fn write(&mut self, bytes: &[u8]) {
        for &b in bytes {
            self.0 = (self.0.rotate_left(8) ^ b as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15);
        }
    }
    fn write_u64(&mut self, x: u64) {
        self.0 = (x ^ (x >> 29)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        self.0 ^= self.0 >> 32;
    }
}

pub(crate) type KeyMap<V> = HashMap<MultiIndex, V, BuildHasherDefault<KeyHasher>>;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Ring {
    n: u8,
    log_mask: u8,
    trunc: i32,
    pole_bound: u8,
}

impl Ring {
    pub fn new(n: usize, log_mask: u8, trunc: i32, pole_bound: u8) -> Result<Ring> {
        if n == 0 || n > MAX_COORDS {
            return Err(Error::InvalidArgument(format!(
                "coordinate count must be between 1 and {MAX_COORDS}, got {n}"
            )));
        }
        if n < MAX_COORDS && (log_mask as u32) >> n != 0 {
            return Err(Error::InvalidArgument("log coordinate index out of range".into()));
        }
        if !(0..=MAX_TRUNC).contains(&trunc) {
            return Err(Error::InvalidArgument(format!(
                "truncation must be between 0 and {MAX_TRUNC}, got {trunc}"
            )));
        }
        if pole_bound > 60 {
            return Err(Error::InvalidArgument("pole bound too large".into()));
        }
        Ok(Ring { n: n as u8, log_mask, trunc, pole_bound })
    }

    /// Ring whose first `r` coordinates are logarithmic.
    pub fn with_leading_logs(n: usize, r: usize, trunc: i32, pole_bound: u8) -> Result<Ring> {
        if r > n {
            return Err(Error::InvalidArgument(format!("r = {r} exceeds n = {n}")));
        }
        let mask = if r == 8 { 0xff } else { ((1u16 << r) - 1) as u8 };
        Ring::new(n, mask, trunc, pole_bound)
    }

    pub fn n(&self) -> usize {
        self.n as usize
    }

    pub fn log_mask(&self) -> u8 {
        self.log_mask
    }

    pub fn is_log(&self, k: usize) -> bool {
        self.log_mask >> k & 1 == 1
    }

    pub fn log_coords(&self) -> Vec<usize> {
        (0..self.n()).filter(|&k| self.is_log(k)).collect()
    }

    pub fn r(&self) -> usize {
        self.log_mask.count_ones() as usize
    }

    pub fn trunc(&self) -> i32 {
        self.trunc
    }

    pub fn pole_bound(&self) -> u8 {
        self.pole_bound
    }

    pub fn with_trunc(&self, trunc: i32) -> Ring {
        Ring { trunc, ..*self }
    }

    pub fn with_pole_bound(&self, pole_bound: u8) -> Ring {
        Ring { pole_bound, ..*self }
    }

    /// First offending coordinate if `m` breaks the pole rule.
    pub fn pole_violation(&self, m: &MultiIndex) -> Option<usize> {
        (0..self.n()).find(|&k| {
            let e = m.get(k);
            e < 0 && (!self.is_log(k) || -e > self.pole_bound as i32)
        })
    }

    pub fn default_labels(&self) -> Vec<String> {
        (1..=self.n()).map(|k| format!("z{k}")).collect()
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum HolomorphyClass {
    Holomorphic,
    LogarithmicOnly,
    GenuinePole,
}

/// Terms are kept sorted by exponent vector with no zero coefficients.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    ring: Ring,
    terms: Vec<(MultiIndex, Scalar)>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
}

impl LaurentPoly {
    pub fn zero(ring: Ring) -> Self {
        LaurentPoly { ring, terms: Vec::new() }
    }

    pub fn constant(ring: Ring, c: Scalar) -> Self {
        if c.is_zero() {
            return Self::zero(ring);
        }
        LaurentPoly { ring, terms: vec![(MultiIndex::ZERO, c)] }
    }

    pub fn one(ring: Ring) -> Self {
        Self::constant(ring, Scalar::ONE)
    }

    /// `c * z^m`, dropped if above the truncation.
    pub fn monomial(ring: Ring, m: MultiIndex, c: Scalar) -> Self {
        if c.is_zero() || m.degree() > ring.trunc {
            return Self::zero(ring);
        }
        LaurentPoly { ring, terms: vec![(m, c)] }
    }

    pub fn var(ring: Ring, k: usize) -> Self {
        Self::monomial(ring, MultiIndex::unit(k), Scalar::ONE)
    }

    /// Sums duplicate exponents, removes zeros and truncates.
    pub fn from_terms<I: IntoIterator<Item = (MultiIndex, Scalar)>>(ring: Ring, it: I) -> Self {
        let mut acc: KeyMap<Scalar> = KeyMap::default();
        for (m, c) in it {
            if m.degree() > ring.trunc || c.is_zero() {
                continue;
            }
            *acc.entry(m).or_default() += &c;
        }
        Self::from_map(ring, acc)
    }

    pub(crate) fn from_map(ring: Ring, acc: KeyMap<Scalar>) -> Self {
        let mut terms: Vec<(MultiIndex, Scalar)> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_unstable_by_key(|a| a.0);
        LaurentPoly { ring, terms }
    }

    /// Checked constructor for external data: the pole rule is enforced.
    pub fn try_from_terms<I: IntoIterator<Item = (MultiIndex, Scalar)>>(ring: Ring, it: I) -> Result<Self> {
        let p = Self::from_terms(ring, it);
        p.check_poles("input")?;
        Ok(p)
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn terms(&self) -> &[(MultiIndex, Scalar)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &MultiIndex) -> Scalar {
        match self.terms.binary_search_by(|t| t.0.cmp(m)) {
            Ok(i) => self.terms[i].1.clone(),
            Err(_) => Scalar::ZERO,
        }
    }

    pub fn constant_term(&self) -> Scalar {
        self.coeff(&MultiIndex::ZERO)
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(m, _)| *m == MultiIndex::ZERO)
    }

    /// Reinterprets the same terms in another ring with the same coordinates,
    /// dropping whatever exceeds the new truncation.
    pub fn in_ring(&self, ring: Ring) -> LaurentPoly {
        assert_eq!(ring.n, self.ring.n, "coordinate count mismatch");
        let terms = self.terms.iter().filter(|(m, _)| m.degree() <= ring.trunc).cloned().collect();
        LaurentPoly { ring, terms }
    }

    pub fn check_poles(&self, context: &str) -> Result<()> {
        for (m, c) in &self.terms {
            if self.ring.pole_violation(m).is_some() {
                let witness = LaurentPoly { ring: self.ring, terms: vec![(*m, c.clone())] };
                return Err(Error::PoleOverflow {
                    context: context.to_string(),
                    bound: self.ring.pole_bound,
                    witness: witness.to_string(),
                });
            }
        }
        Ok(())
    }

    fn check_ring(&self, o: &LaurentPoly) -> Result<()> {
        if self.ring == o.ring {
            Ok(())
        } else {
            Err(Error::RingMismatch)
        }
    }

    pub fn arith(&self, o: &LaurentPoly, op: ArithOp) -> Result<LaurentPoly> {
        self.check_ring(o)?;
        let out = match op {
            ArithOp::Add => self.add(o),
            ArithOp::Sub => self.sub(o),
            ArithOp::Mul => self.mul(o),
        };
        out.check_poles("multiplication")?;
        Ok(out)
    }

    fn merge(&self, o: &LaurentPoly, negate: bool) -> LaurentPoly {
        debug_assert_eq!(self.ring, o.ring);
        let mut out = Vec::with_capacity(self.terms.len() + o.terms.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.terms, &o.terms);
        while i < a.len() || j < b.len() {
            if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
                out.push(a[i].clone());
                i += 1;
            } else if i == a.len() || b[j].0 < a[i].0 {
                let c = if negate { -&b[j].1 } else { b[j].1.clone() };
                out.push((b[j].0, c));
                j += 1;
            } else {
                let c = if negate { &a[i].1 - &b[j].1 } else { &a[i].1 + &b[j].1 };
                if !c.is_zero() {
                    out.push((a[i].0, c));
                }
                i += 1;
                j += 1;
            }
        }
        LaurentPoly { ring: self.ring, terms: out }
    }

    pub fn add(&self, o: &LaurentPoly) -> LaurentPoly {
        assert_eq!(self.ring, o.ring, "ring mismatch");
        if o.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return o.clone();
        }
        self.merge(o, false)
    }

    pub fn sub(&self, o: &LaurentPoly) -> LaurentPoly {
        assert_eq!(self.ring, o.ring, "ring mismatch");
        if o.is_zero() {
            return self.clone();
        }
        self.merge(o, true)
    }

    pub fn neg(&self) -> LaurentPoly {
        LaurentPoly { ring: self.ring, terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect() }
    }

    pub fn scale(&self, c: &Scalar) -> LaurentPoly {
        if c.is_zero() {
            return Self::zero(self.ring);
        }
        if c.is_one() {
            return self.clone();
        }
        LaurentPoly { ring: self.ring, terms: self.terms.iter().map(|(m, x)| (*m, x * c)).collect() }
    }

    /// Multiplies by `c * z^m`.
    pub fn mul_term(&self, m: &MultiIndex, c: &Scalar) -> LaurentPoly {
        if c.is_zero() {
            return Self::zero(self.ring);
        }
        let t = self.ring.trunc;
        let terms = self
            .terms
            .iter()
            .filter_map(|(a, x)| {
                let s = a.add(m);
                (s.degree() <= t).then(|| (s, x * c))
            })
            .collect();
        // Shifting by a fixed exponent preserves lexicographic order.
        LaurentPoly { ring: self.ring, terms }
    }

    /// Truncated product.
    pub fn mul(&self, o: &LaurentPoly) -> LaurentPoly {
        assert_eq!(self.ring, o.ring, "ring mismatch");
        if self.is_zero() || o.is_zero() {
            return Self::zero(self.ring);
        }
        if self.terms.len() == 1 {
            return o.mul_term(&self.terms[0].0, &self.terms[0].1);
        }
        if o.terms.len() == 1 {
            return self.mul_term(&o.terms[0].0, &o.terms[0].1);
        }
        let t = self.ring.trunc;
        let mut b: Vec<(i32, &MultiIndex, &Scalar)> = o.terms.iter().map(|(m, c)| (m.degree(), m, c)).collect();
        b.sort_by_key(|x| x.0);
        let mut acc: KeyMap<Scalar> = KeyMap::default();
        for (ma, ca) in &self.terms {
            let room = t - ma.degree();
            for (db, mb, cb) in &b {
                if *db > room {
                    break;
                }
                let p = ca * *cb;
                match acc.entry(ma.add(mb)) {
                    std::collections::hash_map::Entry::Occupied(mut e) => *e.get_mut() += &p,
                    std::collections::hash_map::Entry::Vacant(e) => {
                        e.insert(p);
                    }
                }
            }
        }
        Self::from_map(self.ring, acc)
    }

    pub fn pow(&self, e: u32) -> LaurentPoly {
        let mut acc = LaurentPoly::one(self.ring);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Exact `d/dz_k`.
    pub fn partial_derivative(&self, k: usize) -> Result<LaurentPoly> {
        if k >= self.ring.n() {
            return Err(Error::InvalidArgument(format!("coordinate index {k} out of range")));
        }
        let mut terms = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            let e = m.get(k);
            if e == 0 {
                continue;
            }
            let nm = m.with(k, e - 1);
            if self.ring.pole_violation(&nm).is_some() {
                let w = LaurentPoly { ring: self.ring, terms: vec![(*m, c.clone())] };
                return Err(Error::PoleOverflow {
                    context: format!("derivative in coordinate {}", k + 1),
                    bound: self.ring.pole_bound,
                    witness: w.to_string(),
                });
            }
            terms.push((nm, c * &Scalar::int(e as i64)));
        }
        terms.sort_unstable_by_key(|a| a.0);
        Ok(LaurentPoly { ring: self.ring, terms })
    }

    /// `z_k d/dz_k` for logarithmic coordinates, `d/dz_k` otherwise. These are
    /// the derivations along the logarithmic frame and never raise a pole.
    pub fn frame_derivative(&self, k: usize) -> LaurentPoly {
        if self.ring.is_log(k) {
            let terms = self
                .terms
                .iter()
                .filter(|(m, _)| m.get(k) != 0)
                .map(|(m, c)| (*m, c * &Scalar::int(m.get(k) as i64)))
                .collect();
            LaurentPoly { ring: self.ring, terms }
        } else {
            let mut terms: Vec<_> = self
                .terms
                .iter()
                .filter(|(m, _)| m.get(k) != 0)
                .map(|(m, c)| (m.with(k, m.get(k) - 1), c * &Scalar::int(m.get(k) as i64)))
                .collect();
            terms.sort_unstable_by_key(|a| a.0);
            LaurentPoly { ring: self.ring, terms }
        }
    }

    /// Part of total degree exactly `d`.
    pub fn degree_part(&self, d: i32) -> LaurentPoly {
        self.filter(|m| m.degree() == d)
    }

    /// Part of total degree at most `d`.
    pub fn truncate_to(&self, d: i32) -> LaurentPoly {
        self.filter(|m| m.degree() <= d)
    }

    pub fn filter<F: Fn(&MultiIndex) -> bool>(&self, f: F) -> LaurentPoly {
        LaurentPoly { ring: self.ring, terms: self.terms.iter().filter(|(m, _)| f(m)).cloned().collect() }
    }

    pub fn lowest_degree(&self) -> Option<i32> {
        self.terms.iter().map(|(m, _)| m.degree()).min()
    }

    pub fn highest_degree(&self) -> Option<i32> {
        self.terms.iter().map(|(m, _)| m.degree()).max()
    }

    pub fn is_holomorphic(&self) -> bool {
        self.terms.iter().all(|(m, _)| m.is_nonnegative())
    }

    /// `allowance[k]` is the most negative exponent tolerated on coordinate k
    /// by the caller's frame context.
    pub fn holomorphy_class(&self, allowance: &[i32]) -> HolomorphyClass {
        if self.is_holomorphic() {
            return HolomorphyClass::Holomorphic;
        }
        let ok = self.terms.iter().all(|(m, _)| {
            (0..self.ring.n()).all(|k| m.get(k) >= allowance.get(k).copied().unwrap_or(0))
        });
        if ok {
            HolomorphyClass::LogarithmicOnly
        } else {
            HolomorphyClass::GenuinePole
        }
    }

    /// Terms not involving `z_k`, i.e. the restriction to `{z_k = 0}` of a
    /// series holomorphic in `z_k`.
    pub fn restrict_zero(&self, k: usize) -> LaurentPoly {
        self.filter(|m| m.get(k) == 0)
    }

    /// True if only `z_k` appears.
    pub fn depends_only_on(&self, k: usize) -> bool {
        self.terms.iter().all(|(m, _)| (0..self.ring.n()).all(|j| j == k || m.get(j) == 0))
    }

    pub fn evaluate(&self, point: &[Scalar]) -> Result<Scalar> {
        let n = self.ring.n();
        if point.len() != n {
            return Err(Error::InvalidArgument(format!("point has {} entries, expected {n}", point.len())));
        }
        let mut acc = Scalar::ZERO;
        for (m, c) in &self.terms {
            let mut v = c.clone();
            for (k, x) in point.iter().enumerate() {
                let e = m.get(k);
                if e > 0 {
                    v = &v * &x.pow(e as u32);
                } else if e < 0 {
                    if x.is_zero() {
                        return Err(Error::EvaluationAtPole { coord: k + 1 });
                    }
                    v = &v * &x.inv().pow((-e) as u32);
                }
            }
            acc += &v;
        }
        Ok(acc)
    }

    /// Multiplicative inverse of a series with invertible constant term,
    /// computed by the geometric series up to the truncation.
    pub fn inverse(&self) -> Result<LaurentPoly> {
        let c0 = self.constant_term();
        if c0.is_zero() || !self.is_holomorphic() {
            return Err(Error::NotInvertible(self.to_string()));
        }
        let inv0 = c0.inv();
        let nil = self.sub(&LaurentPoly::constant(self.ring, c0)).scale(&inv0).neg();
        let mut acc = LaurentPoly::one(self.ring);
        let mut p = LaurentPoly::one(self.ring);
        for _ in 0..self.ring.trunc.max(0) {
            p = p.mul(&nil);
            if p.is_zero() {
                break;
            }
            acc = acc.add(&p);
        }
        Ok(acc.scale(&inv0))
    }

    pub fn fmt_with(&self, labels: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let parts: Vec<String> = self.terms.iter().map(|(m, c)| fmt_term(c, m, labels, self.ring.n())).collect();
        parts.join("+")
    }
}

/// Coefficient text inside a product: complex values are parenthesised.
pub fn fmt_coeff(c: &Scalar) -> String {
    if c.is_real() {
        c.to_string()
    } else {
        format!("({c})")
    }
}

pub fn fmt_monomial(m: &MultiIndex, labels: &[String], n: usize) -> Vec<String> {
    let mut out = Vec::new();
    for k in 0..n {
        let e = m.get(k);
        match e {
            0 => {}
            1 => out.push(labels[k].clone()),
            _ => out.push(format!("{}^{e}", labels[k])),
        }
    }
    out
}

fn fmt_term(c: &Scalar, m: &MultiIndex, labels: &[String], n: usize) -> String {
    let mut parts = vec![fmt_coeff(c)];
    parts.extend(fmt_monomial(m, labels, n));
    parts.join("*")
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.fmt_with(&self.ring.default_labels()))
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// All exponent vectors with non-negative entries summing to `d` over the
/// given coordinates, in lexicographic order.
pub fn monomials_of_degree(coords: &[usize], d: i32) -> Vec<MultiIndex> {
    let mut out = Vec::new();
    fn rec(coords: &[usize], d: i32, cur: &mut [i32; MAX_COORDS], out: &mut Vec<MultiIndex>) {
        if coords.len() == 1 {
            cur[coords[0]] = d;
            out.push(MultiIndex::from_slice(&cur[..]));
            cur[coords[0]] = 0;
            return;
        }
        for e in 0..=d {
            cur[coords[0]] = e;
            rec(&coords[1..], d - e, cur, out);
        }
        cur[coords[0]] = 0;
    }
    if d < 0 {
        return out;
    }
    if coords.is_empty() {
        if d == 0 {
            out.push(MultiIndex::ZERO);
        }
        return out;
    }
    let mut cur = [0i32; MAX_COORDS];
    rec(coords, d, &mut cur, &mut out);
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring2() -> Ring {
        Ring::with_leading_logs(2, 2, 4, 1).unwrap()
    }

    #[test]
    fn truncation_drops_high_terms() {
        let r = Ring::with_leading_logs(1, 1, 1, 1).unwrap();
        let p = LaurentPoly::one(r).add(&LaurentPoly::var(r, 0));
        let sq = p.mul(&p);
        assert_eq!(sq.to_string(), "1+2*z1");
    }

    #[test]
    fn unit_pair() {
        let r = ring2();
        let inv = LaurentPoly::monomial(r, MultiIndex::from_slice(&[-1, 0]), Scalar::ONE);
        assert_eq!(LaurentPoly::var(r, 0).mul(&inv), LaurentPoly::one(r));
    }

    #[test]
    fn derivative_pole_budget() {
        let r = ring2();
        let inv = LaurentPoly::monomial(r, MultiIndex::from_slice(&[-1, 0]), Scalar::ONE);
        assert!(inv.partial_derivative(0).is_err());
        let f = LaurentPoly::from_terms(r, [(MultiIndex::from_slice(&[2, 1]), Scalar::ONE)]);
        assert_eq!(f.partial_derivative(0).unwrap().to_string(), "2*z1*z2");
        assert!(LaurentPoly::var(r, 0).partial_derivative(1).unwrap().is_zero());
    }

    #[test]
    fn classes() {
        let r = ring2();
        let a = LaurentPoly::monomial(r, MultiIndex::from_slice(&[-1, 0]), Scalar::ONE);
        let b = LaurentPoly::monomial(r, MultiIndex::from_slice(&[-1, -1]), Scalar::ONE);
        assert_eq!(a.holomorphy_class(&[-1, 0]), HolomorphyClass::LogarithmicOnly);
        assert_eq!(b.holomorphy_class(&[-1, 0]), HolomorphyClass::GenuinePole);
        assert_eq!(LaurentPoly::var(r, 0).holomorphy_class(&[0, 0]), HolomorphyClass::Holomorphic);
    }

    #[test]
    fn series_inverse() {
        let r = ring2();
        let g = LaurentPoly::one(r).add(&LaurentPoly::var(r, 0)).add(&LaurentPoly::var(r, 1).scale(&Scalar::int(3)));
        let gi = g.inverse().unwrap();
        assert_eq!(g.mul(&gi), LaurentPoly::one(r));
    }

    #[test]
    fn monomial_enumeration() {
        assert_eq!(monomials_of_degree(&[0, 1, 2], 2).len(), 6);
        assert_eq!(monomials_of_degree(&[0, 2], 0), vec![MultiIndex::ZERO]);
    }
}
