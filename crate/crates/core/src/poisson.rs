//! Polyvector fields, logarithmic forms and Poisson calculus.
//!
//! Components live in the logarithmic frame: `e_k = z_k d/dz_k` for log
//! coordinates and `e_k = d/dz_k` otherwise, with dual coframe `dz_k/z_k`
//! resp. `dz_k`. The frame fields commute, so every formula below is the
//! ordinary coordinate formula with `d/dz_k` replaced by the frame derivation
//! `D_k` (see [`LaurentPoly::frame_derivative`]).

use std::collections::BTreeMap;
use std::fmt;
use std::marker::PhantomData;

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::Scalar;
use crate::series::{fmt_coeff, fmt_monomial, HolomorphyClass, LaurentPoly, MultiIndex, Ring};

pub type Index = Vec<u8>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct Vect;
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct Form;

pub trait FrameKind: Clone + Copy + PartialEq + Eq + fmt::Debug + Default {
    /// Exponent of `z_k` converting a log-frame slot to the coordinate frame.
    const STD_SHIFT: i32;
}

impl FrameKind for Vect {
    const STD_SHIFT: i32 = 1;
}

impl FrameKind for Form {
    const STD_SHIFT: i32 = -1;
}

/// Antisymmetric tensor of fixed grade with strictly increasing index keys.
#[derive(Clone, PartialEq, Eq)]
pub struct Graded<K: FrameKind> {
    ring: Ring,
    grade: usize,
    comps: BTreeMap<Index, LaurentPoly>,
    _kind: PhantomData<K>,
}

pub type Polyvector = Graded<Vect>;
pub type LogForm = Graded<Form>;

/// Sorts `idx` in place, returning the permutation sign, or `None` on a
/// repeated index.
pub fn sort_sign(idx: &mut [u8]) -> Option<i32> {
    let mut sign = 1;
    for i in 1..idx.len() {
        let mut j = i;
        while j > 0 && idx[j - 1] > idx[j] {
            idx.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    if idx.windows(2).any(|w| w[0] == w[1]) {
        None
    } else {
        Some(sign)
    }
}

impl<K: FrameKind> Graded<K> {
    pub fn zero(ring: Ring, grade: usize) -> Self {
        Graded { ring, grade, comps: BTreeMap::new(), _kind: PhantomData }
    }

    pub fn function(f: LaurentPoly) -> Self {
        let mut g = Self::zero(f.ring(), 0);
        g.insert(Vec::new(), f);
        g
    }

    /// `f e_{i_1} ^ ... ^ e_{i_k}` with any index order.
    pub fn term(ring: Ring, idx: &[usize], f: LaurentPoly) -> Self {
        let mut g = Self::zero(ring, idx.len());
        g.add_term(idx, &f);
        g
    }

    /// Frame element with constant coefficient 1.
    pub fn basis(ring: Ring, idx: &[usize]) -> Self {
        Self::term(ring, idx, LaurentPoly::one(ring))
    }

    /// Vector (or 1-form) from a full list of frame coefficients.
    pub fn from_vec(ring: Ring, coeffs: Vec<LaurentPoly>) -> Self {
        assert_eq!(coeffs.len(), ring.n());
        let mut g = Self::zero(ring, 1);
        for (k, f) in coeffs.into_iter().enumerate() {
            g.insert(vec![k as u8], f);
        }
        g
    }

    fn insert(&mut self, idx: Index, f: LaurentPoly) {
        if f.is_zero() {
            self.comps.remove(&idx);
        } else {
            self.comps.insert(idx, f);
        }
    }

    /// Adds `f e_idx`, reordering the index with sign.
    pub fn add_term(&mut self, idx: &[usize], f: &LaurentPoly) {
        assert_eq!(idx.len(), self.grade, "grade mismatch");
        if f.is_zero() {
            return;
        }
        let mut key: Index = idx.iter().map(|&k| k as u8).collect();
        let Some(sign) = sort_sign(&mut key) else { return };
        let f = if sign < 0 { f.neg() } else { f.clone() };
        let cur = self.comps.get(&key).cloned().unwrap_or_else(|| LaurentPoly::zero(self.ring));
        self.insert(key, cur.add(&f));
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn grade(&self) -> usize {
        self.grade
    }

    pub fn components(&self) -> impl Iterator<Item = (&Index, &LaurentPoly)> {
        self.comps.iter()
    }

    pub fn get(&self, idx: &[usize]) -> LaurentPoly {
        let mut key: Index = idx.iter().map(|&k| k as u8).collect();
        match sort_sign(&mut key) {
            None => LaurentPoly::zero(self.ring),
            Some(s) => {
                let f = self.comps.get(&key).cloned().unwrap_or_else(|| LaurentPoly::zero(self.ring));
                if s < 0 {
                    f.neg()
                } else {
                    f
                }
            }
        }
    }

    /// Frame coefficient `k` of a grade-1 element.
    pub fn coeff(&self, k: usize) -> LaurentPoly {
        debug_assert_eq!(self.grade, 1);
        self.comps.get(&vec![k as u8]).cloned().unwrap_or_else(|| LaurentPoly::zero(self.ring))
    }

    pub fn coeffs(&self) -> Vec<LaurentPoly> {
        (0..self.ring.n()).map(|k| self.coeff(k)).collect()
    }

    /// The grade-0 value.
    pub fn value(&self) -> LaurentPoly {
        debug_assert_eq!(self.grade, 0);
        self.comps.get(&Vec::new()).cloned().unwrap_or_else(|| LaurentPoly::zero(self.ring))
    }

    pub fn is_zero(&self) -> bool {
        self.comps.is_empty()
    }

    fn zip_with(&self, o: &Self, f: impl Fn(&LaurentPoly, &LaurentPoly) -> LaurentPoly) -> Self {
        assert_eq!(self.ring, o.ring, "ring mismatch");
        assert_eq!(self.grade, o.grade, "grade mismatch");
        let mut out = Self::zero(self.ring, self.grade);
        let z = LaurentPoly::zero(self.ring);
        for key in self.comps.keys().chain(o.comps.keys()) {
            if out.comps.contains_key(key) {
                continue;
            }
            let a = self.comps.get(key).unwrap_or(&z);
            let b = o.comps.get(key).unwrap_or(&z);
            out.insert(key.clone(), f(a, b));
        }
        out
    }

    pub fn add(&self, o: &Self) -> Self {
        self.zip_with(o, |a, b| a.add(b))
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.zip_with(o, |a, b| a.sub(b))
    }

    pub fn neg(&self) -> Self {
        self.map(|f| f.neg())
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        self.map(|f| f.scale(c))
    }

    pub fn mul_fn(&self, g: &LaurentPoly) -> Self {
        self.map(|f| f.mul(g))
    }

    pub fn map(&self, h: impl Fn(&LaurentPoly) -> LaurentPoly) -> Self {
        let mut out = Self::zero(self.ring, self.grade);
        for (k, f) in &self.comps {
            out.insert(k.clone(), h(f));
        }
        out
    }

    pub fn degree_part(&self, d: i32) -> Self {
        self.map(|f| f.degree_part(d))
    }

    pub fn truncate_to(&self, d: i32) -> Self {
        self.map(|f| f.truncate_to(d))
    }

    pub fn in_ring(&self, ring: Ring) -> Self {
        let mut out = Self::zero(ring, self.grade);
        for (k, f) in &self.comps {
            out.insert(k.clone(), f.in_ring(ring));
        }
        out
    }

    pub fn lowest_degree(&self) -> Option<i32> {
        self.comps.values().filter_map(|f| f.lowest_degree()).min()
    }

    /// All log-frame coefficients holomorphic.
    pub fn is_log_holomorphic(&self) -> bool {
        self.comps.values().all(|f| f.is_holomorphic())
    }

    pub fn check_poles(&self, context: &str) -> Result<()> {
        self.comps.values().try_for_each(|f| f.check_poles(context))
    }

    /// Exterior product; zero when the grades exceed the dimension.
    pub fn wedge(&self, o: &Self) -> Self {
        assert_eq!(self.ring, o.ring, "ring mismatch");
        let mut out = Self::zero(self.ring, self.grade + o.grade);
        if self.grade + o.grade > self.ring.n() {
            return out;
        }
        for (i, f) in &self.comps {
            for (j, g) in &o.comps {
                if i.iter().any(|x| j.contains(x)) {
                    continue;
                }
                let idx: Vec<usize> = i.iter().chain(j.iter()).map(|&x| x as usize).collect();
                out.add_term(&idx, &f.mul(g));
            }
        }
        out
    }

    /// Components in the coordinate frame `d/dz` (vectors) or `dz` (forms).
    pub fn standard_components(&self) -> Vec<(Index, LaurentPoly)> {
        self.comps.iter().map(|(k, f)| (k.clone(), f.mul_term(&self.slot_shift(k, K::STD_SHIFT), &Scalar::ONE))).collect()
    }

    /// Builds from coordinate-frame components.
    pub fn from_standard(ring: Ring, grade: usize, comps: Vec<(Vec<usize>, LaurentPoly)>) -> Self {
        let mut out = Self::zero(ring, grade);
        for (idx, f) in comps {
            let key: Index = idx.iter().map(|&k| k as u8).collect();
            let g = f.mul_term(&out.slot_shift(&key, -K::STD_SHIFT), &Scalar::ONE);
            out.add_term(&idx, &g);
        }
        out
    }

    fn slot_shift(&self, key: &Index, s: i32) -> MultiIndex {
        let mut m = MultiIndex::ZERO;
        for &k in key {
            if self.ring.is_log(k as usize) {
                m = m.with(k as usize, m.get(k as usize) + s);
            }
        }
        m
    }

    pub fn fmt_with(&self, labels: &[String]) -> String {
        let n = self.ring.n();
        let mut parts = Vec::new();
        for (key, f) in &self.comps {
            let frame: Vec<String> = key
                .iter()
                .map(|&k| {
                    let k = k as usize;
                    if self.ring.is_log(k) {
                        format!("L{}", labels[k])
                    } else {
                        format!("d{}", labels[k])
                    }
                })
                .collect();
            for (m, c) in f.terms() {
                let mut factors = vec![fmt_coeff(c)];
                factors.extend(fmt_monomial(m, labels, n));
                if !frame.is_empty() {
                    factors.push(frame.join("^"));
                }
                parts.push(factors.join("*"));
            }
        }
        if parts.is_empty() {
            "0".to_string()
        } else {
            parts.join("+")
        }
    }
}

impl<K: FrameKind> fmt::Display for Graded<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.fmt_with(&self.ring.default_labels()))
    }
}

impl<K: FrameKind> fmt::Debug for Graded<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Standard-frame class of a vector field: holomorphic or a genuine pole.
pub fn vector_class(v: &Polyvector) -> HolomorphyClass {
    let zero = vec![0; v.ring().n()];
    worst(v.standard_components().iter().map(|(_, f)| f.holomorphy_class(&zero)))
}

/// Class of a form: holomorphic, logarithmic (a simple pole only in the
/// `dz_k` slot of a log coordinate `z_k`), or a genuine pole.
pub fn form_class(a: &LogForm) -> HolomorphyClass {
    let ring = a.ring();
    worst(a.standard_components().iter().map(|(key, f)| {
        let mut allow = vec![0; ring.n()];
        for &k in key {
            if ring.is_log(k as usize) {
                allow[k as usize] = -1;
            }
        }
        f.holomorphy_class(&allow)
    }))
}

fn worst(it: impl Iterator<Item = HolomorphyClass>) -> HolomorphyClass {
    let mut out = HolomorphyClass::Holomorphic;
    for c in it {
        match (out, c) {
            (_, HolomorphyClass::GenuinePole) => return HolomorphyClass::GenuinePole,
            (HolomorphyClass::Holomorphic, HolomorphyClass::LogarithmicOnly) => out = c,
            _ => {}
        }
    }
    out
}

impl Polyvector {
    /// `v(f) = sum_m v^m D_m f` for a grade-1 field.
    pub fn apply(&self, f: &LaurentPoly) -> LaurentPoly {
        debug_assert_eq!(self.grade, 1);
        let mut acc = LaurentPoly::zero(self.ring);
        for (k, vk) in &self.comps {
            let df = f.frame_derivative(k[0] as usize);
            if !df.is_zero() {
                acc = acc.add(&vk.mul(&df));
            }
        }
        acc
    }

    /// Lie derivative of `self` along the grade-1 field `v`.
    pub fn lie(&self, v: &Polyvector) -> Polyvector {
        assert_eq!(v.grade, 1, "Lie derivative needs a vector field");
        let n = self.ring.n();
        // dv[j][m] = D_j(v^m)
        let dv: Vec<Vec<LaurentPoly>> =
            (0..n).map(|j| (0..n).map(|m| v.coeff(m).frame_derivative(j)).collect()).collect();
        let mut out = Polyvector::zero(self.ring, self.grade);
        for (key, p) in &self.comps {
            let idx: Vec<usize> = key.iter().map(|&k| k as usize).collect();
            out.add_term(&idx, &v.apply(p));
            for s in 0..idx.len() {
                for m in 0..n {
                    let d = &dv[idx[s]][m];
                    if d.is_zero() {
                        continue;
                    }
                    let mut j = idx.clone();
                    j[s] = m;
                    out.add_term(&j, &p.mul(d).neg());
                }
            }
        }
        out
    }

    /// Interior product `i_alpha` of a 1-form into the first slot.
    pub fn contract(&self, alpha: &LogForm) -> Polyvector {
        assert_eq!(alpha.grade, 1);
        assert!(self.grade >= 1);
        let mut out = Polyvector::zero(self.ring, self.grade - 1);
        for (key, p) in &self.comps {
            for s in 0..key.len() {
                let a = alpha.coeff(key[s] as usize);
                if a.is_zero() {
                    continue;
                }
                let rest: Vec<usize> = key.iter().enumerate().filter(|&(t, _)| t != s).map(|(_, &k)| k as usize).collect();
                let c = p.mul(&a);
                out.add_term(&rest, &if s % 2 == 1 { c.neg() } else { c });
            }
        }
        out
    }
}

impl LogForm {
    /// `df = sum_k D_k f eps^k`.
    pub fn differential(f: &LaurentPoly) -> LogForm {
        let ring = f.ring();
        LogForm::from_vec(ring, (0..ring.n()).map(|k| f.frame_derivative(k)).collect())
    }

    /// Exterior derivative of a 1-form.
    pub fn d1(&self) -> LogForm {
        assert_eq!(self.grade, 1);
        let n = self.ring.n();
        let mut out = LogForm::zero(self.ring, 2);
        for j in 0..n {
            for k in j + 1..n {
                let c = self.coeff(k).frame_derivative(j).sub(&self.coeff(j).frame_derivative(k));
                out.add_term(&[j, k], &c);
            }
        }
        out
    }

    /// Pairing with a vector field.
    pub fn eval(&self, v: &Polyvector) -> LaurentPoly {
        assert_eq!(self.grade, 1);
        let mut acc = LaurentPoly::zero(self.ring);
        for (k, a) in &self.comps {
            let b = v.coeff(k[0] as usize);
            if !b.is_zero() {
                acc = acc.add(&a.mul(&b));
            }
        }
        acc
    }

    /// Lie derivative of a 1-form along `v`:
    /// `(L_v beta)_j = v(beta_j) + sum_m beta_m D_j(v^m)`.
    pub fn lie(&self, v: &Polyvector) -> LogForm {
        assert_eq!(self.grade, 1);
        let n = self.ring.n();
        let mut out = Vec::with_capacity(n);
        for j in 0..n {
            let mut c = v.apply(&self.coeff(j));
            for (m, bm) in &self.comps {
                let d = v.coeff(m[0] as usize).frame_derivative(j);
                if !d.is_zero() {
                    c = c.add(&bm.mul(&d));
                }
            }
            out.push(c);
        }
        LogForm::from_vec(self.ring, out)
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PoissonStructure {
    sigma: Polyvector,
}

#[derive(Clone, PartialEq, Debug)]
pub enum JacobiVerdict {
    Poisson,
    Violation { i: usize, j: usize, k: usize, witness: LaurentPoly },
}

/// Bracket result together with the class of each coordinate-frame coefficient.
#[derive(Clone, Debug)]
pub struct KoszulResult {
    pub bracket: LogForm,
    pub classes: Vec<(Index, HolomorphyClass)>,
    pub class: HolomorphyClass,
}

impl PoissonStructure {
    pub fn new(sigma: Polyvector) -> Result<Self> {
        if sigma.grade() != 2 {
            return Err(Error::InvalidArgument(format!("Poisson bivector must have grade 2, got {}", sigma.grade())));
        }
        Ok(PoissonStructure { sigma })
    }

    pub fn zero(ring: Ring) -> Self {
        PoissonStructure { sigma: Polyvector::zero(ring, 2) }
    }

    /// `{z_i, z_j} = c_ij z_i z_j` from an antisymmetric constant matrix;
    /// only the upper triangle is read.
    pub fn log_canonical(ring: Ring, c: &Matrix) -> Self {
        let n = ring.n();
        let mut comps = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let m = MultiIndex::unit(i).add(&MultiIndex::unit(j));
                comps.push((vec![i, j], LaurentPoly::monomial(ring, m, c.get(i, j).clone())));
            }
        }
        PoissonStructure { sigma: Polyvector::from_standard(ring, 2, comps) }
    }

    pub fn sigma(&self) -> &Polyvector {
        &self.sigma
    }

    pub fn ring(&self) -> Ring {
        self.sigma.ring()
    }

    pub fn in_ring(&self, ring: Ring) -> Self {
        PoissonStructure { sigma: self.sigma.in_ring(ring) }
    }

    /// `sigma(alpha, beta)`.
    pub fn pairing(&self, alpha: &LogForm, beta: &LogForm) -> LaurentPoly {
        let mut acc = LaurentPoly::zero(self.ring());
        for (key, s) in self.sigma.components() {
            let (a, b) = (key[0] as usize, key[1] as usize);
            let t = alpha.coeff(a).mul(&beta.coeff(b)).sub(&alpha.coeff(b).mul(&beta.coeff(a)));
            if !t.is_zero() {
                acc = acc.add(&s.mul(&t));
            }
        }
        acc
    }

    /// `sigma#(alpha) = sigma(alpha, .)`.
    pub fn anchor(&self, alpha: &LogForm) -> Polyvector {
        self.sigma.contract(alpha)
    }

    pub fn bracket(&self, f: &LaurentPoly, g: &LaurentPoly) -> LaurentPoly {
        self.pairing(&LogForm::differential(f), &LogForm::differential(g))
    }

    /// Hamiltonian vector field `X_f = sigma#(df)`.
    pub fn hamiltonian(&self, f: &LaurentPoly) -> Polyvector {
        self.anchor(&LogForm::differential(f))
    }

    /// Poisson differential on functions, computed through the vector field
    /// derivation rule `X_f(g) = {f, g}` rather than through the anchor.
    pub fn delta_function(&self, f: &LaurentPoly) -> Polyvector {
        let ring = self.ring();
        let n = ring.n();
        let mut coeffs = vec![LaurentPoly::zero(ring); n];
        for (key, s) in self.sigma.components() {
            let (a, b) = (key[0] as usize, key[1] as usize);
            coeffs[b] = coeffs[b].add(&s.mul(&f.frame_derivative(a)));
            coeffs[a] = coeffs[a].sub(&s.mul(&f.frame_derivative(b)));
        }
        Polyvector::from_vec(ring, coeffs)
    }

    /// `delta(v) = L_v sigma`.
    pub fn delta_vector(&self, v: &Polyvector) -> Polyvector {
        self.sigma.lie(v)
    }

    /// Poisson differential on grades 0 and 1.
    pub fn lichnerowicz(&self, x: &Polyvector) -> Result<Polyvector> {
        let out = match x.grade() {
            0 => self.delta_function(&x.value()),
            1 => self.delta_vector(x),
            g => return Err(Error::InvalidArgument(format!("Poisson differential implemented for grades 0 and 1, got {g}"))),
        };
        out.check_poles("Poisson differential")?;
        Ok(out)
    }

    pub fn coordinate(&self, k: usize) -> LaurentPoly {
        LaurentPoly::var(self.ring(), k)
    }

    pub fn jacobiator(&self, i: usize, j: usize, k: usize) -> LaurentPoly {
        let z = |t| self.coordinate(t);
        let b = |f: &LaurentPoly, g: &LaurentPoly| self.bracket(f, g);
        b(&b(&z(i), &z(j)), &z(k)).add(&b(&b(&z(j), &z(k)), &z(i))).add(&b(&b(&z(k), &z(i)), &z(j)))
    }

    pub fn check_jacobi(&self) -> JacobiVerdict {
        let n = self.ring().n();
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    let w = self.jacobiator(i, j, k);
                    if !w.is_zero() {
                        return JacobiVerdict::Violation { i, j, k, witness: w };
                    }
                }
            }
        }
        JacobiVerdict::Poisson
    }

    /// `[alpha, beta] = L_{sigma# alpha} beta - L_{sigma# beta} alpha - d sigma(alpha, beta)`.
    pub fn koszul(&self, alpha: &LogForm, beta: &LogForm) -> Result<KoszulResult> {
        if alpha.grade() != 1 || beta.grade() != 1 {
            return Err(Error::InvalidArgument("Koszul bracket takes 1-forms".into()));
        }
        let a = self.anchor(alpha);
        let b = self.anchor(beta);
        let bracket = beta.lie(&a).sub(&alpha.lie(&b)).sub(&LogForm::differential(&self.pairing(alpha, beta)));
        bracket.check_poles("Koszul bracket")?;
        let ring = self.ring();
        let classes: Vec<(Index, HolomorphyClass)> = bracket
            .components()
            .map(|(key, f)| {
                let single = LogForm::term(ring, &key.iter().map(|&k| k as usize).collect::<Vec<_>>(), f.clone());
                (key.clone(), form_class(&single))
            })
            .collect();
        let class = form_class(&bracket);
        Ok(KoszulResult { bracket, classes, class })
    }

    /// Coordinate-frame coefficient matrix of sigma.
    pub fn standard_matrix(&self) -> Vec<Vec<LaurentPoly>> {
        let ring = self.ring();
        let n = ring.n();
        let mut m = vec![vec![LaurentPoly::zero(ring); n]; n];
        for (key, f) in self.sigma.standard_components() {
            let (a, b) = (key[0] as usize, key[1] as usize);
            m[b][a] = f.neg();
            m[a][b] = f;
        }
        m
    }

    /// Rank of sigma at a point, evaluated in the coordinate frame.
    pub fn rank_at(&self, point: &[Scalar]) -> Result<usize> {
        let n = self.ring().n();
        if point.len() != n {
            return Err(Error::InvalidArgument(format!("point has {} entries, expected {n}", point.len())));
        }
        let m = self.standard_matrix();
        let mut vals = vec![vec![Scalar::ZERO; n]; n];
        for i in 0..n {
            for j in 0..n {
                vals[i][j] = m[i][j].evaluate(point)?;
            }
        }
        Ok(Matrix::from_rows(vals).rank())
    }
}
