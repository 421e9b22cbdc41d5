//! Connection matrices, gauge action, curvature and residues.
//!
//! Conventions: a frame `e` of the module satisfies `nabla e = Theta e`, so
//! `nabla e_a = sum_b Theta_ab e_b`. A gauge change `e' = g e` acts by
//! `Theta' = (delta g) g^-1 + g Theta g^-1` and the curvature that transforms
//! as `K' = g K g^-1` under it is `delta Theta - Theta ^ Theta` with
//! `(Theta ^ Theta)_ab = sum_c Theta_ac ^ Theta_cb`.
//! [`poisson_curvature_column`] gives the transposed convention
//! `delta Theta + Theta ^ Theta`, which is `K(Theta^T)^T`.

use std::fmt;

use crate::chart::{H3Verdict, LogChart};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::poisson::Polyvector;
use crate::scalar::Scalar;
use crate::series::{LaurentPoly, Ring};

/// Square matrix whose entries are polyvectors of one grade.
#[derive(Clone, PartialEq, Eq)]
pub struct PvMatrix {
    ring: Ring,
    e: usize,
    grade: usize,
    entries: Vec<Polyvector>,
}

/// Grade-1 entries: the connection matrix in the log frame.
pub type ConnMatrix = PvMatrix;

/// Square matrix of series: gauge transformations and their corrections.
#[derive(Clone, PartialEq, Eq)]
pub struct GaugeMatrix {
    ring: Ring,
    e: usize,
    entries: Vec<LaurentPoly>,
}

/// Constant residue matrices, one per log coordinate of the chart.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ResidueTuple {
    mats: Vec<Matrix>,
}

impl ResidueTuple {
    pub fn new(mats: Vec<Matrix>) -> Result<Self> {
        let e = mats.first().map_or(0, |m| m.rows());
        if mats.iter().any(|m| m.rows() != e || m.cols() != e) {
            return Err(Error::InvalidArgument("residue matrices must be square of one size".into()));
        }
        Ok(ResidueTuple { mats })
    }

    pub fn zero(r: usize, e: usize) -> Self {
        ResidueTuple { mats: vec![Matrix::zeros(e, e); r] }
    }

    pub fn mats(&self) -> &[Matrix] {
        &self.mats
    }

    pub fn len(&self) -> usize {
        self.mats.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mats.is_empty()
    }

    pub fn rank(&self) -> usize {
        self.mats.first().map_or(0, |m| m.rows())
    }

    /// Simultaneous conjugation `M A_i M^-1`.
    pub fn conjugate(&self, m: &Matrix) -> Option<Self> {
        let mi = m.inverse()?;
        Some(ResidueTuple { mats: self.mats.iter().map(|a| m.mul(a).mul(&mi)).collect() })
    }
}

impl PvMatrix {
    pub fn zero(ring: Ring, e: usize, grade: usize) -> Self {
        PvMatrix { ring, e, grade, entries: vec![Polyvector::zero(ring, grade); e * e] }
    }

    pub fn from_entries(ring: Ring, e: usize, entries: Vec<Polyvector>) -> Result<Self> {
        if entries.len() != e * e {
            return Err(Error::InvalidArgument(format!("expected {} entries, got {}", e * e, entries.len())));
        }
        let grade = entries.first().map_or(1, |p| p.grade());
        if entries.iter().any(|p| p.grade() != grade || p.ring() != ring) {
            return Err(Error::InvalidArgument("matrix entries must share ring and grade".into()));
        }
        Ok(PvMatrix { ring, e, grade, entries })
    }

    /// `A (x) X`: every entry is `A_ab X`.
    pub fn kron(a: &Matrix, x: &Polyvector) -> Self {
        let e = a.rows();
        let entries = (0..e * e).map(|i| x.scale(a.get(i / e, i % e))).collect();
        PvMatrix { ring: x.ring(), e, grade: x.grade(), entries }
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn rank(&self) -> usize {
        self.e
    }

    pub fn grade(&self) -> usize {
        self.grade
    }

    pub fn get(&self, a: usize, b: usize) -> &Polyvector {
        &self.entries[a * self.e + b]
    }

    pub fn set(&mut self, a: usize, b: usize, p: Polyvector) {
        assert_eq!(p.grade(), self.grade);
        self.entries[a * self.e + b] = p;
    }

    pub fn entries(&self) -> &[Polyvector] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|p| p.is_zero())
    }

    pub fn map(&self, f: impl Fn(&Polyvector) -> Polyvector) -> Self {
        let entries: Vec<Polyvector> = self.entries.iter().map(f).collect();
        let grade = entries.first().map_or(self.grade, |p| p.grade());
        PvMatrix { ring: self.ring, e: self.e, grade, entries }
    }

    fn zip(&self, o: &Self, f: impl Fn(&Polyvector, &Polyvector) -> Polyvector) -> Self {
        assert_eq!(self.e, o.e, "rank mismatch");
        PvMatrix {
            ring: self.ring,
            e: self.e,
            grade: self.grade,
            entries: self.entries.iter().zip(&o.entries).map(|(a, b)| f(a, b)).collect(),
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        self.zip(o, |a, b| a.add(b))
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.zip(o, |a, b| a.sub(b))
    }

    pub fn neg(&self) -> Self {
        self.map(|p| p.neg())
    }

    pub fn degree_part(&self, d: i32) -> Self {
        self.map(|p| p.degree_part(d))
    }

    pub fn truncate_to(&self, d: i32) -> Self {
        self.map(|p| p.truncate_to(d))
    }

    pub fn in_ring(&self, ring: Ring) -> Self {
        PvMatrix { ring, e: self.e, grade: self.grade, entries: self.entries.iter().map(|p| p.in_ring(ring)).collect() }
    }

    pub fn lowest_degree(&self) -> Option<i32> {
        self.entries.iter().filter_map(|p| p.lowest_degree()).min()
    }

    pub fn transpose(&self) -> Self {
        let e = self.e;
        let entries = (0..e * e).map(|i| self.get(i % e, i / e).clone()).collect();
        PvMatrix { ring: self.ring, e, grade: self.grade, entries }
    }

    /// All entries have holomorphic log-frame coefficients.
    pub fn is_log_holomorphic(&self) -> bool {
        self.entries.iter().all(|p| p.is_log_holomorphic())
    }

    /// `(self ^ o)_ab = sum_c self_ac ^ o_cb`.
    pub fn wedge(&self, o: &Self) -> Self {
        assert_eq!(self.e, o.e);
        let e = self.e;
        let mut out = PvMatrix::zero(self.ring, e, self.grade + o.grade);
        for a in 0..e {
            for b in 0..e {
                let mut acc = Polyvector::zero(self.ring, self.grade + o.grade);
                for c in 0..e {
                    let (x, y) = (self.get(a, c), o.get(c, b));
                    if !x.is_zero() && !y.is_zero() {
                        acc = acc.add(&x.wedge(y));
                    }
                }
                out.entries[a * e + b] = acc;
            }
        }
        out
    }

    /// `g * self`.
    pub fn left_mul(&self, g: &GaugeMatrix) -> Self {
        let e = self.e;
        let mut out = PvMatrix::zero(self.ring, e, self.grade);
        for a in 0..e {
            for b in 0..e {
                let mut acc = Polyvector::zero(self.ring, self.grade);
                for c in 0..e {
                    let (f, p) = (g.get(a, c), self.get(c, b));
                    if !f.is_zero() && !p.is_zero() {
                        acc = acc.add(&p.mul_fn(f));
                    }
                }
                out.entries[a * e + b] = acc;
            }
        }
        out
    }

    /// `self * g`.
    pub fn right_mul(&self, g: &GaugeMatrix) -> Self {
        let e = self.e;
        let mut out = PvMatrix::zero(self.ring, e, self.grade);
        for a in 0..e {
            for b in 0..e {
                let mut acc = Polyvector::zero(self.ring, self.grade);
                for c in 0..e {
                    let (p, f) = (self.get(a, c), g.get(c, b));
                    if !f.is_zero() && !p.is_zero() {
                        acc = acc.add(&p.mul_fn(f));
                    }
                }
                out.entries[a * e + b] = acc;
            }
        }
        out
    }

    /// `[G, self] = G self - self G` for a series matrix `G`.
    pub fn commutator_with(&self, g: &GaugeMatrix) -> Self {
        self.left_mul(g).sub(&self.right_mul(g))
    }

    pub fn fmt_with(&self, labels: &[String]) -> String {
        let rows: Vec<String> = (0..self.e)
            .map(|a| {
                let cells: Vec<String> = (0..self.e).map(|b| self.get(a, b).fmt_with(labels)).collect();
                format!("[{}]", cells.join(", "))
            })
            .collect();
        format!("[{}]", rows.join(", "))
    }
}

impl fmt::Display for PvMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.fmt_with(&self.ring.default_labels()))
    }
}

impl fmt::Debug for PvMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl GaugeMatrix {
    pub fn zero(ring: Ring, e: usize) -> Self {
        GaugeMatrix { ring, e, entries: vec![LaurentPoly::zero(ring); e * e] }
    }

    pub fn identity(ring: Ring, e: usize) -> Self {
        Self::constant(ring, &Matrix::identity(e))
    }

    pub fn constant(ring: Ring, m: &Matrix) -> Self {
        let e = m.rows();
        let entries = (0..e * e).map(|i| LaurentPoly::constant(ring, m.get(i / e, i % e).clone())).collect();
        GaugeMatrix { ring, e, entries }
    }

    pub fn from_entries(ring: Ring, e: usize, entries: Vec<LaurentPoly>) -> Result<Self> {
        if entries.len() != e * e || entries.iter().any(|f| f.ring() != ring) {
            return Err(Error::InvalidArgument("gauge matrix entries must be e*e series in the chart ring".into()));
        }
        Ok(GaugeMatrix { ring, e, entries })
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn rank(&self) -> usize {
        self.e
    }

    pub fn get(&self, a: usize, b: usize) -> &LaurentPoly {
        &self.entries[a * self.e + b]
    }

    pub fn set(&mut self, a: usize, b: usize, f: LaurentPoly) {
        self.entries[a * self.e + b] = f;
    }

    pub fn entries(&self) -> &[LaurentPoly] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|f| f.is_zero())
    }

    pub fn is_holomorphic(&self) -> bool {
        self.entries.iter().all(|f| f.is_holomorphic())
    }

    pub fn map(&self, h: impl Fn(&LaurentPoly) -> LaurentPoly) -> Self {
        GaugeMatrix { ring: self.ring, e: self.e, entries: self.entries.iter().map(h).collect() }
    }

    pub fn add(&self, o: &Self) -> Self {
        GaugeMatrix { ring: self.ring, e: self.e, entries: self.entries.iter().zip(&o.entries).map(|(a, b)| a.add(b)).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        GaugeMatrix { ring: self.ring, e: self.e, entries: self.entries.iter().zip(&o.entries).map(|(a, b)| a.sub(b)).collect() }
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        self.map(|f| f.scale(c))
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.e, o.e);
        let e = self.e;
        let mut out = GaugeMatrix::zero(self.ring, e);
        for a in 0..e {
            for b in 0..e {
                let mut acc = LaurentPoly::zero(self.ring);
                for c in 0..e {
                    let (x, y) = (self.get(a, c), o.get(c, b));
                    if !x.is_zero() && !y.is_zero() {
                        acc = acc.add(&x.mul(y));
                    }
                }
                out.entries[a * e + b] = acc;
            }
        }
        out
    }

    pub fn constant_part(&self) -> Matrix {
        let e = self.e;
        Matrix::from_fn(e, e, |a, b| self.get(a, b).constant_term())
    }

    pub fn degree_part(&self, d: i32) -> Self {
        self.map(|f| f.degree_part(d))
    }

    pub fn in_ring(&self, ring: Ring) -> Self {
        GaugeMatrix { ring, e: self.e, entries: self.entries.iter().map(|f| f.in_ring(ring)).collect() }
    }

    /// Coefficient matrix of the monomial `z^m`.
    pub fn coefficient_matrix(&self, m: &crate::series::MultiIndex) -> Matrix {
        let e = self.e;
        Matrix::from_fn(e, e, |a, b| self.get(a, b).coeff(m))
    }

    /// All exponent vectors occurring in some entry.
    pub fn support(&self) -> Vec<crate::series::MultiIndex> {
        let mut s: Vec<_> = self.entries.iter().flat_map(|f| f.terms().iter().map(|(m, _)| *m)).collect();
        s.sort();
        s.dedup();
        s
    }

    /// Inverse modulo `m^(trunc+1)`: `sum_k (-g0^-1 N)^k g0^-1` with
    /// `g = g0 + N`.
    pub fn inverse(&self) -> Result<Self> {
        if !self.is_holomorphic() {
            return Err(Error::NotInvertible("gauge matrix has poles".into()));
        }
        let g0 = self.constant_part();
        let g0i = g0.inverse().ok_or_else(|| Error::NotInvertible(format!("constant term {g0} is singular")))?;
        let g0i_s = GaugeMatrix::constant(self.ring, &g0i);
        let nil = self.sub(&GaugeMatrix::constant(self.ring, &g0));
        if nil.is_zero() {
            return Ok(g0i_s);
        }
        let step = g0i_s.mul(&nil).scale(&Scalar::int(-1));
        let mut acc = GaugeMatrix::identity(self.ring, self.e);
        let mut p = acc.clone();
        for _ in 0..self.ring.trunc() {
            p = p.mul(&step);
            if p.is_zero() {
                break;
            }
            acc = acc.add(&p);
        }
        Ok(acc.mul(&g0i_s))
    }

    /// Entrywise Poisson differential `delta g`.
    pub fn delta(&self, chart: &LogChart) -> ConnMatrix {
        let p = chart.poisson();
        PvMatrix {
            ring: self.ring,
            e: self.e,
            grade: 1,
            entries: self.entries.iter().map(|f| p.delta_function(f)).collect(),
        }
    }

    /// `g A_i = A_i g` coefficientwise for every residue; first failing index.
    pub fn centralizer_failure(&self, a: &ResidueTuple) -> Option<usize> {
        let support = self.support();
        for (i, ai) in a.mats().iter().enumerate() {
            for m in &support {
                let c = self.coefficient_matrix(m);
                if !c.commutator(ai).is_zero() {
                    return Some(i);
                }
            }
        }
        None
    }

    pub fn fmt_with(&self, labels: &[String]) -> String {
        let rows: Vec<String> = (0..self.e)
            .map(|a| {
                let cells: Vec<String> = (0..self.e).map(|b| self.get(a, b).fmt_with(labels)).collect();
                format!("[{}]", cells.join(", "))
            })
            .collect();
        format!("[{}]", rows.join(", "))
    }
}

impl fmt::Display for GaugeMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.fmt_with(&self.ring.default_labels()))
    }
}

impl fmt::Debug for GaugeMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Entrywise `delta Theta = L_Theta sigma`.
pub fn delta_matrix(chart: &LogChart, theta: &ConnMatrix) -> PvMatrix {
    let p = chart.poisson();
    theta.map(|v| p.delta_vector(v))
}

/// `Theta_0 = sum_i A_i X_i` over the log coordinates of the chart.
pub fn ep_principal(chart: &LogChart, a: &ResidueTuple) -> Result<ConnMatrix> {
    if a.len() != chart.r() {
        return Err(Error::InvalidArgument(format!(
            "{} residue matrices for {} log coordinates",
            a.len(),
            chart.r()
        )));
    }
    if let H3Verdict::Failure { coord, witness } = chart.check_h3() {
        return Err(Error::H3Failure { component: coord, witness: witness.fmt_with(chart.labels()) });
    }
    let e = a.rank();
    let mut out = PvMatrix::zero(chart.ring(), e, 1);
    for (ai, x) in a.mats().iter().zip(chart.log_hamiltonians()) {
        out = out.add(&PvMatrix::kron(ai, &x));
    }
    Ok(out)
}

/// Curvature `delta Theta - Theta ^ Theta`, covariant under [`gauge_transform`].
pub fn poisson_curvature(chart: &LogChart, theta: &ConnMatrix) -> PvMatrix {
    delta_matrix(chart, theta).sub(&theta.wedge(theta))
}

/// `delta Theta + Theta ^ Theta`, the curvature for `nabla e_a = sum_b Theta_ba e_b`.
pub fn poisson_curvature_column(chart: &LogChart, theta: &ConnMatrix) -> PvMatrix {
    delta_matrix(chart, theta).add(&theta.wedge(theta))
}

/// `Theta' = (delta g) g^-1 + g Theta g^-1`.
pub fn gauge_transform(chart: &LogChart, theta: &ConnMatrix, g: &GaugeMatrix) -> Result<ConnMatrix> {
    if g.rank() != theta.rank() {
        return Err(Error::InvalidArgument("gauge and connection ranks differ".into()));
    }
    let gi = g.inverse()?;
    Ok(gauge_transform_with_inverse(chart, theta, g, &gi))
}

pub(crate) fn gauge_transform_with_inverse(
    chart: &LogChart,
    theta: &ConnMatrix,
    g: &GaugeMatrix,
    gi: &GaugeMatrix,
) -> ConnMatrix {
    g.delta(chart).right_mul(gi).add(&theta.left_mul(g).right_mul(gi))
}

/// Splits `Theta = sum_i A_i X_i + V` with the constant log-frame part of
/// every entry of `V` vanishing on the pivot coordinates of the matrix whose
/// rows are the `X_i(0)`.
pub fn extract_principal(chart: &LogChart, theta: &ConnMatrix) -> Result<(ResidueTuple, ConnMatrix)> {
    let xs = chart.log_hamiltonians();
    let r = xs.len();
    let n = chart.n();
    let x0 = Matrix::from_fn(r, n, |i, k| xs[i].coeff(k).constant_term());
    let rref = x0.rref();
    if rref.pivots.len() < r {
        return Err(Error::DegenerateGenerators { rank: rref.pivots.len(), needed: r });
    }
    let pivots = rref.pivots;
    // sub[p][i] = X_i(0)[pivot p]; solve sub * a = theta0[pivots].
    let sub = Matrix::from_fn(r, r, |p, i| x0.get(i, pivots[p]).clone());
    let sub_inv = sub.inverse().expect("pivot block is invertible");
    let e = theta.rank();
    let mut mats = vec![Matrix::zeros(e, e); r];
    for a in 0..e {
        for b in 0..e {
            let ent = theta.get(a, b);
            let rhs: Vec<Scalar> = pivots.iter().map(|&p| ent.coeff(p).constant_term()).collect();
            let sol = sub_inv.mul_vec(&rhs);
            for (i, v) in sol.into_iter().enumerate() {
                mats[i].set(a, b, v);
            }
        }
    }
    let a = ResidueTuple { mats };
    let mut theta0 = PvMatrix::zero(chart.ring(), e, 1);
    for (ai, x) in a.mats().iter().zip(&xs) {
        theta0 = theta0.add(&PvMatrix::kron(ai, x));
    }
    let v = theta.sub(&theta0);
    Ok((a, v))
}

/// `delta Y + Theta^T Y`: the components of `nabla (sum_a Y_a e_a)`.
pub fn horizontal_defect(chart: &LogChart, theta: &ConnMatrix, y: &[LaurentPoly]) -> Result<Vec<Polyvector>> {
    let e = theta.rank();
    if y.len() != e {
        return Err(Error::InvalidArgument(format!("section has {} entries, expected {e}", y.len())));
    }
    let p = chart.poisson();
    let mut out = Vec::with_capacity(e);
    for b in 0..e {
        let mut acc = p.delta_function(&y[b]);
        for (a, ya) in y.iter().enumerate() {
            if !ya.is_zero() {
                acc = acc.add(&theta.get(a, b).mul_fn(ya));
            }
        }
        out.push(acc);
    }
    Ok(out)
}
