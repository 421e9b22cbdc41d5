//! Rank-two trace-free connections given by triples `(u, v, w)` and the
//! quadratic family `L(1,1,1,1)` on `C^4`.

use std::collections::BTreeMap;

use crate::chart::LogChart;
use crate::connection::{poisson_curvature, poisson_curvature_column, ConnMatrix, PvMatrix};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::poisson::{PoissonStructure, Polyvector};
use crate::scalar::Scalar;
use crate::series::{monomials_of_degree, LaurentPoly, MultiIndex, Ring};

#[derive(Clone, Debug, PartialEq)]
pub struct PoissonTriple {
    pub u: Polyvector,
    pub v: Polyvector,
    pub w: Polyvector,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum McEquation {
    /// `delta(u) = -2 u ^ v`
    U,
    /// `delta(v) = u ^ w`
    V,
    /// `delta(w) = -2 v ^ w`
    W,
}

#[derive(Clone, Debug, PartialEq)]
pub struct McReport {
    /// Each failing equation with `lhs - rhs`.
    pub violations: Vec<(McEquation, Polyvector)>,
    /// Curvature of [`triple_to_theta`] vanishes.
    pub curvature_zero: bool,
}

impl McReport {
    pub fn flat(&self) -> bool {
        self.violations.is_empty()
    }
}

impl PoissonTriple {
    pub fn new(u: Polyvector, v: Polyvector, w: Polyvector) -> Result<Self> {
        let ring = u.ring();
        if v.ring() != ring || w.ring() != ring {
            return Err(Error::RingMismatch);
        }
        if [&u, &v, &w].iter().any(|x| x.grade() != 1) {
            return Err(Error::InvalidArgument("triple entries must be vector fields".into()));
        }
        Ok(PoissonTriple { u, v, w })
    }

    pub fn zero(ring: Ring) -> Self {
        let z = Polyvector::zero(ring, 1);
        PoissonTriple { u: z.clone(), v: z.clone(), w: z }
    }

    pub fn ring(&self) -> Ring {
        self.u.ring()
    }
}

/// `[[v, u], [w, -v]]`: the triple's connection in the row convention of
/// [`crate::connection`]. It is the transpose of [`triple_display_matrix`].
pub fn triple_to_theta(t: &PoissonTriple) -> Result<ConnMatrix> {
    for (name, x) in [("u", &t.u), ("v", &t.v), ("w", &t.w)] {
        if !x.is_log_holomorphic() {
            return Err(Error::InvalidArgument(format!("{name} is not tangent to the divisor")));
        }
    }
    PvMatrix::from_entries(t.ring(), 2, vec![t.v.clone(), t.u.clone(), t.w.clone(), t.v.neg()])
}

/// `[[v, w], [u, -v]]`, flat for `delta Theta + Theta ^ Theta = 0`.
pub fn triple_display_matrix(t: &PoissonTriple) -> ConnMatrix {
    PvMatrix::from_entries(t.ring(), 2, vec![t.v.clone(), t.w.clone(), t.u.clone(), t.v.neg()]).expect("2x2")
}

/// `delta Theta + Theta ^ Theta` of the display matrix, computed entrywise
/// from the triple: `[[dv - u^w, dw + 2 v^w], [du + 2 u^v, -dv + u^w]]`.
pub fn triple_curvature(p: &PoissonStructure, t: &PoissonTriple) -> PvMatrix {
    let two = Scalar::int(2);
    let dv = p.delta_vector(&t.v).sub(&t.u.wedge(&t.w));
    let dw = p.delta_vector(&t.w).add(&t.v.wedge(&t.w).scale(&two));
    let du = p.delta_vector(&t.u).add(&t.u.wedge(&t.v).scale(&two));
    PvMatrix::from_entries(t.ring(), 2, vec![dv.clone(), dw, du, dv.neg()]).expect("2x2")
}

pub fn mc_check(chart: &LogChart, t: &PoissonTriple) -> Result<McReport> {
    let p = chart.poisson();
    let two = Scalar::int(2);
    let eqs = [
        (McEquation::U, p.delta_vector(&t.u).add(&t.u.wedge(&t.v).scale(&two))),
        (McEquation::V, p.delta_vector(&t.v).sub(&t.u.wedge(&t.w))),
        (McEquation::W, p.delta_vector(&t.w).add(&t.v.wedge(&t.w).scale(&two))),
    ];
    let violations = eqs.into_iter().filter(|(_, r)| !r.is_zero()).collect();
    let curvature_zero = poisson_curvature(chart, &triple_to_theta(t)?).is_zero();
    Ok(McReport { violations, curvature_zero })
}

/// Standard-frame coefficients `v^k` of a vector field.
fn standard_vector(v: &Polyvector) -> Vec<LaurentPoly> {
    let ring = v.ring();
    let mut out = vec![LaurentPoly::zero(ring); ring.n()];
    for (key, f) in v.standard_components() {
        out[key[0] as usize] = f;
    }
    out
}

#[derive(Clone, Debug, PartialEq)]
pub struct CriterionReport {
    /// Pairs `(i, j)` where the identity fails, with both sides.
    pub fails: Vec<(usize, usize, LaurentPoly, LaurentPoly)>,
    /// `L_v sigma = 0`, computed directly.
    pub lie_derivative_zero: bool,
}

impl CriterionReport {
    pub fn ok(&self) -> bool {
        self.fails.is_empty()
    }
}

/// For `v = sum_k v^k(z_k) d/dz_k`, tests
/// `sum_k v^k d_k {z_i, z_j} = (d_i v^i + d_j v^j) {z_i, z_j}` for `i < j`.
pub fn coord_criterion_check(p: &PoissonStructure, v: &Polyvector) -> Result<CriterionReport> {
    if v.grade() != 1 {
        return Err(Error::InvalidArgument("criterion needs a vector field".into()));
    }
    let comps = standard_vector(v);
    for (k, f) in comps.iter().enumerate() {
        if !f.depends_only_on(k) {
            return Err(Error::InvalidArgument(format!("component {k} depends on other coordinates")));
        }
    }
    let n = p.ring().n();
    let mut fails = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let b = p.bracket(&p.coordinate(i), &p.coordinate(j));
            let mut lhs = LaurentPoly::zero(p.ring());
            for (k, vk) in comps.iter().enumerate() {
                if !vk.is_zero() {
                    lhs = lhs.add(&vk.mul(&b.partial_derivative(k)?));
                }
            }
            let rhs = comps[i].partial_derivative(i)?.add(&comps[j].partial_derivative(j)?).mul(&b);
            if lhs != rhs {
                fails.push((i, j, lhs, rhs));
            }
        }
    }
    let lie_derivative_zero = p.lichnerowicz(v)?.is_zero();
    Ok(CriterionReport { fails, lie_derivative_zero })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LuCondition {
    /// `c_i (c_ij - b_j) = 0`
    First,
    /// `c_j (c_ij + b_i) = 0`
    Second,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LuReport {
    pub fails: Vec<(usize, usize, LuCondition)>,
    /// `L_u sigma = u ^ v`, computed directly.
    pub direct: bool,
}

impl LuReport {
    pub fn ok(&self) -> bool {
        self.fails.is_empty()
    }
}

/// For `u = sum c_k d_k` constant and `v = sum b_k z_k d_k` on a
/// log-canonical chart, tests the coefficient conditions for `L_u sigma = u ^ v`.
pub fn lu_uw_check(chart: &LogChart, u: &Polyvector, v: &Polyvector) -> Result<LuReport> {
    let cmat = chart
        .log_canonical_constants()
        .ok_or_else(|| Error::InvalidArgument("Poisson structure is not log-canonical".into()))?;
    let n = chart.n();
    let mut c = Vec::with_capacity(n);
    for (k, f) in standard_vector(u).into_iter().enumerate() {
        if !f.is_constant() {
            return Err(Error::InvalidArgument(format!("u has a non-constant component {k}")));
        }
        c.push(f.constant_term());
    }
    let mut b = Vec::with_capacity(n);
    for (k, f) in standard_vector(v).into_iter().enumerate() {
        let unit = MultiIndex::unit(k);
        if f.terms().iter().any(|(m, _)| *m != unit) {
            return Err(Error::InvalidArgument(format!("v is not diagonal linear in component {k}")));
        }
        b.push(f.coeff(&unit));
    }
    let mut fails = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let cij = cmat.get(i, j);
            if !(&c[i] * &(cij - &b[j])).is_zero() {
                fails.push((i, j, LuCondition::First));
            }
            if !(&c[j] * &(cij + &b[i])).is_zero() {
                fails.push((i, j, LuCondition::Second));
            }
        }
    }
    let direct = chart.poisson().delta_vector(u) == u.wedge(v);
    Ok(LuReport { fails, direct })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct L1111Params {
    a: [Scalar; 4],
}

impl L1111Params {
    pub fn new(a: [Scalar; 4]) -> Result<Self> {
        let s = a.iter().fold(Scalar::ZERO, |acc, x| &acc + x);
        if !s.is_zero() {
            return Err(Error::InvalidArgument(format!("L(1,1,1,1) parameters must sum to zero, got sum {s}")));
        }
        Ok(L1111Params { a })
    }

    pub fn a(&self) -> &[Scalar; 4] {
        &self.a
    }

    /// Antisymmetric `c` with `{z_i, z_j} = c_ij z_i z_j`.
    pub fn constants(&self) -> Matrix {
        let a = &self.a;
        let upper = [
            (0, 1, &a[3] - &a[2]),
            (0, 2, &a[1] - &a[3]),
            (0, 3, &a[2] - &a[1]),
            (1, 2, &a[3] - &a[0]),
            (1, 3, &a[0] - &a[2]),
            (2, 3, &a[1] - &a[0]),
        ];
        let mut c = Matrix::zeros(4, 4);
        for (i, j, v) in upper {
            c.set(j, i, -&v);
            c.set(i, j, v);
        }
        c
    }
}

pub const L1111_DEFAULT_LOG: [usize; 3] = [1, 2, 3];

/// Chart on `C^4` with coordinates `z0..z3`.
pub fn l1111_structure(p: &L1111Params, log_coords: &[usize], trunc: i32, pole_bound: u8) -> Result<LogChart> {
    let mut mask = 0u8;
    for &k in log_coords {
        if k >= 4 {
            return Err(Error::InvalidArgument(format!("log coordinate {k} out of range")));
        }
        mask |= 1 << k;
    }
    let ring = Ring::new(4, mask, trunc, pole_bound)?;
    let labels = (0..4).map(|k| format!("z{k}")).collect();
    LogChart::new(PoissonStructure::log_canonical(ring, &p.constants()), labels)
}

/// `X_i = sum_{j>i} c_ij z_j d_j - sum_{k<i} c_ki z_k d_k`.
pub fn xi_closed_formula(ring: Ring, c: &Matrix, i: usize) -> Polyvector {
    let n = c.rows();
    let mut comps = Vec::new();
    for j in 0..n {
        let coef = if j > i {
            c.get(i, j).clone()
        } else if j < i {
            -c.get(j, i)
        } else {
            continue;
        };
        comps.push((vec![j], LaurentPoly::monomial(ring, MultiIndex::unit(j), coef)));
    }
    Polyvector::from_standard(ring, 1, comps)
}

#[derive(Clone, Debug, PartialEq)]
pub enum XiVerdict {
    Ok,
    Mismatch { coord: usize, closed: Polyvector, anchor: Polyvector },
}

/// Closed formula against the anchor for every log coordinate.
pub fn xi_closed_check(chart: &LogChart) -> Result<XiVerdict> {
    let c = chart
        .log_canonical_constants()
        .ok_or_else(|| Error::InvalidArgument("Poisson structure is not log-canonical".into()))?;
    for i in chart.log_coords() {
        let closed = xi_closed_formula(chart.ring(), &c, i);
        let anchor = chart.log_hamiltonian(i)?.field;
        if closed != anchor {
            return Ok(XiVerdict::Mismatch { coord: i, closed, anchor });
        }
    }
    Ok(XiVerdict::Ok)
}

/// `(d_0, -v/2, 0)` with `v = z0 d0 + sum_j c_0j z_j d_j`.
pub fn l1111_triple(chart: &LogChart) -> Result<PoissonTriple> {
    let c = chart
        .log_canonical_constants()
        .ok_or_else(|| Error::InvalidArgument("Poisson structure is not log-canonical".into()))?;
    let ring = chart.ring();
    let u = Polyvector::from_standard(ring, 1, vec![(vec![0], LaurentPoly::one(ring))]);
    let v = l1111_v_field(ring, &c);
    Ok(PoissonTriple { u, v: v.scale(&Scalar::frac(-1, 2)), w: Polyvector::zero(ring, 1) })
}

/// `z0 d0 + c_01 z1 d1 + c_02 z2 d2 + c_03 z3 d3`.
pub fn l1111_v_field(ring: Ring, c: &Matrix) -> Polyvector {
    let comps = (0..c.rows())
        .map(|j| {
            let coef = if j == 0 { Scalar::ONE } else { c.get(0, j).clone() };
            (vec![j], LaurentPoly::monomial(ring, MultiIndex::unit(j), coef))
        })
        .collect();
    Polyvector::from_standard(ring, 1, comps)
}

#[derive(Clone, Debug, PartialEq)]
pub struct WSearch {
    /// Some solution of the affine system, if one exists.
    pub particular: Option<Polyvector>,
    /// Basis of the homogeneous solutions.
    pub kernel: Vec<Polyvector>,
}

type Row = (u8, Vec<u8>, MultiIndex);

fn collect_rows(out: &mut BTreeMap<Row, Scalar>, tag: u8, p: &Polyvector, sign: i64) {
    for (key, f) in p.components() {
        for (m, c) in f.terms() {
            let e = out.entry((tag, key.clone(), *m)).or_insert(Scalar::ZERO);
            *e += &(c * &Scalar::int(sign));
        }
    }
}

/// Solutions `w` with polynomial log-frame coefficients of degree at most
/// `max_degree` of `delta(w) = -2 v ^ w` and `u ^ w = delta(v)`.
pub fn search_w(chart: &LogChart, u: &Polyvector, v: &Polyvector, max_degree: i32) -> Result<WSearch> {
    let ring = chart.ring();
    if max_degree < 0 || max_degree > ring.trunc() {
        return Err(Error::InvalidArgument("search degree must lie between 0 and the truncation".into()));
    }
    let p = chart.poisson();
    let coords: Vec<usize> = (0..ring.n()).collect();
    let mut basis = Vec::new();
    for d in 0..=max_degree {
        for m in monomials_of_degree(&coords, d) {
            for k in 0..ring.n() {
                basis.push(Polyvector::term(ring, &[k], LaurentPoly::monomial(ring, m, Scalar::ONE)));
            }
        }
    }
    let images: Vec<BTreeMap<Row, Scalar>> = basis
        .iter()
        .map(|w| {
            let mut rows = BTreeMap::new();
            collect_rows(&mut rows, 0, &p.delta_vector(w).add(&v.wedge(w).scale(&Scalar::int(2))), 1);
            collect_rows(&mut rows, 1, &u.wedge(w), 1);
            rows
        })
        .collect();
    let mut rhs_rows = BTreeMap::new();
    collect_rows(&mut rhs_rows, 1, &p.delta_vector(v), 1);
    let mut index: BTreeMap<Row, usize> = BTreeMap::new();
    for r in images.iter().flat_map(|m| m.keys()).chain(rhs_rows.keys()) {
        let next = index.len();
        index.entry(r.clone()).or_insert(next);
    }
    let mut a = Matrix::zeros(index.len(), basis.len());
    for (j, img) in images.iter().enumerate() {
        for (r, val) in img {
            a.set(index[r], j, val.clone());
        }
    }
    let mut b = vec![Scalar::ZERO; index.len()];
    for (r, val) in rhs_rows {
        b[index[&r]] = val;
    }
    let combine = |x: &[Scalar]| {
        let mut w = Polyvector::zero(ring, 1);
        for (c, bw) in x.iter().zip(&basis) {
            if !c.is_zero() {
                w = w.add(&bw.scale(c));
            }
        }
        w
    };
    let particular = a.solve(&b).map(|x| combine(&x));
    let kernel = a.nullspace().iter().map(|x| combine(x)).collect();
    Ok(WSearch { particular, kernel })
}

/// Cross-check helper: display-form curvature equals the transpose of the
/// row-convention curvature of [`triple_to_theta`].
pub fn curvature_conventions_agree(chart: &LogChart, t: &PoissonTriple) -> Result<bool> {
    let row = poisson_curvature(chart, &triple_to_theta(t)?);
    let col = poisson_curvature_column(chart, &triple_display_matrix(t));
    Ok(row.transpose() == col && col == triple_curvature(chart.poisson(), t))
}
