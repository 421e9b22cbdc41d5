//! Normalization of flat logarithmic connections to Euler-Poisson form.
//!
//! At each degree `N` the remaining defect `R_N` is removed by a gauge
//! `I + K_N` with `K_N` homogeneous of degree `N` solving
//!
//! ```text
//! delta K + [K, Theta_0] = -R_N
//! ```
//!
//! which is the first-order part of the gauge action
//! `(delta g) g^-1 + g Theta g^-1`. The equation is assembled as an exact
//! sparse linear system in the matrix coefficients of `K_N`, split into
//! connected components and solved by elimination with free variables set
//! to zero.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::chart::LogChart;
use crate::connection::{
    delta_matrix, ep_principal, extract_principal, gauge_transform, poisson_curvature, ConnMatrix, GaugeMatrix,
    ResidueTuple,
};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::poisson::Polyvector;
use crate::scalar::Scalar;
use crate::series::{monomials_of_degree, LaurentPoly, MultiIndex};
use crate::spectral::{check_nonresonance, joint_spectrum, NonresMode, NonresVerdict, SpectralData};

/// Human-readable form of the equation the solver uses.
pub const HOMOLOGICAL_OPERATOR: &str = "delta K + [K, Theta0] = -R";

/// Order in which unknowns are preferred as pivots.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum VariableOrder {
    #[default]
    Canonical,
    Reversed,
    Shuffled(u64),
}

#[derive(Clone, Debug, Default)]
pub struct NormalizeOptions {
    /// Residues to use instead of reading them off the connection.
    pub residues: Option<ResidueTuple>,
    pub order: VariableOrder,
    pub mode: NonresMode,
}

/// Weight `alpha + lambda_k' - lambda_k` of a spectral block pair at a monomial.
#[derive(Clone, Debug, PartialEq)]
pub struct Denominator {
    pub kappa: usize,
    pub kappa_prime: usize,
    pub monomial: MultiIndex,
    pub weight: Vec<Scalar>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DegreeRecord {
    pub degree: i32,
    /// Number of (entry, slot, monomial) coefficients of the defect.
    pub support: usize,
    pub denominators: Vec<Denominator>,
    pub correction: GaugeMatrix,
    /// Linearized flatness of the defect held at this degree.
    pub linearized_mc: bool,
}

#[derive(Clone, Debug)]
pub struct NormalizationResult {
    pub gauge: GaugeMatrix,
    pub normal_form: ConnMatrix,
    pub residues: ResidueTuple,
    pub spectral: SpectralData,
    pub certificate: Vec<DegreeRecord>,
    pub truncation: i32,
}

#[derive(Clone, Debug, PartialEq)]
pub struct HomologicalSolution {
    pub correction: GaugeMatrix,
    pub denominators: Vec<Denominator>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum UniquenessVerdict {
    Ok { g: GaugeMatrix },
    NotCasimir { row: usize, col: usize, witness: String },
    NotCentralizer { index: usize },
}

#[derive(Clone, Debug, PartialEq)]
pub struct StabilizerDegree {
    pub degree: i32,
    pub dimension: usize,
    pub violations: Vec<String>,
}

/// `(delta H) H^-1 + H Theta H^-1 - Theta_0`.
pub fn defect(chart: &LogChart, theta: &ConnMatrix, h: &GaugeMatrix, theta0: &ConnMatrix) -> Result<ConnMatrix> {
    Ok(gauge_transform(chart, theta, h)?.sub(theta0))
}

/// Degree-`N` part of `delta R - Theta_0 ^ R - R ^ Theta_0`, which vanishes
/// when `Theta_0 + R` is flat and `R` starts in degree `N`.
pub fn linearized_mc_residual(chart: &LogChart, theta0: &ConnMatrix, r: &ConnMatrix, degree: i32) -> ConnMatrix {
    delta_matrix(chart, r).sub(&theta0.wedge(r)).sub(&r.wedge(theta0)).degree_part(degree)
}

/// Checks that `delta(z_k)` has no constant log-frame coefficient, so the
/// Poisson differential respects the degree filtration.
pub fn check_filtration(chart: &LogChart) -> Result<()> {
    let p = chart.poisson();
    for k in 0..chart.n() {
        let d = p.delta_function(&LaurentPoly::var(chart.ring(), k));
        if d.lowest_degree().is_some_and(|l| l < 1) {
            return Err(Error::FiltrationViolation {
                coord: chart.labels()[k].clone(),
                witness: d.fmt_with(chart.labels()),
            });
        }
    }
    Ok(())
}

type RowKey = (usize, usize, usize, MultiIndex);

/// Unknown `K[a][b]` coefficient of `z^beta`.
#[derive(Clone, Copy, Debug)]
struct Unknown {
    beta: MultiIndex,
    a: usize,
    b: usize,
}

struct System {
    unknowns: Vec<Unknown>,
    columns: Vec<Vec<(usize, Scalar)>>,
    rows: Vec<RowKey>,
}

enum Solve {
    Solution(Vec<Scalar>),
    /// Rows of the first component without a solution.
    Inconsistent(Vec<RowKey>),
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let next = self.0[y];
            self.0[y] = r;
            y = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

fn add_pv(col: &mut BTreeMap<RowKey, Scalar>, a: usize, b: usize, pv: &Polyvector, negate: bool) {
    for (idx, f) in pv.components() {
        for (m, c) in f.terms() {
            let key = (a, b, idx[0] as usize, *m);
            let e = col.entry(key).or_insert(Scalar::ZERO);
            if negate {
                *e -= c;
            } else {
                *e += c;
            }
        }
    }
}

fn pv_matrix_rows(r: &ConnMatrix) -> BTreeMap<RowKey, Scalar> {
    let mut out = BTreeMap::new();
    for a in 0..r.rank() {
        for b in 0..r.rank() {
            add_pv(&mut out, a, b, r.get(a, b), false);
        }
    }
    out.retain(|_, v| !v.is_zero());
    out
}

fn priorities(len: usize, order: VariableOrder) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..len).collect();
    match order {
        VariableOrder::Canonical => {}
        VariableOrder::Reversed => perm.reverse(),
        VariableOrder::Shuffled(seed) => perm.shuffle(&mut ChaCha8Rng::seed_from_u64(seed)),
    }
    // perm lists unknowns by preference; invert to a priority per unknown.
    let mut prio = vec![0; len];
    for (rank, &u) in perm.iter().enumerate() {
        prio[u] = rank;
    }
    prio
}

/// The linear operator `K -> delta K + [K, Theta_0]` on a fixed degree.
struct Homological<'a> {
    chart: &'a LogChart,
    theta0: ConnMatrix,
    spectral: SpectralData,
    p: Matrix,
    p_inv: Matrix,
    owner: Vec<usize>,
}

impl<'a> Homological<'a> {
    fn new(chart: &'a LogChart, residues: &ResidueTuple) -> Result<Self> {
        let theta0 = ep_principal(chart, residues)?;
        let spectral = joint_spectrum(residues)?;
        let p = spectral.change_of_basis();
        let p_inv = p.inverse().expect("spectral blocks span the space");
        let owner = spectral.block_of_column();
        Ok(Homological { chart, theta0, spectral, p, p_inv, owner })
    }

    fn e(&self) -> usize {
        self.theta0.rank()
    }

    fn system(&self, degree: i32) -> System {
        let ring = self.chart.ring();
        let e = self.e();
        let coords: Vec<usize> = (0..ring.n()).collect();
        let mut rows: BTreeMap<RowKey, usize> = BTreeMap::new();
        let mut unknowns = Vec::new();
        let mut columns = Vec::new();
        let pois = self.chart.poisson();
        for beta in monomials_of_degree(&coords, degree) {
            let zb = LaurentPoly::monomial(ring, beta, Scalar::ONE);
            let dz = pois.delta_function(&zb).degree_part(degree);
            let zt: Vec<Polyvector> =
                self.theta0.entries().iter().map(|x| x.mul_fn(&zb).degree_part(degree)).collect();
            for a in 0..e {
                for b in 0..e {
                    let mut col = BTreeMap::new();
                    add_pv(&mut col, a, b, &dz, false);
                    for c in 0..e {
                        // (E_ab Theta_0)_{ac} = Theta_0[b][c], (Theta_0 E_ab)_{cb} = Theta_0[c][a]
                        add_pv(&mut col, a, c, &zt[b * e + c], false);
                        add_pv(&mut col, c, b, &zt[c * e + a], true);
                    }
                    let entries: Vec<(usize, Scalar)> = col
                        .into_iter()
                        .filter(|(_, v)| !v.is_zero())
                        .map(|(k, v)| {
                            let next = rows.len();
                            (*rows.entry(k).or_insert(next), v)
                        })
                        .collect();
                    unknowns.push(Unknown { beta, a, b });
                    columns.push(entries);
                }
            }
        }
        let mut row_keys = vec![(0, 0, 0, MultiIndex::ZERO); rows.len()];
        for (k, i) in rows {
            row_keys[i] = k;
        }
        System { unknowns, columns, rows: row_keys }
    }

    /// Connected components of unknowns, each sorted by priority.
    fn components(sys: &System, prio: &[usize]) -> Vec<Vec<usize>> {
        let nu = sys.unknowns.len();
        let mut uf = UnionFind((0..nu).collect());
        let mut first_col: Vec<Option<usize>> = vec![None; sys.rows.len()];
        for (u, col) in sys.columns.iter().enumerate() {
            for (r, _) in col {
                match first_col[*r] {
                    Some(v) => uf.union(u, v),
                    None => first_col[*r] = Some(u),
                }
            }
        }
        let mut comps: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for u in 0..nu {
            let r = uf.find(u);
            comps.entry(r).or_default().push(u);
        }
        comps
            .into_values()
            .map(|mut c| {
                c.sort_by_key(|&u| prio[u]);
                c
            })
            .collect()
    }

    fn dense(sys: &System, comp: &[usize]) -> (Matrix, Vec<usize>) {
        let mut local_rows: BTreeMap<usize, usize> = BTreeMap::new();
        for &u in comp {
            for (r, _) in &sys.columns[u] {
                let next = local_rows.len();
                local_rows.entry(*r).or_insert(next);
            }
        }
        let mut m = Matrix::zeros(local_rows.len(), comp.len());
        for (j, &u) in comp.iter().enumerate() {
            for (r, v) in &sys.columns[u] {
                m.set(local_rows[r], j, v.clone());
            }
        }
        let mut order = vec![0; local_rows.len()];
        for (g, l) in local_rows {
            order[l] = g;
        }
        (m, order)
    }

    fn solve(sys: &System, rhs: &BTreeMap<RowKey, Scalar>, order: VariableOrder) -> Solve {
        let index: BTreeMap<&RowKey, usize> = sys.rows.iter().enumerate().map(|(i, k)| (k, i)).collect();
        let unmatched: Vec<RowKey> = rhs.keys().filter(|k| !index.contains_key(k)).cloned().collect();
        if !unmatched.is_empty() {
            return Solve::Inconsistent(unmatched);
        }
        let prio = priorities(sys.unknowns.len(), order);
        let mut x = vec![Scalar::ZERO; sys.unknowns.len()];
        for comp in Self::components(sys, &prio) {
            let (m, rows) = Self::dense(sys, &comp);
            let b: Vec<Scalar> = rows.iter().map(|&r| rhs.get(&sys.rows[r]).cloned().unwrap_or(Scalar::ZERO)).collect();
            if b.iter().all(|v| v.is_zero()) {
                continue;
            }
            match m.solve(&b) {
                Some(sol) => {
                    for (j, &u) in comp.iter().enumerate() {
                        x[u] = sol[j].clone();
                    }
                }
                None => return Solve::Inconsistent(rows.iter().map(|&r| sys.rows[r]).collect()),
            }
        }
        Solve::Solution(x)
    }

    fn assemble(&self, sys: &System, x: &[Scalar]) -> GaugeMatrix {
        let ring = self.chart.ring();
        let e = self.e();
        let mut terms: Vec<Vec<(MultiIndex, Scalar)>> = vec![Vec::new(); e * e];
        for (u, v) in sys.unknowns.iter().zip(x) {
            if !v.is_zero() {
                terms[u.a * e + u.b].push((u.beta, v.clone()));
            }
        }
        let entries = terms.into_iter().map(|t| LaurentPoly::from_terms(ring, t)).collect();
        GaugeMatrix::from_entries(ring, e, entries).expect("square")
    }

    fn log_part(&self, m: &MultiIndex) -> Vec<Scalar> {
        self.chart.log_coords().iter().map(|&k| Scalar::int(m.get(k) as i64)).collect()
    }

    /// Block pairs carrying data of `r` at monomial `gamma`, in the spectral basis.
    fn active_pairs(&self, r: &ConnMatrix, gamma: &MultiIndex) -> Vec<(usize, usize)> {
        let e = self.e();
        let mut pairs = Vec::new();
        for k in 0..self.chart.n() {
            let m = Matrix::from_fn(e, e, |a, b| r.get(a, b).coeff(k).coeff(gamma));
            if m.is_zero() {
                continue;
            }
            let s = self.p_inv.mul(&m).mul(&self.p);
            for x in 0..e {
                for y in 0..e {
                    if !s.get(x, y).is_zero() {
                        pairs.push((self.owner[x], self.owner[y]));
                    }
                }
            }
        }
        pairs.sort();
        pairs.dedup();
        pairs
    }

    fn weight(&self, gamma: &MultiIndex, kappa: usize, kappa_prime: usize) -> Vec<Scalar> {
        let b = &self.spectral.blocks;
        self.log_part(gamma)
            .iter()
            .zip(b[kappa_prime].lambda.iter().zip(&b[kappa].lambda))
            .map(|(g, (lp, l))| &(g + lp) - l)
            .collect()
    }

    fn denominators(&self, r: &ConnMatrix) -> Vec<Denominator> {
        let mut gammas: Vec<MultiIndex> = pv_matrix_rows(r).keys().map(|k| k.3).collect();
        gammas.sort();
        gammas.dedup();
        let mut out = Vec::new();
        for g in gammas {
            for (k, kp) in self.active_pairs(r, &g) {
                out.push(Denominator { kappa: k, kappa_prime: kp, monomial: g, weight: self.weight(&g, k, kp) });
            }
        }
        out
    }

    /// Explains an unsolvable component.
    fn diagnose(&self, r: &ConnMatrix, degree: i32, rows: &[RowKey]) -> Error {
        let mut gammas: Vec<MultiIndex> = rows.iter().map(|k| k.3).collect();
        gammas.sort();
        gammas.dedup();
        let xs = self.chart.log_hamiltonians();
        for g in &gammas {
            for (k, kp) in self.active_pairs(r, g) {
                let w = self.weight(g, k, kp);
                if w.iter().all(|x| x.is_zero()) {
                    return Error::Resonance { kappa: k, kappa_prime: kp, alpha: self.log_part(g) };
                }
                let mut combo = Polyvector::zero(self.chart.ring(), 1);
                for (wi, x) in w.iter().zip(&xs) {
                    combo = combo.add(&x.scale(wi));
                }
                if combo.is_zero() {
                    return Error::Inconsistent {
                        degree,
                        detail: format!(
                            "weight {} of blocks ({k},{kp}) at monomial {} annihilates the log Hamiltonians",
                            crate::error::fmt_vec(&w),
                            LaurentPoly::monomial(self.chart.ring(), *g, Scalar::ONE).fmt_with(self.chart.labels())
                        ),
                    };
                }
            }
        }
        let (a, b, k, m) = rows[0];
        Error::Inconsistent {
            degree,
            detail: format!(
                "no solution for the component containing entry ({a},{b}), slot {}, monomial {}",
                self.chart.labels()[k],
                LaurentPoly::monomial(self.chart.ring(), m, Scalar::ONE).fmt_with(self.chart.labels())
            ),
        }
    }

    fn solve_degree(&self, r_n: &ConnMatrix, degree: i32, order: VariableOrder) -> Result<HomologicalSolution> {
        let sys = self.system(degree);
        let rhs: BTreeMap<RowKey, Scalar> = pv_matrix_rows(r_n).into_iter().map(|(k, v)| (k, -v)).collect();
        match Self::solve(&sys, &rhs, order) {
            Solve::Solution(x) => {
                Ok(HomologicalSolution { correction: self.assemble(&sys, &x), denominators: self.denominators(r_n) })
            }
            Solve::Inconsistent(rows) => Err(self.diagnose(r_n, degree, &rows)),
        }
    }
}

/// Solves `delta K + [K, Theta_0] = -R_N` for `K` homogeneous of degree `N`,
/// with `Theta_0` the Euler-Poisson part of `residues`.
pub fn homological_solve(
    chart: &LogChart,
    residues: &ResidueTuple,
    r_n: &ConnMatrix,
    degree: i32,
    order: VariableOrder,
) -> Result<HomologicalSolution> {
    if degree < 1 {
        return Err(Error::InvalidArgument("homological degree must be positive".into()));
    }
    if r_n.degree_part(degree) != *r_n {
        return Err(Error::InvalidArgument(format!("defect is not homogeneous of degree {degree}")));
    }
    check_filtration(chart)?;
    Homological::new(chart, residues)?.solve_degree(r_n, degree, order)
}

/// Entrywise closed form for diagonal residues and constant log
/// Hamiltonians: if the defect entry at `z^gamma` equals `c sum_i w_i X_i`
/// with `w` the weight of the entry, the correction coefficient is `-c`.
/// `None` when that shape does not apply.
pub fn closed_form_solve(chart: &LogChart, residues: &ResidueTuple, r_n: &ConnMatrix, degree: i32) -> Option<GaugeMatrix> {
    let ring = chart.ring();
    if chart.r() != chart.n() {
        return None;
    }
    let e = residues.rank();
    let is_diag = |m: &Matrix| (0..e).all(|a| (0..e).all(|b| a == b || m.get(a, b).is_zero()));
    if !residues.mats().iter().all(is_diag) {
        return None;
    }
    let xs = chart.log_hamiltonians();
    if xs.iter().any(|x| x.components().any(|(_, f)| !f.is_constant())) {
        return None;
    }
    let n = chart.n();
    let mut entries = Vec::with_capacity(e * e);
    for a in 0..e {
        for b in 0..e {
            let ent = r_n.get(a, b);
            let mut gammas: Vec<MultiIndex> =
                ent.components().flat_map(|(_, f)| f.terms().iter().map(|(m, _)| *m)).collect();
            gammas.sort();
            gammas.dedup();
            let mut terms = Vec::new();
            for g in gammas {
                if g.degree() != degree {
                    return None;
                }
                let mut w_field = vec![Scalar::ZERO; n];
                for (i, (x, ai)) in xs.iter().zip(residues.mats()).enumerate() {
                    let k = chart.log_coords()[i];
                    let w = &(&Scalar::int(g.get(k) as i64) + ai.get(b, b)) - ai.get(a, a);
                    for (slot, wf) in w_field.iter_mut().enumerate() {
                        *wf += &(&w * &x.coeff(slot).constant_term());
                    }
                }
                let rho: Vec<Scalar> = (0..n).map(|k| ent.coeff(k).coeff(&g)).collect();
                let pivot = w_field.iter().position(|x| !x.is_zero())?;
                let lam = &rho[pivot] / &w_field[pivot];
                if rho.iter().zip(&w_field).any(|(r, w)| *r != &lam * w) {
                    return None;
                }
                terms.push((g, -lam));
            }
            entries.push(LaurentPoly::from_terms(ring, terms));
        }
    }
    GaugeMatrix::from_entries(ring, e, entries).ok()
}

/// Gauge to Euler-Poisson normal form modulo `m^(T+1)`.
pub fn normalize(chart: &LogChart, theta: &ConnMatrix, t: i32, opts: &NormalizeOptions) -> Result<NormalizationResult> {
    if t < 1 {
        return Err(Error::InvalidArgument("truncation must be at least 1".into()));
    }
    let chart = chart.with_trunc(t);
    let ring = chart.ring();
    let theta = theta.in_ring(ring);
    if !theta.is_log_holomorphic() {
        return Err(Error::InvalidArgument("connection matrix is not logarithmic".into()));
    }
    check_filtration(&chart)?;
    let residues = match &opts.residues {
        Some(a) => a.clone(),
        None => extract_principal(&chart, &theta)?.0,
    };
    let hom = Homological::new(&chart, &residues)?;
    if let NonresVerdict::Resonant { kappa, kappa_prime, alpha } = check_nonresonance(&hom.spectral, opts.mode) {
        return Err(Error::Resonance { kappa, kappa_prime, alpha });
    }
    let theta0 = hom.theta0.clone();
    if let Some(l) = theta.sub(&theta0).lowest_degree() {
        if l < 1 {
            return Err(Error::Precondition(
                "constant part of the connection is not the Euler-Poisson part of the residues".into(),
            ));
        }
    }
    let curv = poisson_curvature(&chart, &theta).truncate_to(t - 1);
    let e = theta.rank();
    for a in 0..e {
        for b in 0..e {
            if !curv.get(a, b).is_zero() {
                return Err(Error::NotFlat { row: a, col: b, witness: curv.get(a, b).fmt_with(chart.labels()) });
            }
        }
    }
    let mut cur = theta.clone();
    let mut h = GaugeMatrix::identity(ring, e);
    let mut certificate = Vec::new();
    for n in 1..=t {
        let r = cur.sub(&theta0);
        if r.lowest_degree().is_some_and(|l| l < n) {
            return Err(Error::Inconsistent { degree: n, detail: "defect has a term below the current degree".into() });
        }
        let r_n = r.degree_part(n);
        let linearized_mc = linearized_mc_residual(&chart, &theta0, &r, n).is_zero();
        let support = pv_matrix_rows(&r_n).len();
        let sol = if r_n.is_zero() {
            HomologicalSolution { correction: GaugeMatrix::zero(ring, e), denominators: Vec::new() }
        } else {
            hom.solve_degree(&r_n, n, opts.order)?
        };
        if !sol.correction.is_zero() {
            let step = GaugeMatrix::identity(ring, e).add(&sol.correction);
            cur = gauge_transform(&chart, &cur, &step)?;
            h = step.mul(&h);
        }
        certificate.push(DegreeRecord {
            degree: n,
            support,
            denominators: sol.denominators,
            correction: sol.correction,
            linearized_mc,
        });
    }
    if gauge_transform(&chart, &theta, &h)? != theta0 {
        return Err(Error::Inconsistent { degree: t, detail: "final gauge does not reach the normal form".into() });
    }
    Ok(NormalizationResult { gauge: h, normal_form: theta0, residues, spectral: hom.spectral, certificate, truncation: t })
}

/// Checks that `G = H_2 H_1^-1` has Casimir entries and commutes with the
/// residues, for two gauges normalizing `Theta`.
pub fn verify_uniqueness(
    chart: &LogChart,
    theta: &ConnMatrix,
    h1: &GaugeMatrix,
    h2: &GaugeMatrix,
    residues: &ResidueTuple,
    t: i32,
) -> Result<UniquenessVerdict> {
    let chart = chart.with_trunc(t);
    let ring = chart.ring();
    let theta = theta.in_ring(ring);
    let (h1, h2) = (h1.in_ring(ring), h2.in_ring(ring));
    let theta0 = ep_principal(&chart, residues)?;
    for (name, h) in [("first", &h1), ("second", &h2)] {
        if gauge_transform(&chart, &theta, h)? != theta0 {
            return Err(Error::Precondition(format!("the {name} gauge does not normalize the connection")));
        }
    }
    let g = h2.mul(&h1.inverse()?);
    let dg = g.delta(&chart);
    let e = g.rank();
    for a in 0..e {
        for b in 0..e {
            if !dg.get(a, b).is_zero() {
                return Ok(UniquenessVerdict::NotCasimir {
                    row: a,
                    col: b,
                    witness: dg.get(a, b).fmt_with(chart.labels()),
                });
            }
        }
    }
    if let Some(index) = g.centralizer_failure(residues) {
        return Ok(UniquenessVerdict::NotCentralizer { index });
    }
    Ok(UniquenessVerdict::Ok { g })
}

/// Kernel of `G -> delta G + [G, Theta_0]` in each degree up to
/// `max_degree`, with every basis element checked for Casimir entries and
/// centralizer membership.
pub fn stabilizer_kernel(chart: &LogChart, residues: &ResidueTuple, max_degree: i32) -> Result<Vec<StabilizerDegree>> {
    check_filtration(chart)?;
    let hom = Homological::new(chart, residues)?;
    let mut out = Vec::new();
    for d in 0..=max_degree {
        let sys = hom.system(d);
        let all: Vec<usize> = (0..sys.unknowns.len()).collect();
        let canonical = priorities(all.len(), VariableOrder::Canonical);
        let mut violations = Vec::new();
        let mut dimension = 0;
        for comp in Homological::components(&sys, &canonical) {
            let (m, _) = Homological::dense(&sys, &comp);
            for v in m.nullspace() {
                dimension += 1;
                let mut x = vec![Scalar::ZERO; sys.unknowns.len()];
                for (j, &u) in comp.iter().enumerate() {
                    x[u] = v[j].clone();
                }
                let g = hom.assemble(&sys, &x);
                let dg = g.delta(chart);
                if !dg.is_zero() {
                    violations.push(format!("degree {d}: kernel element {} is not Casimir-valued", g.fmt_with(chart.labels())));
                } else if let Some(i) = g.centralizer_failure(residues) {
                    violations.push(format!(
                        "degree {d}: kernel element {} does not commute with residue {}",
                        g.fmt_with(chart.labels()),
                        i + 1
                    ));
                }
            }
        }
        out.push(StabilizerDegree { degree: d, dimension, violations });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::connection::PvMatrix;
    use crate::series::Ring;

    fn c2(trunc: i32) -> LogChart {
        let r = Ring::with_leading_logs(2, 2, trunc, 1).unwrap();
        let c = Matrix::from_rows(vec![vec![Scalar::ZERO, Scalar::ONE], vec![-Scalar::ONE, Scalar::ZERO]]);
        LogChart::log_canonical(r, &c)
    }

    fn residues(d: &[Scalar]) -> ResidueTuple {
        ResidueTuple::new(vec![Matrix::diag(d), Matrix::zeros(d.len(), d.len())]).unwrap()
    }

    #[test]
    fn worked_instance() {
        let ch = c2(4);
        let r = ch.ring();
        let a = residues(&[Scalar::frac(1, 2), Scalar::ZERO]);
        let t0 = ep_principal(&ch, &a).unwrap();
        let mut g = GaugeMatrix::identity(r, 2);
        g.set(0, 1, LaurentPoly::var(r, 0));
        let theta = gauge_transform(&ch, &t0, &g).unwrap();
        let res = normalize(&ch, &theta, 4, &NormalizeOptions::default()).unwrap();
        let k1 = &res.certificate[0];
        let mut expect = GaugeMatrix::zero(res.gauge.ring(), 2);
        expect.set(0, 1, LaurentPoly::var(res.gauge.ring(), 0).neg());
        assert_eq!(k1.correction, expect);
        assert_eq!(k1.denominators.len(), 1);
        assert_eq!(k1.denominators[0].weight, vec![Scalar::frac(1, 2), Scalar::ZERO]);
        assert!(res.certificate[1..].iter().all(|d| d.correction.is_zero()));
        let closed = closed_form_solve(&ch, &a, &theta.sub(&t0), 1).unwrap();
        assert_eq!(closed, expect.in_ring(r));
    }

    #[test]
    fn resonant_rejection() {
        let ch = c2(3);
        let r = ch.ring();
        let a = residues(&[Scalar::ONE, Scalar::ZERO]);
        let t0 = ep_principal(&ch, &a).unwrap();
        let mut pert = PvMatrix::zero(r, 2, 1);
        pert.set(0, 1, ch.log_hamiltonians()[0].mul_fn(&LaurentPoly::var(r, 0)));
        let theta = t0.add(&pert);
        let err = normalize(&ch, &theta, 3, &NormalizeOptions::default()).unwrap_err();
        assert_eq!(err, Error::Resonance { kappa: 1, kappa_prime: 0, alpha: vec![Scalar::ONE, Scalar::ZERO] });
        let err = homological_solve(&ch, &a, &pert, 1, VariableOrder::Canonical).unwrap_err();
        assert_eq!(err, Error::Resonance { kappa: 1, kappa_prime: 0, alpha: vec![Scalar::ONE, Scalar::ZERO] });
    }

    #[test]
    fn zero_perturbation() {
        let ch = c2(3);
        let a = residues(&[Scalar::frac(1, 2), Scalar::ZERO]);
        let t0 = ep_principal(&ch, &a).unwrap();
        let res = normalize(&ch, &t0, 3, &NormalizeOptions::default()).unwrap();
        assert_eq!(res.gauge, GaugeMatrix::identity(ch.ring(), 2));
        assert_eq!(res.normal_form, t0);
        let d = defect(&ch, &t0, &GaugeMatrix::identity(ch.ring(), 2), &t0).unwrap();
        assert!(d.is_zero());
    }
}
