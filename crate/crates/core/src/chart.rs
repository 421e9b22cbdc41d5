//! Charts adapted to a simple normal crossing divisor `{prod_{k log} z_k = 0}`.

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::poisson::{vector_class, LogForm, PoissonStructure, Polyvector};
use crate::scalar::Scalar;
use crate::series::{HolomorphyClass, LaurentPoly, MultiIndex, Ring};

#[derive(Clone, Debug, PartialEq)]
pub struct LogChart {
    poisson: PoissonStructure,
    labels: Vec<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LogHamiltonian {
    /// Coordinate index of the divisor component.
    pub coord: usize,
    pub field: Polyvector,
    /// Class of the coordinate-frame coefficients.
    pub class: HolomorphyClass,
    /// Holomorphic in the log frame, i.e. tangent to every branch.
    pub tangent: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub enum H3Verdict {
    Ok,
    Failure { coord: usize, witness: Polyvector },
}

#[derive(Clone, Debug, PartialEq)]
pub enum MonomialCheck {
    Ok,
    Mismatch { lhs: Polyvector, rhs: Polyvector },
}

pub fn validate_label(s: &str) -> Result<()> {
    let ok = !s.is_empty()
        && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
        && s.chars().next().is_some_and(|c| c.is_ascii_alphabetic())
        && !s.starts_with('L')
        && !s.starts_with('d')
        && s != "i";
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "invalid coordinate label `{s}` (must be alphanumeric, start with a letter other than `L` or `d`, and differ from `i`)"
        )))
    }
}

impl LogChart {
    pub fn new(poisson: PoissonStructure, labels: Vec<String>) -> Result<Self> {
        let n = poisson.ring().n();
        if labels.len() != n {
            return Err(Error::InvalidArgument(format!("{} labels for {n} coordinates", labels.len())));
        }
        for (i, l) in labels.iter().enumerate() {
            validate_label(l)?;
            if labels[..i].contains(l) {
                return Err(Error::InvalidArgument(format!("duplicate coordinate label `{l}`")));
            }
        }
        Ok(LogChart { poisson, labels })
    }

    pub fn with_default_labels(poisson: PoissonStructure) -> Self {
        let labels = poisson.ring().default_labels();
        LogChart { poisson, labels }
    }

    /// Chart with `{z_i, z_j} = c_ij z_i z_j`.
    pub fn log_canonical(ring: Ring, c: &Matrix) -> Self {
        Self::with_default_labels(PoissonStructure::log_canonical(ring, c))
    }

    pub fn poisson(&self) -> &PoissonStructure {
        &self.poisson
    }

    pub fn ring(&self) -> Ring {
        self.poisson.ring()
    }

    pub fn n(&self) -> usize {
        self.ring().n()
    }

    pub fn r(&self) -> usize {
        self.ring().r()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn log_coords(&self) -> Vec<usize> {
        self.ring().log_coords()
    }

    /// Same chart with a different truncation order.
    pub fn with_trunc(&self, trunc: i32) -> LogChart {
        let ring = self.ring().with_trunc(trunc);
        LogChart { poisson: self.poisson.in_ring(ring), labels: self.labels.clone() }
    }

    /// Constants `c_ij` if sigma is log-canonical.
    pub fn log_canonical_constants(&self) -> Option<Matrix> {
        let n = self.n();
        let mut c = Matrix::zeros(n, n);
        for (key, f) in self.poisson.sigma().standard_components() {
            let (a, b) = (key[0] as usize, key[1] as usize);
            let m = MultiIndex::unit(a).add(&MultiIndex::unit(b));
            if f.len() != 1 || f.terms()[0].0 != m {
                return None;
            }
            let v = f.terms()[0].1.clone();
            c.set(b, a, -&v);
            c.set(a, b, v);
        }
        Some(c)
    }

    fn require_log(&self, i: usize) -> Result<()> {
        if i >= self.n() || !self.ring().is_log(i) {
            return Err(Error::InvalidArgument(format!(
                "coordinate index {i} is not a logarithmic coordinate of this chart"
            )));
        }
        Ok(())
    }

    /// `X_i = sigma#(dz_i / z_i)`.
    pub fn log_hamiltonian(&self, i: usize) -> Result<LogHamiltonian> {
        self.require_log(i)?;
        let field = self.poisson.anchor(&LogForm::basis(self.ring(), &[i]));
        Ok(LogHamiltonian {
            coord: i,
            class: vector_class(&field),
            tangent: field.is_log_holomorphic(),
            field,
        })
    }

    pub fn log_hamiltonians(&self) -> Vec<Polyvector> {
        self.log_coords().into_iter().map(|i| self.log_hamiltonian(i).expect("log coordinate").field).collect()
    }

    pub fn check_h3(&self) -> H3Verdict {
        for i in self.log_coords() {
            let h = self.log_hamiltonian(i).expect("log coordinate");
            if !h.tangent {
                return H3Verdict::Failure { coord: i, witness: h.field };
            }
        }
        H3Verdict::Ok
    }

    /// Holomorphic `f` with zero constant term and `df = eta`, for a closed
    /// logarithmic 1-form without residues.
    pub fn log_poincare_primitive(&self, eta: &LogForm) -> Result<LaurentPoly> {
        let ring = self.ring();
        if eta.grade() != 1 {
            return Err(Error::InvalidArgument("primitive needs a 1-form".into()));
        }
        if !eta.is_log_holomorphic() {
            return Err(Error::InvalidArgument(format!(
                "form is not logarithmic: {}",
                eta.fmt_with(&self.labels)
            )));
        }
        for k in self.log_coords() {
            let res = eta.coeff(k).restrict_zero(k);
            if !res.is_zero() {
                return Err(Error::NonzeroResidue { coord: k, residue: res.fmt_with(&self.labels) });
            }
        }
        let d = eta.d1();
        if !d.is_zero() {
            return Err(Error::NotClosed { witness: d.fmt_with(&self.labels) });
        }
        // h = sum_k z_k b_k with b_k the coordinate-frame coefficients.
        let mut h = LaurentPoly::zero(ring);
        for k in 0..ring.n() {
            let a = eta.coeff(k);
            if ring.is_log(k) {
                h = h.add(&a);
            } else {
                if a.highest_degree().is_some_and(|d| d >= ring.trunc()) {
                    return Err(Error::TruncationOverflow(format!(
                        "primitive of the d{} coefficient exceeds truncation {}",
                        self.labels[k],
                        ring.trunc()
                    )));
                }
                h = h.add(&a.mul_term(&MultiIndex::unit(k), &Scalar::ONE));
            }
        }
        let terms = h.terms().iter().map(|(m, c)| (*m, c / &Scalar::int(m.degree() as i64)));
        Ok(LaurentPoly::from_terms(ring, terms))
    }

    /// Compares `delta(z^alpha)` with `z^alpha sum_i alpha_i X_i`.
    pub fn delta_monomial_check(&self, alpha: &MultiIndex) -> Result<MonomialCheck> {
        let ring = self.ring();
        for k in 0..ring.n() {
            if alpha.get(k) != 0 && !ring.is_log(k) {
                return Err(Error::InvalidArgument(format!(
                    "multi-index must be supported on log coordinates; {} is not one",
                    self.labels[k]
                )));
            }
        }
        if ring.pole_violation(alpha).is_some() {
            return Err(Error::InvalidArgument("multi-index exceeds the pole bound".into()));
        }
        let z_alpha = LaurentPoly::monomial(ring, *alpha, Scalar::ONE);
        let lhs = self.poisson.hamiltonian(&z_alpha);
        let mut combo = Polyvector::zero(ring, 1);
        for i in self.log_coords() {
            let a = alpha.get(i);
            if a != 0 {
                combo = combo.add(&self.log_hamiltonian(i)?.field.scale(&Scalar::int(a as i64)));
            }
        }
        let rhs = combo.mul_fn(&z_alpha);
        Ok(if lhs == rhs { MonomialCheck::Ok } else { MonomialCheck::Mismatch { lhs, rhs } })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c2() -> LogChart {
        let r = Ring::with_leading_logs(2, 2, 6, 1).unwrap();
        let c = Matrix::from_rows(vec![vec![Scalar::ZERO, Scalar::ONE], vec![-Scalar::ONE, Scalar::ZERO]]);
        LogChart::log_canonical(r, &c)
    }

    #[test]
    fn hamiltonians_of_z1z2() {
        let ch = c2();
        let r = ch.ring();
        assert_eq!(ch.log_hamiltonian(0).unwrap().field, Polyvector::basis(r, &[1]));
        assert_eq!(ch.log_hamiltonian(1).unwrap().field, Polyvector::basis(r, &[0]).neg());
        assert_eq!(ch.check_h3(), H3Verdict::Ok);
    }

    #[test]
    fn h3_fails_for_constant_bivector() {
        let r = Ring::with_leading_logs(2, 1, 4, 1).unwrap();
        let s = Polyvector::from_standard(r, 2, vec![(vec![0, 1], LaurentPoly::one(r))]);
        let ch = LogChart::with_default_labels(PoissonStructure::new(s).unwrap());
        let h = ch.log_hamiltonian(0).unwrap();
        assert_eq!(h.class, HolomorphyClass::GenuinePole);
        assert_eq!(h.field.to_string(), "1*z1^-1*dz2");
        assert!(matches!(ch.check_h3(), H3Verdict::Failure { coord: 0, .. }));
    }

    #[test]
    fn primitive_examples() {
        let ch = c2();
        let r = ch.ring();
        let z12 = LaurentPoly::monomial(r, MultiIndex::from_slice(&[1, 1]), Scalar::ONE);
        let eta = LogForm::from_vec(r, vec![z12.clone(), z12.clone()]);
        assert_eq!(ch.log_poincare_primitive(&eta).unwrap(), z12);
        let bad = LogForm::from_vec(r, vec![LaurentPoly::var(r, 1), LaurentPoly::zero(r)]);
        assert!(matches!(ch.log_poincare_primitive(&bad), Err(Error::NonzeroResidue { coord: 0, .. })));
    }

    #[test]
    fn monomial_identity() {
        let ch = c2();
        assert_eq!(ch.delta_monomial_check(&MultiIndex::from_slice(&[2, 1])).unwrap(), MonomialCheck::Ok);
        assert_eq!(ch.delta_monomial_check(&MultiIndex::ZERO).unwrap(), MonomialCheck::Ok);
    }
}
