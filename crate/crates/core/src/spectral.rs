//! Joint generalized eigenspaces of commuting residue tuples, non-resonance
//! and centralizers.

use std::cmp::Ordering;

use crate::connection::{GaugeMatrix, ResidueTuple};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::roots::{fmt_poly, gaussian_roots};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub struct SpectralBlock {
    /// Joint eigenvalue `(lambda_1, ..., lambda_r)`.
    pub lambda: Vec<Scalar>,
    /// Columns spanning the joint generalized eigenspace.
    pub basis: Vec<Vec<Scalar>>,
    /// Every `A_i - lambda_i` is nilpotent of at most this index on the block.
    pub nilpotency_bound: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpectralData {
    pub blocks: Vec<SpectralBlock>,
    e: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub enum CommuteCheck {
    Ok,
    Witness { i: usize, j: usize, commutator: Matrix },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum NonresMode {
    /// Only `lambda_k - lambda_k'` for `k < k'` in block order.
    AsStated,
    /// Both orders of every pair.
    #[default]
    Symmetric,
}

#[derive(Clone, Debug, PartialEq)]
pub enum NonresVerdict {
    Nonresonant,
    Resonant { kappa: usize, kappa_prime: usize, alpha: Vec<Scalar> },
}

pub fn check_commuting(a: &ResidueTuple) -> CommuteCheck {
    let m = a.mats();
    for i in 0..m.len() {
        for j in i + 1..m.len() {
            let c = m[i].commutator(&m[j]);
            if !c.is_zero() {
                return CommuteCheck::Witness { i, j, commutator: c };
            }
        }
    }
    CommuteCheck::Ok
}

fn cmp_scalar(a: &Scalar, b: &Scalar) -> Ordering {
    a.re.cmp(&b.re).then_with(|| a.im.cmp(&b.im))
}

fn cmp_tuple(a: &[Scalar], b: &[Scalar]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        let o = cmp_scalar(x, y);
        if o != Ordering::Equal {
            return o;
        }
    }
    a.len().cmp(&b.len())
}

fn nilpotency_index(m: &Matrix) -> Option<usize> {
    let mut p = Matrix::identity(m.rows());
    for k in 0..=m.rows() {
        if p.is_zero() {
            return Some(k);
        }
        p = p.mul(m);
    }
    None
}

/// Exact joint decomposition `Q(i)^e = sum_k E_k`.
pub fn joint_spectrum(a: &ResidueTuple) -> Result<SpectralData> {
    if let CommuteCheck::Witness { i, j, commutator } = check_commuting(a) {
        return Err(Error::NotCommuting { i, j, commutator: commutator.to_string() });
    }
    let e = a.rank();
    let mut blocks: Vec<(Vec<Scalar>, Matrix)> = vec![(Vec::new(), Matrix::identity(e))];
    for (idx, ai) in a.mats().iter().enumerate() {
        let (_, rest) = gaussian_roots(&ai.charpoly());
        if !rest.is_empty() {
            return Err(Error::EigenvalueNotGaussian { index: idx, charpoly: fmt_poly(&ai.charpoly()) });
        }
        let mut next = Vec::new();
        for (lam, basis) in blocks {
            let m = ai.restrict_to(&basis).expect("commuting tuple preserves joint eigenspaces");
            let (roots, _) = gaussian_roots(&m.charpoly());
            let k = m.rows();
            for (root, mult) in roots {
                let shifted = m.sub(&Matrix::identity(k).scale(&root));
                let kernel = shifted.pow(mult as u32).nullspace();
                let sub = Matrix::from_columns(&kernel);
                let mut l = lam.clone();
                l.push(root);
                next.push((l, basis.mul(&sub)));
            }
        }
        blocks = next;
    }
    blocks.sort_by(|x, y| cmp_tuple(&x.0, &y.0));
    let blocks = blocks
        .into_iter()
        .map(|(lambda, basis)| {
            let k = basis.cols();
            let mut bound = if a.is_empty() { 0 } else { 1 };
            for (ai, l) in a.mats().iter().zip(&lambda) {
                let m = ai.restrict_to(&basis).expect("invariant block").sub(&Matrix::identity(k).scale(l));
                bound = bound.max(nilpotency_index(&m).expect("generalized eigenspace"));
            }
            SpectralBlock { lambda, basis: (0..k).map(|j| basis.column(j)).collect(), nilpotency_bound: bound }
        })
        .collect();
    Ok(SpectralData { blocks, e })
}

impl SpectralData {
    pub fn dimension(&self) -> usize {
        self.e
    }

    /// Change of basis whose columns are the block bases in order.
    pub fn change_of_basis(&self) -> Matrix {
        let cols: Vec<Vec<Scalar>> = self.blocks.iter().flat_map(|b| b.basis.iter().cloned()).collect();
        Matrix::from_columns(&cols)
    }

    /// Block index of each column of [`Self::change_of_basis`].
    pub fn block_of_column(&self) -> Vec<usize> {
        self.blocks.iter().enumerate().flat_map(|(k, b)| std::iter::repeat_n(k, b.basis.len())).collect()
    }

    /// Projector onto block `k` along the others.
    pub fn projector(&self, k: usize) -> Matrix {
        let p = self.change_of_basis();
        let pi = p.inverse().expect("blocks span the space");
        let owner = self.block_of_column();
        let d: Vec<Scalar> = owner.iter().map(|&o| if o == k { Scalar::ONE } else { Scalar::ZERO }).collect();
        p.mul(&Matrix::diag(&d)).mul(&pi)
    }
}

/// A nonzero vector with non-negative integer entries.
fn is_resonance_vector(v: &[Scalar]) -> bool {
    v.iter().all(|x| x.is_real() && x.re.is_integer() && !x.re.is_negative()) && v.iter().any(|x| !x.is_zero())
}

pub fn check_nonresonance(s: &SpectralData, mode: NonresMode) -> NonresVerdict {
    let b = &s.blocks;
    for k in 0..b.len() {
        for kp in 0..b.len() {
            if k == kp || (mode == NonresMode::AsStated && kp < k) {
                continue;
            }
            let alpha: Vec<Scalar> = b[k].lambda.iter().zip(&b[kp].lambda).map(|(x, y)| x - y).collect();
            if is_resonance_vector(&alpha) {
                return NonresVerdict::Resonant { kappa: k, kappa_prime: kp, alpha };
            }
        }
    }
    NonresVerdict::Nonresonant
}

/// First `i` with `G A_i != A_i G`, if any.
pub fn centralizer_check(g: &Matrix, a: &ResidueTuple) -> Option<usize> {
    a.mats().iter().position(|ai| !g.commutator(ai).is_zero())
}

/// Coefficientwise version of [`centralizer_check`] for series.
pub fn centralizer_check_series(g: &GaugeMatrix, a: &ResidueTuple) -> Option<usize> {
    g.centralizer_failure(a)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Scalar {
        Scalar::frac(n, d)
    }

    #[test]
    fn jordan_block() {
        let a1 = Matrix::from_rows(vec![vec![q(1, 2), q(1, 1)], vec![q(0, 1), q(1, 2)]]);
        let s = joint_spectrum(&ResidueTuple::new(vec![a1, Matrix::zeros(2, 2)]).unwrap()).unwrap();
        assert_eq!(s.blocks.len(), 1);
        assert_eq!(s.blocks[0].lambda, vec![q(1, 2), q(0, 1)]);
        assert_eq!(s.blocks[0].nilpotency_bound, 2);
    }

    #[test]
    fn two_blocks_and_irrational() {
        let a = ResidueTuple::new(vec![Matrix::diag(&[q(1, 2), q(0, 1)]), Matrix::diag(&[q(0, 1), q(1, 3)])]).unwrap();
        let s = joint_spectrum(&a).unwrap();
        let l: Vec<_> = s.blocks.iter().map(|b| b.lambda.clone()).collect();
        assert_eq!(l, vec![vec![q(0, 1), q(1, 3)], vec![q(1, 2), q(0, 1)]]);
        assert_eq!(s.projector(0).add(&s.projector(1)), Matrix::identity(2));
        let bad = Matrix::from_rows(vec![vec![q(0, 1), q(2, 1)], vec![q(1, 1), q(0, 1)]]);
        assert!(matches!(
            joint_spectrum(&ResidueTuple::new(vec![bad]).unwrap()),
            Err(Error::EigenvalueNotGaussian { index: 0, .. })
        ));
    }

    #[test]
    fn commuting_and_resonance() {
        let a = ResidueTuple::new(vec![Matrix::unit(2, 0, 1), Matrix::unit(2, 1, 0)]).unwrap();
        match check_commuting(&a) {
            CommuteCheck::Witness { i: 0, j: 1, commutator } => assert_eq!(commutator, Matrix::diag(&[q(1, 1), q(-1, 1)])),
            other => panic!("{other:?}"),
        }
        let res = ResidueTuple::new(vec![Matrix::diag(&[q(1, 1), q(0, 1)]), Matrix::zeros(2, 2)]).unwrap();
        let s = joint_spectrum(&res).unwrap();
        assert_eq!(
            check_nonresonance(&s, NonresMode::Symmetric),
            NonresVerdict::Resonant { kappa: 1, kappa_prime: 0, alpha: vec![q(1, 1), q(0, 1)] }
        );
        // Blocks are sorted, so the only resonant order is (1, 0): missed as stated.
        assert_eq!(check_nonresonance(&s, NonresMode::AsStated), NonresVerdict::Nonresonant);
        let a1 = Matrix::diag(&[q(1, 2), q(0, 1)]);
        let r = ResidueTuple::new(vec![a1.clone()]).unwrap();
        assert_eq!(centralizer_check(&Matrix::identity(2), &r), None);
        assert_eq!(centralizer_check(&a1, &r), None);
        assert_eq!(centralizer_check(&Matrix::unit(2, 0, 1), &r), Some(0));
    }
}
