//! Meridional monodromy in floating point.
//!
//! Residues stay exact up to the final exponential; everything here returns
//! `f64` complex matrices.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::connection::ResidueTuple;
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::Scalar;
use crate::spectral::{check_commuting, CommuteCheck};

pub type ComplexMatrixF = DMatrix<Complex64>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Letter {
    Leaf { generator: String, inverse: bool },
    Meridian(Vec<i64>),
}

/// Arrow of the twisted groupoid, read left to right.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct TwistedWord(pub Vec<Letter>);

impl TwistedWord {
    pub fn concat(&self, o: &TwistedWord) -> TwistedWord {
        TwistedWord(self.0.iter().chain(&o.0).cloned().collect())
    }
}

pub fn to_complex(m: &Matrix) -> ComplexMatrixF {
    DMatrix::from_fn(m.rows(), m.cols(), |i, j| m.get(i, j).to_complex())
}

/// `exp(-2 pi i sum_k m_k A_k)`.
pub fn meridional_character(a: &ResidueTuple, m: &[i64]) -> Result<ComplexMatrixF> {
    if m.len() != a.len() {
        return Err(Error::InvalidArgument(format!("meridian has {} entries for {} residues", m.len(), a.len())));
    }
    if let CommuteCheck::Witness { i, j, commutator } = check_commuting(a) {
        return Err(Error::NotCommuting { i, j, commutator: commutator.to_string() });
    }
    let e = a.rank();
    let mut s = Matrix::zeros(e, e);
    for (ai, &mi) in a.mats().iter().zip(m) {
        if mi != 0 {
            s = s.add(&ai.scale(&Scalar::int(mi)));
        }
    }
    let factor = Complex64::new(0.0, -2.0 * std::f64::consts::PI);
    Ok((to_complex(&s) * factor).exp())
}

/// Left-to-right product of letter images.
pub fn twisted_rep_eval(
    rho: &BTreeMap<String, ComplexMatrixF>,
    a: &ResidueTuple,
    w: &TwistedWord,
) -> Result<ComplexMatrixF> {
    let e = a.rank();
    let mut acc = ComplexMatrixF::identity(e, e);
    for letter in &w.0 {
        let img = match letter {
            Letter::Leaf { generator, inverse } => {
                let m = rho.get(generator).ok_or_else(|| Error::UnknownGenerator(generator.clone()))?;
                if m.nrows() != e || m.ncols() != e {
                    return Err(Error::InvalidArgument(format!("generator `{generator}` has the wrong size")));
                }
                if *inverse {
                    m.clone()
                        .try_inverse()
                        .ok_or_else(|| Error::NotInvertible(format!("image of generator `{generator}`")))?
                } else {
                    m.clone()
                }
            }
            Letter::Meridian(m) => meridional_character(a, m)?,
        };
        acc *= img;
    }
    Ok(acc)
}

fn rk4_loop(a: &Scalar, steps: usize, mut visit: impl FnMut(usize, Complex64)) -> Result<Complex64> {
    if steps < 1000 {
        return Err(Error::InvalidArgument("transport needs at least 1000 steps".into()));
    }
    let k = Complex64::new(0.0, -1.0) * a.to_complex();
    let h = 2.0 * std::f64::consts::PI / steps as f64;
    let f = |y: Complex64| k * y;
    let mut y = Complex64::new(1.0, 0.0);
    visit(0, y);
    for s in 1..=steps {
        let k1 = f(y);
        let k2 = f(y + k1 * (h / 2.0));
        let k3 = f(y + k2 * (h / 2.0));
        let k4 = f(y + k3 * h);
        y += (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0);
        visit(s, y);
    }
    Ok(y)
}

/// `y(2 pi) / y(0)` for `y' = -i a y` by classical Runge-Kutta.
pub fn transport_1d(a: &Scalar, steps: usize) -> Result<Complex64> {
    rk4_loop(a, steps, |_, _| {})
}

/// The same integration, sampled at `samples + 1` evenly spaced steps.
pub fn transport_1d_path(a: &Scalar, steps: usize, samples: usize) -> Result<Vec<Complex64>> {
    let samples = samples.clamp(1, steps.max(1));
    let mut out = Vec::with_capacity(samples + 1);
    let mut next = 0;
    rk4_loop(a, steps, |s, y| {
        if s * samples >= next * steps {
            out.push(y);
            next += 1;
        }
    })?;
    Ok(out)
}

fn round15(x: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    let r: f64 = format!("{x:.14e}").parse().expect("float formatting round-trips");
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

/// Complex number to 15 significant digits; parts below `1e-14` of `scale`
/// print as zero.
pub fn fmt_complex_scaled(z: Complex64, scale: f64) -> String {
    let tiny = 1e-14 * scale.max(1.0);
    let re = if z.re.abs() < tiny { 0.0 } else { round15(z.re) };
    let im = if z.im.abs() < tiny { 0.0 } else { round15(z.im) };
    match (re == 0.0, im == 0.0) {
        (_, true) => format!("{re}"),
        (true, false) => format!("{im}i"),
        (false, false) => format!("{re}{}{}i", if im < 0.0 { "-" } else { "+" }, im.abs()),
    }
}

pub fn fmt_complex(z: Complex64) -> String {
    fmt_complex_scaled(z, 1.0)
}

/// `[[a,b],[c,d]]` with entries as in [`fmt_complex`].
pub fn fmt_matrix(m: &ComplexMatrixF) -> String {
    let scale = m.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let rows: Vec<String> = (0..m.nrows())
        .map(|i| {
            let cells: Vec<String> = (0..m.ncols()).map(|j| fmt_complex_scaled(m[(i, j)], scale)).collect();
            format!("[{}]", cells.join(","))
        })
        .collect();
    format!("[{}]", rows.join(","))
}
