//! Exact computations for logarithmic Poisson connections.
//!
//! Everything symbolic runs over the Gaussian rationals with series truncated
//! by total degree. Vector fields and forms are stored in the logarithmic
//! frame `z_k d/dz_k` (log coordinates) and `d/dz_k` (the others), so
//! "holomorphic coefficients" means "tangent to the divisor".
//!
//! ```
//! use logpois::chart::LogChart;
//! use logpois::connection::{ep_principal, gauge_transform, GaugeMatrix, ResidueTuple};
//! use logpois::ppd::{normalize, NormalizeOptions};
//! use logpois::{LaurentPoly, Matrix, Ring, Scalar};
//!
//! # fn main() -> logpois::Result<()> {
//! let ring = Ring::with_leading_logs(2, 2, 4, 1)?;
//! let c = Matrix::from_rows(vec![vec![Scalar::ZERO, Scalar::ONE], vec![-Scalar::ONE, Scalar::ZERO]]);
//! let chart = LogChart::log_canonical(ring, &c);
//! let a = ResidueTuple::new(vec![Matrix::diag(&[Scalar::frac(1, 2), Scalar::ZERO]), Matrix::zeros(2, 2)])?;
//! let theta0 = ep_principal(&chart, &a)?;
//! let mut g = GaugeMatrix::identity(ring, 2);
//! g.set(0, 1, LaurentPoly::var(ring, 0));
//! let theta = gauge_transform(&chart, &theta0, &g)?;
//! let res = normalize(&chart, &theta, 4, &NormalizeOptions { residues: Some(a), ..Default::default() })?;
//! assert_eq!(res.normal_form, theta0);
//! # Ok(())
//! # }
//! ```

pub mod chart;
pub mod connection;
pub mod error;
pub mod linalg;
pub mod monodromy;
pub mod poisson;
pub mod ppd;
pub mod rank2;
pub mod rational;
pub mod roots;
pub mod sample;
pub mod scalar;
pub mod series;
pub mod spectral;
pub mod text;

pub use error::{Error, ParseError, Result};
pub use linalg::Matrix;
pub use poisson::{LogForm, PoissonStructure, Polyvector};
pub use rational::Rational;
pub use scalar::Scalar;
pub use series::{HolomorphyClass, LaurentPoly, MultiIndex, Ring};
