//! Rewriting polynomials over a subring `K[u_1, ..., u_n]` of
//! `K[x_1, ..., x_n]` in terms of new variables `e_1, ..., e_n`.
//!
//! Given algebraically independent generators `u` (typically the
//! fundamental invariants of a reflection group) and `f` in the subring,
//! [`convert::convert_polynomial`] finds the unique `f_new` with
//! `f_new(u_1, ..., u_n) = f`. It lifts a regular root of the shifted
//! system `u(x) - e - c` to truncated power series in `e` by Newton
//! iteration, substitutes the series into `f` and translates back.
//!
//! All arithmetic is exact. The algorithms are generic over [`Field`];
//! [`Rational`] and [`Fp`] are provided, with aliases below for the common
//! instantiations.

pub mod algebra;
pub mod convert;
pub mod error;
pub mod generators;
pub mod lifting;
pub mod oracle;
pub mod series;
pub mod serieslinalg;
pub mod slp;

pub use algebra::{
    monomials_up_to_degree, var_names, Algebra, Field, Fp, Monomial, Polynomial, PrimeModulus,
    Rational, RationalField,
};
pub use convert::{convert_polynomial, verify_rewrite, ConvertRequest, ConvertResult};
pub use error::{Error, Result};
pub use generators::GeneratorFamily;
pub use lifting::{lift, LiftProblem};
pub use oracle::interpolate_fnew;
pub use series::TruncatedSeries;
pub use serieslinalg::{Matrix, SeriesMatrix};
pub use slp::Slp;

pub type QPolynomial = Polynomial<Rational>;
pub type FpPolynomial = Polynomial<Fp>;
pub type QSeries = TruncatedSeries<Rational>;
pub type FpSeries = TruncatedSeries<Fp>;
pub type QSlp = Slp<Rational>;
pub type FpSlp = Slp<Fp>;
pub type QMatrix = Matrix<Rational>;
