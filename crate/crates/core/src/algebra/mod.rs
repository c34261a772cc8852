//! Exact fields, monomials and sparse multivariate polynomials.

mod field;
mod monomial;
mod polynomial;

pub use field::{Field, Fp, PrimeModulus, Rational, RationalField};
pub use monomial::{monomials_up_to_degree, Monomial};
pub use polynomial::{var_names, PolyShape, Polynomial};

pub(crate) use polynomial::render_terms;

/// A commutative ring containing the field `F`: the field itself,
/// polynomials over it, or truncated power series over it.
///
/// Straight-line programs and polynomial substitution evaluate in any
/// implementation.
pub trait Algebra<F: Field>: Clone {
    /// Data needed to embed a scalar (variable count, precision, field).
    type Shape: Clone;

    fn shape(&self) -> Self::Shape;
    fn from_scalar(shape: &Self::Shape, c: &F) -> Self;
    fn plus(&self, rhs: &Self) -> Self;
    fn minus(&self, rhs: &Self) -> Self;
    fn times(&self, rhs: &Self) -> Self;

    fn scale(&self, c: &F) -> Self {
        self.times(&Self::from_scalar(&self.shape(), c))
    }

    /// `zero + sum c_k * x_k`.
    fn linear_combination(zero: Self, terms: &[(&F, &Self)]) -> Self {
        terms.iter().fold(zero, |acc, (c, x)| acc.plus(&x.scale(c)))
    }
}

impl<F: Field> Algebra<F> for F {
    type Shape = F::Ctx;

    fn shape(&self) -> F::Ctx {
        self.ctx()
    }

    fn from_scalar(_: &F::Ctx, c: &F) -> F {
        c.clone()
    }

    fn plus(&self, rhs: &F) -> F {
        self.clone() + rhs
    }

    fn minus(&self, rhs: &F) -> F {
        self.clone() - rhs
    }

    fn times(&self, rhs: &F) -> F {
        self.clone() * rhs
    }

    fn scale(&self, c: &F) -> F {
        self.clone() * c
    }
}
