//! Truncated multivariate power series `K[e_1, ..., e_m]` modulo all
//! monomials of total degree above a precision `D`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::algebra::{render_terms, var_names, Algebra, Field, Monomial, Polynomial};
use crate::error::{Error, Result};

/// Power series known up to and including total degree `precision`.
#[derive(Clone, PartialEq, Eq)]
pub struct TruncatedSeries<F: Field> {
    num_vars: usize,
    precision: u32,
    ctx: F::Ctx,
    terms: BTreeMap<Monomial, F>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesShape<C> {
    pub num_vars: usize,
    pub precision: u32,
    pub ctx: C,
}

impl<F: Field> TruncatedSeries<F> {
    pub fn zero(num_vars: usize, precision: u32, ctx: &F::Ctx) -> Self {
        TruncatedSeries {
            num_vars,
            precision,
            ctx: ctx.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(num_vars: usize, precision: u32, c: F) -> Self {
        let ctx = c.ctx();
        let mut s = Self::zero(num_vars, precision, &ctx);
        if !c.is_zero() {
            s.terms.insert(Monomial::one(num_vars), c);
        }
        s
    }

    /// The series `e_{index+1}` (zero at precision 0).
    pub fn var(num_vars: usize, index: usize, precision: u32, ctx: &F::Ctx) -> Self {
        let p = Polynomial::var(num_vars, index, ctx);
        Self::from_polynomial(&p, precision)
    }

    /// Reduction of `p`: keeps exactly the terms of degree at most `precision`.
    pub fn from_polynomial(p: &Polynomial<F>, precision: u32) -> Self {
        TruncatedSeries {
            num_vars: p.num_vars(),
            precision,
            ctx: p.field().clone(),
            terms: p
                .term_map()
                .iter()
                .filter(|(m, _)| m.degree() <= precision)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// The retained terms as a polynomial.
    pub fn to_polynomial(&self) -> Polynomial<F> {
        Polynomial::from_map_unchecked(self.num_vars, self.ctx.clone(), self.terms.clone())
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn field(&self) -> &F::Ctx {
        &self.ctx
    }

    pub fn series_shape(&self) -> SeriesShape<F::Ctx> {
        SeriesShape {
            num_vars: self.num_vars,
            precision: self.precision,
            ctx: self.ctx.clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &F)> + '_ {
        self.terms.iter().rev()
    }

    pub fn coeff(&self, m: &Monomial) -> F {
        self.terms.get(m).cloned().unwrap_or_else(|| F::zero(&self.ctx))
    }

    pub fn constant_term(&self) -> F {
        self.coeff(&Monomial::one(self.num_vars))
    }

    /// Smallest total degree of a stored term, `None` for zero.
    pub fn order(&self) -> Option<u32> {
        self.terms.keys().next().map(Monomial::degree)
    }

    /// Lowers the precision, discarding terms above it.
    pub fn truncate(&self, precision: u32) -> Self {
        let precision = precision.min(self.precision);
        TruncatedSeries {
            num_vars: self.num_vars,
            precision,
            ctx: self.ctx.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() <= precision)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Reinterprets the retained terms as an approximation at a higher
    /// precision (the unknown higher-degree terms are taken as zero).
    pub fn promote(&self, precision: u32) -> Self {
        TruncatedSeries {
            precision: precision.max(self.precision),
            ..self.clone()
        }
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.num_vars != other.num_vars {
            return Err(Error::VarCountMismatch {
                left: self.num_vars,
                right: other.num_vars,
            });
        }
        if self.ctx != other.ctx {
            return Err(Error::FieldMismatch {
                left: self.ctx.to_string(),
                right: other.ctx.to_string(),
            });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.plus(other))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.minus(other))
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.times(other))
    }

    fn combine(&self, other: &Self, negate: bool) -> Self {
        let precision = self.precision.min(other.precision);
        let mut terms = self.truncate(precision).terms;
        for (m, c) in other.terms.iter().filter(|(m, _)| m.degree() <= precision) {
            let c = if negate { -c.clone() } else { c.clone() };
            let sum = match terms.remove(m) {
                Some(a) => a + c,
                None => c,
            };
            if !sum.is_zero() {
                terms.insert(m.clone(), sum);
            }
        }
        TruncatedSeries {
            num_vars: self.num_vars,
            precision,
            ctx: self.ctx.clone(),
            terms,
        }
    }

    fn convolve(&self, other: &Self) -> Self {
        let precision = self.precision.min(other.precision);
        Self::dot(self.num_vars, precision, &self.ctx, &[(self, other)])
    }

    /// `sum a_k * b_k` at the given precision, accumulated in one pass.
    /// Pairs whose degree exceeds the precision are never formed.
    pub fn dot(num_vars: usize, precision: u32, ctx: &F::Ctx, pairs: &[(&Self, &Self)]) -> Self {
        let mut av: Vec<&F> = Vec::new();
        let mut bv: Vec<&F> = Vec::new();
        let mut slots: HashMap<Monomial, u32> = HashMap::new();
        let mut monos: Vec<Monomial> = Vec::new();
        let mut triples = Vec::new();
        for (x, y) in pairs {
            // ascending degree lets the loops stop at the cutoff
            let a: Vec<(&Monomial, &F)> = x.terms.iter().take_while(|(m, _)| m.degree() <= precision).collect();
            let b: Vec<(&Monomial, &F)> = y.terms.iter().take_while(|(m, _)| m.degree() <= precision).collect();
            let (a0, b0) = (av.len() as u32, bv.len() as u32);
            for (i, (ma, _)) in a.iter().enumerate() {
                let room = precision - ma.degree();
                for (j, (mb, _)) in b.iter().enumerate() {
                    if mb.degree() > room {
                        break;
                    }
                    let k = *slots.entry(ma.mul(mb)).or_insert_with_key(|m| {
                        monos.push(m.clone());
                        monos.len() as u32 - 1
                    });
                    triples.push((a0 + i as u32, b0 + j as u32, k));
                }
            }
            av.extend(a.iter().map(|t| t.1));
            bv.extend(b.iter().map(|t| t.1));
        }
        let coeffs = F::sum_products(ctx, &av, &bv, &triples, monos.len());
        TruncatedSeries {
            num_vars,
            precision,
            ctx: ctx.clone(),
            terms: monos.into_iter().zip(coeffs).filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    /// Multiplicative inverse by Newton iteration `b <- b (2 - a b)`,
    /// doubling the number of correct degrees each round.
    pub fn inverse(&self) -> Result<Self> {
        let c0 = self.constant_term();
        let inv0 = c0.inv().ok_or(Error::NonUnit)?;
        let two = F::from_i64(&self.ctx, 2);
        let mut b = Self::constant(self.num_vars, 0, inv0);
        let mut known = 0u32; // b is exact through this degree
        while known < self.precision {
            let target = (2 * known + 1).min(self.precision);
            let a = self.truncate(target);
            let b_up = b.promote(target);
            let ab = a.times(&b_up);
            let correction = Self::constant(self.num_vars, target, two.clone()).minus(&ab);
            b = b_up.times(&correction);
            known = target;
        }
        Ok(b)
    }

    pub fn scale(&self, c: &F) -> Self {
        if c.is_zero() {
            return Self::zero(self.num_vars, self.precision, &self.ctx);
        }
        TruncatedSeries {
            terms: self
                .terms
                .iter()
                .map(|(m, a)| (m.clone(), a.clone() * c))
                .collect(),
            ..self.clone()
        }
    }

    pub fn render(&self, names: &[String]) -> String {
        let mut out = String::new();
        render_terms(self.terms(), names, &mut out);
        out
    }
}

impl<F: Field> Algebra<F> for TruncatedSeries<F> {
    type Shape = SeriesShape<F::Ctx>;

    fn shape(&self) -> Self::Shape {
        self.series_shape()
    }

    fn from_scalar(shape: &Self::Shape, c: &F) -> Self {
        Self::constant(shape.num_vars, shape.precision, c.clone())
    }

    fn plus(&self, rhs: &Self) -> Self {
        debug_assert_eq!(self.num_vars, rhs.num_vars);
        self.combine(rhs, false)
    }

    fn minus(&self, rhs: &Self) -> Self {
        debug_assert_eq!(self.num_vars, rhs.num_vars);
        self.combine(rhs, true)
    }

    fn times(&self, rhs: &Self) -> Self {
        debug_assert_eq!(self.num_vars, rhs.num_vars);
        self.convolve(rhs)
    }

    fn scale(&self, c: &F) -> Self {
        TruncatedSeries::scale(self, c)
    }

    fn linear_combination(zero: Self, terms: &[(&F, &Self)]) -> Self {
        let consts: Vec<Self> = terms
            .iter()
            .map(|(c, _)| Self::constant(zero.num_vars, zero.precision, (*c).clone()))
            .collect();
        let pairs: Vec<(&Self, &Self)> = consts.iter().zip(terms).map(|(c, (_, x))| (c, *x)).collect();
        let sum = Self::dot(zero.num_vars, zero.precision, &zero.ctx, &pairs);
        zero.plus(&sum)
    }
}

impl<F: Field> fmt::Display for TruncatedSeries<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(&var_names("e", self.num_vars)))
    }
}

impl<F: Field> fmt::Debug for TruncatedSeries<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + O(deg>{})", self, self.precision)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{Rational, RationalField};

    type S = TruncatedSeries<Rational>;
    type P = Polynomial<Rational>;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn e(m: usize, i: usize, d: u32) -> S {
        S::var(m, i, d, &RationalField)
    }

    fn one(m: usize, d: u32) -> S {
        S::constant(m, d, q(1, 1))
    }

    #[test]
    fn truncation_of_polynomials() {
        let x = P::var(1, 0, &RationalField);
        let p = &(&x.pow(3) + &x) + &P::constant(1, q(1, 1));
        assert_eq!(S::from_polynomial(&p, 2).to_string(), "e1 + 1");
        assert_eq!(S::from_polynomial(&p, 3).to_polynomial(), p);
    }

    #[test]
    fn products_truncate() {
        let a = one(1, 2).plus(&e(1, 0, 2));
        let b = one(1, 2).minus(&e(1, 0, 2));
        assert_eq!(a.times(&b).to_string(), "-e1^2 + 1");
        let d = 3;
        let mut p = one(1, d);
        for _ in 0..d {
            p = p.times(&e(1, 0, d));
        }
        assert_eq!(p.to_string(), "e1^3");
        assert!(p.times(&e(1, 0, d)).is_zero());
    }

    #[test]
    fn add_sub_identities() {
        let a = one(2, 3).plus(&e(2, 1, 3).scale(&q(5, 2)));
        assert_eq!(a.plus(&S::zero(2, 3, &RationalField)), a);
        assert!(a.minus(&a).is_zero());
    }

    #[test]
    fn precision_is_min() {
        let a = e(1, 0, 5);
        let b = e(1, 0, 2);
        assert_eq!(a.plus(&b).precision(), 2);
        assert_eq!(a.times(&b).precision(), 2);
    }

    #[test]
    fn inverse_examples() {
        let inv = one(1, 3).minus(&e(1, 0, 3)).inverse().unwrap();
        assert_eq!(inv.to_string(), "e1^3 + e1^2 + e1 + 1");
        assert_eq!(S::constant(2, 4, q(2, 1)).inverse().unwrap(), S::constant(2, 4, q(1, 2)));
        let a = one(2, 2).plus(&e(2, 0, 2)).plus(&e(2, 1, 2));
        let inv = a.inverse().unwrap();
        assert_eq!(inv.to_string(), "e1^2 + 2*e1*e2 + e2^2 - e1 - e2 + 1");
        assert_eq!(a.times(&inv), one(2, 2));
        assert_eq!(e(1, 0, 3).inverse(), Err(Error::NonUnit));
    }

    #[test]
    fn inverse_at_precision_zero() {
        assert_eq!(S::constant(1, 0, q(4, 1)).inverse().unwrap().to_string(), "1/4");
    }
}
