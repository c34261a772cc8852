use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::{Algebra, Field, Monomial};
use crate::error::{Error, Result};

/// Sparse multivariate polynomial with exact coefficients.
///
/// Terms are kept in a map keyed by grevlex-ordered monomials; zero
/// coefficients are never stored.
#[derive(Clone, PartialEq, Eq)]
pub struct Polynomial<F: Field> {
    num_vars: usize,
    ctx: F::Ctx,
    terms: BTreeMap<Monomial, F>,
}

/// Number of variables and coefficient field of a [`Polynomial`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyShape<C> {
    pub num_vars: usize,
    pub ctx: C,
}

impl<F: Field> Polynomial<F> {
    pub fn zero(num_vars: usize, ctx: &F::Ctx) -> Self {
        Polynomial {
            num_vars,
            ctx: ctx.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(num_vars: usize, c: F) -> Self {
        let ctx = c.ctx();
        Self::from_terms(num_vars, &ctx, [(Monomial::one(num_vars), c)])
    }

    /// The variable `x_{index+1}`.
    pub fn var(num_vars: usize, index: usize, ctx: &F::Ctx) -> Self {
        assert!(index < num_vars, "variable index out of range");
        Self::from_terms(num_vars, ctx, [(Monomial::var(num_vars, index), F::one(ctx))])
    }

    /// Builds a polynomial from `(monomial, coefficient)` pairs, summing
    /// repeated monomials and dropping zeros.
    pub fn from_terms<I>(num_vars: usize, ctx: &F::Ctx, terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, F)>,
    {
        let mut map: BTreeMap<Monomial, F> = BTreeMap::new();
        for (m, c) in terms {
            assert_eq!(m.num_vars(), num_vars, "monomial arity mismatch");
            accumulate(&mut map, m, c);
        }
        map.retain(|_, c| !c.is_zero());
        Polynomial {
            num_vars,
            ctx: ctx.clone(),
            terms: map,
        }
    }

    pub(crate) fn from_map_unchecked(num_vars: usize, ctx: F::Ctx, terms: BTreeMap<Monomial, F>) -> Self {
        debug_assert!(terms.values().all(|c| !c.is_zero()));
        Polynomial { num_vars, ctx, terms }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn field(&self) -> &F::Ctx {
        &self.ctx
    }

    pub fn shape(&self) -> PolyShape<F::Ctx> {
        PolyShape {
            num_vars: self.num_vars,
            ctx: self.ctx.clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in grevlex-descending order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &F)> + '_ {
        self.terms.iter().rev()
    }

    pub(crate) fn term_map(&self) -> &BTreeMap<Monomial, F> {
        &self.terms
    }

    pub fn coeff(&self, m: &Monomial) -> F {
        self.terms.get(m).cloned().unwrap_or_else(|| F::zero(&self.ctx))
    }

    pub fn constant_term(&self) -> F {
        self.coeff(&Monomial::one(self.num_vars))
    }

    /// Maximum total degree of a term; `-1` for the zero polynomial.
    pub fn total_degree(&self) -> i64 {
        self.terms.keys().next_back().map_or(-1, |m| m.degree() as i64)
    }

    /// Whether variable `index` occurs in some term.
    pub fn uses_var(&self, index: usize) -> bool {
        self.terms.keys().any(|m| m.exponents()[index] > 0)
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

    pub fn scale(&self, c: &F) -> Self {
        if c.is_zero() {
            return Self::zero(self.num_vars, &self.ctx);
        }
        let terms = self
            .terms
            .iter()
            .map(|(m, a)| (m.clone(), a.clone() * c))
            .collect();
        Polynomial::from_map_unchecked(self.num_vars, self.ctx.clone(), terms)
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut acc = Self::constant(self.num_vars, F::one(&self.ctx));
        let mut base = self.clone();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.times(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.times(&base);
            }
        }
        acc
    }

    /// Substitutes `args[i]` for `x_{i+1}` and evaluates in any algebra over
    /// the field. Monomial values are built incrementally, each from a
    /// lower-degree one times a single argument.
    pub fn evaluate_in<R: Algebra<F>>(&self, shape: &R::Shape, args: &[R]) -> Result<R> {
        if args.len() != self.num_vars {
            return Err(Error::LengthMismatch {
                expected: self.num_vars,
                got: args.len(),
            });
        }
        let mut cache: HashMap<Monomial, R> = HashMap::new();
        cache.insert(
            Monomial::one(self.num_vars),
            R::from_scalar(shape, &F::one(&self.ctx)),
        );
        // ascending order guarantees every divisor chain is filled bottom-up
        for m in self.terms.keys() {
            fill_monomial(m, args, &mut cache);
        }
        let terms: Vec<(&F, &R)> = self.terms.iter().map(|(m, c)| (c, &cache[m])).collect();
        Ok(R::linear_combination(R::from_scalar(shape, &F::zero(&self.ctx)), &terms))
    }

    pub fn evaluate(&self, point: &[F]) -> Result<F> {
        self.evaluate_in(&self.ctx, point)
    }

    /// Polynomial composition `self(args[0], ..., args[n-1])`.
    pub fn compose(&self, args: &[Polynomial<F>]) -> Result<Polynomial<F>> {
        let Some(first) = args.first() else {
            return if self.num_vars == 0 {
                Ok(self.clone())
            } else {
                Err(Error::LengthMismatch {
                    expected: self.num_vars,
                    got: 0,
                })
            };
        };
        for a in args {
            first.check(a)?;
            if a.ctx != self.ctx {
                return Err(Error::FieldMismatch {
                    left: self.ctx.to_string(),
                    right: a.ctx.to_string(),
                });
            }
        }
        self.evaluate_in(&first.shape(), args)
    }

    /// `q(e) = p(e_1 + s_1, ..., e_n + s_n)`.
    pub fn translate(&self, shift: &[F]) -> Result<Polynomial<F>> {
        if shift.len() != self.num_vars {
            return Err(Error::LengthMismatch {
                expected: self.num_vars,
                got: shift.len(),
            });
        }
        let args: Vec<_> = shift
            .iter()
            .enumerate()
            .map(|(i, s)| {
                Polynomial::var(self.num_vars, i, &self.ctx)
                    .plus(&Polynomial::constant(self.num_vars, s.clone()))
            })
            .collect();
        self.evaluate_in(&self.shape(), &args)
    }

    /// Term-by-term partial derivative with respect to `x_{index+1}`.
    pub fn partial_derivative(&self, index: usize) -> Self {
        let terms = self.terms.iter().filter_map(|(m, c)| {
            let e = m.exponents()[index];
            let lower = m.div_var(index)?;
            Some((lower, c.clone() * F::from_i64(&self.ctx, e as i64)))
        });
        Self::from_terms(self.num_vars, &self.ctx, terms)
    }

    /// Drops every term of total degree above `d`.
    pub fn truncate(&self, d: u32) -> Self {
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m.degree() <= d)
            .map(|(m, c)| (m.clone(), c.clone()))
            .collect();
        Polynomial::from_map_unchecked(self.num_vars, self.ctx.clone(), terms)
    }

    /// Applies `f` to every coefficient, e.g. to reduce rationals modulo `p`.
    /// Returns `None` if `f` does.
    pub fn try_map_coefficients<G, M>(&self, ctx: &G::Ctx, mut f: M) -> Option<Polynomial<G>>
    where
        G: Field,
        M: FnMut(&F) -> Option<G>,
    {
        let mut terms = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            terms.push((m.clone(), f(c)?));
        }
        Some(Polynomial::from_terms(self.num_vars, ctx, terms))
    }

    /// Moves the polynomial into a ring with `num_vars` variables; old
    /// variable `i` becomes `map[i]`.
    pub fn remap_vars(&self, num_vars: usize, map: &[usize]) -> Self {
        assert_eq!(map.len(), self.num_vars);
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| (m.remap(num_vars, map), c.clone()));
        Self::from_terms(num_vars, &self.ctx, terms)
    }

    /// Canonical rendering with the given variable names, e.g.
    /// `-1/3*e1^3 + e1*e2 - e1 + 1/3*e3`.
    pub fn render(&self, names: &[String]) -> String {
        assert!(names.len() >= self.num_vars, "not enough variable names");
        let mut out = String::new();
        render_terms(self.terms(), names, &mut out);
        out
    }

    /// Renders with names `<prefix>1, <prefix>2, ...`.
    pub fn render_with_prefix(&self, prefix: &str) -> String {
        self.render(&var_names(prefix, self.num_vars))
    }
}

pub fn var_names(prefix: &str, n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("{prefix}{i}")).collect()
}

fn accumulate<F: Field>(map: &mut BTreeMap<Monomial, F>, m: Monomial, c: F) {
    use std::collections::btree_map::Entry;
    match map.entry(m) {
        Entry::Vacant(v) => {
            v.insert(c);
        }
        Entry::Occupied(mut o) => {
            let sum = o.get().clone() + c;
            *o.get_mut() = sum;
        }
    }
}

fn fill_monomial<F: Field, R: Algebra<F>>(m: &Monomial, args: &[R], cache: &mut HashMap<Monomial, R>) {
    if cache.contains_key(m) {
        return;
    }
    let i = m.first_var().expect("constant monomial is pre-seeded");
    let lower = m.div_var(i).expect("first_var divides");
    fill_monomial(&lower, args, cache);
    let value = cache[&lower].times(&args[i]);
    cache.insert(m.clone(), value);
}

pub(crate) fn render_terms<'a, F: Field + 'a>(
    terms: impl Iterator<Item = (&'a Monomial, &'a F)>,
    names: &[String],
    out: &mut String,
) {
    let start = out.len();
    for (m, c) in terms {
        let negative = c.is_negative();
        let magnitude = if negative { -c.clone() } else { c.clone() };
        if out.len() == start {
            if negative {
                out.push('-');
            }
        } else {
            out.push_str(if negative { " - " } else { " + " });
        }
        if m.is_one() {
            out.push_str(&magnitude.to_string());
        } else {
            if !magnitude.is_one() {
                out.push_str(&magnitude.to_string());
                out.push('*');
            }
            m.render(names, out);
        }
    }
    if out.len() == start {
        out.push('0');
    }
}

impl<F: Field> Algebra<F> for Polynomial<F> {
    type Shape = PolyShape<F::Ctx>;

    fn shape(&self) -> Self::Shape {
        Polynomial::shape(self)
    }

    fn from_scalar(shape: &Self::Shape, c: &F) -> Self {
        Self::from_terms(shape.num_vars, &shape.ctx, [(Monomial::one(shape.num_vars), c.clone())])
    }

    fn plus(&self, rhs: &Self) -> Self {
        debug_assert_eq!(self.num_vars, rhs.num_vars);
        let mut terms = self.terms.clone();
        for (m, c) in &rhs.terms {
            accumulate(&mut terms, m.clone(), c.clone());
        }
        terms.retain(|_, c| !c.is_zero());
        Polynomial::from_map_unchecked(self.num_vars, self.ctx.clone(), terms)
    }

    fn minus(&self, rhs: &Self) -> Self {
        self.plus(&rhs.negated())
    }

    fn times(&self, rhs: &Self) -> Self {
        debug_assert_eq!(self.num_vars, rhs.num_vars);
        let mut acc: HashMap<Monomial, F> = HashMap::with_capacity(self.len() * rhs.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                let m = ma.mul(mb);
                let c = ca.clone() * cb;
                match acc.get_mut(&m) {
                    Some(slot) => *slot = slot.clone() + c,
                    None => {
                        acc.insert(m, c);
                    }
                }
            }
        }
        let terms = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        Polynomial::from_map_unchecked(self.num_vars, self.ctx.clone(), terms)
    }

    fn scale(&self, c: &F) -> Self {
        Polynomial::scale(self, c)
    }
}

impl<F: Field> Polynomial<F> {
    pub fn negated(&self) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| (m.clone(), -c.clone()))
            .collect();
        Polynomial::from_map_unchecked(self.num_vars, self.ctx.clone(), terms)
    }
}

// Operator forms panic on variable-count or field mismatch; use the
// `try_*` methods to get an error instead.
impl<'a, F: Field> Add<&'a Polynomial<F>> for &'a Polynomial<F> {
    type Output = Polynomial<F>;
    fn add(self, rhs: &'a Polynomial<F>) -> Polynomial<F> {
        self.try_add(rhs).expect("polynomial addition")
    }
}

impl<'a, F: Field> Sub<&'a Polynomial<F>> for &'a Polynomial<F> {
    type Output = Polynomial<F>;
    fn sub(self, rhs: &'a Polynomial<F>) -> Polynomial<F> {
        self.try_sub(rhs).expect("polynomial subtraction")
    }
}

impl<'a, F: Field> Mul<&'a Polynomial<F>> for &'a Polynomial<F> {
    type Output = Polynomial<F>;
    fn mul(self, rhs: &'a Polynomial<F>) -> Polynomial<F> {
        self.try_mul(rhs).expect("polynomial multiplication")
    }
}

impl<F: Field> Neg for &Polynomial<F> {
    type Output = Polynomial<F>;
    fn neg(self) -> Polynomial<F> {
        self.negated()
    }
}

impl<F: Field> fmt::Display for Polynomial<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render_with_prefix("x"))
    }
}

impl<F: Field> fmt::Debug for Polynomial<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial[{}; {}]({})", self.num_vars, self.ctx, self)
    }
}
