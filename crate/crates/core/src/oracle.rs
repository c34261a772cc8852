//! Evaluation and interpolation baseline for `f_new`.
//!
//! `f_new` has total degree at most `d = deg f`, so it has at most
//! `rho = C(n + d, n)` unknown coefficients. Pick points `b_1, ..., b_rho`,
//! set `a_i = u(b_i)` and solve `f_new(a_i) = f(b_i)`. Slow, but shares no
//! code path with the lifting algorithm beyond exact linear algebra.

use rand::Rng;

use crate::algebra::{monomials_up_to_degree, Field, Monomial, Polynomial};
use crate::error::{Error, Result};
use crate::serieslinalg::Matrix;

#[derive(Clone, Debug)]
pub struct InterpolationInstance<F: Field> {
    pub generators: Vec<Polynomial<F>>,
    pub target: Polynomial<F>,
    pub monomials: Vec<Monomial>,
    pub points: Vec<Vec<F>>,
    pub images: Vec<Vec<F>>,
}

impl<F: Field> InterpolationInstance<F> {
    /// Draws `rho` distinct integer points with coordinates in
    /// `[-10 rho, 10 rho]`.
    pub fn sample<R: Rng>(u: &[Polynomial<F>], f: &Polynomial<F>, rng: &mut R) -> Result<Self> {
        let n = u.len();
        check_shapes(u, f)?;
        let ctx = f.field().clone();
        let d = f.total_degree().max(0) as u32;
        let monomials = monomials_up_to_degree(n, d);
        let rho = monomials.len();
        let bound = 10 * rho as i64;
        let mut seen = std::collections::HashSet::new();
        let mut points = Vec::with_capacity(rho);
        while points.len() < rho {
            let b: Vec<i64> = (0..n).map(|_| rng.gen_range(-bound..=bound)).collect();
            if seen.insert(b.clone()) {
                points.push(b.iter().map(|&x| F::from_i64(&ctx, x)).collect::<Vec<F>>());
            }
        }
        let images = points
            .iter()
            .map(|b| u.iter().map(|g| g.evaluate(b)).collect::<Result<Vec<F>>>())
            .collect::<Result<_>>()?;
        Ok(InterpolationInstance {
            generators: u.to_vec(),
            target: f.clone(),
            monomials,
            points,
            images,
        })
    }

    pub fn rho(&self) -> usize {
        self.monomials.len()
    }

    /// Row `i` holds every candidate monomial evaluated at `a_i`.
    pub fn collocation_matrix(&self) -> Result<Matrix<F>> {
        let ctx = self.target.field();
        let n = self.generators.len();
        let rho = self.rho();
        let mut entries = Vec::with_capacity(rho * rho);
        for a in &self.images {
            for m in &self.monomials {
                let mono = Polynomial::from_terms(n, ctx, [(m.clone(), F::one(ctx))]);
                entries.push(mono.evaluate(a)?);
            }
        }
        Matrix::new(rho, rho, ctx, entries)
    }

    pub fn solve(&self) -> Result<Polynomial<F>> {
        let rhs = self
            .points
            .iter()
            .map(|b| self.target.evaluate(b))
            .collect::<Result<Vec<F>>>()?;
        let coeffs = self.collocation_matrix()?.solve(&rhs)?;
        Ok(Polynomial::from_terms(
            self.generators.len(),
            self.target.field(),
            self.monomials.iter().cloned().zip(coeffs),
        ))
    }
}

fn check_shapes<F: Field>(u: &[Polynomial<F>], f: &Polynomial<F>) -> Result<()> {
    let n = u.len();
    for p in u.iter().chain(std::iter::once(f)) {
        if p.num_vars() != n {
            return Err(Error::VarCountMismatch {
                left: n,
                right: p.num_vars(),
            });
        }
        if p.field() != f.field() {
            return Err(Error::FieldMismatch {
                left: f.field().to_string(),
                right: p.field().to_string(),
            });
        }
    }
    Ok(())
}

/// Interpolates `f_new`, resampling up to `max_retries` times when the
/// collocation matrix is singular.
pub fn interpolate_fnew<F: Field, R: Rng>(
    u: &[Polynomial<F>],
    f: &Polynomial<F>,
    rng: &mut R,
    max_retries: usize,
) -> Result<Polynomial<F>> {
    check_shapes(u, f)?;
    if f.is_zero() {
        return Ok(f.clone());
    }
    let attempts = max_retries.max(1);
    for _ in 0..attempts {
        match InterpolationInstance::sample(u, f, rng)?.solve() {
            Err(Error::SingularMatrix { .. }) => continue,
            other => return other,
        }
    }
    Err(Error::InterpolationSingular { attempts })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{Fp, PrimeModulus, Rational, RationalField};
    use crate::generators::power_sums;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    type P = Polynomial<Rational>;

    fn q(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    #[test]
    fn linear_target() {
        let u = power_sums::<Rational>(3, &RationalField);
        let f = &u[0] - &P::constant(3, q(2));
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let g = interpolate_fnew(&u, &f, &mut rng, 20).unwrap();
        assert_eq!(g.render_with_prefix("e"), "e1 - 2");
    }

    #[test]
    fn constant_target() {
        let u = power_sums::<Rational>(3, &RationalField);
        let f = P::constant(3, q(5));
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        assert_eq!(interpolate_fnew(&u, &f, &mut rng, 20).unwrap(), f);
    }

    #[test]
    fn instance_shape() {
        let u = power_sums::<Rational>(3, &RationalField);
        let f = &u[2] + &u[0];
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let inst = InterpolationInstance::sample(&u, &f, &mut rng).unwrap();
        assert_eq!(inst.rho(), 20);
        let m = inst.collocation_matrix().unwrap();
        assert_eq!((m.rows(), m.cols()), (20, 20));
        let pts: std::collections::HashSet<_> = inst.points.iter().collect();
        assert_eq!(pts.len(), 20);
    }

    #[test]
    fn degenerate_generators_exhaust_retries() {
        let x = |i| P::var(2, i, &RationalField);
        let u = vec![x(0), x(0).scale(&q(2))];
        let f = x(0);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let err = interpolate_fnew(&u, &f, &mut rng, 3).unwrap_err();
        assert_eq!(err, Error::InterpolationSingular { attempts: 3 });
    }

    #[test]
    fn prime_field() {
        let p = PrimeModulus::new(1_000_003).unwrap();
        let u = power_sums::<Fp>(2, &p);
        let f = &u[1] - &u[0].pow(2);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let g = interpolate_fnew(&u, &f, &mut rng, 20).unwrap();
        assert_eq!(g.render_with_prefix("e"), "1000002*e1^2 + e2");
    }
}
