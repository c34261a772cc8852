//! Rewriting `f` in `K[u_1, ..., u_n]` as `f_new(e_1, ..., e_n)`.
//!
//! The steps:
//!
//! 1. pick a point `alpha` where the Jacobian of `u` is invertible and set
//!    `c = u(alpha)`;
//! 2. lift the root `alpha` of `u(x) - e - c` to power series `v(e)` up to
//!    degree `d = deg f`;
//! 3. `bar_f_new` is `f(v(e))` truncated at degree `d`. Since
//!    `u(v(e)) = e + c`, this equals `f_new(e + c)`;
//! 4. `f_new(e) = bar_f_new(e - c)`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{Algebra, Field, Polynomial};
use crate::error::{Error, Result};
use crate::lifting::{lift, LiftProblem};
use crate::series::{SeriesShape, TruncatedSeries};
use crate::serieslinalg::Matrix;
use crate::slp::{Slp, SlpBuilder};

pub const DEFAULT_SAMPLE_BOUND: u64 = 1000;
pub const DEFAULT_MAX_RETRIES: usize = 20;

#[derive(Clone, Debug)]
pub struct ConvertRequest<F: Field> {
    pub generators: Vec<Polynomial<F>>,
    pub target: Polynomial<F>,
    pub seed: u64,
    /// Coordinates of `alpha` are drawn from `[-sample_bound, sample_bound]`.
    pub sample_bound: u64,
    pub max_retries: usize,
    /// First point to try instead of a random draw.
    pub forced_point: Option<Vec<F>>,
    pub verify: bool,
}

impl<F: Field> ConvertRequest<F> {
    pub fn new(generators: Vec<Polynomial<F>>, target: Polynomial<F>) -> Self {
        ConvertRequest {
            generators,
            target,
            seed: 0,
            sample_bound: DEFAULT_SAMPLE_BOUND,
            max_retries: DEFAULT_MAX_RETRIES,
            forced_point: None,
            verify: false,
        }
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn forced_point(mut self, point: Vec<F>) -> Self {
        self.forced_point = Some(point);
        self
    }

    pub fn verify(mut self, verify: bool) -> Self {
        self.verify = verify;
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConvertResult<F: Field> {
    pub f_new: Polynomial<F>,
    pub alpha: Vec<F>,
    pub c: Vec<F>,
    /// `f_new(e + c)`, before translation.
    pub bar_f_new: Polynomial<F>,
    pub degree: i64,
    /// Rejected draws before `alpha` was accepted.
    pub retries: usize,
}

/// Generators compiled once to a program and its Jacobian.
#[derive(Clone, Debug)]
pub struct CompiledGenerators<F: Field> {
    polys: Vec<Polynomial<F>>,
    program: Slp<F>,
    jacobian: Slp<F>,
}

impl<F: Field> CompiledGenerators<F> {
    pub fn new(generators: &[Polynomial<F>]) -> Result<Self> {
        let program = Slp::from_polynomials(generators)?;
        let n = generators.len();
        if program.num_inputs() != n {
            return Err(Error::VarCountMismatch {
                left: n,
                right: program.num_inputs(),
            });
        }
        let jacobian = program.jacobian(n)?;
        Ok(CompiledGenerators {
            polys: generators.to_vec(),
            program,
            jacobian,
        })
    }

    pub fn len(&self) -> usize {
        self.polys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polys.is_empty()
    }

    pub fn polynomials(&self) -> &[Polynomial<F>] {
        &self.polys
    }

    pub fn program(&self) -> &Slp<F> {
        &self.program
    }

    pub fn field(&self) -> &F::Ctx {
        self.program.field()
    }

    pub fn jacobian_at(&self, point: &[F]) -> Result<Matrix<F>> {
        let n = self.len();
        let entries = self.jacobian.eval(self.field(), point)?;
        Matrix::new(n, n, self.field(), entries)
    }
}

#[derive(Clone, Debug)]
pub struct RegularPoint<F: Field> {
    pub alpha: Vec<F>,
    pub c: Vec<F>,
    pub retries: usize,
}

/// Draws points with integer coordinates in `[-bound, bound]` until the
/// Jacobian of the generators is invertible there, trying `forced` first.
/// Gives up after `max_retries` draws.
pub fn sample_regular_point<F: Field, R: Rng>(
    gens: &CompiledGenerators<F>,
    rng: &mut R,
    bound: u64,
    max_retries: usize,
    forced: Option<&[F]>,
) -> Result<RegularPoint<F>> {
    let n = gens.len();
    let ctx = gens.field().clone();
    let bound = bound.min(i64::MAX as u64) as i64;
    let mut last = String::new();
    for attempt in 0..max_retries.max(1) {
        let alpha: Vec<F> = match (attempt, forced) {
            (0, Some(p)) => {
                if p.len() != n {
                    return Err(Error::LengthMismatch {
                        expected: n,
                        got: p.len(),
                    });
                }
                p.to_vec()
            }
            _ => (0..n)
                .map(|_| F::from_i64(&ctx, rng.gen_range(-bound..=bound)))
                .collect(),
        };
        if gens.jacobian_at(&alpha)?.inverse().is_ok() {
            let c = gens.program.eval(&ctx, &alpha)?;
            return Ok(RegularPoint {
                alpha,
                c,
                retries: attempt,
            });
        }
        last = render_point(&alpha);
    }
    Err(Error::RegularPointNotFound {
        attempts: max_retries.max(1),
        last_point: last,
    })
}

fn render_point<F: Field>(p: &[F]) -> String {
    let parts: Vec<String> = p.iter().map(F::to_string).collect();
    format!("({})", parts.join(", "))
}

/// Program for `(u_1 - e_1 - c_1, ..., u_n - e_n - c_n)` over inputs
/// `(x_1, ..., x_n, e_1, ..., e_n)`.
pub fn shift_system<F: Field>(u: &Slp<F>, c: &[F]) -> Result<Slp<F>> {
    let n = u.num_outputs();
    if c.len() != n || u.num_inputs() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            got: c.len(),
        });
    }
    let (mut b, map) = SlpBuilder::from_slp(u, 2 * n);
    let outputs = (0..n)
        .map(|i| {
            let e = b.input(n + i);
            let t = b.sub(map[u.outputs()[i]], e);
            let k = b.constant(c[i].clone());
            b.sub(t, k)
        })
        .collect();
    Ok(b.finish(outputs))
}

pub fn convert_polynomial<F: Field>(req: &ConvertRequest<F>) -> Result<ConvertResult<F>> {
    let gens = CompiledGenerators::new(&req.generators)?;
    let n = gens.len();
    let ctx = gens.field().clone();
    if req.target.num_vars() != n {
        return Err(Error::VarCountMismatch {
            left: n,
            right: req.target.num_vars(),
        });
    }
    if *req.target.field() != ctx {
        return Err(Error::FieldMismatch {
            left: ctx.to_string(),
            right: req.target.field().to_string(),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(req.seed);
    let point = sample_regular_point(
        &gens,
        &mut rng,
        req.sample_bound,
        req.max_retries,
        req.forced_point.as_deref(),
    )?;
    let degree = req.target.total_degree();
    let (bar_f_new, f_new) = if degree < 0 {
        (Polynomial::zero(n, &ctx), Polynomial::zero(n, &ctx))
    } else {
        let d = degree as u32;
        let delta = d.max(1);
        let system = shift_system(&gens.program, &point.c)?;
        let problem = LiftProblem::with_jacobian(
            system,
            gens.jacobian.with_extra_inputs(n),
            point.alpha.clone(),
            delta,
        )?;
        let v = lift(&problem)?;
        let shape = SeriesShape {
            num_vars: n,
            precision: delta,
            ctx: ctx.clone(),
        };
        // f(v) = f(alpha + w) with w = v - alpha free of constant terms, so
        // products of k factors of w start at degree k and most pairs in
        // the series products fall above the cutoff
        let f_at_alpha = req.target.translate(&point.alpha)?;
        let w: Vec<TruncatedSeries<F>> = v
            .iter()
            .zip(&point.alpha)
            .map(|(vi, a)| vi.minus(&TruncatedSeries::constant(n, delta, a.clone())))
            .collect();
        let fv = f_at_alpha.evaluate_in(&shape, &w)?;
        let bar = fv.truncate(d).to_polynomial();
        let minus_c: Vec<F> = point.c.iter().map(|x| -x.clone()).collect();
        let f_new = bar.translate(&minus_c)?;
        (bar, f_new)
    };
    if req.verify {
        let residual = rewrite_residual(&req.generators, &req.target, &f_new)?;
        if !residual.is_zero() {
            return Err(Error::VerificationFailed {
                residual: residual.to_string(),
            });
        }
    }
    Ok(ConvertResult {
        f_new,
        alpha: point.alpha,
        c: point.c,
        bar_f_new,
        degree,
        retries: point.retries,
    })
}

/// `f_new(u_1, ..., u_n) - f`.
pub fn rewrite_residual<F: Field>(
    u: &[Polynomial<F>],
    f: &Polynomial<F>,
    f_new: &Polynomial<F>,
) -> Result<Polynomial<F>> {
    f_new.compose(u)?.try_sub(f)
}

/// Whether substituting `u_i` for `e_i` in `f_new` reproduces `f` exactly.
pub fn verify_rewrite<F: Field>(u: &[Polynomial<F>], f: &Polynomial<F>, f_new: &Polynomial<F>) -> Result<bool> {
    Ok(rewrite_residual(u, f, f_new)?.is_zero())
}
