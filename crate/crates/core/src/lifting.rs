//! Newton-Hensel lifting of a regular root to truncated power series.
//!
//! Given `h(x, e)` with `n` equations in `n` unknowns `x` and `m`
//! parameters `e`, a root `alpha` of `h(x, 0)` at which the Jacobian in
//! `x` is invertible extends to a unique vector of power series `v(e)`
//! with `v(0) = alpha` and `h(v(e), e) = 0`. [`lift`] returns `v`
//! truncated at a requested total degree.
//!
//! Iteration: `v^(0)` is the first-order lift
//! `alpha - J(alpha, 0)^{-1} h(alpha, e)`, exact through degree 1.
//! Step `k` applies `v <- v - J(v, e)^{-1} h(v, e)` at working precision
//! `min(2^k, delta)`, so after step `k` the residual has no term of degree
//! `<= min(2^k, delta)` and `ceil(log2 delta)` steps reach `delta`.

use crate::algebra::{Algebra, Field};
use crate::error::{Error, Result};
use crate::series::{SeriesShape, TruncatedSeries};
use crate::serieslinalg::{Matrix, SeriesMatrix};
use crate::slp::Slp;

/// A validated lifting instance.
#[derive(Clone, Debug)]
pub struct LiftProblem<F: Field> {
    system: Slp<F>,
    jacobian: Slp<F>,
    base_point: Vec<F>,
    num_params: usize,
    target_degree: u32,
    const_jac_inverse: Matrix<F>,
}

impl<F: Field> LiftProblem<F> {
    /// `system` has `n` outputs and `n + m` inputs: the unknowns `x`
    /// followed by the parameters `e`.
    pub fn new(system: Slp<F>, base_point: Vec<F>, target_degree: u32) -> Result<Self> {
        let n = system.num_outputs();
        if base_point.len() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                got: base_point.len(),
            });
        }
        if system.num_inputs() < n {
            return Err(Error::InvalidProgram(format!(
                "{n} equations but only {} inputs",
                system.num_inputs()
            )));
        }
        let jacobian = system.jacobian(n)?;
        Self::with_jacobian(system, jacobian, base_point, target_degree)
    }

    /// Like [`LiftProblem::new`] with a precomputed Jacobian program
    /// (`n * n` outputs, row-major, derivatives in the unknowns).
    pub fn with_jacobian(system: Slp<F>, jacobian: Slp<F>, base_point: Vec<F>, target_degree: u32) -> Result<Self> {
        let n = system.num_outputs();
        let num_params = system.num_inputs() - n;
        if jacobian.num_outputs() != n * n || jacobian.num_inputs() != system.num_inputs() {
            return Err(Error::InvalidProgram("Jacobian program has the wrong shape".into()));
        }
        let ctx = system.field().clone();
        let mut point = base_point.clone();
        point.extend((0..num_params).map(|_| F::zero(&ctx)));
        let residual = system.eval(&ctx, &point)?;
        if let Some((index, value)) = residual.iter().enumerate().find(|(_, r)| !r.is_zero()) {
            return Err(Error::NotARoot {
                index,
                value: value.to_string(),
            });
        }
        let jac0 = Matrix::new(n, n, &ctx, jacobian.eval(&ctx, &point)?)?;
        let const_jac_inverse = jac0.inverse().map_err(|e| match e {
            Error::SingularMatrix { rank, size } => Error::SingularJacobian { rank, size },
            other => other,
        })?;
        Ok(LiftProblem {
            system,
            jacobian,
            base_point,
            num_params,
            target_degree,
            const_jac_inverse,
        })
    }

    pub fn num_unknowns(&self) -> usize {
        self.base_point.len()
    }

    pub fn num_params(&self) -> usize {
        self.num_params
    }

    pub fn target_degree(&self) -> u32 {
        self.target_degree
    }

    pub fn base_point(&self) -> &[F] {
        &self.base_point
    }

    pub fn system(&self) -> &Slp<F> {
        &self.system
    }

    /// `J(alpha, 0)^{-1}`, computed once at construction.
    pub fn constant_jacobian_inverse(&self) -> &Matrix<F> {
        &self.const_jac_inverse
    }

    fn ctx(&self) -> F::Ctx {
        self.system.field().clone()
    }

    /// `v(0) = alpha` as constant series at precision 0.
    pub fn initial(&self) -> Vec<TruncatedSeries<F>> {
        self.base_point
            .iter()
            .map(|a| TruncatedSeries::constant(self.num_params, 0, a.clone()))
            .collect()
    }

    fn args(&self, v: &[TruncatedSeries<F>], precision: u32) -> Vec<TruncatedSeries<F>> {
        let ctx = self.ctx();
        v.iter()
            .map(|s| s.promote(precision))
            .chain((0..self.num_params).map(|j| TruncatedSeries::var(self.num_params, j, precision, &ctx)))
            .collect()
    }

    /// `h(v, e)` at the given precision.
    pub fn residual(&self, v: &[TruncatedSeries<F>], precision: u32) -> Result<Vec<TruncatedSeries<F>>> {
        if v.len() != self.num_unknowns() {
            return Err(Error::LengthMismatch {
                expected: self.num_unknowns(),
                got: v.len(),
            });
        }
        let shape = SeriesShape {
            num_vars: self.num_params,
            precision,
            ctx: self.ctx(),
        };
        self.system.eval(&shape, &self.args(v, precision))
    }
}

/// One Newton update of `v` (known at precision `q`), computed at
/// precision `min(2q, delta)`, or `min(1, delta)` from `q = 0`.
pub fn newton_step<F: Field>(v: &[TruncatedSeries<F>], problem: &LiftProblem<F>) -> Result<Vec<TruncatedSeries<F>>> {
    let n = problem.num_unknowns();
    if v.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            got: v.len(),
        });
    }
    let q = v.iter().map(TruncatedSeries::precision).min().unwrap_or(0);
    let target = (2 * q).max(1).min(problem.target_degree).max(q);
    let shape = SeriesShape {
        num_vars: problem.num_params,
        precision: target,
        ctx: problem.ctx(),
    };
    let args = problem.args(v, target);
    let h = problem.system.eval(&shape, &args)?;
    // J^{-1} h is needed through degree `target` only, so J^{-1} is needed
    // through `target - ord(h)`; normally ord(h) > q.
    let order = h.iter().filter_map(TruncatedSeries::order).min().unwrap_or(target + 1);
    let jac_precision = target.saturating_sub(order);
    let jac_shape = SeriesShape {
        precision: jac_precision,
        ..shape
    };
    let jac_args: Vec<_> = args.iter().map(|a| a.truncate(jac_precision)).collect();
    let jac = SeriesMatrix::new(n, n, problem.jacobian.eval(&jac_shape, &jac_args)?)?;
    let jac_inv = jac.inverse_from_constant(&problem.const_jac_inverse)?;
    // terms of J^{-1} above `jac_precision` only meet terms of h of degree
    // at least `order`, landing above `target`
    let delta: Vec<_> = (0..n)
        .map(|i| {
            let pairs: Vec<_> = (0..n).map(|k| (jac_inv.get(i, k), &h[k])).collect();
            TruncatedSeries::dot(problem.num_params, target, &problem.ctx(), &pairs)
        })
        .collect();
    Ok(args[..n].iter().zip(&delta).map(|(vi, di)| vi.minus(di)).collect())
}

/// Iterates of one lifting run.
#[derive(Clone, Debug)]
pub struct LiftTrace<F: Field> {
    /// First-order lift, precision `min(1, delta)`.
    pub first_order: Vec<TruncatedSeries<F>>,
    /// `steps[k - 1]` is the iterate after doubling step `k`.
    pub steps: Vec<Vec<TruncatedSeries<F>>>,
}

impl<F: Field> LiftTrace<F> {
    pub fn result(&self) -> &[TruncatedSeries<F>] {
        self.steps.last().unwrap_or(&self.first_order)
    }

    pub fn doubling_steps(&self) -> usize {
        self.steps.len()
    }
}

pub fn lift_with_trace<F: Field>(problem: &LiftProblem<F>) -> Result<LiftTrace<F>> {
    if problem.target_degree == 0 {
        return Ok(LiftTrace {
            first_order: problem.initial(),
            steps: Vec::new(),
        });
    }
    let first_order = newton_step(&problem.initial(), problem)?;
    let mut steps: Vec<Vec<TruncatedSeries<F>>> = Vec::new();
    loop {
        let current = steps.last().unwrap_or(&first_order);
        if current[0].precision() >= problem.target_degree {
            break;
        }
        let next = newton_step(current, problem)?;
        steps.push(next);
    }
    Ok(LiftTrace { first_order, steps })
}

/// The root series truncated at total degree `delta`.
pub fn lift<F: Field>(problem: &LiftProblem<F>) -> Result<Vec<TruncatedSeries<F>>> {
    Ok(lift_with_trace(problem)?.result().to_vec())
}
