//! Straight-line programs over `+`, `-`, `*`.
//!
//! A program is a list of instructions, each reading only earlier
//! instructions, plus a list of output indices. It evaluates in any
//! [`Algebra`] over its field, and [`Slp::gradient`] turns a single-output
//! program into one computing all first partial derivatives by reverse
//! accumulation (Baur-Strassen), at a constant factor of the original length.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::algebra::{Algebra, Field, Monomial, Polynomial};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Instr<F> {
    Input(usize),
    Const(F),
    Add(usize, usize),
    Sub(usize, usize),
    Mul(usize, usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Slp<F: Field> {
    num_inputs: usize,
    ctx: F::Ctx,
    instrs: Vec<Instr<F>>,
    outputs: Vec<usize>,
}

impl<F: Field> Slp<F> {
    /// Validates operand and output indices.
    pub fn new(num_inputs: usize, ctx: F::Ctx, instrs: Vec<Instr<F>>, outputs: Vec<usize>) -> Result<Self> {
        for (i, ins) in instrs.iter().enumerate() {
            let ok = match ins {
                Instr::Input(k) => *k < num_inputs,
                Instr::Const(c) => c.ctx() == ctx,
                Instr::Add(a, b) | Instr::Sub(a, b) | Instr::Mul(a, b) => *a < i && *b < i,
            };
            if !ok {
                return Err(Error::InvalidProgram(format!("instruction {i}: {ins:?}")));
            }
        }
        if let Some(o) = outputs.iter().find(|&&o| o >= instrs.len()) {
            return Err(Error::InvalidProgram(format!("output index {o} out of range")));
        }
        Ok(Slp {
            num_inputs,
            ctx,
            instrs,
            outputs,
        })
    }

    pub fn num_inputs(&self) -> usize {
        self.num_inputs
    }

    pub fn num_outputs(&self) -> usize {
        self.outputs.len()
    }

    pub fn len(&self) -> usize {
        self.instrs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instrs.is_empty()
    }

    pub fn instructions(&self) -> &[Instr<F>] {
        &self.instrs
    }

    pub fn outputs(&self) -> &[usize] {
        &self.outputs
    }

    pub fn field(&self) -> &F::Ctx {
        &self.ctx
    }

    /// Compiles polynomials sharing a ring into one program with one
    /// output each. Every monomial is built once, from a monomial of one
    /// lower degree times a variable, so the length is linear in the
    /// number of distinct monomials plus terms.
    pub fn from_polynomials(ps: &[Polynomial<F>]) -> Result<Self> {
        let first = ps
            .first()
            .ok_or_else(|| Error::InvalidProgram("no polynomials to compile".into()))?;
        let (n, ctx) = (first.num_vars(), first.field().clone());
        for p in ps {
            if p.num_vars() != n {
                return Err(Error::VarCountMismatch {
                    left: n,
                    right: p.num_vars(),
                });
            }
            if *p.field() != ctx {
                return Err(Error::FieldMismatch {
                    left: ctx.to_string(),
                    right: p.field().to_string(),
                });
            }
        }
        let mut b = SlpBuilder::new(n, ctx);
        let mut monos: HashMap<Monomial, usize> = HashMap::new();
        let mut outputs = Vec::with_capacity(ps.len());
        for p in ps {
            let mut acc: Option<usize> = None;
            for (m, c) in p.terms() {
                let (term, negate) = if m.is_one() {
                    (b.constant(c.clone()), false)
                } else {
                    let mono = b.monomial(m, &mut monos);
                    if c.is_one() {
                        (mono, false)
                    } else if (-c.clone()).is_one() {
                        (mono, true)
                    } else {
                        let k = b.constant(c.clone());
                        (b.mul(k, mono), false)
                    }
                };
                acc = Some(match (acc, negate) {
                    (None, false) => term,
                    (None, true) => b.neg(term),
                    (Some(a), false) => b.add(a, term),
                    (Some(a), true) => b.sub(a, term),
                });
            }
            let out = match acc {
                Some(a) => a,
                None => b.constant(F::zero(&b.ctx)),
            };
            outputs.push(out);
        }
        Ok(b.finish(outputs))
    }

    /// Evaluates every output in the algebra `R`; constants are embedded
    /// through `shape`.
    pub fn eval<R: Algebra<F>>(&self, shape: &R::Shape, args: &[R]) -> Result<Vec<R>> {
        if args.len() != self.num_inputs {
            return Err(Error::LengthMismatch {
                expected: self.num_inputs,
                got: args.len(),
            });
        }
        let mut vals: Vec<R> = Vec::with_capacity(self.instrs.len());
        for ins in &self.instrs {
            let v = match ins {
                Instr::Input(k) => args[*k].clone(),
                Instr::Const(c) => R::from_scalar(shape, c),
                Instr::Add(a, b) => vals[*a].plus(&vals[*b]),
                Instr::Sub(a, b) => vals[*a].minus(&vals[*b]),
                Instr::Mul(a, b) => vals[*a].times(&vals[*b]),
            };
            vals.push(v);
        }
        Ok(self.outputs.iter().map(|&o| vals[o].clone()).collect())
    }

    /// Reverse-mode transformation: a program with `num_inputs` outputs,
    /// the partial derivatives of the single output of `self`.
    pub fn gradient(&self) -> Result<Self> {
        if self.outputs.len() != 1 {
            return Err(Error::MultiOutput(self.outputs.len()));
        }
        let (mut b, fwd) = SlpBuilder::from_slp(self, self.num_inputs);
        let len = self.instrs.len();
        let mut adj: Vec<Option<usize>> = vec![None; len];
        let mut grad: Vec<Option<usize>> = vec![None; self.num_inputs];
        let one = b.constant(F::one(&self.ctx));
        adj[self.outputs[0]] = Some(one);

        fn bump<F: Field>(b: &mut SlpBuilder<F>, slot: &mut Option<usize>, t: usize, negate: bool) {
            *slot = Some(match (*slot, negate) {
                (None, false) => t,
                (None, true) => b.neg(t),
                (Some(s), false) => b.add(s, t),
                (Some(s), true) => b.sub(s, t),
            });
        }

        for i in (0..len).rev() {
            let Some(a) = adj[i] else { continue };
            match self.instrs[i] {
                Instr::Input(k) => bump(&mut b, &mut grad[k], a, false),
                Instr::Const(_) => {}
                Instr::Add(j, k) => {
                    bump(&mut b, &mut adj[j], a, false);
                    bump(&mut b, &mut adj[k], a, false);
                }
                Instr::Sub(j, k) => {
                    bump(&mut b, &mut adj[j], a, false);
                    bump(&mut b, &mut adj[k], a, true);
                }
                Instr::Mul(j, k) => {
                    let dj = b.mul(a, fwd[k]);
                    bump(&mut b, &mut adj[j], dj, false);
                    let dk = b.mul(a, fwd[j]);
                    bump(&mut b, &mut adj[k], dk, false);
                }
            }
        }
        let outputs = grad
            .into_iter()
            .map(|g| g.unwrap_or_else(|| b.constant(F::zero(&self.ctx))))
            .collect();
        Ok(b.finish(outputs))
    }

    /// Single-output program for output `index`, without dead instructions.
    pub fn select_output(&self, index: usize) -> Self {
        self.select_outputs(&[index])
    }

    /// Program restricted to the given outputs, without dead instructions.
    pub fn select_outputs(&self, indices: &[usize]) -> Self {
        let mut live = vec![false; self.instrs.len()];
        for &i in indices {
            live[self.outputs[i]] = true;
        }
        for i in (0..self.instrs.len()).rev() {
            if !live[i] {
                continue;
            }
            if let Instr::Add(a, b) | Instr::Sub(a, b) | Instr::Mul(a, b) = self.instrs[i] {
                live[a] = true;
                live[b] = true;
            }
        }
        let mut remap = vec![usize::MAX; self.instrs.len()];
        let mut instrs = Vec::new();
        for (i, ins) in self.instrs.iter().enumerate() {
            if !live[i] {
                continue;
            }
            remap[i] = instrs.len();
            instrs.push(match ins {
                Instr::Add(a, b) => Instr::Add(remap[*a], remap[*b]),
                Instr::Sub(a, b) => Instr::Sub(remap[*a], remap[*b]),
                Instr::Mul(a, b) => Instr::Mul(remap[*a], remap[*b]),
                other => other.clone(),
            });
        }
        Slp {
            num_inputs: self.num_inputs,
            ctx: self.ctx.clone(),
            instrs,
            outputs: indices.iter().map(|&i| remap[self.outputs[i]]).collect(),
        }
    }

    /// Concatenates programs over the same inputs; outputs are appended in order.
    pub fn stack(progs: &[Slp<F>]) -> Result<Self> {
        let first = progs
            .first()
            .ok_or_else(|| Error::InvalidProgram("nothing to stack".into()))?;
        let mut instrs = Vec::new();
        let mut outputs = Vec::new();
        for p in progs {
            if p.num_inputs != first.num_inputs {
                return Err(Error::LengthMismatch {
                    expected: first.num_inputs,
                    got: p.num_inputs,
                });
            }
            let off = instrs.len();
            instrs.extend(p.instrs.iter().map(|ins| match ins {
                Instr::Add(a, b) => Instr::Add(a + off, b + off),
                Instr::Sub(a, b) => Instr::Sub(a + off, b + off),
                Instr::Mul(a, b) => Instr::Mul(a + off, b + off),
                other => other.clone(),
            }));
            outputs.extend(p.outputs.iter().map(|o| o + off));
        }
        Slp::new(first.num_inputs, first.ctx.clone(), instrs, outputs)
    }

    /// Jacobian of all outputs with respect to the first `num_vars` inputs,
    /// as one program with row-major outputs.
    pub fn jacobian(&self, num_vars: usize) -> Result<Self> {
        if num_vars > self.num_inputs {
            return Err(Error::LengthMismatch {
                expected: self.num_inputs,
                got: num_vars,
            });
        }
        let rows = (0..self.num_outputs())
            .map(|i| {
                let g = self.select_output(i).gradient()?;
                Ok(g.select_outputs(&(0..num_vars).collect::<Vec<_>>()))
            })
            .collect::<Result<Vec<_>>>()?;
        Slp::stack(&rows)
    }

    /// Same instructions, with `extra` more (unused) inputs appended.
    pub fn with_extra_inputs(&self, extra: usize) -> Self {
        Slp {
            num_inputs: self.num_inputs + extra,
            ..self.clone()
        }
    }

    /// Debug listing, one instruction per line.
    pub fn dump(&self) -> String {
        let mut s = String::new();
        for (i, ins) in self.instrs.iter().enumerate() {
            let _ = match ins {
                Instr::Input(k) => writeln!(s, "%{i} = input {k}"),
                Instr::Const(c) => writeln!(s, "%{i} = const {c}"),
                Instr::Add(a, b) => writeln!(s, "%{i} = add %{a} %{b}"),
                Instr::Sub(a, b) => writeln!(s, "%{i} = sub %{a} %{b}"),
                Instr::Mul(a, b) => writeln!(s, "%{i} = mul %{a} %{b}"),
            };
        }
        let outs: Vec<String> = self.outputs.iter().map(|o| format!("%{o}")).collect();
        let _ = writeln!(s, "return {}", outs.join(", "));
        s
    }
}

/// Incremental program construction with constant folding.
///
/// Folding only rewrites operations whose result is determined by known
/// constants (`0 + a`, `1 * a`, `c1 op c2`, ...), so the built program is
/// extensionally equal to the unfolded one.
pub struct SlpBuilder<F: Field> {
    num_inputs: usize,
    ctx: F::Ctx,
    instrs: Vec<Instr<F>>,
    known: Vec<Option<F>>,
    inputs: Vec<Option<usize>>,
    consts: HashMap<F, usize>,
}

impl<F: Field> SlpBuilder<F> {
    pub fn new(num_inputs: usize, ctx: F::Ctx) -> Self {
        SlpBuilder {
            num_inputs,
            ctx,
            instrs: Vec::new(),
            known: Vec::new(),
            inputs: vec![None; num_inputs],
            consts: HashMap::new(),
        }
    }

    /// Starts from a copy of `prog` (with `num_inputs >= prog.num_inputs()`),
    /// returning the builder and the new index of each original instruction.
    pub fn from_slp(prog: &Slp<F>, num_inputs: usize) -> (Self, Vec<usize>) {
        assert!(num_inputs >= prog.num_inputs);
        let mut b = SlpBuilder::new(num_inputs, prog.ctx.clone());
        let mut map = Vec::with_capacity(prog.instrs.len());
        for ins in &prog.instrs {
            let idx = match ins {
                Instr::Input(k) => b.input(*k),
                Instr::Const(c) => b.constant(c.clone()),
                Instr::Add(x, y) => b.add(map[*x], map[*y]),
                Instr::Sub(x, y) => b.sub(map[*x], map[*y]),
                Instr::Mul(x, y) => b.mul(map[*x], map[*y]),
            };
            map.push(idx);
        }
        (b, map)
    }

    fn push(&mut self, ins: Instr<F>, known: Option<F>) -> usize {
        self.instrs.push(ins);
        self.known.push(known);
        self.instrs.len() - 1
    }

    pub fn input(&mut self, k: usize) -> usize {
        assert!(k < self.num_inputs, "input index out of range");
        if let Some(i) = self.inputs[k] {
            return i;
        }
        let i = self.push(Instr::Input(k), None);
        self.inputs[k] = Some(i);
        i
    }

    pub fn constant(&mut self, c: F) -> usize {
        if let Some(&i) = self.consts.get(&c) {
            return i;
        }
        let i = self.push(Instr::Const(c.clone()), Some(c.clone()));
        self.consts.insert(c, i);
        i
    }

    fn known(&self, i: usize) -> Option<&F> {
        self.known[i].as_ref()
    }

    pub fn add(&mut self, a: usize, b: usize) -> usize {
        match (self.known(a), self.known(b)) {
            (Some(x), Some(y)) => {
                let c = x.clone() + y;
                self.constant(c)
            }
            (Some(x), _) if x.is_zero() => b,
            (_, Some(y)) if y.is_zero() => a,
            _ => self.push(Instr::Add(a, b), None),
        }
    }

    pub fn sub(&mut self, a: usize, b: usize) -> usize {
        match (self.known(a), self.known(b)) {
            (Some(x), Some(y)) => {
                let c = x.clone() - y;
                self.constant(c)
            }
            (_, Some(y)) if y.is_zero() => a,
            _ if a == b => self.constant(F::zero(&self.ctx)),
            _ => self.push(Instr::Sub(a, b), None),
        }
    }

    pub fn mul(&mut self, a: usize, b: usize) -> usize {
        match (self.known(a), self.known(b)) {
            (Some(x), Some(y)) => {
                let c = x.clone() * y;
                self.constant(c)
            }
            (Some(x), _) if x.is_zero() => a,
            (_, Some(y)) if y.is_zero() => b,
            (Some(x), _) if x.is_one() => b,
            (_, Some(y)) if y.is_one() => a,
            _ => self.push(Instr::Mul(a, b), None),
        }
    }

    pub fn neg(&mut self, a: usize) -> usize {
        let z = self.constant(F::zero(&self.ctx));
        self.sub(z, a)
    }

    fn monomial(&mut self, m: &Monomial, cache: &mut HashMap<Monomial, usize>) -> usize {
        if let Some(&i) = cache.get(m) {
            return i;
        }
        let v = m.first_var().expect("non-constant monomial");
        let lower = m.div_var(v).expect("first_var divides");
        let x = self.input(v);
        let i = if lower.is_one() {
            x
        } else {
            let l = self.monomial(&lower, cache);
            self.mul(l, x)
        };
        cache.insert(m.clone(), i);
        i
    }

    pub fn finish(self, outputs: Vec<usize>) -> Slp<F> {
        assert!(outputs.iter().all(|&o| o < self.instrs.len()));
        Slp {
            num_inputs: self.num_inputs,
            ctx: self.ctx,
            instrs: self.instrs,
            outputs,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{PolyShape, Rational, RationalField};

    type P = Polynomial<Rational>;

    fn q(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    fn x(n: usize, i: usize) -> P {
        P::var(n, i, &RationalField)
    }

    fn psum(n: usize, k: u32) -> P {
        (0..n).fold(P::zero(n, &RationalField), |acc, i| &acc + &x(n, i).pow(k))
    }

    fn generic_args(n: usize) -> (PolyShape<RationalField>, Vec<P>) {
        (
            PolyShape {
                num_vars: n,
                ctx: RationalField,
            },
            (0..n).map(|i| x(n, i)).collect(),
        )
    }

    #[test]
    fn constant_program_is_one_instruction() {
        let prog = Slp::from_polynomials(&[P::constant(2, q(2))]).unwrap();
        assert_eq!(prog.instructions(), &[Instr::Const(q(2))]);
        assert_eq!(prog.eval(&RationalField, &[q(5), q(7)]).unwrap(), vec![q(2)]);
    }

    #[test]
    fn power_sums_reproduce_dense() {
        let ps = vec![psum(3, 1), psum(3, 2), psum(3, 3)];
        let prog = Slp::from_polynomials(&ps).unwrap();
        let (shape, args) = generic_args(3);
        assert_eq!(prog.eval(&shape, &args).unwrap(), ps);
        assert_eq!(prog.eval(&RationalField, &[q(4), q(6), q(0)]).unwrap()[0], q(10));
    }

    #[test]
    fn gradients_of_examples() {
        let (shape, args) = generic_args(3);
        let g = Slp::from_polynomials(&[psum(3, 1)]).unwrap().gradient().unwrap();
        assert_eq!(
            g.eval(&shape, &args).unwrap(),
            vec![P::constant(3, q(1)); 3]
        );
        let g = Slp::from_polynomials(&[psum(3, 3)]).unwrap().gradient().unwrap();
        let expected: Vec<P> = (0..3).map(|i| x(3, i).pow(2).scale(&q(3))).collect();
        assert_eq!(g.eval(&shape, &args).unwrap(), expected);
        let (shape2, args2) = generic_args(2);
        let g = Slp::from_polynomials(&[psum(2, 2)]).unwrap().gradient().unwrap();
        assert_eq!(
            g.eval(&shape2, &args2).unwrap(),
            vec![x(2, 0).scale(&q(2)), x(2, 1).scale(&q(2))]
        );
    }

    #[test]
    fn gradient_rejects_multi_output() {
        let prog = Slp::from_polynomials(&[psum(2, 1), psum(2, 2)]).unwrap();
        assert_eq!(prog.gradient(), Err(Error::MultiOutput(2)));
    }

    #[test]
    fn gradient_of_unused_input_is_zero() {
        let prog = Slp::from_polynomials(&[x(3, 1).pow(2)]).unwrap();
        let g = prog.gradient().unwrap();
        let out = g.eval(&RationalField, &[q(1), q(5), q(2)]).unwrap();
        assert_eq!(out, vec![q(0), q(10), q(0)]);
    }

    #[test]
    fn jacobian_rows() {
        let prog = Slp::from_polynomials(&[psum(3, 1), psum(3, 2), psum(3, 3)]).unwrap();
        let jac = prog.jacobian(3).unwrap();
        let vals = jac.eval(&RationalField, &[q(0), q(0), q(0)]).unwrap();
        assert_eq!(vals, [1, 1, 1, 0, 0, 0, 0, 0, 0].map(q).to_vec());
    }

    #[test]
    fn validation() {
        let bad = Slp::<Rational>::new(1, RationalField, vec![Instr::Add(0, 0)], vec![0]);
        assert!(bad.is_err());
        let bad = Slp::<Rational>::new(1, RationalField, vec![Instr::Input(1)], vec![0]);
        assert!(bad.is_err());
        let bad = Slp::<Rational>::new(1, RationalField, vec![Instr::Input(0)], vec![3]);
        assert!(bad.is_err());
        let prog = Slp::from_polynomials(&[psum(2, 1)]).unwrap();
        assert!(prog.eval(&RationalField, &[q(1)]).is_err());
    }

    #[test]
    fn dump_format() {
        let prog = Slp::from_polynomials(&[&x(2, 0) * &x(2, 1)]).unwrap();
        assert_eq!(prog.dump(), "%0 = input 0\n%1 = input 1\n%2 = mul %1 %0\nreturn %2\n");
    }

    #[test]
    fn select_drops_dead_code() {
        let prog = Slp::from_polynomials(&[psum(3, 3), x(3, 0)]).unwrap();
        let only = prog.select_output(1);
        assert_eq!(only.len(), 1);
        assert_eq!(only.eval(&RationalField, &[q(7), q(1), q(1)]).unwrap(), vec![q(7)]);
    }
}
