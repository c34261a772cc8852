//! Dense matrices over the field and over the truncated-series ring.

use std::fmt;

use crate::algebra::{Algebra, Field};
use crate::error::{Error, Result};
use crate::series::TruncatedSeries;

/// Dense row-major matrix over `F`.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix<F: Field> {
    rows: usize,
    cols: usize,
    ctx: F::Ctx,
    entries: Vec<F>,
}

impl<F: Field> Matrix<F> {
    pub fn new(rows: usize, cols: usize, ctx: &F::Ctx, entries: Vec<F>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::ShapeMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        Ok(Matrix {
            rows,
            cols,
            ctx: ctx.clone(),
            entries,
        })
    }

    pub fn from_rows(ctx: &F::Ctx, rows: Vec<Vec<F>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::ShapeMismatch("ragged rows".into()));
        }
        Matrix::new(r, c, ctx, rows.into_iter().flatten().collect())
    }

    pub fn zero(rows: usize, cols: usize, ctx: &F::Ctx) -> Self {
        Matrix {
            rows,
            cols,
            ctx: ctx.clone(),
            entries: vec![F::zero(ctx); rows * cols],
        }
    }

    pub fn identity(n: usize, ctx: &F::Ctx) -> Self {
        let mut m = Self::zero(n, n, ctx);
        for i in 0..n {
            m.entries[i * n + i] = F::one(ctx);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &F {
        &self.entries[i * self.cols + j]
    }

    pub fn entries(&self) -> &[F] {
        &self.entries
    }

    pub fn mul(&self, other: &Matrix<F>) -> Result<Matrix<F>> {
        if self.cols != other.rows {
            return Err(Error::ShapeMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Vec::with_capacity(self.rows * other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = F::zero(&self.ctx);
                for k in 0..self.cols {
                    acc = acc + self.get(i, k).clone() * other.get(k, j);
                }
                out.push(acc);
            }
        }
        Matrix::new(self.rows, other.cols, &self.ctx, out)
    }

    /// Row echelon form in place; returns the pivot columns.
    fn eliminate(rows: usize, cols: usize, a: &mut [F], reduce_above: bool, pivot_cols: usize) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for col in 0..pivot_cols {
            if r == rows {
                break;
            }
            let Some(p) = (r..rows).find(|&i| !a[i * cols + col].is_zero()) else {
                continue;
            };
            if p != r {
                for j in 0..cols {
                    a.swap(p * cols + j, r * cols + j);
                }
            }
            let inv = a[r * cols + col].inv().expect("pivot is nonzero");
            for j in 0..cols {
                a[r * cols + j] = a[r * cols + j].clone() * &inv;
            }
            for i in 0..rows {
                if i == r || (!reduce_above && i < r) {
                    continue;
                }
                let factor = a[i * cols + col].clone();
                if factor.is_zero() {
                    continue;
                }
                for j in 0..cols {
                    let t = a[r * cols + j].clone() * &factor;
                    a[i * cols + j] = a[i * cols + j].clone() - t;
                }
            }
            pivots.push(col);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        let mut a = self.entries.clone();
        Self::eliminate(self.rows, self.cols, &mut a, false, self.cols).len()
    }

    /// Exact inverse by Gauss-Jordan elimination, taking the first nonzero
    /// pivot in each column.
    pub fn inverse(&self) -> Result<Matrix<F>> {
        if self.rows != self.cols {
            return Err(Error::ShapeMismatch(format!(
                "inverse of a {}x{} matrix",
                self.rows, self.cols
            )));
        }
        let n = self.rows;
        let w = 2 * n;
        let mut a = Vec::with_capacity(n * w);
        for i in 0..n {
            a.extend_from_slice(&self.entries[i * n..(i + 1) * n]);
            for j in 0..n {
                a.push(if i == j { F::one(&self.ctx) } else { F::zero(&self.ctx) });
            }
        }
        let pivots = Self::eliminate(n, w, &mut a, true, n);
        if pivots.len() < n {
            return Err(Error::SingularMatrix {
                rank: pivots.len(),
                size: n,
            });
        }
        let entries = (0..n)
            .flat_map(|i| a[i * w + n..(i + 1) * w].to_vec())
            .collect();
        Matrix::new(n, n, &self.ctx, entries)
    }

    /// Solves `self * x = rhs` for square invertible `self`.
    pub fn solve(&self, rhs: &[F]) -> Result<Vec<F>> {
        if self.rows != self.cols || rhs.len() != self.rows {
            return Err(Error::ShapeMismatch(format!(
                "solve with a {}x{} matrix and {} right-hand values",
                self.rows,
                self.cols,
                rhs.len()
            )));
        }
        let n = self.rows;
        let w = n + 1;
        let mut a = Vec::with_capacity(n * w);
        for (row, r) in self.entries.chunks(n).zip(rhs) {
            a.extend_from_slice(row);
            a.push(r.clone());
        }
        let pivots = Self::eliminate(n, w, &mut a, true, n);
        if pivots.len() < n {
            return Err(Error::SingularMatrix {
                rank: pivots.len(),
                size: n,
            });
        }
        Ok((0..n).map(|i| a[i * w + n].clone()).collect())
    }
}

impl<F: Field> fmt::Debug for Matrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<Vec<String>> = (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j).to_string()).collect())
            .collect();
        write!(f, "{rows:?}")
    }
}

/// Dense matrix with truncated-series entries sharing variables and precision.
#[derive(Clone, PartialEq, Eq)]
pub struct SeriesMatrix<F: Field> {
    rows: usize,
    cols: usize,
    num_vars: usize,
    precision: u32,
    ctx: F::Ctx,
    entries: Vec<TruncatedSeries<F>>,
}

impl<F: Field> SeriesMatrix<F> {
    /// Entries of differing precision are truncated to the smallest one.
    pub fn new(rows: usize, cols: usize, entries: Vec<TruncatedSeries<F>>) -> Result<Self> {
        if entries.len() != rows * cols || entries.is_empty() {
            return Err(Error::ShapeMismatch(format!(
                "{} series entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        let num_vars = entries[0].num_vars();
        let ctx = entries[0].field().clone();
        if let Some(bad) = entries.iter().find(|e| e.num_vars() != num_vars) {
            return Err(Error::VarCountMismatch {
                left: num_vars,
                right: bad.num_vars(),
            });
        }
        if let Some(bad) = entries.iter().find(|e| *e.field() != ctx) {
            return Err(Error::FieldMismatch {
                left: ctx.to_string(),
                right: bad.field().to_string(),
            });
        }
        let precision = entries.iter().map(|e| e.precision()).min().unwrap_or(0);
        let entries = entries
            .into_iter()
            .map(|e| if e.precision() > precision { e.truncate(precision) } else { e })
            .collect();
        Ok(SeriesMatrix {
            rows,
            cols,
            num_vars,
            precision,
            ctx,
            entries,
        })
    }

    pub fn from_constant(m: &Matrix<F>, num_vars: usize, precision: u32) -> Self {
        SeriesMatrix {
            rows: m.rows,
            cols: m.cols,
            num_vars,
            precision,
            ctx: m.ctx.clone(),
            entries: m
                .entries
                .iter()
                .map(|c| TruncatedSeries::constant(num_vars, precision, c.clone()))
                .collect(),
        }
    }

    pub fn identity(n: usize, num_vars: usize, precision: u32, ctx: &F::Ctx) -> Self {
        Self::from_constant(&Matrix::identity(n, ctx), num_vars, precision)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn get(&self, i: usize, j: usize) -> &TruncatedSeries<F> {
        &self.entries[i * self.cols + j]
    }

    pub fn entries(&self) -> &[TruncatedSeries<F>] {
        &self.entries
    }

    /// The matrix of constant terms, `A(0)`.
    pub fn constant_part(&self) -> Matrix<F> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            ctx: self.ctx.clone(),
            entries: self.entries.iter().map(|e| e.constant_term()).collect(),
        }
    }

    pub fn truncate(&self, precision: u32) -> Self {
        self.map(|e| e.truncate(precision))
    }

    pub fn promote(&self, precision: u32) -> Self {
        self.map(|e| e.promote(precision))
    }

    fn map(&self, f: impl Fn(&TruncatedSeries<F>) -> TruncatedSeries<F>) -> Self {
        let entries: Vec<_> = self.entries.iter().map(f).collect();
        let precision = entries.first().map_or(self.precision, |e| e.precision());
        SeriesMatrix {
            precision,
            entries,
            ..self.clone()
        }
    }

    pub fn mul(&self, other: &SeriesMatrix<F>) -> Result<SeriesMatrix<F>> {
        if self.cols != other.rows {
            return Err(Error::ShapeMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        if self.num_vars != other.num_vars {
            return Err(Error::VarCountMismatch {
                left: self.num_vars,
                right: other.num_vars,
            });
        }
        let precision = self.precision.min(other.precision);
        let mut out = Vec::with_capacity(self.rows * other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let pairs: Vec<_> = (0..self.cols).map(|k| (self.get(i, k), other.get(k, j))).collect();
                out.push(TruncatedSeries::dot(self.num_vars, precision, &self.ctx, &pairs));
            }
        }
        SeriesMatrix::new(self.rows, other.cols, out)
    }

    pub fn mul_vec(&self, v: &[TruncatedSeries<F>]) -> Result<Vec<TruncatedSeries<F>>> {
        if v.len() != self.cols {
            return Err(Error::ShapeMismatch(format!(
                "{}x{} matrix times vector of length {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        let precision = v.iter().map(|s| s.precision()).fold(self.precision, u32::min);
        Ok((0..self.rows)
            .map(|i| {
                let pairs: Vec<_> = (0..self.cols).map(|k| (self.get(i, k), &v[k])).collect();
                TruncatedSeries::dot(self.num_vars, precision, &self.ctx, &pairs)
            })
            .collect())
    }

    pub fn sub(&self, other: &SeriesMatrix<F>) -> Result<SeriesMatrix<F>> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::ShapeMismatch("matrix difference".into()));
        }
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.minus(b))
            .collect();
        SeriesMatrix::new(self.rows, self.cols, entries)
    }

    /// Inverse at full precision; fails if `A(0)` is singular.
    pub fn inverse(&self) -> Result<SeriesMatrix<F>> {
        let seed = self.constant_part().inverse()?;
        self.inverse_from_constant(&seed)
    }

    /// Inverse by Newton iteration `X <- X (2I - A X)` started from a
    /// known inverse of `A(0)`. Each round doubles the `e`-adic order of
    /// the error `I - A X`.
    pub fn inverse_from_constant(&self, const_inverse: &Matrix<F>) -> Result<SeriesMatrix<F>> {
        if self.rows != self.cols {
            return Err(Error::ShapeMismatch(format!(
                "inverse of a {}x{} series matrix",
                self.rows, self.cols
            )));
        }
        let n = self.rows;
        let mut x = SeriesMatrix::from_constant(const_inverse, self.num_vars, 0);
        let mut known = 0u32;
        while known < self.precision {
            let target = (2 * known + 1).min(self.precision);
            let a = self.truncate(target);
            let xu = x.promote(target);
            let two_i = SeriesMatrix::from_constant(
                &Matrix::identity(n, &self.ctx),
                self.num_vars,
                target,
            )
            .map(|e| e.scale(&F::from_i64(&self.ctx, 2)));
            let correction = two_i.sub(&a.mul(&xu)?)?;
            x = xu.mul(&correction)?;
            known = target;
        }
        Ok(x)
    }
}

impl<F: Field> fmt::Debug for SeriesMatrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<Vec<String>> = (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j).to_string()).collect())
            .collect();
        write!(f, "{rows:?} + O(deg>{})", self.precision)
    }
}
