//! Linear operators given by matching apply / adjoint-apply callables.

use crate::error::{Error, Result};
use crate::rng;

/// A real linear map u -> Au together with its adjoint v -> A^t v.
///
/// Implementations must satisfy <Au, v> == <u, A^t v> for all u, v; the
/// random-probe helper below checks this on concrete instances.
pub trait LinearOperator {
    fn in_dim(&self) -> usize;
    fn out_dim(&self) -> usize;
    fn apply(&self, u: &[f64]) -> Vec<f64>;
    fn apply_adjoint(&self, v: &[f64]) -> Vec<f64>;
}

/// Dense row-major matrix operator.
#[derive(Debug, Clone)]
pub struct DenseOp {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl DenseOp {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimMismatch {
                expected: rows * cols,
                got: data.len(),
                context: "DenseOp::new",
            });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn identity(n: usize) -> Self {
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            data[i * n + i] = 1.0;
        }
        Self {
            rows: n,
            cols: n,
            data,
        }
    }

    pub fn diagonal(d: &[f64]) -> Self {
        let n = d.len();
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            data[i * n + i] = d[i];
        }
        Self {
            rows: n,
            cols: n,
            data,
        }
    }

    pub fn at(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.cols + c]
    }
}

impl LinearOperator for DenseOp {
    fn in_dim(&self) -> usize {
        self.cols
    }

    fn out_dim(&self) -> usize {
        self.rows
    }

    fn apply(&self, u: &[f64]) -> Vec<f64> {
        debug_assert_eq!(u.len(), self.cols);
        let mut out = vec![0.0; self.rows];
        for r in 0..self.rows {
            let row = &self.data[r * self.cols..(r + 1) * self.cols];
            out[r] = row.iter().zip(u).map(|(a, b)| a * b).sum();
        }
        out
    }

    fn apply_adjoint(&self, v: &[f64]) -> Vec<f64> {
        debug_assert_eq!(v.len(), self.rows);
        let mut out = vec![0.0; self.cols];
        for r in 0..self.rows {
            let row = &self.data[r * self.cols..(r + 1) * self.cols];
            for c in 0..self.cols {
                out[c] += row[c] * v[r];
            }
        }
        out
    }
}

/// The normal-equations operator A^t A + shift I for a wrapped map A.
pub struct NormalEquationsOp<'a> {
    pub inner: &'a dyn LinearOperator,
    pub shift: f64,
}

impl LinearOperator for NormalEquationsOp<'_> {
    fn in_dim(&self) -> usize {
        self.inner.in_dim()
    }

    fn out_dim(&self) -> usize {
        self.inner.in_dim()
    }

    fn apply(&self, u: &[f64]) -> Vec<f64> {
        let au = self.inner.apply(u);
        let mut out = self.inner.apply_adjoint(&au);
        for (o, ui) in out.iter_mut().zip(u) {
            *o += self.shift * ui;
        }
        out
    }

    fn apply_adjoint(&self, v: &[f64]) -> Vec<f64> {
        // symmetric by construction
        self.apply(v)
    }
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Largest absolute adjoint-consistency defect |<Au,v> - <u,A^t v>| observed
/// over `n_probes` random pairs, normalized by ||u|| ||v||.
pub fn adjoint_defect(op: &dyn LinearOperator, n_probes: usize, seed: u64) -> f64 {
    let mut r = rng::seeded(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..n_probes {
        let u = rng::standard_normal_vec(&mut r, op.in_dim());
        let v = rng::standard_normal_vec(&mut r, op.out_dim());
        let lhs = dot(&op.apply(&u), &v);
        let rhs = dot(&u, &op.apply_adjoint(&v));
        let scale = norm(&u) * norm(&v);
        if scale > 0.0 {
            worst = worst.max((lhs - rhs).abs() / scale);
        }
    }
    worst
}
