//! Conjugate gradient for symmetric positive definite systems.

use crate::error::{Error, Result};
use crate::linop::{dot, norm, LinearOperator};

#[derive(Debug, Clone)]
pub struct CgOutcome {
    pub x: Vec<f64>,
    pub converged: bool,
    pub iterations: usize,
    /// Final ||Mx - b|| / ||b|| (0 when b = 0).
    pub relative_residual: f64,
}

/// Solve M x = b for SPD M. Returns the first iterate with
/// ||Mx - b|| <= tol ||b||, or the best iterate seen flagged unconverged.
pub fn cg_solve(
    m: &dyn LinearOperator,
    b: &[f64],
    tol: f64,
    max_iter: usize,
) -> Result<CgOutcome> {
    if m.in_dim() != b.len() || m.out_dim() != b.len() {
        return Err(Error::DimMismatch {
            expected: b.len(),
            got: m.in_dim(),
            context: "cg_solve",
        });
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter {
            name: "tol",
            reason: "must be > 0".into(),
        });
    }
    let n = b.len();
    let b_norm = norm(b);
    if b_norm == 0.0 {
        return Ok(CgOutcome {
            x: vec![0.0; n],
            converged: true,
            iterations: 0,
            relative_residual: 0.0,
        });
    }

    let mut x = vec![0.0; n];
    let mut r = b.to_vec();
    let mut p = r.clone();
    let mut rs = dot(&r, &r);

    let mut best_x = x.clone();
    let mut best_res = rs.sqrt();

    for k in 0..max_iter {
        if best_res <= tol * b_norm {
            return Ok(CgOutcome {
                x: best_x,
                converged: true,
                iterations: k,
                relative_residual: best_res / b_norm,
            });
        }
        let mp = m.apply(&p);
        let pmp = dot(&p, &mp);
        if !pmp.is_finite() {
            return Err(Error::NonFinite("cg_solve: p^t M p".into()));
        }
        if pmp <= 0.0 {
            // not SPD along this direction; return best effort
            return Ok(CgOutcome {
                x: best_x,
                converged: false,
                iterations: k,
                relative_residual: best_res / b_norm,
            });
        }
        let alpha = rs / pmp;
        for i in 0..n {
            x[i] += alpha * p[i];
            r[i] -= alpha * mp[i];
        }
        let rs_new = dot(&r, &r);
        if !rs_new.is_finite() {
            return Err(Error::NonFinite("cg_solve: residual".into()));
        }
        let res = rs_new.sqrt();
        if res < best_res {
            best_res = res;
            best_x.copy_from_slice(&x);
        }
        let beta = rs_new / rs;
        rs = rs_new;
        for i in 0..n {
            p[i] = r[i] + beta * p[i];
        }
    }

    let converged = best_res <= tol * b_norm;
    Ok(CgOutcome {
        x: best_x,
        converged,
        iterations: max_iter,
        relative_residual: best_res / b_norm,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linop::{DenseOp, NormalEquationsOp};
    use crate::rng;

    #[test]
    fn identity_solves_in_one_iteration() {
        let m = DenseOp::identity(5);
        let b = vec![1.0, -2.0, 3.0, 0.5, 4.0];
        let out = cg_solve(&m, &b, 1e-12, 10).unwrap();
        assert!(out.converged);
        assert!(out.iterations <= 1);
        for (xi, bi) in out.x.iter().zip(&b) {
            assert!((xi - bi).abs() < 1e-12);
        }
    }

    #[test]
    fn diagonal_matches_per_coordinate_division() {
        let d: Vec<f64> = (1..=8).map(|i| i as f64).collect();
        let m = DenseOp::diagonal(&d);
        let mut r = rng::seeded(21);
        let b = rng::standard_normal_vec(&mut r, 8);
        let out = cg_solve(&m, &b, 1e-12, 100).unwrap();
        assert!(out.converged);
        for i in 0..8 {
            assert!((out.x[i] - b[i] / d[i]).abs() < 1e-10);
        }
    }

    /// Dense Gaussian-elimination oracle, independent of the CG path.
    fn dense_solve(a: &DenseOp, b: &[f64]) -> Vec<f64> {
        let n = b.len();
        let mut m = vec![0.0; n * (n + 1)];
        for r in 0..n {
            for c in 0..n {
                m[r * (n + 1) + c] = a.at(r, c);
            }
            m[r * (n + 1) + n] = b[r];
        }
        for col in 0..n {
            // partial pivot
            let mut piv = col;
            for r in (col + 1)..n {
                if m[r * (n + 1) + col].abs() > m[piv * (n + 1) + col].abs() {
                    piv = r;
                }
            }
            for c in 0..=n {
                m.swap(col * (n + 1) + c, piv * (n + 1) + c);
            }
            let d = m[col * (n + 1) + col];
            for r in 0..n {
                if r != col {
                    let f = m[r * (n + 1) + col] / d;
                    for c in col..=n {
                        m[r * (n + 1) + c] -= f * m[col * (n + 1) + c];
                    }
                }
            }
        }
        (0..n).map(|r| m[r * (n + 1) + n] / m[r * (n + 1) + r]).collect()
    }

    #[test]
    fn normal_equations_match_dense_direct_solve() {
        let mut r = rng::seeded(4);
        let n = 16;
        let a_data = rng::standard_normal_vec(&mut r, n * n);
        let a = DenseOp::new(n, n, a_data).unwrap();
        let shift = 0.5;
        let m = NormalEquationsOp {
            inner: &a,
            shift,
        };
        // densify A^t A + shift I for the oracle
        let mut dense = vec![0.0; n * n];
        for j in 0..n {
            let mut e = vec![0.0; n];
            e[j] = 1.0;
            let col = m.apply(&e);
            for i in 0..n {
                dense[i * n + j] = col[i];
            }
        }
        let md = DenseOp::new(n, n, dense).unwrap();
        let b = rng::standard_normal_vec(&mut r, n);
        let expected = dense_solve(&md, &b);
        let out = cg_solve(&m, &b, 1e-14, 500).unwrap();
        assert!(out.converged);
        let scale = expected.iter().map(|v| v.abs()).fold(0.0f64, f64::max);
        for i in 0..n {
            assert!(
                (out.x[i] - expected[i]).abs() <= 1e-8 * (1.0 + scale),
                "i={i}: cg {} vs dense {}",
                out.x[i],
                expected[i]
            );
        }
    }

    #[test]
    fn unconverged_is_flagged() {
        let d: Vec<f64> = (1..=32).map(|i| i as f64 * i as f64).collect();
        let m = DenseOp::diagonal(&d);
        let mut r = rng::seeded(2);
        let b = rng::standard_normal_vec(&mut r, 32);
        let out = cg_solve(&m, &b, 1e-14, 2).unwrap();
        assert!(!out.converged);
    }

    #[test]
    fn zero_rhs_returns_zero() {
        let m = DenseOp::identity(4);
        let out = cg_solve(&m, &[0.0; 4], 1e-10, 5).unwrap();
        assert!(out.converged);
        assert_eq!(out.x, vec![0.0; 4]);
    }
}
