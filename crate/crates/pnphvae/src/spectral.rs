//! Power-iteration estimate of the largest singular value.

use crate::error::{Error, Result};
use crate::linop::{norm, LinearOperator};
use crate::rng;

/// Estimate the largest singular value of a square map by power iteration
/// on M^t M. Deterministic given the seed. If a start vector lands in the
/// null space, the iteration reseeds; after 3 dead starts it errors.
pub fn spectral_norm(m: &dyn LinearOperator, iters: usize, seed: u64) -> Result<f64> {
    if m.in_dim() != m.out_dim() {
        return Err(Error::DimMismatch {
            expected: m.in_dim(),
            got: m.out_dim(),
            context: "spectral_norm: square map required",
        });
    }
    if iters == 0 {
        return Err(Error::InvalidParameter {
            name: "iters",
            reason: "must be >= 1".into(),
        });
    }
    let n = m.in_dim();
    if n == 0 {
        return Ok(0.0);
    }

    for attempt in 0..3u64 {
        let mut r = rng::seeded(seed.wrapping_add(attempt));
        let mut v = rng::standard_normal_vec(&mut r, n);
        let nv = norm(&v);
        if nv == 0.0 {
            continue;
        }
        v.iter_mut().for_each(|x| *x /= nv);

        let mut sigma = 0.0;
        let mut dead = false;
        for _ in 0..iters {
            let mv = m.apply(&v);
            let mut w = m.apply_adjoint(&mv);
            let nw = norm(&w);
            if !nw.is_finite() {
                return Err(Error::NonFinite("spectral_norm iterate".into()));
            }
            if nw == 0.0 {
                dead = true;
                break;
            }
            w.iter_mut().for_each(|x| *x /= nw);
            sigma = norm(&m.apply(&w));
            v = w;
        }
        if !dead {
            return Ok(sigma);
        }
    }
    Err(Error::PowerIterationDegenerate { attempts: 3 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linop::DenseOp;

    #[test]
    fn scaled_identity() {
        let m = DenseOp::diagonal(&[2.0; 6]);
        let s = spectral_norm(&m, 50, 0).unwrap();
        assert!((s - 2.0).abs() < 1e-6);
    }

    #[test]
    fn diagonal_picks_largest() {
        let m = DenseOp::diagonal(&[1.0, 5.0, 3.0]);
        let s = spectral_norm(&m, 100, 1).unwrap();
        assert!((s - 5.0).abs() < 1e-6);
    }

    /// Jacobi eigenvalue oracle for symmetric matrices, independent of the
    /// power iteration path.
    fn jacobi_largest_abs_eig(a: &[f64], n: usize) -> f64 {
        let mut m = a.to_vec();
        for _ in 0..200 {
            // find largest off-diagonal
            let (mut p, mut q, mut big) = (0, 1, 0.0f64);
            for i in 0..n {
                for j in (i + 1)..n {
                    if m[i * n + j].abs() > big {
                        big = m[i * n + j].abs();
                        p = i;
                        q = j;
                    }
                }
            }
            if big < 1e-14 {
                break;
            }
            let app = m[p * n + p];
            let aqq = m[q * n + q];
            let apq = m[p * n + q];
            let theta = 0.5 * (aqq - app) / apq;
            let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
            let c = 1.0 / (t * t + 1.0).sqrt();
            let s = t * c;
            for k in 0..n {
                let akp = m[k * n + p];
                let akq = m[k * n + q];
                m[k * n + p] = c * akp - s * akq;
                m[k * n + q] = s * akp + c * akq;
            }
            for k in 0..n {
                let apk = m[p * n + k];
                let aqk = m[q * n + k];
                m[p * n + k] = c * apk - s * aqk;
                m[q * n + k] = s * apk + c * aqk;
            }
        }
        (0..n).map(|i| m[i * n + i].abs()).fold(0.0, f64::max)
    }

    #[test]
    fn random_symmetric_matches_jacobi_oracle() {
        let n = 8;
        let mut r = crate::rng::seeded(33);
        let raw = crate::rng::standard_normal_vec(&mut r, n * n);
        let mut sym = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                sym[i * n + j] = 0.5 * (raw[i * n + j] + raw[j * n + i]);
            }
        }
        let m = DenseOp::new(n, n, sym.clone()).unwrap();
        let expected = jacobi_largest_abs_eig(&sym, n);
        let s = spectral_norm(&m, 500, 5).unwrap();
        assert!(
            (s - expected).abs() < 1e-6 * (1.0 + expected),
            "power {s} vs jacobi {expected}"
        );
    }

    #[test]
    fn zero_map_errors_after_reseeds() {
        let m = DenseOp::new(3, 3, vec![0.0; 9]).unwrap();
        assert!(matches!(
            spectral_norm(&m, 10, 0),
            Err(Error::PowerIterationDegenerate { .. })
        ));
    }

    #[test]
    fn deterministic_in_seed() {
        let m = DenseOp::diagonal(&[1.0, 2.0, 3.0, 4.0]);
        let a = spectral_norm(&m, 37, 9).unwrap();
        let b = spectral_norm(&m, 37, 9).unwrap();
        assert_eq!(a, b);
    }
}
