//! Cyclic Jacobi eigensolver for dense symmetric matrices.
//!
//! Each sweep visits every pair `(p, q)`, `p < q`, and applies the plane
//! rotation that annihilates `a_pq`. Iteration stops once the off-diagonal
//! Frobenius norm drops below `1e-12 · ‖S‖_F`.

use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;

pub const MAX_SWEEPS: usize = 100;
pub const OFF_DIAGONAL_TOL: f64 = 1e-12;
/// Input symmetry tolerance.
pub const INPUT_SYMMETRY_TOL: f64 = 1e-10;

/// Eigenvalues (ascending) and the matching orthonormal eigenvectors, stored
/// as columns of `vectors`.
#[derive(Debug, Clone)]
pub struct SymmetricEigen {
    pub values: Vec<f64>,
    pub vectors: DenseMatrix,
}

/// All eigenvalues of `s`, sorted ascending.
pub fn symmetric_eigenvalues(s: &DenseMatrix) -> Result<Vec<f64>> {
    jacobi(s, false).map(|e| e.values)
}

/// Full decomposition `S = V Λ Vᵀ` with eigenvalues ascending.
pub fn symmetric_eigen(s: &DenseMatrix) -> Result<SymmetricEigen> {
    jacobi(s, true)
}

fn off_diagonal_norm(a: &DenseMatrix) -> f64 {
    let n = a.rows();
    let mut sum = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                sum += a[(i, j)] * a[(i, j)];
            }
        }
    }
    sum.sqrt()
}

fn jacobi(s: &DenseMatrix, want_vectors: bool) -> Result<SymmetricEigen> {
    if !s.is_square() {
        return Err(Error::DimensionMismatch {
            expected: s.rows(),
            got: s.cols(),
        });
    }
    let asym = s.max_asymmetry();
    if asym > INPUT_SYMMETRY_TOL {
        return Err(Error::NotSymmetric(asym));
    }
    let n = s.rows();
    let mut a = s.clone();
    // exact symmetrization so the rotations see one value per pair
    for i in 0..n {
        for j in (i + 1)..n {
            let m = 0.5 * (a[(i, j)] + a[(j, i)]);
            a[(i, j)] = m;
            a[(j, i)] = m;
        }
    }
    let mut v = want_vectors.then(|| DenseMatrix::identity(n));
    let threshold = OFF_DIAGONAL_TOL * s.frobenius_norm();

    let mut converged = false;
    for done in 0..=MAX_SWEEPS {
        if off_diagonal_norm(&a) <= threshold {
            converged = true;
            break;
        }
        if done < MAX_SWEEPS {
            sweep(&mut a, v.as_mut());
        }
    }
    if !converged {
        return Err(Error::NoConvergence(MAX_SWEEPS));
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].total_cmp(&a[(j, j)]));
    let values = order.iter().map(|&i| a[(i, i)]).collect();
    let vectors = match v {
        Some(v) => {
            let mut sorted = DenseMatrix::zeros(n, n);
            for (col, &src) in order.iter().enumerate() {
                for row in 0..n {
                    sorted[(row, col)] = v[(row, src)];
                }
            }
            sorted
        }
        None => DenseMatrix::zeros(0, 0),
    };
    Ok(SymmetricEigen { values, vectors })
}

fn sweep(a: &mut DenseMatrix, mut v: Option<&mut DenseMatrix>) {
    let n = a.rows();
    for p in 0..n {
        for q in (p + 1)..n {
            let apq = a[(p, q)];
            if apq == 0.0 {
                continue;
            }
            let tau = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
            let t = if tau >= 0.0 {
                1.0 / (tau + (1.0 + tau * tau).sqrt())
            } else {
                -1.0 / (-tau + (1.0 + tau * tau).sqrt())
            };
            let c = 1.0 / (1.0 + t * t).sqrt();
            let s = t * c;

            // A <- A J
            for k in 0..n {
                let akp = a[(k, p)];
                let akq = a[(k, q)];
                a[(k, p)] = c * akp - s * akq;
                a[(k, q)] = s * akp + c * akq;
            }
            // A <- Jᵀ A
            for k in 0..n {
                let apk = a[(p, k)];
                let aqk = a[(q, k)];
                a[(p, k)] = c * apk - s * aqk;
                a[(q, k)] = s * apk + c * aqk;
            }
            a[(p, q)] = 0.0;
            a[(q, p)] = 0.0;

            if let Some(v) = v.as_deref_mut() {
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[f64]]) -> DenseMatrix {
        DenseMatrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn diagonal() {
        let ev = symmetric_eigenvalues(&m(&[&[3.0, 0.0], &[0.0, 2.0]])).unwrap();
        assert_eq!(ev, vec![2.0, 3.0]);
    }

    #[test]
    fn swap_matrix() {
        let ev = symmetric_eigenvalues(&m(&[&[0.0, 1.0], &[1.0, 0.0]])).unwrap();
        assert!((ev[0] + 1.0).abs() < 1e-14);
        assert!((ev[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn zero_matrix() {
        let ev = symmetric_eigenvalues(&DenseMatrix::zeros(3, 3)).unwrap();
        assert_eq!(ev, vec![0.0; 3]);
    }

    #[test]
    fn rejects_non_symmetric() {
        let err = symmetric_eigenvalues(&m(&[&[0.0, 1.0], &[0.0, 0.0]])).unwrap_err();
        assert!(matches!(err, Error::NotSymmetric(_)));
        let err = symmetric_eigenvalues(&DenseMatrix::zeros(2, 3)).unwrap_err();
        assert!(matches!(err, Error::DimensionMismatch { .. }));
    }

    #[test]
    fn eigenvectors_reconstruct() {
        let s = m(&[&[4.0, 1.0, -2.0], &[1.0, 2.0, 0.5], &[-2.0, 0.5, 3.0]]);
        let e = symmetric_eigen(&s).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let rebuilt: f64 = (0..3)
                    .map(|k| e.vectors[(i, k)] * e.values[k] * e.vectors[(j, k)])
                    .sum();
                assert!((rebuilt - s[(i, j)]).abs() < 1e-12);
                let gram: f64 = (0..3).map(|k| e.vectors[(k, i)] * e.vectors[(k, j)]).sum();
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((gram - expect).abs() < 1e-12);
            }
        }
        assert!(e.values.windows(2).all(|w| w[0] <= w[1]));
    }
}
