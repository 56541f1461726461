use crate::numerics::{DenseMatrix, RealVector};
use crate::{Error, Result};

/// Cholesky factor of a symmetric positive-definite matrix: lower-triangular
/// `G` with `G·Gᵀ = A`.
///
/// Fails with [`Error::NotPositiveDefinite`] as soon as a pivot is ≤ 0.
pub fn cholesky_lower(a: &DenseMatrix) -> Result<DenseMatrix> {
    if !a.is_square() {
        return Err(Error::InvalidDimension {
            dim: a.rows(),
            reason: "Cholesky needs a square matrix",
        });
    }
    let n = a.rows();
    let mut g = DenseMatrix::zeros(n, n);
    for j in 0..n {
        let mut diag = a[(j, j)];
        for k in 0..j {
            diag -= g[(j, k)] * g[(j, k)];
        }
        if diag <= 0.0 {
            return Err(Error::NotPositiveDefinite {
                index: j,
                pivot: diag,
            });
        }
        let d = diag.sqrt();
        g[(j, j)] = d;
        for i in (j + 1)..n {
            let mut acc = a[(i, j)];
            for k in 0..j {
                acc -= g[(i, k)] * g[(j, k)];
            }
            g[(i, j)] = acc / d;
        }
    }
    Ok(g)
}

/// Solves `A x = rhs` for symmetric positive-definite `A` via Cholesky,
/// i.e. forward substitution on `G y = rhs` then back substitution on
/// `Gᵀ x = y`.
pub fn cholesky_solve(a: &DenseMatrix, rhs: &RealVector) -> Result<RealVector> {
    let g = cholesky_lower(a)?;
    let n = g.rows();
    if rhs.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            actual: rhs.len(),
        });
    }
    let mut y = vec![0.0; n];
    for i in 0..n {
        let mut acc = rhs[i];
        for k in 0..i {
            acc -= g[(i, k)] * y[k];
        }
        y[i] = acc / g[(i, i)];
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let mut acc = y[i];
        for k in (i + 1)..n {
            acc -= g[(k, i)] * x[k];
        }
        x[i] = acc / g[(i, i)];
    }
    RealVector::new(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{tol, SeededRng};

    #[test]
    fn identity_factors_to_identity() {
        let i3 = DenseMatrix::identity(3);
        let g = cholesky_lower(&i3).unwrap();
        assert_eq!(g, i3);
    }

    #[test]
    fn two_by_two_known_factor() {
        let a = DenseMatrix::from_rows(&[&[4.0, 2.0], &[2.0, 3.0]]).unwrap();
        let g = cholesky_lower(&a).unwrap();
        assert!((g[(0, 0)] - 2.0).abs() < 1e-15);
        assert!((g[(1, 0)] - 1.0).abs() < 1e-15);
        assert!(g[(0, 1)] == 0.0);
        assert!((g[(1, 1)] - 2.0f64.sqrt()).abs() < 1e-15);
        // Independent check: the factor reconstructs the input.
        let back = g.times_own_transpose();
        for i in 0..2 {
            for j in 0..2 {
                assert!((back[(i, j)] - a[(i, j)]).abs() <= tol::CHOLESKY_RECONSTRUCT);
            }
        }
    }

    #[test]
    fn indefinite_matrix_is_rejected() {
        // Eigenvalues 3 and −1.
        let a = DenseMatrix::from_rows(&[&[1.0, 2.0], &[2.0, 1.0]]).unwrap();
        assert!(matches!(
            cholesky_lower(&a),
            Err(Error::NotPositiveDefinite { .. })
        ));
    }

    #[test]
    fn solve_recovers_known_solution() {
        let a = DenseMatrix::from_rows(&[&[4.0, 2.0], &[2.0, 3.0]]).unwrap();
        let x_true = RealVector::new(vec![1.0, -2.0]).unwrap();
        let rhs = a.matvec(&x_true);
        let x = cholesky_solve(&a, &rhs).unwrap();
        assert!(x.dist(&x_true) < 1e-12);
    }

    #[test]
    fn random_spd_reconstruction_within_tolerance() {
        let mut rng = SeededRng::new(11);
        for trial in 0..10 {
            let n = 3 + (trial % 5);
            let mut m = DenseMatrix::zeros(n, n);
            for i in 0..n {
                for j in 0..n {
                    m[(i, j)] = rng.next_normal();
                }
            }
            // M Mᵀ + I is comfortably SPD.
            let mut a = m.times_own_transpose();
            for i in 0..n {
                a[(i, i)] += 1.0;
            }
            let g = cholesky_lower(&a).unwrap();
            let back = g.times_own_transpose();
            let mut err: f64 = 0.0;
            for i in 0..n {
                for j in 0..n {
                    err = err.max((back[(i, j)] - a[(i, j)]).abs());
                }
            }
            assert!(err <= tol::CHOLESKY_RECONSTRUCT * a.max_norm());
        }
    }
}
