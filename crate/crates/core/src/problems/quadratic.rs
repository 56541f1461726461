use crate::numerics::{symmetric_eigen, DenseMatrix, RealVector};
use crate::problems::Objective;
use crate::{Error, Result};

/// A strongly convex quadratic `f(x) = ½ xᵀA x + bᵀx` with `∇f(x) = Ax + b`.
///
/// `A` is symmetric positive definite; the extreme eigenvalues `ν = λ_min(A)`
/// and `L = λ_max(A)` are cached at construction. The minimizer solves
/// `Ax* + b = 0`.
#[derive(Debug, Clone)]
pub struct QuadraticProblem {
    a: DenseMatrix,
    b: RealVector,
    nu: f64,
    smoothness: f64,
    /// Set when `A = σI + L(cyclic)`: gradient evaluation then runs in O(d)
    /// off the tridiagonal-with-corners structure instead of a dense matvec.
    cyclic_shift: Option<f64>,
}

impl QuadraticProblem {
    /// General constructor: checks symmetry, computes ν and L by the
    /// symmetric eigensolver, and requires ν > 0.
    pub fn new(a: DenseMatrix, b: RealVector) -> Result<Self> {
        if !a.is_symmetric() {
            return Err(Error::Domain("quadratic Hessian must be symmetric".into()));
        }
        if a.rows() != b.len() {
            return Err(Error::DimensionMismatch {
                expected: a.rows(),
                actual: b.len(),
            });
        }
        let eig = symmetric_eigen(&a)?;
        let nu = eig.values[0];
        let smoothness = *eig.values.last().expect("non-empty spectrum");
        if nu <= 0.0 {
            return Err(Error::NotPositiveDefinite { index: 0, pivot: nu });
        }
        Ok(Self {
            a,
            b,
            nu,
            smoothness,
            cyclic_shift: None,
        })
    }

    pub fn hessian(&self) -> &DenseMatrix {
        &self.a
    }

    pub fn linear_term(&self) -> &RealVector {
        &self.b
    }

    /// Smallest Hessian eigenvalue (strong-convexity constant).
    pub fn nu(&self) -> f64 {
        self.nu
    }

    /// Largest Hessian eigenvalue (smoothness constant).
    pub fn smoothness(&self) -> f64 {
        self.smoothness
    }

    /// `A·x` using the cyclic fast path when available.
    pub fn hessian_apply(&self, x: &RealVector) -> RealVector {
        match self.cyclic_shift {
            Some(sigma) => {
                let d = x.len();
                let xs = x.as_slice();
                let mut out = vec![0.0; d];
                for (i, o) in out.iter_mut().enumerate() {
                    let left = xs[(i + d - 1) % d];
                    let right = xs[(i + 1) % d];
                    *o = (sigma + 2.0) * xs[i] - left - right;
                }
                RealVector::from_vec_unchecked(out)
            }
            None => self.a.matvec(x),
        }
    }
}

impl Objective for QuadraticProblem {
    fn dim(&self) -> usize {
        self.b.len()
    }

    fn value(&self, x: &RealVector) -> f64 {
        0.5 * self.hessian_apply(x).dot(x) + self.b.dot(x)
    }

    fn gradient(&self, x: &RealVector) -> RealVector {
        self.hessian_apply(x).add_scaled(1.0, &self.b)
    }
}

/// A quadratic has no sampling structure: it is the one-term "sum" whose
/// batch gradient is always exact. This lets deterministic quadratics run
/// through the same harness as the stochastic problems.
impl crate::problems::FiniteSum for QuadraticProblem {
    fn n_terms(&self) -> usize {
        1
    }

    fn batch_gradient(&self, x: &RealVector, _batch: &[usize]) -> RealVector {
        self.gradient(x)
    }
}

/// Laplacian of the cycle graph on `d ≥ 3` vertices: 2 on the diagonal, −1 on
/// the first off-diagonals and in the `(0, d−1)`/`(d−1, 0)` corners. Rows sum
/// to zero, so the all-ones vector is a null vector; the spectrum is
/// `2 − 2cos(2πj/d)`, `j = 0..d−1`.
pub fn build_cyclic_laplacian(d: usize) -> Result<DenseMatrix> {
    if d < 3 {
        return Err(Error::InvalidDimension {
            dim: d,
            reason: "a cycle needs at least 3 vertices",
        });
    }
    let mut m = DenseMatrix::zeros(d, d);
    for i in 0..d {
        m[(i, i)] = 2.0;
        m[(i, (i + 1) % d)] = -1.0;
        m[(i, (i + d - 1) % d)] = -1.0;
    }
    Ok(m)
}

/// Analytic spectrum of [`build_cyclic_laplacian`], ascending.
pub fn cyclic_laplacian_eigenvalues(d: usize) -> Vec<f64> {
    let mut eigs: Vec<f64> = (0..d)
        .map(|j| 2.0 - 2.0 * (2.0 * std::f64::consts::PI * j as f64 / d as f64).cos())
        .collect();
    eigs.sort_by(f64::total_cmp);
    eigs
}

/// The near-singular test quadratic: `A = σI + L(cyclic)` and `b = e₁`, so
/// `∇f(x) = Ax + b` and `ν = λ_min(A) = σ` exactly (the Laplacian null vector
/// gives the σ eigenvalue, and it is simple because the cycle is connected).
pub fn build_shifted_quadratic(sigma: f64, d: usize) -> Result<QuadraticProblem> {
    if sigma.is_nan() || sigma <= 0.0 {
        return Err(Error::Domain(format!("sigma must be positive, got {sigma}")));
    }
    let mut a = build_cyclic_laplacian(d)?;
    for i in 0..d {
        a[(i, i)] += sigma;
    }
    let mut b = vec![0.0; d];
    b[0] = 1.0;
    let lap_max = *cyclic_laplacian_eigenvalues(d)
        .last()
        .expect("d >= 3 checked");
    Ok(QuadraticProblem {
        a,
        b: RealVector::from_vec_unchecked(b),
        nu: sigma,
        smoothness: sigma + lap_max,
        cyclic_shift: Some(sigma),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{eigenvalues, SeededRng};

    #[test]
    fn laplacian_d3_matches_pattern() {
        let l = build_cyclic_laplacian(3).unwrap();
        let expect = DenseMatrix::from_rows(&[
            &[2.0, -1.0, -1.0],
            &[-1.0, 2.0, -1.0],
            &[-1.0, -1.0, 2.0],
        ])
        .unwrap();
        assert_eq!(l, expect);
        assert!(build_cyclic_laplacian(2).is_err());
    }

    #[test]
    fn laplacian_rows_sum_to_zero_and_min_eigenvalue_is_zero() {
        for d in [3, 5, 8, 17] {
            let l = build_cyclic_laplacian(d).unwrap();
            for i in 0..d {
                let s: f64 = l.row(i).iter().sum();
                assert_eq!(s, 0.0, "row {i} of d={d}");
            }
            let eigs = cyclic_laplacian_eigenvalues(d);
            assert!(eigs[0].abs() < 1e-12);
        }
    }

    #[test]
    fn laplacian_d4_spectrum_is_0_2_2_4() {
        let l = build_cyclic_laplacian(4).unwrap();
        let mut eigs: Vec<f64> = eigenvalues(&l).unwrap().iter().map(|c| c.re).collect();
        eigs.sort_by(f64::total_cmp);
        let expect = [0.0, 2.0, 2.0, 4.0];
        for (got, want) in eigs.iter().zip(expect) {
            assert!((got - want).abs() < 1e-10, "{got} vs {want}");
        }
        // Analytic helper agrees.
        let analytic = cyclic_laplacian_eigenvalues(4);
        for (got, want) in analytic.iter().zip(expect) {
            assert!((got - want).abs() < 1e-12);
        }
    }

    #[test]
    fn shifted_quadratic_nu_is_sigma_exactly() {
        for sigma in [1e-3, 1e-4, 1e-5] {
            let p = build_shifted_quadratic(sigma, 24).unwrap();
            assert_eq!(p.nu(), sigma);
            assert!(p.smoothness() <= sigma + 4.0 + 1e-12);
        }
        assert!(build_shifted_quadratic(-1.0, 24).is_err());
    }

    #[test]
    fn gradient_at_zero_is_b() {
        let p = build_shifted_quadratic(1e-3, 12).unwrap();
        let g = p.gradient(&RealVector::zeros(12));
        assert_eq!(g.as_slice()[0], 1.0);
        assert!(g.as_slice()[1..].iter().all(|&v| v == 0.0));
    }

    #[test]
    fn spectrum_lies_in_sigma_to_sigma_plus_four() {
        let sigma = 1e-3;
        let p = build_shifted_quadratic(sigma, 15).unwrap();
        let eigs = eigenvalues(p.hessian()).unwrap();
        for c in eigs {
            assert!(c.im.abs() < 1e-12);
            assert!(c.re >= sigma - 1e-12 && c.re <= sigma + 4.0 + 1e-12);
        }
    }

    #[test]
    fn cyclic_fast_path_matches_dense_matvec() {
        let p = build_shifted_quadratic(0.37, 13).unwrap();
        let mut rng = SeededRng::new(3);
        for _ in 0..5 {
            let x = crate::numerics::standard_normals(&mut rng, 13);
            let fast = p.hessian_apply(&x);
            let dense = p.hessian().matvec(&x);
            assert!(fast.dist(&dense) <= 1e-12 * dense.norm().max(1.0));
        }
    }

    #[test]
    fn general_constructor_computes_extremes() {
        let a = DenseMatrix::from_rows(&[&[2.0, 0.0], &[0.0, 5.0]]).unwrap();
        let p = QuadraticProblem::new(a, RealVector::zeros(2)).unwrap();
        assert!((p.nu() - 2.0).abs() < 1e-10);
        assert!((p.smoothness() - 5.0).abs() < 1e-10);

        let indef = DenseMatrix::from_rows(&[&[1.0, 2.0], &[2.0, 1.0]]).unwrap();
        assert!(QuadraticProblem::new(indef, RealVector::zeros(2)).is_err());
    }
}
