//! Dense linear algebra, deterministic randomness, and numeric oracles.
//!
//! Everything here is self-contained and deterministic: matrices are dense
//! row-major `f64`, the random generator is a documented counter-based design,
//! and the eigenvalue/Cholesky/finite-difference routines serve as the
//! independent oracles the rest of the crate is tested against.

mod cholesky;
mod eigen;
mod finite_diff;
mod matrix;
mod rng;
mod vector;

pub use cholesky::{cholesky_lower, cholesky_solve};
pub use eigen::{eigenvalues, symmetric_eigen, Complex, SymmetricEigen};
pub use finite_diff::finite_difference_gradient;
pub use matrix::DenseMatrix;
pub use rng::{standard_normals, SeededRng};
pub use vector::RealVector;

/// Numeric tolerances used as contracts throughout the crate, kept in one
/// place rather than scattered as literals.
pub mod tol {
    /// Cholesky reconstruction: `‖GGᵀ − A‖_max ≤ CHOLESKY_RECONSTRUCT · ‖A‖_max`.
    pub const CHOLESKY_RECONSTRUCT: f64 = 1e-10;
    /// Eigenpair residual when eigenvectors are produced:
    /// `‖Av − λv‖ ≤ EIGEN_RESIDUAL · ‖A‖`.
    pub const EIGEN_RESIDUAL: f64 = 1e-8;
    /// Imaginary part allowed on eigenvalues of a symmetric matrix.
    pub const SYMMETRIC_IMAG: f64 = 1e-10;
    /// Agreement required between the dense eigensolve and the per-mode
    /// quadratic-formula path of the heavy-ball iteration matrix.
    pub const COMPANION_AGREEMENT: f64 = 1e-8;
    /// Residual `‖Ax* + b‖` required of a direct quadratic reference solve.
    pub const QUADRATIC_RESIDUAL: f64 = 1e-10;
    /// Fixed-point residual `‖x − prox(x − γ∇f(x))‖` required of a composite
    /// reference solve.
    pub const COMPOSITE_RESIDUAL: f64 = 1e-9;
    /// Largest matrix dimension accepted by the eigensolvers.
    pub const MAX_EIGEN_DIM: usize = 4000;
}
