//! Benchmark objectives: shifted cyclic-Laplacian quadratics, synthetic
//! regularized logistic regression, and a smooth trig test function, together
//! with regularizers (proximal maps) and a mini-batch gradient oracle.

mod logistic;
mod nonconvex;
mod oracle;
mod quadratic;
mod regularizer;

pub use logistic::{generate_logistic_dataset, LogisticProblem};
pub use nonconvex::NonconvexTestProblem;
pub use oracle::GradientOracle;
pub use quadratic::{build_cyclic_laplacian, build_shifted_quadratic, QuadraticProblem};
pub use regularizer::{composite_value, Regularizer, RegularizerKind};

use crate::numerics::RealVector;

/// A differentiable objective exposing value and gradient.
pub trait Objective {
    fn dim(&self) -> usize;
    fn value(&self, x: &RealVector) -> f64;
    fn gradient(&self, x: &RealVector) -> RealVector;
    fn value_grad(&self, x: &RealVector) -> (f64, RealVector) {
        (self.value(x), self.gradient(x))
    }
}

/// A finite-sum objective that can also produce mini-batch gradients.
///
/// `batch_gradient` over the index multiset `batch` must average to the full
/// gradient when batches are drawn uniformly (the estimator is unbiased), and
/// a full batch must reproduce the exact gradient.
pub trait FiniteSum: Objective {
    fn n_terms(&self) -> usize;
    fn batch_gradient(&self, x: &RealVector, batch: &[usize]) -> RealVector;
}
