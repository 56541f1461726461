//! First-order optimization with curvature-adaptive heavy-ball momentum.
//!
//! On a positive-definite quadratic with gradient `∇f(x) = Ax + b`, heavy-ball
//! momentum with step size `γ ≤ 1/L` is fastest at `β = (1 − √(γν))²`, where
//! `ν` and `L` are the extreme eigenvalues of `A`. `ν` is rarely known, but the
//! curvature ratio `‖gᵏ − gᵏ⁻¹‖ / ‖xᵏ − xᵏ⁻¹‖` converges to it along the
//! iterates, so the optimal momentum can be estimated online:
//!
//! ```text
//! β_{k+1} = Proj_[0, 1−δ] ( [1 − √(γ · ‖Δg‖/‖Δx‖)]² ),   β₀ = β₁ = 0
//! ```
//!
//! This crate packages that estimator ([`momentum`]), the optimizer families
//! that consume it ([`optimizers`]: plain/stochastic gradient descent,
//! heavy ball, proximal variants, and the Adam family), the benchmark
//! problems used to validate them ([`problems`]: shifted cyclic-Laplacian
//! quadratics, synthetic regularized logistic regression, a smooth trig test
//! function), supporting dense linear algebra and deterministic randomness
//! ([`numerics`]), and an experiment harness that records reproducible traces
//! and exposes the spectral oracles used to cross-check convergence rates
//! ([`harness`]).
//!
//! # Quick start
//!
//! ```
//! use admom::momentum::optimal_beta;
//!
//! // γ = 0.1, ν = 10⁻³: the optimal heavy-ball momentum is (1 − 0.01)².
//! let beta = optimal_beta(0.1, 1e-3).unwrap();
//! assert!((beta - 0.9801).abs() < 1e-12);
//! ```
//!
//! Everything is deterministic: a run is a pure function of its configuration
//! and seed, and repeated runs emit byte-identical trace CSVs.

pub mod harness;
pub mod momentum;
pub mod numerics;
pub mod optimizers;
pub mod problems;

mod error;

pub use error::{Error, Result};

// The guide chapters under book/src double as doc-tests so their code snippets
// stay compilable against the current API.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/quadratics.md")]
    mod quadratics {}
    #[doc = include_str!("../../../book/src/adaptive-momentum.md")]
    mod adaptive_momentum {}
    #[doc = include_str!("../../../book/src/optimizers.md")]
    mod optimizers {}
    #[doc = include_str!("../../../book/src/proximal.md")]
    mod proximal {}
    #[doc = include_str!("../../../book/src/experiments.md")]
    mod experiments {}
}
