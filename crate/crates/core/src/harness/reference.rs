use crate::numerics::{cholesky_solve, tol, RealVector};
use crate::optimizers::{step_apgd, step_pgd, OptimizerState};
use crate::problems::{composite_value, Objective, QuadraticProblem, Regularizer};
use crate::{Error, Result};

/// A reference minimizer with its certificate.
///
/// For quadratics the certificate is the linear residual `‖Ax* + b‖`; for
/// composites it is the fixed-point residual `‖x* − prox(x* − γ∇f(x*))‖` at
/// `γ = 1/L`.
#[derive(Debug, Clone)]
pub struct ReferenceSolution {
    pub x_star: RealVector,
    pub f_star: f64,
    pub residual: f64,
    pub converged: bool,
    pub method: String,
}

impl ReferenceSolution {
    /// Errors with [`Error::NotConverged`] unless the certificate holds.
    pub fn require_converged(&self, budget: usize) -> Result<&Self> {
        if self.converged {
            Ok(self)
        } else {
            Err(Error::NotConverged {
                residual: self.residual,
                budget,
            })
        }
    }
}

/// Direct reference for a quadratic: solves `Ax = −b` by Cholesky and checks
/// `‖Ax* + b‖ ≤ 1e-10`.
pub fn solve_reference_quadratic(p: &QuadraticProblem) -> Result<ReferenceSolution> {
    let rhs = p.linear_term().scale(-1.0);
    let x_star = cholesky_solve(p.hessian(), &rhs)?;
    let residual = p.hessian_apply(&x_star).add_scaled(1.0, p.linear_term()).norm();
    let f_star = p.value(&x_star);
    Ok(ReferenceSolution {
        x_star,
        f_star,
        residual,
        converged: residual <= tol::QUADRATIC_RESIDUAL,
        method: "cholesky direct solve".into(),
    })
}

/// Fixed-point residual of the proximal-gradient map at `x`.
fn prox_residual<P: Objective>(
    problem: &P,
    reg: &Regularizer,
    gamma: f64,
    x: &RealVector,
) -> Result<f64> {
    let step = reg.prox(gamma, &x.add_scaled(-gamma, &problem.gradient(x)))?;
    Ok(x.dist(&step))
}

/// Composite reference by plain proximal gradient descent at `γ = 1/L` for
/// `budget` iterations from `start` (zeros when absent).
///
/// Never fails just because the budget ran out: the caller inspects
/// `converged` (or uses [`ReferenceSolution::require_converged`]); traces
/// omit their suboptimality columns when the certificate is missing.
pub fn solve_reference_composite<P: Objective>(
    problem: &P,
    reg: &Regularizer,
    smoothness: f64,
    budget: usize,
    start: Option<&RealVector>,
) -> Result<ReferenceSolution> {
    if budget == 0 {
        return Err(Error::Domain("reference budget must be at least 1".into()));
    }
    let gamma = 1.0 / smoothness;
    let x0 = match start {
        Some(x) => x.clone(),
        None => RealVector::zeros(problem.dim()),
    };
    let mut state = OptimizerState::new(x0);
    for _ in 0..budget {
        state = step_pgd(state, problem, reg, gamma)?;
    }
    finish_composite(problem, reg, gamma, state.x, format!("pgd x{budget}"))
}

/// Composite reference with an accelerated warm phase: the t-sequence scheme
/// for `accel_budget` iterations, then a proximal-gradient polish for
/// `polish_budget`. Same certificate as [`solve_reference_composite`]; useful
/// where plain proximal descent would need millions of iterations.
pub fn solve_reference_accelerated<P: Objective>(
    problem: &P,
    reg: &Regularizer,
    smoothness: f64,
    accel_budget: usize,
    polish_budget: usize,
) -> Result<ReferenceSolution> {
    let gamma = 1.0 / smoothness;
    let mut state = OptimizerState::new(RealVector::zeros(problem.dim()));
    for _ in 0..accel_budget {
        state = step_apgd(state, problem, reg, gamma)?;
    }
    for _ in 0..polish_budget {
        state = step_pgd(state, problem, reg, gamma)?;
    }
    finish_composite(
        problem,
        reg,
        gamma,
        state.x,
        format!("apgd x{accel_budget} + pgd x{polish_budget}"),
    )
}

fn finish_composite<P: Objective>(
    problem: &P,
    reg: &Regularizer,
    gamma: f64,
    x_star: RealVector,
    method: String,
) -> Result<ReferenceSolution> {
    let residual = prox_residual(problem, reg, gamma, &x_star)?;
    let f_star = composite_value(problem, reg, &x_star);
    Ok(ReferenceSolution {
        x_star,
        f_star,
        residual,
        converged: residual <= tol::COMPOSITE_RESIDUAL,
        method,
    })
}
