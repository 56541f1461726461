use crate::momentum::{AdaptiveMomentumConfig, MomentumState};
use crate::numerics::RealVector;

/// Where a stepper's β comes from: a fixed constant or the adaptive estimator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BetaSource {
    Constant(f64),
    Adaptive(AdaptiveMomentumConfig),
}

impl BetaSource {
    /// The β to apply at the current step.
    pub fn current(&self, momentum: &MomentumState) -> f64 {
        match self {
            BetaSource::Constant(b) => *b,
            BetaSource::Adaptive(_) => momentum.beta(),
        }
    }
}

/// Position plus lagged state shared by every stepper.
///
/// `x_prev` and `g_prev` lag one iteration (with `x⁰ = x¹` and `g⁰ = 0` at
/// start), `m`/`v` are the Adam moments (lazily sized on first use), and `t`
/// is the extrapolation counter of the accelerated proximal step.
#[derive(Debug, Clone, PartialEq)]
pub struct OptimizerState {
    pub x: RealVector,
    pub x_prev: RealVector,
    pub g_prev: RealVector,
    pub m: RealVector,
    pub v: RealVector,
    pub momentum: MomentumState,
    /// Iteration index of the next step, starting at 1.
    pub k: u64,
    pub t: f64,
}

impl OptimizerState {
    pub fn new(x0: RealVector) -> Self {
        let d = x0.len();
        Self {
            x_prev: x0.clone(),
            x: x0,
            g_prev: RealVector::zeros(d),
            m: RealVector::zeros(0),
            v: RealVector::zeros(0),
            momentum: MomentumState::new(),
            k: 1,
            t: 1.0,
        }
    }

    pub fn dim(&self) -> usize {
        self.x.len()
    }

    /// `‖xᵏ − xᵏ⁻¹‖`.
    pub fn displacement(&self) -> f64 {
        self.x.dist(&self.x_prev)
    }

    /// Shifts the lagged fields after computing `x_next` from gradient `g`.
    pub(crate) fn advance(&mut self, x_next: RealVector, g: &RealVector) {
        self.x_prev = std::mem::replace(&mut self.x, x_next);
        self.g_prev = g.clone();
        self.k += 1;
    }
}
