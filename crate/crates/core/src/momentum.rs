//! The curvature-adaptive momentum estimator.
//!
//! On a quadratic with Hessian extremes `ν ≤ L`, heavy ball with `γ ≤ 1/L` is
//! fastest at `β = (1 − √(γν))²` ([`optimal_beta`]). `ν` is unknown in
//! practice, but the difference quotient `r = ‖gᵏ − gᵏ⁻¹‖ / ‖xᵏ − xᵏ⁻¹‖`
//! converges to it along heavy-ball iterates, which motivates the online rule
//!
//! ```text
//! β_{k+1} = Proj_[0, 1−δ] ( [1 − √(γ_k · r_k)]² ),   β with k ∈ {0, 1} is 0.
//! ```
//!
//! The projection caps runaway estimates (when `γ·r > 1` the square lands
//! above 1 and is clamped to `1 − δ`), and `δ` keeps the scheme a fixed
//! distance from the β = 1 boundary. Every optimizer in this crate that
//! advertises adaptive momentum drives one [`MomentumState`] through
//! [`update_beta`].

use crate::numerics::RealVector;
use crate::{Error, Result};

/// Configuration of the adaptive momentum estimator.
///
/// The step size enters the update as an argument (`gamma_k`), not as config
/// state, so schedules feed the γ actually applied at step k.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdaptiveMomentumConfig {
    /// Projection margin: β is confined to `[0, 1 − delta]`.
    pub delta: f64,
    /// Displacements below this are treated as a stall and leave β unchanged.
    pub denom_floor: f64,
}

impl AdaptiveMomentumConfig {
    /// Margin δ with the default stall floor of `1e-12`.
    pub fn new(delta: f64) -> Result<Self> {
        Self::with_denom_floor(delta, 1e-12)
    }

    pub fn with_denom_floor(delta: f64, denom_floor: f64) -> Result<Self> {
        if delta.is_nan() || delta <= 0.0 || delta > 1.0 {
            return Err(Error::Domain(format!("delta must lie in (0, 1], got {delta}")));
        }
        if denom_floor.is_nan() || denom_floor <= 0.0 {
            return Err(Error::Domain(format!(
                "denom_floor must be positive, got {denom_floor}"
            )));
        }
        Ok(Self { delta, denom_floor })
    }
}

impl Default for AdaptiveMomentumConfig {
    /// The δ = 1e-3 used throughout the experiments.
    fn default() -> Self {
        Self {
            delta: 1e-3,
            denom_floor: 1e-12,
        }
    }
}

/// Current momentum value plus the iteration counter that drives the
/// `k ∈ {0, 1} → β = 0` rule.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentumState {
    /// Iteration index of the next update; starts at 1.
    k: u64,
    /// Current β, always in `[0, 1 − δ]`.
    beta: f64,
    /// Last curvature ratio that produced `beta`, if one was computed.
    last_ratio: Option<f64>,
}

impl MomentumState {
    pub fn new() -> Self {
        Self {
            k: 1,
            beta: 0.0,
            last_ratio: None,
        }
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn k(&self) -> u64 {
        self.k
    }

    pub fn last_ratio(&self) -> Option<f64> {
        self.last_ratio
    }
}

impl Default for MomentumState {
    fn default() -> Self {
        Self::new()
    }
}

/// One estimator update: consumes the state for iteration k and the pair of
/// gradient/position differences, returns the state carrying `β_{k+1}`.
///
/// `gamma_k` is the step size applied at iteration k. The ratio is
/// `‖g_k − g_km1‖ / ‖x_k − x_km1‖` in the Euclidean norm; when the
/// displacement is below `cfg.denom_floor` the iterate has stalled and the
/// previous β is retained.
pub fn update_beta(
    cfg: &AdaptiveMomentumConfig,
    st: MomentumState,
    gamma_k: f64,
    g_k: &RealVector,
    g_km1: &RealVector,
    x_k: &RealVector,
    x_km1: &RealVector,
) -> Result<MomentumState> {
    g_k.check_same_len(g_km1)?;
    x_k.check_same_len(x_km1)?;
    g_k.check_same_len(x_k)?;

    // β₁ and β₂ are pinned to zero: there is no meaningful displacement yet.
    if st.k <= 1 {
        return Ok(MomentumState {
            k: st.k + 1,
            beta: 0.0,
            last_ratio: None,
        });
    }

    let dx = x_k.dist(x_km1);
    if dx < cfg.denom_floor {
        return Ok(MomentumState {
            k: st.k + 1,
            beta: st.beta,
            last_ratio: st.last_ratio,
        });
    }
    let ratio = g_k.dist(g_km1) / dx.max(cfg.denom_floor);
    let beta = project_beta(gamma_k, ratio, cfg.delta);
    Ok(MomentumState {
        k: st.k + 1,
        beta,
        last_ratio: Some(ratio),
    })
}

/// `Proj_[0, 1−δ]( [1 − √(γ·r)]² )`.
fn project_beta(gamma: f64, ratio: f64, delta: f64) -> f64 {
    let raw = {
        let s = 1.0 - (gamma * ratio).sqrt();
        s * s
    };
    raw.clamp(0.0, 1.0 - delta)
}

/// The optimal heavy-ball momentum on a quadratic: `(1 − √(γν))²`.
///
/// Requires `γν ≤ 1`, which holds whenever `γ ≤ 1/L` since `ν ≤ L`.
pub fn optimal_beta(gamma: f64, nu: f64) -> Result<f64> {
    if !(gamma > 0.0 && nu > 0.0) {
        return Err(Error::Domain(format!(
            "gamma and nu must be positive, got gamma={gamma}, nu={nu}"
        )));
    }
    let p = gamma * nu;
    if p > 1.0 {
        return Err(Error::Domain(format!("optimal_beta needs gamma*nu <= 1, got {p}")));
    }
    let s = 1.0 - p.sqrt();
    Ok(s * s)
}
