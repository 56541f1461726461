use crate::momentum::{update_beta, AdaptiveMomentumConfig};
use crate::numerics::RealVector;
use crate::optimizers::OptimizerState;
use crate::{Error, Result};

/// Gradient descent: `x ← x − γ_k·g`.
pub fn step_gd(mut s: OptimizerState, gamma: f64, g: &RealVector) -> Result<OptimizerState> {
    s.x.check_same_len(g)?;
    let x_next = s.x.add_scaled(-gamma, g);
    s.advance(x_next, g);
    Ok(s)
}

/// Heavy ball: `x ← x − γ_k·g + β·(x − x_prev)`.
///
/// β = 0 takes the gradient-descent expression verbatim, so the reduction is
/// bitwise, not merely within rounding.
pub fn step_hb(
    mut s: OptimizerState,
    gamma: f64,
    beta: f64,
    g: &RealVector,
) -> Result<OptimizerState> {
    s.x.check_same_len(g)?;
    if !(0.0..1.0).contains(&beta) {
        return Err(Error::Domain(format!("beta must lie in [0, 1), got {beta}")));
    }
    let x_next = hb_position_update(&s.x, &s.x_prev, gamma, beta, g);
    s.advance(x_next, g);
    Ok(s)
}

/// Adaptive heavy ball: the heavy-ball position update with the current β,
/// followed by the β refresh from the current gradient/position differences
/// (`β_{k+1}` from `‖gᵏ − gᵏ⁻¹‖ / ‖xᵏ − xᵏ⁻¹‖`).
pub fn step_ashb(
    mut s: OptimizerState,
    cfg: &AdaptiveMomentumConfig,
    gamma: f64,
    g: &RealVector,
) -> Result<OptimizerState> {
    s.x.check_same_len(g)?;
    let beta = s.momentum.beta();
    let x_next = hb_position_update(&s.x, &s.x_prev, gamma, beta, g);
    s.momentum = update_beta(cfg, s.momentum, gamma, g, &s.g_prev, &s.x, &s.x_prev)?;
    s.advance(x_next, g);
    Ok(s)
}

pub(crate) fn hb_position_update(
    x: &RealVector,
    x_prev: &RealVector,
    gamma: f64,
    beta: f64,
    g: &RealVector,
) -> RealVector {
    if beta == 0.0 {
        return x.add_scaled(-gamma, g);
    }
    let out = x
        .iter()
        .zip(x_prev)
        .zip(g)
        .map(|((&xi, &xpi), &gi)| xi - gamma * gi + beta * (xi - xpi))
        .collect();
    RealVector::from_vec_unchecked(out)
}
