use crate::momentum::update_beta;
use crate::numerics::RealVector;
use crate::optimizers::{BetaSource, OptimizerState};
use crate::{Error, Result};

/// Second-moment averaging weight.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AlphaSchedule {
    /// `v ← α·v + (1−α)·g²` with fixed α ∈ [0, 1).
    Constant(f64),
    /// `v ← (1 − 1/k)·v + (1/k)·g²`: `v` is the running mean of the squared
    /// gradients, `vᵏ⁺¹ = (Σ_{i≤k} [gⁱ]²)/k`, with `v¹ = [g¹]²`.
    Harmonic,
}

/// Configuration of the Adam family.
///
/// Members by configuration: `beta: Constant(β)` is Adam (no bias
/// correction), `Constant(0)` is the momentum-free variant, `Adaptive(cfg)`
/// swaps in the curvature-adaptive β. `weight_decay > 0` applies decoupled
/// weight decay (`x ← x − γ·wd·x`) before the moment step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdamConfig {
    pub alpha: AlphaSchedule,
    pub beta: BetaSource,
    pub eps_denom: f64,
    pub weight_decay: f64,
}

impl AdamConfig {
    pub fn new(alpha: AlphaSchedule, beta: BetaSource) -> Result<Self> {
        Self::with_weight_decay(alpha, beta, 0.0)
    }

    pub fn with_weight_decay(
        alpha: AlphaSchedule,
        beta: BetaSource,
        weight_decay: f64,
    ) -> Result<Self> {
        if let AlphaSchedule::Constant(a) = alpha {
            if !(0.0..1.0).contains(&a) {
                return Err(Error::Domain(format!("alpha must lie in [0, 1), got {a}")));
            }
        }
        if let BetaSource::Constant(b) = beta {
            if !(0.0..1.0).contains(&b) {
                return Err(Error::Domain(format!("beta must lie in [0, 1), got {b}")));
            }
        }
        if weight_decay.is_nan() || weight_decay < 0.0 {
            return Err(Error::Domain(format!(
                "weight decay must be >= 0, got {weight_decay}"
            )));
        }
        Ok(Self {
            alpha,
            beta,
            eps_denom: 1e-8,
            weight_decay,
        })
    }
}

/// One Adam-family transition, in the order: position update from the stored
/// moments, then moment updates from the incoming gradient (taken at the
/// pre-step position), then the β refresh when adaptive. No bias correction
/// anywhere.
///
/// ```text
/// x ← x − γ_k·wd·x                      (decoupled weight decay, if any)
/// x ← x − γ_k · m / (√v + ε)
/// m ← β_k·m + (1 − β_k)·g
/// v ← per AlphaSchedule
/// β ← refresh (adaptive source only)
/// ```
///
/// The first step moves nothing (`m = v = 0`), matching zero-initialized
/// moments; gradients start contributing from the second step.
pub fn step_adam_family(
    mut s: OptimizerState,
    cfg: &AdamConfig,
    gamma: f64,
    g: &RealVector,
) -> Result<OptimizerState> {
    s.x.check_same_len(g)?;
    let d = s.x.len();
    if s.m.len() != d {
        s.m = RealVector::zeros(d);
        s.v = RealVector::zeros(d);
    }

    // Position update from the current moments.
    let base = if cfg.weight_decay > 0.0 {
        let shrunk = s
            .x
            .iter()
            .map(|&xi| xi - gamma * cfg.weight_decay * xi)
            .collect();
        RealVector::from_vec_unchecked(shrunk)
    } else {
        s.x.clone()
    };
    let x_next = {
        let data = base
            .iter()
            .zip(&s.m)
            .zip(&s.v)
            .map(|((&xi, &mi), &vi)| xi - gamma * mi / (vi.sqrt() + cfg.eps_denom))
            .collect();
        RealVector::from_vec_unchecked(data)
    };

    // Moment updates from the gradient at the pre-step position.
    let beta_k = cfg.beta.current(&s.momentum);
    let m_next = RealVector::from_vec_unchecked(
        s.m.iter()
            .zip(g)
            .map(|(&mi, &gi)| beta_k * mi + (1.0 - beta_k) * gi)
            .collect(),
    );
    let v_next = match cfg.alpha {
        AlphaSchedule::Constant(a) => RealVector::from_vec_unchecked(
            s.v.iter()
                .zip(g)
                .map(|(&vi, &gi)| a * vi + (1.0 - a) * gi * gi)
                .collect(),
        ),
        AlphaSchedule::Harmonic => {
            let inv_k = 1.0 / s.k as f64;
            RealVector::from_vec_unchecked(
                s.v.iter()
                    .zip(g)
                    .map(|(&vi, &gi)| (1.0 - inv_k) * vi + inv_k * gi * gi)
                    .collect(),
            )
        }
    };

    if let BetaSource::Adaptive(mcfg) = &cfg.beta {
        s.momentum = update_beta(mcfg, s.momentum, gamma, g, &s.g_prev, &s.x, &s.x_prev)?;
    }
    s.m = m_next;
    s.v = v_next;
    s.advance(x_next, g);
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::momentum::AdaptiveMomentumConfig;
    use crate::numerics::{standard_normals, SeededRng};

    fn state(xs: &[f64]) -> OptimizerState {
        OptimizerState::new(RealVector::new(xs.to_vec()).unwrap())
    }

    #[test]
    fn first_step_moves_nothing() {
        let cfg = AdamConfig::new(AlphaSchedule::Constant(0.999), BetaSource::Constant(0.9))
            .unwrap();
        let g = RealVector::new(vec![5.0, -2.0]).unwrap();
        let s = step_adam_family(state(&[1.0, 1.0]), &cfg, 0.1, &g).unwrap();
        assert_eq!(s.x.as_slice(), &[1.0, 1.0]);
        assert!((s.m[0] - 0.5).abs() < 1e-15 && (s.m[1] - -0.2).abs() < 1e-15);
    }

    #[test]
    fn zero_memory_gives_sign_of_previous_gradient() {
        // α = β = 0: m = g_prev, v = g_prev², so the step is
        // −γ·g_prev/(|g_prev| + ε) ≈ −γ·sign(g_prev).
        let cfg =
            AdamConfig::new(AlphaSchedule::Constant(0.0), BetaSource::Constant(0.0)).unwrap();
        let g1 = RealVector::new(vec![3.0, -0.25]).unwrap();
        let s = step_adam_family(state(&[0.0, 0.0]), &cfg, 0.1, &g1).unwrap();
        let g2 = RealVector::new(vec![100.0, 100.0]).unwrap();
        let s = step_adam_family(s, &cfg, 0.1, &g2).unwrap();
        assert!((s.x[0] - -0.1).abs() < 1e-7);
        assert!((s.x[1] - 0.1).abs() < 1e-6);
    }

    #[test]
    fn harmonic_v_is_running_mean_of_squared_gradients() {
        // g¹ = [2], g² = [4]: after two updates v = mean(4, 16) = 10.
        let cfg =
            AdamConfig::new(AlphaSchedule::Harmonic, BetaSource::Constant(0.0)).unwrap();
        let s = state(&[0.0]);
        let s = step_adam_family(s, &cfg, 0.1, &RealVector::new(vec![2.0]).unwrap()).unwrap();
        assert_eq!(s.v.as_slice(), &[4.0]);
        let s = step_adam_family(s, &cfg, 0.1, &RealVector::new(vec![4.0]).unwrap()).unwrap();
        assert_eq!(s.v.as_slice(), &[10.0]);
    }

    #[test]
    fn delta_one_reduces_to_momentum_free_adam_bitwise() {
        let adaptive = AdamConfig::new(
            AlphaSchedule::Harmonic,
            BetaSource::Adaptive(AdaptiveMomentumConfig::new(1.0).unwrap()),
        )
        .unwrap();
        let plain =
            AdamConfig::new(AlphaSchedule::Harmonic, BetaSource::Constant(0.0)).unwrap();
        let mut rng = SeededRng::new(6);
        let mut a = state(&[1.0, -1.0, 0.5]);
        let mut b = a.clone();
        for _ in 0..30 {
            let g = standard_normals(&mut rng, 3);
            a = step_adam_family(a, &adaptive, 0.05, &g).unwrap();
            b = step_adam_family(b, &plain, 0.05, &g).unwrap();
            assert_eq!(a.x, b.x);
            // m tracks the most recent gradient exactly when β = 0.
            assert_eq!(a.m, g);
        }
    }

    #[test]
    fn no_bias_correction() {
        // With β = 0.9 and a constant unit gradient, the uncorrected first
        // moment after one update is 0.1 (a corrected one would be 1.0), so
        // the second step must displace by exactly γ·0.1/(√v + ε).
        let cfg = AdamConfig::new(AlphaSchedule::Constant(0.999), BetaSource::Constant(0.9))
            .unwrap();
        let g = RealVector::new(vec![1.0]).unwrap();
        let s = step_adam_family(state(&[0.0]), &cfg, 0.1, &g).unwrap();
        let v1 = 0.001f64; // (1 − α)·g²
        let expected = -0.1 * 0.1 / (v1.sqrt() + cfg.eps_denom);
        let s = step_adam_family(s, &cfg, 0.1, &g).unwrap();
        assert!((s.x[0] - expected).abs() < 1e-15, "{} vs {expected}", s.x[0]);
    }

    #[test]
    fn weight_decay_shrinks_before_the_moment_step() {
        let cfg = AdamConfig::with_weight_decay(
            AlphaSchedule::Constant(0.999),
            BetaSource::Constant(0.9),
            0.5,
        )
        .unwrap();
        // First step: moments are zero, so the entire move is the decay.
        let s = step_adam_family(state(&[2.0]), &cfg, 0.1, &RealVector::zeros(1)).unwrap();
        assert_eq!(s.x.as_slice(), &[2.0 - 0.1 * 0.5 * 2.0]);
    }

    #[test]
    fn v_stays_nonnegative() {
        let mut rng = SeededRng::new(10);
        for alpha in [AlphaSchedule::Constant(0.9), AlphaSchedule::Harmonic] {
            let cfg = AdamConfig::new(alpha, BetaSource::Constant(0.5)).unwrap();
            let mut s = state(&[0.3, -0.7]);
            for _ in 0..200 {
                let g = standard_normals(&mut rng, 2).scale(3.0);
                s = step_adam_family(s, &cfg, 0.01, &g).unwrap();
                assert!(s.v.iter().all(|&v| v >= 0.0));
            }
        }
    }

    #[test]
    fn invalid_configs_rejected() {
        assert!(AdamConfig::new(AlphaSchedule::Constant(1.0), BetaSource::Constant(0.0)).is_err());
        assert!(AdamConfig::new(AlphaSchedule::Harmonic, BetaSource::Constant(1.0)).is_err());
        assert!(AdamConfig::with_weight_decay(
            AlphaSchedule::Harmonic,
            BetaSource::Constant(0.0),
            -0.1
        )
        .is_err());
    }
}
