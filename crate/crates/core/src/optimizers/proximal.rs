use crate::momentum::update_beta;
use crate::numerics::RealVector;
use crate::optimizers::smooth::hb_position_update;
use crate::optimizers::{BetaSource, OptimizerState};
use crate::problems::{Objective, Regularizer};
use crate::Result;

/// Proximal gradient descent: `x ← prox_{γλR}(x − γ∇f(x))`.
pub fn step_pgd<P: Objective>(
    mut s: OptimizerState,
    problem: &P,
    reg: &Regularizer,
    gamma: f64,
) -> Result<OptimizerState> {
    let g = problem.gradient(&s.x);
    s.x.check_same_len(&g)?;
    let x_next = reg.prox(gamma, &s.x.add_scaled(-gamma, &g))?;
    s.advance(x_next, &g);
    Ok(s)
}

/// Accelerated proximal gradient descent (the t-sequence scheme):
///
/// ```text
/// t_{k+1} = (1 + √(1 + 4 t_k²)) / 2
/// y       = x + ((t_k − 1)/t_{k+1}) (x − x_prev)
/// x       ← prox_{γλR}( y − γ∇f(y) )
/// ```
///
/// With `t₁ = 1` the first step has no extrapolation and equals a proximal
/// gradient step.
pub fn step_apgd<P: Objective>(
    mut s: OptimizerState,
    problem: &P,
    reg: &Regularizer,
    gamma: f64,
) -> Result<OptimizerState> {
    let t_next = 0.5 * (1.0 + (1.0 + 4.0 * s.t * s.t).sqrt());
    let coef = (s.t - 1.0) / t_next;
    let y = if coef == 0.0 {
        s.x.clone()
    } else {
        let data = s
            .x
            .iter()
            .zip(&s.x_prev)
            .map(|(&xi, &xpi)| xi + coef * (xi - xpi))
            .collect();
        RealVector::from_vec_unchecked(data)
    };
    let g = problem.gradient(&y);
    s.x.check_same_len(&g)?;
    let x_next = reg.prox(gamma, &y.add_scaled(-gamma, &g))?;
    s.t = t_next;
    s.advance(x_next, &g);
    Ok(s)
}

/// Proximal heavy ball:
/// `x ← prox_{γλR}( x − γ∇f(x) + β(x − x_prev) )`, then, when the β source is
/// adaptive, the β refresh from the exact-gradient differences. A constant-β
/// source gives the classic proximal heavy-ball baseline.
pub fn step_pahb<P: Objective>(
    mut s: OptimizerState,
    src: &BetaSource,
    problem: &P,
    reg: &Regularizer,
    gamma: f64,
) -> Result<OptimizerState> {
    let g = problem.gradient(&s.x);
    s.x.check_same_len(&g)?;
    let beta = src.current(&s.momentum);
    let u = hb_position_update(&s.x, &s.x_prev, gamma, beta, &g);
    let x_next = reg.prox(gamma, &u)?;
    if let BetaSource::Adaptive(cfg) = src {
        s.momentum = update_beta(cfg, s.momentum, gamma, &g, &s.g_prev, &s.x, &s.x_prev)?;
    }
    s.advance(x_next, &g);
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::momentum::AdaptiveMomentumConfig;
    use crate::numerics::DenseMatrix;
    use crate::optimizers::step_gd;
    use crate::problems::{composite_value, QuadraticProblem, RegularizerKind};

    fn scalar_quadratic() -> QuadraticProblem {
        // f = ½x².
        let a = DenseMatrix::from_rows(&[&[1.0]]).unwrap();
        QuadraticProblem::new(a, RealVector::zeros(1)).unwrap()
    }

    fn well_conditioned() -> QuadraticProblem {
        let a = DenseMatrix::from_rows(&[&[2.0, 0.4], &[0.4, 1.0]]).unwrap();
        QuadraticProblem::new(a, RealVector::new(vec![1.0, -0.5]).unwrap()).unwrap()
    }

    #[test]
    fn pgd_with_no_regularizer_is_bitwise_gd() {
        let p = well_conditioned();
        let reg = Regularizer::none();
        let mut a = OptimizerState::new(RealVector::new(vec![1.0, 1.0]).unwrap());
        let mut b = a.clone();
        for _ in 0..10 {
            a = step_pgd(a, &p, &reg, 0.3).unwrap();
            let g = p.gradient(&b.x);
            b = step_gd(b, 0.3, &g).unwrap();
            assert_eq!(a.x, b.x);
        }
    }

    #[test]
    fn pgd_soft_threshold_hand_case() {
        // f = ½x², L1 λ = 1, γ = 1, x = 3: gradient step lands at 0,
        // prox keeps it there.
        let p = scalar_quadratic();
        let reg = Regularizer::l1(1.0).unwrap();
        let s = OptimizerState::new(RealVector::new(vec![3.0]).unwrap());
        let s = step_pgd(s, &p, &reg, 1.0).unwrap();
        assert_eq!(s.x.as_slice(), &[0.0]);
    }

    #[test]
    fn pgd_descends_the_composite_objective() {
        let p = well_conditioned();
        let reg = Regularizer::l1(0.05).unwrap();
        let gamma = 1.0 / p.smoothness();
        let mut s = OptimizerState::new(RealVector::new(vec![2.0, -2.0]).unwrap());
        let mut last = composite_value(&p, &reg, &s.x);
        for _ in 0..100 {
            s = step_pgd(s, &p, &reg, gamma).unwrap();
            let now = composite_value(&p, &reg, &s.x);
            assert!(now <= last + 1e-12, "F increased: {last} -> {now}");
            last = now;
        }
    }

    #[test]
    fn apgd_first_step_equals_pgd() {
        let p = well_conditioned();
        let reg = Regularizer::l1(0.02).unwrap();
        let s0 = OptimizerState::new(RealVector::new(vec![1.0, 2.0]).unwrap());
        let a = step_apgd(s0.clone(), &p, &reg, 0.2).unwrap();
        let b = step_pgd(s0, &p, &reg, 0.2).unwrap();
        assert_eq!(a.x, b.x);
        assert!(a.t > 1.0);
    }

    #[test]
    fn apgd_accelerates_on_a_smooth_quadratic() {
        // On a smooth convex quadratic the accelerated method's suboptimality
        // should decay like 1/k²: log-log slope ≤ −1.8 over k ∈ [10, 1000].
        let d = 40;
        let p = crate::problems::build_shifted_quadratic(1e-3, d).unwrap();
        let reg = Regularizer::none();
        let gamma = 1.0 / p.smoothness();
        let x_star = crate::numerics::cholesky_solve(
            p.hessian(),
            &p.linear_term().scale(-1.0),
        )
        .unwrap();
        let f_star = p.value(&x_star);
        let mut s = OptimizerState::new(RealVector::zeros(d));
        let mut ks = Vec::new();
        let mut fs = Vec::new();
        for k in 1..=1000u64 {
            s = step_apgd(s, &p, &reg, gamma).unwrap();
            if k >= 10 {
                let sub = p.value(&s.x) - f_star;
                assert!(sub > 0.0, "suboptimality must stay positive, got {sub}");
                ks.push((k as f64).ln());
                fs.push(sub.ln());
            }
        }
        // Least-squares slope of ln F−F* against ln k.
        let n = ks.len() as f64;
        let mx = ks.iter().sum::<f64>() / n;
        let my = fs.iter().sum::<f64>() / n;
        let mut num = 0.0;
        let mut den = 0.0;
        for (x, y) in ks.iter().zip(&fs) {
            num += (x - mx) * (y - my);
            den += (x - mx) * (x - mx);
        }
        let slope = num / den;
        assert!(slope <= -1.8, "log-log slope {slope}");
    }

    #[test]
    fn pahb_with_zero_beta_is_bitwise_pgd() {
        let p = well_conditioned();
        let reg = Regularizer::new(RegularizerKind::L2Squared, 0.01).unwrap();
        let src = BetaSource::Constant(0.0);
        let mut a = OptimizerState::new(RealVector::new(vec![0.5, -0.5]).unwrap());
        let mut b = a.clone();
        for _ in 0..10 {
            a = step_pahb(a, &src, &p, &reg, 0.3).unwrap();
            b = step_pgd(b, &p, &reg, 0.3).unwrap();
            assert_eq!(a.x, b.x);
        }
    }

    #[test]
    fn pahb_adaptive_beta_engages_after_warmup() {
        let p = well_conditioned();
        let reg = Regularizer::l1(0.01).unwrap();
        let src = BetaSource::Adaptive(AdaptiveMomentumConfig::default());
        let mut s = OptimizerState::new(RealVector::new(vec![1.0, 1.0]).unwrap());
        // β used at steps 1 and 2 is pinned to zero.
        for _ in 0..2 {
            assert_eq!(s.momentum.beta(), 0.0);
            s = step_pahb(s, &src, &p, &reg, 0.2).unwrap();
        }
        for _ in 0..3 {
            s = step_pahb(s, &src, &p, &reg, 0.2).unwrap();
        }
        assert!(s.momentum.beta() > 0.0);
        assert!(s.momentum.beta() <= 1.0 - 1e-3);
    }
}
