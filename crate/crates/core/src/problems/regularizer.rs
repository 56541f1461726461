use crate::numerics::RealVector;
use crate::problems::Objective;
use crate::{Error, Result};

/// Which penalty a [`Regularizer`] applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RegularizerKind {
    /// `λ‖x‖₁`, proximal map = soft threshold.
    L1,
    /// `λ‖x‖₂²`, proximal map = uniform shrink.
    L2Squared,
    /// No penalty; proximal map = identity.
    None,
}

/// A weighted penalty `λ·R(x)` with a closed-form proximal map
/// `prox_{γR}(z) = argmin_x { γλR(x) + ½‖x − z‖² }`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Regularizer {
    pub kind: RegularizerKind,
    pub lambda: f64,
}

impl Regularizer {
    pub fn new(kind: RegularizerKind, lambda: f64) -> Result<Self> {
        if lambda.is_nan() || lambda < 0.0 {
            return Err(Error::Domain(format!("lambda must be >= 0, got {lambda}")));
        }
        Ok(Self { kind, lambda })
    }

    pub fn l1(lambda: f64) -> Result<Self> {
        Self::new(RegularizerKind::L1, lambda)
    }

    pub fn l2_squared(lambda: f64) -> Result<Self> {
        Self::new(RegularizerKind::L2Squared, lambda)
    }

    pub fn none() -> Self {
        Self {
            kind: RegularizerKind::None,
            lambda: 0.0,
        }
    }

    /// The penalty value `λ·R(x)`.
    pub fn value(&self, x: &RealVector) -> f64 {
        match self.kind {
            RegularizerKind::L1 => self.lambda * x.iter().map(|v| v.abs()).sum::<f64>(),
            RegularizerKind::L2Squared => self.lambda * x.dot(x),
            RegularizerKind::None => 0.0,
        }
    }

    /// Gradient of the penalty where it exists; errors for L1 (non-smooth),
    /// which only enters runs through its proximal map.
    pub fn smooth_gradient(&self, x: &RealVector) -> Result<RealVector> {
        match self.kind {
            RegularizerKind::L1 => Err(Error::Domain(
                "l1 penalty is not differentiable; use the proximal map".into(),
            )),
            RegularizerKind::L2Squared => Ok(x.scale(2.0 * self.lambda)),
            RegularizerKind::None => Ok(RealVector::zeros(x.len())),
        }
    }

    pub fn is_smooth(&self) -> bool {
        !matches!(self.kind, RegularizerKind::L1)
    }

    /// `prox_{γλR}(z)`:
    /// L1 → `sign(zᵢ)·max(|zᵢ| − γλ, 0)`; L2² → `z/(1 + 2γλ)`; None → `z`.
    pub fn prox(&self, gamma: f64, z: &RealVector) -> Result<RealVector> {
        if gamma.is_nan() || gamma <= 0.0 {
            return Err(Error::Domain(format!("prox step must be positive, got {gamma}")));
        }
        let out = match self.kind {
            RegularizerKind::L1 => {
                let threshold = gamma * self.lambda;
                RealVector::from_vec_unchecked(
                    z.iter()
                        .map(|&v| v.signum() * (v.abs() - threshold).max(0.0))
                        .collect(),
                )
            }
            RegularizerKind::L2Squared => z.scale(1.0 / (1.0 + 2.0 * gamma * self.lambda)),
            RegularizerKind::None => z.clone(),
        };
        Ok(out)
    }
}

/// Composite objective value `F(x) = f(x) + λR(x)`.
pub fn composite_value<P: Objective>(problem: &P, reg: &Regularizer, x: &RealVector) -> f64 {
    problem.value(x) + reg.value(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{standard_normals, SeededRng};

    #[test]
    fn soft_threshold_hand_case() {
        // γλ = 1: [2, −0.5, 1] → [1, 0, 0].
        let r = Regularizer::l1(1.0).unwrap();
        let z = RealVector::new(vec![2.0, -0.5, 1.0]).unwrap();
        let p = r.prox(1.0, &z).unwrap();
        assert_eq!(p.as_slice(), &[1.0, 0.0, 0.0]);
    }

    #[test]
    fn soft_threshold_matches_grid_search() {
        // Independent oracle: per-coordinate grid minimization of
        // γλ|u| + (u − z)²/2.
        let gamma = 0.7;
        let lambda = 0.9;
        let r = Regularizer::l1(lambda).unwrap();
        for z in [-2.0, -0.61, -0.2, 0.0, 0.45, 1.7] {
            let zv = RealVector::new(vec![z]).unwrap();
            let p = r.prox(gamma, &zv).unwrap()[0];
            let obj = |u: f64| gamma * lambda * u.abs() + 0.5 * (u - z) * (u - z);
            let mut best = f64::INFINITY;
            let mut best_u = 0.0;
            let mut u = -3.0;
            while u <= 3.0 {
                let v = obj(u);
                if v < best {
                    best = v;
                    best_u = u;
                }
                u += 1e-4;
            }
            assert!(
                (p - best_u).abs() <= 2e-4,
                "z={z}: prox {p} vs grid {best_u}"
            );
            assert!(obj(p) <= best + 1e-12);
        }
    }

    #[test]
    fn l2_shrink_hand_case() {
        // γλ = 0.5: z/(1 + 2·0.5) = z/2.
        let r = Regularizer::l2_squared(0.5).unwrap();
        let z = RealVector::new(vec![2.0]).unwrap();
        assert_eq!(r.prox(1.0, &z).unwrap().as_slice(), &[1.0]);
    }

    #[test]
    fn none_prox_is_identity() {
        let r = Regularizer::none();
        let z = RealVector::new(vec![3.0, -4.0]).unwrap();
        assert_eq!(r.prox(0.3, &z).unwrap(), z);
        assert_eq!(r.value(&z), 0.0);
    }

    #[test]
    fn negative_lambda_rejected() {
        assert!(Regularizer::l1(-0.1).is_err());
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        fn regs() -> impl Strategy<Value = Regularizer> {
            (0usize..3, 0.0..2.0f64).prop_map(|(k, lambda)| {
                let kind = match k {
                    0 => RegularizerKind::L1,
                    1 => RegularizerKind::L2Squared,
                    _ => RegularizerKind::None,
                };
                Regularizer::new(kind, lambda).unwrap()
            })
        }

        proptest! {
            #[test]
            fn prox_is_nonexpansive(reg in regs(), seed in 0u64..1000, gamma in 1e-3..3.0f64) {
                let mut rng = SeededRng::new(seed);
                let u = standard_normals(&mut rng, 6);
                let v = standard_normals(&mut rng, 6);
                let pu = reg.prox(gamma, &u).unwrap();
                let pv = reg.prox(gamma, &v).unwrap();
                prop_assert!(pu.dist(&pv) <= u.dist(&v) + 1e-12);
            }

            #[test]
            fn prox_minimizes_its_objective(reg in regs(), seed in 0u64..1000, gamma in 1e-3..3.0f64) {
                // γ·λR(p) + ‖p − z‖²/2 ≤ the same at 20 random perturbations.
                let mut rng = SeededRng::new(seed);
                let z = standard_normals(&mut rng, 5);
                let p = reg.prox(gamma, &z).unwrap();
                let obj = |u: &RealVector| gamma * reg.value(u) + 0.5 * u.dist(&z).powi(2);
                let at_p = obj(&p);
                for _ in 0..20 {
                    let noise = standard_normals(&mut rng, 5);
                    let u = p.add_scaled(0.3, &noise);
                    prop_assert!(at_p <= obj(&u) + 1e-10);
                }
            }
        }
    }
}
