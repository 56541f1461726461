use crate::numerics::{standard_normals, RealVector, SeededRng};
use crate::problems::{FiniteSum, Objective};
use crate::{Error, Result};

/// Smooth non-quadratic test function
///
/// ```text
/// f(x) = Σᵢ [ xᵢ²/2 + cos(xᵢ) ],   ∇f(x)ᵢ = xᵢ − sin(xᵢ)
/// ```
///
/// with 2-Lipschitz gradient (`f'' = 1 − cos ∈ [0, 2]`), bounded below, and a
/// vanishing-curvature plateau around the stationary point at the origin.
///
/// For stochastic runs the problem can carry a fixed ensemble of centered
/// linear offsets: component `i` contributes gradient `∇f(x) + ξᵢ` with
/// `Σᵢ ξᵢ = 0`, so mini-batch gradients are unbiased and a full batch
/// reproduces the exact gradient.
#[derive(Debug, Clone)]
pub struct NonconvexTestProblem {
    dim: usize,
    noise: Vec<RealVector>,
}

impl NonconvexTestProblem {
    /// Deterministic variant: gradients are exact.
    pub fn new(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidDimension {
                dim: 0,
                reason: "the test function needs d ≥ 1",
            });
        }
        Ok(Self {
            dim,
            noise: Vec::new(),
        })
    }

    /// Stochastic variant with `components` centered offsets of per-coordinate
    /// scale `noise_scale`. The last offset is the negated sum of the others,
    /// so the ensemble mean is exactly zero.
    pub fn with_noise(
        dim: usize,
        components: usize,
        noise_scale: f64,
        rng: &mut SeededRng,
    ) -> Result<Self> {
        if components < 2 {
            return Err(Error::Domain(
                "a noise ensemble needs at least 2 components".into(),
            ));
        }
        let mut base = Self::new(dim)?;
        let mut sum = vec![0.0; dim];
        let mut noise = Vec::with_capacity(components);
        for _ in 0..(components - 1) {
            let xi = standard_normals(rng, dim).scale(noise_scale);
            for (s, v) in sum.iter_mut().zip(xi.iter()) {
                *s += v;
            }
            noise.push(xi);
        }
        noise.push(RealVector::from_vec_unchecked(
            sum.into_iter().map(|s| -s).collect(),
        ));
        base.noise = noise;
        Ok(base)
    }
}

impl Objective for NonconvexTestProblem {
    fn dim(&self) -> usize {
        self.dim
    }

    fn value(&self, x: &RealVector) -> f64 {
        x.iter().map(|&v| 0.5 * v * v + v.cos()).sum()
    }

    fn gradient(&self, x: &RealVector) -> RealVector {
        RealVector::from_vec_unchecked(x.iter().map(|&v| v - v.sin()).collect())
    }
}

impl FiniteSum for NonconvexTestProblem {
    fn n_terms(&self) -> usize {
        self.noise.len().max(1)
    }

    fn batch_gradient(&self, x: &RealVector, batch: &[usize]) -> RealVector {
        let mut g = self.gradient(x);
        if self.noise.is_empty() || batch.len() == self.n_terms() {
            // Full batch (or no ensemble): exact gradient.
            return g;
        }
        let w = 1.0 / batch.len() as f64;
        for &i in batch {
            g = g.add_scaled(w, &self.noise[i]);
        }
        g
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::finite_difference_gradient;

    #[test]
    fn origin_is_stationary_with_value_d() {
        let p = NonconvexTestProblem::new(7).unwrap();
        let zero = RealVector::zeros(7);
        assert_eq!(p.value(&zero), 7.0);
        assert_eq!(p.gradient(&zero).norm(), 0.0);
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let p = NonconvexTestProblem::new(6).unwrap();
        let mut rng = SeededRng::new(4);
        for _ in 0..5 {
            let x = standard_normals(&mut rng, 6);
            let g = p.gradient(&x);
            let fd = finite_difference_gradient(|y| p.value(y), &x, 1e-5).unwrap();
            let rel = g.dist(&fd) / g.norm().max(1e-12);
            assert!(rel <= 1e-6, "relative error {rel}");
        }
    }

    #[test]
    fn gradient_is_two_lipschitz_on_samples() {
        let p = NonconvexTestProblem::new(5).unwrap();
        let mut rng = SeededRng::new(8);
        for _ in 0..50 {
            let x = standard_normals(&mut rng, 5).scale(3.0);
            let y = standard_normals(&mut rng, 5).scale(3.0);
            let lhs = p.gradient(&x).dist(&p.gradient(&y));
            assert!(lhs <= 2.0 * x.dist(&y) + 1e-12);
        }
    }

    #[test]
    fn noise_ensemble_is_centered_and_full_batch_exact() {
        let mut rng = SeededRng::new(17);
        let p = NonconvexTestProblem::with_noise(4, 8, 0.5, &mut rng).unwrap();
        let mut sum = RealVector::zeros(4);
        for xi in &p.noise {
            sum = sum.add_scaled(1.0, xi);
        }
        assert!(sum.norm() <= 1e-12, "ensemble mean norm {}", sum.norm());

        let x = standard_normals(&mut rng, 4);
        let full: Vec<usize> = (0..p.n_terms()).collect();
        assert_eq!(p.batch_gradient(&x, &full), p.gradient(&x));
        // Single-component batches visibly differ from the exact gradient.
        let g0 = p.batch_gradient(&x, &[0]);
        assert!(g0.dist(&p.gradient(&x)) > 1e-6);
    }
}
