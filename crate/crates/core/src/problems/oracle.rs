use crate::numerics::{RealVector, SeededRng};
use crate::problems::FiniteSum;
use crate::{Error, Result};

/// Mini-batch gradient oracle over a finite-sum problem.
///
/// Batches of size `m` are drawn uniformly with replacement from the
/// problem's term indices (each index i.i.d.), which makes the estimator
/// unbiased by construction. `m = n` switches to the exact full gradient.
/// The oracle owns its own RNG substream, so interleaving other randomness
/// does not perturb the batch sequence.
#[derive(Debug, Clone)]
pub struct GradientOracle {
    batch_size: usize,
    rng: SeededRng,
}

impl GradientOracle {
    /// `batch_size = None` means full batch.
    pub fn new(n_terms: usize, batch_size: Option<usize>, rng: SeededRng) -> Result<Self> {
        let m = batch_size.unwrap_or(n_terms);
        if m == 0 || m > n_terms {
            return Err(Error::Domain(format!(
                "batch size must lie in 1..={n_terms}, got {m}"
            )));
        }
        Ok(Self {
            batch_size: m,
            rng,
        })
    }

    pub fn batch_size(&self) -> usize {
        self.batch_size
    }

    /// Gradient at `x`: exact when the batch covers the sum, sampled otherwise.
    pub fn gradient<P: FiniteSum>(&mut self, problem: &P, x: &RealVector) -> RealVector {
        let n = problem.n_terms();
        if self.batch_size >= n {
            let all: Vec<usize> = (0..n).collect();
            return problem.batch_gradient(x, &all);
        }
        let batch: Vec<usize> = (0..self.batch_size)
            .map(|_| self.rng.next_index(n))
            .collect();
        problem.batch_gradient(x, &batch)
    }
}
