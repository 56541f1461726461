use crate::{Error, Result};

/// Step-size schedule: γ_k for iteration k ≥ 1, always positive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepSchedule {
    base: f64,
    kind: Kind,
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Kind {
    Constant,
    /// γ is multiplied by `factor` every `every` iterations.
    StepDecay { every: u64, factor: f64 },
    /// γ_k = γ/√k.
    InverseSqrt,
}

impl StepSchedule {
    pub fn constant(gamma: f64) -> Result<Self> {
        Self::build(gamma, Kind::Constant)
    }

    /// Multiplies γ by `factor` after every `every` iterations (a decay "by a
    /// factor of 10" is `factor = 0.1`).
    pub fn step_decay(gamma: f64, every: u64, factor: f64) -> Result<Self> {
        if every == 0 {
            return Err(Error::Domain("decay interval must be >= 1".into()));
        }
        if factor.is_nan() || factor <= 0.0 || factor > 1.0 {
            return Err(Error::Domain(format!(
                "decay factor must lie in (0, 1], got {factor}"
            )));
        }
        Self::build(gamma, Kind::StepDecay { every, factor })
    }

    pub fn inverse_sqrt(gamma: f64) -> Result<Self> {
        Self::build(gamma, Kind::InverseSqrt)
    }

    fn build(gamma: f64, kind: Kind) -> Result<Self> {
        if !gamma.is_finite() || gamma <= 0.0 {
            return Err(Error::Domain(format!(
                "base step size must be positive and finite, got {gamma}"
            )));
        }
        Ok(Self { base: gamma, kind })
    }

    pub fn base(&self) -> f64 {
        self.base
    }

    /// γ_k for iteration `k ≥ 1`. Clamped above zero so an extreme decay
    /// horizon cannot underflow the invariant γ_k > 0.
    pub fn gamma(&self, k: u64) -> f64 {
        debug_assert!(k >= 1);
        let g = match self.kind {
            Kind::Constant => self.base,
            Kind::StepDecay { every, factor } => {
                self.base * factor.powi(((k - 1) / every) as i32)
            }
            Kind::InverseSqrt => self.base / (k as f64).sqrt(),
        };
        g.max(f64::MIN_POSITIVE)
    }
}
