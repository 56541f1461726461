//! The optimizer family: plain and stochastic gradient descent, heavy ball
//! with constant or adaptive momentum, proximal variants for composite
//! objectives, and the Adam family.
//!
//! Every stepper is a pure transition `OptimizerState → OptimizerState`; a run
//! is a fold of steps over a gradient sequence. The reductions between family
//! members are exact: adaptive heavy ball with δ = 1 takes the same arithmetic
//! path as gradient descent, a constant-β proximal heavy ball with β = 0 is
//! proximal gradient descent, and the adaptive Adam with δ = 1 is Adam without
//! momentum. Tests pin those reductions bitwise.

mod adam;
mod proximal;
mod schedule;
mod smooth;
mod state;

pub use adam::{step_adam_family, AdamConfig, AlphaSchedule};
pub use proximal::{step_apgd, step_pahb, step_pgd};
pub use schedule::StepSchedule;
pub use smooth::{step_ashb, step_gd, step_hb};
pub use state::{BetaSource, OptimizerState};
