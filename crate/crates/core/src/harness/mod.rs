//! Experiment orchestration: reference minimizers, per-iteration traces with
//! CSV output, geometric-rate fitting, the heavy-ball iteration-matrix
//! oracle, and reproducible experiment configs (including the built-in
//! presets the CLI exposes).

mod companion;
mod experiment;
mod presets;
mod rate;
mod reference;
mod trace;

pub use companion::{companion_matrix, companion_spectral_radius, SpectralRadius};
pub use experiment::{
    compute_reference, delta_sweep, delta_sweep_prepared, run_experiment, run_prepared,
    sweep_workers, DeltaSweepRow, InitSpec, LogisticSignal, OptimizerSpec, ProblemInstance,
    ProblemSpec, ReferenceSpec, RunConfig, RunDiagnostics, RunOutput,
};
pub use presets::{delta_sweep_preset, fig1_preset, fig2_preset, preset_names, ratio_run, Fig2Preset};
pub use rate::{fit_geometric_rate, post_transient_window, RateFit};
pub use reference::{
    solve_reference_accelerated, solve_reference_composite, solve_reference_quadratic,
    ReferenceSolution,
};
pub use trace::{Trace, TraceRow};
