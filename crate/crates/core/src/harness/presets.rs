use crate::harness::experiment::{
    InitSpec, LogisticSignal, OptimizerSpec, ProblemSpec, ReferenceSpec, RunConfig,
};
use crate::optimizers::StepSchedule;
use crate::problems::{Regularizer, RegularizerKind};

/// Names accepted by the `run --preset` CLI command, in display order.
pub fn preset_names() -> &'static [&'static str] {
    &["fig1", "fig2-l1", "fig2-l2", "delta-sweep"]
}

/// The curvature-ratio experiment: heavy ball with γ = 0.1, β = 0.9 on the
/// shifted cyclic-Laplacian quadratic at d = 500, one run per σ. The tighter
/// the shift, the longer the run: σ = 1e−3 gets 5·10⁴ iterations, σ = 1e−4
/// and 1e−5 get 2·10⁵.
pub fn fig1_preset() -> Vec<(String, RunConfig)> {
    [(1e-3, 50_000u64), (1e-4, 200_000), (1e-5, 200_000)]
        .into_iter()
        .map(|(sigma, iters)| {
            (
                format!("ratio-sigma-{sigma:e}"),
                ratio_run(sigma, 500, 0.1, 0.9, iters),
            )
        })
        .collect()
}

/// A single curvature-ratio run (the building block of `fig1_preset`).
pub fn ratio_run(sigma: f64, d: usize, gamma: f64, beta: f64, iters: u64) -> RunConfig {
    RunConfig {
        problem: ProblemSpec::ShiftedQuadratic { sigma, d },
        regularizer: Regularizer::none(),
        optimizer: OptimizerSpec::Hb { beta },
        schedule: StepSchedule::constant(gamma).expect("positive gamma"),
        iters,
        seed: 42,
        batch_size: None,
        record_stride: None,
        init: InitSpec::Zero,
        reference: ReferenceSpec::auto(),
        timing: false,
    }
}

/// The regularized-logistic-regression benchmark: n = d = 1000, Toeplitz(0.9)
/// features, alternating-decay signal, λ = 0.001, γ = 0.1, zero init,
/// 10⁴ iterations, four solvers.
pub struct Fig2Preset {
    /// The dataset/regularizer context shared by the four runs.
    pub base: RunConfig,
    /// `(name, config)` for PGD, APGD, PHB(0.9) and PAHB.
    pub runs: Vec<(String, RunConfig)>,
}

pub fn fig2_preset(kind: RegularizerKind, seed: u64, iters: u64) -> Fig2Preset {
    let regularizer = Regularizer::new(kind, 0.001).expect("nonnegative lambda");
    let base = RunConfig {
        problem: ProblemSpec::Logistic {
            n: 1000,
            d: 1000,
            decay: 0.9,
            signal: LogisticSignal::AlternatingDecay,
        },
        regularizer,
        optimizer: OptimizerSpec::Pgd,
        schedule: StepSchedule::constant(0.1).expect("positive gamma"),
        iters,
        seed,
        batch_size: None,
        record_stride: None,
        init: InitSpec::Zero,
        reference: ReferenceSpec::None,
        timing: false,
    };
    let runs = [
        ("pgd", OptimizerSpec::Pgd),
        ("apgd", OptimizerSpec::Apgd),
        ("phb", OptimizerSpec::Phb { beta: 0.9 }),
        ("pahb", OptimizerSpec::Pahb { delta: 1e-3 }),
    ]
    .into_iter()
    .map(|(name, optimizer)| {
        (
            name.to_string(),
            RunConfig {
                optimizer,
                ..base.clone()
            },
        )
    })
    .collect();
    Fig2Preset { base, runs }
}

/// The δ-ablation: adaptive heavy ball on the ℓ2-regularized logistic
/// problem, full batch, same seed for every δ, δ ∈ {10⁻¹, …, 10⁻⁹}.
pub fn delta_sweep_preset(seed: u64, iters: u64) -> (RunConfig, Vec<f64>) {
    let base = RunConfig {
        problem: ProblemSpec::Logistic {
            n: 1000,
            d: 1000,
            decay: 0.9,
            signal: LogisticSignal::AlternatingDecay,
        },
        regularizer: Regularizer::l2_squared(0.001).expect("nonnegative lambda"),
        optimizer: OptimizerSpec::Ashb { delta: 1e-3 },
        schedule: StepSchedule::constant(0.1).expect("positive gamma"),
        iters,
        seed,
        batch_size: None,
        record_stride: None,
        init: InitSpec::Zero,
        reference: ReferenceSpec::None,
        timing: false,
    };
    let deltas = (1..=9).map(|i| 10f64.powi(-i)).collect();
    (base, deltas)
}
