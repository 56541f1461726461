use std::sync::Mutex;
use std::time::Instant;

use crate::harness::reference::{
    solve_reference_composite, solve_reference_quadratic, ReferenceSolution,
};
use crate::harness::trace::{Trace, TraceRow};
use crate::momentum::AdaptiveMomentumConfig;
use crate::numerics::{standard_normals, RealVector, SeededRng};
use crate::optimizers::{
    step_adam_family, step_apgd, step_ashb, step_gd, step_hb, step_pahb, step_pgd, AdamConfig,
    AlphaSchedule, BetaSource, OptimizerState, StepSchedule,
};
use crate::problems::{
    build_shifted_quadratic, composite_value, generate_logistic_dataset, FiniteSum,
    LogisticProblem, NonconvexTestProblem, Objective, QuadraticProblem, Regularizer,
    RegularizerKind,
};
use crate::{Error, Result};

/// Substream tags deriving the per-purpose RNG streams from the run seed.
const STREAM_DATA: u64 = 1;
const STREAM_INIT: u64 = 2;
const STREAM_BATCH: u64 = 3;
const STREAM_SIGNAL: u64 = 4;

/// Default composite reference budget (plain proximal gradient iterations).
pub const DEFAULT_REFERENCE_BUDGET: usize = 1_000_000;

/// Ground-truth signal used to label a synthetic logistic dataset.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LogisticSignal {
    /// Entry `i` is `(−1)ⁱ e^{−i/100}` for `i ≤ 500`, zero beyond.
    AlternatingDecay,
    Zero,
    RandomNormal { scale: f64 },
}

impl LogisticSignal {
    fn build(&self, d: usize, root: &SeededRng) -> RealVector {
        match self {
            LogisticSignal::AlternatingDecay => RealVector::from_vec_unchecked(
                (0..d)
                    .map(|i| {
                        if i <= 500 {
                            let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
                            sign * (-(i as f64) / 100.0).exp()
                        } else {
                            0.0
                        }
                    })
                    .collect(),
            ),
            LogisticSignal::Zero => RealVector::zeros(d),
            LogisticSignal::RandomNormal { scale } => {
                standard_normals(&mut root.substream(STREAM_SIGNAL), d).scale(*scale)
            }
        }
    }
}

/// Which benchmark problem a run optimizes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ProblemSpec {
    /// `A = σI + L(cyclic)`, `b = e₁`.
    ShiftedQuadratic { sigma: f64, d: usize },
    /// Synthetic logistic regression with Toeplitz feature covariance.
    Logistic {
        n: usize,
        d: usize,
        decay: f64,
        signal: LogisticSignal,
    },
    /// The smooth trig test function; `noise_components > 0` attaches the
    /// centered finite-sum noise ensemble for stochastic runs.
    NonconvexTest {
        d: usize,
        noise_components: usize,
        noise_scale: f64,
    },
}

/// A built problem, ready to drive.
#[derive(Debug, Clone)]
pub enum ProblemInstance {
    Quadratic(QuadraticProblem),
    Logistic(LogisticProblem),
    Nonconvex(NonconvexTestProblem),
}

impl ProblemInstance {
    /// Deterministic construction: the dataset depends only on `(spec, seed)`.
    pub fn build(spec: &ProblemSpec, seed: u64) -> Result<Self> {
        let root = SeededRng::new(seed);
        Ok(match *spec {
            ProblemSpec::ShiftedQuadratic { sigma, d } => {
                ProblemInstance::Quadratic(build_shifted_quadratic(sigma, d)?)
            }
            ProblemSpec::Logistic { n, d, decay, signal } => {
                let x_true = signal.build(d, &root);
                let mut rng = root.substream(STREAM_DATA);
                ProblemInstance::Logistic(generate_logistic_dataset(n, d, decay, &x_true, &mut rng)?)
            }
            ProblemSpec::NonconvexTest {
                d,
                noise_components,
                noise_scale,
            } => {
                if noise_components == 0 {
                    ProblemInstance::Nonconvex(NonconvexTestProblem::new(d)?)
                } else {
                    let mut rng = root.substream(STREAM_DATA);
                    ProblemInstance::Nonconvex(NonconvexTestProblem::with_noise(
                        d,
                        noise_components,
                        noise_scale,
                        &mut rng,
                    )?)
                }
            }
        })
    }

    pub fn dim(&self) -> usize {
        match self {
            ProblemInstance::Quadratic(p) => p.dim(),
            ProblemInstance::Logistic(p) => p.dim(),
            ProblemInstance::Nonconvex(p) => p.dim(),
        }
    }

    /// Smoothness constant (upper bound) of the smooth part `f`.
    pub fn smoothness(&self) -> f64 {
        match self {
            ProblemInstance::Quadratic(p) => p.smoothness(),
            ProblemInstance::Logistic(p) => p.smoothness_bound(),
            ProblemInstance::Nonconvex(_) => 2.0,
        }
    }
}

/// Which stepper drives a run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OptimizerSpec {
    /// Gradient descent (stochastic when a batch size is set).
    Gd,
    /// Heavy ball with constant momentum.
    Hb { beta: f64 },
    /// Adaptive (stochastic) heavy ball.
    Ashb { delta: f64 },
    /// Proximal gradient descent.
    Pgd,
    /// Accelerated proximal gradient descent.
    Apgd,
    /// Proximal heavy ball with constant momentum.
    Phb { beta: f64 },
    /// Proximal heavy ball with adaptive momentum.
    Pahb { delta: f64 },
    /// The Adam family; members are picked by the α schedule, β source and
    /// weight decay.
    AdamFamily {
        alpha: AlphaSchedule,
        beta: BetaSource,
        weight_decay: f64,
    },
}

impl OptimizerSpec {
    pub fn is_proximal(&self) -> bool {
        matches!(
            self,
            OptimizerSpec::Pgd | OptimizerSpec::Apgd | OptimizerSpec::Phb { .. } | OptimizerSpec::Pahb { .. }
        )
    }

    /// The δ of the adaptive estimator, when this optimizer uses one.
    pub fn adaptive_delta(&self) -> Option<f64> {
        match self {
            OptimizerSpec::Ashb { delta } | OptimizerSpec::Pahb { delta } => Some(*delta),
            OptimizerSpec::AdamFamily {
                beta: BetaSource::Adaptive(cfg),
                ..
            } => Some(cfg.delta),
            _ => None,
        }
    }

    /// Same optimizer with the adaptive δ replaced (sweeps); `None` when
    /// the optimizer has no adaptive momentum.
    pub fn with_delta(&self, delta: f64) -> Option<OptimizerSpec> {
        match *self {
            OptimizerSpec::Ashb { .. } => Some(OptimizerSpec::Ashb { delta }),
            OptimizerSpec::Pahb { .. } => Some(OptimizerSpec::Pahb { delta }),
            OptimizerSpec::AdamFamily {
                alpha,
                beta: BetaSource::Adaptive(cfg),
                weight_decay,
            } => {
                let cfg = AdaptiveMomentumConfig::with_denom_floor(delta, cfg.denom_floor).ok()?;
                Some(OptimizerSpec::AdamFamily {
                    alpha,
                    beta: BetaSource::Adaptive(cfg),
                    weight_decay,
                })
            }
            _ => None,
        }
    }

    /// 1 − (β cap) for the steppers of the plain heavy-ball form, whose
    /// displacement obeys `‖Δx⁺‖ ≤ (1−δ_eff)‖Δx‖ + γ‖g‖` identically.
    fn hb_form_delta(&self) -> Option<f64> {
        match self {
            OptimizerSpec::Gd => Some(1.0),
            OptimizerSpec::Hb { beta } => Some(1.0 - beta),
            OptimizerSpec::Ashb { delta } => Some(*delta),
            _ => None,
        }
    }
}

/// Initial iterate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InitSpec {
    Zero,
    RandomNormal { scale: f64 },
}

/// Whether and how the run computes its reference minimizer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ReferenceSpec {
    None,
    /// Direct solve for unregularized quadratics, the analytic stationary
    /// point for the unregularized trig test, proximal gradient descent with
    /// this budget for composites.
    Auto { composite_budget: usize },
}

impl ReferenceSpec {
    pub fn auto() -> Self {
        ReferenceSpec::Auto {
            composite_budget: DEFAULT_REFERENCE_BUDGET,
        }
    }
}

/// Full description of one experiment; a run is a pure function of this.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub problem: ProblemSpec,
    pub regularizer: Regularizer,
    pub optimizer: OptimizerSpec,
    pub schedule: StepSchedule,
    pub iters: u64,
    pub seed: u64,
    /// Mini-batch size for the smooth stochastic family; `None` = full batch.
    pub batch_size: Option<usize>,
    /// Trace stride; default 1 up to d = 1000, else 10. The final row is
    /// always recorded.
    pub record_stride: Option<u64>,
    pub init: InitSpec,
    pub reference: ReferenceSpec,
    /// Record wall-clock times in the trace. Off by default: timing values
    /// are not reproducible, and leaving them empty keeps rerun CSVs
    /// byte-identical.
    pub timing: bool,
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if let OptimizerSpec::Hb { beta } | OptimizerSpec::Phb { beta } = self.optimizer {
            if !(0.0..1.0).contains(&beta) {
                return Err(Error::Config(format!("beta must lie in [0, 1), got {beta}")));
            }
        }
        if let Some(delta) = self.optimizer.adaptive_delta() {
            if !(delta > 0.0 && delta <= 1.0) {
                return Err(Error::Config(format!("delta must lie in (0, 1], got {delta}")));
            }
        }
        if let OptimizerSpec::AdamFamily {
            alpha,
            beta,
            weight_decay,
        } = self.optimizer
        {
            AdamConfig::with_weight_decay(alpha, beta, weight_decay)
                .map_err(|e| Error::Config(e.to_string()))?;
        }
        if self.optimizer.is_proximal() && self.batch_size.is_some() {
            return Err(Error::Config(
                "proximal optimizers use exact gradients; batch size is not supported".into(),
            ));
        }
        if !self.optimizer.is_proximal()
            && self.regularizer.lambda > 0.0
            && !self.regularizer.is_smooth()
        {
            return Err(Error::Config(
                "an l1 regularizer needs a proximal optimizer".into(),
            ));
        }
        if let Some(m) = self.batch_size {
            if m == 0 {
                return Err(Error::Config("batch size must be at least 1".into()));
            }
        }
        if let Some(s) = self.record_stride {
            if s == 0 {
                return Err(Error::Config("record stride must be at least 1".into()));
            }
        }
        if let InitSpec::RandomNormal { scale } = self.init {
            if !scale.is_finite() || scale <= 0.0 {
                return Err(Error::Config(format!(
                    "init scale must be positive and finite, got {scale}"
                )));
            }
        }
        Ok(())
    }
}

/// Health counters accumulated over a run.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunDiagnostics {
    /// Iterations violating `‖Δx⁺‖ ≤ (1−δ_eff)‖Δx‖ + γ‖g‖` (heavy-ball-form
    /// steppers only; always 0 unless arithmetic misbehaves).
    pub displacement_violations: usize,
    pub max_displacement: f64,
    pub max_grad_norm: f64,
    pub max_beta: f64,
    /// For adaptive runs: β stayed 0 over the first two iterations.
    pub beta_first_two_zero: bool,
    pub gamma_max: f64,
}

/// Everything a run produces.
#[derive(Debug, Clone)]
pub struct RunOutput {
    pub trace: Trace,
    pub reference: Option<ReferenceSolution>,
    pub final_state: OptimizerState,
    pub diag: RunDiagnostics,
    /// Final objective value `F(x_K)` (smooth part plus penalty), defined
    /// with or without a reference.
    pub final_f: f64,
}

/// Runs one experiment end to end: build the problem, compute the reference
/// per the config, then drive the optimizer and record the trace.
/// Identical configs produce identical outputs.
pub fn run_experiment(cfg: &RunConfig) -> Result<RunOutput> {
    cfg.validate()?;
    let instance = ProblemInstance::build(&cfg.problem, cfg.seed)?;
    let reference = compute_reference(cfg, &instance)?;
    run_prepared(cfg, &instance, reference.as_ref())
}

/// Reference per the config's [`ReferenceSpec`].
pub fn compute_reference(
    cfg: &RunConfig,
    instance: &ProblemInstance,
) -> Result<Option<ReferenceSolution>> {
    let ReferenceSpec::Auto { composite_budget } = cfg.reference else {
        return Ok(None);
    };
    let reg = &cfg.regularizer;
    let plain = reg.lambda == 0.0 || reg.kind == RegularizerKind::None;
    let r = match instance {
        ProblemInstance::Quadratic(p) if plain => solve_reference_quadratic(p)?,
        ProblemInstance::Nonconvex(p) if plain => {
            // x − sin x vanishes only at the origin.
            let x_star = RealVector::zeros(p.dim());
            ReferenceSolution {
                f_star: p.value(&x_star),
                x_star,
                residual: 0.0,
                converged: true,
                method: "analytic stationary point".into(),
            }
        }
        _ => {
            let smoothness = instance.smoothness();
            match instance {
                ProblemInstance::Quadratic(p) => {
                    solve_reference_composite(p, reg, smoothness, composite_budget, None)?
                }
                ProblemInstance::Logistic(p) => {
                    solve_reference_composite(p, reg, smoothness, composite_budget, None)?
                }
                ProblemInstance::Nonconvex(p) => {
                    solve_reference_composite(p, reg, smoothness, composite_budget, None)?
                }
            }
        }
    };
    Ok(Some(r))
}

/// Drives an already-built problem, optionally against a precomputed
/// reference (handy when several runs share one dataset and minimizer).
pub fn run_prepared(
    cfg: &RunConfig,
    instance: &ProblemInstance,
    reference: Option<&ReferenceSolution>,
) -> Result<RunOutput> {
    cfg.validate()?;
    match instance {
        ProblemInstance::Quadratic(p) => {
            let map = |dx: &RealVector| p.hessian_apply(dx);
            drive(cfg, p, reference, Some(&map))
        }
        ProblemInstance::Logistic(p) => drive(cfg, p, reference, None),
        ProblemInstance::Nonconvex(p) => drive(cfg, p, reference, None),
    }
}

/// Curvature ratio `‖gᵏ − gᵏ⁻¹‖ / ‖xᵏ − xᵏ⁻¹‖`, `None` on a stalled
/// displacement. For quadratics `ratio_map` substitutes the algebraically
/// identical `‖A·Δx‖/‖Δx‖`, which stays accurate deep into convergence where
/// the gradient difference would be pure cancellation noise.
fn curvature_ratio(
    x_k: &RealVector,
    x_km1: &RealVector,
    g_k: &RealVector,
    g_km1: &RealVector,
    ratio_map: Option<&dyn Fn(&RealVector) -> RealVector>,
) -> Option<f64> {
    let dx = x_k.sub(x_km1);
    let dxn = dx.norm();
    if dxn < 1e-12 {
        return None;
    }
    let num = match ratio_map {
        Some(f) => f(&dx).norm(),
        None => g_k.dist(g_km1),
    };
    Some(num / dxn)
}

fn drive<P: FiniteSum>(
    cfg: &RunConfig,
    problem: &P,
    reference: Option<&ReferenceSolution>,
    ratio_map: Option<&dyn Fn(&RealVector) -> RealVector>,
) -> Result<RunOutput> {
    let d = problem.dim();
    let root = SeededRng::new(cfg.seed);
    let reg = &cfg.regularizer;

    let x0 = match cfg.init {
        InitSpec::Zero => RealVector::zeros(d),
        InitSpec::RandomNormal { scale } => {
            standard_normals(&mut root.substream(STREAM_INIT), d).scale(scale)
        }
    };
    let mut state = OptimizerState::new(x0);

    let mut oracle = if cfg.optimizer.is_proximal() {
        None
    } else {
        Some(crate::problems::GradientOracle::new(
            problem.n_terms(),
            cfg.batch_size,
            root.substream(STREAM_BATCH),
        )?)
    };
    // Smooth runs fold a differentiable penalty into the gradient.
    let add_penalty_grad = !cfg.optimizer.is_proximal() && reg.lambda > 0.0;

    let adaptive_cfg = match cfg.optimizer {
        OptimizerSpec::Ashb { delta } | OptimizerSpec::Pahb { delta } => {
            Some(AdaptiveMomentumConfig::new(delta).map_err(|e| Error::Config(e.to_string()))?)
        }
        _ => None,
    };
    let adam_cfg = match cfg.optimizer {
        OptimizerSpec::AdamFamily {
            alpha,
            beta,
            weight_decay,
        } => Some(AdamConfig::with_weight_decay(alpha, beta, weight_decay)?),
        _ => None,
    };

    let use_reference = reference.map(|r| r.converged).unwrap_or(false);
    let stride = cfg
        .record_stride
        .unwrap_or(if d <= 1000 { 1 } else { 10 });

    let started = Instant::now();
    let mut trace = Trace::new();
    let mut diag = RunDiagnostics {
        beta_first_two_zero: true,
        ..Default::default()
    };
    let mut prev_displacement = 0.0f64;

    let smooth_gradient = |st: &OptimizerState, oracle: &mut Option<crate::problems::GradientOracle>| {
        let mut g = oracle
            .as_mut()
            .expect("smooth family has an oracle")
            .gradient(problem, &st.x);
        if add_penalty_grad {
            let pg = reg.smooth_gradient(&st.x).expect("validated smooth penalty");
            g = g.add_scaled(1.0, &pg);
        }
        g
    };

    let record = |trace: &mut Trace,
                      k: u64,
                      gamma: f64,
                      beta: f64,
                      x: &RealVector,
                      g_norm: f64,
                      ratio: Option<f64>| {
        let (dist, subopt) = if use_reference {
            let r = reference.expect("checked");
            (
                Some(x.dist(&r.x_star)),
                Some(composite_value(problem, reg, x) - r.f_star),
            )
        } else {
            (None, None)
        };
        trace.push(TraceRow {
            k,
            gamma,
            beta,
            ratio,
            grad_norm: g_norm,
            dist_to_opt: dist,
            subopt,
            wall_ms: cfg.timing.then(|| started.elapsed().as_secs_f64() * 1e3),
        });
    };

    for k in 1..=cfg.iters {
        let gamma = cfg.schedule.gamma(k);
        let beta_k = current_beta(&cfg.optimizer, &state);
        diag.max_beta = diag.max_beta.max(beta_k);
        diag.gamma_max = diag.gamma_max.max(gamma);
        if cfg.optimizer.adaptive_delta().is_some() && k <= 2 && beta_k != 0.0 {
            diag.beta_first_two_zero = false;
        }

        let prev_x = state.x_prev.clone();
        let prev_g = state.g_prev.clone();

        state = match &cfg.optimizer {
            OptimizerSpec::Gd => {
                let g = smooth_gradient(&state, &mut oracle);
                step_gd(state, gamma, &g)?
            }
            OptimizerSpec::Hb { beta } => {
                let g = smooth_gradient(&state, &mut oracle);
                step_hb(state, gamma, *beta, &g)?
            }
            OptimizerSpec::Ashb { .. } => {
                let g = smooth_gradient(&state, &mut oracle);
                step_ashb(state, adaptive_cfg.as_ref().expect("ashb config"), gamma, &g)?
            }
            OptimizerSpec::Pgd => step_pgd(state, problem, reg, gamma)?,
            OptimizerSpec::Apgd => step_apgd(state, problem, reg, gamma)?,
            OptimizerSpec::Phb { beta } => {
                step_pahb(state, &BetaSource::Constant(*beta), problem, reg, gamma)?
            }
            OptimizerSpec::Pahb { .. } => {
                let src = BetaSource::Adaptive(*adaptive_cfg.as_ref().expect("pahb config"));
                step_pahb(state, &src, problem, reg, gamma)?
            }
            OptimizerSpec::AdamFamily { .. } => {
                let g = smooth_gradient(&state, &mut oracle);
                step_adam_family(state, adam_cfg.as_ref().expect("adam config"), gamma, &g)?
            }
        };

        // After the step: xᵏ = state.x_prev, gᵏ = state.g_prev.
        if !state.x.norm().is_finite() {
            return Err(Error::NonFiniteIterate { k: k + 1 });
        }
        let g_norm = state.g_prev.norm();
        diag.max_grad_norm = diag.max_grad_norm.max(g_norm);
        let new_displacement = state.displacement();
        diag.max_displacement = diag.max_displacement.max(new_displacement);
        if let Some(delta_eff) = cfg.optimizer.hb_form_delta() {
            let bound = (1.0 - delta_eff) * prev_displacement + gamma * g_norm;
            if new_displacement > bound * (1.0 + 1e-9) + 1e-300 {
                diag.displacement_violations += 1;
            }
        }
        prev_displacement = new_displacement;

        if (k - 1) % stride == 0 {
            let ratio = curvature_ratio(&state.x_prev, &prev_x, &state.g_prev, &prev_g, ratio_map);
            record(&mut trace, k, gamma, beta_k, &state.x_prev, g_norm, ratio);
        }
    }

    // Final row: the state after the last step, with a fresh gradient there.
    let k_final = cfg.iters + 1;
    let gamma_final = cfg.schedule.gamma(k_final);
    let beta_final = current_beta(&cfg.optimizer, &state);
    let g_final = if cfg.optimizer.is_proximal() {
        problem.gradient(&state.x)
    } else {
        smooth_gradient(&state, &mut oracle)
    };
    let ratio_final = curvature_ratio(&state.x, &state.x_prev, &g_final, &state.g_prev, ratio_map);
    record(
        &mut trace,
        k_final,
        gamma_final,
        beta_final,
        &state.x,
        g_final.norm(),
        ratio_final,
    );

    let final_f = composite_value(problem, reg, &state.x);
    Ok(RunOutput {
        trace,
        reference: reference.cloned(),
        final_state: state,
        diag,
        final_f,
    })
}

fn current_beta(spec: &OptimizerSpec, state: &OptimizerState) -> f64 {
    match spec {
        OptimizerSpec::Gd | OptimizerSpec::Pgd | OptimizerSpec::Apgd => 0.0,
        OptimizerSpec::Hb { beta } | OptimizerSpec::Phb { beta } => *beta,
        OptimizerSpec::Ashb { .. } | OptimizerSpec::Pahb { .. } => state.momentum.beta(),
        OptimizerSpec::AdamFamily { beta, .. } => beta.current(&state.momentum),
    }
}

/// One δ-sweep result row.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeltaSweepRow {
    pub delta: f64,
    /// `F(x_K) − F*`.
    pub final_subopt: f64,
}

/// Worker count for sweep fan-out: `ADMOM_WORKERS` when set, otherwise the
/// available parallelism.
pub fn sweep_workers() -> usize {
    std::env::var("ADMOM_WORKERS")
        .ok()
        .and_then(|s| s.parse::<usize>().ok())
        .filter(|&n| n >= 1)
        .unwrap_or_else(|| {
            std::thread::available_parallelism()
                .map(|n| n.get())
                .unwrap_or(1)
        })
}

/// Runs the base config once per δ (same seed, same dataset, same reference)
/// and reports the final suboptimality per δ. Runs fan out over
/// [`sweep_workers`] threads; results are ordered like `deltas`.
pub fn delta_sweep(base: &RunConfig, deltas: &[f64]) -> Result<Vec<DeltaSweepRow>> {
    base.validate()?;
    let instance = ProblemInstance::build(&base.problem, base.seed)?;
    let reference = compute_reference(base, &instance)?;
    let reference = reference.ok_or_else(|| {
        Error::Config("a delta sweep needs a reference to report suboptimality".into())
    })?;
    delta_sweep_prepared(base, deltas, &instance, &reference)
}

/// [`delta_sweep`] against an already-built problem and reference.
pub fn delta_sweep_prepared(
    base: &RunConfig,
    deltas: &[f64],
    instance: &ProblemInstance,
    reference: &ReferenceSolution,
) -> Result<Vec<DeltaSweepRow>> {
    if deltas.is_empty() {
        return Err(Error::Config("empty delta list".into()));
    }
    for &d in deltas {
        if !(d > 0.0 && d <= 1.0) {
            return Err(Error::Config(format!("delta must lie in (0, 1], got {d}")));
        }
    }
    let configs: Vec<RunConfig> = deltas
        .iter()
        .map(|&delta| {
            let optimizer = base.optimizer.with_delta(delta).ok_or_else(|| {
                Error::Config("delta sweep needs an adaptive-momentum optimizer".into())
            })?;
            Ok(RunConfig {
                optimizer,
                ..base.clone()
            })
        })
        .collect::<Result<_>>()?;
    reference.require_converged(0).map_err(|_| {
        Error::Config(format!(
            "delta sweep reference not converged (residual {:e})",
            reference.residual
        ))
    })?;

    let results: Mutex<Vec<Option<Result<DeltaSweepRow>>>> =
        Mutex::new(vec![None; configs.len()]);
    let next = std::sync::atomic::AtomicUsize::new(0);
    let workers = sweep_workers().min(configs.len());
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
                if i >= configs.len() {
                    break;
                }
                let cfg = &configs[i];
                let row = run_prepared(cfg, instance, Some(reference)).map(|out| DeltaSweepRow {
                    delta: deltas[i],
                    final_subopt: out.final_f - reference.f_star,
                });
                results.lock().expect("sweep mutex")[i] = Some(row);
            });
        }
    });
    results
        .into_inner()
        .expect("sweep mutex")
        .into_iter()
        .map(|slot| slot.expect("every slot filled"))
        .collect()
}
