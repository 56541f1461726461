//! Flat key=value experiment configs.
//!
//! Grammar: one `key = value` per line, `#` starts a comment, blank lines
//! ignored. Keys may appear once; unknown keys are errors. CLI flags override
//! file values. The accepted keys are listed in [`KEYS`].

use std::collections::BTreeMap;

use admom::harness::{InitSpec, LogisticSignal, OptimizerSpec, ProblemSpec, ReferenceSpec, RunConfig};
use admom::momentum::AdaptiveMomentumConfig;
use admom::optimizers::{AlphaSchedule, BetaSource, StepSchedule};
use admom::problems::{Regularizer, RegularizerKind};

/// Every key the config grammar accepts.
pub const KEYS: &[&str] = &[
    "problem",
    "sigma",
    "d",
    "n",
    "decay",
    "signal",
    "signal_scale",
    "noise_components",
    "noise_scale",
    "reg",
    "lambda",
    "optimizer",
    "gamma",
    "beta",
    "delta",
    "alpha",
    "weight_decay",
    "schedule",
    "decay_every",
    "decay_factor",
    "iters",
    "seed",
    "batch",
    "stride",
    "init",
    "init_scale",
    "reference",
    "ref_budget",
    "timing",
    "out",
];

#[derive(Debug, Default, Clone)]
pub struct RawConfig {
    map: BTreeMap<String, String>,
}

impl RawConfig {
    /// Parses config text, rejecting malformed lines, duplicates and unknown
    /// keys.
    pub fn parse(text: &str) -> Result<Self, String> {
        let mut map = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(format!("line {}: expected key = value", lineno + 1));
            };
            let key = key.trim().to_string();
            let value = value.trim().to_string();
            if !KEYS.contains(&key.as_str()) {
                return Err(format!("line {}: unknown key '{key}'", lineno + 1));
            }
            if map.insert(key.clone(), value).is_some() {
                return Err(format!("line {}: duplicate key '{key}'", lineno + 1));
            }
        }
        Ok(Self { map })
    }

    pub fn set(&mut self, key: &str, value: String) {
        self.map.insert(key.to_string(), value);
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.map.get(key).map(|s| s.as_str())
    }

    fn parsed<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>, String>
    where
        T::Err: std::fmt::Display,
    {
        match self.get(key) {
            None => Ok(None),
            Some(v) => v
                .parse::<T>()
                .map(Some)
                .map_err(|e| format!("bad value for {key}: {e}")),
        }
    }

    fn require_for(&self, key: &str, context: &str) -> Result<&str, String> {
        self.get(key)
            .ok_or_else(|| format!("{context} needs the '{key}' key"))
    }

    /// Output path, when set.
    pub fn out(&self) -> Option<&str> {
        self.get("out")
    }

    /// Builds the full run configuration.
    pub fn build(&self) -> Result<RunConfig, String> {
        let problem = match self.require_for("problem", "a run config")? {
            "quadratic" => ProblemSpec::ShiftedQuadratic {
                sigma: self.parsed("sigma")?.unwrap_or(1e-3),
                d: self.parsed("d")?.unwrap_or(500),
            },
            "logistic" => ProblemSpec::Logistic {
                n: self.parsed("n")?.unwrap_or(1000),
                d: self.parsed("d")?.unwrap_or(1000),
                decay: self.parsed("decay")?.unwrap_or(0.9),
                signal: match self.get("signal").unwrap_or("alternating-decay") {
                    "alternating-decay" => LogisticSignal::AlternatingDecay,
                    "zero" => LogisticSignal::Zero,
                    "random" => LogisticSignal::RandomNormal {
                        scale: self.parsed("signal_scale")?.unwrap_or(1.0),
                    },
                    other => return Err(format!("unknown signal '{other}'")),
                },
            },
            "nonconvex" => ProblemSpec::NonconvexTest {
                d: self.parsed("d")?.unwrap_or(50),
                noise_components: self.parsed("noise_components")?.unwrap_or(0),
                noise_scale: self.parsed("noise_scale")?.unwrap_or(0.0),
            },
            other => return Err(format!("unknown problem '{other}'")),
        };

        let lambda: f64 = self.parsed("lambda")?.unwrap_or(0.001);
        let regularizer = match self.get("reg").unwrap_or("none") {
            "none" => Regularizer::none(),
            "l1" => Regularizer::new(RegularizerKind::L1, lambda).map_err(|e| e.to_string())?,
            "l2" => {
                Regularizer::new(RegularizerKind::L2Squared, lambda).map_err(|e| e.to_string())?
            }
            other => return Err(format!("unknown reg '{other}'")),
        };

        let beta: f64 = self.parsed("beta")?.unwrap_or(0.9);
        let delta: f64 = self.parsed("delta")?.unwrap_or(1e-3);
        let adaptive = || -> Result<BetaSource, String> {
            Ok(BetaSource::Adaptive(
                AdaptiveMomentumConfig::new(delta).map_err(|e| e.to_string())?,
            ))
        };
        let alpha = match self.get("alpha") {
            None => None,
            Some("harmonic") => Some(AlphaSchedule::Harmonic),
            Some(v) => Some(AlphaSchedule::Constant(
                v.parse::<f64>().map_err(|e| format!("bad value for alpha: {e}"))?,
            )),
        };
        let weight_decay: f64 = self.parsed("weight_decay")?.unwrap_or(5e-4);
        let optimizer = match self.require_for("optimizer", "a run config")? {
            "gd" | "sgd" => OptimizerSpec::Gd,
            "hb" => OptimizerSpec::Hb { beta },
            "ashb" => OptimizerSpec::Ashb { delta },
            "pgd" => OptimizerSpec::Pgd,
            "apgd" => OptimizerSpec::Apgd,
            "phb" => OptimizerSpec::Phb { beta },
            "pahb" => OptimizerSpec::Pahb { delta },
            "adam" => OptimizerSpec::AdamFamily {
                alpha: alpha.unwrap_or(AlphaSchedule::Constant(0.999)),
                beta: BetaSource::Constant(beta),
                weight_decay: 0.0,
            },
            "adamw" => OptimizerSpec::AdamFamily {
                alpha: alpha.unwrap_or(AlphaSchedule::Constant(0.999)),
                beta: BetaSource::Constant(beta),
                weight_decay,
            },
            "ada" => OptimizerSpec::AdamFamily {
                alpha: alpha.unwrap_or(AlphaSchedule::Harmonic),
                beta: BetaSource::Constant(0.0),
                weight_decay: 0.0,
            },
            "ada2m" => OptimizerSpec::AdamFamily {
                alpha: alpha.unwrap_or(AlphaSchedule::Harmonic),
                beta: adaptive()?,
                weight_decay: 0.0,
            },
            "ada2mw" => OptimizerSpec::AdamFamily {
                alpha: alpha.unwrap_or(AlphaSchedule::Harmonic),
                beta: adaptive()?,
                weight_decay,
            },
            other => return Err(format!("unknown optimizer '{other}'")),
        };

        let gamma: f64 = self.parsed("gamma")?.unwrap_or(0.1);
        let schedule = match self.get("schedule").unwrap_or("constant") {
            "constant" => StepSchedule::constant(gamma),
            "step-decay" => StepSchedule::step_decay(
                gamma,
                self.parsed("decay_every")?.unwrap_or(1000),
                self.parsed("decay_factor")?.unwrap_or(0.1),
            ),
            "inverse-sqrt" => StepSchedule::inverse_sqrt(gamma),
            other => return Err(format!("unknown schedule '{other}'")),
        }
        .map_err(|e| e.to_string())?;

        let batch_size = match self.get("batch") {
            None | Some("full") => None,
            Some(v) => Some(
                v.parse::<usize>()
                    .map_err(|e| format!("bad value for batch: {e}"))?,
            ),
        };

        let init = match self.get("init").unwrap_or("zero") {
            "zero" => InitSpec::Zero,
            "random" => InitSpec::RandomNormal {
                scale: self.parsed("init_scale")?.unwrap_or(1.0),
            },
            other => return Err(format!("unknown init '{other}'")),
        };

        let reference = match self.get("reference").unwrap_or("auto") {
            "none" => ReferenceSpec::None,
            "auto" => match self.parsed("ref_budget")? {
                Some(budget) => ReferenceSpec::Auto {
                    composite_budget: budget,
                },
                None => ReferenceSpec::auto(),
            },
            other => return Err(format!("unknown reference '{other}'")),
        };

        let timing = match self.get("timing").unwrap_or("false") {
            "true" => true,
            "false" => false,
            other => return Err(format!("bad value for timing: '{other}'")),
        };

        let cfg = RunConfig {
            problem,
            regularizer,
            optimizer,
            schedule,
            iters: self.parsed("iters")?.unwrap_or(10_000),
            seed: self.parsed("seed")?.unwrap_or(42),
            batch_size,
            record_stride: self.parsed("stride")?,
            init,
            reference,
            timing,
        };
        cfg.validate().map_err(|e| e.to_string())?;
        Ok(cfg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_a_minimal_config() {
        let raw = RawConfig::parse(
            "# comment\nproblem = quadratic\noptimizer = hb\nbeta = 0.9\niters = 10\n",
        )
        .unwrap();
        let cfg = raw.build().unwrap();
        assert_eq!(cfg.iters, 10);
        assert!(matches!(cfg.optimizer, OptimizerSpec::Hb { beta } if beta == 0.9));
    }

    #[test]
    fn duplicate_keys_rejected() {
        let err = RawConfig::parse("seed = 1\nseed = 2\n").unwrap_err();
        assert!(err.contains("duplicate"), "{err}");
    }

    #[test]
    fn unknown_keys_rejected() {
        let err = RawConfig::parse("sneed = 1\n").unwrap_err();
        assert!(err.contains("unknown key"), "{err}");
    }

    #[test]
    fn l1_with_smooth_optimizer_fails_validation() {
        let raw = RawConfig::parse(
            "problem = logistic\nn = 8\nd = 3\noptimizer = ashb\nreg = l1\niters = 1\n",
        )
        .unwrap();
        assert!(raw.build().is_err());
    }

    #[test]
    fn adam_family_names_map() {
        for (name, wd_positive) in
            [("adam", false), ("adamw", true), ("ada", false), ("ada2m", false), ("ada2mw", true)]
        {
            let raw = RawConfig::parse(&format!(
                "problem = nonconvex\nd = 4\noptimizer = {name}\niters = 1\n"
            ))
            .unwrap();
            let cfg = raw.build().unwrap();
            let OptimizerSpec::AdamFamily { weight_decay, .. } = cfg.optimizer else {
                panic!("{name} should map to the adam family");
            };
            assert_eq!(weight_decay > 0.0, wd_positive, "{name}");
        }
    }
}
