//! Command-line driver for the optimizer benchmarks.
//!
//! Exit codes: 0 success, 1 a verification check failed, 2 usage or config
//! error. Sweep commands fan runs out over worker threads; set
//! `ADMOM_WORKERS` to pin the count.

mod args;
mod commands;
mod config;

use args::Args;

/// Command failures, split by exit code.
#[derive(Debug)]
pub enum CliError {
    /// Usage, config or I/O problem (exit 2).
    Usage(String),
    /// A verification check did not hold (exit 1).
    Check(String),
    /// An experiment failed at runtime, e.g. a diverging iterate (exit 1).
    Run(String),
}

impl CliError {
    fn run(e: admom::Error) -> Self {
        match e {
            admom::Error::Config(msg) => CliError::Usage(msg),
            other => CliError::Run(other.to_string()),
        }
    }
}

const USAGE: &str = "\
admom — first-order optimizers with curvature-adaptive momentum

USAGE:
    admom <COMMAND> [FLAGS]

COMMANDS:
    verify-ratio   Heavy ball on the shifted quadratic; checks the curvature
                   ratio converges to sigma.
                   --sigma 1e-3  --d 500  --gamma 0.1  --beta 0.9
                   --iters 15000  --tol 0.01  --seed 42  --out ratio.csv
    quad-sweep     rho(T) over a beta grid plus empirical rates; checks the
                   minimum sits at beta* = (1 - sqrt(gamma*nu))^2.
                   --sigma 1e-3  --d 120  --gamma <1/L>  --grid 0,0.05,...
                   --iters 200000  --eps 1e-8  --out quad_sweep.csv
    logreg         The four-solver regularized logistic benchmark (l1 | l2).
                   --seed 42  --iters 10000  --out <dir>
                   --ref pgd|accel  --ref-budget 1000000
    run            One experiment from a config file, or a built-in preset.
                   --config FILE | --preset fig1|fig2-l1|fig2-l2|delta-sweep
                   overrides: --seed --iters --gamma --delta --batch --stride --out

CONFIG FILE:
    Flat `key = value` lines, `#` comments. Keys: problem, sigma, d, n, decay,
    signal, signal_scale, noise_components, noise_scale, reg, lambda,
    optimizer, gamma, beta, delta, alpha, weight_decay, schedule, decay_every,
    decay_factor, iters, seed, batch, stride, init, init_scale, reference,
    ref_budget, timing, out. Unknown or duplicate keys are rejected.

ENVIRONMENT:
    ADMOM_WORKERS  worker threads for sweep commands (default: all cores)
";

fn main() {
    let mut argv = std::env::args().skip(1);
    let command = match argv.next() {
        Some(c) => c,
        None => {
            eprint!("{USAGE}");
            std::process::exit(2);
        }
    };
    if command == "--help" || command == "-h" || command == "help" {
        print!("{USAGE}");
        return;
    }
    let args = match Args::parse(argv) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(2);
        }
    };
    let result = match command.as_str() {
        "verify-ratio" => commands::cmd_verify_ratio(&args),
        "quad-sweep" => commands::cmd_quad_sweep(&args),
        "logreg" => commands::cmd_logreg(&args),
        "run" => commands::cmd_run(&args),
        other => {
            eprintln!("error: unknown command '{other}'\n\n{USAGE}");
            std::process::exit(2);
        }
    };
    match result {
        Ok(()) => {}
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            std::process::exit(2);
        }
        Err(CliError::Check(msg)) => {
            eprintln!("check failed: {msg}");
            std::process::exit(1);
        }
        Err(CliError::Run(msg)) => {
            eprintln!("run failed: {msg}");
            std::process::exit(1);
        }
    }
}
