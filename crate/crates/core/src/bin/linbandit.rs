use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

use linbandit::adversarial::{run_adversarial_episode, AdversarialConfig};
use linbandit::algorithms::PolicyKind;
use linbandit::harness::output::{emit_outputs, emit_sweep};
use linbandit::harness::run::{mean_stderr, run_experiment, sensitivity_sweep};
use linbandit::harness::suites::{bound_table, run_suite, BoundPreset, SuiteSizes, VerifySuite};
use linbandit::harness::ExperimentConfig;

#[derive(Parser)]
#[command(
    name = "linbandit",
    version,
    about = "LinTS and LinBUCB under exact and approximate inference"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum PolicyArg {
    Lints,
    Linbucb,
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Divergence,
    Concentration,
    QuantileShift,
}

#[derive(Subcommand)]
enum Command {
    /// Run every policy of a config over all seeds and write outputs.
    Run {
        config: PathBuf,
        /// Write into this directory instead of the configured one.
        #[arg(long)]
        output_dir: Option<PathBuf>,
    },
    /// Final-regret table of the LinBUCB policies across quantile levels.
    SweepGamma {
        config: PathBuf,
        /// Comma-separated levels; defaults to the config's gamma_grid.
        #[arg(long, value_delimiter = ',')]
        grid: Vec<f64>,
        #[arg(long)]
        output_dir: Option<PathBuf>,
    },
    /// Two-arm episodes against the divergence-budgeted adversary.
    Adversarial {
        #[arg(long, value_enum)]
        policy: PolicyArg,
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        epsilon: f64,
        #[arg(long)]
        horizon: usize,
        #[arg(long, default_value_t = 10)]
        runs: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Quantile level of LinBUCB and of its adversary.
        #[arg(long, default_value_t = 0.9)]
        gamma: f64,
        /// Fix the reweighting factor; 1 gives the unperturbed control.
        #[arg(long)]
        r: Option<f64>,
        /// Skip the per-step quadrature certificate.
        #[arg(long)]
        no_certify: bool,
    },
    /// Numeric verifiers with a pass/fail table.
    Verify {
        #[arg(long, value_enum)]
        suite: SuiteArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Smaller sample sizes.
        #[arg(long)]
        quick: bool,
    },
    /// Regret-bound values for a named parameter preset.
    Bounds {
        #[arg(long, default_value = "default")]
        preset: String,
    },
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn load(path: &Path, output_dir: Option<PathBuf>) -> linbandit::Result<ExperimentConfig> {
    let mut cfg = ExperimentConfig::load(path)?;
    if let Some(dir) = output_dir {
        cfg.output_dir = dir;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn run(cli: Cli) -> linbandit::Result<ExitCode> {
    match cli.command {
        Command::Run { config, output_dir } => {
            let cfg = load(&config, output_dir)?;
            let start = Instant::now();
            let result = run_experiment(&cfg)?;
            let files = emit_outputs(&cfg, &result.runs, &result.aggregates, &cfg.output_dir)?;
            println!("{:<24} {:>12} {:>10} {:>10}", "policy", "R(T)", "stderr", "ratio");
            for a in &result.aggregates {
                println!(
                    "{:<24} {:>12.3} {:>10.3} {:>10.3}",
                    a.policy,
                    a.mean_final(),
                    a.stderr_final(),
                    a.sublinearity_ratio()
                );
            }
            println!(
                "{:.1}s; wrote {}",
                start.elapsed().as_secs_f64(),
                files.traces.parent().unwrap().display()
            );
        }
        Command::SweepGamma {
            config,
            grid,
            output_dir,
        } => {
            let cfg = load(&config, output_dir)?;
            let grid = if grid.is_empty() { cfg.gamma_grid.clone() } else { grid };
            let rows = sensitivity_sweep(&cfg, &grid)?;
            println!("{:>8} {:<24} {:>12} {:>10}", "gamma", "policy", "R(T)", "stderr");
            for r in &rows {
                println!(
                    "{:>8} {:<24} {:>12.3} {:>10.3}",
                    r.gamma, r.policy, r.mean_final, r.stderr_final
                );
            }
            let path = emit_sweep(&rows, &cfg.output_dir)?;
            println!("wrote {}", path.display());
        }
        Command::Adversarial {
            policy,
            alpha,
            epsilon,
            horizon,
            runs,
            seed,
            gamma,
            r,
            no_certify,
        } => {
            let kind = match policy {
                PolicyArg::Lints => PolicyKind::LinTS,
                PolicyArg::Linbucb => PolicyKind::LinBUCB,
            };
            let mut cfg = AdversarialConfig::new(kind, alpha, epsilon, horizon);
            cfg.gamma = gamma;
            cfg.r = r;
            cfg.certify = !no_certify;
            let r = cfg.resolve_r()?;
            println!("r = {r:.6}; mu = {:?}", cfg.mu);
            let mut finals = Vec::new();
            let mut all_held = true;
            for s in seed..seed + runs as u64 {
                let ep = run_adversarial_episode(&cfg, s)?;
                let rt = ep.trace.final_regret();
                println!(
                    "seed {s:>4}: R(T) = {rt:>10.3}  max D = {:.6}  budget {}",
                    ep.max_divergence,
                    if ep.budget_held { "held" } else { "VIOLATED" }
                );
                all_held &= ep.budget_held;
                finals.push(rt);
            }
            let (m, se) = mean_stderr(finals.iter().copied());
            println!(
                "mean R(T) = {m:.3} (stderr {se:.3}); (1 - 1/r) T = {:.3}",
                (1.0 - 1.0 / r) * horizon as f64
            );
            if cfg.certify && !all_held {
                return Ok(ExitCode::FAILURE);
            }
        }
        Command::Verify { suite, seed, quick } => {
            let suite = match suite {
                SuiteArg::Divergence => VerifySuite::Divergence,
                SuiteArg::Concentration => VerifySuite::Concentration,
                SuiteArg::QuantileShift => VerifySuite::QuantileShift,
            };
            let sizes = if quick { SuiteSizes::QUICK } else { SuiteSizes::FULL };
            let report = run_suite(suite, sizes, seed)?;
            print!("{report}");
            if !report.passed() {
                return Ok(ExitCode::FAILURE);
            }
        }
        Command::Bounds { preset } => {
            print!("{}", bound_table(&BoundPreset::named(&preset)?)?);
        }
    }
    Ok(ExitCode::SUCCESS)
}
