//! Multi-seed experiment runs over paired environment streams.

use rayon::prelude::*;

use crate::algorithms::{Policy, PolicyKind};
use crate::environments::{BanditInstance, RegretTrace};
use crate::error::{Error, Result};
use crate::rng::{fill_standard_normal, stream, substream};

use super::config::ExperimentConfig;

/// Everything the environment produces for one seed, shared by all
/// policies so that comparisons are paired.
#[derive(Debug, Clone)]
pub struct EnvironmentStream {
    pub arm_sets: Vec<Vec<Vec<f64>>>,
    /// Standard-normal noise draw for each step, scaled by `noise_sd` at use.
    pub noise: Vec<f64>,
}

impl EnvironmentStream {
    pub fn generate(instance: &BanditInstance, horizon: usize, seed: u64) -> Self {
        let mut arm_rng = substream(seed, stream::ARMS);
        let arm_sets = (0..horizon).map(|_| instance.sample_arm_set(&mut arm_rng)).collect();
        let mut noise = vec![0.0; horizon];
        fill_standard_normal(&mut substream(seed, stream::NOISE), &mut noise);
        Self { arm_sets, noise }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunTrace {
    pub seed: u64,
    pub policy: String,
    pub trace: RegretTrace,
}

/// Runs one policy over a pre-generated stream.
pub fn run_policy(
    instance: &BanditInstance,
    env: &EnvironmentStream,
    mut policy: Policy,
    seed: u64,
    label: &str,
) -> Result<RegretTrace> {
    let mut rng = substream(seed, stream::POLICY);
    let mut trace = RegretTrace::with_capacity(env.arm_sets.len());
    let wrap = |step: usize, e: Error| Error::Run {
        seed,
        policy: label.to_string(),
        step,
        source: Box::new(e),
    };
    for (t, (arms, xi)) in env.arm_sets.iter().zip(&env.noise).enumerate() {
        let step = t + 1;
        let chosen = policy.select_arm(arms, &mut rng).map_err(|e| wrap(step, e))?;
        let arm = &arms[chosen];
        let reward = instance.mean_reward(arm) + instance.noise_sd * xi;
        policy.update(arm, reward).map_err(|e| wrap(step, e))?;
        trace.push(instance.step_regret(arms, chosen).map_err(|e| wrap(step, e))?);
    }
    Ok(trace)
}

/// Runs every policy on one seed, in configuration order.
pub fn run_seed(config: &ExperimentConfig, instance: &BanditInstance, seed: u64) -> Result<Vec<RunTrace>> {
    let env = EnvironmentStream::generate(instance, config.horizon, seed);
    let confidence = config.confidence(instance);
    config
        .policies
        .iter()
        .map(|spec| {
            let label = spec.label();
            let policy = Policy::new(config.policy_config(spec, confidence), config.dim).map_err(|e| Error::Run {
                seed,
                policy: label.clone(),
                step: 0,
                source: Box::new(e),
            })?;
            let trace = run_policy(instance, &env, policy, seed, &label)?;
            Ok(RunTrace {
                seed,
                policy: label,
                trace,
            })
        })
        .collect()
}

/// Mean and standard error of cumulative regret across runs.
#[derive(Debug, Clone, PartialEq)]
pub struct AggregateResult {
    pub policy: String,
    pub mean_cumulative: Vec<f64>,
    pub stderr_cumulative: Vec<f64>,
    pub per_run_final: Vec<f64>,
}

impl AggregateResult {
    pub fn from_traces(policy: &str, traces: &[&RegretTrace]) -> Self {
        let horizon = traces.iter().map(|t| t.len()).min().unwrap_or(0);
        let mut mean = Vec::with_capacity(horizon);
        let mut stderr = Vec::with_capacity(horizon);
        for t in 0..horizon {
            let (m, se) = mean_stderr(traces.iter().map(|tr| tr.cumulative[t]));
            mean.push(m);
            stderr.push(se);
        }
        Self {
            policy: policy.to_string(),
            mean_cumulative: mean,
            stderr_cumulative: stderr,
            per_run_final: traces.iter().map(|t| t.final_regret()).collect(),
        }
    }

    pub fn horizon(&self) -> usize {
        self.mean_cumulative.len()
    }

    pub fn mean_final(&self) -> f64 {
        self.mean_cumulative.last().copied().unwrap_or(0.0)
    }

    pub fn stderr_final(&self) -> f64 {
        self.stderr_cumulative.last().copied().unwrap_or(0.0)
    }

    /// Mean `R(t)` for a 1-based step count.
    pub fn mean_at(&self, t: usize) -> f64 {
        if t == 0 {
            0.0
        } else {
            self.mean_cumulative[t - 1]
        }
    }

    /// `(R(T)/T) / (R(T/4)/(T/4))` on the mean curve. Values well below 1
    /// indicate a flattening curve; a linear curve gives 1.
    pub fn sublinearity_ratio(&self) -> f64 {
        let t = self.horizon();
        let q = t / 4;
        if q == 0 {
            return f64::NAN;
        }
        let late = self.mean_at(t) / t as f64;
        let early = self.mean_at(q) / q as f64;
        late / early
    }
}

/// Sample mean and `sd/√n` (sample sd, zero for a single value).
pub fn mean_stderr(values: impl Iterator<Item = f64> + Clone) -> (f64, f64) {
    let n = values.clone().count();
    if n == 0 {
        return (f64::NAN, f64::NAN);
    }
    let mean = values.clone().sum::<f64>() / n as f64;
    if n == 1 {
        return (mean, 0.0);
    }
    let var = values.map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1) as f64;
    (mean, (var / n as f64).sqrt())
}

#[derive(Debug, Clone)]
pub struct ExperimentResult {
    pub config: ExperimentConfig,
    pub runs: Vec<RunTrace>,
    pub aggregates: Vec<AggregateResult>,
}

impl ExperimentResult {
    pub fn aggregate(&self, policy: &str) -> Option<&AggregateResult> {
        self.aggregates.iter().find(|a| a.policy == policy)
    }
}

/// Seeds `base_seed, base_seed + 1, …` in run order.
pub fn seeds(config: &ExperimentConfig) -> Vec<u64> {
    (0..config.n_runs as u64).map(|i| config.base_seed + i).collect()
}

/// Runs all seeds in parallel and aggregates per policy. Output order is
/// fixed by the seed list and the policy list, not by scheduling.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentResult> {
    config.validate_fields()?;
    let instance = config.instance()?;
    let per_seed: Vec<Vec<RunTrace>> = seeds(config)
        .into_par_iter()
        .map(|seed| run_seed(config, &instance, seed))
        .collect::<Result<_>>()?;
    let runs: Vec<RunTrace> = per_seed.into_iter().flatten().collect();
    let aggregates = config
        .labels()
        .iter()
        .map(|label| {
            let traces: Vec<&RegretTrace> = runs.iter().filter(|r| &r.policy == label).map(|r| &r.trace).collect();
            AggregateResult::from_traces(label, &traces)
        })
        .collect();
    Ok(ExperimentResult {
        config: config.clone(),
        runs,
        aggregates,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub gamma: f64,
    pub policy: String,
    pub mean_final: f64,
    pub stderr_final: f64,
}

/// Re-runs every LinBUCB policy of `config` once per `γ` in the grid, on
/// the same seeds. LinTS policies are dropped.
pub fn sensitivity_sweep(config: &ExperimentConfig, gamma_grid: &[f64]) -> Result<Vec<SweepRow>> {
    let bucb: Vec<_> = config
        .policies
        .iter()
        .filter(|p| p.kind == PolicyKind::LinBUCB)
        .cloned()
        .collect();
    if bucb.is_empty() {
        return Err(Error::Config("sweep needs at least one LinBUCB policy".into()));
    }
    if gamma_grid.is_empty() {
        return Err(Error::Config("gamma grid is empty".into()));
    }
    let mut rows = Vec::new();
    for &gamma in gamma_grid {
        let mut cfg = config.clone();
        cfg.policies = bucb
            .iter()
            .map(|p| {
                let mut p = p.clone();
                p.gamma = Some(gamma);
                p
            })
            .collect();
        let result = run_experiment(&cfg)?;
        for agg in &result.aggregates {
            rows.push(SweepRow {
                gamma,
                policy: agg.policy.clone(),
                mean_final: agg.mean_final(),
                stderr_final: agg.stderr_final(),
            });
        }
    }
    Ok(rows)
}
