use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algorithms::{build_learner, run, LearnerContext};
use crate::error::{config, Result};
use crate::losses::{hindsight_optimum, hindsight_optimum_tolerant, AdversarySequence, CompositePart};
use crate::metrics::{applicable_bounds, check_bound, check_equivalence, diagnostics, slope_verdict, BoundVerdict, DiagnosticsReport, Trajectory};

use super::config::ExperimentConfig;

/// Caps the worker pool; unset or `0` uses one thread per core.
pub const THREADS_ENV: &str = "REGRETLAB_THREADS";

/// One run of one configuration at one horizon and seed.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub config_hash: String,
    pub learner: String,
    pub mode: String,
    #[serde(rename = "T")]
    pub horizon: usize,
    pub d: usize,
    pub seed: u64,
    pub regret: f64,
    pub forward_regret: f64,
    pub stability: f64,
    pub bounds: Vec<BoundVerdict>,
    pub wall_clock_s: f64,
}

impl ResultRow {
    pub fn passed(&self) -> bool {
        self.bounds.iter().all(|b| b.pass)
    }
}

pub struct RunOutcome {
    pub trajectory: Trajectory,
    pub report: DiagnosticsReport,
    pub verdicts: Vec<BoundVerdict>,
    pub wall_clock_s: f64,
}

/// Generates the adversary, solves for the hindsight optimum, runs the
/// learner and checks the requested bounds.
pub fn run_once(cfg: &ExperimentConfig, seed: u64, horizon: usize) -> Result<RunOutcome> {
    let start = Instant::now();
    let set = cfg.set.build(cfg.dim)?;
    let composite = CompositePart::new(cfg.composite, &set)?;
    let norm = cfg.regularizer.norm();
    let seq = AdversarySequence::generate(cfg.adversary, seed, horizon, &set, norm, composite)?;
    let hindsight = if cfg.strict {
        hindsight_optimum(&seq, &set)?
    } else {
        hindsight_optimum_tolerant(&seq.losses, &seq.composite, &set)?
    };
    let ctx = LearnerContext {
        set: &set,
        regularizer: cfg.regularizer,
        composite,
        horizon,
        lipschitz: seq.lipschitz,
        composite_lipschitz: seq.composite_lipschitz,
        strong_convexity: seq.strong_convexity,
        hindsight_regularizer: Some(cfg.regularizer.value(&hindsight.point)),
        mode: cfg.mode,
        strict: cfg.strict,
        validate: cfg.validate,
    };
    let (mut learner, info) = build_learner(&cfg.learner, &ctx)?;
    let trajectory = run(learner.as_mut(), Some(info.clone()), &seq, &set)?.with_hindsight(hindsight);
    let report = diagnostics(&trajectory)?;
    let mut verdicts: Vec<BoundVerdict> = check_equivalence(&report, trajectory.total_lipschitz()).into();
    let bounds = match &cfg.bounds {
        Some(b) => b.clone(),
        None => applicable_bounds(&info),
    };
    for b in bounds {
        verdicts.push(check_bound(&trajectory, b)?);
    }
    Ok(RunOutcome { trajectory, report, verdicts, wall_clock_s: start.elapsed().as_secs_f64() })
}

/// Worker pool honoring [`THREADS_ENV`].
pub fn thread_pool() -> Result<rayon::ThreadPool> {
    let threads = match std::env::var(THREADS_ENV) {
        Ok(v) => v.trim().parse::<usize>().map_err(|_| config(format!("{THREADS_ENV} must be a non-negative integer, got `{v}`")))?,
        Err(_) => 0,
    };
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| config(format!("cannot start worker pool: {e}")))
}

/// Rows for every horizon × seed, in config order, plus a slope row when
/// a growth-rate check is configured.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Vec<ResultRow>> {
    let hash = cfg.hash();
    let jobs: Vec<(usize, u64)> = cfg.horizons.iter().flat_map(|t| cfg.seeds.iter().map(move |s| (*t, *s))).collect();
    let pool = thread_pool()?;
    let outcomes: Vec<Result<(usize, u64, RunOutcome)>> =
        pool.install(|| jobs.par_iter().map(|(t, s)| run_once(cfg, *s, *t).map(|o| (*t, *s, o))).collect());
    let mut rows = Vec::with_capacity(outcomes.len() + 1);
    for o in outcomes {
        let (horizon, seed, out) = o?;
        rows.push(ResultRow {
            config_hash: hash.clone(),
            learner: out.trajectory.info.as_ref().map_or_else(|| out.trajectory.learner.clone(), |i| i.label()),
            mode: cfg.mode.name().into(),
            horizon,
            d: cfg.dim,
            seed,
            regret: out.report.regret,
            forward_regret: out.report.forward_regret,
            stability: out.report.stability,
            bounds: out.verdicts,
            wall_clock_s: out.wall_clock_s,
        });
    }
    if let Some(slope) = cfg.slope {
        rows.push(slope_row(cfg, &hash, &rows, slope.exponent)?);
    }
    Ok(rows)
}

/// Fits the growth rate of the seed-averaged regret over the horizons.
fn slope_row(cfg: &ExperimentConfig, hash: &str, rows: &[ResultRow], exponent: f64) -> Result<ResultRow> {
    let mean = |t: usize, f: fn(&ResultRow) -> f64| -> f64 {
        let v: Vec<f64> = rows.iter().filter(|r| r.horizon == t).map(f).collect();
        v.iter().sum::<f64>() / v.len() as f64
    };
    let regrets: Vec<f64> = cfg.horizons.iter().map(|t| mean(*t, |r| r.regret)).collect();
    let learner = rows.first().map(|r| r.learner.clone()).unwrap_or_default();
    let verdict = slope_verdict(format!("{learner}_regret_slope"), &cfg.horizons, &regrets, exponent)?;
    let last = *cfg.horizons.last().expect("validated non-empty");
    Ok(ResultRow {
        config_hash: hash.to_string(),
        learner,
        mode: cfg.mode.name().into(),
        horizon: last,
        d: cfg.dim,
        seed: cfg.seeds[0],
        regret: mean(last, |r| r.regret),
        forward_regret: mean(last, |r| r.forward_regret),
        stability: mean(last, |r| r.stability),
        bounds: vec![verdict],
        wall_clock_s: rows.iter().map(|r| r.wall_clock_s).sum(),
    })
}

/// Dyadic horizons `2^lo, …, 2^hi`.
pub fn dyadic(lo: u32, hi: u32) -> Vec<usize> {
    (lo..=hi).map(|k| 1usize << k).collect()
}
