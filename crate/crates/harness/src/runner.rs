//! Multi-trial experiment runner.
//!
//! Every trial draws its own dataset and search seed from nested
//! substreams of the master seed, so trials are independent, reruns are
//! bit-identical, and the worker-thread count cannot change any output
//! byte: rows are collected in job order and wall times default to zero
//! (opt in with `timing`, which sacrifices byte-identical reruns).

use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{Context, Result};
use rayon::prelude::*;

use seldonian_core::baselines::{least_squares, sample_mse, sclr};
use seldonian_core::regression::{
    ndlr, paired_error_diffs, paired_prediction_diffs, qndlr, quasi_seldonian_general,
    ConstraintSpec, RegressionOutcome,
};
use seldonian_core::rl::{quasi_seldonian_rl, unconstrained_rl, RLOutcome, RLProblem, ToyEnv};
use seldonian_core::rng::{substream_seed, Stream};
use seldonian_core::synthgen::{gen_illustrative, true_disc_stat, true_mse, IllustrativeParams};
use seldonian_core::{Dataset64, SearchConfig64};

use crate::config::{Algo, ExperimentConfig, ExperimentKind};
use crate::oracle::{self, CheckRow};

/// Default range scale for the Hoeffding trainer's bounds and barrier.
/// On the synthetic task the paired differences concentrate well inside
/// this; it is the documented "assumed range of Z" a user would supply.
pub const DEFAULT_NDLR_RANGE: f64 = 20.0;

const DATA_STREAM: u64 = 0x4441_5441; // "DATA"
const SEARCH_STREAM: u64 = 0x5352_4348; // "SRCH"
const EPISODE_STREAM: u64 = 0x4550_4953; // "EPIS"

/// One regression trial: the returned weights (or refusal) and the
/// oracle-graded true statistics of the returned weights.
#[derive(Clone, Debug, PartialEq)]
pub struct RegressionTrialRow {
    pub trial: usize,
    pub m: usize,
    /// Present in lambda sweeps.
    pub lambda: Option<f64>,
    pub algo: Algo,
    pub theta: Option<Vec<f64>>,
    pub true_d: Option<f64>,
    pub true_mse: Option<f64>,
    pub wall_ms: u64,
}

impl RegressionTrialRow {
    pub fn outcome(&self) -> &'static str {
        if self.theta.is_some() {
            "solution"
        } else {
            "nsf"
        }
    }

    /// True-statistic violation among returned solutions.
    pub fn violates(&self, eps: f64) -> bool {
        self.true_d.map_or(false, |d| d.abs() > eps)
    }
}

/// Per-(algorithm, grid point) aggregate over a sweep.
#[derive(Clone, Debug)]
pub struct RegressionSummaryRow {
    pub algo: Algo,
    pub m: usize,
    pub lambda: Option<f64>,
    pub trials: usize,
    pub solutions: usize,
    pub solution_rate: f64,
    /// |true d| > eps among returned; empty when nothing was returned.
    pub violation_rate: Option<f64>,
    pub mean_true_d: Option<f64>,
    pub mean_true_abs_d: Option<f64>,
    pub mean_true_mse: Option<f64>,
}

/// One RL trial row for one selector.
#[derive(Clone, Debug, PartialEq)]
pub struct RlTrialRow {
    pub trial: usize,
    pub m: usize,
    pub algo: &'static str,
    pub index: Option<usize>,
    pub true_r: Option<f64>,
    pub true_r1: Option<f64>,
    pub wall_ms: u64,
}

impl RlTrialRow {
    pub fn outcome(&self) -> &'static str {
        if self.index.is_some() {
            "solution"
        } else {
            "nsf"
        }
    }
}

#[derive(Clone, Debug)]
pub struct RlSummaryRow {
    pub algo: &'static str,
    pub m: usize,
    pub trials: usize,
    pub solutions: usize,
    pub solution_rate: f64,
    /// Fraction of trials that returned a candidate whose true constraint
    /// return is below the behavior distribution's (refusals never
    /// violate).
    pub violation_rate: f64,
    pub mean_true_r: Option<f64>,
    pub mean_true_r1: Option<f64>,
}

pub enum ExperimentReport {
    Regression {
        rows: Vec<RegressionTrialRow>,
        summary: Vec<RegressionSummaryRow>,
    },
    Rl {
        rows: Vec<RlTrialRow>,
        summary: Vec<RlSummaryRow>,
        /// True constraint return of the behavior distribution (the
        /// violation reference level).
        behavior_true_r1: f64,
    },
    Oracle {
        rows: Vec<CheckRow>,
        all_passed: bool,
    },
}

/// Companion path for the aggregate table: `x.csv` -> `x.summary.csv`.
pub fn summary_path(out: &Path) -> PathBuf {
    out.with_extension("summary.csv")
}

/// Runs the configured experiment, writing per-trial rows to `cfg.out`,
/// aggregates to [`summary_path`], and a summary line per grid point to
/// stdout. Output files are created before any computation starts.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    cfg.validate()?;
    let out = File::create(&cfg.out)
        .with_context(|| format!("cannot create output file {}", cfg.out.display()))?;
    let sum_path = summary_path(&cfg.out);
    let sum = File::create(&sum_path)
        .with_context(|| format!("cannot create summary file {}", sum_path.display()))?;
    match cfg.kind {
        ExperimentKind::RegressionSweep => {
            let jobs: Vec<(usize, usize, usize)> = cfg
                .m_values
                .iter()
                .enumerate()
                .flat_map(|(mi, &m)| (0..cfg.trials).map(move |t| (mi, m, t)))
                .collect();
            let rows = run_jobs(cfg.threads, &jobs, |&(mi, m, trial)| {
                regression_trial(cfg, cfg.algo, None, mi, m, trial)
            })?;
            let summary = summarize_regression(cfg, &rows);
            write_regression_rows(out, &rows, false)?;
            write_regression_summary(sum, &summary, false)?;
            print_regression_summary(&summary);
            Ok(ExperimentReport::Regression { rows, summary })
        }
        ExperimentKind::LambdaSweep => {
            let m = cfg.m_values[0];
            let jobs: Vec<(usize, f64, usize)> = cfg
                .lambdas
                .iter()
                .enumerate()
                .flat_map(|(li, &l)| (0..cfg.trials).map(move |t| (li, l, t)))
                .collect();
            // Seed block 0 for every lambda: each trial index reuses one
            // dataset across the whole grid, so the sweep contrasts are
            // paired comparisons instead of independent resamples.
            let rows = run_jobs(cfg.threads, &jobs, |&(li, lambda, trial)| {
                regression_trial(cfg, cfg.algo, Some((li, lambda)), 0, m, trial)
            })?;
            let summary = summarize_regression(cfg, &rows);
            write_regression_rows(out, &rows, true)?;
            write_regression_summary(sum, &summary, true)?;
            print_regression_summary(&summary);
            Ok(ExperimentReport::Regression { rows, summary })
        }
        ExperimentKind::RlSweep => {
            let env = ToyEnv::<f64>::standard();
            let problem = RLProblem::new(
                env.admissible.clone(),
                env.tiled_candidates(),
                vec![cfg.delta],
            )?;
            let truths: Vec<(f64, f64)> = problem
                .candidates()
                .iter()
                .map(|b| env.box_expected_returns(b))
                .collect();
            let behavior_true_r1 = env.box_expected_returns(problem.behavior()).1;
            let jobs: Vec<(usize, usize, usize)> = cfg
                .m_values
                .iter()
                .enumerate()
                .flat_map(|(mi, &m)| (0..cfg.trials).map(move |t| (mi, m, t)))
                .collect();
            let pairs = run_jobs(cfg.threads, &jobs, |&(mi, m, trial)| {
                rl_trial(cfg, &env, &problem, &truths, mi, m, trial)
            })?;
            let rows: Vec<RlTrialRow> = pairs.into_iter().flat_map(|(a, b)| [a, b]).collect();
            let summary = summarize_rl(cfg, &rows, behavior_true_r1);
            write_rl_rows(out, &rows)?;
            write_rl_summary(sum, &summary)?;
            print_rl_summary(&summary, behavior_true_r1);
            Ok(ExperimentReport::Rl {
                rows,
                summary,
                behavior_true_r1,
            })
        }
        ExperimentKind::OracleCheck => {
            let rows = oracle::oracle_check(cfg.seed);
            let all_passed = rows.iter().all(|r| r.passed);
            write_oracle_rows(out, &rows)?;
            // The summary table is the same report; keep the companion
            // file present and identical so tooling can rely on it.
            write_oracle_rows(sum, &rows)?;
            for r in &rows {
                println!(
                    "{} {}: measured {} vs bound {} ({})",
                    if r.passed { "[ok]  " } else { "[FAIL]" },
                    r.name,
                    r.measured,
                    r.bound,
                    r.detail
                );
            }
            Ok(ExperimentReport::Oracle { rows, all_passed })
        }
    }
}

/// Runs one algorithm once on a caller-supplied dataset (the `fit`
/// subcommand).
pub fn fit_once(data: &Dataset64, cfg: &ExperimentConfig) -> Result<RegressionOutcome<f64>> {
    let mut search = base_search(cfg.algo, cfg);
    search.seed = substream_seed(cfg.seed, SEARCH_STREAM);
    run_algo(cfg.algo, data, cfg, cfg.lambda, &search)
}

fn run_jobs<J, T>(
    threads: usize,
    jobs: &[J],
    f: impl Fn(&J) -> Result<T> + Send + Sync,
) -> Result<Vec<T>>
where
    J: Send + Sync,
    T: Send,
{
    if threads == 0 {
        jobs.iter().map(f).collect()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .context("cannot build the worker pool")?;
        pool.install(|| jobs.par_iter().map(|j| f(j)).collect())
    }
}

/// Per-algorithm search budgets. The Seldonian trainers spend most of
/// their time inside barrier plateaus, so the budgets are tuned for the
/// sweep sizes the acceptance experiments use; a config can override any
/// field.
fn base_search(algo: Algo, cfg: &ExperimentConfig) -> SearchConfig64 {
    let mut s = SearchConfig64::default();
    match algo {
        Algo::Ls => {}
        Algo::Sclr => {
            // A loose spread tolerance leaves a barrier residual of about
            // f_tolerance / lambda, which is what spreads the fitted
            // discrimination levels apart across a lambda sweep.
            s.max_evals = 400;
            s.f_tolerance = 0.3;
            s.restarts = 0;
        }
        Algo::Ndlr => {
            // The prediction bound concentrates onto the safety-test bound
            // as m grows, so a candidate pushed hard against the predicted
            // boundary passes the real test roughly half the time. Stopping
            // early keeps the candidate strictly inside the feasible band.
            s.max_evals = 500;
            s.f_tolerance = 1e-2;
            s.restarts = 1;
        }
        Algo::Qndlr | Algo::QndlrLambda | Algo::Alg11 => {
            s.max_evals = 500;
            s.f_tolerance = 1e-6;
            s.restarts = 1;
        }
    }
    cfg.search.apply(&mut s);
    s
}

/// The two-sided error-difference and prediction-difference constraints
/// for the general trainer, each two-sided constraint split over two
/// one-sided estimators at `delta / 2`.
pub fn error_and_prediction_constraints(delta: f64, eps: f64) -> Vec<ConstraintSpec<f64>> {
    let side = delta / 2.0;
    vec![
        ConstraintSpec::new("error-diff-upper", side, move |th: &[f64], dd: &Dataset64| {
            paired_error_diffs(th, dd).map(|z| z.into_iter().map(|v| v - eps).collect())
        }),
        ConstraintSpec::new("error-diff-lower", side, move |th: &[f64], dd: &Dataset64| {
            paired_error_diffs(th, dd).map(|z| z.into_iter().map(|v| -v - eps).collect())
        }),
        ConstraintSpec::new("pred-diff-upper", side, move |th: &[f64], dd: &Dataset64| {
            paired_prediction_diffs(th, dd).map(|z| z.into_iter().map(|v| v - eps).collect())
        }),
        ConstraintSpec::new("pred-diff-lower", side, move |th: &[f64], dd: &Dataset64| {
            paired_prediction_diffs(th, dd).map(|z| z.into_iter().map(|v| -v - eps).collect())
        }),
    ]
}

fn run_algo(
    algo: Algo,
    data: &Dataset64,
    cfg: &ExperimentConfig,
    lambda: f64,
    search: &SearchConfig64,
) -> Result<RegressionOutcome<f64>> {
    Ok(match algo {
        Algo::Ls => RegressionOutcome::Solution(least_squares(data)?.weights),
        Algo::Sclr => RegressionOutcome::Solution(sclr(data, lambda, search)?.weights),
        Algo::Ndlr => ndlr(
            data,
            cfg.delta,
            cfg.eps,
            cfg.b.unwrap_or(DEFAULT_NDLR_RANGE),
            search,
        )?,
        Algo::Qndlr => qndlr(data, cfg.delta, cfg.eps, 0.0, cfg.b, search)?,
        Algo::QndlrLambda => qndlr(data, cfg.delta, cfg.eps, lambda, cfg.b, search)?,
        Algo::Alg11 => quasi_seldonian_general(
            data,
            &error_and_prediction_constraints(cfg.delta, cfg.eps),
            |th, dd| -sample_mse(th, dd),
            search,
        )?,
    })
}

fn regression_trial(
    cfg: &ExperimentConfig,
    algo: Algo,
    lambda_point: Option<(usize, f64)>,
    sweep_idx: usize,
    m: usize,
    trial: usize,
) -> Result<RegressionTrialRow> {
    let label = ((sweep_idx as u64) << 32) | trial as u64;
    let trial_seed = substream_seed(cfg.seed, label);
    let data = gen_illustrative::<f64>(IllustrativeParams {
        m,
        seed: substream_seed(trial_seed, DATA_STREAM),
    });
    let mut search = base_search(algo, cfg);
    search.seed = substream_seed(trial_seed, SEARCH_STREAM);
    let lambda = lambda_point.map_or(cfg.lambda, |(_, l)| l);
    let started = cfg.timing.then(Instant::now);
    let outcome = run_algo(algo, &data, cfg, lambda, &search)?;
    let wall_ms = started.map_or(0, |t| t.elapsed().as_millis() as u64);
    let theta = outcome.weights().map(<[f64]>::to_vec);
    Ok(RegressionTrialRow {
        trial,
        m,
        lambda: lambda_point.map(|(_, l)| l),
        algo,
        true_d: theta.as_deref().map(true_disc_stat),
        true_mse: theta.as_deref().map(true_mse),
        theta,
        wall_ms,
    })
}

fn rl_trial(
    cfg: &ExperimentConfig,
    env: &ToyEnv<f64>,
    problem: &RLProblem<f64>,
    truths: &[(f64, f64)],
    sweep_idx: usize,
    m: usize,
    trial: usize,
) -> Result<(RlTrialRow, RlTrialRow)> {
    let label = ((sweep_idx as u64) << 32) | trial as u64;
    let trial_seed = substream_seed(cfg.seed, label);
    let mut stream = Stream::from_seed(substream_seed(trial_seed, EPISODE_STREAM));
    let episodes = env.episodes_from(problem.behavior(), m, &mut stream)?;
    let row = |algo: &'static str, outcome: RLOutcome, wall_ms: u64| {
        let index = outcome.index();
        RlTrialRow {
            trial,
            m,
            algo,
            index,
            true_r: index.map(|i| truths[i].0),
            true_r1: index.map(|i| truths[i].1),
            wall_ms,
        }
    };
    let started = cfg.timing.then(Instant::now);
    let constrained = quasi_seldonian_rl(&episodes, problem)?;
    let mid = started.map_or(0, |t| t.elapsed().as_millis() as u64);
    let unconstrained = unconstrained_rl(&episodes, problem)?;
    let end = started.map_or(0, |t| t.elapsed().as_millis() as u64);
    Ok((
        row("qsrl", constrained, mid),
        row("unconstrained", unconstrained, end.saturating_sub(mid)),
    ))
}

fn mean_of(values: impl Iterator<Item = f64>) -> Option<f64> {
    let mut sum = 0.0;
    let mut n = 0usize;
    for v in values {
        sum += v;
        n += 1;
    }
    (n > 0).then(|| sum / n as f64)
}

fn summarize_regression(
    cfg: &ExperimentConfig,
    rows: &[RegressionTrialRow],
) -> Vec<RegressionSummaryRow> {
    let groups: Vec<(usize, Option<f64>)> = match cfg.kind {
        ExperimentKind::LambdaSweep => cfg
            .lambdas
            .iter()
            .map(|&l| (cfg.m_values[0], Some(l)))
            .collect(),
        _ => cfg.m_values.iter().map(|&m| (m, None)).collect(),
    };
    groups
        .into_iter()
        .map(|(m, lambda)| {
            let in_group: Vec<&RegressionTrialRow> = rows
                .iter()
                .filter(|r| r.m == m && r.lambda == lambda)
                .collect();
            let trials = in_group.len();
            let solutions = in_group.iter().filter(|r| r.theta.is_some()).count();
            let violations = in_group.iter().filter(|r| r.violates(cfg.eps)).count();
            RegressionSummaryRow {
                algo: cfg.algo,
                m,
                lambda,
                trials,
                solutions,
                solution_rate: solutions as f64 / trials as f64,
                violation_rate: (solutions > 0).then(|| violations as f64 / solutions as f64),
                mean_true_d: mean_of(in_group.iter().filter_map(|r| r.true_d)),
                mean_true_abs_d: mean_of(in_group.iter().filter_map(|r| r.true_d.map(f64::abs))),
                mean_true_mse: mean_of(in_group.iter().filter_map(|r| r.true_mse)),
            }
        })
        .collect()
}

fn summarize_rl(
    cfg: &ExperimentConfig,
    rows: &[RlTrialRow],
    behavior_true_r1: f64,
) -> Vec<RlSummaryRow> {
    let mut out = Vec::new();
    for algo in ["qsrl", "unconstrained"] {
        for &m in &cfg.m_values {
            let in_group: Vec<&RlTrialRow> = rows
                .iter()
                .filter(|r| r.algo == algo && r.m == m)
                .collect();
            let trials = in_group.len();
            let solutions = in_group.iter().filter(|r| r.index.is_some()).count();
            let violations = in_group
                .iter()
                .filter(|r| r.true_r1.map_or(false, |v| v < behavior_true_r1))
                .count();
            out.push(RlSummaryRow {
                algo,
                m,
                trials,
                solutions,
                solution_rate: solutions as f64 / trials as f64,
                violation_rate: violations as f64 / trials as f64,
                mean_true_r: mean_of(in_group.iter().filter_map(|r| r.true_r)),
                mean_true_r1: mean_of(in_group.iter().filter_map(|r| r.true_r1)),
            });
        }
    }
    out
}

fn opt_str<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map_or_else(String::new, T::to_string)
}

fn write_regression_rows(
    file: File,
    rows: &[RegressionTrialRow],
    with_lambda: bool,
) -> Result<()> {
    let mut w = csv::Writer::from_writer(BufWriter::new(file));
    let mut header = vec!["trial", "m"];
    if with_lambda {
        header.push("lambda");
    }
    header.extend([
        "algo", "outcome", "theta1", "theta2", "true_d", "true_mse", "wall_ms",
    ]);
    w.write_record(&header)?;
    for r in rows {
        let mut record = vec![r.trial.to_string(), r.m.to_string()];
        if with_lambda {
            record.push(opt_str(&r.lambda));
        }
        record.push(r.algo.to_string());
        record.push(r.outcome().to_string());
        let (t1, t2) = match &r.theta {
            Some(t) => (t[0].to_string(), t[1].to_string()),
            None => (String::new(), String::new()),
        };
        record.push(t1);
        record.push(t2);
        record.push(opt_str(&r.true_d));
        record.push(opt_str(&r.true_mse));
        record.push(r.wall_ms.to_string());
        w.write_record(&record)?;
    }
    w.flush()?;
    Ok(())
}

fn write_regression_summary(
    file: File,
    summary: &[RegressionSummaryRow],
    with_lambda: bool,
) -> Result<()> {
    let mut w = csv::Writer::from_writer(BufWriter::new(file));
    let mut header = vec!["algo", "m"];
    if with_lambda {
        header.push("lambda");
    }
    header.extend([
        "trials",
        "solutions",
        "solution_rate",
        "violation_rate",
        "mean_true_d",
        "mean_true_abs_d",
        "mean_true_mse",
    ]);
    w.write_record(&header)?;
    for s in summary {
        let mut record = vec![s.algo.to_string(), s.m.to_string()];
        if with_lambda {
            record.push(opt_str(&s.lambda));
        }
        record.extend([
            s.trials.to_string(),
            s.solutions.to_string(),
            s.solution_rate.to_string(),
            opt_str(&s.violation_rate),
            opt_str(&s.mean_true_d),
            opt_str(&s.mean_true_abs_d),
            opt_str(&s.mean_true_mse),
        ]);
        w.write_record(&record)?;
    }
    w.flush()?;
    Ok(())
}

fn print_regression_summary(summary: &[RegressionSummaryRow]) {
    for s in summary {
        let grid = match s.lambda {
            Some(l) => format!("lambda={l} m={}", s.m),
            None => format!("m={}", s.m),
        };
        println!(
            "{} {}: trials={} solutions={} rate={:.4} violations={} mean_d={} mean_|d|={} mean_mse={}",
            s.algo,
            grid,
            s.trials,
            s.solutions,
            s.solution_rate,
            opt_fmt(s.violation_rate),
            opt_fmt(s.mean_true_d),
            opt_fmt(s.mean_true_abs_d),
            opt_fmt(s.mean_true_mse),
        );
    }
}

fn opt_fmt(v: Option<f64>) -> String {
    v.map_or_else(|| "-".to_string(), |x| format!("{x:.4}"))
}

fn write_rl_rows(file: File, rows: &[RlTrialRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(BufWriter::new(file));
    w.write_record([
        "trial", "m", "algo", "outcome", "index", "true_r", "true_r1", "wall_ms",
    ])?;
    for r in rows {
        w.write_record(&[
            r.trial.to_string(),
            r.m.to_string(),
            r.algo.to_string(),
            r.outcome().to_string(),
            opt_str(&r.index),
            opt_str(&r.true_r),
            opt_str(&r.true_r1),
            r.wall_ms.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

fn write_rl_summary(file: File, summary: &[RlSummaryRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(BufWriter::new(file));
    w.write_record([
        "algo",
        "m",
        "trials",
        "solutions",
        "solution_rate",
        "violation_rate",
        "mean_true_r",
        "mean_true_r1",
    ])?;
    for s in summary {
        w.write_record(&[
            s.algo.to_string(),
            s.m.to_string(),
            s.trials.to_string(),
            s.solutions.to_string(),
            s.solution_rate.to_string(),
            s.violation_rate.to_string(),
            opt_str(&s.mean_true_r),
            opt_str(&s.mean_true_r1),
        ])?;
    }
    w.flush()?;
    Ok(())
}

fn print_rl_summary(summary: &[RlSummaryRow], behavior_true_r1: f64) {
    println!("behavior true E[r1] = {behavior_true_r1}");
    for s in summary {
        println!(
            "{} m={}: trials={} solutions={} rate={:.4} violation_rate={:.4} mean_r={} mean_r1={}",
            s.algo,
            s.m,
            s.trials,
            s.solutions,
            s.solution_rate,
            s.violation_rate,
            opt_fmt(s.mean_true_r),
            opt_fmt(s.mean_true_r1),
        );
    }
}

fn write_oracle_rows(file: File, rows: &[CheckRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(BufWriter::new(file));
    w.write_record(["name", "passed", "measured", "bound", "detail"])?;
    for r in rows {
        w.write_record(&[
            r.name.to_string(),
            r.passed.to_string(),
            r.measured.to_string(),
            r.bound.to_string(),
            r.detail.clone(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::SearchOverrides;

    fn tiny_config(dir: &tempfile::TempDir, algo: Algo, seed: u64) -> ExperimentConfig {
        ExperimentConfig {
            algo,
            m_values: vec![40],
            trials: 4,
            seed,
            out: dir.path().join("rows.csv"),
            search: SearchOverrides {
                max_evals: Some(80),
                restarts: Some(0),
                ..SearchOverrides::default()
            },
            ..ExperimentConfig::default()
        }
    }

    fn read(path: &Path) -> Vec<u8> {
        std::fs::read(path).unwrap()
    }

    #[test]
    fn reruns_are_byte_identical_and_thread_count_does_not_matter() {
        let dir = tempfile::tempdir().unwrap();
        let mut cfg = tiny_config(&dir, Algo::Qndlr, 11);
        run_experiment(&cfg).unwrap();
        let rows1 = read(&cfg.out);
        let sum1 = read(&summary_path(&cfg.out));
        run_experiment(&cfg).unwrap();
        assert_eq!(read(&cfg.out), rows1);
        assert_eq!(read(&summary_path(&cfg.out)), sum1);
        cfg.threads = 3;
        run_experiment(&cfg).unwrap();
        assert_eq!(read(&cfg.out), rows1);
        assert_eq!(read(&summary_path(&cfg.out)), sum1);
    }

    #[test]
    fn ls_sweep_always_returns_solutions_with_true_stats() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = tiny_config(&dir, Algo::Ls, 3);
        let report = run_experiment(&cfg).unwrap();
        let ExperimentReport::Regression { rows, summary } = report else {
            panic!("wrong report kind");
        };
        assert_eq!(rows.len(), 4);
        assert!(rows.iter().all(|r| r.theta.is_some() && r.true_d.is_some()));
        assert_eq!(summary.len(), 1);
        assert_eq!(summary[0].solution_rate, 1.0);
        assert!(summary[0].violation_rate.is_some());
    }

    #[test]
    fn distinct_trials_see_distinct_data() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = tiny_config(&dir, Algo::Ls, 3);
        let ExperimentReport::Regression { rows, .. } = run_experiment(&cfg).unwrap() else {
            panic!("wrong report kind");
        };
        let thetas: Vec<_> = rows.iter().map(|r| r.theta.clone().unwrap()).collect();
        assert!(thetas.windows(2).all(|w| w[0] != w[1]));
    }

    #[test]
    fn unwritable_output_fails_before_computation() {
        let cfg = ExperimentConfig {
            out: PathBuf::from("/nonexistent-dir/rows.csv"),
            ..ExperimentConfig::default()
        };
        assert!(run_experiment(&cfg).is_err());
    }

    #[test]
    fn lambda_sweep_groups_by_lambda() {
        let dir = tempfile::tempdir().unwrap();
        let mut cfg = tiny_config(&dir, Algo::Sclr, 5);
        cfg.kind = ExperimentKind::LambdaSweep;
        cfg.lambdas = vec![0.5, 2.0];
        cfg.trials = 3;
        let ExperimentReport::Regression { rows, summary } = run_experiment(&cfg).unwrap() else {
            panic!("wrong report kind");
        };
        assert_eq!(rows.len(), 6);
        assert_eq!(summary.len(), 2);
        assert_eq!(summary[0].lambda, Some(0.5));
        assert_eq!(summary[1].lambda, Some(2.0));
        assert!(rows.iter().all(|r| r.lambda.is_some()));
    }

    #[test]
    fn rl_sweep_reports_both_selectors() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = ExperimentConfig {
            kind: ExperimentKind::RlSweep,
            m_values: vec![12],
            trials: 5,
            seed: 17,
            out: dir.path().join("rl.csv"),
            ..ExperimentConfig::rl_default()
        };
        let ExperimentReport::Rl { rows, summary, behavior_true_r1 } =
            run_experiment(&cfg).unwrap()
        else {
            panic!("wrong report kind");
        };
        assert_eq!(rows.len(), 10);
        assert!(behavior_true_r1 < 0.0);
        let unconstrained: Vec<_> = rows.iter().filter(|r| r.algo == "unconstrained").collect();
        assert!(unconstrained.iter().all(|r| r.index.is_some()));
        assert_eq!(summary.len(), 2);
    }
}
