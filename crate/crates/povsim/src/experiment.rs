//! Multi-seed experiment orchestration.
//!
//! Each run repeats the full pipeline — generate, split, fit, classify with
//! both methods, evaluate — on its own random stream derived from
//! `(base_seed, run_index)`. Runs execute on an unordered worker pool and are
//! gathered and sorted by run index, so the report is deterministic
//! regardless of scheduling.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::mpsc;
use std::thread;

use crate::af::classify_af;
use crate::config::SimConfig;
use crate::error::{Error, Result};
use crate::metrics::{agreement, confusion, disagreements, ConfusionMatrix, DisagreementRow};
use crate::mrf::{classify_mrf, fit};
use crate::rng::RngStream;
use crate::synthgen::{generate_population_with, split};

/// How many disagreement records the report keeps for inspection.
pub const DISAGREEMENT_SAMPLE_LIMIT: usize = 10;

type RunOutput = (RunResult, Vec<DisagreementRow>);

/// Per-run evaluation results.
#[derive(Debug, Clone, PartialEq)]
pub struct RunResult {
    /// Run index; doubles as the seed column of the results table.
    pub seed: u64,
    pub cm_mrf: ConfusionMatrix,
    pub cm_af: ConfusionMatrix,
    /// Fraction of test records receiving the same label from both methods.
    pub agreement: f64,
    /// Undefined posteriors observed in this run (fatal unless smoothed;
    /// zero in any successful report).
    pub undefined_posterior_count: usize,
    /// Disagreements where the counting method said poor and the field
    /// model said non-poor.
    pub disagree_af_only: usize,
    /// Disagreements with the opposite orientation.
    pub disagree_mrf_only: usize,
}

/// Cross-run aggregate with per-run detail.
#[derive(Debug, Clone, PartialEq)]
pub struct AggregateReport {
    pub runs: Vec<RunResult>,
    pub mean_acc_mrf: f64,
    pub mean_acc_af: f64,
    /// 95% confidence interval for the mean MRF accuracy (low, high).
    pub ci_mrf: (f64, f64),
    /// 95% confidence interval for the mean counting accuracy (low, high).
    pub ci_af: (f64, f64),
    /// Mean of the per-run agreement fractions.
    pub mean_agreement: f64,
    /// Agreement pooled over all test records of all runs.
    pub pooled_agreement: f64,
    pub total_undefined_posteriors: usize,
    /// First disagreements of run 0, in test-set order.
    pub disagreement_sample: Vec<DisagreementRow>,
}

/// Runs one seed end to end. Collects at most `disagreement_limit`
/// disagreement rows (pass 0 to skip collection).
pub fn run_one(cfg: &SimConfig, run_index: u64, disagreement_limit: usize) -> Result<RunOutput> {
    let mut rng = RngStream::derive(cfg.base_seed, run_index);
    let data = generate_population_with(cfg, run_index, &mut rng);
    let (train, test) = split(&data, &mut rng, cfg);
    let model = fit(&train, cfg)?;

    let mut pred_mrf = Vec::with_capacity(test.len());
    let mut pred_af = Vec::with_capacity(test.len());
    let mut truth = Vec::with_capacity(test.len());
    for record in &test.records {
        // An undefined posterior (a zero count the smoothing constant exists
        // to rule out) cannot be mapped to a label, so it fails the run.
        // With epsilon > 0 every factor cell is positive and the error is
        // unreachable, which keeps the per-run undefined count at zero in
        // any report this function contributes to.
        pred_mrf.push(classify_mrf(&model, &record.x, cfg)?);
        pred_af.push(classify_af(&record.x, cfg)?);
        truth.push(record.z);
    }

    let cm_mrf = confusion(&pred_mrf, &truth)?;
    let cm_af = confusion(&pred_af, &truth)?;
    let agree = agreement(&pred_mrf, &pred_af)?;
    let mut disagree_af_only = 0;
    let mut disagree_mrf_only = 0;
    for (&m, &a) in pred_mrf.iter().zip(&pred_af) {
        match (a, m) {
            (1, 0) => disagree_af_only += 1,
            (0, 1) => disagree_mrf_only += 1,
            _ => {}
        }
    }
    let sample = disagreements(&test, &pred_mrf, &pred_af, disagreement_limit)?;

    Ok((
        RunResult {
            seed: run_index,
            cm_mrf,
            cm_af,
            agreement: agree,
            undefined_posterior_count: 0,
            disagree_af_only,
            disagree_mrf_only,
        },
        sample,
    ))
}

/// Runs the full `cfg.n_runs`-seed experiment. Runs execute concurrently;
/// the report lists results in ascending run index. Any run failure aborts
/// the experiment with a diagnostic naming the run and how many others
/// completed.
pub fn run_experiment(cfg: &SimConfig) -> Result<AggregateReport> {
    cfg.validate()?;
    let n_runs = cfg.n_runs;
    let n_workers = thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1)
        .min(n_runs);

    let mut slots: Vec<Option<Result<RunOutput>>> = Vec::new();
    slots.resize_with(n_runs, || None);

    let next = AtomicUsize::new(0);
    let (tx, rx) = mpsc::channel();
    thread::scope(|scope| {
        for _ in 0..n_workers {
            let tx = tx.clone();
            let next = &next;
            scope.spawn(move || loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= n_runs {
                    break;
                }
                let limit = if i == 0 { DISAGREEMENT_SAMPLE_LIMIT } else { 0 };
                let out = run_one(cfg, i as u64, limit);
                if tx.send((i, out)).is_err() {
                    break;
                }
            });
        }
    });
    drop(tx);
    for (i, out) in rx {
        slots[i] = Some(out);
    }

    let mut runs = Vec::with_capacity(n_runs);
    let mut sample = Vec::new();
    for (i, slot) in slots.into_iter().enumerate() {
        match slot.expect("worker pool must fill every slot") {
            Ok((result, rows)) => {
                if i == 0 {
                    sample = rows;
                }
                runs.push(result);
            }
            Err(source) => {
                return Err(Error::Run {
                    run_index: i as u64,
                    completed: runs.len(),
                    source: Box::new(source),
                });
            }
        }
    }

    Ok(assemble_report(runs, sample))
}

fn assemble_report(runs: Vec<RunResult>, sample: Vec<DisagreementRow>) -> AggregateReport {
    let acc = |cm: &ConfusionMatrix| cm.accuracy().expect("test sets are nonempty");
    let accs_mrf: Vec<f64> = runs.iter().map(|r| acc(&r.cm_mrf)).collect();
    let accs_af: Vec<f64> = runs.iter().map(|r| acc(&r.cm_af)).collect();
    let summarize = |values: &[f64]| -> (f64, (f64, f64)) {
        if values.len() >= 2 {
            let (mean, lo, hi) = crate::metrics::mean_ci(values).expect("len checked");
            (mean, (lo, hi))
        } else {
            (values[0], (values[0], values[0]))
        }
    };
    let (mean_acc_mrf, ci_mrf) = summarize(&accs_mrf);
    let (mean_acc_af, ci_af) = summarize(&accs_af);
    let mean_agreement = runs.iter().map(|r| r.agreement).sum::<f64>() / runs.len() as f64;
    let total_tests: usize = runs.iter().map(|r| r.cm_mrf.total()).sum();
    let total_disagree: usize = runs
        .iter()
        .map(|r| r.disagree_af_only + r.disagree_mrf_only)
        .sum();
    let pooled_agreement = 1.0 - total_disagree as f64 / total_tests as f64;
    let total_undefined_posteriors = runs.iter().map(|r| r.undefined_posterior_count).sum();

    AggregateReport {
        runs,
        mean_acc_mrf,
        mean_acc_af,
        ci_mrf,
        ci_af,
        mean_agreement,
        pooled_agreement,
        total_undefined_posteriors,
        disagreement_sample: sample,
    }
}
