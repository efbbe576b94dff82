//! Command-line interface: `run`, `gen` and `classify` subcommands, with a
//! flat key=value config file sharing the flag vocabulary. Precedence is
//! defaults, then config file, then flags.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::af::classify_af;
use crate::config::{unit_weights, SimConfig};
use crate::metrics::{agreement, confusion};
use crate::mrf::{classify_mrf, fit};
use crate::report::{format_fraction5, run_and_write_all};
use crate::rng::RngStream;
use crate::synthgen::{generate_population, read_population_csv, split, write_population_csv};

const USAGE: &str = "\
povsim - deterministic lab comparing deprivation counting and a latent-field
classifier on synthetic populations

USAGE:
  povsim run [OPTIONS]        run the multi-seed experiment, write artifacts
  povsim gen [OPTIONS]        generate one synthetic population CSV
  povsim classify [OPTIONS]   split, fit and score a population CSV with both
                              methods on the held-out test records

CONFIG OPTIONS (all subcommands; a config file sets the same keys):
  --config FILE      flat key=value file (keys are the flag names without
                     dashes, e.g. `p-poor=0.3`); flags override the file
  --n N              population size per run            [default: 50000]
  --d D              indicator count                    [default: 10]
  --p-poor P         latent poor fraction               [default: 0.3]
  --p-dep-poor P     deprivation probability if poor    [default: 0.7]
  --p-dep-nonpoor P  deprivation probability otherwise  [default: 0.2]
  --match-prob P     adjacent-indicator match chance    [default: 0.1]
  --train-frac F     training fraction                  [default: 0.75]
  --k K              counting threshold                 [default: 4]
  --weights W1,..,WD comma-separated indicator weights  [default: all 1]
  --theta T          posterior threshold                [default: 0.5]
  --runs R           number of runs                     [default: 50]
  --seed S           base seed                          [default: 0]
  --epsilon E        additive factor smoothing          [default: 0]

RUN OPTIONS:
  --out DIR          output directory                   [default: out]
                     writes results.csv, disagreements.csv, ppv_npv.svg,
                     ppv_npv.csv and summary.txt

GEN OPTIONS:
  --run-index I      which run's population to dump     [default: 0]
  --out FILE         output CSV                         [default: population.csv]

CLASSIFY OPTIONS:
  --input FILE       population CSV with header id,Z,X1,...,XD (required)
  --run-index I      stream index for the train/test shuffle [default: 0]
  --out FILE         optional per-record predictions CSV for the test split

EXIT CODES:
  0 success, 1 runtime failure, 2 usage error
";

/// Raw option values before resolution, in application order.
#[derive(Debug, Default, Clone)]
struct RawOptions {
    n: Option<usize>,
    d: Option<usize>,
    p_poor: Option<f64>,
    p_dep_poor: Option<f64>,
    p_dep_nonpoor: Option<f64>,
    match_prob: Option<f64>,
    train_frac: Option<f64>,
    k: Option<usize>,
    weights: Option<Vec<f64>>,
    theta: Option<f64>,
    runs: Option<usize>,
    seed: Option<u64>,
    epsilon: Option<f64>,
    out: Option<PathBuf>,
    run_index: Option<u64>,
    input: Option<PathBuf>,
}

impl RawOptions {
    fn apply(&mut self, key: &str, value: &str) -> Result<(), String> {
        fn parsed<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, String> {
            value
                .parse()
                .map_err(|_| format!("invalid value for {key}: {value:?}"))
        }
        match key {
            "n" => self.n = Some(parsed(key, value)?),
            "d" => self.d = Some(parsed(key, value)?),
            "p-poor" => self.p_poor = Some(parsed(key, value)?),
            "p-dep-poor" => self.p_dep_poor = Some(parsed(key, value)?),
            "p-dep-nonpoor" => self.p_dep_nonpoor = Some(parsed(key, value)?),
            "match-prob" => self.match_prob = Some(parsed(key, value)?),
            "train-frac" => self.train_frac = Some(parsed(key, value)?),
            "k" => self.k = Some(parsed(key, value)?),
            "weights" => {
                let weights = value
                    .split(',')
                    .map(|w| parsed("weights", w.trim()))
                    .collect::<Result<Vec<f64>, String>>()?;
                self.weights = Some(weights);
            }
            "theta" => self.theta = Some(parsed(key, value)?),
            "runs" => self.runs = Some(parsed(key, value)?),
            "seed" => self.seed = Some(parsed(key, value)?),
            "epsilon" => self.epsilon = Some(parsed(key, value)?),
            "out" => self.out = Some(PathBuf::from(value)),
            "run-index" => self.run_index = Some(parsed(key, value)?),
            "input" => self.input = Some(PathBuf::from(value)),
            other => return Err(format!("unknown option: {other}")),
        }
        Ok(())
    }

    /// Builds the simulation config. Indicator count and weights resolve
    /// against each other: whichever was given pins the other's default.
    fn resolve(&self) -> Result<SimConfig, String> {
        let defaults = SimConfig::default();
        let d = self
            .d
            .or_else(|| self.weights.as_ref().map(|w| w.len()))
            .unwrap_or(defaults.n_indicators);
        let weights = self.weights.clone().unwrap_or_else(|| unit_weights(d));
        let cfg = SimConfig {
            n_individuals: self.n.unwrap_or(defaults.n_individuals),
            n_indicators: d,
            p_poor: self.p_poor.unwrap_or(defaults.p_poor),
            p_dep_poor: self.p_dep_poor.unwrap_or(defaults.p_dep_poor),
            p_dep_nonpoor: self.p_dep_nonpoor.unwrap_or(defaults.p_dep_nonpoor),
            match_prob: self.match_prob.unwrap_or(defaults.match_prob),
            train_frac: self.train_frac.unwrap_or(defaults.train_frac),
            af_threshold: self.k.unwrap_or(defaults.af_threshold),
            af_weights: weights,
            posterior_threshold: self.theta.unwrap_or(defaults.posterior_threshold),
            n_runs: self.runs.unwrap_or(defaults.n_runs),
            base_seed: self.seed.unwrap_or(defaults.base_seed),
            smoothing_epsilon: self.epsilon.unwrap_or(defaults.smoothing_epsilon),
        };
        cfg.validate().map_err(|e| e.to_string())?;
        Ok(cfg)
    }
}

/// Parses a flat key=value config file. Blank lines and `#` comments are
/// allowed; keys are the flag names without leading dashes.
fn apply_config_file(path: &Path, raw: &mut RawOptions) -> Result<(), String> {
    let text =
        fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(format!(
                "{}:{}: expected key=value, found {line:?}",
                path.display(),
                lineno + 1
            ));
        };
        raw.apply(key.trim(), value.trim())
            .map_err(|e| format!("{}:{}: {e}", path.display(), lineno + 1))?;
    }
    Ok(())
}

/// Splits CLI words into (key, value) pairs, accepting both `--key value`
/// and `--key=value`. Returns the pairs in order.
fn flag_pairs(args: &[String]) -> Result<Vec<(String, String)>, String> {
    let mut pairs = Vec::new();
    let mut iter = args.iter();
    while let Some(arg) = iter.next() {
        let Some(stripped) = arg.strip_prefix("--") else {
            return Err(format!("unexpected argument: {arg}"));
        };
        if let Some((key, value)) = stripped.split_once('=') {
            pairs.push((key.to_string(), value.to_string()));
        } else {
            let value = iter
                .next()
                .ok_or_else(|| format!("missing value for --{stripped}"))?;
            pairs.push((stripped.to_string(), value.clone()));
        }
    }
    Ok(pairs)
}

fn parse_options(args: &[String]) -> Result<RawOptions, String> {
    let pairs = flag_pairs(args)?;
    let mut raw = RawOptions::default();
    // The config file applies first so that every explicit flag wins,
    // regardless of its position relative to --config.
    for (key, value) in &pairs {
        if key == "config" {
            apply_config_file(Path::new(value), &mut raw)?;
        }
    }
    for (key, value) in &pairs {
        if key != "config" {
            raw.apply(key, value)?;
        }
    }
    Ok(raw)
}

fn usage_error(message: &str) -> i32 {
    eprintln!("povsim: {message} (run `povsim --help` for usage)");
    2
}

fn runtime_error(message: impl std::fmt::Display) -> i32 {
    eprintln!("povsim: {message}");
    1
}

/// Entry point behind the binary; returns the process exit code.
pub fn cli_main(args: &[String]) -> i32 {
    if args.is_empty() {
        return usage_error("missing subcommand (run | gen | classify)");
    }
    if args[0] == "--help" || args[0] == "-h" || args[0] == "help" {
        print!("{USAGE}");
        return 0;
    }
    let sub = args[0].as_str();
    let rest = &args[1..];
    if rest.iter().any(|a| a == "--help" || a == "-h") {
        print!("{USAGE}");
        return 0;
    }
    let raw = match parse_options(rest) {
        Ok(raw) => raw,
        Err(message) => return usage_error(&message),
    };
    match sub {
        "run" => cmd_run(&raw),
        "gen" => cmd_gen(&raw),
        "classify" => cmd_classify(&raw),
        other => usage_error(&format!("unknown subcommand: {other}")),
    }
}

fn cmd_run(raw: &RawOptions) -> i32 {
    if raw.input.is_some() || raw.run_index.is_some() {
        return usage_error("--input and --run-index do not apply to `run`");
    }
    let cfg = match raw.resolve() {
        Ok(cfg) => cfg,
        Err(message) => return usage_error(&message),
    };
    let out_dir = raw.out.clone().unwrap_or_else(|| PathBuf::from("out"));
    match run_and_write_all(&cfg, &out_dir) {
        Ok((report, output)) => {
            println!(
                "completed {} run(s): mean acc mrf {} | mean acc af {} | agreement {}",
                report.runs.len(),
                format_fraction5(report.mean_acc_mrf),
                format_fraction5(report.mean_acc_af),
                format_fraction5(report.pooled_agreement),
            );
            println!("results:       {}", output.results_csv_path.display());
            println!("disagreements: {}", output.disagreements_csv_path.display());
            println!("figure:        {}", output.figure_path.display());
            println!("figure data:   {}", output.figure_data_path.display());
            println!("summary:       {}", output.summary_path.display());
            0
        }
        Err(err) => runtime_error(err),
    }
}

fn cmd_gen(raw: &RawOptions) -> i32 {
    if raw.input.is_some() {
        return usage_error("--input does not apply to `gen`");
    }
    let cfg = match raw.resolve() {
        Ok(cfg) => cfg,
        Err(message) => return usage_error(&message),
    };
    let run_index = raw.run_index.unwrap_or(0);
    let path = raw
        .out
        .clone()
        .unwrap_or_else(|| PathBuf::from("population.csv"));
    let data = generate_population(&cfg, run_index);
    match write_population_csv(&data, &path) {
        Ok(()) => {
            println!("wrote {} records to {}", data.len(), path.display());
            0
        }
        Err(err) => runtime_error(err),
    }
}

fn cmd_classify(raw: &RawOptions) -> i32 {
    let Some(input) = raw.input.clone() else {
        return usage_error("classify requires --input FILE");
    };
    let data = match read_population_csv(&input) {
        Ok(data) => data,
        Err(err) => return runtime_error(err),
    };
    if data.is_empty() {
        return runtime_error(format!("{}: no records", input.display()));
    }
    let file_d = data.n_indicators();
    if let Some(d) = raw.d {
        if d != file_d {
            return usage_error(&format!(
                "--d {d} conflicts with {} indicators in {}",
                file_d,
                input.display()
            ));
        }
    }
    let mut adjusted = raw.clone();
    adjusted.d = Some(file_d);
    adjusted.n = Some(data.len());
    let cfg = match adjusted.resolve() {
        Ok(cfg) => cfg,
        Err(message) => return usage_error(&message),
    };

    let mut rng = RngStream::derive(cfg.base_seed, raw.run_index.unwrap_or(0));
    let (train, test) = split(&data, &mut rng, &cfg);
    let outcome = (|| -> crate::error::Result<String> {
        let model = fit(&train, &cfg)?;
        let mut pred_mrf = Vec::with_capacity(test.len());
        let mut pred_af = Vec::with_capacity(test.len());
        let mut truth = Vec::with_capacity(test.len());
        for record in &test.records {
            pred_mrf.push(classify_mrf(&model, &record.x, &cfg)?);
            pred_af.push(classify_af(&record.x, &cfg)?);
            truth.push(record.z);
        }
        let cm_mrf = confusion(&pred_mrf, &truth)?;
        let cm_af = confusion(&pred_af, &truth)?;
        let agree = agreement(&pred_mrf, &pred_af)?;

        if let Some(out) = &raw.out {
            let mut text = String::from("ID,Z");
            for i in 1..=file_d {
                let _ = write!(text, ",X{i}");
            }
            text.push_str(",mrf_pred,af_pred\n");
            for (idx, record) in test.records.iter().enumerate() {
                let _ = write!(text, "{},{}", idx + 1, record.z);
                for &v in &record.x {
                    let _ = write!(text, ",{v}");
                }
                let _ = writeln!(text, ",{},{}", pred_mrf[idx], pred_af[idx]);
            }
            fs::write(out, text).map_err(|e| crate::error::Error::io(out, e))?;
        }

        let line = |name: &str, cm: &crate::metrics::ConfusionMatrix| {
            format!(
                "{name}: acc={} tn={} fp={} fn={} tp={}",
                format_fraction5(cm.accuracy().expect("nonempty test set")),
                cm.tnc,
                cm.fpc,
                cm.fnc,
                cm.tpc
            )
        };
        Ok(format!(
            "records: {}  train: {}  test: {}\n{}\n{}\nagreement: {}",
            data.len(),
            train.len(),
            test.len(),
            line("mrf", &cm_mrf),
            line("af ", &cm_af),
            format_fraction5(agree)
        ))
    })();
    match outcome {
        Ok(text) => {
            println!("{text}");
            0
        }
        Err(err) => runtime_error(err),
    }
}
