//! Pairwise Markov random field over a latent status Z and indicators
//! X1..XD, with star edges (Z, Xi) for every indicator and chain edges
//! (Xi, Xi+1) for adjacent pairs.
//!
//! Factor potentials are estimated as joint relative frequencies from
//! training counts. Inference is exact: conditioned on Z the remaining
//! structure is a chain, so the posterior over Z is computed by eliminating
//! the indicators in order, once per Z state, accumulating in log-space.
//! Posterior classification compares against the threshold θ inclusively.

use std::fmt;

use crate::config::SimConfig;
use crate::error::{Error, Result};
use crate::synthgen::Dataset;

/// A node of the graph. Indicator indices are 0-based internally and
/// rendered 1-based (`X1..XD`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Var {
    Z,
    X(usize),
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Var::Z => write!(f, "Z"),
            Var::X(i) => write!(f, "X{}", i + 1),
        }
    }
}

/// A 2x2 nonnegative potential over an ordered pair of binary variables.
/// `values[a][b]` is the potential of (first = a, second = b).
#[derive(Debug, Clone, PartialEq)]
pub struct FactorTable {
    pub vars: (Var, Var),
    pub values: [[f64; 2]; 2],
}

impl FactorTable {
    pub fn new(vars: (Var, Var), values: [[f64; 2]; 2]) -> Result<FactorTable> {
        let flat = values.iter().flatten();
        for &v in flat.clone() {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::Config(format!(
                    "factor over ({}, {}) has invalid entry {v}",
                    vars.0, vars.1
                )));
            }
        }
        if flat.clone().all(|&v| v == 0.0) {
            return Err(Error::Config(format!(
                "factor over ({}, {}) is identically zero",
                vars.0, vars.1
            )));
        }
        Ok(FactorTable { vars, values })
    }

    /// Multiplies every entry by `c > 0`. Posterior queries are invariant to
    /// this (normalization over Z cancels per-factor scaling).
    pub fn scale(&mut self, c: f64) {
        assert!(c.is_finite() && c > 0.0, "scale factor must be positive");
        for row in &mut self.values {
            for v in row {
                *v *= c;
            }
        }
    }
}

/// Partial assignment of the indicators. Z is not observable by design:
/// evidence slots exist only for X1..XD.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Evidence {
    slots: Vec<Option<u8>>,
}

impl Evidence {
    /// No indicator observed.
    pub fn unobserved(d: usize) -> Evidence {
        Evidence {
            slots: vec![None; d],
        }
    }

    /// Every indicator observed, in order.
    pub fn from_full(x: &[u8]) -> Evidence {
        assert!(x.iter().all(|&v| v <= 1), "evidence values are binary");
        Evidence {
            slots: x.iter().map(|&v| Some(v)).collect(),
        }
    }

    /// Observes indicator `i` (0-based) at `value`.
    pub fn set(&mut self, i: usize, value: u8) {
        assert!(value <= 1, "evidence values are binary");
        self.slots[i] = Some(value);
    }

    pub fn get(&self, i: usize) -> Option<u8> {
        self.slots[i]
    }

    pub fn n_indicators(&self) -> usize {
        self.slots.len()
    }

    pub fn n_observed(&self) -> usize {
        self.slots.iter().filter(|s| s.is_some()).count()
    }
}

impl fmt::Display for Evidence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        let mut first = true;
        for (i, slot) in self.slots.iter().enumerate() {
            if let Some(v) = slot {
                if !first {
                    write!(f, ", ")?;
                }
                write!(f, "X{}={v}", i + 1)?;
                first = false;
            }
        }
        write!(f, "}}")
    }
}

/// A fitted model: D star factors over (Z, Xi) and D-1 chain factors over
/// (Xi, Xi+1). Immutable once fitted; safe to share across threads.
#[derive(Debug, Clone, PartialEq)]
pub struct MrfModel {
    pub d: usize,
    pub star_factors: Vec<FactorTable>,
    pub chain_factors: Vec<FactorTable>,
    pub trained_on: usize,
    pub epsilon_used: f64,
}

/// Estimates every potential as a joint relative frequency of the training
/// data, plus the additive smoothing constant:
///
/// ```text
/// star[i](z, x)  = #{Z = z, Xi = x} / n  + epsilon
/// chain[i](a, b) = #{Xi = a, Xi+1 = b} / n + epsilon
/// ```
pub fn fit(train: &Dataset, cfg: &SimConfig) -> Result<MrfModel> {
    if train.is_empty() {
        return Err(Error::EmptyTrainingSet);
    }
    let d = train.n_indicators();
    if d != cfg.n_indicators {
        return Err(Error::Config(format!(
            "training data has {d} indicators, config expects {}",
            cfg.n_indicators
        )));
    }
    let n = train.len() as f64;
    let eps = cfg.smoothing_epsilon;

    let mut star_counts = vec![[[0u64; 2]; 2]; d];
    let mut chain_counts = vec![[[0u64; 2]; 2]; d - 1];
    for record in &train.records {
        let z = record.z as usize;
        for i in 0..d {
            star_counts[i][z][record.x[i] as usize] += 1;
        }
        for i in 0..d - 1 {
            chain_counts[i][record.x[i] as usize][record.x[i + 1] as usize] += 1;
        }
    }

    let to_table = |counts: &[[u64; 2]; 2], vars: (Var, Var)| {
        let mut values = [[0.0f64; 2]; 2];
        for a in 0..2 {
            for b in 0..2 {
                values[a][b] = counts[a][b] as f64 / n + eps;
            }
        }
        FactorTable::new(vars, values)
    };

    let star_factors = (0..d)
        .map(|i| to_table(&star_counts[i], (Var::Z, Var::X(i))))
        .collect::<Result<Vec<_>>>()?;
    let chain_factors = (0..d - 1)
        .map(|i| to_table(&chain_counts[i], (Var::X(i), Var::X(i + 1))))
        .collect::<Result<Vec<_>>>()?;

    Ok(MrfModel {
        d,
        star_factors,
        chain_factors,
        trained_on: train.len(),
        epsilon_used: eps,
    })
}

impl MrfModel {
    /// Plain-text listing of every factor table with 6-decimal entries,
    /// star factors first, then chain factors. Rows are states of the first
    /// variable, columns states of the second.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        out.push_str("# rows: first variable (0, 1); columns: second variable (0, 1)\n");
        for (i, factor) in self.star_factors.iter().enumerate() {
            out.push_str(&format!(
                "star[{}] ({}, {})\n",
                i + 1,
                factor.vars.0,
                factor.vars.1
            ));
            for row in &factor.values {
                out.push_str(&format!("  {:.6} {:.6}\n", row[0], row[1]));
            }
        }
        for (i, factor) in self.chain_factors.iter().enumerate() {
            out.push_str(&format!(
                "chain[{}] ({}, {})\n",
                i + 1,
                factor.vars.0,
                factor.vars.1
            ));
            for row in &factor.values {
                out.push_str(&format!("  {:.6} {:.6}\n", row[0], row[1]));
            }
        }
        out
    }
}

fn log_add(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}

/// Log of the unnormalized mass of `Z = z` under the evidence: eliminates
/// the indicator chain left to right, clamping observed slots to their
/// values and summing the rest out.
fn log_mass(model: &MrfModel, evidence: &Evidence, z: usize) -> f64 {
    let allowed = |i: usize, state: usize| match evidence.get(i) {
        Some(v) => usize::from(v) == state,
        None => true,
    };

    let mut message = [f64::NEG_INFINITY; 2];
    for (state, slot) in message.iter_mut().enumerate() {
        if allowed(0, state) {
            *slot = model.star_factors[0].values[z][state].ln();
        }
    }
    for i in 1..model.d {
        let mut next = [f64::NEG_INFINITY; 2];
        for (state, slot) in next.iter_mut().enumerate() {
            if !allowed(i, state) {
                continue;
            }
            let mut acc = f64::NEG_INFINITY;
            for (prev, &incoming) in message.iter().enumerate() {
                let step = incoming + model.chain_factors[i - 1].values[prev][state].ln();
                acc = log_add(acc, step);
            }
            *slot = acc + model.star_factors[i].values[z][state].ln();
        }
        message = next;
    }
    log_add(message[0], message[1])
}

/// Exact posterior `P(Z = 1 | evidence)` under the factorized joint.
///
/// With full evidence this reduces to evaluating the two factor products at
/// Z=0 and Z=1 and normalizing; with partial evidence the unobserved
/// indicators are summed out exactly along the chain. Fails with
/// [`Error::UndefinedPosterior`] when both unnormalized masses are zero,
/// which can only happen when some factor cell is zero.
pub fn posterior_z(model: &MrfModel, evidence: &Evidence) -> Result<f64> {
    if evidence.n_indicators() != model.d {
        return Err(Error::Eval(format!(
            "evidence covers {} indicators, model has {}",
            evidence.n_indicators(),
            model.d
        )));
    }
    let m0 = log_mass(model, evidence, 0);
    let m1 = log_mass(model, evidence, 1);
    if m0 == f64::NEG_INFINITY && m1 == f64::NEG_INFINITY {
        return Err(Error::UndefinedPosterior {
            evidence: evidence.clone(),
        });
    }
    if m1 == f64::NEG_INFINITY {
        return Ok(0.0);
    }
    if m0 == f64::NEG_INFINITY {
        return Ok(1.0);
    }
    Ok(1.0 / (1.0 + (m0 - m1).exp()))
}

/// 1 iff `P(Z = 1 | x) >= cfg.posterior_threshold` (inclusive at θ).
pub fn classify_mrf(model: &MrfModel, x: &[u8], cfg: &SimConfig) -> Result<u8> {
    if x.len() != model.d {
        return Err(Error::Eval(format!(
            "indicator vector has length {}, model has {} indicators",
            x.len(),
            model.d
        )));
    }
    let posterior = posterior_z(model, &Evidence::from_full(x))?;
    Ok(u8::from(posterior >= cfg.posterior_threshold))
}
