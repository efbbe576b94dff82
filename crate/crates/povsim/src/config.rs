//! Simulation configuration.

use crate::error::{Error, Result};

/// Every generative, split, threshold and repetition parameter of the
/// simulation. The defaults reproduce the headline experiment: a population
/// of 50,000 with 10 indicators, 0.7/0.2 deprivation probabilities, a 10%
/// adjacent-match probability, a 4-of-10 counting threshold, a 0.5 posterior
/// threshold, and 50 repetitions.
#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    /// Number of individuals per generated population.
    pub n_individuals: usize,
    /// Number of binary indicators per individual (D).
    pub n_indicators: usize,
    /// Probability that an individual's latent status is poor.
    pub p_poor: f64,
    /// Per-indicator deprivation probability given poor.
    pub p_dep_poor: f64,
    /// Per-indicator deprivation probability given non-poor.
    pub p_dep_nonpoor: f64,
    /// Probability that indicator i+1 is forced to match indicator i.
    pub match_prob: f64,
    /// Fraction of each population assigned to the training split.
    pub train_frac: f64,
    /// Counting threshold k: at least k weighted deprivations means poor.
    pub af_threshold: usize,
    /// Indicator weights for the counting classifier (unit by default).
    pub af_weights: Vec<f64>,
    /// Posterior threshold θ: P(Z=1 | x) at least θ means poor.
    pub posterior_threshold: f64,
    /// Number of repetitions of the full generate/fit/evaluate pipeline.
    pub n_runs: usize,
    /// Seed shifting the whole family of per-run random streams.
    pub base_seed: u64,
    /// Additive smoothing added to every factor cell (0 disables smoothing).
    pub smoothing_epsilon: f64,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            n_individuals: 50_000,
            n_indicators: 10,
            p_poor: 0.3,
            p_dep_poor: 0.7,
            p_dep_nonpoor: 0.2,
            match_prob: 0.1,
            train_frac: 0.75,
            af_threshold: 4,
            af_weights: vec![1.0; 10],
            posterior_threshold: 0.5,
            n_runs: 50,
            base_seed: 0,
            smoothing_epsilon: 0.0,
        }
    }
}

fn is_probability(x: f64) -> bool {
    x.is_finite() && (0.0..=1.0).contains(&x)
}

impl SimConfig {
    /// Checks every field invariant; the library assumes a validated config.
    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::Config(msg));
        if self.n_individuals < 1 {
            return fail("n_individuals must be at least 1".into());
        }
        if self.n_indicators < 2 {
            return fail(format!(
                "n_indicators must be at least 2, got {}",
                self.n_indicators
            ));
        }
        if self.n_runs < 1 {
            return fail("n_runs must be at least 1".into());
        }
        for (name, value) in [
            ("p_poor", self.p_poor),
            ("p_dep_poor", self.p_dep_poor),
            ("p_dep_nonpoor", self.p_dep_nonpoor),
            ("match_prob", self.match_prob),
            ("posterior_threshold", self.posterior_threshold),
        ] {
            if !is_probability(value) {
                return fail(format!("{name} must lie in [0, 1], got {value}"));
            }
        }
        if !self.train_frac.is_finite() || self.train_frac <= 0.0 || self.train_frac >= 1.0 {
            return fail(format!(
                "train_frac must lie strictly between 0 and 1, got {}",
                self.train_frac
            ));
        }
        if self.af_threshold < 1 || self.af_threshold > self.n_indicators {
            return fail(format!(
                "af_threshold must lie in [1, {}], got {}",
                self.n_indicators, self.af_threshold
            ));
        }
        if self.af_weights.len() != self.n_indicators {
            return fail(format!(
                "af_weights has length {}, expected {}",
                self.af_weights.len(),
                self.n_indicators
            ));
        }
        if self.af_weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return fail("af_weights must all be finite and nonnegative".into());
        }
        if self.af_weights.iter().sum::<f64>() <= 0.0 {
            return fail("af_weights must have a positive sum".into());
        }
        if !self.smoothing_epsilon.is_finite() || self.smoothing_epsilon < 0.0 {
            return fail(format!(
                "smoothing_epsilon must be nonnegative, got {}",
                self.smoothing_epsilon
            ));
        }
        Ok(())
    }

    /// Size of the training split: `floor(train_frac * n_individuals)`.
    pub fn train_size(&self) -> usize {
        (self.train_frac * self.n_individuals as f64).floor() as usize
    }

    /// Size of the held-out test split.
    pub fn test_size(&self) -> usize {
        self.n_individuals - self.train_size()
    }
}

/// Unit weights for `d` indicators.
pub fn unit_weights(d: usize) -> Vec<f64> {
    vec![1.0; d]
}
