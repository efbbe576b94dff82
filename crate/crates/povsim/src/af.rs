//! Deprivation-counting classifier: an individual is poor when the weighted
//! number of flagged indicators reaches the threshold k.

use crate::config::SimConfig;
use crate::error::{Error, Result};

/// Outcome of the counting rule for one indicator vector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AfDecision {
    pub weighted_count: f64,
    pub is_poor: u8,
}

/// Weighted deprivation count `sum_i weights[i] * x[i]`.
pub fn deprivation_count(x: &[u8], weights: &[f64]) -> Result<f64> {
    if x.len() != weights.len() {
        return Err(Error::Config(format!(
            "indicator vector has length {}, weights have length {}",
            x.len(),
            weights.len()
        )));
    }
    Ok(x.iter()
        .zip(weights)
        .map(|(&xi, &wi)| f64::from(xi) * wi)
        .sum())
}

/// Full decision: the weighted count and the inclusive threshold comparison
/// (`count >= k` means poor).
pub fn decide_af(x: &[u8], cfg: &SimConfig) -> Result<AfDecision> {
    let weighted_count = deprivation_count(x, &cfg.af_weights)?;
    Ok(AfDecision {
        weighted_count,
        is_poor: u8::from(weighted_count >= cfg.af_threshold as f64),
    })
}

/// 1 iff the weighted deprivation count reaches `cfg.af_threshold`.
pub fn classify_af(x: &[u8], cfg: &SimConfig) -> Result<u8> {
    Ok(decide_af(x, cfg)?.is_poor)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> SimConfig {
        SimConfig::default()
    }

    #[test]
    fn unit_weight_counts() {
        let w = vec![1.0; 10];
        assert_eq!(deprivation_count(&[0; 10], &w).unwrap(), 0.0);
        // Two deprivation patterns with known counts 4 and 8.
        assert_eq!(
            deprivation_count(&[1, 1, 0, 0, 0, 0, 1, 0, 1, 0], &w).unwrap(),
            4.0
        );
        assert_eq!(
            deprivation_count(&[1, 1, 1, 1, 1, 0, 1, 1, 1, 0], &w).unwrap(),
            8.0
        );
    }

    #[test]
    fn length_mismatch_is_a_config_error() {
        let err = deprivation_count(&[1, 0], &[1.0; 3]).unwrap_err();
        assert!(matches!(err, Error::Config(_)));
    }

    #[test]
    fn threshold_is_inclusive() {
        let cfg = cfg();
        assert_eq!(classify_af(&[1, 1, 0, 0, 0, 0, 1, 0, 1, 0], &cfg).unwrap(), 1);
        assert_eq!(classify_af(&[1, 1, 1, 0, 0, 0, 0, 0, 0, 0], &cfg).unwrap(), 0);
        assert_eq!(classify_af(&[1; 10], &cfg).unwrap(), 1);
    }

    #[test]
    fn weighted_threshold_uses_the_weighted_sum() {
        let mut cfg = cfg();
        cfg.af_weights = vec![2.0, 2.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0];
        // Two heavy indicators alone reach k=4.
        assert_eq!(classify_af(&[1, 1, 0, 0, 0, 0, 0, 0, 0, 0], &cfg).unwrap(), 1);
        assert_eq!(classify_af(&[0, 0, 1, 1, 1, 0, 0, 0, 0, 0], &cfg).unwrap(), 0);
    }

    #[test]
    fn flipping_an_indicator_on_never_unclassifies() {
        let cfg = cfg();
        let mut rng = crate::rng::RngStream::derive(17, 0);
        for _ in 0..200 {
            let x: Vec<u8> = (0..10).map(|_| u8::from(rng.bernoulli(0.4))).collect();
            let before = classify_af(&x, &cfg).unwrap();
            for i in 0..10 {
                if x[i] == 0 {
                    let mut flipped = x.clone();
                    flipped[i] = 1;
                    let after = classify_af(&flipped, &cfg).unwrap();
                    assert!(after >= before, "monotonicity violated at index {i}");
                }
            }
        }
    }
}
