//! Classifier evaluation: confusion matrices, derived rates, cross-run
//! confidence intervals, inter-method agreement, and disagreement records.
//!
//! Rates with a zero denominator are undefined and surface as `None`; they
//! are rendered blank in outputs, never coerced to 0 or 1.

use crate::error::{Error, Result};
use crate::synthgen::Dataset;

/// Counts of a binary classification against ground truth.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ConfusionMatrix {
    pub tnc: usize,
    pub fpc: usize,
    pub fnc: usize,
    pub tpc: usize,
}

impl ConfusionMatrix {
    pub fn from_counts(tnc: usize, fpc: usize, fnc: usize, tpc: usize) -> ConfusionMatrix {
        ConfusionMatrix { tnc, fpc, fnc, tpc }
    }

    pub fn total(&self) -> usize {
        self.tnc + self.fpc + self.fnc + self.tpc
    }

    /// `(tn + tp) / total`, or `None` for an empty matrix.
    pub fn accuracy(&self) -> Option<f64> {
        match self.total() {
            0 => None,
            n => Some((self.tnc + self.tpc) as f64 / n as f64),
        }
    }

    /// Positive predictive value `tp / (tp + fp)`, undefined when the
    /// classifier made no positive calls.
    pub fn ppv(&self) -> Option<f64> {
        match self.tpc + self.fpc {
            0 => None,
            n => Some(self.tpc as f64 / n as f64),
        }
    }

    /// Negative predictive value `tn / (tn + fn)`, undefined when the
    /// classifier made no negative calls.
    pub fn npv(&self) -> Option<f64> {
        match self.tnc + self.fnc {
            0 => None,
            n => Some(self.tnc as f64 / n as f64),
        }
    }
}

/// Tallies predictions against ground truth (1 = positive class).
pub fn confusion(pred: &[u8], truth: &[u8]) -> Result<ConfusionMatrix> {
    if pred.len() != truth.len() {
        return Err(Error::Eval(format!(
            "prediction and truth lengths differ: {} vs {}",
            pred.len(),
            truth.len()
        )));
    }
    let mut cm = ConfusionMatrix::default();
    for (&p, &t) in pred.iter().zip(truth) {
        match (t, p) {
            (0, 0) => cm.tnc += 1,
            (0, _) => cm.fpc += 1,
            (_, 0) => cm.fnc += 1,
            _ => cm.tpc += 1,
        }
    }
    Ok(cm)
}

/// Mean with a 95% normal-approximation confidence interval:
/// `mean +- 1.96 * sd / sqrt(n)` with the sample (n-1) standard deviation.
/// Requires at least two values.
pub fn mean_ci(values: &[f64]) -> Result<(f64, f64, f64)> {
    if values.len() < 2 {
        return Err(Error::Eval(format!(
            "confidence interval needs at least 2 values, got {}",
            values.len()
        )));
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
    let half_width = 1.96 * (var.sqrt() / n.sqrt());
    Ok((mean, mean - half_width, mean + half_width))
}

/// Fraction of positions where the two prediction vectors agree.
pub fn agreement(pred_a: &[u8], pred_b: &[u8]) -> Result<f64> {
    if pred_a.len() != pred_b.len() {
        return Err(Error::Eval(format!(
            "prediction lengths differ: {} vs {}",
            pred_a.len(),
            pred_b.len()
        )));
    }
    if pred_a.is_empty() {
        return Err(Error::Eval("agreement of empty predictions".into()));
    }
    let same = pred_a.iter().zip(pred_b).filter(|(a, b)| a == b).count();
    Ok(same as f64 / pred_a.len() as f64)
}

/// One record on which the two classifiers disagreed, carrying ground truth
/// and the full indicator vector. `id` numbers the disagreements from 1 in
/// test-set order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DisagreementRow {
    pub id: usize,
    pub z: u8,
    pub x: Vec<u8>,
    pub mrf_pred: u8,
    pub af_pred: u8,
}

/// First `limit` records where the predictions differ, in test-set order.
pub fn disagreements(
    test: &Dataset,
    pred_mrf: &[u8],
    pred_af: &[u8],
    limit: usize,
) -> Result<Vec<DisagreementRow>> {
    if pred_mrf.len() != test.len() || pred_af.len() != test.len() {
        return Err(Error::Eval(format!(
            "predictions must align with the test set: {} records, {} mrf, {} af",
            test.len(),
            pred_mrf.len(),
            pred_af.len()
        )));
    }
    let mut rows = Vec::new();
    for (record, (&m, &a)) in test.records.iter().zip(pred_mrf.iter().zip(pred_af)) {
        if m != a {
            rows.push(DisagreementRow {
                id: rows.len() + 1,
                z: record.z,
                x: record.x.clone(),
                mrf_pred: m,
                af_pred: a,
            });
            if rows.len() == limit {
                break;
            }
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synthgen::{Provenance, Record};

    #[test]
    fn perfect_and_inverted_predictions() {
        let cm = confusion(&[1, 0, 1], &[1, 0, 1]).unwrap();
        assert_eq!(cm, ConfusionMatrix::from_counts(1, 0, 0, 2));

        let cm = confusion(&[0, 0], &[1, 1]).unwrap();
        assert_eq!(cm, ConfusionMatrix::from_counts(0, 0, 2, 0));

        assert!(confusion(&[0], &[0, 1]).is_err());
    }

    #[test]
    fn rates_from_reference_count_rows() {
        // Counts taken from published reference runs of the same pipeline.
        let cm = ConfusionMatrix::from_counts(8815, 0, 3044, 641);
        assert_eq!(cm.total(), 12_500);
        assert!((cm.accuracy().unwrap() - 0.75648).abs() < 1e-12);
        assert_eq!(cm.ppv().unwrap(), 1.0);
        assert!((cm.npv().unwrap() - 8815.0 / 11859.0).abs() < 1e-12);

        let cm = ConfusionMatrix::from_counts(7595, 1220, 76, 3609);
        assert!((cm.accuracy().unwrap() - 0.89632).abs() < 1e-12);
    }

    #[test]
    fn undefined_rates_are_none() {
        let cm = ConfusionMatrix::from_counts(5, 0, 3, 0);
        assert_eq!(cm.ppv(), None);
        assert!(cm.npv().is_some());

        let cm = ConfusionMatrix::from_counts(0, 2, 0, 3);
        assert_eq!(cm.npv(), None);

        assert_eq!(ConfusionMatrix::default().accuracy(), None);
    }

    #[test]
    fn mean_ci_zero_variance_collapses() {
        let (mean, lo, hi) = mean_ci(&[0.8, 0.8, 0.8, 0.8]).unwrap();
        assert_eq!((mean, lo, hi), (0.8, 0.8, 0.8));
        assert!(mean_ci(&[0.5]).is_err());
    }

    #[test]
    fn mean_ci_brackets_the_mean() {
        let values = [0.1, 0.2, 0.3, 0.4, 0.5];
        let (mean, lo, hi) = mean_ci(&values).unwrap();
        assert!((mean - 0.3).abs() < 1e-12);
        assert!(lo <= mean && mean <= hi);
        // sd = sqrt(0.025), half width = 1.96 * sd / sqrt(5)
        let half = 1.96 * (0.025f64).sqrt() / 5.0f64.sqrt();
        assert!((hi - mean - half).abs() < 1e-12);
    }

    #[test]
    fn agreement_bounds() {
        assert_eq!(agreement(&[1, 0, 1], &[1, 0, 1]).unwrap(), 1.0);
        assert_eq!(agreement(&[1, 0, 1], &[0, 1, 0]).unwrap(), 0.0);
        assert_eq!(agreement(&[1, 0, 1, 1], &[1, 1, 1, 0]).unwrap(), 0.5);
        assert!(agreement(&[], &[]).is_err());
        assert!(agreement(&[1], &[1, 0]).is_err());
    }

    fn toy_test_set() -> Dataset {
        let rec = |z: u8, first: u8| Record {
            z,
            x: vec![first, 1, 0],
        };
        Dataset {
            records: vec![rec(1, 0), rec(0, 1), rec(1, 1), rec(0, 0)],
            provenance: Provenance::External,
        }
    }

    #[test]
    fn disagreements_keep_test_order_and_limit() {
        let test = toy_test_set();
        let pred_mrf = [0, 0, 1, 0];
        let pred_af = [1, 1, 1, 0];
        let rows = disagreements(&test, &pred_mrf, &pred_af, 10).unwrap();
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[0].id, 1);
        assert_eq!(rows[0].z, 1);
        assert_eq!(rows[0].mrf_pred, 0);
        assert_eq!(rows[0].af_pred, 1);
        assert_eq!(rows[1].id, 2);

        let rows = disagreements(&test, &pred_mrf, &pred_af, 1).unwrap();
        assert_eq!(rows.len(), 1);

        let none = disagreements(&test, &pred_af, &pred_af, 10).unwrap();
        assert!(none.is_empty());
    }
}
