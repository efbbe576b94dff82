//! Synthetic population generation: latent status, conditional indicators,
//! adjacent-indicator matching, and the train/test split.
//!
//! Generation consumes the run's random stream in a fixed order so that the
//! total number of draws is predictable: one Bernoulli for the latent status,
//! one per indicator, then one matching draw per adjacent pair — `2D` draws
//! per record. The split then consumes `n - 1` draws for its shuffle.

use std::fs;
use std::io::Write;
use std::path::Path;

use crate::config::SimConfig;
use crate::error::{Error, Result};
use crate::rng::RngStream;

/// One individual: latent status and the binary indicator vector (1 = deprived).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Record {
    pub z: u8,
    pub x: Vec<u8>,
}

/// Where a dataset came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    Generated { base_seed: u64, run_index: u64 },
    External,
}

/// An ordered collection of records sharing the same indicator count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dataset {
    pub records: Vec<Record>,
    pub provenance: Provenance,
}

impl Dataset {
    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Indicator count shared by all records (0 for an empty dataset).
    pub fn n_indicators(&self) -> usize {
        self.records.first().map_or(0, |r| r.x.len())
    }
}

/// Draws one record: z first, then x_1..x_D, each from an independent
/// Bernoulli conditioned on z. Consumes exactly `1 + D` uniforms.
pub fn sample_individual(rng: &mut RngStream, cfg: &SimConfig) -> Record {
    let z = u8::from(rng.bernoulli(cfg.p_poor));
    let p_dep = if z == 1 {
        cfg.p_dep_poor
    } else {
        cfg.p_dep_nonpoor
    };
    let x = (0..cfg.n_indicators)
        .map(|_| u8::from(rng.bernoulli(p_dep)))
        .collect();
    Record { z, x }
}

/// Forces adjacent indicators to match: for each pair `(i, i+1)` in ascending
/// order, with probability `match_prob` the right indicator is overwritten by
/// the left one. The copy is applied sequentially, so a forced value can
/// propagate down the chain. Consumes exactly `D - 1` uniforms regardless of
/// outcomes.
pub fn inject_correlation(x: &mut [u8], rng: &mut RngStream, cfg: &SimConfig) {
    for i in 0..x.len().saturating_sub(1) {
        if rng.bernoulli(cfg.match_prob) {
            x[i + 1] = x[i];
        }
    }
}

/// Generates a full population from the stream derived for
/// `(cfg.base_seed, run_index)`. Bit-identical across repeated calls.
pub fn generate_population(cfg: &SimConfig, run_index: u64) -> Dataset {
    let mut rng = RngStream::derive(cfg.base_seed, run_index);
    generate_population_with(cfg, run_index, &mut rng)
}

/// Like [`generate_population`] but advances a caller-owned stream, so the
/// split (and anything after it) can keep consuming the same run stream.
pub fn generate_population_with(
    cfg: &SimConfig,
    run_index: u64,
    rng: &mut RngStream,
) -> Dataset {
    debug_assert!(cfg.validate().is_ok());
    let mut records = Vec::with_capacity(cfg.n_individuals);
    for _ in 0..cfg.n_individuals {
        let mut record = sample_individual(rng, cfg);
        inject_correlation(&mut record.x, rng, cfg);
        records.push(record);
    }
    Dataset {
        records,
        provenance: Provenance::Generated {
            base_seed: cfg.base_seed,
            run_index,
        },
    }
}

/// Splits a dataset into train and test: a Fisher-Yates permutation driven by
/// `rng`, then the first `floor(train_frac * n)` records form the training
/// set and the remainder the test set. No record is duplicated or dropped.
pub fn split(data: &Dataset, rng: &mut RngStream, cfg: &SimConfig) -> (Dataset, Dataset) {
    assert!(!data.is_empty(), "cannot split an empty dataset");
    let n = data.len();
    let mut order: Vec<usize> = (0..n).collect();
    rng.shuffle(&mut order);
    let n_train = (cfg.train_frac * n as f64).floor() as usize;
    let train = order[..n_train]
        .iter()
        .map(|&i| data.records[i].clone())
        .collect();
    let test = order[n_train..]
        .iter()
        .map(|&i| data.records[i].clone())
        .collect();
    (
        Dataset {
            records: train,
            provenance: data.provenance,
        },
        Dataset {
            records: test,
            provenance: data.provenance,
        },
    )
}

/// Writes a population as CSV with header `id,Z,X1,...,XD` and 0/1 values;
/// ids are numbered from 1.
pub fn write_population_csv(data: &Dataset, path: &Path) -> Result<()> {
    let d = data.n_indicators();
    let mut out = String::new();
    out.push_str("id,Z");
    for i in 1..=d {
        out.push_str(&format!(",X{i}"));
    }
    out.push('\n');
    for (idx, record) in data.records.iter().enumerate() {
        out.push_str(&format!("{},{}", idx + 1, record.z));
        for &v in &record.x {
            out.push_str(&format!(",{v}"));
        }
        out.push('\n');
    }
    let mut file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    file.write_all(out.as_bytes()).map_err(|e| Error::io(path, e))
}

/// Reads a population CSV produced by [`write_population_csv`] (or any file
/// with the same schema). The indicator count is taken from the header.
pub fn read_population_csv(path: &Path) -> Result<Dataset> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut lines = text.lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or_else(|| Error::parse(path, 1, "empty file"))?;
    let cols: Vec<&str> = header.split(',').collect();
    if cols.len() < 4 || cols[0] != "id" || cols[1] != "Z" {
        return Err(Error::parse(path, 1, "expected header id,Z,X1,...,XD"));
    }
    let d = cols.len() - 2;
    for (i, col) in cols[2..].iter().enumerate() {
        if *col != format!("X{}", i + 1) {
            return Err(Error::parse(
                path,
                1,
                format!("expected column X{}, found {col}", i + 1),
            ));
        }
    }
    let mut records = Vec::new();
    for (lineno, line) in lines {
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != d + 2 {
            return Err(Error::parse(
                path,
                lineno + 1,
                format!("expected {} fields, found {}", d + 2, fields.len()),
            ));
        }
        let parse_bit = |s: &str, lineno: usize| -> Result<u8> {
            match s {
                "0" => Ok(0),
                "1" => Ok(1),
                other => Err(Error::parse(
                    path,
                    lineno + 1,
                    format!("expected 0 or 1, found {other:?}"),
                )),
            }
        };
        let z = parse_bit(fields[1], lineno)?;
        let x = fields[2..]
            .iter()
            .map(|f| parse_bit(f, lineno))
            .collect::<Result<Vec<u8>>>()?;
        records.push(Record { z, x });
    }
    Ok(Dataset {
        records,
        provenance: Provenance::External,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::RngStream;

    fn small_cfg() -> SimConfig {
        SimConfig {
            n_individuals: 1000,
            ..SimConfig::default()
        }
    }

    #[test]
    fn degenerate_probabilities_fix_every_bit() {
        let cfg = SimConfig {
            p_poor: 1.0,
            p_dep_poor: 1.0,
            ..SimConfig::default()
        };
        let mut rng = RngStream::derive(0, 0);
        let r = sample_individual(&mut rng, &cfg);
        assert_eq!(r.z, 1);
        assert!(r.x.iter().all(|&v| v == 1));

        let cfg = SimConfig {
            p_poor: 0.0,
            p_dep_nonpoor: 0.0,
            ..SimConfig::default()
        };
        let r = sample_individual(&mut rng, &cfg);
        assert_eq!(r.z, 0);
        assert!(r.x.iter().all(|&v| v == 0));
    }

    #[test]
    fn empirical_marginals_match_configured_probabilities() {
        // Law-of-large-numbers check on one 50,000-record population with
        // matching disabled, at generous multiples of the binomial SE.
        let cfg = SimConfig {
            match_prob: 0.0,
            ..SimConfig::default()
        };
        let data = generate_population(&cfg, 0);
        assert_eq!(data.len(), 50_000);

        let n_poor = data.records.iter().filter(|r| r.z == 1).count();
        let z_mean = n_poor as f64 / data.len() as f64;
        assert!(
            (z_mean - 0.3).abs() < 0.013,
            "poor fraction {z_mean} too far from 0.3"
        );

        for i in 0..cfg.n_indicators {
            for (z, expect) in [(1u8, cfg.p_dep_poor), (0u8, cfg.p_dep_nonpoor)] {
                let group: Vec<&Record> =
                    data.records.iter().filter(|r| r.z == z).collect();
                let dep =
                    group.iter().filter(|r| r.x[i] == 1).count() as f64 / group.len() as f64;
                let se = (expect * (1.0 - expect) / group.len() as f64).sqrt();
                assert!(
                    (dep - expect).abs() < 3.0 * se.max(0.005),
                    "P(x{i}=1 | z={z}) = {dep}, expected {expect} +- {:.4}",
                    3.0 * se
                );
            }
        }
    }

    #[test]
    fn matching_zero_leaves_vector_unchanged() {
        let cfg = SimConfig {
            match_prob: 0.0,
            ..small_cfg()
        };
        let mut rng = RngStream::derive(0, 0);
        let mut x = vec![1, 0, 1, 0, 1, 0, 1, 0, 1, 0];
        let orig = x.clone();
        inject_correlation(&mut x, &mut rng, &cfg);
        assert_eq!(x, orig);
    }

    #[test]
    fn matching_one_propagates_first_indicator() {
        let cfg = SimConfig {
            match_prob: 1.0,
            ..small_cfg()
        };
        let mut rng = RngStream::derive(0, 0);
        let mut x = vec![1, 0, 1, 0, 1, 0, 1, 0, 1, 0];
        inject_correlation(&mut x, &mut rng, &cfg);
        assert_eq!(x, vec![1; 10]);

        let mut x = vec![0, 1, 1, 1, 1, 1, 1, 1, 1, 1];
        inject_correlation(&mut x, &mut rng, &cfg);
        assert_eq!(x, vec![0; 10]);
    }

    fn pearson(pairs: &[(f64, f64)]) -> f64 {
        let n = pairs.len() as f64;
        let mx = pairs.iter().map(|p| p.0).sum::<f64>() / n;
        let my = pairs.iter().map(|p| p.1).sum::<f64>() / n;
        let mut cov = 0.0;
        let mut vx = 0.0;
        let mut vy = 0.0;
        for (a, b) in pairs {
            cov += (a - mx) * (b - my);
            vx += (a - mx) * (a - mx);
            vy += (b - my) * (b - my);
        }
        cov / (vx.sqrt() * vy.sqrt())
    }

    fn mean_adjacent_correlation(data: &Dataset) -> f64 {
        let d = data.n_indicators();
        let mut total = 0.0;
        for i in 0..d - 1 {
            let pairs: Vec<(f64, f64)> = data
                .records
                .iter()
                .map(|r| (r.x[i] as f64, r.x[i + 1] as f64))
                .collect();
            total += pearson(&pairs);
        }
        total / (d - 1) as f64
    }

    #[test]
    fn adjacent_pairs_correlate_more_than_skip_pairs() {
        let cfg = SimConfig::default();
        let data = generate_population(&cfg, 0);
        let d = cfg.n_indicators;

        let adjacent = mean_adjacent_correlation(&data);
        let mut skip = 0.0;
        for i in 0..d - 2 {
            let pairs: Vec<(f64, f64)> = data
                .records
                .iter()
                .map(|r| (r.x[i] as f64, r.x[i + 2] as f64))
                .collect();
            skip += pearson(&pairs);
        }
        skip /= (d - 2) as f64;
        assert!(
            adjacent > skip,
            "adjacent correlation {adjacent} should exceed skip-pair correlation {skip}"
        );
    }

    #[test]
    fn correlation_grows_with_match_probability() {
        let base = SimConfig {
            n_individuals: 20_000,
            ..SimConfig::default()
        };
        let mut last = -1.0;
        for match_prob in [0.0, 0.25, 0.5] {
            let cfg = SimConfig { match_prob, ..base.clone() };
            let corr = mean_adjacent_correlation(&generate_population(&cfg, 3));
            assert!(
                corr >= last,
                "mean adjacent correlation decreased from {last} to {corr} at match_prob={match_prob}"
            );
            last = corr;
        }
    }

    #[test]
    fn generation_is_bit_identical_and_sized() {
        let cfg = small_cfg();
        let a = generate_population(&cfg, 7);
        let b = generate_population(&cfg, 7);
        assert_eq!(a, b);
        assert_eq!(a.len(), cfg.n_individuals);

        let one = SimConfig {
            n_individuals: 1,
            ..SimConfig::default()
        };
        assert_eq!(generate_population(&one, 0).len(), 1);
    }

    #[test]
    fn generation_consumes_exactly_two_d_draws_per_record() {
        let cfg = small_cfg();
        let mut rng = RngStream::derive(cfg.base_seed, 2);
        let _ = generate_population_with(&cfg, 2, &mut rng);

        let mut audit = RngStream::derive(cfg.base_seed, 2);
        audit.skip((cfg.n_individuals * 2 * cfg.n_indicators) as u64);
        assert_eq!(rng, audit, "generation must consume exactly 2*D draws per record");
    }

    #[test]
    fn split_partitions_the_dataset() {
        let cfg = small_cfg();
        let data = generate_population(&cfg, 0);
        let mut rng = RngStream::derive(99, 0);
        let (train, test) = split(&data, &mut rng, &cfg);
        assert_eq!(train.len(), 750);
        assert_eq!(test.len(), 250);
        assert_eq!(train.len() + test.len(), data.len());

        // Multiset identity: sort record encodings and compare.
        let encode = |r: &Record| {
            let mut v = vec![r.z];
            v.extend_from_slice(&r.x);
            v
        };
        let mut combined: Vec<Vec<u8>> = train
            .records
            .iter()
            .chain(test.records.iter())
            .map(encode)
            .collect();
        let mut original: Vec<Vec<u8>> = data.records.iter().map(encode).collect();
        combined.sort();
        original.sort();
        assert_eq!(combined, original);
    }

    #[test]
    fn split_of_four_records_is_three_one() {
        let cfg = SimConfig {
            n_individuals: 4,
            ..SimConfig::default()
        };
        let data = generate_population(&cfg, 0);
        let mut rng = RngStream::derive(0, 1);
        let (train, test) = split(&data, &mut rng, &cfg);
        assert_eq!(train.len(), 3);
        assert_eq!(test.len(), 1);
    }

    #[test]
    fn population_csv_round_trips() {
        let cfg = SimConfig {
            n_individuals: 57,
            ..SimConfig::default()
        };
        let data = generate_population(&cfg, 4);
        let dir = std::env::temp_dir().join("povsim_synthgen_csv_test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("pop.csv");
        write_population_csv(&data, &path).unwrap();
        let back = read_population_csv(&path).unwrap();
        assert_eq!(back.records, data.records);
        assert_eq!(back.provenance, Provenance::External);

        let text = std::fs::read_to_string(&path).unwrap();
        let first = text.lines().next().unwrap();
        assert_eq!(first, "id,Z,X1,X2,X3,X4,X5,X6,X7,X8,X9,X10");
    }

    #[test]
    fn population_csv_rejects_malformed_rows() {
        let dir = std::env::temp_dir().join("povsim_synthgen_bad_csv_test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("bad.csv");
        std::fs::write(&path, "id,Z,X1,X2\n1,0,1,2\n").unwrap();
        assert!(read_population_csv(&path).is_err());
        std::fs::write(&path, "id,z,X1,X2\n").unwrap();
        assert!(read_population_csv(&path).is_err());
    }
}
