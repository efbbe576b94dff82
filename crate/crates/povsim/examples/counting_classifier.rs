//! Classify individuals by counting deprivations against a threshold.
//!
//! ```bash
//! cargo run -p povsim --example counting_classifier
//! ```

use povsim::{decide_af, generate_population, SimConfig};

fn main() {
    let cfg = SimConfig::default();

    println!("threshold rule: poor iff at least {} of {} indicators flagged\n", cfg.af_threshold, cfg.n_indicators);
    let samples: [&[u8]; 4] = [
        &[0, 0, 0, 0, 0, 0, 0, 0, 0, 0],
        &[1, 1, 0, 0, 0, 0, 1, 0, 1, 0],
        &[1, 1, 1, 0, 0, 0, 0, 0, 0, 0],
        &[1, 1, 1, 1, 1, 1, 1, 1, 1, 1],
    ];
    for x in samples {
        let decision = decide_af(x, &cfg).unwrap();
        println!(
            "x = {:?} -> count {:>2}, poor: {}",
            x, decision.weighted_count, decision.is_poor
        );
    }

    // Sweep the threshold on one generated population to show the
    // coverage/selectivity trade-off of the counting rule.
    let cfg = SimConfig {
        n_individuals: 20_000,
        ..cfg
    };
    let data = generate_population(&cfg, 0);
    println!("\nthreshold sweep on {} generated records:", data.len());
    println!("{:>3} {:>12} {:>12} {:>12}", "k", "flagged", "tp rate", "fp rate");
    for k in 1..=cfg.n_indicators {
        let swept = SimConfig {
            af_threshold: k,
            ..cfg.clone()
        };
        let mut flagged = 0usize;
        let mut tp = 0usize;
        let mut fp = 0usize;
        let mut poor = 0usize;
        for record in &data.records {
            let label = decide_af(&record.x, &swept).unwrap().is_poor;
            flagged += label as usize;
            poor += record.z as usize;
            match (record.z, label) {
                (1, 1) => tp += 1,
                (0, 1) => fp += 1,
                _ => {}
            }
        }
        println!(
            "{:>3} {:>12} {:>12.4} {:>12.4}",
            k,
            flagged,
            tp as f64 / poor as f64,
            fp as f64 / (data.len() - poor) as f64
        );
    }

    // Unequal weights shift the rule without changing its shape.
    let weighted = SimConfig {
        af_weights: vec![3.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0],
        ..SimConfig::default()
    };
    let x = [1, 1, 0, 0, 0, 0, 0, 0, 0, 0];
    let decision = decide_af(&x, &weighted).unwrap();
    println!(
        "\nwith a triple-weight first indicator, {:?} counts {} -> poor: {}",
        x, decision.weighted_count, decision.is_poor
    );
}
