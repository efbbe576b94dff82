//! Fit the latent-field model on training data and query posteriors with
//! full and partial evidence.
//!
//! ```bash
//! cargo run -p povsim --example field_model_inference
//! ```

use povsim::mrf::Evidence;
use povsim::rng::RngStream;
use povsim::synthgen::generate_population_with;
use povsim::{fit, posterior_z, split, SimConfig};

fn main() {
    let cfg = SimConfig {
        n_individuals: 20_000,
        ..SimConfig::default()
    };
    let mut rng = RngStream::derive(cfg.base_seed, 0);
    let data = generate_population_with(&cfg, 0, &mut rng);
    let (train, _test) = split(&data, &mut rng, &cfg);
    let model = fit(&train, &cfg).expect("nonempty training set");

    println!(
        "fitted {} star factors and {} chain factors from {} records\n",
        model.star_factors.len(),
        model.chain_factors.len(),
        model.trained_on
    );
    println!("first two factor tables of the dump:\n");
    for block in model.dump().split_inclusive('\n').take(7) {
        print!("{block}");
    }

    // Posterior of the latent status as evidence accumulates: start with
    // nothing observed, then flag indicators one at a time.
    println!("\nposterior P(Z=1 | evidence) as deprivations accumulate:");
    let mut evidence = Evidence::unobserved(cfg.n_indicators);
    println!(
        "  {:<28} {:.4}",
        "nothing observed",
        posterior_z(&model, &evidence).unwrap()
    );
    for i in 0..cfg.n_indicators {
        evidence.set(i, 1);
        println!(
            "  {:<28} {:.4}",
            format!("X1..X{} = 1", i + 1),
            posterior_z(&model, &evidence).unwrap()
        );
    }

    // Full evidence vectors: the crossover happens only near a fully
    // deprived profile, which is what makes this classifier conservative.
    println!("\nfull-evidence posteriors:");
    for flags in [3, 6, 8, 9, 10] {
        let x: Vec<u8> = (0..cfg.n_indicators)
            .map(|i| u8::from(i < flags))
            .collect();
        let p = posterior_z(&model, &Evidence::from_full(&x)).unwrap();
        println!(
            "  {flags:>2} deprivations -> {:.6} ({})",
            p,
            if p >= cfg.posterior_threshold { "poor" } else { "non-poor" }
        );
    }
}
