//! One seed end to end: generate, split, fit, classify with both methods,
//! and compare the confusion matrices and disagreements.
//!
//! ```bash
//! cargo run -p povsim --example single_run
//! ```

use povsim::metrics::ConfusionMatrix;
use povsim::{run_one, SimConfig};

fn print_matrix(name: &str, cm: &ConfusionMatrix) {
    let fmt = |v: Option<f64>| v.map_or("   -  ".into(), |r| format!("{r:.4}"));
    println!(
        "{name}: acc {}  ppv {}  npv {}   [tn {} fp {} fn {} tp {}]",
        fmt(cm.accuracy()),
        fmt(cm.ppv()),
        fmt(cm.npv()),
        cm.tnc,
        cm.fpc,
        cm.fnc,
        cm.tpc
    );
}

fn main() {
    let cfg = SimConfig::default();
    let (result, disagreements) = run_one(&cfg, 0, 10).expect("run 0 must succeed");

    println!(
        "run {} on a test split of {} records:\n",
        result.seed,
        result.cm_mrf.total()
    );
    print_matrix("field model", &result.cm_mrf);
    print_matrix("counting   ", &result.cm_af);

    println!(
        "\nagreement: {:.4} ({} records labeled poor only by counting, {} only by the field model)",
        result.agreement, result.disagree_af_only, result.disagree_mrf_only
    );

    println!("\nfirst {} disagreements (Z | indicators | mrf af):", disagreements.len());
    for row in &disagreements {
        let bits: Vec<String> = row.x.iter().map(|v| v.to_string()).collect();
        println!(
            "  #{:<2} {} | {} | {}  {}",
            row.id,
            row.z,
            bits.join(" "),
            row.mrf_pred,
            row.af_pred
        );
    }
}
