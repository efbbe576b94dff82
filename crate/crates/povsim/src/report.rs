//! Experiment artifacts: the per-run results CSV, the disagreement CSV, the
//! PPV/NPV figure with its data sidecar, and the summary text.
//!
//! Everything written here is byte-deterministic: fixed header strings,
//! fixed number formatting, no timestamps or other non-semantic metadata.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::config::SimConfig;
use crate::error::{Error, Result};
use crate::experiment::{run_experiment, AggregateReport};
use crate::metrics::{ConfusionMatrix, DisagreementRow};

/// Locations of the artifacts one experiment emits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExperimentOutput {
    pub results_csv_path: PathBuf,
    pub disagreements_csv_path: PathBuf,
    pub figure_path: PathBuf,
    pub figure_data_path: PathBuf,
    pub summary_path: PathBuf,
}

pub const RESULTS_CSV_HEADER: &str =
    "seed,acc_mrf,tn_mrf,fp_mrf,fn_mrf,tp_mrf,acc_af,tn_af,fp_af,fn_af,tp_af";

/// Renders a fraction with up to 5 decimal places, trimming trailing zeros
/// (`0.7584`, not `0.75840`).
pub fn format_fraction5(x: f64) -> String {
    debug_assert!((0.0..=1.0).contains(&x));
    let scaled = (x * 100_000.0).round() as i64;
    let whole = scaled / 100_000;
    let frac = scaled % 100_000;
    if frac == 0 {
        return whole.to_string();
    }
    let mut digits = format!("{frac:05}");
    while digits.ends_with('0') {
        digits.pop();
    }
    format!("{whole}.{digits}")
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|e| Error::io(path, e))
}

/// Writes the per-run results table. Accuracies use up to 5 decimals,
/// counts are plain integers, rows ascend by seed.
pub fn write_results_csv(report: &AggregateReport, path: &Path) -> Result<()> {
    if report.runs.is_empty() {
        return Err(Error::Eval("cannot write an empty report".into()));
    }
    let mut out = String::from(RESULTS_CSV_HEADER);
    out.push('\n');
    for run in &report.runs {
        let acc = |cm: &ConfusionMatrix| format_fraction5(cm.accuracy().expect("nonempty"));
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{}",
            run.seed,
            acc(&run.cm_mrf),
            run.cm_mrf.tnc,
            run.cm_mrf.fpc,
            run.cm_mrf.fnc,
            run.cm_mrf.tpc,
            acc(&run.cm_af),
            run.cm_af.tnc,
            run.cm_af.fpc,
            run.cm_af.fnc,
            run.cm_af.tpc,
        )
        .expect("writing to a String cannot fail");
    }
    write_file(path, &out)
}

/// One parsed row of a results CSV.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultsRow {
    pub seed: u64,
    pub acc_mrf: f64,
    pub cm_mrf: ConfusionMatrix,
    pub acc_af: f64,
    pub cm_af: ConfusionMatrix,
}

/// Parses a results CSV written by [`write_results_csv`].
pub fn read_results_csv(path: &Path) -> Result<Vec<ResultsRow>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, header)) if header == RESULTS_CSV_HEADER => {}
        Some((_, other)) => {
            return Err(Error::parse(path, 1, format!("unexpected header {other:?}")))
        }
        None => return Err(Error::parse(path, 1, "empty file")),
    }
    let mut rows = Vec::new();
    for (lineno, line) in lines {
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 11 {
            return Err(Error::parse(
                path,
                lineno + 1,
                format!("expected 11 fields, found {}", fields.len()),
            ));
        }
        let num = |s: &str| -> Result<f64> {
            s.parse()
                .map_err(|_| Error::parse(path, lineno + 1, format!("bad number {s:?}")))
        };
        let count = |s: &str| -> Result<usize> {
            s.parse()
                .map_err(|_| Error::parse(path, lineno + 1, format!("bad count {s:?}")))
        };
        rows.push(ResultsRow {
            seed: count(fields[0])? as u64,
            acc_mrf: num(fields[1])?,
            cm_mrf: ConfusionMatrix::from_counts(
                count(fields[2])?,
                count(fields[3])?,
                count(fields[4])?,
                count(fields[5])?,
            ),
            acc_af: num(fields[6])?,
            cm_af: ConfusionMatrix::from_counts(
                count(fields[7])?,
                count(fields[8])?,
                count(fields[9])?,
                count(fields[10])?,
            ),
        });
    }
    Ok(rows)
}

/// Writes the disagreement table: `ID,Z,X1..XD,mrf_pred,af_pred`, IDs from 1.
/// An empty row list yields a header-only file.
pub fn write_disagreements_csv(
    rows: &[DisagreementRow],
    n_indicators: usize,
    path: &Path,
) -> Result<()> {
    let mut out = String::from("ID,Z");
    for i in 1..=n_indicators {
        write!(out, ",X{i}").expect("writing to a String cannot fail");
    }
    out.push_str(",mrf_pred,af_pred\n");
    for row in rows {
        write!(out, "{},{}", row.id, row.z).expect("writing to a String cannot fail");
        for &v in &row.x {
            write!(out, ",{v}").expect("writing to a String cannot fail");
        }
        writeln!(out, ",{},{}", row.mrf_pred, row.af_pred)
            .expect("writing to a String cannot fail");
    }
    write_file(path, &out)
}

// ---------------------------------------------------------------------------
// PPV/NPV figure
// ---------------------------------------------------------------------------

struct Panel {
    title: &'static str,
    ppv: Vec<Option<f64>>,
    npv: Vec<Option<f64>>,
}

/// Emits a self-contained SVG with two panels (MRF left, AF right), each
/// showing the per-run PPV and NPV values as vertical strips, plus a sidecar
/// CSV (`seed,method,ppv,npv`) next to the figure. Returns the sidecar path.
pub fn emit_ppv_npv_figure(report: &AggregateReport, path: &Path) -> Result<PathBuf> {
    if report.runs.is_empty() {
        return Err(Error::Eval("cannot plot an empty report".into()));
    }
    let panels = [
        Panel {
            title: "MRF",
            ppv: report.runs.iter().map(|r| r.cm_mrf.ppv()).collect(),
            npv: report.runs.iter().map(|r| r.cm_mrf.npv()).collect(),
        },
        Panel {
            title: "AF",
            ppv: report.runs.iter().map(|r| r.cm_af.ppv()).collect(),
            npv: report.runs.iter().map(|r| r.cm_af.npv()).collect(),
        },
    ];

    write_file(path, &render_svg(&panels, report.runs.len()))?;

    let sidecar = path.with_extension("csv");
    let mut data = String::from("seed,method,ppv,npv\n");
    let cell = |v: Option<f64>| v.map(format_fraction5).unwrap_or_default();
    for (method, panel) in [("mrf", &panels[0]), ("af", &panels[1])] {
        for (run, (ppv, npv)) in report
            .runs
            .iter()
            .zip(panel.ppv.iter().zip(panel.npv.iter()))
        {
            writeln!(data, "{},{method},{},{}", run.seed, cell(*ppv), cell(*npv))
                .expect("writing to a String cannot fail");
        }
    }
    write_file(&sidecar, &data)?;
    Ok(sidecar)
}

fn render_svg(panels: &[Panel; 2], n_runs: usize) -> String {
    const WIDTH: f64 = 720.0;
    const HEIGHT: f64 = 400.0;
    const MARGIN_LEFT: f64 = 52.0;
    const MARGIN_RIGHT: f64 = 16.0;
    const MARGIN_TOP: f64 = 40.0;
    const MARGIN_BOTTOM: f64 = 44.0;
    const PANEL_GAP: f64 = 36.0;

    let plot_height = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    let panel_width = (WIDTH - MARGIN_LEFT - MARGIN_RIGHT - PANEL_GAP) / 2.0;
    let y_of = |value: f64| MARGIN_TOP + (1.0 - value) * plot_height;

    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" \
         viewBox=\"0 0 {WIDTH} {HEIGHT}\">\n"
    ));
    svg.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
    svg.push_str(&format!(
        "<text x=\"{:.1}\" y=\"22\" font-family=\"sans-serif\" font-size=\"15\" \
         text-anchor=\"middle\">Per-run positive and negative predictive value</text>\n",
        WIDTH / 2.0
    ));

    // Shared y axis: gridlines and labels at 0, 0.25, .., 1.
    for tick in 0..=4 {
        let value = tick as f64 * 0.25;
        let y = y_of(value);
        svg.push_str(&format!(
            "<line x1=\"{MARGIN_LEFT}\" y1=\"{y:.2}\" x2=\"{:.2}\" y2=\"{y:.2}\" \
             stroke=\"#dddddd\" stroke-width=\"1\"/>\n",
            WIDTH - MARGIN_RIGHT
        ));
        svg.push_str(&format!(
            "<text x=\"{:.1}\" y=\"{:.2}\" font-family=\"sans-serif\" font-size=\"11\" \
             text-anchor=\"end\">{value:.2}</text>\n",
            MARGIN_LEFT - 8.0,
            y + 4.0
        ));
    }

    for (p, panel) in panels.iter().enumerate() {
        let x0 = MARGIN_LEFT + p as f64 * (panel_width + PANEL_GAP);
        svg.push_str(&format!(
            "<rect x=\"{x0:.2}\" y=\"{MARGIN_TOP}\" width=\"{panel_width:.2}\" \
             height=\"{plot_height:.2}\" fill=\"none\" stroke=\"#444444\" stroke-width=\"1\"/>\n"
        ));
        svg.push_str(&format!(
            "<text x=\"{:.2}\" y=\"{:.1}\" font-family=\"sans-serif\" font-size=\"13\" \
             text-anchor=\"middle\">{}</text>\n",
            x0 + panel_width / 2.0,
            MARGIN_TOP - 8.0,
            panel.title
        ));
        for (s, (series, color)) in [(&panel.ppv, "#1f6fb2"), (&panel.npv, "#c05020")]
            .iter()
            .enumerate()
        {
            let strip_center = x0 + panel_width * (0.25 + 0.5 * s as f64);
            let strip_width = panel_width * 0.32;
            let label = if s == 0 { "PPV" } else { "NPV" };
            svg.push_str(&format!(
                "<text x=\"{strip_center:.2}\" y=\"{:.1}\" font-family=\"sans-serif\" \
                 font-size=\"12\" text-anchor=\"middle\">{label}</text>\n",
                HEIGHT - MARGIN_BOTTOM + 18.0
            ));
            // Deterministic horizontal spread: runs fan out left-to-right by
            // run index, so the same report always renders the same bytes.
            for (i, value) in series.iter().enumerate() {
                let Some(v) = value else { continue };
                let offset = if n_runs > 1 {
                    (i as f64 / (n_runs - 1) as f64 - 0.5) * strip_width
                } else {
                    0.0
                };
                svg.push_str(&format!(
                    "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"2.4\" fill=\"{color}\" \
                     fill-opacity=\"0.65\"/>\n",
                    strip_center + offset,
                    y_of(*v)
                ));
            }
        }
    }
    svg.push_str("</svg>\n");
    svg
}

// ---------------------------------------------------------------------------
// Summary
// ---------------------------------------------------------------------------

/// Writes the human-readable summary: mean accuracies with confidence
/// intervals, agreement (per-run mean and pooled), and the undefined
/// posterior total.
pub fn write_summary(report: &AggregateReport, cfg: &SimConfig, path: &Path) -> Result<()> {
    let mut out = String::new();
    let _ = writeln!(out, "runs: {}", report.runs.len());
    let _ = writeln!(
        out,
        "population: {} individuals, {} indicators, train fraction {}",
        cfg.n_individuals, cfg.n_indicators, cfg.train_frac
    );
    let _ = writeln!(out, "test size per run: {}", cfg.test_size());
    let _ = writeln!(
        out,
        "mean accuracy (mrf): {:.5}  ci95: [{:.5}, {:.5}]",
        report.mean_acc_mrf, report.ci_mrf.0, report.ci_mrf.1
    );
    let _ = writeln!(
        out,
        "mean accuracy (af):  {:.5}  ci95: [{:.5}, {:.5}]",
        report.mean_acc_af, report.ci_af.0, report.ci_af.1
    );
    let _ = writeln!(
        out,
        "agreement: {:.5} (per-run mean), {:.5} (pooled)",
        report.mean_agreement, report.pooled_agreement
    );
    let _ = writeln!(
        out,
        "undefined posteriors: {}",
        report.total_undefined_posteriors
    );
    write_file(path, &out)
}

/// Runs the experiment and writes all artifacts into `out_dir` (created if
/// missing): `results.csv`, `disagreements.csv`, `ppv_npv.svg` with its
/// `ppv_npv.csv` sidecar, and `summary.txt`.
pub fn run_and_write_all(
    cfg: &SimConfig,
    out_dir: &Path,
) -> Result<(AggregateReport, ExperimentOutput)> {
    let report = run_experiment(cfg)?;
    fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;
    let output = ExperimentOutput {
        results_csv_path: out_dir.join("results.csv"),
        disagreements_csv_path: out_dir.join("disagreements.csv"),
        figure_path: out_dir.join("ppv_npv.svg"),
        figure_data_path: out_dir.join("ppv_npv.csv"),
        summary_path: out_dir.join("summary.txt"),
    };
    write_results_csv(&report, &output.results_csv_path)?;
    write_disagreements_csv(
        &report.disagreement_sample,
        cfg.n_indicators,
        &output.disagreements_csv_path,
    )?;
    let sidecar = emit_ppv_npv_figure(&report, &output.figure_path)?;
    debug_assert_eq!(sidecar, output.figure_data_path);
    write_summary(&report, cfg, &output.summary_path)?;
    Ok((report, output))
}
