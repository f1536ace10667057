//! Sweep the contamination budget alpha and write the full artifact set
//! (long-form results, summary table, SVG chart) to ./sweep_example_out.
//!
//! ```sh
//! cargo run --release --example control_and_power_sweep
//! ```

use std::fs;

use jecs::harness::{sweep, ProcedureSpec, ProtocolConfig, SweepAxis, WorldSpec};
use jecs::simgen::SyntheticConfig;
use jecs::svg::sweep_chart;

fn main() -> jecs::Result<()> {
    let spec = WorldSpec::Synthetic(SyntheticConfig {
        seed: 20,
        ..SyntheticConfig::default()
    });
    let cfg = ProtocolConfig {
        reps: 40,
        seed: 1,
        ..ProtocolConfig::default()
    };
    let alphas = [0.05, 0.1, 0.2, 0.3, 0.4];
    let (rows, summaries) = sweep(
        SweepAxis::Alpha,
        &alphas,
        &spec,
        &ProcedureSpec::default_set(),
        &cfg,
    )?;

    let dir = std::path::Path::new("sweep_example_out");
    fs::create_dir_all(dir)?;
    let mut buf = Vec::new();
    jecs::harness::write_results_csv(&rows, &mut buf)?;
    fs::write(dir.join("results.csv"), &buf)?;
    buf.clear();
    jecs::harness::write_summary_csv(&summaries, &mut buf)?;
    fs::write(dir.join("summary.csv"), &buf)?;
    fs::write(dir.join("sweep.svg"), sweep_chart(&summaries))?;

    println!("wrote {} result rows for {} alphas", rows.len(), alphas.len());
    for s in summaries.iter().filter(|s| s.procedure == "jecs") {
        println!(
            "jecs  alpha {:>5}: GCR {:.4}  power {:.4}",
            s.alpha, s.gcr, s.mean_power
        );
    }
    println!("open sweep_example_out/sweep.svg for the chart");
    Ok(())
}
