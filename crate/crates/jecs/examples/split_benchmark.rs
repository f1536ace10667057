//! Semi-synthetic contamination: partition a real item pool into a clean
//! block, an all-member calibration block, and a remainder that each
//! model trains on at rate rho. Scores are then attached on top of the
//! real membership pattern.
//!
//! ```sh
//! cargo run --release --example split_benchmark
//! ```

use jecs::harness::{run_protocol, summarize, ProcedureSpec, ProtocolConfig};
use jecs::simgen::{attach_scores, gen_split, SplitConfig};

fn main() -> jecs::Result<()> {
    let cfg = SplitConfig {
        rho: 0.25,
        seed: 2,
        ..SplitConfig::default()
    };
    let split = gen_split(&cfg)?;
    let (n_clean, n_cal, n_rem) = cfg.block_sizes();
    println!("pool of {}: {n_clean} clean / {n_cal} calibration / {n_rem} remainder", cfg.n_pool);
    println!(
        "remainder items per model: {} (rho = {})",
        (cfg.rho * n_rem as f64).round() as usize,
        cfg.rho
    );

    // With 16 models at rho = 0.25 almost every remainder item is in
    // somebody's training set, so the jointly pure pool is nearly just
    // the clean block.
    let world = attach_scores(&split, 4.0, cfg.seed);
    println!(
        "test pool {}: {} jointly pure, {} contaminated",
        world.test.n_items(),
        world.labels.pure_count(),
        world.labels.contaminated_count()
    );

    let protocol = ProtocolConfig {
        reps: 60,
        alpha_grid: vec![0.1, 0.2],
        seed: 1,
        ..ProtocolConfig::default()
    };
    let outcomes = run_protocol(&world, &ProcedureSpec::default_set(), &protocol)?;
    println!(
        "\n{:<14} {:>6} {:>8} {:>8}",
        "procedure", "alpha", "GCR", "power"
    );
    for s in summarize(&outcomes) {
        println!(
            "{:<14} {:>6} {:>8.4} {:>8.4}",
            s.procedure, s.alpha, s.gcr, s.mean_power
        );
    }
    Ok(())
}
