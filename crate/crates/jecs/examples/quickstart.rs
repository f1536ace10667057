//! Smallest end-to-end run: simulate a contaminated pool, then pick a
//! jointly clean benchmark at a 10% contamination budget.
//!
//! ```sh
//! cargo run --example quickstart
//! ```

use jecs::selection::jecs_select_full;
use jecs::simgen::{gen_synthetic, SyntheticConfig};

fn main() -> jecs::Result<()> {
    // 1200 items, 4 models, 30% per-model membership. The first 360 items
    // become the all-member calibration set.
    let world = gen_synthetic(&SyntheticConfig::default())?;
    println!(
        "pool: {} test items, {} calibration items, {} models",
        world.test.n_items(),
        world.cal.0.n_items(),
        world.test.n_models()
    );
    println!(
        "ground truth: {} jointly pure, {} contaminated",
        world.labels.pure_count(),
        world.labels.contaminated_count()
    );

    let alpha = 0.1;
    let (result, _fit) = jecs_select_full(
        &world.test,
        &world.cal,
        alpha,
        &jecs::envelope::DEFAULT_LAMBDA_GRID,
    )?;

    let n_bad = result
        .selected
        .iter()
        .filter(|&&i| world.labels.contaminated(i))
        .count();
    println!(
        "\nselected {} of {} items at alpha = {alpha}",
        result.selected.len(),
        world.test.n_items()
    );
    println!(
        "lambda = {:?}, pi0_hat = {:.3}, BH threshold = {:.4}",
        result.lambda, result.pi0_hat, result.threshold
    );
    println!(
        "contaminated fraction of the selection: {:.4} (budget {alpha})",
        n_bad as f64 / result.selected.len().max(1) as f64
    );
    Ok(())
}
