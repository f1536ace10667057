//! Empirically probe the two assumptions the envelope leans on, using
//! ground-truth labels from a simulated world:
//!
//!   1. the contaminated max-p CDF is convex (checked by midpoint
//!      violations of its empirical CDF), and
//!   2. pure items dominate the right tail above lambda.
//!
//! Also prints the closed-form null reference curves used for visual
//! comparison.
//!
//! ```sh
//! cargo run --example assumption_checks
//! ```

use jecs::harness::{check_assumptions, maxp_by_label, null_reference_curves};
use jecs::simgen::{gen_synthetic, SyntheticConfig};

fn main() -> jecs::Result<()> {
    // A weak signal (mu = 1) leaves both label classes spread over the
    // whole unit interval, which is the interesting regime for these
    // diagnostics. At the default mu = 4 no pure item reaches the tail
    // and the dominance margin is undefined.
    let world = gen_synthetic(&SyntheticConfig {
        n_pool: 4000,
        mu: 1.0,
        seed: 21,
        ..SyntheticConfig::default()
    })?;
    let (pure, contaminated) = maxp_by_label(&world)?;
    let report = check_assumptions(&pure, &contaminated, 0.5)?;

    println!("lambda                 = {}", report.lambda);
    println!("n_pure / n_contaminated = {} / {}", report.n_pure, report.n_contaminated);
    match report.convexity_violation {
        Some(v) => println!("worst convexity violation = {v:+.4} (near zero or negative is good)"),
        None => println!("convexity check skipped: no contaminated items"),
    }
    match report.tail_dominance_margin {
        Some(m) => println!("tail dominance margin     = {m:+.4} (nonnegative is good)"),
        None => println!("tail dominance skipped: one tail is empty"),
    }

    println!("\nnull max-p reference for K = 4 (CDF t^K, density K t^(K-1)):");
    println!("{:>5} {:>10} {:>10}", "t", "cdf", "density");
    for row in null_reference_curves(4, 6)? {
        println!("{:>5.1} {:>10.5} {:>10.4}", row[0], row[1], row[2]);
    }
    Ok(())
}
