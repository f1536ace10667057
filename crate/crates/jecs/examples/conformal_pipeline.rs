//! From score matrices to conformal p-values to the per-item maximum.
//!
//! The calibration pool contains only items every model trained on, so a
//! test item's p-value under model k is the rank of its score among the
//! calibration scores. Small p = the item looks unlike training data.
//! Taking the max over models keeps only items that look clean to every
//! model at once.
//!
//! ```sh
//! cargo run --example conformal_pipeline
//! ```

use jecs::conformal::{conformal_pvalues, max_p};
use jecs::scores::{CalibrationScores, ScoreMatrix};

fn main() -> jecs::Result<()> {
    let models = vec!["model_1".to_string(), "model_2".to_string()];

    // Nine all-member calibration items with high member-like scores.
    let cal_items: Vec<String> = (0..9).map(|i| format!("cal_{i}")).collect();
    let cal_values: Vec<f64> = (0..9)
        .flat_map(|i| {
            let base = 2.0 + 0.25 * i as f64;
            [base, base + 0.1]
        })
        .collect();
    let cal = CalibrationScores(ScoreMatrix::new(cal_items, models.clone(), cal_values));

    // Three test items: one member-like under both models, one clean
    // under both, one mixed (clean for model_1 only).
    let test = ScoreMatrix::new(
        vec!["both_high".into(), "both_low".into(), "mixed".into()],
        models,
        vec![3.9, 4.0, 0.5, 0.6, 0.4, 3.8],
    );

    let p = conformal_pvalues(&cal, &test)?;
    let maxp = max_p(&p);

    println!("p-values live on the lattice j/(m+1) with m = 9 calibration items\n");
    println!("{:<10} {:>9} {:>9} {:>9}", "item", "p_model_1", "p_model_2", "max_p");
    for i in 0..test.n_items() {
        println!(
            "{:<10} {:>9.3} {:>9.3} {:>9.3}",
            test.items[i],
            p.get(i, 0),
            p.get(i, 1),
            maxp[i]
        );
    }
    println!("\nonly `both_low` earns a small max_p; the mixed item is held back by model_2");
    Ok(())
}
