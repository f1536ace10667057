//! Compute the four membership-detection scores from per-token model
//! outputs. Records normally arrive as JSONL (see the `scores`
//! subcommand); here a handful are built inline so the score behavior is
//! easy to see.
//!
//! ```sh
//! cargo run --example token_scores
//! ```

use jecs::scores::{score_matrix, ScoreConfig, ScoreKind, TokenRecord};

fn record(item: &str, model: &str, logprobs: &[f64]) -> TokenRecord {
    // Flat per-position distribution stats keep Min-K%++ easy to eyeball:
    // its z-scores are just (logprob + 2) here.
    TokenRecord {
        item_id: item.to_string(),
        model_id: model.to_string(),
        token_logprobs: logprobs.to_vec(),
        dist_mean: Some(vec![-2.0; logprobs.len()]),
        dist_std: Some(vec![1.0; logprobs.len()]),
        token_probs_true: Some(logprobs.iter().map(|x| x.exp()).collect()),
    }
}

fn main() -> jecs::Result<()> {
    // A memorized item has uniformly high token logprobs; an unseen one
    // mixes confident and surprised positions.
    let records = vec![
        record("memorized", "model_1", &[-0.2, -0.1, -0.3, -0.2, -0.1]),
        record("unseen", "model_1", &[-0.5, -4.0, -1.2, -6.5, -0.8]),
        record("memorized", "model_2", &[-0.3, -0.2, -0.2, -0.4, -0.3]),
        record("unseen", "model_2", &[-2.1, -0.4, -5.0, -3.3, -1.0]),
    ];

    for kind in ScoreKind::ALL {
        let cfg = ScoreConfig::new(kind);
        let m = score_matrix(&records, &cfg)?;
        println!("{}:", kind.name());
        for (i, item) in m.items.iter().enumerate() {
            let row: Vec<String> = (0..m.n_models())
                .map(|j| format!("{:>8.4}", m.get(i, j)))
                .collect();
            println!("  {item:<10} {}", row.join(" "));
        }
    }
    println!("\nlarger = more member-like; the memorized item should score higher everywhere");
    Ok(())
}
