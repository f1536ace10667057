//! Ground-truth-labeled synthetic worlds: a Gaussian-score pool with
//! i.i.d. per-model membership, a three-block contamination split with
//! fixed per-model training fractions, and a copula family of dependent
//! uniform maxima used as a test oracle.

use std::io::Write;

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scores::{CalibrationScores, ScoreMatrix};
use crate::util::{derive_rng, sample_indices, stream};

/// Per-item, per-model membership ground truth for the test pool.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MembershipLabels {
    n_models: usize,
    values: Vec<bool>,
}

impl MembershipLabels {
    pub fn new(n_models: usize, values: Vec<bool>) -> Self {
        assert!(n_models > 0 && values.len().is_multiple_of(n_models));
        MembershipLabels { n_models, values }
    }

    pub fn n_items(&self) -> usize {
        self.values.len() / self.n_models
    }

    pub fn n_models(&self) -> usize {
        self.n_models
    }

    pub fn is_member(&self, item: usize, model: usize) -> bool {
        self.values[item * self.n_models + model]
    }

    /// Member of at least one audited model.
    pub fn contaminated(&self, item: usize) -> bool {
        self.row(item).iter().any(|&m| m)
    }

    /// Member of none of the audited models.
    pub fn jointly_pure(&self, item: usize) -> bool {
        !self.contaminated(item)
    }

    pub fn row(&self, item: usize) -> &[bool] {
        &self.values[item * self.n_models..(item + 1) * self.n_models]
    }

    pub fn pure_count(&self) -> usize {
        (0..self.n_items()).filter(|&i| self.jointly_pure(i)).count()
    }

    pub fn contaminated_count(&self) -> usize {
        self.n_items() - self.pure_count()
    }

    pub fn select_rows(&self, rows: &[usize]) -> MembershipLabels {
        let mut values = Vec::with_capacity(rows.len() * self.n_models);
        for &r in rows {
            values.extend_from_slice(self.row(r));
        }
        MembershipLabels {
            n_models: self.n_models,
            values,
        }
    }
}

/// One fixed simulated audit: aligned test scores, calibration scores,
/// and test-pool ground truth.
#[derive(Debug, Clone)]
pub struct World {
    pub test: ScoreMatrix,
    pub cal: CalibrationScores,
    pub labels: MembershipLabels,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct SyntheticConfig {
    pub n_pool: usize,
    pub cal_fraction: f64,
    pub k: usize,
    pub member_prob: f64,
    pub mu: f64,
    pub seed: u64,
}

impl Default for SyntheticConfig {
    fn default() -> Self {
        SyntheticConfig {
            n_pool: 1200,
            cal_fraction: 0.30,
            k: 4,
            member_prob: 0.30,
            mu: 4.0,
            seed: 0,
        }
    }
}

impl SyntheticConfig {
    fn validate(&self) -> Result<()> {
        if !(self.cal_fraction > 0.0 && self.cal_fraction < 1.0) {
            return Err(Error::Parameter(format!(
                "cal_fraction must lie in (0, 1), got {}",
                self.cal_fraction
            )));
        }
        if !(0.0..=1.0).contains(&self.member_prob) {
            return Err(Error::Parameter(format!(
                "member_prob must lie in [0, 1], got {}",
                self.member_prob
            )));
        }
        if self.k == 0 {
            return Err(Error::Parameter("k must be at least 1".into()));
        }
        let n_cal = (self.n_pool as f64 * self.cal_fraction).floor() as usize;
        if n_cal == 0 || n_cal >= self.n_pool {
            return Err(Error::Parameter(format!(
                "pool of {} splits into empty calibration or test block",
                self.n_pool
            )));
        }
        Ok(())
    }

    pub fn n_cal(&self) -> usize {
        (self.n_pool as f64 * self.cal_fraction).floor() as usize
    }
}

fn model_ids(k: usize) -> Vec<String> {
    (1..=k).map(|j| format!("model_{j}")).collect()
}

fn item_ids(range: std::ops::Range<usize>) -> Vec<String> {
    range.map(|i| format!("item_{i:06}")).collect()
}

/// Gaussian-score pool: a calibration block of all-member items and a
/// test block with i.i.d. Bernoulli membership per (item, model). Each
/// score is mu * membership + standard normal noise.
pub fn gen_synthetic(cfg: &SyntheticConfig) -> Result<World> {
    cfg.validate()?;
    let n_cal = cfg.n_cal();
    let n_test = cfg.n_pool - n_cal;
    let k = cfg.k;
    let mut label_rng = derive_rng(cfg.seed, &[stream::WORLD_LABELS]);
    let mut labels = Vec::with_capacity(n_test * k);
    for _ in 0..n_test * k {
        labels.push(label_rng.gen::<f64>() < cfg.member_prob);
    }
    let labels = MembershipLabels::new(k, labels);
    let mut score_rng = derive_rng(cfg.seed, &[stream::WORLD_SCORES]);
    let mut cal_vals = Vec::with_capacity(n_cal * k);
    for _ in 0..n_cal * k {
        let z: f64 = score_rng.sample(StandardNormal);
        cal_vals.push(cfg.mu + z);
    }
    let mut test_vals = Vec::with_capacity(n_test * k);
    for i in 0..n_test {
        for j in 0..k {
            let z: f64 = score_rng.sample(StandardNormal);
            let m = if labels.is_member(i, j) { cfg.mu } else { 0.0 };
            test_vals.push(m + z);
        }
    }
    let cal = CalibrationScores(ScoreMatrix::new(
        item_ids(0..n_cal),
        model_ids(k),
        cal_vals,
    ));
    let test = ScoreMatrix::new(item_ids(n_cal..cfg.n_pool), model_ids(k), test_vals);
    Ok(World { test, cal, labels })
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct SplitConfig {
    pub n_pool: usize,
    /// Clean-block fraction of the pool.
    pub a: f64,
    /// Calibration-block fraction of the pool.
    pub b: f64,
    /// Per-model training fraction within the remainder block.
    pub rho: f64,
    pub k: usize,
    pub seed: u64,
}

impl Default for SplitConfig {
    fn default() -> Self {
        SplitConfig {
            n_pool: 789,
            a: 0.30,
            b: 0.30,
            rho: 0.125,
            k: 16,
            seed: 0,
        }
    }
}

impl SplitConfig {
    fn validate(&self) -> Result<()> {
        if !(self.a > 0.0 && self.b > 0.0 && self.a + self.b < 1.0) {
            return Err(Error::Parameter(format!(
                "block fractions a={}, b={} must be positive with a + b < 1",
                self.a, self.b
            )));
        }
        if !(0.0..=1.0).contains(&self.rho) {
            return Err(Error::Parameter(format!(
                "rho must lie in [0, 1], got {}",
                self.rho
            )));
        }
        if self.k == 0 {
            return Err(Error::Parameter("k must be at least 1".into()));
        }
        let (clean, cal, rem) = self.block_sizes();
        if clean == 0 || cal == 0 || rem == 0 {
            return Err(Error::Parameter(format!(
                "pool of {} leaves an empty block (clean {clean}, calibration {cal}, remainder {rem})",
                self.n_pool
            )));
        }
        Ok(())
    }

    /// Clean and calibration sizes round down; the remainder absorbs the
    /// residue.
    pub fn block_sizes(&self) -> (usize, usize, usize) {
        let clean = (self.n_pool as f64 * self.a).floor() as usize;
        let cal = (self.n_pool as f64 * self.b).floor() as usize;
        (clean, cal, self.n_pool - clean - cal)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Block {
    Clean,
    Calibration,
    Remainder,
}

impl Block {
    pub fn name(self) -> &'static str {
        match self {
            Block::Clean => "clean",
            Block::Calibration => "calibration",
            Block::Remainder => "remainder",
        }
    }
}

/// Three-block contamination design over the whole pool: block assignment
/// plus per-model membership for every pool item.
#[derive(Debug, Clone)]
pub struct SplitWorld {
    pub blocks: Vec<Block>,
    /// Pool-wide membership rows, aligned with `blocks`.
    pub labels: MembershipLabels,
}

impl SplitWorld {
    /// Clean and remainder items, ascending; this is the selection pool.
    pub fn test_indices(&self) -> Vec<usize> {
        (0..self.blocks.len())
            .filter(|&i| self.blocks[i] != Block::Calibration)
            .collect()
    }

    pub fn cal_indices(&self) -> Vec<usize> {
        (0..self.blocks.len())
            .filter(|&i| self.blocks[i] == Block::Calibration)
            .collect()
    }

    /// Membership rows restricted to the test pool, in test-index order.
    pub fn test_labels(&self) -> MembershipLabels {
        self.labels.select_rows(&self.test_indices())
    }
}

/// Partition the pool into clean, calibration, and remainder blocks and
/// mark, for each model independently, a fixed-size random subset of the
/// remainder as members. Clean rows stay all-false, calibration rows
/// all-true.
pub fn gen_split(cfg: &SplitConfig) -> Result<SplitWorld> {
    cfg.validate()?;
    let (n_clean, n_cal, n_rem) = cfg.block_sizes();
    let mut blocks = Vec::with_capacity(cfg.n_pool);
    blocks.extend(std::iter::repeat_n(Block::Clean, n_clean));
    blocks.extend(std::iter::repeat_n(Block::Calibration, n_cal));
    blocks.extend(std::iter::repeat_n(Block::Remainder, n_rem));
    let members_per_model = (cfg.rho * n_rem as f64).round() as usize;
    let mut values = vec![false; cfg.n_pool * cfg.k];
    for i in n_clean..n_clean + n_cal {
        for j in 0..cfg.k {
            values[i * cfg.k + j] = true;
        }
    }
    for j in 0..cfg.k {
        let mut rng = derive_rng(cfg.seed, &[stream::WORLD_LABELS, j as u64]);
        for r in sample_indices(&mut rng, n_rem, members_per_model) {
            values[(n_clean + n_cal + r) * cfg.k + j] = true;
        }
    }
    Ok(SplitWorld {
        blocks,
        labels: MembershipLabels::new(cfg.k, values),
    })
}

/// Overlay Gaussian scores on a split design: score = mu * membership +
/// standard normal noise, independently per (item, model). Returns the
/// ready-to-select world with test-aligned labels.
pub fn attach_scores(split: &SplitWorld, mu: f64, seed: u64) -> World {
    let k = split.labels.n_models();
    let n_pool = split.blocks.len();
    let mut rng = derive_rng(seed, &[stream::WORLD_SCORES]);
    let mut pool_vals = Vec::with_capacity(n_pool * k);
    for i in 0..n_pool {
        for j in 0..k {
            let z: f64 = rng.sample(StandardNormal);
            let m = if split.labels.is_member(i, j) { mu } else { 0.0 };
            pool_vals.push(m + z);
        }
    }
    let pool = ScoreMatrix::new(item_ids(0..n_pool), model_ids(k), pool_vals);
    let cal_idx = split.cal_indices();
    let test_idx = split.test_indices();
    World {
        test: pool.select_rows(&test_idx),
        cal: CalibrationScores(pool.select_rows(&cal_idx)),
        labels: split.test_labels(),
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct CopulaNullConfig {
    /// Exposure multiplicity: how many coupled uniforms each draw is the
    /// maximum of.
    pub c: usize,
    /// Dependence weight: probability of the fully coupled (single
    /// uniform) branch.
    pub eta: f64,
    pub n: usize,
    pub seed: u64,
}

/// Draws whose CDF is eta * x + (1 - eta) * x^c: with probability eta a
/// single uniform, otherwise the maximum of c independent uniforms.
pub fn gen_copula_null(cfg: &CopulaNullConfig) -> Result<Vec<f64>> {
    if cfg.c == 0 {
        return Err(Error::Parameter("c must be at least 1".into()));
    }
    if !(0.0..=1.0).contains(&cfg.eta) {
        return Err(Error::Parameter(format!(
            "eta must lie in [0, 1], got {}",
            cfg.eta
        )));
    }
    let mut rng = derive_rng(cfg.seed, &[stream::COPULA]);
    Ok((0..cfg.n)
        .map(|_| {
            if rng.gen::<f64>() < cfg.eta {
                rng.gen::<f64>()
            } else {
                (0..cfg.c).map(|_| rng.gen::<f64>()).fold(0.0, f64::max)
            }
        })
        .collect())
}

/// Ground-truth CSV: item id, block name, then one 0/1 membership column
/// per model.
pub fn write_labels_csv<W: Write>(
    items: &[String],
    blocks: &[&str],
    labels: &MembershipLabels,
    out: W,
) -> Result<()> {
    if items.len() != labels.n_items() || blocks.len() != items.len() {
        return Err(Error::Alignment(format!(
            "labels CSV given {} ids, {} blocks, {} label rows",
            items.len(),
            blocks.len(),
            labels.n_items()
        )));
    }
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["item_id".to_string(), "block".to_string()];
    for j in 1..=labels.n_models() {
        header.push(format!("M_{j}"));
    }
    w.write_record(&header)?;
    for i in 0..items.len() {
        let mut rec = vec![items[i].clone(), blocks[i].to_string()];
        for j in 0..labels.n_models() {
            rec.push(if labels.is_member(i, j) { "1" } else { "0" }.to_string());
        }
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn synthetic_default_block_sizes() {
        let world = gen_synthetic(&SyntheticConfig::default()).unwrap();
        assert_eq!(world.cal.0.n_items(), 360);
        assert_eq!(world.test.n_items(), 840);
        assert_eq!(world.test.n_models(), 4);
        assert_eq!(world.labels.n_items(), 840);
        assert_eq!(world.test.items[0], "item_000360");
        assert_eq!(world.cal.0.items[0], "item_000000");
        assert_eq!(world.test.models[0], "model_1");
    }

    #[test]
    fn synthetic_zero_member_prob_is_all_pure() {
        let cfg = SyntheticConfig {
            member_prob: 0.0,
            ..Default::default()
        };
        let world = gen_synthetic(&cfg).unwrap();
        assert_eq!(world.labels.contaminated_count(), 0);
        assert_eq!(world.labels.pure_count(), 840);
    }

    #[test]
    fn synthetic_joint_purity_near_expected() {
        // Aggregate over several seeds: 4200 draws of a 0.7^4 event.
        let mut pure = 0usize;
        let mut total = 0usize;
        for seed in 0..5 {
            let cfg = SyntheticConfig {
                seed,
                ..Default::default()
            };
            let world = gen_synthetic(&cfg).unwrap();
            pure += world.labels.pure_count();
            total += world.labels.n_items();
        }
        let frac = pure as f64 / total as f64;
        let p = 0.7f64.powi(4);
        let se = (p * (1.0 - p) / total as f64).sqrt();
        assert!(
            (frac - p).abs() <= 3.0 * se,
            "joint purity {frac} vs expected {p} (3 s.e. = {})",
            3.0 * se
        );
    }

    #[test]
    fn synthetic_member_scores_shift_by_mu() {
        let cfg = SyntheticConfig {
            n_pool: 30_000,
            mu: 2.5,
            seed: 9,
            ..Default::default()
        };
        let world = gen_synthetic(&cfg).unwrap();
        let mut member = Vec::new();
        let mut non = Vec::new();
        for i in 0..world.test.n_items() {
            for j in 0..4 {
                if world.labels.is_member(i, j) {
                    member.push(world.test.get(i, j));
                } else {
                    non.push(world.test.get(i, j));
                }
            }
        }
        let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
        let gap = mean(&member) - mean(&non);
        let se = (1.0 / member.len() as f64 + 1.0 / non.len() as f64).sqrt();
        assert!(
            (gap - 2.5).abs() <= 3.0 * se,
            "mean shift {gap} vs mu 2.5 (3 s.e. = {})",
            3.0 * se
        );
    }

    #[test]
    fn synthetic_is_deterministic() {
        let cfg = SyntheticConfig::default();
        let a = gen_synthetic(&cfg).unwrap();
        let b = gen_synthetic(&cfg).unwrap();
        assert_eq!(a.test, b.test);
        assert_eq!(a.cal.0, b.cal.0);
        assert_eq!(a.labels, b.labels);
        let c = gen_synthetic(&SyntheticConfig {
            seed: 1,
            ..Default::default()
        })
        .unwrap();
        assert_ne!(a.labels, c.labels);
    }

    #[test]
    fn synthetic_rejects_degenerate_fractions() {
        let bad = SyntheticConfig {
            cal_fraction: 0.0,
            ..Default::default()
        };
        assert!(gen_synthetic(&bad).is_err());
        let bad = SyntheticConfig {
            member_prob: 1.5,
            ..Default::default()
        };
        assert!(gen_synthetic(&bad).is_err());
        let bad = SyntheticConfig {
            n_pool: 2,
            cal_fraction: 0.1,
            ..Default::default()
        };
        assert!(gen_synthetic(&bad).is_err());
    }

    #[test]
    fn split_reference_pool_counts() {
        let cfg = SplitConfig::default();
        let world = gen_split(&cfg).unwrap();
        let (clean, cal, rem) = cfg.block_sizes();
        assert_eq!((clean, cal, rem), (236, 236, 317));
        assert_eq!(world.cal_indices().len(), 236);
        assert_eq!(world.test_indices().len(), 553);
        for j in 0..16 {
            let members = (0..world.labels.n_items())
                .filter(|&i| world.blocks[i] == Block::Remainder && world.labels.is_member(i, j))
                .count();
            assert_eq!(members, 40);
        }
    }

    #[test]
    fn split_blocks_partition_pool() {
        let cfg = SplitConfig {
            n_pool: 1000,
            k: 4,
            ..Default::default()
        };
        let world = gen_split(&cfg).unwrap();
        assert_eq!(world.blocks.len(), 1000);
        let (clean, cal, rem) = cfg.block_sizes();
        assert_eq!((clean, cal, rem), (300, 300, 400));
        let counts = [Block::Clean, Block::Calibration, Block::Remainder]
            .map(|b| world.blocks.iter().filter(|&&x| x == b).count());
        assert_eq!(counts, [300, 300, 400]);
        let mut test = world.test_indices();
        test.extend(world.cal_indices());
        test.sort_unstable();
        assert_eq!(test, (0..1000).collect::<Vec<_>>());
    }

    #[test]
    fn split_clean_and_calibration_labels() {
        let world = gen_split(&SplitConfig::default()).unwrap();
        for i in 0..world.blocks.len() {
            match world.blocks[i] {
                Block::Clean => assert!(world.labels.jointly_pure(i)),
                Block::Calibration => {
                    assert!((0..16).all(|j| world.labels.is_member(i, j)))
                }
                Block::Remainder => {}
            }
        }
    }

    #[test]
    fn split_zero_rho_leaves_remainder_pure() {
        let cfg = SplitConfig {
            rho: 0.0,
            ..Default::default()
        };
        let world = gen_split(&cfg).unwrap();
        let test_labels = world.test_labels();
        assert_eq!(test_labels.contaminated_count(), 0);
    }

    #[test]
    fn split_remainder_joint_purity_near_expected() {
        let mut pure = 0usize;
        let mut total = 0usize;
        for seed in 0..12 {
            let world = gen_split(&SplitConfig {
                seed,
                ..Default::default()
            })
            .unwrap();
            for i in 0..world.blocks.len() {
                if world.blocks[i] == Block::Remainder {
                    total += 1;
                    if world.labels.jointly_pure(i) {
                        pure += 1;
                    }
                }
            }
        }
        let frac = pure as f64 / total as f64;
        let p = 0.875f64.powi(16);
        let se = (p * (1.0 - p) / total as f64).sqrt();
        assert!(
            (frac - p).abs() <= 3.0 * se,
            "remainder purity {frac} vs {p} (3 s.e. = {})",
            3.0 * se
        );
    }

    #[test]
    fn split_rejects_bad_blocks() {
        assert!(gen_split(&SplitConfig {
            a: 0.6,
            b: 0.5,
            ..Default::default()
        })
        .is_err());
        assert!(gen_split(&SplitConfig {
            n_pool: 3,
            ..Default::default()
        })
        .is_err());
        assert!(gen_split(&SplitConfig {
            rho: 1.2,
            ..Default::default()
        })
        .is_err());
    }

    #[test]
    fn attach_scores_matches_labels() {
        let split = gen_split(&SplitConfig {
            n_pool: 4000,
            k: 4,
            rho: 0.25,
            ..Default::default()
        })
        .unwrap();
        let world = attach_scores(&split, 3.0, 17);
        assert_eq!(world.test.n_items(), split.test_indices().len());
        assert_eq!(world.cal.0.n_items(), split.cal_indices().len());
        let mut member = Vec::new();
        let mut non = Vec::new();
        for i in 0..world.test.n_items() {
            for j in 0..4 {
                if world.labels.is_member(i, j) {
                    member.push(world.test.get(i, j));
                } else {
                    non.push(world.test.get(i, j));
                }
            }
        }
        let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
        let gap = mean(&member) - mean(&non);
        let se = (1.0 / member.len() as f64 + 1.0 / non.len() as f64).sqrt();
        assert!((gap - 3.0).abs() <= 3.0 * se);
    }

    #[test]
    fn attach_scores_zero_mu_removes_signal() {
        let split = gen_split(&SplitConfig {
            n_pool: 8000,
            k: 2,
            rho: 0.5,
            ..Default::default()
        })
        .unwrap();
        let world = attach_scores(&split, 0.0, 23);
        let mut member = Vec::new();
        let mut non = Vec::new();
        for i in 0..world.test.n_items() {
            for j in 0..2 {
                if world.labels.is_member(i, j) {
                    member.push(world.test.get(i, j));
                } else {
                    non.push(world.test.get(i, j));
                }
            }
        }
        let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
        let gap = mean(&member) - mean(&non);
        let se = (1.0 / member.len() as f64 + 1.0 / non.len() as f64).sqrt();
        assert!(gap.abs() <= 3.0 * se, "gap {gap} without signal");
    }

    #[test]
    fn copula_matches_target_cdf() {
        let ecdf_at = |draws: &[f64], x: f64| {
            draws.iter().filter(|&&v| v <= x).count() as f64 / draws.len() as f64
        };
        let draws = gen_copula_null(&CopulaNullConfig {
            c: 4,
            eta: 0.5,
            n: 100_000,
            seed: 2,
        })
        .unwrap();
        let want: f64 = 0.5 * 0.5 + 0.5 * 0.0625;
        let se = (want * (1.0 - want) / 100_000.0).sqrt();
        assert!((ecdf_at(&draws, 0.5) - want).abs() <= 3.0 * se);
        // Kolmogorov distance against the analytic CDF.
        for (eta, c) in [(1.0, 4usize), (0.0, 1), (0.5, 4), (0.0, 8)] {
            let draws = gen_copula_null(&CopulaNullConfig {
                c,
                eta,
                n: 100_000,
                seed: 5,
            })
            .unwrap();
            let mut ks = 0.0f64;
            for i in 0..=100 {
                let x = i as f64 / 100.0;
                let f = eta * x + (1.0 - eta) * x.powi(c as i32);
                ks = ks.max((ecdf_at(&draws, x) - f).abs());
            }
            assert!(ks < 0.02, "eta={eta} c={c}: Kolmogorov distance {ks}");
        }
    }

    #[test]
    fn copula_rejects_bad_parameters() {
        assert!(gen_copula_null(&CopulaNullConfig {
            c: 0,
            eta: 0.5,
            n: 10,
            seed: 0
        })
        .is_err());
        assert!(gen_copula_null(&CopulaNullConfig {
            c: 2,
            eta: -0.1,
            n: 10,
            seed: 0
        })
        .is_err());
    }

    #[test]
    fn labels_csv_layout() {
        let labels = MembershipLabels::new(2, vec![true, false, false, false]);
        let items = vec!["item_000000".to_string(), "item_000001".to_string()];
        let mut buf = Vec::new();
        write_labels_csv(&items, &["remainder", "clean"], &labels, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "item_id,block,M_1,M_2");
        assert_eq!(lines[1], "item_000000,remainder,1,0");
        assert_eq!(lines[2], "item_000001,clean,0,0");
    }
}
