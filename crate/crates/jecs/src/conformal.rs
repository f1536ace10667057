//! Conformal p-values against an all-member calibration set.
//!
//! For each model the calibration scores play the role of exchangeable
//! reference draws; a test item's p-value is the (smoothed-by-one) fraction
//! of calibration scores at or below its own score. Low scores, meaning
//! less member-like than essentially all calibration items, give small
//! p-values. Values live on the lattice {j/(m+1) : j = 1..m+1}.

use crate::error::{Error, Result};
use crate::scores::{CalibrationScores, ScoreMatrix};

/// Per-item, per-model conformal p-values, aligned with the test matrix.
#[derive(Debug, Clone)]
pub struct PValueMatrix {
    pub items: Vec<String>,
    pub models: Vec<String>,
    values: Vec<f64>,
}

impl PValueMatrix {
    pub fn n_items(&self) -> usize {
        self.items.len()
    }

    pub fn n_models(&self) -> usize {
        self.models.len()
    }

    pub fn get(&self, item: usize, model: usize) -> f64 {
        self.values[item * self.models.len() + model]
    }

    pub fn row(&self, item: usize) -> &[f64] {
        let k = self.models.len();
        &self.values[item * k..(item + 1) * k]
    }
}

/// Conformal p-values for every test item under every model.
///
/// Each model's calibration column is sorted once; each lookup is a binary
/// search, so the whole matrix costs O(K (m + n) log m).
pub fn conformal_pvalues(cal: &CalibrationScores, test: &ScoreMatrix) -> Result<PValueMatrix> {
    cal.check_alignment(test)?;
    let m = cal.0.n_items();
    if m == 0 {
        return Err(Error::Parameter("empty calibration set".into()));
    }
    let n = test.n_items();
    let k = test.n_models();
    let mut values = vec![0.0; n * k];
    for j in 0..k {
        let mut sorted = cal.0.column(j);
        sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite scores"));
        for i in 0..n {
            let t = test.get(i, j);
            let at_or_below = sorted.partition_point(|&c| c <= t);
            values[i * k + j] = (1 + at_or_below) as f64 / (m + 1) as f64;
        }
    }
    Ok(PValueMatrix {
        items: test.items.clone(),
        models: test.models.clone(),
        values,
    })
}

/// Row-wise maximum across models: an item survives only if every model
/// finds it plausibly non-member, so the max is the natural joint evidence.
pub fn max_p(p: &PValueMatrix) -> Vec<f64> {
    (0..p.n_items())
        .map(|i| p.row(i).iter().cloned().fold(f64::MIN, f64::max))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scores::{CalibrationScores, ScoreMatrix};
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn one_model(cal: &[f64], test: &[f64]) -> (CalibrationScores, ScoreMatrix) {
        let c = ScoreMatrix::new(
            (0..cal.len()).map(|i| format!("c{i}")).collect(),
            vec!["m".into()],
            cal.to_vec(),
        );
        let t = ScoreMatrix::new(
            (0..test.len()).map(|i| format!("t{i}")).collect(),
            vec!["m".into()],
            test.to_vec(),
        );
        (CalibrationScores(c), t)
    }

    #[test]
    fn rank_counting_small_cases() {
        let (cal, test) = one_model(&[0.1, 0.4, 0.7, 0.9], &[0.5, 0.05, 0.95, 0.9]);
        let p = conformal_pvalues(&cal, &test).unwrap();
        assert_relative_eq!(p.get(0, 0), 3.0 / 5.0);
        assert_relative_eq!(p.get(1, 0), 1.0 / 5.0);
        assert_relative_eq!(p.get(2, 0), 5.0 / 5.0);
        assert_relative_eq!(p.get(3, 0), 5.0 / 5.0);
    }

    #[test]
    fn ties_count_nonstrict() {
        let (cal, test) = one_model(&[1.0, 2.0, 2.0, 3.0], &[2.0]);
        let p = conformal_pvalues(&cal, &test).unwrap();
        assert_relative_eq!(p.get(0, 0), 4.0 / 5.0);
    }

    #[test]
    fn max_p_takes_rowwise_maximum() {
        let cal = CalibrationScores(ScoreMatrix::new(
            vec!["c0".into(), "c1".into(), "c2".into()],
            vec!["m1".into(), "m2".into()],
            vec![1.0, 10.0, 2.0, 20.0, 3.0, 30.0],
        ));
        let test = ScoreMatrix::new(
            vec!["t0".into()],
            vec!["m1".into(), "m2".into()],
            vec![2.5, 5.0],
        );
        let p = conformal_pvalues(&cal, &test).unwrap();
        assert_relative_eq!(p.get(0, 0), 3.0 / 4.0);
        assert_relative_eq!(p.get(0, 1), 1.0 / 4.0);
        assert_relative_eq!(max_p(&p)[0], 3.0 / 4.0);
    }

    #[test]
    fn misaligned_models_rejected() {
        let cal = CalibrationScores(ScoreMatrix::new(
            vec!["c0".into()],
            vec!["m1".into()],
            vec![1.0],
        ));
        let test = ScoreMatrix::new(vec!["t0".into()], vec!["other".into()], vec![1.0]);
        assert!(conformal_pvalues(&cal, &test).is_err());
    }

    proptest! {
        #[test]
        fn pvalues_on_lattice_and_monotone(
            cal in proptest::collection::vec(-5.0f64..5.0, 1..60),
            test in proptest::collection::vec(-5.0f64..5.0, 1..40),
        ) {
            let m = cal.len();
            let (c, t) = one_model(&cal, &test);
            let p = conformal_pvalues(&c, &t).unwrap();
            for i in 0..test.len() {
                let v = p.get(i, 0);
                let j = (v * (m + 1) as f64).round();
                prop_assert!((v - j / (m + 1) as f64).abs() < 1e-12);
                prop_assert!(v >= 1.0 / (m + 1) as f64 && v <= 1.0);
            }
            let mut order: Vec<usize> = (0..test.len()).collect();
            order.sort_by(|&a, &b| test[a].partial_cmp(&test[b]).unwrap());
            for w in order.windows(2) {
                prop_assert!(p.get(w[0], 0) <= p.get(w[1], 0) + 1e-15);
            }
        }

        #[test]
        fn calibration_order_is_irrelevant(
            cal in proptest::collection::vec(-5.0f64..5.0, 2..40),
            test in proptest::collection::vec(-5.0f64..5.0, 1..20),
            swap in (0usize..40, 0usize..40),
        ) {
            let (c, t) = one_model(&cal, &test);
            let p1 = conformal_pvalues(&c, &t).unwrap();
            let mut cal2 = cal.clone();
            let (a, b) = (swap.0 % cal.len(), swap.1 % cal.len());
            cal2.swap(a, b);
            let (c2, _) = one_model(&cal2, &test);
            let p2 = conformal_pvalues(&c2, &t).unwrap();
            for i in 0..test.len() {
                prop_assert!((p1.get(i, 0) - p2.get(i, 0)).abs() < 1e-15);
            }
        }

        #[test]
        fn max_p_dominates_each_column(
            vals in proptest::collection::vec((-3.0f64..3.0, -3.0f64..3.0), 1..30),
            cal in proptest::collection::vec((-3.0f64..3.0, -3.0f64..3.0), 2..30),
        ) {
            let c = ScoreMatrix::new(
                (0..cal.len()).map(|i| format!("c{i}")).collect(),
                vec!["m1".into(), "m2".into()],
                cal.iter().flat_map(|&(a, b)| [a, b]).collect(),
            );
            let t = ScoreMatrix::new(
                (0..vals.len()).map(|i| format!("t{i}")).collect(),
                vec!["m1".into(), "m2".into()],
                vals.iter().flat_map(|&(a, b)| [a, b]).collect(),
            );
            let p = conformal_pvalues(&CalibrationScores(c), &t).unwrap();
            let mp = max_p(&p);
            for i in 0..vals.len() {
                prop_assert!(mp[i] >= p.get(i, 0) && mp[i] >= p.get(i, 1));
                prop_assert!(mp[i] == p.get(i, 0) || mp[i] == p.get(i, 1));
            }
        }
    }
}
