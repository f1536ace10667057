//! Detection scores computed from per-token model outputs.
//!
//! All four scores are oriented so that larger values look more
//! member-like; smaller values are stronger evidence that the model never
//! trained on the item. Downstream conformal calibration relies on this
//! orientation to hand small p-values to non-member-like items.

use std::collections::BTreeMap;
use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::util::fmt_sig9;

/// Per-token outputs for one (model, item) pair, as ingested from JSONL.
///
/// `token_logprobs` holds the natural-log probability of each realized
/// token. `dist_mean`/`dist_std` carry the per-position mean and standard
/// deviation of the log-probability under the model's next-token
/// distribution; `token_probs_true` the realized-token probability. The
/// latter three are optional and only required by the scores that use them.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TokenRecord {
    pub item_id: String,
    pub model_id: String,
    pub token_logprobs: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dist_mean: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dist_std: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub token_probs_true: Option<Vec<f64>>,
}

impl TokenRecord {
    fn check_lengths(&self) -> Result<()> {
        let l = self.token_logprobs.len();
        if l == 0 {
            return Err(Error::EmptySequence(self.item_id.clone()));
        }
        for (name, seq) in [
            ("dist_mean", &self.dist_mean),
            ("dist_std", &self.dist_std),
            ("token_probs_true", &self.token_probs_true),
        ] {
            if let Some(v) = seq {
                if v.len() != l {
                    return Err(Error::MalformedRecord {
                        item_id: self.item_id.clone(),
                        reason: format!("{name} has length {} but {l} tokens", v.len()),
                    });
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScoreKind {
    Perplexity,
    MinK,
    MinKpp,
    MEntropy,
}

impl ScoreKind {
    pub const ALL: [ScoreKind; 4] = [
        ScoreKind::Perplexity,
        ScoreKind::MinK,
        ScoreKind::MinKpp,
        ScoreKind::MEntropy,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ScoreKind::Perplexity => "perplexity",
            ScoreKind::MinK => "mink",
            ScoreKind::MinKpp => "minkpp",
            ScoreKind::MEntropy => "mentropy",
        }
    }
}

impl std::str::FromStr for ScoreKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "perplexity" | "ppl" => Ok(ScoreKind::Perplexity),
            "mink" | "min-k" => Ok(ScoreKind::MinK),
            "minkpp" | "min-k++" => Ok(ScoreKind::MinKpp),
            "mentropy" | "m-entropy" => Ok(ScoreKind::MEntropy),
            other => Err(Error::Parameter(format!("unknown score kind `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ScoreConfig {
    pub score_kind: ScoreKind,
    /// Bottom fraction (in percent) of tokens fed into Min-K% / Min-K%++.
    pub k_percent: f64,
    /// Guard for near-zero per-position standard deviations.
    pub sigma_floor: f64,
}

impl ScoreConfig {
    pub fn new(score_kind: ScoreKind) -> Self {
        ScoreConfig {
            score_kind,
            k_percent: 20.0,
            sigma_floor: 1e-6,
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.k_percent > 0.0 && self.k_percent <= 100.0) {
            return Err(Error::Parameter(format!(
                "k_percent must lie in (0, 100], got {}",
                self.k_percent
            )));
        }
        if self.sigma_floor <= 0.0 {
            return Err(Error::Parameter("sigma_floor must be positive".into()));
        }
        Ok(())
    }
}

/// Indices of the `ceil(L * k / 100)` positions with the lowest raw
/// log-probabilities; never empty.
fn bottom_k_indices(logprobs: &[f64], k_percent: f64) -> Vec<usize> {
    let l = logprobs.len();
    let take = ((l as f64 * k_percent / 100.0).ceil() as usize).clamp(1, l);
    let mut idx: Vec<usize> = (0..l).collect();
    idx.sort_by(|&a, &b| {
        logprobs[a]
            .partial_cmp(&logprobs[b])
            .expect("finite logprobs")
            .then(a.cmp(&b))
    });
    idx.truncate(take);
    idx
}

/// Min-K%++: mean of the variance-normalized log-probabilities over the
/// bottom-K% positions (selected by raw log-probability).
pub fn score_minkpp(rec: &TokenRecord, cfg: &ScoreConfig) -> Result<f64> {
    cfg.validate()?;
    rec.check_lengths()?;
    let mu = rec.dist_mean.as_ref().ok_or_else(|| Error::MalformedRecord {
        item_id: rec.item_id.clone(),
        reason: "dist_mean required for min-k++".into(),
    })?;
    let sigma = rec.dist_std.as_ref().ok_or_else(|| Error::MalformedRecord {
        item_id: rec.item_id.clone(),
        reason: "dist_std required for min-k++".into(),
    })?;
    let members = bottom_k_indices(&rec.token_logprobs, cfg.k_percent);
    let sum: f64 = members
        .iter()
        .map(|&l| (rec.token_logprobs[l] - mu[l]) / sigma[l].max(cfg.sigma_floor))
        .sum();
    Ok(sum / members.len() as f64)
}

/// Min-K%: mean of the bottom-K% raw log-probabilities.
pub fn score_mink(rec: &TokenRecord, cfg: &ScoreConfig) -> Result<f64> {
    cfg.validate()?;
    rec.check_lengths()?;
    let members = bottom_k_indices(&rec.token_logprobs, cfg.k_percent);
    let sum: f64 = members.iter().map(|&l| rec.token_logprobs[l]).sum();
    Ok(sum / members.len() as f64)
}

/// Mean token log-likelihood (the negated log-perplexity), so that
/// well-memorized items score high.
pub fn score_perplexity(rec: &TokenRecord) -> Result<f64> {
    rec.check_lengths()?;
    let l = rec.token_logprobs.len() as f64;
    Ok(rec.token_logprobs.iter().sum::<f64>() / l)
}

/// Modified entropy, negated to match the larger-is-member-like
/// orientation: -(1/L) * sum of -(1 - p) * ln p over realized tokens.
pub fn score_mentropy(rec: &TokenRecord) -> Result<f64> {
    rec.check_lengths()?;
    let probs = rec
        .token_probs_true
        .as_ref()
        .ok_or_else(|| Error::MalformedRecord {
            item_id: rec.item_id.clone(),
            reason: "token_probs_true required for m-entropy".into(),
        })?;
    let l = probs.len() as f64;
    let sum: f64 = probs
        .iter()
        .map(|&p| {
            let p = p.clamp(1e-12, 1.0 - 1e-12);
            -(1.0 - p) * p.ln()
        })
        .sum();
    Ok(-sum / l)
}

/// Dispatch on the configured score kind.
pub fn score_record(rec: &TokenRecord, cfg: &ScoreConfig) -> Result<f64> {
    match cfg.score_kind {
        ScoreKind::Perplexity => score_perplexity(rec),
        ScoreKind::MinK => score_mink(rec, cfg),
        ScoreKind::MinKpp => score_minkpp(rec, cfg),
        ScoreKind::MEntropy => score_mentropy(rec),
    }
}

/// Per-item, per-model detection scores. Rows follow `items`, columns
/// follow `models`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreMatrix {
    pub items: Vec<String>,
    pub models: Vec<String>,
    values: Vec<f64>,
}

impl ScoreMatrix {
    pub fn new(items: Vec<String>, models: Vec<String>, values: Vec<f64>) -> Self {
        assert_eq!(items.len() * models.len(), values.len());
        ScoreMatrix {
            items,
            models,
            values,
        }
    }

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

    pub fn column(&self, model: usize) -> Vec<f64> {
        (0..self.items.len()).map(|i| self.get(i, model)).collect()
    }

    /// Matrix restricted to the given row indices (ascending order not
    /// required; rows appear in the order given).
    pub fn select_rows(&self, rows: &[usize]) -> ScoreMatrix {
        let k = self.models.len();
        let mut values = Vec::with_capacity(rows.len() * k);
        let mut items = Vec::with_capacity(rows.len());
        for &r in rows {
            items.push(self.items[r].clone());
            values.extend_from_slice(self.row(r));
        }
        ScoreMatrix {
            items,
            models: self.models.clone(),
            values,
        }
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let mut header = vec!["item_id".to_string()];
        header.extend(self.models.iter().cloned());
        w.write_record(&header)?;
        for i in 0..self.n_items() {
            let mut rec = vec![self.items[i].clone()];
            rec.extend(self.row(i).iter().map(|&v| fmt_sig9(v)));
            w.write_record(&rec)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn read_csv<R: std::io::Read>(input: R) -> Result<ScoreMatrix> {
        let mut r = csv::Reader::from_reader(input);
        let headers = r.headers()?.clone();
        if headers.is_empty() || &headers[0] != "item_id" {
            return Err(Error::Alignment(
                "score CSV must start with an item_id column".into(),
            ));
        }
        let models: Vec<String> = headers.iter().skip(1).map(str::to_string).collect();
        if models.is_empty() {
            return Err(Error::Alignment("score CSV has no model columns".into()));
        }
        let mut items = Vec::new();
        let mut values = Vec::new();
        for (line, rec) in r.records().enumerate() {
            let rec = rec?;
            if rec.len() != models.len() + 1 {
                return Err(Error::Parse {
                    line: line + 2,
                    msg: format!("expected {} fields, got {}", models.len() + 1, rec.len()),
                });
            }
            items.push(rec[0].to_string());
            for f in rec.iter().skip(1) {
                values.push(f.parse::<f64>().map_err(|e| Error::Parse {
                    line: line + 2,
                    msg: format!("bad number `{f}`: {e}"),
                })?);
            }
        }
        Ok(ScoreMatrix::new(items, models, values))
    }
}

/// Calibration-side scores; every calibration item is, by construction of
/// the audit, a member of all audited models. Columns must align with the
/// test-side [`ScoreMatrix`].
#[derive(Debug, Clone, PartialEq)]
pub struct CalibrationScores(pub ScoreMatrix);

impl CalibrationScores {
    /// Verify the model columns agree with a test matrix.
    pub fn check_alignment(&self, test: &ScoreMatrix) -> Result<()> {
        if self.0.models != test.models {
            return Err(Error::Alignment(format!(
                "calibration models {:?} != test models {:?}",
                self.0.models, test.models
            )));
        }
        Ok(())
    }
}

/// Read per-(model, item) token records from JSONL, keyed for assembly.
pub fn read_jsonl_records<R: BufRead>(input: R) -> Result<Vec<TokenRecord>> {
    let mut out = Vec::new();
    for (lineno, line) in input.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let rec: TokenRecord = serde_json::from_str(&line).map_err(|e| Error::Parse {
            line: lineno + 1,
            msg: e.to_string(),
        })?;
        out.push(rec);
    }
    if out.is_empty() {
        return Err(Error::Parameter("no records in JSONL input".into()));
    }
    Ok(out)
}

/// Assemble a score matrix from token records.
///
/// Every model must supply a record for every item; items and models are
/// ordered by first appearance in the record stream.
pub fn score_matrix(records: &[TokenRecord], cfg: &ScoreConfig) -> Result<ScoreMatrix> {
    cfg.validate()?;
    let mut items = Vec::new();
    let mut models = Vec::new();
    let mut cells: BTreeMap<(usize, usize), f64> = BTreeMap::new();
    let mut item_index: BTreeMap<&str, usize> = BTreeMap::new();
    let mut model_index: BTreeMap<&str, usize> = BTreeMap::new();
    for rec in records {
        let i = *item_index.entry(&rec.item_id).or_insert_with(|| {
            items.push(rec.item_id.clone());
            items.len() - 1
        });
        let k = *model_index.entry(&rec.model_id).or_insert_with(|| {
            models.push(rec.model_id.clone());
            models.len() - 1
        });
        if cells.insert((i, k), score_record(rec, cfg)?).is_some() {
            return Err(Error::Alignment(format!(
                "duplicate record for item `{}` model `{}`",
                rec.item_id, rec.model_id
            )));
        }
    }
    let (n, kk) = (items.len(), models.len());
    let mut values = vec![0.0; n * kk];
    for i in 0..n {
        for k in 0..kk {
            match cells.get(&(i, k)) {
                Some(&v) => values[i * kk + k] = v,
                None => {
                    return Err(Error::Alignment(format!(
                        "model `{}` has no record for item `{}`",
                        models[k], items[i]
                    )))
                }
            }
        }
    }
    Ok(ScoreMatrix::new(items, models, values))
}
