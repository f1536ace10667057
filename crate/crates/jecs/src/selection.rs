//! Selection rules over p-values: plain and Storey-weighted BH, per-model
//! selection, max-p joint selection (JMCS), envelope-calibrated joint
//! selection (JECS), and the naive union/intersection composition kept
//! around as a cautionary baseline.

use serde::Serialize;

use crate::conformal::{conformal_pvalues, max_p, PValueMatrix};
use crate::envelope::{fit_envelope, select_lambda, transform_pvalues, EnvelopeFit};
use crate::error::{Error, Result};
use crate::scores::{CalibrationScores, ScoreMatrix};

pub const PI0_FLOOR: f64 = 1e-6;
pub const STOREY_LAMBDA: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Procedure {
    PerModelBh,
    Jmcs,
    Jecs,
    Union,
    Intersection,
}

impl Procedure {
    pub fn name(self) -> &'static str {
        match self {
            Procedure::PerModelBh => "per_model_bh",
            Procedure::Jmcs => "jmcs",
            Procedure::Jecs => "jecs",
            Procedure::Union => "union",
            Procedure::Intersection => "intersection",
        }
    }
}

impl std::str::FromStr for Procedure {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "per_model_bh" | "per-model-bh" => Ok(Procedure::PerModelBh),
            "jmcs" => Ok(Procedure::Jmcs),
            "jecs" => Ok(Procedure::Jecs),
            "union" => Ok(Procedure::Union),
            "intersection" => Ok(Procedure::Intersection),
            other => Err(Error::Parameter(format!("unknown procedure `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ComposeMode {
    Union,
    Intersection,
}

/// Outcome of one selection run. `selected` holds item indices into the
/// p-vector (or test matrix) the rule was applied to, ascending.
#[derive(Debug, Clone)]
pub struct SelectionResult {
    pub procedure: Procedure,
    pub alpha: f64,
    /// Threshold the envelope was anchored at; set only by JECS.
    pub lambda: Option<f64>,
    pub pi0_hat: f64,
    pub r_star: usize,
    /// Effective p cutoff alpha * r_star / (pi0_hat * n); 0 when nothing
    /// was selected.
    pub threshold: f64,
    pub selected: Vec<usize>,
    /// True when JECS could not fit an envelope and degraded to the plain
    /// max-p baseline.
    pub fallback: bool,
    /// Which model column a per-model result belongs to.
    pub model_id: Option<String>,
}

#[derive(Serialize)]
struct SelectionResultJson<'a> {
    procedure: &'a str,
    alpha: f64,
    lambda: Option<f64>,
    pi0_hat: f64,
    r_star: usize,
    threshold: f64,
    selected: Vec<&'a str>,
    fallback: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    model_id: Option<&'a str>,
}

impl SelectionResult {
    /// JSON view with indices resolved to item ids.
    pub fn to_json(&self, items: &[String]) -> serde_json::Value {
        let view = SelectionResultJson {
            procedure: self.procedure.name(),
            alpha: self.alpha,
            lambda: self.lambda,
            pi0_hat: self.pi0_hat,
            r_star: self.r_star,
            threshold: self.threshold,
            selected: self.selected.iter().map(|&i| items[i].as_str()).collect(),
            fallback: self.fallback,
            model_id: self.model_id.as_deref(),
        };
        serde_json::to_value(view).expect("serializable result")
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::Parameter(format!(
            "alpha must lie in (0, 1), got {alpha}"
        )));
    }
    Ok(())
}

fn check_pvector(p: &[f64]) -> Result<()> {
    if p.is_empty() {
        return Err(Error::Parameter("empty p-value vector".into()));
    }
    for &v in p {
        if !(0.0..=1.0).contains(&v) {
            return Err(Error::Parameter(format!("p-value {v} outside [0, 1]")));
        }
    }
    Ok(())
}

/// BH step-up at level alpha with a null-proportion weight: find the
/// largest r with p_(r) <= alpha * r / (pi0 * n) and keep everything at or
/// below that cutoff.
pub fn bh_select(p: &[f64], alpha: f64, pi0: f64) -> Result<SelectionResult> {
    check_alpha(alpha)?;
    check_pvector(p)?;
    if pi0.is_nan() || pi0 <= 0.0 {
        return Err(Error::Parameter(format!("pi0 must be positive, got {pi0}")));
    }
    let n = p.len();
    let mut sorted = p.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite p-values"));
    let mut r_star = 0usize;
    for r in (1..=n).rev() {
        if sorted[r - 1] <= alpha * r as f64 / (pi0 * n as f64) {
            r_star = r;
            break;
        }
    }
    let threshold = if r_star == 0 {
        0.0
    } else {
        alpha * r_star as f64 / (pi0 * n as f64)
    };
    let selected: Vec<usize> = (0..n)
        .filter(|&i| r_star > 0 && p[i] <= threshold)
        .collect();
    Ok(SelectionResult {
        procedure: Procedure::Jmcs,
        alpha,
        lambda: None,
        pi0_hat: pi0,
        r_star,
        threshold,
        selected,
        fallback: false,
        model_id: None,
    })
}

/// Fraction of p-values above lambda, rescaled to estimate the null
/// proportion; floored to stay usable as a divisor.
pub fn storey_pi0(p: &[f64], lambda: f64) -> f64 {
    let n = p.len();
    let above = p.iter().filter(|&&v| v > lambda).count();
    (above as f64 / (n as f64 * (1.0 - lambda))).max(PI0_FLOOR)
}

/// BH with the Storey plug-in estimate of the null proportion.
pub fn storey_bh_select(p: &[f64], alpha: f64, lambda: f64) -> Result<SelectionResult> {
    bh_select(p, alpha, storey_pi0(p, lambda))
}

/// Independent BH on every model column, each with pi0 = 1.
pub fn per_model_select(p: &PValueMatrix, alpha: f64) -> Result<Vec<SelectionResult>> {
    (0..p.n_models())
        .map(|k| {
            let column: Vec<f64> = (0..p.n_items()).map(|i| p.get(i, k)).collect();
            let mut r = bh_select(&column, alpha, 1.0)?;
            r.procedure = Procedure::PerModelBh;
            r.model_id = Some(p.models[k].clone());
            Ok(r)
        })
        .collect()
}

/// Independent Storey-BH on every model column.
pub fn per_model_select_storey(p: &PValueMatrix, alpha: f64) -> Result<Vec<SelectionResult>> {
    (0..p.n_models())
        .map(|k| {
            let column: Vec<f64> = (0..p.n_items()).map(|i| p.get(i, k)).collect();
            let mut r = storey_bh_select(&column, alpha, STOREY_LAMBDA)?;
            r.procedure = Procedure::PerModelBh;
            r.model_id = Some(p.models[k].clone());
            Ok(r)
        })
        .collect()
}

/// Union or intersection of per-model selections. No error-rate guarantee
/// survives this composition; it exists as the baseline that motivates
/// joint selection.
pub fn compose_naive(per_model: &[SelectionResult], mode: ComposeMode) -> Result<SelectionResult> {
    let first = per_model
        .first()
        .ok_or_else(|| Error::Parameter("no per-model results to compose".into()))?;
    let mut acc: Vec<usize> = first.selected.clone();
    for r in &per_model[1..] {
        match mode {
            ComposeMode::Union => {
                acc.extend(r.selected.iter().copied());
                acc.sort_unstable();
                acc.dedup();
            }
            ComposeMode::Intersection => {
                acc.retain(|i| r.selected.binary_search(i).is_ok());
            }
        }
    }
    Ok(SelectionResult {
        procedure: match mode {
            ComposeMode::Union => Procedure::Union,
            ComposeMode::Intersection => Procedure::Intersection,
        },
        alpha: first.alpha,
        lambda: None,
        pi0_hat: 1.0,
        r_star: acc.len(),
        threshold: 0.0,
        selected: acc,
        fallback: false,
        model_id: None,
    })
}

/// Joint selection on the max-p statistic with no envelope correction.
pub fn jmcs_select(
    test: &ScoreMatrix,
    cal: &CalibrationScores,
    alpha: f64,
) -> Result<SelectionResult> {
    let p = conformal_pvalues(cal, test)?;
    let maxp = max_p(&p);
    let mut r = bh_select(&maxp, alpha, 1.0)?;
    r.procedure = Procedure::Jmcs;
    Ok(r)
}

/// Null-proportion estimate built from the envelope: mass above lambda
/// rescaled by the envelope's own tail weight at lambda.
pub fn envelope_pi0(maxp: &[f64], fit: &EnvelopeFit) -> f64 {
    let above = maxp.iter().filter(|&&v| v > fit.lambda).count() as f64 / maxp.len() as f64;
    (above / (1.0 - fit.anchor)).max(PI0_FLOOR)
}

fn jecs_from_fit(
    maxp: &[f64],
    alpha: f64,
    fit: EnvelopeFit,
) -> Result<(SelectionResult, Option<EnvelopeFit>)> {
    let transformed = transform_pvalues(&fit, maxp)?;
    let pi0 = envelope_pi0(maxp, &fit);
    let mut r = bh_select(&transformed, alpha, pi0)?;
    r.procedure = Procedure::Jecs;
    r.lambda = Some(fit.lambda);
    Ok((r, Some(fit)))
}

fn jecs_fallback(maxp: &[f64], alpha: f64) -> Result<(SelectionResult, Option<EnvelopeFit>)> {
    let mut r = bh_select(maxp, alpha, 1.0)?;
    r.procedure = Procedure::Jecs;
    r.fallback = true;
    Ok((r, None))
}

/// Full joint envelope pipeline, also returning the fitted envelope for
/// diagnostics. The envelope is absent when the fit fell back.
pub fn jecs_select_full(
    test: &ScoreMatrix,
    cal: &CalibrationScores,
    alpha: f64,
    grid: &[f64],
) -> Result<(SelectionResult, Option<EnvelopeFit>)> {
    check_alpha(alpha)?;
    let p = conformal_pvalues(cal, test)?;
    let maxp = max_p(&p);
    match select_lambda(&maxp, grid) {
        Ok((_, fit)) => jecs_from_fit(&maxp, alpha, fit),
        Err(Error::InsufficientTail { .. }) => jecs_fallback(&maxp, alpha),
        Err(e) => Err(e),
    }
}

/// Joint envelope pipeline with the anchor threshold pinned instead of
/// grid-searched.
pub fn jecs_select_fixed_lambda(
    test: &ScoreMatrix,
    cal: &CalibrationScores,
    alpha: f64,
    lambda: f64,
) -> Result<(SelectionResult, Option<EnvelopeFit>)> {
    check_alpha(alpha)?;
    let p = conformal_pvalues(cal, test)?;
    let maxp = max_p(&p);
    match fit_envelope(&maxp, lambda) {
        Ok(fit) => jecs_from_fit(&maxp, alpha, fit),
        Err(Error::InsufficientTail { .. }) => jecs_fallback(&maxp, alpha),
        Err(e) => Err(e),
    }
}

/// Conformal p-values, max-p aggregation, envelope calibration, then BH.
pub fn jecs_select(
    test: &ScoreMatrix,
    cal: &CalibrationScores,
    alpha: f64,
    grid: &[f64],
) -> Result<SelectionResult> {
    jecs_select_full(test, cal, alpha, grid).map(|(r, _)| r)
}
