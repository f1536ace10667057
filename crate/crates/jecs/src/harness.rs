//! Monte Carlo evaluation: repeated-subsample protocol over a fixed
//! world, contamination/power metrics, axis sweeps, and empirical checks
//! of the assumptions behind the envelope construction.

use std::io::Write;

use rayon::prelude::*;

use crate::conformal::{conformal_pvalues, max_p};
use crate::envelope::{fit_envelope, select_lambda, transform_pvalues, EnvelopeFit};
use crate::error::{Error, Result};
use crate::selection::{
    bh_select, compose_naive, envelope_pi0, per_model_select_storey, ComposeMode,
};
use crate::simgen::{attach_scores, gen_split, gen_synthetic, MembershipLabels, SplitConfig,
    SyntheticConfig, World};
use crate::util::{derive_rng, fmt_sig9, linspace, sample_indices, stream};

#[derive(Debug, Clone, PartialEq)]
pub struct ProtocolConfig {
    pub reps: usize,
    pub subsample_fraction: f64,
    pub alpha_grid: Vec<f64>,
    pub seed: u64,
    /// Worker threads for the repetition loop; 0 uses the global pool.
    pub parallelism: usize,
}

impl Default for ProtocolConfig {
    fn default() -> Self {
        ProtocolConfig {
            reps: 500,
            subsample_fraction: 0.80,
            alpha_grid: vec![0.1, 0.2, 0.3, 0.4, 0.5],
            seed: 0,
            parallelism: 0,
        }
    }
}

impl ProtocolConfig {
    fn validate(&self) -> Result<()> {
        if self.reps == 0 {
            return Err(Error::Parameter("reps must be at least 1".into()));
        }
        if !(self.subsample_fraction > 0.0 && self.subsample_fraction <= 1.0) {
            return Err(Error::Parameter(format!(
                "subsample_fraction must lie in (0, 1], got {}",
                self.subsample_fraction
            )));
        }
        if self.alpha_grid.is_empty() {
            return Err(Error::Parameter("empty alpha grid".into()));
        }
        for &a in &self.alpha_grid {
            if !(a > 0.0 && a < 1.0) {
                return Err(Error::Parameter(format!(
                    "alpha must lie in (0, 1), got {a}"
                )));
            }
        }
        Ok(())
    }
}

/// A selection rule as run inside the protocol.
#[derive(Debug, Clone, PartialEq)]
pub enum ProcedureSpec {
    /// Envelope-calibrated joint selection with grid-searched lambda.
    Jecs { lambda_grid: Vec<f64> },
    /// Same pipeline with lambda pinned (used by the lambda sweep).
    JecsFixedLambda { lambda: f64 },
    /// Plain BH on max-p.
    Jmcs,
    /// Union of per-model Storey-BH selections.
    Union,
    /// Intersection of per-model Storey-BH selections.
    Intersection,
}

impl ProcedureSpec {
    pub fn tag(&self) -> &'static str {
        match self {
            ProcedureSpec::Jecs { .. } | ProcedureSpec::JecsFixedLambda { .. } => "jecs",
            ProcedureSpec::Jmcs => "jmcs",
            ProcedureSpec::Union => "union",
            ProcedureSpec::Intersection => "intersection",
        }
    }

    pub fn default_set() -> Vec<ProcedureSpec> {
        vec![
            ProcedureSpec::Jecs {
                lambda_grid: crate::envelope::DEFAULT_LAMBDA_GRID.to_vec(),
            },
            ProcedureSpec::Jmcs,
            ProcedureSpec::Union,
            ProcedureSpec::Intersection,
        ]
    }
}

/// One (repetition, procedure, alpha) cell of the protocol.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialOutcome {
    pub rep: usize,
    pub procedure: &'static str,
    pub alpha: f64,
    pub gcp: f64,
    pub power: f64,
    pub n_selected: usize,
    pub lambda: Option<f64>,
    pub pi0_hat: Option<f64>,
}

/// Per-(procedure, alpha) aggregate over all repetitions.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricSummary {
    pub procedure: &'static str,
    pub alpha: f64,
    pub gcr: f64,
    pub gcp_std_err: f64,
    pub mean_power: f64,
    pub power_std_err: f64,
    pub reps: usize,
}

/// Fraction of the selected set that is contaminated (member of at least
/// one model); an empty selection counts as zero.
pub fn gcp(selected: &[usize], labels: &MembershipLabels) -> Result<f64> {
    let mut contaminated = 0usize;
    for &i in selected {
        if i >= labels.n_items() {
            return Err(Error::Alignment(format!(
                "selected index {i} outside label table of {} items",
                labels.n_items()
            )));
        }
        if labels.contaminated(i) {
            contaminated += 1;
        }
    }
    Ok(contaminated as f64 / selected.len().max(1) as f64)
}

/// Fraction of the jointly pure items that made it into the selection.
pub fn power(selected: &[usize], labels: &MembershipLabels) -> Result<f64> {
    let pure_total = labels.pure_count();
    let mut pure_selected = 0usize;
    for &i in selected {
        if i >= labels.n_items() {
            return Err(Error::Alignment(format!(
                "selected index {i} outside label table of {} items",
                labels.n_items()
            )));
        }
        if labels.jointly_pure(i) {
            pure_selected += 1;
        }
    }
    Ok(pure_selected as f64 / pure_total.max(1) as f64)
}

fn run_rep(
    world: &World,
    procedures: &[ProcedureSpec],
    cfg: &ProtocolConfig,
    rep: usize,
) -> Result<Vec<TrialOutcome>> {
    let m = world.cal.0.n_items();
    let n = world.test.n_items();
    let m_sub = ((m as f64) * cfg.subsample_fraction).floor() as usize;
    let n_sub = ((n as f64) * cfg.subsample_fraction).floor() as usize;
    if m_sub == 0 {
        return Err(Error::Protocol("subsampled calibration set is empty".into()));
    }
    if n_sub == 0 {
        return Err(Error::Protocol("subsampled test set is empty".into()));
    }
    let mut cal_rng = derive_rng(cfg.seed, &[stream::SUBSAMPLE_CAL, rep as u64]);
    let cal_idx = sample_indices(&mut cal_rng, m, m_sub);
    let mut test_rng = derive_rng(cfg.seed, &[stream::SUBSAMPLE_TEST, rep as u64]);
    let test_idx = sample_indices(&mut test_rng, n, n_sub);
    let cal_sub = crate::scores::CalibrationScores(world.cal.0.select_rows(&cal_idx));
    let test_sub = world.test.select_rows(&test_idx);
    let labels_sub = world.labels.select_rows(&test_idx);

    let p = conformal_pvalues(&cal_sub, &test_sub)?;
    let maxp = max_p(&p);
    // Per-model Storey selections are shared between union and
    // intersection; computed on first use per alpha.
    let mut per_model_cache: Vec<Option<Vec<crate::selection::SelectionResult>>> =
        vec![None; cfg.alpha_grid.len()];

    let mut outcomes = Vec::with_capacity(procedures.len() * cfg.alpha_grid.len());
    for spec in procedures {
        // The envelope transform and null-proportion estimate do not
        // depend on alpha, so they are computed once per repetition.
        let jecs_state: Option<(Vec<f64>, f64, Option<f64>, bool)> = match spec {
            ProcedureSpec::Jecs { lambda_grid } => Some(match select_lambda(&maxp, lambda_grid) {
                Ok((_, fit)) => jecs_transform(&maxp, &fit)?,
                Err(Error::InsufficientTail { .. }) => (maxp.clone(), 1.0, None, true),
                Err(e) => return Err(e),
            }),
            ProcedureSpec::JecsFixedLambda { lambda } => Some(match fit_envelope(&maxp, *lambda) {
                Ok(fit) => jecs_transform(&maxp, &fit)?,
                Err(Error::InsufficientTail { .. }) => (maxp.clone(), 1.0, None, true),
                Err(e) => return Err(e),
            }),
            _ => None,
        };
        for (ai, &alpha) in cfg.alpha_grid.iter().enumerate() {
            let (result, lambda, pi0) = match spec {
                ProcedureSpec::Jecs { .. } | ProcedureSpec::JecsFixedLambda { .. } => {
                    let (p_tilde, pi0, lambda, _fallback) =
                        jecs_state.as_ref().expect("state precomputed");
                    let r = bh_select(p_tilde, alpha, *pi0)?;
                    (r, *lambda, Some(*pi0))
                }
                ProcedureSpec::Jmcs => (bh_select(&maxp, alpha, 1.0)?, None, None),
                ProcedureSpec::Union | ProcedureSpec::Intersection => {
                    if per_model_cache[ai].is_none() {
                        per_model_cache[ai] = Some(per_model_select_storey(&p, alpha)?);
                    }
                    let per_model = per_model_cache[ai].as_ref().expect("cached");
                    let mode = if matches!(spec, ProcedureSpec::Union) {
                        ComposeMode::Union
                    } else {
                        ComposeMode::Intersection
                    };
                    (compose_naive(per_model, mode)?, None, None)
                }
            };
            outcomes.push(TrialOutcome {
                rep,
                procedure: spec.tag(),
                alpha,
                gcp: gcp(&result.selected, &labels_sub)?,
                power: power(&result.selected, &labels_sub)?,
                n_selected: result.selected.len(),
                lambda,
                pi0_hat: pi0,
            });
        }
    }
    Ok(outcomes)
}

fn jecs_transform(
    maxp: &[f64],
    fit: &EnvelopeFit,
) -> Result<(Vec<f64>, f64, Option<f64>, bool)> {
    let p_tilde = transform_pvalues(fit, maxp)?;
    let pi0 = envelope_pi0(maxp, fit);
    Ok((p_tilde, pi0, Some(fit.lambda), false))
}

/// Run every procedure at every alpha over repeated 80%-style subsamples
/// of one fixed world. Repetitions use derived, order-independent RNG
/// streams, so the outcome list does not depend on the parallelism
/// setting.
pub fn run_protocol(
    world: &World,
    procedures: &[ProcedureSpec],
    cfg: &ProtocolConfig,
) -> Result<Vec<TrialOutcome>> {
    cfg.validate()?;
    if procedures.is_empty() {
        return Err(Error::Parameter("no procedures to run".into()));
    }
    for (i, a) in procedures.iter().enumerate() {
        for b in &procedures[i + 1..] {
            if a.tag() == b.tag() {
                return Err(Error::Parameter(format!(
                    "duplicate procedure `{}` in one protocol run",
                    a.tag()
                )));
            }
        }
    }
    let rep_results: Vec<Result<Vec<TrialOutcome>>> = if cfg.parallelism == 0 {
        (0..cfg.reps)
            .into_par_iter()
            .map(|rep| run_rep(world, procedures, cfg, rep))
            .collect()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.parallelism)
            .build()
            .map_err(|e| Error::Protocol(format!("thread pool: {e}")))?;
        pool.install(|| {
            (0..cfg.reps)
                .into_par_iter()
                .map(|rep| run_rep(world, procedures, cfg, rep))
                .collect()
        })
    };
    let mut outcomes = Vec::with_capacity(cfg.reps * procedures.len() * cfg.alpha_grid.len());
    for r in rep_results {
        outcomes.extend(r?);
    }
    Ok(outcomes)
}

/// Aggregate trial outcomes into per-(procedure, alpha) means with
/// standard errors, in first-appearance order.
pub fn summarize(outcomes: &[TrialOutcome]) -> Vec<MetricSummary> {
    let mut order: Vec<(&'static str, f64)> = Vec::new();
    for o in outcomes {
        if !order
            .iter()
            .any(|&(p, a)| p == o.procedure && a == o.alpha)
        {
            order.push((o.procedure, o.alpha));
        }
    }
    order
        .into_iter()
        .map(|(procedure, alpha)| {
            let gcps: Vec<f64> = outcomes
                .iter()
                .filter(|o| o.procedure == procedure && o.alpha == alpha)
                .map(|o| o.gcp)
                .collect();
            let powers: Vec<f64> = outcomes
                .iter()
                .filter(|o| o.procedure == procedure && o.alpha == alpha)
                .map(|o| o.power)
                .collect();
            let (gcr, gcp_se) = mean_and_std_err(&gcps);
            let (mean_power, power_se) = mean_and_std_err(&powers);
            MetricSummary {
                procedure,
                alpha,
                gcr,
                gcp_std_err: gcp_se,
                mean_power,
                power_std_err: power_se,
                reps: gcps.len(),
            }
        })
        .collect()
}

fn mean_and_std_err(xs: &[f64]) -> (f64, f64) {
    let n = xs.len();
    let mean = xs.iter().sum::<f64>() / n as f64;
    if n < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    (mean, (var / n as f64).sqrt())
}

/// Which generator a protocol or sweep runs on.
#[derive(Debug, Clone)]
pub enum WorldSpec {
    Synthetic(SyntheticConfig),
    Split { split: SplitConfig, mu: f64 },
}

impl WorldSpec {
    pub fn build(&self) -> Result<World> {
        match self {
            WorldSpec::Synthetic(cfg) => gen_synthetic(cfg),
            WorldSpec::Split { split, mu } => Ok(attach_scores(&gen_split(split)?, *mu, split.seed)),
        }
    }

    fn with_k(&self, k: usize) -> WorldSpec {
        match self {
            WorldSpec::Synthetic(cfg) => WorldSpec::Synthetic(SyntheticConfig { k, ..*cfg }),
            WorldSpec::Split { split, mu } => WorldSpec::Split {
                split: SplitConfig { k, ..*split },
                mu: *mu,
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepAxis {
    Alpha,
    Lambda,
    K,
    Rho,
}

impl SweepAxis {
    pub fn name(self) -> &'static str {
        match self {
            SweepAxis::Alpha => "alpha",
            SweepAxis::Lambda => "lambda",
            SweepAxis::K => "k",
            SweepAxis::Rho => "rho",
        }
    }
}

impl std::str::FromStr for SweepAxis {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "alpha" => Ok(SweepAxis::Alpha),
            "lambda" => Ok(SweepAxis::Lambda),
            "k" => Ok(SweepAxis::K),
            "rho" => Ok(SweepAxis::Rho),
            other => Err(Error::Parameter(format!("unknown sweep axis `{other}`"))),
        }
    }
}

/// One line of the long-format results CSV.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub procedure: &'static str,
    pub alpha: f64,
    pub axis: &'static str,
    pub axis_value: String,
    pub rep: usize,
    pub gcp: f64,
    pub power: f64,
    pub n_selected: usize,
    pub lambda: Option<f64>,
    pub pi0_hat: Option<f64>,
}

/// One line of the summary CSV.
#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub procedure: &'static str,
    pub alpha: f64,
    pub axis: &'static str,
    pub axis_value: String,
    pub gcr: f64,
    pub gcp_std_err: f64,
    pub mean_power: f64,
    pub power_std_err: f64,
    pub reps: usize,
}

/// Tag outcomes with the sweep coordinate; with `axis_value` None each
/// row carries its own alpha (the plain-protocol convention).
pub fn result_rows(
    outcomes: &[TrialOutcome],
    axis: &'static str,
    axis_value: Option<&str>,
) -> Vec<ResultRow> {
    outcomes
        .iter()
        .map(|o| ResultRow {
            procedure: o.procedure,
            alpha: o.alpha,
            axis,
            axis_value: axis_value
                .map(str::to_string)
                .unwrap_or_else(|| fmt_sig9(o.alpha)),
            rep: o.rep,
            gcp: o.gcp,
            power: o.power,
            n_selected: o.n_selected,
            lambda: o.lambda,
            pi0_hat: o.pi0_hat,
        })
        .collect()
}

pub fn summary_rows(
    summaries: &[MetricSummary],
    axis: &'static str,
    axis_value: Option<&str>,
) -> Vec<SummaryRow> {
    summaries
        .iter()
        .map(|s| SummaryRow {
            procedure: s.procedure,
            alpha: s.alpha,
            axis,
            axis_value: axis_value
                .map(str::to_string)
                .unwrap_or_else(|| fmt_sig9(s.alpha)),
            gcr: s.gcr,
            gcp_std_err: s.gcp_std_err,
            mean_power: s.mean_power,
            power_std_err: s.power_std_err,
            reps: s.reps,
        })
        .collect()
}

/// Re-run the protocol along one axis. Alpha reuses one world with the
/// values as its alpha grid; Lambda pins the envelope threshold per value
/// and appends an adaptive-lambda overlay; K and Rho regenerate the world
/// per value.
pub fn sweep(
    axis: SweepAxis,
    values: &[f64],
    world_spec: &WorldSpec,
    procedures: &[ProcedureSpec],
    cfg: &ProtocolConfig,
) -> Result<(Vec<ResultRow>, Vec<SummaryRow>)> {
    if values.is_empty() {
        return Err(Error::Parameter("empty sweep value list".into()));
    }
    let mut results = Vec::new();
    let mut summaries = Vec::new();
    match axis {
        SweepAxis::Alpha => {
            let world = world_spec.build()?;
            let sub_cfg = ProtocolConfig {
                alpha_grid: values.to_vec(),
                ..cfg.clone()
            };
            let outcomes = run_protocol(&world, procedures, &sub_cfg)?;
            results.extend(result_rows(&outcomes, "alpha", None));
            summaries.extend(summary_rows(&summarize(&outcomes), "alpha", None));
        }
        SweepAxis::Lambda => {
            let grid = procedures
                .iter()
                .find_map(|p| match p {
                    ProcedureSpec::Jecs { lambda_grid } => Some(lambda_grid.clone()),
                    _ => None,
                })
                .ok_or_else(|| {
                    Error::Parameter(
                        "lambda sweep needs a jecs procedure to define the adaptive overlay"
                            .into(),
                    )
                })?;
            let world = world_spec.build()?;
            for &lambda in values {
                if !(lambda > 0.0 && lambda < 1.0) {
                    return Err(Error::Parameter(format!(
                        "lambda must lie in (0, 1), got {lambda}"
                    )));
                }
                let outcomes =
                    run_protocol(&world, &[ProcedureSpec::JecsFixedLambda { lambda }], cfg)?;
                let value = fmt_sig9(lambda);
                results.extend(result_rows(&outcomes, "lambda", Some(&value)));
                summaries.extend(summary_rows(&summarize(&outcomes), "lambda", Some(&value)));
            }
            let outcomes = run_protocol(
                &world,
                &[ProcedureSpec::Jecs { lambda_grid: grid }],
                cfg,
            )?;
            results.extend(result_rows(&outcomes, "lambda", Some("adaptive")));
            summaries.extend(summary_rows(
                &summarize(&outcomes),
                "lambda",
                Some("adaptive"),
            ));
        }
        SweepAxis::K => {
            for &kv in values {
                let k = kv.round() as usize;
                if k == 0 || (kv - k as f64).abs() > 1e-9 {
                    return Err(Error::Parameter(format!(
                        "k sweep values must be positive integers, got {kv}"
                    )));
                }
                let world = world_spec.with_k(k).build()?;
                let outcomes = run_protocol(&world, procedures, cfg)?;
                let value = fmt_sig9(k as f64);
                results.extend(result_rows(&outcomes, "k", Some(&value)));
                summaries.extend(summary_rows(&summarize(&outcomes), "k", Some(&value)));
            }
        }
        SweepAxis::Rho => {
            let (split, mu) = match world_spec {
                WorldSpec::Split { split, mu } => (*split, *mu),
                WorldSpec::Synthetic(_) => {
                    return Err(Error::Parameter(
                        "rho sweep requires the split generator".into(),
                    ))
                }
            };
            for &rho in values {
                if !(0.0..=1.0).contains(&rho) {
                    return Err(Error::Parameter(format!(
                        "rho must lie in [0, 1], got {rho}"
                    )));
                }
                let spec = WorldSpec::Split {
                    split: SplitConfig { rho, ..split },
                    mu,
                };
                let world = spec.build()?;
                let outcomes = run_protocol(&world, procedures, cfg)?;
                let value = fmt_sig9(rho);
                results.extend(result_rows(&outcomes, "rho", Some(&value)));
                summaries.extend(summary_rows(&summarize(&outcomes), "rho", Some(&value)));
            }
        }
    }
    Ok((results, summaries))
}

fn opt9(v: Option<f64>) -> String {
    v.map(fmt_sig9).unwrap_or_default()
}

pub fn write_results_csv<W: Write>(rows: &[ResultRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "procedure",
        "alpha",
        "axis",
        "axis_value",
        "rep",
        "gcp",
        "power",
        "n_selected",
        "lambda",
        "pi0_hat",
    ])?;
    for r in rows {
        w.write_record([
            r.procedure.to_string(),
            fmt_sig9(r.alpha),
            r.axis.to_string(),
            r.axis_value.clone(),
            r.rep.to_string(),
            fmt_sig9(r.gcp),
            fmt_sig9(r.power),
            r.n_selected.to_string(),
            opt9(r.lambda),
            opt9(r.pi0_hat),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_summary_csv<W: Write>(rows: &[SummaryRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "procedure",
        "alpha",
        "axis",
        "axis_value",
        "gcr",
        "gcp_std_err",
        "mean_power",
        "power_std_err",
        "reps",
    ])?;
    for r in rows {
        w.write_record([
            r.procedure.to_string(),
            fmt_sig9(r.alpha),
            r.axis.to_string(),
            r.axis_value.clone(),
            fmt_sig9(r.gcr),
            fmt_sig9(r.gcp_std_err),
            fmt_sig9(r.mean_power),
            fmt_sig9(r.power_std_err),
            r.reps.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Empirical checks of the two tail assumptions, from max-p values split
/// by ground truth. A diagnostic is `None` when its label class (or tail)
/// is empty.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct AssumptionReport {
    pub lambda: f64,
    /// Largest midpoint-convexity violation of the contaminated-class
    /// empirical CDF on a grid; near zero (or negative) when the null CDF
    /// really is convex.
    pub convexity_violation: Option<f64>,
    /// Minimum over x in [lambda, 1] of pure-tail CDF minus
    /// contaminated-tail CDF (both conditional on exceeding lambda);
    /// nonnegative when pure items dominate the right tail.
    pub tail_dominance_margin: Option<f64>,
    pub n_pure: usize,
    pub n_contaminated: usize,
}

/// Max-p values of the world's full test pool, split into (pure,
/// contaminated) by the ground-truth labels.
pub fn maxp_by_label(world: &World) -> Result<(Vec<f64>, Vec<f64>)> {
    let p = conformal_pvalues(&world.cal, &world.test)?;
    let maxp = max_p(&p);
    let mut pure = Vec::new();
    let mut contaminated = Vec::new();
    for (i, &v) in maxp.iter().enumerate() {
        if world.labels.jointly_pure(i) {
            pure.push(v);
        } else {
            contaminated.push(v);
        }
    }
    Ok((pure, contaminated))
}

pub fn check_assumptions(
    maxp_pure: &[f64],
    maxp_contaminated: &[f64],
    lambda: f64,
) -> Result<AssumptionReport> {
    if !(lambda > 0.0 && lambda < 1.0) {
        return Err(Error::Parameter(format!(
            "lambda must lie in (0, 1), got {lambda}"
        )));
    }
    let ecdf = |data: &[f64], x: f64| {
        data.iter().filter(|&&v| v <= x).count() as f64 / data.len() as f64
    };
    let convexity_violation = if maxp_contaminated.is_empty() {
        None
    } else {
        // Midpoint convexity on a uniform grid: F((a+b)/2) should not
        // exceed the average of F(a) and F(b).
        let grid: Vec<f64> = (0..=100).map(|i| i as f64 / 100.0).collect();
        let f: Vec<f64> = grid.iter().map(|&x| ecdf(maxp_contaminated, x)).collect();
        let mut worst = f64::NEG_INFINITY;
        for i in 0..grid.len() {
            for j in (i + 2)..grid.len() {
                if (j - i) % 2 == 0 {
                    let mid = (i + j) / 2;
                    worst = worst.max(f[mid] - 0.5 * (f[i] + f[j]));
                }
            }
        }
        Some(worst)
    };
    let tail = |data: &[f64]| -> Vec<f64> {
        let mut t: Vec<f64> = data.iter().cloned().filter(|&v| v > lambda).collect();
        t.sort_by(|a, b| a.partial_cmp(b).expect("finite max-p"));
        t
    };
    let (tail_pure, tail_cont) = (tail(maxp_pure), tail(maxp_contaminated));
    let tail_dominance_margin = if tail_pure.is_empty() || tail_cont.is_empty() {
        None
    } else {
        let tail_cdf = |t: &[f64], x: f64| t.partition_point(|&v| v <= x) as f64 / t.len() as f64;
        let mut margin = f64::INFINITY;
        for x in linspace(lambda, 1.0, 101) {
            margin = margin.min(tail_cdf(&tail_pure, x) - tail_cdf(&tail_cont, x));
        }
        Some(margin)
    };
    Ok(AssumptionReport {
        lambda,
        convexity_violation,
        tail_dominance_margin,
        n_pure: maxp_pure.len(),
        n_contaminated: maxp_contaminated.len(),
    })
}

/// (t, t^K, K t^(K-1)) rows over an even grid on [0, 1]: the null CDF and
/// density of the max of K independent uniforms.
pub fn null_reference_curves(k: usize, points: usize) -> Result<Vec<[f64; 3]>> {
    if k == 0 {
        return Err(Error::Parameter("k must be at least 1".into()));
    }
    if points < 2 {
        return Err(Error::Parameter("need at least 2 grid points".into()));
    }
    Ok(linspace(0.0, 1.0, points)
        .into_iter()
        .map(|t| [t, t.powi(k as i32), k as f64 * t.powi(k as i32 - 1)])
        .collect())
}

pub fn write_null_curves_csv<W: Write>(rows: &[[f64; 3]], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["t", "cdf", "density"])?;
    for r in rows {
        w.write_record([fmt_sig9(r[0]), fmt_sig9(r[1]), fmt_sig9(r[2])])?;
    }
    w.flush()?;
    Ok(())
}
