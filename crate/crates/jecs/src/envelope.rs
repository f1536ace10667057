//! Conservative envelope of the max-p null CDF, rebuilt from the right
//! tail.
//!
//! Only the tail above a threshold lambda is trusted to be (mostly) null,
//! so the envelope anchors a straight line from the origin to a
//! tail-density estimate at lambda and continues with the empirical tail
//! CDF above it. Transforming max-p values through this envelope inflates
//! them just enough that BH keeps its guarantee under the unknown joint
//! null.

use std::io::Write;

use crate::error::{Error, Result};
use crate::util::{fmt_sig9, linspace};

pub const DEFAULT_LAMBDA_GRID: [f64; 5] = [0.5, 0.6, 0.7, 0.8, 0.9];
pub const MIN_TAIL: usize = 5;
const LATTICE_TIE_EPS: f64 = 1e-12;

/// kNN estimate of the conditional density of max-p values just above
/// lambda, together with the sorted tail sample that produced it.
#[derive(Debug, Clone)]
pub struct TailEstimate {
    pub lambda: f64,
    /// Count of maxima strictly above lambda.
    pub m_tail: usize,
    /// Neighbor count actually used (after skipping lattice ties).
    pub k_n: usize,
    /// Estimated right-boundary density g(lambda+).
    pub g_hat: f64,
    /// Maxima in (lambda, 1], ascending.
    pub tail_sorted: Vec<f64>,
}

impl TailEstimate {
    /// Empirical CDF of the tail sample: #{tail <= x} / m_tail. Zero at
    /// lambda and below, step function, no interpolation.
    pub fn tail_cdf(&self, x: f64) -> f64 {
        let below = self.tail_sorted.partition_point(|&v| v <= x);
        below as f64 / self.m_tail as f64
    }
}

/// Two-branch envelope: linear from the origin up to lambda, then the
/// rescaled empirical tail CDF.
#[derive(Debug, Clone)]
pub struct EnvelopeFit {
    pub lambda: f64,
    /// Envelope value at lambda: lambda * g_hat / (1 + lambda * g_hat).
    pub anchor: f64,
    /// Slope of the linear branch: anchor / lambda.
    pub left_slope: f64,
    pub tail: TailEstimate,
}

/// Estimate the boundary density of the max-p distribution just above
/// lambda from the k-th nearest tail observation.
pub fn estimate_tail(maxp: &[f64], lambda: f64) -> Result<TailEstimate> {
    if !(lambda > 0.0 && lambda < 1.0) {
        return Err(Error::Parameter(format!(
            "lambda must lie in (0, 1), got {lambda}"
        )));
    }
    let mut tail_sorted: Vec<f64> = maxp.iter().cloned().filter(|&v| v > lambda).collect();
    tail_sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite max-p values"));
    let m_tail = tail_sorted.len();
    if m_tail < MIN_TAIL {
        return Err(Error::InsufficientTail {
            lambda,
            found: m_tail,
            needed: MIN_TAIL,
        });
    }
    let mut k_n = ((m_tail as f64).sqrt().ceil() as usize).max(1);
    // On the discrete p lattice the k-th order statistic can sit exactly at
    // lambda; advance to the first genuinely larger observation.
    while k_n <= m_tail && tail_sorted[k_n - 1] <= lambda + LATTICE_TIE_EPS {
        k_n += 1;
    }
    if k_n > m_tail {
        return Err(Error::InsufficientTail {
            lambda,
            found: 0,
            needed: MIN_TAIL,
        });
    }
    let gap = tail_sorted[k_n - 1] - lambda;
    let g_hat = k_n as f64 / (m_tail as f64 * gap);
    Ok(TailEstimate {
        lambda,
        m_tail,
        k_n,
        g_hat,
        tail_sorted,
    })
}

/// Fit the envelope at a fixed lambda.
pub fn fit_envelope(maxp: &[f64], lambda: f64) -> Result<EnvelopeFit> {
    let tail = estimate_tail(maxp, lambda)?;
    Ok(EnvelopeFit::from_tail(tail))
}

impl EnvelopeFit {
    pub fn from_tail(tail: TailEstimate) -> EnvelopeFit {
        let lg = tail.lambda * tail.g_hat;
        let anchor = lg / (1.0 + lg);
        EnvelopeFit {
            lambda: tail.lambda,
            anchor,
            left_slope: anchor / tail.lambda,
            tail,
        }
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        envelope_eval(self, x)
    }
}

/// Evaluate the fitted envelope at x in [0, 1].
pub fn envelope_eval(fit: &EnvelopeFit, x: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::Domain(format!(
            "envelope argument must lie in [0, 1], got {x}"
        )));
    }
    let y = if x <= fit.lambda {
        fit.left_slope * x
    } else {
        fit.anchor + (1.0 - fit.anchor) * fit.tail.tail_cdf(x)
    };
    Ok(y.clamp(0.0, 1.0))
}

/// Pick lambda from a grid by minimizing the fitted left-branch slope
/// g / (1 + lambda * g); grid points without enough tail mass are skipped
/// and ties go to the larger lambda.
pub fn select_lambda(maxp: &[f64], grid: &[f64]) -> Result<(f64, EnvelopeFit)> {
    if grid.is_empty() {
        return Err(Error::Parameter("empty lambda grid".into()));
    }
    let mut grid = grid.to_vec();
    grid.sort_by(|a, b| a.partial_cmp(b).expect("finite grid"));
    let mut best: Option<(f64, EnvelopeFit)> = None;
    for &lambda in &grid {
        let fit = match fit_envelope(maxp, lambda) {
            Ok(f) => f,
            Err(Error::InsufficientTail { .. }) => continue,
            Err(e) => return Err(e),
        };
        match &best {
            Some((slope, _)) if fit.left_slope > *slope => {}
            _ => best = Some((fit.left_slope, fit)),
        }
    }
    match best {
        Some((_, fit)) => Ok((fit.lambda, fit)),
        None => Err(Error::InsufficientTail {
            lambda: grid[grid.len() - 1],
            found: 0,
            needed: MIN_TAIL,
        }),
    }
}

/// Elementwise envelope transform of a max-p vector.
pub fn transform_pvalues(fit: &EnvelopeFit, maxp: &[f64]) -> Result<Vec<f64>> {
    maxp.iter().map(|&x| envelope_eval(fit, x)).collect()
}

/// Dump (x, envelope(x)) on a 1000-point grid, for plotting.
pub fn write_envelope_csv<W: Write>(fit: &EnvelopeFit, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["x", "f_fit"])?;
    for x in linspace(0.0, 1.0, 1000) {
        w.write_record([fmt_sig9(x), fmt_sig9(envelope_eval(fit, x)?)])?;
    }
    w.flush()?;
    Ok(())
}
