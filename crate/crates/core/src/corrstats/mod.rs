//! Correlation primitives.
//!
//! Everything here works with population (divide-by-n) moments. Under that
//! convention the phi coefficient of a 2x2 table, the rate form of the same
//! quantity, Pearson on the two indicator vectors, and Spearman on them
//! (with mid-ranks) all coincide.

mod normal;
mod rank;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use normal::{normal_quantile, two_sided_critical};
pub use rank::midranks;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StatsError {
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("need at least {needed} observations, got {got}")]
    TooFewObservations { needed: usize, got: usize },
    #[error("input has zero variance")]
    ZeroVariance,
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("a confusion-matrix margin is zero, correlation undefined")]
    DegenerateMargin,
    #[error("Fisher interval needs n >= 4, got {0}")]
    InsufficientSample(usize),
    #[error("Fisher interval undefined for |r| = 1 (r = {0})")]
    DegenerateR(f64),
    #[error("confidence level must lie in (0, 1), got {0}")]
    InvalidLevel(f64),
    #[error("regression ranges must be positive (got {num} and {den})")]
    NonPositiveRange { num: f64, den: f64 },
    #[error("invalid counts: {0}")]
    InvalidCounts(String),
}

/// How a correlation value was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Pearson,
    Spearman,
    Phi,
    Eq1,
    RegressionRange,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConfidenceInterval {
    pub level: f64,
    pub lower: f64,
    pub upper: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorrelationEstimate {
    pub r: f64,
    pub method: Method,
    /// Sample size; `None` when the value was not computed from a sample.
    pub n: Option<usize>,
    pub ci: Option<ConfidenceInterval>,
    /// Set when the raw value fell outside [-1, 1] and was clamped.
    #[serde(default)]
    pub clamped: bool,
}

impl CorrelationEstimate {
    fn new(r: f64, method: Method, n: Option<usize>) -> Self {
        Self { r: r.clamp(-1.0, 1.0), method, n, ci: None, clamped: false }
    }

    /// Attaches a Fisher r-to-z interval at `level`. Needs a sample size.
    pub fn with_fisher_ci(mut self, level: f64) -> Result<Self, StatsError> {
        let n = self.n.ok_or_else(|| StatsError::InvalidInput("no sample size attached".into()))?;
        self.ci = Some(fisher_ci(self.r, n, level)?);
        Ok(self)
    }
}

/// The four cells of a binary confusion matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct ConfusionCounts {
    pub tp: u64,
    pub fp: u64,
    #[serde(rename = "fn")]
    pub fn_: u64,
    pub tn: u64,
}

impl ConfusionCounts {
    pub fn new(tp: u64, fp: u64, fn_: u64, tn: u64) -> Self {
        Self { tp, fp, fn_, tn }
    }

    pub fn positives(&self) -> u64 {
        self.tp + self.fn_
    }

    pub fn negatives(&self) -> u64 {
        self.fp + self.tn
    }

    pub fn total(&self) -> u64 {
        self.positives() + self.negatives()
    }

    /// Size of the predicted-positive set.
    pub fn selected(&self) -> u64 {
        self.tp + self.fp
    }

    pub fn tpr(&self) -> Option<f64> {
        ratio(self.tp, self.positives())
    }

    pub fn fpr(&self) -> Option<f64> {
        ratio(self.fp, self.negatives())
    }

    pub fn precision(&self) -> Option<f64> {
        ratio(self.tp, self.selected())
    }

    fn has_positive_margins(&self) -> bool {
        self.selected() > 0 && self.fn_ + self.tn > 0 && self.positives() > 0 && self.negatives() > 0
    }

    /// Indicator vectors (selected, labelled) with one entry per item, in the
    /// order tp, fp, fn, tn.
    pub fn indicator_vectors(&self) -> (Vec<f64>, Vec<f64>) {
        let n = self.total() as usize;
        let mut selected = Vec::with_capacity(n);
        let mut labelled = Vec::with_capacity(n);
        for (count, s, l) in
            [(self.tp, 1.0, 1.0), (self.fp, 1.0, 0.0), (self.fn_, 0.0, 1.0), (self.tn, 0.0, 0.0)]
        {
            for _ in 0..count {
                selected.push(s);
                labelled.push(l);
            }
        }
        (selected, labelled)
    }
}

fn ratio(num: u64, den: u64) -> Option<f64> {
    (den > 0).then(|| num as f64 / den as f64)
}

fn check_pair(x: &[f64], y: &[f64]) -> Result<(), StatsError> {
    if x.len() != y.len() {
        return Err(StatsError::LengthMismatch { left: x.len(), right: y.len() });
    }
    if x.len() < 2 {
        return Err(StatsError::TooFewObservations { needed: 2, got: x.len() });
    }
    if x.iter().chain(y).any(|v| !v.is_finite()) {
        return Err(StatsError::InvalidInput("non-finite value".into()));
    }
    Ok(())
}

fn pearson_raw(x: &[f64], y: &[f64]) -> Result<f64, StatsError> {
    check_pair(x, y)?;
    if x.iter().all(|&v| v == x[0]) || y.iter().all(|&v| v == y[0]) {
        return Err(StatsError::ZeroVariance);
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (&a, &b) in x.iter().zip(y) {
        let dx = a - mx;
        let dy = b - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(StatsError::ZeroVariance);
    }
    Ok(sxy / (sxx.sqrt() * syy.sqrt()))
}

/// Pearson product-moment correlation.
pub fn pearson(x: &[f64], y: &[f64]) -> Result<CorrelationEstimate, StatsError> {
    let r = pearson_raw(x, y)?;
    Ok(CorrelationEstimate::new(r, Method::Pearson, Some(x.len())))
}

/// Spearman rank correlation: Pearson on the mid-ranks of both inputs.
pub fn spearman(x: &[f64], y: &[f64]) -> Result<CorrelationEstimate, StatsError> {
    check_pair(x, y)?;
    let r = pearson_raw(&midranks(x)?, &midranks(y)?)?;
    Ok(CorrelationEstimate::new(r, Method::Spearman, Some(x.len())))
}

/// Phi coefficient of a 2x2 table.
pub fn phi_from_counts(c: &ConfusionCounts) -> Result<CorrelationEstimate, StatsError> {
    if !c.has_positive_margins() {
        return Err(StatsError::DegenerateMargin);
    }
    let (tp, fp, fn_, tn) = (c.tp as f64, c.fp as f64, c.fn_ as f64, c.tn as f64);
    let num = tp * tn - fp * fn_;
    let den = ((tp + fp) * (tp + fn_)).sqrt() * ((tn + fp) * (tn + fn_)).sqrt();
    Ok(CorrelationEstimate::new(num / den, Method::Phi, Some(c.total() as usize)))
}

/// Correlation between sieve membership and the label, written in terms of
/// hit and false-alarm rates and the two class sizes:
///
/// ```text
///            (tpr - fpr) * sqrt(n_pos * n_neg)
/// r = -------------------------------------------------------------
///     sqrt((tpr*n_pos + fpr*n_neg) * ((1-tpr)*n_pos + (1-fpr)*n_neg))
/// ```
///
/// Rates may be arbitrary reals in [0, 1]; they need not come from integer
/// counts.
pub fn r_from_rates(tpr: f64, fpr: f64, n_pos: u64, n_neg: u64) -> Result<CorrelationEstimate, StatsError> {
    for (name, rate) in [("tpr", tpr), ("fpr", fpr)] {
        if !(0.0..=1.0).contains(&rate) {
            return Err(StatsError::InvalidInput(format!("{name} = {rate} outside [0, 1]")));
        }
    }
    if n_pos == 0 || n_neg == 0 {
        return Err(StatsError::InvalidCounts(format!(
            "class sizes must be positive (n_pos = {n_pos}, n_neg = {n_neg})"
        )));
    }
    let (np, nn) = (n_pos as f64, n_neg as f64);
    let selected = tpr * np + fpr * nn;
    let rejected = (1.0 - tpr) * np + (1.0 - fpr) * nn;
    if selected <= 0.0 || rejected <= 0.0 {
        return Err(StatsError::DegenerateMargin);
    }
    let r = (tpr - fpr) * (np * nn).sqrt() / (selected * rejected).sqrt();
    Ok(CorrelationEstimate::new(r, Method::Eq1, Some((n_pos + n_neg) as usize)))
}

/// Fisher r-to-z confidence interval at two-sided `level`.
pub fn fisher_ci(r: f64, n: usize, level: f64) -> Result<ConfidenceInterval, StatsError> {
    if n < 4 {
        return Err(StatsError::InsufficientSample(n));
    }
    if !r.is_finite() || r.abs() > 1.0 {
        return Err(StatsError::InvalidInput(format!("r = {r} outside [-1, 1]")));
    }
    if r.abs() == 1.0 {
        return Err(StatsError::DegenerateR(r));
    }
    let crit = two_sided_critical(level).ok_or(StatsError::InvalidLevel(level))?;
    let z = r.atanh();
    let half = crit / ((n - 3) as f64).sqrt();
    Ok(ConfidenceInterval { level, lower: (z - half).tanh(), upper: (z + half).tanh() })
}

/// A regression slope together with the value ranges used to rescale it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegressionEstimate {
    pub b1: f64,
    pub range_num: f64,
    pub range_den: f64,
}

/// Approximates a correlation from a slope as `b1 * range_num / range_den`,
/// treating each range as proportional to that variable's spread.
pub fn r_from_regression(est: &RegressionEstimate) -> Result<CorrelationEstimate, StatsError> {
    let RegressionEstimate { b1, range_num, range_den } = *est;
    if !(range_num > 0.0 && range_den > 0.0) || !range_num.is_finite() || !range_den.is_finite() {
        return Err(StatsError::NonPositiveRange { num: range_num, den: range_den });
    }
    if !b1.is_finite() {
        return Err(StatsError::InvalidInput(format!("b1 = {b1}")));
    }
    let raw = b1 * range_num / range_den;
    let mut out = CorrelationEstimate::new(raw, Method::RegressionRange, None);
    out.clamped = raw.abs() > 1.0;
    Ok(out)
}

/// Largest |Spearman| between the ranks 1..n and a 0/1 label vector with
/// `n_pos` ones. Reached when the positives hold ranks 1..n_pos, where it
/// reduces to the point-biserial form `sqrt(3 p (1-p) n^2 / (n^2 - 1))`.
pub fn binary_rank_ceiling(n_pos: usize, n: usize) -> Result<CorrelationEstimate, StatsError> {
    if n_pos == 0 || n_pos >= n {
        return Err(StatsError::InvalidCounts(format!("need 1 <= n_pos < n, got {n_pos} and {n}")));
    }
    let nf = n as f64;
    let p = n_pos as f64 / nf;
    let r = (3.0 * p * (1.0 - p) * nf * nf / (nf * nf - 1.0)).sqrt();
    Ok(CorrelationEstimate::new(r, Method::Spearman, Some(n)))
}
