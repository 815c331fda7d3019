//! Rank-threshold ("sieve") classifier analysis.
//!
//! A sieve of size `R` selects the top `R` entries of a ranking. For every
//! threshold we get a confusion matrix, and from those the ROC, precision and
//! correlation curves. Thresholds index rank positions, never score values.
//!
//! Two inputs are supported: a full [`LabeledRanking`], and a [`SparseSieve`]
//! holding only `(R, tp)` pairs at selected thresholds, for data that exists
//! only as a handful of read-off points.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corrstats::{self, ConfusionCounts, CorrelationEstimate, StatsError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SieveError {
    #[error("ranking has no positive labels")]
    NoPositives,
    #[error("ranking has no negative labels")]
    NoNegatives,
    #[error("non-finite score at input row {0}")]
    NonFiniteScore(usize),
    #[error("threshold {threshold} outside 0..={len}")]
    ThresholdOutOfRange { threshold: usize, len: usize },
    #[error("invalid point set: {0}")]
    InvalidPointSet(String),
    #[error(transparent)]
    Stats(#[from] StatsError),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankedEntry {
    pub id: String,
    pub score: f64,
    pub label: bool,
    /// Where the entry came from (e.g. a CSV line), for diagnostics.
    pub source_row: Option<usize>,
}

/// Entries sorted by descending score, each with a binary label.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledRanking {
    entries: Vec<RankedEntry>,
    n_pos: usize,
    n_neg: usize,
    tie_count: usize,
}

impl LabeledRanking {
    /// Builds a ranking from `(id, score, label)` rows. Equal scores keep
    /// their input order.
    pub fn build<I, S>(rows: I) -> Result<Self, SieveError>
    where
        I: IntoIterator<Item = (S, f64, bool)>,
        S: Into<String>,
    {
        let entries = rows
            .into_iter()
            .enumerate()
            .map(|(i, (id, score, label))| RankedEntry { id: id.into(), score, label, source_row: Some(i) })
            .collect();
        Self::from_entries(entries)
    }

    pub fn from_entries(mut entries: Vec<RankedEntry>) -> Result<Self, SieveError> {
        if let Some((i, e)) = entries.iter().enumerate().find(|(_, e)| !e.score.is_finite()) {
            return Err(SieveError::NonFiniteScore(e.source_row.unwrap_or(i)));
        }
        let n_pos = entries.iter().filter(|e| e.label).count();
        let n_neg = entries.len() - n_pos;
        if n_pos == 0 {
            return Err(SieveError::NoPositives);
        }
        if n_neg == 0 {
            return Err(SieveError::NoNegatives);
        }
        // sort_by is stable
        entries.sort_by(|a, b| b.score.partial_cmp(&a.score).expect("finite scores"));
        let tie_count = count_tied(&entries);
        Ok(Self { entries, n_pos, n_neg, tie_count })
    }

    pub fn entries(&self) -> &[RankedEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn n_pos(&self) -> usize {
        self.n_pos
    }

    pub fn n_neg(&self) -> usize {
        self.n_neg
    }

    /// Number of entries that share their score with at least one other entry.
    pub fn tie_count(&self) -> usize {
        self.tie_count
    }

    /// True when the sieve boundary at `threshold` cuts through a group of
    /// equal scores, so the split depends on input order.
    pub fn threshold_splits_tie(&self, threshold: usize) -> bool {
        threshold > 0
            && threshold < self.len()
            && self.entries[threshold - 1].score == self.entries[threshold].score
    }

    pub fn confusion_at(&self, threshold: usize) -> Result<ConfusionCounts, SieveError> {
        if threshold > self.len() {
            return Err(SieveError::ThresholdOutOfRange { threshold, len: self.len() });
        }
        let tp = self.entries[..threshold].iter().filter(|e| e.label).count();
        Ok(counts_at(threshold, tp, self.n_pos, self.n_neg))
    }

    /// Confusion counts at every threshold 0..=n, in one pass.
    pub fn sweep(&self) -> Vec<(usize, ConfusionCounts)> {
        let mut out = Vec::with_capacity(self.len() + 1);
        let mut tp = 0;
        out.push((0, counts_at(0, 0, self.n_pos, self.n_neg)));
        for (i, e) in self.entries.iter().enumerate() {
            tp += usize::from(e.label);
            out.push((i + 1, counts_at(i + 1, tp, self.n_pos, self.n_neg)));
        }
        out
    }

    pub fn roc_curve(&self) -> CurveSeries {
        roc_from(&self.sweep())
    }

    pub fn precision_curve(&self) -> CurveSeries {
        precision_from(&self.sweep())
    }

    pub fn correlation_curve(&self) -> CurveSeries {
        correlation_from(&self.sweep(), self.len())
    }

    pub fn analyze(&self) -> SieveReport {
        let mut report = analyze_sweep(&self.sweep(), self.n_pos, self.n_neg);
        report.tie_count = self.tie_count;
        report.split_ties = [Some(report.best.threshold), report.natural.map(|p| p.threshold)]
            .into_iter()
            .flatten()
            .chain(report.full_recall.map(|p| p.threshold))
            .filter(|&t| self.threshold_splits_tie(t))
            .collect();
        report
    }

    /// Spearman between rank position and label, with score ties and label
    /// ties both mid-ranked. Positive when positives sit near the top.
    ///
    /// Rank positions run opposite to score, so this is Spearman between
    /// score and label.
    pub fn binary_spearman(&self) -> Result<CorrelationEstimate, SieveError> {
        let scores: Vec<f64> = self.entries.iter().map(|e| e.score).collect();
        let labels: Vec<f64> = self.entries.iter().map(|e| f64::from(u8::from(e.label))).collect();
        Ok(corrstats::spearman(&scores, &labels)?)
    }
}

fn count_tied(entries: &[RankedEntry]) -> usize {
    let mut tied = 0;
    let mut start = 0;
    while start < entries.len() {
        let mut end = start + 1;
        while end < entries.len() && entries[end].score == entries[start].score {
            end += 1;
        }
        if end - start > 1 {
            tied += end - start;
        }
        start = end;
    }
    tied
}

fn counts_at(threshold: usize, tp: usize, n_pos: usize, n_neg: usize) -> ConfusionCounts {
    let fp = threshold - tp;
    ConfusionCounts::new(tp as u64, fp as u64, (n_pos - tp) as u64, (n_neg - fp) as u64)
}

/// A sieve known only at a few thresholds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SparseSieve {
    pub n_pos: usize,
    pub n_neg: usize,
    /// `(threshold, true positives)`, strictly increasing in threshold.
    pub points: Vec<(usize, usize)>,
}

impl SparseSieve {
    pub fn new(n_pos: usize, n_neg: usize, points: Vec<(usize, usize)>) -> Result<Self, SieveError> {
        let s = Self { n_pos, n_neg, points };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<(), SieveError> {
        if self.n_pos == 0 {
            return Err(SieveError::NoPositives);
        }
        if self.n_neg == 0 {
            return Err(SieveError::NoNegatives);
        }
        let n = self.n_pos + self.n_neg;
        let mut prev: Option<(usize, usize)> = None;
        for &(r, tp) in &self.points {
            let bad = |msg: String| Err(SieveError::InvalidPointSet(msg));
            if r == 0 || r >= n {
                return bad(format!("threshold {r} must lie strictly between 0 and {n}"));
            }
            if tp > r || tp > self.n_pos || r - tp > self.n_neg {
                return bad(format!("tp = {tp} impossible at threshold {r}"));
            }
            if let Some((pr, ptp)) = prev {
                if r <= pr {
                    return bad(format!("thresholds not increasing at {r}"));
                }
                // the sieve only grows
                if tp < ptp || r - tp < pr - ptp {
                    return bad(format!("counts shrink between thresholds {pr} and {r}"));
                }
            }
            prev = Some((r, tp));
        }
        if prev.is_none() {
            return Err(SieveError::InvalidPointSet("no interior thresholds".into()));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.n_pos + self.n_neg
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn confusion_at(&self, threshold: usize) -> Option<ConfusionCounts> {
        self.sweep().into_iter().find(|&(r, _)| r == threshold).map(|(_, c)| c)
    }

    /// The sampled thresholds plus the two endpoints, which are always known.
    pub fn sweep(&self) -> Vec<(usize, ConfusionCounts)> {
        let n = self.len();
        std::iter::once((0, 0))
            .chain(self.points.iter().copied())
            .chain(std::iter::once((n, self.n_pos)))
            .map(|(r, tp)| (r, counts_at(r, tp, self.n_pos, self.n_neg)))
            .collect()
    }

    pub fn analyze(&self) -> SieveReport {
        let mut report = analyze_sweep(&self.sweep(), self.n_pos, self.n_neg);
        report.annotations.extend(self.precision_peak_annotation());
        report
    }

    /// If the sampled precision maximum at `R*` is taken to be the maximum
    /// over all thresholds (first reached there), every `r < R*` must have
    /// `tp(r) < p* r`. That forces `tp(r) = 0` whenever `p* r <= 1`, so the
    /// top `floor(1 / p*)` entries hold no positives.
    pub fn forced_negative_prefix(&self) -> Option<(usize, usize)> {
        let (peak_r, peak_tp) = self.points.iter().copied().filter(|&(_, tp)| tp > 0).fold(
            None,
            |best: Option<(usize, usize)>, (r, tp)| match best {
                // compare tp/r without division
                Some((br, btp)) if tp * br <= btp * r => Some((br, btp)),
                _ => Some((r, tp)),
            },
        )?;
        let prefix = (peak_r / peak_tp).min(peak_r - 1);
        (prefix > 0).then_some((peak_r, prefix))
    }

    fn precision_peak_annotation(&self) -> Option<String> {
        let (peak_r, prefix) = self.forced_negative_prefix()?;
        Some(format!(
            "inferred: if precision peaks at R = {peak_r} over all thresholds, ranks 1..={prefix} hold no positives (unverifiable without the full ranking)"
        ))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CurveKind {
    Roc,
    Precision,
    Correlation,
}

impl CurveKind {
    pub fn name(self) -> &'static str {
        match self {
            CurveKind::Roc => "roc",
            CurveKind::Precision => "precision",
            CurveKind::Correlation => "correlation",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub threshold: usize,
    pub x: f64,
    pub y: f64,
}

/// ROC points are `(fpr, tpr)`; precision and correlation points are
/// `(R, metric)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveSeries {
    pub kind: CurveKind,
    pub points: Vec<CurvePoint>,
    /// Trapezoid area under the curve; ROC only.
    pub auc: Option<f64>,
    #[serde(default)]
    pub notes: Vec<String>,
}

fn roc_from(sweep: &[(usize, ConfusionCounts)]) -> CurveSeries {
    let points: Vec<CurvePoint> = sweep
        .iter()
        .map(|&(r, c)| CurvePoint { threshold: r, x: c.fpr().unwrap_or(0.0), y: c.tpr().unwrap_or(0.0) })
        .collect();
    let auc = points.windows(2).map(|w| (w[1].x - w[0].x) * (w[1].y + w[0].y) / 2.0).sum();
    CurveSeries { kind: CurveKind::Roc, points, auc: Some(auc), notes: Vec::new() }
}

fn precision_from(sweep: &[(usize, ConfusionCounts)]) -> CurveSeries {
    let points = sweep
        .iter()
        .filter(|(r, _)| *r > 0)
        .map(|&(r, c)| CurvePoint { threshold: r, x: r as f64, y: c.precision().unwrap_or(0.0) })
        .collect();
    CurveSeries { kind: CurveKind::Precision, points, auc: None, notes: Vec::new() }
}

fn correlation_from(sweep: &[(usize, ConfusionCounts)], n: usize) -> CurveSeries {
    let points = sweep
        .iter()
        .filter_map(|&(r, c)| {
            let phi = corrstats::phi_from_counts(&c).ok()?;
            Some(CurvePoint { threshold: r, x: r as f64, y: phi.r })
        })
        .collect();
    CurveSeries {
        kind: CurveKind::Correlation,
        points,
        auc: None,
        notes: vec![format!("thresholds 0 and {n} omitted: the sieve is constant there")],
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThresholdPoint {
    pub threshold: usize,
    pub counts: ConfusionCounts,
    /// `None` where the correlation is undefined (empty or total sieve).
    pub r: Option<f64>,
}

impl ThresholdPoint {
    fn at(threshold: usize, counts: ConfusionCounts) -> Self {
        let r = corrstats::phi_from_counts(&counts).ok().map(|e| e.r);
        Self { threshold, counts, r }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SieveReport {
    pub n_pos: usize,
    pub n_neg: usize,
    /// Maximum correlation; smallest threshold on ties.
    pub best: ThresholdPoint,
    /// Threshold equal to the number of positives, where a perfect ranking
    /// gives r = 1. Absent in sparse mode when that threshold was not sampled.
    pub natural: Option<ThresholdPoint>,
    /// Smallest threshold capturing every positive.
    pub full_recall: Option<ThresholdPoint>,
    /// Upper bound on rank-vs-label Spearman for these class sizes.
    pub ceiling: f64,
    pub auc: f64,
    pub curves: Vec<CurveSeries>,
    pub tie_count: usize,
    /// Key thresholds whose boundary falls inside a group of tied scores.
    pub split_ties: Vec<usize>,
    pub annotations: Vec<String>,
}

impl SieveReport {
    pub fn curve(&self, kind: CurveKind) -> Option<&CurveSeries> {
        self.curves.iter().find(|c| c.kind == kind)
    }
}

fn analyze_sweep(sweep: &[(usize, ConfusionCounts)], n_pos: usize, n_neg: usize) -> SieveReport {
    let n = n_pos + n_neg;
    let points: Vec<ThresholdPoint> = sweep.iter().map(|&(r, c)| ThresholdPoint::at(r, c)).collect();

    let best = points
        .iter()
        .filter(|p| p.r.is_some())
        .fold(None::<ThresholdPoint>, |acc, p| match acc {
            Some(a) if a.r >= p.r => Some(a),
            _ => Some(*p),
        })
        .expect("at least one interior threshold");
    let natural = points.iter().find(|p| p.threshold == n_pos).copied();
    let full_recall = points.iter().find(|p| p.counts.tp as usize == n_pos).copied();
    let ceiling = corrstats::binary_rank_ceiling(n_pos, n).map(|e| e.r).expect("both classes non-empty");

    let roc = roc_from(sweep);
    let auc = roc.auc.unwrap_or(0.0);
    SieveReport {
        n_pos,
        n_neg,
        best,
        natural,
        full_recall,
        ceiling,
        auc,
        curves: vec![roc, precision_from(sweep), correlation_from(sweep, n)],
        tie_count: 0,
        split_ties: Vec::new(),
        annotations: Vec::new(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn from_labels(labels: &[u8]) -> LabeledRanking {
        let n = labels.len();
        LabeledRanking::build(
            labels.iter().enumerate().map(|(i, &l)| (format!("e{i}"), (n - i) as f64, l == 1)),
        )
        .unwrap()
    }

    #[test]
    fn build_sorts_descending() {
        let rk = LabeledRanking::build([("a", 3.0, true), ("b", 2.0, false), ("c", 1.0, true)]).unwrap();
        let ids: Vec<_> = rk.entries().iter().map(|e| e.id.as_str()).collect();
        assert_eq!(ids, ["a", "b", "c"]);
        assert_eq!((rk.n_pos(), rk.n_neg()), (2, 1));

        let rk = LabeledRanking::build([("a", 1.0, true), ("b", 2.0, false)]).unwrap();
        assert_eq!(rk.entries()[0].id, "b");
        assert_eq!(rk.tie_count(), 0);
    }

    #[test]
    fn build_is_stable_on_ties() {
        let rows: Vec<_> = (0..100).map(|i| (format!("id{i}"), 7.0, i % 3 == 0)).collect();
        let rk = LabeledRanking::build(rows.clone()).unwrap();
        let got: Vec<_> = rk.entries().iter().map(|e| e.id.clone()).collect();
        let want: Vec<_> = rows.into_iter().map(|r| r.0).collect();
        assert_eq!(got, want);
        assert_eq!(rk.tie_count(), 100);
        assert!(rk.threshold_splits_tie(50));
        assert!(!rk.threshold_splits_tie(0));
        assert!(!rk.threshold_splits_tie(100));
    }

    #[test]
    fn build_errors() {
        assert_eq!(
            LabeledRanking::build([("a", 1.0, false), ("b", 2.0, false)]).unwrap_err(),
            SieveError::NoPositives
        );
        assert_eq!(LabeledRanking::build([("a", 1.0, true)]).unwrap_err(), SieveError::NoNegatives);
        assert_eq!(
            LabeledRanking::build([("a", 1.0, true), ("b", f64::NAN, false)]).unwrap_err(),
            SieveError::NonFiniteScore(1)
        );
    }

    #[test]
    fn confusion_examples() {
        let rk = from_labels(&[1, 0, 1, 0]);
        assert_eq!(rk.confusion_at(2).unwrap(), ConfusionCounts::new(1, 1, 1, 1));
        assert_eq!(rk.confusion_at(0).unwrap(), ConfusionCounts::new(0, 0, 2, 2));
        assert_eq!(rk.confusion_at(4).unwrap(), ConfusionCounts::new(2, 2, 0, 0));
        assert_eq!(rk.confusion_at(5).unwrap_err(), SieveError::ThresholdOutOfRange { threshold: 5, len: 4 });
    }

    #[test]
    fn sweep_matches_pointwise() {
        let rk = from_labels(&[0, 1, 1, 0, 0, 1, 0]);
        for (r, c) in rk.sweep() {
            assert_eq!(c, rk.confusion_at(r).unwrap());
        }
    }

    #[test]
    fn roc_auc() {
        assert_eq!(from_labels(&[1, 1, 0, 0, 0]).roc_curve().auc, Some(1.0));
        assert_eq!(from_labels(&[0, 0, 0, 1, 1]).roc_curve().auc, Some(0.0));
        let roc = from_labels(&[1, 0, 1, 0]).roc_curve();
        assert_eq!(roc.auc, Some(0.75));
        assert_eq!(roc.points.len(), 5);
        assert_eq!((roc.points[0].x, roc.points[0].y), (0.0, 0.0));
        assert_eq!((roc.points[4].x, roc.points[4].y), (1.0, 1.0));
    }

    #[test]
    fn precision_examples() {
        let p = from_labels(&[1, 0, 0]).precision_curve();
        assert_eq!(p.points[0].y, 1.0);
        assert_eq!(p.points.len(), 3);
        let p = from_labels(&[0, 1, 0]).precision_curve();
        assert_eq!(p.points[0].y, 0.0);
        assert_eq!(p.points[1].y, 0.5);
    }

    #[test]
    fn correlation_examples() {
        let c = from_labels(&[1, 1, 0, 0, 0]).correlation_curve();
        assert_eq!(c.points.len(), 4);
        let at_two = c.points.iter().find(|p| p.threshold == 2).unwrap();
        assert!((at_two.y - 1.0).abs() < 1e-15);
        let c = from_labels(&[1, 0, 1, 0]).correlation_curve();
        assert_eq!(c.points.iter().find(|p| p.threshold == 2).unwrap().y, 0.0);
    }

    #[test]
    fn analyze_perfect() {
        let rep = from_labels(&[1, 1, 1, 0, 0, 0, 0]).analyze();
        assert_eq!(rep.best.threshold, 3);
        assert!((rep.best.r.unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(rep.natural.unwrap().threshold, 3);
        assert_eq!(rep.full_recall.unwrap().threshold, 3);
        assert_eq!(rep.auc, 1.0);
    }

    #[test]
    fn analyze_best_takes_smallest_threshold_on_ties() {
        // r at R=1 and R=3 are both 1/3 here
        let rep = from_labels(&[1, 0, 1, 0]).analyze();
        let c = rep.curve(CurveKind::Correlation).unwrap();
        let max = c.points.iter().map(|p| p.y).fold(f64::MIN, f64::max);
        let first = c.points.iter().find(|p| p.y == max).unwrap().threshold;
        assert_eq!(rep.best.threshold, first);
    }

    #[test]
    fn full_recall_at_end_has_no_r() {
        let rep = from_labels(&[0, 0, 1]).analyze();
        let fr = rep.full_recall.unwrap();
        assert_eq!(fr.threshold, 3);
        assert_eq!(fr.r, None);
    }

    #[test]
    fn binary_spearman_examples() {
        let rk = from_labels(&[1, 0, 1, 0]);
        assert!((rk.binary_spearman().unwrap().r - 1.0 / 5f64.sqrt()).abs() < 1e-12);
        let rk = from_labels(&[1, 1, 0, 0, 0, 0]);
        let ceiling = corrstats::binary_rank_ceiling(2, 6).unwrap().r;
        assert!((rk.binary_spearman().unwrap().r - ceiling).abs() < 1e-12);
    }

    #[test]
    fn split_ties_flagged() {
        let rk =
            LabeledRanking::build([("a", 2.0, true), ("b", 1.0, false), ("c", 1.0, true), ("d", 0.0, false)])
                .unwrap();
        assert_eq!(rk.tie_count(), 2);
        let rep = rk.analyze();
        assert_eq!(rep.tie_count, 2);
        assert!(rep.split_ties.iter().all(|&t| t == 2));
    }

    #[test]
    fn sparse_validation() {
        assert!(SparseSieve::new(2, 3, vec![(2, 1), (4, 2)]).is_ok());
        assert!(SparseSieve::new(2, 3, vec![]).is_err());
        assert!(SparseSieve::new(2, 3, vec![(2, 3)]).is_err());
        assert!(SparseSieve::new(2, 3, vec![(3, 1), (2, 1)]).is_err());
        assert!(SparseSieve::new(2, 3, vec![(2, 2), (3, 1)]).is_err());
        assert!(SparseSieve::new(2, 3, vec![(5, 2)]).is_err());
        assert_eq!(SparseSieve::new(0, 3, vec![(1, 0)]).unwrap_err(), SieveError::NoPositives);
    }

    #[test]
    fn sparse_matches_full_at_sampled_points() {
        let rk = from_labels(&[0, 1, 1, 0, 1, 0, 0, 0]);
        let pts: Vec<_> = [1, 3, 5].iter().map(|&r| (r, rk.confusion_at(r).unwrap().tp as usize)).collect();
        let sparse = SparseSieve::new(3, 5, pts).unwrap();
        for (r, c) in sparse.sweep() {
            assert_eq!(c, rk.confusion_at(r).unwrap());
        }
        let full = rk.analyze();
        let part = sparse.analyze();
        assert_eq!(full.full_recall.unwrap().threshold, part.full_recall.unwrap().threshold);
        assert_eq!(full.natural, part.natural);
    }

    #[test]
    fn forced_prefix() {
        // precision peaks at 3/11
        let s = SparseSieve::new(25, 2890, vec![(1, 0), (11, 3), (25, 5), (51, 10)]).unwrap();
        assert_eq!(s.forced_negative_prefix(), Some((11, 3)));
        assert_eq!(s.analyze().annotations.len(), 1);
        // peak at the first entry gives no information
        let s = SparseSieve::new(2, 3, vec![(1, 1)]).unwrap();
        assert_eq!(s.forced_negative_prefix(), None);
    }
}
