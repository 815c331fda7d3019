//! Recomputes every published reference number that the embedded data and
//! closed forms allow, and compares each with its reported value.

use serde::Serialize;

use crate::corrstats::{self, RegressionEstimate};
use crate::dataio::embedded_nobel;

/// Absolute tolerance for values reported to two significant figures.
pub const PUBLISHED_TOLERANCE: f64 = 0.01;
/// The wine conversion is reported to three decimals.
pub const WINE_TOLERANCE: f64 = 0.001;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Pass,
    Fail,
    /// Our independent derivation contradicts the reported value; shown but
    /// never counted as a failure.
    Disputed,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Row {
    pub label: &'static str,
    pub published: f64,
    pub computed: f64,
    pub tolerance: f64,
    pub status: Status,
}

impl Row {
    fn check(label: &'static str, published: f64, computed: f64, tolerance: f64) -> Self {
        let status = if (computed - published).abs() <= tolerance { Status::Pass } else { Status::Fail };
        Self { label, published, computed, tolerance, status }
    }

    fn disputed(label: &'static str, published: f64, computed: f64) -> Self {
        Self { label, published, computed, tolerance: PUBLISHED_TOLERANCE, status: Status::Disputed }
    }

    pub fn delta(&self) -> f64 {
        (self.computed - self.published).abs()
    }
}

/// All rows pass (disputed rows excepted).
pub fn all_pass(rows: &[Row]) -> bool {
    rows.iter().all(|r| r.status != Status::Fail)
}

pub fn rows() -> Vec<Row> {
    let data = embedded_nobel();
    let (n_pos, n_neg) = (data.n_pos as u64, data.n_neg as u64);
    let eq1_at = |threshold: usize| {
        let p = data.point(threshold).expect("embedded threshold");
        corrstats::r_from_rates(p.tp as f64 / n_pos as f64, p.fp as f64 / n_neg as f64, n_pos, n_neg)
            .expect("non-degenerate point")
            .r
    };

    let sieve = data.to_sparse();
    let report = sieve.analyze();
    let precision = report.curve(crate::sieve::CurveKind::Precision).expect("precision curve");
    let precision_at = |threshold: usize| {
        precision.points.iter().find(|p| p.threshold == threshold).map(|p| p.y).expect("sampled threshold")
    };
    let full_recall = report.full_recall.expect("embedded data reaches full recall");
    let natural = report.natural.expect("R = n_pos is sampled");

    let ci95 = corrstats::fisher_ci(-0.71, 13, 0.95).expect("valid interval");
    let ci99 = corrstats::fisher_ci(-0.71, 13, 0.99).expect("valid interval");
    let wine = corrstats::r_from_regression(&RegressionEstimate {
        b1: -0.04,
        range_num: 3.0,
        range_den: (150.0f64 / 1.65).ln(),
    })
    .expect("positive ranges");
    let ceiling =
        corrstats::binary_rank_ceiling(data.n_pos, data.n_pos + data.n_neg).expect("valid counts").r;
    let prefix = sieve.forced_negative_prefix().map(|(_, k)| k).unwrap_or(0);

    vec![
        Row::check("Eq1@R=759", 0.16, eq1_at(759), PUBLISHED_TOLERANCE),
        Row::check("Eq1@R=11", 0.18, eq1_at(11), PUBLISHED_TOLERANCE),
        Row::check("Eq1@R=51", 0.27, eq1_at(51), PUBLISHED_TOLERANCE),
        Row::check("Eq1@R=25", 0.19, eq1_at(25), PUBLISHED_TOLERANCE),
        Row::check(
            "Eq1 nO=28",
            0.77,
            corrstats::r_from_rates(1.0, 0.25, 25, 28).expect("valid rates").r,
            PUBLISHED_TOLERANCE,
        ),
        Row::check("FPR@R=759", 0.25, full_recall.counts.fpr().unwrap_or(f64::NAN), PUBLISHED_TOLERANCE),
        Row::check("full-recall R", 759.0, full_recall.threshold as f64, 0.0),
        Row::check("Precision@R=1", 0.0, precision_at(1), PUBLISHED_TOLERANCE),
        Row::check("Precision@R=11", 0.27, precision_at(11), PUBLISHED_TOLERANCE),
        Row::check("negative prefix length", 3.0, prefix as f64, 0.0),
        Row::check("best R", 51.0, report.best.threshold as f64, 0.0),
        Row::check("best r", 0.27, report.best.r.unwrap_or(f64::NAN), PUBLISHED_TOLERANCE),
        Row::check("natural r (R=nN)", 0.19, natural.r.unwrap_or(f64::NAN), PUBLISHED_TOLERANCE),
        Row::check("FisherCI95 upper", -0.27, ci95.upper, PUBLISHED_TOLERANCE),
        Row::check("FisherCI99 upper", -0.080, ci99.upper, PUBLISHED_TOLERANCE),
        Row::check("wine r", -0.027, wine.r, WINE_TOLERANCE),
        Row::disputed("ceiling(25,2915)", 0.21, ceiling),
    ]
}

pub fn render_table(rows: &[Row]) -> String {
    let width = rows.iter().map(|r| r.label.len()).max().unwrap_or(5).max(5);
    let mut out = format!(
        "{:<width$}  {:>10}  {:>10}  {:>8}  {:>6}  {}\n",
        "label", "published", "computed", "|delta|", "tol", "status"
    );
    for r in rows {
        let status = match r.status {
            Status::Pass => "pass",
            Status::Fail => "FAIL",
            Status::Disputed => "DISPUTED",
        };
        out.push_str(&format!(
            "{:<width$}  {:>10.4}  {:>10.4}  {:>8.4}  {:>6.3}  {}\n",
            r.label,
            r.published,
            r.computed,
            r.delta(),
            r.tolerance,
            status
        ));
    }
    out
}
