use std::fmt::Write;

use super::DataError;
use crate::sieve::{CurveKind, CurveSeries};

#[derive(Debug, Clone, PartialEq)]
pub struct SvgOptions {
    pub width: f64,
    pub height: f64,
    /// Defaults to a title derived from the curve kind.
    pub title: Option<String>,
}

impl Default for SvgOptions {
    fn default() -> Self {
        Self { width: 640.0, height: 480.0, title: None }
    }
}

const MARGIN_LEFT: f64 = 70.0;
const MARGIN_RIGHT: f64 = 20.0;
const MARGIN_TOP: f64 = 40.0;
const MARGIN_BOTTOM: f64 = 55.0;
const TICKS: usize = 5;

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

struct Frame {
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
    left: f64,
    right: f64,
    top: f64,
    bottom: f64,
}

impl Frame {
    fn px(&self, x: f64) -> f64 {
        self.left + (x - self.x0) / (self.x1 - self.x0) * (self.right - self.left)
    }

    fn py(&self, y: f64) -> f64 {
        self.bottom - (y - self.y0) / (self.y1 - self.y0) * (self.bottom - self.top)
    }
}

fn data_range(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
    if lo == hi {
        (lo - 0.5, hi + 0.5)
    } else {
        (lo, hi)
    }
}

fn labels(kind: CurveKind) -> (&'static str, &'static str, &'static str) {
    match kind {
        CurveKind::Roc => ("ROC curve", "false positive rate", "true positive rate"),
        CurveKind::Precision => ("Precision by rank threshold", "rank threshold R", "precision"),
        CurveKind::Correlation => ("Correlation by rank threshold", "rank threshold R", "phi correlation"),
    }
}

/// Renders a curve as a standalone SVG 1.1 document. Output depends only on
/// the inputs.
pub fn render_svg(curve: &CurveSeries, options: &SvgOptions) -> Result<String, DataError> {
    if curve.points.is_empty() {
        return Err(DataError::EmptyCurve);
    }
    let (default_title, x_label, y_label) = labels(curve.kind);
    let title = options.title.as_deref().unwrap_or(default_title);

    let ((x0, x1), (y0, y1)) = match curve.kind {
        CurveKind::Roc => ((0.0, 1.0), (0.0, 1.0)),
        CurveKind::Precision => (data_range(curve.points.iter().map(|p| p.x)), (0.0, 1.0)),
        CurveKind::Correlation => {
            let (lo, hi) = data_range(curve.points.iter().map(|p| p.y));
            (data_range(curve.points.iter().map(|p| p.x)), (lo.min(0.0), hi.max(0.0)))
        }
    };
    let f = Frame {
        x0,
        x1,
        y0,
        y1,
        left: MARGIN_LEFT,
        right: options.width - MARGIN_RIGHT,
        top: MARGIN_TOP,
        bottom: options.height - MARGIN_BOTTOM,
    };

    let mut s = String::new();
    let w = &mut s;
    // write! into a String cannot fail
    let _ = writeln!(w, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        w,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{:.0}" height="{:.0}" viewBox="0 0 {:.0} {:.0}">"#,
        options.width, options.height, options.width, options.height
    );
    let _ = writeln!(
        w,
        r#"<rect x="0" y="0" width="{:.0}" height="{:.0}" fill="white"/>"#,
        options.width, options.height
    );
    let _ = writeln!(
        w,
        r#"<text x="{:.2}" y="24" text-anchor="middle" font-family="sans-serif" font-size="16">{}</text>"#,
        options.width / 2.0,
        escape(title)
    );

    // axes
    let _ = writeln!(
        w,
        r#"<path d="M{:.2},{:.2} L{:.2},{:.2} L{:.2},{:.2}" fill="none" stroke="black"/>"#,
        f.left, f.top, f.left, f.bottom, f.right, f.bottom
    );
    let integer_x = curve.kind != CurveKind::Roc;
    for i in 0..=TICKS {
        let t = i as f64 / TICKS as f64;
        let xv = x0 + t * (x1 - x0);
        let yv = y0 + t * (y1 - y0);
        let (px, py) = (f.px(xv), f.py(yv));
        let x_text = if integer_x { format!("{xv:.0}") } else { format!("{xv:.2}") };
        let _ = writeln!(
            w,
            r#"<line x1="{px:.2}" y1="{:.2}" x2="{px:.2}" y2="{:.2}" stroke="black"/><text x="{px:.2}" y="{:.2}" text-anchor="middle" font-family="sans-serif" font-size="11">{x_text}</text>"#,
            f.bottom,
            f.bottom + 5.0,
            f.bottom + 18.0
        );
        let _ = writeln!(
            w,
            r#"<line x1="{:.2}" y1="{py:.2}" x2="{:.2}" y2="{py:.2}" stroke="black"/><text x="{:.2}" y="{:.2}" text-anchor="end" font-family="sans-serif" font-size="11">{yv:.2}</text>"#,
            f.left - 5.0,
            f.left,
            f.left - 8.0,
            py + 4.0
        );
    }
    let _ = writeln!(
        w,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle" font-family="sans-serif" font-size="13">{}</text>"#,
        (f.left + f.right) / 2.0,
        options.height - 12.0,
        x_label
    );
    let _ = writeln!(
        w,
        r#"<text x="18" y="{:.2}" text-anchor="middle" font-family="sans-serif" font-size="13" transform="rotate(-90 18 {:.2})">{}</text>"#,
        (f.top + f.bottom) / 2.0,
        (f.top + f.bottom) / 2.0,
        y_label
    );

    match curve.kind {
        CurveKind::Roc => {
            let _ = writeln!(
                w,
                r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="gray" stroke-dasharray="4 4"/>"#,
                f.px(0.0),
                f.py(0.0),
                f.px(1.0),
                f.py(1.0)
            );
        }
        CurveKind::Correlation if y0 < 0.0 => {
            let _ = writeln!(
                w,
                r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="gray" stroke-dasharray="4 4"/>"#,
                f.left,
                f.py(0.0),
                f.right,
                f.py(0.0)
            );
        }
        _ => {}
    }

    let _ = write!(w, r#"<polyline fill="none" stroke="steelblue" stroke-width="1.5" points=""#);
    for (i, p) in curve.points.iter().enumerate() {
        if i > 0 {
            w.push(' ');
        }
        let _ = write!(w, "{:.2},{:.2}", f.px(p.x), f.py(p.y));
    }
    let _ = writeln!(w, r#""/>"#);
    if let Some(auc) = curve.auc {
        let _ = writeln!(
            w,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end" font-family="sans-serif" font-size="12">AUC = {auc:.4}</text>"#,
            f.right - 6.0,
            f.bottom - 10.0
        );
    }
    s.push_str("</svg>\n");
    Ok(s)
}
