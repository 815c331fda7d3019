//! Writes ROC, precision and correlation plots for a synthetic ranking.
//!
//! cargo run -p luckmeter --example render_curves [out-dir]

use luckmeter::dataio::{render_svg, SvgOptions};
use luckmeter::sieve::{CurveKind, LabeledRanking};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() {
    let dir = std::env::args().nth(1).unwrap_or_else(|| "curves".into());
    std::fs::create_dir_all(&dir).expect("output directory");
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let rows = (0..500).map(|i| {
        let label = i < 30;
        let score = rng.gen::<f64>() + if label { 0.6 } else { 0.0 };
        (format!("x{i}"), score, label)
    });
    let report = LabeledRanking::build(rows).expect("both classes").analyze();
    for kind in [CurveKind::Roc, CurveKind::Precision, CurveKind::Correlation] {
        let svg = render_svg(report.curve(kind).expect("curve"), &SvgOptions::default()).expect("non-empty");
        let path = format!("{dir}/{}.svg", kind.name());
        std::fs::write(&path, svg).expect("writable");
        println!("wrote {path}");
    }
}
