//! Analyzes the built-in prize sieve, known only at a handful of thresholds.
//!
//! cargo run -p luckmeter --example nobel_sieve

use luckmeter::dataio::embedded_nobel;
use luckmeter::sieve::CurveKind;

fn main() {
    let sieve = embedded_nobel().to_sparse();
    let report = sieve.analyze();
    println!("{:>6} {:>4} {:>4} {:>8} {:>8} {:>8}", "R", "tp", "fp", "tpr", "fpr", "r");
    for (r, c) in sieve.sweep() {
        let phi = luckmeter::corrstats::phi_from_counts(&c).map(|e| format!("{:.4}", e.r));
        println!(
            "{:>6} {:>4} {:>4} {:>8.4} {:>8.4} {:>8}",
            r,
            c.tp,
            c.fp,
            c.tpr().unwrap_or(0.0),
            c.fpr().unwrap_or(0.0),
            phi.unwrap_or_else(|_| "-".into())
        );
    }
    println!("best r {:.4} at R = {}", report.best.r.unwrap_or(f64::NAN), report.best.threshold);
    println!("AUC {:.4} over sampled points", report.auc);
    if let Some(prec) = report.curve(CurveKind::Precision) {
        let peak = prec.points.iter().fold(0.0f64, |m, p| m.max(p.y));
        println!("peak sampled precision {peak:.4}");
    }
    for note in &report.annotations {
        println!("note: {note}");
    }
}
