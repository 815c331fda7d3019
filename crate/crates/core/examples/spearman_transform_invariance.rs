//! Spearman is unchanged by monotone transforms; Pearson is not.
//!
//! cargo run -p luckmeter --example spearman_transform_invariance

use luckmeter::corrstats::{pearson, spearman};

type Map = fn(f64) -> f64;

fn identity(v: f64) -> f64 {
    v
}

fn main() {
    let x: Vec<f64> = (1..=30).map(f64::from).collect();
    let y: Vec<f64> = x.iter().map(|v| v * v + 40.0 * (v * 1.7).sin()).collect();
    println!("{:>10} {:>9} {:>9}", "x mapped", "pearson", "spearman");
    for (name, f) in [("identity", identity as Map), ("exp(v/5)", |v| (v / 5.0).exp()), ("ln", f64::ln)] {
        let fx: Vec<f64> = x.iter().map(|&v| f(v)).collect();
        let p = pearson(&fx, &y).expect("varying").r;
        let s = spearman(&fx, &y).expect("varying").r;
        println!("{name:>10} {p:>9.4} {s:>9.4}");
    }
}
