//! Fisher r-to-z intervals for a small-sample correlation at several levels.
//!
//! cargo run -p luckmeter --example fisher_interval

use luckmeter::corrstats::fisher_ci;

fn main() {
    let (r, n) = (-0.71, 13);
    for level in [0.90, 0.95, 0.99] {
        let ci = fisher_ci(r, n, level).expect("valid interval");
        println!("r = {r}, n = {n}, {:.0}%: [{:.4}, {:.4}]", level * 100.0, ci.lower, ci.upper);
    }
}
