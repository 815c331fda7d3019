//! Same hit rate and false-alarm rate, very different correlations once the
//! classes are unbalanced.
//!
//! cargo run -p luckmeter --example eq1_imbalance

use luckmeter::corrstats::r_from_rates;

fn main() {
    let (tpr, fpr) = (0.8, 0.2);
    println!("tpr = {tpr}, fpr = {fpr}");
    println!("{:>8} {:>8} {:>8}", "n_pos", "n_neg", "r");
    for (n_pos, n_neg) in [(500, 500), (100, 900), (25, 2890), (10, 100_000)] {
        let r = r_from_rates(tpr, fpr, n_pos, n_neg).expect("valid rates").r;
        println!("{n_pos:>8} {n_neg:>8} {r:>8.4}");
    }
}
