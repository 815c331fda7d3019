//! How high a rank correlation with a rare binary label can go, compared
//! with a brute-force search over placements on a small grid.
//!
//! cargo run -p luckmeter --example rank_ceiling

use luckmeter::corrstats::{binary_rank_ceiling, spearman};

fn brute_force(n_pos: usize, n: usize) -> f64 {
    // every contiguous block of positives
    let ranks: Vec<f64> = (1..=n).map(|r| r as f64).collect();
    (0..=n - n_pos)
        .map(|start| {
            let labels: Vec<f64> =
                (0..n).map(|i| f64::from(u8::from((start..start + n_pos).contains(&i)))).collect();
            spearman(&ranks, &labels).expect("both classes present").r.abs()
        })
        .fold(0.0, f64::max)
}

fn main() {
    for (n_pos, n) in [(1, 10), (5, 20), (10, 20), (25, 2915)] {
        let ceiling = binary_rank_ceiling(n_pos, n).expect("valid counts").r;
        let shown = if n <= 100 { format!("{:.4}", brute_force(n_pos, n)) } else { "-".into() };
        println!("n_pos {n_pos:>4}  n {n:>5}  ceiling {ceiling:.4}  search {shown}");
    }
}
