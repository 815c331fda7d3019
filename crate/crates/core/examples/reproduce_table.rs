//! Prints the reference comparison table.
//!
//! cargo run -p luckmeter --example reproduce_table

use luckmeter::reproduce;

fn main() {
    let rows = reproduce::rows();
    print!("{}", reproduce::render_table(&rows));
    std::process::exit(if reproduce::all_pass(&rows) { 0 } else { 1 });
}
