//! Parses a labeled ranking from CSV and writes a canonical JSON report.
//!
//! cargo run -p luckmeter --example analyze_csv [path/to/ranking.csv]

use luckmeter::dataio::{
    digest_bytes, parse_labeled_csv, write_report, Format, ReportDocument, ReportMetadata,
};

const SAMPLE: &str = "id,score,label
ada,9.1,1
bo,8.7,0
cy,8.2,1
di,7.5,0
ed,7.5,0
fa,6.0,1
gu,4.4,0
hu,3.9,0
";

fn main() {
    let text = match std::env::args().nth(1) {
        Some(path) => std::fs::read_to_string(path).expect("readable input"),
        None => SAMPLE.to_string(),
    };
    let ranking = parse_labeled_csv(&text).expect("valid ranking");
    let report = ranking.analyze();
    let doc = ReportDocument::from_sieve(
        &report,
        ReportMetadata::new("analyze", None),
        digest_bytes(text.as_bytes()),
    );
    print!("{}", String::from_utf8(write_report(&doc, Format::Json)).expect("utf-8"));
}
