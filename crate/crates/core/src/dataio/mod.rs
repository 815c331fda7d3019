//! Input parsing, the embedded Nobel point set, and report/curve output.

mod csv_input;
mod nobel;
mod report;
mod svg;

use thiserror::Error;

use crate::sieve::SieveError;

pub use csv_input::{parse_labeled_csv, parse_paired_csv, write_ranking_csv, PairedSample};
pub use nobel::{embedded_nobel, EmbeddedNobelPoints, NobelPoint};
pub use report::{
    digest_bytes, format_sig6, read_report, write_report, Format, Provenance, ReportDocument, ReportMetadata,
    ReportValue,
};
pub use svg::{render_svg, SvgOptions};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DataError {
    #[error("malformed header: expected `{expected}`, found `{found}`")]
    MalformedHeader { expected: &'static str, found: String },
    #[error("line {0}: label must be 0 or 1")]
    BadLabel(u64),
    #[error("line {0}: score is not a finite number")]
    BadScore(u64),
    #[error("line {line}: `{column}` is not a finite number")]
    BadValue { line: u64, column: &'static str },
    #[error("line {0}: duplicate id")]
    DuplicateId(u64),
    #[error("line {line}: {message}")]
    Csv { line: u64, message: String },
    #[error("cannot render an empty curve")]
    EmptyCurve,
    #[error("report: {0}")]
    Report(String),
    #[error(transparent)]
    Ranking(#[from] SieveError),
}

impl DataError {
    fn from_csv(err: &csv::Error) -> Self {
        let line = err.position().map(|p| p.line()).unwrap_or(0);
        DataError::Csv { line, message: err.to_string() }
    }
}
