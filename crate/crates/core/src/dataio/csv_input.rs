use std::collections::HashSet;

use super::{format_sig6, DataError};
use crate::sieve::{LabeledRanking, RankedEntry};

const RANKING_HEADER: [&str; 3] = ["id", "score", "label"];
const PAIRED_HEADER: [&str; 3] = ["id", "x", "y"];

fn reader(text: &str) -> csv::Reader<&[u8]> {
    csv::ReaderBuilder::new().has_headers(true).from_reader(text.as_bytes())
}

fn check_header(
    rdr: &mut csv::Reader<&[u8]>,
    want: [&str; 3],
    expected: &'static str,
) -> Result<(), DataError> {
    let headers = rdr.headers().map_err(|e| DataError::from_csv(&e))?;
    if headers.iter().ne(want) {
        return Err(DataError::MalformedHeader {
            expected,
            found: headers.iter().collect::<Vec<_>>().join(","),
        });
    }
    Ok(())
}

fn parse_finite(field: &str) -> Option<f64> {
    field.trim().parse::<f64>().ok().filter(|v| v.is_finite())
}

/// Parses `id,score,label` CSV into a ranking. Header and column order are
/// strict; line numbers in errors are 1-based and count the header.
pub fn parse_labeled_csv(text: &str) -> Result<LabeledRanking, DataError> {
    let mut rdr = reader(text);
    check_header(&mut rdr, RANKING_HEADER, "id,score,label")?;
    let mut seen = HashSet::new();
    let mut entries = Vec::new();
    for record in rdr.records() {
        let record = record.map_err(|e| DataError::from_csv(&e))?;
        let line = record.position().map(|p| p.line()).unwrap_or(0);
        let id = &record[0];
        let score = parse_finite(&record[1]).ok_or(DataError::BadScore(line))?;
        let label = match record[2].trim() {
            "0" => false,
            "1" => true,
            _ => return Err(DataError::BadLabel(line)),
        };
        if !seen.insert(id.to_string()) {
            return Err(DataError::DuplicateId(line));
        }
        entries.push(RankedEntry { id: id.to_string(), score, label, source_row: Some(line as usize) });
    }
    Ok(LabeledRanking::from_entries(entries)?)
}

/// Writes a ranking back as `id,score,label`, in rank order, scores at six
/// significant digits.
pub fn write_ranking_csv(ranking: &LabeledRanking) -> String {
    let mut out = String::from("id,score,label\n");
    for e in ranking.entries() {
        out.push_str(&format!("{},{},{}\n", csv_field(&e.id), format_sig6(e.score), u8::from(e.label)));
    }
    out
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Paired measurements read from `id,x,y` CSV.
#[derive(Debug, Clone, PartialEq)]
pub struct PairedSample {
    pub ids: Vec<String>,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
}

pub fn parse_paired_csv(text: &str) -> Result<PairedSample, DataError> {
    let mut rdr = reader(text);
    check_header(&mut rdr, PAIRED_HEADER, "id,x,y")?;
    let mut seen = HashSet::new();
    let mut sample = PairedSample { ids: Vec::new(), x: Vec::new(), y: Vec::new() };
    for record in rdr.records() {
        let record = record.map_err(|e| DataError::from_csv(&e))?;
        let line = record.position().map(|p| p.line()).unwrap_or(0);
        let x = parse_finite(&record[1]).ok_or(DataError::BadValue { line, column: "x" })?;
        let y = parse_finite(&record[2]).ok_or(DataError::BadValue { line, column: "y" })?;
        if !seen.insert(record[0].to_string()) {
            return Err(DataError::DuplicateId(line));
        }
        sample.ids.push(record[0].to_string());
        sample.x.push(x);
        sample.y.push(y);
    }
    Ok(sample)
}
