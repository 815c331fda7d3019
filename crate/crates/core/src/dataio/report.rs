//! Report documents and their canonical serializations.
//!
//! Both formats are canonical: JSON objects have sorted keys, every real is
//! written with six significant digits, and lines end in LF. Writing a
//! document that was read back from canonical output reproduces the same
//! bytes.

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use super::DataError;
use crate::corrstats::ConfusionCounts;
use crate::sieve::{CurveKind, CurvePoint, CurveSeries, SieveReport, ThresholdPoint};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

/// Where a number came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    /// Computed from the input data.
    Computed,
    /// Computed by an independent closed form or oracle.
    Derived,
    /// A published reference value.
    Published,
}

impl Provenance {
    fn as_str(self) -> &'static str {
        match self {
            Provenance::Computed => "computed",
            Provenance::Derived => "derived",
            Provenance::Published => "published",
        }
    }

    fn parse(s: &str) -> Option<Self> {
        match s {
            "computed" => Some(Provenance::Computed),
            "derived" => Some(Provenance::Derived),
            "published" => Some(Provenance::Published),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportMetadata {
    pub tool_version: String,
    pub command: String,
    pub seed: Option<u64>,
    /// Left empty in files that must be byte-reproducible.
    pub timestamp: Option<String>,
}

impl ReportMetadata {
    pub fn new(command: &str, seed: Option<u64>) -> Self {
        Self {
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.to_string(),
            seed,
            timestamp: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportValue {
    pub name: String,
    pub value: Option<f64>,
    pub threshold: Option<usize>,
    pub counts: Option<ConfusionCounts>,
    pub provenance: Provenance,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub metadata: ReportMetadata,
    /// SHA-256 of the canonicalized input, hex.
    pub input_digest: String,
    pub n_pos: usize,
    pub n_neg: usize,
    pub tie_count: usize,
    pub values: Vec<ReportValue>,
    pub curves: Vec<CurveSeries>,
    pub annotations: Vec<String>,
}

impl ReportDocument {
    pub fn from_sieve(report: &SieveReport, metadata: ReportMetadata, input_digest: String) -> Self {
        let at = |name: &str, p: &ThresholdPoint| ReportValue {
            name: name.to_string(),
            value: p.r,
            threshold: Some(p.threshold),
            counts: Some(p.counts),
            provenance: Provenance::Computed,
        };
        let mut values = vec![at("best_r", &report.best)];
        values.extend(report.natural.as_ref().map(|p| at("natural_r", p)));
        values.extend(report.full_recall.as_ref().map(|p| at("full_recall_r", p)));
        values.push(ReportValue {
            name: "auc".into(),
            value: Some(report.auc),
            threshold: None,
            counts: None,
            provenance: Provenance::Computed,
        });
        values.push(ReportValue {
            name: "rank_ceiling".into(),
            value: Some(report.ceiling),
            threshold: None,
            counts: None,
            provenance: Provenance::Derived,
        });
        let mut annotations = report.annotations.clone();
        annotations
            .extend(report.split_ties.iter().map(|t| format!("threshold {t} splits a group of tied scores")));
        Self {
            metadata,
            input_digest,
            n_pos: report.n_pos,
            n_neg: report.n_neg,
            tie_count: report.tie_count,
            values,
            curves: report.curves.clone(),
            annotations,
        }
    }

    pub fn value(&self, name: &str) -> Option<&ReportValue> {
        self.values.iter().find(|v| v.name == name)
    }
}

pub fn digest_bytes(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

/// Six significant digits: fixed notation for magnitudes in [1e-5, 1e5),
/// exponent notation otherwise. Always contains a `.`.
pub fn format_sig6(x: f64) -> String {
    if x == 0.0 {
        return "0.00000".to_string();
    }
    let sci = format!("{x:.5e}");
    let exp: i32 = sci.rsplit('e').next().and_then(|e| e.parse().ok()).unwrap_or(0);
    if (-5..5).contains(&exp) {
        format!("{:.*}", (5 - exp) as usize, x)
    } else {
        sci
    }
}

pub fn write_report(doc: &ReportDocument, format: Format) -> Vec<u8> {
    match format {
        Format::Json => {
            let value = serde_json::to_value(doc).expect("report serializes");
            let mut out = String::new();
            write_canonical(&value, 0, &mut out);
            out.push('\n');
            out.into_bytes()
        }
        Format::Csv => write_csv(doc),
    }
}

pub fn read_report(bytes: &[u8], format: Format) -> Result<ReportDocument, DataError> {
    match format {
        Format::Json => serde_json::from_slice(bytes).map_err(|e| DataError::Report(e.to_string())),
        Format::Csv => read_csv(bytes),
    }
}

fn write_canonical(value: &Value, depth: usize, out: &mut String) {
    let pad = |d: usize| "  ".repeat(d);
    match value {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => match (n.as_u64(), n.as_i64()) {
            (Some(u), _) => out.push_str(&u.to_string()),
            (None, Some(i)) => out.push_str(&i.to_string()),
            _ => out.push_str(&format_sig6(n.as_f64().unwrap_or(0.0))),
        },
        Value::String(s) => out.push_str(&serde_json::to_string(s).expect("string serializes")),
        Value::Array(items) => {
            if items.is_empty() {
                out.push_str("[]");
                return;
            }
            out.push_str("[\n");
            for (i, item) in items.iter().enumerate() {
                out.push_str(&pad(depth + 1));
                write_canonical(item, depth + 1, out);
                out.push_str(if i + 1 < items.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(depth));
            out.push(']');
        }
        Value::Object(map) => {
            if map.is_empty() {
                out.push_str("{}");
                return;
            }
            let mut keys: Vec<&String> = map.keys().collect();
            keys.sort();
            out.push_str("{\n");
            for (i, key) in keys.iter().enumerate() {
                out.push_str(&pad(depth + 1));
                out.push_str(&serde_json::to_string(key).expect("key serializes"));
                out.push_str(": ");
                write_canonical(&map[key.as_str()], depth + 1, out);
                out.push_str(if i + 1 < keys.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(depth));
            out.push('}');
        }
    }
}

const CSV_HEADER: [&str; 10] = ["record", "name", "threshold", "tp", "fp", "fn", "tn", "x", "y", "text"];

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|v| v.to_string()).unwrap_or_default()
}

fn write_csv(doc: &ReportDocument) -> Vec<u8> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    let mut row = |cells: [String; 10]| w.write_record(&cells).expect("in-memory write");
    let e = String::new;
    row(CSV_HEADER.map(String::from));

    let m = &doc.metadata;
    let meta = [
        ("tool_version", Some(m.tool_version.clone())),
        ("command", Some(m.command.clone())),
        ("seed", m.seed.map(|s| s.to_string())),
        ("timestamp", m.timestamp.clone()),
        ("input_digest", Some(doc.input_digest.clone())),
    ];
    for (key, val) in meta {
        if let Some(val) = val {
            row(["meta".into(), key.into(), e(), e(), e(), e(), e(), e(), e(), val]);
        }
    }
    for (key, val) in [("n_pos", doc.n_pos), ("n_neg", doc.n_neg), ("tie_count", doc.tie_count)] {
        row(["count".into(), key.into(), e(), e(), e(), e(), e(), e(), val.to_string(), e()]);
    }
    for v in &doc.values {
        let c = v.counts;
        row([
            "value".into(),
            v.name.clone(),
            opt(v.threshold),
            opt(c.map(|c| c.tp)),
            opt(c.map(|c| c.fp)),
            opt(c.map(|c| c.fn_)),
            opt(c.map(|c| c.tn)),
            e(),
            opt(v.value.map(format_sig6)),
            v.provenance.as_str().into(),
        ]);
    }
    for curve in &doc.curves {
        let kind = curve.kind.name().to_string();
        row(["curve".into(), kind.clone(), e(), e(), e(), e(), e(), e(), e(), e()]);
        for p in &curve.points {
            row([
                "point".into(),
                kind.clone(),
                p.threshold.to_string(),
                e(),
                e(),
                e(),
                e(),
                format_sig6(p.x),
                format_sig6(p.y),
                e(),
            ]);
        }
        if let Some(auc) = curve.auc {
            row(["auc".into(), kind.clone(), e(), e(), e(), e(), e(), e(), format_sig6(auc), e()]);
        }
        for note in &curve.notes {
            row(["note".into(), kind.clone(), e(), e(), e(), e(), e(), e(), e(), note.clone()]);
        }
    }
    for a in &doc.annotations {
        row(["annotation".into(), e(), e(), e(), e(), e(), e(), e(), e(), a.clone()]);
    }
    w.into_inner().expect("in-memory flush")
}

fn read_csv(bytes: &[u8]) -> Result<ReportDocument, DataError> {
    let bad = |line: u64, what: &str| DataError::Report(format!("line {line}: {what}"));
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(bytes);
    let headers = rdr.headers().map_err(|e| DataError::from_csv(&e))?;
    if headers.iter().ne(CSV_HEADER) {
        return Err(DataError::Report("unexpected CSV header".into()));
    }

    let mut doc = ReportDocument {
        metadata: ReportMetadata {
            tool_version: String::new(),
            command: String::new(),
            seed: None,
            timestamp: None,
        },
        input_digest: String::new(),
        n_pos: 0,
        n_neg: 0,
        tie_count: 0,
        values: Vec::new(),
        curves: Vec::new(),
        annotations: Vec::new(),
    };

    for record in rdr.records() {
        let rec = record.map_err(|e| DataError::from_csv(&e))?;
        let line = rec.position().map(|p| p.line()).unwrap_or(0);
        let int = |i: usize| -> Result<Option<u64>, DataError> {
            match &rec[i] {
                "" => Ok(None),
                s => s.parse().map(Some).map_err(|_| bad(line, "bad integer")),
            }
        };
        let real = |i: usize| -> Result<Option<f64>, DataError> {
            match &rec[i] {
                "" => Ok(None),
                s => s.parse().map(Some).map_err(|_| bad(line, "bad number")),
            }
        };
        let kind = || -> Result<CurveKind, DataError> {
            match &rec[1] {
                "roc" => Ok(CurveKind::Roc),
                "precision" => Ok(CurveKind::Precision),
                "correlation" => Ok(CurveKind::Correlation),
                _ => Err(bad(line, "unknown curve kind")),
            }
        };
        let current = |doc: &mut ReportDocument| -> Result<usize, DataError> {
            let k = kind()?;
            match doc.curves.last() {
                Some(c) if c.kind == k => Ok(doc.curves.len() - 1),
                _ => Err(bad(line, "curve row outside its curve")),
            }
        };
        match &rec[0] {
            "meta" => {
                let text = rec[9].to_string();
                match &rec[1] {
                    "tool_version" => doc.metadata.tool_version = text,
                    "command" => doc.metadata.command = text,
                    "seed" => doc.metadata.seed = Some(text.parse().map_err(|_| bad(line, "bad seed"))?),
                    "timestamp" => doc.metadata.timestamp = Some(text),
                    "input_digest" => doc.input_digest = text,
                    _ => return Err(bad(line, "unknown meta key")),
                }
            }
            "count" => {
                let v = int(8)?.ok_or_else(|| bad(line, "missing count"))? as usize;
                match &rec[1] {
                    "n_pos" => doc.n_pos = v,
                    "n_neg" => doc.n_neg = v,
                    "tie_count" => doc.tie_count = v,
                    _ => return Err(bad(line, "unknown count")),
                }
            }
            "value" => {
                let counts = match (int(3)?, int(4)?, int(5)?, int(6)?) {
                    (Some(tp), Some(fp), Some(fn_), Some(tn)) => Some(ConfusionCounts::new(tp, fp, fn_, tn)),
                    (None, None, None, None) => None,
                    _ => return Err(bad(line, "partial confusion counts")),
                };
                doc.values.push(ReportValue {
                    name: rec[1].to_string(),
                    value: real(8)?,
                    threshold: int(2)?.map(|t| t as usize),
                    counts,
                    provenance: Provenance::parse(&rec[9]).ok_or_else(|| bad(line, "bad provenance"))?,
                });
            }
            "curve" => doc.curves.push(CurveSeries {
                kind: kind()?,
                points: Vec::new(),
                auc: None,
                notes: Vec::new(),
            }),
            "point" => {
                let i = current(&mut doc)?;
                doc.curves[i].points.push(CurvePoint {
                    threshold: int(2)?.ok_or_else(|| bad(line, "missing threshold"))? as usize,
                    x: real(7)?.ok_or_else(|| bad(line, "missing x"))?,
                    y: real(8)?.ok_or_else(|| bad(line, "missing y"))?,
                });
            }
            "auc" => {
                let i = current(&mut doc)?;
                doc.curves[i].auc = real(8)?;
            }
            "note" => {
                let i = current(&mut doc)?;
                doc.curves[i].notes.push(rec[9].to_string());
            }
            "annotation" => doc.annotations.push(rec[9].to_string()),
            _ => return Err(bad(line, "unknown record type")),
        }
    }
    Ok(doc)
}
