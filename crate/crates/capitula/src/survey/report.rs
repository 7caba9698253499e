use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{SurveyError, SurveyRecord};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Csv,
    Json,
    MdTable,
}

impl FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            "md-table" | "md" => Ok(Format::MdTable),
            _ => Err(format!("unknown format {s:?} (csv, json, md-table)")),
        }
    }
}

pub const CSV_COLUMNS: [&str; 9] =
    ["ell", "kind", "p", "class_part", "status", "kernel", "certificates", "timing_ms", "provenance"];

/// Mutually exclusive categories of a survey; they add up to `nontrivial`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub nontrivial: usize,
    pub error: usize,
    /// No class has order dividing φ(ℓ)/d.
    pub no_potential: usize,
    /// Decided by the 2-adic parity argument.
    pub parity: usize,
    pub maximal: usize,
    /// Some but not all classes with potential capitulation capitulate.
    pub partial: usize,
    pub none: usize,
    pub undetermined: usize,
    /// Class-part structures of the maximal rows with their counts.
    pub maximal_structures: BTreeMap<String, usize>,
}

impl Summary {
    pub fn of(rows: &[SurveyRecord]) -> Summary {
        let mut s = Summary { nontrivial: rows.len(), ..Default::default() };
        for r in rows {
            if r.is_error() {
                s.error += 1;
            } else if r.status == "no-potential" {
                s.no_potential += 1;
            } else if r.has_certificate("parity_obstruction") {
                s.parity += 1;
            } else if r.is_maximal() {
                s.maximal += 1;
                *s.maximal_structures.entry(r.class_part.clone()).or_default() += 1;
            } else if r.status == "partial" || r.status == "full" {
                s.partial += 1;
            } else if r.status == "none" {
                s.none += 1;
            } else {
                s.undetermined += 1;
            }
        }
        s
    }

    /// Rows with a nontrivial kernel.
    pub fn capitulating(&self) -> usize {
        self.maximal + self.partial
    }
}

pub fn render_report(rows: &[SurveyRecord], format: Format) -> Result<String, SurveyError> {
    let bad = |e: &dyn std::fmt::Display| SurveyError::BadScan(e.to_string());
    match format {
        Format::Csv => {
            let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
            w.write_record(CSV_COLUMNS).map_err(|e| bad(&e))?;
            for r in rows {
                w.serialize(r).map_err(|e| bad(&e))?;
            }
            let bytes = w.into_inner().map_err(|e| bad(&e))?;
            String::from_utf8(bytes).map_err(|e| bad(&e))
        }
        Format::Json => {
            let v = serde_json::json!({ "summary": Summary::of(rows), "records": rows });
            serde_json::to_string_pretty(&v).map(|s| s + "\n").map_err(|e| bad(&e))
        }
        Format::MdTable => Ok(md_table(rows)),
    }
}

fn md_table(rows: &[SurveyRecord]) -> String {
    let mut out = String::new();
    out.push_str("| ℓ | class part | status | kernel | certificates |\n");
    out.push_str("|---|---|---|---|---|\n");
    for r in rows {
        let _ = writeln!(
            out,
            "| {} | {} | {} | {} | {} |",
            r.ell,
            r.class_part,
            r.status,
            r.kernel,
            r.certificates.replace('|', "\\|")
        );
    }
    let s = Summary::of(rows);
    out.push('\n');
    let _ = writeln!(out, "| nontrivial | no potential | parity | maximal | partial | none | undetermined | error |");
    out.push_str("|---|---|---|---|---|---|---|---|\n");
    let _ = writeln!(
        out,
        "| {} | {} | {} | {} | {} | {} | {} | {} |",
        s.nontrivial, s.no_potential, s.parity, s.maximal, s.partial, s.none, s.undetermined, s.error
    );
    if !s.maximal_structures.is_empty() {
        out.push('\n');
        for (k, n) in &s.maximal_structures {
            let _ = writeln!(out, "- maximal with class part {k}: {n}");
        }
    }
    out
}

pub fn parse_records_csv(text: &str) -> Result<Vec<SurveyRecord>, SurveyError> {
    let mut rd = csv::Reader::from_reader(text.as_bytes());
    rd.deserialize()
        .collect::<Result<Vec<SurveyRecord>, _>>()
        .map_err(|e| SurveyError::BadScan(e.to_string()))
}

/// Accepts the report object or a bare array of records.
pub fn parse_records_json(text: &str) -> Result<Vec<SurveyRecord>, SurveyError> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Doc {
        Report { records: Vec<SurveyRecord> },
        Bare(Vec<SurveyRecord>),
    }
    match serde_json::from_str(text).map_err(|e| SurveyError::BadScan(e.to_string()))? {
        Doc::Report { records } | Doc::Bare(records) => Ok(records),
    }
}
