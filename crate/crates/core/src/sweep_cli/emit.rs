//! CSV and JSON writers with fixed 12-significant-digit numbers.
//!
//! Output is assembled by hand so that identical records always give
//! identical bytes; the readers exist for round-trip checks and golden-file
//! comparisons.

use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};

use super::sweep::{SweepRecord, SweepTable};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(Error::config("format", format!("expected `csv` or `json`, got `{other}`"))),
        }
    }
}

/// `printf("%.12g")`: 12 significant digits, trailing zeros removed,
/// exponent form below `1e-4` or from `1e12` up.
pub fn format_g12(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{x:.11e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..12).contains(&exp) {
        let m = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{m}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (11 - exp) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn require_records(table: &SweepTable) -> Result<()> {
    if table.records.is_empty() {
        return Err(Error::Validation("nothing to emit: no records".into()));
    }
    Ok(())
}

/// Header `t,<columns…>` followed by one line per record.
pub fn to_csv(table: &SweepTable) -> Result<String> {
    require_records(table)?;
    let mut out = String::from("t");
    for c in &table.columns {
        out.push(',');
        out.push_str(c);
    }
    out.push('\n');
    for r in &table.records {
        out.push_str(&format_g12(r.t));
        for v in &r.values {
            out.push(',');
            out.push_str(&format_g12(*v));
        }
        out.push('\n');
    }
    Ok(out)
}

fn json_number(x: f64) -> String {
    if x.is_finite() {
        format_g12(x)
    } else {
        "null".into()
    }
}

/// Array of objects, one per record, keys `t` then the columns.
pub fn to_json(table: &SweepTable) -> Result<String> {
    require_records(table)?;
    let mut out = String::from("[\n");
    for (i, r) in table.records.iter().enumerate() {
        write!(out, "  {{\"t\": {}", json_number(r.t)).unwrap();
        for (c, v) in table.columns.iter().zip(&r.values) {
            write!(out, ", \"{c}\": {}", json_number(*v)).unwrap();
        }
        out.push('}');
        if i + 1 < table.records.len() {
            out.push(',');
        }
        out.push('\n');
    }
    out.push_str("]\n");
    Ok(out)
}

pub fn render(table: &SweepTable, format: Format) -> Result<String> {
    match format {
        Format::Csv => to_csv(table),
        Format::Json => to_json(table),
    }
}

pub fn emit(table: &SweepTable, format: Format, path: &Path) -> Result<()> {
    let text = render(table, format)?;
    std::fs::write(path, text)?;
    Ok(())
}

fn parse_value(s: &str) -> Result<f64> {
    match s.trim() {
        "nan" => Ok(f64::NAN),
        "inf" => Ok(f64::INFINITY),
        "-inf" => Ok(f64::NEG_INFINITY),
        t => t
            .parse()
            .map_err(|_| Error::Validation(format!("cannot parse number `{t}`"))),
    }
}

pub fn parse_csv(text: &str) -> Result<SweepTable> {
    let mut reader = csv::ReaderBuilder::new().has_headers(true).from_reader(text.as_bytes());
    let bad = |e: csv::Error| Error::Validation(format!("malformed CSV: {e}"));
    let header = reader.headers().map_err(bad)?.clone();
    if header.get(0) != Some("t") {
        return Err(Error::Validation("CSV header must start with `t`".into()));
    }
    let columns = header.iter().skip(1).map(String::from).collect();
    let mut records = Vec::new();
    for row in reader.records() {
        let row = row.map_err(bad)?;
        let vals = row.iter().map(parse_value).collect::<Result<Vec<_>>>()?;
        records.push(SweepRecord {
            t: vals[0],
            values: vals[1..].to_vec(),
        });
    }
    Ok(SweepTable { columns, records })
}

pub fn parse_json(text: &str) -> Result<SweepTable> {
    let bad = |m: String| Error::Validation(format!("malformed sweep JSON: {m}"));
    let value: serde_json::Value = serde_json::from_str(text).map_err(|e| bad(e.to_string()))?;
    let rows = value.as_array().ok_or_else(|| bad("expected an array".into()))?;
    let mut columns: Option<Vec<String>> = None;
    let mut records = Vec::new();
    for row in rows {
        let obj = row.as_object().ok_or_else(|| bad("expected objects".into()))?;
        let keys: Vec<String> = obj.keys().filter(|k| *k != "t").cloned().collect();
        let num = |k: &str| obj.get(k).map(|v| v.as_f64().unwrap_or(f64::NAN)).ok_or_else(|| bad(format!("missing `{k}`")));
        let t = num("t")?;
        let cols = columns.get_or_insert(keys);
        let values = cols.iter().map(|k| num(k)).collect::<Result<Vec<_>>>()?;
        records.push(SweepRecord { t, values });
    }
    Ok(SweepTable {
        columns: columns.unwrap_or_default(),
        records,
    })
}
