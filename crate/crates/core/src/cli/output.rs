//! Record rendering: JSON Lines or CSV, floats to 15 significant digits.

use serde_json::{Map, Number, Value};
use std::fmt::Display;
use std::str::FromStr;

use crate::error::{Error, Result};

pub type Record = Map<String, Value>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

/// `x` rounded to 15 significant digits, positional for exponents in
/// `-5..15` and scientific otherwise, trailing zeros removed.
pub fn format_sig(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{x:.14e}");
    let (mant, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..15).contains(&exp) {
        trim_zeros(format!("{:.*}", (14 - exp) as usize, x))
    } else {
        format!("{}e{exp}", trim_zeros(mant.to_string()))
    }
}

fn trim_zeros(s: String) -> String {
    if !s.contains('.') {
        return s;
    }
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

/// A JSON number carrying exactly the digits of [`format_sig`]; `null` for
/// non-finite values.
pub fn float(x: f64) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    Value::Number(Number::from_str(&format_sig(x)).expect("valid number literal"))
}

pub fn rational(x: impl Display) -> Value {
    Value::String(x.to_string())
}

pub fn rationals<T: Display>(xs: &[T]) -> Value {
    Value::Array(xs.iter().map(rational).collect())
}

pub fn render(records: &[Record], format: Format) -> Result<String> {
    match format {
        Format::Json => {
            let mut out = String::new();
            for r in records {
                out.push_str(&serde_json::to_string(r).map_err(|e| Error::Io(e.to_string()))?);
                out.push('\n');
            }
            Ok(out)
        }
        Format::Csv => render_csv(records),
    }
}

/// Columns are the keys of the first record in insertion order; nested
/// values are written as compact JSON.
fn render_csv(records: &[Record]) -> Result<String> {
    let io = |e: csv::Error| Error::Io(e.to_string());
    let mut w = csv::Writer::from_writer(Vec::new());
    let Some(first) = records.first() else {
        return Ok(String::new());
    };
    let columns: Vec<&String> = first.keys().collect();
    w.write_record(columns.iter().map(|c| c.as_str())).map_err(io)?;
    for r in records {
        let row: Vec<String> = columns.iter().map(|c| cell(r.get(c.as_str()))).collect();
        w.write_record(&row).map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Io(e.to_string()))
}

fn cell(v: Option<&Value>) -> String {
    match v {
        None | Some(Value::Null) => String::new(),
        Some(Value::String(s)) => s.clone(),
        Some(other) => other.to_string(),
    }
}

/// `{code, field, message}` for a failed job.
pub fn error_record(code: &str, field: Option<&str>, message: &str) -> Record {
    let mut r = Record::new();
    r.insert("code".into(), Value::String(code.into()));
    r.insert("field".into(), field.map_or(Value::Null, |f| Value::String(f.into())));
    r.insert("message".into(), Value::String(message.into()));
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn significant_digits() {
        assert_eq!(format_sig(31f64.powf(-0.5)), "0.179605302026775");
        assert_eq!(format_sig(2.0 * std::f64::consts::PI), "6.28318530717959");
        assert_eq!(format_sig(1.0), "1");
        assert_eq!(format_sig(-0.5), "-0.5");
        assert_eq!(format_sig(1.5e-9), "1.5e-9");
        assert_eq!(format_sig(123456789012345678.0), "1.23456789012346e17");
        assert_eq!(format_sig(0.0), "0");
        assert_eq!(float(f64::NAN), Value::Null);
        assert_eq!(float(0.1).to_string(), "0.1");
    }

    #[test]
    fn csv_columns_follow_first_record() {
        let mut a = Record::new();
        a.insert("x".into(), rational(num::rational::Rational64::new(1, 2)));
        a.insert("u".into(), rationals(&[1, 2]));
        let mut b = a.clone();
        b.insert("x".into(), Value::Null);
        let s = render(&[a, b], Format::Csv).unwrap();
        assert_eq!(s, "x,u\n1/2,\"[\"\"1\"\",\"\"2\"\"]\"\n,\"[\"\"1\"\",\"\"2\"\"]\"\n");
    }
}
