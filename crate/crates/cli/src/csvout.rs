//! CSV emission with a fixed number of significant digits.

use std::io::Write;

use crate::CliError;

const DIGITS: usize = 12;

/// `%.12g`: shortest of fixed or exponent notation, trailing zeros trimmed.
pub fn format_sig(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    if !v.is_finite() {
        return v.to_string();
    }
    // Rounding first tells us the decimal exponent after carry (9.9999… → 1e1).
    let sci = format!("{:.*e}", DIGITS - 1, v);
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -5 || exp >= DIGITS as i32 {
        format!("{}e{}{:02}", trim(mantissa), if exp < 0 { '-' } else { '+' }, exp.abs())
    } else {
        let decimals = (DIGITS as i32 - 1 - exp).max(0) as usize;
        trim(&format!("{v:.decimals$}")).to_owned()
    }
}

fn trim(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// One output row: optional sweep value followed by named columns.
#[derive(Clone, Debug, PartialEq)]
pub struct Row {
    pub sweep: Option<f64>,
    pub columns: Vec<(String, f64)>,
}

pub fn write_rows<W: Write>(out: W, sweep_name: Option<&str>, rows: &[Row]) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| CliError::Io(e.to_string());
    if let Some(first) = rows.first() {
        let mut header: Vec<&str> = Vec::new();
        if let Some(name) = sweep_name {
            header.push(name);
        }
        header.extend(first.columns.iter().map(|(k, _)| k.as_str()));
        w.write_record(&header).map_err(io)?;
    }
    for row in rows {
        let mut record: Vec<String> = Vec::new();
        if sweep_name.is_some() {
            record.push(format_sig(row.sweep.unwrap_or(f64::NAN)));
        }
        record.extend(row.columns.iter().map(|(_, v)| format_sig(*v)));
        w.write_record(&record).map_err(io)?;
    }
    w.flush().map_err(|e| CliError::Io(e.to_string()))
}
