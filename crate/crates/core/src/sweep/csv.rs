use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use super::SweepTable;
use crate::Result;

const SIG_DIGITS: usize = 12;

/// 12 significant digits; lowercase scientific below 1e-3 in magnitude,
/// fixed notation otherwise.
pub fn format_value(v: f64) -> String {
    if !v.is_finite() {
        return v.to_string();
    }
    let sci = format!("{:.*e}", SIG_DIGITS - 1, v);
    if v.abs() < 1e-3 {
        return sci;
    }
    // exponent after rounding, so 9.99999999999996 counts as 1e1
    let exp: i32 = sci.rsplit_once('e').and_then(|(_, e)| e.parse().ok()).unwrap_or(0);
    let decimals = (SIG_DIGITS as i32 - 1 - exp).max(0) as usize;
    format!("{v:.decimals$}")
}

pub fn write_csv<W: Write>(table: &SweepTable, mut out: W) -> Result<()> {
    let mut header = String::from("T");
    for s in &table.sites {
        header.push_str(&format!(",C_site{s}"));
    }
    header.push('\n');
    out.write_all(header.as_bytes())?;
    for (t, row) in table.temperatures.iter().zip(&table.coherences) {
        let mut line = format_value(*t);
        for c in row {
            line.push(',');
            line.push_str(&format_value(*c));
        }
        line.push('\n');
        out.write_all(line.as_bytes())?;
    }
    out.flush()?;
    Ok(())
}

pub fn emit_csv(table: &SweepTable, destination: impl AsRef<Path>) -> Result<()> {
    let file = File::create(destination)?;
    write_csv(table, BufWriter::new(file))
}
