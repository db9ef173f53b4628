use std::io::Write;

use crate::characters::exps_label;
use crate::error::Result;
use crate::numeric::format_sig12;

use super::ScanRecord;

pub const CSV_COLUMNS: [&str; 15] = [
    "q",
    "char_exps",
    "order",
    "parity",
    "conductor",
    "M",
    "M_over_sqrtq",
    "psi_modulus",
    "psi_exps",
    "dist_sq",
    "t1_lhs",
    "t1_rhs0",
    "t1_ratio",
    "paley_norm",
    "gs_norm",
];

pub fn csv_header() -> String {
    CSV_COLUMNS.join(",")
}

fn opt_float(v: Option<f64>) -> String {
    v.map(format_sig12).unwrap_or_default()
}

fn csv_row(r: &ScanRecord) -> [String; 15] {
    [
        r.q.to_string(),
        exps_label(&r.char_exps),
        r.order.to_string(),
        r.parity.to_string(),
        r.conductor.to_string(),
        format_sig12(r.max_sum),
        format_sig12(r.max_over_sqrt_q),
        r.psi_modulus.map(|m| m.to_string()).unwrap_or_default(),
        r.psi_exps.as_deref().map(exps_label).unwrap_or_default(),
        opt_float(r.dist_sq),
        opt_float(r.t1_lhs),
        opt_float(r.t1_rhs0),
        opt_float(r.t1_ratio),
        format_sig12(r.paley_norm),
        opt_float(r.gs_norm),
    ]
}

/// Header plus one row per record; floats carry 12 significant digits,
/// exponent vectors are `;`-joined, absent values are empty fields.
pub fn write_csv<W: Write>(records: &[ScanRecord], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_COLUMNS)?;
    for r in records {
        w.write_record(csv_row(r))?;
    }
    w.flush()?;
    Ok(())
}

/// The same records as a JSON array, keyed by the CSV column names.
pub fn write_json<W: Write>(records: &[ScanRecord], mut out: W) -> Result<()> {
    serde_json::to_writer_pretty(&mut out, records)?;
    out.write_all(b"\n")?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lab::{scan_odd_order, ScanConfig};

    #[test]
    fn csv_layout() {
        let recs = scan_odd_order(&ScanConfig { order: 3, q_min: 7, q_max: 110, psi_max: 5 }).unwrap();
        let mut buf = Vec::new();
        write_csv(&recs, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), csv_header());
        let first: Vec<&str> = lines.next().unwrap().split(',').collect();
        assert_eq!(first.len(), 15);
        assert_eq!(first[0], "7");
        assert_eq!(first[3], "even");
        assert_eq!(first[7], "3");
        assert_eq!(first[10], "");
        let last: Vec<&str> = text.lines().last().unwrap().split(',').collect();
        assert_eq!(last[0], "109");
        assert!(!last[12].is_empty());
    }

    #[test]
    fn json_mirrors_columns() {
        let recs = scan_odd_order(&ScanConfig { order: 3, q_min: 7, q_max: 13, psi_max: 4 }).unwrap();
        let mut buf = Vec::new();
        write_json(&recs, &mut buf).unwrap();
        let v: serde_json::Value = serde_json::from_slice(&buf).unwrap();
        let rows = v.as_array().unwrap();
        assert_eq!(rows.len(), 4);
        let keys: Vec<&String> = rows[0].as_object().unwrap().keys().collect();
        let mut expected: Vec<&str> = CSV_COLUMNS.to_vec();
        expected.sort();
        let mut got: Vec<&str> = keys.iter().map(|k| k.as_str()).collect();
        got.sort();
        assert_eq!(got, expected);
        assert_eq!(rows[0]["parity"], "even");
    }
}
