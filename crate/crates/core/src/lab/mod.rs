//! Experiment orchestration: the `delta_g` exponent, scans over families of
//! characters, verification suites, and record output.

mod output;
mod scan;
mod suites;

pub use output::{csv_header, write_csv, write_json, CSV_COLUMNS};
pub use scan::{paley_scan, record_for, scan_odd_order, PaleyScan, PsiPool, ScanConfig, ScanRecord};
pub use suites::{run, run_suite, theorem1_buckets, theorem1_trend, RatioBucket, SuiteName, SuiteReport};

use crate::error::{domain, Result};

/// `delta_g = 1 - (g/pi) sin(pi/g)` for odd `g >= 3`.
pub fn delta(g: u64) -> Result<f64> {
    if g < 3 || g.is_multiple_of(2) {
        return domain(format!("delta_g needs an odd g >= 3, got {g}"));
    }
    let gf = g as f64;
    Ok(1.0 - gf / std::f64::consts::PI * (std::f64::consts::PI / gf).sin())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn delta_examples() {
        let d3 = delta(3).unwrap();
        let closed = 1.0 - 3.0 / std::f64::consts::PI * 3f64.sqrt() / 2.0;
        assert!((d3 - closed).abs() < 1e-15);
        assert!((d3 - 0.1730067).abs() < 1e-6);
        assert!((delta(5).unwrap() - 0.0645).abs() < 1e-4);
        let ds: Vec<f64> = [3, 5, 7, 9, 11].iter().map(|&g| delta(g).unwrap()).collect();
        assert!(ds.windows(2).all(|w| w[0] > w[1]) && ds[4] > 0.0);
        assert!(delta(1_000_001).unwrap() < 1e-11);
        assert!(delta(4).is_err());
        assert!(delta(1).is_err());
    }
}
