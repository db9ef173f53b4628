//! Truncated Dirichlet series and Euler products of bounded completely
//! multiplicative functions, evaluated at `s = 1 + delta` with
//! `delta = log log y / log y`.

use num_complex::Complex64;

use crate::arithmetic::{primes_up_to, SpfSieve};
use crate::characters::{MultiplicativeFunction, One, Phase};
use crate::error::{domain, Result};
use crate::numeric::{CompensatedComplex, CompensatedSum};
use crate::pretense::distance_squared_over;

/// Smallest cutoff accepted by the shifted-series operations; keeps `log log y > 1`.
pub const MIN_CUTOFF: f64 = 16.0;

/// `f(n)` for `n = 0..=floor(y)` from prime values, via a smallest-prime-factor sieve.
pub fn multiplicative_values(f: &dyn MultiplicativeFunction, y: f64) -> Vec<Complex64> {
    let n = y.floor().max(1.0) as usize;
    let sieve = SpfSieve::new(n);
    let mut phases = vec![Phase::Zero; n + 1];
    phases[1] = Phase::ONE;
    for m in 2..=n {
        let p = sieve.smallest_factor(m);
        phases[m] = f.at_prime(p).times(phases[m / p as usize]);
    }
    phases.into_iter().map(Phase::to_complex).collect()
}

/// `max_{N <= y} |sum_{n <= N} f(n)/n|`.
pub fn harmonic_partial_max(f: &dyn MultiplicativeFunction, y: f64) -> Result<f64> {
    if !(y >= 2.0) {
        return domain(format!("harmonic partial maximum needs y >= 2, got {y}"));
    }
    Ok(harmonic_max_of(&multiplicative_values(f, y)))
}

fn harmonic_max_of(values: &[Complex64]) -> f64 {
    let mut acc = CompensatedComplex::new();
    let mut best = 0.0f64;
    for (n, v) in values.iter().enumerate().skip(1) {
        acc.add(v / n as f64);
        best = best.max(acc.value().norm());
    }
    best
}

pub fn shift_for(y: f64) -> f64 {
    y.ln().ln() / y.ln()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ShiftedSeries {
    pub cutoff: f64,
    pub delta: f64,
    /// `sum_{n <= y} f(n) / n^(1 + delta)`.
    pub value: Complex64,
    /// `1 / (delta y^delta)`, the size of the dropped tail up to a constant.
    pub tail_bound: f64,
}

pub fn shifted_series(f: &dyn MultiplicativeFunction, y: f64) -> Result<ShiftedSeries> {
    check_cutoff(y)?;
    Ok(shifted_series_of(&multiplicative_values(f, y), y))
}

fn shifted_series_of(values: &[Complex64], y: f64) -> ShiftedSeries {
    let delta = shift_for(y);
    let mut acc = CompensatedComplex::new();
    for (n, v) in values.iter().enumerate().skip(1) {
        acc.add(v * (n as f64).powf(-1.0 - delta));
    }
    ShiftedSeries { cutoff: y, delta, value: acc.value(), tail_bound: 1.0 / (delta * y.powf(delta)) }
}

fn check_cutoff(y: f64) -> Result<()> {
    if !(y >= MIN_CUTOFF) {
        return domain(format!("cutoff y = {y} is below {MIN_CUTOFF}"));
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EulerComparison {
    /// `log |prod_{p <= y} (1 - f(p) p^(-1-delta))^(-1)|`.
    pub log_abs_product: f64,
    /// `sum_{p <= y} Re f(p) / p`.
    pub prime_sum: f64,
    pub gap: f64,
}

pub fn euler_log_comparison(f: &dyn MultiplicativeFunction, y: f64) -> Result<EulerComparison> {
    check_cutoff(y)?;
    let delta = shift_for(y);
    let primes = primes_up_to(y);
    let mut log_abs = CompensatedSum::new();
    let mut prime_sum = CompensatedSum::new();
    for &p in primes.iter() {
        let fp = f.at_prime(p).to_complex();
        let pf = p as f64;
        log_abs.add(-(Complex64::new(1.0, 0.0) - fp * pf.powf(-1.0 - delta)).norm().ln());
        prime_sum.add(fp.re / pf);
    }
    let (log_abs_product, prime_sum) = (log_abs.value(), prime_sum.value());
    Ok(EulerComparison { log_abs_product, prime_sum, gap: (log_abs_product - prime_sum).abs() })
}

/// All terms of the harmonic-sum lower bound at one cutoff.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Lemma21Terms {
    pub harmonic_max: f64,
    pub shifted: ShiftedSeries,
    pub dist_sq: f64,
    /// `(log y / log log y) exp(-D(f, 1; y)^2)`.
    pub rhs: f64,
    /// `(harmonic_max + 1/log log y) / rhs`.
    pub ratio: f64,
}

impl Lemma21Terms {
    /// `|sum f(n)/n^(1+delta)| <= max_N |sum_{n <= N} f(n)/n|`.
    pub fn shifted_bound_holds(&self) -> bool {
        self.shifted.value.norm() <= self.harmonic_max
    }
}

/// Computes every quantity of the lemma from one table of `f(n)`, `n <= y`.
pub fn lemma21_terms(f: &dyn MultiplicativeFunction, y: f64) -> Result<Lemma21Terms> {
    check_cutoff(y)?;
    let values = multiplicative_values(f, y);
    let harmonic_max = harmonic_max_of(&values);
    let shifted = shifted_series_of(&values, y);
    let primes = primes_up_to(y);
    let dist_sq = distance_squared_over(f, &One, primes.as_slice(), y).dist_sq;
    let loglog = y.ln().ln();
    let rhs = y.ln() / loglog * (-dist_sq).exp();
    let ratio = (harmonic_max + 1.0 / loglog) / rhs;
    Ok(Lemma21Terms { harmonic_max, shifted, dist_sq, rhs, ratio })
}

/// `[max_N |sum_{n<=N} f(n)/n| + 1/log log y] / [(log y/log log y) exp(-D(f,1;y)^2)]`.
pub fn lemma21_ratio(f: &dyn MultiplicativeFunction, y: f64) -> Result<f64> {
    Ok(lemma21_terms(f, y)?.ratio)
}

/// `sum_{y1 < p <= y2} 1/p - (log log y2 - log log y1)`.
pub fn mertens_discrepancy(primes: &[u64], y1: f64, y2: f64) -> f64 {
    let mut acc = CompensatedSum::new();
    for &p in primes.iter().filter(|&&p| (p as f64) > y1 && (p as f64) <= y2) {
        acc.add(1.0 / p as f64);
    }
    acc.value() - (y2.ln().ln() - y1.ln().ln())
}
