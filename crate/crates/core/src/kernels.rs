//! Fejér kernel smoothing of truncated theta sums.
//!
//! The quantities here compare `max_theta max_{N <= x} |sum_{1<=|n|<=N} a(n)/n e(n theta)|`
//! with the same maximum taken only at `N = x`. The Fejér-weighted sum is an
//! exact convolution of the full sum with `F_N`, so the two maxima differ by
//! at most the cost of the smoothing step.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::characters::{Character, RootTable};
use crate::error::{domain, Result};
use crate::numeric::{CompensatedComplex, CompensatedSum};
use crate::trig::{e, refine, TrigPoly};

/// Below this `|sin(pi theta)|` the closed form loses accuracy and the
/// coefficient sum is used instead.
const CLOSED_FORM_CUTOFF: f64 = 1e-6;

/// `F_N(theta) = sum_{|n| <= N} (1 - |n|/N) e(n theta)`.
pub fn fejer(n: u64, theta: f64) -> f64 {
    assert!(n >= 1, "Fejér kernel needs N >= 1");
    if (std::f64::consts::PI * theta).sin().abs() > CLOSED_FORM_CUTOFF {
        fejer_closed_form(n, theta)
    } else {
        fejer_coefficient_sum(n, theta)
    }
}

/// `(1/N) (sin(pi N theta) / sin(pi theta))^2`; undefined at integer `theta`.
pub fn fejer_closed_form(n: u64, theta: f64) -> f64 {
    let t = theta.rem_euclid(1.0);
    let num = (std::f64::consts::PI * n as f64 * t).sin();
    let den = (std::f64::consts::PI * t).sin();
    (num / den).powi(2) / n as f64
}

/// `1 + 2 sum_{k=1}^{N-1} (1 - k/N) cos(2 pi k theta)`.
pub fn fejer_coefficient_sum(n: u64, theta: f64) -> f64 {
    let t = theta.rem_euclid(1.0);
    let mut acc = CompensatedSum::new();
    acc.add(1.0);
    for k in 1..n {
        let w = 1.0 - k as f64 / n as f64;
        acc.add(2.0 * w * (std::f64::consts::TAU * (k as f64 * t).rem_euclid(1.0)).cos());
    }
    acc.value()
}

/// Coefficients `a(n)` for `1 <= |n| <= bound` with `|a(n)| <= 1`.
#[derive(Clone, Debug)]
pub struct CoefficientSequence {
    pos: Vec<Complex64>,
    neg: Vec<Complex64>,
}

const MAGNITUDE_SLACK: f64 = 1e-12;

impl CoefficientSequence {
    /// `pos[k]` is `a(k + 1)` and `neg[k]` is `a(-(k + 1))`.
    pub fn new(pos: Vec<Complex64>, neg: Vec<Complex64>) -> Result<Self> {
        if pos.len() != neg.len() {
            return domain("positive and negative coefficient halves differ in length");
        }
        if let Some(z) = pos.iter().chain(&neg).find(|z| !(z.norm() <= 1.0 + MAGNITUDE_SLACK)) {
            return domain(format!("coefficient {z} exceeds modulus 1"));
        }
        Ok(CoefficientSequence { pos, neg })
    }

    pub fn from_fn(bound: usize, mut a: impl FnMut(i64) -> Complex64) -> Result<Self> {
        let pos = (1..=bound as i64).map(&mut a).collect();
        let neg = (1..=bound as i64).map(|n| a(-n)).collect();
        Self::new(pos, neg)
    }

    pub fn zero(bound: usize) -> Self {
        CoefficientSequence { pos: vec![Complex64::new(0.0, 0.0); bound], neg: vec![Complex64::new(0.0, 0.0); bound] }
    }

    /// Independent uniform points of the unit circle, reproducible from `seed`.
    pub fn random(bound: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut draw = |_| e(rng.gen::<f64>());
        let pos = (0..bound).map(&mut draw).collect();
        let neg = (0..bound).map(&mut draw).collect();
        CoefficientSequence { pos, neg }
    }

    /// `a(n) = chi(n)` for `1 <= |n| <= bound`.
    pub fn from_character(chi: &Character, bound: usize) -> Self {
        Self::from_fn(bound, |n| chi.value(n)).expect("character values are unimodular or zero")
    }

    pub fn bound(&self) -> usize {
        self.pos.len()
    }

    /// `a(n)`, zero at `n = 0` and beyond the bound.
    pub fn get(&self, n: i64) -> Complex64 {
        let k = n.unsigned_abs() as usize;
        if k == 0 || k > self.bound() {
            return Complex64::new(0.0, 0.0);
        }
        if n > 0 {
            self.pos[k - 1]
        } else {
            self.neg[k - 1]
        }
    }

    /// `sum_{1 <= |n| <= n_max} a(n)/n e(n theta)` as a polynomial in `theta`.
    pub fn theta_poly(&self, n_max: usize) -> TrigPoly {
        let n_max = n_max.min(self.bound());
        TrigPoly::from_fn(n_max, |n| if n == 0 { Complex64::new(0.0, 0.0) } else { self.get(n) / n as f64 })
    }

    pub fn theta_sum(&self, n_max: usize, alpha: f64) -> Complex64 {
        self.weighted_sum(n_max, alpha, |_| 1.0)
    }

    fn weighted_sum(&self, n_max: usize, alpha: f64, weight: impl Fn(usize) -> f64) -> Complex64 {
        let mut acc = CompensatedComplex::new();
        for k in 1..=n_max.min(self.bound()) {
            let w = weight(k);
            if w == 0.0 {
                continue;
            }
            let z = e((k as f64 * alpha).rem_euclid(1.0));
            let n = k as f64;
            acc.add(w * (self.pos[k - 1] / n * z - self.neg[k - 1] / n * z.conj()));
        }
        acc.value()
    }
}

/// `sum_{1 <= |n| <= N} (a(n)/n) e(n alpha) (1 - |n|/N)`.
pub fn smoothed_theta_sum(a: &CoefficientSequence, n: usize, alpha: f64) -> Result<Complex64> {
    if n == 0 || n > a.bound() {
        return domain(format!("smoothing length N = {n} must lie in [1, {}]", a.bound()));
    }
    Ok(a.weighted_sum(n, alpha, |k| 1.0 - k as f64 / n as f64))
}

/// `|smoothed(a, N, alpha) - (1/K) sum_j T(alpha - j/K) F_N(j/K)|` with `T` the
/// full sum at the sequence bound.
///
/// The integrand is a trigonometric polynomial of degree at most `x + N`, so
/// the `K`-point rule with `K > 2(x + N)` integrates it exactly.
pub fn fejer_convolution_check(a: &CoefficientSequence, n: usize, alpha: f64, k: usize) -> Result<f64> {
    let x = a.bound();
    if k <= 2 * (x + n) {
        return domain(format!("K = {k} must exceed 2(x + N) = {}", 2 * (x + n)));
    }
    let smoothed = smoothed_theta_sum(a, n, alpha)?;
    let full = a.theta_poly(x);
    let mut acc = CompensatedComplex::new();
    for j in 0..k {
        let theta = j as f64 / k as f64;
        acc.add(full.eval(alpha - theta) * fejer(n as u64, theta));
    }
    Ok((smoothed - acc.value() / k as f64).norm())
}

/// Both sides of the smoothing comparison at one bound.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Lemma22Gap {
    /// `max_theta max_{N <= x}` of the truncated sums.
    pub lhs: f64,
    /// `max_theta` of the full sum at `N = x`.
    pub rhs: f64,
    pub gap: f64,
    /// The truncation length achieving `lhs`.
    pub best_n: usize,
}

/// `max_theta max_{1<=N<=x} |S_N(theta)| - max_theta |S_x(theta)|`.
///
/// Both maxima are taken on the same `ceil(8x)` grid and refined locally; the
/// left side includes `N = x`, so the gap is never negative.
pub fn lemma22_gap(a: &CoefficientSequence, x: f64) -> Result<Lemma22Gap> {
    if !(x >= 2.0) {
        return domain(format!("the truncation gap needs x >= 2, got {x}"));
    }
    let len = x.floor() as usize;
    if len > a.bound() {
        return domain(format!("x = {x} exceeds the coefficient bound {}", a.bound()));
    }
    let grid = (8.0 * x).ceil() as usize;
    let full = a.theta_poly(len);
    let rhs = full.max_modulus(grid);

    let roots = RootTable::new(grid as u64);
    let mut best = (f64::NEG_INFINITY, 1usize, 0usize);
    for j in 0..grid {
        let mut partial = Complex64::new(0.0, 0.0);
        for k in 1..=len {
            let z = roots.get((k * j % grid) as u64);
            partial += a.get(k as i64) / k as f64 * z - a.get(-(k as i64)) / k as f64 * z.conj();
            let v = partial.norm();
            if v > best.0 {
                best = (v, k, j);
            }
        }
    }
    let (start, best_n, j) = best;
    let poly = a.theta_poly(best_n);
    let refined = refine(|t| poly.eval(t).norm(), j as f64 / grid as f64, 1.0 / grid as f64, start);
    let (lhs, best_n) = if refined.value >= rhs.value { (refined.value, best_n) } else { (rhs.value, len) };
    Ok(Lemma22Gap { lhs, rhs: rhs.value, gap: lhs - rhs.value, best_n })
}
