//! The pretentious distance
//! `D(f, g; y)^2 = sum_{p <= y} (1 - Re f(p) conj(g(p))) / p`.

use crate::arithmetic::{primes_up_to, PrimeList};
use crate::characters::MultiplicativeFunction;
use crate::error::{domain, Result};
use crate::numeric::CompensatedSum;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DistanceResult {
    pub cutoff: f64,
    pub dist_sq: f64,
    pub primes_summed: usize,
}

impl DistanceResult {
    pub fn distance(&self) -> f64 {
        self.dist_sq.sqrt()
    }
}

/// `D(f, g; y)^2`. A prime where either function vanishes contributes exactly `1/p`.
pub fn distance_squared(f: &dyn MultiplicativeFunction, g: &dyn MultiplicativeFunction, y: f64) -> Result<DistanceResult> {
    if !(y >= 2.0) {
        return domain(format!("distance needs y >= 2, got {y}"));
    }
    Ok(distance_squared_over(f, g, primes_up_to(y).as_slice(), y))
}

/// Same sum over a caller-supplied ascending prime slice (all `<= y`).
pub fn distance_squared_over(
    f: &dyn MultiplicativeFunction,
    g: &dyn MultiplicativeFunction,
    primes: &[u64],
    y: f64,
) -> DistanceResult {
    let mut acc = CompensatedSum::new();
    for &p in primes {
        let re = f.at_prime(p).re_times_conj(g.at_prime(p));
        acc.add((1.0 - re) / p as f64);
    }
    DistanceResult { cutoff: y, dist_sq: acc.value().max(0.0), primes_summed: primes.len() }
}

/// `(D(f,g;y) + D(g,h;y), D(f,h;y))`; the triangle inequality says `lhs >= rhs`.
pub fn triangle_check(
    f: &dyn MultiplicativeFunction,
    g: &dyn MultiplicativeFunction,
    h: &dyn MultiplicativeFunction,
    y: f64,
) -> Result<(f64, f64)> {
    if !(y >= 2.0) {
        return domain(format!("distance needs y >= 2, got {y}"));
    }
    let primes = primes_up_to(y);
    Ok(triangle_over(f, g, h, &primes, y))
}

pub fn triangle_over(
    f: &dyn MultiplicativeFunction,
    g: &dyn MultiplicativeFunction,
    h: &dyn MultiplicativeFunction,
    primes: &PrimeList,
    y: f64,
) -> (f64, f64) {
    let ps = primes.up_to(y);
    let fg = distance_squared_over(f, g, ps, y).distance();
    let gh = distance_squared_over(g, h, ps, y).distance();
    let fh = distance_squared_over(f, h, ps, y).distance();
    (fg + gh, fh)
}

/// `sum_{p <= y} 1/p`, the ceiling `D^2 <= 2 * reciprocal_prime_sum`.
pub fn reciprocal_prime_sum(primes: &[u64]) -> f64 {
    let mut acc = CompensatedSum::new();
    for &p in primes {
        acc.add(1.0 / p as f64);
    }
    acc.value()
}
