//! Partial character sums, `M(chi)`, Gauss sums, and the theta and twisted
//! harmonic sums that appear on both sides of the lower-bound argument.

use num_complex::Complex64;

use crate::characters::{Character, RationalAngle, RootTable};
use crate::error::{domain, Result};
use crate::numeric::CompensatedComplex;
use crate::trig::{CircleMax, TrigPoly};

/// Prefix sums `S(t) = sum_{n <= t} chi(n)` for `t = 1..=bound`.
#[derive(Clone, Debug)]
pub struct SumTrace {
    modulus: u64,
    exps: Vec<u64>,
    prefix: Vec<Complex64>,
}

impl SumTrace {
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn exponents(&self) -> &[u64] {
        &self.exps
    }

    pub fn bound(&self) -> usize {
        self.prefix.len()
    }

    /// `S(t)` for `1 <= t <= bound`; `S(0) = 0`.
    pub fn at(&self, t: usize) -> Complex64 {
        if t == 0 {
            Complex64::new(0.0, 0.0)
        } else {
            self.prefix[t - 1]
        }
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.prefix
    }

    pub fn max_abs(&self) -> f64 {
        self.prefix.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

/// One pass over `n = 1..=bound`, reusing the period-`q` value table.
pub fn partial_sums(chi: &Character, bound: usize) -> Result<SumTrace> {
    if bound == 0 {
        return domain("partial sums need bound >= 1");
    }
    let q = chi.modulus() as usize;
    let table = chi.exponent_table();
    let roots = RootTable::new(chi.order());
    let mut acc = Complex64::new(0.0, 0.0);
    let mut prefix = Vec::with_capacity(bound);
    for n in 1..=bound {
        if let Some(k) = table[n % q] {
            acc += roots.get(k);
        }
        prefix.push(acc);
    }
    Ok(SumTrace { modulus: chi.modulus(), exps: chi.exponents().to_vec(), prefix })
}

/// `M(chi) = max_t |sum_{n <= t} chi(n)|`.
///
/// `S` is constant between integers and `q`-periodic once `S(q) = 0`, so the
/// maximum over `t = 1..=q` is the supremum over all real `t`.
pub fn max_partial_sum(chi: &Character) -> Result<f64> {
    if chi.is_principal() {
        return domain("M(chi) is unbounded for the principal character");
    }
    Ok(partial_sums(chi, chi.modulus() as usize)?.max_abs())
}

#[derive(Clone, Debug)]
pub struct GaussSum {
    pub modulus: u64,
    pub exps: Vec<u64>,
    pub value: Complex64,
}

/// `tau(chi) = sum_{b mod q} chi(b) e(b/q)`.
pub fn gauss_sum(chi: &Character) -> GaussSum {
    GaussSum { modulus: chi.modulus(), exps: chi.exponents().to_vec(), value: gauss_sum_at(chi, 1) }
}

/// `sum_{b mod q} chi(b) e(bn/q)`, each term an exact angle converted once.
pub fn gauss_sum_at(chi: &Character, n: i64) -> Complex64 {
    let q = chi.modulus();
    let shift = n.rem_euclid(q as i64) as u64;
    let mut acc = CompensatedComplex::new();
    for b in 0..q {
        if let Some(a) = chi.evaluate(b as i64) {
            let twist = RationalAngle::new((b as u128 * shift as u128 % q as u128) as i128, q);
            acc.add((a * twist).to_complex());
        }
    }
    acc.value()
}

/// `sum_{1 <= |n| <= x} chi(n)/n e(n theta)`, using `chi(-n) = chi(-1) chi(n)`.
pub fn theta_sum(chi: &Character, theta: f64, x: f64) -> Result<Complex64> {
    if !(x >= 1.0) {
        return domain(format!("theta sum needs x >= 1, got {x}"));
    }
    let sign = chi.value(-1);
    let mut acc = CompensatedComplex::new();
    for n in 1..=x.floor() as i64 {
        let c = chi.value(n) / n as f64;
        let z = crate::trig::e((n as f64 * theta).rem_euclid(1.0));
        acc.add(c * (z - sign * z.conj()));
    }
    Ok(acc.value())
}

/// The theta sum as a trigonometric polynomial of degree `floor(x)`.
pub fn theta_poly(chi: &Character, x: f64) -> Result<TrigPoly> {
    if !(x >= 1.0) {
        return domain(format!("theta sum needs x >= 1, got {x}"));
    }
    Ok(TrigPoly::from_fn(x.floor() as usize, |n| {
        if n == 0 {
            Complex64::new(0.0, 0.0)
        } else {
            chi.value(n) / n as f64
        }
    }))
}

/// Grid size used for maximizing a degree-`x` theta sum.
pub fn theta_grid_points(x: f64) -> usize {
    (8.0 * x).ceil() as usize
}

/// `max_theta |theta_sum(chi, theta, x)|` on a `ceil(8x)` grid plus local refinement.
pub fn max_theta_sum(chi: &Character, x: f64) -> Result<CircleMax> {
    max_theta_sum_on_grid(chi, x, theta_grid_points(x))
}

pub fn max_theta_sum_on_grid(chi: &Character, x: f64, grid_points: usize) -> Result<CircleMax> {
    Ok(theta_poly(chi, x)?.max_modulus(grid_points))
}

/// `sum_{n <= N} chi(n) conj(psi(n)) / n`.
pub fn twisted_harmonic_sum(chi: &Character, psi: &Character, n_max: u64) -> Result<Complex64> {
    if n_max == 0 {
        return domain("twisted harmonic sum needs N >= 1");
    }
    let mut acc = CompensatedComplex::new();
    for n in 1..=n_max as i64 {
        if let Some(z) = twisted_term(chi, psi, n) {
            acc.add(z / n as f64);
        }
    }
    Ok(acc.value())
}

#[inline]
fn twisted_term(chi: &Character, psi: &Character, n: i64) -> Option<Complex64> {
    let a = chi.evaluate(n)?;
    let b = psi.evaluate(n)?;
    Some((a * b.conj()).to_complex())
}

/// `max_{N <= bound} |twisted_harmonic_sum(chi, psi, N)|` in one incremental pass.
pub fn max_twisted_harmonic(chi: &Character, psi: &Character, bound: u64) -> Result<f64> {
    if bound == 0 {
        return domain("twisted harmonic maximum needs bound >= 1");
    }
    let mut acc = CompensatedComplex::new();
    let mut best = 0.0f64;
    for n in 1..=bound as i64 {
        if let Some(z) = twisted_term(chi, psi, n) {
            acc.add(z / n as f64);
        }
        best = best.max(acc.value().norm());
    }
    Ok(best)
}
