//! Pólya's Fourier expansion of partial character sums, the twisting identity
//! that isolates a small-conductor character, and the resulting ratio between
//! `M(chi) + sqrt(q)` and the pretentious lower bound.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::arithmetic::{euler_phi, primes_up_to};
use crate::characters::{Character, Parity, RationalAngle};
use crate::charsums::{gauss_sum, max_partial_sum, max_theta_sum, partial_sums};
use crate::error::{domain, Result};
use crate::numeric::CompensatedComplex;
use crate::pretense::distance_squared_over;
use crate::trig::CircleMax;

/// Above this modulus sweeps sample `t` instead of visiting every value.
pub const FULL_SWEEP_LIMIT: u64 = 2000;
pub const SAMPLED_POINTS: u64 = 64;

/// Smallest modulus accepted by [`theorem1_ratio`].
pub const THEOREM1_MIN_MODULUS: u64 = 100;

#[derive(Clone, Debug, PartialEq)]
pub struct ExpansionReport {
    pub modulus: u64,
    pub exps: Vec<u64>,
    pub t: u64,
    pub lhs: Complex64,
    pub rhs: Complex64,
    pub error: f64,
    pub error_over_log_q: f64,
}

fn require_primitive(chi: &Character, what: &str) -> Result<()> {
    if !chi.is_primitive() {
        return domain(format!(
            "{what} needs a primitive character; conductor {} differs from modulus {}",
            chi.conductor(),
            chi.modulus()
        ));
    }
    Ok(())
}

fn require_expansion_domain(chi: &Character) -> Result<()> {
    require_primitive(chi, "Pólya's expansion")?;
    if chi.modulus() < 3 {
        return domain("Pólya's expansion needs q >= 3");
    }
    Ok(())
}

// tau(chi) / (2 pi i)
fn expansion_prefactor(chi: &Character) -> Complex64 {
    gauss_sum(chi).value / Complex64::new(0.0, TAU)
}

/// Both sides of the expansion at one `t`, each computed on its own.
pub fn polya_error(chi: &Character, t: u64) -> Result<ExpansionReport> {
    require_expansion_domain(chi)?;
    let q = chi.modulus();
    if t == 0 || t > q {
        return domain(format!("t = {t} must lie in [1, {q}]"));
    }
    let lhs = partial_sums(chi, t as usize)?.at(t as usize);
    let rhs = expansion_prefactor(chi) * expansion_series(chi, t);
    Ok(report(chi, t, lhs, rhs))
}

fn report(chi: &Character, t: u64, lhs: Complex64, rhs: Complex64) -> ExpansionReport {
    let error = (lhs - rhs).norm();
    ExpansionReport {
        modulus: chi.modulus(),
        exps: chi.exponents().to_vec(),
        t,
        lhs,
        rhs,
        error,
        error_over_log_q: error / (chi.modulus() as f64).ln(),
    }
}

// sum_{1 <= |n| <= q} conj(chi)(n)/n (1 - e(-nt/q)), exact angles per term
fn expansion_series(chi: &Character, t: u64) -> Complex64 {
    let q = chi.modulus();
    let mut acc = CompensatedComplex::new();
    for n in 1..=q as i64 {
        for signed in [n, -n] {
            if let Some(a) = chi.evaluate(signed) {
                let coeff = a.conj().to_complex() / signed as f64;
                let phase = RationalAngle::new(-(signed as i128) * t as i128, q).to_complex();
                acc.add(coeff * (Complex64::new(1.0, 0.0) - phase));
            }
        }
    }
    acc.value()
}

/// Expansion errors at every `t = 1..=q`, with the right side from one length-`q` FFT.
#[derive(Clone, Debug)]
pub struct PolyaProfile {
    pub modulus: u64,
    pub exps: Vec<u64>,
    /// `errors[t - 1]` is the error at `t`.
    pub errors: Vec<f64>,
    pub max_error: f64,
    pub argmax_t: u64,
}

impl PolyaProfile {
    pub fn max_error_over_log_q(&self) -> f64 {
        self.max_error / (self.modulus as f64).ln()
    }
}

pub fn polya_profile(chi: &Character) -> Result<PolyaProfile> {
    require_expansion_domain(chi)?;
    let q = chi.modulus() as usize;
    // fold coefficients of n and n - q onto residue r
    let mut buf = vec![Complex64::new(0.0, 0.0); q];
    for (r, slot) in buf.iter_mut().enumerate().skip(1) {
        let r = r as i64;
        *slot = chi.value(r).conj() / r as f64 + chi.value(r - q as i64).conj() / (r - q as i64) as f64;
    }
    let total: Complex64 = buf.iter().sum();
    FftPlanner::<f64>::new().plan_fft_forward(q).process(&mut buf);
    let pre = expansion_prefactor(chi);
    let sums = partial_sums(chi, q)?;
    let errors: Vec<f64> = (1..=q).map(|t| (sums.at(t) - pre * (total - buf[t % q])).norm()).collect();
    let (argmax, max_error) = errors
        .iter()
        .enumerate()
        .fold((0, 0.0f64), |acc, (i, &v)| if v > acc.1 { (i, v) } else { acc });
    Ok(PolyaProfile {
        modulus: chi.modulus(),
        exps: chi.exponents().to_vec(),
        errors,
        max_error,
        argmax_t: argmax as u64 + 1,
    })
}

/// Values of `t` visited by [`polya_sweep`]: all of `[1, q]` up to
/// [`FULL_SWEEP_LIMIT`], otherwise the midpoints of 64 equal strata.
pub fn polya_sample_points(q: u64) -> Vec<u64> {
    if q <= FULL_SWEEP_LIMIT {
        (1..=q).collect()
    } else {
        (0..SAMPLED_POINTS).map(|k| ((2 * k + 1) * q).div_ceil(2 * SAMPLED_POINTS).clamp(1, q)).collect()
    }
}

/// Largest expansion error over [`polya_sample_points`].
pub fn polya_sweep(chi: &Character) -> Result<ExpansionReport> {
    let q = chi.modulus();
    if q <= FULL_SWEEP_LIMIT {
        let profile = polya_profile(chi)?;
        return polya_error(chi, profile.argmax_t);
    }
    let mut worst: Option<ExpansionReport> = None;
    for t in polya_sample_points(q) {
        let r = polya_error(chi, t)?;
        if worst.as_ref().is_none_or(|w| r.error > w.error) {
            worst = Some(r);
        }
    }
    Ok(worst.expect("at least one sample point"))
}

/// `max_theta |sum_{1 <= |n| <= q} chi(n)/n e(n theta)|` for primitive even `chi`.
pub fn even_polya_max(chi: &Character) -> Result<CircleMax> {
    require_primitive(chi, "the even-character bound")?;
    if chi.parity() != Parity::Even {
        return domain("the even-character bound needs an even character");
    }
    max_theta_sum(chi, chi.modulus() as f64)
}

/// Both sides of
/// `sum_{b mod m} psi(b) sum_{1<=|n|<=N} chi(n)/n e(nb/m) = (1 + chi(-1)) tau(psi) sum_{n<=N} chi(n) conj(psi(n))/n`
/// for primitive odd `psi` mod `m`; for even `chi` the factor is 2.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TwistIdentity {
    pub lhs: Complex64,
    pub rhs: Complex64,
    pub difference: f64,
}

pub fn twist_identity(chi: &Character, psi: &Character, n_max: u64) -> Result<TwistIdentity> {
    require_primitive(psi, "the twisting identity")?;
    if psi.parity() != Parity::Odd {
        return domain("the twisting identity needs an odd psi");
    }
    if n_max == 0 {
        return domain("the twisting identity needs N >= 1");
    }
    let m = psi.modulus();
    let mut lhs = CompensatedComplex::new();
    for b in 0..m as i64 {
        let Some(pb) = psi.evaluate(b) else { continue };
        for n in 1..=n_max as i64 {
            for signed in [n, -n] {
                if let Some(c) = chi.evaluate(signed) {
                    let twist = RationalAngle::new(signed as i128 * b as i128, m);
                    lhs.add(c.to_complex() / signed as f64 * (pb * twist).to_complex());
                }
            }
        }
    }
    let harmonic = crate::charsums::twisted_harmonic_sum(chi, psi, n_max)?;
    let rhs = (Complex64::new(1.0, 0.0) + chi.value(-1)) * gauss_sum(psi).value * harmonic;
    let lhs = lhs.value();
    Ok(TwistIdentity { lhs, rhs, difference: (lhs - rhs).norm() })
}

/// `|lhs - rhs|` of [`twist_identity`].
pub fn twist_identity_check(chi: &Character, psi: &Character, n_max: u64) -> Result<f64> {
    Ok(twist_identity(chi, psi, n_max)?.difference)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Theorem1Terms {
    pub max_sum: f64,
    pub dist_sq: f64,
    /// `M(chi) + sqrt(q)`.
    pub lhs: f64,
    /// `sqrt(qm)/phi(m) * log log q / max(log log log q, 1) * exp(-D(chi, psi; log q)^2)`.
    pub rhs0: f64,
    pub ratio: f64,
}

/// Assembles the ratio from an already computed `M(chi)` and distance.
pub fn theorem1_from_parts(q: u64, max_sum: f64, psi_modulus: u64, dist_sq: f64) -> Theorem1Terms {
    let qf = q as f64;
    let m = psi_modulus as f64;
    let loglog = qf.ln().ln();
    let logloglog = loglog.ln().max(1.0);
    let lhs = max_sum + qf.sqrt();
    let rhs0 = (qf * m).sqrt() / euler_phi(psi_modulus) as f64 * loglog / logloglog * (-dist_sq).exp();
    Theorem1Terms { max_sum, dist_sq, lhs, rhs0, ratio: lhs / rhs0 }
}

/// `D(chi, psi; log q)^2`.
pub fn distance_at_log_q(chi: &Character, psi: &Character) -> f64 {
    let y = (chi.modulus() as f64).ln();
    let primes = primes_up_to(y);
    distance_squared_over(chi, psi, primes.as_slice(), y).dist_sq
}

/// `(M(chi) + sqrt q) / RHS0` for primitive even `chi` mod `q >= 100` and primitive odd `psi`.
pub fn theorem1_ratio(chi: &Character, psi: &Character) -> Result<Theorem1Terms> {
    require_primitive(chi, "the lower bound")?;
    require_primitive(psi, "the lower bound")?;
    if chi.parity() != Parity::Even {
        return domain("the lower bound needs an even chi");
    }
    if psi.parity() != Parity::Odd {
        return domain("the lower bound needs an odd psi");
    }
    if chi.modulus() < THEOREM1_MIN_MODULUS {
        return domain(format!("the lower bound needs q >= {THEOREM1_MIN_MODULUS}"));
    }
    let max_sum = max_partial_sum(chi)?;
    Ok(theorem1_from_parts(chi.modulus(), max_sum, psi.modulus(), distance_at_log_q(chi, psi)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characters::{characters_of_order, enumerate_characters};

    fn quadratic(q: u64) -> Character {
        enumerate_characters(q).unwrap().into_iter().find(|c| c.order() == 2).unwrap()
    }

    #[test]
    fn expansion_examples() {
        let chi = quadratic(5);
        let r = polya_error(&chi, 5).unwrap();
        assert!(r.lhs.norm() < 1e-15);
        assert!(r.error <= 5f64.ln() * 2.0);
        let r1 = polya_error(&chi, 1).unwrap();
        assert_eq!(r1.lhs, Complex64::new(1.0, 0.0));
        assert!(r1.error.is_finite() && r1.error >= 0.0);
        assert!(polya_error(&chi, 0).is_err());
        assert!(polya_error(&chi, 6).is_err());
    }

    #[test]
    fn expansion_rejects_imprimitive() {
        let induced = enumerate_characters(6).unwrap().remove(1);
        assert!(matches!(polya_error(&induced, 1), Err(crate::Error::Domain(_))));
    }

    #[test]
    fn profile_agrees_with_direct_route() {
        for q in [7u64, 11, 13, 25, 101] {
            for chi in enumerate_characters(q).unwrap().into_iter().filter(Character::is_primitive) {
                let profile = polya_profile(&chi).unwrap();
                for t in 1..=q {
                    let direct = polya_error(&chi, t).unwrap().error;
                    assert!((profile.errors[t as usize - 1] - direct).abs() < 1e-9, "q={q} t={t}");
                }
            }
        }
    }

    #[test]
    fn sample_points_are_stratified() {
        assert_eq!(polya_sample_points(10), (1..=10).collect::<Vec<_>>());
        let pts = polya_sample_points(10_007);
        assert_eq!(pts.len(), 64);
        assert!(pts.windows(2).all(|w| w[0] < w[1]));
        assert!(*pts.last().unwrap() <= 10_007);
    }

    #[test]
    fn even_max_examples() {
        let chi = quadratic(5);
        assert!(even_polya_max(&chi).unwrap().value >= 0.8333);
        assert!(even_polya_max(&quadratic(3)).is_err());
        let cubic = characters_of_order(13, 3).unwrap();
        let a = even_polya_max(&cubic[0]).unwrap().value;
        let b = even_polya_max(&cubic[0].conj()).unwrap().value;
        assert!((a - b).abs() < 1e-9);
    }

    #[test]
    fn twist_examples() {
        let chi = quadratic(5);
        let psi = quadratic(3);
        let id = twist_identity(&chi, &psi, 4).unwrap();
        let expected = Complex64::new(0.0, 2.0 * 3f64.sqrt() * 1.75);
        assert!((id.rhs - expected).norm() < 1e-12);
        assert!(id.difference < 1e-10);
        let one = twist_identity(&chi, &psi, 1).unwrap();
        assert!((one.rhs - 2.0 * gauss_sum(&psi).value).norm() < 1e-12);
        assert!(one.difference < 1e-12);
        assert!(twist_identity_check(&psi, &chi, 3).is_err());
    }

    #[test]
    fn twist_identity_for_odd_chi_vanishes() {
        let chi = quadratic(7);
        let psi = quadratic(3);
        let id = twist_identity(&chi, &psi, 10).unwrap();
        assert!(id.rhs.norm() == 0.0 && id.lhs.norm() < 1e-12);
    }

    #[test]
    fn theorem1_examples() {
        let psi = quadratic(3);
        let cubic = characters_of_order(103, 3).unwrap();
        for chi in &cubic {
            assert_eq!(chi.parity(), Parity::Even);
            let t = theorem1_ratio(chi, &psi).unwrap();
            assert!(t.ratio > 0.0 && t.ratio.is_finite());
        }
        let cubic7 = characters_of_order(7, 3).unwrap();
        assert!(theorem1_ratio(&cubic7[0], &psi).is_err());
        // below the modulus guard the ratio is still assembled from its parts:
        // M = 1, no primes below log 7, so RHS0 = sqrt(21)/2 * log log 7
        let t = theorem1_from_parts(7, max_partial_sum(&cubic7[0]).unwrap(), 3, distance_at_log_q(&cubic7[0], &psi));
        let rhs0 = 21f64.sqrt() / 2.0 * 7f64.ln().ln();
        assert!((t.rhs0 - rhs0).abs() < 1e-12);
        assert!((t.ratio - (1.0 + 7f64.sqrt()) / rhs0).abs() < 1e-12);
        assert!(theorem1_ratio(&quadratic(103), &psi).is_err());
    }
}
