use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::arithmetic::{is_prime, primes_up_to, unit_group};
use crate::characters::{characters_of_order_in, enumerate_characters, Character, Parity};
use crate::charsums::max_partial_sum;
use crate::error::{domain, Result};
use crate::polya::{distance_at_log_q, theorem1_from_parts, THEOREM1_MIN_MODULUS};

use super::delta;

/// One character's row in a scan.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScanRecord {
    pub q: u64,
    pub char_exps: Vec<u64>,
    pub order: u64,
    pub parity: Parity,
    pub conductor: u64,
    #[serde(rename = "M")]
    pub max_sum: f64,
    #[serde(rename = "M_over_sqrtq")]
    pub max_over_sqrt_q: f64,
    pub psi_modulus: Option<u64>,
    pub psi_exps: Option<Vec<u64>>,
    pub dist_sq: Option<f64>,
    pub t1_lhs: Option<f64>,
    pub t1_rhs0: Option<f64>,
    pub t1_ratio: Option<f64>,
    /// `M / (sqrt(q) log log q)`.
    pub paley_norm: f64,
    /// `M / (sqrt(q) (log log q)^(1 - delta_g))`, odd orders only.
    pub gs_norm: Option<f64>,
}

impl ScanRecord {
    /// `M / (sqrt(q) (log log q)^exponent)`.
    pub fn growth_norm(&self, exponent: f64) -> f64 {
        let q = self.q as f64;
        self.max_sum / (q.sqrt() * q.ln().ln().powf(exponent))
    }

    /// Normalization at exponent `1 - delta_g - eps`; `None` for even orders.
    pub fn gs_norm_eps(&self, eps: f64) -> Option<f64> {
        delta(self.order).ok().map(|d| self.growth_norm(1.0 - d - eps))
    }

    fn sort_key(&self) -> (u64, &[u64]) {
        (self.q, &self.char_exps)
    }
}

/// Primitive odd characters of conductor `3..=max_conductor`, the candidates
/// for the small-conductor twist.
#[derive(Clone, Debug, Default)]
pub struct PsiPool {
    chars: Vec<Character>,
}

impl PsiPool {
    pub fn new(max_conductor: u64) -> Result<Self> {
        let mut chars = Vec::new();
        for m in 3..=max_conductor {
            chars.extend(
                enumerate_characters(m)?
                    .into_iter()
                    .filter(|c| c.is_primitive() && c.parity() == Parity::Odd),
            );
        }
        Ok(PsiPool { chars })
    }

    pub fn as_slice(&self) -> &[Character] {
        &self.chars
    }

    /// The candidate minimizing `D(chi, psi; log q)^2`; ties go to the earliest candidate.
    pub fn closest(&self, chi: &Character) -> Option<(&Character, f64)> {
        let mut best: Option<(&Character, f64)> = None;
        for psi in &self.chars {
            let d = distance_at_log_q(chi, psi);
            if best.is_none_or(|(_, b)| d < b) {
                best = Some((psi, d));
            }
        }
        best
    }
}

/// Builds the record for `chi`, pairing it with `psi` when one is given.
pub fn record_for(chi: &Character, psi: Option<&Character>) -> Result<ScanRecord> {
    let q = chi.modulus();
    let qf = q as f64;
    let max_sum = max_partial_sum(chi)?;
    let dist_sq = psi.map(|p| distance_at_log_q(chi, p));
    let t1 = match (psi, dist_sq) {
        (Some(p), Some(d))
            if q >= THEOREM1_MIN_MODULUS && chi.is_primitive() && chi.parity() == Parity::Even =>
        {
            Some(theorem1_from_parts(q, max_sum, p.modulus(), d))
        }
        _ => None,
    };
    let loglog = qf.ln().ln();
    Ok(ScanRecord {
        q,
        char_exps: chi.exponents().to_vec(),
        order: chi.order(),
        parity: chi.parity(),
        conductor: chi.conductor(),
        max_sum,
        max_over_sqrt_q: max_sum / qf.sqrt(),
        psi_modulus: psi.map(Character::modulus),
        psi_exps: psi.map(|p| p.exponents().to_vec()),
        dist_sq,
        t1_lhs: t1.map(|t| t.lhs),
        t1_rhs0: t1.map(|t| t.rhs0),
        t1_ratio: t1.map(|t| t.ratio),
        paley_norm: max_sum / (qf.sqrt() * loglog),
        gs_norm: delta(chi.order()).ok().map(|d| max_sum / (qf.sqrt() * loglog.powf(1.0 - d))),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ScanConfig {
    pub order: u64,
    pub q_min: u64,
    pub q_max: u64,
    pub psi_max: u64,
}

/// Records for every primitive order-`g` character mod each prime `q = 1 (mod g)`
/// in `[q_min, q_max]`, sorted by `(q, exponents)`.
///
/// Work is split across the current rayon pool; the output does not depend
/// on the number of threads.
pub fn scan_odd_order(cfg: &ScanConfig) -> Result<Vec<ScanRecord>> {
    let g = cfg.order;
    delta(g)?;
    let pool = PsiPool::new(cfg.psi_max)?;
    let moduli: Vec<u64> = (cfg.q_min.max(2)..=cfg.q_max)
        .filter(|&q| q % g == 1 && is_prime(q))
        .collect();
    let per_modulus: Vec<Vec<ScanRecord>> = moduli
        .par_iter()
        .map(|&q| {
            let group = Arc::new(unit_group(q)?);
            characters_of_order_in(&group, g)?
                .iter()
                .map(|chi| record_for(chi, pool.closest(chi).map(|(psi, _)| psi)))
                .collect()
        })
        .collect::<Result<_>>()?;
    let mut records: Vec<ScanRecord> = per_modulus.into_iter().flatten().collect();
    records.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
    Ok(records)
}

/// Quadratic characters to prime moduli with the running maximum of `M / (sqrt(q) log log q)`.
#[derive(Clone, Debug)]
pub struct PaleyScan {
    pub records: Vec<ScanRecord>,
    /// `running_max[i]` is the largest `paley_norm` among `records[..=i]`.
    pub running_max: Vec<f64>,
}

impl PaleyScan {
    /// Running maximum over moduli `<= x`, if any modulus is that small.
    pub fn running_max_at(&self, x: u64) -> Option<f64> {
        let cut = self.records.partition_point(|r| r.q <= x);
        cut.checked_sub(1).map(|i| self.running_max[i])
    }

    /// Largest `paley_norm` with `lo <= q <= hi`.
    pub fn window_max(&self, lo: u64, hi: u64) -> Option<f64> {
        self.records
            .iter()
            .filter(|r| r.q >= lo && r.q <= hi)
            .map(|r| r.paley_norm)
            .fold(None, |acc, v| Some(acc.map_or(v, |a: f64| a.max(v))))
    }
}

/// Scans the quadratic character mod every prime `5 <= q <= q_max`.
pub fn paley_scan(q_max: u64) -> Result<PaleyScan> {
    if q_max > crate::arithmetic::UNIT_GROUP_LIMIT {
        return domain(format!("q_max = {q_max} exceeds the table guard"));
    }
    let primes: Vec<u64> = primes_up_to(q_max as f64).iter().copied().filter(|&q| q >= 5).collect();
    let records: Vec<ScanRecord> = primes
        .par_iter()
        .map(|&q| {
            let group = Arc::new(unit_group(q)?);
            let chi = Character::new(group, vec![(q - 1) / 2])?;
            record_for(&chi, None)
        })
        .collect::<Result<_>>()?;
    let running_max = records
        .iter()
        .scan(f64::NEG_INFINITY, |m, r| {
            *m = m.max(r.paley_norm);
            Some(*m)
        })
        .collect();
    Ok(PaleyScan { records, running_max })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(order: u64, q_min: u64, q_max: u64) -> ScanConfig {
        ScanConfig { order, q_min, q_max, psi_max: 25 }
    }

    #[test]
    fn scan_examples() {
        let recs = scan_odd_order(&cfg(3, 7, 13)).unwrap();
        assert_eq!(recs.len(), 4);
        assert_eq!(recs.iter().map(|r| r.q).collect::<Vec<_>>(), vec![7, 7, 13, 13]);
        assert!(recs.iter().all(|r| r.parity == Parity::Even && r.order == 3 && r.conductor == r.q));
        assert!(recs.iter().all(|r| r.t1_ratio.is_none() && r.psi_modulus.is_some()));
        assert!(scan_odd_order(&cfg(3, 5, 5)).unwrap().is_empty());
        assert!(scan_odd_order(&cfg(3, 50, 10)).unwrap().is_empty());
        assert!(scan_odd_order(&cfg(4, 5, 50)).is_err());
    }

    #[test]
    fn scan_counts_match_group_theory() {
        for g in [3u64, 5, 7] {
            let recs = scan_odd_order(&cfg(g, 7, 400)).unwrap();
            let phi_g = crate::arithmetic::euler_phi(g) as usize;
            let moduli: Vec<u64> = (7..=400).filter(|&q| q % g == 1 && is_prime(q)).collect();
            assert_eq!(recs.len(), phi_g * moduli.len(), "g={g}");
            for q in moduli {
                assert_eq!(recs.iter().filter(|r| r.q == q).count(), phi_g);
            }
        }
    }

    #[test]
    fn records_are_recomputable() {
        let recs = scan_odd_order(&cfg(3, 90, 400)).unwrap();
        assert!(recs.iter().any(|r| r.t1_ratio.is_some()));
        for r in &recs {
            let group = Arc::new(unit_group(r.q).unwrap());
            let chi = Character::new(group, r.char_exps.clone()).unwrap();
            let psi_group = Arc::new(unit_group(r.psi_modulus.unwrap()).unwrap());
            let psi = Character::new(psi_group, r.psi_exps.clone().unwrap()).unwrap();
            assert_eq!(&record_for(&chi, Some(&psi)).unwrap(), r);
            let q = r.q as f64;
            assert!((r.paley_norm - r.max_sum / (q.sqrt() * q.ln().ln())).abs() < 1e-12);
            assert_eq!(r.gs_norm, Some(r.growth_norm(1.0 - delta(3).unwrap())));
            if let Some(ratio) = r.t1_ratio {
                assert!(ratio > 0.0 && ratio.is_finite());
            }
        }
    }

    #[test]
    fn psi_pool_holds_primitive_odd_characters() {
        let pool = PsiPool::new(25).unwrap();
        assert!(pool.as_slice().iter().all(|c| c.is_primitive() && c.parity() == Parity::Odd));
        // conductor 3 contributes exactly one odd primitive character
        assert_eq!(pool.as_slice()[0].modulus(), 3);
        assert_eq!(pool.as_slice().iter().filter(|c| c.modulus() == 3).count(), 1);
        assert!(PsiPool::new(2).unwrap().as_slice().is_empty());
    }

    #[test]
    fn paley_examples() {
        let scan = paley_scan(2000).unwrap();
        let first = &scan.records[0];
        assert_eq!(first.q, 5);
        assert_eq!(first.max_sum, 1.0);
        assert!((first.max_over_sqrt_q - 0.4472).abs() < 1e-4);
        assert!(scan.running_max.windows(2).all(|w| w[0] <= w[1]));
        assert!(scan.running_max_at(1000).unwrap() <= scan.running_max_at(2000).unwrap());
        assert!(scan.running_max_at(4).is_none());
        assert!(scan.records.iter().all(|r| r.order == 2 && r.gs_norm.is_none()));
    }
}
