//! Integer arithmetic and the structure of `(Z/qZ)*`.
//!
//! Factorization is trial division by small primes followed by Pollard rho
//! with a deterministic Miller-Rabin test. [`UnitGroup`] stores one discrete
//! logarithm per residue, packed as a mixed-radix index over the CRT
//! generators, so evaluating a character is a table lookup.

use crate::error::{domain, Error, Result};

/// Largest modulus for which [`unit_group`] will build a discrete-log table.
pub const UNIT_GROUP_LIMIT: u64 = 10_000_000;

const TRIAL_DIVISION_BOUND: u64 = 1_000;

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}

pub fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        0
    } else {
        a / gcd(a, b) * b
    }
}

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Inverse of `a` modulo `m`, if `gcd(a, m) = 1`.
pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let (mut old_r, mut r) = (a as i128 % m as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return if m == 1 { Some(0) } else { None };
    }
    Some(old_s.rem_euclid(m as i128) as u64)
}

/// Deterministic Miller-Rabin, exact for all `u64`.
pub fn is_prime(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &p in &BASES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let d = (n - 1) >> (n - 1).trailing_zeros();
    let s = (n - 1).trailing_zeros();
    'witness: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

// Brent's variant; `n` must be composite and odd.
fn pollard_rho(n: u64) -> u64 {
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut x, mut y, mut g) = (2u64, 2u64, 1u64);
        let mut q = 1u64;
        let mut ys = 2u64;
        let mut r = 1u64;
        const BATCH: u64 = 64;
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..BATCH.min(r - k) {
                    y = f(y);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                g = gcd(q, n);
                k += BATCH;
            }
            r <<= 1;
        }
        if g == n {
            loop {
                ys = f(ys);
                g = gcd(x.abs_diff(ys), n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return g;
        }
        c += 1;
    }
}

/// Prime factorization, primes ascending.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    n: u64,
    factors: Vec<(u64, u32)>,
}

impl Factorization {
    pub fn value(&self) -> u64 {
        self.n
    }

    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.factors.iter().map(|&(p, _)| p)
    }

    /// All positive divisors, ascending.
    pub fn divisors(&self) -> Vec<u64> {
        let mut divs = vec![1u64];
        for &(p, k) in &self.factors {
            let len = divs.len();
            let mut pk = 1u64;
            for _ in 0..k {
                pk *= p;
                for i in 0..len {
                    divs.push(divs[i] * pk);
                }
            }
        }
        divs.sort_unstable();
        divs
    }
}

/// Factors `n >= 2`.
pub fn factorize(n: u64) -> Result<Factorization> {
    if n < 2 {
        return domain(format!("cannot factor {n}: need n >= 2"));
    }
    if n > i64::MAX as u64 {
        return domain(format!("{n} exceeds 2^63 - 1"));
    }
    let mut primes = Vec::new();
    let mut rest = n;
    let mut p = 2u64;
    while p <= TRIAL_DIVISION_BOUND && p * p <= rest {
        while rest.is_multiple_of(p) {
            primes.push(p);
            rest /= p;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    let mut stack = Vec::new();
    if rest > 1 {
        stack.push(rest);
    }
    while let Some(m) = stack.pop() {
        if is_prime(m) {
            primes.push(m);
        } else if m > 1 {
            let d = pollard_rho(m);
            stack.push(d);
            stack.push(m / d);
        }
    }
    primes.sort_unstable();
    let mut factors: Vec<(u64, u32)> = Vec::new();
    for p in primes {
        match factors.last_mut() {
            Some((last, k)) if *last == p => *k += 1,
            _ => factors.push((p, 1)),
        }
    }
    Ok(Factorization { n, factors })
}

pub fn euler_phi(q: u64) -> u64 {
    if q < 2 {
        return 1;
    }
    let f = factorize(q).expect("q >= 2 is factorable");
    f.factors()
        .iter()
        .fold(1u64, |acc, &(p, k)| acc * (p - 1) * p.pow(k - 1))
}

/// Ascending list of every prime `<= bound`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeList {
    bound: u64,
    primes: Vec<u64>,
}

impl PrimeList {
    pub fn bound(&self) -> u64 {
        self.bound
    }

    pub fn as_slice(&self) -> &[u64] {
        &self.primes
    }

    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, u64> {
        self.primes.iter()
    }

    /// The primes `<= y`, a prefix of this list.
    pub fn up_to(&self, y: f64) -> &[u64] {
        let cut = self.primes.partition_point(|&p| (p as f64) <= y);
        &self.primes[..cut]
    }
}

fn simple_sieve(n: usize) -> Vec<u64> {
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

/// Segmented sieve of Eratosthenes over `[2, floor(y)]`; `y < 2` gives an empty list.
pub fn primes_up_to(y: f64) -> PrimeList {
    const SEGMENT: u64 = 1 << 18;
    if !(y >= 2.0) {
        return PrimeList { bound: 0, primes: Vec::new() };
    }
    let n = y.floor() as u64;
    let root = (n as f64).sqrt() as u64 + 1;
    let base = simple_sieve(root as usize);
    let mut primes: Vec<u64> = base.iter().copied().filter(|&p| p <= n).collect();
    let mut lo = root + 1;
    let mut marks = vec![false; SEGMENT as usize];
    while lo <= n {
        let hi = (lo + SEGMENT - 1).min(n);
        let len = (hi - lo + 1) as usize;
        marks[..len].fill(false);
        for &p in &base {
            if p * p > hi {
                break;
            }
            let mut m = (lo.div_ceil(p) * p).max(p * p);
            while m <= hi {
                marks[(m - lo) as usize] = true;
                m += p;
            }
        }
        primes.extend((0..len).filter(|&i| !marks[i]).map(|i| lo + i as u64));
        lo = hi + 1;
    }
    PrimeList { bound: n, primes }
}

/// Smallest-prime-factor table on `[0, n]`.
#[derive(Clone, Debug)]
pub struct SpfSieve {
    spf: Vec<u32>,
}

impl SpfSieve {
    pub fn new(n: usize) -> Self {
        let mut spf = vec![0u32; n + 1];
        let mut primes: Vec<u32> = Vec::new();
        for i in 2..=n {
            if spf[i] == 0 {
                spf[i] = i as u32;
                primes.push(i as u32);
            }
            for &p in &primes {
                let m = i * p as usize;
                if p > spf[i] || m > n {
                    break;
                }
                spf[m] = p;
            }
        }
        Self { spf }
    }

    pub fn limit(&self) -> usize {
        self.spf.len() - 1
    }

    /// Smallest prime factor of `n` for `2 <= n <= limit`.
    pub fn smallest_factor(&self, n: usize) -> u64 {
        self.spf[n] as u64
    }
}

fn primitive_root_mod_prime(p: u64) -> u64 {
    if p == 2 {
        return 1;
    }
    let group_primes: Vec<u64> = factorize(p - 1)
        .map(|f| f.primes().collect())
        .unwrap_or_default();
    (2..p)
        .find(|&g| group_primes.iter().all(|&r| pow_mod(g, (p - 1) / r, p) != 1))
        .expect("every prime has a primitive root")
}

const NON_UNIT: u32 = u32::MAX;

/// `(Z/qZ)*` as a product of cyclic groups with explicit generators.
///
/// Odd prime powers contribute one primitive root each; `2^k` contributes
/// nothing for `k = 1`, `-1` for `k = 2`, and `{-1, 5}` for `k >= 3`.
#[derive(Clone, Debug)]
pub struct UnitGroup {
    modulus: u64,
    phi: u64,
    generators: Vec<u64>,
    orders: Vec<u64>,
    strides: Vec<u64>,
    log_table: Vec<u32>,
}

struct Component {
    modulus: u64,
    generators: Vec<u64>,
    orders: Vec<u64>,
    // local mixed-radix log for each residue mod `modulus`
    local_log: Vec<u32>,
}

fn odd_prime_power_component(p: u64, k: u32) -> Component {
    let pk = p.pow(k);
    let mut g = primitive_root_mod_prime(p);
    if k >= 2 && pow_mod(g, p - 1, p * p) == 1 {
        g += p;
    }
    let order = pk / p * (p - 1);
    let mut local_log = vec![NON_UNIT; pk as usize];
    let mut x = 1u64;
    for e in 0..order {
        local_log[x as usize] = e as u32;
        x = x * g % pk;
    }
    Component { modulus: pk, generators: vec![g], orders: vec![order], local_log }
}

fn two_power_component(k: u32) -> Option<Component> {
    match k {
        0 | 1 => None,
        2 => Some(Component {
            modulus: 4,
            generators: vec![3],
            orders: vec![2],
            local_log: vec![NON_UNIT, 0, NON_UNIT, 1],
        }),
        _ => {
            let m = 1u64 << k;
            let half_order = m >> 2;
            let mut local_log = vec![NON_UNIT; m as usize];
            let mut five_pow = 1u64;
            for b in 0..half_order {
                local_log[five_pow as usize] = (2 * b) as u32;
                local_log[(m - five_pow) as usize] = (2 * b + 1) as u32;
                five_pow = five_pow * 5 % m;
            }
            Some(Component {
                modulus: m,
                generators: vec![m - 1, 5],
                orders: vec![2, half_order],
                local_log,
            })
        }
    }
}

/// Builds the unit group and its discrete-log table.
pub fn unit_group(q: u64) -> Result<UnitGroup> {
    if q == 0 {
        return domain("modulus must be >= 1");
    }
    if q > UNIT_GROUP_LIMIT {
        return Err(Error::Resource(format!(
            "modulus {q} exceeds the table guard {UNIT_GROUP_LIMIT}"
        )));
    }
    let factors: Vec<(u64, u32)> = if q >= 2 {
        factorize(q)?.factors().to_vec()
    } else {
        Vec::new()
    };
    let components: Vec<Component> = factors
        .iter()
        .filter_map(|&(p, k)| {
            if p == 2 {
                two_power_component(k)
            } else {
                Some(odd_prime_power_component(p, k))
            }
        })
        .collect();

    let mut generators = Vec::new();
    let mut orders = Vec::new();
    let mut strides = Vec::new();
    let mut component_strides = Vec::with_capacity(components.len());
    let mut stride = 1u64;
    for c in &components {
        let cofactor = q / c.modulus;
        let lift = inv_mod(cofactor % c.modulus, c.modulus).expect("coprime CRT factors");
        component_strides.push(stride);
        for (&g, &d) in c.generators.iter().zip(&c.orders) {
            // x = g mod p^k, x = 1 mod q / p^k
            let t = mul_mod((g + c.modulus - 1) % c.modulus, lift, c.modulus);
            generators.push((1 + cofactor * t) % q);
            orders.push(d);
            strides.push(stride);
            stride *= d;
        }
    }
    let phi = stride;

    let mut log_table = vec![0u32; q as usize];
    for &(p, _) in &factors {
        for m in (0..q).step_by(p as usize) {
            log_table[m as usize] = NON_UNIT;
        }
    }
    for (n, slot) in log_table.iter_mut().enumerate() {
        if *slot == NON_UNIT {
            continue;
        }
        let mut idx = 0u64;
        for (c, &s) in components.iter().zip(&component_strides) {
            idx += c.local_log[n % c.modulus as usize] as u64 * s;
        }
        *slot = idx as u32;
    }

    Ok(UnitGroup { modulus: q, phi, generators, orders, strides, log_table })
}

impl UnitGroup {
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn phi(&self) -> u64 {
        self.phi
    }

    pub fn generators(&self) -> &[u64] {
        &self.generators
    }

    pub fn orders(&self) -> &[u64] {
        &self.orders
    }

    pub(crate) fn strides(&self) -> &[u64] {
        &self.strides
    }

    /// Exponent of the group: lcm of the component orders.
    pub fn exponent(&self) -> u64 {
        self.orders.iter().fold(1, |acc, &d| lcm(acc, d))
    }

    pub fn is_unit(&self, n: i64) -> bool {
        self.log_index(n).is_some()
    }

    #[inline]
    pub(crate) fn reduce(&self, n: i64) -> usize {
        n.rem_euclid(self.modulus as i64) as usize
    }

    /// Packed discrete log of `n`: `sum e_i * stride_i`, or `None` off the units.
    #[inline]
    pub fn log_index(&self, n: i64) -> Option<u64> {
        match self.log_table[self.reduce(n)] {
            NON_UNIT => None,
            v => Some(v as u64),
        }
    }

    #[inline]
    pub(crate) fn log_index_of_residue(&self, r: usize) -> Option<u64> {
        match self.log_table[r] {
            NON_UNIT => None,
            v => Some(v as u64),
        }
    }

    /// Unpacks a packed index into its exponent vector.
    pub fn exponents_of_index(&self, idx: u64) -> Vec<u64> {
        self.strides
            .iter()
            .zip(&self.orders)
            .map(|(&s, &d)| idx / s % d)
            .collect()
    }

    /// Exponent vector `(e_i)` with `n = prod g_i^e_i (mod q)`.
    pub fn log(&self, n: i64) -> Option<Vec<u64>> {
        self.log_index(n).map(|i| self.exponents_of_index(i))
    }

    /// `prod g_i^e_i mod q`.
    pub fn reconstruct(&self, exps: &[u64]) -> u64 {
        let q = self.modulus;
        self.generators
            .iter()
            .zip(exps)
            .fold(1 % q, |acc, (&g, &e)| mul_mod(acc, pow_mod(g, e, q), q))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trial_factor(mut n: u64) -> Vec<(u64, u32)> {
        let mut out = Vec::new();
        let mut p = 2;
        while p * p <= n {
            let mut k = 0;
            while n.is_multiple_of(p) {
                n /= p;
                k += 1;
            }
            if k > 0 {
                out.push((p, k));
            }
            p += 1;
        }
        if n > 1 {
            out.push((n, 1));
        }
        out
    }

    #[test]
    fn factorize_examples() {
        assert_eq!(factorize(12).unwrap().factors(), &[(2, 2), (3, 1)]);
        assert_eq!(factorize(97).unwrap().factors(), &[(97, 1)]);
        assert_eq!(factorize(3600).unwrap().factors(), trial_factor(3600).as_slice());
        assert_eq!(factorize(3600).unwrap().factors(), &[(2, 4), (3, 2), (5, 2)]);
    }

    #[test]
    fn factorize_rejects_small() {
        assert!(matches!(factorize(1), Err(Error::Domain(_))));
        assert!(matches!(factorize(0), Err(Error::Domain(_))));
    }

    #[test]
    fn factorize_large_semiprime() {
        let (p, q) = (1_000_000_007u64, 998_244_353u64);
        let f = factorize(p * q).unwrap();
        assert_eq!(f.factors(), &[(q, 1), (p, 1)]);
        let big_prime = 9_223_372_036_854_775_783u64;
        assert_eq!(factorize(big_prime).unwrap().factors(), &[(big_prime, 1)]);
    }

    #[test]
    fn factorize_matches_trial_division() {
        for n in 2..5000u64 {
            assert_eq!(factorize(n).unwrap().factors(), trial_factor(n).as_slice(), "n={n}");
        }
    }

    #[test]
    fn phi_examples() {
        assert_eq!(euler_phi(1), 1);
        assert_eq!(euler_phi(12), 4);
        assert_eq!(euler_phi(97), 96);
    }

    #[test]
    fn primes_examples() {
        assert_eq!(primes_up_to(10.0).as_slice(), &[2, 3, 5, 7]);
        assert_eq!(primes_up_to(2.0).as_slice(), &[2]);
        let trial = (2..=100u64).filter(|&n| trial_factor(n) == vec![(n, 1)]).count();
        assert_eq!(trial, 25);
        assert_eq!(primes_up_to(100.0).len(), 25);
        assert!(primes_up_to(1.5).is_empty());
    }

    #[test]
    fn sieve_matches_trial_division() {
        let list = primes_up_to(10_000.0);
        let trial: Vec<u64> = (2..=10_000u64).filter(|&n| trial_factor(n) == vec![(n, 1)]).collect();
        assert_eq!(list.as_slice(), trial.as_slice());
        assert_eq!(list.up_to(100.0).len(), 25);
    }

    #[test]
    fn segmented_sieve_crosses_segments() {
        let list = primes_up_to(1_000_000.0);
        assert_eq!(list.len(), 78_498);
        assert!(list.iter().all(|&p| is_prime(p)));
    }

    #[test]
    fn spf_sieve_agrees_with_factorize() {
        let s = SpfSieve::new(3000);
        for n in 2..=3000usize {
            assert_eq!(s.smallest_factor(n), factorize(n as u64).unwrap().factors()[0].0);
        }
    }

    #[test]
    fn unit_group_examples() {
        let g5 = unit_group(5).unwrap();
        assert_eq!(g5.orders(), &[4]);
        assert_eq!(g5.generators(), &[2]);

        let g8 = unit_group(8).unwrap();
        assert_eq!(g8.generators(), &[7, 5]);
        assert_eq!(g8.orders(), &[2, 2]);

        let g15 = unit_group(15).unwrap();
        let mut orders = g15.orders().to_vec();
        orders.sort();
        assert_eq!(orders, vec![2, 4]);
        assert_eq!(g15.phi(), 8);
    }

    #[test]
    fn trivial_groups() {
        for q in [1, 2] {
            let g = unit_group(q).unwrap();
            assert_eq!(g.phi(), 1);
            assert!(g.generators().is_empty());
            assert_eq!(g.log(1), Some(vec![]));
        }
        assert_eq!(unit_group(2).unwrap().log(0), None);
    }

    #[test]
    fn unit_group_guard() {
        assert!(matches!(unit_group(UNIT_GROUP_LIMIT + 1), Err(Error::Resource(_))));
    }

    #[test]
    fn generator_count_follows_two_power() {
        for (q, count) in [(4u64, 1usize), (16, 2), (2 * 9 * 5, 2), (4 * 7, 2), (32 * 3, 3)] {
            assert_eq!(unit_group(q).unwrap().generators().len(), count, "q={q}");
        }
    }

    #[test]
    fn log_round_trip_and_order_product() {
        for q in 1..=2000u64 {
            let g = unit_group(q).unwrap();
            assert_eq!(g.orders().iter().product::<u64>(), euler_phi(q), "q={q}");
            let mut seen = vec![false; g.phi() as usize];
            for n in 0..q as i64 {
                match g.log(n) {
                    Some(e) => {
                        assert_eq!(g.reconstruct(&e), n as u64 % q, "q={q} n={n}");
                        let idx = g.log_index(n).unwrap() as usize;
                        assert!(!seen[idx]);
                        seen[idx] = true;
                    }
                    None => assert!(gcd(n as u64, q) > 1),
                }
            }
            assert!(seen.iter().all(|&s| s));
        }
    }

    #[test]
    fn inverse_mod() {
        assert_eq!(inv_mod(3, 7), Some(5));
        assert_eq!(inv_mod(2, 4), None);
        assert_eq!(inv_mod(0, 1), Some(0));
    }
}
