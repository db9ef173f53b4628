//! Dirichlet characters with exact root-of-unity values.
//!
//! A character mod `q` is an exponent vector `(c_i)` over the generators of
//! [`UnitGroup`]; its value at a unit `n` with discrete log `(e_i)` is
//! `e(sum c_i e_i / d_i)`. Values stay as [`RationalAngle`]s and are only turned
//! into floating-point complex numbers at the summation step.

use std::f64::consts::TAU;
use std::fmt;
use std::ops::Mul;
use std::sync::Arc;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::arithmetic::{gcd, lcm, unit_group, UnitGroup};
use crate::error::{domain, Result};

/// The point `e(num/den)` on the unit circle, kept as a reduced fraction in `[0, 1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RationalAngle {
    num: u64,
    den: u64,
}

impl RationalAngle {
    pub const ZERO: RationalAngle = RationalAngle { num: 0, den: 1 };

    pub fn new(num: i128, den: u64) -> Self {
        assert!(den >= 1, "angle denominator must be positive");
        let r = num.rem_euclid(den as i128) as u64;
        let g = gcd(r, den);
        RationalAngle { num: r / g, den: den / g }
    }

    pub fn numerator(&self) -> u64 {
        self.num
    }

    pub fn denominator(&self) -> u64 {
        self.den
    }

    /// The angle as a fraction of a full turn.
    pub fn turns(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    pub fn conj(self) -> Self {
        RationalAngle::new(-(self.num as i128), self.den)
    }

    pub fn pow(self, k: u64) -> Self {
        RationalAngle::new(self.num as i128 * k as i128, self.den)
    }

    /// `e(num/den)` as a complex double.
    ///
    /// Angles in the upper half are mapped through conjugation so that
    /// `a.conj().to_complex()` is bitwise the conjugate of `a.to_complex()`.
    pub fn to_complex(self) -> Complex64 {
        let (num, den) = (self.num, self.den);
        if num == 0 {
            return Complex64::new(1.0, 0.0);
        }
        if 2 * num > den {
            return RationalAngle { num: den - num, den }.to_complex().conj();
        }
        if 2 * num == den {
            return Complex64::new(-1.0, 0.0);
        }
        if 4 * num == den {
            return Complex64::new(0.0, 1.0);
        }
        let (s, c) = (TAU * (num as f64 / den as f64)).sin_cos();
        Complex64::new(c, s)
    }
}

impl Mul for RationalAngle {
    type Output = RationalAngle;

    fn mul(self, rhs: RationalAngle) -> RationalAngle {
        let den = lcm(self.den, rhs.den);
        let num = self.num as i128 * (den / self.den) as i128 + rhs.num as i128 * (den / rhs.den) as i128;
        RationalAngle::new(num, den)
    }
}

impl fmt::Display for RationalAngle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e({}/{})", self.num, self.den)
    }
}

/// Table of `e(k/order)` for `k < order`, conjugate-symmetric bit for bit.
#[derive(Clone, Debug)]
pub struct RootTable {
    roots: Vec<Complex64>,
}

impl RootTable {
    pub fn new(order: u64) -> Self {
        let order = order.max(1);
        let roots = (0..order)
            .map(|k| RationalAngle::new(k as i128, order).to_complex())
            .collect();
        RootTable { roots }
    }

    #[inline]
    pub fn get(&self, k: u64) -> Complex64 {
        self.roots[k as usize]
    }

    pub fn order(&self) -> u64 {
        self.roots.len() as u64
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        })
    }
}

/// A Dirichlet character mod `q`.
#[derive(Clone, Debug)]
pub struct Character {
    group: Arc<UnitGroup>,
    exps: Vec<u64>,
    order: u64,
    // order * c_i / d_i, so chi(n) = e(sum e_i * weight_i / order)
    weights: Vec<u64>,
    parity: Parity,
    conductor: u64,
}

impl PartialEq for Character {
    fn eq(&self, other: &Self) -> bool {
        self.modulus() == other.modulus() && self.exps == other.exps
    }
}

impl Eq for Character {}

impl Character {
    /// Builds the character with exponent vector `exps`; requires `0 <= c_i < d_i`.
    pub fn new(group: Arc<UnitGroup>, exps: Vec<u64>) -> Result<Self> {
        if exps.len() != group.orders().len() {
            return domain(format!(
                "exponent vector has {} entries, group mod {} has {} generators",
                exps.len(),
                group.modulus(),
                group.orders().len()
            ));
        }
        if let Some((i, (&c, &d))) = exps.iter().zip(group.orders()).enumerate().find(|(_, (&c, &d))| c >= d) {
            return domain(format!("exponent {c} at position {i} is not below the generator order {d}"));
        }
        let order = exps
            .iter()
            .zip(group.orders())
            .fold(1u64, |acc, (&c, &d)| lcm(acc, d / gcd(c, d)));
        let weights = exps
            .iter()
            .zip(group.orders())
            .map(|(&c, &d)| order * c / d % order)
            .collect();
        let mut chi = Character { group, exps, order, weights, parity: Parity::Even, conductor: 1 };
        chi.parity = match chi.exponent_at(-1) {
            Some(0) => Parity::Even,
            _ => Parity::Odd,
        };
        chi.conductor = chi.compute_conductor();
        Ok(chi)
    }

    pub fn principal(group: Arc<UnitGroup>) -> Self {
        let exps = vec![0; group.orders().len()];
        Character::new(group, exps).expect("zero vector is valid")
    }

    /// The `k`-th character in enumeration order (mixed radix over the generators).
    pub fn from_index(group: Arc<UnitGroup>, k: u64) -> Result<Self> {
        if k >= group.phi() {
            return domain(format!("character index {k} out of range for phi = {}", group.phi()));
        }
        let exps = group.exponents_of_index(k);
        Character::new(group, exps)
    }

    pub fn group(&self) -> &Arc<UnitGroup> {
        &self.group
    }

    pub fn modulus(&self) -> u64 {
        self.group.modulus()
    }

    pub fn exponents(&self) -> &[u64] {
        &self.exps
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn is_primitive(&self) -> bool {
        self.conductor == self.modulus()
    }

    pub fn is_principal(&self) -> bool {
        self.order == 1
    }

    pub fn conj(&self) -> Character {
        let exps = self
            .exps
            .iter()
            .zip(self.group.orders())
            .map(|(&c, &d)| (d - c) % d)
            .collect();
        Character::new(self.group.clone(), exps).expect("conjugate exponents are in range")
    }

    /// Exponent vector rendered as `c1;c2;...` (empty for the trivial group).
    pub fn exps_label(&self) -> String {
        exps_label(&self.exps)
    }

    /// `k` with `chi(n) = e(k / order)`, or `None` when `gcd(n, q) > 1`.
    #[inline]
    pub fn exponent_at(&self, n: i64) -> Option<u64> {
        self.group.log_index(n).map(|idx| self.exponent_of_log_index(idx))
    }

    #[inline]
    fn exponent_of_log_index(&self, idx: u64) -> u64 {
        let mut acc = 0u64;
        for ((&s, &d), &w) in self.group.strides().iter().zip(self.group.orders()).zip(&self.weights) {
            acc += (idx / s % d) * w;
        }
        acc % self.order
    }

    /// `chi(n)` as an exact angle; `None` is the value zero.
    pub fn evaluate(&self, n: i64) -> Option<RationalAngle> {
        self.exponent_at(n).map(|k| RationalAngle::new(k as i128, self.order))
    }

    pub fn value(&self, n: i64) -> Complex64 {
        self.evaluate(n).map_or(Complex64::new(0.0, 0.0), RationalAngle::to_complex)
    }

    /// Exponent of `chi(r)` for each residue `r = 0..q`; `None` off the units.
    pub fn exponent_table(&self) -> Vec<Option<u64>> {
        (0..self.modulus() as usize)
            .map(|r| self.group.log_index_of_residue(r).map(|i| self.exponent_of_log_index(i)))
            .collect()
    }

    /// `chi(r)` for `r = 0..q` as complex doubles.
    pub fn value_table(&self) -> Vec<Complex64> {
        let roots = RootTable::new(self.order);
        self.exponent_table()
            .into_iter()
            .map(|e| e.map_or(Complex64::new(0.0, 0.0), |k| roots.get(k)))
            .collect()
    }

    // Least f | q such that chi is 1 on every unit n = 1 (mod f).
    fn compute_conductor(&self) -> u64 {
        let q = self.modulus();
        if self.order == 1 || q <= 2 {
            return 1;
        }
        let divisors = crate::arithmetic::factorize(q).expect("q > 2").divisors();
        for f in divisors {
            let trivial_on_kernel = (1..q).step_by(f as usize).all(|n| match self.exponent_at(n as i64) {
                Some(k) => k == 0,
                None => true,
            });
            if trivial_on_kernel {
                return f;
            }
        }
        q
    }
}

pub(crate) fn exps_label(exps: &[u64]) -> String {
    exps.iter().map(u64::to_string).collect::<Vec<_>>().join(";")
}

/// All `phi(q)` characters mod `q`, principal first.
pub fn enumerate_characters(q: u64) -> Result<Vec<Character>> {
    let group = Arc::new(unit_group(q)?);
    enumerate_in(&group)
}

pub fn enumerate_in(group: &Arc<UnitGroup>) -> Result<Vec<Character>> {
    (0..group.phi()).map(|k| Character::from_index(group.clone(), k)).collect()
}

/// Primitive characters mod `q` of order exactly `g`.
pub fn characters_of_order(q: u64, g: u64) -> Result<Vec<Character>> {
    let group = Arc::new(unit_group(q)?);
    characters_of_order_in(&group, g)
}

pub fn characters_of_order_in(group: &Arc<UnitGroup>, g: u64) -> Result<Vec<Character>> {
    if g == 0 {
        return domain("character order must be >= 1");
    }
    // per generator, the exponents whose component order divides g
    let choices: Vec<Vec<u64>> = group
        .orders()
        .iter()
        .map(|&d| (0..d).filter(|&c| g.is_multiple_of(d / gcd(c, d))).collect())
        .collect();
    let mut out = Vec::new();
    let mut cursor = vec![0usize; choices.len()];
    loop {
        let exps: Vec<u64> = cursor.iter().zip(&choices).map(|(&i, c)| c[i]).collect();
        let order = exps
            .iter()
            .zip(group.orders())
            .fold(1u64, |acc, (&c, &d)| lcm(acc, d / gcd(c, d)));
        if order == g {
            let chi = Character::new(group.clone(), exps)?;
            if chi.is_primitive() {
                out.push(chi);
            }
        }
        let mut i = 0;
        loop {
            if i == cursor.len() {
                out.sort_by(|a, b| a.exponents().cmp(b.exponents()));
                return Ok(out);
            }
            cursor[i] += 1;
            if cursor[i] < choices[i].len() {
                break;
            }
            cursor[i] = 0;
            i += 1;
        }
    }
}

/// A value of a multiplicative function at one integer.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Phase {
    Zero,
    /// An exact root of unity.
    Exact(RationalAngle),
    /// `e(t)` for a floating-point turn `t` in `[0, 1)`.
    Turns(f64),
}

impl Phase {
    pub const ONE: Phase = Phase::Exact(RationalAngle::ZERO);

    fn turns(self) -> Option<f64> {
        match self {
            Phase::Zero => None,
            Phase::Exact(a) => Some(a.turns()),
            Phase::Turns(t) => Some(t),
        }
    }

    pub fn to_complex(self) -> Complex64 {
        match self {
            Phase::Zero => Complex64::new(0.0, 0.0),
            Phase::Exact(a) => a.to_complex(),
            Phase::Turns(t) => {
                let (s, c) = (TAU * t).sin_cos();
                Complex64::new(c, s)
            }
        }
    }

    pub fn conj(self) -> Phase {
        match self {
            Phase::Zero => Phase::Zero,
            Phase::Exact(a) => Phase::Exact(a.conj()),
            Phase::Turns(t) => Phase::Turns((-t).rem_euclid(1.0)),
        }
    }

    pub fn times(self, other: Phase) -> Phase {
        match (self, other) {
            (Phase::Zero, _) | (_, Phase::Zero) => Phase::Zero,
            (Phase::Exact(a), Phase::Exact(b)) => Phase::Exact(a * b),
            (a, b) => Phase::Turns((a.turns().unwrap() + b.turns().unwrap()).rem_euclid(1.0)),
        }
    }

    /// `Re(self * conj(other))`, symmetric in its arguments bit for bit.
    pub fn re_times_conj(self, other: Phase) -> f64 {
        match (self, other) {
            (Phase::Zero, _) | (_, Phase::Zero) => 0.0,
            (Phase::Exact(a), Phase::Exact(b)) => {
                let d = a * b.conj();
                // cos is even: fold to the lower half so swapping arguments is exact
                let d = if 2 * d.numerator() > d.denominator() { d.conj() } else { d };
                d.to_complex().re
            }
            (a, b) => {
                let d = (a.turns().unwrap() - b.turns().unwrap()).abs();
                (TAU * d).cos()
            }
        }
    }
}

/// A completely multiplicative function with `|f(n)| <= 1` and `f(1) = 1`.
pub trait MultiplicativeFunction: Sync {
    fn at_prime(&self, p: u64) -> Phase;

    /// `f(n)` for `n >= 1`, by factoring `n` and multiplying prime values.
    fn at(&self, n: u64) -> Phase {
        let mut acc = Phase::ONE;
        let mut rest = n;
        let mut p = 2u64;
        while p * p <= rest {
            while rest.is_multiple_of(p) {
                acc = acc.times(self.at_prime(p));
                rest /= p;
            }
            p += 1;
        }
        if rest > 1 {
            acc = acc.times(self.at_prime(rest));
        }
        acc
    }
}

impl MultiplicativeFunction for Character {
    fn at_prime(&self, p: u64) -> Phase {
        self.at(p)
    }

    fn at(&self, n: u64) -> Phase {
        match self.evaluate((n % self.modulus()) as i64) {
            Some(a) => Phase::Exact(a),
            None => Phase::Zero,
        }
    }
}

/// The constant function 1.
#[derive(Clone, Copy, Debug, Default)]
pub struct One;

impl MultiplicativeFunction for One {
    fn at_prime(&self, _p: u64) -> Phase {
        Phase::ONE
    }

    fn at(&self, _n: u64) -> Phase {
        Phase::ONE
    }
}

/// Completely multiplicative function sending each prime to an independent
/// uniform point of the unit circle.
///
/// `f(p)` is the first draw of the ChaCha8 stream numbered `p` under `seed`,
/// so values do not depend on evaluation order.
#[derive(Clone, Copy, Debug)]
pub struct RandomUnimodular {
    seed: u64,
}

impl RandomUnimodular {
    pub fn new(seed: u64) -> Self {
        RandomUnimodular { seed }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }
}

impl MultiplicativeFunction for RandomUnimodular {
    fn at_prime(&self, p: u64) -> Phase {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(p);
        Phase::Turns(rng.gen::<f64>())
    }
}
