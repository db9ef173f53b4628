//! Trigonometric polynomials `P(theta) = sum c_n e(n theta)` and the grid-plus-refine
//! maximizer for `|P|` on the circle.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::numeric::CompensatedComplex;

/// Coefficients for frequencies `-degree..=degree`.
#[derive(Clone, Debug)]
pub struct TrigPoly {
    degree: usize,
    coeffs: Vec<Complex64>,
}

/// Location and size of a maximum of `|P|`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CircleMax {
    pub theta: f64,
    pub value: f64,
}

#[inline]
pub(crate) fn e(t: f64) -> Complex64 {
    let (s, c) = (TAU * t).sin_cos();
    Complex64::new(c, s)
}

impl TrigPoly {
    pub fn from_fn(degree: usize, mut coeff: impl FnMut(i64) -> Complex64) -> Self {
        let d = degree as i64;
        let coeffs = (-d..=d).map(&mut coeff).collect();
        TrigPoly { degree, coeffs }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coeff(&self, n: i64) -> Complex64 {
        self.coeffs[(n + self.degree as i64) as usize]
    }

    pub fn eval(&self, theta: f64) -> Complex64 {
        let mut acc = CompensatedComplex::new();
        acc.add(self.coeff(0));
        for n in 1..=self.degree as i64 {
            let z = e((n as f64 * theta).rem_euclid(1.0));
            acc.add(self.coeff(n) * z + self.coeff(-n) * z.conj());
        }
        acc.value()
    }

    /// `P(j / k)` for `j = 0..k`, via one inverse FFT of the coefficients folded mod `k`.
    pub fn grid_values(&self, k: usize) -> Vec<Complex64> {
        let mut buf = vec![Complex64::new(0.0, 0.0); k];
        let d = self.degree as i64;
        for n in -d..=d {
            buf[n.rem_euclid(k as i64) as usize] += self.coeff(n);
        }
        FftPlanner::<f64>::new().plan_fft_inverse(k).process(&mut buf);
        buf
    }

    /// Maximizes `|P|` over `[0, 1)` on a `grid_points` grid, then refines
    /// around the best node by golden-section search.
    pub fn max_modulus(&self, grid_points: usize) -> CircleMax {
        let k = grid_points.max(4);
        let grid = self.grid_values(k);
        let (j, best) = grid
            .iter()
            .map(|z| z.norm())
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |acc, (i, v)| if v > acc.1 { (i, v) } else { acc });
        let center = j as f64 / k as f64;
        refine(|t| self.eval(t).norm(), center, 1.0 / k as f64, best)
    }
}

/// Golden-section refinement of a local maximum of `f` in `[center - half_width, center + half_width]`.
///
/// Never returns less than `start_value`, the value already known at `center`.
pub(crate) fn refine(f: impl Fn(f64) -> f64, center: f64, half_width: f64, start_value: f64) -> CircleMax {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let (mut a, mut b) = (center - half_width, center + half_width);
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let (mut f1, mut f2) = (f(x1), f(x2));
    let mut best = CircleMax { theta: center, value: start_value };
    for _ in 0..80 {
        if f1 > best.value {
            best = CircleMax { theta: x1, value: f1 };
        }
        if f2 > best.value {
            best = CircleMax { theta: x2, value: f2 };
        }
        if b - a < 1e-13 {
            break;
        }
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = f(x1);
        }
    }
    best.theta = best.theta.rem_euclid(1.0);
    best
}
