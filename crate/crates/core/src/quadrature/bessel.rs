//! Bessel functions of the first kind, orders 0–2, for real non-negative
//! arguments.
//!
//! Three regimes: power series below x = 8, Miller's backward recurrence on
//! [8, 25), and the Hankel asymptotic expansion from 25 on. The series
//! loses digits to cancellation past x ≈ 8 and the asymptotic expansion is
//! not yet accurate to 1e-13 below x ≈ 25; the recurrence bridges the gap.

use crate::{Error, Result};
use std::f64::consts::{FRAC_1_SQRT_2, PI};

const SERIES_LIMIT: f64 = 8.0;
const ASYMPTOTIC_LIMIT: f64 = 25.0;

/// J_n(x) for n ∈ {0, 1, 2} and finite x ≥ 0.
pub fn bessel_j(n: u32, x: f64) -> Result<f64> {
    if n > 2 {
        return Err(Error::Domain(format!("Bessel order {n} not supported")));
    }
    if !(x >= 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!("Bessel argument must be finite and >= 0, got {x}")));
    }
    Ok(bessel_j012(x)[n as usize])
}

/// `[J₀(x), J₁(x), J₂(x)]` for finite x ≥ 0 (unchecked).
#[inline]
pub fn bessel_j012(x: f64) -> [f64; 3] {
    if x < SERIES_LIMIT {
        series_j012(x)
    } else if x < ASYMPTOTIC_LIMIT {
        miller_j012(x)
    } else {
        let (j0, j1) = asymptotic_j01(x);
        [j0, j1, 2.0 * j1 / x - j0]
    }
}

fn series_j012(x: f64) -> [f64; 3] {
    let q = -0.25 * x * x;
    let mut out = [0.0; 3];
    for (n, slot) in out.iter_mut().enumerate() {
        // first term (x/2)^n / n!
        let mut term = match n {
            0 => 1.0,
            1 => 0.5 * x,
            _ => 0.125 * x * x,
        };
        let mut sum = term;
        let mut k = 1.0;
        loop {
            term *= q / (k * (k + n as f64));
            sum += term;
            if term.abs() <= 1e-17 * sum.abs().max(1e-300) {
                break;
            }
            k += 1.0;
            if k > 200.0 {
                break;
            }
        }
        *slot = sum;
    }
    out
}

fn miller_j012(x: f64) -> [f64; 3] {
    // start well above x so the dominant solution has decayed away
    let mut m = (x + 20.0 + 9.0 * x.sqrt()) as usize;
    if m % 2 == 1 {
        m += 1;
    }
    let mut j_next = 0.0;
    let mut j_curr = 1e-30;
    let mut norm = 0.0;
    let mut keep = [0.0; 3];
    for k in (1..=m).rev() {
        let j_prev = 2.0 * k as f64 / x * j_curr - j_next;
        j_next = j_curr;
        j_curr = j_prev;
        let order = k - 1;
        if order % 2 == 0 && order > 0 {
            norm += 2.0 * j_curr;
        }
        if order <= 2 {
            keep[order] = j_curr;
        }
        if j_curr.abs() > 1e250 {
            j_next *= 1e-250;
            j_curr *= 1e-250;
            norm *= 1e-250;
            keep.iter_mut().for_each(|v| *v *= 1e-250);
        }
    }
    norm += keep[0];
    keep.map(|v| v / norm)
}

/// Hankel asymptotic expansion for J₀ and J₁.
fn asymptotic_j01(x: f64) -> (f64, f64) {
    let (p0, q0) = asymptotic_pq(0.0, x);
    let (p1, q1) = asymptotic_pq(1.0, x);
    let (s, c) = x.sin_cos();
    // cos/sin of x − π/4 and x − 3π/4 without forming the shifted argument
    let cos0 = (c + s) * FRAC_1_SQRT_2;
    let sin0 = (s - c) * FRAC_1_SQRT_2;
    let cos1 = (s - c) * FRAC_1_SQRT_2;
    let sin1 = -(s + c) * FRAC_1_SQRT_2;
    let amp = (2.0 / (PI * x)).sqrt();
    (amp * (p0 * cos0 - q0 * sin0), amp * (p1 * cos1 - q1 * sin1))
}

fn asymptotic_pq(nu: f64, x: f64) -> (f64, f64) {
    let mu = 4.0 * nu * nu;
    let mut p = 1.0;
    let mut q = 0.0;
    let mut term = 1.0;
    let mut last = f64::INFINITY;
    for k in 1..60 {
        let kf = k as f64;
        let odd = 2.0 * kf - 1.0;
        term *= (mu - odd * odd) / (kf * 8.0 * x);
        let mag = term.abs();
        if mag > last {
            break;
        }
        last = mag;
        // terms alternate between Q (odd k) and P (even k) with signs +,-,-,+,...
        match k % 4 {
            1 => q += term,
            2 => p -= term,
            3 => q -= term,
            _ => p += term,
        }
        if mag < 1e-17 {
            break;
        }
    }
    (p, q)
}

/// Positive zeros of J_n, located by McMahon's expansion and refined with Newton steps.
pub fn bessel_zero(n: u32, k: usize) -> f64 {
    debug_assert!(k >= 1 && n <= 2);
    let guess = match (n, k) {
        (0, 1) => 2.404825557695773,
        (1, 1) => 3.831705970207512,
        (2, 1) => 5.135622301840683,
        _ => {
            let mu = 4.0 * (n * n) as f64;
            let beta = (k as f64 + 0.5 * n as f64 - 0.25) * PI;
            let e = 8.0 * beta;
            beta - (mu - 1.0) / e - 4.0 * (mu - 1.0) * (7.0 * mu - 31.0) / (3.0 * e.powi(3))
        }
    };
    let mut x = guess;
    for _ in 0..8 {
        let j = bessel_j012(x);
        let (value, slope) = match n {
            0 => (j[0], -j[1]),
            1 => (j[1], j[0] - j[1] / x),
            _ => (j[2], j[1] - 2.0 * j[2] / x),
        };
        let step = value / slope;
        x -= step;
        if step.abs() < 1e-15 * x {
            break;
        }
    }
    x
}
