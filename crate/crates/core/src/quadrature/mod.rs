//! Semi-infinite Hankel-transform integrals `∫₀^∞ f(κ) J_n(κρ) dκ` for
//! exponentially decaying, possibly complex kernels.
//!
//! Two strategies are available. Adaptive Gauss–Kronrod panels on a
//! truncated interval `[0, κ_max]` are used when the Bessel factor is
//! slowly varying compared with the kernel's decay (`ρ ≤ decay_scale`).
//! Otherwise the integral is split at the zeros of `J_n(κρ)`, each
//! half-oscillation is integrated adaptively, and the alternating partial
//! sums are accelerated with Wynn's ε-algorithm.
//!
//! Kernels are never evaluated at κ = 0 exactly: the Kronrod abscissae are
//! interior to every panel.

mod bessel;
mod gauss;

pub use bessel::{bessel_j, bessel_j012, bessel_zero};
pub use gauss::{gauss_legendre, gauss_legendre_on};

use crate::tensor::CZERO;
use crate::{Error, Result};
use gauss::{WG10, WGK21, XGK21};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    #[default]
    Auto,
    Adaptive,
    PartitionExtrapolation,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSettings {
    pub rel_tol: f64,
    /// Absolute floor, as a fraction of `∫|f J_n|`.
    pub abs_tol: f64,
    pub max_intervals: usize,
    pub accel_terms: usize,
    pub strategy: Strategy,
}

impl Default for QuadratureSettings {
    fn default() -> Self {
        QuadratureSettings {
            rel_tol: 1e-9,
            abs_tol: 1e-14,
            max_intervals: 10_000,
            accel_terms: 12,
            strategy: Strategy::Auto,
        }
    }
}

impl QuadratureSettings {
    pub fn with_rel_tol(mut self, rel_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self
    }

    pub fn with_strategy(mut self, strategy: Strategy) -> Self {
        self.strategy = strategy;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.abs_tol > 0.0) {
            return Err(Error::Precondition("tolerances must be positive".into()));
        }
        if self.max_intervals == 0 || self.accel_terms == 0 {
            return Err(Error::Precondition("interval and extrapolation counts must be >= 1".into()));
        }
        Ok(())
    }
}

/// A complex kernel of the radial spectral variable together with the
/// length `decay_scale` such that the kernel decays like `e^{−κ·decay_scale}`.
pub struct SpectralKernel<F> {
    pub eval: F,
    pub decay_scale: f64,
}

impl<F: Fn(f64) -> Complex64> SpectralKernel<F> {
    pub fn new(eval: F, decay_scale: f64) -> Self {
        SpectralKernel { eval, decay_scale }
    }
}

/// Integral value with its estimated absolute error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: Complex64,
    pub error: f64,
}

impl Estimate {
    pub const ZERO: Estimate = Estimate { value: CZERO, error: 0.0 };
}

/// `∫₀^∞ f(κ) J_n(κρ) dκ` with an error estimate.
pub fn hankel_transform<F>(
    f: &SpectralKernel<F>,
    n: u32,
    rho: f64,
    settings: &QuadratureSettings,
) -> Result<Estimate>
where
    F: Fn(f64) -> Complex64,
{
    let [out] = hankel_transform_multi(|k| [(f.eval)(k)], [n], f.decay_scale, rho, settings)?;
    Ok(out)
}

/// Several Hankel transforms sharing one pass over κ: component `i` is
/// `∫ kernel(κ)[i] · J_{orders[i]}(κρ) dκ`.
pub fn hankel_transform_multi<const N: usize, F>(
    kernel: F,
    orders: [u32; N],
    decay_scale: f64,
    rho: f64,
    settings: &QuadratureSettings,
) -> Result<[Estimate; N]>
where
    F: Fn(f64) -> [Complex64; N],
{
    transform_multi(kernel, orders, decay_scale, rho, 0.0, settings)
}

/// As [`hankel_transform_multi`] for kernels that oscillate by themselves
/// on the length `oscillation` (e.g. a `J₁(κa)` source factor). `Auto`
/// then always integrates adaptively with panels resolving both scales.
pub(crate) fn hankel_transform_multi_oscillating<const N: usize, F>(
    kernel: F,
    orders: [u32; N],
    decay_scale: f64,
    rho: f64,
    oscillation: f64,
    settings: &QuadratureSettings,
) -> Result<[Estimate; N]>
where
    F: Fn(f64) -> [Complex64; N],
{
    transform_multi(kernel, orders, decay_scale, rho, oscillation, settings)
}

fn transform_multi<const N: usize, F>(
    kernel: F,
    orders: [u32; N],
    decay_scale: f64,
    rho: f64,
    oscillation: f64,
    settings: &QuadratureSettings,
) -> Result<[Estimate; N]>
where
    F: Fn(f64) -> [Complex64; N],
{
    settings.validate()?;
    if let Some(n) = orders.iter().find(|&&n| n > 2) {
        return Err(Error::Domain(format!("Hankel order {n} not supported")));
    }
    if !(rho >= 0.0 && rho.is_finite()) {
        return Err(Error::Domain(format!("rho must be finite and >= 0, got {rho}")));
    }
    if !(decay_scale > 0.0 && decay_scale.is_finite()) {
        return Err(Error::Precondition(format!("decay scale must be positive, got {decay_scale}")));
    }
    // J_n(0) = 0 for n ≥ 1: those components vanish identically at ρ = 0
    let active: [bool; N] = std::array::from_fn(|i| rho > 0.0 || orders[i] == 0);
    let kernel = |k: f64| -> [Complex64; N] {
        let mut f = kernel(k);
        for i in 0..N {
            if !active[i] {
                f[i] = CZERO;
            }
        }
        f
    };
    let integrand = |k: f64| -> [Complex64; N] {
        let f = kernel(k);
        let j = bessel_j012(k * rho);
        let mut out = [CZERO; N];
        for i in 0..N {
            out[i] = f[i] * j[orders[i] as usize];
        }
        out
    };
    let partition = match settings.strategy {
        Strategy::Auto => oscillation == 0.0 && rho > decay_scale,
        Strategy::Adaptive => false,
        Strategy::PartitionExtrapolation => rho > 0.0,
    };
    let mut out = if partition {
        partition_extrapolate(&integrand, &kernel, orders[0], decay_scale, rho, settings)?
    } else {
        truncated_adaptive(&integrand, &kernel, decay_scale, rho + oscillation, settings)?
    };
    for (i, n) in orders.iter().enumerate() {
        if rho == 0.0 && *n >= 1 {
            out[i] = Estimate::ZERO;
        }
    }
    Ok(out)
}

#[derive(Clone, Copy)]
struct Panel<const N: usize> {
    a: f64,
    b: f64,
    val: [Complex64; N],
    err: [f64; N],
    l1: [f64; N],
}

fn gk21<const N: usize, G>(g: &G, a: f64, b: f64) -> Panel<N>
where
    G: Fn(f64) -> [Complex64; N],
{
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let mut fv = [[CZERO; N]; 21];
    fv[10] = g(mid);
    for i in 0..10 {
        let dx = half * XGK21[i];
        fv[i] = g(mid - dx);
        fv[20 - i] = g(mid + dx);
    }
    let mut val = [CZERO; N];
    let mut err = [0.0; N];
    let mut l1 = [0.0; N];
    for c in 0..N {
        let mut resk = fv[10][c] * WGK21[10];
        let mut resg = CZERO;
        let mut resabs = fv[10][c].norm() * WGK21[10];
        for i in 0..10 {
            let pair = fv[i][c] + fv[20 - i][c];
            resk += pair * WGK21[i];
            resabs += WGK21[i] * (fv[i][c].norm() + fv[20 - i][c].norm());
            if i % 2 == 1 {
                resg += pair * WG10[i / 2];
            }
        }
        let mean = resk * 0.5;
        let mut resasc = WGK21[10] * (fv[10][c] - mean).norm();
        for i in 0..10 {
            resasc += WGK21[i] * ((fv[i][c] - mean).norm() + (fv[20 - i][c] - mean).norm());
        }
        let hl = half.abs();
        let mut e = ((resk - resg) * half).norm();
        let resasc = resasc * hl;
        let resabs = resabs * hl;
        if resasc != 0.0 && e != 0.0 {
            e = resasc * (200.0 * e / resasc).powf(1.5).min(1.0);
        }
        if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
            e = e.max(50.0 * f64::EPSILON * resabs);
        }
        val[c] = resk * half;
        err[c] = e;
        l1[c] = resabs;
    }
    Panel { a, b, val, err, l1 }
}

struct AdaptiveOutcome<const N: usize> {
    val: [Complex64; N],
    err: [f64; N],
    l1: [f64; N],
    panels: usize,
    converged: bool,
}

fn tolerance(value: Complex64, l1: f64, s: &QuadratureSettings) -> f64 {
    // Requests below the rounding floor of the Kronrod sums are clamped to it.
    let floor = 50.0 * f64::EPSILON * l1;
    (s.rel_tol * value.norm()).max(s.abs_tol * l1).max(floor).max(1e-300)
}

/// Global adaptive bisection over the given panel boundaries. `extra` holds
/// error contributions from outside the integrated range (e.g. a tail) and
/// `budget` caps the number of panels.
fn adaptive<const N: usize, G>(
    g: &G,
    breaks: &[f64],
    extra: [f64; N],
    settings: &QuadratureSettings,
    tol_scale: f64,
    budget: usize,
) -> AdaptiveOutcome<N>
where
    G: Fn(f64) -> [Complex64; N],
{
    let mut panels: Vec<Panel<N>> = breaks.windows(2).map(|w| gk21(g, w[0], w[1])).collect();
    loop {
        let mut val = [CZERO; N];
        let mut err = extra;
        let mut l1 = [0.0; N];
        for p in &panels {
            for c in 0..N {
                val[c] += p.val[c];
                err[c] += p.err[c];
                l1[c] += p.l1[c];
            }
        }
        let tol: [f64; N] = std::array::from_fn(|c| tol_scale * tolerance(val[c], l1[c], settings));
        let converged = (0..N).all(|c| err[c] <= tol[c]);
        if converged || panels.len() >= budget {
            return AdaptiveOutcome { val, err, l1, panels: panels.len(), converged };
        }
        let worst = panels
            .iter()
            .enumerate()
            .filter(|(_, p)| (p.b - p.a).abs() > 1e-13 * p.b.abs().max(1e-300))
            .map(|(i, p)| {
                let badness = (0..N).map(|c| p.err[c] / tol[c]).fold(0.0, f64::max);
                (i, badness)
            })
            .max_by(|x, y| x.1.total_cmp(&y.1));
        let Some((i, _)) = worst else {
            return AdaptiveOutcome { val, err, l1, panels: panels.len(), converged: false };
        };
        let p = panels.swap_remove(i);
        let m = 0.5 * (p.a + p.b);
        panels.push(gk21(g, p.a, m));
        panels.push(gk21(g, m, p.b));
    }
}

/// Panel boundaries on [a, b]: geometric refinement toward the origin on
/// the kernel's decay scale, and no panel wider than two Bessel periods.
fn initial_breaks(a: f64, b: f64, decay_scale: f64, rho: f64) -> Vec<f64> {
    let mut pts = vec![a];
    if a == 0.0 {
        let mut k = 0.125 / decay_scale;
        while k < b {
            pts.push(k);
            k *= 2.0;
        }
    }
    pts.push(b);
    if rho > 0.0 {
        let max_width = 4.0 * std::f64::consts::PI / rho;
        let mut refined = vec![pts[0]];
        for w in pts.windows(2) {
            let pieces = ((w[1] - w[0]) / max_width).ceil().max(1.0) as usize;
            for j in 1..=pieces {
                refined.push(w[0] + (w[1] - w[0]) * j as f64 / pieces as f64);
            }
        }
        pts = refined;
    }
    pts
}

fn truncated_adaptive<const N: usize, G, K>(
    g: &G,
    kernel: &K,
    decay_scale: f64,
    rho: f64,
    settings: &QuadratureSettings,
) -> Result<[Estimate; N]>
where
    G: Fn(f64) -> [Complex64; N],
    K: Fn(f64) -> [Complex64; N],
{
    let mut k_max = -settings.abs_tol.ln() / decay_scale;
    let mut breaks = initial_breaks(0.0, k_max, decay_scale, rho);
    let mut extra_breaks = Vec::new();
    for _ in 0..12 {
        let tail = tail_bound(kernel, k_max, decay_scale);
        let all: Vec<f64> = breaks.iter().chain(extra_breaks.iter()).copied().collect();
        let out = adaptive(g, &all, [0.0; N], settings, 0.75, settings.max_intervals);
        let tol: [f64; N] = std::array::from_fn(|c| tolerance(out.val[c], out.l1[c], settings));
        let tail_ok = (0..N).all(|c| tail[c] <= 0.25 * tol[c]);
        if tail_ok || !out.converged {
            let err = std::array::from_fn(|c| out.err[c] + tail[c]);
            return finish(out.val, err, out.converged && tail_ok);
        }
        let new_max = 2.0 * k_max;
        let ext = initial_breaks(k_max, new_max, decay_scale, rho);
        extra_breaks.extend_from_slice(&ext[1..]);
        breaks.retain(|&b| b <= k_max);
        k_max = new_max;
    }
    let tail = tail_bound(kernel, k_max, decay_scale);
    let all: Vec<f64> = breaks.iter().chain(extra_breaks.iter()).copied().collect();
    let out = adaptive(g, &all, tail, settings, 1.0, settings.max_intervals);
    finish(out.val, out.err, out.converged)
}

/// Bound on `∫_{k_max}^∞ |f|` assuming `e^{−κ·decay_scale}` decay from a few probes.
fn tail_bound<const N: usize, K>(kernel: &K, k_max: f64, decay_scale: f64) -> [f64; N]
where
    K: Fn(f64) -> [Complex64; N],
{
    let mut peak = [0.0f64; N];
    for s in [1.0, 1.03, 1.07, 1.13, 1.21] {
        let f = kernel(k_max * s);
        for c in 0..N {
            peak[c] = peak[c].max(f[c].norm() * (s - 1.0).mul_add(k_max * decay_scale, 0.0).exp());
        }
    }
    peak.map(|p| 2.0 * p * decay_scale.recip())
}

fn finish<const N: usize>(
    val: [Complex64; N],
    err: [f64; N],
    converged: bool,
) -> Result<[Estimate; N]> {
    if !converged {
        let (worst, _) = err
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .unwrap_or((0, &0.0));
        return Err(Error::NonConvergence { estimate: val[worst], error_bound: err[worst] });
    }
    Ok(std::array::from_fn(|c| Estimate { value: val[c], error: err[c] }))
}

fn partition_extrapolate<const N: usize, G, K>(
    g: &G,
    kernel: &K,
    order: u32,
    decay_scale: f64,
    rho: f64,
    settings: &QuadratureSettings,
) -> Result<[Estimate; N]>
where
    G: Fn(f64) -> [Complex64; N],
    K: Fn(f64) -> [Complex64; N],
{
    let local = QuadratureSettings { rel_tol: 0.1 * settings.rel_tol, ..*settings };
    let mut used = 0usize;
    let mut left = 0.0;
    let mut zero_index = 1;
    let mut sums: Vec<[Complex64; N]> = Vec::new();
    let mut running = [CZERO; N];
    let mut quad_err = [0.0; N];
    let mut l1 = [0.0; N];
    let mut history: Vec<[Complex64; N]> = Vec::new();
    let mut small_terms = 0usize;
    let mut agreements = 0usize;

    loop {
        let right = bessel_zero(order, zero_index) / rho;
        zero_index += 1;
        let breaks = if left == 0.0 {
            initial_breaks(0.0, right, decay_scale, rho)
        } else {
            vec![left, right]
        };
        let budget = settings.max_intervals.saturating_sub(used).max(breaks.len());
        let out = adaptive(g, &breaks, [0.0; N], &local, 1.0, budget);
        used += out.panels;
        for c in 0..N {
            running[c] += out.val[c];
            quad_err[c] += out.err[c];
            l1[c] += out.l1[c];
        }
        sums.push(running);
        left = right;

        let tol: [f64; N] = std::array::from_fn(|c| tolerance(running[c], l1[c], settings));
        let term_small = (0..N).all(|c| out.val[c].norm() <= 0.01 * tol[c]);
        let tail_small = {
            let t = tail_bound(kernel, right, decay_scale);
            (0..N).all(|c| t[c] <= 0.01 * tol[c])
        };
        if term_small && tail_small {
            small_terms += 1;
        } else {
            small_terms = 0;
        }
        if small_terms >= 2 {
            let err: [f64; N] = std::array::from_fn(|c| quad_err[c] + out.val[c].norm());
            return finish(running, err, out.converged);
        }

        let start = sums.len().saturating_sub(settings.accel_terms.max(3));
        let accel: [Complex64; N] = std::array::from_fn(|c| {
            let seq: Vec<Complex64> = sums[start..].iter().map(|s| s[c]).collect();
            wynn_epsilon(&seq)
        });
        if let Some(prev) = history.last() {
            let diff: [f64; N] = std::array::from_fn(|c| (accel[c] - prev[c]).norm());
            if (0..N).all(|c| diff[c] + quad_err[c] <= tolerance(accel[c], l1[c], settings)) && sums.len() >= 4 {
                agreements += 1;
            } else {
                agreements = 0;
            }
            if agreements >= 2 {
                let err: [f64; N] = std::array::from_fn(|c| diff[c] + quad_err[c]);
                return finish(accel, err, true);
            }
            if used >= settings.max_intervals || !out.converged {
                let err: [f64; N] = std::array::from_fn(|c| diff[c] + quad_err[c]);
                return finish(accel, err, false);
            }
        }
        history.push(accel);
    }
}

/// Wynn's ε-algorithm; returns the highest-order even-column estimate.
fn wynn_epsilon(seq: &[Complex64]) -> Complex64 {
    let m = seq.len();
    if m < 3 {
        return seq[m - 1];
    }
    // e_prev: column r−1, e_cur: column r
    let mut e_prev = vec![CZERO; m + 1];
    let mut e_cur: Vec<Complex64> = seq.to_vec();
    let mut best = seq[m - 1];
    let mut r = 0;
    while e_cur.len() > 1 {
        let mut next = Vec::with_capacity(e_cur.len() - 1);
        for k in 0..e_cur.len() - 1 {
            let d = e_cur[k + 1] - e_cur[k];
            if d.norm() == 0.0 {
                return if r % 2 == 0 { e_cur[k + 1] } else { best };
            }
            next.push(e_prev[k + 1] + d.inv());
        }
        r += 1;
        e_prev = e_cur;
        e_cur = next;
        if r % 2 == 0 {
            let cand = *e_cur.last().unwrap();
            if !cand.is_finite() {
                break;
            }
            best = cand;
        }
    }
    best
}
