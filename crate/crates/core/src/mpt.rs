//! Rank-2 magnetic polarizability tensors: the closed form for a sphere,
//! tabulated spectral signatures (CSV), interpolation in frequency and the
//! structural checks a physical signature must pass.
//!
//! A tensor `M` is defined by the far field of the object in a uniform
//! background: `H − H₀ ≈ D²G₀(x, z) M H₀(z)`. It splits as
//! `M = N⁰ + R + iI` with `N⁰` the magnetostatic part, `R` negative
//! semidefinite and `I` positive semidefinite.

use crate::tensor::{ComplexTensor3, Tensor3};
use crate::{Error, Result, MU0};
use nalgebra::{Matrix3, SymmetricEigen};
use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::PI;
use std::fmt::Write as _;
use std::path::Path;

const SYMMETRY_TOL: f64 = 1e-10;
const DEFINITENESS_TOL: f64 = 1e-10;

/// Beyond this `|v|` the interior solution is taken at its perfect-conductor
/// limit (`cot v = −i`).
const ASYMPTOTIC_V: f64 = 1e4;
const SERIES_V: f64 = 1.0;

pub const SIGNATURE_HEADER: &str = "omega,ReM11,ReM12,ReM13,ReM22,ReM23,ReM33,ImM11,ImM12,ImM13,ImM22,ImM23,ImM33";

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Mpt {
    tensor: ComplexTensor3,
    omega: f64,
}

impl Mpt {
    /// Checks complex symmetry and that `Im M` is positive semidefinite.
    pub fn new(tensor: ComplexTensor3, omega: f64) -> Result<Self> {
        check_invariants(&tensor).map_err(|message| Error::Invariant { row: 0, message })?;
        Ok(Mpt { tensor, omega })
    }

    pub fn tensor(&self) -> &ComplexTensor3 {
        &self.tensor
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }
}

fn symmetric_eigenvalues(t: &Tensor3) -> [f64; 3] {
    let m = Matrix3::from_fn(|i, j| 0.5 * (t.0[i][j] + t.0[j][i]));
    let mut ev: Vec<f64> = SymmetricEigen::new(m).eigenvalues.iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    [ev[0], ev[1], ev[2]]
}

fn check_invariants(t: &ComplexTensor3) -> std::result::Result<(), String> {
    let norm = t.frobenius();
    if !norm.is_finite() {
        return Err("tensor has non-finite entries".into());
    }
    let asym = t.max_asymmetry();
    if asym > SYMMETRY_TOL * norm {
        return Err(format!("tensor is not symmetric: max |M_ij - M_ji| = {asym:e}"));
    }
    let im = t.im();
    let lowest = symmetric_eigenvalues(&im)[0];
    if lowest < -DEFINITENESS_TOL * im.frobenius() {
        return Err(format!("imaginary part is indefinite: eigenvalue {lowest:e}"));
    }
    Ok(())
}

/// Scalar polarizability of a sphere: `M = m(ω) I`.
pub fn sphere_polarizability(alpha: f64, sigma_star: f64, mu_rstar: f64, omega: f64) -> Result<Complex64> {
    for (name, v) in [("alpha", alpha), ("sigma_star", sigma_star), ("mu_rstar", mu_rstar), ("omega", omega)] {
        if !(v > 0.0 && v.is_finite()) {
            return Err(Error::Domain(format!("{name} must be positive, got {v}")));
        }
    }
    // v = kα with k² = iωμ₀μσ, principal root
    let s = alpha * (omega * MU0 * mu_rstar * sigma_star).sqrt() * std::f64::consts::FRAC_1_SQRT_2;
    let v = Complex64::new(s, s);
    // Interior field C·curl curl(r j₁(kr) cos θ), exterior −∇((m/4πr² − r) cos θ).
    // With p ∝ j₁(v) and q ∝ j₁(v) + v j₁'(v) = v j₀(v) − j₁(v) (common factor
    // dropped), normal B and tangential H continuity at r = α read
    //   2μ p C − 2x = 1,   q C + x = 1,   x = m/(4πα³).
    let (p, q) = if v.norm() <= SERIES_V {
        let (j0, j1) = spherical_j01_series(v);
        (j1, v * j0 - j1)
    } else {
        let cot = if v.norm() > ASYMPTOTIC_V { Complex64::new(0.0, -1.0) } else { cot_upper(v) };
        // j₀ = sin v / v, j₁ = (sin v − v cos v)/v², both divided by sin v
        let p = (1.0 - v * cot) / (v * v);
        (p, Complex64::new(1.0, 0.0) - p)
    };
    let x = solve_2x2([[2.0 * mu_rstar * p, Complex64::new(-2.0, 0.0)], [q, Complex64::new(1.0, 0.0)]], [1.0, 1.0])[1];
    Ok(4.0 * PI * alpha.powi(3) * x)
}

fn solve_2x2(a: [[Complex64; 2]; 2], b: [f64; 2]) -> [Complex64; 2] {
    let det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
    [(a[1][1] * b[0] - a[0][1] * b[1]) / det, (a[0][0] * b[1] - a[1][0] * b[0]) / det]
}

/// `cot v` for `Im v > 0` through `e^{2iv}`, which cannot overflow there.
fn cot_upper(v: Complex64) -> Complex64 {
    let e = (Complex64::new(0.0, 2.0) * v).exp();
    Complex64::new(0.0, 1.0) * (1.0 + e) / (e - 1.0)
}

/// `j_n(v) = vⁿ Σ (−v²/2)^k / (k! (2n+2k+1)!!)` for n = 0, 1.
fn spherical_j01_series(v: Complex64) -> (Complex64, Complex64) {
    let w = -v * v * 0.5;
    let mut t0 = Complex64::new(1.0, 0.0);
    let mut t1 = Complex64::new(1.0 / 3.0, 0.0);
    let (mut s0, mut s1) = (t0, t1);
    for k in 1..40 {
        let kf = k as f64;
        t0 *= w / (kf * (2.0 * kf + 1.0));
        t1 *= w / (kf * (2.0 * kf + 3.0));
        s0 += t0;
        s1 += t1;
        if t0.norm() < 1e-18 * s0.norm() && t1.norm() < 1e-18 * s1.norm() {
            break;
        }
    }
    (s0, v * s1)
}

/// Isotropic MPT of a sphere of radius `alpha`.
pub fn sphere_mpt(alpha: f64, sigma_star: f64, mu_rstar: f64, omega: f64) -> Result<Mpt> {
    let m = sphere_polarizability(alpha, sigma_star, mu_rstar, omega)?;
    let tensor = ComplexTensor3::scaled_identity(m);
    debug_assert!(tensor.0[0][1] == Complex64::new(0.0, 0.0));
    Mpt::new(tensor, omega)
}

/// Tabulated MPTs, strictly increasing in ω.
#[derive(Debug, Clone, PartialEq)]
pub struct MptSignature {
    entries: Vec<Mpt>,
    provenance: String,
}

impl MptSignature {
    pub fn new(entries: Vec<Mpt>, provenance: impl Into<String>) -> Result<Self> {
        for (i, w) in entries.windows(2).enumerate() {
            if !(w[1].omega > w[0].omega) {
                return Err(Error::Order { row: i + 2 });
            }
        }
        Ok(MptSignature { entries, provenance: provenance.into() })
    }

    pub fn entries(&self) -> &[Mpt] {
        &self.entries
    }

    pub fn provenance(&self) -> &str {
        &self.provenance
    }

    pub fn omega_range(&self) -> Option<(f64, f64)> {
        Some((self.entries.first()?.omega, self.entries.last()?.omega))
    }
}

pub fn sphere_signature(alpha: f64, sigma_star: f64, mu_rstar: f64, omegas: &[f64]) -> Result<MptSignature> {
    let entries = omegas
        .iter()
        .map(|&w| sphere_mpt(alpha, sigma_star, mu_rstar, w))
        .collect::<Result<Vec<_>>>()?;
    MptSignature::new(
        entries,
        format!("sphere-analytic alpha={alpha} sigma_star={sigma_star} mu_rstar={mu_rstar}"),
    )
}

const UPPER: [(usize, usize); 6] = [(0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2)];

/// CSV text of a signature. Floats use the shortest representation that
/// parses back to the same value.
pub fn signature_to_csv(sig: &MptSignature) -> String {
    let mut out = String::new();
    for line in sig.provenance.lines() {
        let _ = writeln!(out, "# {line}");
    }
    out.push_str(SIGNATURE_HEADER);
    out.push('\n');
    for e in &sig.entries {
        let _ = write!(out, "{:?}", e.omega);
        for (i, j) in UPPER {
            let _ = write!(out, ",{:?}", e.tensor.0[i][j].re);
        }
        for (i, j) in UPPER {
            let _ = write!(out, ",{:?}", e.tensor.0[i][j].im);
        }
        out.push('\n');
    }
    out
}

pub fn save_signature(sig: &MptSignature, path: &Path) -> Result<()> {
    std::fs::write(path, signature_to_csv(sig))?;
    Ok(())
}

pub fn load_signature(path: &Path) -> Result<MptSignature> {
    let text = std::fs::read_to_string(path)?;
    parse_signature(&text)
}

/// Parses signature CSV. Row numbers in errors are 1-based file lines.
/// Lower-triangle entries are filled by symmetry, so an asymmetric source
/// cannot be represented; the symmetry check applies to tensors built in
/// memory and to files whose upper triangle is given twice.
pub fn parse_signature(text: &str) -> Result<MptSignature> {
    let mut provenance = Vec::new();
    let mut header_seen = false;
    let mut entries: Vec<Mpt> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let row = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(c) = line.strip_prefix('#') {
            provenance.push(c.trim().to_string());
            continue;
        }
        if !header_seen {
            let cols: Vec<&str> = line.split(',').map(str::trim).collect();
            if cols.join(",") != SIGNATURE_HEADER && cols.join(",") != full_header() {
                return Err(Error::Parse { row, message: format!("expected header `{SIGNATURE_HEADER}`") });
            }
            header_seen = true;
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        let tensor = parse_row(&fields).map_err(|message| Error::Parse { row, message })?;
        let omega: f64 = fields[0].parse().map_err(|_| Error::Parse { row, message: format!("bad omega `{}`", fields[0]) })?;
        if !(omega > 0.0 && omega.is_finite()) {
            return Err(Error::Parse { row, message: format!("omega must be positive, got {omega}") });
        }
        if let Some(prev) = entries.last() {
            if !(omega > prev.omega) {
                return Err(Error::Order { row });
            }
        }
        check_invariants(&tensor).map_err(|message| Error::Invariant { row, message })?;
        entries.push(Mpt { tensor, omega });
    }
    if !header_seen {
        return Err(Error::Parse { row: 0, message: "missing header".into() });
    }
    MptSignature::new(entries, provenance.join("\n"))
}

/// Header variant listing all nine components per part.
fn full_header() -> String {
    let mut s = String::from("omega");
    for part in ["Re", "Im"] {
        for i in 1..=3 {
            for j in 1..=3 {
                let _ = write!(s, ",{part}M{i}{j}");
            }
        }
    }
    s
}

fn parse_row(fields: &[&str]) -> std::result::Result<ComplexTensor3, String> {
    let nums = |slice: &[&str]| -> std::result::Result<Vec<f64>, String> {
        slice
            .iter()
            .map(|f| f.parse::<f64>().map_err(|_| format!("bad number `{f}`")))
            .collect()
    };
    let mut t = ComplexTensor3::zeros();
    match fields.len() {
        13 => {
            let v = nums(&fields[1..])?;
            for (k, &(i, j)) in UPPER.iter().enumerate() {
                let c = Complex64::new(v[k], v[6 + k]);
                t.0[i][j] = c;
                t.0[j][i] = c;
            }
        }
        19 => {
            let v = nums(&fields[1..])?;
            for i in 0..3 {
                for j in 0..3 {
                    t.0[i][j] = Complex64::new(v[3 * i + j], v[9 + 3 * i + j]);
                }
            }
        }
        n => return Err(format!("expected 13 or 19 columns, got {n}")),
    }
    Ok(t)
}

/// Componentwise linear interpolation of Re and Im in `ln ω`.
pub fn interpolate(sig: &MptSignature, omega: f64) -> Result<Mpt> {
    let e = &sig.entries;
    if e.len() < 2 {
        return Err(Error::InsufficientSizes { required: 2, got: e.len() });
    }
    let (lo, hi) = (e[0].omega, e[e.len() - 1].omega);
    if !(omega >= lo && omega <= hi) {
        return Err(Error::Range { omega, min: lo, max: hi });
    }
    let i = e.partition_point(|m| m.omega < omega);
    if e[i].omega == omega {
        return Ok(e[i]);
    }
    let (a, b) = (&e[i - 1], &e[i]);
    let t = (omega.ln() - a.omega.ln()) / (b.omega.ln() - a.omega.ln());
    let mut out = ComplexTensor3::zeros();
    for r in 0..3 {
        for c in 0..3 {
            let (x, y) = (a.tensor.0[r][c], b.tensor.0[r][c]);
            out.0[r][c] = x + (y - x) * t;
        }
    }
    Mpt::new(out, omega)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DecompositionKind {
    /// `Im M` has a negative eigenvalue.
    ImaginaryIndefinite,
    /// `Re M − N⁰` has a positive eigenvalue.
    RealAboveStatic,
    /// An eigenvalue of `Re M` grows with ω.
    RealIncreasing,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecompositionViolation {
    pub index: usize,
    pub omega: f64,
    pub kind: DecompositionKind,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecompositionReport {
    /// `Re M` at the lowest tabulated frequency.
    pub n0: Tensor3,
    pub violations: Vec<DecompositionViolation>,
}

impl DecompositionReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

fn sub_real(a: &Tensor3, b: &Tensor3) -> Tensor3 {
    let mut t = Tensor3::zeros();
    for i in 0..3 {
        for j in 0..3 {
            t.0[i][j] = a.0[i][j] - b.0[i][j];
        }
    }
    t
}

pub fn decomposition_check(sig: &MptSignature) -> DecompositionReport {
    let Some(first) = sig.entries.first() else {
        return DecompositionReport { n0: Tensor3::zeros(), violations: Vec::new() };
    };
    let n0 = first.tensor.re();
    let scale = sig.entries.iter().map(|e| e.tensor.frobenius()).fold(0.0, f64::max);
    let tol = DEFINITENESS_TOL * scale;
    let mut violations = Vec::new();
    let mut prev_re: Option<[f64; 3]> = None;
    for (index, e) in sig.entries.iter().enumerate() {
        let im = symmetric_eigenvalues(&e.tensor.im());
        if im[0] < -tol {
            violations.push(DecompositionViolation {
                index,
                omega: e.omega,
                kind: DecompositionKind::ImaginaryIndefinite,
                detail: format!("lowest eigenvalue of Im M is {:e}", im[0]),
            });
        }
        let re = e.tensor.re();
        let shifted = symmetric_eigenvalues(&sub_real(&re, &n0));
        if shifted[2] > tol {
            violations.push(DecompositionViolation {
                index,
                omega: e.omega,
                kind: DecompositionKind::RealAboveStatic,
                detail: format!("largest eigenvalue of Re M - N0 is {:e}", shifted[2]),
            });
        }
        let re_ev = symmetric_eigenvalues(&re);
        if let Some(p) = prev_re {
            if let Some(k) = (0..3).find(|&k| re_ev[k] > p[k] + tol) {
                violations.push(DecompositionViolation {
                    index,
                    omega: e.omega,
                    kind: DecompositionKind::RealIncreasing,
                    detail: format!("eigenvalue {k} of Re M rose from {:e} to {:e}", p[k], re_ev[k]),
                });
            }
        }
        prev_re = Some(re_ev);
    }
    DecompositionReport { n0, violations }
}
