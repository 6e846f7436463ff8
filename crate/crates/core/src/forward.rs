//! Induced-voltage predictions for a small object under a coil pair.
//!
//! The measured perturbation is `ΔV = H₀ᵐˢ(z) · M(ω) · H₀(z)` where `H₀` is
//! the excitation field at the object and
//! `H₀ᵐˢ(z)_i = iωμ₀ ∫_S (D²_x G(x, z))_{ij} n_j dx` integrates the Green's
//! function Hessian over the measurement coil. Each turn of the measurement
//! coil contributes the disk it spans, weighted by its share of the coil's
//! current.
//!
//! Variants:
//! - `Vs`: `H₀` through the soil, `G = G_s`.
//! - `Vs0`: `H₀` through the soil, `G = G₀`.
//! - `Vfs`: free-space `H₀`, `G = G₀`.
//! - `V0SoilOnly`: no object; `iωμ₀ ∫_S n · (H₀ − H₀,fs)`.

use crate::greens::{hess_g0, GreensChoice, HalfSpaceContext, RadialHessian};
use crate::model::{regime_diagnostics, CoilSpec, ObjectParams, ObjectShape, RegimeReport, Scenario, SoilParams};
use crate::mpt::{interpolate, load_signature, sphere_mpt, MptSignature};
use crate::quadrature::{gauss_legendre_on, QuadratureSettings};
use crate::sources::{
    coil_dipole, coil_field, coil_field_reflected, dipole_field_freespace,
    dipole_field_halfspace,
};
use crate::tensor::{cscale3, CVec3, ComplexTensor3, Vec3, CZERO};
use crate::{Error, Result, MU0};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::f64::consts::PI;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Variant {
    Vs,
    Vs0,
    Vfs,
    #[serde(rename = "V0_soil_only")]
    V0SoilOnly,
}

impl Variant {
    pub const ALL: [Variant; 4] = [Variant::Vs, Variant::Vs0, Variant::Vfs, Variant::V0SoilOnly];

    pub fn as_str(&self) -> &'static str {
        match self {
            Variant::Vs => "Vs",
            Variant::Vs0 => "Vs0",
            Variant::Vfs => "Vfs",
            Variant::V0SoilOnly => "V0_soil_only",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Variant::ALL
            .into_iter()
            .find(|v| v.as_str().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::Domain(format!("unknown variant `{s}` (expected Vs, Vs0, Vfs or V0_soil_only)")))
    }
}

/// How the coils enter: quadrature over their windings, or point dipoles.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    #[default]
    Integrated,
    Dipole,
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "integrated" => Ok(Mode::Integrated),
            "dipole" => Ok(Mode::Dipole),
            _ => Err(Error::Domain(format!("unknown mode `{s}` (expected integrated or dipole)"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RecordStatus {
    Ok,
    Failed(String),
}

impl RecordStatus {
    pub fn is_ok(&self) -> bool {
        matches!(self, RecordStatus::Ok)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VoltageRecord {
    pub omega: f64,
    pub variant: Variant,
    pub value: Complex64,
    /// `value / omega`.
    pub value_over_omega: Complex64,
    pub diagnostics: RegimeReport,
    pub status: RecordStatus,
}

impl VoltageRecord {
    fn new(s: &Scenario, omega: f64, variant: Variant, value: Complex64) -> Self {
        VoltageRecord {
            omega,
            variant,
            value,
            value_over_omega: value / omega,
            diagnostics: regime_diagnostics(s, omega),
            status: RecordStatus::Ok,
        }
    }

    fn failed(s: &Scenario, omega: f64, variant: Variant, err: &Error) -> Self {
        let nan = Complex64::new(f64::NAN, f64::NAN);
        VoltageRecord { status: RecordStatus::Failed(err.to_string()), ..VoltageRecord::new(s, omega, variant, nan) }
    }
}

/// Source of the polarizability tensor at a given frequency.
#[derive(Debug, Clone, PartialEq)]
pub enum ObjectModel {
    Sphere { alpha: f64, sigma_star: f64, mu_rstar: f64 },
    Signature(MptSignature),
    /// Frequency-independent tensor.
    Constant(ComplexTensor3),
}

impl ObjectModel {
    /// Resolves the scenario's object. Relative signature paths are taken
    /// against `base_dir` when given.
    pub fn from_params(obj: &ObjectParams, base_dir: Option<&Path>) -> Result<Self> {
        match &obj.shape {
            ObjectShape::Sphere => {
                Ok(ObjectModel::Sphere { alpha: obj.alpha, sigma_star: obj.sigma_star, mu_rstar: obj.mu_rstar })
            }
            ObjectShape::ExternalSignature { path } => {
                let full = match base_dir {
                    Some(dir) if path.is_relative() => dir.join(path),
                    _ => path.clone(),
                };
                Ok(ObjectModel::Signature(load_signature(&full)?))
            }
        }
    }

    pub fn tensor(&self, omega: f64) -> Result<ComplexTensor3> {
        match self {
            ObjectModel::Sphere { alpha, sigma_star, mu_rstar } => {
                Ok(*sphere_mpt(*alpha, *sigma_star, *mu_rstar, omega)?.tensor())
            }
            ObjectModel::Signature(sig) => Ok(*interpolate(sig, omega)?.tensor()),
            ObjectModel::Constant(t) => Ok(*t),
        }
    }
}

/// Flux quadrature over the measurement coil: one disk per loop element,
/// Gauss–Legendre in radius and trapezoid in angle. Weights include the
/// element's share of the coil current and sum to the mean turn area.
struct DiskRule {
    /// `(radius, height, weight)` per radial node, weights already
    /// multiplied by the full angular period.
    rings: Vec<(f64, f64, f64)>,
    n_azimuthal: usize,
    center: [f64; 2],
}

impl DiskRule {
    fn new(coil: &CoilSpec) -> Self {
        let radial = gauss_legendre_on(coil.n_radial, coil.r_inner, coil.r_outer);
        let z0 = coil.center[2] - 0.5 * coil.height;
        let axial = gauss_legendre_on(coil.n_axial, z0, z0 + coil.height);
        let area = coil.area();
        let mut rings = Vec::new();
        for &(r, wr) in &radial {
            for &(z, wz) in &axial {
                let share = wr * wz / area;
                for (rho, w) in gauss_legendre_on(coil.n_disk_radial, 0.0, r) {
                    rings.push((rho, z, share * w * rho * 2.0 * PI));
                }
            }
        }
        DiskRule { rings, n_azimuthal: coil.n_azimuthal, center: [coil.center[0], coil.center[1]] }
    }

    fn angles(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        let n = self.n_azimuthal;
        (0..n).map(move |k| {
            let phi = 2.0 * PI * (k as f64 + 0.5) / n as f64;
            (phi.cos(), phi.sin())
        })
    }
}

fn iomega_mu0(omega: f64) -> Complex64 {
    Complex64::new(0.0, omega * MU0)
}

/// `iωμ₀ ∫_S D²_x G(x, z) e₃ dx` over the measurement coil. With the
/// `iωμ₀` factor this is a voltage sensitivity (volts per unit of `M·H₀`)
/// rather than a field.
pub fn h0ms(
    measure: &CoilSpec,
    z: &Vec3,
    soil: SoilParams,
    omega: f64,
    choice: GreensChoice,
    mode: Mode,
    settings: &QuadratureSettings,
) -> Result<CVec3> {
    if !(z[2] < 0.0) {
        return Err(Error::Precondition(format!("object must be below ground, z3 = {}", z[2])));
    }
    let ctx = HalfSpaceContext::new(soil, omega);
    let column = match mode {
        Mode::Dipole => {
            // moment per unit current: the current-weighted mean turn area
            let (ri, ro) = (measure.r_inner, measure.r_outer);
            let area = PI * (ro.powi(3) - ri.powi(3)) / (3.0 * (ro - ri));
            let h = crate::greens::hessian(choice, &measure.center, z, &ctx, settings)?;
            [h.0[0][2] * area, h.0[1][2] * area, h.0[2][2] * area]
        }
        Mode::Integrated => disk_hessian_flux(measure, z, &ctx, choice, settings)?,
    };
    Ok(cscale3(&column, iomega_mu0(omega)))
}

fn disk_hessian_flux(
    measure: &CoilSpec,
    z: &Vec3,
    ctx: &HalfSpaceContext,
    choice: GreensChoice,
    settings: &QuadratureSettings,
) -> Result<CVec3> {
    let rule = DiskRule::new(measure);
    let mut acc = [CZERO; 3];
    let coaxial = rule.center == [z[0], z[1]];
    let mut cache: HashMap<(u64, u64), RadialHessian> = HashMap::new();
    for &(rho, height, w) in &rule.rings {
        let w = w / rule.n_azimuthal as f64;
        for (c, s) in rule.angles() {
            let x = [rule.center[0] + rho * c, rule.center[1] + rho * s, height];
            let col = match choice {
                GreensChoice::FreeSpace => {
                    let h = hess_g0(&x, z)?;
                    [Complex64::from(h.0[0][2]), Complex64::from(h.0[1][2]), Complex64::from(h.0[2][2])]
                }
                GreensChoice::HalfSpace if coaxial => {
                    let radial = match cache.get(&(rho.to_bits(), height.to_bits())) {
                        Some(r) => *r,
                        None => {
                            let r = ctx.hessian_radial(rho, height, z[2], settings)?;
                            cache.insert((rho.to_bits(), height.to_bits()), r);
                            r
                        }
                    };
                    let dir = if rho > 0.0 { [c, s] } else { [1.0, 0.0] };
                    [radial.mixed_j1 * dir[0], radial.mixed_j1 * dir[1], radial.vertical_j0]
                }
                GreensChoice::HalfSpace => {
                    let h = crate::greens::hess_gs(&x, z, ctx, settings)?.value;
                    [h.0[0][2], h.0[1][2], h.0[2][2]]
                }
            };
            for i in 0..3 {
                acc[i] += col[i] * w;
            }
        }
    }
    Ok(acc)
}

/// Excitation field at the object, through the soil or in free space.
pub fn background_field(
    excite: &CoilSpec,
    z: &Vec3,
    soil: SoilParams,
    omega: f64,
    choice: GreensChoice,
    mode: Mode,
    settings: &QuadratureSettings,
) -> Result<CVec3> {
    let ctx = HalfSpaceContext::new(soil, omega);
    match (mode, choice) {
        (Mode::Integrated, _) => coil_field(excite, &ctx, z, choice, settings),
        (Mode::Dipole, GreensChoice::HalfSpace) => dipole_field_halfspace(&coil_dipole(excite), &ctx, z, settings),
        (Mode::Dipole, GreensChoice::FreeSpace) => dipole_field_freespace(&coil_dipole(excite), z),
    }
}

/// `ΔV` for one of the object variants.
pub fn delta_v(
    s: &Scenario,
    object: &ObjectModel,
    omega: f64,
    variant: Variant,
    mode: Mode,
    settings: &QuadratureSettings,
) -> Result<VoltageRecord> {
    let (field_choice, green_choice) = match variant {
        Variant::Vs => (GreensChoice::HalfSpace, GreensChoice::HalfSpace),
        Variant::Vs0 => (GreensChoice::HalfSpace, GreensChoice::FreeSpace),
        Variant::Vfs => (GreensChoice::FreeSpace, GreensChoice::FreeSpace),
        Variant::V0SoilOnly => return delta_v0_soil_only(s, omega, settings),
    };
    let m = object.tensor(omega)?;
    let z = s.object.z;
    let h0 = background_field(&s.excite, &z, s.soil, omega, field_choice, mode, settings)?;
    let hms = h0ms(&s.measure, &z, s.soil, omega, green_choice, mode, settings)?;
    Ok(VoltageRecord::new(s, omega, variant, m.bilinear(&hms, &h0)))
}

/// Voltage the soil alone induces: flux of the excitation coil's reflected
/// field through the measurement coil.
pub fn delta_v0_soil_only(s: &Scenario, omega: f64, settings: &QuadratureSettings) -> Result<VoltageRecord> {
    let ctx = HalfSpaceContext::new(s.soil, omega);
    let rule = DiskRule::new(&s.measure);
    let exc_center = [s.excite.center[0], s.excite.center[1]];
    let coaxial = rule.center == exc_center;
    let mut cache: HashMap<(u64, u64), Complex64> = HashMap::new();
    let mut flux = CZERO;
    for &(rho, height, w) in &rule.rings {
        if coaxial {
            let hz = match cache.get(&(rho.to_bits(), height.to_bits())) {
                Some(v) => *v,
                None => {
                    let x = [exc_center[0] + rho, exc_center[1], height];
                    let v = coil_field_reflected(&s.excite, &ctx, &x, settings)?[2];
                    cache.insert((rho.to_bits(), height.to_bits()), v);
                    v
                }
            };
            flux += hz * w;
        } else {
            let w = w / rule.n_azimuthal as f64;
            for (c, sn) in rule.angles() {
                let x = [rule.center[0] + rho * c, rule.center[1] + rho * sn, height];
                flux += coil_field_reflected(&s.excite, &ctx, &x, settings)?[2] * w;
            }
        }
    }
    Ok(VoltageRecord::new(s, omega, Variant::V0SoilOnly, iomega_mu0(omega) * flux))
}

/// One record per `(ω, variant)` in that lexicographic order. Failures are
/// recorded per entry and do not stop the sweep.
pub fn sweep(
    s: &Scenario,
    object: &ObjectModel,
    variants: &[Variant],
    mode: Mode,
    settings: &QuadratureSettings,
) -> Vec<VoltageRecord> {
    let jobs: Vec<(f64, Variant)> =
        s.frequencies.iter().flat_map(|&w| variants.iter().map(move |&v| (w, v))).collect();
    jobs.par_iter()
        .map(|&(omega, variant)| {
            delta_v(s, object, omega, variant, mode, settings)
                .unwrap_or_else(|e| VoltageRecord::failed(s, omega, variant, &e))
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Hold {
    /// Same ω for every size.
    FixedOmega,
    /// Same ν = α²σ*μ₀ω for every size, by scaling σ* with α⁻²; coil,
    /// soil and frequency stay fixed so only the tensor changes.
    FixedNu,
}

impl FromStr for Hold {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().replace('-', "_").as_str() {
            "fixed_omega" => Ok(Hold::FixedOmega),
            "fixed_nu" => Ok(Hold::FixedNu),
            _ => Err(Error::Domain(format!("unknown hold `{s}` (expected fixed_omega or fixed_nu)"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RateStudy {
    pub alphas: Vec<f64>,
    pub sigma_stars: Vec<f64>,
    pub values: Vec<Complex64>,
    /// Least-squares slope of `ln|ΔV_s|` against `ln α`.
    pub slope: f64,
    pub intercept: f64,
    /// Root-mean-square residual of the fit.
    pub residual: f64,
}

/// Fits `ln|ΔV_s| = slope · ln α + c` over the given sphere sizes at `omega`.
pub fn scaling_rate_study(
    base: &Scenario,
    alphas: &[f64],
    hold: Hold,
    omega: f64,
    mode: Mode,
    settings: &QuadratureSettings,
) -> Result<RateStudy> {
    if alphas.len() < 4 {
        return Err(Error::InsufficientSizes { required: 4, got: alphas.len() });
    }
    let (lo, hi) = alphas.iter().fold((f64::INFINITY, 0.0f64), |(l, h), &a| (l.min(a), h.max(a)));
    if !(lo > 0.0 && hi >= 2.0 * lo) {
        return Err(Error::Precondition("sizes must be positive and span at least one octave".into()));
    }
    if !matches!(base.object.shape, ObjectShape::Sphere) {
        return Err(Error::Precondition("rate study needs a sphere object".into()));
    }
    let a0 = alphas[0];
    let mut sigma_stars = Vec::with_capacity(alphas.len());
    let mut values = Vec::with_capacity(alphas.len());
    for &alpha in alphas {
        let mut s = base.clone();
        s.object.alpha = alpha;
        if hold == Hold::FixedNu {
            s.object.sigma_star = base.object.sigma_star * (a0 / alpha).powi(2);
        }
        sigma_stars.push(s.object.sigma_star);
        let object = ObjectModel::from_params(&s.object, None)?;
        values.push(delta_v(&s, &object, omega, Variant::Vs, mode, settings)?.value);
    }
    let xs: Vec<f64> = alphas.iter().map(|a| a.ln()).collect();
    let ys: Vec<f64> = values.iter().map(|v| v.norm().ln()).collect();
    let n = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let residual = (xs.iter().zip(&ys).map(|(x, y)| (y - slope * x - intercept).powi(2)).sum::<f64>() / n).sqrt();
    Ok(RateStudy { alphas: alphas.to_vec(), sigma_stars, values, slope, intercept, residual })
}
