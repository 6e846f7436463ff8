//! Background fields of axisymmetric sources: single current loops,
//! distributed cylindrical coils and vertical point dipoles, in free space
//! and above a conducting, permeable half-space.
//!
//! Above the ground the field is the free-space field plus a reflected part;
//! below it only a transmitted part remains. Both come from TE potentials
//! `ψ` with `H = ∇×∇×(ψ e₃)`, matched across `x₃ = 0` by continuity of
//! tangential `H` and normal `B`.
//!
//! A source is described by its spectral factor `S(κ)`, normalised so that
//! its free-space field below the source is
//! `H_z = ∫ κ S(κ) e^{κ(x₃−h)} J₀(κρ) dκ`. For a loop `S = I a J₁(κa)/2`,
//! for a vertical dipole `S = mκ/(4π)`.

use crate::greens::{hess_g0, GreensChoice, HalfSpaceContext};
use crate::model::{CoilSpec, SoilParams};
use crate::quadrature::{bessel_j012, gauss_legendre_on, hankel_transform_multi_oscillating, QuadratureSettings};
use crate::tensor::{cadd3, CVec3, Vec3, CZERO};
use crate::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::PI;

/// A circular filament of radius `radius` at height `height`, centred on
/// the vertical line through `center`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LoopSource {
    pub radius: f64,
    pub height: f64,
    pub current: Complex64,
    pub center: [f64; 2],
}

impl LoopSource {
    pub fn new(radius: f64, height: f64, current: Complex64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::Precondition(format!("loop radius must be > 0, got {radius}")));
        }
        if !(height > 0.0 && height.is_finite()) {
            return Err(Error::Precondition(format!("loop height must be > 0, got {height}")));
        }
        Ok(LoopSource { radius, height, current, center: [0.0, 0.0] })
    }

    pub fn with_center(mut self, center: [f64; 2]) -> Self {
        self.center = center;
        self
    }
}

/// Point dipole `moment · e₃` at height `height` above `center`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerticalDipole {
    pub moment: Complex64,
    pub height: f64,
    pub center: [f64; 2],
}

/// Interface coefficients of the TE potential for one spectral sample:
/// air `e^{−κ|x₃−h|} + R e^{−κ(x₃+h)}`, soil `T e^{γx₃ − κh}`.
///
/// `R` is the image strength of the potential `ψ`: `−1` for a perfect
/// conductor, `(μ−1)/(μ+1)` for a non-conducting permeable ground. The
/// coefficients for `∂ψ/∂x₃` are `−R` and `(γ/κ)T`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TeCoefficients {
    pub reflection: Complex64,
    pub transmission: Complex64,
}

pub fn te_coefficients(soil: SoilParams, omega: f64, kappa: f64) -> Result<TeCoefficients> {
    if !(kappa > 0.0 && kappa.is_finite()) {
        return Err(Error::Domain(format!("kappa must be > 0, got {kappa}")));
    }
    Ok(te_at(&HalfSpaceContext::new(soil, omega), kappa))
}

#[inline]
fn te_at(ctx: &HalfSpaceContext, kappa: f64) -> TeCoefficients {
    let mu_k = ctx.soil().mu_rs * kappa;
    let gamma = ctx.gamma(kappa);
    let denom = mu_k + gamma;
    // μκ − γ without cancellation when k² is small against κ²
    let mu = ctx.soil().mu_rs;
    let numer = ((mu * mu - 1.0) * kappa * kappa + ctx.k_squared()) / denom;
    TeCoefficients { reflection: numer / denom, transmission: 2.0 * kappa / denom }
}

/// Complete elliptic integrals `K(m)` and `E(m)` (parameter `m = k²`).
pub fn elliptic_ke(m: f64) -> Result<(f64, f64)> {
    if !(0.0..1.0).contains(&m) {
        return Err(Error::Domain(format!("elliptic parameter must be in [0, 1), got {m}")));
    }
    let mut a = 1.0f64;
    let mut b = (1.0 - m).sqrt();
    let mut c = m.sqrt();
    let mut sum = 0.5 * c * c;
    let mut pow = 0.5;
    for _ in 0..64 {
        if c.abs() <= 1e-17 * a {
            break;
        }
        let an = 0.5 * (a + b);
        c = 0.5 * (a - b);
        b = (a * b).sqrt();
        a = an;
        pow *= 2.0;
        sum += pow * c * c;
    }
    let k = PI / (2.0 * a);
    Ok((k, k * (1.0 - sum)))
}

/// Static field of a current loop via complete elliptic integrals.
pub fn loop_field_freespace(source: &LoopSource, x: &Vec3) -> Result<CVec3> {
    let a = source.radius;
    let dx = x[0] - source.center[0];
    let dy = x[1] - source.center[1];
    let rho = dx.hypot(dy);
    let z = x[2] - source.height;
    let alpha2 = (a - rho) * (a - rho) + z * z;
    if alpha2.sqrt() <= 1e-9 * a {
        return Err(Error::CoincidentPoints { separation: alpha2.sqrt() });
    }
    let beta2 = (a + rho) * (a + rho) + z * z;
    let beta = beta2.sqrt();
    let r2 = rho * rho + z * z;
    let (k, e) = elliptic_ke(1.0 - alpha2 / beta2)?;
    let i = source.current;
    let hz = i * (((a * a - r2) * e + alpha2 * k) / (2.0 * PI * alpha2 * beta));
    let h_rho = if rho < 1e-5 * a {
        i * (3.0 * a * a * z * rho / (4.0 * (a * a + z * z).powf(2.5)))
    } else {
        i * (z * ((a * a + r2) * e - alpha2 * k) / (2.0 * PI * alpha2 * beta * rho))
    };
    let (ux, uy) = if rho > 0.0 { (dx / rho, dy / rho) } else { (1.0, 0.0) };
    Ok([h_rho * ux, h_rho * uy, hz])
}

/// Field of a vertical dipole in free space: `D²G₀ · m e₃`.
pub fn dipole_field_freespace(dipole: &VerticalDipole, x: &Vec3) -> Result<CVec3> {
    let src = [dipole.center[0], dipole.center[1], dipole.height];
    let h = hess_g0(x, &src)?;
    Ok([h.0[0][2] * dipole.moment, h.0[1][2] * dipole.moment, h.0[2][2] * dipole.moment])
}

/// Axisymmetric source in spectral form. `s_tilde` is `S(κ) e^{κ h_min}`,
/// i.e. the factor relative to the lowest element.
struct Spectral<'a> {
    center: [f64; 2],
    h_min: f64,
    oscillation: f64,
    s_tilde: Box<dyn Fn(f64) -> Complex64 + Sync + 'a>,
}

impl<'a> Spectral<'a> {
    fn loops(elements: &'a [LoopSource]) -> Result<Self> {
        let Some(first) = elements.first() else {
            return Err(Error::Precondition("source has no loop elements".into()));
        };
        if elements.iter().any(|l| l.center != first.center) {
            return Err(Error::Precondition("loop elements must share one axis".into()));
        }
        let h_min = elements.iter().map(|l| l.height).fold(f64::INFINITY, f64::min);
        let oscillation = elements.iter().map(|l| l.radius).fold(0.0, f64::max);
        Ok(Spectral {
            center: first.center,
            h_min,
            oscillation,
            s_tilde: Box::new(move |k| {
                let mut s = CZERO;
                for l in elements {
                    let j1 = bessel_j012(k * l.radius)[1];
                    s += l.current * (0.5 * l.radius * j1 * (-k * (l.height - h_min)).exp());
                }
                s
            }),
        })
    }

    fn dipole(d: &VerticalDipole) -> Self {
        let m = d.moment;
        Spectral {
            center: d.center,
            h_min: d.height,
            oscillation: 0.0,
            s_tilde: Box::new(move |k| m * (k / (4.0 * PI))),
        }
    }

    /// Reflected field for `x₃ > 0` or transmitted field for `x₃ < 0`.
    fn secondary(&self, ctx: &HalfSpaceContext, x: &Vec3, settings: &QuadratureSettings) -> Result<CVec3> {
        let dx = x[0] - self.center[0];
        let dy = x[1] - self.center[1];
        let rho = dx.hypot(dy);
        let z = x[2];
        let h = self.h_min;
        let [hz, hr] = if z > 0.0 {
            hankel_transform_multi_oscillating(
                |k| {
                    let f = k * te_at(ctx, k).reflection * (self.s_tilde)(k) * (-k * (z + h)).exp();
                    [f, f]
                },
                [0, 1],
                z + h,
                rho,
                self.oscillation,
                settings,
            )?
        } else if z < 0.0 {
            hankel_transform_multi_oscillating(
                |k| {
                    let gamma = ctx.gamma(k);
                    let f = te_at(ctx, k).transmission * (self.s_tilde)(k) * (gamma * z - k * h).exp();
                    [f * k, -f * gamma]
                },
                [0, 1],
                h - z,
                rho,
                self.oscillation,
                settings,
            )?
        } else {
            return Err(Error::Precondition("field point lies on the interface x3 = 0".into()));
        };
        let (ux, uy) = if rho > 0.0 { (dx / rho, dy / rho) } else { (1.0, 0.0) };
        Ok([hr.value * ux, hr.value * uy, hz.value])
    }
}

fn check_above_ground(h: f64) -> Result<()> {
    if !(h > 0.0) {
        return Err(Error::Precondition(format!("source must be above ground, height {h}")));
    }
    Ok(())
}

/// Loop field over a conducting half-space: free-space plus reflected field
/// above ground, transmitted field below.
pub fn loop_field_halfspace(
    source: &LoopSource,
    ctx: &HalfSpaceContext,
    x: &Vec3,
    settings: &QuadratureSettings,
) -> Result<CVec3> {
    loops_field_halfspace(std::slice::from_ref(source), ctx, x, settings)
}

/// Reflected part only (`x₃ > 0`).
pub fn loop_field_reflected(
    source: &LoopSource,
    ctx: &HalfSpaceContext,
    x: &Vec3,
    settings: &QuadratureSettings,
) -> Result<CVec3> {
    loops_field_reflected(std::slice::from_ref(source), ctx, x, settings)
}

fn loops_field_halfspace(
    elements: &[LoopSource],
    ctx: &HalfSpaceContext,
    x: &Vec3,
    settings: &QuadratureSettings,
) -> Result<CVec3> {
    for l in elements {
        check_above_ground(l.height)?;
    }
    let spectral = Spectral::loops(elements)?;
    let secondary = spectral.secondary(ctx, x, settings)?;
    if x[2] < 0.0 {
        return Ok(secondary);
    }
    let mut h = secondary;
    for l in elements {
        h = cadd3(&h, &loop_field_freespace(l, x)?);
    }
    Ok(h)
}

fn loops_field_reflected(
    elements: &[LoopSource],
    ctx: &HalfSpaceContext,
    x: &Vec3,
    settings: &QuadratureSettings,
) -> Result<CVec3> {
    if !(x[2] > 0.0) {
        return Err(Error::Precondition("reflected field is defined above ground only".into()));
    }
    for l in elements {
        check_above_ground(l.height)?;
    }
    Spectral::loops(elements)?.secondary(ctx, x, settings)
}

/// Field of a vertical dipole over a conducting half-space.
pub fn dipole_field_halfspace(
    dipole: &VerticalDipole,
    ctx: &HalfSpaceContext,
    x: &Vec3,
    settings: &QuadratureSettings,
) -> Result<CVec3> {
    check_above_ground(dipole.height)?;
    let secondary = Spectral::dipole(dipole).secondary(ctx, x, settings)?;
    if x[2] < 0.0 {
        return Ok(secondary);
    }
    Ok(cadd3(&secondary, &dipole_field_freespace(dipole, x)?))
}

/// Loop elements representing the coil's azimuthal current density:
/// tensor-product Gauss–Legendre nodes over the winding cross-section,
/// each carrying `J_s · w_r · w_z`.
pub fn coil_elements(coil: &CoilSpec) -> Vec<LoopSource> {
    coil_elements_with(coil, coil.n_radial, coil.n_axial)
}

pub fn coil_elements_with(coil: &CoilSpec, n_radial: usize, n_axial: usize) -> Vec<LoopSource> {
    let radial = gauss_legendre_on(n_radial, coil.r_inner, coil.r_outer);
    let z0 = coil.center[2] - 0.5 * coil.height;
    let axial = gauss_legendre_on(n_axial, z0, z0 + coil.height);
    let mut out = Vec::with_capacity(n_radial * n_axial);
    for &(r, wr) in &radial {
        for &(z, wz) in &axial {
            out.push(LoopSource {
                radius: r,
                height: z,
                current: Complex64::new(coil.current_density_magnitude * wr * wz, 0.0),
                center: [coil.center[0], coil.center[1]],
            });
        }
    }
    out
}

fn check_outside_windings(coil: &CoilSpec, x: &Vec3) -> Result<()> {
    let rho = (x[0] - coil.center[0]).hypot(x[1] - coil.center[1]);
    let dz = (x[2] - coil.center[2]).abs();
    if rho >= coil.r_inner && rho <= coil.r_outer && dz <= 0.5 * coil.height {
        return Err(Error::Precondition(format!("field point {x:?} lies inside the coil windings")));
    }
    Ok(())
}

/// Field of the distributed coil, with or without the soil.
pub fn coil_field(
    coil: &CoilSpec,
    ctx: &HalfSpaceContext,
    x: &Vec3,
    choice: GreensChoice,
    settings: &QuadratureSettings,
) -> Result<CVec3> {
    check_outside_windings(coil, x)?;
    let elements = coil_elements(coil);
    match choice {
        GreensChoice::FreeSpace => {
            let mut h = [CZERO; 3];
            for l in &elements {
                h = cadd3(&h, &loop_field_freespace(l, x)?);
            }
            Ok(h)
        }
        GreensChoice::HalfSpace => loops_field_halfspace(&elements, ctx, x, settings),
    }
}

/// Reflected field of the coil above ground.
pub fn coil_field_reflected(
    coil: &CoilSpec,
    ctx: &HalfSpaceContext,
    x: &Vec3,
    settings: &QuadratureSettings,
) -> Result<CVec3> {
    loops_field_reflected(&coil_elements(coil), ctx, x, settings)
}

/// `m = e₃ · π J_s · height · (r_outer³ − r_inner³)/3`.
pub fn coil_dipole_moment(coil: &CoilSpec) -> Vec3 {
    let m = PI * coil.current_density_magnitude * coil.height * (coil.r_outer.powi(3) - coil.r_inner.powi(3)) / 3.0;
    [0.0, 0.0, m]
}

/// The coil's moment placed at its centre.
pub fn coil_dipole(coil: &CoilSpec) -> VerticalDipole {
    VerticalDipole {
        moment: Complex64::new(coil_dipole_moment(coil)[2], 0.0),
        height: coil.center[2],
        center: [coil.center[0], coil.center[1]],
    }
}
