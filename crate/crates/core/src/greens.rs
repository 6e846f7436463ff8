//! Free-space Laplace Green's function `G₀` and the air-side half-space
//! Green's function `G_s` for a source point in conducting, permeable soil.
//!
//! `G_s(x, y) = (1/2π) ∫₀^∞ κ/(γ + μ_r,s κ) · e^{−κx₃ + γy₃} J₀(κρ) dκ`
//! with `γ = √(κ² − k²)`, `Re γ > 0`, `k² = iωμ₀σ_s`, `x₃ > 0 > y₃` and
//! `ρ` the horizontal separation. The kernel is harmonic in `x` and
//! collapses termwise to `1/(4π|x − y|)` when the soil is free space.
//! Derivatives are taken under the integral: `∂/∂x₃` multiplies by `−κ`,
//! horizontal derivatives bring in `J₁` and `J₂`.

use crate::model::SoilParams;
use crate::quadrature::{hankel_transform_multi, Estimate, QuadratureSettings};
use crate::tensor::{norm3, sub3, ComplexTensor3, Tensor3, Vec3, CZERO};
use crate::{CVec3, Error, Result, MU0};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

const COINCIDENCE_GUARD: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GreensChoice {
    /// Laplace Green's function `G₀`.
    FreeSpace,
    /// Half-space Green's function `G_s`.
    HalfSpace,
}

/// Which exponent pairing the spectral kernel uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ExponentConvention {
    /// `e^{−κx₃ + γy₃}`: harmonic in air, reduces to `G₀` without soil.
    #[default]
    AirHarmonic,
    /// `e^{−γx₃ + κy₃}`. Not harmonic in air; kept only for comparisons.
    SwappedDebug,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HalfSpaceContext {
    soil: SoilParams,
    omega: f64,
    k_squared: Complex64,
    convention: ExponentConvention,
}

impl HalfSpaceContext {
    pub fn new(soil: SoilParams, omega: f64) -> Self {
        HalfSpaceContext {
            soil,
            omega,
            k_squared: Complex64::new(0.0, omega * MU0 * soil.sigma_s),
            convention: ExponentConvention::AirHarmonic,
        }
    }

    pub fn with_convention(mut self, convention: ExponentConvention) -> Self {
        self.convention = convention;
        self
    }

    pub fn soil(&self) -> SoilParams {
        self.soil
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    /// `k² = iωμ₀σ_s`.
    pub fn k_squared(&self) -> Complex64 {
        self.k_squared
    }

    /// Vertical wavenumber `γ = √(κ² − k²)` on the branch `Re γ > 0`.
    #[inline]
    pub fn gamma(&self, kappa: f64) -> Complex64 {
        if self.k_squared == CZERO {
            return Complex64::new(kappa, 0.0);
        }
        let g = (Complex64::new(kappa * kappa, 0.0) - self.k_squared).sqrt();
        debug_assert!(g.re > 0.0, "branch of gamma");
        g
    }

    /// Spectral kernel of `G_s` (without the Bessel factor and the 1/2π)
    /// and the factor a `∂/∂x₃` derivative brings down (with sign flipped).
    #[inline]
    fn kernel(&self, kappa: f64, x3: f64, y3: f64) -> (Complex64, Complex64) {
        let gamma = self.gamma(kappa);
        let mu = self.soil.mu_rs;
        let denom = gamma + mu * kappa;
        match self.convention {
            ExponentConvention::AirHarmonic => {
                let e = (gamma * y3 - kappa * x3).exp();
                (kappa * e / denom, Complex64::new(kappa, 0.0))
            }
            ExponentConvention::SwappedDebug => {
                let e = (-gamma * x3 + kappa * y3).exp();
                (kappa * e / denom, gamma)
            }
        }
    }

    /// The three radial integrals behind the Hessian at horizontal
    /// separation `rho`, for caching by `(rho, x₃, y₃)`.
    pub fn hessian_radial(
        &self,
        rho: f64,
        x3: f64,
        y3: f64,
        settings: &QuadratureSettings,
    ) -> Result<RadialHessian> {
        check_sides(x3, y3)?;
        let out = hankel_transform_multi(
            |k| {
                let (f, v) = self.kernel(k, x3, y3);
                let kk = k * k;
                [f * kk, f * kk, f * v * k, f * v * v]
            },
            [0, 2, 1, 0],
            x3 - y3,
            rho,
            settings,
        )?;
        let scale = 1.0 / (2.0 * PI);
        Ok(RadialHessian {
            tangential_j0: out[0].value * scale,
            tangential_j2: out[1].value * scale,
            mixed_j1: out[2].value * scale,
            vertical_j0: out[3].value * scale,
            error: out.iter().map(|e| e.error).fold(0.0, f64::max) * scale,
        })
    }
}

/// Radial building blocks of `D²_x G_s`; see [`RadialHessian::assemble`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialHessian {
    pub tangential_j0: Complex64,
    pub tangential_j2: Complex64,
    pub mixed_j1: Complex64,
    pub vertical_j0: Complex64,
    pub error: f64,
}

impl RadialHessian {
    /// Hessian for horizontal unit direction `dir` (from source to field point).
    pub fn assemble(&self, dir: [f64; 2]) -> ComplexTensor3 {
        let mut h = ComplexTensor3::zeros();
        for i in 0..2 {
            for j in 0..2 {
                let delta = if i == j { 1.0 } else { 0.0 };
                h.0[i][j] = -0.5
                    * (self.tangential_j0 * delta
                        + self.tangential_j2 * (delta - 2.0 * dir[i] * dir[j]));
            }
            h.0[i][2] = self.mixed_j1 * dir[i];
            h.0[2][i] = h.0[i][2];
        }
        h.0[2][2] = self.vertical_j0;
        h
    }
}

/// Value with an absolute quadrature error bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WithError<T> {
    pub value: T,
    pub error: f64,
}

fn separation(x: &Vec3, y: &Vec3) -> Result<(Vec3, f64)> {
    let r = sub3(x, y);
    let d = norm3(&r);
    if !(d >= COINCIDENCE_GUARD) {
        return Err(Error::CoincidentPoints { separation: d });
    }
    Ok((r, d))
}

fn check_sides(x3: f64, y3: f64) -> Result<()> {
    if !(x3 > 0.0) || !(y3 < 0.0) {
        return Err(Error::Precondition(format!(
            "half-space Green's function needs x3 > 0 > y3, got x3 = {x3}, y3 = {y3}"
        )));
    }
    Ok(())
}

/// Horizontal separation and unit direction from `y` to `x`; direction is
/// `(1, 0)` on the axis.
fn horizontal(x: &Vec3, y: &Vec3) -> (f64, [f64; 2]) {
    let dx = x[0] - y[0];
    let dy = x[1] - y[1];
    let rho = dx.hypot(dy);
    if rho == 0.0 {
        (0.0, [1.0, 0.0])
    } else {
        (rho, [dx / rho, dy / rho])
    }
}

/// `1/(4π|x − y|)`.
pub fn g0(x: &Vec3, y: &Vec3) -> Result<f64> {
    let (_, d) = separation(x, y)?;
    Ok(1.0 / (4.0 * PI * d))
}

/// `∇_x G₀ = −(x − y)/(4π|x − y|³)`.
pub fn grad_g0(x: &Vec3, y: &Vec3) -> Result<Vec3> {
    let (r, d) = separation(x, y)?;
    let c = -1.0 / (4.0 * PI * d * d * d);
    Ok([c * r[0], c * r[1], c * r[2]])
}

/// `D²_x G₀ = (3 r̂ r̂ᵀ − I)/(4π|r|³)`.
pub fn hess_g0(x: &Vec3, y: &Vec3) -> Result<Tensor3> {
    let (r, d) = separation(x, y)?;
    let c = 1.0 / (4.0 * PI * d * d * d);
    let mut t = Tensor3::zeros();
    for i in 0..3 {
        for j in i..3 {
            let delta = if i == j { 1.0 } else { 0.0 };
            t.0[i][j] = c * (3.0 * r[i] * r[j] / (d * d) - delta);
            t.0[j][i] = t.0[i][j];
        }
    }
    Ok(t)
}

/// Half-space Green's function for `x` in air and `y` in the soil.
pub fn gs(x: &Vec3, y: &Vec3, ctx: &HalfSpaceContext, settings: &QuadratureSettings) -> Result<Estimate> {
    check_sides(x[2], y[2])?;
    separation(x, y)?;
    let (rho, _) = horizontal(x, y);
    let [out] = hankel_transform_multi(
        |k| [ctx.kernel(k, x[2], y[2]).0],
        [0],
        x[2] - y[2],
        rho,
        settings,
    )?;
    let scale = 1.0 / (2.0 * PI);
    Ok(Estimate { value: out.value * scale, error: out.error * scale })
}

/// `∇_x G_s`.
pub fn grad_gs(
    x: &Vec3,
    y: &Vec3,
    ctx: &HalfSpaceContext,
    settings: &QuadratureSettings,
) -> Result<WithError<CVec3>> {
    check_sides(x[2], y[2])?;
    separation(x, y)?;
    let (rho, dir) = horizontal(x, y);
    let out = hankel_transform_multi(
        |k| {
            let (f, v) = ctx.kernel(k, x[2], y[2]);
            [-f * v, -f * k]
        },
        [0, 1],
        x[2] - y[2],
        rho,
        settings,
    )?;
    let scale = 1.0 / (2.0 * PI);
    let radial = out[1].value * scale;
    Ok(WithError {
        value: [radial * dir[0], radial * dir[1], out[0].value * scale],
        error: out[0].error.max(out[1].error) * scale,
    })
}

/// `D²_x G_s`, assembled from Hankel transforms of orders 0, 1 and 2.
pub fn hess_gs(
    x: &Vec3,
    y: &Vec3,
    ctx: &HalfSpaceContext,
    settings: &QuadratureSettings,
) -> Result<WithError<ComplexTensor3>> {
    separation(x, y)?;
    let (rho, dir) = horizontal(x, y);
    let radial = ctx.hessian_radial(rho, x[2], y[2], settings)?;
    Ok(WithError { value: radial.assemble(dir), error: radial.error })
}

/// Hessian of whichever Green's function `choice` selects.
pub fn hessian(
    choice: GreensChoice,
    x: &Vec3,
    y: &Vec3,
    ctx: &HalfSpaceContext,
    settings: &QuadratureSettings,
) -> Result<ComplexTensor3> {
    match choice {
        GreensChoice::FreeSpace => Ok(hess_g0(x, y)?.to_complex()),
        GreensChoice::HalfSpace => Ok(hess_gs(x, y, ctx, settings)?.value),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn tight() -> QuadratureSettings {
        QuadratureSettings::default().with_rel_tol(1e-11)
    }

    fn soil_ctx(omega: f64) -> HalfSpaceContext {
        HalfSpaceContext::new(SoilParams::new(1.6, 1.0006), omega)
    }

    #[test]
    fn g0_closed_forms() {
        let v = g0(&[0.0, 0.0, 0.2], &[0.0, 0.0, -0.4]).unwrap();
        assert!((v - 0.1326291).abs() < 1e-7);
        let v = g0(&[0.3, 0.0, 0.2], &[0.0, 0.0, -0.2]).unwrap();
        assert!((v - 0.1591549).abs() < 1e-7);
        assert!(matches!(g0(&[0.0; 3], &[0.0, 0.0, 1e-12]), Err(Error::CoincidentPoints { .. })));
    }

    proptest! {
        #[test]
        fn g0_is_symmetric(x in prop::array::uniform3(-1.0f64..1.0), y in prop::array::uniform3(-1.0f64..1.0)) {
            prop_assume!(norm3(&sub3(&x, &y)) > 1e-3);
            prop_assert_eq!(g0(&x, &y).unwrap(), g0(&y, &x).unwrap());
        }

        #[test]
        fn hess_g0_is_traceless_and_symmetric(x in prop::array::uniform3(-1.0f64..1.0), y in prop::array::uniform3(-1.0f64..1.0)) {
            prop_assume!(norm3(&sub3(&x, &y)) > 1e-3);
            let h = hess_g0(&x, &y).unwrap();
            prop_assert!(h.trace().abs() < 1e-12 * h.frobenius());
            for i in 0..3 { for j in 0..3 { prop_assert_eq!(h.0[i][j], h.0[j][i]); } }
        }
    }

    #[test]
    fn hess_g0_axial() {
        let h = hess_g0(&[0.0, 0.0, 0.2], &[0.0, 0.0, -0.4]).unwrap();
        let c = 1.0 / (4.0 * PI * 0.216);
        let want = [-c, -c, 2.0 * c];
        for i in 0..3 {
            assert!((h.0[i][i] - want[i]).abs() < 1e-12 * c);
        }
    }

    #[test]
    fn hess_g0_matches_finite_differences() {
        let x = [0.13, -0.07, 0.21];
        let y = [-0.05, 0.02, -0.33];
        let d = norm3(&sub3(&x, &y));
        let step = 1e-5 * d;
        let h = hess_g0(&x, &y).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let f = |si: f64, sj: f64| {
                    let mut p = x;
                    p[i] += si;
                    p[j] += sj;
                    g0(&p, &y).unwrap()
                };
                let fd = if i == j {
                    (f(step, 0.0) - 2.0 * f(0.0, 0.0) + f(-step, 0.0)) / (step * step)
                } else {
                    (f(step, step) - f(step, -step) - f(-step, step) + f(-step, -step)) / (4.0 * step * step)
                };
                assert!((fd - h.0[i][j]).abs() < 1e-6 * h.frobenius(), "({i},{j}) {fd} vs {}", h.0[i][j]);
            }
        }
    }

    #[test]
    fn gs_reduces_to_g0_without_soil() {
        let ctx = HalfSpaceContext::new(SoilParams::FREE_SPACE, 1.0e5);
        for (x, y) in [
            ([0.0, 0.0, 0.2], [0.0, 0.0, -0.4]),
            ([0.3, 0.1, 0.25], [0.0, 0.0, -0.2]),
            ([1.2, -0.4, 0.05], [0.1, 0.0, -0.1]),
        ] {
            let v = gs(&x, &y, &ctx, &QuadratureSettings::default()).unwrap();
            let want = g0(&x, &y).unwrap();
            assert!((v.value - want).norm() <= 1e-9 * want, "{x:?}");
            let gr = grad_gs(&x, &y, &ctx, &tight()).unwrap();
            let gw = grad_g0(&x, &y).unwrap();
            for i in 0..3 {
                assert!((gr.value[i] - gw[i]).norm() <= 1e-8 * norm3(&gw));
            }
            let h = hess_gs(&x, &y, &ctx, &tight()).unwrap();
            let hw = hess_g0(&x, &y).unwrap();
            assert!((h.value - hw.to_complex()).frobenius() <= 1e-8 * hw.frobenius());
        }
    }

    #[test]
    fn precondition_sides() {
        let ctx = soil_ctx(1.0e5);
        let s = QuadratureSettings::default();
        assert!(matches!(gs(&[0.0, 0.0, -0.1], &[0.0, 0.0, -0.4], &ctx, &s), Err(Error::Precondition(_))));
        assert!(matches!(gs(&[0.0, 0.0, 0.1], &[0.0, 0.0, 0.4], &ctx, &s), Err(Error::Precondition(_))));
    }

    /// Direct quadrature of the 2-D inverse Fourier integral in polar
    /// coordinates: composite Gauss in κ, trapezoid in the angle. No Bessel
    /// functions or Hankel machinery involved.
    fn fourier_2d_oracle(x: &Vec3, y: &Vec3, soil: SoilParams, omega: f64) -> Complex64 {
        let k2 = Complex64::new(0.0, omega * MU0 * soil.sigma_s);
        let d = [x[0] - y[0], x[1] - y[1]];
        let h = x[2] - y[2];
        let k_max = 45.0 / h;
        let panels = 400;
        let rule = crate::quadrature::gauss_legendre(12);
        let n_phi = 256;
        let mut total = CZERO;
        for p in 0..panels {
            let a = k_max * p as f64 / panels as f64;
            let b = k_max * (p + 1) as f64 / panels as f64;
            for (xi, wi) in rule.0.iter().zip(&rule.1) {
                let k = 0.5 * (a + b) + 0.5 * (b - a) * xi;
                let w = 0.5 * (b - a) * wi;
                let gamma = (Complex64::new(k * k, 0.0) - k2).sqrt();
                let f = (gamma * y[2] - k * x[2]).exp() / (gamma + soil.mu_rs * k);
                let mut ang = CZERO;
                for j in 0..n_phi {
                    let phi = 2.0 * PI * j as f64 / n_phi as f64;
                    let phase = k * (d[0] * phi.cos() + d[1] * phi.sin());
                    ang += Complex64::new(0.0, phase).exp();
                }
                total += f * ang * (2.0 * PI / n_phi as f64) * k * w;
            }
        }
        total / (4.0 * PI * PI)
    }

    #[test]
    fn gs_matches_two_dimensional_fourier_quadrature() {
        let soil = SoilParams::new(1.6, 1.0006);
        for (x, y) in [([0.0, 0.0, 0.2], [0.0, 0.0, -0.4]), ([0.1, 0.05, 0.2], [0.0, 0.0, -0.4])] {
            let ctx = HalfSpaceContext::new(soil, 1.0e5);
            let v = gs(&x, &y, &ctx, &QuadratureSettings::default()).unwrap();
            let o = fourier_2d_oracle(&x, &y, soil, 1.0e5);
            assert!((v.value - o).norm() <= 1e-6 * o.norm(), "{} vs {}", v.value, o);
            assert!(v.value.im.abs() > 0.0);
        }
    }

    #[test]
    fn gs_approaches_g0_as_omega_falls() {
        let x = [0.0, 0.0, 0.2];
        let y = [0.0, 0.0, -0.4];
        let want = g0(&x, &y).unwrap();
        let mut last = f64::INFINITY;
        for omega in [1.0e4, 1.0e3, 1.0e2] {
            let v = gs(&x, &y, &soil_ctx(omega), &tight()).unwrap();
            let gap = (v.value - want).norm();
            assert!(gap < last, "omega {omega}: {gap:e}");
            last = gap;
        }
    }

    fn fd_gradient(x: &Vec3, y: &Vec3, ctx: &HalfSpaceContext, step: f64) -> CVec3 {
        let s = tight();
        let mut out = [CZERO; 3];
        for i in 0..3 {
            let mut p = *x;
            let mut m = *x;
            p[i] += step;
            m[i] -= step;
            out[i] = (gs(&p, y, ctx, &s).unwrap().value - gs(&m, y, ctx, &s).unwrap().value) / (2.0 * step);
        }
        out
    }

    #[test]
    fn grad_gs_matches_finite_differences() {
        let ctx = soil_ctx(1.0e5);
        for x in [[0.0, 0.0, 0.2], [0.11, -0.06, 0.22]] {
            let y = [0.0, 0.0, -0.4];
            let g = grad_gs(&x, &y, &ctx, &tight()).unwrap();
            let fd = fd_gradient(&x, &y, &ctx, 1e-4);
            let scale = crate::tensor::cnorm3(&g.value);
            for i in 0..3 {
                assert!((g.value[i] - fd[i]).norm() <= 1e-5 * scale, "component {i}");
            }
        }
        let on_axis = grad_gs(&[0.0, 0.0, 0.2], &[0.0, 0.0, -0.4], &ctx, &tight()).unwrap();
        assert_eq!(on_axis.value[0], CZERO);
        assert_eq!(on_axis.value[1], CZERO);
    }

    #[test]
    fn hess_gs_is_harmonic_and_matches_gradient_differences() {
        let ctx = soil_ctx(1.0e5);
        let y = [0.02, -0.01, -0.4];
        let x = [0.09, 0.04, 0.2];
        let h = hess_gs(&x, &y, &ctx, &tight()).unwrap().value;
        let norm = h.frobenius();
        assert!(h.trace().norm() <= 1e-8 * norm);
        assert!(h.max_asymmetry() <= 1e-12 * norm);
        let step = 1e-4;
        for j in 0..3 {
            let mut p = x;
            let mut m = x;
            p[j] += step;
            m[j] -= step;
            let gp = grad_gs(&p, &y, &ctx, &tight()).unwrap().value;
            let gm = grad_gs(&m, &y, &ctx, &tight()).unwrap().value;
            for i in 0..3 {
                let fd = (gp[i] - gm[i]) / (2.0 * step);
                assert!((fd - h.0[i][j]).norm() <= 1e-4 * norm, "({i},{j})");
            }
        }
    }

    #[test]
    fn hess_gs_matches_second_differences_of_gs() {
        let ctx = soil_ctx(1.0e5);
        let y = [0.0, 0.0, -0.4];
        let x = [0.07, 0.03, 0.2];
        let h = hess_gs(&x, &y, &ctx, &tight()).unwrap().value;
        let s = tight();
        let step = 2e-3;
        let f = |dx: [f64; 3]| gs(&[x[0] + dx[0], x[1] + dx[1], x[2] + dx[2]], &y, &ctx, &s).unwrap().value;
        for i in 0..3 {
            for j in 0..3 {
                let mut ei = [0.0; 3];
                let mut ej = [0.0; 3];
                ei[i] = step;
                ej[j] = step;
                let add = |a: [f64; 3], b: [f64; 3], sa: f64, sb: f64| [sa * a[0] + sb * b[0], sa * a[1] + sb * b[1], sa * a[2] + sb * b[2]];
                let fd = (f(add(ei, ej, 1.0, 1.0)) - f(add(ei, ej, 1.0, -1.0)) - f(add(ei, ej, -1.0, 1.0))
                    + f(add(ei, ej, -1.0, -1.0)))
                    / (4.0 * step * step);
                assert!((fd - h.0[i][j]).norm() <= 1e-4 * h.frobenius(), "({i},{j}) {fd} vs {}", h.0[i][j]);
            }
        }
    }

    #[test]
    fn gs_is_axisymmetric() {
        let ctx = soil_ctx(1.0e5);
        let y = [0.0, 0.0, -0.3];
        let base = gs(&[0.25, 0.0, 0.2], &y, &ctx, &QuadratureSettings::default()).unwrap().value;
        for deg in [17.0f64, 90.0, 133.0, 250.0] {
            let t = deg.to_radians();
            let x = [0.25 * t.cos(), 0.25 * t.sin(), 0.2];
            let v = gs(&x, &y, &ctx, &QuadratureSettings::default()).unwrap().value;
            assert!((v - base).norm() <= 1e-12 * base.norm());
        }
    }

    #[test]
    fn gs_decays_up_the_axis() {
        let ctx = soil_ctx(1.0e5);
        let y = [0.0, 0.0, -0.4];
        let mut last = f64::INFINITY;
        let mut x3 = 0.01;
        while x3 < 5.0 {
            let v = gs(&[0.0, 0.0, x3], &y, &ctx, &QuadratureSettings::default()).unwrap().value.norm();
            assert!(v < last);
            last = v;
            x3 *= 1.5;
        }
    }

    #[test]
    fn soil_conductivity_attenuates() {
        let x = [0.1, 0.0, 0.2];
        let y = [0.0, 0.0, -0.4];
        let mut last = f64::INFINITY;
        for sigma in [0.0, 0.01, 0.1, 1.0, 1.6] {
            let ctx = HalfSpaceContext::new(SoilParams::new(sigma, 1.0), 1.0e5);
            let v = gs(&x, &y, &ctx, &QuadratureSettings::default()).unwrap().value.norm();
            assert!(v <= last, "sigma {sigma}");
            last = v;
        }
    }

    #[test]
    fn swapped_exponent_is_not_harmonic() {
        let ctx = soil_ctx(1.0e6).with_convention(ExponentConvention::SwappedDebug);
        let h = hess_gs(&[0.0, 0.0, 0.2], &[0.0, 0.0, -0.4], &ctx, &tight()).unwrap().value;
        assert!(h.trace().norm() > 1e-6 * h.frobenius());
        let free = HalfSpaceContext::new(SoilParams::FREE_SPACE, 1.0e6).with_convention(ExponentConvention::SwappedDebug);
        let v = gs(&[0.0, 0.0, 0.2], &[0.0, 0.0, -0.4], &free, &tight()).unwrap().value;
        assert!((v.re - g0(&[0.0, 0.0, 0.2], &[0.0, 0.0, -0.4]).unwrap()).abs() < 1e-10);
    }

    #[test]
    fn strategies_agree_on_soil_kernels() {
        use crate::quadrature::Strategy;
        let ctx = soil_ctx(1.0e6);
        let y = [0.0, 0.0, -0.4];
        for x in [[0.3, 0.0, 0.2], [1.5, 0.4, 0.1], [3.0, 0.0, 0.3]] {
            let a = hess_gs(&x, &y, &ctx, &tight().with_strategy(Strategy::Adaptive)).unwrap().value;
            let b = hess_gs(&x, &y, &ctx, &tight().with_strategy(Strategy::PartitionExtrapolation)).unwrap().value;
            assert!((a - b).frobenius() <= 1e-8 * a.frobenius(), "{x:?}");
        }
    }
}
