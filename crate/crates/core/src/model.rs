//! Scenario description: soil, buried object, coils and frequency grid,
//! plus the dimensionless diagnostics that tell whether the asymptotic
//! regime holds.

use crate::MU0;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::path::PathBuf;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SoilParams {
    /// Electrical conductivity (S/m).
    pub sigma_s: f64,
    /// Relative permeability.
    pub mu_rs: f64,
}

impl SoilParams {
    pub const FREE_SPACE: SoilParams = SoilParams { sigma_s: 0.0, mu_rs: 1.0 };

    pub fn new(sigma_s: f64, mu_rs: f64) -> Self {
        SoilParams { sigma_s, mu_rs }
    }

    pub fn is_free_space(&self) -> bool {
        self.sigma_s == 0.0 && self.mu_rs == 1.0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum ObjectShape {
    Sphere,
    /// Polarizability tensor read from a signature CSV. Relative paths are
    /// resolved against the scenario file's directory.
    ExternalSignature { path: PathBuf },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObjectParams {
    /// Size scale α (m); the sphere radius for spheres.
    pub alpha: f64,
    pub sigma_star: f64,
    pub mu_rstar: f64,
    pub shape: ObjectShape,
    /// Object centre (m), below the ground plane.
    pub z: [f64; 3],
}

fn default_axis() -> [f64; 3] {
    [0.0, 0.0, 1.0]
}
fn default_n_radial() -> usize {
    6
}
fn default_n_axial() -> usize {
    6
}
fn default_n_azimuthal() -> usize {
    16
}
fn default_n_disk_radial() -> usize {
    8
}

/// Cylindrical winding with a uniform azimuthal current density over its
/// rectangular cross-section.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoilSpec {
    pub r_inner: f64,
    pub r_outer: f64,
    pub height: f64,
    pub center: [f64; 3],
    #[serde(default = "default_axis")]
    pub axis: [f64; 3],
    /// Azimuthal current density (A/m²).
    pub current_density_magnitude: f64,
    /// Loop elements across the radial extent of the cross-section.
    #[serde(default = "default_n_radial")]
    pub n_radial: usize,
    /// Loop elements across the height of the cross-section.
    #[serde(default = "default_n_axial")]
    pub n_axial: usize,
    /// Azimuthal samples when integrating flux over a turn's disk.
    #[serde(default = "default_n_azimuthal")]
    pub n_azimuthal: usize,
    /// Radial samples when integrating flux over a turn's disk.
    #[serde(default = "default_n_disk_radial")]
    pub n_disk_radial: usize,
}

impl CoilSpec {
    /// The detector head used throughout the sphere studies: 0.12–0.15 m
    /// radii, 0.1 m tall, 10 A total current, centred `offset` metres above
    /// the ground.
    pub fn reference(offset: f64) -> Self {
        let (r_inner, r_outer, height) = (0.12, 0.15, 0.1);
        CoilSpec {
            r_inner,
            r_outer,
            height,
            center: [0.0, 0.0, offset],
            axis: default_axis(),
            current_density_magnitude: 10.0 / (height * (r_outer - r_inner)),
            n_radial: default_n_radial(),
            n_axial: default_n_axial(),
            n_azimuthal: default_n_azimuthal(),
            n_disk_radial: default_n_disk_radial(),
        }
    }

    /// Cross-section area `height × (r_outer − r_inner)`.
    pub fn area(&self) -> f64 {
        self.height * (self.r_outer - self.r_inner)
    }

    pub fn total_current(&self) -> f64 {
        self.current_density_magnitude * self.area()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub soil: SoilParams,
    pub object: ObjectParams,
    pub excite: CoilSpec,
    pub measure: CoilSpec,
    /// Angular frequencies (rad/s).
    pub frequencies: Vec<f64>,
}

impl Scenario {
    /// Sphere of radius 0.1 m, σ* = 10⁶ S/m, centred 0.4 m deep under a
    /// coincident excite/measure coil pair 0.2 m above soil with
    /// σ_s = 1.6 S/m and μ_r,s = 1.0006.
    pub fn reference_sphere() -> Self {
        Scenario {
            soil: SoilParams::new(1.6, 1.0006),
            object: ObjectParams {
                alpha: 0.1,
                sigma_star: 1.0e6,
                mu_rstar: 1.0,
                shape: ObjectShape::Sphere,
                z: [0.0, 0.0, -0.4],
            },
            excite: CoilSpec::reference(0.2),
            measure: CoilSpec::reference(0.2),
            frequencies: log_space(1.0e3, 1.0e6, 20),
        }
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scenario serializes")
    }
}

/// `n` points log-spaced over `[lo, hi]` inclusive.
pub fn log_space(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    let (a, b) = (lo.ln(), hi.ln());
    (0..n)
        .map(|i| {
            if i == 0 {
                lo
            } else if i == n - 1 {
                hi
            } else {
                (a + (b - a) * i as f64 / (n - 1) as f64).exp()
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub field: String,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.field, self.message)
    }
}

/// Every violated invariant of the scenario; empty when it is usable.
pub fn validate_scenario(s: &Scenario) -> Vec<Violation> {
    let mut out = Vec::new();
    let mut push = |field: &str, message: String| {
        out.push(Violation { field: field.to_string(), message })
    };

    let soil = &s.soil;
    if !(soil.sigma_s >= 0.0 && soil.sigma_s.is_finite()) {
        push("soil.sigma_s", format!("must be finite and >= 0, got {}", soil.sigma_s));
    }
    if !(soil.mu_rs >= 1.0 && soil.mu_rs.is_finite()) {
        push("soil.mu_rs", format!("must be finite and >= 1, got {}", soil.mu_rs));
    }

    let obj = &s.object;
    if !(obj.alpha > 0.0 && obj.alpha.is_finite()) {
        push("object.alpha", format!("must be > 0, got {}", obj.alpha));
    }
    if !(obj.sigma_star > 0.0 && obj.sigma_star.is_finite()) {
        push("object.sigma_star", format!("must be > 0, got {}", obj.sigma_star));
    } else if obj.sigma_star <= soil.sigma_s {
        push(
            "object.sigma_star",
            format!("must exceed soil conductivity {}, got {}", soil.sigma_s, obj.sigma_star),
        );
    }
    if !(obj.mu_rstar >= 1.0 && obj.mu_rstar.is_finite()) {
        push("object.mu_rstar", format!("must be >= 1, got {}", obj.mu_rstar));
    }
    if !obj.z.iter().all(|v| v.is_finite()) {
        push("object.z", "must be finite".to_string());
    } else if obj.z[2] >= 0.0 {
        push("object.z", format!("object must lie below ground (z3 < 0), got z3 = {}", obj.z[2]));
    } else if matches!(obj.shape, ObjectShape::Sphere) && obj.z[2] + obj.alpha >= 0.0 {
        push(
            "object.z",
            format!("sphere breaks the ground plane: z3 + alpha = {}", obj.z[2] + obj.alpha),
        );
    }

    for (name, coil) in [("excite", &s.excite), ("measure", &s.measure)] {
        validate_coil(name, coil, &mut push);
    }

    if s.frequencies.is_empty() {
        push("frequencies", "at least one frequency required".to_string());
    }
    for (i, w) in s.frequencies.iter().enumerate() {
        if !(*w > 0.0 && w.is_finite()) {
            push("frequencies", format!("entry {i} must be positive, got {w}"));
        }
        if i > 0 && *w <= s.frequencies[i - 1] {
            push("frequencies", format!("entry {i} not strictly increasing"));
        }
    }
    out
}

fn validate_coil(name: &str, c: &CoilSpec, push: &mut impl FnMut(&str, String)) {
    let f = |suffix: &str| format!("{name}.{suffix}");
    if !(c.r_inner > 0.0 && c.r_inner < c.r_outer && c.r_outer.is_finite()) {
        push(
            &f("r_inner"),
            format!("need 0 < r_inner < r_outer, got r_inner = {}, r_outer = {}", c.r_inner, c.r_outer),
        );
    }
    if !(c.height > 0.0 && c.height.is_finite()) {
        push(&f("height"), format!("must be > 0, got {}", c.height));
    }
    if !c.center.iter().all(|v| v.is_finite()) {
        push(&f("center"), "must be finite".to_string());
    } else if c.center[2] - c.height / 2.0 <= 0.0 {
        push(
            &f("center"),
            format!("coil must lie above ground: center3 - height/2 = {}", c.center[2] - c.height / 2.0),
        );
    }
    if c.axis != [0.0, 0.0, 1.0] {
        push(&f("axis"), "only the +e3 axis is supported".to_string());
    }
    if !(c.current_density_magnitude.is_finite() && c.current_density_magnitude >= 0.0) {
        push(&f("current_density_magnitude"), "must be finite and >= 0".to_string());
    }
    for (field, n) in [
        ("n_radial", c.n_radial),
        ("n_axial", c.n_axial),
        ("n_azimuthal", c.n_azimuthal),
        ("n_disk_radial", c.n_disk_radial),
    ] {
        if n == 0 {
            push(&f(field), "must be >= 1".to_string());
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RegimeReport {
    /// α²σ*μ₀ω.
    pub nu: f64,
    /// ωμ₀σ_s D².
    pub epsilon: f64,
    /// Depth of the object centre, |z₃| (m).
    pub depth_d: f64,
    /// μ_r,s ≤ 1 + α/D.
    pub mu_rs_bound_ok: bool,
    pub epsilon_le_nu: bool,
    /// √(2/(ωμ₀μ_r*σ*)) (m).
    pub skin_depth_object: f64,
}

pub fn regime_diagnostics(s: &Scenario, omega: f64) -> RegimeReport {
    let obj = &s.object;
    let depth_d = obj.z[2].abs();
    let nu = obj.alpha * obj.alpha * obj.sigma_star * MU0 * omega;
    let epsilon = omega * MU0 * s.soil.sigma_s * depth_d * depth_d;
    RegimeReport {
        nu,
        epsilon,
        depth_d,
        mu_rs_bound_ok: s.soil.mu_rs <= 1.0 + obj.alpha / depth_d,
        epsilon_le_nu: epsilon <= nu,
        skin_depth_object: (2.0 / (omega * MU0 * obj.mu_rstar * obj.sigma_star)).sqrt(),
    }
}
