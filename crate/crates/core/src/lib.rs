//! Forward modelling of metal-detector responses from small, highly
//! conducting (and possibly magnetic) objects buried in conducting,
//! permeable soil.
//!
//! The perturbed field in the air region is approximated by
//! `D²G_s(x, z) · M · H₀(z)`, where `G_s` is the air-side half-space
//! Green's function, `M` the rank-2 magnetic polarizability tensor of the
//! object and `H₀` the background field of the exciting coil in the
//! presence of the soil. The crate is organised as:
//!
//! * [`model`] – scenario types and asymptotic-regime diagnostics
//! * [`quadrature`] – Bessel functions and the semi-infinite Hankel-transform engine
//! * [`greens`] – free-space and half-space Green's functions with derivatives
//! * [`sources`] – loop and distributed-coil background fields, TE interface matching
//! * [`mpt`] – sphere polarizability, spectral signatures and their checks
//! * [`forward`] – induced-voltage predictions, sweeps and scaling studies

pub mod error;
pub mod forward;
pub mod greens;
pub mod model;
pub mod mpt;
pub mod quadrature;
pub mod sources;
pub mod tensor;

pub use error::{Error, Result};
pub use tensor::{CVec3, ComplexTensor3, Tensor3, Vec3};

/// Permeability of free space (H/m).
pub const MU0: f64 = 4.0e-7 * std::f64::consts::PI;
