//! Fixed-size real and complex 3-vectors and 3×3 tensors.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::ops::{Add, Mul, Sub};

pub type Vec3 = [f64; 3];
pub type CVec3 = [Complex64; 3];

pub(crate) const CZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

pub fn norm3(v: &Vec3) -> f64 {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}

pub fn sub3(a: &Vec3, b: &Vec3) -> Vec3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

pub fn cnorm3(v: &CVec3) -> f64 {
    (v[0].norm_sqr() + v[1].norm_sqr() + v[2].norm_sqr()).sqrt()
}

pub fn cscale3(v: &CVec3, s: Complex64) -> CVec3 {
    [v[0] * s, v[1] * s, v[2] * s]
}

pub fn cadd3(a: &CVec3, b: &CVec3) -> CVec3 {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

pub fn cdot3(a: &CVec3, b: &CVec3) -> Complex64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// Real symmetric-or-not 3×3 tensor, row major.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Tensor3(pub [[f64; 3]; 3]);

impl Tensor3 {
    pub fn zeros() -> Self {
        Tensor3([[0.0; 3]; 3])
    }

    pub fn identity() -> Self {
        let mut t = Self::zeros();
        for i in 0..3 {
            t.0[i][i] = 1.0;
        }
        t
    }

    pub fn trace(&self) -> f64 {
        self.0[0][0] + self.0[1][1] + self.0[2][2]
    }

    pub fn frobenius(&self) -> f64 {
        self.0.iter().flatten().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn to_complex(&self) -> ComplexTensor3 {
        let mut out = ComplexTensor3::zeros();
        for i in 0..3 {
            for j in 0..3 {
                out.0[i][j] = Complex64::new(self.0[i][j], 0.0);
            }
        }
        out
    }
}

/// Complex 3×3 tensor used for polarizability tensors and Green's-function Hessians.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ComplexTensor3(pub [[Complex64; 3]; 3]);

impl ComplexTensor3 {
    pub fn zeros() -> Self {
        ComplexTensor3([[CZERO; 3]; 3])
    }

    pub fn identity() -> Self {
        Self::scaled_identity(Complex64::new(1.0, 0.0))
    }

    pub fn scaled_identity(s: Complex64) -> Self {
        let mut t = Self::zeros();
        for i in 0..3 {
            t.0[i][i] = s;
        }
        t
    }

    pub fn from_parts(re: &Tensor3, im: &Tensor3) -> Self {
        let mut t = Self::zeros();
        for i in 0..3 {
            for j in 0..3 {
                t.0[i][j] = Complex64::new(re.0[i][j], im.0[i][j]);
            }
        }
        t
    }

    pub fn re(&self) -> Tensor3 {
        Tensor3(self.0.map(|row| row.map(|c| c.re)))
    }

    pub fn im(&self) -> Tensor3 {
        Tensor3(self.0.map(|row| row.map(|c| c.im)))
    }

    pub fn trace(&self) -> Complex64 {
        self.0[0][0] + self.0[1][1] + self.0[2][2]
    }

    pub fn frobenius(&self) -> f64 {
        self.0.iter().flatten().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest `|T_ij − T_ji|`.
    pub fn max_asymmetry(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..3 {
            for j in (i + 1)..3 {
                worst = worst.max((self.0[i][j] - self.0[j][i]).norm());
            }
        }
        worst
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros();
        for i in 0..3 {
            for j in 0..3 {
                t.0[i][j] = self.0[j][i];
            }
        }
        t
    }

    pub fn mul_vec(&self, v: &CVec3) -> CVec3 {
        let mut out = [CZERO; 3];
        for (i, row) in self.0.iter().enumerate() {
            out[i] = row[0] * v[0] + row[1] * v[1] + row[2] * v[2];
        }
        out
    }

    /// Bilinear form `aᵀ T b` without conjugation.
    pub fn bilinear(&self, a: &CVec3, b: &CVec3) -> Complex64 {
        cdot3(a, &self.mul_vec(b))
    }

    pub fn scale(&self, s: Complex64) -> Self {
        ComplexTensor3(self.0.map(|row| row.map(|c| c * s)))
    }
}

impl Add for ComplexTensor3 {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let mut t = self;
        for i in 0..3 {
            for j in 0..3 {
                t.0[i][j] += rhs.0[i][j];
            }
        }
        t
    }
}

impl Sub for ComplexTensor3 {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        let mut t = self;
        for i in 0..3 {
            for j in 0..3 {
                t.0[i][j] -= rhs.0[i][j];
            }
        }
        t
    }
}

impl Mul<Complex64> for ComplexTensor3 {
    type Output = Self;
    fn mul(self, rhs: Complex64) -> Self {
        self.scale(rhs)
    }
}
