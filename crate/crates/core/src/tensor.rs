//! Symmetric 3×3 tensors and the Reynolds-stress decomposition
//! `R = 2k (b + I/3)`, `b = V Λ Vᵀ`.

use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::Matrix3;
use serde::{Deserialize, Serialize};

use crate::barycentric::{barycentric_weights, ComponentTarget};
use crate::eigen::symmetric_eigen;
use crate::error::{Error, Result};
use crate::tolerances::{FRAME_TOL, INTERIOR_TOL, K_FLOOR, TRACE_TOL};

/// A symmetric 3×3 tensor stored as its six independent components.
///
/// Every value that makes it past construction is finite.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SymTensor3 {
    xx: f64,
    yy: f64,
    zz: f64,
    xy: f64,
    xz: f64,
    yz: f64,
}

impl SymTensor3 {
    pub fn new(xx: f64, yy: f64, zz: f64, xy: f64, xz: f64, yz: f64) -> Result<Self> {
        let t = Self::raw(xx, yy, zz, xy, xz, yz);
        if t.components().iter().all(|c| c.is_finite()) {
            Ok(t)
        } else {
            Err(Error::NonFinite("SymTensor3"))
        }
    }

    pub fn diagonal(xx: f64, yy: f64, zz: f64) -> Result<Self> {
        Self::new(xx, yy, zz, 0.0, 0.0, 0.0)
    }

    pub const fn zero() -> Self {
        Self::raw(0.0, 0.0, 0.0, 0.0, 0.0, 0.0)
    }

    pub const fn identity() -> Self {
        Self::raw(1.0, 1.0, 1.0, 0.0, 0.0, 0.0)
    }

    const fn raw(xx: f64, yy: f64, zz: f64, xy: f64, xz: f64, yz: f64) -> Self {
        Self {
            xx,
            yy,
            zz,
            xy,
            xz,
            yz,
        }
    }

    /// Symmetric part `(A + Aᵀ)/2` of a general matrix.
    pub fn symmetric_part(a: &Matrix3<f64>) -> Result<Self> {
        Self::new(
            a[(0, 0)],
            a[(1, 1)],
            a[(2, 2)],
            0.5 * (a[(0, 1)] + a[(1, 0)]),
            0.5 * (a[(0, 2)] + a[(2, 0)]),
            0.5 * (a[(1, 2)] + a[(2, 1)]),
        )
    }

    /// Components in the order `(xx, yy, zz, xy, xz, yz)`.
    pub fn components(&self) -> [f64; 6] {
        [self.xx, self.yy, self.zz, self.xy, self.xz, self.yz]
    }

    pub fn xx(&self) -> f64 {
        self.xx
    }
    pub fn yy(&self) -> f64 {
        self.yy
    }
    pub fn zz(&self) -> f64 {
        self.zz
    }
    pub fn xy(&self) -> f64 {
        self.xy
    }
    pub fn xz(&self) -> f64 {
        self.xz
    }
    pub fn yz(&self) -> f64 {
        self.yz
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        match (i.min(j), i.max(j)) {
            (0, 0) => self.xx,
            (1, 1) => self.yy,
            (2, 2) => self.zz,
            (0, 1) => self.xy,
            (0, 2) => self.xz,
            (1, 2) => self.yz,
            _ => panic!("index ({i}, {j}) out of range for a 3×3 tensor"),
        }
    }

    pub fn to_matrix(&self) -> Matrix3<f64> {
        Matrix3::new(
            self.xx, self.xy, self.xz, //
            self.xy, self.yy, self.yz, //
            self.xz, self.yz, self.zz,
        )
    }

    pub fn trace(&self) -> f64 {
        self.xx + self.yy + self.zz
    }

    pub fn frobenius_norm(&self) -> f64 {
        (self.xx * self.xx
            + self.yy * self.yy
            + self.zz * self.zz
            + 2.0 * (self.xy * self.xy + self.xz * self.xz + self.yz * self.yz))
            .sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.components().iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    /// Largest absolute componentwise difference.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (*self - *other).max_abs()
    }

    /// Full contraction `Σ T_ij A_ij` with a general matrix.
    pub fn contract(&self, a: &Matrix3<f64>) -> f64 {
        let mut sum = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                sum += self.get(i, j) * a[(i, j)];
            }
        }
        sum
    }

    pub fn scaled(&self, s: f64) -> Self {
        *self * s
    }
}

impl Add for SymTensor3 {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::raw(
            self.xx + o.xx,
            self.yy + o.yy,
            self.zz + o.zz,
            self.xy + o.xy,
            self.xz + o.xz,
            self.yz + o.yz,
        )
    }
}

impl Sub for SymTensor3 {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::raw(
            self.xx - o.xx,
            self.yy - o.yy,
            self.zz - o.zz,
            self.xy - o.xy,
            self.xz - o.xz,
            self.yz - o.yz,
        )
    }
}

impl Mul<f64> for SymTensor3 {
    type Output = Self;
    fn mul(self, s: f64) -> Self {
        Self::raw(
            self.xx * s,
            self.yy * s,
            self.zz * s,
            self.xy * s,
            self.xz * s,
            self.yz * s,
        )
    }
}

impl Neg for SymTensor3 {
    type Output = Self;
    fn neg(self) -> Self {
        self * -1.0
    }
}

/// Eigenvalues in descending order with matching unit eigenvectors stored
/// as the columns of `vectors`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenFrame {
    pub values: [f64; 3],
    pub vectors: Matrix3<f64>,
}

impl EigenFrame {
    /// `V · diag(λ) · Vᵀ`.
    pub fn reconstruct(&self) -> SymTensor3 {
        let d = Matrix3::from_diagonal(&self.values.into());
        let m = self.vectors * d * self.vectors.transpose();
        SymTensor3::raw(
            m[(0, 0)],
            m[(1, 1)],
            m[(2, 2)],
            0.5 * (m[(0, 1)] + m[(1, 0)]),
            0.5 * (m[(0, 2)] + m[(2, 0)]),
            0.5 * (m[(1, 2)] + m[(2, 1)]),
        )
    }
}

/// Largest entry of `|VᵀV − I|`.
pub fn orthonormality_defect(v: &Matrix3<f64>) -> f64 {
    (v.transpose() * v - Matrix3::identity()).abs().max()
}

/// Eigenvalues of the anisotropy tensor `b`, trace-free by construction.
///
/// Realizability (each value in `[-1/3, 2/3]`, ordered) is not a type
/// invariant; operations that need it check it and report the offending
/// barycentric weight.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnisotropyEigenvalues([f64; 3]);

impl AnisotropyEigenvalues {
    pub fn new(l1: f64, l2: f64, l3: f64) -> Result<Self> {
        if !(l1.is_finite() && l2.is_finite() && l3.is_finite()) {
            return Err(Error::NonFinite("AnisotropyEigenvalues"));
        }
        let trace = l1 + l2 + l3;
        if trace.abs() > TRACE_TOL {
            return Err(Error::NotTraceFree { trace });
        }
        Ok(Self([l1, l2, l3]))
    }

    pub fn from_array(l: [f64; 3]) -> Result<Self> {
        Self::new(l[0], l[1], l[2])
    }

    pub const fn isotropic() -> Self {
        Self([0.0, 0.0, 0.0])
    }

    pub fn values(&self) -> [f64; 3] {
        self.0
    }

    pub fn is_realizable(&self) -> bool {
        barycentric_weights(self)
            .iter()
            .all(|&w| w >= -INTERIOR_TOL)
            && self
                .0
                .iter()
                .all(|&l| (-1.0 / 3.0 - INTERIOR_TOL..=2.0 / 3.0 + INTERIOR_TOL).contains(&l))
    }
}

/// `k = tr(R) / 2`.
pub fn turbulent_kinetic_energy(r: &SymTensor3) -> f64 {
    0.5 * r.trace()
}

/// Splits a Reynolds stress into `k` and the anisotropy `b = R/(2k) − I/3`.
pub fn anisotropy_from_stress(r: &SymTensor3) -> Result<(f64, SymTensor3)> {
    let k = turbulent_kinetic_energy(r);
    if k <= K_FLOOR {
        return Err(Error::DegenerateTke { k });
    }
    let b = r.scaled(0.5 / k) - SymTensor3::identity().scaled(1.0 / 3.0);
    Ok((k, b))
}

/// Recomposes `R = 2k (V Λ Vᵀ + I/3)`.
pub fn stress_from_eigen(
    k: f64,
    eigenvalues: &AnisotropyEigenvalues,
    vectors: &Matrix3<f64>,
) -> Result<SymTensor3> {
    if !k.is_finite() || k < 0.0 {
        return Err(Error::InvalidArgument(format!(
            "turbulent kinetic energy must be finite and non-negative, got {k}"
        )));
    }
    if !vectors.iter().all(|v| v.is_finite()) {
        return Err(Error::NonFinite("eigenvector matrix"));
    }
    let deviation = orthonormality_defect(vectors);
    if deviation > FRAME_TOL {
        return Err(Error::InvalidFrame { deviation });
    }
    let b = EigenFrame {
        values: eigenvalues.values(),
        vectors: *vectors,
    }
    .reconstruct();
    Ok((b + SymTensor3::identity().scaled(1.0 / 3.0)).scaled(2.0 * k))
}

/// Outcome of [`realizability_check`]. Pure diagnostics.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RealizabilityReport {
    pub tke: f64,
    pub tke_nonnegative: bool,
    /// `None` when `k` is at or below the floor.
    pub anisotropy: Option<[f64; 3]>,
    pub eigenvalues_in_range: bool,
    pub weights: Option<[f64; 3]>,
    pub inside_triangle: bool,
    /// Limiting state the tensor sits on, if any.
    pub vertex: Option<ComponentTarget>,
    pub realizable: bool,
}

pub fn realizability_check(r: &SymTensor3) -> RealizabilityReport {
    let tke = turbulent_kinetic_energy(r);
    let tke_nonnegative = tke >= -K_FLOOR;

    match anisotropy_from_stress(r) {
        Ok((_, b)) => {
            let l = symmetric_eigen(&b).values;
            let eigenvalues_in_range = l
                .iter()
                .all(|&v| (-1.0 / 3.0 - INTERIOR_TOL..=2.0 / 3.0 + INTERIOR_TOL).contains(&v));
            // Raw weights, no trace check: a slightly-off trace should show up
            // as a weight violation rather than a construction error.
            let w = [l[0] - l[1], 2.0 * (l[1] - l[2]), 3.0 * l[2] + 1.0];
            let inside_triangle = w.iter().all(|&x| x >= -INTERIOR_TOL);
            let vertex = ComponentTarget::ALL
                .into_iter()
                .find(|t| w[t.index() - 1] >= 1.0 - INTERIOR_TOL);
            RealizabilityReport {
                tke,
                tke_nonnegative,
                anisotropy: Some(l),
                eigenvalues_in_range,
                weights: Some(w),
                inside_triangle,
                vertex,
                realizable: tke_nonnegative && eigenvalues_in_range && inside_triangle,
            }
        }
        Err(_) => {
            // No energy to normalize by: realizable only as a (near) null tensor,
            // i.e. when R itself is positive semi-definite.
            let psd = symmetric_eigen(r).values[2] >= -K_FLOOR;
            RealizabilityReport {
                tke,
                tke_nonnegative,
                anisotropy: None,
                eigenvalues_in_range: psd,
                weights: None,
                inside_triangle: psd,
                vertex: None,
                realizable: tke_nonnegative && psd,
            }
        }
    }
}
