//! Eigenspace perturbation of a modeled Reynolds stress.
//!
//! The eigenvalues are pushed toward a limiting state on the barycentric
//! triangle, the eigenvectors are either kept in the eddy-viscosity
//! alignment with the mean strain (`v_max`) or have their first and third
//! axes exchanged (`v_min`), and the stress is recomposed with the
//! unperturbed turbulent kinetic energy.

use nalgebra::Matrix3;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::barycentric::{
    bary_from_eigenvalues, eigenvalues_from_bary, perturb_bary, ComponentTarget, TriangleGeometry,
};
use crate::eigen::symmetric_eigen;
use crate::error::{Error, Result};
use crate::tensor::{anisotropy_from_stress, stress_from_eigen, AnisotropyEigenvalues, SymTensor3};
use crate::tolerances::{K_FLOOR, STRAIN_DEGENERACY};

/// One perturbed simulation's settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PerturbationSpec {
    pub component: ComponentTarget,
    pub permute: bool,
    pub delta_b: f64,
    pub urlx: f64,
}

impl Default for PerturbationSpec {
    fn default() -> Self {
        Self {
            component: ComponentTarget::One,
            permute: false,
            delta_b: 1.0,
            urlx: 0.1,
        }
    }
}

impl PerturbationSpec {
    pub fn new(component: ComponentTarget, permute: bool, delta_b: f64, urlx: f64) -> Result<Self> {
        check_unit("delta_b", delta_b)?;
        check_unit("urlx", urlx)?;
        Ok(Self {
            component,
            permute,
            delta_b,
            urlx,
        })
    }
}

pub(crate) fn check_unit(name: &'static str, value: f64) -> Result<()> {
    if (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(Error::InvalidMagnitude { name, value })
    }
}

/// Eigen-decomposition of a strain-rate tensor, `γ1 ≥ γ2 ≥ γ3`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StrainFrame {
    pub values: [f64; 3],
    pub vectors: Matrix3<f64>,
}

impl StrainFrame {
    pub fn from_strain(s: &SymTensor3) -> Self {
        let f = symmetric_eigen(s);
        Self {
            values: f.values,
            vectors: f.vectors,
        }
    }

    /// All three strain eigenvalues coincide, so no alignment is defined.
    pub fn is_degenerate(&self) -> bool {
        self.values[0] - self.values[2] <= STRAIN_DEGENERACY
    }
}

/// Alignment that extremizes `Σ λi γj` upward: identity.
pub fn v_max() -> Matrix3<f64> {
    Matrix3::identity()
}

/// Alignment that extremizes it downward: first and third axes exchanged.
pub fn v_min() -> Matrix3<f64> {
    Matrix3::new(
        0.0, 0.0, 1.0, //
        0.0, 1.0, 0.0, //
        1.0, 0.0, 0.0,
    )
}

/// Symmetric part of the mean velocity gradient, `(A + Aᵀ)/2`.
pub fn strain_rate(grad_u: &Matrix3<f64>) -> Result<SymTensor3> {
    SymTensor3::symmetric_part(grad_u)
}

/// Linear eddy-viscosity stress `R = (2k/3) I − 2 ν_t S`.
pub fn boussinesq_stress(k: f64, nu_t: f64, strain: &SymTensor3) -> Result<SymTensor3> {
    if !(k >= 0.0 && nu_t >= 0.0 && k.is_finite() && nu_t.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "k and nu_t must be finite and non-negative (k = {k}, nu_t = {nu_t})"
        )));
    }
    Ok(SymTensor3::identity().scaled(2.0 * k / 3.0) - strain.scaled(2.0 * nu_t))
}

pub fn perturb_eigenvalues(
    l: &AnisotropyEigenvalues,
    spec: &PerturbationSpec,
    g: &TriangleGeometry,
) -> Result<AnisotropyEigenvalues> {
    let x = bary_from_eigenvalues(l, g)?;
    let moved = perturb_bary(&x, spec.component, spec.delta_b, g)?;
    eigenvalues_from_bary(&moved, g)
}

pub fn perturb_eigenvectors(strain: &StrainFrame, permute: bool) -> Matrix3<f64> {
    if permute {
        strain.vectors * v_min()
    } else {
        strain.vectors * v_max()
    }
}

/// Bounds of `Σ λi γσ(i)` over all pairings σ of two descending triples.
pub fn alignment_range(lambda: &[f64; 3], gamma: &[f64; 3]) -> Result<(f64, f64)> {
    let sorted = |t: &[f64; 3]| t[0] >= t[1] && t[1] >= t[2];
    if !sorted(lambda) {
        return Err(Error::Ordering("eigenvalue"));
    }
    if !sorted(gamma) {
        return Err(Error::Ordering("strain eigenvalue"));
    }
    let lo = lambda[0] * gamma[2] + lambda[1] * gamma[1] + lambda[2] * gamma[0];
    let hi = lambda[0] * gamma[0] + lambda[1] * gamma[1] + lambda[2] * gamma[2];
    Ok((lo, hi))
}

/// The perturbed stress `R* = 2k (I/3 + V* Λ* V*ᵀ)` for one point.
///
/// `baseline_b` is the modeled anisotropy and `strain` the local mean
/// strain rate. `k` is carried over unchanged.
pub fn perturbed_stress(
    k: f64,
    spec: &PerturbationSpec,
    baseline_b: &SymTensor3,
    strain: &SymTensor3,
) -> Result<SymTensor3> {
    if k <= K_FLOOR {
        return Err(Error::DegenerateTke { k });
    }
    let b = symmetric_eigen(baseline_b);
    let lambda = AnisotropyEigenvalues::from_array(b.values)?;
    let perturbed = perturb_eigenvalues(&lambda, spec, &TriangleGeometry::default())?;

    // An eddy-viscosity anisotropy is −(ν_t/k) S: its largest eigenvalue sits
    // on the most compressive strain axis. Framing on −S makes the identity
    // pairing (v_max) reproduce that alignment, which is also the one that
    // maximizes production −R:S.
    let frame = StrainFrame::from_strain(&-*strain);
    let vectors = if frame.is_degenerate() {
        b.vectors
    } else {
        perturb_eigenvectors(&frame, spec.permute)
    };
    stress_from_eigen(k, &perturbed, &vectors)
}

/// `current + urlx · (target − current)`.
pub fn relax_stress(current: &SymTensor3, target: &SymTensor3, urlx: f64) -> Result<SymTensor3> {
    check_unit("urlx", urlx)?;
    // Blend form so that urlx = 0 and urlx = 1 return their endpoint exactly.
    Ok(current.scaled(1.0 - urlx) + target.scaled(urlx))
}

/// `P = −R_ij ∂U_i/∂x_j`.
pub fn production(r: &SymTensor3, grad_u: &Matrix3<f64>) -> f64 {
    -r.contract(grad_u)
}

/// Applies [`perturbed_stress`] cell by cell. Cells whose `k` is at or below
/// the floor, or whose stress carries no energy, pass through unchanged.
pub fn perturb_field(
    stresses: &[SymTensor3],
    grad_u: &[Matrix3<f64>],
    k: &[f64],
    spec: &PerturbationSpec,
) -> Result<Vec<SymTensor3>> {
    for len in [grad_u.len(), k.len()] {
        if len != stresses.len() {
            return Err(Error::Shape {
                expected: stresses.len(),
                found: len,
            });
        }
    }
    stresses
        .par_iter()
        .zip(grad_u.par_iter())
        .zip(k.par_iter())
        .map(|((r, g), &k)| {
            if k <= K_FLOOR {
                return Ok(*r);
            }
            let Ok((_, b)) = anisotropy_from_stress(r) else {
                return Ok(*r);
            };
            perturbed_stress(k, spec, &b, &strain_rate(g)?)
        })
        .collect()
}
