//! Eigendecomposition of symmetric 3×3 tensors.
//!
//! Eigenvalues come from the trigonometric solution of the characteristic
//! cubic. Eigenvectors are built for the best-separated eigenvalue first,
//! then for the middle one inside its orthogonal complement, which keeps
//! the frame orthonormal by construction. Near-repeated spectra, or any
//! result whose residual is not clean, fall back to cyclic Jacobi.
//!
//! Output is canonical: descending eigenvalues, repeated-eigenvalue
//! subspaces spanned by Gram–Schmidt on the projected coordinate axes, and
//! each column flipped so that its largest-magnitude entry is positive.

use std::f64::consts::PI;

use nalgebra::{Matrix3, Vector3};

use crate::tensor::{EigenFrame, SymTensor3};
use crate::tolerances::EIGEN_TIE;

/// Residual `‖A v − λ v‖∞` accepted from the closed-form path, relative to
/// the normalized tensor.
const ANALYTIC_RESIDUAL: f64 = 1e-13;

const JACOBI_MAX_SWEEPS: usize = 64;

pub fn symmetric_eigen(t: &SymTensor3) -> EigenFrame {
    let scale = t.max_abs();
    if scale == 0.0 {
        return EigenFrame {
            values: [0.0; 3],
            vectors: Matrix3::identity(),
        };
    }
    let a = t.to_matrix() / scale;

    let (mut values, mut vectors) = match analytic(&a) {
        Some((vals, vecs)) if residual(&a, &vals, &vecs) <= ANALYTIC_RESIDUAL => (vals, vecs),
        _ => jacobi(&a),
    };
    sort_descending(&mut values, &mut vectors);
    canonicalize_repeated(&values, &mut vectors);
    fix_signs(&mut vectors);

    EigenFrame {
        values: values.map(|v| v * scale),
        vectors,
    }
}

fn analytic(a: &Matrix3<f64>) -> Option<([f64; 3], Matrix3<f64>)> {
    let q = a.trace() / 3.0;
    let off = a[(0, 1)].powi(2) + a[(0, 2)].powi(2) + a[(1, 2)].powi(2);
    let diag = (a[(0, 0)] - q).powi(2) + (a[(1, 1)] - q).powi(2) + (a[(2, 2)] - q).powi(2);
    let p = ((diag + 2.0 * off) / 6.0).sqrt();
    if p < EIGEN_TIE {
        return None;
    }
    let b = (a - Matrix3::identity() * q) / p;
    let r = (0.5 * b.determinant()).clamp(-1.0, 1.0);
    let phi = r.acos() / 3.0;
    let hi = q + 2.0 * p * phi.cos();
    let lo = q + 2.0 * p * (phi + 2.0 * PI / 3.0).cos();
    let mid = 3.0 * q - hi - lo;
    if hi - mid < EIGEN_TIE || mid - lo < EIGEN_TIE {
        return None;
    }

    // r >= 0 puts the largest eigenvalue furthest from the other two.
    let (isolated_slot, isolated, other_slot) = if r >= 0.0 { (0, hi, 2) } else { (2, lo, 0) };
    let v_iso = null_vector_3(&(a - Matrix3::identity() * isolated))?;
    let (u, w) = complement_basis(&v_iso);
    let v_mid = null_vector_in_plane(&(a - Matrix3::identity() * mid), &u, &w);
    let v_other = v_iso.cross(&v_mid).normalize();

    let mut vectors = Matrix3::zeros();
    vectors.set_column(isolated_slot, &v_iso);
    vectors.set_column(1, &v_mid);
    vectors.set_column(other_slot, &v_other);

    // Rayleigh quotients are accurate to rounding even where acos is not.
    let values = [0, 1, 2].map(|i| {
        let v = vectors.column(i);
        v.dot(&(a * v))
    });
    Some((values, vectors))
}

/// Unit vector spanning the null space of a rank-2 symmetric matrix: the
/// largest cross product of two of its rows.
fn null_vector_3(m: &Matrix3<f64>) -> Option<Vector3<f64>> {
    let rows = [0, 1, 2].map(|i| m.row(i).transpose());
    let candidates = [
        rows[0].cross(&rows[1]),
        rows[0].cross(&rows[2]),
        rows[1].cross(&rows[2]),
    ];
    let best = candidates
        .iter()
        .max_by(|x, y| x.norm_squared().total_cmp(&y.norm_squared()))?;
    let n = best.norm();
    (n > 0.0).then(|| best / n)
}

fn complement_basis(v: &Vector3<f64>) -> (Vector3<f64>, Vector3<f64>) {
    let u = if v.x.abs() > v.y.abs() {
        Vector3::new(-v.z, 0.0, v.x)
    } else {
        Vector3::new(0.0, v.z, -v.y)
    }
    .normalize();
    let w = v.cross(&u);
    (u, w)
}

/// Null vector of `m` restricted to `span(u, w)`.
fn null_vector_in_plane(m: &Matrix3<f64>, u: &Vector3<f64>, w: &Vector3<f64>) -> Vector3<f64> {
    let mu = m * u;
    let mw = m * w;
    let (m00, m01, m11) = (u.dot(&mu), u.dot(&mw), w.dot(&mw));
    let c0 = (m01, -m00);
    let c1 = (m11, -m01);
    let (x, y) = if c0.0.hypot(c0.1) >= c1.0.hypot(c1.1) {
        c0
    } else {
        c1
    };
    let n = x.hypot(y);
    if n == 0.0 {
        *u
    } else {
        (u * x + w * y) / n
    }
}

fn residual(a: &Matrix3<f64>, values: &[f64; 3], vectors: &Matrix3<f64>) -> f64 {
    (0..3)
        .map(|i| {
            let v = vectors.column(i);
            (a * v - v * values[i]).amax()
        })
        .fold(0.0, f64::max)
}

fn jacobi(a: &Matrix3<f64>) -> ([f64; 3], Matrix3<f64>) {
    let mut m = *a;
    let mut v = Matrix3::<f64>::identity();
    let scale = m.norm();
    for _ in 0..JACOBI_MAX_SWEEPS {
        let off = (m[(0, 1)].powi(2) + m[(0, 2)].powi(2) + m[(1, 2)].powi(2)).sqrt();
        if off <= f64::EPSILON * 1e-3 * scale {
            break;
        }
        for (p, q) in [(0, 1), (0, 2), (1, 2)] {
            let apq = m[(p, q)];
            if apq == 0.0 {
                continue;
            }
            let theta = (m[(q, q)] - m[(p, p)]) / (2.0 * apq);
            let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
            let c = 1.0 / (t * t + 1.0).sqrt();
            let s = t * c;
            let mut rot = Matrix3::identity();
            rot[(p, p)] = c;
            rot[(q, q)] = c;
            rot[(p, q)] = s;
            rot[(q, p)] = -s;
            m = rot.transpose() * m * rot;
            m[(p, q)] = 0.0;
            m[(q, p)] = 0.0;
            v *= rot;
        }
    }
    ([m[(0, 0)], m[(1, 1)], m[(2, 2)]], v)
}

fn sort_descending(values: &mut [f64; 3], vectors: &mut Matrix3<f64>) {
    let mut order = [0usize, 1, 2];
    order.sort_by(|&i, &j| values[j].total_cmp(&values[i]));
    let old_vals = *values;
    let old_vecs = *vectors;
    for (slot, &src) in order.iter().enumerate() {
        values[slot] = old_vals[src];
        vectors.set_column(slot, &old_vecs.column(src));
    }
}

/// Replaces the basis of every repeated-eigenvalue subspace with the
/// Gram–Schmidt orthonormalization of the coordinate axes projected into it.
fn canonicalize_repeated(values: &[f64; 3], vectors: &mut Matrix3<f64>) {
    let mut start = 0;
    while start < 3 {
        let mut end = start + 1;
        while end < 3 && values[end - 1] - values[end] < EIGEN_TIE {
            end += 1;
        }
        if end - start > 1 {
            let mut projector = Matrix3::zeros();
            for i in start..end {
                let c = vectors.column(i).into_owned();
                projector += c * c.transpose();
            }
            let mut basis: Vec<Vector3<f64>> = Vec::with_capacity(end - start);
            for axis in 0..3 {
                if basis.len() == end - start {
                    break;
                }
                let mut candidate = projector.column(axis).into_owned();
                for b in &basis {
                    candidate -= b * b.dot(&candidate);
                }
                // Some axis always keeps at least 1/sqrt(3) of its length.
                let n = candidate.norm();
                if n > 0.5 {
                    basis.push(candidate / n);
                }
            }
            for (offset, b) in basis.iter().enumerate() {
                vectors.set_column(start + offset, b);
            }
        }
        start = end;
    }
}

fn fix_signs(vectors: &mut Matrix3<f64>) {
    for j in 0..3 {
        let col = vectors.column(j);
        let mut pivot = 0;
        for i in 1..3 {
            if col[i].abs() > col[pivot].abs() {
                pivot = i;
            }
        }
        if col[pivot] < 0.0 {
            vectors.set_column(j, &(-col.into_owned()));
        }
    }
}
