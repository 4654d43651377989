#![allow(dead_code)]

use equips_core::{
    eigenvalues_from_bary, stress_from_eigen, AnisotropyEigenvalues, BaryPoint, ComponentTarget,
    PerturbationSpec, SymTensor3, TriangleGeometry,
};
use nalgebra::{Matrix3, Rotation3};
use proptest::prelude::*;

pub fn cases(n: u32) -> ProptestConfig {
    ProptestConfig {
        cases: n,
        failure_persistence: None,
        ..ProptestConfig::default()
    }
}

pub fn sym_tensor() -> impl Strategy<Value = SymTensor3> {
    prop::array::uniform6(-1.0f64..=1.0)
        .prop_map(|[a, b, c, d, e, f]| SymTensor3::new(a, b, c, d, e, f).unwrap())
}

pub fn rotation() -> impl Strategy<Value = Matrix3<f64>> {
    (-3.2f64..3.2, -1.6f64..1.6, -3.2f64..3.2)
        .prop_map(|(r, p, y)| Rotation3::from_euler_angles(r, p, y).into_inner())
}

/// Uniform point of the triangle as barycentric weights (folded square).
pub fn triangle_weights() -> impl Strategy<Value = [f64; 3]> {
    (0.0f64..=1.0, 0.0f64..=1.0).prop_map(|(mut s, mut t)| {
        if s + t > 1.0 {
            s = 1.0 - s;
            t = 1.0 - t;
        }
        [s, t, (1.0 - s - t).max(0.0)]
    })
}

pub fn point_from_weights(w: [f64; 3], g: &TriangleGeometry) -> BaryPoint {
    let v = g.vertices();
    BaryPoint::new(
        w[0] * v[0].x + w[1] * v[1].x + w[2] * v[2].x,
        w[0] * v[0].y + w[1] * v[1].y + w[2] * v[2].y,
    )
    .unwrap()
}

pub fn realizable_eigenvalues() -> impl Strategy<Value = AnisotropyEigenvalues> {
    triangle_weights().prop_map(|w| {
        let g = TriangleGeometry::default();
        eigenvalues_from_bary(&point_from_weights(w, &g), &g).unwrap()
    })
}

/// `(k, R)` for a realizable stress with random energy, shape and axes.
pub fn realizable_stress() -> impl Strategy<Value = (f64, SymTensor3)> {
    (1e-3f64..10.0, realizable_eigenvalues(), rotation())
        .prop_map(|(k, l, v)| (k, stress_from_eigen(k, &l, &v).unwrap()))
}

pub fn component() -> impl Strategy<Value = ComponentTarget> {
    prop_oneof![
        Just(ComponentTarget::One),
        Just(ComponentTarget::Two),
        Just(ComponentTarget::Three)
    ]
}

pub fn spec() -> impl Strategy<Value = PerturbationSpec> {
    (component(), any::<bool>(), 0.0f64..=1.0, 0.01f64..=1.0)
        .prop_map(|(c, p, d, u)| PerturbationSpec::new(c, p, d, u).unwrap())
}

/// Eigenvalues of a symmetric matrix as roots of its characteristic cubic
/// `λ³ − I1 λ² + I2 λ − I3`. The outer roots come from Newton iterations
/// started at the Gershgorin bounds, which approach monotonically from
/// outside; the middle root follows from the trace.
pub fn cubic_roots(a: &Matrix3<f64>) -> [f64; 3] {
    let i1 = a.trace();
    let i2 = a[(0, 0)] * a[(1, 1)] + a[(1, 1)] * a[(2, 2)] + a[(0, 0)] * a[(2, 2)]
        - a[(0, 1)].powi(2)
        - a[(1, 2)].powi(2)
        - a[(0, 2)].powi(2);
    let i3 = a.determinant();
    let p = |l: f64| ((l - i1) * l + i2) * l - i3;
    let dp = |l: f64| (3.0 * l - 2.0 * i1) * l + i2;
    let radius = |i: usize| {
        (0..3)
            .filter(|&j| j != i)
            .map(|j| a[(i, j)].abs())
            .sum::<f64>()
    };
    let upper = (0..3)
        .map(|i| a[(i, i)] + radius(i))
        .fold(f64::MIN, f64::max)
        + 1e-3;
    let lower = (0..3)
        .map(|i| a[(i, i)] - radius(i))
        .fold(f64::MAX, f64::min)
        - 1e-3;
    let newton = |mut l: f64| {
        for _ in 0..500 {
            let d = dp(l);
            if d == 0.0 {
                break;
            }
            let next = l - p(l) / d;
            if next == l || !next.is_finite() {
                break;
            }
            l = next;
        }
        l
    };
    let hi = newton(upper);
    let lo = newton(lower);
    [hi, i1 - hi - lo, lo]
}
