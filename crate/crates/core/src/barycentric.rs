//! The barycentric realizability triangle.
//!
//! Anisotropy eigenvalues map affinely onto the triangle spanned by the
//! one-, two- and three-component limiting states:
//!
//! ```text
//! x = x1C (λ1 − λ2) + x2C (2λ2 − 2λ3) + x3C (3λ3 + 1)
//! ```
//!
//! The three weights sum to one for any trace-free triple, so a realizable
//! state is a convex combination of the vertices.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tensor::AnisotropyEigenvalues;
use crate::tolerances::INTERIOR_TOL;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BaryPoint {
    pub x: f64,
    pub y: f64,
}

impl BaryPoint {
    pub fn new(x: f64, y: f64) -> Result<Self> {
        if x.is_finite() && y.is_finite() {
            Ok(Self { x, y })
        } else {
            Err(Error::NonFinite("BaryPoint"))
        }
    }

    pub fn distance(&self, other: &Self) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    fn lerp(&self, other: &Self, t: f64) -> Self {
        Self {
            x: (1.0 - t) * self.x + t * other.x,
            y: (1.0 - t) * self.y + t * other.y,
        }
    }
}

/// Limiting state of turbulence a perturbation is aimed at.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ComponentTarget {
    /// Rod-like, one active fluctuation component.
    One,
    /// Disc-like, two active components.
    Two,
    /// Isotropic.
    Three,
}

impl ComponentTarget {
    pub const ALL: [ComponentTarget; 3] = [Self::One, Self::Two, Self::Three];

    /// 1, 2 or 3, matching the `UQ_COMPONENT` option.
    pub fn index(self) -> usize {
        match self {
            Self::One => 1,
            Self::Two => 2,
            Self::Three => 3,
        }
    }

    pub fn from_index(i: i64) -> Option<Self> {
        match i {
            1 => Some(Self::One),
            2 => Some(Self::Two),
            3 => Some(Self::Three),
            _ => None,
        }
    }

    pub fn limiting_eigenvalues(self) -> AnisotropyEigenvalues {
        let l = match self {
            Self::One => [2.0 / 3.0, -1.0 / 3.0, -1.0 / 3.0],
            Self::Two => [1.0 / 6.0, 1.0 / 6.0, -1.0 / 3.0],
            Self::Three => [0.0, 0.0, 0.0],
        };
        AnisotropyEigenvalues::from_array(l).expect("limiting states are trace-free")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TriangleGeometry {
    one: BaryPoint,
    two: BaryPoint,
    three: BaryPoint,
}

impl Default for TriangleGeometry {
    /// Equilateral triangle with the 1C and 2C vertices on the x axis.
    fn default() -> Self {
        Self {
            one: BaryPoint { x: 1.0, y: 0.0 },
            two: BaryPoint { x: 0.0, y: 0.0 },
            three: BaryPoint {
                x: 0.5,
                y: 3f64.sqrt() / 2.0,
            },
        }
    }
}

impl TriangleGeometry {
    pub fn new(one: BaryPoint, two: BaryPoint, three: BaryPoint) -> Result<Self> {
        let g = Self { one, two, three };
        let area = g.signed_area();
        if area.abs() <= 1e-14 || !area.is_finite() {
            return Err(Error::Geometry { area });
        }
        Ok(g)
    }

    pub fn vertex(&self, target: ComponentTarget) -> BaryPoint {
        match target {
            ComponentTarget::One => self.one,
            ComponentTarget::Two => self.two,
            ComponentTarget::Three => self.three,
        }
    }

    pub fn vertices(&self) -> [BaryPoint; 3] {
        [self.one, self.two, self.three]
    }

    pub fn centroid(&self) -> BaryPoint {
        BaryPoint {
            x: (self.one.x + self.two.x + self.three.x) / 3.0,
            y: (self.one.y + self.two.y + self.three.y) / 3.0,
        }
    }

    fn signed_area(&self) -> f64 {
        let (a, b, c) = (self.one, self.two, self.three);
        0.5 * ((b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y))
    }

    fn combine(&self, w: [f64; 3]) -> BaryPoint {
        BaryPoint {
            x: w[0] * self.one.x + w[1] * self.two.x + w[2] * self.three.x,
            y: w[0] * self.one.y + w[1] * self.two.y + w[2] * self.three.y,
        }
    }
}

/// `(λ1 − λ2, 2λ2 − 2λ3, 3λ3 + 1)`, no realizability check.
pub fn barycentric_weights(l: &AnisotropyEigenvalues) -> [f64; 3] {
    let [l1, l2, l3] = l.values();
    [l1 - l2, 2.0 * (l2 - l3), 3.0 * l3 + 1.0]
}

fn check_weights(w: [f64; 3]) -> Result<[f64; 3]> {
    match w.iter().position(|&v| !(v >= -INTERIOR_TOL)) {
        Some(index) => Err(Error::Realizability {
            index: index + 1,
            weight: w[index],
        }),
        None => Ok(w),
    }
}

pub fn bary_from_eigenvalues(l: &AnisotropyEigenvalues, g: &TriangleGeometry) -> Result<BaryPoint> {
    let w = check_weights(barycentric_weights(l))?;
    Ok(g.combine(w))
}

/// Weights `(w1, w2, w3)` with `x = Σ wi · vertex_i` and `Σ wi = 1`.
pub fn triangle_weights(p: &BaryPoint, g: &TriangleGeometry) -> Result<[f64; 3]> {
    let (a, b, c) = (g.one, g.two, g.three);
    let (e1x, e1y) = (a.x - c.x, a.y - c.y);
    let (e2x, e2y) = (b.x - c.x, b.y - c.y);
    let (dx, dy) = (p.x - c.x, p.y - c.y);
    let det = e1x * e2y - e2x * e1y;
    if det.abs() <= 1e-14 || !det.is_finite() {
        return Err(Error::Geometry { area: 0.5 * det });
    }
    let w1 = (dx * e2y - e2x * dy) / det;
    let w2 = (e1x * dy - dx * e1y) / det;
    Ok([w1, w2, 1.0 - w1 - w2])
}

pub fn eigenvalues_from_bary(p: &BaryPoint, g: &TriangleGeometry) -> Result<AnisotropyEigenvalues> {
    let [w1, w2, w3] = check_weights(triangle_weights(p, g)?)?;
    let l3 = (w3 - 1.0) / 3.0;
    let l2 = l3 + 0.5 * w2;
    let l1 = l2 + w1;
    AnisotropyEigenvalues::new(l1, l2, l3)
}

/// Moves `p` a fraction `delta_b` of the way to the target vertex.
pub fn perturb_bary(
    p: &BaryPoint,
    target: ComponentTarget,
    delta_b: f64,
    g: &TriangleGeometry,
) -> Result<BaryPoint> {
    if !(0.0..=1.0).contains(&delta_b) {
        return Err(Error::InvalidMagnitude {
            name: "delta_b",
            value: delta_b,
        });
    }
    Ok(p.lerp(&g.vertex(target), delta_b))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: &BaryPoint, b: &BaryPoint, tol: f64) -> bool {
        a.distance(b) <= tol
    }

    #[test]
    fn limiting_states_map_to_vertices() {
        let g = TriangleGeometry::default();
        for t in ComponentTarget::ALL {
            let l = t.limiting_eigenvalues();
            let mut expected = [0.0; 3];
            expected[t.index() - 1] = 1.0;
            assert_eq!(barycentric_weights(&l), expected);
            assert!(close(
                &bary_from_eigenvalues(&l, &g).unwrap(),
                &g.vertex(t),
                1e-15
            ));
        }
    }

    #[test]
    fn vertex_inversion() {
        let g = TriangleGeometry::default();
        let one = eigenvalues_from_bary(&g.vertex(ComponentTarget::One), &g).unwrap();
        for (a, b) in one.values().iter().zip([2.0 / 3.0, -1.0 / 3.0, -1.0 / 3.0]) {
            assert!((a - b).abs() < 1e-15);
        }
        let three = eigenvalues_from_bary(&g.vertex(ComponentTarget::Three), &g).unwrap();
        assert!(three.values().iter().all(|v| v.abs() < 1e-15));
    }

    #[test]
    fn centroid_inversion() {
        // Weights (1/3, 1/3, 1/3): λ3 = (1/3 − 1)/3 = −2/9, λ2 = λ3 + 1/6 = −1/18,
        // λ1 = λ2 + 1/3 = 5/18.
        let g = TriangleGeometry::default();
        let l = eigenvalues_from_bary(&g.centroid(), &g).unwrap();
        let expected = [5.0 / 18.0, -1.0 / 18.0, -2.0 / 9.0];
        for (a, b) in l.values().iter().zip(expected) {
            assert!((a - b).abs() < 1e-15, "{a} vs {b}");
        }
        assert!(close(
            &bary_from_eigenvalues(&l, &g).unwrap(),
            &g.centroid(),
            1e-15
        ));
    }

    #[test]
    fn weights_examples() {
        let g = TriangleGeometry::default();
        let w = triangle_weights(&g.vertex(ComponentTarget::Two), &g).unwrap();
        assert_eq!(w, [0.0, 1.0, 0.0]);
        let w = triangle_weights(&g.centroid(), &g).unwrap();
        assert!(w.iter().all(|v| (v - 1.0 / 3.0).abs() < 1e-15));
        let one = g.vertex(ComponentTarget::One);
        let three = g.vertex(ComponentTarget::Three);
        let mid = BaryPoint::new(0.5 * (one.x + three.x), 0.5 * (one.y + three.y)).unwrap();
        let w = triangle_weights(&mid, &g).unwrap();
        for (a, b) in w.iter().zip([0.5, 0.0, 0.5]) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn perturbation_examples() {
        let g = TriangleGeometry::default();
        let c = g.centroid();
        assert_eq!(perturb_bary(&c, ComponentTarget::Two, 0.0, &g).unwrap(), c);
        assert_eq!(
            perturb_bary(&c, ComponentTarget::One, 1.0, &g).unwrap(),
            g.vertex(ComponentTarget::One)
        );
        let half = perturb_bary(&c, ComponentTarget::One, 0.5, &g).unwrap();
        let one = g.vertex(ComponentTarget::One);
        let mid = BaryPoint::new(0.5 * (c.x + one.x), 0.5 * (c.y + one.y)).unwrap();
        assert!(close(&half, &mid, 1e-15));
    }

    #[test]
    fn errors() {
        let g = TriangleGeometry::default();
        assert!(matches!(
            perturb_bary(&g.centroid(), ComponentTarget::One, 1.5, &g),
            Err(Error::InvalidMagnitude { .. })
        ));
        assert!(perturb_bary(&g.centroid(), ComponentTarget::One, f64::NAN, &g).is_err());

        let outside = BaryPoint::new(2.0, 2.0).unwrap();
        assert!(matches!(
            eigenvalues_from_bary(&outside, &g),
            Err(Error::Realizability { .. })
        ));

        // λ3 below −1/3 violates the third weight.
        let l = AnisotropyEigenvalues::new(0.3, 0.1, -0.4).unwrap();
        match bary_from_eigenvalues(&l, &g) {
            Err(Error::Realizability { index, weight }) => {
                assert_eq!(index, 3);
                assert!((weight + 0.2).abs() < 1e-12);
            }
            other => panic!("{other:?}"),
        }

        let p = BaryPoint::new(0.0, 0.0).unwrap();
        let q = BaryPoint::new(1.0, 1.0).unwrap();
        let r = BaryPoint::new(2.0, 2.0).unwrap();
        assert!(matches!(
            TriangleGeometry::new(p, q, r),
            Err(Error::Geometry { .. })
        ));
    }
}
