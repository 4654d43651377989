mod common;

use common::{cubic_roots, rotation, sym_tensor};
use equips_core::tensor::orthonormality_defect;
use equips_core::{symmetric_eigen, EigenFrame, SymTensor3};
use nalgebra::SymmetricEigen;
use proptest::prelude::*;

proptest! {
    #![proptest_config(common::cases(4000))]

    #[test]
    fn reconstructs_random_tensors(t in sym_tensor()) {
        let f = symmetric_eigen(&t);
        let err = f.reconstruct().max_abs_diff(&t);
        prop_assert!(err <= 1e-9 * t.max_abs().max(f64::MIN_POSITIVE), "err {err}");
        prop_assert!(orthonormality_defect(&f.vectors) < 1e-12);
        prop_assert!(f.values[0] >= f.values[1] && f.values[1] >= f.values[2]);
    }

    #[test]
    fn eigenvalues_match_cubic_roots(t in sym_tensor()) {
        let f = symmetric_eigen(&t);
        let roots = cubic_roots(&t.to_matrix());
        for (a, b) in f.values.iter().zip(roots) {
            prop_assert!((a - b).abs() <= 1e-8, "{:?} vs {:?}", f.values, roots);
        }
    }

    #[test]
    fn eigenvalues_match_nalgebra(t in sym_tensor()) {
        let f = symmetric_eigen(&t);
        let mut reference: Vec<f64> = SymmetricEigen::new(t.to_matrix()).eigenvalues.iter().copied().collect();
        reference.sort_by(|a, b| b.total_cmp(a));
        for (a, b) in f.values.iter().zip(&reference) {
            prop_assert!((a - b).abs() <= 1e-12);
        }
    }

    #[test]
    fn repeated_spectra_reconstruct(
        v in rotation(),
        a in -1.0f64..1.0,
        b in -1.0f64..1.0,
        which in 0usize..3,
    ) {
        let values = match which {
            0 => [a, a, b],
            1 => [a, b, b],
            _ => [a, a, a],
        };
        let mut sorted = values;
        sorted.sort_by(|x, y| y.total_cmp(x));
        let t = EigenFrame { values: sorted, vectors: v }.reconstruct();
        let f = symmetric_eigen(&t);
        prop_assert!(f.reconstruct().max_abs_diff(&t) <= 1e-12);
        prop_assert!(orthonormality_defect(&f.vectors) < 1e-12);
    }

    #[test]
    fn scale_equivariant(t in sym_tensor(), s in 1e-6f64..1e6) {
        let f = symmetric_eigen(&t);
        let g = symmetric_eigen(&t.scaled(s));
        for (a, b) in f.values.iter().zip(g.values) {
            prop_assert!((a * s - b).abs() <= 1e-12 * s);
        }
    }
}

#[test]
fn oracle_on_known_spectrum() {
    let t = SymTensor3::new(2.0, 2.0, 3.0, 1.0, 0.0, 0.0).unwrap();
    // Block [[2,1],[1,2]] has eigenvalues 3 and 1; z carries 3.
    let roots = cubic_roots(&t.to_matrix());
    assert!((roots[0] - 3.0).abs() < 1e-7);
    assert!((roots[2] - 1.0).abs() < 1e-12);
    let f = symmetric_eigen(&t);
    assert!((f.values[0] - 3.0).abs() < 1e-14);
    assert!((f.values[1] - 3.0).abs() < 1e-14);
    assert!((f.values[2] - 1.0).abs() < 1e-14);
}
