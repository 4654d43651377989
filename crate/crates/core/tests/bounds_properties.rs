mod common;

use equips_core::{field_variability, interval_bounds, profile_envelope, Profile};
use proptest::prelude::*;

fn named_values() -> impl Strategy<Value = Vec<(String, f64)>> {
    prop::collection::vec(-1e3f64..1e3, 2..8).prop_map(|v| {
        v.into_iter()
            .enumerate()
            .map(|(i, x)| (format!("run{i}"), x))
            .collect()
    })
}

fn profile() -> impl Strategy<Value = Profile> {
    prop::collection::vec((0.01f64..1.0, -10.0f64..10.0), 2..12).prop_map(|steps| {
        let mut x = vec![0.0];
        let mut y = vec![steps[0].1];
        for (dx, v) in &steps[1..] {
            x.push(x.last().unwrap() + dx);
            y.push(*v);
        }
        let end = *x.last().unwrap();
        let x: Vec<f64> = x.iter().map(|v| v / end).collect();
        Profile::new(x, y).unwrap()
    })
}

fn fields() -> impl Strategy<Value = Vec<Vec<f64>>> {
    (1usize..20, 1usize..7).prop_flat_map(|(cells, n)| {
        prop::collection::vec(prop::collection::vec(-100.0f64..100.0, cells), n)
    })
}

proptest! {
    #![proptest_config(common::cases(1000))]

    #[test]
    fn intervals_ignore_input_order(values in named_values(), seed in any::<u64>()) {
        let base = values[0].0.clone();
        let a = interval_bounds("q", &values, &base).unwrap();
        let mut shuffled = values.clone();
        let n = shuffled.len();
        let mut s = seed;
        for i in (1..n).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            shuffled.swap(i, (s >> 33) as usize % (i + 1));
        }
        prop_assert_eq!(&a, &interval_bounds("q", &shuffled, &base).unwrap());
        prop_assert!(a.lower <= a.baseline && a.baseline <= a.upper);
    }

    #[test]
    fn subsets_never_widen(values in named_values(), keep in prop::collection::vec(any::<bool>(), 8)) {
        let base = values[0].0.clone();
        let full = interval_bounds("q", &values, &base).unwrap();
        let mut subset: Vec<_> = values.iter().enumerate().filter(|(i, _)| *i == 0 || keep[*i]).map(|(_, v)| v.clone()).collect();
        if subset.len() < 2 {
            subset.push(values[1].clone());
        }
        let part = interval_bounds("q", &subset, &base).unwrap();
        prop_assert!(full.lower <= part.lower && part.upper <= full.upper);
    }

    #[test]
    fn envelope_union_is_monotone(ps in prop::collection::vec(profile(), 1..6), extra in profile(), grid in prop::collection::vec(0.0f64..=1.0, 1..30)) {
        let named: Vec<(String, Profile)> = ps.into_iter().enumerate().map(|(i, p)| (format!("r{i}"), p)).collect();
        let before = profile_envelope(&named, &grid).unwrap();
        let mut more = named.clone();
        more.push(("extra".into(), extra));
        let after = profile_envelope(&more, &grid).unwrap();
        for i in 0..grid.len() {
            prop_assert!(after.lower[i] <= before.lower[i] && after.upper[i] >= before.upper[i]);
            prop_assert!(before.lower[i] <= before.upper[i]);
            for r in &after.runs {
                prop_assert!(r.values[i] >= after.lower[i] - 1e-12 && r.values[i] <= after.upper[i] + 1e-12);
            }
        }
    }

    #[test]
    fn variability_laws(fs in fields(), c in -50.0f64..50.0, a in -5.0f64..5.0) {
        let v = field_variability(&fs).unwrap().values;
        let shifted: Vec<Vec<f64>> = fs.iter().map(|f| f.iter().map(|x| x + c).collect()).collect();
        let scaled: Vec<Vec<f64>> = fs.iter().map(|f| f.iter().map(|x| a * x).collect()).collect();
        let vs = field_variability(&shifted).unwrap().values;
        let va = field_variability(&scaled).unwrap().values;
        for i in 0..v.len() {
            prop_assert!(v[i] >= 0.0);
            prop_assert!((vs[i] - v[i]).abs() <= 1e-9 * (1.0 + v[i] + c.abs()));
            prop_assert!((va[i] - a.abs() * v[i]).abs() <= 1e-12 * (1.0 + v[i]) * (1.0 + a.abs()));
            let agree = fs.iter().all(|f| f[i] == fs[0][i]);
            prop_assert_eq!(v[i] == 0.0, agree);
        }
    }
}
