use equips_core::channel::format_solution;
use equips_core::{
    qoi_extract, realizability_check, solve_baseline, solve_perturbed, ChannelParams,
    ChannelSolution, ComponentTarget, PerturbationSpec,
};

fn full(c: ComponentTarget, permute: bool) -> PerturbationSpec {
    PerturbationSpec::new(c, permute, 1.0, 0.1).unwrap()
}

/// Least-squares slope of u+ against ln y+ over nodes with 30 ≤ y+ ≤ 100.
fn log_slope(sol: &ChannelSolution) -> f64 {
    let pts: Vec<(f64, f64)> = sol
        .y
        .iter()
        .zip(&sol.u)
        .map(|(y, u)| (y * sol.params.re_tau, *u))
        .filter(|(yp, _)| (30.0..=100.0).contains(yp))
        .map(|(yp, u)| (yp.ln(), u))
        .collect();
    assert!(pts.len() >= 5);
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

#[test]
fn grid_convergence() {
    let coarse = qoi_extract(&solve_baseline(&ChannelParams::new(180.0, 128)).unwrap());
    let fine = qoi_extract(&solve_baseline(&ChannelParams::new(180.0, 256)).unwrap());
    let change = (coarse.centerline_velocity / fine.centerline_velocity - 1.0).abs();
    assert!(change < 0.01, "{change}");
}

#[test]
fn log_region_slope() {
    let p = ChannelParams::new(180.0, 128);
    let s = log_slope(&solve_baseline(&p).unwrap());
    let reference = log_slope(&solve_baseline(&ChannelParams::new(180.0, 1024)).unwrap());
    let inv_kappa = 1.0 / p.kappa;
    assert!((s / inv_kappa - 1.0).abs() <= 0.15, "slope {s}");
    assert!(
        (reference / inv_kappa - 1.0).abs() <= 0.15,
        "reference {reference}"
    );
    assert!((s / reference - 1.0).abs() <= 0.05);
}

#[test]
fn laminar_friction_law() {
    for re_tau in [50.0, 180.0, 395.0] {
        let p = ChannelParams {
            laminar: true,
            ..ChannelParams::new(re_tau, 128)
        };
        let q = qoi_extract(&solve_baseline(&p).unwrap());
        let re_bulk = q.bulk_velocity * re_tau;
        assert!((q.skin_friction * re_bulk / 6.0 - 1.0).abs() < 0.02);
        assert!((q.centerline_velocity / (0.5 * re_tau) - 1.0).abs() < 0.01);
    }
}

#[test]
fn all_runs_emit_realizable_stress() {
    let p = ChannelParams::new(180.0, 64);
    let mut sols = vec![solve_baseline(&p).unwrap()];
    for c in ComponentTarget::ALL {
        for permute in [false, true] {
            sols.push(solve_perturbed(&p, &full(c, permute)).unwrap());
        }
    }
    for s in &sols {
        assert!(s.converged);
        assert_eq!(s.u[0], 0.0);
        for r in &s.stress {
            assert!(realizability_check(r).realizable, "{r:?}");
        }
    }
}

#[test]
fn production_bracket_under_shear() {
    let p = ChannelParams::new(180.0, 128);
    let one = solve_perturbed(&p, &full(ComponentTarget::One, false)).unwrap();
    let three = solve_perturbed(&p, &full(ComponentTarget::Three, false)).unwrap();
    let closure = one.closure_production();
    let n = one.y.len();
    for i in 1..n - 1 {
        assert!(one.production[i] > closure[i], "cell {i}");
        assert!((one.production[i] / closure[i] - 1.0 / p.a1).abs() < 1e-9);
        assert_eq!(three.production[i], 0.0);
    }
}

#[test]
fn perturbation_ordering() {
    let p = ChannelParams::default();
    let base = qoi_extract(&solve_baseline(&p).unwrap());
    let q = |c, perm| qoi_extract(&solve_perturbed(&p, &full(c, perm)).unwrap());
    let one = q(ComponentTarget::One, false);
    let two = q(ComponentTarget::Two, false);
    let three = q(ComponentTarget::Three, false);
    assert!(three.bulk_velocity > base.bulk_velocity);
    assert!(three.centerline_velocity > base.centerline_velocity);
    assert!(one.centerline_velocity < two.centerline_velocity);
    assert!(two.centerline_velocity < base.centerline_velocity);
    // Isotropic stress carries no shear: the profile is laminar.
    assert!((three.centerline_velocity / 90.0 - 1.0).abs() < 1e-6);
}

#[test]
fn identical_inputs_give_identical_exports() {
    let p = ChannelParams::new(395.0, 48);
    let spec = PerturbationSpec::new(ComponentTarget::Two, false, 0.6, 0.3).unwrap();
    let a = solve_perturbed(&p, &spec).unwrap();
    let b = solve_perturbed(&p, &spec).unwrap();
    assert_eq!(format_solution(&a), format_solution(&b));
    assert_eq!(qoi_extract(&a), qoi_extract(&b));
}
