//! Fully developed turbulent channel flow in one dimension.
//!
//! Lengths are scaled by the channel half-height and velocities by the
//! friction velocity, so `ν = 1/Re_τ`, the driving pressure gradient is 1
//! and `u` is `u+` directly. The half channel `y ∈ [0, 1]` is solved with
//! no-slip at the wall and symmetry at the centerline:
//!
//! ```text
//! 0 = 1 + d/dy [ ν du/dy − R_xy ]
//! ```
//!
//! The closure is a mixing length with van Driest damping. Unknowns live on
//! grid nodes; viscosities and stresses live on the faces between them, so
//! the flux `(ν + ν_eff) Δu/h` is exact for a quadratic profile and the
//! laminar solution is reproduced to rounding.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use nalgebra::Matrix3;
use serde::{Deserialize, Serialize};

use crate::barycentric::ComponentTarget;
use crate::error::{Error, Result};
use crate::perturb::{
    boussinesq_stress, perturbed_stress, production, relax_stress, PerturbationSpec,
};
use crate::tensor::{anisotropy_from_stress, SymTensor3};
use crate::tolerances::K_FLOOR;

/// Relaxation applied to the eddy viscosity between outer iterations. It is
/// unrelated to the stress under-relaxation carried by [`PerturbationSpec`].
pub const NU_T_RELAXATION: f64 = 0.3;

/// First-cell height, in wall units, targeted by the automatic stretching.
pub const DEFAULT_FIRST_CELL_YPLUS: f64 = 0.5;

pub const MIN_CELLS: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelParams {
    pub re_tau: f64,
    pub cells: usize,
    /// Ratio between consecutive cell heights, wall outward. 1 is uniform.
    pub stretching: f64,
    pub kappa: f64,
    pub a_plus: f64,
    pub a1: f64,
    pub tolerance: f64,
    pub max_iterations: usize,
    /// Forces `ν_t = 0`.
    pub laminar: bool,
}

impl Default for ChannelParams {
    fn default() -> Self {
        Self::new(180.0, 128)
    }
}

impl ChannelParams {
    /// Standard constants with the stretching chosen for a first cell at
    /// [`DEFAULT_FIRST_CELL_YPLUS`].
    pub fn new(re_tau: f64, cells: usize) -> Self {
        let stretching = if re_tau > 0.0 && cells >= 1 {
            stretching_for_first_spacing(cells, DEFAULT_FIRST_CELL_YPLUS / re_tau)
        } else {
            1.0
        };
        Self {
            re_tau,
            cells,
            stretching,
            kappa: 0.41,
            a_plus: 26.0,
            a1: 0.31,
            tolerance: 1e-8,
            max_iterations: 20_000,
            laminar: false,
        }
    }

    pub fn nu(&self) -> f64 {
        1.0 / self.re_tau
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |name: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::InvalidArgument(format!(
                    "{name} must be positive, got {v}"
                )))
            }
        };
        positive("re_tau", self.re_tau)?;
        positive("kappa", self.kappa)?;
        positive("a_plus", self.a_plus)?;
        positive("a1", self.a1)?;
        positive("tolerance", self.tolerance)?;
        if self.max_iterations == 0 {
            return Err(Error::InvalidArgument(
                "max_iterations must be at least 1".into(),
            ));
        }
        Ok(())
    }
}

/// Largest ratio `r ≥ 1` whose geometric grid of `cells` cells on `[0, 1]`
/// starts with a cell no taller than `first`. Returns 1 when a uniform grid
/// already qualifies.
pub fn stretching_for_first_spacing(cells: usize, first: f64) -> f64 {
    let n = cells as f64;
    if 1.0 / n <= first {
        return 1.0;
    }
    let h1 = |r: f64| (r - 1.0) / (r.powf(n) - 1.0);
    let (mut lo, mut hi) = (1.0, 2.0);
    while h1(hi) > first {
        hi = 1.0 + 2.0 * (hi - 1.0);
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if h1(mid) > first {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    hi
}

/// Node coordinates `y_0 = 0 < … < y_N = 1`.
pub fn build_grid(params: &ChannelParams) -> Result<Vec<f64>> {
    let n = params.cells;
    if n < MIN_CELLS {
        return Err(Error::Grid(format!(
            "{n} cells, at least {MIN_CELLS} needed"
        )));
    }
    let r = params.stretching;
    if !(r >= 1.0 && r.is_finite()) {
        return Err(Error::Grid(format!(
            "stretching {r} must be finite and at least 1"
        )));
    }
    let first = if r == 1.0 {
        1.0 / n as f64
    } else {
        (r - 1.0) / (r.powi(n as i32) - 1.0)
    };
    if !(first > 0.0 && first.is_finite()) {
        return Err(Error::Grid(format!(
            "stretching {r} over {n} cells leaves no room for the first cell"
        )));
    }
    if params.re_tau > 0.0 && first * params.re_tau > 1.0 {
        log::warn!(
            "first cell height is {:.3} wall units; the viscous sublayer is under-resolved",
            first * params.re_tau
        );
    }

    let mut y = Vec::with_capacity(n + 1);
    y.push(0.0);
    let mut h = first;
    for _ in 0..n {
        let next = y.last().unwrap() + h;
        y.push(next);
        h *= r;
    }
    // Pin the centerline exactly; the accumulated sum is off by rounding.
    let scale = 1.0 / y[n];
    for v in &mut y {
        *v *= scale;
    }
    y[n] = 1.0;
    for w in y.windows(2) {
        if !(w[1] > w[0]) {
            return Err(Error::Grid(
                "node coordinates are not strictly increasing".into(),
            ));
        }
    }
    Ok(y)
}

/// Van Driest damped mixing-length viscosity
/// `(κ y (1 − e^{−y+/A+}))² |du/dy|`, with `y+ = y Re_τ`.
pub fn eddy_viscosity(y_plus: f64, du_dy: f64, params: &ChannelParams) -> f64 {
    if params.laminar || y_plus <= 0.0 {
        return 0.0;
    }
    let y = y_plus / params.re_tau;
    let l = params.kappa * y * (1.0 - (-y_plus / params.a_plus).exp());
    l * l * du_dy.abs()
}

/// Kinetic energy reconstructed from the shear stress, `k = ν_t |du/dy| / a1`,
/// floored at the degeneracy threshold.
fn closure_tke(nu_t: f64, du_dy: f64, params: &ChannelParams) -> f64 {
    (nu_t * du_dy.abs() / params.a1).max(K_FLOOR)
}

fn shear_strain(du_dy: f64) -> SymTensor3 {
    SymTensor3::new(0.0, 0.0, 0.0, 0.5 * du_dy, 0.0, 0.0).expect("finite gradient")
}

fn shear_gradient(du_dy: f64) -> Matrix3<f64> {
    let mut g = Matrix3::zeros();
    g[(0, 1)] = du_dy;
    g
}

/// Baseline and target stresses at one location.
struct LocalStress {
    nu_t: f64,
    k: f64,
    baseline: SymTensor3,
    target: SymTensor3,
}

/// Closure stress for a given `du/dy` and `ν_t` and, when a spec is given, its perturbed
/// target. A target that would drain energy from the mean flow (negative
/// production) cannot be sustained by the algebraic closure and collapses to
/// zero stress.
fn local_stress(
    du_dy: f64,
    nu_t: f64,
    spec: Option<&PerturbationSpec>,
    params: &ChannelParams,
) -> Result<LocalStress> {
    let k = closure_tke(nu_t, du_dy, params);
    let strain = shear_strain(du_dy);
    let baseline = if k > K_FLOOR {
        boussinesq_stress(k, nu_t, &strain)?
    } else {
        SymTensor3::zero()
    };
    let target = match spec {
        Some(spec) if k > K_FLOOR => {
            let (_, b) = anisotropy_from_stress(&baseline)?;
            let t = perturbed_stress(k, spec, &b, &strain)?;
            if production(&t, &shear_gradient(du_dy)) < 0.0 {
                SymTensor3::zero()
            } else {
                t
            }
        }
        _ => baseline,
    };
    Ok(LocalStress {
        nu_t,
        k: if k > K_FLOOR { k } else { 0.0 },
        baseline,
        target,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChannelSolution {
    pub params: ChannelParams,
    pub spec: Option<PerturbationSpec>,
    /// Node coordinates, wall to centerline.
    pub y: Vec<f64>,
    pub u: Vec<f64>,
    pub nu_t: Vec<f64>,
    pub k: Vec<f64>,
    /// Reynolds stress entering the momentum equation.
    pub stress: Vec<SymTensor3>,
    pub production: Vec<f64>,
    pub converged: bool,
    pub iterations: usize,
    pub residual_history: Vec<f64>,
}

impl ChannelSolution {
    /// `du/dy` at the nodes: one-sided second order at the wall, weighted
    /// central differences inside, zero at the centerline.
    pub fn velocity_gradient(&self) -> Vec<f64> {
        nodal_gradient(&self.y, &self.u)
    }

    /// Production the unperturbed closure would give on this solution's
    /// mean flow, `ν_t (du/dy)²`.
    pub fn closure_production(&self) -> Vec<f64> {
        self.velocity_gradient()
            .iter()
            .zip(&self.nu_t)
            .map(|(g, nu_t)| nu_t * g * g)
            .collect()
    }
}

pub fn solve_baseline(params: &ChannelParams) -> Result<ChannelSolution> {
    solve(params, None)
}

/// Solves with the perturbed stress injected into the momentum equation.
///
/// The active stress starts at the closure stress and is relaxed toward its
/// perturbed target by `spec.urlx` every outer iteration. Convergence
/// requires the momentum residual, the eddy-viscosity update and the gap
/// between active and target stress all to fall below the tolerance.
pub fn solve_perturbed(params: &ChannelParams, spec: &PerturbationSpec) -> Result<ChannelSolution> {
    PerturbationSpec::new(spec.component, spec.permute, spec.delta_b, spec.urlx)?;
    if spec.component == ComponentTarget::Three && spec.permute {
        log::info!("permuting eigenvectors has no effect on the isotropic target");
    }
    solve(params, Some(spec))
}

fn solve(params: &ChannelParams, spec: Option<&PerturbationSpec>) -> Result<ChannelSolution> {
    params.validate()?;
    let y = build_grid(params)?;
    let n = params.cells;
    let nu = params.nu();
    let h: Vec<f64> = y.windows(2).map(|w| w[1] - w[0]).collect();
    let y_face: Vec<f64> = y.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect();
    // Control-volume widths for nodes 1..=N; the centerline node owns half a cell.
    let width: Vec<f64> = (1..=n)
        .map(|i| {
            if i < n {
                0.5 * (h[i - 1] + h[i])
            } else {
                0.5 * h[n - 1]
            }
        })
        .collect();

    let mut u = initial_profile(&y, params);
    let mut grad = face_gradient(&u, &h);
    let mut nu_t: Vec<f64> = (0..n)
        .map(|f| eddy_viscosity(y_face[f] * params.re_tau, grad[f], params))
        .collect();
    let mut active: Vec<SymTensor3> = (0..n)
        .map(|f| local_stress(grad[f], nu_t[f], None, params).map(|s| s.baseline))
        .collect::<Result<_>>()?;

    let mut history = Vec::new();
    let mut converged = false;
    let mut iterations = 0;
    let mut nu_eff = vec![0.0; n];
    while iterations < params.max_iterations {
        iterations += 1;
        let mut mismatch: f64 = 0.0;
        for f in 0..n {
            let closure = eddy_viscosity(y_face[f] * params.re_tau, grad[f], params);
            mismatch = mismatch.max((closure - nu_t[f]).abs());
            nu_t[f] += NU_T_RELAXATION * (closure - nu_t[f]);

            let local = local_stress(grad[f], nu_t[f], spec, params)?;
            active[f] = match spec {
                Some(spec) => {
                    mismatch = mismatch.max(local.target.max_abs_diff(&active[f]));
                    relax_stress(&active[f], &local.target, spec.urlx)?
                }
                None => local.baseline,
            };
            nu_eff[f] = effective_viscosity(&active[f], grad[f], nu_t[f]);
        }

        let coeff: Vec<f64> = (0..n).map(|f| (nu + nu_eff[f]) / h[f]).collect();
        let residual = momentum_residual(&u, &coeff, &width);
        let combined = residual.max(mismatch);
        history.push(combined);
        if !combined.is_finite() {
            log::warn!("channel iteration diverged at step {iterations}");
            break;
        }
        if combined <= params.tolerance {
            converged = true;
            break;
        }
        u = solve_momentum(&coeff, &width);
        grad = face_gradient(&u, &h);
    }
    if !converged {
        log::warn!(
            "channel solve stopped after {iterations} iterations without converging (residual {:e})",
            history.last().copied().unwrap_or(f64::NAN)
        );
    }

    let node_grad = nodal_gradient(&y, &u);
    let mut node_nu_t = Vec::with_capacity(n + 1);
    let mut node_k = Vec::with_capacity(n + 1);
    let mut node_stress = Vec::with_capacity(n + 1);
    let mut node_production = Vec::with_capacity(n + 1);
    for (&yi, &g) in y.iter().zip(&node_grad) {
        let nut = eddy_viscosity(yi * params.re_tau, g, params);
        let local = local_stress(g, nut, spec, params)?;
        node_production.push(production(&local.target, &shear_gradient(g)));
        node_nu_t.push(local.nu_t);
        node_k.push(local.k);
        node_stress.push(local.target);
    }

    Ok(ChannelSolution {
        params: *params,
        spec: spec.copied(),
        y,
        u,
        nu_t: node_nu_t,
        k: node_k,
        stress: node_stress,
        production: node_production,
        converged,
        iterations,
        residual_history: history,
    })
}

/// Viscosity equivalent of the active shear stress, `−R_xy / (du/dy)`,
/// clipped at zero. Falls back to the closure value where the gradient
/// vanishes.
fn effective_viscosity(active: &SymTensor3, du_dy: f64, nu_t: f64) -> f64 {
    if du_dy.abs() <= f64::MIN_POSITIVE.sqrt() {
        return nu_t;
    }
    (-active.xy() / du_dy).max(0.0)
}

/// Equilibrium mixing-length profile: the local root of
/// `ν u' + l² u'² = 1 − y`, integrated from the wall.
fn initial_profile(y: &[f64], params: &ChannelParams) -> Vec<f64> {
    let nu = params.nu();
    let mut u = vec![0.0; y.len()];
    for i in 1..y.len() {
        let ym = 0.5 * (y[i - 1] + y[i]);
        let tau = 1.0 - ym;
        let l2 = eddy_viscosity(ym * params.re_tau, 1.0, params);
        let g = 2.0 * tau / (nu + (nu * nu + 4.0 * l2 * tau).sqrt());
        u[i] = u[i - 1] + g * (y[i] - y[i - 1]);
    }
    u
}

fn face_gradient(u: &[f64], h: &[f64]) -> Vec<f64> {
    h.iter()
        .enumerate()
        .map(|(f, h)| (u[f + 1] - u[f]) / h)
        .collect()
}

fn nodal_gradient(y: &[f64], u: &[f64]) -> Vec<f64> {
    let n = y.len() - 1;
    let mut g = vec![0.0; n + 1];
    let (h0, h1) = (y[1] - y[0], y[2] - y[1]);
    g[0] = -(2.0 * h0 + h1) / (h0 * (h0 + h1)) * u[0] + (h0 + h1) / (h0 * h1) * u[1]
        - h0 / (h1 * (h0 + h1)) * u[2];
    for i in 1..n {
        let (hm, hp) = (y[i] - y[i - 1], y[i + 1] - y[i]);
        let (gm, gp) = ((u[i] - u[i - 1]) / hm, (u[i + 1] - u[i]) / hp);
        g[i] = (hp * gm + hm * gp) / (hm + hp);
    }
    g
}

/// Max over nodes 1..=N of the per-volume imbalance
/// `(F_{i+1/2} − F_{i−1/2} + w_i) / w_i`.
fn momentum_residual(u: &[f64], coeff: &[f64], width: &[f64]) -> f64 {
    let n = coeff.len();
    let flux = |f: usize| {
        if f < n {
            coeff[f] * (u[f + 1] - u[f])
        } else {
            0.0
        }
    };
    (1..=n)
        .map(|i| ((flux(i) - flux(i - 1) + width[i - 1]) / width[i - 1]).abs())
        .fold(0.0, f64::max)
}

/// Solves the tridiagonal momentum system for `u_1..u_N` with `u_0 = 0`.
fn solve_momentum(coeff: &[f64], width: &[f64]) -> Vec<f64> {
    let n = coeff.len();
    // Row i (node i+1): lower·u_i + diag·u_{i+1} + upper·u_{i+2} = −w.
    let mut lower = vec![0.0; n];
    let mut diag = vec![0.0; n];
    let mut upper = vec![0.0; n];
    let mut rhs = vec![0.0; n];
    for row in 0..n {
        let west = coeff[row];
        let east = if row + 1 < n { coeff[row + 1] } else { 0.0 };
        lower[row] = west;
        diag[row] = -(west + east);
        upper[row] = east;
        rhs[row] = -width[row];
    }
    let x = thomas(&lower, &diag, &upper, &rhs);
    let mut u = Vec::with_capacity(n + 1);
    u.push(0.0);
    u.extend(x);
    u
}

/// Thomas algorithm. `lower[0]` and `upper[n-1]` are ignored.
fn thomas(lower: &[f64], diag: &[f64], upper: &[f64], rhs: &[f64]) -> Vec<f64> {
    let n = diag.len();
    let mut c = vec![0.0; n];
    let mut d = vec![0.0; n];
    c[0] = upper[0] / diag[0];
    d[0] = rhs[0] / diag[0];
    for i in 1..n {
        let m = diag[i] - lower[i] * c[i - 1];
        c[i] = upper[i] / m;
        d[i] = (rhs[i] - lower[i] * d[i - 1]) / m;
    }
    let mut x = vec![0.0; n];
    x[n - 1] = d[n - 1];
    for i in (0..n - 1).rev() {
        x[i] = d[i] - c[i] * x[i + 1];
    }
    x
}

/// Scalar outputs and the velocity profile of one run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QoiRecord {
    pub skin_friction: f64,
    pub bulk_velocity: f64,
    pub centerline_velocity: f64,
    pub wall_shear: f64,
    pub y: Vec<f64>,
    pub u: Vec<f64>,
    pub converged: bool,
}

impl QoiRecord {
    /// Named scalars in a fixed order.
    pub fn scalars(&self) -> [(&'static str, f64); 3] {
        [
            ("skin_friction", self.skin_friction),
            ("bulk_velocity", self.bulk_velocity),
            ("centerline_velocity", self.centerline_velocity),
        ]
    }
}

/// `C_f = 2 τ_w / U_b²` in wall units, with `U_b` the trapezoidal mean
/// over the half channel.
pub fn qoi_extract(sol: &ChannelSolution) -> QoiRecord {
    let nu = sol.params.nu();
    let wall_shear = nu * nodal_gradient(&sol.y, &sol.u)[0];
    let bulk: f64 = sol
        .y
        .windows(2)
        .zip(sol.u.windows(2))
        .map(|(y, u)| 0.5 * (u[0] + u[1]) * (y[1] - y[0]))
        .sum::<f64>()
        / (sol.y[sol.y.len() - 1] - sol.y[0]);
    QoiRecord {
        skin_friction: 2.0 * wall_shear / (bulk * bulk),
        bulk_velocity: bulk,
        centerline_velocity: *sol.u.last().unwrap(),
        wall_shear,
        y: sol.y.clone(),
        u: sol.u.clone(),
        converged: sol.converged,
    }
}

pub const SOLUTION_COLUMNS: [&str; 9] =
    ["y", "u", "nu_t", "k", "R_xx", "R_yy", "R_zz", "R_xy", "P"];

/// Plain-text export: one `#` header line of `key=value` pairs, then one
/// row per node with the columns of [`SOLUTION_COLUMNS`].
pub fn format_solution(sol: &ChannelSolution) -> String {
    let p = &sol.params;
    let mut out = format!(
        "# re_tau={:?} cells={} stretching={:?} kappa={:?} a_plus={:?} a1={:?} tolerance={:?} max_iterations={} laminar={}",
        p.re_tau, p.cells, p.stretching, p.kappa, p.a_plus, p.a1, p.tolerance, p.max_iterations, p.laminar
    );
    if let Some(s) = &sol.spec {
        let _ = write!(
            out,
            " component={} permute={} delta_b={:?} urlx={:?}",
            s.component.index(),
            s.permute,
            s.delta_b,
            s.urlx
        );
    }
    let _ = writeln!(
        out,
        " converged={} iterations={} columns={}",
        sol.converged,
        sol.iterations,
        SOLUTION_COLUMNS.join(",")
    );
    for i in 0..sol.y.len() {
        let r = &sol.stress[i];
        let row = [
            sol.y[i],
            sol.u[i],
            sol.nu_t[i],
            sol.k[i],
            r.xx(),
            r.yy(),
            r.zz(),
            r.xy(),
            sol.production[i],
        ];
        let cells: Vec<String> = row.iter().map(|v| format!("{v:.16e}")).collect();
        out.push_str(&cells.join(" "));
        out.push('\n');
    }
    out
}

pub fn write_solution(sol: &ChannelSolution, path: &Path) -> Result<()> {
    fs::write(path, format_solution(sol)).map_err(|e| Error::io(path, e))
}

pub fn read_solution(path: &Path) -> Result<ChannelSolution> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_solution(&text).map_err(|message| Error::Parse {
        path: path.to_path_buf(),
        message,
    })
}

pub fn parse_solution(text: &str) -> std::result::Result<ChannelSolution, String> {
    let mut lines = text.lines();
    let header = lines
        .next()
        .and_then(|l| l.strip_prefix('#'))
        .ok_or("missing '#' header line")?;
    let mut fields = std::collections::HashMap::new();
    for token in header.split_whitespace() {
        let (k, v) = token
            .split_once('=')
            .ok_or_else(|| format!("header token '{token}' is not key=value"))?;
        fields.insert(k, v);
    }
    fn get<T: std::str::FromStr>(
        fields: &std::collections::HashMap<&str, &str>,
        key: &str,
    ) -> std::result::Result<T, String> {
        fields
            .get(key)
            .ok_or_else(|| format!("header lacks '{key}'"))?
            .parse()
            .map_err(|_| format!("header value for '{key}' is malformed"))
    }
    if get::<String>(&fields, "columns")? != SOLUTION_COLUMNS.join(",") {
        return Err(format!("columns must be {}", SOLUTION_COLUMNS.join(",")));
    }
    let mut params = ChannelParams::new(get(&fields, "re_tau")?, get(&fields, "cells")?);
    for (key, slot) in [
        ("stretching", &mut params.stretching),
        ("kappa", &mut params.kappa),
        ("a_plus", &mut params.a_plus),
        ("a1", &mut params.a1),
        ("tolerance", &mut params.tolerance),
    ] {
        if fields.contains_key(key) {
            *slot = get(&fields, key)?;
        }
    }
    if fields.contains_key("max_iterations") {
        params.max_iterations = get(&fields, "max_iterations")?;
    }
    if fields.contains_key("laminar") {
        params.laminar = get(&fields, "laminar")?;
    }
    let spec = if fields.contains_key("component") {
        let component = ComponentTarget::from_index(get(&fields, "component")?)
            .ok_or("component must be 1, 2 or 3")?;
        Some(
            PerturbationSpec::new(
                component,
                get(&fields, "permute")?,
                get(&fields, "delta_b")?,
                get(&fields, "urlx")?,
            )
            .map_err(|e| e.to_string())?,
        )
    } else {
        None
    };

    let mut sol = ChannelSolution {
        params,
        spec,
        y: Vec::new(),
        u: Vec::new(),
        nu_t: Vec::new(),
        k: Vec::new(),
        stress: Vec::new(),
        production: Vec::new(),
        converged: get(&fields, "converged")?,
        iterations: get(&fields, "iterations")?,
        residual_history: Vec::new(),
    };
    for (lineno, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let row: Vec<f64> = line
            .split_whitespace()
            .map(str::parse)
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| format!("row {} has a malformed number", lineno + 1))?;
        if row.len() != SOLUTION_COLUMNS.len() {
            return Err(format!(
                "row {} has {} columns, expected {}",
                lineno + 1,
                row.len(),
                SOLUTION_COLUMNS.len()
            ));
        }
        sol.y.push(row[0]);
        sol.u.push(row[1]);
        sol.nu_t.push(row[2]);
        sol.k.push(row[3]);
        sol.stress.push(
            SymTensor3::new(row[4], row[5], row[6], row[7], 0.0, 0.0).map_err(|e| e.to_string())?,
        );
        sol.production.push(row[8]);
    }
    if sol.y.len() < 3 {
        return Err("fewer than three rows".into());
    }
    if sol.y.windows(2).any(|w| !(w[1] > w[0])) {
        return Err("y column is not strictly increasing".into());
    }
    Ok(sol)
}
