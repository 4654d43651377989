//! Model-form uncertainty for eddy-viscosity RANS closures by perturbing the
//! modeled Reynolds stress in its eigenspace.
//!
//! The crate is layered bottom-up:
//!
//! - [`tensor`] and [`eigen`]: symmetric 3×3 algebra and the
//!   `R = 2k (V Λ Vᵀ + I/3)` decomposition.
//! - [`barycentric`]: the realizability triangle and moves toward its
//!   limiting states.
//! - [`perturb`]: eigenvalue/eigenvector perturbation, under-relaxation and
//!   production diagnostics.
//! - [`channel`]: a 1D turbulent channel solver that injects perturbed
//!   stresses during its iterations.
//! - [`config`] and [`campaign`]: solver options, the five-run perturbation
//!   table and its execution.
//! - [`bounds`] and [`report`]: interval bounds, profile envelopes and
//!   variability fields.

#[cfg(test)]
macro_rules! assert_close {
    ($a:expr, $b:expr, $tol:expr) => {{
        let (a, b): (f64, f64) = ($a, $b);
        assert!((a - b).abs() <= $tol, "{a} vs {b} (tol {})", $tol);
    }};
}

pub mod barycentric;
pub mod bounds;
pub mod campaign;
pub mod channel;
pub mod config;
pub mod eigen;
pub mod error;
pub mod perturb;
pub mod report;
pub mod tensor;
pub mod tolerances;

pub use barycentric::{
    bary_from_eigenvalues, eigenvalues_from_bary, perturb_bary, triangle_weights, BaryPoint,
    ComponentTarget, TriangleGeometry,
};
pub use bounds::{
    aggregate_runs, field_variability, interval_bounds, profile_envelope, Aggregate, IntervalBound,
    Profile, ProfileEnvelope, VariabilityField,
};
pub use campaign::{
    plan_campaign, run_campaign, CampaignPlan, ChannelAdapter, ExecutionMode, ExternalAdapter,
    PlannedRun, RunResult, RunStatus, SolverAdapter, PERTURBATION_TABLE,
};
pub use channel::{
    build_grid, eddy_viscosity, qoi_extract, solve_baseline, solve_perturbed, ChannelParams,
    ChannelSolution, QoiRecord,
};
pub use config::{emit_config, parse_config, ConfigOverrides, UqConfig};
pub use eigen::symmetric_eigen;
pub use error::{Error, Result};
pub use perturb::{
    alignment_range, boussinesq_stress, perturb_eigenvalues, perturb_eigenvectors, perturb_field,
    perturbed_stress, production, relax_stress, strain_rate, PerturbationSpec, StrainFrame,
};
pub use report::{emit_report, ReportFormat};
pub use tensor::{
    anisotropy_from_stress, realizability_check, stress_from_eigen, turbulent_kinetic_energy,
    AnisotropyEigenvalues, EigenFrame, RealizabilityReport, SymTensor3,
};
