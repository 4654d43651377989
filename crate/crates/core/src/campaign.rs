//! Planning and running the five perturbed simulations (plus the baseline).

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Stdio};
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::barycentric::ComponentTarget;
use crate::channel::{
    qoi_extract, read_solution, solve_baseline, solve_perturbed, write_solution, ChannelParams,
    QoiRecord,
};
use crate::config::{emit_config, warn_low_urlx, ConfigOverrides, UqConfig};
use crate::error::{Error, Result};
use crate::perturb::PerturbationSpec;

pub const BASELINE: &str = "baseline";
pub const CONFIG_FILE: &str = "run.cfg";
pub const SOLUTION_FILE: &str = "solution.dat";
pub const LOG_FILE: &str = "solver.log";
pub const STDOUT_FILE: &str = "solver.stdout.log";
pub const STDERR_FILE: &str = "solver.stderr.log";

/// Name, `UQ_COMPONENT` and `UQ_PERMUTE` of the five perturbed runs.
pub const PERTURBATION_TABLE: [(&str, ComponentTarget, bool); 5] = [
    ("1c", ComponentTarget::One, false),
    ("2c", ComponentTarget::Two, false),
    ("3c", ComponentTarget::Three, false),
    ("p1c1", ComponentTarget::One, true),
    ("p1c2", ComponentTarget::Two, true),
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlannedRun {
    pub name: String,
    /// `None` for the unperturbed baseline.
    pub perturbation: Option<PerturbationSpec>,
    pub directory: PathBuf,
}

impl PlannedRun {
    /// Per-run configuration: the base options with this run's perturbation.
    pub fn overrides(&self) -> ConfigOverrides {
        match &self.perturbation {
            Some(p) => ConfigOverrides {
                using_uq: Some(true),
                component: Some(p.component),
                permute: Some(p.permute),
                urlx: Some(p.urlx),
                delta_b: Some(p.delta_b),
            },
            None => ConfigOverrides {
                using_uq: Some(false),
                ..Default::default()
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CampaignPlan {
    pub runs: Vec<PlannedRun>,
    pub root: PathBuf,
    pub parallelism: usize,
    pub base: UqConfig,
}

/// The Table-1 runs, preceded by the baseline when requested. `urlx` and
/// `delta_b` are taken from `config` for every perturbed run.
pub fn plan_campaign(
    config: &UqConfig,
    include_baseline: bool,
    n: usize,
    root: &Path,
) -> Result<CampaignPlan> {
    if n == 0 {
        return Err(Error::InvalidArgument(
            "parallelism must be at least 1".into(),
        ));
    }
    warn_low_urlx(config.urlx);
    let mut runs = Vec::with_capacity(6);
    if include_baseline {
        runs.push(PlannedRun {
            name: BASELINE.to_string(),
            perturbation: None,
            directory: root.join(BASELINE),
        });
    }
    for (name, component, permute) in PERTURBATION_TABLE {
        runs.push(PlannedRun {
            name: name.to_string(),
            perturbation: Some(PerturbationSpec::new(
                component,
                permute,
                config.delta_b,
                config.urlx,
            )?),
            directory: root.join(name),
        });
    }
    Ok(CampaignPlan {
        runs,
        root: root.to_path_buf(),
        parallelism: n,
        base: config.clone(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum RunStatus {
    Converged,
    NotConverged,
    Failed(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunResult {
    pub name: String,
    pub status: RunStatus,
    pub qoi: Option<QoiRecord>,
    pub artifacts: Vec<PathBuf>,
    pub duration: Duration,
}

impl RunResult {
    pub fn converged(&self) -> bool {
        self.status == RunStatus::Converged
    }

    pub fn failed(&self) -> bool {
        matches!(self.status, RunStatus::Failed(_))
    }
}

/// What a solver reports back for one run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub converged: bool,
    pub qoi: Option<QoiRecord>,
    pub artifacts: Vec<PathBuf>,
}

/// A backend able to execute one planned run inside its directory, where
/// `run.cfg` has already been written. Implementations are called from
/// several threads at once in parallel mode.
pub trait SolverAdapter: Sync {
    fn run(&self, run: &PlannedRun, config_path: &Path) -> std::result::Result<RunOutput, String>;
}

/// The in-process channel solver.
#[derive(Debug, Clone, Copy)]
pub struct ChannelAdapter {
    pub params: ChannelParams,
}

impl SolverAdapter for ChannelAdapter {
    fn run(&self, run: &PlannedRun, _config_path: &Path) -> std::result::Result<RunOutput, String> {
        let sol = match &run.perturbation {
            Some(spec) => solve_perturbed(&self.params, spec),
            None => solve_baseline(&self.params),
        }
        .map_err(|e| e.to_string())?;

        let solution = run.directory.join(SOLUTION_FILE);
        write_solution(&sol, &solution).map_err(|e| e.to_string())?;
        let log = run.directory.join(LOG_FILE);
        let mut text = format!(
            "run {}\nconverged {}\niterations {}\n",
            run.name, sol.converged, sol.iterations
        );
        for (i, r) in sol.residual_history.iter().enumerate() {
            text.push_str(&format!("{} {r:e}\n", i + 1));
        }
        fs::write(&log, text).map_err(|e| Error::io(&log, e).to_string())?;

        Ok(RunOutput {
            converged: sol.converged,
            qoi: Some(qoi_extract(&sol)),
            artifacts: vec![solution, log],
        })
    }
}

/// An external solver launched as `template` with `{config}` replaced by
/// the run's config path and `{np}` by the processor count.
///
/// A zero exit status counts as converged unless the run directory then
/// holds a `solution.dat` whose header says otherwise.
#[derive(Debug, Clone)]
pub struct ExternalAdapter {
    argv: Vec<String>,
    nprocs: usize,
}

impl ExternalAdapter {
    pub fn new(template: &str, nprocs: usize) -> Result<Self> {
        let argv = shlex::split(template)
            .ok_or_else(|| Error::Template(format!("unbalanced quoting in '{template}'")))?;
        if argv.is_empty() {
            return Err(Error::Template("empty command".into()));
        }
        if !argv.iter().any(|a| a.contains("{config}")) {
            return Err(Error::Template(format!(
                "'{template}' has no {{config}} placeholder"
            )));
        }
        Ok(Self { argv, nprocs })
    }

    pub fn command_line(&self, config_path: &Path) -> Vec<String> {
        let config = config_path.to_string_lossy();
        let np = self.nprocs.to_string();
        self.argv
            .iter()
            .map(|a| a.replace("{config}", &config).replace("{np}", &np))
            .collect()
    }
}

impl SolverAdapter for ExternalAdapter {
    fn run(&self, run: &PlannedRun, config_path: &Path) -> std::result::Result<RunOutput, String> {
        let argv = self.command_line(config_path);
        let dir = &run.directory;
        let out = dir.join(STDOUT_FILE);
        let err = dir.join(STDERR_FILE);
        let open = |p: &Path| fs::File::create(p).map_err(|e| Error::io(p, e).to_string());
        let status = Command::new(&argv[0])
            .args(&argv[1..])
            .current_dir(dir)
            .stdin(Stdio::null())
            .stdout(open(&out)?)
            .stderr(open(&err)?)
            .status()
            .map_err(|e| format!("launch error: cannot start '{}': {e}", argv[0]))?;
        if !status.success() {
            return Err(format!(
                "solver exited with {status}; see {}",
                err.display()
            ));
        }

        let mut artifacts = vec![out, err];
        let solution = dir.join(SOLUTION_FILE);
        let (converged, qoi) = if solution.is_file() {
            let sol = read_solution(&solution).map_err(|e| e.to_string())?;
            artifacts.push(solution);
            (sol.converged, Some(qoi_extract(&sol)))
        } else {
            (true, None)
        };
        Ok(RunOutput {
            converged,
            qoi,
            artifacts,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExecutionMode {
    Sequential,
    /// Runs concurrently on the plan's `parallelism` workers.
    Parallel,
}

/// Creates every run directory and config, then executes the runs. A run
/// that fails is recorded and does not stop the others. Results come back
/// in plan order in both modes.
pub fn run_campaign(
    plan: &CampaignPlan,
    solver: &dyn SolverAdapter,
    mode: ExecutionMode,
) -> Result<Vec<RunResult>> {
    fs::create_dir_all(&plan.root).map_err(|e| Error::io(&plan.root, e))?;
    let mut configs = Vec::with_capacity(plan.runs.len());
    for run in &plan.runs {
        fs::create_dir_all(&run.directory).map_err(|e| Error::io(&run.directory, e))?;
        let path = run.directory.join(CONFIG_FILE);
        fs::write(&path, emit_config(&plan.base, &run.overrides()))
            .map_err(|e| Error::io(&path, e))?;
        configs.push(path);
    }

    let execute = |(run, config): (&PlannedRun, &PathBuf)| {
        let start = Instant::now();
        log::info!("starting run {}", run.name);
        let outcome = solver.run(run, config);
        let duration = start.elapsed();
        let (status, qoi, mut artifacts) = match outcome {
            Ok(o) => {
                let status = if o.converged {
                    RunStatus::Converged
                } else {
                    log::warn!("run {} did not converge", run.name);
                    RunStatus::NotConverged
                };
                (status, o.qoi, o.artifacts)
            }
            Err(message) => {
                log::error!("run {} failed: {message}", run.name);
                (RunStatus::Failed(message), None, Vec::new())
            }
        };
        artifacts.insert(0, config.clone());
        RunResult {
            name: run.name.clone(),
            status,
            qoi,
            artifacts,
            duration,
        }
    };

    let jobs: Vec<_> = plan.runs.iter().zip(&configs).collect();
    let results = match mode {
        ExecutionMode::Sequential => jobs.into_iter().map(execute).collect(),
        ExecutionMode::Parallel => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(plan.parallelism)
                .build()
                .map_err(|e| Error::InvalidArgument(format!("cannot start worker pool: {e}")))?;
            pool.install(|| jobs.into_par_iter().map(execute).collect())
        }
    };
    Ok(results)
}

pub const CHANNEL_RE_TAU: &str = "CHANNEL_RE_TAU";
pub const CHANNEL_CELLS: &str = "CHANNEL_CELLS";
pub const CHANNEL_STRETCHING: &str = "CHANNEL_STRETCHING";
pub const CHANNEL_TOLERANCE: &str = "CHANNEL_TOLERANCE";
pub const CHANNEL_MAX_ITERATIONS: &str = "CHANNEL_MAX_ITERATIONS";
pub const CHANNEL_LAMINAR: &str = "CHANNEL_LAMINAR";

/// Channel settings read from the pass-through keys. Missing keys keep the
/// defaults; the stretching is re-derived from `Re_τ` and the cell count
/// unless given explicitly.
pub fn channel_params_from_config(cfg: &UqConfig) -> Result<ChannelParams> {
    fn value<T: std::str::FromStr>(cfg: &UqConfig, key: &str) -> Result<Option<T>> {
        cfg.get(key)
            .map(|v| {
                v.parse()
                    .map_err(|_| Error::InvalidArgument(format!("{key} has malformed value '{v}'")))
            })
            .transpose()
    }
    let defaults = ChannelParams::default();
    let re_tau = value(cfg, CHANNEL_RE_TAU)?.unwrap_or(defaults.re_tau);
    let cells = value(cfg, CHANNEL_CELLS)?.unwrap_or(defaults.cells);
    let mut p = ChannelParams::new(re_tau, cells);
    if let Some(s) = value(cfg, CHANNEL_STRETCHING)? {
        p.stretching = s;
    }
    if let Some(t) = value(cfg, CHANNEL_TOLERANCE)? {
        p.tolerance = t;
    }
    if let Some(m) = value(cfg, CHANNEL_MAX_ITERATIONS)? {
        p.max_iterations = m;
    }
    if let Some(v) = cfg.get(CHANNEL_LAMINAR) {
        p.laminar = match v.to_ascii_uppercase().as_str() {
            "YES" => true,
            "NO" => false,
            _ => {
                return Err(Error::InvalidArgument(format!(
                    "{CHANNEL_LAMINAR} expects YES or NO, found '{v}'"
                )))
            }
        };
    }
    p.validate()?;
    Ok(p)
}

/// Every subdirectory of `root` holding a solution export, the standard
/// run names first in campaign order, then any others alphabetically.
pub fn discover_runs(root: &Path) -> Result<Vec<(String, PathBuf)>> {
    let entries = fs::read_dir(root).map_err(|e| Error::io(root, e))?;
    let mut found = Vec::new();
    for entry in entries {
        let entry = entry.map_err(|e| Error::io(root, e))?;
        let file = entry.path().join(SOLUTION_FILE);
        if file.is_file() {
            found.push((entry.file_name().to_string_lossy().into_owned(), file));
        }
    }
    let rank = |name: &str| {
        std::iter::once(BASELINE)
            .chain(PERTURBATION_TABLE.iter().map(|r| r.0))
            .position(|n| n == name)
            .unwrap_or(usize::MAX)
    };
    found.sort_by(|a, b| rank(&a.0).cmp(&rank(&b.0)).then_with(|| a.0.cmp(&b.0)));
    Ok(found)
}
