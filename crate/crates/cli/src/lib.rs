//! The `equips` command line.
//!
//! Exit codes: 0 success, 1 at least one run failed or did not converge,
//! 2 usage, configuration or input errors.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use equips_core::campaign::{
    channel_params_from_config, discover_runs, RunOutput, BASELINE, CONFIG_FILE,
    PERTURBATION_TABLE, SOLUTION_FILE,
};
use equips_core::channel::read_solution;
use equips_core::{
    aggregate_runs, emit_config, emit_report, parse_config, plan_campaign, qoi_extract,
    run_campaign, Aggregate, ChannelAdapter, ChannelParams, ComponentTarget, ConfigOverrides,
    Error, ExecutionMode, ExternalAdapter, PerturbationSpec, PlannedRun, QoiRecord, ReportFormat,
    RunResult, SolverAdapter, UqConfig,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_RUN_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "equips",
    version,
    about = "Eigenspace perturbation uncertainty campaigns for RANS closures"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the baseline and the five perturbed simulations, then aggregate.
    Uncertainty(UncertaintyArgs),
    /// Run the one perturbation described by the config file.
    Single(SingleArgs),
    /// Build bounds from existing run directories.
    Aggregate(AggregateArgs),
    /// Full channel-flow campaign with built-in settings.
    Demo(DemoArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Json,
    Csv,
    PlotData,
    All,
}

impl FormatArg {
    fn formats(self) -> Vec<ReportFormat> {
        match self {
            Self::Json => vec![ReportFormat::Json],
            Self::Csv => vec![ReportFormat::Csv],
            Self::PlotData => vec![ReportFormat::PlotData],
            Self::All => vec![
                ReportFormat::Json,
                ReportFormat::Csv,
                ReportFormat::PlotData,
            ],
        }
    }
}

fn unit_interval(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|_| format!("'{s}' is not a number"))?;
    if (0.0..=1.0).contains(&v) {
        Ok(v)
    } else {
        Err(format!("{v} is outside [0, 1]"))
    }
}

fn at_least_one(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(n) if n >= 1 => Ok(n),
        _ => Err(format!("'{s}' is not a positive integer")),
    }
}

/// The perturbation flags shared by the campaign commands.
#[derive(Debug, Clone, Args)]
pub struct PerturbationFlags {
    /// Stress under-relaxation factor in [0, 1]; overrides UQ_URLX.
    #[arg(short = 'u', long = "urlx", value_parser = unit_interval)]
    pub urlx: Option<f64>,
    /// Perturbation magnitude in [0, 1]; overrides UQ_DELTA_B.
    #[arg(short = 'b', long = "delta-b", value_parser = unit_interval)]
    pub delta_b: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct UncertaintyArgs {
    /// Solver configuration file.
    #[arg(short = 'f', long = "config")]
    pub config: PathBuf,
    /// Parallel workers for the built-in solver, `{np}` for external ones.
    #[arg(short = 'n', long = "nprocs", default_value = "1", value_parser = at_least_one)]
    pub nprocs: usize,
    #[command(flatten)]
    pub perturbation: PerturbationFlags,
    #[arg(long, default_value = "equips_out")]
    pub output_root: PathBuf,
    /// External solver command, e.g. "mpirun -n {np} SU2_CFD {config}".
    #[arg(long)]
    pub solver_cmd: Option<String>,
    /// Skip the baseline run; an existing baseline export is reused if present.
    #[arg(long)]
    pub no_baseline: bool,
    #[arg(long, value_enum, default_value = "all")]
    pub format: FormatArg,
    /// Leave unconverged runs out of the bounds.
    #[arg(long)]
    pub exclude_unconverged: bool,
}

#[derive(Debug, Clone, Args)]
pub struct SingleArgs {
    #[arg(short = 'f', long = "config")]
    pub config: PathBuf,
    #[arg(short = 'n', long = "nprocs", default_value = "1", value_parser = at_least_one)]
    pub nprocs: usize,
    #[command(flatten)]
    pub perturbation: PerturbationFlags,
    #[arg(long, default_value = "equips_out")]
    pub output_root: PathBuf,
    #[arg(long)]
    pub solver_cmd: Option<String>,
}

#[derive(Debug, Clone, Args)]
pub struct AggregateArgs {
    /// Directory holding one subdirectory per run.
    #[arg(long, default_value = "equips_out")]
    pub output_root: PathBuf,
    #[arg(long, default_value = BASELINE)]
    pub baseline: String,
    #[arg(long, value_enum, default_value = "all")]
    pub format: FormatArg,
    #[arg(long)]
    pub exclude_unconverged: bool,
}

#[derive(Debug, Clone, Args)]
pub struct DemoArgs {
    #[arg(long, default_value = "180")]
    pub retau: f64,
    #[arg(long, default_value = "128", value_parser = at_least_one)]
    pub cells: usize,
    /// 32 cells instead of `--cells`.
    #[arg(long)]
    pub quick: bool,
    #[arg(short = 'n', long = "nprocs", default_value = "1", value_parser = at_least_one)]
    pub nprocs: usize,
    #[command(flatten)]
    pub perturbation: PerturbationFlags,
    #[arg(long, default_value = "equips_out")]
    pub output_root: PathBuf,
}

/// A failure with its exit code.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Io { .. } => EXIT_RUN_FAILURE,
            _ => EXIT_USAGE,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

/// Parses `args` (program name first) and runs the command, writing the
/// human-readable summary to `out`. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}", e.message);
            e.code
        }
    }
}

pub fn execute(command: &Command, out: &mut dyn Write) -> Result<i32, CliError> {
    match command {
        Command::Uncertainty(a) => cmd_uncertainty(a, out),
        Command::Single(a) => cmd_single(a, out),
        Command::Aggregate(a) => cmd_aggregate(a, out),
        Command::Demo(a) => cmd_demo(a, out),
    }
}

fn load_config(path: &Path) -> Result<UqConfig, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::usage(format!("cannot read config {}: {e}", path.display())))?;
    parse_config(&text).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))
}

/// Applies `-u`/`-b` on top of the config, warning when a value from the
/// file is replaced.
fn apply_flags(cfg: &UqConfig, flags: &PerturbationFlags) -> UqConfig {
    for (name, flag, current) in [
        ("UQ_URLX", flags.urlx, cfg.urlx),
        ("UQ_DELTA_B", flags.delta_b, cfg.delta_b),
    ] {
        if let Some(v) = flag {
            if v != current {
                log::warn!("command-line value {v} overrides {name}= {current}");
            }
        }
    }
    cfg.with_overrides(&ConfigOverrides {
        urlx: flags.urlx,
        delta_b: flags.delta_b,
        ..Default::default()
    })
}

fn adapter_for(
    cfg: &UqConfig,
    solver_cmd: Option<&str>,
    nprocs: usize,
) -> Result<(Box<dyn SolverAdapter>, ExecutionMode), CliError> {
    Ok(match solver_cmd {
        Some(template) => (
            Box::new(ExternalAdapter::new(template, nprocs)?),
            ExecutionMode::Sequential,
        ),
        None => {
            let params = channel_params_from_config(cfg)?;
            let mode = if nprocs > 1 {
                ExecutionMode::Parallel
            } else {
                ExecutionMode::Sequential
            };
            (Box::new(ChannelAdapter { params }), mode)
        }
    })
}

fn write_run_summary(results: &[RunResult], out: &mut dyn Write) {
    let _ = writeln!(
        out,
        "{:<10} {:<14} {:>14} {:>14} {:>14}",
        "run", "status", "C_f", "U_bulk", "U_center"
    );
    for r in results {
        let status = match &r.status {
            equips_core::RunStatus::Converged => "converged".to_string(),
            equips_core::RunStatus::NotConverged => "not converged".to_string(),
            equips_core::RunStatus::Failed(_) => "FAILED".to_string(),
        };
        match &r.qoi {
            Some(q) => {
                let _ = writeln!(
                    out,
                    "{:<10} {:<14} {:>14.6e} {:>14.6} {:>14.6}",
                    r.name, status, q.skin_friction, q.bulk_velocity, q.centerline_velocity
                );
            }
            None => {
                let _ = writeln!(out, "{:<10} {:<14}", r.name, status);
            }
        }
        if let equips_core::RunStatus::Failed(m) = &r.status {
            let _ = writeln!(out, "           {m}");
        }
    }
}

fn write_intervals(agg: &Aggregate, out: &mut dyn Write) {
    for b in &agg.intervals {
        let _ = writeln!(
            out,
            "{:<20} [{:.6e}, {:.6e}]  baseline {:.6e}  ({} .. {})",
            b.qoi, b.lower, b.upper, b.baseline, b.lower_run, b.upper_run
        );
    }
}

fn emit_all(
    agg: &Aggregate,
    format: FormatArg,
    dir: &Path,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    for f in format.formats() {
        for path in emit_report(agg, f, dir)? {
            let _ = writeln!(out, "wrote {}", path.display());
        }
    }
    Ok(())
}

pub fn cmd_uncertainty(a: &UncertaintyArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let cfg = apply_flags(&load_config(&a.config)?, &a.perturbation);
    let (adapter, mode) = adapter_for(&cfg, a.solver_cmd.as_deref(), a.nprocs)?;
    let plan = plan_campaign(&cfg, !a.no_baseline, a.nprocs, &a.output_root)?;
    let results = run_campaign(&plan, adapter.as_ref(), mode)?;
    write_run_summary(&results, out);

    let mut qois: Vec<(String, QoiRecord)> = results
        .iter()
        .filter_map(|r| r.qoi.clone().map(|q| (r.name.clone(), q)))
        .collect();
    if a.no_baseline {
        let existing = a.output_root.join(BASELINE).join(SOLUTION_FILE);
        if existing.is_file() {
            qois.insert(
                0,
                (
                    BASELINE.to_string(),
                    qoi_extract(&read_solution(&existing)?),
                ),
            );
        }
    }
    let all_ok = results.iter().all(RunResult::converged);
    if qois.iter().any(|(n, _)| n == BASELINE) && qois.len() >= 2 {
        let agg = aggregate_runs(&qois, BASELINE, a.exclude_unconverged)?;
        write_intervals(&agg, out);
        emit_all(&agg, a.format, &a.output_root, out)?;
    } else {
        log::warn!("no baseline and perturbed solution exports to aggregate; no report written");
    }
    Ok(if all_ok { EXIT_OK } else { EXIT_RUN_FAILURE })
}

/// Directory name for one perturbation, following the campaign table.
pub fn run_name(component: ComponentTarget, permute: bool) -> String {
    PERTURBATION_TABLE
        .iter()
        .find(|(_, c, p)| *c == component && *p == permute)
        .map(|(n, _, _)| n.to_string())
        .unwrap_or_else(|| {
            if permute {
                format!("p1c{}", component.index())
            } else {
                format!("{}c", component.index())
            }
        })
}

pub fn cmd_single(a: &SingleArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let cfg = apply_flags(&load_config(&a.config)?, &a.perturbation);
    if !cfg.using_uq {
        return Err(CliError::usage(
            "USING_UQ= NO: the config does not request a perturbation; set USING_UQ= YES together with UQ_COMPONENT and UQ_PERMUTE",
        ));
    }
    if cfg.component == ComponentTarget::Three && cfg.permute {
        log::warn!("note: UQ_PERMUTE= YES is superfluous with UQ_COMPONENT= 3, the isotropic state has no preferred axes");
    }
    let spec = PerturbationSpec::new(cfg.component, cfg.permute, cfg.delta_b, cfg.urlx)?;
    let name = run_name(cfg.component, cfg.permute);
    let run = PlannedRun {
        name: name.clone(),
        perturbation: Some(spec),
        directory: a.output_root.join(&name),
    };
    let io = |path: &Path, e: std::io::Error| {
        CliError::from(Error::Io {
            path: path.to_path_buf(),
            source: e,
        })
    };
    fs::create_dir_all(&run.directory).map_err(|e| io(&run.directory, e))?;
    let config_path = run.directory.join(CONFIG_FILE);
    fs::write(&config_path, emit_config(&cfg, &run.overrides()))
        .map_err(|e| io(&config_path, e))?;

    let outcome: Result<RunOutput, String> = match &a.solver_cmd {
        Some(t) => ExternalAdapter::new(t, a.nprocs)?.run(&run, &config_path),
        None => {
            let params = channel_params_from_config(&cfg)?;
            ChannelAdapter { params }.run(&run, &config_path)
        }
    };
    match outcome {
        Ok(o) => {
            let _ = writeln!(
                out,
                "{name}: {} ({})",
                if o.converged {
                    "converged"
                } else {
                    "not converged"
                },
                run.directory.display()
            );
            if let Some(q) = o.qoi {
                let _ = writeln!(
                    out,
                    "C_f {:.6e}  U_bulk {:.6}  U_center {:.6}",
                    q.skin_friction, q.bulk_velocity, q.centerline_velocity
                );
            }
            Ok(if o.converged {
                EXIT_OK
            } else {
                EXIT_RUN_FAILURE
            })
        }
        Err(m) => {
            let _ = writeln!(out, "{name}: FAILED: {m}");
            Ok(EXIT_RUN_FAILURE)
        }
    }
}

pub fn cmd_aggregate(a: &AggregateArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let found = discover_runs(&a.output_root).map_err(|e| CliError::usage(e.to_string()))?;
    if found.len() < 2 {
        return Err(CliError::from(Error::Aggregation(format!(
            "found {} run(s) under {}, at least 2 are needed",
            found.len(),
            a.output_root.display()
        ))));
    }
    let mut qois = Vec::with_capacity(found.len());
    for (name, path) in &found {
        qois.push((name.clone(), qoi_extract(&read_solution(path)?)));
    }
    let agg = aggregate_runs(&qois, &a.baseline, a.exclude_unconverged)?;
    write_intervals(&agg, out);
    emit_all(&agg, a.format, &a.output_root, out)?;
    Ok(EXIT_OK)
}

pub fn cmd_demo(a: &DemoArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let cells = if a.quick { 32 } else { a.cells };
    let params = ChannelParams::new(a.retau, cells);
    params.validate()?;
    let cfg = apply_flags(&UqConfig::default(), &a.perturbation);
    let plan = plan_campaign(&cfg, true, a.nprocs, &a.output_root)?;
    let mode = if a.nprocs > 1 {
        ExecutionMode::Parallel
    } else {
        ExecutionMode::Sequential
    };
    let results = run_campaign(&plan, &ChannelAdapter { params }, mode)?;
    write_run_summary(&results, out);
    let qois: Vec<(String, QoiRecord)> = results
        .iter()
        .filter_map(|r| r.qoi.clone().map(|q| (r.name.clone(), q)))
        .collect();
    let agg = aggregate_runs(&qois, BASELINE, false)?;
    for f in [ReportFormat::Json, ReportFormat::PlotData] {
        for path in emit_report(&agg, f, &a.output_root)? {
            let _ = writeln!(out, "wrote {}", path.display());
        }
    }
    for b in agg
        .intervals
        .iter()
        .filter(|b| b.qoi != "centerline_velocity")
    {
        let _ = writeln!(
            out,
            "{} interval: [{:.6e}, {:.6e}]",
            b.qoi, b.lower, b.upper
        );
    }
    Ok(if results.iter().all(RunResult::converged) {
        EXIT_OK
    } else {
        EXIT_RUN_FAILURE
    })
}
