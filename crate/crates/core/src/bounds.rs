//! Interval bounds, profile envelopes and variability fields over a set of
//! realizations.
//!
//! The bounds are plain min/max ranges over every realization; they carry no
//! probabilistic meaning.

use serde::{Deserialize, Serialize};

use crate::channel::QoiRecord;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntervalBound {
    pub qoi: String,
    pub lower: f64,
    pub upper: f64,
    pub lower_run: String,
    pub upper_run: String,
    pub baseline: f64,
}

/// Exact min and max of `values`, each attributed to the run attaining it.
/// Ties go to the lexicographically smallest run name, so the result does
/// not depend on input order.
pub fn interval_bounds(
    qoi: &str,
    values: &[(String, f64)],
    baseline: &str,
) -> Result<IntervalBound> {
    if values.len() < 2 {
        return Err(Error::Aggregation(format!(
            "{qoi}: at least two realizations are needed, found {}",
            values.len()
        )));
    }
    if let Some((name, v)) = values.iter().find(|(_, v)| !v.is_finite()) {
        return Err(Error::Aggregation(format!(
            "{qoi}: run {name} has non-finite value {v}"
        )));
    }
    let mut names: Vec<&str> = values.iter().map(|(n, _)| n.as_str()).collect();
    names.sort_unstable();
    if names.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::Aggregation(format!("{qoi}: duplicate run names")));
    }
    let base = values
        .iter()
        .find(|(n, _)| n == baseline)
        .ok_or_else(|| Error::Aggregation(format!("{qoi}: baseline run '{baseline}' is missing")))?
        .1;

    let pick = |better: fn(f64, f64) -> bool| {
        let mut best = &values[0];
        for cand in &values[1..] {
            if better(cand.1, best.1) || (cand.1 == best.1 && cand.0 < best.0) {
                best = cand;
            }
        }
        best
    };
    let lo = pick(|a, b| a < b);
    let hi = pick(|a, b| a > b);
    Ok(IntervalBound {
        qoi: qoi.to_string(),
        lower: lo.1,
        upper: hi.1,
        lower_run: lo.0.clone(),
        upper_run: hi.0.clone(),
        baseline: base,
    })
}

/// A sampled curve with strictly increasing abscissa.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Profile {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
}

impl Profile {
    pub fn new(x: Vec<f64>, y: Vec<f64>) -> Result<Self> {
        if x.len() != y.len() {
            return Err(Error::Shape {
                expected: x.len(),
                found: y.len(),
            });
        }
        if x.len() < 2 {
            return Err(Error::Aggregation(
                "a profile needs at least two samples".into(),
            ));
        }
        if x.iter().chain(&y).any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("profile"));
        }
        if x.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::Aggregation(
                "profile abscissa is not strictly increasing".into(),
            ));
        }
        Ok(Self { x, y })
    }

    /// Piecewise-linear value at `at`, which must lie within the abscissa
    /// range.
    pub fn interpolate(&self, at: f64) -> f64 {
        let n = self.x.len();
        let i = self.x.partition_point(|&v| v <= at).clamp(1, n - 1);
        let (x0, x1) = (self.x[i - 1], self.x[i]);
        let t = ((at - x0) / (x1 - x0)).clamp(0.0, 1.0);
        if t == 1.0 {
            self.y[i]
        } else {
            (1.0 - t) * self.y[i - 1] + t * self.y[i]
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResampledRun {
    pub name: String,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileEnvelope {
    pub abscissa: Vec<f64>,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    pub runs: Vec<ResampledRun>,
}

impl ProfileEnvelope {
    pub fn run(&self, name: &str) -> Option<&[f64]> {
        self.runs
            .iter()
            .find(|r| r.name == name)
            .map(|r| r.values.as_slice())
    }
}

/// Resamples every profile onto `grid` and takes pointwise min and max.
pub fn profile_envelope(profiles: &[(String, Profile)], grid: &[f64]) -> Result<ProfileEnvelope> {
    if profiles.is_empty() {
        return Err(Error::Aggregation("no profiles to envelope".into()));
    }
    let lo = profiles
        .iter()
        .map(|(_, p)| p.x[0])
        .fold(f64::NEG_INFINITY, f64::max);
    let hi = profiles
        .iter()
        .map(|(_, p)| *p.x.last().unwrap())
        .fold(f64::INFINITY, f64::min);
    if lo > hi {
        return Err(Error::Aggregation(
            "profile abscissa ranges do not overlap".into(),
        ));
    }
    let slack = 1e-12 * (hi - lo).abs().max(lo.abs()).max(hi.abs()).max(1.0);
    if let Some(g) = grid
        .iter()
        .find(|&&g| !(g >= lo - slack && g <= hi + slack))
    {
        return Err(Error::Aggregation(format!(
            "sample {g} lies outside the common abscissa range [{lo}, {hi}]"
        )));
    }

    let runs: Vec<ResampledRun> = profiles
        .iter()
        .map(|(name, p)| ResampledRun {
            name: name.clone(),
            values: grid.iter().map(|&g| p.interpolate(g)).collect(),
        })
        .collect();
    let mut lower = vec![f64::INFINITY; grid.len()];
    let mut upper = vec![f64::NEG_INFINITY; grid.len()];
    for r in &runs {
        for (i, &v) in r.values.iter().enumerate() {
            lower[i] = lower[i].min(v);
            upper[i] = upper[i].max(v);
        }
    }
    Ok(ProfileEnvelope {
        abscissa: grid.to_vec(),
        lower,
        upper,
        runs,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VariabilityField {
    pub values: Vec<f64>,
}

/// Cell-wise `max_i f_i − min_i f_i`.
pub fn field_variability(fields: &[Vec<f64>]) -> Result<VariabilityField> {
    let first = fields
        .first()
        .ok_or_else(|| Error::Aggregation("no fields given".into()))?;
    for f in fields {
        if f.len() != first.len() {
            return Err(Error::Shape {
                expected: first.len(),
                found: f.len(),
            });
        }
    }
    let values = (0..first.len())
        .map(|i| {
            let (lo, hi) = fields
                .iter()
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), f| {
                    (lo.min(f[i]), hi.max(f[i]))
                });
            hi - lo
        })
        .collect();
    Ok(VariabilityField { values })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub name: String,
    pub converged: bool,
    pub included: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NamedEnvelope {
    pub name: String,
    pub baseline: Vec<f64>,
    pub envelope: ProfileEnvelope,
    pub variability: VariabilityField,
}

/// Everything the reports are written from.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Aggregate {
    pub baseline: String,
    pub runs: Vec<RunSummary>,
    pub intervals: Vec<IntervalBound>,
    pub envelopes: Vec<NamedEnvelope>,
}

/// Builds scalar intervals and the velocity envelope from per-run QoIs.
///
/// Unconverged runs are kept, with a warning, unless `exclude_unconverged`
/// is set. Profiles are resampled onto the baseline grid.
pub fn aggregate_runs(
    runs: &[(String, QoiRecord)],
    baseline: &str,
    exclude_unconverged: bool,
) -> Result<Aggregate> {
    let mut summaries = Vec::with_capacity(runs.len());
    let mut used: Vec<&(String, QoiRecord)> = Vec::new();
    for run in runs {
        let included = run.1.converged || !exclude_unconverged;
        if !run.1.converged {
            if included {
                log::warn!(
                    "run {} did not converge; it is still part of the bounds",
                    run.0
                );
            } else {
                log::warn!("run {} did not converge and is excluded", run.0);
            }
        }
        summaries.push(RunSummary {
            name: run.0.clone(),
            converged: run.1.converged,
            included,
        });
        if included {
            used.push(run);
        }
    }
    let base = used
        .iter()
        .find(|(n, _)| n == baseline)
        .ok_or_else(|| Error::Aggregation(format!("baseline run '{baseline}' is missing")))?;

    let names = ["skin_friction", "bulk_velocity", "centerline_velocity"];
    let mut intervals = Vec::with_capacity(names.len());
    for (k, name) in names.iter().enumerate() {
        let values: Vec<(String, f64)> = used
            .iter()
            .map(|(n, q)| (n.clone(), q.scalars()[k].1))
            .collect();
        intervals.push(interval_bounds(name, &values, baseline)?);
    }

    let profiles: Vec<(String, Profile)> = used
        .iter()
        .map(|(n, q)| Ok((n.clone(), Profile::new(q.y.clone(), q.u.clone())?)))
        .collect::<Result<_>>()?;
    let envelope = profile_envelope(&profiles, &base.1.y)?;
    let fields: Vec<Vec<f64>> = envelope.runs.iter().map(|r| r.values.clone()).collect();
    let variability = field_variability(&fields)?;

    Ok(Aggregate {
        baseline: baseline.to_string(),
        runs: summaries,
        intervals,
        envelopes: vec![NamedEnvelope {
            name: "velocity".into(),
            baseline: base.1.u.clone(),
            envelope,
            variability,
        }],
    })
}
