//! Writing an [`Aggregate`] as JSON, CSV or whitespace-separated plot data.
//!
//! All text numbers other than JSON use 17 significant digits, and every
//! output is a pure function of the aggregate.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::bounds::{Aggregate, IntervalBound, NamedEnvelope, RunSummary};
use crate::error::{Error, Result};

/// The JSON schema the report document follows.
pub const REPORT_SCHEMA: &str = include_str!("../schema/report.schema.json");

pub const REPORT_JSON: &str = "report.json";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    Csv,
    PlotData,
}

#[derive(Serialize)]
struct EnvelopeDoc<'a> {
    name: &'a str,
    abscissa: &'a [f64],
    lower: &'a [f64],
    upper: &'a [f64],
    baseline: &'a [f64],
    variability: &'a [f64],
    runs: Vec<RunValues<'a>>,
}

#[derive(Serialize)]
struct RunValues<'a> {
    name: &'a str,
    values: &'a [f64],
}

#[derive(Serialize)]
struct ReportDoc<'a> {
    baseline: &'a str,
    runs: &'a [RunSummary],
    intervals: &'a [IntervalBound],
    envelopes: Vec<EnvelopeDoc<'a>>,
}

pub fn report_json(agg: &Aggregate) -> String {
    let doc = ReportDoc {
        baseline: &agg.baseline,
        runs: &agg.runs,
        intervals: &agg.intervals,
        envelopes: agg
            .envelopes
            .iter()
            .map(|e| EnvelopeDoc {
                name: &e.name,
                abscissa: &e.envelope.abscissa,
                lower: &e.envelope.lower,
                upper: &e.envelope.upper,
                baseline: &e.baseline,
                variability: &e.variability.values,
                runs: e
                    .envelope
                    .runs
                    .iter()
                    .map(|r| RunValues {
                        name: &r.name,
                        values: &r.values,
                    })
                    .collect(),
            })
            .collect(),
    };
    let mut text = serde_json::to_string_pretty(&doc).expect("report values are finite");
    text.push('\n');
    text
}

fn num(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn intervals_csv(agg: &Aggregate) -> String {
    let mut out = String::from("qoi,lower,upper,baseline,lower_run,upper_run\n");
    for b in &agg.intervals {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            b.qoi,
            num(b.lower),
            num(b.upper),
            num(b.baseline),
            b.lower_run,
            b.upper_run
        );
    }
    out
}

/// Columns `abscissa,lower,upper,baseline`, then one per run.
pub fn envelope_csv(e: &NamedEnvelope) -> String {
    let env = &e.envelope;
    let mut out = String::from("abscissa,lower,upper,baseline");
    for r in &env.runs {
        out.push(',');
        out.push_str(&r.name);
    }
    out.push('\n');
    for i in 0..env.abscissa.len() {
        let mut row = vec![
            num(env.abscissa[i]),
            num(env.lower[i]),
            num(env.upper[i]),
            num(e.baseline[i]),
        ];
        row.extend(env.runs.iter().map(|r| num(r.values[i])));
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

pub fn variability_csv(e: &NamedEnvelope) -> String {
    let mut out = String::from("abscissa,variability\n");
    for (x, v) in e.envelope.abscissa.iter().zip(&e.variability.values) {
        let _ = writeln!(out, "{},{}", num(*x), num(*v));
    }
    out
}

/// Columns `abscissa lower upper baseline`.
pub fn envelope_plot_data(e: &NamedEnvelope) -> String {
    let env = &e.envelope;
    let mut out = format!("# {} envelope: abscissa lower upper baseline\n", e.name);
    for i in 0..env.abscissa.len() {
        let _ = writeln!(
            out,
            "{} {} {} {}",
            num(env.abscissa[i]),
            num(env.lower[i]),
            num(env.upper[i]),
            num(e.baseline[i])
        );
    }
    out
}

pub fn variability_plot_data(e: &NamedEnvelope) -> String {
    let mut out = format!("# {} variability: abscissa variability\n", e.name);
    for (x, v) in e.envelope.abscissa.iter().zip(&e.variability.values) {
        let _ = writeln!(out, "{} {}", num(*x), num(*v));
    }
    out
}

pub fn intervals_plot_data(agg: &Aggregate) -> String {
    let mut out = String::from("# qoi lower upper baseline\n");
    for b in &agg.intervals {
        let _ = writeln!(
            out,
            "{} {} {} {}",
            b.qoi,
            num(b.lower),
            num(b.upper),
            num(b.baseline)
        );
    }
    out
}

/// Writes the chosen format into `dir` (created if needed) and returns the
/// files written, in a fixed order.
pub fn emit_report(agg: &Aggregate, format: ReportFormat, dir: &Path) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut files: Vec<(String, String)> = Vec::new();
    match format {
        ReportFormat::Json => files.push((REPORT_JSON.into(), report_json(agg))),
        ReportFormat::Csv => {
            files.push(("intervals.csv".into(), intervals_csv(agg)));
            for e in &agg.envelopes {
                files.push((format!("envelope_{}.csv", e.name), envelope_csv(e)));
                files.push((format!("variability_{}.csv", e.name), variability_csv(e)));
            }
        }
        ReportFormat::PlotData => {
            files.push(("intervals.dat".into(), intervals_plot_data(agg)));
            for e in &agg.envelopes {
                files.push((format!("envelope_{}.dat", e.name), envelope_plot_data(e)));
                files.push((
                    format!("variability_{}.dat", e.name),
                    variability_plot_data(e),
                ));
            }
        }
    }
    let mut written = Vec::with_capacity(files.len());
    for (name, text) in files {
        let path = dir.join(name);
        fs::write(&path, text).map_err(|e| Error::io(&path, e))?;
        written.push(path);
    }
    Ok(written)
}
