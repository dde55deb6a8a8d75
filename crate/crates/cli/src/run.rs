//! The `run` command: evolve, then write `timeseries.csv`, `final.snap` and
//! `report.json`.

use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;

use nls_core::diagnostics::DiagnosticsRecord;
use nls_core::dynamics::{evolve, Trajectory};
use nls_core::spectral::GridKind;

use crate::config::RunConfig;
use crate::error::CliError;
use crate::snapshot::write_snapshot;

/// Column order of `timeseries.csv`; `morawetz_M` is present only when the
/// Morawetz potential is computable (periodic grid within the cost guard).
pub const CSV_COLUMNS: [&str; 12] = [
    "t",
    "mass_u",
    "mass_v",
    "M_w",
    "E_w",
    "E_w_mod",
    "hs_u",
    "hs_v",
    "dEmod_dt",
    "interaction_L4_cum",
    "L5_cum",
    "morawetz_M",
];

pub const REPORT_FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize)]
pub struct Truncation {
    pub t: f64,
    pub reason: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub format_version: u32,
    /// `complete`, or `truncated` when a blow-up stopped the run.
    pub status: &'static str,
    pub truncation: Option<Truncation>,
    pub config: RunConfig,
    pub grid: GridKind,
    pub dt_effective: f64,
    pub samples: usize,
    pub t_start: f64,
    pub t_end: f64,
    /// Absolute time up to which domain truncation is negligible (null when unbounded).
    pub t_safe: f64,
    pub beyond_safe_horizon: bool,
    pub weighted_mass_drift_rel: f64,
    pub weighted_energy_drift_rel: f64,
    pub interaction_l4_total: f64,
    pub l5_total: f64,
    pub initial: DiagnosticsRecord,
    #[serde(rename = "final")]
    pub last: DiagnosticsRecord,
}

#[derive(Debug)]
pub struct RunOutcome {
    pub report: RunReport,
    pub out_dir: PathBuf,
    pub records: Vec<DiagnosticsRecord>,
}

impl RunOutcome {
    pub fn exit_code(&self) -> i32 {
        if self.report.truncation.is_some() {
            crate::EXIT_BLOW_UP
        } else {
            crate::EXIT_OK
        }
    }
}

fn num(x: f64) -> String {
    format!("{x:e}")
}

/// Diagnostics for every sample of a trajectory, computed in parallel.
pub fn records(traj: &Trajectory) -> Result<Vec<DiagnosticsRecord>, CliError> {
    Ok(traj
        .states()
        .par_iter()
        .map(DiagnosticsRecord::compute)
        .collect::<Result<Vec<_>, _>>()?)
}

pub fn write_timeseries(path: &Path, traj: &Trajectory, records: &[DiagnosticsRecord]) -> Result<(), CliError> {
    let io = |e: csv::Error| CliError::io(path, e.into());
    let with_m = records.first().is_some_and(|r| r.morawetz_m.is_some());
    let cols = if with_m { &CSV_COLUMNS[..] } else { &CSV_COLUMNS[..11] };
    let mut w = csv::Writer::from_path(path).map_err(io)?;
    w.write_record(cols).map_err(io)?;
    for (k, r) in records.iter().enumerate() {
        let mut row = vec![
            num(r.t),
            num(r.mass_u),
            num(r.mass_v),
            num(r.m_w),
            num(r.e_w),
            num(r.e_w_mod),
            num(r.hs_u),
            num(r.hs_v),
            num(r.de_mod_dt),
            num(traj.interaction_cumulative()[k]),
            num(traj.l5_cumulative()[k]),
        ];
        if with_m {
            row.push(num(r.morawetz_m.unwrap_or(f64::NAN)));
        }
        w.write_record(&row).map_err(io)?;
    }
    w.flush().map_err(|e| CliError::io(path, e))
}

fn rel_drift(a: f64, b: f64) -> f64 {
    if a == 0.0 {
        (b - a).abs()
    } else {
        ((b - a) / a).abs()
    }
}

pub fn write_json(path: &Path, value: &impl Serialize) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value).expect("report types serialize");
    text.push('\n');
    std::fs::write(path, text).map_err(|e| CliError::io(path, e))
}

/// Evolves the configured data and writes the artifacts into `out_dir`
/// (or the config's `out_dir`). A blow-up keeps the partial artifacts and
/// marks the report as truncated.
pub fn cmd_run(config: &RunConfig, out_dir: Option<&Path>) -> Result<RunOutcome, CliError> {
    let out_dir = out_dir.map(Path::to_path_buf).unwrap_or_else(|| config.out_dir.clone());
    std::fs::create_dir_all(&out_dir).map_err(|e| CliError::io(&out_dir, e))?;
    let state = config.initial_state()?;
    let traj = evolve(&state, config.t_final, config.dt, config.save_every, &mut [])?;
    let records = records(&traj)?;
    write_timeseries(&out_dir.join("timeseries.csv"), &traj, &records)?;
    write_snapshot(&out_dir.join("final.snap"), traj.last())?;
    let truncation = traj.aborted().map(|e| match e {
        nls_core::Error::BlowUp { t, reason } => Truncation {
            t: *t,
            reason: reason.clone(),
        },
        other => Truncation {
            t: traj.last().t(),
            reason: other.to_string(),
        },
    });
    let (first, last) = (records[0].clone(), records.last().unwrap().clone());
    let report = RunReport {
        format_version: REPORT_FORMAT_VERSION,
        status: if truncation.is_some() { "truncated" } else { "complete" },
        truncation,
        config: config.clone(),
        grid: state.grid().kind(),
        dt_effective: traj.dt(),
        samples: traj.len(),
        t_start: traj.first().t(),
        t_end: traj.last().t(),
        t_safe: traj.t_safe(),
        beyond_safe_horizon: traj.last().t() > traj.t_safe(),
        weighted_mass_drift_rel: rel_drift(first.m_w, last.m_w),
        weighted_energy_drift_rel: rel_drift(first.e_w, last.e_w),
        interaction_l4_total: *traj.interaction_cumulative().last().unwrap(),
        l5_total: *traj.l5_cumulative().last().unwrap(),
        initial: first,
        last,
    };
    write_json(&out_dir.join("report.json"), &report)?;
    Ok(RunOutcome {
        report,
        out_dir,
        records,
    })
}
