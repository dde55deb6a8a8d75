//! The `sweep` command over the I-operator threshold or the data amplitude.

use std::path::Path;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use nls_core::diagnostics::loglog_slope;
use nls_core::dynamics::evolve;
use nls_core::scattering::{increment_sweep, scattering_report, SweepMeta, Verdict};

use crate::config::RunConfig;
use crate::error::CliError;
use crate::run::write_json;

/// Cauchy tolerance used by amplitude sweeps.
pub const SCATTERING_TOL: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    Threshold,
    Amplitude,
}

impl FromStr for Axis {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        match s {
            "N" => Ok(Axis::Threshold),
            "amplitude" => Ok(Axis::Amplitude),
            other => Err(CliError::Usage(format!("unknown sweep axis `{other}` (expected N or amplitude)"))),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ThresholdRow {
    #[serde(rename = "N")]
    pub threshold: f64,
    pub status: &'static str,
    pub total: Option<f64>,
    pub net: Option<f64>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct AmplitudeRow {
    pub amplitude: f64,
    pub status: &'static str,
    pub verdict: Option<Verdict>,
    pub checkpoints: Vec<f64>,
    pub increments: Vec<f64>,
    pub final_increment: Option<f64>,
    pub l5_total: Option<f64>,
    pub l5_last_quarter_growth: Option<f64>,
    pub l5_saturated: Option<bool>,
    pub beyond_safe_horizon: Option<bool>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "axis")]
pub enum SweepOutput {
    #[serde(rename = "N")]
    Threshold {
        config: RunConfig,
        rows: Vec<ThresholdRow>,
        slope: Option<f64>,
        meta: Option<SweepMeta>,
    },
    #[serde(rename = "amplitude")]
    Amplitude {
        config: RunConfig,
        rows: Vec<AmplitudeRow>,
        /// Log-log slope of the final increment against amplitude.
        slope: Option<f64>,
        /// Final increments of converging rows are nondecreasing in amplitude.
        monotone_in_amplitude: bool,
    },
}

impl SweepOutput {
    /// True when every row ran.
    pub fn all_ok(&self) -> bool {
        match self {
            SweepOutput::Threshold { rows, .. } => rows.iter().all(|r| r.status == "ok"),
            SweepOutput::Amplitude { rows, .. } => rows.iter().all(|r| r.status == "ok"),
        }
    }
}

pub fn parse_values(text: &str) -> Result<Vec<f64>, CliError> {
    text.split(',')
        .map(|v| {
            v.trim()
                .parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(|| CliError::Usage(format!("--values: cannot parse `{}` as a number", v.trim())))
        })
        .collect()
}

fn check_values(values: &[f64]) -> Result<Vec<f64>, CliError> {
    if values.len() < 3 {
        return Err(CliError::Usage(format!(
            "--values: a sweep needs at least 3 values, got {}",
            values.len()
        )));
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
        return Err(CliError::Usage(format!("--values: duplicate value {}", w[0])));
    }
    Ok(sorted)
}

fn threshold_sweep(config: &RunConfig, values: Vec<f64>) -> Result<SweepOutput, CliError> {
    let state = config.initial_state()?;
    let (rows, slope, meta) = match increment_sweep(&state, &values, config.s, config.t_final, config.dt) {
        Ok(table) => {
            let rows = table
                .rows
                .iter()
                .map(|r| ThresholdRow {
                    threshold: r.threshold,
                    status: "ok",
                    total: Some(r.total),
                    net: Some(r.net),
                    error: None,
                })
                .collect();
            (rows, table.slope, Some(table.meta))
        }
        Err(e @ nls_core::Error::InvalidParameter { .. }) => return Err(e.into()),
        Err(e) => {
            let rows = values
                .iter()
                .map(|&n| ThresholdRow {
                    threshold: n,
                    status: "failed",
                    total: None,
                    net: None,
                    error: Some(e.to_string()),
                })
                .collect();
            (rows, None, None)
        }
    };
    Ok(SweepOutput::Threshold {
        config: config.clone(),
        rows,
        slope,
        meta,
    })
}

fn failed_amplitude(amplitude: f64, error: String) -> AmplitudeRow {
    AmplitudeRow {
        amplitude,
        status: "failed",
        verdict: None,
        checkpoints: Vec::new(),
        increments: Vec::new(),
        final_increment: None,
        l5_total: None,
        l5_last_quarter_growth: None,
        l5_saturated: None,
        beyond_safe_horizon: None,
        error: Some(error),
    }
}

/// One scattering run with checkpoints at `T/4`, `T/2` and `T`.
fn amplitude_row(config: &RunConfig, amplitude: f64) -> AmplitudeRow {
    let run = || -> Result<AmplitudeRow, CliError> {
        let cfg = config.with_amplitude(amplitude).expect("checked by caller");
        let state = cfg.initial_state()?;
        let t = cfg.t_final;
        // A step count divisible by 4 puts samples exactly on the checkpoints.
        let quarter = (t / (4.0 * cfg.dt) - 1e-9).ceil().max(1.0) as usize;
        let dt = t / (4 * quarter) as f64;
        let traj = evolve(&state, t, dt, quarter, &mut [])?;
        if let Some(e) = traj.aborted() {
            return Err(e.clone().into());
        }
        let t0 = state.t();
        let checkpoints = [t0 + 0.25 * t, t0 + 0.5 * t, t0 + t];
        let rep = scattering_report(&traj, cfg.s, SCATTERING_TOL, &checkpoints)?;
        Ok(AmplitudeRow {
            amplitude,
            status: "ok",
            verdict: Some(rep.verdict),
            checkpoints: rep.checkpoints.clone(),
            final_increment: rep.increments.last().copied(),
            increments: rep.increments,
            l5_total: Some(rep.l5_total),
            l5_last_quarter_growth: Some(rep.l5_last_quarter_growth),
            l5_saturated: Some(rep.l5_saturated),
            beyond_safe_horizon: Some(rep.beyond_safe_horizon),
            error: None,
        })
    };
    run().unwrap_or_else(|e| failed_amplitude(amplitude, e.to_string()))
}

fn amplitude_sweep(config: &RunConfig, values: Vec<f64>) -> Result<SweepOutput, CliError> {
    if config.with_amplitude(1.0).is_none() {
        return Err(CliError::Usage("amplitude sweeps need a parametric ic.type (not file)".into()));
    }
    if config.t_final <= 0.0 {
        return Err(CliError::ConfigKey {
            key: "T".into(),
            msg: "amplitude sweeps need T > 0".into(),
        });
    }
    let rows: Vec<AmplitudeRow> = values.par_iter().map(|&a| amplitude_row(config, a)).collect();
    let converging: Vec<&AmplitudeRow> = rows
        .iter()
        .filter(|r| r.verdict == Some(Verdict::Converging))
        .collect();
    let monotone = converging
        .windows(2)
        .all(|w| w[1].final_increment >= w[0].final_increment);
    let (xs, ys): (Vec<f64>, Vec<f64>) = rows
        .iter()
        .filter_map(|r| r.final_increment.map(|d| (r.amplitude.abs(), d)))
        .unzip();
    Ok(SweepOutput::Amplitude {
        config: config.clone(),
        slope: loglog_slope(&xs, &ys),
        monotone_in_amplitude: monotone,
        rows,
    })
}

/// Runs the sweep; member failures are recorded in their rows.
pub fn cmd_sweep(config: &RunConfig, axis: Axis, values: &[f64]) -> Result<SweepOutput, CliError> {
    let values = check_values(values)?;
    match axis {
        Axis::Threshold => threshold_sweep(config, values),
        Axis::Amplitude => amplitude_sweep(config, values),
    }
}

pub fn write_sweep(out_dir: &Path, axis: Axis, output: &SweepOutput) -> Result<std::path::PathBuf, CliError> {
    std::fs::create_dir_all(out_dir).map_err(|e| CliError::io(out_dir, e))?;
    let name = match axis {
        Axis::Threshold => "sweep_N.json",
        Axis::Amplitude => "sweep_amplitude.json",
    };
    let path = out_dir.join(name);
    write_json(&path, output)?;
    Ok(path)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::parse_config;

    #[test]
    fn value_checks() {
        assert!(check_values(&[1.0, 2.0]).is_err());
        assert!(check_values(&[4.0, 8.0, 4.0]).is_err());
        assert_eq!(check_values(&[8.0, 4.0, 16.0]).unwrap(), vec![4.0, 8.0, 16.0]);
        assert!(parse_values("4, 8,x").is_err());
        assert_eq!(parse_values("4,8, 16").unwrap(), vec![4.0, 8.0, 16.0]);
        assert!("M".parse::<Axis>().is_err());
    }

    #[test]
    fn threshold_sweep_has_rows_and_slope() {
        let cfg = parse_config("R=16\nn=256\nT=0.05\ndt=1e-2\nic.width=0.5").unwrap();
        let out = cmd_sweep(&cfg, Axis::Threshold, &[1.0, 2.0, 4.0]).unwrap();
        let SweepOutput::Threshold { rows, slope, .. } = &out else {
            panic!("wrong axis")
        };
        assert_eq!(rows.len(), 3);
        assert!(slope.is_some());
        assert!(out.all_ok());
    }

    #[test]
    fn amplitude_sweep_gives_verdicts() {
        let cfg = parse_config("R=32\nn=256\nT=1\ndt=1e-2").unwrap();
        let out = cmd_sweep(&cfg, Axis::Amplitude, &[0.05, 0.1, 0.2]).unwrap();
        let SweepOutput::Amplitude { rows, .. } = &out else {
            panic!("wrong axis")
        };
        assert_eq!(rows.len(), 3);
        assert!(rows.iter().all(|r| r.verdict.is_some()));
        assert_eq!(rows[0].checkpoints, vec![0.25, 0.5, 1.0]);
    }
}
