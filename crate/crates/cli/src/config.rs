//! Plain `key=value` run configuration.
//!
//! Recognized keys and defaults:
//!
//! | key | default | meaning |
//! |-----|---------|---------|
//! | `backend` | `radial` | `radial` or `periodic3d` |
//! | `R` | `32` | outer radius (radial only) |
//! | `L` | `8` | box edge (periodic3d only) |
//! | `n` | `1024` radial, `16` periodic3d | resolution |
//! | `lambda`, `mu` | `1` | couplings, `>= 0` |
//! | `s` | `0.75` | regularity, `1/2 < s < 1` |
//! | `N` | `16` | I-operator threshold |
//! | `dt` | `1e-3` | time step |
//! | `T` | `1` | final time |
//! | `save_every` | `10` | steps between samples |
//! | `ic.type` | `gaussian` | `gaussian`, `boosted_gaussian`, `plane_wave`, `band_limited`, `power_law`, `file` |
//! | `ic.amplitude` | `1` | |
//! | `ic.width` | `1` | gaussian families |
//! | `ic.kick` | `0,0,0` | boosted_gaussian |
//! | `ic.mode` | `1,0,0` | plane_wave |
//! | `ic.band` | `2` | band_limited |
//! | `ic.seed` | `0` | band_limited |
//! | `ic.decay` | `2.5` | power_law |
//! | `ic.path` | | file: snapshot providing grid, time, `u` and `v` |
//! | `ic.v_scale` | `1` | `v₀ = v_scale · u₀` (not for `file`) |
//! | `out_dir` | `out` | artifact directory |
//!
//! `#` starts a comment; blank lines are ignored.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::Serialize;

use nls_core::dynamics::CoupledState;
use nls_core::initial::InitialData;
use nls_core::spectral::{Grid, GridKind, PhysParams};

use crate::error::CliError;
use crate::snapshot;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Backend {
    Radial,
    Periodic3d,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum IcSpec {
    Family(InitialData),
    File { path: PathBuf },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub backend: Backend,
    pub length: f64,
    pub n: usize,
    pub lambda: f64,
    pub mu: f64,
    pub s: f64,
    #[serde(rename = "N")]
    pub threshold: f64,
    pub dt: f64,
    #[serde(rename = "T")]
    pub t_final: f64,
    pub save_every: usize,
    pub ic: IcSpec,
    pub v_scale: f64,
    pub out_dir: PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            backend: Backend::Radial,
            length: 32.0,
            n: 1024,
            lambda: 1.0,
            mu: 1.0,
            s: 0.75,
            threshold: 16.0,
            dt: 1e-3,
            t_final: 1.0,
            save_every: 10,
            ic: IcSpec::Family(InitialData::Gaussian {
                amplitude: 1.0,
                width: 1.0,
            }),
            v_scale: 1.0,
            out_dir: PathBuf::from("out"),
        }
    }
}

const KEYS: &[&str] = &[
    "backend",
    "R",
    "L",
    "n",
    "lambda",
    "mu",
    "s",
    "N",
    "dt",
    "T",
    "save_every",
    "ic.type",
    "ic.amplitude",
    "ic.width",
    "ic.kick",
    "ic.mode",
    "ic.band",
    "ic.seed",
    "ic.decay",
    "ic.path",
    "ic.v_scale",
    "out_dir",
];

/// Which `ic.*` keys each family accepts.
fn ic_keys(kind: &str) -> Option<&'static [&'static str]> {
    Some(match kind {
        "gaussian" => &["ic.amplitude", "ic.width", "ic.v_scale"],
        "boosted_gaussian" => &["ic.amplitude", "ic.width", "ic.kick", "ic.v_scale"],
        "plane_wave" => &["ic.amplitude", "ic.mode", "ic.v_scale"],
        "band_limited" => &["ic.amplitude", "ic.band", "ic.seed", "ic.v_scale"],
        "power_law" => &["ic.amplitude", "ic.decay", "ic.v_scale"],
        "file" => &["ic.path"],
        _ => return None,
    })
}

struct Entry {
    line: usize,
    value: String,
}

struct Entries(BTreeMap<String, Entry>);

impl Entries {
    fn err(&self, key: &str, msg: impl Into<String>) -> CliError {
        match self.0.get(key) {
            Some(e) => CliError::ConfigLine {
                line: e.line,
                msg: format!("{key}: {}", msg.into()),
            },
            None => CliError::ConfigKey {
                key: key.into(),
                msg: msg.into(),
            },
        }
    }

    fn has(&self, key: &str) -> bool {
        self.0.contains_key(key)
    }

    fn get<T: std::str::FromStr>(&self, key: &str, default: T) -> Result<T, CliError> {
        match self.0.get(key) {
            None => Ok(default),
            Some(e) => e
                .value
                .parse()
                .map_err(|_| self.err(key, format!("cannot parse `{}` as {}", e.value, type_name::<T>()))),
        }
    }

    fn triple<T: std::str::FromStr + Copy>(&self, key: &str, default: [T; 3]) -> Result<[T; 3], CliError> {
        let Some(e) = self.0.get(key) else {
            return Ok(default);
        };
        let parts: Vec<&str> = e.value.split(',').map(str::trim).collect();
        if parts.len() != 3 {
            return Err(self.err(key, format!("expected three comma-separated values, got `{}`", e.value)));
        }
        let mut out = default;
        for (slot, p) in out.iter_mut().zip(parts) {
            *slot = p
                .parse()
                .map_err(|_| self.err(key, format!("cannot parse `{p}` as {}", type_name::<T>())))?;
        }
        Ok(out)
    }
}

fn type_name<T>() -> &'static str {
    let full = std::any::type_name::<T>();
    match full {
        "f64" => "a number",
        "usize" | "u64" | "i64" => "an integer",
        _ => full,
    }
}

fn split_lines(text: &str) -> Result<Entries, CliError> {
    let mut map = BTreeMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let Some((key, value)) = content.split_once('=') else {
            return Err(CliError::ConfigLine {
                line,
                msg: format!("expected key=value, got `{content}`"),
            });
        };
        let (key, value) = (key.trim(), value.trim());
        if !KEYS.contains(&key) {
            return Err(CliError::ConfigLine {
                line,
                msg: format!("unknown key `{key}`"),
            });
        }
        if value.is_empty() {
            return Err(CliError::ConfigLine {
                line,
                msg: format!("{key}: missing value"),
            });
        }
        if let Some(prev) = map.insert(
            key.to_string(),
            Entry {
                line,
                value: value.to_string(),
            },
        ) {
            return Err(CliError::ConfigLine {
                line,
                msg: format!("{key}: already set on line {}", prev.line),
            });
        }
    }
    Ok(Entries(map))
}

fn positive(e: &Entries, key: &str, v: f64) -> Result<f64, CliError> {
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(e.err(key, format!("must be positive and finite, got {v}")))
    }
}

/// Parses and validates a configuration, filling in defaults.
pub fn parse_config(text: &str) -> Result<RunConfig, CliError> {
    let e = split_lines(text)?;
    let d = RunConfig::default();
    let backend = match e.get::<String>("backend", "radial".into())?.as_str() {
        "radial" => Backend::Radial,
        "periodic3d" => Backend::Periodic3d,
        other => return Err(e.err("backend", format!("expected radial or periodic3d, got `{other}`"))),
    };
    let (length_key, wrong_key, default_len, default_n) = match backend {
        Backend::Radial => ("R", "L", 32.0, 1024),
        Backend::Periodic3d => ("L", "R", 8.0, 16),
    };
    if e.has(wrong_key) {
        return Err(e.err(wrong_key, format!("not used by backend {backend:?}; use {length_key}")));
    }
    let length = positive(&e, length_key, e.get(length_key, default_len)?)?;
    let n: usize = e.get("n", default_n)?;
    if n < nls_core::spectral::grid::MIN_RESOLUTION {
        return Err(e.err("n", format!("resolution must be at least {}", nls_core::spectral::grid::MIN_RESOLUTION)));
    }
    let lambda: f64 = e.get("lambda", d.lambda)?;
    let mu: f64 = e.get("mu", d.mu)?;
    for (key, v) in [("lambda", lambda), ("mu", mu)] {
        if !(v.is_finite() && v >= 0.0) {
            return Err(e.err(key, format!("coupling must be finite and >= 0, got {v}")));
        }
    }
    let s: f64 = e.get("s", d.s)?;
    if !(s > 0.5 && s < 1.0) {
        return Err(e.err("s", format!("the I-method requires 1/2 < s < 1, got {s}")));
    }
    let threshold = positive(&e, "N", e.get("N", d.threshold)?)?;
    let dt = positive(&e, "dt", e.get("dt", d.dt)?)?;
    let t_final: f64 = e.get("T", d.t_final)?;
    if !(t_final.is_finite() && t_final >= 0.0) {
        return Err(e.err("T", format!("must be finite and >= 0, got {t_final}")));
    }
    let save_every: usize = e.get("save_every", d.save_every)?;
    if save_every == 0 {
        return Err(e.err("save_every", "must be at least 1"));
    }

    let kind: String = e.get("ic.type", "gaussian".into())?;
    let Some(allowed) = ic_keys(&kind) else {
        return Err(e.err("ic.type", format!("unknown initial-condition type `{kind}`")));
    };
    for key in e.0.keys().filter(|k| k.starts_with("ic.") && *k != "ic.type") {
        if !allowed.contains(&key.as_str()) {
            return Err(e.err(key, format!("does not apply to ic.type={kind}")));
        }
    }
    if matches!(kind.as_str(), "plane_wave" | "boosted_gaussian") && backend == Backend::Radial {
        return Err(e.err("ic.type", format!("{kind} requires backend=periodic3d")));
    }
    let amplitude: f64 = e.get("ic.amplitude", 1.0)?;
    if !amplitude.is_finite() {
        return Err(e.err("ic.amplitude", "must be finite"));
    }
    let ic = match kind.as_str() {
        "gaussian" => IcSpec::Family(InitialData::Gaussian {
            amplitude,
            width: positive(&e, "ic.width", e.get("ic.width", 1.0)?)?,
        }),
        "boosted_gaussian" => IcSpec::Family(InitialData::BoostedGaussian {
            amplitude,
            width: positive(&e, "ic.width", e.get("ic.width", 1.0)?)?,
            kick: e.triple("ic.kick", [0.0; 3])?,
        }),
        "plane_wave" => IcSpec::Family(InitialData::PlaneWave {
            amplitude,
            mode: e.triple("ic.mode", [1, 0, 0])?,
        }),
        "band_limited" => IcSpec::Family(InitialData::BandLimited {
            amplitude,
            band: positive(&e, "ic.band", e.get("ic.band", 2.0)?)?,
            seed: e.get("ic.seed", 0)?,
        }),
        "power_law" => IcSpec::Family(InitialData::PowerLaw {
            amplitude,
            decay: e.get("ic.decay", 2.5)?,
        }),
        "file" => {
            let path: String = e.get("ic.path", String::new())?;
            if path.is_empty() {
                return Err(e.err("ic.path", "ic.type=file requires ic.path"));
            }
            IcSpec::File { path: path.into() }
        }
        _ => unreachable!("checked by ic_keys"),
    };
    let v_scale: f64 = e.get("ic.v_scale", 1.0)?;
    if !v_scale.is_finite() {
        return Err(e.err("ic.v_scale", "must be finite"));
    }
    let out_dir = PathBuf::from(e.get::<String>("out_dir", "out".into())?);
    Ok(RunConfig {
        backend,
        length,
        n,
        lambda,
        mu,
        s,
        threshold,
        dt,
        t_final,
        save_every,
        ic,
        v_scale,
        out_dir,
    })
}

pub fn load_config(path: &Path) -> Result<RunConfig, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    parse_config(&text)
}

impl RunConfig {
    pub fn params(&self) -> Result<PhysParams, CliError> {
        Ok(PhysParams::new(self.lambda, self.mu, self.s, self.threshold)?)
    }

    pub fn grid(&self) -> Result<Grid, CliError> {
        let kind = match self.backend {
            Backend::Radial => GridKind::Radial1D {
                radius: self.length,
                n: self.n,
            },
            Backend::Periodic3d => GridKind::Periodic3D {
                box_len: self.length,
                n: self.n,
            },
        };
        Ok(Grid::new(kind)?)
    }

    /// Samples the initial data; `file` data keep the snapshot's grid and time.
    pub fn initial_state(&self) -> Result<CoupledState, CliError> {
        let params = self.params()?;
        match &self.ic {
            IcSpec::Family(data) => {
                let grid = self.grid()?;
                let u = data.sample(&grid)?;
                let v = u.scale(Complex64::new(self.v_scale, 0.0));
                Ok(CoupledState::new(u, v, params)?)
            }
            IcSpec::File { path } => {
                let snap = snapshot::read_snapshot(path)?;
                Ok(snap.with_params(params)?)
            }
        }
    }

    /// Copy with the initial amplitude replaced; `None` for file data.
    pub fn with_amplitude(&self, amplitude: f64) -> Option<RunConfig> {
        let IcSpec::Family(data) = &self.ic else {
            return None;
        };
        let data = match data.clone() {
            InitialData::Gaussian { width, .. } => InitialData::Gaussian { amplitude, width },
            InitialData::BoostedGaussian { width, kick, .. } => InitialData::BoostedGaussian { amplitude, width, kick },
            InitialData::PlaneWave { mode, .. } => InitialData::PlaneWave { amplitude, mode },
            InitialData::BandLimited { band, seed, .. } => InitialData::BandLimited { amplitude, band, seed },
            InitialData::PowerLaw { decay, .. } => InitialData::PowerLaw { amplitude, decay },
        };
        Some(RunConfig {
            ic: IcSpec::Family(data),
            ..self.clone()
        })
    }
}
