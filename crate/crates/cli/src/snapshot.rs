//! Binary field snapshots.
//!
//! Layout (all little-endian):
//!
//! ```text
//!  0  magic        b"NLSSNAP\0"
//!  8  version      u32
//! 12  backend      u8 (0 radial, 1 periodic3d), then 3 zero bytes
//! 16  length       f64 (R or L)
//! 24  n            u64
//! 32  t            f64
//! 40  lambda, mu, s, N   4 x f64
//! 72  samples      u64 (per component)
//! 80  payload crc  u32
//! 84  header crc   u32 over bytes 0..84
//! 88  payload      u then v, each sample as (re, im) f64
//! ```

use std::path::Path;

use num_complex::Complex64;
use thiserror::Error;

use nls_core::dynamics::CoupledState;
use nls_core::spectral::{Field, Grid, GridKind, PhysParams};

use crate::error::CliError;

pub const MAGIC: [u8; 8] = *b"NLSSNAP\0";
pub const VERSION: u32 = 1;
pub const HEADER_LEN: usize = 88;

#[derive(Debug, Error, PartialEq)]
pub enum SnapshotError {
    #[error("not a snapshot (bad magic)")]
    Magic,
    #[error(
        "unsupported snapshot version {found}; this build reads version {VERSION}. \
         Re-export the state with a matching nls-lab release and rerun it here"
    )]
    UnsupportedVersion { found: u32 },
    #[error("truncated: expected {expected} bytes, found {found}")]
    Truncated { expected: usize, found: usize },
    #[error("{which} checksum mismatch")]
    Checksum { which: &'static str },
    #[error("invalid header: {0}")]
    Invalid(String),
}

/// Header fields of a snapshot.
#[derive(Debug, Clone, PartialEq)]
pub struct SnapshotHeader {
    pub version: u32,
    pub grid: GridKind,
    pub t: f64,
    pub params: PhysParams,
    pub samples: u64,
}

fn put_f64(buf: &mut Vec<u8>, x: f64) {
    buf.extend_from_slice(&x.to_le_bytes());
}

pub fn encode(state: &CoupledState) -> Vec<u8> {
    let grid = state.grid();
    let (tag, length) = match grid.kind() {
        GridKind::Radial1D { radius, .. } => (0u8, radius),
        GridKind::Periodic3D { box_len, .. } => (1u8, box_len),
    };
    let p = state.params();
    let mut payload = Vec::with_capacity(32 * grid.len());
    for f in [state.u(), state.v()] {
        for z in f.samples() {
            put_f64(&mut payload, z.re);
            put_f64(&mut payload, z.im);
        }
    }
    let mut buf = Vec::with_capacity(HEADER_LEN + payload.len());
    buf.extend_from_slice(&MAGIC);
    buf.extend_from_slice(&VERSION.to_le_bytes());
    buf.extend_from_slice(&[tag, 0, 0, 0]);
    put_f64(&mut buf, length);
    buf.extend_from_slice(&(grid.n() as u64).to_le_bytes());
    for x in [state.t(), p.lambda, p.mu, p.s, p.threshold] {
        put_f64(&mut buf, x);
    }
    buf.extend_from_slice(&(grid.len() as u64).to_le_bytes());
    buf.extend_from_slice(&crc32fast::hash(&payload).to_le_bytes());
    let header_crc = crc32fast::hash(&buf);
    buf.extend_from_slice(&header_crc.to_le_bytes());
    buf.extend_from_slice(&payload);
    buf
}

fn u32_at(b: &[u8], at: usize) -> u32 {
    u32::from_le_bytes(b[at..at + 4].try_into().unwrap())
}

fn u64_at(b: &[u8], at: usize) -> u64 {
    u64::from_le_bytes(b[at..at + 8].try_into().unwrap())
}

fn f64_at(b: &[u8], at: usize) -> f64 {
    f64::from_le_bytes(b[at..at + 8].try_into().unwrap())
}

/// Validates magic, version and header checksum.
pub fn decode_header(bytes: &[u8]) -> Result<SnapshotHeader, SnapshotError> {
    if bytes.len() < 12 {
        return Err(SnapshotError::Truncated {
            expected: HEADER_LEN,
            found: bytes.len(),
        });
    }
    if bytes[..8] != MAGIC {
        return Err(SnapshotError::Magic);
    }
    let version = u32_at(bytes, 8);
    if version != VERSION {
        return Err(SnapshotError::UnsupportedVersion { found: version });
    }
    if bytes.len() < HEADER_LEN {
        return Err(SnapshotError::Truncated {
            expected: HEADER_LEN,
            found: bytes.len(),
        });
    }
    if crc32fast::hash(&bytes[..84]) != u32_at(bytes, 84) {
        return Err(SnapshotError::Checksum { which: "header" });
    }
    let length = f64_at(bytes, 16);
    let n = u64_at(bytes, 24) as usize;
    let grid = match bytes[12] {
        0 => GridKind::Radial1D { radius: length, n },
        1 => GridKind::Periodic3D { box_len: length, n },
        tag => return Err(SnapshotError::Invalid(format!("unknown backend tag {tag}"))),
    };
    Ok(SnapshotHeader {
        version,
        grid,
        t: f64_at(bytes, 32),
        params: PhysParams {
            lambda: f64_at(bytes, 40),
            mu: f64_at(bytes, 48),
            s: f64_at(bytes, 56),
            threshold: f64_at(bytes, 64),
        },
        samples: u64_at(bytes, 72),
    })
}

pub fn decode(bytes: &[u8]) -> Result<CoupledState, SnapshotError> {
    let header = decode_header(bytes)?;
    let grid = Grid::new(header.grid).map_err(|e| SnapshotError::Invalid(e.to_string()))?;
    if header.samples != grid.len() as u64 {
        return Err(SnapshotError::Invalid(format!(
            "sample count {} does not match the grid ({})",
            header.samples,
            grid.len()
        )));
    }
    let expected = HEADER_LEN + 32 * grid.len();
    if bytes.len() != expected {
        return Err(SnapshotError::Truncated {
            expected,
            found: bytes.len(),
        });
    }
    let payload = &bytes[HEADER_LEN..];
    if crc32fast::hash(payload) != u32_at(bytes, 80) {
        return Err(SnapshotError::Checksum { which: "payload" });
    }
    let read = |offset: usize| -> Vec<Complex64> {
        (0..grid.len())
            .map(|k| {
                let at = offset + 16 * k;
                Complex64::new(f64_at(payload, at), f64_at(payload, at + 8))
            })
            .collect()
    };
    let invalid = |e: nls_core::Error| SnapshotError::Invalid(e.to_string());
    let u = Field::new(grid.clone(), read(0)).map_err(invalid)?;
    let v = Field::new(grid.clone(), read(16 * grid.len())).map_err(invalid)?;
    CoupledState::at_time(header.t, u, v, header.params).map_err(invalid)
}

pub fn write_snapshot(path: &Path, state: &CoupledState) -> Result<(), CliError> {
    std::fs::write(path, encode(state)).map_err(|e| CliError::io(path, e))
}

pub fn read_snapshot(path: &Path) -> Result<CoupledState, CliError> {
    let bytes = std::fs::read(path).map_err(|e| CliError::io(path, e))?;
    decode(&bytes).map_err(|source| CliError::Snapshot {
        path: path.to_path_buf(),
        source,
    })
}

pub fn read_header(path: &Path) -> Result<SnapshotHeader, CliError> {
    let bytes = std::fs::read(path).map_err(|e| CliError::io(path, e))?;
    decode_header(&bytes).map_err(|source| CliError::Snapshot {
        path: path.to_path_buf(),
        source,
    })
}
