//! Desk-scale experiments: back-propagated profiles, scattering reports,
//! modified-energy increment sweeps, and consistency harnesses.

mod harness;
mod profile;
mod sweep;

pub use harness::{morawetz_check, reduction_check, MorawetzReport, MorawetzRun, ReductionReport};
pub use profile::{inverse_profile, l5_growth_last_quarter, scattering_report, ScatteringReport, Verdict, L5_SATURATION};
pub use sweep::{increment_sweep, SweepMeta, SweepRow, SweepTable};
