//! Time evolution of the coupled system by Strang splitting.

mod duhamel;
mod evolve;
mod propagate;
mod scaling;
mod state;
mod stepper;

pub use duhamel::duhamel_residual;
pub(crate) use evolve::interaction_density;
pub use evolve::{evolve, Component, Observer, Slab, Trajectory};
pub use propagate::{free_propagate, safe_horizon};
pub use scaling::{choose_rescaling, rescale, rescale_onto};
pub use state::CoupledState;
pub use stepper::{strang_step, ScalarStepper, StrangStepper, MASS_JUMP_LIMIT};
