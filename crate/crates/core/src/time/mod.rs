//! Time integration: two-stage SDIRK-SSP schemes and forward Euler.

mod dense;
mod integrate;
mod sdirk;
mod system;

pub use dense::{DenseLinearSystem, ForcingFn};
pub use integrate::{integrate, ssp_timestep_bound, step_count, Trajectory};
pub use sdirk::{
    forward_euler_step, sdirk_step, ButcherTableau, ForwardEuler, SdirkStepper, StepperConfig,
    TimeStepper,
};
pub use system::SemidiscreteSystem;
