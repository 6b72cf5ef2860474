//! Numerical transport from the Milnor tube to the sphere: the constrained
//! vector field of the fibration-comparison construction, its integration,
//! and ensemble statistics over seeded fibers.

mod config;
mod field;
mod integrate;

pub use config::{make_config, FlowConfig, FlowOverrides};
pub use field::{vector_field, FieldEval, Region};
pub use integrate::{
    ensemble, find_seed, find_tube_seed, psi, transport, tube_ensemble, EnsembleReport,
    Trajectory, TrajectorySample,
};
