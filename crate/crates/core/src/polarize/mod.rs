//! Channel combining and splitting, exact synthesized channels and the scalar
//! evolution of √F along the polarization tree.

mod bhat;
mod convergence;
mod evolve;
mod invariance;
mod synth;
mod table;


pub use bhat::Bhat;
pub use convergence::{
    simulate_convergence_theorem, ConvergenceEstimate, ConvergenceProcessConfig, ProcessSource,
};
pub(crate) use evolve::check_beta;
pub use evolve::{
    evolve_scalar, evolve_scalar_with, fractions_of, polarization_fractions, track_index,
    trajectory_csv, EvolveMode, EvolveOptions, PolarizationFractions, ScalarTracker, TrackerKind,
    DEFAULT_ALPHABET_CAP, MAX_LEVEL,
};
pub use invariance::{verify_pure_state_invariance, InvarianceCheck};
pub(crate) use synth::ProductOutputs;
pub use synth::{
    combine_minus, combine_plus, recursive_register_map, synthesize, synthesize_recursive,
    SynthesizedChannelExact,
};
pub use table::{classical_reduce, ClassicalReduction, ClassicalTable};
