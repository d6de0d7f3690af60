//! Polar coding for binary-input classical-quantum channels.
//!
//! The crate is layered bottom-up:
//!
//! * [`qmath`] dense complex linear algebra and quantum-information primitives
//! * [`channels`] the five channel families, their complements and capacities
//! * [`polarize`] channel combining, exact synthesis and scalar evolution
//! * [`wiretap`] the A/B/X/Y partition with rate, security and reliability bounds
//! * [`qpolar`] encoders, successive-cancellation decoders and the coherent protocol
//!
//! Shared types are re-exported at the crate root.

pub mod channels;
pub mod config;
pub mod error;
pub mod polarize;
pub mod qmath;
pub mod qpolar;
pub mod report;
pub mod wiretap;

pub use channels::{ChannelFamilySpec, CqChannel, DegradingMap, IsometricChannel};
pub use config::Tolerances;
pub use error::{Error, Result};
pub use polarize::{Bhat, EvolveMode, ScalarTracker};
pub use qmath::{ComplexMatrix, DensityOperator, PureState, C64};
pub use qpolar::{PhaseAssignment, ProtocolTrace};
pub use wiretap::{PolarPartition, SetLabel, WiretapCode};
