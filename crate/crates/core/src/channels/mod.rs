//! Channel families with classical environments, their complements,
//! degrading maps and capacity quantities.
//!
//! Every family is built as an isometry `V : C^{d_in} → B ⊗ E` (Bob factor
//! first). The stored input basis is the one in which Eve's two outputs
//! commute; cq channels are always read off in that basis.

mod capacity;
mod cq;
mod degrading;
mod families;
mod isometric;
mod spec;

pub use capacity::{
    capacity_ratio_curve, coherent_info_at_prior, maximize_coherent_info,
    quantum_capacity_degradable, CapacityRow, RowStatus,
};
pub use cq::{symmetric_holevo, CqChannel};
pub use degrading::{standard_degrading_map, verify_degrading_map, DegradingMap};
pub use families::build_channel;
pub use isometric::{
    bob_channel, check_classical_environment, coherent_info_entropic, eve_channel,
    symmetric_coherent_info, IsometricChannel,
};
pub use spec::{Axis, ChannelFamilySpec, Family};
