//! Encoding, successive-cancellation decoding (classical tables and Helstrom
//! cascades) and the coherent entanglement-generation protocol.

mod classical;
pub mod encoder;
mod protocol;
mod quantum;
mod sim;


pub use classical::ClassicalScDecoder;
pub use encoder::{
    bit_reverse, coherent_encode, decode_codeword, encode, encode_word, level_of,
    MAX_COHERENT_BLOCKLENGTH,
};
pub use protocol::{
    average_branch_overlap, ebit_rate_trend, run_coherent_protocol, select_phases, CoherentDecoder,
    EbitRate, PhaseAssignment, ProtocolTrace, MAX_PHASE_BLOCKLENGTH, MAX_PROTOCOL_BLOCKLENGTH,
};
pub use quantum::{
    sc_decode_quantum, DecoderState, HelstromCascade, QuantumDecoding, MAX_QUANTUM_BLOCKLENGTH,
};
pub use sim::{monte_carlo_classical, monte_carlo_quantum, MonteCarloRun, PureEnsembles};
