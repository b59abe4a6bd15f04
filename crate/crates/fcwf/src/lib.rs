//! Structural analysis of free-choice place/transition nets.
//!
//! The library decides well-formedness (existence of a live and bounded
//! marking) of free-choice nets by constructing T-component covers or proper
//! semi-T-component witnesses, computes maximal traps and siphon-based
//! liveness verdicts, and ships an explicit-state oracle that cross-validates
//! every structural result at desk scale.

pub mod components;
pub mod export;
pub mod format;
pub mod freechoice;
pub mod net;
pub mod oracle;
pub mod scc;
pub mod siphons;
pub mod wellformed;

pub use net::{FiringSequence, Marking, Net, NetError, NodeId, NodeKind};
pub use scc::SccDecomposition;
