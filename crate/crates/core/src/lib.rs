//! Synthesis of bounded Petri nets of restricted type from transition systems.
//!
//! The crate covers the five net-type families, regions and separation
//! atoms, a polynomial decider for the group families, an exhaustive
//! oracle, and the gadget constructions used for the hardness reductions.

pub mod io;
pub mod modsolve;
pub mod net_type;
pub mod oracle;
pub mod petri;
pub mod polysynth;
pub mod reduction;
pub mod region;
pub mod ts;

pub use net_type::{Family, NetType, TauEvent};
pub use region::{Decision, Problem, Region, WitnessSet};
pub use ts::{Arc, AtomKind, Carrier, SeparationAtom, TransitionSystem, TsBuilder};
