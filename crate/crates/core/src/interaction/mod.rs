//! Inference specialized to interaction grammars.

pub mod algorithm2;
pub mod apsp;
pub mod earley;
pub mod m0;
pub mod parse;
pub mod single_source;

pub use algorithm2::{
    extract_interaction_argmin, run_algorithm2, Algorithm2Options, InteractionArgmin, InteractionRun,
    InteractionStats,
};
pub use apsp::{apsp_dag, apsp_in_place, ApspBackend, ApspStats};
pub use earley::{run_d1_earley, EarleyStats};
pub use m0::compute_m0;
pub use parse::{Block, InteractionParse, ParseItem};
pub use single_source::{run_d1_single_source, SingleSourceStats};
