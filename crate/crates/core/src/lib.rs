//! Exact inference for energies that add a pattern-based chain cost to a
//! weighted context-free derivation cost.
//!
//! The core types are generic over the scalar ([`Scalar`], `f32` or `f64`);
//! the aliases below fix it to `f64`.

pub mod bounds;
pub mod costs;
pub mod error;
pub mod general;
pub mod grammar;
pub mod instance;
pub mod interaction;
pub mod oracle;
pub mod pairs;
pub mod pattern;
pub mod random;
pub mod scalar;
pub mod semiring;
pub mod weight;

pub use costs::CostTables;
pub use error::{Error, Result};
pub use general::{extract_argmin, log_partition, minimize, run_algorithm1, score_labeling, Argmin};
pub use grammar::derivation::Derivation;
pub use grammar::interaction::{compile_interaction_grammar, InteractionGrammar};
pub use grammar::{CnfGrammar, RuleBody};
pub use instance::{Grammar, Instance, Prepared};
pub use interaction::{
    extract_interaction_argmin, run_algorithm2, run_d1_earley, run_d1_single_source, Algorithm2Options, ApspBackend,
};
pub use pattern::{Alphabet, Pattern, PatternIndex, PatternWeights, Symbol};
pub use scalar::Scalar;
pub use semiring::{LogSum, MaxProduct, Tropical, ValueAlgebra};
pub use weight::{SpanTable, Weight};

pub type Weights = PatternWeights<f64>;
pub type Tables = CostTables<f64>;
pub type Cnf = CnfGrammar<f64>;
pub type Interaction = InteractionGrammar<f64>;
pub type Problem = Instance<f64>;
