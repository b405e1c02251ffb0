//! Instance files, the solver front end, the synthetic benchmark family and
//! the timing harness behind the `gpb` binary.

pub mod bench;
pub mod error;
pub mod format;
pub mod solve;
pub mod synth;

pub use error::CliError;
pub use format::InstanceFile;
