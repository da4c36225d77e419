//! Verification machinery: seeded random pairs of prescribed rank, the
//! property suite run over them, and parameter sweeps over the two diagonal
//! model problems.

pub mod ensemble;
pub mod suite;
pub mod sweep;

pub use ensemble::{default_specs, gen_fixed_rank, gen_pair, EnsembleSpec, PairMode};
pub use suite::{run_property_suite, run_property_suite_with, PropertyResult, SuiteResult};
pub use sweep::{sweep_example, Example, SweepSpec, SweepTable};
