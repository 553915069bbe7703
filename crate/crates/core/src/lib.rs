//! Requirements-based test generation for deterministic finite state machines.
//!
//! Starting from a reference model and a conjunction of output requirements
//! `R(q, x, Z)`, the crate builds
//!
//! * exhaustive suites: an implementation that passes with exact output
//!   comparison is guaranteed to satisfy the requirement, and
//! * complete suites: an implementation passes with per-step output-set
//!   membership exactly when it satisfies the requirement,
//!
//! both relative to a fault domain of machines with at most `n + extra`
//! states. Oracles, a suite runner and brute-force experiments are included
//! so the guarantees can be checked on small universes.

pub mod abstraction;
pub mod alphabet;
pub mod analysis;
pub mod complete;
pub mod error;
pub mod exhaustive;
pub mod experiment;
pub mod fixtures;
pub mod format;
pub mod harness;
pub mod machine;
pub mod mutation;
pub mod oracle;
pub mod requirement;
pub mod suite;
pub mod trace;

pub use abstraction::{build_m1, build_m1_prime, build_m2, AbstractDfsm, ClassMap, NondetAbstraction};
pub use alphabet::{Alphabet, Symbol};
pub use analysis::{
    distinguishing_trace, equivalence_classes, language_equivalent, minimize, state_cover,
    Minimized, StateCover,
};
pub use complete::{filter_requirement_suite, reduction_suite, ReductionSuite};
pub use error::{
    AlphabetError, AlphabetMismatch, Error, ModelError, OracleError, ParseError, ParseErrorKind,
    RequirementError, SuiteError,
};
pub use exhaustive::{compute_pair_sets, exhaustive_req_suite, h_suite, verify_structure, PairSets};
pub use experiment::{
    coverage_experiment, enumerate_machines, CoverageReport, MachineSource, MachineUniverse,
    MutantSample, Strategy,
};
pub use format::{parse_fsm, serialize_fsm};
pub use harness::{run_suite_equiv, run_suite_reduction, CaseResult, Expected, SuiteChecker, SuiteRun};
pub use machine::{align, check_properties, Dfsm, Fsm, Properties, State, Transition};
pub use mutation::{mutate, SplitMix64};
pub use oracle::{
    is_requirement_trace, satisfies_direct, satisfies_oracle, satisfies_via_reduction,
    RequirementOracle,
};
pub use requirement::{
    parse_requirement, requirement_from_abstraction, serialize_requirement, validate_requirement,
    CompositeRequirement, ElementaryRequirement, OutputSet,
};
pub use suite::{expected_results, Method, TestSuite, TraceTree};
pub use trace::{InputTrace, IoTrace};
