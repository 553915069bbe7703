use std::fmt;

use thiserror::Error;

/// Problems with an alphabet definition.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlphabetError {
    #[error("alphabet symbols must be non-empty")]
    EmptySymbol,
    #[error("duplicate alphabet symbol `{0}`")]
    DuplicateSymbol(String),
}

/// Structural problems found while assembling a machine programmatically.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("a machine needs at least one state")]
    NoStates,
    #[error("duplicate state name `{0}`")]
    DuplicateState(String),
    #[error("state index {0} out of range")]
    StateOutOfRange(usize),
    #[error("input index {0} out of range")]
    InputOutOfRange(usize),
    #[error("output index {0} out of range")]
    OutputOutOfRange(usize),
    #[error("table has {found} cells, expected {expected}")]
    TableSize { expected: usize, found: usize },
    #[error("state `{state}` has more than one transition for input `{input}`")]
    NotDeterministic { state: String, input: String },
    #[error("state `{state}` has no transition for input `{input}`")]
    NotCompletelySpecified { state: String, input: String },
    #[error("output `{0}` is not part of the target output alphabet")]
    UnknownOutput(String),
    #[error(transparent)]
    Alphabet(#[from] AlphabetError),
}

/// What went wrong on a given line of a model file.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("empty model")]
    Empty,
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("duplicate input `{0}` in header")]
    DuplicateInput(String),
    #[error("duplicate state row `{0}`")]
    DuplicateStateRow(String),
    #[error("unknown target state `{0}`")]
    UnknownTargetState(String),
    #[error("non-deterministic cell (several alternatives)")]
    NonDeterministicCell,
    #[error("missing cell (machine is not completely specified)")]
    MissingCell,
    #[error("no data rows")]
    NoStates,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

impl ParseError {
    pub(crate) fn new(line: usize, column: usize, kind: ParseErrorKind) -> Self {
        ParseError { line, column, kind }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.column, self.kind)
    }
}

impl std::error::Error for ParseError {}

/// Two machines (or a machine and a trace) do not share an alphabet.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("alphabet mismatch: {0}")]
pub struct AlphabetMismatch(pub String);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RequirementError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("composite requirement has no elementary requirements")]
    Empty,
    #[error("unknown state `{0}`")]
    UnknownState(String),
    #[error("unknown input `{0}`")]
    UnknownInput(String),
    #[error("unknown output `{0}`")]
    UnknownOutput(String),
    #[error("R({state},{input},..): allowed set must not be empty")]
    EmptyAllowedSet { state: String, input: String },
    #[error("R({state},{input},..): allowed set equals the full output alphabet")]
    AllowedSetIsFullAlphabet { state: String, input: String },
    #[error("R({state},{input},..): expected output `{expected}` is not allowed")]
    ExpectedOutputNotAllowed {
        state: String,
        input: String,
        expected: String,
    },
    #[error("duplicate requirement for state `{state}` and input `{input}`")]
    DuplicateStateInputPair { state: String, input: String },
    #[error("abstraction does not match the reference model: {0}")]
    AbstractionMismatch(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SuiteError {
    #[error("line {line}: unknown input `{symbol}`")]
    UnknownInput { line: usize, symbol: String },
    #[error("SUT bound m = {m} is below the number of abstract states {classes}")]
    BoundBelowClasses { m: usize, classes: usize },
    #[error("suite would contain about {estimate} cases, above the limit of {limit}")]
    TooLarge { estimate: u128, limit: u128 },
    #[error("reference model is not prime: {states} states, {prime} after minimization")]
    NotPrime { states: usize, prime: usize },
    #[error("generated suite violates its structural conditions: {0}")]
    StructuralViolation(String),
    #[error("universe of {size} machines exceeds the cap of {cap}")]
    UniverseTooLarge { size: u128, cap: u128 },
    #[error("machine with {states} states is outside the fault domain (at most {bound})")]
    OutsideFaultDomain { states: usize, bound: usize },
    #[error(transparent)]
    Alphabet(#[from] AlphabetMismatch),
    #[error(transparent)]
    Requirement(#[from] RequirementError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error(transparent)]
    Alphabet(#[from] AlphabetMismatch),
    #[error(transparent)]
    Requirement(#[from] RequirementError),
    #[error("oracle routes disagree: reduction says {reduction}, direct definition says {direct}")]
    RoutesDisagree { reduction: String, direct: String },
}

/// Umbrella error for front ends.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Alphabet(#[from] AlphabetMismatch),
    #[error(transparent)]
    Requirement(#[from] RequirementError),
    #[error(transparent)]
    Suite(#[from] SuiteError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
}
