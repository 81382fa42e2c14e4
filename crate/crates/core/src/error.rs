use alloc::string::String;
use alloc::vec::Vec;

use thiserror::Error;

use crate::lattice::ConnectiveKind;
use crate::syntax::SymbolSort;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("unknown {kind} `{name}`")]
    UnknownConnective { kind: ConnectiveKind, name: String },
    #[error("connective `{name}` of arity {arity} applied to {got} argument(s)")]
    ArityMismatch { name: String, arity: usize, got: usize },
    #[error("{kind} `{name}` is already registered")]
    DuplicateConnective { kind: ConnectiveKind, name: String },
    #[error("implication `{0}` must be registered together with its adjoint conjunction")]
    UnpairedImplication(String),
    #[error("connective `{name}` returned a value outside [0,1]")]
    NotATruthValue { name: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{line}:{column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SyntaxError {
    #[error("parse error at {0}")]
    Parse(ParseError),
    #[error("{line}:{column}: implication inside a rule body or goal")]
    ImplicationInBody { line: usize, column: usize },
    #[error("symbol `#{name}` used both as {first} and as {second}")]
    SortClash {
        name: String,
        first: SymbolSort,
        second: SymbolSort,
    },
}

impl From<ParseError> for SyntaxError {
    fn from(e: ParseError) -> Self {
        SyntaxError::Parse(e)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("derivation exceeded the limit of {0} admissible steps")]
    DepthLimitExceeded(usize),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("trace does not replay: {0}")]
    Replay(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SymbolError {
    #[error("domain of `#{0}` is empty")]
    EmptyDomain(String),
    #[error("`#{0}` does not occur in the program")]
    UnknownSymbol(String),
    #[error("`#{name}` is a {sort} symbol; `{value}` is not a valid assignment")]
    InvalidAssignment {
        name: String,
        sort: SymbolSort,
        value: String,
    },
    #[error("`#{0}` is assigned more than once")]
    DuplicateSymbol(String),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum TuneError {
    #[error("no test cases given")]
    NoTestCases,
    #[error("domain spec misses symbol(s): {}", .0.join(", "))]
    IncompleteDomain(Vec<String>),
    #[error("test case {case}: `{expr}` does not reduce to a truth value")]
    NonGroundResult { case: usize, expr: String },
    #[error("test case {case}: expected substitution {expected}, computed {computed}")]
    TestCaseSubstMismatch {
        case: usize,
        expected: String,
        computed: String,
    },
    #[error("test case {case}: {source}")]
    Engine { case: usize, source: EngineError },
    #[error(transparent)]
    Symbol(#[from] SymbolError),
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
}
