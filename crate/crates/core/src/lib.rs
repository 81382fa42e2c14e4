//! Symbolic multi-adjoint logic programming.
//!
//! Fuzzy logic programs whose rule weights and connectives may be left
//! unknown (`#v`, `#&s`, `<#s|`, ...). Goals are run to symbolic answers by
//! an admissible stage followed by an interpretive stage; the unknowns can
//! then be instantiated directly in those answers, which is what makes
//! [`tuner::tune`] cheap: each test case is executed once and every
//! candidate assignment only re-evaluates its answer expression.
//!
//! The crate is `no_std` and needs only `alloc`.

#![no_std]

extern crate alloc;

pub mod engine;
pub mod error;
pub mod lattice;
pub mod symsubst;
pub mod syntax;
pub mod tuner;
pub mod unify;

pub use engine::{solve, Answer, Classification, Engine, State, Trace};
pub use error::{EngineError, LatticeError, ParseError, SymbolError, SyntaxError, TuneError};
pub use lattice::{builtin_registry, ConnectiveDef, ConnectiveKind, Registry, TruthValue};
pub use symsubst::{Assignment, DomainSpec, SymbolicSubstitution};
pub use syntax::{parse_goal, parse_program, Atom, Expr, Program, Rule, SymbolId, SymbolSort, Term};
pub use tuner::{tune, TestCase, TuningReport};
pub use unify::{mgu, Substitution};
