//! Terms, truth expressions, rules and programs.
//!
//! Expressions mix truth values, atoms, and applications of concrete or
//! symbolic connectives. Symbolic objects are written with a `#` prefix in
//! the surface syntax: `#v` (value), `#&s` / `#|s` / `#@s` (connectives) and
//! `<#s|` (implication of the symbolic adjoint pair `s`).

mod parse;
mod render;

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

pub use parse::{parse_atom, parse_goal, parse_program, parse_substitution, parse_term};

use crate::error::SyntaxError;
use crate::lattice::{ConnectiveKind, TruthValue};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Var(String),
    /// Function application; constants have no arguments.
    App(String, Vec<Term>),
}

impl Term {
    pub fn var(name: impl Into<String>) -> Self {
        Term::Var(name.into())
    }

    pub fn constant(name: impl Into<String>) -> Self {
        Term::App(name.into(), Vec::new())
    }

    pub fn occurs(&self, var: &str) -> bool {
        match self {
            Term::Var(v) => v == var,
            Term::App(_, args) => args.iter().any(|t| t.occurs(var)),
        }
    }

    /// Pushes variables not yet in `out`, left to right.
    pub fn collect_vars(&self, out: &mut Vec<String>) {
        match self {
            Term::Var(v) => {
                if !out.contains(v) {
                    out.push(v.clone());
                }
            }
            Term::App(_, args) => args.iter().for_each(|t| t.collect_vars(out)),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom {
    pub predicate: String,
    pub args: Vec<Term>,
}

impl Atom {
    pub fn new(predicate: impl Into<String>, args: Vec<Term>) -> Self {
        Atom {
            predicate: predicate.into(),
            args,
        }
    }

    pub fn collect_vars(&self, out: &mut Vec<String>) {
        self.args.iter().for_each(|t| t.collect_vars(out));
    }
}

/// Name of a connective occurrence.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ConnName {
    Concrete(String),
    Symbolic(String),
}

impl ConnName {
    pub fn concrete(label: impl Into<String>) -> Self {
        ConnName::Concrete(label.into())
    }

    pub fn symbolic(name: impl Into<String>) -> Self {
        ConnName::Symbolic(name.into())
    }

    pub fn is_symbolic(&self) -> bool {
        matches!(self, ConnName::Symbolic(_))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Value(TruthValue),
    /// A symbolic truth degree `#v`.
    SymValue(String),
    Atom(Atom),
    App {
        kind: ConnectiveKind,
        name: ConnName,
        args: Vec<Expr>,
    },
}

/// Path from the root of an expression: the i-th entry selects argument i.
pub type Position = Vec<usize>;

impl Expr {
    pub fn value(x: f64) -> Self {
        Expr::Value(TruthValue::new(x).expect("truth value in [0,1]"))
    }

    pub fn app(kind: ConnectiveKind, name: ConnName, args: Vec<Expr>) -> Self {
        Expr::App { kind, name, args }
    }

    pub fn as_value(&self) -> Option<TruthValue> {
        match self {
            Expr::Value(v) => Some(*v),
            _ => None,
        }
    }

    pub fn at(&self, pos: &[usize]) -> Option<&Expr> {
        match pos.split_first() {
            None => Some(self),
            Some((&i, rest)) => match self {
                Expr::App { args, .. } => args.get(i)?.at(rest),
                _ => None,
            },
        }
    }

    pub fn at_mut(&mut self, pos: &[usize]) -> Option<&mut Expr> {
        match pos.split_first() {
            None => Some(self),
            Some((&i, rest)) => match self {
                Expr::App { args, .. } => args.get_mut(i)?.at_mut(rest),
                _ => None,
            },
        }
    }

    /// Position and atom of the leftmost atom in depth-first order.
    pub fn leftmost_atom(&self) -> Option<(Position, &Atom)> {
        fn go<'a>(e: &'a Expr, path: &mut Position) -> Option<&'a Atom> {
            match e {
                Expr::Atom(a) => Some(a),
                Expr::App { args, .. } => {
                    for (i, arg) in args.iter().enumerate() {
                        path.push(i);
                        if let Some(a) = go(arg, path) {
                            return Some(a);
                        }
                        path.pop();
                    }
                    None
                }
                _ => None,
            }
        }
        let mut path = Vec::new();
        go(self, &mut path).map(|a| (path, a))
    }

    pub fn atom_count(&self) -> usize {
        match self {
            Expr::Atom(_) => 1,
            Expr::App { args, .. } => args.iter().map(Expr::atom_count).sum(),
            _ => 0,
        }
    }

    pub fn is_atom_free(&self) -> bool {
        self.atom_count() == 0
    }

    pub fn collect_vars(&self, out: &mut Vec<String>) {
        match self {
            Expr::Atom(a) => a.collect_vars(out),
            Expr::App { args, .. } => args.iter().for_each(|e| e.collect_vars(out)),
            _ => {}
        }
    }

    pub fn vars(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_vars(&mut out);
        out
    }

    /// True if no symbolic value or connective occurs.
    pub fn is_concrete(&self) -> bool {
        match self {
            Expr::SymValue(_) => false,
            Expr::App { name, args, .. } => !name.is_symbolic() && args.iter().all(Expr::is_concrete),
            _ => true,
        }
    }

    /// Rejects implications and empty argument lists anywhere inside.
    pub fn check_body(&self) -> Result<(), BodyViolation> {
        match self {
            Expr::App { kind, args, .. } => {
                if *kind == ConnectiveKind::Implication {
                    return Err(BodyViolation::Implication);
                }
                if args.is_empty() {
                    return Err(BodyViolation::EmptyArgs);
                }
                args.iter().try_for_each(Expr::check_body)
            }
            _ => Ok(()),
        }
    }

    pub(crate) fn collect_symbols(&self, table: &mut SymbolTable) -> Result<(), SyntaxError> {
        match self {
            Expr::SymValue(name) => table.add(name, SymbolSort::Weight),
            Expr::App { kind, name, args } => {
                if let ConnName::Symbolic(s) = name {
                    table.add(s, SymbolSort::of_connective(*kind))?;
                }
                args.iter().try_for_each(|e| e.collect_symbols(table))
            }
            _ => Ok(()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BodyViolation {
    Implication,
    EmptyArgs,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Weight {
    Value(TruthValue),
    Symbolic(String),
}

impl Weight {
    pub fn to_expr(&self) -> Expr {
        match self {
            Weight::Value(v) => Expr::Value(*v),
            Weight::Symbolic(s) => Expr::SymValue(s.clone()),
        }
    }
}

/// `<label| expr` part of a rule.
#[derive(Clone, Debug, PartialEq)]
pub struct Body {
    pub implication: ConnName,
    pub expr: Expr,
}

/// `head <label| body with weight`, or a fact `head with weight`
/// (`body == None`).
#[derive(Clone, Debug, PartialEq)]
pub struct Rule {
    pub head: Atom,
    pub body: Option<Body>,
    pub weight: Weight,
}

impl Rule {
    pub fn fact(head: Atom, weight: Weight) -> Self {
        Rule {
            head,
            body: None,
            weight,
        }
    }

    pub fn is_fact(&self) -> bool {
        self.body.is_none()
    }

    pub fn vars(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.head.collect_vars(&mut out);
        if let Some(b) = &self.body {
            b.expr.collect_vars(&mut out);
        }
        out
    }

    fn collect_symbols(&self, table: &mut SymbolTable) -> Result<(), SyntaxError> {
        if let Some(body) = &self.body {
            if let ConnName::Symbolic(s) = &body.implication {
                table.add(s, SymbolSort::AdjointPair)?;
            }
            body.expr.collect_symbols(table)?;
        }
        if let Weight::Symbolic(s) = &self.weight {
            table.add(s, SymbolSort::Weight)?;
        }
        Ok(())
    }
}

/// Rules in textual order, which is also the search order.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Program {
    pub rules: Vec<Rule>,
}

impl Program {
    pub fn new(rules: Vec<Rule>) -> Self {
        Program { rules }
    }

    /// Symbolic identifiers in first-occurrence order, with their sorts.
    pub fn symbols(&self) -> Result<Vec<SymbolId>, SyntaxError> {
        let mut table = SymbolTable::default();
        for r in &self.rules {
            r.collect_symbols(&mut table)?;
        }
        Ok(table.into_vec())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SymbolSort {
    Weight,
    Conjunction,
    Disjunction,
    Aggregator,
    AdjointPair,
}

impl SymbolSort {
    pub fn of_connective(kind: ConnectiveKind) -> Self {
        match kind {
            ConnectiveKind::Conjunction => SymbolSort::Conjunction,
            ConnectiveKind::Disjunction => SymbolSort::Disjunction,
            ConnectiveKind::Aggregator => SymbolSort::Aggregator,
            ConnectiveKind::Implication => SymbolSort::AdjointPair,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            SymbolSort::Weight => "weight",
            SymbolSort::Conjunction => "conjunction",
            SymbolSort::Disjunction => "disjunction",
            SymbolSort::Aggregator => "aggregator",
            SymbolSort::AdjointPair => "adjoint-pair",
        }
    }
}

impl fmt::Display for SymbolSort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SymbolId {
    pub name: String,
    pub sort: SymbolSort,
}

impl fmt::Display for SymbolId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.name, self.sort)
    }
}

/// First-occurrence-ordered symbol set with sort checking. A name used both
/// as `<#s|` and `#&s` is a single adjoint-pair symbol.
#[derive(Clone, Debug, Default)]
pub(crate) struct SymbolTable {
    symbols: Vec<SymbolId>,
}

impl SymbolTable {
    pub(crate) fn add(&mut self, name: &str, sort: SymbolSort) -> Result<(), SyntaxError> {
        use SymbolSort::{AdjointPair, Conjunction};

        let Some(existing) = self.symbols.iter_mut().find(|s| s.name == name) else {
            self.symbols.push(SymbolId {
                name: name.into(),
                sort,
            });
            return Ok(());
        };
        match (existing.sort, sort) {
            (a, b) if a == b => Ok(()),
            (AdjointPair, Conjunction) => Ok(()),
            (Conjunction, AdjointPair) => {
                existing.sort = AdjointPair;
                Ok(())
            }
            (first, second) => Err(SyntaxError::SortClash {
                name: name.into(),
                first,
                second,
            }),
        }
    }

    pub(crate) fn into_vec(self) -> Vec<SymbolId> {
        self.symbols
    }
}

/// Symbols of a single expression (e.g. a computed answer).
pub fn expr_symbols(e: &Expr) -> Result<Vec<SymbolId>, SyntaxError> {
    let mut table = SymbolTable::default();
    e.collect_symbols(&mut table)?;
    Ok(table.into_vec())
}
