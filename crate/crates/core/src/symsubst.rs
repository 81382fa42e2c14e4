//! Symbolic substitutions: assignments of concrete truth values and
//! connective labels to the symbols of a program.
//!
//! Assigning an adjoint pair to `s` fixes both faces of the symbol: `<#s|`
//! becomes the pair's implication and `#&s` its conjunction. Instantiating a
//! symbolic answer and then interpreting it gives the same truth value and
//! substitution as running the goal in the instantiated program; the tuner
//! relies on that.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::error::{SymbolError, SyntaxError};
use crate::lattice::{ConnectiveKind, Registry, TruthValue};
use crate::syntax::{expr_symbols, Body, ConnName, Expr, Program, Rule, SymbolId, SymbolSort, Weight};

#[derive(Clone, Debug, PartialEq)]
pub enum Assignment {
    Value(TruthValue),
    Conjunction(String),
    Disjunction(String),
    Aggregator(String),
    AdjointPair {
        implication: String,
        conjunction: String,
    },
}

impl Assignment {
    pub fn sort(&self) -> SymbolSort {
        match self {
            Assignment::Value(_) => SymbolSort::Weight,
            Assignment::Conjunction(_) => SymbolSort::Conjunction,
            Assignment::Disjunction(_) => SymbolSort::Disjunction,
            Assignment::Aggregator(_) => SymbolSort::Aggregator,
            Assignment::AdjointPair { .. } => SymbolSort::AdjointPair,
        }
    }

    /// The adjoint pair whose implication is `label`.
    pub fn adjoint_pair(reg: &Registry, label: &str) -> Result<Self, SymbolError> {
        Ok(Assignment::AdjointPair {
            implication: label.to_string(),
            conjunction: reg.adjoint_of(label)?.to_string(),
        })
    }

    /// Reads `text` as an assignment for a symbol of `sort`: a decimal for
    /// weights, otherwise a registered label (an optional matching sigil
    /// such as `&prod` or `|godel` is accepted).
    pub fn resolve(name: &str, sort: SymbolSort, text: &str, reg: &Registry) -> Result<Self, SymbolError> {
        let text = text.trim();
        let invalid = || SymbolError::InvalidAssignment {
            name: name.to_string(),
            sort,
            value: text.to_string(),
        };
        let label = |kind: ConnectiveKind| -> Result<String, SymbolError> {
            let bare = text.strip_prefix(kind.sigil()).unwrap_or(text);
            if reg.contains(kind, bare) {
                Ok(bare.to_string())
            } else {
                Err(invalid())
            }
        };
        match sort {
            SymbolSort::Weight => text
                .parse::<f64>()
                .ok()
                .and_then(TruthValue::new)
                .map(Assignment::Value)
                .ok_or_else(invalid),
            SymbolSort::Conjunction => label(ConnectiveKind::Conjunction).map(Assignment::Conjunction),
            SymbolSort::Disjunction => label(ConnectiveKind::Disjunction).map(Assignment::Disjunction),
            SymbolSort::Aggregator => label(ConnectiveKind::Aggregator).map(Assignment::Aggregator),
            SymbolSort::AdjointPair => {
                let imp = label(ConnectiveKind::Implication)?;
                Assignment::adjoint_pair(reg, &imp)
            }
        }
    }

    fn check(&self, name: &str, reg: &Registry) -> Result<(), SymbolError> {
        let ok = match self {
            Assignment::Value(_) => true,
            Assignment::Conjunction(l) => reg.contains(ConnectiveKind::Conjunction, l),
            Assignment::Disjunction(l) => reg.contains(ConnectiveKind::Disjunction, l),
            Assignment::Aggregator(l) => reg.contains(ConnectiveKind::Aggregator, l),
            Assignment::AdjointPair {
                implication,
                conjunction,
            } => reg.adjoint_of(implication).ok() == Some(conjunction.as_str()),
        };
        if ok {
            Ok(())
        } else {
            Err(SymbolError::InvalidAssignment {
                name: name.to_string(),
                sort: self.sort(),
                value: self.to_string(),
            })
        }
    }

    /// Concrete label replacing a symbolic connective of `kind`, if this
    /// assignment fits that position.
    fn label_for(&self, kind: ConnectiveKind) -> Option<&str> {
        match (kind, self) {
            (ConnectiveKind::Conjunction, Assignment::Conjunction(l))
            | (ConnectiveKind::Disjunction, Assignment::Disjunction(l))
            | (ConnectiveKind::Aggregator, Assignment::Aggregator(l)) => Some(l),
            (ConnectiveKind::Conjunction, Assignment::AdjointPair { conjunction, .. }) => Some(conjunction),
            (ConnectiveKind::Implication, Assignment::AdjointPair { implication, .. }) => Some(implication),
            _ => None,
        }
    }
}

impl fmt::Display for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Assignment::Value(v) => write!(f, "{v}"),
            Assignment::Conjunction(l)
            | Assignment::Disjunction(l)
            | Assignment::Aggregator(l)
            | Assignment::AdjointPair { implication: l, .. } => f.write_str(l),
        }
    }
}

/// Ordered `symbol -> assignment` map. May be partial.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SymbolicSubstitution {
    entries: Vec<(String, Assignment)>,
}

impl SymbolicSubstitution {
    pub fn new() -> Self {
        SymbolicSubstitution::default()
    }

    pub fn insert(&mut self, name: impl Into<String>, a: Assignment) -> Result<(), SymbolError> {
        let name = name.into();
        if self.get(&name).is_some() {
            return Err(SymbolError::DuplicateSymbol(name));
        }
        self.entries.push((name, a));
        Ok(())
    }

    pub fn with(mut self, name: impl Into<String>, a: Assignment) -> Self {
        let name = name.into();
        self.entries.retain(|(n, _)| *n != name);
        self.entries.push((name, a));
        self
    }

    pub fn get(&self, name: &str) -> Option<&Assignment> {
        self.entries.iter().find(|(n, _)| n == name).map(|(_, a)| a)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &Assignment)> {
        self.entries.iter().map(|(n, a)| (n.as_str(), a))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Parses `s1=prod, s2=godel, v=0.8` against the symbols of a program.
    /// Names may carry a leading `#`.
    pub fn parse(text: &str, symbols: &[SymbolId], reg: &Registry) -> Result<Self, SymbolError> {
        let mut out = SymbolicSubstitution::new();
        for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (name, value) = item
                .split_once('=')
                .ok_or_else(|| SymbolError::InvalidAssignment {
                    name: item.to_string(),
                    sort: SymbolSort::Weight,
                    value: String::new(),
                })?;
            let name = name.trim().trim_start_matches('#');
            let sym = symbols
                .iter()
                .find(|s| s.name == name)
                .ok_or_else(|| SymbolError::UnknownSymbol(name.to_string()))?;
            out.insert(name, Assignment::resolve(name, sym.sort, value, reg)?)?;
        }
        Ok(out)
    }

    /// Checks sorts against `symbols` and labels against `reg`. Assignments
    /// to names outside `symbols` are rejected.
    pub fn validate(&self, symbols: &[SymbolId], reg: &Registry) -> Result<(), SymbolError> {
        for (name, a) in &self.entries {
            let sym = symbols
                .iter()
                .find(|s| s.name == *name)
                .ok_or_else(|| SymbolError::UnknownSymbol(name.clone()))?;
            if sym.sort != a.sort() {
                return Err(SymbolError::InvalidAssignment {
                    name: name.clone(),
                    sort: sym.sort,
                    value: a.to_string(),
                });
            }
            a.check(name, reg)?;
        }
        Ok(())
    }

    /// Names in `symbols` without an assignment.
    pub fn missing<'s>(&self, symbols: &'s [SymbolId]) -> Vec<&'s str> {
        symbols
            .iter()
            .filter(|s| self.get(&s.name).is_none())
            .map(|s| s.name.as_str())
            .collect()
    }

    pub fn apply_expr(&self, e: &Expr) -> Expr {
        match e {
            Expr::SymValue(s) => match self.get(s) {
                Some(Assignment::Value(v)) => Expr::Value(*v),
                _ => e.clone(),
            },
            Expr::App { kind, name, args } => Expr::App {
                kind: *kind,
                name: self.apply_name(*kind, name),
                args: args.iter().map(|a| self.apply_expr(a)).collect(),
            },
            _ => e.clone(),
        }
    }

    fn apply_name(&self, kind: ConnectiveKind, name: &ConnName) -> ConnName {
        match name {
            ConnName::Symbolic(s) => match self.get(s).and_then(|a| a.label_for(kind)) {
                Some(label) => ConnName::Concrete(label.to_string()),
                None => name.clone(),
            },
            ConnName::Concrete(_) => name.clone(),
        }
    }

    pub fn apply_rule(&self, r: &Rule) -> Rule {
        Rule {
            head: r.head.clone(),
            body: r.body.as_ref().map(|b| Body {
                implication: self.apply_name(ConnectiveKind::Implication, &b.implication),
                expr: self.apply_expr(&b.expr),
            }),
            weight: match &r.weight {
                Weight::Symbolic(s) => match self.get(s) {
                    Some(Assignment::Value(v)) => Weight::Value(*v),
                    _ => r.weight.clone(),
                },
                w => w.clone(),
            },
        }
    }

    pub fn apply_program(&self, p: &Program) -> Program {
        Program {
            rules: p.rules.iter().map(|r| self.apply_rule(r)).collect(),
        }
    }
}

/// `s=luka, disj=prod, v=0.3`
impl fmt::Display for SymbolicSubstitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (n, a)) in self.entries.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{n}={a}")?;
        }
        Ok(())
    }
}

pub fn sym_of(p: &Program) -> Result<Vec<SymbolId>, SyntaxError> {
    p.symbols()
}

pub fn sym_of_expr(e: &Expr) -> Result<Vec<SymbolId>, SyntaxError> {
    expr_symbols(e)
}

pub fn apply_theta(theta: &SymbolicSubstitution, e: &Expr) -> Expr {
    theta.apply_expr(e)
}

pub fn apply_theta_program(theta: &SymbolicSubstitution, p: &Program) -> Program {
    theta.apply_program(p)
}

/// Finite candidate assignments per symbol.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct DomainSpec {
    entries: Vec<(SymbolId, Vec<Assignment>)>,
}

impl DomainSpec {
    /// Every domain must be nonempty and match its symbol's sort.
    pub fn new(entries: Vec<(SymbolId, Vec<Assignment>)>) -> Result<Self, SymbolError> {
        for (i, (sym, values)) in entries.iter().enumerate() {
            if values.is_empty() {
                return Err(SymbolError::EmptyDomain(sym.name.clone()));
            }
            if entries[..i].iter().any(|(s, _)| s.name == sym.name) {
                return Err(SymbolError::DuplicateSymbol(sym.name.clone()));
            }
            if let Some(bad) = values.iter().find(|a| a.sort() != sym.sort) {
                return Err(SymbolError::InvalidAssignment {
                    name: sym.name.clone(),
                    sort: sym.sort,
                    value: bad.to_string(),
                });
            }
        }
        Ok(DomainSpec { entries })
    }

    /// Builds a spec from textual declarations (`name`, item texts), ordered
    /// by `symbols` (usually the program's first-occurrence order).
    pub fn from_declarations<N: AsRef<str>, I: AsRef<str>>(
        decls: &[(N, Vec<I>)],
        symbols: &[SymbolId],
        reg: &Registry,
    ) -> Result<Self, SymbolError> {
        for (name, _) in decls {
            let name = name.as_ref();
            if !symbols.iter().any(|s| s.name == name) {
                return Err(SymbolError::UnknownSymbol(name.to_string()));
            }
            if decls.iter().filter(|(n, _)| n.as_ref() == name).count() > 1 {
                return Err(SymbolError::DuplicateSymbol(name.to_string()));
            }
        }
        let mut entries = Vec::new();
        for sym in symbols {
            let Some((_, items)) = decls.iter().find(|(n, _)| n.as_ref() == sym.name) else {
                continue;
            };
            let values = items
                .iter()
                .map(|t| Assignment::resolve(&sym.name, sym.sort, t.as_ref(), reg))
                .collect::<Result<Vec<_>, _>>()?;
            entries.push((sym.clone(), values));
        }
        DomainSpec::new(entries)
    }

    pub fn symbols(&self) -> impl Iterator<Item = &SymbolId> {
        self.entries.iter().map(|(s, _)| s)
    }

    pub fn domain(&self, name: &str) -> Option<&[Assignment]> {
        self.entries
            .iter()
            .find(|(s, _)| s.name == name)
            .map(|(_, v)| v.as_slice())
    }

    /// Number of candidates; saturates at `usize::MAX`.
    pub fn size(&self) -> usize {
        self.entries
            .iter()
            .fold(1usize, |acc, (_, v)| acc.saturating_mul(v.len()))
    }

    /// Cartesian product in lexicographic order: the first symbol varies
    /// slowest, the last fastest, each following its domain's order.
    pub fn enumerate(&self) -> Candidates<'_> {
        Candidates {
            spec: self,
            digits: alloc::vec![0; self.entries.len()],
            done: false,
        }
    }
}

/// Iterator returned by [`DomainSpec::enumerate`].
#[derive(Clone, Debug)]
pub struct Candidates<'a> {
    spec: &'a DomainSpec,
    digits: Vec<usize>,
    done: bool,
}

impl Iterator for Candidates<'_> {
    type Item = SymbolicSubstitution;

    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        let entries = &self.spec.entries;
        let theta = SymbolicSubstitution {
            entries: entries
                .iter()
                .zip(&self.digits)
                .map(|((sym, values), &d)| (sym.name.clone(), values[d].clone()))
                .collect(),
        };
        // mixed-radix increment, last position fastest
        let mut i = entries.len();
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            self.digits[i] += 1;
            if self.digits[i] < entries[i].1.len() {
                break;
            }
            self.digits[i] = 0;
        }
        Some(theta)
    }
}

pub fn enumerate(spec: &DomainSpec) -> Candidates<'_> {
    spec.enumerate()
}
