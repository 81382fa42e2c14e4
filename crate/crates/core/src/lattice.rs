//! The multi-adjoint lattice `<[0,1], <=>` and its connectives.
//!
//! A [`Registry`] maps `(kind, label)` to a truth function. The builtin
//! registry carries the product, Gödel and Łukasiewicz adjoint pairs and
//! disjunctions, plus the `@aver` aggregator. Binary connectives applied to
//! more than two arguments are right-nested: `@(x1, @(x2, x3))`.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use crate::error::LatticeError;

/// A truth degree in the closed unit interval.
#[derive(Clone, Copy, PartialEq, PartialOrd)]
pub struct TruthValue(f64);

impl TruthValue {
    pub const BOTTOM: TruthValue = TruthValue(0.0);
    pub const TOP: TruthValue = TruthValue(1.0);

    /// Returns `None` unless `0 <= value <= 1`.
    pub fn new(value: f64) -> Option<Self> {
        if (0.0..=1.0).contains(&value) {
            Some(TruthValue(value))
        } else {
            None
        }
    }

    /// Clamps into `[0,1]`; float error in `x + y - x*y` and friends can
    /// overshoot by an ulp. NaN maps to `None`.
    pub fn clamped(value: f64) -> Option<Self> {
        if value.is_nan() {
            None
        } else {
            Some(TruthValue(value.clamp(0.0, 1.0)))
        }
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

impl fmt::Debug for TruthValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(&self.0, f)
    }
}

impl fmt::Display for TruthValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // Shortest digits that reparse to the same bits, never in exponent form.
        if self.0 == 0.0 || self.0 == 1.0 {
            write!(f, "{:.1}", self.0)
        } else {
            write!(f, "{}", self.0)
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ConnectiveKind {
    Conjunction,
    Disjunction,
    Aggregator,
    Implication,
}

impl ConnectiveKind {
    /// Surface-syntax prefix: `&`, `|`, `@`, or `<` for implications.
    pub fn sigil(self) -> char {
        match self {
            ConnectiveKind::Conjunction => '&',
            ConnectiveKind::Disjunction => '|',
            ConnectiveKind::Aggregator => '@',
            ConnectiveKind::Implication => '<',
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ConnectiveKind::Conjunction => "conjunction",
            ConnectiveKind::Disjunction => "disjunction",
            ConnectiveKind::Aggregator => "aggregator",
            ConnectiveKind::Implication => "implication",
        }
    }
}

impl fmt::Display for ConnectiveKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Truth function over raw `f64` arguments. The slice length equals the
/// connective's declared arity.
pub type TruthFn = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;

type Binary = fn(f64, f64) -> f64;

#[derive(Clone)]
pub struct ConnectiveDef {
    pub name: String,
    pub kind: ConnectiveKind,
    pub arity: usize,
    pub function: TruthFn,
}

impl ConnectiveDef {
    pub fn new(
        kind: ConnectiveKind,
        name: impl Into<String>,
        arity: usize,
        function: impl Fn(&[f64]) -> f64 + Send + Sync + 'static,
    ) -> Self {
        ConnectiveDef {
            name: name.into(),
            kind,
            arity,
            function: Arc::new(function),
        }
    }

    fn binary(kind: ConnectiveKind, name: &str, f: Binary) -> Self {
        ConnectiveDef::new(kind, name, 2, move |xs| f(xs[0], xs[1]))
    }
}

impl fmt::Debug for ConnectiveDef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ConnectiveDef")
            .field("name", &self.name)
            .field("kind", &self.kind)
            .field("arity", &self.arity)
            .finish_non_exhaustive()
    }
}

pub fn prod_and(x: f64, y: f64) -> f64 {
    x * y
}

pub fn godel_and(x: f64, y: f64) -> f64 {
    x.min(y)
}

pub fn luka_and(x: f64, y: f64) -> f64 {
    (x + y - 1.0).max(0.0)
}

pub fn prod_or(x: f64, y: f64) -> f64 {
    x + y - x * y
}

pub fn godel_or(x: f64, y: f64) -> f64 {
    x.max(y)
}

pub fn luka_or(x: f64, y: f64) -> f64 {
    (x + y).min(1.0)
}

/// `x <-P y`: 1 if `y <= x`, else `x / y`. `y = 0` always takes the first
/// branch, so no division by zero occurs.
pub fn prod_impl(x: f64, y: f64) -> f64 {
    if y <= x {
        1.0
    } else {
        x / y
    }
}

pub fn godel_impl(x: f64, y: f64) -> f64 {
    if y <= x {
        1.0
    } else {
        x
    }
}

pub fn luka_impl(x: f64, y: f64) -> f64 {
    (x - y + 1.0).min(1.0)
}

pub fn aver(x: f64, y: f64) -> f64 {
    (x + y) / 2.0
}

/// Connectives keyed by `(kind, label)`, plus the implication-to-conjunction
/// pairing of adjoint pairs. Immutable once shared.
#[derive(Clone, Debug, Default)]
pub struct Registry {
    defs: BTreeMap<(ConnectiveKind, String), ConnectiveDef>,
    adjoint: BTreeMap<String, String>,
    builtin: BTreeSet<(ConnectiveKind, String)>,
}

pub fn builtin_registry() -> Registry {
    use ConnectiveKind::*;

    let mut reg = Registry::default();
    let pairs: [(&str, Binary, Binary); 3] = [
        ("prod", prod_and, prod_impl),
        ("godel", godel_and, godel_impl),
        ("luka", luka_and, luka_impl),
    ];
    for (label, and, imp) in pairs {
        reg.insert(ConnectiveDef::binary(Conjunction, label, and));
        reg.insert(ConnectiveDef::binary(Implication, label, imp));
        reg.adjoint.insert(label.to_string(), label.to_string());
    }
    let ors: [(&str, Binary); 3] = [("prod", prod_or), ("godel", godel_or), ("luka", luka_or)];
    for (label, or) in ors {
        reg.insert(ConnectiveDef::binary(Disjunction, label, or));
    }
    reg.insert(ConnectiveDef::binary(Aggregator, "aver", aver));
    reg.builtin = reg.defs.keys().cloned().collect();
    reg
}

impl Registry {
    fn insert(&mut self, def: ConnectiveDef) {
        self.defs.insert((def.kind, def.name.clone()), def);
    }

    fn check_new(&self, def: &ConnectiveDef) -> Result<(), LatticeError> {
        if def.arity == 0 {
            return Err(LatticeError::ArityMismatch {
                name: def.name.clone(),
                arity: 0,
                got: 0,
            });
        }
        if self.defs.contains_key(&(def.kind, def.name.clone())) {
            return Err(LatticeError::DuplicateConnective {
                kind: def.kind,
                name: def.name.clone(),
            });
        }
        Ok(())
    }

    /// Adds a conjunction, disjunction or aggregator. Implications must come
    /// with their conjunction through [`Registry::register_adjoint_pair`].
    pub fn register(&mut self, def: ConnectiveDef) -> Result<(), LatticeError> {
        if def.kind == ConnectiveKind::Implication {
            return Err(LatticeError::UnpairedImplication(def.name));
        }
        self.check_new(&def)?;
        self.insert(def);
        Ok(())
    }

    /// Registers `<conjunction, implication>` as an adjoint pair. The pair is
    /// addressed by the implication's label.
    pub fn register_adjoint_pair(
        &mut self,
        conjunction: ConnectiveDef,
        implication: ConnectiveDef,
    ) -> Result<(), LatticeError> {
        if conjunction.kind != ConnectiveKind::Conjunction || implication.kind != ConnectiveKind::Implication
        {
            return Err(LatticeError::UnpairedImplication(implication.name));
        }
        self.check_new(&conjunction)?;
        self.check_new(&implication)?;
        if self.adjoint.values().any(|c| *c == conjunction.name) {
            return Err(LatticeError::DuplicateConnective {
                kind: ConnectiveKind::Conjunction,
                name: conjunction.name,
            });
        }
        self.adjoint
            .insert(implication.name.clone(), conjunction.name.clone());
        self.insert(conjunction);
        self.insert(implication);
        Ok(())
    }

    pub fn get(&self, kind: ConnectiveKind, name: &str) -> Option<&ConnectiveDef> {
        // BTreeMap<(K, String), _> cannot be probed with (K, &str) directly.
        self.defs
            .range((kind, String::from(name))..)
            .next()
            .filter(|((k, n), _)| *k == kind && n == name)
            .map(|(_, d)| d)
    }

    pub fn contains(&self, kind: ConnectiveKind, name: &str) -> bool {
        self.get(kind, name).is_some()
    }

    pub fn is_builtin(&self, kind: ConnectiveKind, name: &str) -> bool {
        self.builtin.contains(&(kind, String::from(name)))
    }

    /// Labels of the registered connectives of one kind, in label order.
    pub fn labels(&self, kind: ConnectiveKind) -> impl Iterator<Item = &str> {
        self.defs
            .keys()
            .filter(move |(k, _)| *k == kind)
            .map(|(_, n)| n.as_str())
    }

    /// The conjunction label paired with implication `label`.
    pub fn adjoint_of(&self, label: &str) -> Result<&str, LatticeError> {
        self.adjoint
            .get(label)
            .map(String::as_str)
            .ok_or_else(|| LatticeError::UnknownConnective {
                kind: ConnectiveKind::Implication,
                name: label.to_string(),
            })
    }

    pub fn eval(
        &self,
        kind: ConnectiveKind,
        name: &str,
        args: &[TruthValue],
    ) -> Result<TruthValue, LatticeError> {
        let def = self
            .get(kind, name)
            .ok_or_else(|| LatticeError::UnknownConnective {
                kind,
                name: name.to_string(),
            })?;
        let raw: Vec<f64> = args.iter().map(|v| v.get()).collect();
        let out = apply(def, &raw)?;
        TruthValue::clamped(out).ok_or_else(|| LatticeError::NotATruthValue {
            name: name.to_string(),
        })
    }
}

fn apply(def: &ConnectiveDef, args: &[f64]) -> Result<f64, LatticeError> {
    let mismatch = || LatticeError::ArityMismatch {
        name: def.name.clone(),
        arity: def.arity,
        got: args.len(),
    };
    if args.len() == def.arity {
        return Ok((def.function)(args));
    }
    if def.arity != 2 || args.len() < 2 {
        return Err(mismatch());
    }
    // @(x1, ..., @(x_{n-1}, x_n)...)
    let mut acc = args[args.len() - 1];
    for &x in args[..args.len() - 1].iter().rev() {
        acc = (def.function)(&[x, acc]);
    }
    Ok(acc)
}

/// Free-function form of [`Registry::eval`].
pub fn eval_connective(
    reg: &Registry,
    kind: ConnectiveKind,
    name: &str,
    args: &[TruthValue],
) -> Result<TruthValue, LatticeError> {
    reg.eval(kind, name, args)
}
