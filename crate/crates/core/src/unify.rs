//! Substitutions over first-order terms and syntactic unification.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::syntax::{Atom, Body, Expr, Rule, Term};

/// Idempotent variable-to-term mapping. Identity bindings are never stored,
/// so the map's keys are exactly `Dom(σ)`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Substitution {
    bindings: BTreeMap<String, Term>,
}

impl Substitution {
    pub fn identity() -> Self {
        Substitution::default()
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (String, Term)>) -> Self {
        let bindings = pairs
            .into_iter()
            .filter(|(v, t)| !matches!(t, Term::Var(w) if w == v))
            .collect();
        Substitution { bindings }
    }

    pub fn single(var: impl Into<String>, term: Term) -> Self {
        Substitution::from_pairs([(var.into(), term)])
    }

    pub fn get(&self, var: &str) -> Option<&Term> {
        self.bindings.get(var)
    }

    pub fn len(&self) -> usize {
        self.bindings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bindings.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &Term)> {
        self.bindings.iter()
    }

    pub fn domain(&self) -> impl Iterator<Item = &str> {
        self.bindings.keys().map(String::as_str)
    }

    pub fn apply_term(&self, t: &Term) -> Term {
        match t {
            Term::Var(v) => self.bindings.get(v).cloned().unwrap_or_else(|| t.clone()),
            Term::App(f, args) => Term::App(f.clone(), args.iter().map(|a| self.apply_term(a)).collect()),
        }
    }

    pub fn apply_atom(&self, a: &Atom) -> Atom {
        Atom {
            predicate: a.predicate.clone(),
            args: a.args.iter().map(|t| self.apply_term(t)).collect(),
        }
    }

    /// Rewrites the variables of every atom; values and connective names are
    /// left alone.
    pub fn apply_expr(&self, e: &Expr) -> Expr {
        if self.is_empty() {
            return e.clone();
        }
        match e {
            Expr::Atom(a) => Expr::Atom(self.apply_atom(a)),
            Expr::App { kind, name, args } => Expr::App {
                kind: *kind,
                name: name.clone(),
                args: args.iter().map(|x| self.apply_expr(x)).collect(),
            },
            _ => e.clone(),
        }
    }

    /// `self` then `other`: the result maps `x` to `other(self(x))`.
    pub fn compose(&self, other: &Substitution) -> Substitution {
        let mut bindings: BTreeMap<String, Term> = self
            .bindings
            .iter()
            .map(|(v, t)| (v.clone(), other.apply_term(t)))
            .filter(|(v, t)| !matches!(t, Term::Var(w) if w == v))
            .collect();
        for (v, t) in &other.bindings {
            if !self.bindings.contains_key(v) {
                bindings.insert(v.clone(), t.clone());
            }
        }
        Substitution { bindings }
    }

    pub fn restrict<S: AsRef<str>>(&self, vars: &[S]) -> Substitution {
        let bindings = self
            .bindings
            .iter()
            .filter(|(v, _)| vars.iter().any(|w| w.as_ref() == v.as_str()))
            .map(|(v, t)| (v.clone(), t.clone()))
            .collect();
        Substitution { bindings }
    }

    /// Equal up to a consistent renaming of the variables in the range.
    pub fn is_variant_of(&self, other: &Substitution) -> bool {
        if !self.bindings.keys().eq(other.bindings.keys()) {
            return false;
        }
        let mut fwd = BTreeMap::new();
        let mut back = BTreeMap::new();
        self.bindings
            .values()
            .zip(other.bindings.values())
            .all(|(a, b)| term_variant(a, b, &mut fwd, &mut back))
    }
}

fn term_variant<'a>(
    a: &'a Term,
    b: &'a Term,
    fwd: &mut BTreeMap<&'a str, &'a str>,
    back: &mut BTreeMap<&'a str, &'a str>,
) -> bool {
    match (a, b) {
        (Term::Var(x), Term::Var(y)) => {
            let f = *fwd.entry(x.as_str()).or_insert(y.as_str());
            let g = *back.entry(y.as_str()).or_insert(x.as_str());
            f == y && g == x
        }
        (Term::App(f, xs), Term::App(g, ys)) => {
            f == g && xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| term_variant(x, y, fwd, back))
        }
        _ => false,
    }
}

impl fmt::Display for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (v, t)) in self.bindings.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{v}/{t}")?;
        }
        f.write_str("}")
    }
}

/// Most general unifier of two atoms, with occurs check. `None` on predicate
/// or functor clash, arity mismatch, or a cyclic binding.
pub fn mgu(a: &Atom, b: &Atom) -> Option<Substitution> {
    if a.predicate != b.predicate || a.args.len() != b.args.len() {
        return None;
    }
    let mut sigma = Substitution::identity();
    let mut eqs: Vec<(Term, Term)> = a.args.iter().cloned().zip(b.args.iter().cloned()).rev().collect();
    while let Some((s, t)) = eqs.pop() {
        let s = sigma.apply_term(&s);
        let t = sigma.apply_term(&t);
        match (s, t) {
            (Term::Var(x), Term::Var(y)) if x == y => {}
            (Term::Var(x), t) | (t, Term::Var(x)) => {
                if t.occurs(&x) {
                    return None;
                }
                sigma = sigma.compose(&Substitution::single(x, t));
            }
            (Term::App(f, xs), Term::App(g, ys)) => {
                if f != g || xs.len() != ys.len() {
                    return None;
                }
                eqs.extend(xs.into_iter().zip(ys).rev());
            }
        }
    }
    Some(sigma)
}

/// Monotone source of fresh variable names `_G1`, `_G2`, ...
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FreshVars {
    next: usize,
}

impl FreshVars {
    pub fn new() -> Self {
        FreshVars::default()
    }

    pub fn starting_at(next: usize) -> Self {
        FreshVars { next }
    }

    pub fn position(&self) -> usize {
        self.next
    }

    pub fn fresh(&mut self) -> String {
        self.next += 1;
        format!("_G{}", self.next)
    }
}

/// Variant of `rule` whose variables are all fresh. Symbolic values and
/// connectives keep their names.
pub fn rename_apart(rule: &Rule, fresh: &mut FreshVars) -> Rule {
    let renaming = Substitution::from_pairs(rule.vars().into_iter().map(|v| (v, Term::Var(fresh.fresh()))));
    Rule {
        head: renaming.apply_atom(&rule.head),
        body: rule.body.as_ref().map(|b| Body {
            implication: b.implication.clone(),
            expr: renaming.apply_expr(&b.expr),
        }),
        weight: rule.weight.clone(),
    }
}
