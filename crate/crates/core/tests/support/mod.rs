//! Generators and oracles shared by the integration tests.
//!
//! Programs are built from a vector of raw choices so proptest can shrink
//! them. Every generated program is stratified: a rule for `p<i>` only
//! calls `p<j>` with `j < i`, so every derivation terminates.

#![allow(dead_code)]

use proptest::prelude::*;
use smalp_core::syntax::{Body, ConnName, Weight};
use smalp_core::{
    Assignment, Atom, ConnectiveKind, Expr, Program, Rule, SymbolSort, SymbolicSubstitution, Term, TruthValue,
};

pub const GRID: [f64; 11] = [0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0];
pub const LABELS: [&str; 3] = ["prod", "godel", "luka"];

pub struct Choices<'a> {
    raw: &'a [u32],
    next: usize,
}

impl<'a> Choices<'a> {
    pub fn new(raw: &'a [u32]) -> Self {
        Choices { raw, next: 0 }
    }

    /// A number in `0..n`. Exhausted input reads as zeros.
    pub fn pick(&mut self, n: usize) -> usize {
        let x = self.raw.get(self.next).copied().unwrap_or(0);
        self.next += 1;
        x as usize % n
    }

    pub fn flip(&mut self, one_in: usize) -> bool {
        self.pick(one_in) == 0
    }

    pub fn value(&mut self) -> TruthValue {
        TruthValue::new(GRID[self.pick(GRID.len())]).unwrap()
    }

    pub fn label(&mut self) -> &'static str {
        LABELS[self.pick(3)]
    }
}

const SYMBOL_POOL: [(&str, SymbolSort); 5] = [
    ("s", SymbolSort::AdjointPair),
    ("c", SymbolSort::Conjunction),
    ("d", SymbolSort::Disjunction),
    ("v", SymbolSort::Weight),
    ("w", SymbolSort::Weight),
];

#[derive(Clone, Debug)]
pub struct Generated {
    pub program: Program,
    pub goal: Expr,
    pub theta: SymbolicSubstitution,
    pub symbols: Vec<(&'static str, SymbolSort)>,
}

struct Builder<'c, 'a> {
    ch: &'c mut Choices<'a>,
    symbols: Vec<(&'static str, SymbolSort)>,
    arity: [usize; 4],
}

impl Builder<'_, '_> {
    fn symbol(&mut self, sorts: &[SymbolSort]) -> Option<&'static str> {
        let found: Vec<_> = self
            .symbols
            .iter()
            .filter(|(_, s)| sorts.contains(s))
            .map(|(n, _)| *n)
            .collect();
        if found.is_empty() {
            None
        } else {
            Some(found[self.ch.pick(found.len())])
        }
    }

    fn term(&mut self, with_y: bool) -> Term {
        match self.ch.pick(if with_y { 6 } else { 5 }) {
            0 | 1 => Term::var("X"),
            2 => Term::constant("a"),
            3 => Term::constant("b"),
            4 => Term::App("f".into(), vec![Term::var("X")]),
            _ => Term::var("Y"),
        }
    }

    fn atom(&mut self, pred: usize, with_y: bool) -> Atom {
        let args = (0..self.arity[pred]).map(|_| self.term(with_y)).collect();
        Atom::new(format!("p{pred}"), args)
    }

    /// Leaves are values, symbolic weights, or atoms of predicates below
    /// `below` (or of an undefined predicate, which resolves to bottom).
    fn expr(&mut self, depth: usize, below: usize) -> Expr {
        if depth == 0 || self.ch.flip(3) {
            return match self.ch.pick(4) {
                0 => Expr::Value(self.ch.value()),
                1 => match self.symbol(&[SymbolSort::Weight]) {
                    Some(v) => Expr::SymValue(v.into()),
                    None => Expr::Value(self.ch.value()),
                },
                2 if self.ch.flip(6) => Expr::Atom(Atom::new("undefined", vec![Term::var("X")])),
                _ if below > 0 => {
                    let p = self.ch.pick(below);
                    Expr::Atom(self.atom(p, true))
                }
                _ => Expr::Value(self.ch.value()),
            };
        }
        let (kind, name) = match self.ch.pick(3) {
            0 => {
                let name = if self.ch.flip(2) {
                    self.symbol(&[SymbolSort::Conjunction, SymbolSort::AdjointPair])
                        .map(ConnName::symbolic)
                } else {
                    None
                };
                (
                    ConnectiveKind::Conjunction,
                    name.unwrap_or_else(|| ConnName::concrete(self.ch.label())),
                )
            }
            1 => {
                let name = if self.ch.flip(2) {
                    self.symbol(&[SymbolSort::Disjunction]).map(ConnName::symbolic)
                } else {
                    None
                };
                (
                    ConnectiveKind::Disjunction,
                    name.unwrap_or_else(|| ConnName::concrete(self.ch.label())),
                )
            }
            _ => (ConnectiveKind::Aggregator, ConnName::concrete("aver")),
        };
        let n = if self.ch.flip(4) { 3 } else { 2 };
        let args = (0..n).map(|_| self.expr(depth - 1, below)).collect();
        Expr::App { kind, name, args }
    }

    fn rule(&mut self) -> Rule {
        let pred = self.ch.pick(4);
        let head = self.atom(pred, false);
        let weight = match self.symbol(&[SymbolSort::Weight]) {
            Some(v) if self.ch.flip(3) => Weight::Symbolic(v.into()),
            _ => Weight::Value(self.ch.value()),
        };
        if self.ch.flip(3) {
            return Rule {
                head,
                body: None,
                weight,
            };
        }
        let implication = match self.symbol(&[SymbolSort::AdjointPair]) {
            Some(s) if self.ch.flip(2) => ConnName::symbolic(s),
            _ => ConnName::concrete(self.ch.label()),
        };
        let expr = self.expr(2, pred);
        Rule {
            head,
            body: Some(Body { implication, expr }),
            weight,
        }
    }
}

/// A stratified program (1 to 6 rules, at most 3 symbols), a goal, and a
/// full assignment for the symbols in use.
pub fn build_case(raw: &[u32]) -> Generated {
    let mut ch = Choices::new(raw);
    let mut symbols = Vec::new();
    for entry in SYMBOL_POOL {
        if symbols.len() < 3 && ch.flip(2) {
            symbols.push(entry);
        }
    }
    let arity = [ch.pick(2), ch.pick(2), ch.pick(2), ch.pick(2)];
    let mut b = Builder {
        ch: &mut ch,
        symbols,
        arity,
    };
    let n_rules = 1 + b.ch.pick(6);
    let rules = (0..n_rules).map(|_| b.rule()).collect();
    // higher strata give longer derivations
    let goal_pred = b.ch.pick(4).max(b.ch.pick(4));
    let atom = Expr::Atom(b.atom(goal_pred, true));
    // goals stay concrete: Θ instantiates the program, not the query
    let symbols = std::mem::take(&mut b.symbols);
    let goal = if b.ch.flip(3) {
        let other = b.expr(1, 4);
        Expr::App {
            kind: ConnectiveKind::Aggregator,
            name: ConnName::concrete("aver"),
            args: vec![atom, other],
        }
    } else {
        atom
    };
    let program = Program::new(rules);
    let mut theta = SymbolicSubstitution::new();
    for (name, sort) in &symbols {
        theta.insert(*name, assignment(&mut ch, *sort)).unwrap();
    }
    Generated {
        program,
        goal,
        theta,
        symbols,
    }
}

pub fn assignment(ch: &mut Choices<'_>, sort: SymbolSort) -> Assignment {
    match sort {
        SymbolSort::Weight => Assignment::Value(ch.value()),
        SymbolSort::Conjunction => Assignment::Conjunction(ch.label().into()),
        SymbolSort::Disjunction => Assignment::Disjunction(ch.label().into()),
        SymbolSort::Aggregator => Assignment::Aggregator("aver".into()),
        SymbolSort::AdjointPair => {
            let l = ch.label();
            Assignment::AdjointPair {
                implication: l.into(),
                conjunction: l.into(),
            }
        }
    }
}

pub fn arb_case() -> impl Strategy<Value = Generated> {
    prop::collection::vec(any::<u32>(), 64..256).prop_map(|raw| build_case(&raw))
}

// ---- ASTs for the round-trip fuzzer ----

fn arb_name() -> impl Strategy<Value = String> {
    "[a-z][a-z0-9_]{0,3}"
}

fn arb_var() -> impl Strategy<Value = String> {
    prop_oneof!["[A-Z][A-Za-z0-9_]{0,3}", "_[A-Za-z0-9]{1,3}"]
}

pub fn arb_term() -> impl Strategy<Value = Term> {
    let leaf = prop_oneof![arb_var().prop_map(Term::Var), arb_name().prop_map(Term::constant)];
    leaf.prop_recursive(3, 12, 3, |inner| {
        (arb_name(), prop::collection::vec(inner, 1..4)).prop_map(|(f, args)| Term::App(f, args))
    })
}

pub fn arb_atom() -> impl Strategy<Value = Atom> {
    (arb_name(), prop::collection::vec(arb_term(), 0..3)).prop_map(|(p, args)| Atom::new(p, args))
}

/// Values anywhere in [0,1], not only on the grid; rendering must be exact.
pub fn arb_truth() -> impl Strategy<Value = TruthValue> {
    prop_oneof![
        (0usize..11).prop_map(|i| TruthValue::new(GRID[i]).unwrap()),
        (0.0f64..=1.0).prop_map(|x| TruthValue::new(x).unwrap()),
        (0.0f64..1e-4).prop_map(|x| TruthValue::new(x).unwrap()),
    ]
}

// Symbol names carry their sort in the first letter so generated ASTs are
// always well sorted; `s` names may also appear as conjunctions (the
// adjoint pair's second face).
fn arb_sym(first: &'static str) -> impl Strategy<Value = String> {
    "[0-9a-z]{0,2}".prop_map(move |rest| format!("{first}{rest}"))
}

fn arb_conn_name(kind: ConnectiveKind) -> BoxedStrategy<ConnName> {
    let symbolic = match kind {
        ConnectiveKind::Conjunction => prop_oneof![arb_sym("c"), arb_sym("s")].boxed(),
        ConnectiveKind::Disjunction => arb_sym("d").boxed(),
        ConnectiveKind::Aggregator => arb_sym("g").boxed(),
        ConnectiveKind::Implication => arb_sym("s").boxed(),
    };
    prop_oneof![
        arb_name().prop_map(ConnName::Concrete),
        symbolic.prop_map(ConnName::Symbolic)
    ]
    .boxed()
}

pub fn arb_expr() -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![
        arb_truth().prop_map(Expr::Value),
        arb_sym("v").prop_map(Expr::SymValue),
        arb_atom().prop_map(Expr::Atom),
    ];
    leaf.prop_recursive(4, 24, 4, |inner| {
        prop_oneof![
            Just(ConnectiveKind::Conjunction),
            Just(ConnectiveKind::Disjunction),
            Just(ConnectiveKind::Aggregator)
        ]
        .prop_flat_map(move |kind| {
            (arb_conn_name(kind), prop::collection::vec(inner.clone(), 1..4))
                .prop_map(move |(name, args)| Expr::App { kind, name, args })
        })
    })
}

pub fn arb_rule() -> impl Strategy<Value = Rule> {
    let weight = prop_oneof![
        arb_truth().prop_map(Weight::Value),
        arb_sym("v").prop_map(Weight::Symbolic)
    ];
    let body = prop::option::of(
        (arb_conn_name(ConnectiveKind::Implication), arb_expr())
            .prop_map(|(implication, expr)| Body { implication, expr }),
    );
    (arb_atom(), body, weight).prop_map(|(head, body, weight)| Rule { head, body, weight })
}

pub fn arb_program() -> impl Strategy<Value = Program> {
    prop::collection::vec(arb_rule(), 0..5).prop_map(Program::new)
}

/// Atom-free concrete expressions over the builtin connectives.
pub fn arb_ground_expr() -> impl Strategy<Value = Expr> {
    let leaf = (0usize..11).prop_map(|i| Expr::value(GRID[i]));
    leaf.prop_recursive(4, 32, 3, |inner| {
        (0usize..7, prop::collection::vec(inner, 2..4)).prop_map(|(c, args)| {
            let (kind, label) = match c {
                0..=2 => (ConnectiveKind::Conjunction, LABELS[c]),
                3..=5 => (ConnectiveKind::Disjunction, LABELS[c - 3]),
                _ => (ConnectiveKind::Aggregator, "aver"),
            };
            Expr::App {
                kind,
                name: ConnName::concrete(label),
                args,
            }
        })
    })
}

// ---- unification oracle universe ----

/// Terms over variables `X`, `Y`, constant `a` and binary `f`, of depth at
/// most `depth`.
pub fn small_terms(depth: usize) -> Vec<Term> {
    let mut out = vec![Term::var("X"), Term::var("Y"), Term::constant("a")];
    for _ in 0..depth {
        let prev = out.clone();
        let mut next = vec![Term::var("X"), Term::var("Y"), Term::constant("a")];
        for l in &prev {
            for r in &prev {
                next.push(Term::App("f".into(), vec![l.clone(), r.clone()]));
            }
        }
        out = next;
    }
    out
}

/// Ground terms over `a` and binary `f` of depth at most `depth`.
pub fn ground_terms(depth: usize) -> Vec<Term> {
    let mut out = vec![Term::constant("a")];
    for _ in 0..depth {
        let prev = out.clone();
        out = vec![Term::constant("a")];
        for l in &prev {
            for r in &prev {
                out.push(Term::App("f".into(), vec![l.clone(), r.clone()]));
            }
        }
    }
    out
}

/// Unary `p` and binary `q` applied to terms of depth at most 1.
pub fn small_atoms() -> Vec<Atom> {
    let terms = small_terms(1);
    let mut out = Vec::new();
    for t in &terms {
        out.push(Atom::new("p", vec![t.clone()]));
    }
    for t in &terms {
        for u in &terms {
            out.push(Atom::new("q", vec![t.clone(), u.clone()]));
        }
    }
    out
}

pub fn ground_term(t: &Term, x: &Term, y: &Term) -> Term {
    match t {
        Term::Var(v) if v == "X" => x.clone(),
        Term::Var(_) => y.clone(),
        Term::App(f, args) => Term::App(f.clone(), args.iter().map(|a| ground_term(a, x, y)).collect()),
    }
}

pub fn ground_atom(a: &Atom, x: &Term, y: &Term) -> Atom {
    Atom::new(
        a.predicate.clone(),
        a.args.iter().map(|t| ground_term(t, x, y)).collect(),
    )
}

// ---- checks shared with the acceptance suite ----

const EPS: f64 = 1e-9;

fn eval(reg: &smalp_core::Registry, kind: ConnectiveKind, label: &str, xs: &[f64]) -> f64 {
    let args: Vec<_> = xs.iter().map(|&x| TruthValue::new(x).unwrap()).collect();
    reg.eval(kind, label, &args).unwrap().get()
}

/// Non-implication builtins: three conjunctions, three disjunctions, `@aver`.
pub fn monotone_builtins() -> Vec<(ConnectiveKind, &'static str)> {
    let mut out = Vec::new();
    for l in LABELS {
        out.push((ConnectiveKind::Conjunction, l));
        out.push((ConnectiveKind::Disjunction, l));
    }
    out.push((ConnectiveKind::Aggregator, "aver"));
    out
}

/// Every violation of the adjoint property, monotonicity, boundary
/// conditions, implication mixed monotonicity and the conjunction and
/// disjunction ordering chain, on the 11-point grid.
pub fn lattice_violations(reg: &smalp_core::Registry) -> Vec<String> {
    use ConnectiveKind::*;
    let mut bad = Vec::new();
    for l in LABELS {
        for &x in &GRID {
            for &y in &GRID {
                for &z in &GRID {
                    let lhs = x <= eval(reg, Implication, l, &[y, z]) + EPS;
                    let rhs = eval(reg, Conjunction, l, &[x, z]) <= y + EPS;
                    if lhs != rhs {
                        bad.push(format!("adjoint {l}: x={x} y={y} z={z}"));
                    }
                }
            }
        }
    }
    for (kind, l) in monotone_builtins() {
        if (eval(reg, kind, l, &[1.0, 1.0]) - 1.0).abs() > EPS {
            bad.push(format!("boundary {kind} {l} at 1"));
        }
        if eval(reg, kind, l, &[0.0, 0.0]).abs() > EPS {
            bad.push(format!("boundary {kind} {l} at 0"));
        }
        for &x in &GRID {
            for &y in &GRID {
                for &d in &GRID {
                    let base = eval(reg, kind, l, &[x, y]);
                    if x + d <= 1.0 && eval(reg, kind, l, &[x + d, y]) + EPS < base {
                        bad.push(format!("monotone {kind} {l} arg 1: x={x} y={y} d={d}"));
                    }
                    if y + d <= 1.0 && eval(reg, kind, l, &[x, y + d]) + EPS < base {
                        bad.push(format!("monotone {kind} {l} arg 2: x={x} y={y} d={d}"));
                    }
                }
            }
        }
    }
    for l in LABELS {
        for &x in &GRID {
            for &y in &GRID {
                for &d in &GRID {
                    let base = eval(reg, Implication, l, &[x, y]);
                    if x + d <= 1.0 && eval(reg, Implication, l, &[x + d, y]) + EPS < base {
                        bad.push(format!(
                            "implication {l} not increasing in consequent: x={x} y={y} d={d}"
                        ));
                    }
                    if y + d <= 1.0 && eval(reg, Implication, l, &[x, y + d]) > base + EPS {
                        bad.push(format!(
                            "implication {l} not decreasing in antecedent: x={x} y={y} d={d}"
                        ));
                    }
                }
            }
        }
    }
    for &x in &GRID {
        for &y in &GRID {
            let chain = [
                0.0,
                eval(reg, Conjunction, "luka", &[x, y]),
                eval(reg, Conjunction, "prod", &[x, y]),
                eval(reg, Conjunction, "godel", &[x, y]),
                eval(reg, Disjunction, "godel", &[x, y]),
                eval(reg, Disjunction, "prod", &[x, y]),
                eval(reg, Disjunction, "luka", &[x, y]),
                1.0,
            ];
            if chain.windows(2).any(|w| w[0] > w[1] + EPS) {
                bad.push(format!("ordering chain: x={x} y={y} {chain:?}"));
            }
        }
    }
    bad
}

/// Compares `mgu` with a brute-force search over ground substitutions for
/// every pair of [`small_atoms`]. The oracle: a pair is unifiable iff some
/// assignment of ground terms of depth <= 2 to `X`, `Y` equates the atoms,
/// and every such ground unifier must factor through the computed mgu.
/// Depth 2 is enough: with two variables at most one binding can mention
/// the other, so grounding any unifier with `a` stays within depth 2.
pub fn unify_disagreements() -> Vec<String> {
    let atoms = small_atoms();
    let grounds = ground_terms(2);
    let mut bad = Vec::new();
    for a in &atoms {
        for b in &atoms {
            let mut ground_unifiers = Vec::new();
            for x in &grounds {
                for y in &grounds {
                    if ground_atom(a, x, y) == ground_atom(b, x, y) {
                        ground_unifiers.push((x, y));
                    }
                }
            }
            match smalp_core::mgu(a, b) {
                None if ground_unifiers.is_empty() => {}
                None => bad.push(format!("{a} ~ {b}: mgu failed but oracle unifies")),
                Some(_) if ground_unifiers.is_empty() => {
                    bad.push(format!("{a} ~ {b}: mgu succeeded but oracle finds no unifier"))
                }
                Some(m) => {
                    if m.apply_atom(a) != m.apply_atom(b) {
                        bad.push(format!("{a} ~ {b}: {m} does not unify"));
                        continue;
                    }
                    for (x, y) in ground_unifiers {
                        let through = ground_atom(&m.apply_atom(a), x, y);
                        if through != ground_atom(a, x, y) {
                            bad.push(format!(
                                "{a} ~ {b}: ground unifier X/{x} Y/{y} is not an instance of {m}"
                            ));
                        }
                    }
                }
            }
        }
    }
    bad
}

/// Checks one generated triple: instantiating and interpreting the
/// symbolic answer agrees with solving the instantiated program.
pub fn instantiation_check(g: &Generated, reg: &smalp_core::Registry) -> Result<(), String> {
    use smalp_core::{Answer, Classification, Engine};
    let engine = Engine::new(&g.program, reg);
    let (sfca, _) = engine
        .solve(&g.goal)
        .map_err(|e| format!("symbolic solve: {e}"))?;
    let instantiated = Answer {
        expr: g.theta.apply_expr(&sfca.expr),
        subst: sfca.subst.clone(),
        classification: Classification::Saca,
    };
    let (via_sfca, _) = engine
        .interpret(&instantiated)
        .map_err(|e| format!("interpret: {e}"))?;
    let concrete = g.theta.apply_program(&g.program);
    let (direct, _) = Engine::new(&concrete, reg)
        .solve(&g.goal)
        .map_err(|e| format!("concrete solve: {e}"))?;
    let (Some(a), Some(b)) = (via_sfca.value(), direct.value()) else {
        return Err(format!("not a value: {via_sfca} / {direct}"));
    };
    if direct.classification != Classification::Fca {
        return Err(format!("instantiated program gave {direct}"));
    }
    if (a.get() - b.get()).abs() > 1e-12 {
        return Err(format!("values differ: {a} vs {b}"));
    }
    if !via_sfca.subst.is_variant_of(&direct.subst) {
        return Err(format!(
            "substitutions differ: {} vs {}",
            via_sfca.subst, direct.subst
        ));
    }
    Ok(())
}

pub fn roundtrip_program(p: &Program) -> Result<(), String> {
    let text = p.to_string();
    let back = smalp_core::parse_program(&text).map_err(|e| format!("{e}\n{text}"))?;
    if &back != p {
        return Err(format!("round trip changed the program:\n{text}"));
    }
    Ok(())
}
