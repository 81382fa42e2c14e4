mod support;

use proptest::prelude::*;
use smalp_core::engine::StepAction;
use smalp_core::syntax::ConnName;
use smalp_core::{
    builtin_registry, parse_goal, parse_program, Classification, Engine, EngineError, Expr, Registry,
    TruthValue,
};
use support::{arb_case, arb_ground_expr};

/// Independent evaluator for atom-free expressions: arguments first, then
/// the right-nested truth function, using the free lattice functions.
fn oracle(e: &Expr) -> Expr {
    use smalp_core::lattice::*;
    let Expr::App { kind, name, args } = e else {
        return e.clone();
    };
    let args: Vec<Expr> = args.iter().map(oracle).collect();
    let values: Option<Vec<f64>> = args.iter().map(|a| a.as_value().map(TruthValue::get)).collect();
    match (name, values) {
        (ConnName::Concrete(label), Some(xs)) => {
            let f: fn(f64, f64) -> f64 = match (kind, label.as_str()) {
                (ConnectiveKind::Conjunction, "prod") => prod_and,
                (ConnectiveKind::Conjunction, "godel") => godel_and,
                (ConnectiveKind::Conjunction, "luka") => luka_and,
                (ConnectiveKind::Disjunction, "prod") => prod_or,
                (ConnectiveKind::Disjunction, "godel") => godel_or,
                (ConnectiveKind::Disjunction, "luka") => luka_or,
                (ConnectiveKind::Aggregator, "aver") => aver,
                other => panic!("not a builtin: {other:?}"),
            };
            let mut acc = xs[xs.len() - 1];
            for &x in xs[..xs.len() - 1].iter().rev() {
                acc = f(x, acc);
            }
            Expr::Value(TruthValue::clamped(acc).unwrap())
        }
        _ => Expr::App {
            kind: *kind,
            name: name.clone(),
            args,
        },
    }
}

/// Reduces the rightmost available redex first, the opposite order to the
/// engine's, one step at a time.
fn reduce_rightmost(e: &Expr, reg: &Registry) -> Expr {
    fn step(e: &mut Expr, reg: &Registry) -> bool {
        let Expr::App { kind, name, args } = e else {
            return false;
        };
        for a in args.iter_mut().rev() {
            if step(a, reg) {
                return true;
            }
        }
        let values: Option<Vec<TruthValue>> = args.iter().map(Expr::as_value).collect();
        match (name, values) {
            (ConnName::Concrete(label), Some(vs)) => {
                *e = Expr::Value(reg.eval(*kind, label, &vs).unwrap());
                true
            }
            _ => false,
        }
    }
    let mut e = e.clone();
    while step(&mut e, reg) {}
    e
}

/// Replaces a few concrete connectives by symbolic ones so that normal
/// forms keep some structure.
fn symbolize(e: &Expr, mask: &mut impl Iterator<Item = bool>) -> Expr {
    match e {
        Expr::App { kind, name, args } => Expr::App {
            kind: *kind,
            name: if mask.next().unwrap_or(false) {
                ConnName::symbolic("s")
            } else {
                name.clone()
            },
            args: args.iter().map(|a| symbolize(a, mask)).collect(),
        },
        _ => e.clone(),
    }
}

fn interpret(e: &Expr, reg: &Registry) -> Expr {
    let program = Default::default();
    let engine = Engine::new(&program, reg);
    let saca = smalp_core::Answer {
        expr: e.clone(),
        subst: Default::default(),
        classification: Classification::Saca,
    };
    engine.interpret(&saca).unwrap().0.expr
}

proptest! {
    #[test]
    fn interpretation_is_confluent(e in arb_ground_expr(), mask in prop::collection::vec(prop::bool::weighted(0.2), 32)) {
        let reg = builtin_registry();
        let e = symbolize(&e, &mut mask.into_iter());
        let engine_nf = interpret(&e, &reg);
        prop_assert_eq!(&engine_nf, &oracle(&e));
        prop_assert_eq!(&engine_nf, &reduce_rightmost(&e, &reg));
    }

    #[test]
    fn derivations_replay_and_keep_invariants(g in arb_case()) {
        let reg = builtin_registry();
        let engine = Engine::new(&g.program, &reg);
        let (answer, trace) = engine.solve(&g.goal).unwrap();
        let (saca, _) = engine.admissible_derive(&g.goal).unwrap();
        prop_assert!(saca.expr.is_atom_free());

        let replayed = engine.replay(&g.goal, &trace).unwrap();
        prop_assert_eq!(&replayed.goal, &answer.expr);
        prop_assert_eq!(&replayed.subst, &answer.subst);

        // each admissible state's substitution extends the previous one by
        // the step's unifier
        let mut subst = smalp_core::Substitution::identity();
        for step in trace.steps.iter().take(trace.admissible_steps()) {
            match &step.action {
                StepAction::Rule { unifier, .. } => subst = subst.compose(unifier),
                StepAction::Bottom => {}
                StepAction::Reduce { .. } => unreachable!(),
            }
            prop_assert_eq!(&step.state.subst, &subst);
        }
    }

    #[test]
    fn concrete_programs_give_fuzzy_computed_answers(g in arb_case()) {
        let reg = builtin_registry();
        let concrete = g.theta.apply_program(&g.program);
        let (answer, _) = Engine::new(&concrete, &reg).solve(&g.goal).unwrap();
        prop_assert_eq!(answer.classification, Classification::Fca);
    }
}

#[test]
fn unmatched_atoms_become_bottom() {
    let reg = builtin_registry();
    let p = parse_program("q(a) with 0.3.").unwrap();
    let (answer, trace) = Engine::new(&p, &reg)
        .solve(&parse_goal("@aver(p(b), 0.8)").unwrap())
        .unwrap();
    assert_eq!(answer.value(), TruthValue::new(0.4));
    assert_eq!(trace.steps[0].action, StepAction::Bottom);
}

#[test]
fn recursion_hits_the_depth_limit() {
    let reg = builtin_registry();
    let p = parse_program("p(X) <prod| p(f(X)) with 0.9.").unwrap();
    let err = Engine::new(&p, &reg)
        .with_depth_limit(50)
        .solve(&parse_goal("p(a)").unwrap())
        .unwrap_err();
    assert!(matches!(err, EngineError::DepthLimitExceeded(50)));
}

#[test]
fn first_matching_rule_wins() {
    let reg = builtin_registry();
    let p = parse_program("p(a) with 0.2.\np(X) with 0.6.\np(b) with 0.9.").unwrap();
    let engine = Engine::new(&p, &reg);
    let v = |g: &str| {
        engine
            .solve(&parse_goal(g).unwrap())
            .unwrap()
            .0
            .value()
            .unwrap()
            .get()
    };
    assert_eq!(v("p(a)"), 0.2);
    assert_eq!(v("p(b)"), 0.6);
    let (answer, _) = engine.solve(&parse_goal("p(Y)").unwrap()).unwrap();
    assert_eq!(answer.to_string(), "FCA: 0.2 ; {Y/a}");
}

#[test]
fn implication_label_selects_its_adjoint_conjunction() {
    let reg = builtin_registry();
    for (label, expected) in [("prod", 0.45), ("godel", 0.5), ("luka", 0.4)] {
        let p = parse_program(&format!("p <{label}| q with 0.9.\nq with 0.5.")).unwrap();
        let (answer, _) = Engine::new(&p, &reg).solve(&parse_goal("p").unwrap()).unwrap();
        assert!((answer.value().unwrap().get() - expected).abs() < 1e-9, "{label}");
    }
}
