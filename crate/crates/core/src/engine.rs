//! Two-stage operational semantics.
//!
//! The admissible stage rewrites the leftmost atom of a goal with a
//! unifying rule (`weight &i body`, or just `weight` for a fact) and stops
//! once the goal is atom-free; an atom that unifies with no rule head is
//! replaced by `0.0`. The interpretive stage then evaluates concrete
//! connectives whose arguments are all values, leftmost-innermost first.
//! Symbolic values and connectives are carried through untouched.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{EngineError, LatticeError};
use crate::lattice::{ConnectiveKind, Registry, TruthValue};
use crate::syntax::{ConnName, Expr, Position, Program};
use crate::unify::{mgu, rename_apart, FreshVars, Substitution};

pub const DEFAULT_DEPTH_LIMIT: usize = 10_000;

#[derive(Clone, Debug, PartialEq)]
pub struct State {
    pub goal: Expr,
    pub subst: Substitution,
}

impl State {
    pub fn initial(goal: Expr) -> Self {
        State {
            goal,
            subst: Substitution::identity(),
        }
    }
}

impl fmt::Display for State {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{:#}; {}>", self.goal, self.subst)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Classification {
    /// Atom-free, connectives not yet evaluated.
    Saca,
    /// No interpretive step applies; symbols may remain.
    Sfca,
    /// A single truth value.
    Fca,
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Classification::Saca => "SACA",
            Classification::Sfca => "SFCA",
            Classification::Fca => "FCA",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Answer {
    pub expr: Expr,
    /// Restricted to the variables of the goal.
    pub subst: Substitution,
    pub classification: Classification,
}

impl Answer {
    pub fn value(&self) -> Option<TruthValue> {
        self.expr.as_value()
    }
}

impl fmt::Display for Answer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {:#} ; {}", self.classification, self.expr, self.subst)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Stage {
    Admissible,
    Interpretive,
}

#[derive(Clone, Debug, PartialEq)]
pub enum StepAction {
    /// Resolved with program rule `index` (0-based), renamed apart with fresh
    /// names starting after `fresh_start`.
    Rule {
        index: usize,
        fresh_start: usize,
        unifier: Substitution,
    },
    /// No rule head unifies; the atom became `0.0`.
    Bottom,
    /// A concrete connective application was evaluated.
    Reduce { kind: ConnectiveKind, label: String },
}

#[derive(Clone, Debug, PartialEq)]
pub struct Step {
    pub stage: Stage,
    pub position: Position,
    pub action: StepAction,
    pub state: State,
}

fn fmt_position(f: &mut fmt::Formatter<'_>, pos: &[usize]) -> fmt::Result {
    if pos.is_empty() {
        return f.write_str("root");
    }
    for (i, p) in pos.iter().enumerate() {
        if i > 0 {
            f.write_str(".")?;
        }
        write!(f, "{p}")?;
    }
    Ok(())
}

/// One line: `[A] 1.0 R2 <goal> ; <subst>`. Rule numbers are 1-based.
impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self.stage {
            Stage::Admissible => "[A] ",
            Stage::Interpretive => "[I] ",
        })?;
        fmt_position(f, &self.position)?;
        match &self.action {
            StepAction::Rule { index, .. } => write!(f, " R{}", index + 1)?,
            StepAction::Bottom => f.write_str(" bot")?,
            StepAction::Reduce { kind, label } => write!(f, " {}{label}", kind.sigil())?,
        }
        write!(f, " {:#} ; {}", self.state.goal, self.state.subst)
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Trace {
    pub steps: Vec<Step>,
}

impl Trace {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn admissible_steps(&self) -> usize {
        self.steps.iter().filter(|s| s.stage == Stage::Admissible).count()
    }
}

impl fmt::Display for Trace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.steps {
            writeln!(f, "{s}")?;
        }
        Ok(())
    }
}

/// Runs goals against one program and registry. Cheap to construct; holds
/// no per-derivation state.
#[derive(Clone, Copy, Debug)]
pub struct Engine<'a> {
    program: &'a Program,
    registry: &'a Registry,
    depth_limit: usize,
}

impl<'a> Engine<'a> {
    pub fn new(program: &'a Program, registry: &'a Registry) -> Self {
        Engine {
            program,
            registry,
            depth_limit: DEFAULT_DEPTH_LIMIT,
        }
    }

    pub fn with_depth_limit(mut self, limit: usize) -> Self {
        self.depth_limit = limit;
        self
    }

    pub fn program(&self) -> &'a Program {
        self.program
    }

    pub fn registry(&self) -> &'a Registry {
        self.registry
    }

    /// Checks that every concrete connective of the program (and of `goal`,
    /// if given) is registered with the right kind and arity-compatible, and
    /// that every concrete implication has an adjoint conjunction.
    pub fn validate(&self, goal: Option<&Expr>) -> Result<(), LatticeError> {
        for rule in &self.program.rules {
            if let Some(body) = &rule.body {
                if let ConnName::Concrete(label) = &body.implication {
                    self.registry.adjoint_of(label)?;
                }
                self.validate_expr(&body.expr)?;
            }
        }
        goal.map_or(Ok(()), |g| self.validate_expr(g))
    }

    fn validate_expr(&self, e: &Expr) -> Result<(), LatticeError> {
        let Expr::App { kind, name, args } = e else {
            return Ok(());
        };
        if let ConnName::Concrete(label) = name {
            let def = self
                .registry
                .get(*kind, label)
                .ok_or_else(|| LatticeError::UnknownConnective {
                    kind: *kind,
                    name: label.clone(),
                })?;
            if args.len() != def.arity && (def.arity != 2 || args.len() < 2) {
                return Err(LatticeError::ArityMismatch {
                    name: label.clone(),
                    arity: def.arity,
                    got: args.len(),
                });
            }
        }
        args.iter().try_for_each(|a| self.validate_expr(a))
    }

    fn conjunction_for(&self, implication: &ConnName) -> Result<ConnName, EngineError> {
        Ok(match implication {
            ConnName::Concrete(label) => ConnName::Concrete(self.registry.adjoint_of(label)?.into()),
            // the symbolic pair's conjunction shares its name
            ConnName::Symbolic(s) => ConnName::Symbolic(s.clone()),
        })
    }

    /// All successors of `state` for its leftmost atom, in program order.
    /// Empty only when the goal has no atom.
    pub fn admissible_step(
        &self,
        state: &State,
        fresh: &mut FreshVars,
    ) -> Result<Vec<(State, Step)>, EngineError> {
        let Some((position, atom)) = state.goal.leftmost_atom() else {
            return Ok(Vec::new());
        };
        let mut out = Vec::new();
        for (index, rule) in self.program.rules.iter().enumerate() {
            if rule.head.predicate != atom.predicate || rule.head.args.len() != atom.args.len() {
                continue;
            }
            let fresh_start = fresh.position();
            let renamed = rename_apart(rule, fresh);
            let Some(unifier) = mgu(atom, &renamed.head) else {
                continue;
            };
            let replacement = match renamed.body {
                None => renamed.weight.to_expr(),
                Some(body) => Expr::App {
                    kind: ConnectiveKind::Conjunction,
                    name: self.conjunction_for(&body.implication)?,
                    args: alloc::vec![renamed.weight.to_expr(), body.expr],
                },
            };
            let mut goal = state.goal.clone();
            *goal.at_mut(&position).expect("selected position exists") = replacement;
            let next = State {
                goal: unifier.apply_expr(&goal),
                subst: state.subst.compose(&unifier),
            };
            let step = Step {
                stage: Stage::Admissible,
                position: position.clone(),
                action: StepAction::Rule {
                    index,
                    fresh_start,
                    unifier,
                },
                state: next.clone(),
            };
            out.push((next, step));
        }
        if out.is_empty() {
            let mut goal = state.goal.clone();
            *goal.at_mut(&position).expect("selected position exists") = Expr::Value(TruthValue::BOTTOM);
            let next = State {
                goal,
                subst: state.subst.clone(),
            };
            let step = Step {
                stage: Stage::Admissible,
                position,
                action: StepAction::Bottom,
                state: next.clone(),
            };
            out.push((next, step));
        }
        Ok(out)
    }

    /// First admissible computed answer, depth-first in program order.
    ///
    /// Every atom-bearing state has at least one successor (the `0.0`
    /// replacement covers the no-match case), so no branch ever fails and the
    /// first answer lies on the leftmost branch; the search therefore never
    /// backtracks and only the step bound can stop it.
    pub fn admissible_derive(&self, goal: &Expr) -> Result<(Answer, Trace), EngineError> {
        let goal_vars = goal.vars();
        let mut fresh = FreshVars::new();
        let mut state = State::initial(goal.clone());
        let mut trace = Trace::default();
        while !state.goal.is_atom_free() {
            if trace.len() >= self.depth_limit {
                return Err(EngineError::DepthLimitExceeded(self.depth_limit));
            }
            let (next, step) = self
                .admissible_step(&state, &mut fresh)?
                .into_iter()
                .next()
                .expect("atom-bearing states always have a successor");
            trace.steps.push(step);
            state = next;
        }
        let answer = Answer {
            expr: state.goal,
            subst: state.subst.restrict(&goal_vars),
            classification: Classification::Saca,
        };
        Ok((answer, trace))
    }

    /// Evaluates the leftmost-innermost concrete connective whose arguments
    /// are all values. `None` when no such redex exists.
    pub fn interpretive_step(&self, state: &State) -> Result<Option<(State, Step)>, EngineError> {
        let Some(position) = find_redex(&state.goal) else {
            return Ok(None);
        };
        let mut goal = state.goal.clone();
        let slot = goal.at_mut(&position).expect("redex position exists");
        let Expr::App {
            kind,
            name: ConnName::Concrete(label),
            args,
        } = &*slot
        else {
            unreachable!("find_redex returns concrete applications")
        };
        let values: Vec<TruthValue> = args.iter().filter_map(Expr::as_value).collect();
        let value = self.registry.eval(*kind, label, &values)?;
        let action = StepAction::Reduce {
            kind: *kind,
            label: label.clone(),
        };
        *slot = Expr::Value(value);
        let next = State {
            goal,
            subst: state.subst.clone(),
        };
        let step = Step {
            stage: Stage::Interpretive,
            position,
            action,
            state: next.clone(),
        };
        Ok(Some((next, step)))
    }

    /// Interprets an admissible answer to its normal form.
    pub fn interpret(&self, saca: &Answer) -> Result<(Answer, Trace), EngineError> {
        let mut state = State {
            goal: saca.expr.clone(),
            subst: saca.subst.clone(),
        };
        let mut trace = Trace::default();
        while let Some((next, step)) = self.interpretive_step(&state)? {
            trace.steps.push(step);
            state = next;
        }
        let classification = if state.goal.as_value().is_some() {
            Classification::Fca
        } else {
            Classification::Sfca
        };
        Ok((
            Answer {
                expr: state.goal,
                subst: state.subst,
                classification,
            },
            trace,
        ))
    }

    /// First answer of `goal`: admissible stage, then interpretive stage.
    pub fn solve(&self, goal: &Expr) -> Result<(Answer, Trace), EngineError> {
        let (saca, mut trace) = self.admissible_derive(goal)?;
        let (answer, interp) = self.interpret(&saca)?;
        trace.steps.extend(interp.steps);
        Ok((answer, trace))
    }

    /// Re-executes every recorded step from `<goal; id>` and checks each
    /// resulting state against the record. Returns the final state.
    pub fn replay(&self, goal: &Expr, trace: &Trace) -> Result<State, EngineError> {
        let goal_vars = goal.vars();
        let mut state = State::initial(goal.clone());
        let mut restricted = false;
        for (n, step) in trace.steps.iter().enumerate() {
            let next = match (&step.stage, &step.action) {
                (
                    Stage::Admissible,
                    StepAction::Rule {
                        index, fresh_start, ..
                    },
                ) => {
                    let (pos, atom) = state
                        .goal
                        .leftmost_atom()
                        .ok_or_else(|| replay_error(n, "no atom to select"))?;
                    if pos != step.position {
                        return Err(replay_error(n, "selected atom moved"));
                    }
                    let rule = self
                        .program
                        .rules
                        .get(*index)
                        .ok_or_else(|| replay_error(n, "rule index out of range"))?;
                    let mut fresh = FreshVars::starting_at(*fresh_start);
                    let renamed = rename_apart(rule, &mut fresh);
                    let unifier = mgu(atom, &renamed.head)
                        .ok_or_else(|| replay_error(n, "rule head does not unify"))?;
                    let replacement = match renamed.body {
                        None => renamed.weight.to_expr(),
                        Some(body) => Expr::App {
                            kind: ConnectiveKind::Conjunction,
                            name: self.conjunction_for(&body.implication)?,
                            args: alloc::vec![renamed.weight.to_expr(), body.expr],
                        },
                    };
                    let mut g = state.goal.clone();
                    *g.at_mut(&pos).expect("position exists") = replacement;
                    State {
                        goal: unifier.apply_expr(&g),
                        subst: state.subst.compose(&unifier),
                    }
                }
                (Stage::Admissible, StepAction::Bottom) => {
                    let alts = self.admissible_step(&state, &mut FreshVars::new())?;
                    if !matches!(alts.first(), Some((_, s)) if s.action == StepAction::Bottom) {
                        return Err(replay_error(n, "a rule head unifies; bottom not allowed"));
                    }
                    alts.into_iter().next().expect("one alternative").0
                }
                (Stage::Interpretive, StepAction::Reduce { .. }) => {
                    if !restricted {
                        state.subst = state.subst.restrict(&goal_vars);
                        restricted = true;
                    }
                    let (next, redo) = self
                        .interpretive_step(&state)?
                        .ok_or_else(|| replay_error(n, "no redex"))?;
                    if redo.position != step.position || redo.action != step.action {
                        return Err(replay_error(n, "different redex"));
                    }
                    next
                }
                _ => return Err(replay_error(n, "stage and action disagree")),
            };
            if next != step.state {
                return Err(replay_error(n, "state differs from record"));
            }
            state = next;
        }
        if !restricted {
            state.subst = state.subst.restrict(&goal_vars);
        }
        Ok(state)
    }
}

fn replay_error(step: usize, what: &str) -> EngineError {
    EngineError::Replay(format!("step {}: {what}", step + 1))
}

fn find_redex(e: &Expr) -> Option<Position> {
    fn go(e: &Expr, path: &mut Position) -> bool {
        let Expr::App { name, args, .. } = e else {
            return false;
        };
        for (i, arg) in args.iter().enumerate() {
            path.push(i);
            if go(arg, path) {
                return true;
            }
            path.pop();
        }
        matches!(name, ConnName::Concrete(_)) && args.iter().all(|a| matches!(a, Expr::Value(_)))
    }
    let mut path = Vec::new();
    go(e, &mut path).then_some(path)
}

/// `Engine::new(program, registry).solve(goal)`.
pub fn solve(program: &Program, registry: &Registry, goal: &Expr) -> Result<(Answer, Trace), EngineError> {
    Engine::new(program, registry).solve(goal)
}
