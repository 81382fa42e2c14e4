//! Tuning the symbols of a program against test cases.
//!
//! 1. Each test goal is run once in the symbolic program, giving a symbolic
//!    answer (SFCA).
//! 2. The domain spec is enumerated into candidate substitutions.
//! 3. For every candidate, each cached answer is instantiated and
//!    interpreted to a value `v_ij`; `d_ij = |v_ij - v_i|`.
//! 4. The candidate with the smallest `z_j = sum_i d_ij` wins; ties go to
//!    the earliest candidate.
//!
//! Values are also reported rounded half-away-from-zero to a fixed number
//! of decimals: the reported deviation is taken from the rounded value and
//! the reported `z` sums the reported deviations. [`Objective::Reported`]
//! ranks candidates by that reported `z`, [`Objective::Exact`] by the
//! unrounded one.

use alloc::string::ToString;
use alloc::vec::Vec;
use core::fmt;

use crate::engine::{Answer, Engine, DEFAULT_DEPTH_LIMIT};
use crate::error::{SymbolError, TuneError};
use crate::lattice::{Registry, TruthValue};
use crate::symsubst::{DomainSpec, SymbolicSubstitution};
use crate::syntax::{Expr, Program, SymbolId};
use crate::unify::Substitution;

#[derive(Clone, Debug, PartialEq)]
pub struct TestCase {
    pub goal: Expr,
    pub expected: TruthValue,
    /// Checked up to variable renaming when present.
    pub expected_subst: Option<Substitution>,
}

impl TestCase {
    pub fn new(goal: Expr, expected: TruthValue) -> Self {
        TestCase {
            goal,
            expected,
            expected_subst: None,
        }
    }
}

/// A decimal rounded half-away-from-zero, held as an integer count of
/// `10^-decimals` units so sums and comparisons are exact.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rounded {
    units: i64,
    decimals: u32,
}

fn pow10(decimals: u32) -> i64 {
    (0..decimals).fold(1i64, |acc, _| acc * 10)
}

impl Rounded {
    /// Scaled values within `1e-9` units of a half boundary round away from
    /// zero, so `0.585` gives `0.59` even if the float sits just below it.
    pub fn half_away(x: f64, decimals: u32) -> Self {
        let scaled = x.abs() * pow10(decimals) as f64;
        let mag = (scaled + 0.5 + 1e-9) as i64;
        Rounded {
            units: if x < 0.0 { -mag } else { mag },
            decimals,
        }
    }

    pub fn from_units(units: i64, decimals: u32) -> Self {
        Rounded { units, decimals }
    }

    pub fn units(self) -> i64 {
        self.units
    }

    pub fn decimals(self) -> u32 {
        self.decimals
    }

    pub fn to_f64(self) -> f64 {
        self.units as f64 / pow10(self.decimals) as f64
    }
}

/// Fixed-point rendering: `0.05`, `0.90`.
impl fmt::Display for Rounded {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let scale = pow10(self.decimals);
        let sign = if self.units < 0 { "-" } else { "" };
        let mag = self.units.unsigned_abs();
        let (int, frac) = (mag / scale as u64, mag % scale as u64);
        if self.decimals == 0 {
            write!(f, "{sign}{int}")
        } else {
            write!(f, "{sign}{int}.{frac:0width$}", width = self.decimals as usize)
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Objective {
    /// Rank by the sum of reported (rounded) deviations.
    #[default]
    Reported,
    /// Rank by the sum of unrounded deviations.
    Exact,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TuneOptions {
    pub objective: Objective,
    pub decimals: u32,
    pub depth_limit: usize,
}

impl Default for TuneOptions {
    fn default() -> Self {
        TuneOptions {
            objective: Objective::Reported,
            decimals: 2,
            depth_limit: DEFAULT_DEPTH_LIMIT,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CaseOutcome {
    pub value: TruthValue,
    pub deviation: f64,
    pub reported_value: Rounded,
    pub reported_deviation: Rounded,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CandidateResult {
    /// 0-based position in enumeration order.
    pub index: usize,
    pub theta: SymbolicSubstitution,
    pub cases: Vec<CaseOutcome>,
    pub total: f64,
    pub reported_total: Rounded,
}

#[derive(Clone, Debug)]
pub struct TuningReport {
    pub symbols: Vec<SymbolId>,
    pub cases: Vec<TestCase>,
    /// Step-1 answers, one per test case.
    pub sfcas: Vec<Answer>,
    pub candidates: Vec<CandidateResult>,
    pub best: usize,
    pub options: TuneOptions,
}

impl TuningReport {
    pub fn best(&self) -> &CandidateResult {
        &self.candidates[self.best]
    }
}

/// Step 1 done: answers cached and candidates enumerated, ready for
/// per-candidate evaluation (which may run in any order or in parallel).
#[derive(Clone, Debug)]
pub struct PreparedTuning<'r> {
    registry: &'r Registry,
    pub symbols: Vec<SymbolId>,
    pub cases: Vec<TestCase>,
    pub sfcas: Vec<Answer>,
    pub candidates: Vec<SymbolicSubstitution>,
    pub options: TuneOptions,
}

pub fn prepare<'r>(
    program: &Program,
    cases: &[TestCase],
    spec: &DomainSpec,
    registry: &'r Registry,
    options: TuneOptions,
) -> Result<PreparedTuning<'r>, TuneError> {
    if cases.is_empty() {
        return Err(TuneError::NoTestCases);
    }
    let symbols = program.symbols()?;
    for declared in spec.symbols() {
        match symbols.iter().find(|s| s.name == declared.name) {
            None => return Err(SymbolError::UnknownSymbol(declared.name.clone()).into()),
            Some(s) if s.sort != declared.sort => {
                return Err(SymbolError::InvalidAssignment {
                    name: declared.name.clone(),
                    sort: s.sort,
                    value: declared.sort.to_string(),
                }
                .into())
            }
            Some(_) => {}
        }
    }
    let missing: Vec<_> = symbols
        .iter()
        .filter(|s| spec.domain(&s.name).is_none())
        .map(|s| s.name.clone())
        .collect();
    if !missing.is_empty() {
        return Err(TuneError::IncompleteDomain(missing));
    }

    let engine = Engine::new(program, registry).with_depth_limit(options.depth_limit);
    let mut sfcas = Vec::with_capacity(cases.len());
    for (i, case) in cases.iter().enumerate() {
        let (answer, _) = engine
            .solve(&case.goal)
            .map_err(|source| TuneError::Engine { case: i, source })?;
        if let Some(expected) = &case.expected_subst {
            if !expected.is_variant_of(&answer.subst) {
                return Err(TuneError::TestCaseSubstMismatch {
                    case: i,
                    expected: expected.to_string(),
                    computed: answer.subst.to_string(),
                });
            }
        }
        sfcas.push(answer);
    }
    Ok(PreparedTuning {
        registry,
        symbols,
        cases: cases.to_vec(),
        sfcas,
        candidates: spec.enumerate().collect(),
        options,
    })
}

impl PreparedTuning<'_> {
    pub fn evaluate(&self, index: usize) -> Result<CandidateResult, TuneError> {
        let mut result = evaluate_candidate(
            &self.candidates[index],
            &self.sfcas,
            &self.cases,
            self.registry,
            self.options.decimals,
        )?;
        result.index = index;
        Ok(result)
    }

    /// Assembles the report from results in any order.
    pub fn finish(self, mut results: Vec<CandidateResult>) -> TuningReport {
        results.sort_by_key(|r| r.index);
        let best = select_best(&results, self.options.objective);
        TuningReport {
            symbols: self.symbols,
            cases: self.cases,
            sfcas: self.sfcas,
            candidates: results,
            best,
            options: self.options,
        }
    }
}

/// Instantiates every cached answer with `theta` and interprets it.
pub fn evaluate_candidate(
    theta: &SymbolicSubstitution,
    sfcas: &[Answer],
    cases: &[TestCase],
    registry: &Registry,
    decimals: u32,
) -> Result<CandidateResult, TuneError> {
    let empty = Program::default();
    let engine = Engine::new(&empty, registry);
    let mut outcomes = Vec::with_capacity(cases.len());
    for (i, (sfca, case)) in sfcas.iter().zip(cases).enumerate() {
        let instantiated = Answer {
            expr: theta.apply_expr(&sfca.expr),
            ..sfca.clone()
        };
        let (answer, _) = engine
            .interpret(&instantiated)
            .map_err(|source| TuneError::Engine { case: i, source })?;
        let value = answer.value().ok_or_else(|| TuneError::NonGroundResult {
            case: i,
            expr: answer.expr.to_string(),
        })?;
        let reported_value = Rounded::half_away(value.get(), decimals);
        let expected = Rounded::half_away(case.expected.get(), decimals);
        outcomes.push(CaseOutcome {
            value,
            deviation: (value.get() - case.expected.get()).abs(),
            reported_value,
            reported_deviation: Rounded::from_units((reported_value.units - expected.units).abs(), decimals),
        });
    }
    Ok(CandidateResult {
        index: 0,
        theta: theta.clone(),
        total: outcomes.iter().map(|o| o.deviation).sum(),
        reported_total: Rounded::from_units(
            outcomes.iter().map(|o| o.reported_deviation.units).sum(),
            decimals,
        ),
        cases: outcomes,
    })
}

/// Index of the minimising candidate; the earliest wins ties.
pub fn select_best(candidates: &[CandidateResult], objective: Objective) -> usize {
    let mut best = 0;
    for (i, c) in candidates.iter().enumerate().skip(1) {
        let better = match objective {
            Objective::Reported => c.reported_total < candidates[best].reported_total,
            Objective::Exact => c.total < candidates[best].total,
        };
        if better {
            best = i;
        }
    }
    best
}

/// Sequential tuning run with default options.
pub fn tune(
    program: &Program,
    cases: &[TestCase],
    spec: &DomainSpec,
    registry: &Registry,
) -> Result<TuningReport, TuneError> {
    tune_with(program, cases, spec, registry, TuneOptions::default())
}

pub fn tune_with(
    program: &Program,
    cases: &[TestCase],
    spec: &DomainSpec,
    registry: &Registry,
    options: TuneOptions,
) -> Result<TuningReport, TuneError> {
    let prepared = prepare(program, cases, spec, registry, options)?;
    let results = (0..prepared.candidates.len())
        .map(|i| prepared.evaluate(i))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(prepared.finish(results))
}
