//! Decision and linear-search optimization for CNF plus pseudo-Boolean
//! formulas.

mod engine;
mod heap;
mod pb;

use std::time::{Duration, Instant};

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::formula::{normalize, Cmp, Formula, FormulaError, Lit, Relation};
use engine::{Engine, Limits, Outcome};
pub use pb::{propagate_pb, PbPropagation};

pub const DEFAULT_TIMEOUT: Duration = Duration::from_secs(1000);

#[derive(Debug, Error)]
pub enum SolverError {
    #[error("malformed formula: {0}")]
    Malformed(#[from] FormulaError),
    #[error("internal error: model violates {0}")]
    ModelCheck(String),
    #[error("formula has no objective to minimize")]
    NoObjective,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Status {
    Optimal,
    Sat,
    Unsat,
    Timeout,
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Status::Optimal => "OPTIMAL",
            Status::Sat => "SAT",
            Status::Unsat => "UNSAT",
            Status::Timeout => "TIMEOUT",
        })
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Stats {
    pub decisions: u64,
    pub propagations: u64,
    pub conflicts: u64,
    pub restarts: u64,
    pub learned: u64,
    pub reductions: u64,
    /// SAT calls made by the optimization loop
    pub calls: u64,
    pub elapsed_s: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SolveResult {
    pub status: Status,
    pub best_value: Option<i64>,
    /// Serialized as DIMACS-style signed variable ids.
    #[serde(serialize_with = "model_as_lits")]
    pub model: Option<Vec<bool>>,
    pub stats: Stats,
}

fn model_as_lits<S: Serializer>(model: &Option<Vec<bool>>, s: S) -> Result<S::Ok, S::Error> {
    let lits: Option<Vec<i64>> = model.as_ref().map(|m| {
        m.iter()
            .enumerate()
            .map(|(i, &b)| if b { i as i64 + 1 } else { -(i as i64 + 1) })
            .collect()
    });
    lits.serialize(s)
}

#[derive(Clone, Debug)]
pub struct SolverOptions {
    pub timeout: Option<Duration>,
    pub max_conflicts: Option<u64>,
    pub seed: u64,
    /// Conflict-driven learning and non-chronological backjumping; when off
    /// the search is plain chronological DLL.
    pub learning: bool,
}

impl Default for SolverOptions {
    fn default() -> SolverOptions {
        SolverOptions { timeout: Some(DEFAULT_TIMEOUT), max_conflicts: None, seed: 0, learning: true }
    }
}

impl SolverOptions {
    pub fn with_timeout(timeout: Duration) -> SolverOptions {
        SolverOptions { timeout: Some(timeout), ..SolverOptions::default() }
    }
}

fn load(f: &Formula, opts: &SolverOptions) -> Result<Engine, SolverError> {
    f.validate()?;
    let mut e = Engine::new(f.num_vars(), opts.seed, opts.learning);
    for c in f.clauses() {
        e.add_clause(c.lits());
    }
    for p in f.pb_constraints() {
        let terms: Vec<(i64, Lit)> = p.terms().iter().map(|t| (t.coef, t.lit)).collect();
        e.add_pb_le(&terms, p.bound());
        if p.relation() == Relation::Eq {
            let total: i64 = terms.iter().map(|(c, _)| c).sum();
            let flipped: Vec<(i64, Lit)> = terms.iter().map(|&(c, l)| (c, !l)).collect();
            e.add_pb_le(&flipped, total - p.bound());
        }
    }
    Ok(e)
}

fn extract_model(e: &Engine, f: &Formula) -> Result<Vec<bool>, SolverError> {
    let model: Vec<bool> = (0..f.num_vars()).map(|v| e.model_value(v)).collect();
    if let Some(v) = f.first_violation(&model) {
        return Err(SolverError::ModelCheck(format!("{v:?}")));
    }
    Ok(model)
}

fn limits(opts: &SolverOptions, start: Instant) -> Limits {
    Limits { deadline: opts.timeout.map(|t| start + t), max_conflicts: opts.max_conflicts }
}

/// Satisfiability of the clauses and PB constraints; the objective is
/// ignored.
pub fn decide(f: &Formula, opts: &SolverOptions) -> Result<SolveResult, SolverError> {
    let start = Instant::now();
    let mut e = load(f, opts)?;
    let outcome = e.solve(&limits(opts, start));
    let mut stats = e.stats.clone();
    stats.calls = 1;
    stats.elapsed_s = start.elapsed().as_secs_f64();
    let (status, model) = match outcome {
        Outcome::Sat => (Status::Sat, Some(extract_model(&e, f)?)),
        Outcome::Unsat => (Status::Unsat, None),
        Outcome::Interrupted => (Status::Timeout, None),
    };
    Ok(SolveResult { status, best_value: None, model, stats })
}

/// Linear search: after each model of value `B` the constraint
/// `objective <= B - 1` is added and the same solver instance continues,
/// keeping its learned clauses. The objective values seen are strictly
/// decreasing.
pub fn minimize(f: &Formula, opts: &SolverOptions) -> Result<SolveResult, SolverError> {
    minimize_with(f, opts, |_, _| {})
}

/// [`minimize`] with a callback invoked on every improving model.
pub fn minimize_with(
    f: &Formula,
    opts: &SolverOptions,
    mut on_model: impl FnMut(i64, &[bool]),
) -> Result<SolveResult, SolverError> {
    let objective = f.objective().ok_or(SolverError::NoObjective)?.to_vec();
    let start = Instant::now();
    let lim = limits(opts, start);
    let mut e = load(f, opts)?;
    let mut best: Option<(i64, Vec<bool>)> = None;
    let mut calls = 0;
    let status = loop {
        calls += 1;
        match e.solve(&lim) {
            Outcome::Sat => {
                let model = extract_model(&e, f)?;
                let value = f.objective_value(&model).unwrap();
                debug_assert!(best.as_ref().is_none_or(|(b, _)| value < *b));
                log::debug!("objective {value} after {} conflicts", e.stats.conflicts);
                on_model(value, &model);
                best = Some((value, model));
                e.reset();
                let bound = normalize(&objective, Cmp::Le, value - 1);
                let terms: Vec<(i64, Lit)> = bound.terms().iter().map(|t| (t.coef, t.lit)).collect();
                e.add_pb_le(&terms, bound.bound());
            }
            Outcome::Unsat => break if best.is_some() { Status::Optimal } else { Status::Unsat },
            Outcome::Interrupted => break Status::Timeout,
        }
    };
    let mut stats = e.stats.clone();
    stats.calls = calls;
    stats.elapsed_s = start.elapsed().as_secs_f64();
    let (best_value, model) = match best {
        Some((v, m)) => (Some(v), Some(m)),
        None => (None, None),
    };
    Ok(SolveResult { status, best_value, model, stats })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{Clause, PbConstraint, PbTerm, Var};

    fn x(i: u32) -> Lit {
        Var::new(i).pos()
    }

    fn quick() -> SolverOptions {
        SolverOptions { timeout: Some(Duration::from_secs(30)), ..SolverOptions::default() }
    }

    #[test]
    fn contradictory_units() {
        let mut f = Formula::with_vars(1);
        f.add_clause(Clause::new(vec![x(1)]).unwrap());
        f.add_clause(Clause::new(vec![!x(1)]).unwrap());
        assert_eq!(decide(&f, &quick()).unwrap().status, Status::Unsat);
    }

    #[test]
    fn chain_forces_unit_learning() {
        // a -> b, a -> ~b: deciding a at level 1 conflicts and learns ~a
        let mut f = Formula::with_vars(3);
        f.add_clause(Clause::new(vec![!x(1), x(2)]).unwrap());
        f.add_clause(Clause::new(vec![!x(1), !x(2), x(3)]).unwrap());
        f.add_clause(Clause::new(vec![!x(1), !x(2), !x(3)]).unwrap());
        let r = decide(&f, &quick()).unwrap();
        assert_eq!(r.status, Status::Sat);
        assert!(!r.model.unwrap()[0]);
    }

    #[test]
    fn pb_only_problem() {
        // 3a + 2b + 2c <= 4, a + b + c >= 2 (as ~a + ~b + ~c <= 1)
        let mut f = Formula::with_vars(3);
        f.add_pb(
            PbConstraint::new(
                vec![PbTerm::new(3, x(1)), PbTerm::new(2, x(2)), PbTerm::new(2, x(3))],
                Relation::Le,
                4,
            )
            .unwrap(),
        );
        f.add_pb(
            PbConstraint::new(
                vec![PbTerm::new(1, !x(1)), PbTerm::new(1, !x(2)), PbTerm::new(1, !x(3))],
                Relation::Le,
                1,
            )
            .unwrap(),
        );
        let r = decide(&f, &quick()).unwrap();
        assert_eq!(r.status, Status::Sat);
        assert_eq!(r.model.unwrap(), vec![false, true, true]);
    }

    #[test]
    fn minimize_simple_objective() {
        // at least two of four, weights 5 3 4 1 -> best 4 (b + d)
        let mut f = Formula::with_vars(4);
        f.add_pb(normalize(&[(1, x(1)), (1, x(2)), (1, x(3)), (1, x(4))], Cmp::Ge, 2));
        f.set_objective(vec![(5, x(1)), (3, x(2)), (4, x(3)), (1, x(4))]);
        let r = minimize(&f, &quick()).unwrap();
        assert_eq!(r.status, Status::Optimal);
        assert_eq!(r.best_value, Some(4));
    }

    #[test]
    fn minimize_negative_coefficients() {
        // min -a - b subject to ~a | ~b
        let mut f = Formula::with_vars(2);
        f.add_clause(Clause::new(vec![!x(1), !x(2)]).unwrap());
        f.set_objective(vec![(-1, x(1)), (-1, x(2))]);
        let r = minimize(&f, &quick()).unwrap();
        assert_eq!(r.best_value, Some(-1));
        assert_eq!(r.status, Status::Optimal);
    }

    #[test]
    fn minimize_requires_objective() {
        assert!(matches!(minimize(&Formula::with_vars(1), &quick()), Err(SolverError::NoObjective)));
    }

    #[test]
    fn dangling_variable_is_malformed() {
        let mut f = Formula::with_vars(1);
        f.add_clause(Clause::new(vec![x(2)]).unwrap());
        assert!(matches!(decide(&f, &quick()), Err(SolverError::Malformed(_))));
    }

    #[test]
    fn json_record() {
        let r = SolveResult {
            status: Status::Optimal,
            best_value: Some(1),
            model: Some(vec![true, false]),
            stats: Stats::default(),
        };
        let text = serde_json::to_string(&r).unwrap();
        assert!(text.starts_with(r#"{"status":"OPTIMAL","best_value":1,"model":[1,-2],"#));
    }
}
