//! OPB (pseudo-Boolean competition) text and DIMACS CNF output.
//!
//! Emission layout: the `* #variable= N #constraint= C` header, formula
//! comments as `*` lines, the `min:` line, PB constraints, then clauses.
//! Normalized `<=` constraints are written as `>=` with negated
//! coefficients; clauses as `+1 ... >= 1`. [`parse_opb`] inverts this
//! exactly, so `emit(parse(emit(f))) == emit(f)`.

use std::fmt::Write as _;

use thiserror::Error;

use crate::formula::{normalize, Clause, Cmp, Formula, Lit, PbConstraint, Relation, Var};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OpbError {
    #[error("line {line}: invalid token `{token}`")]
    InvalidToken { line: usize, token: String },
    #[error("line {line}: constraint is missing its terminating `;`")]
    MissingSemicolon { line: usize },
    #[error("line {line}: constraint has no relational operator")]
    MissingRelation { line: usize },
    #[error("line {line}: only minimization objectives are supported")]
    UnsupportedObjective { line: usize },
    #[error("line {line}: variable x{id} exceeds the declared {declared} variables")]
    UndeclaredVariable { line: usize, id: u32, declared: usize },
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
}

fn write_lit(out: &mut String, coef: i64, lit: Lit) {
    write!(out, "{coef:+} {lit} ").unwrap();
}

pub fn emit_opb(f: &Formula) -> String {
    let mut out = String::new();
    let constraints = f.clauses().len() + f.pb_constraints().len();
    writeln!(out, "* #variable= {} #constraint= {}", f.num_vars(), constraints).unwrap();
    for c in f.comments() {
        writeln!(out, "* {c}").unwrap();
    }
    if let Some(obj) = f.objective() {
        out.push_str("min: ");
        for &(c, l) in obj {
            write_lit(&mut out, c, l);
        }
        out.push_str(";\n");
    }
    for p in f.pb_constraints() {
        match p.relation() {
            Relation::Eq => {
                for t in p.terms() {
                    write_lit(&mut out, t.coef, t.lit);
                }
                writeln!(out, "= {} ;", p.bound()).unwrap();
            }
            Relation::Le => {
                for t in p.terms() {
                    write_lit(&mut out, -t.coef, t.lit);
                }
                writeln!(out, ">= {} ;", -p.bound()).unwrap();
            }
        }
    }
    for c in f.clauses() {
        for &l in c.lits() {
            write_lit(&mut out, 1, l);
        }
        out.push_str(">= 1 ;\n");
    }
    out
}

fn parse_lit(token: &str, line: usize) -> Result<Lit, OpbError> {
    let (positive, body) = match token.strip_prefix('~') {
        Some(rest) => (false, rest),
        None => (true, token),
    };
    let id = body
        .strip_prefix('x')
        .and_then(|d| d.parse::<u32>().ok())
        .filter(|&id| id > 0)
        .ok_or_else(|| OpbError::InvalidToken { line, token: token.to_string() })?;
    Ok(Lit::new(Var::new(id), positive))
}

fn parse_coef(token: &str, line: usize) -> Result<i64, OpbError> {
    token
        .parse::<i64>()
        .map_err(|_| OpbError::InvalidToken { line, token: token.to_string() })
}

fn parse_terms(tokens: &[&str], line: usize) -> Result<Vec<(i64, Lit)>, OpbError> {
    if tokens.len() % 2 != 0 {
        return Err(OpbError::Malformed { line, message: "terms must be `coef literal` pairs".into() });
    }
    tokens
        .chunks(2)
        .map(|pair| Ok((parse_coef(pair[0], line)?, parse_lit(pair[1], line)?)))
        .collect()
}

/// Parses OPB text. Variable roles are not part of the format; every
/// variable comes back as auxiliary.
pub fn parse_opb(text: &str) -> Result<Formula, OpbError> {
    let mut declared: Option<usize> = None;
    let mut comments = Vec::new();
    let mut objective = None;
    let mut clauses = Vec::new();
    let mut pbs = Vec::new();
    let mut max_id = 0u32;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() {
            continue;
        }
        if let Some(comment) = trimmed.strip_prefix('*') {
            let comment = comment.trim();
            if declared.is_none() && comment.starts_with("#variable=") {
                let mut it = comment.split_whitespace();
                let _ = it.next();
                let n = it.next().and_then(|t| t.parse::<usize>().ok()).ok_or_else(|| {
                    OpbError::Malformed { line, message: "bad #variable= header".into() }
                })?;
                declared = Some(n);
            } else {
                comments.push(comment.to_string());
            }
            continue;
        }
        let body = trimmed
            .strip_suffix(';')
            .ok_or(OpbError::MissingSemicolon { line })?
            .trim();
        if let Some(obj) = body.strip_prefix("min:") {
            let tokens: Vec<&str> = obj.split_whitespace().collect();
            let terms = parse_terms(&tokens, line)?;
            max_id = terms.iter().map(|(_, l)| l.var().id()).fold(max_id, u32::max);
            objective = Some(terms);
            continue;
        }
        if body.starts_with("max:") {
            return Err(OpbError::UnsupportedObjective { line });
        }
        let tokens: Vec<&str> = body.split_whitespace().collect();
        let op_pos = tokens
            .iter()
            .position(|t| matches!(*t, ">=" | "<=" | "="))
            .ok_or(OpbError::MissingRelation { line })?;
        if op_pos + 2 != tokens.len() {
            return Err(OpbError::Malformed { line, message: "expected a single right-hand side".into() });
        }
        let terms = parse_terms(&tokens[..op_pos], line)?;
        let rhs = parse_coef(tokens[op_pos + 1], line)?;
        max_id = terms.iter().map(|(_, l)| l.var().id()).fold(max_id, u32::max);
        let cmp = match tokens[op_pos] {
            ">=" => Cmp::Ge,
            "<=" => Cmp::Le,
            _ => Cmp::Eq,
        };
        let is_clause = cmp == Cmp::Ge && rhs == 1 && !terms.is_empty() && terms.iter().all(|(c, _)| *c == 1);
        if is_clause {
            if let Ok(clause) = Clause::new(terms.iter().map(|&(_, l)| l).collect()) {
                clauses.push(clause);
                continue;
            }
        }
        pbs.push(normalize(&terms, cmp, rhs));
    }

    let num_vars = match declared {
        Some(n) => {
            if max_id as usize > n {
                return Err(OpbError::UndeclaredVariable { line: 0, id: max_id, declared: n });
            }
            n
        }
        None => max_id as usize,
    };
    let mut f = Formula::with_vars(num_vars);
    for c in comments {
        f.push_comment(c);
    }
    for c in clauses {
        f.add_clause(c);
    }
    for p in pbs {
        f.add_pb(p);
    }
    if let Some(obj) = objective {
        f.set_objective(obj);
    }
    Ok(f)
}

/// DIMACS CNF. Only clauses are written; PB constraints and the objective
/// have no CNF form here, so callers pass clause-only formulas.
pub fn emit_dimacs_cnf(f: &Formula) -> String {
    debug_assert!(f.pb_constraints().is_empty());
    let mut out = String::new();
    for c in f.comments() {
        writeln!(out, "c {c}").unwrap();
    }
    writeln!(out, "p cnf {} {}", f.num_vars(), f.clauses().len()).unwrap();
    for c in f.clauses() {
        for l in c.lits() {
            write!(out, "{} ", l.to_dimacs()).unwrap();
        }
        out.push_str("0\n");
    }
    out
}

/// Convenience for tests and the CLI: a PB constraint as it would appear on
/// one OPB line.
pub fn pb_line(p: &PbConstraint) -> String {
    let mut f = Formula::with_vars(p.terms().iter().map(|t| t.lit.var().id() as usize).max().unwrap_or(0));
    f.add_pb(p.clone());
    emit_opb(&f).lines().nth(1).unwrap_or_default().to_string()
}
