use thiserror::Error;

use super::{preserves_formula, PermGenerator};
use crate::formula::{Clause, Formula, Lit, VarRole};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LexLeaderError {
    #[error("generator {index} acts on {found} variables, formula has {expected}")]
    SizeMismatch { index: usize, found: usize, expected: usize },
    #[error("generator {index} is not a symmetry of the formula")]
    NotASymmetry { index: usize },
}

/// Adds one lex-leader predicate per generator: over the generator's
/// support `v_1 < .. < v_s` (by variable index) an assignment must be
/// lexicographically no larger than its image, `(v_1..v_s) <= (p(v_1)..p(v_s))`.
/// Prefix variables `p_0..p_{s-1}` track equality of the first `t`
/// positions, with `p_0` asserted, giving a linear number of clauses.
pub fn lex_leader_sbp(gens: &[PermGenerator], f: &Formula) -> Result<Formula, LexLeaderError> {
    let mut out = f.clone();
    for (index, g) in gens.iter().enumerate() {
        if g.num_vars() != f.num_vars() {
            return Err(LexLeaderError::SizeMismatch { index, found: g.num_vars(), expected: f.num_vars() });
        }
        if !preserves_formula(f, g) {
            return Err(LexLeaderError::NotASymmetry { index });
        }
    }
    for g in gens {
        add_predicate(&mut out, g);
    }
    if !gens.is_empty() {
        out.push_comment(format!("lex-leader: {} generators", gens.len()));
    }
    Ok(out)
}

fn add_predicate(f: &mut Formula, g: &PermGenerator) {
    let support = g.support();
    if support.is_empty() {
        return;
    }
    let mut prefix: Vec<Lit> = Vec::with_capacity(support.len());
    let p0 = f.new_var(VarRole::LexPrefix).pos();
    prefix.push(p0);
    push_simplified(f, vec![p0]);
    for (t, var) in support.iter().enumerate() {
        let v = var.pos();
        let w = g.apply(v);
        let prev = prefix[t];
        // equal so far implies v <= w
        push_simplified(f, vec![!prev, !v, w]);
        if t + 1 == support.len() {
            break;
        }
        let p = f.new_var(VarRole::LexPrefix).pos();
        push_simplified(f, vec![!p, prev]);
        push_simplified(f, vec![!p, !v, w]);
        push_simplified(f, vec![!p, v, !w]);
        push_simplified(f, vec![!prev, !v, !w, p]);
        push_simplified(f, vec![!prev, v, w, p]);
        prefix.push(p);
    }
}

fn push_simplified(f: &mut Formula, lits: Vec<Lit>) {
    if let Some(c) = Clause::simplified(lits) {
        f.add_clause(c);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::Var;
    use crate::solver::{decide, SolverOptions, Status};

    fn x(i: u32) -> Lit {
        Var::new(i).pos()
    }

    fn models(f: &Formula, n: usize) -> Vec<Vec<bool>> {
        // projections onto the first n variables of all models
        let mut out = Vec::new();
        for bits in 0u32..1 << f.num_vars() {
            let m: Vec<bool> = (0..f.num_vars()).map(|i| bits >> i & 1 == 1).collect();
            if f.first_violation(&m).is_none() {
                out.push(m[..n].to_vec());
            }
        }
        out.sort();
        out.dedup();
        out
    }

    #[test]
    fn swap_keeps_lex_smaller() {
        // x1 | x2 under (x1 x2): keep 01 and 11, drop 10
        let mut f = Formula::with_vars(2);
        f.add_clause(Clause::new(vec![x(1), x(2)]).unwrap());
        let g = PermGenerator::from_var_swaps(2, &[(1, 2)]);
        let h = lex_leader_sbp(&[g], &f).unwrap();
        assert_eq!(models(&h, 2), vec![vec![false, true], vec![true, true]]);
        assert_eq!(h.num_vars(), 4);
    }

    #[test]
    fn phase_flip_fixes_value() {
        let f = Formula::with_vars(1);
        let g = PermGenerator::parse("(x1 ~x1)", 1).unwrap();
        let h = lex_leader_sbp(&[g], &f).unwrap();
        assert_eq!(models(&h, 1), vec![vec![false]]);
    }

    #[test]
    fn rejects_non_symmetry() {
        let mut f = Formula::with_vars(2);
        f.add_clause(Clause::new(vec![x(1)]).unwrap());
        let g = PermGenerator::from_var_swaps(2, &[(1, 2)]);
        assert_eq!(lex_leader_sbp(&[g], &f).unwrap_err(), LexLeaderError::NotASymmetry { index: 0 });
        let g3 = PermGenerator::identity(3);
        assert!(matches!(lex_leader_sbp(&[g3], &f), Err(LexLeaderError::SizeMismatch { .. })));
    }

    #[test]
    fn every_orbit_keeps_a_model() {
        // at most one of three, cyclic symmetry plus a swap
        let mut f = Formula::with_vars(3);
        for (a, b) in [(1, 2), (1, 3), (2, 3)] {
            f.add_clause(Clause::new(vec![!x(a), !x(b)]).unwrap());
        }
        f.add_clause(Clause::new(vec![x(1), x(2), x(3)]).unwrap());
        let gens = vec![
            PermGenerator::parse("(x1 x2 x3)", 3).unwrap(),
            PermGenerator::from_var_swaps(3, &[(1, 2)]),
        ];
        let h = lex_leader_sbp(&gens, &f).unwrap();
        // generator predicates only: 100 goes, 010 survives next to the
        // lex leader 001
        assert_eq!(models(&h, 3), vec![vec![false, false, true], vec![false, true, false]]);
        let r = decide(&h, &SolverOptions::default()).unwrap();
        assert_eq!(r.status, Status::Sat);
    }
}
