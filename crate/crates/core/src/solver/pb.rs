//! Slack-based propagation for normalized pseudo-Boolean constraints.

use crate::formula::{Lit, PbConstraint, Relation};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PbPropagation {
    /// Literals forced true, in term order.
    Implied(Vec<Lit>),
    Conflict,
}

fn lit_value(lit: Lit, assignment: &[Option<bool>]) -> Option<bool> {
    assignment[lit.var().index()].map(|v| v == lit.is_positive())
}

fn propagate_le(terms: &[(i64, Lit)], bound: i64, assignment: &[Option<bool>], out: &mut Vec<Lit>) -> bool {
    let true_sum: i64 = terms
        .iter()
        .filter(|(_, l)| lit_value(*l, assignment) == Some(true))
        .map(|(c, _)| c)
        .sum();
    let slack = bound - true_sum;
    if slack < 0 {
        return false;
    }
    for &(c, l) in terms {
        if c > slack && lit_value(l, assignment).is_none() && !out.contains(&!l) {
            out.push(!l);
        }
    }
    true
}

/// One propagation step of `c` under a partial assignment indexed by 0-based
/// variable. An `=` constraint is treated as the pair `sum <= b` and
/// `sum of complements <= total - b`.
pub fn propagate_pb(c: &PbConstraint, assignment: &[Option<bool>]) -> PbPropagation {
    let terms: Vec<(i64, Lit)> = c.terms().iter().map(|t| (t.coef, t.lit)).collect();
    let mut implied = Vec::new();
    if !propagate_le(&terms, c.bound(), assignment, &mut implied) {
        return PbPropagation::Conflict;
    }
    if c.relation() == Relation::Eq {
        let total: i64 = terms.iter().map(|(c, _)| c).sum();
        let flipped: Vec<(i64, Lit)> = terms.iter().map(|&(c, l)| (c, !l)).collect();
        if !propagate_le(&flipped, total - c.bound(), assignment, &mut implied) {
            return PbPropagation::Conflict;
        }
        if implied.iter().any(|l| implied.contains(&!*l)) {
            return PbPropagation::Conflict;
        }
    }
    PbPropagation::Implied(implied)
}

/// Engine-side `<=` row: terms sorted by coefficient, largest first, and the
/// sum of coefficients of literals already processed as true.
#[derive(Clone, Debug)]
pub(crate) struct PbRow {
    pub terms: Vec<(i64, Lit)>,
    pub bound: i64,
    pub true_sum: i64,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{PbTerm, Var};

    fn x(i: u32) -> Lit {
        Var::new(i).pos()
    }

    #[test]
    fn slack_implies_large_terms_false() {
        // 2a + b <= 2 with a true
        let c = PbConstraint::new(vec![PbTerm::new(2, x(1)), PbTerm::new(1, x(2))], Relation::Le, 2).unwrap();
        assert_eq!(propagate_pb(&c, &[Some(true), None]), PbPropagation::Implied(vec![!x(2)]));
        assert_eq!(propagate_pb(&c, &[None, None]), PbPropagation::Implied(vec![]));
        assert_eq!(propagate_pb(&c, &[None, Some(true)]), PbPropagation::Implied(vec![!x(1)]));
    }

    #[test]
    fn exactly_one() {
        let c = PbConstraint::exactly_one([x(1), x(2), x(3)]);
        assert_eq!(
            propagate_pb(&c, &[Some(true), None, None]),
            PbPropagation::Implied(vec![!x(2), !x(3)])
        );
        assert_eq!(propagate_pb(&c, &[Some(false), Some(false), None]), PbPropagation::Implied(vec![x(3)]));
        let pair = PbConstraint::exactly_one([x(1), x(2)]);
        assert_eq!(propagate_pb(&pair, &[Some(false), Some(false)]), PbPropagation::Conflict);
        assert_eq!(propagate_pb(&pair, &[Some(true), Some(true)]), PbPropagation::Conflict);
    }
}
