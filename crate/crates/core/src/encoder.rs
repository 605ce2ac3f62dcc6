//! Reduction of graph coloring to 0-1 ILP.
//!
//! Variable numbering:
//! `x_{i,j}` is `(i - 1) * K + j` and `y_j` is `n * K + j` (1-based `i`, `j`).

use thiserror::Error;

use crate::formula::{Clause, ColoringLayout, Formula, PbConstraint, VarRole};
use crate::graph::Graph;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EncodeError {
    #[error("color bound K must be at least 1")]
    ZeroColors,
}

fn color_vars(f: &mut Formula, g: &Graph, k: usize) -> ColoringLayout {
    for vertex in 1..=g.num_vertices() as u32 {
        for color in 1..=k as u32 {
            f.new_var(VarRole::Color { vertex, color });
        }
    }
    ColoringLayout { vertices: g.num_vertices(), colors: k, has_usage: false }
}

fn conflict_clauses(f: &mut Formula, g: &Graph, layout: &ColoringLayout) {
    for &(a, b) in g.edges() {
        for j in 0..layout.colors {
            let xa = layout.color_var(a as usize, j);
            let xb = layout.color_var(b as usize, j);
            f.add_clause(Clause::new(vec![xa.neg(), xb.neg()]).unwrap());
        }
    }
}

/// Minimum-coloring encoding with at most `k` colors: one exactly-one PB
/// constraint per vertex, `K` conflict clauses per edge, the `y_j`
/// biconditionals as `nK` short plus `K` long clauses, and `MIN sum y_j`.
pub fn encode_opt(g: &Graph, k: usize) -> Result<Formula, EncodeError> {
    if k == 0 {
        return Err(EncodeError::ZeroColors);
    }
    let mut f = Formula::new();
    let mut layout = color_vars(&mut f, g, k);
    for color in 1..=k as u32 {
        f.new_var(VarRole::Usage { color });
    }
    layout.has_usage = true;

    for i in 0..g.num_vertices() {
        f.add_pb(PbConstraint::exactly_one((0..k).map(|j| layout.color_var(i, j).pos())));
    }
    conflict_clauses(&mut f, g, &layout);
    for i in 0..g.num_vertices() {
        for j in 0..k {
            let y = layout.usage_var(j).unwrap();
            f.add_clause(Clause::new(vec![layout.color_var(i, j).neg(), y.pos()]).unwrap());
        }
    }
    for j in 0..k {
        let y = layout.usage_var(j).unwrap();
        let mut lits = vec![y.neg()];
        lits.extend((0..g.num_vertices()).map(|i| layout.color_var(i, j).pos()));
        f.add_clause(Clause::new(lits).unwrap());
    }
    f.set_objective((0..k).map(|j| (1, layout.usage_var(j).unwrap().pos())).collect());
    f.set_layout(layout);
    Ok(f)
}

/// Pure-CNF K-coloring decision encoding: at-least-one color per vertex and
/// the edge conflict clauses. At-most-one is deliberately omitted; any color
/// of a multi-colored vertex gives a proper coloring.
pub fn encode_decision_cnf(g: &Graph, k: usize) -> Result<Formula, EncodeError> {
    if k == 0 {
        return Err(EncodeError::ZeroColors);
    }
    let mut f = Formula::new();
    let layout = color_vars(&mut f, g, k);
    for i in 0..g.num_vertices() {
        f.add_clause(Clause::new((0..k).map(|j| layout.color_var(i, j).pos()).collect()).unwrap());
    }
    conflict_clauses(&mut f, g, &layout);
    f.set_layout(layout);
    Ok(f)
}

/// Reads the vertex colors (0-based) out of a model of a coloring encoding.
/// A vertex with several true `x` variables reports the lowest color.
pub fn decode_coloring(layout: &ColoringLayout, model: &[bool]) -> Vec<Option<usize>> {
    (0..layout.vertices)
        .map(|i| (0..layout.colors).find(|&j| model[layout.color_var(i, j).index()]))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::families;

    #[test]
    fn sizes_match_closed_forms() {
        let g = families::myciel(3);
        let f = encode_opt(&g, 20).unwrap();
        assert_eq!(f.num_vars(), 240);
        assert_eq!(f.clauses().len(), 640);
        assert_eq!(f.pb_constraints().len(), 11);
        assert_eq!(f.objective().unwrap().len(), 20);
        f.validate().unwrap();
    }

    #[test]
    fn single_vertex_k1() {
        let f = encode_opt(&families::empty(1), 1).unwrap();
        assert_eq!(f.num_vars(), 2);
        assert_eq!(f.clauses().len(), 2);
        assert_eq!(f.pb_constraints().len(), 1);
    }

    #[test]
    fn numbering_is_documented_layout() {
        let g = families::path(3);
        let f = encode_opt(&g, 4).unwrap();
        let layout = f.layout().unwrap();
        // x_{2,3} -> (2-1)*4 + 3 = 7; y_2 -> 3*4 + 2 = 14
        assert_eq!(layout.color_var(1, 2).id(), 7);
        assert_eq!(f.role(layout.color_var(1, 2)), VarRole::Color { vertex: 2, color: 3 });
        assert_eq!(layout.usage_var(1).unwrap().id(), 14);
        assert_eq!(f.role(layout.usage_var(1).unwrap()), VarRole::Usage { color: 2 });
    }

    #[test]
    fn zero_colors_rejected() {
        assert_eq!(encode_opt(&families::empty(2), 0).unwrap_err(), EncodeError::ZeroColors);
        assert_eq!(encode_decision_cnf(&families::empty(2), 0).unwrap_err(), EncodeError::ZeroColors);
    }

    #[test]
    fn decision_encoding_has_no_usage_or_pb() {
        let g = families::complete(3);
        let f = encode_decision_cnf(&g, 2).unwrap();
        assert_eq!(f.num_vars(), 6);
        assert!(f.pb_constraints().is_empty());
        assert!(f.objective().is_none());
        assert_eq!(f.clauses().len(), 3 + 3 * 2);
        assert!(!f.layout().unwrap().has_usage);
    }
}
