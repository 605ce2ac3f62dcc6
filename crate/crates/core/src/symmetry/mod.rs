//! Formula symmetries: colored-graph construction, automorphism search,
//! group order and lex-leader predicates.

mod lexleader;
mod perm;
mod refine;
mod schreier;
mod search;

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;

use crate::formula::{Formula, Lit, Relation};

pub use lexleader::{lex_leader_sbp, LexLeaderError};
pub use perm::{ParsePermError, PermGenerator};
pub use schreier::{group_order, group_order_of_node_perms};
pub use search::{find_generators, SearchBudget, SearchOutcome, DEFAULT_MAX_NODES};

/// What a node of the colored graph stands for.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NodeOrigin {
    Literal(Lit),
    Clause(usize),
    Pb(usize),
    /// groups the literals of PB constraint `pb` that carry coefficient `coef`
    PbCoef { pb: usize, coef: i64 },
    Objective,
    ObjectiveCoef(i64),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum ColorKey {
    Literal,
    Clause,
    Pb(Relation, i64, usize),
    PbCoef(i64),
    Objective,
    ObjectiveCoef(i64),
}

/// Undirected vertex-colored graph whose automorphisms fixing the color
/// classes contain the formula's symmetries. Nodes `0..2 * num_vars` are the
/// literal nodes, numbered by literal code.
#[derive(Clone, Debug)]
pub struct ColoredGraph {
    colors: Vec<u32>,
    adj: Vec<Vec<u32>>,
    origin: Vec<NodeOrigin>,
    num_literal_nodes: usize,
}

impl ColoredGraph {
    pub fn num_nodes(&self) -> usize {
        self.colors.len()
    }

    pub fn num_literal_nodes(&self) -> usize {
        self.num_literal_nodes
    }

    pub fn color(&self, node: usize) -> u32 {
        self.colors[node]
    }

    pub fn colors(&self) -> &[u32] {
        &self.colors
    }

    pub fn num_colors(&self) -> usize {
        self.colors.iter().max().map_or(0, |&c| c as usize + 1)
    }

    pub fn neighbors(&self, node: usize) -> &[u32] {
        &self.adj[node]
    }

    pub fn origin(&self, node: usize) -> NodeOrigin {
        self.origin[node]
    }

    pub fn num_edges(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adj[a].binary_search(&(b as u32)).is_ok()
    }

    /// Whether `perm` (node images) preserves colors and adjacency.
    pub fn is_automorphism(&self, perm: &[u32]) -> bool {
        if perm.len() != self.num_nodes() {
            return false;
        }
        (0..self.num_nodes()).all(|v| {
            let pv = perm[v] as usize;
            self.colors[v] == self.colors[pv]
                && self.adj[v].len() == self.adj[pv].len()
                && self.adj[v].iter().all(|&u| self.has_edge(pv, perm[u as usize] as usize))
        })
    }
}

/// Builds the colored graph: literal nodes in one class joined by
/// consistency edges, binary clauses as literal edges, longer clauses as
/// clause nodes, one node per PB constraint colored by its signature (with
/// per-coefficient intermediate nodes when coefficients differ) and one
/// objective node.
pub fn build_colored_graph(f: &Formula) -> ColoredGraph {
    let n_lit = 2 * f.num_vars();
    let mut keys: Vec<ColorKey> = vec![ColorKey::Literal; n_lit];
    let mut origin: Vec<NodeOrigin> = (0..n_lit).map(|c| NodeOrigin::Literal(Lit::from_code(c))).collect();
    let mut edges: Vec<(u32, u32)> = Vec::new();
    let mut add_node = |key: ColorKey, o: NodeOrigin, keys: &mut Vec<ColorKey>| {
        keys.push(key);
        origin.push(o);
        keys.len() as u32 - 1
    };

    for v in 0..f.num_vars() {
        edges.push((2 * v as u32, 2 * v as u32 + 1));
    }
    for (ci, c) in f.clauses().iter().enumerate() {
        let lits = c.lits();
        if lits.len() == 2 {
            edges.push((lits[0].code() as u32, lits[1].code() as u32));
        } else {
            let node = add_node(ColorKey::Clause, NodeOrigin::Clause(ci), &mut keys);
            edges.extend(lits.iter().map(|l| (node, l.code() as u32)));
        }
    }
    for (pi, p) in f.pb_constraints().iter().enumerate() {
        let (mut distinct, relation, bound) = p.signature();
        distinct.dedup();
        // the coefficient multiset rank is filled in by `assign_colors`
        let node = add_node(ColorKey::Pb(relation, bound, 0), NodeOrigin::Pb(pi), &mut keys);
        if distinct.len() == 1 {
            edges.extend(p.terms().iter().map(|t| (node, t.lit.code() as u32)));
        } else {
            for &c in &distinct {
                let mid = add_node(ColorKey::PbCoef(c), NodeOrigin::PbCoef { pb: pi, coef: c }, &mut keys);
                edges.push((node, mid));
                edges.extend(p.terms().iter().filter(|t| t.coef == c).map(|t| (mid, t.lit.code() as u32)));
            }
        }
    }
    if let Some(obj) = f.objective() {
        let node = add_node(ColorKey::Objective, NodeOrigin::Objective, &mut keys);
        let mut distinct: Vec<i64> = obj.iter().map(|(c, _)| *c).collect();
        distinct.sort_unstable();
        distinct.dedup();
        if distinct.len() == 1 {
            edges.extend(obj.iter().map(|(_, l)| (node, l.code() as u32)));
        } else {
            for &c in &distinct {
                let mid = add_node(ColorKey::ObjectiveCoef(c), NodeOrigin::ObjectiveCoef(c), &mut keys);
                edges.push((node, mid));
                edges.extend(obj.iter().filter(|(k, _)| *k == c).map(|(_, l)| (mid, l.code() as u32)));
            }
        }
    }

    let colors = assign_colors(&keys, f);
    let mut adj = vec![Vec::new(); keys.len()];
    for (a, b) in edges {
        adj[a as usize].push(b);
        adj[b as usize].push(a);
    }
    for list in &mut adj {
        list.sort_unstable();
        list.dedup();
    }
    ColoredGraph { colors, adj, origin, num_literal_nodes: n_lit }
}

fn assign_colors(keys: &[ColorKey], f: &Formula) -> Vec<u32> {
    // rank PB coefficient multisets so the key stays `Copy`
    let mut sig_rank: BTreeMap<Vec<i64>, usize> = f.pb_constraints().iter().map(|p| (p.signature().0, 0)).collect();
    for (rank, r) in sig_rank.values_mut().enumerate() {
        *r = rank;
    }
    let mut pb_iter = f.pb_constraints().iter();
    let full: Vec<ColorKey> = keys
        .iter()
        .map(|&k| match k {
            ColorKey::Pb(rel, bound, _) => {
                let p = pb_iter.next().expect("one key per PB constraint");
                ColorKey::Pb(rel, bound, sig_rank[&p.signature().0])
            }
            other => other,
        })
        .collect();
    let mut distinct: Vec<ColorKey> = full.clone();
    distinct.sort_unstable();
    distinct.dedup();
    full.iter().map(|k| distinct.binary_search(k).unwrap() as u32).collect()
}

/// Whether the binary clauses contain a circular chain of implications
/// (a cycle in the implication digraph), in which case the shared edge form
/// of binary clauses and consistency edges may admit spurious symmetries.
pub fn has_implication_cycle(f: &Formula) -> bool {
    let mut g: DiGraph<(), ()> = DiGraph::with_capacity(2 * f.num_vars(), 0);
    for _ in 0..2 * f.num_vars() {
        g.add_node(());
    }
    for c in f.clauses().iter().filter(|c| c.len() == 2) {
        let (a, b) = (c.lits()[0], c.lits()[1]);
        g.add_edge(((!a).code() as u32).into(), (b.code() as u32).into(), ());
        g.add_edge(((!b).code() as u32).into(), (a.code() as u32).into(), ());
    }
    tarjan_scc(&g).iter().any(|scc| scc.len() > 1)
}

/// Syntactic fixpoint test: `perm` maps the clause multiset, the PB
/// constraint multiset and the objective onto themselves.
pub fn preserves_formula(f: &Formula, perm: &PermGenerator) -> bool {
    FormulaImage::of(f, |l| l) == FormulaImage::of(f, |l| perm.apply(l))
}

#[derive(PartialEq, Eq)]
struct FormulaImage {
    clauses: Vec<Vec<Lit>>,
    pbs: Vec<(Relation, i64, Vec<(i64, Lit)>)>,
    objective: Vec<(i64, Lit)>,
}

impl FormulaImage {
    fn of(f: &Formula, map: impl Fn(Lit) -> Lit) -> FormulaImage {
        let mut clauses: Vec<Vec<Lit>> = f
            .clauses()
            .iter()
            .map(|c| {
                let mut v: Vec<Lit> = c.lits().iter().map(|&l| map(l)).collect();
                v.sort_unstable();
                v
            })
            .collect();
        clauses.sort_unstable();
        let mut pbs: Vec<_> = f
            .pb_constraints()
            .iter()
            .map(|p| {
                let mut t: Vec<(i64, Lit)> = p.terms().iter().map(|t| (t.coef, map(t.lit))).collect();
                t.sort_unstable();
                (p.relation(), p.bound(), t)
            })
            .collect();
        pbs.sort_unstable();
        let mut objective: Vec<(i64, Lit)> = f.objective().unwrap_or(&[]).iter().map(|&(c, l)| (c, map(l))).collect();
        objective.sort_unstable();
        FormulaImage { clauses, pbs, objective }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupSummary {
    pub num_generators: usize,
    pub group_order: BigUint,
    pub detection_time: Duration,
}

#[derive(Clone, Debug)]
pub struct SymmetryReport {
    /// Verified literal generators.
    pub generators: Vec<PermGenerator>,
    pub summary: GroupSummary,
    /// The search hit its node budget; the generators are sound but may
    /// not generate the whole group.
    pub capped: bool,
    /// Generators dropped by the consistency or fixpoint check.
    pub rejected: usize,
    pub implication_cycle: bool,
}

/// Detects formula symmetries: build the colored graph, search its
/// automorphisms, project them onto literals and keep the projections that
/// are Boolean-consistent formula symmetries.
pub fn detect_symmetries(f: &Formula, budget: &SearchBudget) -> SymmetryReport {
    let start = Instant::now();
    let implication_cycle = has_implication_cycle(f);
    if implication_cycle {
        log::warn!("circular implication chain in binary clauses; spurious symmetries possible");
    }
    let cg = build_colored_graph(f);
    let outcome = find_generators(&cg, budget);
    let mut generators = Vec::new();
    let mut rejected = 0;
    for node_perm in &outcome.generators {
        match PermGenerator::from_node_perm(node_perm, cg.num_literal_nodes()) {
            Some(g) if g.is_identity() => {}
            Some(g) if preserves_formula(f, &g) => generators.push(g),
            _ => rejected += 1,
        }
    }
    if rejected > 0 {
        log::warn!("{rejected} automorphism generators are not formula symmetries and were dropped");
    }
    let order = group_order(&generators);
    SymmetryReport {
        summary: GroupSummary {
            num_generators: generators.len(),
            group_order: order,
            detection_time: start.elapsed(),
        },
        generators,
        capped: outcome.capped,
        rejected,
        implication_cycle,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::encoder::encode_opt;
    use crate::formula::{Clause, PbConstraint, PbTerm, Var};
    use crate::graph::families;

    fn x(i: u32) -> Lit {
        Var::new(i).pos()
    }

    #[test]
    fn single_variable() {
        let cg = build_colored_graph(&Formula::with_vars(1));
        assert_eq!(cg.num_nodes(), 2);
        assert_eq!(cg.num_edges(), 1);
        assert_eq!(cg.num_colors(), 1);
    }

    #[test]
    fn binary_and_ternary_clauses() {
        let mut f = Formula::with_vars(3);
        f.add_clause(Clause::new(vec![x(1), x(2)]).unwrap());
        let cg = build_colored_graph(&f);
        assert!(cg.has_edge(x(1).code(), x(2).code()));
        assert_eq!(cg.num_nodes(), 6);

        let mut f = Formula::with_vars(3);
        f.add_clause(Clause::new(vec![x(1), x(2), x(3)]).unwrap());
        let cg = build_colored_graph(&f);
        assert_eq!(cg.num_nodes(), 7);
        assert_eq!(cg.neighbors(6).len(), 3);
        assert_eq!(cg.num_edges(), 3 + 3);
        assert_eq!(cg.origin(6), NodeOrigin::Clause(0));
    }

    #[test]
    fn exactly_one_nodes_share_a_class() {
        let f = encode_opt(&families::complete(3), 3).unwrap();
        let cg = build_colored_graph(&f);
        let pb_nodes: Vec<usize> =
            (0..cg.num_nodes()).filter(|&v| matches!(cg.origin(v), NodeOrigin::Pb(_))).collect();
        assert_eq!(pb_nodes.len(), 3);
        assert!(pb_nodes.iter().all(|&v| cg.color(v) == cg.color(pb_nodes[0])));
        let obj = (0..cg.num_nodes()).find(|&v| cg.origin(v) == NodeOrigin::Objective).unwrap();
        assert!(pb_nodes.iter().all(|&v| cg.color(v) != cg.color(obj)));
        assert_ne!(cg.color(0), cg.color(pb_nodes[0]));
    }

    #[test]
    fn pb_classes_follow_signatures() {
        let mut f = Formula::with_vars(4);
        f.add_pb(PbConstraint::new(vec![PbTerm::new(2, x(1)), PbTerm::new(1, x(2))], Relation::Le, 2).unwrap());
        f.add_pb(PbConstraint::new(vec![PbTerm::new(1, x(3)), PbTerm::new(2, x(4))], Relation::Le, 2).unwrap());
        f.add_pb(PbConstraint::new(vec![PbTerm::new(1, x(3)), PbTerm::new(1, x(4))], Relation::Le, 2).unwrap());
        let cg = build_colored_graph(&f);
        let pb: Vec<u32> = (0..cg.num_nodes())
            .filter(|&v| matches!(cg.origin(v), NodeOrigin::Pb(_)))
            .map(|v| cg.color(v))
            .collect();
        assert_eq!(pb[0], pb[1]);
        assert_ne!(pb[0], pb[2]);
        // distinct coefficients get intermediate nodes
        let mids = (0..cg.num_nodes()).filter(|&v| matches!(cg.origin(v), NodeOrigin::PbCoef { .. })).count();
        assert_eq!(mids, 4);
    }

    #[test]
    fn implication_cycles() {
        let mut f = Formula::with_vars(3);
        // x1 -> x2 -> x3
        f.add_clause(Clause::new(vec![!x(1), x(2)]).unwrap());
        f.add_clause(Clause::new(vec![!x(2), x(3)]).unwrap());
        assert!(!has_implication_cycle(&f));
        f.add_clause(Clause::new(vec![!x(3), x(1)]).unwrap());
        assert!(has_implication_cycle(&f));
        assert!(!has_implication_cycle(&encode_opt(&families::petersen(), 4).unwrap()));
    }

    #[test]
    fn fixpoint_check() {
        let mut f = Formula::with_vars(2);
        f.add_clause(Clause::new(vec![x(1), x(2)]).unwrap());
        let swap = PermGenerator::from_var_swaps(2, &[(1, 2)]);
        assert!(preserves_formula(&f, &swap));
        f.add_clause(Clause::new(vec![x(1)]).unwrap());
        assert!(!preserves_formula(&f, &swap));
    }
}
