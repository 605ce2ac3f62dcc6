//! Automorphism generators by individualization and refinement.
//!
//! A first path individualizes the first node of the target cell down to a
//! discrete partition. Walking back up, each other node of a level's target
//! cell that is not yet in the orbit of the path node is tried as a
//! replacement; the subtree below it is searched for a leaf that maps the
//! first leaf by an automorphism.

use std::time::{Duration, Instant};

use super::refine::{Partition, Scratch};
use super::ColoredGraph;

#[derive(Clone, Debug)]
pub struct SearchBudget {
    /// Maximum number of search-tree nodes (refinements).
    pub max_nodes: u64,
    pub max_time: Option<Duration>,
}

pub const DEFAULT_MAX_NODES: u64 = 200_000;

impl Default for SearchBudget {
    fn default() -> SearchBudget {
        SearchBudget { max_nodes: DEFAULT_MAX_NODES, max_time: None }
    }
}

#[derive(Clone, Debug)]
pub struct SearchOutcome {
    /// Node permutations, as images.
    pub generators: Vec<Vec<u32>>,
    /// Orbit size of each first-path node under the generators found at
    /// its level or deeper; the product is the group order when not capped.
    pub orbit_sizes: Vec<usize>,
    pub nodes: u64,
    pub capped: bool,
}

struct Level {
    part: Partition,
    target: usize,
}

struct Search<'a> {
    g: &'a ColoredGraph,
    scratch: Scratch,
    nodes: u64,
    max_nodes: u64,
    deadline: Option<Instant>,
    capped: bool,
    /// traces and target cells along the first path
    path: Vec<(u64, Option<usize>)>,
    first_leaf: Vec<u32>,
}

pub fn find_generators(g: &ColoredGraph, budget: &SearchBudget) -> SearchOutcome {
    let n = g.num_nodes();
    let mut s = Search {
        g,
        scratch: Scratch::default(),
        nodes: 1,
        max_nodes: budget.max_nodes,
        deadline: budget.max_time.map(|t| Instant::now() + t),
        capped: false,
        path: Vec::new(),
        first_leaf: Vec::new(),
    };
    let mut root = Partition::from_colors(g.colors());
    let all: Vec<usize> = root.cell_starts().collect();
    let trace = root.refine(g, &all, &mut s.scratch);

    // first path
    let mut levels: Vec<Level> = Vec::new();
    let mut part = root;
    let mut trace = trace;
    while let Some(t) = part.target_cell() {
        s.path.push((trace, Some(t)));
        let mut child = part.clone();
        let v = part.cell(t)[0] as usize;
        let child_trace = child.individualize(g, v, &mut s.scratch);
        s.nodes += 1;
        levels.push(Level { part, target: t });
        part = child;
        trace = child_trace;
    }
    s.path.push((trace, None));
    s.first_leaf = part.lab().to_vec();

    let mut orbits = UnionFind::new(n);
    let mut generators = Vec::new();
    let mut orbit_sizes = vec![0; levels.len()];
    for d in (0..levels.len()).rev() {
        let level = &levels[d];
        let cell: Vec<u32> = level.part.cell(level.target).to_vec();
        let base = cell[0] as usize;
        for &w in &cell[1..] {
            if orbits.find(w as usize) == orbits.find(base) {
                continue;
            }
            if s.out_of_budget() {
                break;
            }
            let mut child = level.part.clone();
            let t = child.individualize(g, w as usize, &mut s.scratch);
            s.nodes += 1;
            if let Some(perm) = s.explore(child, t, d + 1) {
                for (v, &img) in perm.iter().enumerate() {
                    orbits.union(v, img as usize);
                }
                generators.push(perm);
            }
        }
        orbit_sizes[d] = orbits.size(base);
    }
    SearchOutcome { generators, orbit_sizes, nodes: s.nodes, capped: s.capped }
}

impl Search<'_> {
    fn out_of_budget(&mut self) -> bool {
        if self.nodes >= self.max_nodes || self.deadline.is_some_and(|d| Instant::now() >= d) {
            self.capped = true;
        }
        self.capped
    }

    fn explore(&mut self, part: Partition, trace: u64, depth: usize) -> Option<Vec<u32>> {
        let (want_trace, want_target) = *self.path.get(depth)?;
        if trace != want_trace {
            return None;
        }
        let target = part.target_cell();
        if target != want_target {
            return None;
        }
        let Some(t) = target else {
            let mut perm = vec![0u32; part.len()];
            for (&a, &b) in self.first_leaf.iter().zip(part.lab()) {
                perm[a as usize] = b;
            }
            return self.g.is_automorphism(&perm).then_some(perm);
        };
        let cell: Vec<u32> = part.cell(t).to_vec();
        for &v in &cell {
            if self.out_of_budget() {
                return None;
            }
            let mut child = part.clone();
            let ct = child.individualize(self.g, v as usize, &mut self.scratch);
            self.nodes += 1;
            if let Some(p) = self.explore(child, ct, depth + 1) {
                return Some(p);
            }
            if self.capped {
                return None;
            }
        }
        None
    }
}

struct UnionFind {
    parent: Vec<u32>,
    size: Vec<u32>,
}

impl UnionFind {
    fn new(n: usize) -> UnionFind {
        UnionFind { parent: (0..n as u32).collect(), size: vec![1; n] }
    }

    fn find(&mut self, mut v: usize) -> usize {
        while self.parent[v] as usize != v {
            let p = self.parent[v] as usize;
            self.parent[v] = self.parent[p];
            v = p;
        }
        v
    }

    fn union(&mut self, a: usize, b: usize) {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return;
        }
        if self.size[a] < self.size[b] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a as u32;
        self.size[a] += self.size[b];
    }

    fn size(&mut self, v: usize) -> usize {
        let r = self.find(v);
        self.size[r] as usize
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{Clause, Formula, Var};
    use crate::symmetry::build_colored_graph;

    fn order(out: &SearchOutcome) -> u64 {
        out.orbit_sizes.iter().map(|&s| s as u64).product()
    }

    #[test]
    fn single_variable_has_phase_flip() {
        let g = build_colored_graph(&Formula::with_vars(1));
        let out = find_generators(&g, &SearchBudget::default());
        assert_eq!(out.generators, vec![vec![1, 0]]);
        assert_eq!(order(&out), 2);
    }

    #[test]
    fn free_variables() {
        // hyperoctahedral group of 3 free variables: 2^3 * 3!
        let g = build_colored_graph(&Formula::with_vars(3));
        let out = find_generators(&g, &SearchBudget::default());
        assert!(!out.capped);
        assert_eq!(order(&out), 48);
        assert!(out.generators.iter().all(|p| g.is_automorphism(p)));
    }

    #[test]
    fn unit_clause_kills_symmetry() {
        let mut f = Formula::with_vars(1);
        f.add_clause(Clause::new(vec![Var::new(1).pos()]).unwrap());
        let g = build_colored_graph(&f);
        let out = find_generators(&g, &SearchBudget::default());
        assert_eq!(order(&out), 1);
        assert!(out.generators.is_empty());
    }

    #[test]
    fn tiny_budget_caps() {
        let g = build_colored_graph(&Formula::with_vars(6));
        let out = find_generators(&g, &SearchBudget { max_nodes: 3, max_time: None });
        assert!(out.capped);
    }
}
