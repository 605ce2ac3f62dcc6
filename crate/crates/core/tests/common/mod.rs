#![allow(dead_code)]

use std::path::PathBuf;

use colorsym::formula::{ColoringLayout, Lit};
use colorsym::graph::{parse_dimacs_col, Graph};
use colorsym::symmetry::PermGenerator;
use itertools::Itertools;

pub fn bench(name: &str) -> Graph {
    let path: PathBuf = [env!("CARGO_MANIFEST_DIR"), "data", "dimacs", &format!("{name}.col")].iter().collect();
    parse_dimacs_col(&std::fs::read_to_string(path).unwrap()).unwrap()
}

/// V1-V2-V3 triangle, V4 adjacent to V3 only.
pub fn figure1() -> Graph {
    Graph::from_edges(4, [(0, 1), (0, 2), (1, 2), (2, 3)]).unwrap()
}

pub fn proper(g: &Graph, colors: &[Option<usize>]) -> bool {
    colors.iter().all(Option::is_some) && g.edges().iter().all(|&(a, b)| colors[a as usize] != colors[b as usize])
}

/// Literal permutation induced by a vertex permutation `pi` and a color
/// permutation `sigma` on the base variables; extra variables stay fixed.
pub fn induced_perm(layout: &ColoringLayout, num_vars: usize, pi: &[usize], sigma: &[usize]) -> PermGenerator {
    let mut image: Vec<Lit> = (0..2 * num_vars).map(Lit::from_code).collect();
    let mut set = |from: colorsym::Var, to: colorsym::Var| {
        image[from.pos().code()] = to.pos();
        image[from.neg().code()] = to.neg();
    };
    for i in 0..layout.vertices {
        for j in 0..layout.colors {
            set(layout.color_var(i, j), layout.color_var(pi[i], sigma[j]));
        }
    }
    if layout.has_usage {
        for j in 0..layout.colors {
            set(layout.usage_var(j).unwrap(), layout.usage_var(sigma[j]).unwrap());
        }
    }
    PermGenerator::from_images(image).unwrap()
}

pub fn identity(n: usize) -> Vec<usize> {
    (0..n).collect()
}

pub fn graph_automorphisms(g: &Graph) -> Vec<Vec<usize>> {
    let n = g.num_vertices();
    (0..n)
        .permutations(n)
        .filter(|p| g.edges().iter().all(|&(a, b)| g.has_edge(p[a as usize], p[b as usize])))
        .collect()
}

pub fn max_clique(g: &Graph) -> usize {
    let n = g.num_vertices();
    (0u32..1 << n)
        .filter(|&s| {
            (0..n).all(|a| (a + 1..n).all(|b| s >> a & 1 == 0 || s >> b & 1 == 0 || g.has_edge(a, b)))
        })
        .map(|s| s.count_ones() as usize)
        .max()
        .unwrap_or(0)
}
