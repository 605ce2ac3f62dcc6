//! Undirected simple graphs and the DIMACS `.col` format.
//!
//! Vertices are 1-based in files and in every user-facing message, 0-based
//! inside [`Graph`].

use std::fmt::Write as _;
use std::io::BufRead;

use thiserror::Error;

/// Largest graph the brute-force chromatic oracle accepts by default.
pub const DEFAULT_ORACLE_CAP: usize = 10;

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("line {line}: edge line before the `p edge` header")]
    EdgeBeforeHeader { line: usize },
    #[error("line {line}: duplicate `p` line")]
    DuplicateHeader { line: usize },
    #[error("missing `p edge <n> <m>` header")]
    MissingHeader,
    #[error("line {line}: malformed header `{text}`")]
    BadHeader { line: usize, text: String },
    #[error("line {line}: invalid token `{token}`")]
    InvalidToken { line: usize, token: String },
    #[error("line {line}: unrecognised line `{text}`")]
    UnknownLine { line: usize, text: String },
    #[error("vertex {vertex} out of range 1..={n}")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("line {line}: self-loop on vertex {vertex}")]
    SelfLoop { line: usize, vertex: usize },
    #[error("graph has {n} vertices, oracle cap is {cap}")]
    TooLargeForOracle { n: usize, cap: usize },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// An undirected simple graph with sorted adjacency lists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    // canonical order: (u, v) with u < v, lexicographically sorted
    edges: Vec<(u32, u32)>,
    adj: Vec<Vec<u32>>,
}

impl Graph {
    /// Builds a graph from 0-based edge pairs. Duplicates (in either
    /// orientation) are merged; self-loops and out-of-range endpoints are
    /// rejected.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Graph, GraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut canon = Vec::new();
        for (u, v) in edges {
            for w in [u, v] {
                if w >= n {
                    return Err(GraphError::VertexOutOfRange { vertex: w + 1, n });
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop { line: 0, vertex: u + 1 });
            }
            canon.push((u.min(v) as u32, u.max(v) as u32));
        }
        canon.sort_unstable();
        canon.dedup();
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in &canon {
            adj[u as usize].push(v);
            adj[v as usize].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Ok(Graph { n, edges: canon, adj })
    }

    pub fn num_vertices(&self) -> usize {
        self.n
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    /// Edges as 0-based `(u, v)` pairs with `u < v`, sorted.
    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    /// Sorted 0-based neighbours of the 0-based vertex `v`.
    pub fn neighbors(&self, v: usize) -> &[u32] {
        &self.adj[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&(v as u32)).is_ok()
    }

    /// Degree of the 1-based vertex `v`.
    pub fn degree(&self, v: usize) -> Result<usize, GraphError> {
        if v == 0 || v > self.n {
            return Err(GraphError::VertexOutOfRange { vertex: v, n: self.n });
        }
        Ok(self.adj[v - 1].len())
    }

    /// Degree of the 0-based vertex `v`.
    pub(crate) fn degree0(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    /// Serializes to DIMACS `.col` with canonical edge order.
    pub fn to_dimacs_col(&self) -> String {
        let mut out = String::new();
        writeln!(out, "p edge {} {}", self.n, self.edges.len()).unwrap();
        for &(u, v) in &self.edges {
            writeln!(out, "e {} {}", u + 1, v + 1).unwrap();
        }
        out
    }

    /// Exact chromatic number by exhaustive search. Colors are introduced in
    /// canonical order (a vertex may only open color `c + 1` once `c` is in
    /// use), which removes color-permutation duplicates from the search.
    pub fn brute_force_chromatic(&self, max_vertices: usize) -> Result<usize, GraphError> {
        if self.n > max_vertices {
            return Err(GraphError::TooLargeForOracle { n: self.n, cap: max_vertices });
        }
        if self.n == 0 {
            return Ok(0);
        }
        let mut colors = vec![usize::MAX; self.n];
        for k in 1..=self.n {
            if self.color_with(k, 0, 0, &mut colors) {
                return Ok(k);
            }
        }
        unreachable!("n colors always suffice")
    }

    fn color_with(&self, k: usize, v: usize, used: usize, colors: &mut [usize]) -> bool {
        if v == self.n {
            return true;
        }
        let limit = (used + 1).min(k);
        for c in 0..limit {
            if self.adj[v].iter().any(|&u| (u as usize) < v && colors[u as usize] == c) {
                continue;
            }
            colors[v] = c;
            if self.color_with(k, v + 1, used.max(c + 1), colors) {
                return true;
            }
        }
        colors[v] = usize::MAX;
        false
    }
}

/// Parses DIMACS `.col` text.
///
/// A header edge count that disagrees with the de-duplicated `e` lines is
/// accepted with a warning; the `e` lines win.
pub fn parse_dimacs_col(text: &str) -> Result<Graph, GraphError> {
    read_dimacs_col(text.as_bytes())
}

pub fn read_dimacs_col<R: BufRead>(reader: R) -> Result<Graph, GraphError> {
    let mut header: Option<(usize, usize)> = None;
    let mut edges = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let lineno = idx + 1;
        let mut tokens = line.split_whitespace();
        let Some(tag) = tokens.next() else { continue };
        match tag {
            "c" => {}
            "p" => {
                if header.is_some() {
                    return Err(GraphError::DuplicateHeader { line: lineno });
                }
                let rest: Vec<&str> = tokens.collect();
                if rest.len() != 3 || !matches!(rest[0], "edge" | "edges" | "col") {
                    return Err(GraphError::BadHeader { line: lineno, text: line.clone() });
                }
                let n = parse_count(rest[1], lineno)?;
                let m = parse_count(rest[2], lineno)?;
                header = Some((n, m));
            }
            "e" => {
                let Some((n, _)) = header else {
                    return Err(GraphError::EdgeBeforeHeader { line: lineno });
                };
                let u = parse_count(tokens.next().unwrap_or(""), lineno)?;
                let v = parse_count(tokens.next().unwrap_or(""), lineno)?;
                if let Some(extra) = tokens.next() {
                    return Err(GraphError::InvalidToken { line: lineno, token: extra.to_string() });
                }
                for w in [u, v] {
                    if w == 0 || w > n {
                        return Err(GraphError::VertexOutOfRange { vertex: w, n });
                    }
                }
                if u == v {
                    return Err(GraphError::SelfLoop { line: lineno, vertex: u });
                }
                edges.push((u - 1, v - 1));
            }
            _ => return Err(GraphError::UnknownLine { line: lineno, text: line.clone() }),
        }
    }
    let (n, declared) = header.ok_or(GraphError::MissingHeader)?;
    let graph = Graph::from_edges(n, edges)?;
    if graph.num_edges() != declared {
        log::warn!(
            "header declares {declared} edges, file lists {} distinct edges; using the edge lines",
            graph.num_edges()
        );
    }
    Ok(graph)
}

fn parse_count(token: &str, line: usize) -> Result<usize, GraphError> {
    token
        .parse::<usize>()
        .map_err(|_| GraphError::InvalidToken { line, token: token.to_string() })
}

/// Small named graph families used by tests, examples and the harness.
pub mod families {
    use super::Graph;
    use rand::Rng;

    pub fn empty(n: usize) -> Graph {
        Graph::from_edges(n, []).unwrap()
    }

    pub fn complete(n: usize) -> Graph {
        let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
        Graph::from_edges(n, edges).unwrap()
    }

    pub fn cycle(n: usize) -> Graph {
        Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
    }

    pub fn path(n: usize) -> Graph {
        Graph::from_edges(n, (1..n).map(|i| (i - 1, i))).unwrap()
    }

    /// Star with center 0 and `leaves` leaves.
    pub fn star(leaves: usize) -> Graph {
        Graph::from_edges(leaves + 1, (1..=leaves).map(|i| (0, i))).unwrap()
    }

    pub fn complete_bipartite(a: usize, b: usize) -> Graph {
        let edges = (0..a).flat_map(|u| (0..b).map(move |v| (u, a + v)));
        Graph::from_edges(a + b, edges).unwrap()
    }

    pub fn petersen() -> Graph {
        let mut edges = Vec::new();
        for i in 0..5 {
            edges.push((i, (i + 1) % 5));
            edges.push((i, i + 5));
            edges.push((5 + i, 5 + (i + 2) % 5));
        }
        Graph::from_edges(10, edges).unwrap()
    }

    /// Mycielskian of `g`: copies `u_i` adjacent to the neighbours of `v_i`,
    /// plus a hub adjacent to every copy.
    pub fn mycielskian(g: &Graph) -> Graph {
        let n = g.num_vertices();
        let mut edges: Vec<(usize, usize)> =
            g.edges().iter().map(|&(u, v)| (u as usize, v as usize)).collect();
        for v in 0..n {
            for &u in g.neighbors(v) {
                edges.push((n + v, u as usize));
            }
            edges.push((n + v, 2 * n));
        }
        Graph::from_edges(2 * n + 1, edges).unwrap()
    }

    /// `myciel{k}`: k = 2 is the 5-cycle, k = 3 the Grötzsch graph.
    /// Chromatic number is k + 1.
    pub fn myciel(k: usize) -> Graph {
        assert!(k >= 2);
        // base C5 labelled 1-2-3-5-4 as in the benchmark files
        let mut g = Graph::from_edges(5, [(0, 1), (1, 2), (2, 4), (4, 3), (3, 0)]).unwrap();
        if k == 2 {
            return g;
        }
        for _ in 3..=k {
            g = mycielskian(&g);
        }
        g
    }

    /// Queen graph on a `rows` x `cols` board, squares numbered row-major.
    pub fn queen(rows: usize, cols: usize) -> Graph {
        let mut edges = Vec::new();
        for a in 0..rows * cols {
            for b in a + 1..rows * cols {
                let (r1, c1) = ((a / cols) as isize, (a % cols) as isize);
                let (r2, c2) = ((b / cols) as isize, (b % cols) as isize);
                if r1 == r2 || c1 == c2 || (r1 - r2).abs() == (c1 - c2).abs() {
                    edges.push((a, b));
                }
            }
        }
        Graph::from_edges(rows * cols, edges).unwrap()
    }

    /// Erdős–Rényi G(n, p).
    pub fn gnp<R: Rng>(n: usize, p: f64, rng: &mut R) -> Graph {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                if rng.gen_bool(p) {
                    edges.push((u, v));
                }
            }
        }
        Graph::from_edges(n, edges).unwrap()
    }
}
