//! Instance-independent symmetry-breaking predicates for the coloring
//! encoding: null-color elimination (NU), cardinality ordering (CA),
//! lowest-index ordering (LI) and selective coloring (SC).

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::formula::{normalize, Clause, Cmp, ColoringLayout, Formula, Lit, Var, VarRole};
use crate::graph::Graph;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SbpError {
    #[error("formula is not a coloring encoding")]
    NotAnEncoding,
    #[error("formula has no color-usage variables (decision encoding?)")]
    MissingUsage,
    #[error("graph has {graph} vertices but the encoding has {encoding}")]
    GraphMismatch { graph: usize, encoding: usize },
    #[error("unknown predicate family `{0}` (expected nu, ca, li or sc)")]
    UnknownFamily(String),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SbpConfig {
    pub nu: bool,
    pub ca: bool,
    pub li: bool,
    pub sc: bool,
}

impl SbpConfig {
    pub const NONE: SbpConfig = SbpConfig { nu: false, ca: false, li: false, sc: false };
    pub const NU: SbpConfig = SbpConfig { nu: true, ..SbpConfig::NONE };
    pub const CA: SbpConfig = SbpConfig { ca: true, ..SbpConfig::NONE };
    pub const LI: SbpConfig = SbpConfig { li: true, ..SbpConfig::NONE };
    pub const SC: SbpConfig = SbpConfig { sc: true, ..SbpConfig::NONE };
    pub const NU_SC: SbpConfig = SbpConfig { nu: true, sc: true, ..SbpConfig::NONE };

    /// The six configurations of the experiment grid, in report order.
    pub fn table_configs() -> [SbpConfig; 6] {
        [SbpConfig::NONE, SbpConfig::NU, SbpConfig::CA, SbpConfig::LI, SbpConfig::SC, SbpConfig::NU_SC]
    }

    pub fn is_empty(&self) -> bool {
        *self == SbpConfig::NONE
    }
}

impl fmt::Display for SbpConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<&str> = [(self.nu, "nu"), (self.ca, "ca"), (self.li, "li"), (self.sc, "sc")]
            .into_iter()
            .filter_map(|(on, name)| on.then_some(name))
            .collect();
        if names.is_empty() {
            f.write_str("none")
        } else {
            f.write_str(&names.join(","))
        }
    }
}

impl FromStr for SbpConfig {
    type Err = SbpError;

    fn from_str(s: &str) -> Result<SbpConfig, SbpError> {
        let mut cfg = SbpConfig::NONE;
        for part in s.split([',', '+']).map(str::trim).filter(|p| !p.is_empty()) {
            match part.to_ascii_lowercase().as_str() {
                "nu" => cfg.nu = true,
                "ca" => cfg.ca = true,
                "li" => cfg.li = true,
                "sc" => cfg.sc = true,
                "none" => {}
                other => return Err(SbpError::UnknownFamily(other.to_string())),
            }
        }
        Ok(cfg)
    }
}

fn usage_layout(f: &Formula) -> Result<ColoringLayout, SbpError> {
    let layout = f.layout().ok_or(SbpError::NotAnEncoding)?;
    if !layout.has_usage {
        return Err(SbpError::MissingUsage);
    }
    Ok(layout)
}

/// `y_{k+1} -> y_k` for every adjacent pair of colors.
pub fn add_nu(mut f: Formula) -> Result<Formula, SbpError> {
    let layout = usage_layout(&f)?;
    for k in 0..layout.colors.saturating_sub(1) {
        let y = layout.usage_var(k).unwrap();
        let next = layout.usage_var(k + 1).unwrap();
        f.add_clause(Clause::new(vec![next.neg(), y.pos()]).unwrap());
    }
    Ok(f)
}

/// `sum_i x_{i,k} >= sum_i x_{i,k+1}`, stored as
/// `sum_i ~x_{i,k} + sum_i x_{i,k+1} <= n`.
pub fn add_ca(mut f: Formula) -> Result<Formula, SbpError> {
    let layout = usage_layout(&f)?;
    for k in 0..layout.colors.saturating_sub(1) {
        let mut terms: Vec<(i64, Lit)> = Vec::with_capacity(2 * layout.vertices);
        terms.extend((0..layout.vertices).map(|i| (1, layout.color_var(i, k).pos())));
        terms.extend((0..layout.vertices).map(|i| (-1, layout.color_var(i, k + 1).pos())));
        f.add_pb(normalize(&terms, Cmp::Ge, 0));
    }
    Ok(f)
}

/// Number of clauses [`add_li`] appends for `n` vertices and `k` colors.
pub fn li_clause_count(n: usize, k: usize) -> usize {
    let pairs = n * n.saturating_sub(1) / 2;
    // uniqueness + existence + ordering + (V -> x, V -> ~x_j, witness)
    k * pairs + k + k.saturating_sub(1) * n + k * (n + pairs + n)
}

/// Lowest-index predicates. `V_{i,k}` (numbered `base + (i-1)K + k`) holds
/// exactly when vertex `i` is the lowest-index vertex of color `k`, and the
/// lowest index of color `k-1` must exceed that of color `k`.
pub fn add_li(mut f: Formula) -> Result<Formula, SbpError> {
    let layout = usage_layout(&f)?;
    let (n, kk) = (layout.vertices, layout.colors);
    let mut v = vec![vec![Var::new(1); kk]; n];
    for (i, row) in v.iter_mut().enumerate() {
        for (k, slot) in row.iter_mut().enumerate() {
            *slot = f.new_var(VarRole::LowestIndex { vertex: i as u32 + 1, color: k as u32 + 1 });
        }
    }
    let x = |i: usize, k: usize| layout.color_var(i, k);

    for k in 0..kk {
        for i in 0..n {
            for j in 0..i {
                f.add_clause(Clause::new(vec![v[i][k].neg(), v[j][k].neg()]).unwrap());
            }
        }
    }
    for k in 0..kk {
        let mut lits = vec![layout.usage_var(k).unwrap().neg()];
        lits.extend((0..n).map(|i| v[i][k].pos()));
        f.add_clause(Clause::new(lits).unwrap());
    }
    for k in 1..kk {
        for i in 0..n {
            let mut lits = vec![v[i][k].neg()];
            lits.extend((i + 1..n).map(|j| v[j][k - 1].pos()));
            f.add_clause(Clause::new(lits).unwrap());
        }
    }
    for k in 0..kk {
        for i in 0..n {
            f.add_clause(Clause::new(vec![v[i][k].neg(), x(i, k).pos()]).unwrap());
            for j in 0..i {
                f.add_clause(Clause::new(vec![v[i][k].neg(), x(j, k).neg()]).unwrap());
            }
            let mut witness = vec![layout.usage_var(k).unwrap().neg(), x(i, k).neg()];
            witness.extend((0..i).map(|j| x(j, k).pos()));
            witness.push(v[i][k].pos());
            f.add_clause(Clause::new(witness).unwrap());
        }
    }
    Ok(f)
}

/// Max-degree vertex and its max-degree neighbor, 0-based, lowest index on
/// ties. `None` for the empty graph; the neighbor is `None` when the
/// max-degree vertex is isolated.
pub fn sc_vertices(g: &Graph) -> Option<(usize, Option<usize>)> {
    let n = g.num_vertices();
    let l = (0..n).min_by_key(|&v| std::cmp::Reverse(g.degree0(v)))?;
    let partner = g
        .neighbors(l)
        .iter()
        .map(|&u| u as usize)
        .min_by_key(|&u| (std::cmp::Reverse(g.degree0(u)), u));
    Some((l, partner))
}

/// Unit clauses `x_{l,1}` and `x_{l',2}`.
pub fn add_sc(mut f: Formula, g: &Graph) -> Result<Formula, SbpError> {
    let layout = f.layout().ok_or(SbpError::NotAnEncoding)?;
    if layout.vertices != g.num_vertices() {
        return Err(SbpError::GraphMismatch { graph: g.num_vertices(), encoding: layout.vertices });
    }
    if let Some((l, partner)) = sc_vertices(g) {
        f.add_clause(Clause::new(vec![layout.color_var(l, 0).pos()]).unwrap());
        if let Some(p) = partner.filter(|_| layout.colors >= 2) {
            f.add_clause(Clause::new(vec![layout.color_var(p, 1).pos()]).unwrap());
        }
    }
    Ok(f)
}

/// Appends the configured families in the order NU, CA, LI, SC and records
/// the configuration as a formula comment.
pub fn apply(f: Formula, g: &Graph, cfg: SbpConfig) -> Result<Formula, SbpError> {
    let mut f = f;
    if cfg.nu {
        f = add_nu(f)?;
    }
    if cfg.ca {
        f = add_ca(f)?;
    }
    if cfg.li {
        f = add_li(f)?;
    }
    if cfg.sc {
        f = add_sc(f, g)?;
    }
    f.push_comment(format!("sbp: {cfg}"));
    Ok(f)
}
