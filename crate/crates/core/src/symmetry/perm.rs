use std::fmt;

use thiserror::Error;

use crate::formula::{Lit, Var};

/// Boolean-consistent permutation of the literals of a formula:
/// `p(~l) = ~p(l)` for every literal.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PermGenerator {
    image: Vec<Lit>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParsePermError {
    #[error("bad literal `{0}`")]
    BadLiteral(String),
    #[error("literal {0} outside the formula")]
    OutOfRange(String),
    #[error("unbalanced parentheses")]
    Unbalanced,
    #[error("not a Boolean-consistent permutation")]
    Inconsistent,
}

impl PermGenerator {
    pub fn identity(num_vars: usize) -> PermGenerator {
        PermGenerator { image: (0..2 * num_vars).map(Lit::from_code).collect() }
    }

    /// Images indexed by literal code; `None` unless a Boolean-consistent
    /// permutation.
    pub fn from_images(image: Vec<Lit>) -> Option<PermGenerator> {
        let n = image.len();
        if n % 2 != 0 {
            return None;
        }
        let mut seen = vec![false; n];
        for (code, &l) in image.iter().enumerate() {
            if l.code() >= n || std::mem::replace(&mut seen[l.code()], true) {
                return None;
            }
            if image[code ^ 1] != !l {
                return None;
            }
        }
        Some(PermGenerator { image })
    }

    /// Restricts a colored-graph automorphism to the literal nodes.
    pub fn from_node_perm(perm: &[u32], num_literal_nodes: usize) -> Option<PermGenerator> {
        let lits = &perm[..num_literal_nodes];
        if lits.iter().any(|&c| c as usize >= num_literal_nodes) {
            return None;
        }
        PermGenerator::from_images(lits.iter().map(|&c| Lit::from_code(c as usize)).collect())
    }

    /// Product of variable transpositions, 1-based ids.
    pub fn from_var_swaps(num_vars: usize, swaps: &[(u32, u32)]) -> PermGenerator {
        let mut p = PermGenerator::identity(num_vars);
        for &(a, b) in swaps {
            let (a, b) = (Var::new(a), Var::new(b));
            p.image.swap(a.pos().code(), b.pos().code());
            p.image.swap(a.neg().code(), b.neg().code());
        }
        p
    }

    pub fn num_vars(&self) -> usize {
        self.image.len() / 2
    }

    pub fn apply(&self, l: Lit) -> Lit {
        self.image[l.code()]
    }

    pub fn images(&self) -> &[Lit] {
        &self.image
    }

    pub fn is_identity(&self) -> bool {
        self.image.iter().enumerate().all(|(c, l)| l.code() == c)
    }

    /// Moved variables in increasing index order.
    pub fn support(&self) -> Vec<Var> {
        (0..self.num_vars())
            .map(Var::from_index)
            .filter(|v| self.apply(v.pos()) != v.pos())
            .collect()
    }

    /// `self` first, then `other`.
    pub fn then(&self, other: &PermGenerator) -> PermGenerator {
        PermGenerator { image: self.image.iter().map(|&l| other.apply(l)).collect() }
    }

    pub fn inverse(&self) -> PermGenerator {
        let mut image = self.image.clone();
        for (c, &l) in self.image.iter().enumerate() {
            image[l.code()] = Lit::from_code(c);
        }
        PermGenerator { image }
    }

    /// Cycles starting at their lowest literal; of each pair of mirrored
    /// cycles only the one through the lower literal is listed.
    pub fn cycles(&self) -> Vec<Vec<Lit>> {
        let n = self.image.len();
        let mut done = vec![false; n];
        let mut out = Vec::new();
        for c in 0..n {
            if done[c] || self.image[c].code() == c {
                continue;
            }
            let mut cycle = Vec::new();
            let mut cur = c;
            loop {
                cycle.push(Lit::from_code(cur));
                cur = self.image[cur].code();
                if cur == c {
                    break;
                }
            }
            for l in &cycle {
                done[l.code()] = true;
                done[(!*l).code()] = true;
            }
            out.push(cycle);
        }
        out
    }

    /// Parses cycle notation such as `(x3 x7)(x4 ~x8)`; each listed cycle
    /// implies its mirror on the complementary literals.
    pub fn parse(text: &str, num_vars: usize) -> Result<PermGenerator, ParsePermError> {
        let mut p = PermGenerator::identity(num_vars);
        let mut rest = text.trim();
        while !rest.is_empty() {
            let body = rest.strip_prefix('(').ok_or(ParsePermError::Unbalanced)?;
            let close = body.find(')').ok_or(ParsePermError::Unbalanced)?;
            let lits = body[..close]
                .split_whitespace()
                .map(|tok| parse_lit(tok, num_vars))
                .collect::<Result<Vec<Lit>, _>>()?;
            for (i, &l) in lits.iter().enumerate() {
                let next = lits[(i + 1) % lits.len()];
                p.image[l.code()] = next;
                p.image[(!l).code()] = !next;
            }
            rest = body[close + 1..].trim_start();
        }
        PermGenerator::from_images(p.image).ok_or(ParsePermError::Inconsistent)
    }
}

fn parse_lit(tok: &str, num_vars: usize) -> Result<Lit, ParsePermError> {
    let (neg, body) = match tok.strip_prefix('~') {
        Some(b) => (true, b),
        None => (false, tok),
    };
    let id: u32 = body
        .strip_prefix('x')
        .and_then(|d| d.parse().ok())
        .filter(|&d| d >= 1)
        .ok_or_else(|| ParsePermError::BadLiteral(tok.to_string()))?;
    if id as usize > num_vars {
        return Err(ParsePermError::OutOfRange(tok.to_string()));
    }
    let v = Var::new(id);
    Ok(if neg { v.neg() } else { v.pos() })
}

fn write_lit(f: &mut fmt::Formatter<'_>, l: Lit) -> fmt::Result {
    let sign = if l.is_positive() { "" } else { "~" };
    write!(f, "{sign}x{}", l.var().id())
}

impl fmt::Display for PermGenerator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return f.write_str("()");
        }
        for cycle in cycles {
            f.write_str("(")?;
            for (i, &l) in cycle.iter().enumerate() {
                if i > 0 {
                    f.write_str(" ")?;
                }
                write_lit(f, l)?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}
