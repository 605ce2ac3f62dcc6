//! 0-1 ILP instances: a variable table, CNF clauses, normalized
//! pseudo-Boolean constraints and an optional linear objective to minimize.

use std::fmt;
use std::ops::Not;

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FormulaError {
    #[error("empty clause")]
    EmptyClause,
    #[error("clause repeats literal {0}")]
    DuplicateLiteral(Lit),
    #[error("clause contains {0} and its complement")]
    Tautology(Var),
    #[error("coefficient {0} is not positive")]
    NonPositiveCoefficient(i64),
    #[error("variable {0} appears twice in one constraint")]
    RepeatedVariable(Var),
    #[error("variable {var} out of range (formula has {num_vars} variables)")]
    UnknownVariable { var: Var, num_vars: u32 },
}

/// A 1-based Boolean variable id.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var(u32);

impl Var {
    pub fn new(id: u32) -> Var {
        assert!(id > 0, "variable ids are 1-based");
        Var(id)
    }

    pub fn id(self) -> u32 {
        self.0
    }

    /// 0-based index.
    pub fn index(self) -> usize {
        self.0 as usize - 1
    }

    pub fn from_index(index: usize) -> Var {
        Var(index as u32 + 1)
    }

    pub fn pos(self) -> Lit {
        Lit::new(self, true)
    }

    pub fn neg(self) -> Lit {
        Lit::new(self, false)
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x{}", self.0)
    }
}

/// A literal, packed as `2 * index + negated`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Lit(u32);

impl Lit {
    pub fn new(var: Var, positive: bool) -> Lit {
        Lit(((var.0 - 1) << 1) | (!positive as u32))
    }

    pub fn var(self) -> Var {
        Var((self.0 >> 1) + 1)
    }

    pub fn is_positive(self) -> bool {
        self.0 & 1 == 0
    }

    /// Dense code in `0..2 * num_vars`.
    pub fn code(self) -> usize {
        self.0 as usize
    }

    pub fn from_code(code: usize) -> Lit {
        Lit(code as u32)
    }

    /// DIMACS signed integer form.
    pub fn to_dimacs(self) -> i64 {
        let id = self.var().id() as i64;
        if self.is_positive() {
            id
        } else {
            -id
        }
    }

    pub fn from_dimacs(value: i64) -> Lit {
        assert!(value != 0);
        Lit::new(Var::new(value.unsigned_abs() as u32), value > 0)
    }

    /// Truth value of the literal under a total assignment indexed by
    /// 0-based variable index.
    pub fn eval(self, model: &[bool]) -> bool {
        model[self.var().index()] == self.is_positive()
    }
}

impl Not for Lit {
    type Output = Lit;

    fn not(self) -> Lit {
        Lit(self.0 ^ 1)
    }
}

impl fmt::Display for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_positive() {
            write!(f, "x{}", self.var().id())
        } else {
            write!(f, "~x{}", self.var().id())
        }
    }
}

/// A disjunction of literals; non-empty, duplicate-free, not a tautology.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Clause(Vec<Lit>);

impl Clause {
    pub fn new(lits: Vec<Lit>) -> Result<Clause, FormulaError> {
        if lits.is_empty() {
            return Err(FormulaError::EmptyClause);
        }
        let mut sorted = lits.clone();
        sorted.sort_unstable();
        for w in sorted.windows(2) {
            if w[0] == w[1] {
                return Err(FormulaError::DuplicateLiteral(w[0]));
            }
            if w[0].var() == w[1].var() {
                return Err(FormulaError::Tautology(w[0].var()));
            }
        }
        Ok(Clause(lits))
    }

    /// Drops repeated literals, keeping first occurrences in order. Returns
    /// `None` for a tautology.
    pub fn simplified(lits: impl IntoIterator<Item = Lit>) -> Option<Clause> {
        let mut out: Vec<Lit> = Vec::new();
        for lit in lits {
            if out.contains(&!lit) {
                return None;
            }
            if !out.contains(&lit) {
                out.push(lit);
            }
        }
        debug_assert!(!out.is_empty());
        Some(Clause(out))
    }

    pub fn lits(&self) -> &[Lit] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_satisfied(&self, model: &[bool]) -> bool {
        self.0.iter().any(|l| l.eval(model))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Relation {
    Le,
    Eq,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PbTerm {
    pub coef: i64,
    pub lit: Lit,
}

impl PbTerm {
    pub fn new(coef: i64, lit: Lit) -> PbTerm {
        PbTerm { coef, lit }
    }
}

/// `sum coef * lit (<= | =) bound` with positive coefficients and each
/// variable at most once.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PbConstraint {
    terms: Vec<PbTerm>,
    relation: Relation,
    bound: i64,
}

impl PbConstraint {
    pub fn new(terms: Vec<PbTerm>, relation: Relation, bound: i64) -> Result<PbConstraint, FormulaError> {
        let mut vars: Vec<Var> = Vec::with_capacity(terms.len());
        for t in &terms {
            if t.coef <= 0 {
                return Err(FormulaError::NonPositiveCoefficient(t.coef));
            }
            vars.push(t.lit.var());
        }
        vars.sort_unstable();
        if let Some(w) = vars.windows(2).find(|w| w[0] == w[1]) {
            return Err(FormulaError::RepeatedVariable(w[0]));
        }
        Ok(PbConstraint { terms, relation, bound })
    }

    /// `sum lits = 1`.
    pub fn exactly_one(lits: impl IntoIterator<Item = Lit>) -> PbConstraint {
        let terms = lits.into_iter().map(|l| PbTerm::new(1, l)).collect();
        PbConstraint::new(terms, Relation::Eq, 1).expect("distinct variables")
    }

    pub fn terms(&self) -> &[PbTerm] {
        &self.terms
    }

    pub fn relation(&self) -> Relation {
        self.relation
    }

    pub fn bound(&self) -> i64 {
        self.bound
    }

    pub fn lhs(&self, model: &[bool]) -> i64 {
        self.terms.iter().filter(|t| t.lit.eval(model)).map(|t| t.coef).sum()
    }

    pub fn is_satisfied(&self, model: &[bool]) -> bool {
        let lhs = self.lhs(model);
        match self.relation {
            Relation::Le => lhs <= self.bound,
            Relation::Eq => lhs == self.bound,
        }
    }

    /// Shape key: sorted coefficient multiset, relation and bound. Two
    /// constraints can only be exchanged by a symmetry if their signatures
    /// agree.
    pub fn signature(&self) -> (Vec<i64>, Relation, i64) {
        let mut coefs: Vec<i64> = self.terms.iter().map(|t| t.coef).collect();
        coefs.sort_unstable();
        (coefs, self.relation, self.bound)
    }
}

/// Comparison of a not-yet-normalized linear constraint.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Cmp {
    Le,
    Ge,
    Eq,
}

/// Rewrites `sum coef * lit (cmp) rhs` with arbitrary integer coefficients
/// into normalized form: `>=` is negated into `<=`, negative coefficients are
/// moved onto the complementary literal using `~x = 1 - x`, and repeated
/// variables are merged. Variables keep their first-occurrence order.
pub fn normalize(terms: &[(i64, Lit)], cmp: Cmp, rhs: i64) -> PbConstraint {
    let sign = if cmp == Cmp::Ge { -1 } else { 1 };
    let mut rhs = sign * rhs;
    // coefficient on the positive literal, per variable
    let mut order: Vec<Var> = Vec::new();
    let mut coef_of: std::collections::HashMap<Var, i64> = Default::default();
    for &(c, lit) in terms {
        let c = sign * c;
        let var = lit.var();
        let entry = coef_of.entry(var).or_insert_with(|| {
            order.push(var);
            0
        });
        if lit.is_positive() {
            *entry += c;
        } else {
            // c * ~x = c - c * x
            *entry -= c;
            rhs -= c;
        }
    }
    let mut out = Vec::with_capacity(order.len());
    for var in order {
        let c = coef_of[&var];
        if c > 0 {
            out.push(PbTerm::new(c, var.pos()));
        } else if c < 0 {
            // c * x = c - c * ~x  with -c > 0
            out.push(PbTerm::new(-c, var.neg()));
            rhs -= c;
        }
    }
    let relation = if cmp == Cmp::Eq { Relation::Eq } else { Relation::Le };
    PbConstraint { terms: out, relation, bound: rhs }
}

/// What a variable stands for; all indices are 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum VarRole {
    /// vertex `vertex` receives color `color`
    Color { vertex: u32, color: u32 },
    /// color `color` is used by some vertex
    Usage { color: u32 },
    /// `vertex` is the lowest-index vertex with color `color`
    LowestIndex { vertex: u32, color: u32 },
    /// lex-leader prefix-equality variable
    LexPrefix,
    Auxiliary,
}

/// Dimensions of a coloring encoding, kept so later passes can find the
/// `x` and `y` blocks without re-deriving them.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ColoringLayout {
    pub vertices: usize,
    pub colors: usize,
    pub has_usage: bool,
}

impl ColoringLayout {
    /// Variable `x_{vertex,color}`, both 0-based.
    pub fn color_var(&self, vertex: usize, color: usize) -> Var {
        Var::new((vertex * self.colors + color + 1) as u32)
    }

    /// Variable `y_color`, 0-based color.
    pub fn usage_var(&self, color: usize) -> Option<Var> {
        self.has_usage
            .then(|| Var::new((self.vertices * self.colors + color + 1) as u32))
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Formula {
    roles: Vec<VarRole>,
    clauses: Vec<Clause>,
    pb: Vec<PbConstraint>,
    objective: Option<Vec<PbObjectiveTerm>>,
    layout: Option<ColoringLayout>,
    comments: Vec<String>,
}

/// Objective term; coefficients may have either sign.
pub type PbObjectiveTerm = (i64, Lit);

impl Formula {
    pub fn new() -> Formula {
        Formula::default()
    }

    /// A formula with `num_vars` auxiliary variables.
    pub fn with_vars(num_vars: usize) -> Formula {
        Formula { roles: vec![VarRole::Auxiliary; num_vars], ..Formula::default() }
    }

    pub fn new_var(&mut self, role: VarRole) -> Var {
        self.roles.push(role);
        Var::new(self.roles.len() as u32)
    }

    pub fn num_vars(&self) -> usize {
        self.roles.len()
    }

    pub fn role(&self, var: Var) -> VarRole {
        self.roles[var.index()]
    }

    pub fn roles(&self) -> &[VarRole] {
        &self.roles
    }

    pub fn add_clause(&mut self, clause: Clause) {
        self.clauses.push(clause);
    }

    pub fn add_pb(&mut self, constraint: PbConstraint) {
        self.pb.push(constraint);
    }

    pub fn set_objective(&mut self, terms: Vec<PbObjectiveTerm>) {
        self.objective = if terms.is_empty() { None } else { Some(terms) };
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    pub fn pb_constraints(&self) -> &[PbConstraint] {
        &self.pb
    }

    pub fn objective(&self) -> Option<&[PbObjectiveTerm]> {
        self.objective.as_deref()
    }

    pub fn layout(&self) -> Option<ColoringLayout> {
        self.layout
    }

    pub(crate) fn set_layout(&mut self, layout: ColoringLayout) {
        self.layout = Some(layout);
    }

    pub fn comments(&self) -> &[String] {
        &self.comments
    }

    pub fn push_comment(&mut self, text: impl Into<String>) {
        self.comments.push(text.into());
    }

    /// Checks that every referenced variable is declared.
    pub fn validate(&self) -> Result<(), FormulaError> {
        let n = self.num_vars() as u32;
        let check = |lit: Lit| {
            if lit.var().id() > n {
                Err(FormulaError::UnknownVariable { var: lit.var(), num_vars: n })
            } else {
                Ok(())
            }
        };
        for c in &self.clauses {
            c.lits().iter().try_for_each(|&l| check(l))?;
        }
        for p in &self.pb {
            p.terms().iter().try_for_each(|t| check(t.lit))?;
        }
        for &(_, l) in self.objective.iter().flatten() {
            check(l)?;
        }
        Ok(())
    }

    pub fn objective_value(&self, model: &[bool]) -> Option<i64> {
        self.objective
            .as_ref()
            .map(|terms| terms.iter().filter(|(_, l)| l.eval(model)).map(|(c, _)| c).sum())
    }

    /// First violated constraint, if any.
    pub fn first_violation(&self, model: &[bool]) -> Option<Violation> {
        if model.len() < self.num_vars() {
            return Some(Violation::ShortModel);
        }
        if let Some(i) = self.clauses.iter().position(|c| !c.is_satisfied(model)) {
            return Some(Violation::Clause(i));
        }
        self.pb.iter().position(|p| !p.is_satisfied(model)).map(Violation::Pb)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Violation {
    ShortModel,
    Clause(usize),
    Pb(usize),
}
