//! Exact minimum graph coloring through a 0-1 ILP reduction, with
//! instance-independent symmetry-breaking predicates, formula symmetry
//! detection and a built-in CDCL solver for CNF plus pseudo-Boolean
//! constraints.

pub mod encoder;
pub mod formula;
pub mod graph;
pub mod harness;
pub mod opb;
pub mod sbp;
pub mod solver;
pub mod symmetry;

pub use encoder::{decode_coloring, encode_decision_cnf, encode_opt, EncodeError};
pub use formula::{Clause, Formula, Lit, PbConstraint, PbTerm, Relation, Var, VarRole};
pub use graph::{parse_dimacs_col, Graph, GraphError};
pub use sbp::SbpConfig;
pub use solver::{decide, minimize, SolveResult, SolverOptions, Status};
pub use symmetry::{detect_symmetries, PermGenerator};
