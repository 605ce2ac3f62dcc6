use std::path::PathBuf;
use std::time::Duration;

use colorsym::encoder::{decode_coloring, encode_decision_cnf, encode_opt};
use colorsym::formula::{Clause, Formula, Var};
use colorsym::graph::{families, parse_dimacs_col, Graph};
use colorsym::sbp::{self, SbpConfig};
use colorsym::solver::{decide, minimize, minimize_with, SolverOptions, Status};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn bench(name: &str) -> Graph {
    let path: PathBuf = [env!("CARGO_MANIFEST_DIR"), "data", "dimacs", &format!("{name}.col")].iter().collect();
    parse_dimacs_col(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn opts() -> SolverOptions {
    SolverOptions::with_timeout(Duration::from_secs(120))
}

fn proper(g: &Graph, colors: &[Option<usize>]) -> bool {
    colors.iter().all(Option::is_some) && g.edges().iter().all(|&(a, b)| colors[a as usize] != colors[b as usize])
}

#[test]
fn triangle_two_colors_infeasible() {
    let t = families::complete(3);
    assert_eq!(minimize(&encode_opt(&t, 2).unwrap(), &opts()).unwrap().status, Status::Unsat);
    assert_eq!(decide(&encode_decision_cnf(&t, 2).unwrap(), &opts()).unwrap().status, Status::Unsat);
    assert_eq!(decide(&encode_decision_cnf(&t, 3).unwrap(), &opts()).unwrap().status, Status::Sat);
}

#[test]
fn single_vertex_optimum_is_one() {
    let r = minimize(&encode_opt(&families::empty(1), 5).unwrap(), &opts()).unwrap();
    assert_eq!(r.status, Status::Optimal);
    assert_eq!(r.best_value, Some(1));
}

#[test]
fn queen5_5_decision_threshold() {
    let g = bench("queen5_5");
    assert_eq!(decide(&encode_decision_cnf(&g, 5).unwrap(), &opts()).unwrap().status, Status::Sat);
    assert_eq!(decide(&encode_decision_cnf(&g, 4).unwrap(), &opts()).unwrap().status, Status::Unsat);
}

#[test]
fn queen6_6_decision_threshold() {
    let g = bench("queen6_6");
    let sat = decide(&encode_decision_cnf(&g, 7).unwrap(), &opts()).unwrap();
    assert_eq!(sat.status, Status::Sat);
    let f = encode_decision_cnf(&g, 7).unwrap();
    assert!(proper(&g, &decode_coloring(&f.layout().unwrap(), sat.model.as_ref().unwrap())));
    assert_eq!(decide(&encode_decision_cnf(&g, 6).unwrap(), &opts()).unwrap().status, Status::Unsat);
}

#[test]
fn myciel4_chromatic_number() {
    let g = bench("myciel4");
    let f = sbp::apply(encode_opt(&g, 20).unwrap(), &g, SbpConfig::NU_SC).unwrap();
    let r = minimize(&f, &opts()).unwrap();
    assert_eq!(r.status, Status::Optimal);
    assert_eq!(r.best_value, Some(5));
}

#[test]
fn incumbents_strictly_improve() {
    let f = encode_opt(&bench("myciel3"), 20).unwrap();
    let mut seen = Vec::new();
    let r = minimize_with(&f, &opts(), |v, _| seen.push(v)).unwrap();
    assert!(seen.windows(2).all(|w| w[1] < w[0]), "{seen:?}");
    assert_eq!(seen.last().copied(), r.best_value);
    assert_eq!(r.best_value, Some(4));
    assert_eq!(r.stats.calls as usize, seen.len() + 1);
}

#[test]
fn timeout_keeps_incumbent() {
    let f = encode_opt(&bench("queen6_6"), 20).unwrap();
    let opts = SolverOptions { max_conflicts: Some(50), ..opts() };
    let r = minimize(&f, &opts).unwrap();
    assert_eq!(r.status, Status::Timeout);
    let model = r.model.expect("first model needs no conflicts");
    assert_eq!(f.objective_value(&model), r.best_value);
}

/// Pigeonhole: `holes + 1` pigeons, exactly-one over holes, at most one
/// pigeon per hole as binary clauses.
fn pigeonhole(holes: usize) -> Formula {
    let pigeons = holes + 1;
    let var = |p: usize, h: usize| Var::from_index(p * holes + h);
    let mut f = Formula::with_vars(pigeons * holes);
    for p in 0..pigeons {
        f.add_pb(colorsym::PbConstraint::exactly_one((0..holes).map(|h| var(p, h).pos())));
    }
    for h in 0..holes {
        for p in 0..pigeons {
            for q in 0..p {
                f.add_clause(Clause::new(vec![var(p, h).neg(), var(q, h).neg()]).unwrap());
            }
        }
    }
    f
}

#[test]
fn pigeonhole_unsat_in_both_modes() {
    let f = pigeonhole(5);
    for learning in [true, false] {
        let r = decide(&f, &SolverOptions { learning, ..opts() }).unwrap();
        assert_eq!(r.status, Status::Unsat);
    }
}

#[test]
fn learning_reduces_decisions_on_exactly_one_conflicts() {
    let f = encode_opt(&bench("myciel4"), 4).unwrap();
    let on = decide(&f, &SolverOptions { learning: true, ..opts() }).unwrap();
    let off = decide(&f, &SolverOptions { learning: false, ..opts() }).unwrap();
    assert_eq!(on.status, Status::Unsat);
    assert_eq!(off.status, Status::Unsat);
    assert!(
        on.stats.decisions < off.stats.decisions,
        "learning on: {} decisions, off: {}",
        on.stats.decisions,
        off.stats.decisions
    );
}

#[test]
fn dll_mode_agrees_on_small_graphs() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..20 {
        let g = families::gnp(6, 0.5, &mut rng);
        let chi = g.brute_force_chromatic(10).unwrap();
        let f = encode_opt(&g, 6).unwrap();
        let r = minimize(&f, &SolverOptions { learning: false, ..opts() }).unwrap();
        assert_eq!(r.best_value, Some(chi as i64));
    }
}

#[test]
fn same_seed_same_result() {
    let f = encode_opt(&bench("queen5_5"), 20).unwrap();
    let a = minimize(&f, &SolverOptions { seed: 7, ..opts() }).unwrap();
    let b = minimize(&f, &SolverOptions { seed: 7, ..opts() }).unwrap();
    assert_eq!((a.status, a.best_value, &a.model), (b.status, b.best_value, &b.model));
    assert_eq!(a.stats.conflicts, b.stats.conflicts);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn optimum_matches_brute_force(n in 1usize..=9, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = families::gnp(n, 0.5, &mut rng);
        let chi = g.brute_force_chromatic(10).unwrap();
        let f = encode_opt(&g, n).unwrap();
        let r = minimize(&f, &opts()).unwrap();
        prop_assert_eq!(r.status, Status::Optimal);
        prop_assert_eq!(r.best_value, Some(chi as i64));
        let colors = decode_coloring(&f.layout().unwrap(), r.model.as_ref().unwrap());
        prop_assert!(proper(&g, &colors));
    }

    #[test]
    fn decision_agrees_with_optimization(n in 1usize..=8, k in 1usize..=5, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = families::gnp(n, 0.5, &mut rng);
        let sat = decide(&encode_decision_cnf(&g, k).unwrap(), &opts()).unwrap().status == Status::Sat;
        let best = minimize(&encode_opt(&g, k).unwrap(), &opts()).unwrap().best_value;
        prop_assert_eq!(sat, best.is_some_and(|b| b <= k as i64));
    }
}
