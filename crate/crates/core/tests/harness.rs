mod common;

use std::fs;
use std::path::PathBuf;
use std::time::Duration;

use colorsym::harness::{
    choose_k, greedy_coloring, read_records, records_to_csv, report, run_grid, strip_time_columns, summarize, GridOptions, InstDep,
    KChoice,
};
use colorsym::sbp::{li_clause_count, SbpConfig};
use common::bench;

fn instance(name: &str) -> PathBuf {
    [env!("CARGO_MANIFEST_DIR"), "data", "dimacs", &format!("{name}.col")].iter().collect()
}

fn small_opts() -> GridOptions {
    GridOptions { k: KChoice::Fixed(6), timeout: Duration::from_secs(60), jobs: 1, ..GridOptions::default() }
}

#[test]
fn grid_shape_and_record_sizes() {
    let dir = tempfile::tempdir().unwrap();
    let journal = dir.path().join("journal.csv");
    let opts = GridOptions { keep_encodings: Some(dir.path().join("enc")), ..small_opts() };
    let records = run_grid(&[instance("myciel3"), instance("myciel3")], &opts, Some(&journal)).unwrap();
    assert_eq!(records.len(), 2 * 6 * 2);
    assert_eq!(read_records(&fs::read_to_string(&journal).unwrap()).unwrap().len(), 24);
    assert_eq!(fs::read_dir(dir.path().join("enc")).unwrap().count(), 12);
    let (n, m, k) = (11, 20, 6);
    for r in &records {
        assert_eq!(r.solve_status, "OPTIMAL", "{r:?}");
        assert_eq!(r.best_value, Some(4));
        assert_eq!(r.group_order == "1", r.num_generators == 0);
        if r.instance_dependent {
            continue;
        }
        let (v, c, p) = (n * k + k, k * (m + n + 1), n);
        let want = match r.sbp_config.as_str() {
            "none" => (v, c, p),
            "nu" => (v, c + k - 1, p),
            "ca" => (v, c, p + k - 1),
            "li" => (v + n * k, c + li_clause_count(n, k), p),
            "sc" => (v, c + 2, p),
            "nu,sc" => (v, c + k - 1 + 2, p),
            other => panic!("{other}"),
        };
        assert_eq!((r.num_vars, r.num_clauses, r.num_pb), want, "{}", r.sbp_config);
    }
    let li_dep = records.iter().find(|r| r.sbp_config == "li" && r.instance_dependent).unwrap();
    assert_eq!(li_dep.num_generators, 0);
    let summary = summarize(&records);
    assert_eq!(summary.len(), 12);
    assert!(summary.iter().all(|s| s.solved <= s.instances && s.instances == 2));
}

#[test]
fn reruns_match_except_time() {
    let opts = GridOptions { configs: vec![SbpConfig::NONE, SbpConfig::NU_SC], ..small_opts() };
    let paths = [instance("myciel3"), instance("queen5_5")];
    let a = records_to_csv(&run_grid(&paths, &opts, None).unwrap()).unwrap();
    let b = records_to_csv(&run_grid(&paths, &opts, None).unwrap()).unwrap();
    assert_eq!(strip_time_columns(&a), strip_time_columns(&b));
    assert!(!strip_time_columns(&a).contains("solve_time_s"));
}

#[test]
fn failures_become_error_rows() {
    let opts = GridOptions { k: KChoice::Fixed(0), configs: vec![SbpConfig::NONE], inst_dep: InstDep::No, ..small_opts() };
    let records = run_grid(&[instance("myciel3")], &opts, None).unwrap();
    assert_eq!(records.len(), 1);
    assert_eq!(records[0].solve_status, "ERROR");
    assert!(records[0].error.is_some());
    let (csv_text, md) = report(&records).unwrap();
    assert_eq!(read_records(&csv_text).unwrap(), records);
    assert!(md.contains("| none | no | 1 | 0 | 1 |"));
}

#[test]
fn unreadable_instance_is_a_setup_error() {
    assert!(run_grid(&[PathBuf::from("/nonexistent.col")], &small_opts(), None).is_err());
}

#[test]
fn heuristic_bound_is_feasible() {
    let chi = [("myciel3", 4), ("myciel4", 5), ("myciel5", 6), ("queen5_5", 5), ("queen6_6", 7), ("miles250", 8), ("jean", 10)];
    for (name, chi) in chi {
        let g = bench(name);
        let coloring: Vec<Option<usize>> = greedy_coloring(&g).into_iter().map(Some).collect();
        assert!(common::proper(&g, &coloring), "{name}");
        let k = choose_k(&g, 20);
        assert_eq!(coloring.iter().flatten().max().unwrap() + 1, k, "{name}");
        assert!(k >= chi, "{name}");
    }
    assert_eq!(choose_k(&bench("myciel3"), 20), 4);
}
