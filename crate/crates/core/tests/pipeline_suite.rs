mod common;

use std::collections::HashMap;

use common::*;
use skolem_core::formula::{parse_qdimacs, parse_skolem_file, ExprArena, Var};
use skolem_core::generator::{planted_instance, GeneratorConfig};
use skolem_core::pipeline::*;
use skolem_core::sat::Limits;

fn quick() -> RunConfig {
    RunConfig { samples: SampleCount::Fixed(500), probe_n: 100, ..RunConfig::default() }
}

#[test]
fn example1_end_to_end() {
    let spec = example1();
    let r = synthesize(&spec, "example1", &RunConfig::default());
    assert!(r.record.status.is_solved(), "{:?}", r.record);
    assert_eq!(r.record.num_unates, 1);
    let text = r.skolem_text();
    let mut a = ExprArena::new();
    let funcs: HashMap<Var, _> = parse_skolem_file(&text, &mut a).unwrap().into_iter().collect();
    let x1 = a.var(v(1));
    let x2 = a.var(v(2));
    let or = a.or2(x1, x2);
    assert!(exprs_equivalent(&a, funcs[&v(3)], or, &[v(1), v(2)]));
    assert!(exprs_equivalent(&a, funcs[&v(4)], x1, &[v(1), v(2)]));
    assert_eq!(a.as_const(funcs[&v(5)]), Some(true));
    assert!(r.diagnostics.iter().any(|d| d["line"] == "unate +y5"));
}

#[test]
fn all_unate_stops_after_preprocessing() {
    let spec = parse_qdimacs("p cnf 3 2\na 1 0\ne 2 3 0\n1 2 0\n-3 1 0\n").unwrap();
    let r = synthesize(&spec, "unate", &quick());
    assert_eq!(r.record.status, Status::SolvedPreprocess);
    assert_eq!(r.record.num_samples, 0);
    assert_eq!(r.functions.len(), 2);
}

#[test]
fn unsatisfiable_matrix_is_vacuously_solved() {
    let spec = parse_qdimacs("p cnf 3 4\na 1 0\ne 2 3 0\n2 3 0\n-2 -3 0\n2 -3 0\n-2 3 0\n").unwrap();
    let r = synthesize(&spec, "unsat", &quick());
    assert!(r.record.status.is_solved(), "{:?}", r.record);
    assert_eq!(check_functions(&spec, &r.arena, &r.functions, &Limits::default()).unwrap(), CheckVerdict::Valid);
}

#[test]
fn random_specs_all_solved_and_valid() {
    for seed in 0..100 {
        let inst = planted_instance(seed, &GeneratorConfig::default());
        let mut cfg = quick();
        cfg.seed = seed;
        let r = synthesize(&inst.spec, "rand", &cfg);
        assert!(r.record.status.is_solved(), "seed {seed}: {:?}", r.record.message);
        let funcs: HashMap<Var, _> = r.functions.iter().copied().collect();
        assert!(skolem_valid(&inst.spec, &r.arena, &funcs), "seed {seed}");
        let phases = r.record.preprocess_secs + r.record.sampling_secs + r.record.learning_secs + r.record.refinement_secs;
        assert!(phases <= r.record.total_secs + 1e-9);
    }
}

#[test]
fn standalone_check() {
    let spec = example1();
    let mut a = ExprArena::new();
    let good = parse_skolem_file("y3 := (or x1 x2)\ny4 := x1\ny5 := true\n", &mut a).unwrap();
    assert_eq!(check_functions(&spec, &a, &good, &Limits::default()).unwrap(), CheckVerdict::Valid);
    let bad = parse_skolem_file("y3 := x1\ny4 := x1\ny5 := true\n", &mut a).unwrap();
    assert_eq!(
        check_functions(&spec, &a, &bad, &Limits::default()).unwrap(),
        CheckVerdict::Invalid(vec![(v(1), false), (v(2), true)])
    );
    let missing = parse_skolem_file("y3 := x1\n", &mut a).unwrap();
    assert!(matches!(check_functions(&spec, &a, &missing, &Limits::default()), Err(CheckError::Missing(4))));
    let uses_output = parse_skolem_file("y3 := y4\ny4 := x1\ny5 := true\n", &mut a).unwrap();
    assert!(matches!(check_functions(&spec, &a, &uses_output, &Limits::default()), Err(CheckError::NotInput(3, 4))));
}

#[test]
fn timeout_status() {
    let inst = planted_instance(9, &GeneratorConfig::default());
    let cfg = RunConfig { timeout_secs: Some(0.0), ..quick() };
    assert_eq!(synthesize(&inst.spec, "t", &cfg).record.status, Status::Timeout);
}

#[test]
fn bench_empty_dir_and_rows() {
    let empty = tempfile::tempdir().unwrap();
    let recs = bench(empty.path(), &quick(), 1).unwrap();
    assert_eq!(bench_csv(&recs).lines().count(), 1);

    let dir = tempfile::tempdir().unwrap();
    for i in 0..10 {
        let inst = planted_instance(100 + i, &GeneratorConfig::default());
        std::fs::write(dir.path().join(format!("inst{i:02}.qdimacs")), inst.spec.to_qdimacs()).unwrap();
    }
    std::fs::write(dir.path().join("notes.txt"), "ignored").unwrap();
    let recs = bench(dir.path(), &quick(), 2).unwrap();
    assert_eq!(recs.len(), 10);
    let csv = bench_csv(&recs);
    let mut rdr = csv::Reader::from_reader(csv.as_bytes());
    let mut last = 0.0;
    for row in rdr.records() {
        let row = row.unwrap();
        let c: f64 = row[9].parse().unwrap();
        assert!(c >= last);
        last = c;
    }
    let summary = BenchSummary::from_records(&recs);
    assert_eq!(summary.solved(), 10);
}

#[test]
fn bench_parse_error_is_a_failed_row() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("bad.qdimacs"), "p cnf x\n").unwrap();
    let recs = bench(dir.path(), &quick(), 1).unwrap();
    assert_eq!(recs[0].status, Status::Failed);
    assert!(recs[0].message.is_some());
}
