use thompson_core::golan::find_witnesses;
use thompson_core::groupcalc::{x0, x1};
use thompson_core::repro;
use thompson_core::Exec;

#[test]
fn sequential_and_parallel_reports_agree() {
    let names = ["conjugators", "factorisations", "schedules"];
    for seed in [0, 7, 42] {
        let seq = repro::run(&names, seed, Exec::Sequential).unwrap();
        let par = repro::run(&names, seed, Exec::Parallel).unwrap();
        assert_eq!(seq, par, "seed {seed}");
        assert!(seq.passed, "seed {seed}: {}", seq.to_text());
    }
}

#[test]
fn reports_are_reproducible() {
    let a = repro::run(&["all"], 42, Exec::Parallel).unwrap();
    let b = repro::run(&["all"], 42, Exec::Parallel).unwrap();
    assert_eq!(a.to_text(), b.to_text());
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    assert_eq!(a.suites.len(), repro::SUITES.len());
}

#[test]
fn witness_search_is_strategy_independent() {
    let gens = [x0(), x1(), x0().then(&x1())];
    let seq = find_witnesses(&gens, 4, Exec::Sequential).unwrap();
    let par = find_witnesses(&gens, 4, Exec::Parallel).unwrap();
    assert_eq!(seq, par);
}
