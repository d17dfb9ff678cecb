//! Reproduction suites: every explicit finite computation as a named check.

use std::collections::HashMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::construct::{
    check_conjugator, construct_conjugator, covers_circle, orbit_arcs, prop_finite_data, prop_infinite_pipeline,
    FiniteCase, Report,
};
use crate::core2::{build_core_of_maps, coarsen, coarsen_scheduled, initial_relation, Forest};
use crate::dyadic::{CirclePoint, Dyadic};
use crate::exec::Exec;
use crate::golan::{generates_f, Letter, Verdict, Witnesses, Word, DEFAULT_DEPTH};
use crate::groupcalc::{
    factor_over_cover, is_member, order_of, rotation_number, torsion_rep, x0, x1, x_n, zeta, Group, Order,
    DEFAULT_ORDER_BOUND,
};
use crate::plmap::{Carrier, DyadicArc, PLMap};
use crate::sample;
use crate::treepair::TreePair;

pub const SCHEMA: &str = "thompson-repro/1";

pub const CONJUGATOR_INSTANCES: usize = 100;
pub const FACTOR_INSTANCES: usize = 200;
pub const SCHEDULES: usize = 20;

/// The four-vertex criterion graph in canonical DOT form.
pub const CRITERION_DOT: &str = "digraph core {
  0;
  1;
  2;
  3;
  0 -> 1 [label=\"0\"];
  0 -> 2 [label=\"1\"];
  1 -> 1 [label=\"0\"];
  1 -> 3 [label=\"1\"];
  2 -> 3 [label=\"0\"];
  2 -> 2 [label=\"1\"];
  3 -> 3 [label=\"0\"];
  3 -> 3 [label=\"1\"];
}
";

pub const ZETA: &str = "(00,01,10,11)->(0,100,101,11)";
pub const X0: &str = "(00,01,1)->(0,10,11)";
pub const X1: &str = "(0,100,101,11)->(0,10,110,111)";
pub const CASE_A_KAPPA1: &str = "(00,010,011,100,101,11)->(00,01,100,101,110,111)";
pub const CASE_C_KAPPA1: &str = "(00,010,011,10,110,111)->(00,01,10,1100,1101,111)";
pub const CASE_C_KAPPA1_TAU: &str = "(00,010,011,1)->(00,01,10,11)";

/// Vertex labels of the initial relation for the case (a) pair, trees in
/// the order `A1, B1, A2, B2`, each in preorder.
pub const CASE_A_INITIAL_LABELS: [&[usize]; 4] = [
    &[0, 11, 1, 2, 12, 3, 4],
    &[0, 1, 13, 14, 2, 3, 4],
    &[0, 15, 5, 16, 6, 7, 17, 18, 8, 9, 10],
    &[0, 19, 5, 6, 20, 21, 7, 8, 22, 9, 10],
];

/// The same for the final relation.
pub const CASE_A_FINAL_LABELS: [&[usize]; 4] = [
    &[0, 1, 1, 2, 4, 2, 4],
    &[0, 1, 4, 2, 2, 2, 4],
    &[0, 1, 1, 2, 2, 2, 4, 2, 2, 2, 4],
    &[0, 1, 1, 2, 4, 2, 2, 2, 4, 2, 4],
];

pub const SUITES: [&str; 9] = [
    "figures",
    "case-a",
    "case-b",
    "case-c",
    "standard",
    "prop-infinite",
    "conjugators",
    "factorisations",
    "schedules",
];

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub passed: bool,
    pub checks: Report,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReproReport {
    pub schema: &'static str,
    pub seed: u64,
    pub passed: bool,
    pub suites: Vec<SuiteReport>,
}

impl ReproReport {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for s in &self.suites {
            for c in &s.checks.checks {
                let mark = if c.passed { "PASS" } else { "FAIL" };
                out.push_str(&format!("[{mark}] {}: {}", s.suite, c.name));
                if let Some(d) = &c.detail {
                    out.push_str(&format!(" ({d})"));
                }
                out.push('\n');
            }
        }
        let total: usize = self.suites.iter().map(|s| s.checks.checks.len()).sum();
        let failed: usize = self.suites.iter().map(|s| s.checks.failures().len()).sum();
        out.push_str(&format!("{} checks, {} failed\n", total, failed));
        out
    }
}

/// True iff the two label vectors induce the same partition.
pub fn same_partition(a: &[usize], b: &[usize]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let mut fwd: HashMap<usize, usize> = HashMap::new();
    let mut back: HashMap<usize, usize> = HashMap::new();
    a.iter().zip(b).all(|(x, y)| *fwd.entry(*x).or_insert(*y) == *y && *back.entry(*y).or_insert(*x) == *x)
}

fn pair(s: &str) -> TreePair {
    s.parse().expect("built-in tree pair")
}

fn render(f: &PLMap) -> String {
    TreePair::from_plmap(f).to_string()
}

fn eq_check(rep: &mut Report, name: &str, got: String, want: &str) {
    let ok = got == want;
    rep.push(name, ok, (!ok).then(|| format!("got {got}")));
}

fn letter(g: usize, inverse: bool) -> Word {
    Word(vec![Letter { generator: g, inverse }])
}

fn witness_checks(rep: &mut Report, k0: &PLMap, k1: &PLMap, exec: Exec) {
    let gens = [k0.clone(), k1.clone()];
    let w = Witnesses { mu: letter(0, false), nu: letter(1, true), xi: letter(1, false), x: Dyadic::q(1, 4) };
    rep.check("mu = kappa0, nu = kappa1^-1, xi = kappa1, x = 1/4 satisfy the germ conditions", w.verify(&gens));
    match build_core_of_maps(&gens) {
        Ok(core) => {
            eq_check(rep, "core graph is the criterion graph", core.graph.to_dot(), CRITERION_DOT);
        }
        Err(e) => rep.push("core graph is the criterion graph", false, Some(e.to_string())),
    }
    match generates_f(&gens, DEFAULT_DEPTH, exec) {
        Ok(v) => rep.push("kappa0 and kappa1 generate F", v.verdict == Verdict::Yes, Some(format!("{:?}", v.verdict))),
        Err(e) => rep.push("kappa0 and kappa1 generate F", false, Some(e.to_string())),
    }
}

fn finite_cover(rep: &mut Report, alpha: &PLMap, hi: &Dyadic, n: usize) {
    let arcs = orbit_arcs(alpha, &CirclePoint::zero(), &CirclePoint::new(hi), n);
    rep.check(format!("images of (0, {hi}) under {n} powers of alpha cover the circle"), covers_circle(&arcs));
}

pub fn suite_figures() -> Report {
    let mut rep = Report::default();
    let z = pair(ZETA);
    let formula = PLMap::from_points(
        Carrier::Interval,
        vec![
            (Dyadic::zero(), Dyadic::zero()),
            (Dyadic::q(1, 4), Dyadic::q(1, 2)),
            (Dyadic::q(3, 4), Dyadic::q(3, 4)),
            (Dyadic::one(), Dyadic::one()),
        ],
    )
    .expect("valid map");
    rep.check("zeta tree pair equals its three-piece formula", z.to_plmap() == formula);
    eq_check(&mut rep, "zeta formula converts back to its tree pair", render(&formula), ZETA);
    rep.check("zeta tree pair is reduced", z.is_reduced());
    rep.check("zeta sends 1/2 to 5/8", formula.eval(&Dyadic::q(1, 2)) == Dyadic::q(5, 8));
    rep.check("x0 tree pair matches", pair(X0).to_plmap() == x0());
    rep.check("x1 tree pair matches", pair(X1).to_plmap() == x1());
    match build_core_of_maps(&[x0(), x1()]) {
        Ok(c) => eq_check(&mut rep, "core of x0, x1 is the criterion graph", c.graph.to_dot(), CRITERION_DOT),
        Err(e) => rep.push("core of x0, x1 is the criterion graph", false, Some(e.to_string())),
    }
    let data = prop_finite_data(FiniteCase::A).expect("case a");
    match build_core_of_maps(&[data.kappa0, data.kappa1]) {
        Ok(core) => {
            let want: Vec<usize> = CASE_A_INITIAL_LABELS.concat();
            let want_final: Vec<usize> = CASE_A_FINAL_LABELS.concat();
            rep.push(
                "case (a) initial relation has 23 classes",
                core.initial.count() == 23,
                Some(core.initial.count().to_string()),
            );
            rep.check(
                "case (a) initial relation matches the labelled trees",
                same_partition(&core.initial.labels(), &want),
            );
            rep.push(
                "case (a) final relation has 4 classes",
                core.fixpoint.count() == 4,
                Some(core.fixpoint.count().to_string()),
            );
            rep.check(
                "case (a) final relation matches the labelled trees",
                same_partition(&core.fixpoint.labels(), &want_final),
            );
            eq_check(&mut rep, "case (a) core graph is the criterion graph", core.graph.to_dot(), CRITERION_DOT);
        }
        Err(e) => rep.push("case (a) core", false, Some(e.to_string())),
    }
    rep
}

pub fn suite_case_a(exec: Exec) -> Report {
    let mut rep = Report::default();
    let d = prop_finite_data(FiniteCase::A).expect("case a");
    eq_check(&mut rep, "alpha is (0,1)->(1,0)", render(&d.alpha), "(0,1)->(1,0)");
    eq_check(&mut rep, "kappa0 is zeta", render(&d.kappa0), ZETA);
    eq_check(&mut rep, "kappa1 = zeta^((alpha zeta)^2)", render(&d.kappa1), CASE_A_KAPPA1);
    rep.check("kappa1 tree pair is reduced", pair(CASE_A_KAPPA1).is_reduced());
    witness_checks(&mut rep, &d.kappa0, &d.kappa1, exec);
    rep.check("alpha has order 2", order_of(&d.alpha, DEFAULT_ORDER_BOUND) == Order::Finite(2));
    finite_cover(&mut rep, &d.alpha, &Dyadic::one(), 2);
    rep
}

pub fn suite_case_b(exec: Exec) -> Report {
    let mut rep = Report::default();
    let d = prop_finite_data(FiniteCase::B).expect("case b");
    eq_check(&mut rep, "zeta^alpha = x1", render(&d.kappa1), X1);
    eq_check(&mut rep, "zeta zeta^alpha = x0", render(&d.kappa0.then(&d.kappa1)), X0);
    match generates_f(&[x0(), x1()], DEFAULT_DEPTH, exec) {
        Ok(v) => rep.check("x0 and x1 generate F", v.verdict == Verdict::Yes),
        Err(e) => rep.push("x0 and x1 generate F", false, Some(e.to_string())),
    }
    rep.check("alpha has order 3", order_of(&d.alpha, DEFAULT_ORDER_BOUND) == Order::Finite(3));
    finite_cover(&mut rep, &d.alpha, &Dyadic::one(), 2);
    rep
}

pub fn suite_case_c(primes: &[usize], exec: Exec) -> Report {
    let mut rep = Report::default();
    for &p in primes {
        let mut sub = Report::default();
        let d = match prop_finite_data(FiniteCase::C(p)) {
            Ok(d) => d,
            Err(e) => {
                rep.push(format!("p = {p}: case data"), false, Some(e.to_string()));
                continue;
            }
        };
        eq_check(&mut sub, "kappa1 = zeta^alpha", render(&d.kappa1), CASE_C_KAPPA1);
        let (k0, k1) = d.kappa_tau.clone().expect("case c has tau");
        sub.check("kappa0^tau = kappa0", k0 == d.kappa0);
        eq_check(&mut sub, "kappa1^tau", render(&k1), CASE_C_KAPPA1_TAU);
        witness_checks(&mut sub, &k0, &k1, exec);
        sub.check("alpha^p = 1", d.alpha.pow(p as i64).is_identity());
        sub.check(
            "alpha has rotation number 1/p",
            rotation_number(&d.alpha, DEFAULT_ORDER_BOUND) == Some(num_rational::Ratio::new(1, p as u64)),
        );
        finite_cover(&mut sub, &d.alpha, &Dyadic::q(7, 8), p);
        rep.extend(&format!("p = {p}: "), sub);
    }
    rep
}

pub fn suite_standard(exec: Exec) -> Report {
    let mut rep = Report::default();
    for i in 0..=4 {
        for j in i + 1..=4 {
            rep.check(format!("x{j}^x{i} = x{}", j + 1), x_n(j).conjugate(&x_n(i)) == x_n(j + 1));
        }
    }
    match generates_f(&[x0(), x1()], DEFAULT_DEPTH, exec) {
        Ok(v) => rep.check("x0 and x1 generate F", v.verdict == Verdict::Yes),
        Err(e) => rep.push("x0 and x1 generate F", false, Some(e.to_string())),
    }
    for p in [2usize, 3, 5, 7] {
        match torsion_rep(p) {
            Ok(t) => {
                rep.check(format!("torsion representative {p} has order {p}"), t.pow(p as i64).is_identity());
                rep.check(
                    format!("torsion representative {p} has rotation number 1/{p}"),
                    rotation_number(&t, DEFAULT_ORDER_BOUND) == Some(num_rational::Ratio::new(1, p as u64)),
                );
            }
            Err(e) => rep.push(format!("torsion representative {p}"), false, Some(e.to_string())),
        }
    }
    rep
}

pub fn suite_prop_infinite() -> Report {
    let mut rep = Report::default();
    for (name, alpha, a) in [("(x0, zeta)", x0(), Dyadic::q(1, 4)), ("(zeta, zeta)", zeta(), Dyadic::q(1, 8))] {
        match prop_infinite_pipeline(&alpha, &zeta(), Some(&a)) {
            Ok(st) => rep.extend(&format!("{name}: "), st.report),
            Err(e) => rep.push(format!("{name}: pipeline"), false, Some(e.to_string())),
        }
    }
    rep
}

fn instance_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

pub fn suite_conjugators(seed: u64, exec: Exec) -> Report {
    let results = exec.map_range(CONJUGATOR_INSTANCES, |i| {
        let mut rng = instance_rng(seed, i as u64);
        let spec = sample::random_conjugator_spec(&mut rng)?;
        let gamma = construct_conjugator(&spec)?;
        let ok = check_conjugator(&spec, &gamma)?.all_passed() && is_member(&gamma, &Group::T);
        Ok::<_, crate::Error>(ok)
    });
    let mut rep = Report::default();
    let failed: Vec<String> = results
        .iter()
        .enumerate()
        .filter(|(_, r)| !matches!(r, Ok(true)))
        .map(|(i, r)| match r {
            Err(e) => format!("#{i}: {e}"),
            _ => format!("#{i}"),
        })
        .collect();
    rep.push(
        format!("{CONJUGATOR_INSTANCES} seeded conjugators satisfy both postconditions"),
        failed.is_empty(),
        (!failed.is_empty()).then(|| failed.join("; ")),
    );
    rep
}

pub fn suite_factorisations(seed: u64, exec: Exec) -> Report {
    let results = exec.map_range(FACTOR_INSTANCES, |i| {
        let mut rng = instance_rng(seed.wrapping_add(1), i as u64);
        let (gamma, [a, b, c, d]) = sample::random_factor_instance(&mut rng)?;
        let f = factor_over_cover(&gamma, &a, &b, &c, &d)?;
        let ac = DyadicArc::new(a.clone(), c.clone())?;
        let bd = DyadicArc::new(b, d)?;
        Ok::<_, crate::Error>(
            f.product() == gamma && is_member(&f.alpha, &Group::FBox(ac)) && is_member(&f.beta, &Group::FBox(bd)),
        )
    });
    let failed: Vec<String> = results
        .iter()
        .enumerate()
        .filter(|(_, r)| !matches!(r, Ok(true)))
        .map(|(i, r)| match r {
            Err(e) => format!("#{i}: {e}"),
            _ => format!("#{i}"),
        })
        .collect();
    let mut rep = Report::default();
    rep.push(
        format!("{FACTOR_INSTANCES} seeded factorisations multiply back with the right supports"),
        failed.is_empty(),
        (!failed.is_empty()).then(|| failed.join("; ")),
    );
    rep
}

pub fn suite_schedules(seed: u64, exec: Exec) -> Report {
    let mut rep = Report::default();
    let a = prop_finite_data(FiniteCase::A).expect("case a");
    for (name, gens) in [("kappa0, kappa1", vec![a.kappa0, a.kappa1]), ("x0, x1", vec![x0(), x1()])] {
        let pairs: Vec<TreePair> = gens.iter().map(TreePair::from_plmap).collect();
        let (forest, _) = Forest::from_pairs(&pairs).expect("F elements");
        let init = initial_relation(&forest);
        let expected = coarsen(&forest, &init).labels();
        let same = exec.map_range(SCHEDULES, |i| {
            let mut rng = instance_rng(seed.wrapping_add(2), i as u64);
            coarsen_scheduled(&forest, &init, &mut rng).0.labels() == expected
        });
        rep.check(format!("{SCHEDULES} random schedules on {name} reach the same relation"), same.iter().all(|s| *s));
    }
    rep
}

pub fn run_suite(name: &str, seed: u64, exec: Exec) -> Option<Report> {
    Some(match name {
        "figures" => suite_figures(),
        "case-a" => suite_case_a(exec),
        "case-b" => suite_case_b(exec),
        "case-c" => suite_case_c(&[5, 7], exec),
        "standard" => suite_standard(exec),
        "prop-infinite" => suite_prop_infinite(),
        "conjugators" => suite_conjugators(seed, exec),
        "factorisations" => suite_factorisations(seed, exec),
        "schedules" => suite_schedules(seed, exec),
        _ => return None,
    })
}

/// Runs the named suites (`all` expands to every suite); unknown names are
/// rejected up front. Suites may run concurrently but the report keeps the
/// given order.
pub fn run(names: &[&str], seed: u64, exec: Exec) -> Result<ReproReport, String> {
    let mut list: Vec<&str> = Vec::new();
    for n in names {
        if *n == "all" {
            list.extend(SUITES);
        } else if SUITES.contains(n) {
            list.push(n);
        } else {
            return Err(format!("unknown suite {n:?}"));
        }
    }
    let suites = exec.map(&list, |n| {
        let checks = run_suite(n, seed, exec).expect("validated above");
        SuiteReport { suite: n.to_string(), passed: checks.all_passed(), checks }
    });
    Ok(ReproReport { schema: SCHEMA, seed, passed: suites.iter().all(|s| s.passed), suites })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partitions_up_to_relabelling() {
        assert!(same_partition(&[0, 0, 1], &[5, 5, 2]));
        assert!(!same_partition(&[0, 0, 1], &[5, 2, 2]));
        assert!(!same_partition(&[0, 1, 1], &[0, 0, 0]));
    }

    #[test]
    fn deterministic_suites_pass() {
        for s in ["figures", "case-a", "case-b", "case-c", "standard"] {
            let r = run_suite(s, 0, Exec::Sequential).unwrap();
            assert!(r.all_passed(), "{s}: {:#?}", r.failures());
        }
    }

    #[test]
    fn unknown_suite() {
        assert!(run(&["nope"], 0, Exec::Sequential).is_err());
    }

    #[test]
    fn seeded_suites_pass() {
        for s in ["conjugators", "factorisations", "schedules", "prop-infinite"] {
            let r = run_suite(s, 42, Exec::Parallel).unwrap();
            assert!(r.all_passed(), "{s}: {:#?}", r.failures());
        }
    }
}
