//! One line per acceptance criterion; exits nonzero if any fails.

use std::process::ExitCode;

use num_rational::Ratio;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thompson_core::construct::{
    check_conjugator, construct_conjugator, prop_finite_data, prop_infinite_pipeline, FiniteCase,
};
use thompson_core::core2::{build_core_of_maps, coarsen, coarsen_scheduled, initial_relation, Forest};
use thompson_core::dyadic::in_cyclic_order;
use thompson_core::golan::{generates_f, Letter, Verdict, Witnesses, Word};
use thompson_core::groupcalc::{factor_over_cover, is_member, rotation_number, torsion_rep, x0, x1, x_n, zeta, Group};
use thompson_core::plmap::DyadicArc;
use thompson_core::repro::same_partition;
use thompson_core::sample;
use thompson_core::{Carrier, CirclePoint, Dyadic, Exec, PLMap, TreePair};

const CRITERION: &str = "digraph core {
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

type Outcome = Result<(), String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, msg: impl Into<String>) -> Outcome {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn pair(s: &str) -> PLMap {
    s.parse::<TreePair>().expect("tree pair literal").to_plmap()
}

fn render(f: &PLMap) -> String {
    TreePair::from_plmap(f).to_string()
}

fn q(n: i64, d: u64) -> Dyadic {
    Dyadic::q(n, d)
}

fn stream(seed: u64, i: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(i);
    r
}

fn yes(gens: &[PLMap]) -> Outcome {
    let v = generates_f(gens, 8, Exec::Parallel).map_err(|e| e.to_string())?;
    ensure(v.verdict == Verdict::Yes, format!("verdict {:?}", v.verdict))?;
    ensure(v.witnesses.map(|w| w.verify(gens)) == Some(true), "witnesses do not verify")
}

fn core_dot(gens: &[PLMap]) -> Result<String, String> {
    build_core_of_maps(gens).map(|c| c.graph.to_dot()).map_err(|e| e.to_string())
}

fn ac1() -> Outcome {
    let z = pair("(00,01,10,11)->(0,100,101,11)");
    let formula = PLMap::from_points(
        Carrier::Interval,
        [(q(0, 1), q(0, 1)), (q(1, 4), q(1, 2)), (q(3, 4), q(3, 4)), (q(1, 1), q(1, 1))],
    )
    .map_err(|e| e.to_string())?;
    ensure(z == formula, "tree pair and formula differ")?;
    for x in (0..=64).map(|j| Dyadic::new(j, 6)) {
        let want = if x <= q(1, 4) {
            &x * &q(2, 1)
        } else if x <= q(3, 4) {
            &(&x - &q(1, 4)).half() + &q(1, 2)
        } else {
            x.clone()
        };
        ensure(z.lift(&x) == want, format!("value at {x}"))?;
    }
    ensure(render(&formula) == "(00,01,10,11)->(0,100,101,11)", render(&formula))
}

fn ac2() -> Outcome {
    let alpha = pair("(0,10,11)->(10,11,0)").to_circle();
    let z = zeta();
    let za = z.conjugate(&alpha);
    ensure(render(&za) == "(0,100,101,11)->(0,10,110,111)", format!("zeta^alpha = {}", render(&za)))?;
    ensure(za == x1(), "zeta^alpha != x1")?;
    let p = z.then(&za);
    ensure(render(&p) == "(00,01,1)->(0,10,11)", format!("zeta zeta^alpha = {}", render(&p)))?;
    ensure(p == x0(), "zeta zeta^alpha != x0")
}

fn ac3() -> Outcome {
    let d = prop_finite_data(FiniteCase::A).map_err(|e| e.to_string())?;
    let core = build_core_of_maps(&[d.kappa0, d.kappa1]).map_err(|e| e.to_string())?;
    ensure(core.initial.count() == 23, format!("{} initial classes", core.initial.count()))?;
    ensure(core.fixpoint.count() == 4, format!("{} final classes", core.fixpoint.count()))?;
    ensure(core.graph.to_dot() == CRITERION, core.graph.to_dot())
}

fn ac4() -> Outcome {
    let d = prop_finite_data(FiniteCase::A).map_err(|e| e.to_string())?;
    ensure(render(&d.kappa0) == "(00,01,10,11)->(0,100,101,11)", "kappa0")?;
    ensure(render(&d.kappa1) == "(00,010,011,100,101,11)->(00,01,100,101,110,111)", render(&d.kappa1))?;
    let gens = [d.kappa0, d.kappa1];
    let letter = |g, inverse| Word(vec![Letter { generator: g, inverse }]);
    let w = Witnesses { mu: letter(0, false), nu: letter(1, true), xi: letter(1, false), x: q(1, 4) };
    ensure(w.verify(&gens), "mu = kappa0, nu = kappa1^-1, xi = kappa1, x = 1/4 fail")?;
    yes(&gens)
}

fn ac5() -> Outcome {
    let d = prop_finite_data(FiniteCase::C(5)).map_err(|e| e.to_string())?;
    ensure(
        render(&d.kappa1) == "(00,010,011,10,110,111)->(00,01,10,1100,1101,111)",
        format!("kappa1 = {}", render(&d.kappa1)),
    )?;
    let (k0, k1) = d.kappa_tau.ok_or("no tau")?;
    ensure(k0 == zeta(), "kappa0^tau != kappa0")?;
    ensure(render(&k1) == "(00,010,011,1)->(00,01,10,11)", format!("kappa1^tau = {}", render(&k1)))?;
    let gens = [k0, k1];
    ensure(core_dot(&gens)? == CRITERION, "core graph")?;
    yes(&gens)
}

fn ac6() -> Outcome {
    for i in 0..=4 {
        for j in i + 1..=4 {
            ensure(x_n(j).conjugate(&x_n(i)) == x_n(j + 1), format!("x{j}^x{i}"))?;
        }
    }
    yes(&[x0(), x1()])
}

fn ac7() -> Outcome {
    for p in [2usize, 3, 5, 7] {
        let t = torsion_rep(p).map_err(|e| e.to_string())?;
        ensure(t.pow(p as i64).is_identity(), format!("torsion {p}: power"))?;
        ensure((1..p).all(|k| !t.pow(k as i64).is_identity()), format!("torsion {p}: smaller power"))?;
        ensure(rotation_number(&t, 4096) == Some(Ratio::new(1, p as u64)), format!("torsion {p}: rotation"))?;
    }
    Ok(())
}

fn ac8() -> Outcome {
    let results = Exec::Parallel.map_range(100, |i| {
        let spec = sample::random_conjugator_spec(&mut stream(8, i as u64)).map_err(|e| format!("#{i}: {e}"))?;
        let gamma = construct_conjugator(&spec).map_err(|e| format!("#{i}: {e}"))?;
        let rep = check_conjugator(&spec, &gamma).map_err(|e| format!("#{i}: {e}"))?;
        ensure(rep.all_passed() && is_member(&gamma, &Group::T), format!("#{i}: {:?}", rep.failures()))
    });
    results.into_iter().collect()
}

fn ac9() -> Outcome {
    for (name, alpha, a) in [("(x0, zeta)", x0(), q(1, 4)), ("(zeta, zeta)", zeta(), q(1, 8))] {
        let st = prop_infinite_pipeline(&alpha, &zeta(), Some(&a)).map_err(|e| format!("{name}: {e}"))?;
        ensure(st.report.all_passed(), format!("{name}: {:?}", st.report.failures()))?;
        ensure((0..=6).all(|i| st.b_i(i) == st.a_i(i as i64)), format!("{name}: b_i = a_i"))?;
        for i in 7..=17usize {
            let trio = [st.a_i(i as i64).clone(), st.b_i(i).clone(), st.a_i(i as i64 + 1).clone()];
            ensure(in_cyclic_order(&trio), format!("{name}: a{i} < b{i} < a{}", i + 1))?;
        }
        ensure(st.cover.len() == 22, format!("{name}: {} cover elements", st.cover.len()))?;
        let arcs = st.cover_arcs();
        let mut probes: Vec<Dyadic> = (0..1024).map(|j| Dyadic::new(j, 10)).collect();
        probes.extend(arcs.iter().flat_map(|a| [a.start().into_inner(), a.end().into_inner()]));
        let uncovered = probes.iter().find(|x| !arcs.iter().any(|a| a.contains(&CirclePoint::new(x), false)));
        ensure(uncovered.is_none(), format!("{name}: {uncovered:?} uncovered"))?;
    }
    Ok(())
}

fn ac10() -> Outcome {
    let results = Exec::Parallel.map_range(200, |i| {
        let (gamma, [a, b, c, d]) =
            sample::random_factor_instance(&mut stream(10, i as u64)).map_err(|e| format!("#{i}: {e}"))?;
        let f = factor_over_cover(&gamma, &a, &b, &c, &d).map_err(|e| format!("#{i}: {e}"))?;
        let ac = DyadicArc::new(a, c).map_err(|e| e.to_string())?;
        let bd = DyadicArc::new(b, d).map_err(|e| e.to_string())?;
        ensure(f.alpha.then(&f.beta) == gamma || f.beta.then(&f.alpha) == gamma, format!("#{i}: product"))?;
        ensure(f.product() == gamma, format!("#{i}: recorded order"))?;
        ensure(is_member(&f.alpha, &Group::FBox(ac)) && is_member(&f.beta, &Group::FBox(bd)), format!("#{i}: supports"))
    });
    results.into_iter().collect()
}

fn ac11() -> Outcome {
    let a = prop_finite_data(FiniteCase::A).map_err(|e| e.to_string())?;
    for (name, gens) in [("kappa0, kappa1", vec![a.kappa0, a.kappa1]), ("x0, x1", vec![x0(), x1()])] {
        let pairs: Vec<TreePair> = gens.iter().map(TreePair::from_plmap).collect();
        let (forest, _) = Forest::from_pairs(&pairs).map_err(|e| e.to_string())?;
        let init = initial_relation(&forest);
        let want = coarsen(&forest, &init).labels();
        for i in 0..20 {
            let (got, _) = coarsen_scheduled(&forest, &init, &mut stream(11, i));
            ensure(same_partition(&got.labels(), &want), format!("{name}: schedule {i}"))?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("zeta tree pair and formula agree", ac1),
        ("conjugation and product identities for the order 3 alpha", ac2),
        ("core of kappa0, kappa1: 23 then 4 classes, criterion graph", ac3),
        ("witnesses for kappa0, kappa1 and generation", ac4),
        ("order 5 case: kappa1, kappa1^tau, core graph, generation", ac5),
        ("x_j^x_i = x_(j+1) and generation by x0, x1", ac6),
        ("torsion representatives of order 2, 3, 5, 7", ac7),
        ("100 seeded conjugators", ac8),
        ("infinite-order pipelines for (x0, zeta) and (zeta, zeta)", ac9),
        ("200 seeded factorisations", ac10),
        ("20 coarsening schedules on two generating sets", ac11),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(()) => println!("[PASS] AC{} {name}", i + 1),
            Err(why) => {
                failed += 1;
                println!("[FAIL] AC{} {name}: {why}", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
