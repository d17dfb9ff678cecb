mod common;

use common::*;
use num_integer::Integer;
use proptest::prelude::*;
use thompson_core::core2::{build_core, build_core_of_maps, coarsen, coarsen_scheduled, initial_relation, Forest};
use thompson_core::golan::{generates_f, germ_lattice_check, GermLattice, GermVector, Refutation, Verdict};
use thompson_core::groupcalc::{x0, x1, zeta};
use thompson_core::repro::same_partition;
use thompson_core::{Exec, PLMap, TreePair};

fn f_set(max: usize) -> impl Strategy<Value = Vec<PLMap>> {
    proptest::collection::vec(f_elem(), 1..=max)
}

fn gcd_all(xs: impl IntoIterator<Item = i64>) -> i64 {
    xs.into_iter().fold(0, |g, x| g.gcd(&x))
}

/// Lattice membership by invariants: for full rank, the index (gcd of the
/// 2x2 minors) is unchanged by adding the target; for rank one, the target
/// must be parallel and the content unchanged.
fn lattice_contains(vs: &[[i64; 2]], t: [i64; 2]) -> bool {
    let minors = |vs: &[[i64; 2]]| {
        gcd_all((0..vs.len()).flat_map(|i| (i + 1..vs.len()).map(move |j| vs[i][0] * vs[j][1] - vs[i][1] * vs[j][0])))
    };
    let mut with = vs.to_vec();
    with.push(t);
    let d = minors(vs);
    if d != 0 {
        return minors(&with) == d;
    }
    let content = |vs: &[[i64; 2]]| gcd_all(vs.iter().flat_map(|v| [v[0], v[1]]));
    if content(vs) == 0 {
        return t == [0, 0];
    }
    minors(&with) == 0 && content(&with) == content(vs)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn schedules_reach_the_same_fixpoint(gens in f_set(3), s in any::<u64>()) {
        let pairs: Vec<TreePair> = gens.iter().map(TreePair::from_plmap).collect();
        let (forest, _) = Forest::from_pairs(&pairs).unwrap();
        let init = initial_relation(&forest);
        let rounds = coarsen(&forest, &init);
        let (sched, trace) = coarsen_scheduled(&forest, &init, &mut rng(s));
        prop_assert!(same_partition(&rounds.labels(), &sched.labels()));
        prop_assert!(trace.windows(2).all(|w| w[1] < w[0]));
        prop_assert_eq!(*trace.last().unwrap(), rounds.count());
    }

    #[test]
    fn fixpoint_is_a_closed_coarsening(gens in f_set(3)) {
        let pairs: Vec<TreePair> = gens.iter().map(TreePair::from_plmap).collect();
        let core = build_core(&pairs).unwrap();
        let (init, fin) = (core.initial.clone(), core.fixpoint.clone());
        for u in 0..core.forest.len() {
            for v in 0..core.forest.len() {
                if init.same(u, v) {
                    prop_assert!(fin.same(u, v));
                }
            }
        }
        let carets = core.forest.carets();
        for &(r, l, s) in &carets {
            for &(r2, l2, s2) in &carets {
                prop_assert_eq!(fin.same(r, r2), fin.same(l, l2) && fin.same(s, s2));
            }
        }
    }

    #[test]
    fn core_ignores_generator_order(gens in f_set(3)) {
        let mut rev = gens.clone();
        rev.reverse();
        let a = build_core_of_maps(&gens).unwrap().graph.to_dot();
        let b = build_core_of_maps(&rev).unwrap().graph.to_dot();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn germs_are_a_homomorphism(f in f_elem(), g in f_elem()) {
        let (a, b) = (GermVector::of(&f).unwrap(), GermVector::of(&g).unwrap());
        let ab = GermVector::of(&f.then(&g)).unwrap();
        prop_assert_eq!(ab, GermVector { at_zero: a.at_zero + b.at_zero, at_one: a.at_one + b.at_one });
        let inv = GermVector::of(&f.inverse()).unwrap();
        prop_assert_eq!(inv, GermVector { at_zero: -a.at_zero, at_one: -a.at_one });
    }

    #[test]
    fn lattice_matches_invariants(vs in proptest::collection::vec((-6i64..7, -6i64..7), 0..4), t in (-6i64..7, -6i64..7)) {
        let germs: Vec<GermVector> = vs.iter().map(|&(a, b)| GermVector { at_zero: a, at_one: b }).collect();
        let raw: Vec<[i64; 2]> = vs.iter().map(|&(a, b)| [a, b]).collect();
        let lat = GermLattice::of(&germs);
        let target = [t.0, t.1];
        prop_assert_eq!(lat.contains(target), lattice_contains(&raw, target));
        if let Some(c) = lat.solve(target) {
            prop_assert_eq!(c.len(), raw.len());
            let sum = raw.iter().zip(&c).fold([0, 0], |acc, (v, k)| [acc[0] + k * v[0], acc[1] + k * v[1]]);
            prop_assert_eq!(sum, target);
        }
    }

    #[test]
    fn verdicts_ignore_order_and_execution(gens in f_set(2)) {
        let mut rev = gens.clone();
        rev.reverse();
        let seq = generates_f(&gens, 3, Exec::Sequential).unwrap();
        let par = generates_f(&gens, 3, Exec::Parallel).unwrap();
        let swapped = generates_f(&rev, 3, Exec::Sequential).unwrap();
        prop_assert_eq!(&seq, &par);
        prop_assert_eq!(seq.verdict, swapped.verdict);
    }

    #[test]
    fn verdicts_are_certified(gens in f_set(2)) {
        let v = generates_f(&gens, 3, Exec::Sequential).unwrap();
        match v.verdict {
            Verdict::Yes => prop_assert!(v.witnesses.as_ref().unwrap().verify(&gens)),
            Verdict::No => match v.refutation.as_ref().unwrap() {
                Refutation::Core { dot } => {
                    prop_assert!(!thompson_core::core2::is_generation_graph(&build_core_of_maps(&gens).unwrap().graph));
                    prop_assert_eq!(dot, &v.core_dot);
                }
                Refutation::Lattice { missing, .. } => {
                    let raw: Vec<[i64; 2]> = gens
                        .iter()
                        .map(|g| GermVector::of(g).unwrap())
                        .map(|g| [g.at_zero, g.at_one])
                        .collect();
                    prop_assert!(!lattice_contains(&raw, *missing));
                }
            },
            Verdict::Unknown => prop_assert!(v.witnesses.is_none() && v.refutation.is_none()),
        }
    }

    #[test]
    fn supersets_of_x0_x1_generate(g in f_elem()) {
        let v = generates_f(&[x0(), x1(), g.clone()], 4, Exec::Parallel).unwrap();
        prop_assert_eq!(v.verdict, Verdict::Yes);
        prop_assert!(v.witnesses.unwrap().verify(&[x0(), x1(), g]));
    }
}

#[test]
fn single_generators_do_not_generate() {
    for g in [x0(), x1(), zeta()] {
        let v = generates_f(&[g], 4, Exec::Sequential).unwrap();
        assert_eq!(v.verdict, Verdict::No);
    }
}

#[test]
fn lattice_of_standard_generators() {
    let c = germ_lattice_check(&[x0(), x1()]).unwrap();
    assert!(c.has_1_0 && c.has_0_1);
    let c = germ_lattice_check(&[x0().pow(2), x1()]).unwrap();
    assert!(!c.has_1_0 && c.has_0_1);
}

#[test]
fn non_f_generators_are_rejected() {
    assert!(generates_f(&[PLMap::rotation(&q(1, 2))], 2, Exec::Sequential).is_err());
    assert!(build_core_of_maps(&[thompson_core::groupcalc::torsion_rep(3).unwrap()]).is_err());
}
