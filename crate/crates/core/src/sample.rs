//! Seeded random elements and problem instances.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::construct::{find_hop_point, ConjugatorSpec};
use crate::dyadic::{circ_interp, Dyadic};
use crate::error::Result;
use crate::groupcalc::{admits_hops, box_tau, zeta, HopOutcome};
use crate::plmap::{DyadicArc, PLMap};
use crate::treepair::{BinaryWord, TreePair};

/// Leaves of a random binary tree with `n` leaves, in order.
pub fn random_tree<R: Rng>(rng: &mut R, n: usize) -> Vec<BinaryWord> {
    let mut leaves = vec![BinaryWord::empty()];
    while leaves.len() < n.max(1) {
        let i = rng.gen_range(0..leaves.len());
        let w = leaves.remove(i);
        leaves.insert(i, w.child(true));
        leaves.insert(i, w.child(false));
    }
    leaves
}

/// A random tree pair with at most `max_leaves` leaves; in F unless
/// `circle` is set.
pub fn random_pair<R: Rng>(rng: &mut R, max_leaves: usize, circle: bool) -> TreePair {
    let n = rng.gen_range(1..=max_leaves.max(1));
    let dom = random_tree(rng, n);
    let ran = random_tree(rng, n);
    let offset = if circle { rng.gen_range(0..n) } else { 0 };
    let pairs = (0..n).map(|i| (dom[i].clone(), ran[(i + offset) % n].clone())).collect();
    TreePair::from_pairs(pairs).expect("matching two trees in cyclic order is valid")
}

pub fn random_f<R: Rng>(rng: &mut R, max_leaves: usize) -> PLMap {
    random_pair(rng, max_leaves, false).to_plmap()
}

pub fn random_t<R: Rng>(rng: &mut R, max_leaves: usize) -> PLMap {
    random_pair(rng, max_leaves, true).to_plmap().to_circle()
}

/// A dyadic with denominator `2^bits` in `[0, 1]`.
pub fn random_grid_point<R: Rng>(rng: &mut R, bits: u32) -> Dyadic {
    Dyadic::new(rng.gen_range(0..=(1i64 << bits)), bits)
}

/// A random element of F supported in `[a, d]`.
pub fn random_f_in<R: Rng>(rng: &mut R, a: &Dyadic, d: &Dyadic, max_leaves: usize) -> Result<PLMap> {
    let tau = box_tau(&DyadicArc::new(a.clone(), d.clone())?);
    random_f(rng, max_leaves).transport(&tau)?.to_interval()
}

/// A factorisation instance `(gamma, a, b, c, d)` with `a < b < c < d` on
/// the grid of sixteenths and `gamma` in F supported in `[a, d]`.
pub fn random_factor_instance<R: Rng>(rng: &mut R) -> Result<(PLMap, [Dyadic; 4])> {
    let mut cuts: Vec<i64> = (0..=16).collect();
    cuts.shuffle(rng);
    let mut four = [cuts[0], cuts[1], cuts[2], cuts[3]];
    four.sort();
    let [a, b, c, d] = four.map(|n| Dyadic::q(n, 16));
    let gamma = random_f_in(rng, &a, &d, 8)?;
    Ok((gamma, [a, b, c, d]))
}

/// `zeta^n`, `1 <= n <= 3`, conjugated by a random element of T. Positive
/// powers keep the orbits moving counterclockwise, so hop points exist.
pub fn random_zeta_conjugate<R: Rng>(rng: &mut R) -> PLMap {
    let n = rng.gen_range(1..=3);
    zeta().to_circle().pow(n).conjugate(&random_t(rng, 6))
}

/// A valid conjugator instance built from conjugates of `zeta`.
pub fn random_conjugator_spec<R: Rng>(rng: &mut R) -> Result<ConjugatorSpec> {
    let k = rng.gen_range(1..=4);
    let mu = random_zeta_conjugate(rng);
    let nu = random_zeta_conjugate(rng);
    let p = find_hop_point(&mu, k + 3)?;
    let q = find_hop_point(&nu, k + 3)?;
    let HopOutcome::Admits(cert) = admits_hops(&nu, &q, k + 3)? else {
        unreachable!("find_hop_point returned a hop point")
    };
    let mut t: Vec<i64> = (1..16).collect();
    t.shuffle(rng);
    let (t1, t2) = (t[0].min(t[1]), t[0].max(t[1]));
    let r = circ_interp(&cert.orbit[k + 1], &q, &Dyadic::q(t1, 16))?;
    let s = circ_interp(&cert.orbit[k + 1], &q, &Dyadic::q(t2, 16))?;
    Ok(ConjugatorSpec { mu, nu, k, p, q, r, s })
}
