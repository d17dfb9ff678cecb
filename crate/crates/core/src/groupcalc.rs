//! Standard elements and group-level queries.

use num_rational::Ratio;
use serde::Serialize;

use crate::dyadic::{CirclePoint, Dyadic};
use crate::error::{Error, Result};
use crate::plmap::{thompson_like_map, Carrier, DyadicArc, OpenArc, PLMap, PlFragment};
use crate::treepair::{BinaryWord, TreePair};

fn pair(s: &str) -> TreePair {
    s.parse().expect("built-in tree pair")
}

pub fn x0() -> PLMap {
    pair("(00,01,1)->(0,10,11)").to_plmap()
}

pub fn x1() -> PLMap {
    pair("(0,100,101,11)->(0,10,110,111)").to_plmap()
}

/// `x_n`, with `x_{n+1} = x_n^{x_0}` for `n >= 1`.
pub fn x_n(n: usize) -> PLMap {
    if n == 0 {
        return x0();
    }
    let a = x0();
    (1..n).fold(x1(), |acc, _| acc.conjugate(&a))
}

pub fn zeta() -> PLMap {
    pair("(00,01,10,11)->(0,100,101,11)").to_plmap()
}

/// Tree pair of the standard torsion element of rotation number `1/n`.
///
/// `n = 2` and `n = 3` give `(0,1)->(1,0)` and `(0,10,11)->(10,11,0)`; larger
/// `n` use the leaves `00, 01, 10, 110, ..., 1^(n-3)0, 1^(n-2)`, each sent to
/// the next one and the last to `00`.
pub fn torsion_rep_pair(n: usize) -> Result<TreePair> {
    match n {
        0 | 1 => Err(Error::precondition(format!("no torsion representative of order {n}"))),
        2 => Ok(pair("(0,1)->(1,0)")),
        3 => Ok(pair("(0,10,11)->(10,11,0)")),
        _ => {
            let w = |s: String| s.parse::<BinaryWord>().expect("binary word");
            let mut leaves = vec![w("00".into()), w("01".into())];
            for j in 1..=n - 3 {
                leaves.push(w(format!("{}0", "1".repeat(j))));
            }
            leaves.push(w("1".repeat(n - 2)));
            let pairs = (0..n).map(|i| (leaves[i].clone(), leaves[(i + 1) % n].clone())).collect();
            TreePair::from_pairs(pairs)
        }
    }
}

pub fn torsion_rep(n: usize) -> Result<PLMap> {
    Ok(torsion_rep_pair(n)?.to_plmap())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Group {
    F,
    T,
    /// Elements of F supported in the closed interval.
    FBox(DyadicArc),
    /// Elements of T supported in the closed arc.
    TBox(DyadicArc),
}

pub fn is_member(f: &PLMap, group: &Group) -> bool {
    let inside = |arc: &DyadicArc| {
        if arc.is_full() {
            f.fixed_points().contains(&arc.lo().to_rational())
        } else {
            f.support().within(&[OpenArc::from_dyadic(arc.lo(), arc.hi())])
        }
    };
    match group {
        Group::T => true,
        Group::F => f.fixes_zero(),
        Group::FBox(arc) => f.fixes_zero() && *arc.lo() >= Dyadic::zero() && *arc.hi() <= Dyadic::one() && inside(arc),
        Group::TBox(arc) => inside(arc),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase", tag = "kind", content = "value")]
pub enum Order {
    Finite(u64),
    Infinite,
    /// No verdict within the bound.
    Unknown(u64),
}

pub const DEFAULT_ORDER_BOUND: u64 = 4096;

/// The order of `f`. A nontrivial power with a fixed point proves infinite
/// order, since a finite-order circle homeomorphism with a fixed point is
/// the identity.
pub fn order_of(f: &PLMap, bound: u64) -> Order {
    let mut g = f.clone();
    for m in 1..=bound {
        if g.is_identity() {
            return Order::Finite(m);
        }
        if !g.fixed_points().is_empty() {
            return Order::Infinite;
        }
        g = g.then(f);
    }
    Order::Unknown(bound)
}

/// The rotation number `k/n` of a finite-order element, read off the orbit
/// of its smallest breakpoint (of 0 for rotations).
pub fn rotation_number(f: &PLMap, bound: u64) -> Option<Ratio<u64>> {
    if f.is_identity() {
        return Some(Ratio::from_integer(0));
    }
    if !matches!(order_of(f, bound), Order::Finite(_)) {
        return None;
    }
    let seed = CirclePoint::new(f.breakpoints().first().unwrap_or(&Dyadic::zero()));
    let mut orbit = vec![seed.clone()];
    let mut y = f.eval_point(&seed);
    while y != seed {
        orbit.push(y.clone());
        y = f.eval_point(&y);
    }
    let image = &orbit[1];
    let k = orbit.iter().filter(|z| seed.ccw_dist(z) < seed.ccw_dist(image)).count();
    Some(Ratio::new(k as u64, orbit.len() as u64))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HopCertificate {
    pub base: CirclePoint,
    pub k: usize,
    /// `p, p f, ..., p f^k`.
    pub orbit: Vec<CirclePoint>,
}

impl HopCertificate {
    /// The fundamental domain `[p f^i, p f^(i+1))` as a lifted arc.
    pub fn domain(&self, i: usize) -> DyadicArc {
        DyadicArc::ccw(&self.orbit[i], &self.orbit[i + 1]).expect("orbit points are distinct")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HopOutcome {
    Admits(HopCertificate),
    /// The open arcs `i` and `j` overlap; the pair with smallest `j`, then
    /// smallest `i`.
    Overlap {
        i: usize,
        j: usize,
    },
}

/// Whether the open arcs `(p f^i, p f^(i+1))`, `0 <= i < k`, are pairwise
/// disjoint. They are laid end to end counterclockwise, so this holds iff
/// their total length is at most 1.
pub fn admits_hops(f: &PLMap, p: &CirclePoint, k: usize) -> Result<HopOutcome> {
    if f.eval_point(p) == *p {
        return Err(Error::precondition(format!("{p} is fixed, so it has no hops")));
    }
    let mut orbit = vec![p.clone()];
    let mut total = Dyadic::zero();
    for j in 0..k {
        let next = f.eval_point(&orbit[j]);
        total += &orbit[j].ccw_dist(&next);
        if total > Dyadic::one() {
            return Ok(HopOutcome::Overlap { i: 0, j });
        }
        orbit.push(next);
    }
    Ok(HopOutcome::Admits(HopCertificate { base: p.clone(), k, orbit }))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FactorOrder {
    /// `gamma = alpha beta`
    AlphaBeta,
    /// `gamma = beta alpha`
    BetaAlpha,
}

#[derive(Debug, Clone)]
pub struct Factorisation {
    pub alpha: PLMap,
    pub beta: PLMap,
    pub order: FactorOrder,
}

impl Factorisation {
    pub fn product(&self) -> PLMap {
        match self.order {
            FactorOrder::AlphaBeta => self.alpha.then(&self.beta),
            FactorOrder::BetaAlpha => self.beta.then(&self.alpha),
        }
    }
}

/// Splits `gamma` in `F_[a,d]` into `alpha` in `F_[a,c]` and `beta` in
/// `F_[b,d]`.
///
/// With `e = b gamma^-1 < c`, `alpha` agrees with `gamma` on `[a, e]` and
/// maps `[e, c]` onto `[b, c]`, giving `gamma = alpha beta`. If `e >= c` no
/// such product exists, and the same construction applied to `gamma^-1`
/// yields `gamma = beta alpha` instead.
pub fn factor_over_cover(gamma: &PLMap, a: &Dyadic, b: &Dyadic, c: &Dyadic, d: &Dyadic) -> Result<Factorisation> {
    if !(Dyadic::zero() <= *a && a < b && b < c && c < d && *d <= Dyadic::one()) {
        return Err(Error::precondition(format!("need 0 <= a < b < c < d <= 1, got {a}, {b}, {c}, {d}")));
    }
    let box_ad = DyadicArc::new(a.clone(), d.clone())?;
    if !is_member(gamma, &Group::FBox(box_ad)) {
        return Err(Error::precondition(format!("element is not supported in [{a}, {d}]")));
    }
    let gamma = gamma.to_interval()?;
    let e = gamma.lift_inv(b);
    if e < *c {
        let alpha = left_factor(&gamma, a, b, c, &e)?;
        let beta = alpha.inverse().then(&gamma);
        Ok(Factorisation { alpha, beta, order: FactorOrder::AlphaBeta })
    } else {
        let inv = gamma.inverse();
        let e = inv.lift_inv(b);
        let alpha = left_factor(&inv, a, b, c, &e)?;
        let beta = alpha.inverse().then(&inv);
        Ok(Factorisation { alpha: alpha.inverse(), beta: beta.inverse(), order: FactorOrder::BetaAlpha })
    }
}

fn left_factor(g: &PLMap, a: &Dyadic, b: &Dyadic, c: &Dyadic, e: &Dyadic) -> Result<PLMap> {
    let mut frags = Vec::new();
    if a.is_positive() {
        frags.push(PlFragment::identity_on(&DyadicArc::new(Dyadic::zero(), a.clone())?));
    }
    frags.push(g.restrict(&DyadicArc::new(a.clone(), e.clone())?));
    frags.push(thompson_like_map(&DyadicArc::new(e.clone(), c.clone())?, &DyadicArc::new(b.clone(), c.clone())?));
    if *c < Dyadic::one() {
        frags.push(PlFragment::identity_on(&DyadicArc::new(c.clone(), Dyadic::one())?));
    }
    PLMap::patch(Carrier::Interval, &frags)
}

/// The canonical Thompson-like map from `(0, 1)` onto `arc`.
pub fn box_tau(arc: &DyadicArc) -> PlFragment {
    thompson_like_map(&DyadicArc::unit(), arc)
}

/// A Thompson-like map from `(0, 1)` onto `arc` sending `1/2` to `mid`.
pub fn box_tau_through(arc: &DyadicArc, mid: &CirclePoint) -> Result<PlFragment> {
    let (lo, hi) = (arc.start(), arc.end());
    if !crate::dyadic::circ_between(&lo, mid, &hi)? {
        return Err(Error::precondition(format!("{mid} is not inside the arc")));
    }
    let half = Dyadic::q(1, 2);
    let left = thompson_like_map(&DyadicArc::new(Dyadic::zero(), half.clone())?, &DyadicArc::ccw(&lo, mid)?);
    let right = thompson_like_map(&DyadicArc::new(half, Dyadic::one())?, &DyadicArc::ccw(mid, &hi)?);
    left.join(&right)
}

/// Conjugates of `gens` (elements of F) into the box over `arc`.
pub fn box_generators(arc: &DyadicArc, gens: &[PLMap]) -> Result<Vec<PLMap>> {
    let tau = box_tau(arc);
    gens.iter().map(|g| g.transport(&tau)).collect()
}
