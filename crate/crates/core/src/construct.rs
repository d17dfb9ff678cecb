//! Executable versions of the conjugator, the infinite-order pipeline and
//! the finite-order generator data.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::dyadic::{circ_between, circ_interp, in_cyclic_order, CirclePoint, Dyadic};
use crate::error::{Error, Result};
use crate::groupcalc::{admits_hops, box_tau_through, order_of, torsion_rep, x0, x1, zeta, HopOutcome, Order};
use crate::plmap::{thompson_like_map, Carrier, DyadicArc, OpenArc, PLMap, PlFragment, Rat};
use crate::treepair::TreePair;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

/// An ordered list of named pass/fail checks.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn push(&mut self, name: impl Into<String>, passed: bool, detail: Option<String>) {
        self.checks.push(Check { name: name.into(), passed, detail });
    }

    pub fn check(&mut self, name: impl Into<String>, passed: bool) {
        self.push(name, passed, None);
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.passed).collect()
    }

    pub fn extend(&mut self, prefix: &str, other: Report) {
        for c in other.checks {
            self.checks.push(Check { name: format!("{prefix}{}", c.name), ..c });
        }
    }
}

fn rat_fract(r: &Rat) -> Rat {
    r - r.floor()
}

fn rat_ccw(a: &Rat, b: &Rat) -> Rat {
    rat_fract(&(b - a))
}

/// The open arc from `lo` counterclockwise to `hi`; the whole circle minus
/// a point when they coincide.
pub fn rat_arc(lo: &Rat, hi: &Rat) -> OpenArc {
    let lo = rat_fract(lo);
    let mut len = rat_ccw(&lo, hi);
    if len.is_zero() {
        len = Rat::one();
    }
    let hi = &lo + len;
    OpenArc::new(lo, hi)
}

pub fn dy_arc(lo: &CirclePoint, hi: &CirclePoint) -> OpenArc {
    rat_arc(&lo.pos().to_rational(), &hi.pos().to_rational())
}

/// Cyclic order for rational points, with the same contract as
/// [`in_cyclic_order`].
pub fn rat_cyclic(points: &[Rat]) -> bool {
    let n = points.len();
    if n < 2 {
        return true;
    }
    let mut total = Rat::zero();
    for i in 0..n {
        let d = rat_ccw(&points[i], &points[(i + 1) % n]);
        if d.is_zero() {
            return false;
        }
        total += d;
    }
    total == Rat::one()
}

/// `n` dyadic points strictly inside `arc`, evenly spread over the
/// coarsest dyadic grid that has at least `n` points there.
pub fn sample_points(arc: &OpenArc, n: usize) -> Vec<Dyadic> {
    if n == 0 {
        return Vec::new();
    }
    for level in 1u32.. {
        let scale = Rat::from_integer(BigInt::one() << level);
        let first = (&arc.lo * &scale).floor().to_integer() + 1;
        let last = (&arc.hi * &scale).ceil().to_integer() - 1;
        if last < first {
            continue;
        }
        let count: BigInt = &last - &first + 1;
        if count < BigInt::from(n) {
            continue;
        }
        return (0..n)
            .map(|i| {
                let j: BigInt = &first + Integer::div_floor(&(&count * BigInt::from(i)), &BigInt::from(n));
                Dyadic::new(j, level).fract()
            })
            .collect();
    }
    unreachable!()
}

/// True iff the open arcs cover the circle, by a greedy sweep starting at 0.
pub fn covers_circle(arcs: &[DyadicArc]) -> bool {
    let zero = CirclePoint::zero();
    let Some(first) = arcs.iter().find(|a| a.contains(&zero, false)) else {
        return false;
    };
    let u = first.start().ccw_dist(&zero);
    let mut reach = &first.len() - &u;
    let target = &Dyadic::one() - &u;
    for _ in 0..=arcs.len() {
        if reach > target {
            return true;
        }
        let e = CirclePoint::new(&reach);
        let best = arcs.iter().filter(|a| a.contains(&e, false)).map(|a| &a.len() - &a.start().ccw_dist(&e)).max();
        match best {
            Some(ext) => reach = &reach + &ext,
            None => return false,
        }
    }
    reach > target
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConjugatorSpec {
    pub mu: PLMap,
    pub nu: PLMap,
    pub k: usize,
    pub p: CirclePoint,
    pub q: CirclePoint,
    pub r: CirclePoint,
    pub s: CirclePoint,
}

fn hop_orbit(f: &PLMap, x: &CirclePoint, k: usize, name: &str) -> Result<Vec<CirclePoint>> {
    match admits_hops(f, x, k)? {
        HopOutcome::Admits(cert) => Ok(cert.orbit),
        HopOutcome::Overlap { i, j } => {
            Err(Error::precondition(format!("{name} does not admit {k} hops at {x}: arcs {i} and {j} overlap")))
        }
    }
}

impl ConjugatorSpec {
    /// Orbits `p mu^i` and `q nu^i` for `0 <= i <= k + 3`, after checking
    /// the hop and placement conditions.
    fn validate(&self) -> Result<(Vec<CirclePoint>, Vec<CirclePoint>)> {
        if self.k < 1 {
            return Err(Error::precondition("k must be at least 1"));
        }
        let pm = hop_orbit(&self.mu, &self.p, self.k + 3, "mu")?;
        let qn = hop_orbit(&self.nu, &self.q, self.k + 3, "nu")?;
        let chain = [qn[self.k + 1].clone(), self.r.clone(), self.s.clone(), self.q.clone()];
        if !in_cyclic_order(&chain) {
            return Err(Error::precondition(format!(
                "[r, s] = [{}, {}] is not inside the arc ({}, {})",
                self.r,
                self.s,
                qn[self.k + 1],
                self.q
            )));
        }
        Ok((pm, qn))
    }
}

fn arc(a: &CirclePoint, b: &CirclePoint) -> Result<DyadicArc> {
    DyadicArc::ccw(a, b)
}

/// Builds `gamma` with `mu^gamma = nu` on `[q, q nu^k]` and
/// `q nu^(k+1) < r < s < r mu^gamma < s mu^gamma < q` circularly.
pub fn construct_conjugator(spec: &ConjugatorSpec) -> Result<PLMap> {
    let (pm, qn) = spec.validate()?;
    let k = spec.k;
    let mu_inv = spec.mu.inverse();
    let mut frags: Vec<PlFragment> = vec![thompson_like_map(&arc(&pm[0], &pm[1])?, &arc(&qn[0], &qn[1])?)];
    for i in 1..=k {
        let prev = frags.last().expect("base piece");
        let piece = mu_inv.restrict(&arc(&pm[i], &pm[i + 1])?).then(prev)?.then_map(&spec.nu);
        frags.push(piece);
    }
    let half = Dyadic::q(1, 2);
    let three_q = Dyadic::q(3, 4);
    let m1 = circ_interp(&pm[k + 1], &pm[k + 2], &half)?;
    let m2 = circ_interp(&pm[k + 1], &pm[k + 2], &three_q)?;
    let m1m = spec.mu.eval_point(&m1);
    let m2m = spec.mu.eval_point(&m2);
    let n1 = circ_interp(&spec.s, &spec.q, &half)?;
    let n2 = circ_interp(&spec.s, &spec.q, &three_q)?;
    let src = [&pm[k + 1], &m1, &m2, &m1m, &m2m, &pm[0]];
    let dst = [&qn[k + 1], &spec.r, &spec.s, &n1, &n2, &spec.q];
    for i in 0..5 {
        frags.push(thompson_like_map(&arc(src[i], src[i + 1])?, &arc(dst[i], dst[i + 1])?));
    }
    PLMap::patch(Carrier::Circle, &frags)
}

/// The two postconditions of [`construct_conjugator`].
pub fn check_conjugator(spec: &ConjugatorSpec, gamma: &PLMap) -> Result<Report> {
    let (_, qn) = spec.validate()?;
    let conj = spec.mu.conjugate(gamma);
    let mut rep = Report::default();
    rep.check("mu^gamma agrees with nu on [q, q nu^k]", conj.agrees_on(&spec.nu, &arc(&qn[0], &qn[spec.k])?));
    let chain = [
        qn[spec.k + 1].clone(),
        spec.r.clone(),
        spec.s.clone(),
        conj.eval_point(&spec.r),
        conj.eval_point(&spec.s),
        spec.q.clone(),
    ];
    rep.check("q nu^(k+1) < r < s < r mu^gamma < s mu^gamma < q", in_cyclic_order(&chain));
    Ok(rep)
}

/// A point of the support of `f` at which it admits `k` hops: breakpoints
/// first, then the simplest dyadic of each support component.
pub fn find_hop_point(f: &PLMap, k: usize) -> Result<CirclePoint> {
    let support = f.support();
    let mut candidates: Vec<Dyadic> =
        f.breakpoints().into_iter().filter(|b| support.contains(&b.to_rational())).collect();
    for a in support.arcs() {
        if let Some(d) = Dyadic::simplest_between(&a.lo, &a.hi) {
            candidates.push(d.fract());
        }
    }
    if support.is_whole() {
        candidates.push(Dyadic::zero());
    }
    for c in candidates {
        let p = CirclePoint::new(&c);
        if let HopOutcome::Admits(_) = admits_hops(f, &p, k)? {
            return Ok(p);
        }
    }
    Err(Error::precondition(format!("no point found at which the element admits {k} hops")))
}

/// The least `n <= bound` for which `alpha^n` has a fixed point.
pub fn power_search(alpha: &PLMap, bound: u64) -> Option<(u64, PLMap)> {
    let mut g = alpha.clone();
    for n in 1..=bound {
        if !g.fixed_points().is_empty() {
            return Some((n, g));
        }
        g = g.then(alpha);
    }
    None
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum FiniteCase {
    A,
    B,
    C(usize),
}

impl std::str::FromStr for FiniteCase {
    type Err = Error;

    /// `a`, `b` or `c:<p>`.
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "a" => Ok(FiniteCase::A),
            "b" => Ok(FiniteCase::B),
            _ => match s.strip_prefix("c:") {
                Some(p) => p
                    .parse()
                    .map(FiniteCase::C)
                    .map_err(|_| Error::parse(2, format!("expected a prime after \"c:\", got {p:?}"))),
                None => Err(Error::parse(0, format!("unknown case {s:?}; expected a, b or c:<p>"))),
            },
        }
    }
}

#[derive(Debug, Clone)]
pub struct FiniteData {
    pub case: FiniteCase,
    pub alpha: PLMap,
    pub kappa0: PLMap,
    pub kappa1: PLMap,
    /// Case c only: the map `(0, 7/8) -> (0, 1)` and the transported pair.
    pub tau: Option<PlFragment>,
    pub kappa_tau: Option<(PLMap, PLMap)>,
}

fn is_prime(p: usize) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

pub fn case_c_tau() -> PlFragment {
    PlFragment::new(vec![
        (Dyadic::zero(), Dyadic::zero()),
        (Dyadic::q(3, 4), Dyadic::q(3, 4)),
        (Dyadic::q(7, 8), Dyadic::one()),
    ])
    .expect("valid fragment")
}

pub fn case_b_alpha() -> PLMap {
    "(0,10,11)->(10,11,0)".parse::<TreePair>().expect("valid pair").to_plmap()
}

/// The torsion element and the pair `kappa0, kappa1` of each case.
pub fn prop_finite_data(case: FiniteCase) -> Result<FiniteData> {
    let z = zeta();
    match case {
        FiniteCase::A => {
            let alpha = PLMap::rotation(&Dyadic::q(1, 2));
            let by = alpha.then(&z).pow(2);
            let kappa1 = z.conjugate(&by).to_interval()?;
            Ok(FiniteData { case, alpha, kappa0: z, kappa1, tau: None, kappa_tau: None })
        }
        FiniteCase::B => {
            let alpha = case_b_alpha();
            let kappa1 = z.conjugate(&alpha).to_interval()?;
            Ok(FiniteData { case, alpha, kappa0: z, kappa1, tau: None, kappa_tau: None })
        }
        FiniteCase::C(p) => {
            if p < 5 || !is_prime(p) {
                return Err(Error::precondition(format!("case c needs a prime p >= 5, got {p}")));
            }
            let alpha = torsion_rep(p)?;
            let kappa1 = z.conjugate(&alpha).to_interval()?;
            let tau = case_c_tau();
            let k0 = z.transport(&tau)?.to_interval()?;
            let k1 = kappa1.transport(&tau)?.to_interval()?;
            Ok(FiniteData { case, alpha, kappa0: z, kappa1, tau: Some(tau), kappa_tau: Some((k0, k1)) })
        }
    }
}

/// The open arcs `(lo, hi) alpha^i` for `0 <= i < n`.
pub fn orbit_arcs(alpha: &PLMap, lo: &CirclePoint, hi: &CirclePoint, n: usize) -> Vec<DyadicArc> {
    let mut out = Vec::with_capacity(n);
    let (mut a, mut b) = (lo.clone(), hi.clone());
    for _ in 0..n {
        out.push(if a == b { DyadicArc::full_from(&a) } else { DyadicArc::ccw(&a, &b).expect("distinct") });
        a = alpha.eval_point(&a);
        b = alpha.eval_point(&b);
    }
    out
}

pub const PIPELINE_HOPS: usize = 18;

#[derive(Debug, Clone)]
pub struct PipelineState {
    pub alpha: PLMap,
    pub zeta: PLMap,
    /// Whether `alpha` (resp. `zeta`) was replaced by its inverse.
    pub alpha_inverted: bool,
    pub zeta_inverted: bool,
    pub a: Dyadic,
    /// The support component `(c, d)` of `alpha` containing `a`.
    pub c: Rat,
    pub d: Rat,
    /// `a_i` for `-1 <= i <= 18`; see [`PipelineState::a_i`].
    pub a_orbit: Vec<CirclePoint>,
    /// `b_i` for `0 <= i <= 18`.
    pub b_orbit: Vec<CirclePoint>,
    pub tau: PlFragment,
    pub x0_tau: PLMap,
    pub x1_tau: PLMap,
    pub beta: PLMap,
    pub hop_point: CirclePoint,
    pub r: CirclePoint,
    pub s: CirclePoint,
    pub gamma: PLMap,
    pub zeta_gamma: PLMap,
    pub eta: PLMap,
    pub mu0: PLMap,
    pub mu1: PLMap,
    pub p: CirclePoint,
    pub q: CirclePoint,
    pub cover: Vec<PLMap>,
    pub report: Report,
}

impl PipelineState {
    pub fn a_i(&self, i: i64) -> &CirclePoint {
        &self.a_orbit[(i + 1) as usize]
    }

    pub fn b_i(&self, i: usize) -> &CirclePoint {
        &self.b_orbit[i]
    }

    pub fn cover_arcs(&self) -> Vec<DyadicArc> {
        self.cover
            .iter()
            .map(|d| DyadicArc::ccw(&d.eval_point(&self.p), &d.eval_point(&self.q)).expect("p != q"))
            .collect()
    }
}

fn component_of(f: &PLMap, a: &Dyadic) -> Option<(Rat, Rat)> {
    let x = a.to_rational();
    f.support().arcs().iter().find(|c| c.contains(&x)).map(|c| (c.lo.clone(), c.hi.clone()))
}

fn increasing_at(f: &PLMap, a: &Dyadic, c: &Rat) -> bool {
    let x = a.to_rational();
    let y = f.eval(a).to_rational();
    rat_ccw(c, &y) > rat_ccw(c, &x)
}

/// Picks `a` and the orientation of `alpha` so that `alpha` moves `a`
/// counterclockwise inside its support component.
fn normalise_alpha(alpha: &PLMap, a: Option<&Dyadic>) -> Result<(PLMap, bool, Dyadic, Rat, Rat)> {
    if alpha.fixed_points().is_empty() {
        return Err(Error::precondition("alpha has no fixed point; replace it by a power first (see power_search)"));
    }
    if alpha.is_identity() {
        return Err(Error::precondition("alpha is the identity"));
    }
    let inv = alpha.inverse();
    if let Some(a) = a {
        let a = a.fract();
        let (c, d) = component_of(alpha, &a).ok_or_else(|| Error::precondition(format!("{a} is fixed by alpha")))?;
        return Ok(if increasing_at(alpha, &a, &c) { (alpha.clone(), false, a, c, d) } else { (inv, true, a, c, d) });
    }
    for (f, flipped) in [(alpha, false), (&inv, true)] {
        for b in f.breakpoints() {
            if let Some((c, d)) = component_of(f, &b) {
                if increasing_at(f, &b, &c) {
                    return Ok((f.clone(), flipped, b, c, d));
                }
            }
        }
    }
    Err(Error::precondition("no support component on which alpha or its inverse is increasing"))
}

fn point_in(arc: &OpenArc, x: &Dyadic) -> bool {
    arc.contains(&x.to_rational())
}

/// Runs the infinite-order construction for `alpha` and `zeta`: builds
/// `beta`, the conjugator `gamma`, `eta`, `mu0`, `mu1` and the cover, and
/// records every identity the construction relies on in the report.
pub fn prop_infinite_pipeline(alpha: &PLMap, zeta: &PLMap, a: Option<&Dyadic>) -> Result<PipelineState> {
    if let Order::Finite(n) = order_of(zeta, crate::groupcalc::DEFAULT_ORDER_BOUND) {
        return Err(Error::precondition(format!("zeta has finite order {n}")));
    }
    let (alpha, alpha_inverted, a, c, d) = normalise_alpha(alpha, a)?;
    let alpha = alpha.to_circle();
    let mut rep = Report::default();

    let a_pt = CirclePoint::new(&a);
    let mut a_orbit = vec![alpha.inverse().eval_point(&a_pt), a_pt.clone()];
    for _ in 0..PIPELINE_HOPS {
        let next = alpha.eval_point(a_orbit.last().unwrap());
        a_orbit.push(next);
    }
    let ai = |i: i64| &a_orbit[(i + 1) as usize];
    let hops = matches!(admits_hops(&alpha, &a_pt, PIPELINE_HOPS)?, HopOutcome::Admits(_));
    rep.check("alpha admits 18 hops at a", hops);
    if !hops {
        return Err(Error::precondition(format!("alpha does not admit 18 hops at {a}")));
    }

    let tau = box_tau_through(&arc(ai(8), ai(10))?, ai(9))?;
    let x0_tau = x0().transport(&tau)?;
    let x1_tau = x1().transport(&tau)?;
    let x0_shift = x0_tau.conjugate(&alpha.pow(-2));
    let beta = alpha.then(&x0_shift).then(&x1_tau);
    rep.check("beta agrees with alpha off [a5, a9]", beta.agrees_on(&alpha, &arc(ai(9), ai(5))?));
    let mut b_orbit = vec![a_pt.clone()];
    for _ in 0..PIPELINE_HOPS {
        let next = beta.eval_point(b_orbit.last().unwrap());
        b_orbit.push(next);
    }
    let bi = |i: usize| &b_orbit[i];
    rep.check("b_i = a_i for 0 <= i <= 6", (0..=6).all(|i| bi(i) == ai(i as i64)));
    for i in 7..=17usize {
        let ok = circ_between(ai(i as i64), bi(i), ai(i as i64 + 1))?;
        rep.push(format!("a{i} < b{i} < a{}", i + 1), ok, (!ok).then(|| format!("b{i} = {}", bi(i))));
    }
    let beta_hops = matches!(admits_hops(&beta, &a_pt, PIPELINE_HOPS)?, HopOutcome::Admits(_));
    rep.check("beta admits 18 hops at a", beta_hops);
    if !beta_hops {
        return Err(Error::precondition("beta does not admit 18 hops at a"));
    }

    let r = circ_interp(bi(16), bi(17), &Dyadic::q(1, 2))?;
    let s = circ_interp(ai(-1), ai(0), &Dyadic::q(3, 4))?;
    let zeta = zeta.to_circle();
    let (zeta, zeta_inverted, hop_point) = match find_hop_point(&zeta, PIPELINE_HOPS) {
        Ok(p) => (zeta, false, p),
        Err(_) => {
            let inv = zeta.inverse();
            let p = find_hop_point(&inv, PIPELINE_HOPS)?;
            (inv, true, p)
        }
    };
    let spec = ConjugatorSpec {
        mu: zeta.clone(),
        nu: beta.clone(),
        k: PIPELINE_HOPS - 3,
        p: hop_point.clone(),
        q: a_pt.clone(),
        r: r.clone(),
        s: s.clone(),
    };
    let gamma = construct_conjugator(&spec)?;
    rep.extend("conjugator: ", check_conjugator(&spec, &gamma)?);
    let zg = zeta.conjugate(&gamma);
    let zg_inv = zg.inverse();
    rep.check("zeta^gamma agrees with beta on [b0, b15]", zg.agrees_on(&beta, &arc(bi(0), bi(15))?));

    let alpha_inv = alpha.inverse();
    let eta = alpha_inv.then(&zg);
    rep.check("eta is trivial on [a1, a6]", eta.is_identity_on(&arc(ai(1), ai(6))?));
    rep.check("eta is trivial on [a10, b16]", eta.is_identity_on(&arc(ai(10), bi(16))?));
    rep.check(
        "eta agrees with x0^(tau alpha^-2) x1^tau on [a6, a10]",
        eta.agrees_on(&x0_shift.then(&x1_tau), &arc(ai(6), ai(10))?),
    );
    rep.check("eta agrees with x1^tau on [a8, a10]", eta.agrees_on(&x1_tau, &arc(ai(8), ai(10))?));
    rep.check(
        "supp eta in (a6, a10) u (b16, a1)",
        eta.support().within(&[dy_arc(ai(6), ai(10)), dy_arc(bi(16), ai(1))]),
    );

    let a2 = alpha.pow(2);
    let mu0 = eta.conjugate(&a2).conjugate(&a2.then(&zg).then(&alpha.pow(-3)));
    let mu1 = eta.conjugate(&alpha.pow(-4).then(&zg_inv).then(&alpha.pow(5)));
    rep.check("mu0 agrees with x0^tau on [a8, a10]", mu0.agrees_on(&x0_tau, &arc(ai(8), ai(10))?));
    rep.check("mu1 agrees with x1^tau on [a8, a10]", mu1.agrees_on(&x1_tau, &arc(ai(8), ai(10))?));
    let ar = |x: &CirclePoint| x.pos().to_rational();
    let (s0, s1) = (mu0.support(), mu1.support());
    let ok = s0.within(&[dy_arc(ai(8), ai(12)), rat_arc(&c, &ar(ai(3)))]);
    rep.push("supp mu0 in (a8, a12) u (c, a3)", ok, (!ok).then(|| s0.to_string()));
    let ok = s1.within(&[dy_arc(ai(6), ai(10)), rat_arc(&ar(bi(16)), &c)]);
    rep.push("supp mu1 in (a6, a10) u (b16, c)", ok, (!ok).then(|| s1.to_string()));
    rep.check("supp mu0 and supp mu1 meet inside (a8, a10)", s0.intersection(&s1).within(&[dy_arc(ai(8), ai(10))]));

    // first display
    let b15_c = rat_arc(&ar(bi(15)), &c);
    let b16_c = rat_arc(&ar(bi(16)), &c);
    let c_a1 = rat_arc(&c, &ar(ai(1)));
    let c_a0 = rat_arc(&c, &ar(ai(0)));
    let bad = sample_points(&b15_c, 50).into_iter().find(|y| !point_in(&b16_c, &alpha.eval(y)));
    rep.push("y in (b15, c) implies y alpha in (b16, c)", bad.is_none(), bad.map(|y| format!("y = {y}")));
    let bad = sample_points(&c_a1, 50).into_iter().find(|y| !point_in(&c_a0, &alpha_inv.eval(y)));
    rep.push("y in (c, a1) implies y alpha^-1 in (c, a0)", bad.is_none(), bad.map(|y| format!("y = {y}")));

    // second display
    let b15_r = rat_arc(&ar(bi(15)), &ar(&r));
    let (mut u, mut v) = (bi(17).clone(), ai(-1).clone());
    let (mut bad_u, mut bad_v) = (None, None);
    for i in 0..50 {
        if bad_u.is_none() && !point_in(&c_a0, zg.eval_point(&u).pos()) {
            bad_u = Some(format!("i = {i}"));
        }
        if bad_v.is_none() && !point_in(&b15_r, zg_inv.eval_point(&v).pos()) {
            bad_v = Some(format!("i = {i}"));
        }
        u = alpha.eval_point(&u);
        v = alpha_inv.eval_point(&v);
    }
    rep.push("b17 alpha^i zeta^gamma in (c, a0)", bad_u.is_none(), bad_u);
    rep.push("a-1 alpha^-i (zeta^gamma)^-1 in (b15, r)", bad_v.is_none(), bad_v);

    let chain: Vec<Rat> = [bi(16), &r, bi(17)]
        .into_iter()
        .map(ar)
        .chain([c.clone()])
        .chain([ai(-1), &s, &zg.eval_point(&r), &zg.eval_point(&s), ai(0)].into_iter().map(ar))
        .collect();
    rep.check("b16 < r < b17 < c < a-1 < s < r zeta^gamma < s zeta^gamma < a0", rat_cyclic(&chain));

    let p = circ_interp(ai(8), ai(9), &Dyadic::q(1, 2))?;
    let p_alpha = alpha.eval_point(&p);
    let q = circ_interp(&p_alpha, ai(10), &Dyadic::q(1, 2))?;
    rep.check(
        "a8 < p < a9 < p alpha < q < a10",
        in_cyclic_order(&[ai(8).clone(), p.clone(), ai(9).clone(), p_alpha, q.clone(), ai(10).clone()]),
    );
    let mut cover: Vec<PLMap> = (-10..=9).map(|i| alpha.pow(i)).collect();
    cover.push(alpha.pow(-10).then(&zg_inv));
    cover.push(alpha.pow(-9).then(&zg_inv));
    let arcs: Vec<DyadicArc> =
        cover.iter().map(|d| DyadicArc::ccw(&d.eval_point(&p), &d.eval_point(&q))).collect::<Result<_>>()?;
    let overlapping = (0..19).all(|i| {
        let (x, y) = (&arcs[i], &arcs[i + 1]);
        x.contains(&y.start(), false) || y.contains(&x.start(), false)
    });
    rep.check("consecutive arcs (p, q) alpha^i overlap", overlapping);
    rep.check("the 22 arcs (p, q) delta cover the circle", covers_circle(&arcs));

    Ok(PipelineState {
        alpha,
        zeta,
        alpha_inverted,
        zeta_inverted,
        a,
        c,
        d,
        a_orbit: a_orbit.clone(),
        b_orbit: b_orbit.clone(),
        tau,
        x0_tau,
        x1_tau,
        beta,
        hop_point,
        r,
        s,
        gamma,
        zeta_gamma: zg,
        eta,
        mu0,
        mu1,
        p,
        q,
        cover,
        report: rep,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: u64) -> Dyadic {
        Dyadic::q(n, d)
    }

    fn pt(n: i64, d: u64) -> CirclePoint {
        CirclePoint::new(&q(n, d))
    }

    #[test]
    fn zeta_self_conjugator() {
        let spec = ConjugatorSpec {
            mu: zeta().to_circle(),
            nu: zeta().to_circle(),
            k: 1,
            p: pt(1, 8),
            q: pt(1, 8),
            r: pt(9, 16),
            s: pt(5, 8),
        };
        // 1/8 zeta^2 = 1/2, which is before 9/16
        let g = construct_conjugator(&spec).unwrap();
        let rep = check_conjugator(&spec, &g).unwrap();
        assert!(rep.all_passed(), "{rep:?}");
    }

    #[test]
    fn conjugator_rejects_bad_placement() {
        let spec = ConjugatorSpec {
            mu: zeta().to_circle(),
            nu: zeta().to_circle(),
            k: 1,
            p: pt(1, 8),
            q: pt(1, 8),
            r: pt(1, 4),
            s: pt(5, 8),
        };
        assert!(construct_conjugator(&spec).is_err());
    }

    #[test]
    fn power_search_basics() {
        assert_eq!(power_search(&zeta(), 10).unwrap().0, 1);
        assert_eq!(power_search(&PLMap::rotation(&q(1, 2)), 10).unwrap().0, 2);
        assert!(power_search(&PLMap::rotation(&q(1, 8)), 4).is_none());
    }

    #[test]
    fn sampling_stays_inside() {
        let third = Rat::new(BigInt::from(1), BigInt::from(3));
        let arc = rat_arc(&third, &Rat::new(BigInt::from(1), BigInt::from(2)));
        let pts = sample_points(&arc, 50);
        assert_eq!(pts.len(), 50);
        assert!(pts.iter().all(|x| arc.contains(&x.to_rational())));
        assert!(pts.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn circle_cover() {
        let halves = [DyadicArc::new(q(0, 1), q(1, 1)).unwrap(), DyadicArc::new(q(1, 2), q(3, 2)).unwrap()];
        assert!(covers_circle(&halves));
        let gap = [DyadicArc::new(q(0, 1), q(1, 2)).unwrap(), DyadicArc::new(q(1, 2), q(1, 1)).unwrap()];
        assert!(!covers_circle(&gap));
        let wrap = [DyadicArc::new(q(3, 4), q(5, 4)).unwrap(), DyadicArc::new(q(1, 8), q(7, 8)).unwrap()];
        assert!(covers_circle(&wrap));
    }

    #[test]
    fn finite_cases() {
        let a = prop_finite_data(FiniteCase::A).unwrap();
        assert_eq!(TreePair::from_plmap(&a.kappa1).to_string(), "(00,010,011,100,101,11)->(00,01,100,101,110,111)");
        let b = prop_finite_data(FiniteCase::B).unwrap();
        assert_eq!(b.kappa1, x1());
        let c = prop_finite_data(FiniteCase::C(5)).unwrap();
        assert_eq!(TreePair::from_plmap(&c.kappa1).to_string(), "(00,010,011,10,110,111)->(00,01,10,1100,1101,111)");
        let (k0, k1) = c.kappa_tau.unwrap();
        assert_eq!(k0, zeta());
        assert_eq!(TreePair::from_plmap(&k1).to_string(), "(00,010,011,1)->(00,01,10,11)");
        assert!(prop_finite_data(FiniteCase::C(9)).is_err());
        assert!(prop_finite_data(FiniteCase::C(3)).is_err());
    }

    #[test]
    fn pipeline_x0_zeta() {
        let st = prop_infinite_pipeline(&x0(), &zeta(), Some(&q(1, 4))).unwrap();
        assert!(st.report.all_passed(), "{:#?}", st.report.failures());
    }

    #[test]
    fn pipeline_zeta_zeta() {
        let st = prop_infinite_pipeline(&zeta(), &zeta(), Some(&q(1, 8))).unwrap();
        assert!(st.report.all_passed(), "{:#?}", st.report.failures());
        assert!(!st.alpha_inverted && !st.zeta_inverted);
        assert_eq!(st.cover.len(), 22);
    }

    #[test]
    fn pipeline_needs_a_fixed_point() {
        assert!(prop_infinite_pipeline(&PLMap::rotation(&q(1, 2)), &zeta(), None).is_err());
        let st = prop_infinite_pipeline(&x0().inverse(), &zeta(), None).unwrap();
        assert!(st.alpha_inverted);
        assert!(st.report.all_passed());
    }

    #[test]
    fn case_a_class_counts() {
        let a = prop_finite_data(FiniteCase::A).unwrap();
        let r = crate::core2::build_core_of_maps(&[a.kappa0, a.kappa1]).unwrap();
        assert_eq!(r.initial.count(), 23);
        assert_eq!(r.fixpoint.count(), 4);
        assert!(crate::core2::is_generation_graph(&r.graph));
    }
}
