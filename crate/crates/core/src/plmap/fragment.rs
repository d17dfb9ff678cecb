//! Thompson-like maps between dyadic intervals and arcs.
//!
//! A [`PlFragment`] is an increasing PL bijection `[lo, hi] -> [ylo, yhi]`
//! between real intervals of length at most one. Circle arcs are handled
//! through lifts: an arc starting at `a` is the real interval starting at the
//! representative of `a`, possibly running past 1.

use num_bigint::BigInt;

use super::{Carrier, PLMap};
use crate::dyadic::{CirclePoint, Dyadic};
use crate::error::{Error, Result};

/// A lifted arc `[lo, hi]` with `lo < hi <= lo + 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DyadicArc {
    lo: Dyadic,
    hi: Dyadic,
}

impl DyadicArc {
    pub fn new(lo: Dyadic, hi: Dyadic) -> Result<Self> {
        if hi <= lo {
            return Err(Error::DegenerateArc(format!("[{lo}, {hi}] is empty")));
        }
        if &hi - &lo > Dyadic::one() {
            return Err(Error::DegenerateArc(format!("[{lo}, {hi}] is longer than the circle")));
        }
        Ok(DyadicArc { lo, hi })
    }

    /// The counterclockwise arc from `a` to `b`.
    pub fn ccw(a: &CirclePoint, b: &CirclePoint) -> Result<Self> {
        if a == b {
            return Err(Error::DegenerateArc(format!("arc endpoints coincide at {a}")));
        }
        let lo = a.pos().clone();
        let hi = &lo + &a.ccw_dist(b);
        Ok(DyadicArc { lo, hi })
    }

    /// The whole circle, cut open at `a`.
    pub fn full_from(a: &CirclePoint) -> Self {
        DyadicArc { lo: a.pos().clone(), hi: a.pos() + &Dyadic::one() }
    }

    pub fn unit() -> Self {
        DyadicArc { lo: Dyadic::zero(), hi: Dyadic::one() }
    }

    pub fn lo(&self) -> &Dyadic {
        &self.lo
    }

    pub fn hi(&self) -> &Dyadic {
        &self.hi
    }

    pub fn len(&self) -> Dyadic {
        &self.hi - &self.lo
    }

    pub fn is_full(&self) -> bool {
        self.len() == Dyadic::one()
    }

    pub fn start(&self) -> CirclePoint {
        CirclePoint::new(&self.lo)
    }

    pub fn end(&self) -> CirclePoint {
        CirclePoint::new(&self.hi)
    }

    /// The representative of `x` (mod 1) in `[lo, lo + 1)`.
    pub fn lift(&self, x: &Dyadic) -> Dyadic {
        &self.lo + &(x - &self.lo).fract()
    }

    pub fn contains(&self, x: &CirclePoint, closed: bool) -> bool {
        let l = self.lift(x.pos());
        if closed {
            l <= self.hi || (self.is_full())
        } else {
            l > self.lo && l < self.hi
        }
    }

    /// Same arc, lifted by an integer.
    pub fn shifted(&self, n: &BigInt) -> DyadicArc {
        let d = Dyadic::from(n.clone());
        DyadicArc { lo: &self.lo + &d, hi: &self.hi + &d }
    }

    /// Greedy left-to-right decomposition into maximal standard dyadic
    /// intervals `[a/2^j, (a+1)/2^j]`, returned as `(start, j)`.
    pub fn standard_decomposition(&self) -> Vec<(Dyadic, i64)> {
        let mut out = Vec::new();
        let mut x = self.lo.clone();
        while x < self.hi {
            let align = x.exp() as i64;
            let fit = -(&self.hi - &x).floor_log2();
            let j = align.max(fit).max(0);
            let next = &x + &Dyadic::pow2(-j);
            out.push((x, j));
            x = next;
        }
        out
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PlFragment {
    xs: Vec<Dyadic>,
    ys: Vec<Dyadic>,
    slopes: Vec<i64>,
}

impl PlFragment {
    /// Validates strictly increasing points with power-of-two slopes and
    /// drops points interior to a single affine piece.
    pub fn new(points: Vec<(Dyadic, Dyadic)>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::invalid("a fragment needs at least two points"));
        }
        let mut xs: Vec<Dyadic> = Vec::with_capacity(points.len());
        let mut ys: Vec<Dyadic> = Vec::with_capacity(points.len());
        let mut slopes: Vec<i64> = Vec::with_capacity(points.len());
        for (x, y) in points {
            if let (Some(px), Some(py)) = (xs.last(), ys.last()) {
                if x <= *px || y <= *py {
                    return Err(Error::invalid(format!("points ({px}, {py}) and ({x}, {y}) are not increasing")));
                }
                let k = (&y - py)
                    .log2_ratio(&(&x - px))
                    .ok_or_else(|| Error::invalid(format!("slope between {px} and {x} is not a power of two")))?;
                if slopes.last() == Some(&k) {
                    xs.pop();
                    ys.pop();
                } else {
                    slopes.push(k);
                }
            }
            xs.push(x);
            ys.push(y);
        }
        let dom = xs.last().unwrap() - &xs[0];
        let ran = ys.last().unwrap() - &ys[0];
        if dom > Dyadic::one() || ran > Dyadic::one() {
            return Err(Error::invalid("fragment longer than the circle"));
        }
        Ok(PlFragment { xs, ys, slopes })
    }

    pub fn domain(&self) -> DyadicArc {
        DyadicArc { lo: self.xs[0].clone(), hi: self.xs.last().unwrap().clone() }
    }

    pub fn range(&self) -> DyadicArc {
        DyadicArc { lo: self.ys[0].clone(), hi: self.ys.last().unwrap().clone() }
    }

    pub fn points(&self) -> impl Iterator<Item = (&Dyadic, &Dyadic)> {
        self.xs.iter().zip(&self.ys)
    }

    pub fn slopes(&self) -> &[i64] {
        &self.slopes
    }

    /// Evaluates at a real `x` in the domain.
    pub fn eval(&self, x: &Dyadic) -> Option<Dyadic> {
        if *x < self.xs[0] || x > self.xs.last().unwrap() {
            return None;
        }
        let i = (self.xs.partition_point(|v| v <= x) - 1).min(self.slopes.len() - 1);
        Some(&self.ys[i] + &(x - &self.xs[i]).mul_pow2(self.slopes[i]))
    }

    pub fn eval_point(&self, x: &CirclePoint) -> Option<CirclePoint> {
        let dom = self.domain();
        let l = dom.lift(x.pos());
        self.eval(&l).map(|y| CirclePoint::new(&y))
    }

    pub fn inverse(&self) -> PlFragment {
        PlFragment { xs: self.ys.clone(), ys: self.xs.clone(), slopes: self.slopes.iter().map(|k| -k).collect() }
    }

    /// Shifts domain and range by integers.
    pub fn shifted(&self, dx: &BigInt, dy: &BigInt) -> PlFragment {
        let dx = Dyadic::from(dx.clone());
        let dy = Dyadic::from(dy.clone());
        PlFragment {
            xs: self.xs.iter().map(|x| x + &dx).collect(),
            ys: self.ys.iter().map(|y| y + &dy).collect(),
            slopes: self.slopes.clone(),
        }
    }

    /// `x -> (x self) next`; the range of `self` must coincide with the domain
    /// of `next` modulo 1.
    pub fn then(&self, next: &PlFragment) -> Result<PlFragment> {
        let r = self.range();
        let d = next.domain();
        let shift = d.lo() - r.lo();
        if !shift.is_integer() || d.hi() - r.hi() != shift {
            return Err(Error::precondition(format!(
                "cannot compose: range [{}, {}] does not match domain [{}, {}]",
                r.lo(),
                r.hi(),
                d.lo(),
                d.hi()
            )));
        }
        let inv = self.inverse();
        let mut cands: Vec<Dyadic> = self.xs.clone();
        for b in &next.xs {
            cands.push(inv.eval(&(b - &shift)).expect("breakpoint inside the matched range"));
        }
        cands.sort();
        cands.dedup();
        let pts = cands
            .into_iter()
            .map(|x| {
                let y = next.eval(&(&self.eval(&x).unwrap() + &shift)).unwrap();
                (x, y)
            })
            .collect();
        PlFragment::new(pts)
    }

    /// Concatenates `next` after `self`, shifting `next` by integers so the
    /// endpoints meet.
    pub fn join(&self, next: &PlFragment) -> Result<PlFragment> {
        let dx = self.xs.last().unwrap() - &next.xs[0];
        let dy = self.ys.last().unwrap() - &next.ys[0];
        if !dx.is_integer() || !dy.is_integer() {
            return Err(Error::precondition("fragments do not meet end to start"));
        }
        let next = next.shifted(&dx.floor(), &dy.floor());
        let pts = self.points().chain(next.points().skip(1)).map(|(x, y)| (x.clone(), y.clone()));
        PlFragment::new(pts.collect())
    }

    /// The identity on an arc.
    pub fn identity_on(arc: &DyadicArc) -> PlFragment {
        PlFragment::new(vec![(arc.lo().clone(), arc.lo().clone()), (arc.hi().clone(), arc.hi().clone())])
            .expect("nondegenerate arc")
    }

    /// Post-composes a circle map.
    pub fn then_map(&self, g: &PLMap) -> PlFragment {
        self.then(&g.restrict(&self.range())).expect("restriction matches range")
    }

    /// True iff both fragments define the same map between the same arcs of
    /// the circle.
    pub fn same_on_circle(&self, other: &PlFragment) -> bool {
        if self.xs != other.xs || self.slopes != other.slopes {
            return false;
        }
        let d = &other.ys[0] - &self.ys[0];
        d.is_integer() && self.ys.iter().zip(&other.ys).all(|(a, b)| b - a == d)
    }
}

impl std::fmt::Debug for PlFragment {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "PlFragment(")?;
        for (i, (x, y)) in self.points().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{x}->{y}")?;
        }
        write!(f, ")")
    }
}

/// The canonical Thompson-like bijection between two arcs.
///
/// Both arcs are decomposed greedily into maximal standard dyadic intervals;
/// while the counts differ, the largest interval (leftmost on ties) of the
/// side with fewer intervals is halved; the `i`-th source interval is then
/// mapped affinely onto the `i`-th target interval.
pub fn thompson_like_map(src: &DyadicArc, dst: &DyadicArc) -> PlFragment {
    let mut a = src.standard_decomposition();
    let mut b = dst.standard_decomposition();
    while a.len() != b.len() {
        let side = if a.len() < b.len() { &mut a } else { &mut b };
        let (idx, _) = side
            .iter()
            .enumerate()
            .min_by(|(i, x), (j, y)| x.1.cmp(&y.1).then(i.cmp(j)))
            .expect("nonempty decomposition");
        let (start, j) = side[idx].clone();
        let mid = &start + &Dyadic::pow2(-(j + 1));
        side[idx] = (start, j + 1);
        side.insert(idx + 1, (mid, j + 1));
    }
    let mut pts: Vec<(Dyadic, Dyadic)> = a.into_iter().zip(b).map(|((x, _), (y, _))| (x, y)).collect();
    pts.push((src.hi().clone(), dst.hi().clone()));
    PlFragment::new(pts).expect("standard intervals pair with power-of-two slopes")
}

pub(super) fn patch(carrier: Carrier, fragments: &[PlFragment]) -> Result<PLMap> {
    if fragments.is_empty() {
        return Err(Error::precondition("no fragments to patch"));
    }
    let mut doms: Vec<DyadicArc> = fragments.iter().map(|f| f.domain()).collect();
    doms.sort_by_key(|a| a.lo().fract());
    let total = doms.iter().fold(Dyadic::zero(), |acc, d| &acc + &d.len());
    if total != Dyadic::one() {
        return Err(Error::precondition(format!("fragment domains have total length {total}, not 1")));
    }
    for i in 0..doms.len() {
        let next = &doms[(i + 1) % doms.len()];
        if !(doms[i].hi() - next.lo()).is_integer() {
            return Err(Error::precondition(format!(
                "fragment domains do not tile: gap or overlap between {} and {}",
                doms[i].hi(),
                next.lo()
            )));
        }
    }
    let pts = fragments.iter().flat_map(|f| f.points().map(|(x, y)| (x.clone(), y.clone())));
    PLMap::from_points(carrier, pts.collect::<Vec<_>>())
}

pub(super) fn transport(g: &PLMap, tau: &PlFragment) -> Result<PLMap> {
    let dom = tau.domain();
    if !dom.is_full() {
        let outside = DyadicArc { lo: dom.hi().clone(), hi: dom.lo() + &Dyadic::one() };
        if !g.is_identity_on(&outside) {
            return Err(Error::precondition("map is not supported inside the transport domain"));
        }
    }
    let inner = tau.inverse().then(&g.restrict(&dom))?.then(tau)?;
    let ran = tau.range();
    let carrier =
        if g.carrier() == Carrier::Interval && ran == DyadicArc::unit() { Carrier::Interval } else { Carrier::Circle };
    if ran.is_full() {
        return PLMap::from_points(carrier, inner.points().map(|(x, y)| (x.clone(), y.clone())).collect::<Vec<_>>());
    }
    let rest_lo = ran.hi().clone();
    let rest_hi = ran.lo() + &Dyadic::one();
    let rest = PlFragment::identity_on(&DyadicArc { lo: rest_lo, hi: rest_hi });
    patch(carrier, &[inner, rest])
}
