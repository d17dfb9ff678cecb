//! Fixed sets and supports.
//!
//! Fixed points need not be dyadic: a piece of slope 4 can meet the diagonal
//! at a point with denominator 3. Endpoints are therefore exact rationals.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;

use super::{Carrier, PLMap};
use crate::dyadic::Dyadic;

pub type Rat = BigRational;

fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

fn fract(r: &Rat) -> Rat {
    r - r.floor()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FixedPart {
    Point(Rat),
    /// A closed arc; `hi` may exceed 1 when it wraps past 0 on the circle.
    Arc {
        lo: Rat,
        hi: Rat,
    },
}

impl FixedPart {
    fn lo(&self) -> &Rat {
        match self {
            FixedPart::Point(p) => p,
            FixedPart::Arc { lo, .. } => lo,
        }
    }

    fn hi(&self) -> &Rat {
        match self {
            FixedPart::Point(p) => p,
            FixedPart::Arc { hi, .. } => hi,
        }
    }

    fn span(lo: Rat, hi: Rat) -> FixedPart {
        if lo == hi {
            FixedPart::Point(lo)
        } else {
            FixedPart::Arc { lo, hi }
        }
    }
}

impl fmt::Display for FixedPart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FixedPart::Point(p) => write!(f, "{{{p}}}"),
            FixedPart::Arc { lo, hi } => write!(f, "[{lo}, {hi}]"),
        }
    }
}

/// Fixed points in `[0, 1]` for interval maps (0 and 1 kept apart) or in
/// `[0, 1)` for circle maps, as sorted disjoint parts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FixedSet {
    carrier: Carrier,
    parts: Vec<FixedPart>,
}

impl FixedSet {
    pub fn parts(&self) -> &[FixedPart] {
        &self.parts
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn is_everything(&self) -> bool {
        match self.carrier {
            Carrier::Interval => self.parts == [FixedPart::Arc { lo: rat_int(0), hi: rat_int(1) }],
            Carrier::Circle => {
                matches!(self.parts.as_slice(), [FixedPart::Arc { lo, hi }] if hi - lo == rat_int(1))
            }
        }
    }

    pub fn contains(&self, x: &Rat) -> bool {
        let x = match self.carrier {
            Carrier::Interval if *x >= rat_int(0) && *x <= rat_int(1) => x.clone(),
            _ => fract(x),
        };
        self.parts.iter().any(|p| {
            [rat_int(0), rat_int(-1)].iter().any(|s| {
                let y = &x - s;
                *p.lo() <= y && y <= *p.hi()
            })
        })
    }

    /// The smallest fixed point, if any.
    pub fn first(&self) -> Option<&Rat> {
        self.parts.first().map(|p| p.lo())
    }

    pub fn complement(&self) -> SupportSet {
        match self.carrier {
            Carrier::Interval => {
                let mut arcs = Vec::new();
                for w in self.parts.windows(2) {
                    arcs.push(OpenArc { lo: w[0].hi().clone(), hi: w[1].lo().clone() });
                }
                SupportSet { whole: false, arcs }
            }
            Carrier::Circle => {
                if self.parts.is_empty() {
                    return SupportSet { whole: true, arcs: Vec::new() };
                }
                if self.is_everything() {
                    return SupportSet::empty();
                }
                let n = self.parts.len();
                let mut arcs = Vec::with_capacity(n);
                for i in 0..n {
                    let lo = self.parts[i].hi().clone();
                    let mut hi = self.parts[(i + 1) % n].lo().clone();
                    while hi <= lo {
                        hi += rat_int(1);
                    }
                    let n = lo.floor();
                    arcs.push(OpenArc { lo: &lo - &n, hi: &hi - &n });
                }
                arcs.sort_by_key(|a| fract(&a.lo));
                SupportSet { whole: false, arcs }
            }
        }
    }
}

impl fmt::Display for FixedSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            return write!(f, "{{}}");
        }
        let s: Vec<String> = self.parts.iter().map(|p| p.to_string()).collect();
        write!(f, "{}", s.join(" u "))
    }
}

pub(super) fn fixed_points(map: &PLMap) -> FixedSet {
    let carrier = map.carrier();
    // segment endpoints covering [0, 1]
    let mut xs: Vec<Dyadic> = vec![Dyadic::zero()];
    xs.extend(map.breakpoints().into_iter().filter(|x| !x.is_zero()));
    xs.push(Dyadic::one());
    let mut raw: Vec<FixedPart> = Vec::new();
    for w in xs.windows(2) {
        let (a, b) = (&w[0], &w[1]);
        let (la, lb) = (map.lift(a), map.lift(b));
        let k = map.one_sided_slope(a, super::Side::Right).expect("inside [0, 1)");
        let (ra, rb) = (a.to_rational(), b.to_rational());
        let (fa, fb) = (&la.to_rational() - &ra, &lb.to_rational() - &rb);
        let (mlo, mhi) = if fa <= fb { (fa.clone(), fb.clone()) } else { (fb.clone(), fa.clone()) };
        let mut m = mlo.ceil();
        while m <= mhi {
            if k == 0 {
                raw.push(FixedPart::Arc { lo: ra.clone(), hi: rb.clone() });
            } else {
                // L(x) - x is affine on the segment, taking fa at a and fb at b
                let t = (&m - &fa) / (&fb - &fa);
                let x = &ra + &(&t * &(&rb - &ra));
                raw.push(FixedPart::Point(x));
            }
            m += rat_int(1);
        }
    }
    let mut parts: Vec<FixedPart> = Vec::new();
    for p in raw {
        if let Some(last) = parts.last_mut() {
            if p.lo() <= last.hi() {
                if p.hi() > last.hi() {
                    *last = FixedPart::span(last.lo().clone(), p.hi().clone());
                }
                continue;
            }
        }
        parts.push(p);
    }
    if carrier == Carrier::Circle {
        // 1 is 0 on the circle, so a part ending at 1 joins the first part
        let one = rat_int(1);
        if parts.len() >= 2 && parts.last().unwrap().hi() == &one {
            let last = parts.pop().unwrap();
            let first = parts.remove(0);
            if last.lo() == &one {
                parts.insert(0, first);
            } else {
                parts.push(FixedPart::span(last.lo().clone(), &one + first.hi()));
            }
        }
    }
    FixedSet { carrier, parts }
}

/// An open arc `(lo, hi)` with lifted endpoints, `lo < hi <= lo + 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OpenArc {
    pub lo: Rat,
    pub hi: Rat,
}

impl OpenArc {
    pub fn new(lo: Rat, hi: Rat) -> Self {
        assert!(lo < hi && hi <= &lo + rat_int(1), "open arc ({lo}, {hi}) is degenerate");
        OpenArc { lo, hi }
    }

    pub fn from_dyadic(lo: &Dyadic, hi: &Dyadic) -> Self {
        OpenArc::new(lo.to_rational(), hi.to_rational())
    }

    pub fn contains(&self, x: &Rat) -> bool {
        let y = &self.lo + fract(&(x - &self.lo));
        y > self.lo && y < self.hi
    }

    /// True iff `self` lies inside `other` as subsets of the circle.
    pub fn within(&self, other: &OpenArc) -> bool {
        [-1, 0, 1].iter().any(|s| {
            let s = rat_int(*s);
            &other.lo + &s <= self.lo && self.hi <= &other.hi + &s
        })
    }

    fn intersect(&self, other: &OpenArc) -> Vec<OpenArc> {
        let mut out = Vec::new();
        for s in [-1, 0, 1] {
            let s = rat_int(s);
            let lo = std::cmp::max(self.lo.clone(), &other.lo + &s);
            let hi = std::cmp::min(self.hi.clone(), &other.hi + &s);
            if lo < hi {
                out.push(OpenArc { lo, hi });
            }
        }
        out
    }
}

impl fmt::Display for OpenArc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.lo, self.hi)
    }
}

/// The support of a map: either the whole circle or a union of disjoint open
/// arcs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SupportSet {
    whole: bool,
    arcs: Vec<OpenArc>,
}

impl SupportSet {
    pub fn empty() -> Self {
        SupportSet { whole: false, arcs: Vec::new() }
    }

    pub fn from_arcs(arcs: Vec<OpenArc>) -> Self {
        SupportSet { whole: false, arcs }
    }

    pub fn is_whole(&self) -> bool {
        self.whole
    }

    pub fn is_empty(&self) -> bool {
        !self.whole && self.arcs.is_empty()
    }

    pub fn arcs(&self) -> &[OpenArc] {
        &self.arcs
    }

    pub fn contains(&self, x: &Rat) -> bool {
        self.whole || self.arcs.iter().any(|a| a.contains(x))
    }

    /// True iff every component lies inside one of `arcs`.
    pub fn within(&self, arcs: &[OpenArc]) -> bool {
        !self.whole && self.arcs.iter().all(|c| arcs.iter().any(|a| c.within(a)))
    }

    pub fn intersection(&self, other: &SupportSet) -> SupportSet {
        if self.whole {
            return other.clone();
        }
        if other.whole {
            return self.clone();
        }
        let mut arcs: Vec<OpenArc> =
            self.arcs.iter().flat_map(|a| other.arcs.iter().flat_map(move |b| a.intersect(b))).collect();
        arcs.sort_by_key(|a| fract(&a.lo));
        arcs.dedup_by(|a, b| fract(&a.lo) == fract(&b.lo) && &a.hi - &a.lo == &b.hi - &b.lo);
        SupportSet { whole: false, arcs }
    }
}

impl fmt::Display for SupportSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.whole {
            return write!(f, "S1");
        }
        if self.arcs.is_empty() {
            return write!(f, "{{}}");
        }
        let s: Vec<String> = self.arcs.iter().map(|a| a.to_string()).collect();
        write!(f, "{}", s.join(" u "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::plmap::Carrier;

    fn q(n: i64, d: u64) -> Dyadic {
        Dyadic::q(n, d)
    }

    fn r(n: i64, d: i64) -> Rat {
        Rat::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn zeta_fixes_ends_and_a_tail() {
        let z = PLMap::from_points(Carrier::Interval, vec![(q(0, 1), q(0, 1)), (q(1, 4), q(1, 2)), (q(3, 4), q(3, 4))])
            .unwrap();
        let fx = z.fixed_points();
        assert_eq!(fx.parts(), &[FixedPart::Point(r(0, 1)), FixedPart::Arc { lo: r(3, 4), hi: r(1, 1) }]);
        let s = z.support();
        assert_eq!(s.arcs(), &[OpenArc { lo: r(0, 1), hi: r(3, 4) }]);
        let fxc = z.to_circle().fixed_points();
        assert_eq!(fxc.parts(), &[FixedPart::Arc { lo: r(3, 4), hi: r(1, 1) }]);
        assert_eq!(z.to_circle().support().arcs(), &[OpenArc { lo: r(0, 1), hi: r(3, 4) }]);
    }

    #[test]
    fn non_dyadic_fixed_point() {
        // slope 4 on [1/4, 3/8] lifts to x -> 4x, which meets x + 1 at 1/3
        let m = PLMap::from_points(Carrier::Circle, vec![(q(1, 4), q(0, 1)), (q(3, 8), q(1, 2)), (q(1, 2), q(5, 8))])
            .unwrap();
        assert!(m.fixed_points().parts().contains(&FixedPart::Point(r(1, 3))));
        assert!(!m.support().contains(&r(1, 3)));
    }

    #[test]
    fn rotation_has_whole_support() {
        let rot = PLMap::rotation(&q(1, 4));
        assert!(rot.fixed_points().is_empty());
        assert!(rot.support().is_whole());
        assert!(PLMap::identity(Carrier::Circle).support().is_empty());
        assert!(PLMap::identity(Carrier::Interval).support().is_empty());
        assert!(PLMap::identity(Carrier::Circle).fixed_points().is_everything());
    }

    #[test]
    fn wrapping_fixed_arc() {
        // identity near 0, moves things in (1/4, 3/4)
        let m = PLMap::from_points(
            Carrier::Circle,
            vec![(q(0, 1), q(0, 1)), (q(1, 4), q(1, 4)), (q(3, 8), q(1, 2)), (q(1, 2), q(5, 8)), (q(3, 4), q(3, 4))],
        )
        .unwrap();
        assert_eq!(m.fixed_points().parts(), &[FixedPart::Arc { lo: r(3, 4), hi: r(5, 4) }]);
        assert_eq!(m.support().arcs(), &[OpenArc { lo: r(1, 4), hi: r(3, 4) }]);
        assert!(m.fixed_points().contains(&r(1, 8)));
        assert!(m.fixed_points().contains(&r(7, 8)));
        assert!(!m.fixed_points().contains(&r(1, 2)));
    }

    #[test]
    fn support_algebra() {
        let a = SupportSet::from_arcs(vec![OpenArc::new(r(3, 4), r(5, 4))]);
        let b = SupportSet::from_arcs(vec![OpenArc::new(r(0, 1), r(1, 2))]);
        let c = a.intersection(&b);
        assert_eq!(c.arcs(), &[OpenArc { lo: r(1, 1), hi: r(5, 4) }]);
        assert!(c.within(&[OpenArc::new(r(0, 1), r(1, 2))]));
        assert!(!a.within(&[OpenArc::new(r(0, 1), r(1, 2))]));
        assert!(a.contains(&r(1, 8)));
        assert!(!a.contains(&r(3, 4)));
    }
}
