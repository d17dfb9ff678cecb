//! Piecewise-linear homeomorphisms of `[0, 1]` and of the circle with dyadic
//! breakpoints and power-of-two slopes.
//!
//! Every map is stored through its lift `L: R -> R`, a continuous increasing
//! function with `L(x + 1) = L(x) + 1`. The canonical form records only the
//! genuine breakpoints `x_0 < ... < x_{n-1}` in `[0, 1)` together with their
//! lifted images, normalised so that `L(x_0)` lies in `[0, 1)`. A map with no
//! breakpoint at all is a rotation and is anchored at `x = 0`. Two maps are
//! equal iff they are the same homeomorphism of the circle; the [`Carrier`]
//! tag only changes validation and how endpoints are read.
//!
//! Composition is a right action: `f.then(&g)` is `x -> (x f) g`.

mod fixed;
mod fragment;
mod json;

pub use fixed::{FixedPart, FixedSet, OpenArc, Rat, SupportSet};
pub use fragment::{thompson_like_map, DyadicArc, PlFragment};
pub use json::PlMapJson;

use std::fmt;
use std::hash::{Hash, Hasher};

use serde::{Deserialize, Serialize};

use crate::dyadic::{CirclePoint, Dyadic};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Carrier {
    Interval,
    Circle,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

#[derive(Clone)]
pub struct PLMap {
    carrier: Carrier,
    xs: Vec<Dyadic>,
    ys: Vec<Dyadic>,
    /// `slopes[i]` is log2 of the slope on `[xs[i], xs[i+1]]`, cyclically.
    slopes: Vec<i64>,
}

impl PartialEq for PLMap {
    fn eq(&self, other: &Self) -> bool {
        self.xs == other.xs && self.ys == other.ys
    }
}

impl Eq for PLMap {}

impl Hash for PLMap {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.xs.hash(state);
        self.ys.hash(state);
    }
}

fn affine(xa: &Dyadic, ya: &Dyadic, k: i64, x: &Dyadic) -> Dyadic {
    ya + &(x - xa).mul_pow2(k)
}

impl PLMap {
    pub fn identity(carrier: Carrier) -> Self {
        PLMap { carrier, xs: vec![Dyadic::zero()], ys: vec![Dyadic::zero()], slopes: vec![0] }
    }

    /// The rotation `x -> x + a` of the circle.
    pub fn rotation(a: &Dyadic) -> Self {
        PLMap { carrier: Carrier::Circle, xs: vec![Dyadic::zero()], ys: vec![a.fract()], slopes: vec![0] }
    }

    /// Builds a map from sample points `(x, y)`, read modulo 1, which must
    /// include every breakpoint; the map is taken to be affine between
    /// consecutive samples. Validates monotonicity, bijectivity and slopes.
    pub fn from_points<I>(carrier: Carrier, points: I) -> Result<PLMap>
    where
        I: IntoIterator<Item = (Dyadic, Dyadic)>,
    {
        let mut pts: Vec<(Dyadic, Dyadic)> = points.into_iter().map(|(x, y)| (x.fract(), y.fract())).collect();
        if pts.is_empty() {
            return Err(Error::invalid("no points given"));
        }
        pts.sort_by(|a, b| a.0.cmp(&b.0));
        let mut dedup: Vec<(Dyadic, Dyadic)> = Vec::with_capacity(pts.len());
        for (x, y) in pts {
            match dedup.last() {
                Some((px, py)) if *px == x => {
                    if *py != y {
                        return Err(Error::invalid(format!("point {x} is sent to both {py} and {y}")));
                    }
                }
                _ => dedup.push((x, y)),
            }
        }
        let n = dedup.len();
        let mut xs = Vec::with_capacity(n);
        let mut ys: Vec<Dyadic> = Vec::with_capacity(n);
        let mut total = Dyadic::zero();
        for (i, (x, y)) in dedup.iter().enumerate() {
            xs.push(x.clone());
            if i == 0 {
                ys.push(y.clone());
            } else {
                let step = CirclePoint::new(&dedup[i - 1].1).ccw_dist(&CirclePoint::new(y));
                if step.is_zero() {
                    return Err(Error::invalid(format!("{} and {} have the same image", dedup[i - 1].0, x)));
                }
                total += &step;
                ys.push(&ys[i - 1] + &step);
            }
        }
        if n > 1 {
            total += &CirclePoint::new(&dedup[n - 1].1).ccw_dist(&CirclePoint::new(&dedup[0].1));
            if total != Dyadic::one() {
                return Err(Error::invalid("breakpoint images are not in cyclic order"));
            }
        }
        let map = Self::from_lift(carrier, xs, ys)?;
        if carrier == Carrier::Interval && !map.fixes_zero() {
            return Err(Error::invalid("interval map does not fix 0"));
        }
        Ok(map)
    }

    /// `xs` ascending in `[0, 1)`, `ys` a strictly increasing lift with
    /// `ys[n-1] < ys[0] + 1`. Computes slopes and drops redundant points.
    fn from_lift(carrier: Carrier, xs: Vec<Dyadic>, ys: Vec<Dyadic>) -> Result<PLMap> {
        let n = xs.len();
        let mut slopes = Vec::with_capacity(n);
        for i in 0..n {
            let (dx, dy) = if i + 1 < n {
                (&xs[i + 1] - &xs[i], &ys[i + 1] - &ys[i])
            } else {
                (&(&xs[0] + &Dyadic::one()) - &xs[i], &(&ys[0] + &Dyadic::one()) - &ys[i])
            };
            let k = dy.log2_ratio(&dx).ok_or_else(|| {
                Error::invalid(format!("slope {dy}/{dx} on the piece starting at {} is not a power of two", xs[i]))
            })?;
            slopes.push(k);
        }
        let keep: Vec<usize> = (0..n).filter(|&i| slopes[(i + n - 1) % n] != slopes[i]).collect();
        if keep.is_empty() {
            // a rotation: anchor at 0
            let y0 = affine(&xs[0], &ys[0], 0, &Dyadic::zero()).fract();
            return Ok(PLMap { carrier, xs: vec![Dyadic::zero()], ys: vec![y0], slopes: vec![0] });
        }
        let shift = Dyadic::from(-ys[keep[0]].floor());
        let nxs = keep.iter().map(|&i| xs[i].clone()).collect();
        let nys = keep.iter().map(|&i| &ys[i] + &shift).collect();
        let nslopes = keep.iter().map(|&i| slopes[i]).collect();
        Ok(PLMap { carrier, xs: nxs, ys: nys, slopes: nslopes })
    }

    pub fn carrier(&self) -> Carrier {
        self.carrier
    }

    /// Same map, relabelled as a circle map.
    pub fn to_circle(&self) -> PLMap {
        PLMap { carrier: Carrier::Circle, ..self.clone() }
    }

    /// Same map, relabelled as an interval map; fails unless it fixes 0.
    pub fn to_interval(&self) -> Result<PLMap> {
        if !self.fixes_zero() {
            return Err(Error::precondition("map does not fix 0, so it is not an element of F"));
        }
        Ok(PLMap { carrier: Carrier::Interval, ..self.clone() })
    }

    pub fn fixes_zero(&self) -> bool {
        self.lift(&Dyadic::zero()).is_zero()
    }

    pub fn is_identity(&self) -> bool {
        self.xs.len() == 1 && self.slopes[0] == 0 && self.ys[0] == self.xs[0]
    }

    pub fn is_rotation(&self) -> bool {
        self.xs.len() == 1 && self.slopes[0] == 0
    }

    /// Genuine breakpoints in `[0, 1)`; empty for rotations.
    pub fn breakpoints(&self) -> Vec<Dyadic> {
        if self.is_rotation() {
            Vec::new()
        } else {
            self.xs.clone()
        }
    }

    /// Lifted breakpoint pairs `(x, L(x))` of the canonical form.
    pub fn lift_points(&self) -> impl Iterator<Item = (&Dyadic, &Dyadic)> {
        self.xs.iter().zip(self.ys.iter())
    }

    /// For interval maps, the piece list from `(0, 0)` to `(1, 1)`; for
    /// circle maps, the breakpoints with images reduced modulo 1.
    pub fn pieces(&self) -> Vec<(Dyadic, Dyadic)> {
        match self.carrier {
            Carrier::Interval => {
                let mut out = vec![(Dyadic::zero(), Dyadic::zero())];
                for x in self.breakpoints() {
                    if !x.is_zero() {
                        let y = self.lift(&x);
                        out.push((x, y));
                    }
                }
                out.push((Dyadic::one(), Dyadic::one()));
                out
            }
            Carrier::Circle => self.xs.iter().zip(&self.ys).map(|(x, y)| (x.clone(), y.fract())).collect(),
        }
    }

    fn segment_at(&self, f: &Dyadic) -> (Dyadic, Dyadic, i64) {
        let n = self.xs.len();
        if *f < self.xs[0] {
            let last = n - 1;
            return (&self.xs[last] - &Dyadic::one(), &self.ys[last] - &Dyadic::one(), self.slopes[last]);
        }
        let i = self.xs.partition_point(|x| x <= f) - 1;
        (self.xs[i].clone(), self.ys[i].clone(), self.slopes[i])
    }

    /// The lift evaluated at any real `x`.
    pub fn lift(&self, x: &Dyadic) -> Dyadic {
        let n = Dyadic::from(x.floor());
        let f = x - &n;
        let (xa, ya, k) = self.segment_at(&f);
        &affine(&xa, &ya, k, &f) + &n
    }

    /// The inverse lift evaluated at any real `y`.
    pub fn lift_inv(&self, y: &Dyadic) -> Dyadic {
        let m = Dyadic::from((y - &self.ys[0]).floor());
        let yy = y - &m;
        let i = self.ys.partition_point(|v| *v <= yy) - 1;
        &(&self.xs[i] + &(&yy - &self.ys[i]).mul_pow2(-self.slopes[i])) + &m
    }

    /// Image of a point: on `[0, 1]` for interval maps, modulo 1 otherwise.
    pub fn eval(&self, x: &Dyadic) -> Dyadic {
        match self.carrier {
            Carrier::Interval if *x >= Dyadic::zero() && *x <= Dyadic::one() => self.lift(x),
            _ => self.lift(&x.fract()).fract(),
        }
    }

    pub fn eval_point(&self, x: &CirclePoint) -> CirclePoint {
        CirclePoint::new(&self.lift(x.pos()))
    }

    pub fn inverse(&self) -> PLMap {
        let pts = self.xs.iter().zip(&self.ys).map(|(x, y)| (y.clone(), x.clone()));
        PLMap::from_points(self.carrier, pts).expect("inverse of a valid map is valid")
    }

    /// `x -> (x self) next`.
    pub fn then(&self, next: &PLMap) -> PLMap {
        let carrier = if self.carrier == Carrier::Interval && next.carrier == Carrier::Interval {
            Carrier::Interval
        } else {
            Carrier::Circle
        };
        let mut cands: Vec<Dyadic> = self.xs.clone();
        cands.extend(next.xs.iter().map(|b| self.lift_inv(b).fract()));
        let pts: Vec<(Dyadic, Dyadic)> = cands
            .into_iter()
            .map(|x| {
                let y = next.lift(&self.lift(&x));
                (x, y)
            })
            .collect();
        PLMap::from_points(carrier, pts).expect("composition of valid maps is valid")
    }

    /// Product of a sequence, applied left to right.
    pub fn product<'a, I: IntoIterator<Item = &'a PLMap>>(carrier: Carrier, maps: I) -> PLMap {
        maps.into_iter().fold(PLMap::identity(carrier), |acc, m| acc.then(m))
    }

    /// `by^-1 self by`.
    pub fn conjugate(&self, by: &PLMap) -> PLMap {
        by.inverse().then(self).then(by)
    }

    /// `self^-1 other^-1 self other`.
    pub fn commutator(&self, other: &PLMap) -> PLMap {
        self.inverse().then(&other.inverse()).then(self).then(other)
    }

    pub fn pow(&self, n: i64) -> PLMap {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let mut e = n.unsigned_abs();
        let mut acc = PLMap::identity(self.carrier);
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.then(&sq);
            }
            e >>= 1;
            if e > 0 {
                sq = sq.then(&sq);
            }
        }
        acc
    }

    /// log2 of the one-sided derivative at `x`.
    pub fn one_sided_slope(&self, x: &Dyadic, side: Side) -> Result<i64> {
        let f = match self.carrier {
            Carrier::Interval => {
                if *x < Dyadic::zero() || *x > Dyadic::one() {
                    return Err(Error::precondition(format!("{x} is outside [0, 1]")));
                }
                if (x.is_zero() && side == Side::Left) || (*x == Dyadic::one() && side == Side::Right) {
                    return Err(Error::precondition(format!("no {side:?} derivative at the endpoint {x}")));
                }
                x.fract()
            }
            Carrier::Circle => x.fract(),
        };
        let n = self.xs.len();
        let i = if f < self.xs[0] { n - 1 } else { self.xs.partition_point(|v| *v <= f) - 1 };
        Ok(match side {
            Side::Right => self.slopes[i],
            Side::Left if self.xs[i] == f => self.slopes[(i + n - 1) % n],
            Side::Left => self.slopes[i],
        })
    }

    /// The lift restricted to `arc`, as a fragment.
    pub fn restrict(&self, arc: &DyadicArc) -> PlFragment {
        let (lo, hi) = (arc.lo(), arc.hi());
        let mut xs = vec![lo.clone()];
        let base = Dyadic::from(lo.floor());
        let mut inner: Vec<Dyadic> = Vec::new();
        if !self.is_rotation() {
            for b in &self.xs {
                for shift in [&base, &(&base + &Dyadic::one())] {
                    let c = b + shift;
                    if c > *lo && c < *hi {
                        inner.push(c);
                    }
                }
            }
        }
        inner.sort();
        xs.extend(inner);
        xs.push(hi.clone());
        let pts = xs.into_iter().map(|x| {
            let y = self.lift(&x);
            (x, y)
        });
        PlFragment::new(pts.collect()).expect("restriction of a valid map is valid")
    }

    /// True iff both maps agree pointwise on the closed arc.
    pub fn agrees_on(&self, other: &PLMap, arc: &DyadicArc) -> bool {
        self.restrict(arc).same_on_circle(&other.restrict(arc))
    }

    pub fn is_identity_on(&self, arc: &DyadicArc) -> bool {
        self.agrees_on(&PLMap::identity(Carrier::Circle), arc)
    }

    pub fn num_breakpoints(&self) -> usize {
        self.breakpoints().len()
    }

    pub fn fixed_points(&self) -> FixedSet {
        fixed::fixed_points(self)
    }

    pub fn support(&self) -> SupportSet {
        self.fixed_points().complement()
    }

    /// Assembles a map from fragments whose domains tile the circle and whose
    /// values agree (mod 1) at shared endpoints.
    pub fn patch(carrier: Carrier, fragments: &[PlFragment]) -> Result<PLMap> {
        fragment::patch(carrier, fragments)
    }

    /// The map that is `tau^-1 self tau` on the range of `tau` and the
    /// identity elsewhere. `self` must be supported in the domain of `tau`.
    pub fn transport(&self, tau: &PlFragment) -> Result<PLMap> {
        fragment::transport(self, tau)
    }
}

impl fmt::Debug for PLMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PLMap[{:?}](", self.carrier)?;
        for (i, (x, y)) in self.pieces().iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{x}->{y}")?;
        }
        write!(f, ")")
    }
}
