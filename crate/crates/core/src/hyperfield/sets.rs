//! Finite unions of intervals on the line and arcs on the circle, with exact endpoints.

use alloc::vec::Vec;
use core::cmp::Ordering;

use num_traits::{One, Signed, Zero};

use crate::num::{half, Turn, Q};

/// An interval of rationals; `lo == hi` only for a closed single point.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Interval {
    pub lo: Q,
    pub hi: Q,
    pub lo_closed: bool,
    pub hi_closed: bool,
}

impl Interval {
    /// `None` when the described interval is empty.
    pub fn new(lo: Q, hi: Q, lo_closed: bool, hi_closed: bool) -> Option<Self> {
        match lo.cmp(&hi) {
            Ordering::Greater => None,
            Ordering::Equal if !(lo_closed && hi_closed) => None,
            _ => Some(Interval { lo, hi, lo_closed, hi_closed }),
        }
    }

    pub fn point(x: Q) -> Self {
        Interval { lo: x.clone(), hi: x, lo_closed: true, hi_closed: true }
    }

    pub fn closed(lo: Q, hi: Q) -> Self {
        Interval::new(lo, hi, true, true).expect("closed interval with lo <= hi")
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, x: &Q) -> bool {
        let above = match x.cmp(&self.lo) {
            Ordering::Greater => true,
            Ordering::Equal => self.lo_closed,
            Ordering::Less => false,
        };
        let below = match x.cmp(&self.hi) {
            Ordering::Less => true,
            Ordering::Equal => self.hi_closed,
            Ordering::Greater => false,
        };
        above && below
    }

    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let (lo, lo_closed) = match self.lo.cmp(&other.lo) {
            Ordering::Greater => (self.lo.clone(), self.lo_closed),
            Ordering::Less => (other.lo.clone(), other.lo_closed),
            Ordering::Equal => (self.lo.clone(), self.lo_closed && other.lo_closed),
        };
        let (hi, hi_closed) = match self.hi.cmp(&other.hi) {
            Ordering::Less => (self.hi.clone(), self.hi_closed),
            Ordering::Greater => (other.hi.clone(), other.hi_closed),
            Ordering::Equal => (self.hi.clone(), self.hi_closed && other.hi_closed),
        };
        Interval::new(lo, hi, lo_closed, hi_closed)
    }

    fn negate(&self) -> Interval {
        Interval { lo: -&self.hi, hi: -&self.lo, lo_closed: self.hi_closed, hi_closed: self.lo_closed }
    }

    fn shift(&self, t: &Q) -> Interval {
        Interval {
            lo: &self.lo + t,
            hi: &self.hi + t,
            lo_closed: self.lo_closed,
            hi_closed: self.hi_closed,
        }
    }

    /// Smallest `|x|` over the interval and whether it is attained.
    fn inf_abs(&self) -> (Q, bool) {
        if self.contains(&Q::zero()) {
            (Q::zero(), true)
        } else if self.lo.is_negative() && !self.hi.is_positive() {
            // entirely at or below zero, zero itself excluded
            (self.hi.abs(), self.hi_closed)
        } else {
            (self.lo.abs(), self.lo_closed)
        }
    }

    /// Largest `|x|` over the interval and whether it is attained.
    fn sup_abs(&self) -> (Q, bool) {
        let l = self.lo.abs();
        let h = self.hi.abs();
        match l.cmp(&h) {
            Ordering::Greater => (l, self.lo_closed),
            Ordering::Less => (h, self.hi_closed),
            Ordering::Equal => (h, self.lo_closed || self.hi_closed),
        }
    }

    fn midpoint(&self) -> Q {
        (&self.lo + &self.hi) * half()
    }
}

/// A canonical finite union of disjoint, non-touching intervals, sorted.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LineSet {
    parts: Vec<Interval>,
}

impl LineSet {
    pub fn empty() -> Self {
        LineSet { parts: Vec::new() }
    }

    pub fn point(x: Q) -> Self {
        LineSet { parts: alloc::vec![Interval::point(x)] }
    }

    pub fn interval(i: Interval) -> Self {
        LineSet { parts: alloc::vec![i] }
    }

    pub fn from_parts<I: IntoIterator<Item = Interval>>(parts: I) -> Self {
        let mut v: Vec<Interval> = parts.into_iter().collect();
        v.sort_by(|a, b| a.lo.cmp(&b.lo).then_with(|| b.lo_closed.cmp(&a.lo_closed)));
        let mut out: Vec<Interval> = Vec::with_capacity(v.len());
        for p in v {
            if let Some(cur) = out.last_mut() {
                let touches = p.lo < cur.hi || (p.lo == cur.hi && (cur.hi_closed || p.lo_closed));
                if touches {
                    match p.hi.cmp(&cur.hi) {
                        Ordering::Greater => {
                            cur.hi = p.hi;
                            cur.hi_closed = p.hi_closed;
                        }
                        Ordering::Equal => cur.hi_closed |= p.hi_closed,
                        Ordering::Less => {}
                    }
                    continue;
                }
            }
            out.push(p);
        }
        LineSet { parts: out }
    }

    pub fn parts(&self) -> &[Interval] {
        &self.parts
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn contains(&self, x: &Q) -> bool {
        // parts are sorted; a linear scan is fine for the small sets we build
        self.parts.iter().any(|p| p.contains(x))
    }

    /// Whether every part is a single point.
    pub fn is_finite(&self) -> bool {
        self.parts.iter().all(Interval::is_point)
    }

    pub fn points(&self) -> impl Iterator<Item = &Q> {
        self.parts.iter().filter(|p| p.is_point()).map(|p| &p.lo)
    }

    pub fn union(&self, other: &LineSet) -> LineSet {
        LineSet::from_parts(self.parts.iter().chain(other.parts.iter()).cloned())
    }

    pub fn union_all<'a, I: IntoIterator<Item = &'a LineSet>>(sets: I) -> LineSet {
        LineSet::from_parts(sets.into_iter().flat_map(|s| s.parts.iter().cloned()))
    }

    pub fn intersect(&self, other: &LineSet) -> LineSet {
        let mut out = Vec::new();
        for a in &self.parts {
            for b in &other.parts {
                if let Some(i) = a.intersect(b) {
                    out.push(i);
                }
            }
        }
        LineSet::from_parts(out)
    }

    pub fn intersect_interval(&self, i: &Interval) -> LineSet {
        LineSet::from_parts(self.parts.iter().filter_map(|p| p.intersect(i)))
    }

    pub fn intersects(&self, other: &LineSet) -> bool {
        self.parts.iter().any(|a| other.parts.iter().any(|b| a.intersect(b).is_some()))
    }

    pub fn negate(&self) -> LineSet {
        LineSet::from_parts(self.parts.iter().map(Interval::negate))
    }

    pub fn shift(&self, t: &Q) -> LineSet {
        LineSet { parts: self.parts.iter().map(|p| p.shift(t)).collect() }
    }

    pub fn inf(&self) -> Option<(Q, bool)> {
        self.parts.first().map(|p| (p.lo.clone(), p.lo_closed))
    }

    pub fn sup(&self) -> Option<(Q, bool)> {
        self.parts.last().map(|p| (p.hi.clone(), p.hi_closed))
    }

    /// Smallest absolute value over the set (attained or not).
    pub fn inf_abs(&self) -> Option<(Q, bool)> {
        best(self.parts.iter().map(Interval::inf_abs), Ordering::Less)
    }

    /// Largest absolute value over the set (attained or not).
    pub fn sup_abs(&self) -> Option<(Q, bool)> {
        best(self.parts.iter().map(Interval::sup_abs), Ordering::Greater)
    }

    /// The elements with `|x| > t`.
    pub fn abs_greater_than(&self, t: &Q) -> LineSet {
        let Some((bound, _)) = self.sup_abs() else {
            return LineSet::empty();
        };
        let bound = bound + Q::one();
        let pos = Interval::new(t.clone(), bound.clone(), false, true);
        let neg = Interval::new(-bound, -t.clone(), true, false);
        let mut parts = Vec::new();
        for p in &self.parts {
            for w in pos.iter().chain(neg.iter()) {
                if let Some(i) = p.intersect(w) {
                    parts.push(i);
                }
            }
        }
        LineSet::from_parts(parts)
    }

    /// Boundary points that belong to the set plus the midpoint of every part.
    pub fn probes(&self) -> Vec<Q> {
        let mut out = Vec::new();
        for p in &self.parts {
            if p.is_point() {
                out.push(p.lo.clone());
                continue;
            }
            if p.lo_closed {
                out.push(p.lo.clone());
            }
            out.push(p.midpoint());
            if p.hi_closed {
                out.push(p.hi.clone());
            }
        }
        out
    }

    /// Distance from `x` to the closure of the set.
    pub fn distance_to(&self, x: &Q) -> Option<Q> {
        self.parts
            .iter()
            .map(|p| {
                if x < &p.lo {
                    &p.lo - x
                } else if x > &p.hi {
                    x - &p.hi
                } else {
                    Q::zero()
                }
            })
            .min()
    }
}

fn best<I: Iterator<Item = (Q, bool)>>(it: I, want: Ordering) -> Option<(Q, bool)> {
    let mut acc: Option<(Q, bool)> = None;
    for (v, att) in it {
        acc = Some(match acc {
            None => (v, att),
            Some((a, aatt)) => match v.cmp(&a) {
                o if o == want => (v, att),
                Ordering::Equal => (a, aatt || att),
                _ => (a, aatt),
            },
        });
    }
    acc
}

/// A subset of the circle `R/Z`, stored as a line set inside `[0, 1)`.
///
/// Arcs through angle 0 are split there, so the full circle is `[0, 1)`.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CircleSet {
    inner: LineSet,
}

/// An arc given by start angle, counterclockwise length and endpoint closedness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arc {
    pub start: Q,
    pub len: Q,
    pub start_closed: bool,
    pub end_closed: bool,
}

impl CircleSet {
    pub fn empty() -> Self {
        CircleSet { inner: LineSet::empty() }
    }

    pub fn full() -> Self {
        CircleSet { inner: LineSet::interval(Interval::new(Q::zero(), Q::one(), true, false).unwrap()) }
    }

    pub fn point(t: &Turn) -> Self {
        CircleSet { inner: LineSet::point(t.value().clone()) }
    }

    /// The arc starting at `start` and running counterclockwise for `len` turns.
    pub fn arc(start: &Turn, len: Q, start_closed: bool, end_closed: bool) -> Self {
        CircleSet::from_arcs([Arc { start: start.value().clone(), len, start_closed, end_closed }])
    }

    pub fn from_arcs<I: IntoIterator<Item = Arc>>(arcs: I) -> Self {
        let mut parts = Vec::new();
        for a in arcs {
            push_arc(&mut parts, a);
        }
        CircleSet::from_line_parts(parts)
    }

    fn from_line_parts(parts: Vec<Interval>) -> Self {
        CircleSet { inner: LineSet::from_parts(parts) }
    }

    pub fn line(&self) -> &LineSet {
        &self.inner
    }

    pub fn is_empty(&self) -> bool {
        self.inner.is_empty()
    }

    pub fn is_full(&self) -> bool {
        *self == CircleSet::full()
    }

    pub fn contains(&self, t: &Turn) -> bool {
        self.inner.contains(t.value())
    }

    pub fn union(&self, other: &CircleSet) -> CircleSet {
        CircleSet { inner: self.inner.union(&other.inner) }
    }

    pub fn intersect(&self, other: &CircleSet) -> CircleSet {
        CircleSet { inner: self.inner.intersect(&other.inner) }
    }

    pub fn intersects(&self, other: &CircleSet) -> bool {
        self.inner.intersects(&other.inner)
    }

    /// The parts of the set viewed as arcs (split at angle 0).
    pub fn arcs(&self) -> impl Iterator<Item = Arc> + '_ {
        self.inner.parts.iter().map(|p| Arc {
            start: p.lo.clone(),
            len: &p.hi - &p.lo,
            start_closed: p.lo_closed,
            end_closed: p.hi_closed,
        })
    }

    pub fn rotate(&self, t: &Turn) -> CircleSet {
        CircleSet::from_arcs(self.arcs().map(|a| Arc { start: a.start + t.value(), ..a }))
    }

    /// Image under `x -> -x`.
    pub fn reflect(&self) -> CircleSet {
        CircleSet::from_arcs(self.arcs().map(|a| Arc {
            start: -(&a.start + &a.len),
            len: a.len,
            start_closed: a.end_closed,
            end_closed: a.start_closed,
        }))
    }

    /// Minkowski sum of angle sets (the product of unit-circle subsets).
    pub fn minkowski(&self, other: &CircleSet) -> CircleSet {
        let mut arcs = Vec::new();
        for a in self.arcs() {
            for b in other.arcs() {
                arcs.push(Arc {
                    start: &a.start + &b.start,
                    len: &a.len + &b.len,
                    start_closed: a.start_closed && b.start_closed,
                    end_closed: a.end_closed && b.end_closed,
                });
            }
        }
        CircleSet::from_arcs(arcs)
    }

    /// Supremum of the set inside the open range `(lo, hi)`, `0 <= lo < hi <= 1`.
    pub fn sup_in_open(&self, lo: &Q, hi: &Q) -> Option<(Q, bool)> {
        let w = Interval::new(lo.clone(), hi.clone(), false, false)?;
        self.inner.intersect_interval(&w).sup()
    }

    /// Infimum of the set inside the open range `(lo, hi)`.
    pub fn inf_in_open(&self, lo: &Q, hi: &Q) -> Option<(Q, bool)> {
        let w = Interval::new(lo.clone(), hi.clone(), false, false)?;
        self.inner.intersect_interval(&w).inf()
    }

    pub fn probes(&self) -> Vec<Turn> {
        self.inner.probes().into_iter().map(Turn::new).collect()
    }
}

fn push_arc(parts: &mut Vec<Interval>, a: Arc) {
    if a.len.is_negative() {
        return;
    }
    let one = Q::one();
    if a.len > one || (a.len == one && (a.start_closed || a.end_closed)) {
        parts.push(Interval::new(Q::zero(), one, true, false).unwrap());
        return;
    }
    let start = Turn::new(a.start).value().clone();
    if a.len.is_zero() {
        if a.start_closed && a.end_closed {
            parts.push(Interval::point(start));
        }
        return;
    }
    let end = &start + &a.len;
    match end.cmp(&one) {
        Ordering::Less => parts.extend(Interval::new(start, end, a.start_closed, a.end_closed)),
        Ordering::Equal => {
            parts.extend(Interval::new(start, one, a.start_closed, false));
            if a.end_closed {
                parts.push(Interval::point(Q::zero()));
            }
        }
        Ordering::Greater => {
            parts.extend(Interval::new(start, one.clone(), a.start_closed, false));
            parts.extend(Interval::new(Q::zero(), end - one, true, a.end_closed));
        }
    }
}
