use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Zero};

use super::element::{Element, Field, Geometry};
use super::sets::{CircleSet, Interval, LineSet};
use crate::num::{fmt_rational, Turn, Q};

/// The set-valued result of a hyperaddition, in canonical form.
///
/// Two `SetValue`s describe the same set iff they compare equal.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SetValue {
    field: Field,
    shape: Shape,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub(crate) enum Shape {
    /// Real values (signed or nonnegative); finite fields use single points.
    Line(LineSet),
    /// Angles of unit elements plus a zero flag.
    Circle { arcs: CircleSet, zero: bool },
    /// Rings of angles by modulus, an optional closed disk, and a zero flag.
    Plane { rings: BTreeMap<Q, CircleSet>, disk: Option<Q>, zero: bool },
}

/// A described part of a set, for serialization.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Part {
    Points(Vec<Element>),
    Interval { lo: Q, hi: Q, lo_closed: bool, hi_closed: bool },
    /// Arc from `start` to `end` turns (`start < end`, possibly `end > 1`) at a modulus.
    Arc { start: Q, end: Q, start_closed: bool, end_closed: bool, modulus: Q },
    Disk { radius: Q },
    Circle { modulus: Q },
}

impl SetValue {
    pub(crate) fn from_shape(field: Field, shape: Shape) -> Self {
        let shape = match shape {
            Shape::Plane { rings, disk, zero } => canonical_plane(rings, disk, zero),
            other => other,
        };
        SetValue { field, shape }
    }

    pub(crate) fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn empty(field: Field) -> Self {
        let shape = match field.geometry() {
            Geometry::Line => Shape::Line(LineSet::empty()),
            Geometry::Circle => Shape::Circle { arcs: CircleSet::empty(), zero: false },
            Geometry::Plane => Shape::Plane { rings: BTreeMap::new(), disk: None, zero: false },
        };
        SetValue { field, shape }
    }

    pub fn singleton(x: &Element) -> Self {
        let field = x.field();
        let shape = match field.geometry() {
            Geometry::Line => Shape::Line(LineSet::point(x.real_value())),
            Geometry::Circle => {
                if x.is_zero() {
                    Shape::Circle { arcs: CircleSet::empty(), zero: true }
                } else {
                    Shape::Circle { arcs: CircleSet::point(x.angle()), zero: false }
                }
            }
            Geometry::Plane => {
                let mut rings = BTreeMap::new();
                if !x.is_zero() {
                    rings.insert(x.modulus().clone(), CircleSet::point(x.angle()));
                }
                Shape::Plane { rings, disk: None, zero: x.is_zero() }
            }
        };
        SetValue { field, shape }
    }

    /// A finite set of elements of one field.
    pub fn from_elements(field: Field, xs: &[Element]) -> Self {
        xs.iter().fold(SetValue::empty(field), |acc, x| acc.union(&SetValue::singleton(x)))
    }

    pub(crate) fn line(field: Field, set: LineSet) -> Self {
        SetValue { field, shape: Shape::Line(set) }
    }

    pub(crate) fn circle(field: Field, arcs: CircleSet, zero: bool) -> Self {
        SetValue { field, shape: Shape::Circle { arcs, zero } }
    }

    pub fn is_empty(&self) -> bool {
        match &self.shape {
            Shape::Line(s) => s.is_empty(),
            Shape::Circle { arcs, zero } => arcs.is_empty() && !zero,
            Shape::Plane { rings, disk, zero } => rings.is_empty() && disk.is_none() && !zero,
        }
    }

    pub fn contains(&self, x: &Element) -> bool {
        if x.field() != self.field {
            return false;
        }
        match &self.shape {
            Shape::Line(s) => s.contains(&x.real_value()),
            Shape::Circle { arcs, zero } => {
                if x.is_zero() {
                    *zero
                } else {
                    arcs.contains(x.angle())
                }
            }
            Shape::Plane { rings, disk, zero } => {
                if x.is_zero() {
                    return *zero;
                }
                if disk.as_ref().is_some_and(|r| x.modulus() <= r) {
                    return true;
                }
                rings.get(x.modulus()).is_some_and(|c| c.contains(x.angle()))
            }
        }
    }

    pub fn contains_zero(&self) -> bool {
        self.contains(&Element::zero(self.field))
    }

    /// The single element if the set is a singleton.
    pub fn as_singleton(&self) -> Option<Element> {
        let mut it = self.probes();
        let first = it.pop()?;
        (it.is_empty() && *self == SetValue::singleton(&first)).then_some(first)
    }

    /// Whether the set is a finite list of points.
    pub fn is_finite(&self) -> bool {
        match &self.shape {
            Shape::Line(s) => s.is_finite(),
            Shape::Circle { arcs, .. } => arcs.line().is_finite(),
            Shape::Plane { rings, disk, .. } => {
                disk.is_none() && rings.values().all(|c| c.line().is_finite())
            }
        }
    }

    pub fn union(&self, other: &SetValue) -> SetValue {
        debug_assert_eq!(self.field, other.field);
        let shape = match (&self.shape, &other.shape) {
            (Shape::Line(a), Shape::Line(b)) => Shape::Line(a.union(b)),
            (Shape::Circle { arcs: a, zero: za }, Shape::Circle { arcs: b, zero: zb }) => {
                Shape::Circle { arcs: a.union(b), zero: *za || *zb }
            }
            (
                Shape::Plane { rings: ra, disk: da, zero: za },
                Shape::Plane { rings: rb, disk: db, zero: zb },
            ) => {
                let mut rings = ra.clone();
                for (rho, c) in rb {
                    let e = rings.entry(rho.clone()).or_insert_with(CircleSet::empty);
                    *e = e.union(c);
                }
                let disk = match (da, db) {
                    (Some(a), Some(b)) => Some(a.max(b).clone()),
                    (a, b) => a.clone().or_else(|| b.clone()),
                };
                return SetValue::from_shape(
                    self.field,
                    Shape::Plane { rings, disk, zero: *za || *zb },
                );
            }
            _ => unreachable!("shapes agree within a field"),
        };
        SetValue { field: self.field, shape }
    }

    pub fn intersects(&self, other: &SetValue) -> bool {
        match (&self.shape, &other.shape) {
            (Shape::Line(a), Shape::Line(b)) => a.intersects(b),
            (Shape::Circle { arcs: a, zero: za }, Shape::Circle { arcs: b, zero: zb }) => {
                (*za && *zb) || a.intersects(b)
            }
            (
                Shape::Plane { rings: ra, disk: da, zero: za },
                Shape::Plane { rings: rb, disk: db, zero: zb },
            ) => {
                if *za && *zb {
                    return true;
                }
                let in_disk = |d: &Option<Q>, rings: &BTreeMap<Q, CircleSet>| {
                    d.as_ref().is_some_and(|r| rings.keys().any(|rho| rho <= r))
                };
                if da.is_some() && db.is_some() {
                    return true;
                }
                if in_disk(da, rb) || in_disk(db, ra) {
                    return true;
                }
                ra.iter().any(|(rho, a)| rb.get(rho).is_some_and(|b| a.intersects(b)))
            }
            _ => false,
        }
    }

    /// Image under negation.
    pub fn negate(&self) -> SetValue {
        if self.field.characteristic_two() {
            return self.clone();
        }
        let shape = match &self.shape {
            Shape::Line(s) => Shape::Line(s.negate()),
            Shape::Circle { arcs, zero } => {
                Shape::Circle { arcs: arcs.rotate(&Turn::half()), zero: *zero }
            }
            Shape::Plane { rings, disk, zero } => Shape::Plane {
                rings: rings.iter().map(|(k, c)| (k.clone(), c.rotate(&Turn::half()))).collect(),
                disk: disk.clone(),
                zero: *zero,
            },
        };
        SetValue { field: self.field, shape }
    }

    /// Exact members used to test statements quantified over the set:
    /// closed boundary points plus a midpoint of every part.
    pub fn probes(&self) -> Vec<Element> {
        let f = self.field;
        let mut out = Vec::new();
        match &self.shape {
            Shape::Line(s) => {
                for x in s.probes() {
                    if let Ok(e) = Element::real(f, x) {
                        out.push(e);
                    }
                }
            }
            Shape::Circle { arcs, zero } => {
                if *zero {
                    out.push(Element::zero(f));
                }
                for t in arcs.probes() {
                    out.extend(Element::unit(f, t));
                }
            }
            Shape::Plane { rings, disk, zero } => {
                if *zero {
                    out.push(Element::zero(f));
                }
                if let Some(r) = disk {
                    let mid = r * crate::num::half();
                    for m in [mid, r.clone()] {
                        for t in [Turn::zero(), Turn::from_ratio(1, 3), Turn::half()] {
                            out.extend(Element::polar(f, m.clone(), t));
                        }
                    }
                }
                for (rho, c) in rings {
                    for t in c.probes() {
                        out.extend(Element::polar(f, rho.clone(), t));
                    }
                }
            }
        }
        out.sort();
        out.dedup();
        out
    }

    /// Structured description for serialization.
    pub fn parts(&self) -> Vec<Part> {
        let f = self.field;
        let mut out = Vec::new();
        match &self.shape {
            Shape::Line(s) => {
                let pts: Vec<Element> =
                    s.points().filter_map(|x| Element::real(f, x.clone()).ok()).collect();
                if !pts.is_empty() {
                    out.push(Part::Points(pts));
                }
                for p in s.parts().iter().filter(|p| !p.is_point()) {
                    out.push(Part::Interval {
                        lo: p.lo.clone(),
                        hi: p.hi.clone(),
                        lo_closed: p.lo_closed,
                        hi_closed: p.hi_closed,
                    });
                }
            }
            Shape::Circle { arcs, .. } => circle_parts(f, arcs, &Q::one(), &mut out),
            Shape::Plane { rings, disk, .. } => {
                if let Some(r) = disk {
                    out.push(Part::Disk { radius: r.clone() });
                }
                for (rho, c) in rings {
                    circle_parts(f, c, rho, &mut out);
                }
            }
        }
        out
    }
}

fn circle_parts(f: Field, arcs: &CircleSet, modulus: &Q, out: &mut Vec<Part>) {
    if arcs.is_full() {
        out.push(Part::Circle { modulus: modulus.clone() });
        return;
    }
    let parts = arcs.line().parts();
    let mut pieces: Vec<Interval> = parts.to_vec();
    // rejoin an arc that was split at angle 0
    if pieces.len() >= 2 {
        let first = &pieces[0];
        let last = &pieces[pieces.len() - 1];
        if first.lo.is_zero() && first.lo_closed && last.hi.is_one() && !first.is_point() {
            let joined = Interval {
                lo: last.lo.clone(),
                hi: &first.hi + Q::one(),
                lo_closed: last.lo_closed,
                hi_closed: first.hi_closed,
            };
            pieces.pop();
            pieces.remove(0);
            pieces.push(joined);
        } else if first.is_point() && first.lo.is_zero() && last.hi.is_one() {
            let joined = Interval {
                lo: last.lo.clone(),
                hi: Q::one(),
                lo_closed: last.lo_closed,
                hi_closed: true,
            };
            pieces.pop();
            pieces.remove(0);
            pieces.push(joined);
        }
    }
    let mut points = Vec::new();
    for p in pieces {
        if p.is_point() {
            points.extend(Element::polar(f, modulus.clone(), Turn::new(p.lo.clone())));
        } else {
            out.push(Part::Arc {
                start: p.lo,
                end: p.hi,
                start_closed: p.lo_closed,
                end_closed: p.hi_closed,
                modulus: modulus.clone(),
            });
        }
    }
    if !points.is_empty() {
        out.insert(0, Part::Points(points));
    }
}

fn canonical_plane(mut rings: BTreeMap<Q, CircleSet>, disk: Option<Q>, zero: bool) -> Shape {
    rings.retain(|rho, c| !c.is_empty() && disk.as_ref().is_none_or(|r| rho > r));
    let zero = zero || disk.is_some();
    Shape::Plane { rings, disk, zero }
}

impl fmt::Debug for SetValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for SetValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut items: Vec<String> = Vec::new();
        for p in self.parts() {
            items.push(match p {
                Part::Points(ps) => {
                    let v: Vec<String> = ps.iter().map(|e| e.payload()).collect();
                    alloc::format!("{{{}}}", v.join(", "))
                }
                Part::Interval { lo, hi, lo_closed, hi_closed } => alloc::format!(
                    "{}{}, {}{}",
                    if lo_closed { '[' } else { '(' },
                    fmt_rational(&lo),
                    fmt_rational(&hi),
                    if hi_closed { ']' } else { ')' }
                ),
                Part::Arc { start, end, start_closed, end_closed, modulus } => alloc::format!(
                    "{}arc {}{}, {}{}",
                    if modulus.is_one() { String::new() } else { alloc::format!("{}*", fmt_rational(&modulus)) },
                    if start_closed { '[' } else { '(' },
                    fmt_rational(&start),
                    fmt_rational(&end),
                    if end_closed { ']' } else { ')' }
                ),
                Part::Disk { radius } => alloc::format!("disk({})", fmt_rational(&radius)),
                Part::Circle { modulus } => alloc::format!("circle({})", fmt_rational(&modulus)),
            });
        }
        let zero_shown = matches!(self.field.geometry(), Geometry::Line);
        if !zero_shown && self.contains_zero() && !matches!(&self.shape, Shape::Plane { disk: Some(_), .. }) {
            items.push(String::from("{0}"));
        }
        write!(f, "{}[{}]", self.field.tag(), items.join(" u "))
    }
}
