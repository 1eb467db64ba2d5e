use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::cmp::Ordering;

use num_traits::{One, Signed, Zero};

use super::element::{Element, Field, Geometry};
use super::sets::{Arc, CircleSet, Interval, LineSet};
use super::value::{SetValue, Shape};
use crate::error::Error;
use crate::num::{half, Turn, Q};

fn ensure_hyper(f: Field) -> Result<(), Error> {
    if f.has_hypersum() {
        Ok(())
    } else {
        Err(Error::Unsupported(f))
    }
}

fn same(a: &Element, b: &Element) -> Result<Field, Error> {
    if a.field() != b.field() {
        return Err(Error::FieldMismatch(a.field(), b.field()));
    }
    ensure_hyper(a.field())?;
    Ok(a.field())
}

/// The set `a ⊞ b`, computed from the case rules of each hyperfield.
pub fn hypersum(a: &Element, b: &Element) -> Result<SetValue, Error> {
    let f = same(a, b)?;
    if a.is_zero() {
        return Ok(SetValue::singleton(b));
    }
    if b.is_zero() {
        return Ok(SetValue::singleton(a));
    }
    if a == b && !matches!(f, Field::K | Field::TT | Field::Triangle) {
        return Ok(SetValue::singleton(a));
    }
    let neg = *a == b.neg();
    Ok(match f {
        Field::S => {
            // here b = -a
            SetValue::from_elements(f, &[Element::sign(-1), Element::sign(0), Element::sign(1)])
        }
        Field::K => SetValue::from_elements(f, &[Element::zero(f), Element::one(f)]),
        Field::TR => match a.modulus().cmp(b.modulus()) {
            Ordering::Greater => SetValue::singleton(a),
            Ordering::Less => SetValue::singleton(b),
            Ordering::Equal => {
                let m = a.modulus().clone();
                SetValue::line(f, LineSet::interval(Interval::closed(-m.clone(), m)))
            }
        },
        Field::TT => match a.modulus().cmp(b.modulus()) {
            Ordering::Greater => SetValue::singleton(a),
            Ordering::Less => SetValue::singleton(b),
            Ordering::Equal => {
                SetValue::line(f, LineSet::interval(Interval::closed(Q::zero(), a.modulus().clone())))
            }
        },
        Field::Triangle => {
            let (x, y) = (a.modulus(), b.modulus());
            SetValue::line(f, LineSet::interval(Interval::closed((x - y).abs(), x + y)))
        }
        Field::P => {
            if neg {
                SetValue::from_elements(f, &[a.clone(), Element::zero(f), b.clone()])
            } else {
                SetValue::circle(f, shortest_arc(a.angle(), b.angle(), false), false)
            }
        }
        Field::Phi => {
            if neg {
                SetValue::circle(f, CircleSet::full(), true)
            } else {
                SetValue::circle(f, shortest_arc(a.angle(), b.angle(), true), false)
            }
        }
        Field::TC => match a.modulus().cmp(b.modulus()) {
            Ordering::Greater => SetValue::singleton(a),
            Ordering::Less => SetValue::singleton(b),
            Ordering::Equal => {
                if neg {
                    SetValue::from_shape(
                        f,
                        Shape::Plane { rings: BTreeMap::new(), disk: Some(a.modulus().clone()), zero: true },
                    )
                } else {
                    let mut rings = BTreeMap::new();
                    rings.insert(a.modulus().clone(), shortest_arc(a.angle(), b.angle(), true));
                    SetValue::from_shape(f, Shape::Plane { rings, disk: None, zero: false })
                }
            }
        },
        Field::R | Field::C => unreachable!(),
    })
}

/// Shortest arc between two angles that are neither equal nor antipodal.
fn shortest_arc(a: &Turn, b: &Turn, closed: bool) -> CircleSet {
    let d = b.sub(a);
    if d.value() < &half() {
        CircleSet::arc(a, d.value().clone(), closed, closed)
    } else {
        CircleSet::arc(b, Q::one() - d.value(), closed, closed)
    }
}

/// `X ⊞ c` for a set `X` and an element `c`, exact in every hyperfield.
pub fn add_element(x: &SetValue, c: &Element) -> Result<SetValue, Error> {
    let f = x.field();
    if f != c.field() {
        return Err(Error::FieldMismatch(f, c.field()));
    }
    ensure_hyper(f)?;
    if c.is_zero() || x.is_empty() {
        return Ok(x.clone());
    }
    match f {
        Field::S | Field::K => {
            let mut acc = SetValue::empty(f);
            for p in x.probes() {
                acc = acc.union(&hypersum(&p, c)?);
            }
            Ok(acc)
        }
        Field::TR | Field::TT | Field::Triangle => add_set(x, &SetValue::singleton(c)),
        Field::P | Field::Phi => {
            let Shape::Circle { arcs, zero } = x.shape() else { unreachable!() };
            let (arcs, z) = circle_add_unit(f == Field::Phi, arcs, *zero, c.angle());
            Ok(SetValue::circle(f, arcs, z))
        }
        Field::TC => {
            let Shape::Plane { rings, disk, zero } = x.shape() else { unreachable!() };
            Ok(plane_add_element(rings, disk, *zero, c))
        }
        Field::R | Field::C => unreachable!(),
    }
}

/// Unit circle set (plus zero flag) ⊞ the unit at angle `gamma`.
///
/// Returns the arcs and whether zero belongs to the result.
fn circle_add_unit(closed: bool, arcs: &CircleSet, zero: bool, gamma: &Turn) -> (CircleSet, bool) {
    let y = arcs.rotate(&gamma.neg());
    let h = half();
    let has_half = y.contains(&Turn::half());
    let self_point = y.contains(&Turn::zero()) || zero;
    let upper = y.sup_in_open(&Q::zero(), &h);
    let lower = y.inf_in_open(&h, &Q::one());
    let mut out = Vec::new();
    let point = |t: &Turn| Arc { start: t.value().clone(), len: Q::zero(), start_closed: true, end_closed: true };
    let mut z = false;
    if closed {
        if has_half {
            return (CircleSet::full(), true);
        }
        if self_point {
            out.push(point(&Turn::zero()));
        }
        if let Some((s, att)) = upper {
            out.push(Arc { start: Q::zero(), len: s, start_closed: true, end_closed: att });
        }
        if let Some((i, att)) = lower {
            out.push(Arc { start: i.clone(), len: Q::one() - i, start_closed: att, end_closed: true });
        }
    } else {
        if self_point || has_half {
            out.push(point(&Turn::zero()));
        }
        if has_half {
            out.push(point(&Turn::half()));
            z = true;
        }
        if let Some((s, _)) = upper {
            out.push(Arc { start: Q::zero(), len: s, start_closed: false, end_closed: false });
        }
        if let Some((i, _)) = lower {
            out.push(Arc { start: i.clone(), len: Q::one() - i, start_closed: false, end_closed: false });
        }
    }
    (CircleSet::from_arcs(out).rotate(gamma), z)
}

fn plane_add_element(rings: &BTreeMap<Q, CircleSet>, disk: &Option<Q>, zero: bool, c: &Element) -> SetValue {
    let m = c.modulus();
    let mut out_rings: BTreeMap<Q, CircleSet> = BTreeMap::new();
    let mut out_disk: Option<Q> = None;
    let mut contributes_c = zero;
    if let Some(r) = disk {
        if r >= m {
            out_disk = Some(r.clone());
        } else {
            contributes_c = true;
        }
    }
    for (rho, arcs) in rings {
        match rho.cmp(m) {
            Ordering::Greater => {
                out_rings.insert(rho.clone(), arcs.clone());
            }
            Ordering::Less => contributes_c = true,
            Ordering::Equal => {
                let (res, z) = circle_add_unit(true, arcs, false, c.angle());
                if z {
                    let d = out_disk.get_or_insert_with(|| m.clone());
                    if &*d < m {
                        *d = m.clone();
                    }
                } else {
                    out_rings.insert(m.clone(), res);
                }
            }
        }
    }
    if contributes_c {
        let e = out_rings.entry(m.clone()).or_insert_with(CircleSet::empty);
        *e = e.union(&CircleSet::point(c.angle()));
    }
    SetValue::from_shape(Field::TC, Shape::Plane { rings: out_rings, disk: out_disk, zero: false })
}

/// `X ⊞ Y` for two sets, exact for the finite and line hyperfields.
///
/// The circle and plane hyperfields have no closed form here; use [`sum_contains`].
pub fn add_set(x: &SetValue, y: &SetValue) -> Result<SetValue, Error> {
    let f = x.field();
    if f != y.field() {
        return Err(Error::FieldMismatch(f, y.field()));
    }
    ensure_hyper(f)?;
    if x.is_empty() || y.is_empty() {
        return Ok(SetValue::empty(f));
    }
    match (x.shape(), y.shape()) {
        _ if f.is_finite() => {
            let mut acc = SetValue::empty(f);
            for p in y.probes() {
                acc = acc.union(&add_element(x, &p)?);
            }
            Ok(acc)
        }
        (Shape::Line(a), Shape::Line(b)) => Ok(SetValue::line(
            f,
            match f {
                Field::TR => tropical_real_sum(a, b),
                Field::TT => tropical_triangle_sum(a, b),
                Field::Triangle => triangle_sum(a, b),
                _ => unreachable!(),
            },
        )),
        _ => Err(Error::Invalid(alloc::format!(
            "no closed form for set sums in {f}; test membership with sum_contains"
        ))),
    }
}

fn tropical_real_sum(x: &LineSet, y: &LineSet) -> LineSet {
    let (inf_x, _) = x.inf_abs().expect("nonempty");
    let (inf_y, _) = y.inf_abs().expect("nonempty");
    let a = x.abs_greater_than(&inf_y);
    let b = y.abs_greater_than(&inf_x);
    let d = x.intersect(y);
    let mut parts = LineSet::union_all([&a, &b, &d]);
    if let Some((s, att)) = y.intersect(&x.negate()).sup_abs() {
        parts = parts.union(&LineSet::from_parts(Interval::new(-s.clone(), s, att, att)));
    }
    parts
}

fn tropical_triangle_sum(x: &LineSet, y: &LineSet) -> LineSet {
    let (inf_x, _) = x.inf().expect("nonempty");
    let (inf_y, _) = y.inf().expect("nonempty");
    let a = x.abs_greater_than(&inf_y);
    let b = y.abs_greater_than(&inf_x);
    let d = x.intersect(y);
    let mut parts = LineSet::union_all([&a, &b, &d]);
    if let Some((s, att)) = d.sup() {
        parts = parts.union(&LineSet::from_parts(Interval::new(Q::zero(), s, true, att)));
    }
    parts
}

fn triangle_sum(x: &LineSet, y: &LineSet) -> LineSet {
    let mut out = Vec::new();
    for i in x.parts() {
        for j in y.parts() {
            let (lo, lo_closed) = if i.intersect(j).is_some() {
                (Q::zero(), true)
            } else if i.hi <= j.lo {
                (&j.lo - &i.hi, i.hi_closed && j.lo_closed)
            } else {
                (&i.lo - &j.hi, j.hi_closed && i.lo_closed)
            };
            out.extend(Interval::new(lo, &i.hi + &j.hi, lo_closed, i.hi_closed && j.hi_closed));
        }
    }
    LineSet::from_parts(out)
}

/// Exact membership `z ∈ X ⊞ Y`, in every hyperfield with a hyperaddition.
///
/// Uses reversibility: `z ∈ x ⊞ y` iff `x ∈ z ⊞ -y`, so the question becomes
/// whether `X` meets `(-Y) ⊞ z`.
pub fn sum_contains(x: &SetValue, y: &SetValue, z: &Element) -> Result<bool, Error> {
    let w = add_element(&y.negate(), z)?;
    Ok(x.intersects(&w))
}

/// Left fold of the hypersum over `terms`; the result does not depend on the order.
pub fn fold_hypersum(terms: &[Element]) -> Result<SetValue, Error> {
    let (first, rest) = terms
        .split_first()
        .ok_or_else(|| Error::Invalid(alloc::string::String::from("empty hypersum")))?;
    ensure_hyper(first.field())?;
    let mut acc = SetValue::singleton(first);
    for t in rest {
        acc = add_element(&acc, t)?;
    }
    Ok(acc)
}

/// The product set `{a ⊙ b : a ∈ X, b ∈ Y}`.
pub fn mul_sets(x: &SetValue, y: &SetValue) -> Result<SetValue, Error> {
    let f = x.field();
    if f != y.field() {
        return Err(Error::FieldMismatch(f, y.field()));
    }
    if x.is_empty() || y.is_empty() {
        return Ok(SetValue::empty(f));
    }
    Ok(match (x.shape(), y.shape()) {
        (Shape::Line(a), Shape::Line(b)) => {
            let mut parts = Vec::new();
            for i in a.parts() {
                for j in b.parts() {
                    parts.extend(interval_product(i, j));
                }
            }
            SetValue::line(f, LineSet::from_parts(parts))
        }
        (Shape::Circle { arcs: a, zero: za }, Shape::Circle { arcs: b, zero: zb }) => {
            SetValue::circle(f, a.minkowski(b), *za || *zb)
        }
        (
            Shape::Plane { rings: ra, disk: da, zero: za },
            Shape::Plane { rings: rb, disk: db, zero: zb },
        ) => {
            let mut rings: BTreeMap<Q, CircleSet> = BTreeMap::new();
            let mut disk: Option<Q> = None;
            let mut grow = |r: Q| {
                if disk.as_ref().is_none_or(|d| *d < r) {
                    disk = Some(r);
                }
            };
            let max_ring = |rs: &BTreeMap<Q, CircleSet>| rs.keys().next_back().cloned();
            if let Some(d) = da {
                for other in [db.clone(), max_ring(rb)].into_iter().flatten() {
                    grow(d * &other);
                }
            }
            if let Some(d) = db {
                for other in [da.clone(), max_ring(ra)].into_iter().flatten() {
                    grow(d * &other);
                }
            }
            for (r1, c1) in ra {
                for (r2, c2) in rb {
                    let e = rings.entry(r1 * r2).or_insert_with(CircleSet::empty);
                    *e = e.union(&c1.minkowski(c2));
                }
            }
            SetValue::from_shape(f, Shape::Plane { rings, disk, zero: *za || *zb })
        }
        _ => unreachable!(),
    })
}

/// Product of two intervals of reals.
///
/// Extreme values of `ab` over a box are attained only at corners unless
/// they are zero, which is attained whenever zero lies in either factor.
fn interval_product(i: &Interval, j: &Interval) -> Option<Interval> {
    let corners = [
        (&i.lo * &j.lo, i.lo_closed && j.lo_closed),
        (&i.lo * &j.hi, i.lo_closed && j.hi_closed),
        (&i.hi * &j.lo, i.hi_closed && j.lo_closed),
        (&i.hi * &j.hi, i.hi_closed && j.hi_closed),
    ];
    let lo = corners.iter().map(|c| c.0.clone()).min()?;
    let hi = corners.iter().map(|c| c.0.clone()).max()?;
    let attained = |v: &Q| {
        corners.iter().any(|(c, cl)| c == v && *cl)
            || (v.is_zero() && (i.contains(&Q::zero()) || j.contains(&Q::zero())))
    };
    let lo_closed = attained(&lo);
    let hi_closed = attained(&hi);
    Interval::new(lo, hi, lo_closed, hi_closed)
}

/// Scales every member of `x` by `c`.
pub fn scale_set(x: &SetValue, c: &Element) -> Result<SetValue, Error> {
    mul_sets(x, &SetValue::singleton(c))
}

/// Whether `0 ∈ t_1 ⊞ … ⊞ t_k`, decided without building the set.
pub fn contains_zero(terms: &[Element]) -> Result<bool, Error> {
    let first = terms
        .first()
        .ok_or_else(|| Error::Invalid(alloc::string::String::from("empty hypersum")))?;
    let f = first.field();
    ensure_hyper(f)?;
    if let Some(t) = terms.iter().find(|t| t.field() != f) {
        return Err(Error::FieldMismatch(f, t.field()));
    }
    let nz: Vec<&Element> = terms.iter().filter(|t| !t.is_zero()).collect();
    if nz.is_empty() {
        return Ok(true);
    }
    Ok(match f {
        Field::S => {
            let pos = nz.iter().any(|t| t.sign_value() > 0);
            let neg = nz.iter().any(|t| t.sign_value() < 0);
            pos && neg
        }
        Field::K => nz.len() != 1,
        Field::TR => {
            let m = nz.iter().map(|t| t.modulus()).max().unwrap();
            let top = nz.iter().filter(|t| t.modulus() == m);
            let (mut pos, mut neg) = (false, false);
            for t in top {
                if t.sign_value() > 0 {
                    pos = true
                } else {
                    neg = true
                }
            }
            pos && neg
        }
        Field::TT => {
            let m = nz.iter().map(|t| t.modulus()).max().unwrap();
            nz.iter().filter(|t| t.modulus() == m).count() >= 2
        }
        Field::Triangle => {
            let m = nz.iter().map(|t| t.modulus()).max().unwrap().clone();
            let sum: Q = nz.iter().map(|t| t.modulus().clone()).sum();
            m.clone() + m <= sum
        }
        Field::P => {
            let angles = distinct_angles(nz.iter().copied());
            if angles.len() == 2 && angles[0].antipode() == angles[1] {
                true
            } else {
                max_gap(&angles) < half()
            }
        }
        Field::Phi => max_gap(&distinct_angles(nz.iter().copied())) <= half(),
        Field::TC => {
            let m = nz.iter().map(|t| t.modulus()).max().unwrap();
            let top = nz.iter().copied().filter(|t| t.modulus() == m);
            max_gap(&distinct_angles(top)) <= half()
        }
        Field::R | Field::C => unreachable!(),
    })
}

fn distinct_angles<'a, I: Iterator<Item = &'a Element>>(it: I) -> Vec<Turn> {
    let mut v: Vec<Turn> = it.map(|t| t.angle().clone()).collect();
    v.sort();
    v.dedup();
    v
}

/// Largest gap between consecutive angles around the circle (1 for a single angle).
fn max_gap(sorted: &[Turn]) -> Q {
    if sorted.len() <= 1 {
        return Q::one();
    }
    let mut best = Q::one() - sorted[sorted.len() - 1].value() + sorted[0].value();
    for w in sorted.windows(2) {
        let g = w[1].value() - w[0].value();
        if g > best {
            best = g;
        }
    }
    best
}

/// Parenthesization-independent membership for a multi-term hypersum split as
/// `(t_1 ⊞ … ⊞ t_k) ⊞ (t_{k+1} ⊞ …)`.
pub fn split_sum_contains(left: &[Element], right: &[Element], z: &Element) -> Result<bool, Error> {
    let l = fold_hypersum(left)?;
    let r = fold_hypersum(right)?;
    if matches!(z.field().geometry(), Geometry::Line) {
        return Ok(add_set(&l, &r)?.contains(z));
    }
    sum_contains(&l, &r, z)
}
