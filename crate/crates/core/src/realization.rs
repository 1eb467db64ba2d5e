//! Realization spaces: fibers of induced Grassmannian maps, orientations of
//! matroids, GP extension from an `(r+1)`-set, openness of fibers, gluing
//! and the Dressian.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;

use astro_float::BigFloat;
use num_traits::One;

use crate::combin::{fmt_subset, subsets};
use crate::dequant::{homotopy_h, HomotopyValue, Prec};
use crate::error::Error;
use crate::grassmannian::{induced_map, Grassmannian};
use crate::hyperfield::{contains_zero, Element, Field};
use crate::num::{q, Turn, Q};
use crate::plucker::{relations, GPVector, MatroidBases};
use crate::poset::{BitSet, Poset};
use crate::search::{Kind, Search};
use crate::structures::Homomorphism;

/// `Real^kind_F(M)`: the points of a finite source Grassmannian lying over `M`.
#[derive(Clone, Debug)]
pub struct RealizationSpace {
    pub base: GPVector,
    pub source: Field,
    pub kind: Kind,
    pub points: Vec<GPVector>,
}

impl RealizationSpace {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Membership test usable for infinite source fields.
    pub fn contains(&self, h: &Homomorphism, v: &GPVector) -> Result<bool, Error> {
        is_realization(h, v, &self.base, self.kind)
    }
}

fn check_kind(v: &GPVector, kind: Kind) -> Result<bool, Error> {
    match kind {
        Kind::Strong => v.is_strong(),
        Kind::Weak => v.is_weak(),
    }
}

/// All points of `src` mapping to `m` under `Gr(h)`.
pub fn fiber(h: &Homomorphism, src: &Grassmannian, m: &GPVector) -> Result<RealizationSpace, Error> {
    if h.source() != src.field() {
        return Err(Error::FieldMismatch(h.source(), src.field()));
    }
    if m.field() != h.target() || m.rank() != src.rank() || m.ground() != src.ground() {
        return Err(Error::Invalid(format!("{m:?} is not a point of Gr({}, {}^{})", src.rank(), h.target(), src.ground())));
    }
    if !check_kind(m, src.kind())? {
        return Err(Error::Invalid(format!("{m:?} is not a {} {}-matroid", src.kind().as_str(), h.target())));
    }
    let mut points = Vec::new();
    for p in src.points() {
        if p.pushforward(h)?.projectively_equal(m) {
            points.push(p.clone());
        }
    }
    Ok(RealizationSpace { base: m.normalize(), source: src.field(), kind: src.kind(), points })
}

/// The fibers of `Gr(h)` over every point of `tgt`, in target order.
pub fn partition(h: &Homomorphism, src: &Grassmannian, tgt: &Grassmannian) -> Result<Vec<Vec<usize>>, Error> {
    let f = induced_map(h, src, tgt)?;
    let mut parts = alloc::vec![Vec::new(); tgt.len()];
    for (i, &j) in f.iter().enumerate() {
        parts[j].push(i);
    }
    Ok(parts)
}

/// A search over the S-points whose support is exactly the bases of `m`.
pub fn orientation_search(m: &MatroidBases, kind: Kind, max_coords: u64) -> Result<Search, Error> {
    if !m.is_matroid() {
        return Err(Error::Invalid(String::from("the given sets are not the bases of a matroid")));
    }
    let support = m.to_vector()?.support();
    Ok(Search::new(Field::S, m.r, m.n, kind, max_coords)?.with_support(&support))
}

/// Up to `limit` orientations of `m`, with whether the search was exhaustive.
pub fn orientations(m: &MatroidBases, kind: Kind, max_coords: u64, limit: usize) -> Result<(Vec<GPVector>, bool), Error> {
    let s = orientation_search(m, kind, max_coords)?;
    let mut out = Vec::new();
    let done = s.run(&mut |x| {
        out.push(s.to_vector(x));
        out.len() < limit
    });
    Ok((out, done))
}

/// Whether `v` satisfies the `kind` GP check and `Gr(h)` sends it to `[m]`.
pub fn is_realization(h: &Homomorphism, v: &GPVector, m: &GPVector, kind: Kind) -> Result<bool, Error> {
    if v.field() != h.source() {
        return Err(Error::FieldMismatch(h.source(), v.field()));
    }
    if m.field() != h.target() {
        return Err(Error::FieldMismatch(h.target(), m.field()));
    }
    if v.rank() != m.rank() || v.ground() != m.ground() {
        return Ok(false);
    }
    Ok(check_kind(v, kind)? && v.pushforward(h)?.projectively_equal(m))
}

/// Extends prescribed values on `A^r` to a GP function with the support of `v0`.
///
/// `a` is an `(r+1)`-subset `a_1 < … < a_{r+1}`; `phi_tilde[i]` is the value on
/// `A ∖ a_{i+1}` in increasing order. With
/// `D = ⨀_i φ_0(Â_i)/φ̃(Â_i)` over the `i` where `φ̃(Â_i) ≠ 0`, and
/// `λ_{a_i} = φ_0(Â_i)/φ̃(Â_i)` for those `i` (1 elsewhere), the result is
/// `φ(e_1, …, e_r) = D^{-1} (⨀ λ_{e_i}) φ_0(e_1, …, e_r)`.
pub fn extend_prescribed(v0: &GPVector, a: &[usize], phi_tilde: &[Element]) -> Result<GPVector, Error> {
    let (r, n, f) = (v0.rank(), v0.ground(), v0.field());
    let mut a = a.to_vec();
    a.sort_unstable();
    a.dedup();
    if a.len() != r + 1 || a.iter().any(|&x| x == 0 || x > n) {
        return Err(Error::Invalid(format!("{a:?} is not an {}-subset of [{n}]", r + 1)));
    }
    if phi_tilde.len() != r + 1 {
        return Err(Error::Invalid(format!("expected {} prescribed values, got {}", r + 1, phi_tilde.len())));
    }
    if let Some(t) = phi_tilde.iter().find(|t| t.field() != f) {
        return Err(Error::FieldMismatch(f, t.field()));
    }
    let hat = |i: usize| -> Vec<usize> { a.iter().enumerate().filter(|&(k, _)| k != i).map(|(_, &x)| x).collect() };
    let mut d = Element::one(f);
    let mut lambda: BTreeMap<usize, Element> = BTreeMap::new();
    for (i, pt) in phi_tilde.iter().enumerate() {
        let p0 = v0.coord(&hat(i));
        if p0.is_zero() != pt.is_zero() {
            return Err(Error::Invalid(format!(
                "prescribed value on {} does not match the support of the base point",
                fmt_subset(&hat(i), n)
            )));
        }
        if pt.is_zero() {
            continue;
        }
        let ratio = p0.div(pt)?;
        d = d.mul(&ratio)?;
        lambda.insert(a[i], ratio);
    }
    let d_inv = d.inverse().ok_or(Error::DivisionByZero)?;
    let one = Element::one(f);
    let coords = v0
        .subsets()
        .iter()
        .zip(v0.coords())
        .map(|(s, c)| {
            let mut x = d_inv.clone();
            for e in s {
                x = x.mul(lambda.get(e).unwrap_or(&one))?;
            }
            x.mul(c)
        })
        .collect::<Result<Vec<_>, Error>>()?;
    GPVector::new(f, r, n, coords)
}

/// The topology put on a finite hyperfield, encoded as a poset.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Encoding {
    /// 0 lies below every other element; the only neighbourhood of 0 is everything.
    ZeroCoarse,
    /// The discrete topology.
    Discrete,
}

impl Encoding {
    pub fn as_str(self) -> &'static str {
        match self {
            Encoding::ZeroCoarse => "0-coarse",
            Encoding::Discrete => "discrete",
        }
    }
}

/// One matroid's fiber under `κ` and whether it is open and closed.
#[derive(Clone, Debug)]
pub struct FiberOpenness {
    pub matroid: String,
    pub uniform: bool,
    pub size: usize,
    pub open: bool,
    pub closed: bool,
}

/// The four conditions of the openness equivalence for one encoding.
#[derive(Clone, Debug)]
pub struct OpennessReport {
    pub encoding: Encoding,
    /// `{0}` is open in the field.
    pub zero_open: bool,
    /// Every nonempty fiber is open.
    pub all_open: bool,
    /// Every nonempty fiber equals its closure.
    pub all_closed: bool,
    /// Some nonuniform matroid has a nonempty open fiber.
    pub nonuniform_open: Option<String>,
    /// Each chart `{φ(B) ≠ 0}` is open.
    pub charts_open: bool,
    pub fibers: Vec<FiberOpenness>,
    /// A nonuniform matroid with nonempty, non-open fiber.
    pub witness: Option<String>,
}

impl OpennessReport {
    /// Whether the four conditions agree.
    pub fn equivalent(&self) -> bool {
        let d = self.nonuniform_open.is_some();
        self.zero_open == self.all_open && self.all_open == self.all_closed && self.all_closed == d
    }
}

/// The field itself as a poset of points under `enc`.
pub fn field_poset(field: Field, enc: Encoding) -> Result<(Vec<Element>, Poset), Error> {
    let els = match field {
        Field::S => alloc::vec![Element::sign(0), Element::sign(1), Element::sign(-1)],
        Field::K => alloc::vec![Element::zero(Field::K), Element::one(Field::K)],
        _ => return Err(Error::Invalid(format!("openness is checked on finite fields (S, K), not {field}"))),
    };
    let labels = els.iter().map(|e| e.payload()).collect();
    let p = Poset::new(labels, |i, j| i == j || (enc == Encoding::ZeroCoarse && els[i].is_zero()))?;
    Ok((els, p))
}

/// Checks the openness equivalence on `Gr(r, F^n)` (strong) under `enc`.
pub fn check_zero_open(field: Field, r: usize, n: usize, enc: Encoding) -> Result<OpennessReport, Error> {
    let (_, fp) = field_poset(field, enc)?;
    let zero_open = fp.is_open(&BitSet::from_indices(fp.len(), [0]));
    let g = Grassmannian::enumerate(field, r, n, Kind::Strong)?;
    let poset = match enc {
        Encoding::ZeroCoarse => g.weak_map_poset(),
        Encoding::Discrete => Poset::new(g.chirotopes().to_vec(), |i, j| i == j)?,
    };
    // group points by support
    let mut groups: BTreeMap<Vec<bool>, Vec<usize>> = BTreeMap::new();
    for (i, p) in g.points().iter().enumerate() {
        groups.entry(p.support()).or_default().push(i);
    }
    let mut fibers = Vec::new();
    for (supp, idx) in groups.iter().rev() {
        let set = BitSet::from_indices(g.len(), idx.iter().copied());
        let m = g.points()[idx[0]].pushforward(&Homomorphism::kappa(field))?;
        fibers.push(FiberOpenness {
            matroid: m.chirotope()?,
            uniform: supp.iter().all(|&b| b),
            size: idx.len(),
            open: poset.is_open(&set),
            closed: poset.closure(&set) == set,
        });
    }
    let charts_open = subsets(n, r).iter().enumerate().all(|(c, _)| {
        let set = BitSet::from_indices(g.len(), g.points().iter().enumerate().filter(|(_, p)| !p.coords()[c].is_zero()).map(|(i, _)| i));
        poset.is_open(&set)
    });
    Ok(OpennessReport {
        encoding: enc,
        zero_open,
        all_open: fibers.iter().all(|f| f.open),
        all_closed: fibers.iter().all(|f| f.closed),
        nonuniform_open: fibers.iter().find(|f| !f.uniform && f.open).map(|f| f.matroid.clone()),
        charts_open,
        witness: fibers.iter().find(|f| !f.uniform && !f.open).map(|f| f.matroid.clone()),
        fibers,
    })
}

/// Both encodings.
pub fn check_zero_open_equivalences(field: Field, r: usize, n: usize) -> Result<[OpennessReport; 2], Error> {
    Ok([check_zero_open(field, r, n, Encoding::ZeroCoarse)?, check_zero_open(field, r, n, Encoding::Discrete)?])
}

/// The first source point in the closure of `⋃_{M ∈ S} Real(M)` that is not
/// over the closure of `S`, if any.
pub fn gluing_failure(h: &Homomorphism, src: &Grassmannian, tgt: &Grassmannian, s: &BitSet) -> Result<Option<usize>, Error> {
    let f = induced_map(h, src, tgt)?;
    let sp = src.weak_map_poset();
    let tp = tgt.weak_map_poset();
    let union = BitSet::from_indices(src.len(), (0..src.len()).filter(|&i| s.contains(f[i])));
    let lhs = sp.closure(&union);
    let sbar = tp.closure(s);
    let bad = lhs.iter().find(|&i| !sbar.contains(f[i]));
    Ok(bad)
}

pub fn gluing_containment(h: &Homomorphism, src: &Grassmannian, tgt: &Grassmannian, s: &BitSet) -> Result<bool, Error> {
    Ok(gluing_failure(h, src, tgt, s)?.is_none())
}

/// One row of the Dressian term table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TermRow {
    pub i: Vec<usize>,
    pub j: Vec<usize>,
    /// `(left subset, right subset, value)` with `None` for `−∞`.
    pub terms: Vec<(Vec<usize>, Vec<usize>, Option<Q>)>,
    pub max: Option<Q>,
    pub attained: usize,
    pub ok: bool,
}

#[derive(Clone, Debug)]
pub struct DressianReport {
    pub member: bool,
    pub rows: Vec<TermRow>,
}

/// Membership of `x` (finite exactly on the bases of `m`) in the Dressian of
/// `m`, in max-plus arithmetic: in every GP relation the largest finite term
/// value is attained at least twice.
pub fn dressian_member(x: &BTreeMap<Vec<usize>, Q>, m: &MatroidBases) -> Result<DressianReport, Error> {
    if !m.is_matroid() {
        return Err(Error::Invalid(String::from("the given sets are not the bases of a matroid")));
    }
    for k in x.keys() {
        if !m.is_basis(k) {
            return Err(Error::Invalid(format!("{} is not a basis", fmt_subset(k, m.n))));
        }
    }
    if let Some(b) = m.bases.iter().find(|b| !x.contains_key(*b)) {
        return Err(Error::Invalid(format!("no value for basis {}", fmt_subset(b, m.n))));
    }
    let subs = subsets(m.n, m.r);
    let mut seen = alloc::collections::BTreeSet::new();
    let mut rows = Vec::new();
    for rel in relations(m.n, m.r, false) {
        let mut key: Vec<(usize, usize)> = rel.terms.iter().map(|&(a, b, _)| (a.min(b), a.max(b))).collect();
        key.sort_unstable();
        // a product against itself always attains its maximum twice
        let trivial = key.windows(2).all(|w| w[0] == w[1]);
        if trivial || !seen.insert(key) {
            continue;
        }
        let terms: Vec<(Vec<usize>, Vec<usize>, Option<Q>)> = rel
            .terms
            .iter()
            .map(|&(a, b, _)| {
                let (sa, sb) = (&subs[a], &subs[b]);
                let v = match (x.get(sa), x.get(sb)) {
                    (Some(p), Some(q)) => Some(p + q),
                    _ => None,
                };
                (sa.clone(), sb.clone(), v)
            })
            .collect();
        let max = terms.iter().filter_map(|t| t.2.clone()).max();
        let attained = match &max {
            Some(mx) => terms.iter().filter(|t| t.2.as_ref() == Some(mx)).count(),
            None => 0,
        };
        let ok = max.is_none() || attained >= 2;
        rows.push(TermRow { i: rel.i, j: rel.j, terms, max, attained, ok });
    }
    Ok(DressianReport { member: rows.iter().all(|r| r.ok), rows })
}

/// One time step of the homotopy `H_t` applied to a realization.
#[derive(Clone, Debug)]
pub struct HomotopyStep {
    pub t: Q,
    pub exact: bool,
    pub strong: bool,
    pub same_fiber: bool,
    /// At `t = 1`: whether `H_1(v)` is the retraction of `v` included back.
    pub retracts: Option<bool>,
}

impl HomotopyStep {
    pub fn passed(&self) -> bool {
        self.strong && self.same_fiber && self.retracts != Some(false)
    }
}

/// The retraction onto the circle or sign subfield and its section.
fn retraction(f: Field) -> Result<(Homomorphism, Homomorphism), Error> {
    crate::structures::sections()
        .into_iter()
        .find(|(s, _)| s.target() == f)
        .map(|(s, r)| (r, s))
        .ok_or_else(|| Error::Invalid(format!("no phase retraction out of {f}")))
}

/// Applies `H_t` to every coordinate of `v` (over TR, TT, Triangle or TC) and
/// checks that the result is still a strong GP function over the same
/// phase matroid. Irrational moduli are checked to the working tolerance.
pub fn homotopy_in_fiber(prec: &mut Prec, v: &GPVector, ts: &[Q]) -> Result<Vec<HomotopyStep>, Error> {
    let (ph, inc) = retraction(v.field())?;
    let base = v.pushforward(&ph)?;
    let mut out = Vec::new();
    for t in ts {
        let vals = v.coords().iter().map(|c| homotopy_h(prec, c, t)).collect::<Result<Vec<_>, _>>()?;
        let exact: Option<Vec<Element>> = vals.iter().map(|x| x.exact().cloned()).collect();
        let step = match exact {
            Some(coords) => {
                let w = GPVector::new(v.field(), v.rank(), v.ground(), coords)?;
                let retracts = t.is_one().then(|| Ok::<_, Error>(w == base.pushforward(&inc)?)).transpose()?;
                HomotopyStep { t: t.clone(), exact: true, strong: w.is_strong()?, same_fiber: w.pushforward(&ph)? == base, retracts }
            }
            None => {
                let approx: Vec<(BigFloat, Turn)> = vals
                    .iter()
                    .map(|x| match x {
                        HomotopyValue::Exact(e) => (prec.q(e.modulus()), e.angle().clone()),
                        HomotopyValue::Approx { modulus, angle, .. } => (modulus.clone(), angle.clone()),
                    })
                    .collect();
                let same = approx.iter().zip(base.coords()).all(|((m, a), b)| {
                    if b.is_zero() {
                        m.is_zero()
                    } else {
                        !m.is_zero() && a == b.angle()
                    }
                });
                HomotopyStep { t: t.clone(), exact: false, strong: approx_strong(prec, v, &approx)?, same_fiber: same, retracts: None }
            }
        };
        out.push(step);
    }
    Ok(out)
}

/// The strong check on coordinates with floating moduli: the terms whose
/// modulus is within tolerance of the largest decide, as in the exact rules.
fn approx_strong(prec: &mut Prec, v: &GPVector, c: &[(BigFloat, Turn)]) -> Result<bool, Error> {
    let f = v.field();
    for rel in relations(v.ground(), v.rank(), false) {
        let terms: Vec<(BigFloat, Turn)> = rel
            .terms
            .iter()
            .filter(|&&(a, b, _)| !c[a].0.is_zero() && !c[b].0.is_zero())
            .map(|&(a, b, neg)| {
                let m = prec.mul(&c[a].0, &c[b].0);
                let mut t = c[a].1.add(&c[b].1);
                if neg && f.signed_real() || neg && f == Field::TC {
                    t = t.antipode();
                }
                (m, t)
            })
            .collect();
        if terms.is_empty() {
            continue;
        }
        let ok = if f == Field::Triangle {
            let mut sum = prec.int(0);
            let mut mx = prec.int(0);
            for (m, _) in &terms {
                sum = prec.add(&sum, m);
                if Prec::cmp(m, &mx) == Ordering::Greater {
                    mx = m.clone();
                }
            }
            let twice = prec.add(&mx, &mx);
            Prec::cmp(&twice, &sum) != Ordering::Greater || prec.close(&twice, &sum)
        } else {
            let mx = terms.iter().map(|t| &t.0).fold(prec.int(0), |a, b| if Prec::cmp(b, &a) == Ordering::Greater { b.clone() } else { a });
            let surrogate = terms
                .iter()
                .map(|(m, t)| {
                    let modulus = if prec.close(m, &mx) { Q::one() } else { q(1, 2) };
                    Element::polar(f, modulus, t.clone())
                })
                .collect::<Result<Vec<_>, _>>()?;
            contains_zero(&surrogate)?
        };
        if !ok {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Torus action: `v(B) ⊙ ⨀_{e ∈ B} λ_e`, which preserves every GP relation.
pub fn torus_scale(v: &GPVector, lambda: &[Element]) -> Result<GPVector, Error> {
    if lambda.len() != v.ground() {
        return Err(Error::Invalid(format!("need {} scalars, got {}", v.ground(), lambda.len())));
    }
    let coords = v
        .subsets()
        .iter()
        .zip(v.coords())
        .map(|(s, c)| s.iter().try_fold(c.clone(), |x, &e| x.mul(&lambda[e - 1])))
        .collect::<Result<Vec<_>, _>>()?;
    GPVector::new(v.field(), v.rank(), v.ground(), coords)
}

/// Adds `c` to every coordinate.
pub fn shift_all(x: &BTreeMap<Vec<usize>, Q>, c: &Q) -> BTreeMap<Vec<usize>, Q> {
    x.iter().map(|(k, v)| (k.clone(), v + c)).collect()
}
