//! Homomorphisms between the registered hyperfields, their verification,
//! and the structures they represent: orderings, norms, nonarchimedean
//! norms, arguments and Φ-arguments.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Signed, Zero};

use crate::dequant::{distance_to_set, Complex, Prec};
use crate::error::Error;
use crate::hyperfield::{default_probes, hypersum, Check, Element, Field, Status};
use crate::num::{fmt_rational, q, Turn, Q};

pub type MapFn = Arc<dyn Fn(&Element) -> Result<Element, Error> + Send + Sync>;

/// The closed-form maps that appear in the diagram.
#[derive(Clone)]
pub enum MapKind {
    Identity,
    /// Same payload read in a larger field.
    Inclusion,
    /// `x ↦ x/|x|`, `0 ↦ 0`.
    Phase,
    /// `x ↦ |x|`.
    Modulus,
    /// `0 ↦ 0`, everything else to 1 in K.
    Kappa,
    Custom(MapFn),
}

impl MapKind {
    pub fn tag(&self) -> &'static str {
        match self {
            MapKind::Identity => "id",
            MapKind::Inclusion => "inc",
            MapKind::Phase => "ph",
            MapKind::Modulus => "abs",
            MapKind::Kappa => "kappa",
            MapKind::Custom(_) => "custom",
        }
    }

    pub fn parse(s: &str) -> Option<MapKind> {
        Some(match s.to_ascii_lowercase().as_str() {
            "id" | "identity" => MapKind::Identity,
            "inc" | "inclusion" => MapKind::Inclusion,
            "ph" | "phase" => MapKind::Phase,
            "abs" | "modulus" => MapKind::Modulus,
            "kappa" => MapKind::Kappa,
            _ => return None,
        })
    }
}

/// A candidate map between two registered fields. Registered arrows are
/// homomorphisms; arbitrary candidates can be built and then verified.
#[derive(Clone)]
pub struct Homomorphism {
    name: String,
    source: Field,
    target: Field,
    kind: MapKind,
}

impl fmt::Debug for Homomorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

impl Homomorphism {
    pub fn new(kind: MapKind, source: Field, target: Field) -> Self {
        let name = format!("{}:{}->{}", kind.tag(), source.tag(), target.tag());
        Homomorphism { name, source, target, kind }
    }

    pub fn custom(name: &str, source: Field, target: Field, f: MapFn) -> Self {
        Homomorphism { name: String::from(name), source, target, kind: MapKind::Custom(f) }
    }

    pub fn identity(f: Field) -> Self {
        Homomorphism::new(MapKind::Identity, f, f)
    }

    pub fn inclusion(source: Field, target: Field) -> Self {
        Homomorphism::new(MapKind::Inclusion, source, target)
    }

    pub fn phase(source: Field, target: Field) -> Self {
        Homomorphism::new(MapKind::Phase, source, target)
    }

    pub fn modulus(source: Field, target: Field) -> Self {
        Homomorphism::new(MapKind::Modulus, source, target)
    }

    pub fn kappa(source: Field) -> Self {
        Homomorphism::new(MapKind::Kappa, source, Field::K)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn source(&self) -> Field {
        self.source
    }

    pub fn target(&self) -> Field {
        self.target
    }

    pub fn kind(&self) -> &MapKind {
        &self.kind
    }

    pub fn apply(&self, x: &Element) -> Result<Element, Error> {
        if x.field() != self.source {
            return Err(Error::FieldMismatch(self.source, x.field()));
        }
        let t = self.target;
        let y = match &self.kind {
            MapKind::Identity | MapKind::Inclusion => x.relabel(t)?,
            MapKind::Phase => {
                if x.is_zero() {
                    Element::zero(t)
                } else {
                    Element::polar(t, Q::one(), x.angle().clone())?
                }
            }
            MapKind::Modulus => Element::polar(t, x.modulus().clone(), Turn::zero())?,
            MapKind::Kappa => {
                if x.is_zero() {
                    Element::zero(t)
                } else {
                    Element::one(t)
                }
            }
            MapKind::Custom(f) => f(x)?,
        };
        if y.field() != t {
            return Err(Error::FieldMismatch(t, y.field()));
        }
        Ok(y)
    }

    /// `then ∘ self`.
    pub fn then(&self, then: &Homomorphism) -> Result<Homomorphism, Error> {
        if self.target != then.source {
            return Err(Error::FieldMismatch(self.target, then.source));
        }
        let (a, b) = (self.clone(), then.clone());
        let name = format!("{}∘{}", then.name, self.name);
        Ok(Homomorphism::custom(&name, self.source, then.target, Arc::new(move |x| b.apply(&a.apply(x)?))))
    }
}

/// An arrow of the diagram; dashed arrows are sections of a phase retraction.
#[derive(Clone, Debug)]
pub struct Arrow {
    pub hom: Homomorphism,
    pub dashed: bool,
}

/// All arrows of the diagram of hyperfields: the solid homomorphisms and
/// the four dashed inclusions.
pub fn diagram_registry() -> Vec<Arrow> {
    use Field::*;
    let solid = [
        Homomorphism::inclusion(R, C),
        Homomorphism::phase(R, S),
        Homomorphism::modulus(C, Triangle),
        Homomorphism::phase(C, P),
        Homomorphism::phase(Triangle, K),
        Homomorphism::identity_between(P, Phi),
        Homomorphism::modulus(P, K),
        Homomorphism::inclusion(S, P),
        Homomorphism::inclusion(S, Phi),
        Homomorphism::modulus(Phi, K),
        Homomorphism::inclusion(TR, TC),
        Homomorphism::phase(TR, S),
        Homomorphism::modulus(TC, TT),
        Homomorphism::phase(TC, Phi),
        Homomorphism::phase(TT, K),
    ];
    let dashed = [
        Homomorphism::inclusion(S, TR),
        Homomorphism::inclusion(K, TT),
        Homomorphism::inclusion(K, Triangle),
        Homomorphism::inclusion(Phi, TC),
    ];
    solid
        .into_iter()
        .map(|hom| Arrow { hom, dashed: false })
        .chain(dashed.into_iter().map(|hom| Arrow { hom, dashed: true }))
        .collect()
}

impl Homomorphism {
    /// The identity on payloads between two fields with the same elements.
    pub fn identity_between(source: Field, target: Field) -> Self {
        Homomorphism::new(MapKind::Identity, source, target)
    }
}

/// A registered homomorphism by name (`ph:TR->S`), including `kappa:F->K`
/// and `id:F->F` for every field.
pub fn lookup(name: &str) -> Option<Homomorphism> {
    let all = diagram_registry().into_iter().map(|a| a.hom);
    let extra = Field::ALL.iter().flat_map(|&f| [Homomorphism::kappa(f), Homomorphism::identity(f)]);
    all.chain(extra).find(|h| h.name().eq_ignore_ascii_case(name))
}

/// The registered homomorphism from `source` to `target`: a diagram arrow
/// if there is one, otherwise the identity or κ.
pub fn find_hom(source: Field, target: Field) -> Option<Homomorphism> {
    if source == target {
        return Some(Homomorphism::identity(source));
    }
    if let Some(a) = diagram_registry().into_iter().find(|a| a.hom.source() == source && a.hom.target() == target) {
        return Some(a.hom);
    }
    (target == Field::K).then(|| Homomorphism::kappa(source))
}

/// Section/retraction pairs `(s, r)` with `r ∘ s = id`.
pub fn sections() -> Vec<(Homomorphism, Homomorphism)> {
    diagram_registry()
        .into_iter()
        .filter(|a| a.dashed)
        .map(|a| {
            let r = Homomorphism::phase(a.hom.target(), a.hom.source());
            (a.hom, r)
        })
        .collect()
}

/// Multiplicative subgroups used for quotients `F/_m G`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Subgroup {
    Trivial,
    PositiveReals,
    UnitCircle,
    Signs,
}

impl core::str::FromStr for Subgroup {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        Ok(match s.to_ascii_lowercase().as_str() {
            "trivial" => Subgroup::Trivial,
            "positivereals" | "positive-reals" => Subgroup::PositiveReals,
            "unitcircle" | "unit-circle" => Subgroup::UnitCircle,
            "signs" => Subgroup::Signs,
            _ => return Err(Error::Parse(format!("unknown subgroup `{s}`"))),
        })
    }
}

/// The quotient `F/_m G` as a registered field together with the quotient map.
pub fn quotient(f: Field, g: Subgroup) -> Result<(Field, Homomorphism), Error> {
    use Field::*;
    use Subgroup::*;
    let h = match (f, g) {
        (_, Trivial) => Homomorphism::identity(f),
        (C, UnitCircle) => Homomorphism::modulus(C, Triangle),
        (C, PositiveReals) => Homomorphism::phase(C, P),
        (R, PositiveReals) | (TR, PositiveReals) => Homomorphism::phase(f, S),
        (TC, UnitCircle) => Homomorphism::modulus(TC, TT),
        (TC, PositiveReals) => Homomorphism::phase(TC, Phi),
        (TR, Signs) => Homomorphism::modulus(TR, TT),
        (S, Signs) | (P, UnitCircle) | (Phi, UnitCircle) | (Triangle, PositiveReals) | (TT, PositiveReals) => {
            Homomorphism::kappa(f)
        }
        _ => return Err(Error::NotRegistered(format!("quotient {f}/{g:?}"))),
    };
    Ok((h.target(), h))
}

/// A point of a sum `x ⊞ y` in the source. Points of a classical sum over C
/// are rounded to rationals and flagged as approximate.
#[derive(Clone, Debug)]
struct SumPoint {
    z: Element,
    approx: bool,
}

const ROUND_DIGITS: usize = 36;

fn approx_tolerance() -> Q {
    q(1, 1_000_000_000_000_000_000)
}

/// Probe points of `x ⊞ y`: an exact singleton over R, a rounded singleton
/// over C, and the probes of the hypersum otherwise.
fn sum_points(prec: &mut Prec, x: &Element, y: &Element) -> Result<Vec<SumPoint>, Error> {
    match x.field() {
        Field::R => {
            let z = Element::real(Field::R, x.real_value() + y.real_value())?;
            Ok(alloc::vec![SumPoint { z, approx: false }])
        }
        Field::C => {
            let cx = Complex::from_element(prec, x);
            let cy = Complex::from_element(prec, y);
            let (m, t) = cx.add(&cy, prec).to_polar(prec);
            let scale = prec.q(&(x.modulus() + y.modulus()));
            let z = if prec.negligible(&m, &scale) {
                Element::zero(Field::C)
            } else {
                let mq = prec.to_rational(&m, ROUND_DIGITS);
                let tq = prec.to_rational(&t, ROUND_DIGITS);
                Element::polar(Field::C, mq, Turn::new(tq))?
            };
            Ok(alloc::vec![SumPoint { z, approx: true }])
        }
        _ => Ok(hypersum(x, y)?.probes().into_iter().map(|z| SumPoint { z, approx: false }).collect()),
    }
}

/// Whether `w` lies in `a ⊞ b` of the target, within tolerance when `approx`.
fn target_contains(prec: &mut Prec, a: &Element, b: &Element, w: &Element, approx: bool) -> Result<bool, Error> {
    let f = a.field();
    match f {
        Field::R if !approx => Ok(*w == Element::real(f, a.real_value() + b.real_value())?),
        Field::R | Field::C => {
            let s = Complex::from_element(prec, a).add(&Complex::from_element(prec, b), prec);
            let cw = Complex::from_element(prec, w);
            let d = Complex { re: cw.re.sub(&s.re, prec.bits(), RM), im: cw.im.sub(&s.im, prec.bits(), RM) };
            let (m, _) = d.to_polar(prec);
            Ok(within(prec, &m, a, b))
        }
        _ => {
            let set = hypersum(a, b)?;
            if !approx {
                return Ok(set.contains(w));
            }
            let cw = Complex::from_element(prec, w);
            let d = distance_to_set(prec, &set, &cw);
            Ok(within(prec, &d, a, b))
        }
    }
}

const RM: astro_float::RoundingMode = astro_float::RoundingMode::ToEven;

fn within(prec: &mut Prec, d: &astro_float::BigFloat, a: &Element, b: &Element) -> bool {
    let tol = prec.q(&(approx_tolerance() * (Q::one() + a.modulus() + b.modulus())));
    d.cmp(&tol).is_some_and(|c| c <= 0)
}

/// Result of checking a candidate map.
#[derive(Clone, Debug)]
pub struct HomReport {
    pub name: String,
    pub source: Field,
    pub target: Field,
    pub probes: usize,
    pub checks: Vec<Check>,
}

impl HomReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status == Status::Pass)
    }

    pub fn first_failure(&self) -> Option<&Check> {
        self.checks.iter().find(|c| c.status == Status::Fail)
    }
}

fn first<T, F: FnMut(&T) -> Option<String>>(items: &[T], mut f: F) -> Option<String> {
    items.iter().find_map(|t| f(t))
}

/// Checks `h(0) = 0`, `h(1) = 1`, multiplicativity and the containment
/// `h(x ⊞ y) ⊆ h(x) ⊞ h(y)` on all probe pairs. Sums over R are exact; sums
/// over C are evaluated at high precision and compared within tolerance.
pub fn verify_homomorphism(h: &Homomorphism, probes: &[Element]) -> HomReport {
    let mut prec = Prec::default();
    let s = h.source();
    let mut checks = Vec::new();
    let apply = |x: &Element| h.apply(x).map_err(|e| format!("{}: {e}", x));
    let zero = match apply(&Element::zero(s)) {
        Ok(z) if z.is_zero() => None,
        Ok(z) => Some(format!("h(0) = {z}")),
        Err(e) => Some(e),
    };
    checks.push(Check::new("zero", zero, true));
    let one = match apply(&Element::one(s)) {
        Ok(o) if o.is_one() => None,
        Ok(o) => Some(format!("h(1) = {o}")),
        Err(e) => Some(e),
    };
    checks.push(Check::new("one", one, true));
    let pairs: Vec<(Element, Element)> =
        probes.iter().flat_map(|x| probes.iter().map(move |y| (x.clone(), y.clone()))).collect();
    let mult = first(&pairs, |(x, y)| {
        let xy = x.mul(y).ok()?;
        match (apply(x), apply(y), apply(&xy)) {
            (Ok(a), Ok(b), Ok(c)) => match a.mul(&b) {
                Ok(ab) if ab == c => None,
                _ => Some(format!("h({x}·{y}) = {c} but h({x})·h({y}) = {}", a.mul(&b).map(|e| e.literal()).unwrap_or_default())),
            },
            (Err(e), _, _) | (_, Err(e), _) | (_, _, Err(e)) => Some(e),
        }
    });
    checks.push(Check::new("multiplicative", mult, true));
    let cont = first(&pairs, |(x, y)| {
        let pts = match sum_points(&mut prec, x, y) {
            Ok(p) => p,
            Err(e) => return Some(format!("{x} ⊞ {y}: {e}")),
        };
        let (a, b) = match (apply(x), apply(y)) {
            (Ok(a), Ok(b)) => (a, b),
            (Err(e), _) | (_, Err(e)) => return Some(e),
        };
        for p in pts {
            let w = match apply(&p.z) {
                Ok(w) => w,
                Err(e) => return Some(e),
            };
            match target_contains(&mut prec, &a, &b, &w, p.approx) {
                Ok(true) => {}
                Ok(false) => return Some(format!("{} ∈ {x} ⊞ {y} maps to {w} ∉ {a} ⊞ {b}", p.z)),
                Err(e) => return Some(format!("{a} ⊞ {b}: {e}")),
            }
        }
        None
    });
    checks.push(Check::new("containment", cont, true));
    HomReport { name: String::from(h.name()), source: s, target: h.target(), probes: probes.len(), checks }
}

/// Agreement of two parallel paths of solid arrows.
#[derive(Clone, Debug)]
pub struct PathCheck {
    pub from: Field,
    pub to: Field,
    pub left: String,
    pub right: String,
    pub witness: Option<String>,
}

fn paths_from(arrows: &[Homomorphism], from: Field) -> Vec<Vec<Homomorphism>> {
    let mut out = Vec::new();
    for a in arrows.iter().filter(|a| a.source() == from) {
        out.push(alloc::vec![a.clone()]);
        for mut rest in paths_from(arrows, a.target()) {
            rest.insert(0, a.clone());
            out.push(rest);
        }
    }
    out
}

fn compose_path(path: &[Homomorphism]) -> Homomorphism {
    let mut h = path[0].clone();
    for g in &path[1..] {
        h = h.then(g).expect("paths are composable");
    }
    h
}

/// Compares every pair of parallel paths of solid arrows on the probes of
/// their common source.
pub fn check_diagram_commutes() -> Vec<PathCheck> {
    let solid: Vec<Homomorphism> = diagram_registry().into_iter().filter(|a| !a.dashed).map(|a| a.hom).collect();
    let mut out = Vec::new();
    for &f in Field::ALL.iter() {
        let mut by_target: BTreeMap<&'static str, Vec<Homomorphism>> = BTreeMap::new();
        for p in paths_from(&solid, f) {
            let h = compose_path(&p);
            by_target.entry(h.target().tag()).or_default().push(h);
        }
        let probes = default_probes(f);
        for hs in by_target.values() {
            for other in &hs[1..] {
                let base = &hs[0];
                let witness = probes.iter().find_map(|x| match (base.apply(x), other.apply(x)) {
                    (Ok(a), Ok(b)) if a == b => None,
                    (a, b) => Some(format!("{x}: {a:?} vs {b:?}")),
                });
                out.push(PathCheck {
                    from: f,
                    to: base.target(),
                    left: String::from(base.name()),
                    right: String::from(other.name()),
                    witness,
                });
            }
        }
    }
    out
}

/// `r ∘ s = id` on every probe of the section's source.
pub fn check_sections() -> Vec<PathCheck> {
    sections()
        .into_iter()
        .map(|(s, r)| {
            let witness = default_probes(s.source()).into_iter().find_map(|x| match s.apply(&x).and_then(|y| r.apply(&y)) {
                Ok(y) if y == x => None,
                other => Some(format!("{x} ↦ {other:?}")),
            });
            PathCheck { from: s.source(), to: s.source(), left: format!("{}∘{}", r.name(), s.name()), right: format!("id:{}", s.source()), witness }
        })
        .collect()
}

pub type Predicate = Arc<dyn Fn(&Element) -> bool + Send + Sync>;

/// A set of positives `F_+`.
#[derive(Clone)]
pub struct Ordering {
    pub field: Field,
    positives: Predicate,
}

impl fmt::Debug for Ordering {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ordering({})", self.field)
    }
}

impl Ordering {
    pub fn new(field: Field, positives: Predicate) -> Self {
        Ordering { field, positives }
    }

    pub fn is_positive(&self, x: &Element) -> bool {
        (self.positives)(x)
    }
}

/// Trichotomy and closure of `F_+` under ⊞ and ⊙ on the probes.
pub fn verify_ordering(o: &Ordering, probes: &[Element]) -> Vec<Check> {
    let mut prec = Prec::default();
    let tri = first(probes, |x| {
        let n = [x.is_zero(), o.is_positive(x), o.is_positive(&x.neg())].iter().filter(|&&b| b).count();
        (n != 1).then(|| format!("{x} is in {n} of F+, {{0}}, -F+"))
    });
    let pos: Vec<Element> = probes.iter().filter(|x| o.is_positive(x)).cloned().collect();
    let pairs: Vec<(Element, Element)> = pos.iter().flat_map(|x| pos.iter().map(move |y| (x.clone(), y.clone()))).collect();
    let sum = first(&pairs, |(x, y)| match sum_points(&mut prec, x, y) {
        Ok(pts) => pts.into_iter().find(|p| !o.is_positive(&p.z)).map(|p| format!("{} ∈ {x} ⊞ {y}", p.z)),
        Err(e) => Some(format!("{e}")),
    });
    let prod = first(&pairs, |(x, y)| match x.mul(y) {
        Ok(z) if o.is_positive(&z) => None,
        Ok(z) => Some(format!("{x}·{y} = {z}")),
        Err(e) => Some(format!("{e}")),
    });
    alloc::vec![
        Check::new("trichotomy", tri, true),
        Check::new("sum_closed", sum, true),
        Check::new("product_closed", prod, true),
    ]
}

fn failure(checks: &[Check]) -> Option<String> {
    checks
        .iter()
        .find(|c| c.status == Status::Fail)
        .map(|c| format!("{}: {}", c.axiom, c.witness.clone().unwrap_or_default()))
}

/// `F_+ = h^{-1}(1)` for a homomorphism to S, verified on the default probes.
pub fn ordering_from_hom(h: &Homomorphism) -> Result<Ordering, Error> {
    if h.target() != Field::S {
        return Err(Error::Invalid(format!("{} does not map to S", h.name())));
    }
    let rep = verify_homomorphism(h, &default_probes(h.source()));
    if let Some(w) = failure(&rep.checks) {
        return Err(Error::Invalid(format!("{} is not a homomorphism: {w}", h.name())));
    }
    let g = h.clone();
    let o = Ordering::new(h.source(), Arc::new(move |x| g.apply(x).map(|y| y.is_one()).unwrap_or(false)));
    if let Some(w) = failure(&verify_ordering(&o, &default_probes(h.source()))) {
        return Err(Error::Invalid(w));
    }
    Ok(o)
}

/// The sign map of an ordering, verified on the default probes.
pub fn hom_from_ordering(o: &Ordering) -> Result<Homomorphism, Error> {
    if let Some(w) = failure(&verify_ordering(o, &default_probes(o.field))) {
        return Err(Error::Invalid(w));
    }
    let p = o.positives.clone();
    let name = format!("sign:{}->S", o.field.tag());
    Ok(Homomorphism::custom(
        &name,
        o.field,
        Field::S,
        Arc::new(move |x| {
            Ok(if x.is_zero() {
                Element::sign(0)
            } else if p(x) {
                Element::sign(1)
            } else {
                Element::sign(-1)
            })
        }),
    ))
}

pub type NormFn = Arc<dyn Fn(&Element) -> Q + Send + Sync>;
pub type ArgFn = Arc<dyn Fn(&Element) -> Option<Turn> + Send + Sync>;

/// The axioms of a structure checked directly, next to the equivalent
/// homomorphism condition into the representing field.
#[derive(Clone, Debug)]
pub struct LemmaReport {
    pub structure: &'static str,
    pub representing: Field,
    pub axioms: Vec<Check>,
    pub hom: HomReport,
}

impl LemmaReport {
    pub fn axioms_pass(&self) -> bool {
        self.axioms.iter().all(|c| c.status == Status::Pass)
    }

    pub fn hom_passes(&self) -> bool {
        self.hom.passed()
    }

    /// The two formulations give the same verdict.
    pub fn agree(&self) -> bool {
        self.axioms_pass() == self.hom_passes()
    }
}

fn sum_triples(prec: &mut Prec, probes: &[Element]) -> Result<Vec<(Element, Element, SumPoint)>, String> {
    let mut out = Vec::new();
    for x in probes {
        for y in probes {
            let pts = sum_points(prec, x, y).map_err(|e| format!("{x} ⊞ {y}: {e}"))?;
            out.extend(pts.into_iter().map(|p| (x.clone(), y.clone(), p)));
        }
    }
    Ok(out)
}

fn pairs(probes: &[Element]) -> Vec<(Element, Element)> {
    probes.iter().flat_map(|x| probes.iter().map(move |y| (x.clone(), y.clone()))).collect()
}

fn verify_normlike(
    field: Field,
    name: &str,
    f: NormFn,
    probes: &[Element],
    ultrametric: bool,
) -> LemmaReport {
    let mut prec = Prec::default();
    let definite = first(probes, |x| {
        let v = f(x);
        (v.is_negative() || v.is_zero() != x.is_zero()).then(|| format!("|{x}| = {}", fmt_rational(&v)))
    });
    let mult = first(&pairs(probes), |(x, y)| {
        let xy = x.mul(y).ok()?;
        (f(&xy) != f(x) * f(y)).then(|| format!("|{x}·{y}| ≠ |{x}|·|{y}|"))
    });
    let tol = approx_tolerance();
    let ineq = match sum_triples(&mut prec, probes) {
        Err(e) => Some(e),
        Ok(ts) => first(&ts, |(x, y, p)| {
            let bound = if ultrametric { f(x).max(f(y)) } else { f(x) + f(y) };
            let slack = if p.approx { tol.clone() * (Q::one() + &bound) } else { Q::zero() };
            (f(&p.z) > bound + slack).then(|| format!("{} ∈ {x} ⊞ {y} has norm {}", p.z, fmt_rational(&f(&p.z))))
        }),
    };
    let target = if ultrametric { Field::TT } else { Field::Triangle };
    let g = f.clone();
    let hom = Homomorphism::custom(
        &format!("{name}:{}->{}", field.tag(), target.tag()),
        field,
        target,
        Arc::new(move |x| Element::real(target, g(x))),
    );
    LemmaReport {
        structure: if ultrametric { "nonarchimedean_norm" } else { "norm" },
        representing: target,
        axioms: alloc::vec![
            Check::new("definite", definite, true),
            Check::new("multiplicative", mult, true),
            Check::new(if ultrametric { "ultrametric" } else { "triangle" }, ineq, true),
        ],
        hom: verify_homomorphism(&hom, probes),
    }
}

/// Norm axioms (`|x| = 0 ⇔ x = 0`, multiplicative, `|z| ≤ |x| + |y|` for
/// `z ∈ x ⊞ y`) against the condition that the norm is a homomorphism to Triangle.
pub fn verify_norm(field: Field, name: &str, f: NormFn, probes: &[Element]) -> LemmaReport {
    verify_normlike(field, name, f, probes, false)
}

/// As [`verify_norm`] with `|z| ≤ max(|x|, |y|)`, against homomorphisms to TT.
pub fn verify_nonarchimedean_norm(field: Field, name: &str, f: NormFn, probes: &[Element]) -> LemmaReport {
    verify_normlike(field, name, f, probes, true)
}

/// Distance between two turns along the circle.
fn turn_distance(a: &Turn, b: &Turn) -> Q {
    let d = a.sub(b).value().clone();
    let e = Q::one() - &d;
    if d < e {
        d
    } else {
        e
    }
}

/// Whether `c` lies on the shortest arc from `a` to `b` (not antipodal).
/// `open` excludes the endpoints; `slack` widens the arc.
fn on_shortest_arc(a: &Turn, b: &Turn, c: &Turn, open: bool, slack: &Q) -> bool {
    let d = b.sub(a).value().clone();
    let (start, len) = if d < crate::num::half() { (a.clone(), d) } else { (b.clone(), Q::one() - d) };
    let off = c.sub(&start).value().clone();
    if slack.is_positive() {
        return off <= len.clone() + slack || (Q::one() - off) <= slack.clone();
    }
    if open {
        off.is_positive() && off < len
    } else {
        off <= len
    }
}

fn verify_arglike(field: Field, name: &str, f: ArgFn, probes: &[Element], closed: bool) -> LemmaReport {
    let mut prec = Prec::default();
    let definite = first(probes, |x| (f(x).is_none() != x.is_zero()).then(|| format!("arg({x}) = {:?}", f(x))));
    let mult = first(&pairs(probes), |(x, y)| {
        let xy = x.mul(y).ok()?;
        let ok = match (f(x), f(y), f(&xy)) {
            (Some(a), Some(b), Some(c)) => a.add(&b) == c,
            (None, _, None) | (_, None, None) => true,
            _ => false,
        };
        (!ok).then(|| format!("arg({x}·{y}) ≠ arg({x}) + arg({y})"))
    });
    let tol = approx_tolerance();
    let arc = match sum_triples(&mut prec, probes) {
        Err(e) => Some(e),
        Ok(ts) => first(&ts, |(x, y, p)| {
            let slack = if p.approx { tol.clone() } else { Q::zero() };
            let eq = |a: &Turn, b: &Turn| turn_distance(a, b) <= slack;
            let ok = match (f(x), f(y), f(&p.z)) {
                (None, b, c) => match (b, c) {
                    (Some(b), Some(c)) => eq(&b, &c),
                    (None, None) => true,
                    _ => false,
                },
                (a, None, c) => match (a, c) {
                    (Some(a), Some(c)) => eq(&a, &c),
                    _ => false,
                },
                (Some(a), Some(b), c) if a == b => c.is_some_and(|c| eq(&a, &c)),
                (Some(a), Some(b), c) if b == a.antipode() => {
                    closed || c.is_none_or(|c| eq(&a, &c) || eq(&b, &c))
                }
                (Some(a), Some(b), Some(c)) => on_shortest_arc(&a, &b, &c, !closed, &slack),
                (Some(_), Some(_), None) => false,
            };
            (!ok).then(|| format!("{} ∈ {x} ⊞ {y} has argument {:?}", p.z, f(&p.z)))
        }),
    };
    let target = if closed { Field::Phi } else { Field::P };
    let g = f.clone();
    let hom = Homomorphism::custom(
        &format!("{name}:{}->{}", field.tag(), target.tag()),
        field,
        target,
        Arc::new(move |x| match g(x) {
            Some(t) => Element::unit(target, t),
            None => Ok(Element::zero(target)),
        }),
    );
    LemmaReport {
        structure: if closed { "phi_argument" } else { "argument" },
        representing: target,
        axioms: alloc::vec![
            Check::new("definite", definite, true),
            Check::new("multiplicative", mult, true),
            Check::new(if closed { "closed_arc" } else { "open_arc" }, arc, true),
        ],
        hom: verify_homomorphism(&hom, probes),
    }
}

/// Argument axioms (the argument of a sum lies on the shortest open arc
/// between the arguments, antipodal sums may vanish) against homomorphisms to P.
pub fn verify_argument(field: Field, name: &str, f: ArgFn, probes: &[Element]) -> LemmaReport {
    verify_arglike(field, name, f, probes, false)
}

/// As [`verify_argument`] with closed arcs and arbitrary antipodal sums,
/// against homomorphisms to Φ.
pub fn verify_phi_argument(field: Field, name: &str, f: ArgFn, probes: &[Element]) -> LemmaReport {
    verify_arglike(field, name, f, probes, true)
}

/// The modulus `x ↦ |x|` as a norm candidate.
pub fn modulus_norm() -> NormFn {
    Arc::new(|x: &Element| x.modulus().clone())
}

/// `0 ↦ 0`, everything else to 1.
pub fn trivial_norm() -> NormFn {
    Arc::new(|x: &Element| if x.is_zero() { Q::zero() } else { Q::one() })
}

/// The phase `x ↦ x/|x|` as an argument candidate.
pub fn phase_argument() -> ArgFn {
    Arc::new(|x: &Element| (!x.is_zero()).then(|| x.angle().clone()))
}

/// Boxed probe predicate for tests and the CLI.
pub fn positive_reals() -> Predicate {
    Arc::new(|x: &Element| !x.is_zero() && x.angle().is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hyperfield::el;
    use crate::num::q as qq;

    fn passes(h: &Homomorphism) -> HomReport {
        verify_homomorphism(h, &default_probes(h.source()))
    }

    #[test]
    fn registry_lookups() {
        let ph = lookup("ph:R->S").unwrap();
        assert_eq!(ph.apply(&el("R:-7/2")).unwrap(), el("S:-"));
        let abs = lookup("abs:C->TRI").unwrap();
        assert_eq!(abs.apply(&el("C:3/2@1/4")).unwrap(), el("TRI:3/2"));
        let inc = lookup("inc:S->TR").unwrap();
        let back = lookup("ph:TR->S").unwrap();
        for x in default_probes(Field::S) {
            assert_eq!(back.apply(&inc.apply(&x).unwrap()).unwrap(), x);
        }
        assert_eq!(diagram_registry().len(), 19);
        assert_eq!(diagram_registry().iter().filter(|a| a.dashed).count(), 4);
        assert!(lookup("kappa:TC->K").is_some());
    }

    #[test]
    fn every_arrow_is_a_homomorphism() {
        for a in diagram_registry() {
            let r = passes(&a.hom);
            assert!(r.passed(), "{}: {:?}", a.hom.name(), r.first_failure());
        }
        for f in Field::ALL {
            assert!(passes(&Homomorphism::kappa(f)).passed(), "kappa on {f}");
        }
    }

    #[test]
    fn diagram_commutes_and_sections_split() {
        let paths = check_diagram_commutes();
        assert!(paths.len() >= 8);
        for p in &paths {
            assert!(p.witness.is_none(), "{p:?}");
        }
        let secs = check_sections();
        assert_eq!(secs.len(), 4);
        assert!(secs.iter().all(|p| p.witness.is_none()));
    }

    #[test]
    fn identity_between_classical_and_tropical_fails() {
        let h = Homomorphism::identity_between(Field::R, Field::TR);
        let r = verify_homomorphism(&h, &[el("R:1"), el("R:2")]);
        assert!(!r.passed());
        assert_eq!(r.first_failure().unwrap().axiom, "containment");
        let back = Homomorphism::identity_between(Field::TR, Field::R);
        assert!(!passes(&back).passed());
        assert!(passes(&Homomorphism::identity(Field::TR)).passed());
    }

    #[test]
    fn phase_on_triangle_to_p_fails() {
        let r = passes(&Homomorphism::phase(Field::Triangle, Field::P));
        assert!(!r.passed());
    }

    #[test]
    fn quotients() {
        assert_eq!(quotient(Field::C, Subgroup::UnitCircle).unwrap().0, Field::Triangle);
        let (f, h) = quotient(Field::TR, Subgroup::PositiveReals).unwrap();
        assert_eq!(f, Field::S);
        assert_eq!(h.name(), "ph:TR->S");
        assert_eq!(quotient(Field::K, Subgroup::Trivial).unwrap().0, Field::K);
        assert_eq!(quotient(Field::TC, Subgroup::UnitCircle).unwrap().0, Field::TT);
        assert!(quotient(Field::R, Subgroup::Signs).is_err());
        for (f, g) in [
            (Field::C, Subgroup::PositiveReals),
            (Field::TR, Subgroup::Signs),
            (Field::TC, Subgroup::PositiveReals),
            (Field::S, Subgroup::Signs),
            (Field::Phi, Subgroup::UnitCircle),
        ] {
            let (_, h) = quotient(f, g).unwrap();
            assert!(passes(&h).passed(), "{}", h.name());
        }
    }

    #[test]
    fn orderings_round_trip() {
        let id = Homomorphism::identity(Field::S);
        let o = ordering_from_hom(&id).unwrap();
        assert!(o.is_positive(&el("S:+")) && !o.is_positive(&el("S:-")));
        let h = hom_from_ordering(&o).unwrap();
        for x in default_probes(Field::S) {
            assert_eq!(h.apply(&x).unwrap(), x);
        }
        for f in [Field::R, Field::TR] {
            let o = ordering_from_hom(&Homomorphism::phase(f, Field::S)).unwrap();
            for x in default_probes(f) {
                assert_eq!(o.is_positive(&x), x.sign_value() == 1);
            }
            let direct = Ordering::new(f, positive_reals());
            assert!(verify_ordering(&direct, &default_probes(f)).iter().all(|c| c.status == Status::Pass));
        }
        // K has no ordering: 1 = -1.
        assert!(hom_from_ordering(&Ordering::new(Field::K, positive_reals())).is_err());
        assert!(ordering_from_hom(&Homomorphism::kappa(Field::S)).is_err());
    }

    #[test]
    fn norm_lemmas() {
        let tri = verify_norm(Field::Triangle, "id", modulus_norm(), &default_probes(Field::Triangle));
        assert!(tri.axioms_pass() && tri.agree());
        let tt = verify_nonarchimedean_norm(Field::TT, "id", modulus_norm(), &default_probes(Field::TT));
        assert!(tt.axioms_pass() && tt.agree());
        let triv = verify_norm(Field::S, "trivial", trivial_norm(), &default_probes(Field::S));
        assert!(triv.axioms_pass() && triv.agree());
        // the modulus on Triangle is not ultrametric: 1 ⊞ 1 ∋ 2
        let bad = verify_nonarchimedean_norm(Field::Triangle, "id", modulus_norm(), &default_probes(Field::Triangle));
        assert!(!bad.axioms_pass() && bad.agree());
        let c = verify_norm(Field::C, "abs", modulus_norm(), &default_probes(Field::C));
        assert!(c.axioms_pass() && c.agree(), "{c:?}");
        // squaring breaks the triangle inequality
        let sq: NormFn = Arc::new(|x: &Element| x.modulus() * x.modulus());
        let r = verify_norm(Field::R, "square", sq, &default_probes(Field::R));
        assert!(!r.axioms_pass() && r.agree());
    }

    #[test]
    fn argument_lemmas() {
        let tr = verify_argument(Field::TR, "ph", phase_argument(), &default_probes(Field::TR));
        assert!(tr.axioms_pass() && tr.agree());
        let tc = verify_argument(Field::TC, "ph", phase_argument(), &default_probes(Field::TC));
        assert!(!tc.axioms_pass() && tc.agree());
        let tc_phi = verify_phi_argument(Field::TC, "ph", phase_argument(), &default_probes(Field::TC));
        assert!(tc_phi.axioms_pass() && tc_phi.agree());
        let tri = verify_argument(Field::Triangle, "ph", phase_argument(), &default_probes(Field::Triangle));
        assert!(!tri.axioms_pass() && tri.agree());
        let c = verify_argument(Field::C, "ph", phase_argument(), &default_probes(Field::C));
        assert!(c.axioms_pass() && c.agree(), "{c:?}");
        let p = verify_phi_argument(Field::P, "id", phase_argument(), &default_probes(Field::P));
        assert!(p.axioms_pass() && p.agree());
    }

    #[test]
    fn arc_geometry() {
        let t = |a, b| Turn::from_ratio(a, b);
        assert!(on_shortest_arc(&t(0, 1), &t(1, 4), &t(1, 8), true, &Q::zero()));
        assert!(!on_shortest_arc(&t(0, 1), &t(1, 4), &t(1, 4), true, &Q::zero()));
        assert!(on_shortest_arc(&t(0, 1), &t(1, 4), &t(1, 4), false, &Q::zero()));
        assert!(on_shortest_arc(&t(7, 8), &t(1, 8), &t(0, 1), true, &Q::zero()));
        assert!(!on_shortest_arc(&t(7, 8), &t(1, 8), &t(1, 2), true, &Q::zero()));
        assert_eq!(turn_distance(&t(1, 10), &t(9, 10)), qq(1, 5));
    }
}
