use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::element::{Element, Field, Geometry};
use super::ops::{add_element, add_set, fold_hypersum, hypersum, mul_sets, scale_set, sum_contains};
use super::value::SetValue;
use crate::error::Error;
use crate::num::{q, qi, Turn};

/// The default probe elements of a field.
///
/// All elements for S and K; `0, ±1, ±2, ±1/2` on the line; angles
/// `0, 1/4, 1/3, 1/2, 2/3, 3/4` on the circle, at moduli `1/2, 1, 2` in the plane.
pub fn default_probes(f: Field) -> Vec<Element> {
    let angles = || {
        [(0, 1), (1, 4), (1, 3), (1, 2), (2, 3), (3, 4)].into_iter().map(|(a, b)| Turn::from_ratio(a, b))
    };
    let mut out = alloc::vec![Element::zero(f)];
    match f {
        Field::S => out.extend([Element::sign(1), Element::sign(-1)]),
        Field::K => out.push(Element::one(f)),
        Field::R | Field::TR => {
            for v in [qi(1), qi(-1), qi(2), qi(-2), q(1, 2), q(-1, 2)] {
                out.push(Element::real(f, v).unwrap());
            }
        }
        Field::Triangle | Field::TT => {
            for v in [qi(1), qi(2), q(1, 2)] {
                out.push(Element::real(f, v).unwrap());
            }
        }
        Field::P | Field::Phi => out.extend(angles().map(|t| Element::unit(f, t).unwrap())),
        Field::C | Field::TC => {
            for m in [q(1, 2), qi(1), qi(2)] {
                out.extend(angles().map(|t| Element::polar(f, m.clone(), t).unwrap()));
            }
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
        }
    }
}

/// One verified property with the first failing input, if any.
#[derive(Clone, Debug)]
pub struct Check {
    pub axiom: &'static str,
    pub status: Status,
    pub witness: Option<String>,
    /// Whether a failure of this check means the structure is broken.
    pub required: bool,
}

impl Check {
    pub fn new(axiom: &'static str, witness: Option<String>, required: bool) -> Self {
        let status = if witness.is_some() { Status::Fail } else { Status::Pass };
        Check { axiom, status, witness, required }
    }
}

#[derive(Clone, Debug)]
pub struct AxiomReport {
    pub field: Field,
    pub samples: usize,
    pub exhaustive: bool,
    pub checks: Vec<Check>,
    pub doubly_distributive: bool,
}

impl AxiomReport {
    /// All required checks pass and double distributivity matches the known answer.
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| !c.required || c.status == Status::Pass)
            && (!self.field.doubly_distributive() || self.doubly_distributive)
    }

    pub fn check(&self, axiom: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.axiom == axiom)
    }
}

fn first<T, F: FnMut(&T) -> Result<Option<String>, Error>>(items: &[T], mut f: F) -> Result<Option<String>, Error> {
    for it in items {
        if let Some(w) = f(it)? {
            return Ok(Some(w));
        }
    }
    Ok(None)
}

fn pairs(s: &[Element]) -> Vec<(Element, Element)> {
    let mut v = Vec::new();
    for a in s {
        for b in s {
            v.push((a.clone(), b.clone()));
        }
    }
    v
}

fn triples(s: &[Element]) -> Vec<[Element; 3]> {
    let mut v = Vec::new();
    for a in s {
        for b in s {
            for c in s {
                v.push([a.clone(), b.clone(), c.clone()]);
            }
        }
    }
    v
}

/// Verifies the hyperfield axioms of `f` on `samples` (ignored for S and K,
/// which are checked exhaustively).
pub fn verify_hyperfield_axioms(f: Field, samples: &[Element]) -> Result<AxiomReport, Error> {
    if !f.has_hypersum() {
        return Err(Error::Unsupported(f));
    }
    let exhaustive = f.is_finite();
    let mut s: Vec<Element> = if exhaustive || samples.is_empty() { default_probes(f) } else { samples.to_vec() };
    if let Some(bad) = s.iter().find(|e| e.field() != f) {
        return Err(Error::FieldMismatch(f, bad.field()));
    }
    s.sort();
    s.dedup();
    let prs = pairs(&s);
    let trs = triples(&s);
    let mut checks = Vec::new();
    let zero = Element::zero(f);
    let one = Element::one(f);

    checks.push(Check::new("one_ne_zero", (one == zero).then(|| String::from("1 = 0")), true));

    checks.push(Check::new(
        "multiplicative_group",
        first(&trs, |[a, b, c]| {
            let ab = a.mul(b)?;
            if ab != b.mul(a)? || ab.mul(c)? != a.mul(&b.mul(c)?)? || a.mul(&one)? != *a {
                return Ok(Some(format!("{a}, {b}, {c}")));
            }
            if let Some(inv) = a.inverse() {
                if !a.mul(&inv)?.is_one() {
                    return Ok(Some(format!("inverse of {a}")));
                }
            }
            Ok(None)
        })?,
        true,
    ));

    checks.push(Check::new(
        "commutativity",
        first(&prs, |(a, b)| Ok((hypersum(a, b)? != hypersum(b, a)?).then(|| format!("{a} + {b}"))))?,
        true,
    ));

    checks.push(Check::new(
        "identity",
        first(&s, |a| Ok((hypersum(a, &zero)? != SetValue::singleton(a)).then(|| format!("{a} + 0"))))?,
        true,
    ));

    checks.push(Check::new(
        "unique_inverse",
        first(&s, |a| {
            let na = a.neg();
            if na.neg() != *a {
                return Ok(Some(format!("--{a} != {a}")));
            }
            if !hypersum(a, &na)?.contains_zero() {
                return Ok(Some(format!("0 not in {a} + {na}")));
            }
            for b in &s {
                if *b != na && hypersum(a, b)?.contains_zero() {
                    return Ok(Some(format!("0 in {a} + {b}")));
                }
            }
            Ok(None)
        })?,
        true,
    ));

    checks.push(Check::new(
        "associativity",
        first(&trs, |[a, b, c]| {
            let left = add_element(&hypersum(a, b)?, c)?;
            let right = add_element(&hypersum(b, c)?, a)?;
            Ok((left != right).then(|| format!("({a} + {b}) + {c} = {left} but {a} + ({b} + {c}) = {right}")))
        })?,
        true,
    ));

    checks.push(Check::new(
        "reversibility",
        first(&trs, |[x, y, z]| {
            let sum = hypersum(x, y)?;
            // every probe of x ⊞ y, and the sampled z, in both directions
            let mut zs = sum.probes();
            zs.push(z.clone());
            for w in zs {
                let forward = sum.contains(&w);
                let back = hypersum(&w, &y.neg())?.contains(x);
                if forward != back {
                    return Ok(Some(format!("x={x}, y={y}, z={w}")));
                }
            }
            Ok(None)
        })?,
        true,
    ));

    checks.push(Check::new(
        "distributivity",
        first(&trs, |[a, x, y]| {
            let left = scale_set(&hypersum(x, y)?, a)?;
            let right = hypersum(&a.mul(x)?, &a.mul(y)?)?;
            Ok((left != right).then(|| format!("{a} * ({x} + {y}) = {left} but {right}")))
        })?,
        true,
    ));

    let dd = double_distributivity_counterexample(&s)?;
    let doubly_distributive = dd.is_none();
    checks.push(Check::new("double_distributivity", dd, f.doubly_distributive()));

    Ok(AxiomReport { field: f, samples: s.len(), exhaustive, checks, doubly_distributive })
}

/// Searches `(w ⊞ x) ⊙ (y ⊞ z) = wy ⊞ wz ⊞ xy ⊞ xz` over the samples and
/// describes the first violation.
pub fn double_distributivity_counterexample(s: &[Element]) -> Result<Option<String>, Error> {
    for w in s {
        for x in s {
            let wx = hypersum(w, x)?;
            for y in s {
                for z in s {
                    let left = mul_sets(&wx, &hypersum(y, z)?)?;
                    let terms = [w.mul(y)?, w.mul(z)?, x.mul(y)?, x.mul(z)?];
                    let right = fold_hypersum(&terms)?;
                    if left != right {
                        let extra = right.probes().into_iter().find(|p| !left.contains(p));
                        return Ok(Some(format!(
                            "w={w}, x={x}, y={y}, z={z}: ({w} + {x})({y} + {z}) = {left}, expansion = {right}{}",
                            extra.map(|e| format!(", {e} only in expansion")).unwrap_or_default()
                        )));
                    }
                }
            }
        }
    }
    Ok(None)
}

/// Checks that every split `(a ⊞ b) ⊞ (c ⊞ d)` agrees with the left fold on the
/// probes of both; exact set equality on line fields.
pub fn four_term_parenthesization(terms: &[Element; 4]) -> Result<Option<String>, Error> {
    let [a, b, c, d] = terms;
    let fold = fold_hypersum(&terms[..])?;
    let left = hypersum(a, b)?;
    let right = hypersum(c, d)?;
    if matches!(a.field().geometry(), Geometry::Line) {
        let split = add_set(&left, &right)?;
        return Ok((split != fold).then(|| format!("({a}+{b})+({c}+{d}) = {split} vs {fold}")));
    }
    let mut probes = fold.probes();
    probes.extend(default_probes(a.field()));
    for p in probes {
        if sum_contains(&left, &right, &p)? != fold.contains(&p) {
            return Ok(Some(format!("{p} separates ({a}+{b})+({c}+{d}) from the fold")));
        }
    }
    Ok(None)
}
