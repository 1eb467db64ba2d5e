//! Grassmann-Plücker vectors: alternating functions `[n]^r → F` stored on
//! lexicographic `r`-subsets, with strong and weak GP checks.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::combin::{binom, fmt_subset, mask, parse_subset, rank, sort_with_parity, subsets};
use crate::error::Error;
use crate::hyperfield::{contains_zero, Element, Field};
use crate::structures::Homomorphism;

/// An alternating function on `r`-tuples of `[n]`, not identically zero.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GPVector {
    field: Field,
    r: usize,
    n: usize,
    coords: Vec<Element>,
}

impl GPVector {
    pub fn new(field: Field, r: usize, n: usize, coords: Vec<Element>) -> Result<Self, Error> {
        if r == 0 || r > n || n > 64 {
            return Err(Error::Invalid(format!("need 0 < r <= n <= 64, got r={r}, n={n}")));
        }
        let len = binom(n, r);
        if coords.len() as u64 != len {
            return Err(Error::Invalid(format!("expected {len} coordinates, got {}", coords.len())));
        }
        if let Some(c) = coords.iter().find(|c| c.field() != field) {
            return Err(Error::FieldMismatch(field, c.field()));
        }
        if coords.iter().all(|c| c.is_zero()) {
            return Err(Error::Invalid(String::from("the zero function is not a GP vector")));
        }
        Ok(GPVector { field, r, n, coords })
    }

    /// Builds from `(subset, value)` pairs; absent subsets are zero.
    pub fn from_pairs(field: Field, r: usize, n: usize, pairs: &[(Vec<usize>, Element)]) -> Result<Self, Error> {
        let mut coords = alloc::vec![Element::zero(field); binom(n, r) as usize];
        for (s, v) in pairs {
            let mut s = s.clone();
            s.sort_unstable();
            if s.len() != r || s.iter().any(|&x| x == 0 || x > n) || s.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::Invalid(format!("{s:?} is not an {r}-subset of [{n}]")));
            }
            coords[rank(n, &s)] = v.clone();
        }
        GPVector::new(field, r, n, coords)
    }

    /// Parses a chirotope string over lexicographic `r`-subsets: `0+-` for S,
    /// `01` for K.
    pub fn parse_chirotope(field: Field, r: usize, n: usize, s: &str) -> Result<Self, Error> {
        let coords = s
            .trim()
            .chars()
            .map(|c| match (field, c) {
                (Field::S, '+') => Ok(Element::sign(1)),
                (Field::S, '-') => Ok(Element::sign(-1)),
                (Field::S, '0') => Ok(Element::sign(0)),
                (Field::K, '0') => Ok(Element::zero(Field::K)),
                (Field::K, '1') => Ok(Element::one(Field::K)),
                (Field::S | Field::K, _) => Err(Error::Parse(format!("bad chirotope character `{c}` for {field}"))),
                _ => Err(Error::Invalid(format!("chirotope strings are only defined over S and K, not {field}"))),
            })
            .collect::<Result<Vec<_>, _>>()?;
        GPVector::new(field, r, n, coords)
    }

    /// The chirotope string; only for S and K.
    pub fn chirotope(&self) -> Result<String, Error> {
        if !matches!(self.field, Field::S | Field::K) {
            return Err(Error::Invalid(format!("chirotope strings are only defined over S and K, not {}", self.field)));
        }
        Ok(self.coords.iter().map(|c| c.payload()).collect())
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn rank(&self) -> usize {
        self.r
    }

    pub fn ground(&self) -> usize {
        self.n
    }

    pub fn coords(&self) -> &[Element] {
        &self.coords
    }

    /// The lexicographic `r`-subsets indexing [`GPVector::coords`].
    pub fn subsets(&self) -> Vec<Vec<usize>> {
        subsets(self.n, self.r)
    }

    /// `(key, payload)` pairs for nonzero coordinates, keys as in `12`.
    pub fn nonzero_entries(&self) -> Vec<(String, String)> {
        self.subsets()
            .iter()
            .zip(&self.coords)
            .filter(|(_, c)| !c.is_zero())
            .map(|(s, c)| (fmt_subset(s, self.n), c.payload()))
            .collect()
    }

    /// Parses `(key, payload)` pairs as produced by [`GPVector::nonzero_entries`].
    pub fn from_entries(field: Field, r: usize, n: usize, entries: &[(String, String)]) -> Result<Self, Error> {
        let pairs = entries
            .iter()
            .map(|(k, v)| Ok((parse_subset(k, n)?, Element::parse_payload(field, v)?)))
            .collect::<Result<Vec<_>, Error>>()?;
        GPVector::from_pairs(field, r, n, &pairs)
    }

    /// Value on a sorted subset.
    pub fn coord(&self, s: &[usize]) -> &Element {
        &self.coords[rank(self.n, s)]
    }

    /// The alternating extension: `sign(σ)` times the sorted value, 0 on repeats.
    pub fn tuple_value(&self, t: &[usize]) -> Result<Element, Error> {
        if t.len() != self.r || t.iter().any(|&x| x == 0 || x > self.n) {
            return Err(Error::Invalid(format!("{t:?} is not an {}-tuple of [{}]", self.r, self.n)));
        }
        Ok(match sort_with_parity(t) {
            None => Element::zero(self.field),
            Some((s, odd)) => {
                let v = self.coord(&s).clone();
                if odd {
                    v.neg()
                } else {
                    v
                }
            }
        })
    }

    /// Support as a bitmask per coordinate.
    pub fn support(&self) -> Vec<bool> {
        self.coords.iter().map(|c| !c.is_zero()).collect()
    }

    pub fn underlying_matroid(&self) -> MatroidBases {
        let bases = self.subsets().into_iter().zip(&self.coords).filter(|(_, c)| !c.is_zero()).map(|(s, _)| s).collect();
        MatroidBases { n: self.n, r: self.r, bases }
    }

    /// Coordinatewise image under a homomorphism.
    pub fn pushforward(&self, h: &Homomorphism) -> Result<GPVector, Error> {
        if h.source() != self.field {
            return Err(Error::FieldMismatch(h.source(), self.field));
        }
        let coords = self.coords.iter().map(|c| h.apply(c)).collect::<Result<Vec<_>, _>>()?;
        GPVector::new(h.target(), self.r, self.n, coords)
    }

    /// Scales every coordinate by `a`.
    pub fn scale(&self, a: &Element) -> Result<GPVector, Error> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let coords = self.coords.iter().map(|c| c.mul(a)).collect::<Result<Vec<_>, _>>()?;
        GPVector::new(self.field, self.r, self.n, coords)
    }

    /// The projective representative whose first nonzero coordinate is 1.
    pub fn normalize(&self) -> GPVector {
        let lead = self.coords.iter().find(|c| !c.is_zero()).expect("nonzero vector");
        let inv = lead.inverse().expect("nonzero");
        self.scale(&inv).expect("same field")
    }

    pub fn projectively_equal(&self, other: &GPVector) -> bool {
        self.field == other.field && self.r == other.r && self.n == other.n && self.normalize() == other.normalize()
    }

    /// The restriction to a subset `a` of the ground set, relabelled to `[|a|]`.
    pub fn restrict(&self, a: &[usize]) -> Result<GPVector, Error> {
        let mut a = a.to_vec();
        a.sort_unstable();
        a.dedup();
        if a.iter().any(|&x| x == 0 || x > self.n) {
            return Err(Error::Invalid(format!("{a:?} is not a subset of [{}]", self.n)));
        }
        if a.len() < self.r {
            return Err(Error::Invalid(format!("{a:?} has fewer than {} elements", self.r)));
        }
        let coords: Vec<Element> =
            subsets(a.len(), self.r).iter().map(|s| self.coord(&s.iter().map(|&i| a[i - 1]).collect::<Vec<_>>()).clone()).collect();
        GPVector::new(self.field, self.r, a.len(), coords)
            .map_err(|_| Error::Invalid(format!("{a:?} does not have rank {}", self.r)))
    }

    /// The same function on `[n+1]`, zero on subsets containing `n+1`.
    pub fn stabilize(&self) -> GPVector {
        let n = self.n + 1;
        let coords = subsets(n, self.r)
            .iter()
            .map(|s| if s.contains(&n) { Element::zero(self.field) } else { self.coord(s).clone() })
            .collect();
        GPVector { field: self.field, r: self.r, n, coords }
    }

    /// Whether the support is the set of bases of a matroid.
    pub fn exchange_failure(&self) -> Option<GPFailure> {
        self.underlying_matroid().exchange_failure()
    }

    /// The first failing GP relation, or `None` when `v` is a strong GP function.
    pub fn check_strong(&self) -> Result<Option<GPFailure>, Error> {
        check_relations(self, &relations(self.n, self.r, false))
    }

    /// The first failure of the weak conditions: matroid support and the
    /// three-term relations.
    pub fn check_weak(&self) -> Result<Option<GPFailure>, Error> {
        if let Some(f) = self.exchange_failure() {
            return Ok(Some(f));
        }
        check_relations(self, &relations(self.n, self.r, true))
    }

    pub fn is_strong(&self) -> Result<bool, Error> {
        Ok(self.check_strong()?.is_none())
    }

    pub fn is_weak(&self) -> Result<bool, Error> {
        Ok(self.check_weak()?.is_none())
    }
}

impl fmt::Debug for GPVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.chirotope() {
            Ok(s) => write!(f, "{}[{}]", self.field, s),
            Err(_) => {
                let parts: Vec<String> = self.nonzero_entries().into_iter().map(|(k, v)| format!("{k}:{v}")).collect();
                write!(f, "{}{{{}}}", self.field, parts.join(","))
            }
        }
    }
}

/// Why a vector fails a GP check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GPFailure {
    /// `0 ∉ ⊞_k (−1)^k φ(I∖i_k) φ(i_k, J)`.
    Relation { i: Vec<usize>, j: Vec<usize> },
    /// No `y ∈ b2∖b1` with `b1 − x + y` a basis.
    Exchange { b1: Vec<usize>, b2: Vec<usize>, x: usize },
}

impl fmt::Display for GPFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let set = |s: &[usize]| {
            let v: Vec<String> = s.iter().map(|x| format!("{x}")).collect();
            format!("{{{}}}", v.join(","))
        };
        match self {
            GPFailure::Relation { i, j } => write!(f, "GP relation fails at I={}, J={}", set(i), set(j)),
            GPFailure::Exchange { b1, b2, x } => {
                write!(f, "basis exchange fails for B1={}, B2={}, x={x}", set(b1), set(b2))
            }
        }
    }
}

/// One GP relation with the coordinate indices of its surviving terms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    pub i: Vec<usize>,
    pub j: Vec<usize>,
    /// `(a, b, negate)`: the term is `± coords[a] ⊙ coords[b]`.
    pub terms: Vec<(usize, usize, bool)>,
}

/// The GP relations over sorted `I` (size `r+1`) and sorted `J` (size
/// `r−1`), `J` in the outer loop. With `three_term`, only `|I∖J| = 3`.
pub fn relations(n: usize, r: usize, three_term: bool) -> Vec<Relation> {
    let mut out = Vec::new();
    if r == 0 || r > n {
        return out;
    }
    let is = subsets(n, r + 1);
    for j in subsets(n, r - 1) {
        let jm = mask(&j);
        for i in &is {
            if three_term && (mask(i) & !jm).count_ones() != 3 {
                continue;
            }
            let mut terms = Vec::new();
            for (k0, &ik) in i.iter().enumerate() {
                if jm & (1 << (ik - 1)) != 0 {
                    continue;
                }
                let rest: Vec<usize> = i.iter().copied().filter(|&x| x != ik).collect();
                let mut joined = j.clone();
                let below = j.iter().filter(|&&x| x < ik).count();
                joined.insert(below, ik);
                // (−1)^k with k = k0 + 1, and moving i_k past the smaller j's
                let negate = ((k0 + 1) + below) % 2 == 1;
                terms.push((rank(n, &rest), rank(n, &joined), negate));
            }
            out.push(Relation { i: i.clone(), j: j.clone(), terms });
        }
    }
    out
}

fn check_relations(v: &GPVector, rels: &[Relation]) -> Result<Option<GPFailure>, Error> {
    let mut buf = Vec::new();
    for rel in rels {
        buf.clear();
        for &(a, b, neg) in &rel.terms {
            let t = v.coords[a].mul(&v.coords[b])?;
            buf.push(if neg { t.neg() } else { t });
        }
        if !buf.is_empty() && !contains_zero(&buf)? {
            return Ok(Some(GPFailure::Relation { i: rel.i.clone(), j: rel.j.clone() }));
        }
    }
    Ok(None)
}

/// The strong GP check read off the definition: every `(r+1)`-tuple `I` and
/// `(r−1)`-tuple `J` of `[n]`, repeats and all orders included.
pub fn check_strong_naive(v: &GPVector) -> Result<bool, Error> {
    let (n, r) = (v.n, v.r);
    let tuples = |len: usize| -> Vec<Vec<usize>> {
        let mut out: Vec<Vec<usize>> = alloc::vec![Vec::new()];
        for _ in 0..len {
            out = out.into_iter().flat_map(|t| (1..=n).map(move |x| {
                let mut u = t.clone();
                u.push(x);
                u
            })).collect();
        }
        out
    };
    let js = tuples(r - 1);
    for i in tuples(r + 1) {
        for j in &js {
            let mut terms = Vec::with_capacity(r + 1);
            for k in 0..=r {
                let rest: Vec<usize> = i.iter().enumerate().filter(|&(m, _)| m != k).map(|(_, &x)| x).collect();
                let mut front = alloc::vec![i[k]];
                front.extend_from_slice(j);
                let t = v.tuple_value(&rest)?.mul(&v.tuple_value(&front)?)?;
                terms.push(if k % 2 == 0 { t.neg() } else { t });
            }
            if !contains_zero(&terms)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// A set of `r`-subsets of `[n]`, meant to be the bases of a matroid.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatroidBases {
    pub n: usize,
    pub r: usize,
    pub bases: Vec<Vec<usize>>,
}

impl MatroidBases {
    pub fn uniform(r: usize, n: usize) -> MatroidBases {
        MatroidBases { n, r, bases: subsets(n, r) }
    }

    /// Bases of the column matroid of vectors over GF(2), given as bit patterns.
    pub fn binary(columns: &[u64], r: usize) -> MatroidBases {
        let n = columns.len();
        let bases = subsets(n, r).into_iter().filter(|s| gf2_rank(s.iter().map(|&i| columns[i - 1])) == r).collect();
        MatroidBases { n, r, bases }
    }

    /// The Fano plane: the nonzero vectors of GF(2)^3, element `i` being the
    /// binary expansion of `i`.
    pub fn fano() -> MatroidBases {
        MatroidBases::binary(&[1, 2, 3, 4, 5, 6, 7], 3)
    }

    /// The Fano plane with the line `{1, 2, 3}` relaxed to a basis.
    pub fn non_fano() -> MatroidBases {
        let mut m = MatroidBases::fano();
        m.bases.push(alloc::vec![1, 2, 3]);
        m.bases.sort();
        m
    }

    /// The indicator vector over K.
    pub fn to_vector(&self) -> Result<GPVector, Error> {
        let pairs: Vec<(Vec<usize>, Element)> = self.bases.iter().map(|b| (b.clone(), Element::one(Field::K))).collect();
        GPVector::from_pairs(Field::K, self.r, self.n, &pairs)
    }

    pub fn is_basis(&self, s: &[usize]) -> bool {
        self.bases.iter().any(|b| b == s)
    }

    /// The first violation of the basis exchange axiom.
    pub fn exchange_failure(&self) -> Option<GPFailure> {
        let set: BTreeSet<u64> = self.bases.iter().map(|b| mask(b)).collect();
        for b1 in &self.bases {
            let m1 = mask(b1);
            for b2 in &self.bases {
                let m2 = mask(b2);
                for &x in b1 {
                    let bx = 1u64 << (x - 1);
                    if m2 & bx != 0 {
                        continue;
                    }
                    let ok = b2.iter().any(|&y| m1 & (1 << (y - 1)) == 0 && set.contains(&((m1 & !bx) | (1 << (y - 1)))));
                    if !ok {
                        return Some(GPFailure::Exchange { b1: b1.clone(), b2: b2.clone(), x });
                    }
                }
            }
        }
        None
    }

    pub fn is_matroid(&self) -> bool {
        !self.bases.is_empty() && self.exchange_failure().is_none()
    }
}

/// Rank over GF(2) of bit-pattern vectors.
pub fn gf2_rank<I: IntoIterator<Item = u64>>(vs: I) -> usize {
    let mut basis: Vec<u64> = Vec::new();
    for mut v in vs {
        for b in &basis {
            v = v.min(v ^ b);
        }
        if v != 0 {
            basis.push(v);
            basis.sort_unstable_by(|a, b| b.cmp(a));
        }
    }
    basis.len()
}
