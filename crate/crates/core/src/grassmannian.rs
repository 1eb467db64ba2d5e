//! Grassmannians over S and K, the weak-map order and induced maps.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::Error;
use crate::hyperfield::{Element, Field};
use crate::plucker::GPVector;
use crate::poset::Poset;
use crate::search::{Kind, Search, DEFAULT_MAX_COORDS};
use crate::structures::Homomorphism;

/// The normalized points of `Gr^kind(r, F^n)`, sorted by chirotope string.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Grassmannian {
    field: Field,
    r: usize,
    n: usize,
    kind: Kind,
    points: Vec<GPVector>,
    keys: Vec<String>,
}

impl Grassmannian {
    pub fn enumerate(field: Field, r: usize, n: usize, kind: Kind) -> Result<Grassmannian, Error> {
        Grassmannian::enumerate_with_limit(field, r, n, kind, DEFAULT_MAX_COORDS)
    }

    pub fn enumerate_with_limit(field: Field, r: usize, n: usize, kind: Kind, max_coords: u64) -> Result<Grassmannian, Error> {
        let search = Search::new(field, r, n, kind, max_coords)?;
        let mut points = Vec::new();
        let mut keys = Vec::new();
        search.run(&mut |x| {
            points.push(search.to_vector(x));
            keys.push(search.to_chirotope(x));
            true
        });
        Ok(Grassmannian { field, r, n, kind, points, keys })
    }

    /// Assembles a Grassmannian from points found elsewhere (e.g. a parallel
    /// search or a file), checking each one and sorting canonically.
    pub fn from_points(field: Field, r: usize, n: usize, kind: Kind, points: Vec<GPVector>) -> Result<Grassmannian, Error> {
        let mut pairs = Vec::with_capacity(points.len());
        for p in points {
            if p.field() != field || p.rank() != r || p.ground() != n {
                return Err(Error::Invalid(format!("point {p:?} is not in Gr({r}, {field}^{n})")));
            }
            let failure = match kind {
                Kind::Strong => p.check_strong()?,
                Kind::Weak => p.check_weak()?,
            };
            if let Some(f) = failure {
                return Err(Error::Invalid(format!("point {p:?} is not a {} GP function: {f}", kind.as_str())));
            }
            let p = p.normalize();
            pairs.push((p.chirotope()?, p));
        }
        pairs.sort_by(|a, b| a.0.cmp(&b.0));
        pairs.dedup_by(|a, b| a.0 == b.0);
        let (keys, points) = pairs.into_iter().unzip();
        Ok(Grassmannian { field, r, n, kind, points, keys })
    }

    /// Wraps raw search solutions, given in search order.
    pub fn from_solutions(search: &Search, sols: &[Vec<i8>]) -> Grassmannian {
        Grassmannian {
            field: search.field(),
            r: search.rank(),
            n: search.ground(),
            kind: search.kind(),
            points: sols.iter().map(|x| search.to_vector(x)).collect(),
            keys: sols.iter().map(|x| search.to_chirotope(x)).collect(),
        }
    }

    pub fn from_chirotopes(field: Field, r: usize, n: usize, kind: Kind, lines: &[String]) -> Result<Grassmannian, Error> {
        let pts = lines
            .iter()
            .map(|s| GPVector::parse_chirotope(field, r, n, s))
            .collect::<Result<Vec<_>, _>>()?;
        Grassmannian::from_points(field, r, n, kind, pts)
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

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[GPVector] {
        &self.points
    }

    /// Chirotope strings, in point order.
    pub fn chirotopes(&self) -> &[String] {
        &self.keys
    }

    /// Index of the class of `v`.
    pub fn index_of(&self, v: &GPVector) -> Option<usize> {
        if v.field() != self.field || v.rank() != self.r || v.ground() != self.n {
            return None;
        }
        let key = v.normalize().chirotope().ok()?;
        self.keys.binary_search(&key).ok()
    }

    /// The weak-map order on the points.
    pub fn weak_map_poset(&self) -> Poset {
        let vals: Vec<Vec<i8>> = self.points.iter().map(|p| p.coords().iter().map(sign_of).collect()).collect();
        Poset::new(self.keys.clone(), |i, j| signs_leq(&vals[i], &vals[j])).expect("weak maps form a partial order")
    }
}

fn sign_of(e: &Element) -> i8 {
    e.sign_value()
}

/// The weak-map order on sign vectors (`-1, 0, 1`).
pub fn signs_leq(p: &[i8], q: &[i8]) -> bool {
    let mut alpha = 0i8;
    for (&a, &b) in p.iter().zip(q) {
        if a == 0 {
            continue;
        }
        if b == 0 {
            return false;
        }
        if alpha == 0 {
            alpha = a * b;
        } else if a != alpha * b {
            return false;
        }
    }
    true
}

/// `p ≤ q` in the weak-map order: `supp p ⊆ supp q` and `p = α q` on
/// `supp p` for one unit `α`.
pub fn weak_map_leq(p: &GPVector, q: &GPVector) -> bool {
    if p.field() != q.field() || p.rank() != q.rank() || p.ground() != q.ground() {
        return false;
    }
    let mut alpha: Option<Element> = None;
    for (a, b) in p.coords().iter().zip(q.coords()) {
        if a.is_zero() {
            continue;
        }
        if b.is_zero() {
            return false;
        }
        match &alpha {
            None => alpha = a.div(b).ok(),
            Some(al) => {
                if b.mul(al).ok().as_ref() != Some(a) {
                    return false;
                }
            }
        }
    }
    true
}

/// `Gr(h)`: the index in `target` of the image of each point of `source`.
pub fn induced_map(h: &Homomorphism, source: &Grassmannian, target: &Grassmannian) -> Result<Vec<usize>, Error> {
    if h.source() != source.field() || h.target() != target.field() {
        return Err(Error::Invalid(format!(
            "{} does not map Gr({}) to Gr({})",
            h.name(),
            source.field(),
            target.field()
        )));
    }
    source
        .points()
        .iter()
        .map(|p| {
            let q = p.pushforward(h)?;
            target.index_of(&q).ok_or_else(|| Error::Invalid(format!("image {q:?} of {p:?} is not in the target")))
        })
        .collect()
}

/// The definition applied literally: every assignment of values, normalized,
/// filtered by the plain GP checks. Exponential; for cross-checks only.
pub fn naive_points(field: Field, r: usize, n: usize, kind: Kind) -> Result<Vec<String>, Error> {
    let values: Vec<Element> = match field {
        Field::S => alloc::vec![Element::sign(1), Element::sign(-1), Element::sign(0)],
        Field::K => alloc::vec![Element::zero(Field::K), Element::one(Field::K)],
        _ => return Err(Error::Invalid(format!("no finite value set for {field}"))),
    };
    let m = crate::combin::binom(n, r) as u32;
    let total = (values.len() as u64).pow(m);
    let mut out = Vec::new();
    for code in 0..total {
        let mut c = code;
        let coords: Vec<Element> = (0..m)
            .map(|_| {
                let v = values[(c % values.len() as u64) as usize].clone();
                c /= values.len() as u64;
                v
            })
            .collect();
        let Ok(v) = GPVector::new(field, r, n, coords) else { continue };
        let ok = match kind {
            Kind::Strong => v.is_strong()?,
            Kind::Weak => v.is_weak()?,
        };
        if ok {
            out.push(v.normalize().chirotope()?);
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poset::BitSet;

    #[test]
    fn small_grassmannians() {
        let k = Grassmannian::enumerate(Field::K, 1, 2, Kind::Strong).unwrap();
        assert_eq!(k.chirotopes(), ["01", "10", "11"]);
        let s = Grassmannian::enumerate(Field::S, 1, 2, Kind::Strong).unwrap();
        assert_eq!(s.chirotopes(), ["++", "+-", "+0", "0+"]);
        for r in 1..=3 {
            let g = Grassmannian::enumerate(Field::S, r, r + 1, Kind::Strong).unwrap();
            assert_eq!(g.len() as u64, (3u64.pow(r as u32 + 1) - 1) / 2);
        }
    }

    #[test]
    fn agrees_with_naive_filter() {
        for field in [Field::S, Field::K] {
            for kind in [Kind::Strong, Kind::Weak] {
                let g = Grassmannian::enumerate(field, 2, 4, kind).unwrap();
                assert_eq!(g.chirotopes(), naive_points(field, 2, 4, kind).unwrap().as_slice());
            }
        }
    }

    #[test]
    fn weak_map_order() {
        let s = Grassmannian::enumerate(Field::S, 1, 2, Kind::Strong).unwrap();
        let p = s.weak_map_poset();
        let idx = |c: &str| s.chirotopes().iter().position(|x| x == c).unwrap();
        assert!(p.leq(idx("+0"), idx("++")));
        assert!(p.leq(idx("+0"), idx("+-")));
        assert!(!p.leq(idx("+0"), idx("0+")));
        let mut max = p.maxima();
        max.sort();
        assert_eq!(max, [idx("++"), idx("+-")]);
        assert!(!p.is_contractible_via_max());
        let k = Grassmannian::enumerate(Field::K, 2, 4, Kind::Strong).unwrap();
        let kp = k.weak_map_poset();
        assert_eq!(kp.maxima().len(), 1);
        assert_eq!(k.chirotopes()[kp.maxima()[0]], "111111");
        let k12 = Grassmannian::enumerate(Field::K, 1, 2, Kind::Strong).unwrap();
        let p12 = k12.weak_map_poset();
        let top = p12.maxima()[0];
        assert_eq!(p12.closure(&BitSet::from_indices(3, [top])).count(), 3);
        // agrees with the generic definition
        for a in s.points() {
            for b in s.points() {
                assert_eq!(weak_map_leq(a, b), p.leq(s.index_of(a).unwrap(), s.index_of(b).unwrap()));
            }
        }
    }

    #[test]
    fn induced_maps() {
        let s = Grassmannian::enumerate(Field::S, 1, 2, Kind::Strong).unwrap();
        let k = Grassmannian::enumerate(Field::K, 1, 2, Kind::Strong).unwrap();
        let f = induced_map(&Homomorphism::kappa(Field::S), &s, &k).unwrap();
        let mut img = f.clone();
        img.sort();
        img.dedup();
        assert_eq!(img.len(), 3);
        assert!(s.weak_map_poset().is_monotone(&f, &k.weak_map_poset()));
        let id = induced_map(&Homomorphism::identity(Field::S), &s, &s).unwrap();
        assert_eq!(id, (0..s.len()).collect::<Vec<_>>());
    }

    #[test]
    fn stabilization_embeds() {
        let g = Grassmannian::enumerate(Field::S, 2, 4, Kind::Strong).unwrap();
        let g5 = Grassmannian::enumerate(Field::S, 2, 5, Kind::Strong).unwrap();
        let mut seen = alloc::collections::BTreeSet::new();
        for p in g.points() {
            let q = p.stabilize();
            assert!(q.is_strong().unwrap());
            assert!(seen.insert(g5.index_of(&q).unwrap()));
            assert_eq!(q.restrict(&[1, 2, 3, 4]).unwrap(), *p);
        }
    }
}
