//! Backtracking search over S- and K-valued GP vectors.
//!
//! Coordinates are assigned in lexicographic subset order. A relation is
//! checked as soon as its last coordinate is assigned. The first nonzero
//! coordinate is forced to `+`, so every projective class is found once.
//! Values are tried in the order `+ - 0` (resp. `0 1`), which makes the
//! output sorted by chirotope string.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::combin::{binom, mask, rank, subsets};
use crate::error::Error;
use crate::hyperfield::{Element, Field};
use crate::plucker::{relations, GPVector};

/// Strong or weak GP functions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Kind {
    Strong,
    Weak,
}

impl Kind {
    pub fn as_str(self) -> &'static str {
        match self {
            Kind::Strong => "strong",
            Kind::Weak => "weak",
        }
    }
}

impl core::str::FromStr for Kind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        match s.to_ascii_lowercase().as_str() {
            "strong" => Ok(Kind::Strong),
            "weak" => Ok(Kind::Weak),
            _ => Err(Error::Parse(format!("kind must be strong or weak, not `{s}`"))),
        }
    }
}

pub const DEFAULT_MAX_COORDS: u64 = 36;

pub const ZERO: u8 = 1;
pub const PLUS: u8 = 2;
pub const MINUS: u8 = 4;

/// A prepared search: relation tables, domains and the leaf test.
#[derive(Clone, Debug)]
pub struct Search {
    field: Field,
    r: usize,
    n: usize,
    kind: Kind,
    m: usize,
    domains: Vec<u8>,
    /// Relation terms `(a, b, negate)`, grouped by the largest coordinate they read.
    buckets: Vec<Vec<Vec<(u16, u16, bool)>>>,
    /// `exch[c * n * n + (x-1) * n + (y-1)]`: index of `B_c − x + y`.
    exch: Vec<u16>,
    subsets: Vec<Vec<usize>>,
}

const NONE: u16 = u16::MAX;

impl Search {
    /// All projective classes over `field` (S or K) of rank `r` on `[n]`.
    pub fn new(field: Field, r: usize, n: usize, kind: Kind, max_coords: u64) -> Result<Search, Error> {
        if !matches!(field, Field::S | Field::K) {
            return Err(Error::Invalid(format!("enumeration needs a finite field (S or K), not {field}")));
        }
        if r == 0 || r > n || n > 64 {
            return Err(Error::Invalid(format!("need 0 < r <= n <= 64, got r={r}, n={n}")));
        }
        let m = binom(n, r);
        if m > max_coords {
            return Err(Error::TooLarge(format!(
                "C({n},{r}) = {m} coordinates exceeds the limit {max_coords}; raise the limit and use the streaming mode"
            )));
        }
        let m = m as usize;
        let all = if field == Field::S { PLUS | MINUS | ZERO } else { PLUS | ZERO };
        let rels = relations(n, r, kind == Kind::Weak);
        let mut seen = BTreeSet::new();
        let mut buckets = alloc::vec![Vec::new(); m];
        for rel in rels {
            let mut terms: Vec<(u16, u16, bool)> = rel
                .terms
                .iter()
                .map(|&(a, b, neg)| {
                    let (a, b) = if a <= b { (a, b) } else { (b, a) };
                    (a as u16, b as u16, neg && field == Field::S)
                })
                .collect();
            terms.sort_unstable();
            if terms.first().is_some_and(|t| t.2) {
                for t in terms.iter_mut() {
                    t.2 = !t.2;
                }
            }
            if !seen.insert(terms.clone()) {
                continue;
            }
            let top = terms.iter().map(|&(a, b, _)| a.max(b)).max().unwrap_or(0) as usize;
            buckets[top].push(terms);
        }
        let subs = subsets(n, r);
        let mut exch = alloc::vec![NONE; m * n * n];
        for (c, s) in subs.iter().enumerate() {
            let sm = mask(s);
            for &x in s {
                for y in 1..=n {
                    if sm & (1 << (y - 1)) != 0 {
                        continue;
                    }
                    let mut t: Vec<usize> = s.iter().copied().filter(|&z| z != x).collect();
                    t.push(y);
                    t.sort_unstable();
                    exch[c * n * n + (x - 1) * n + (y - 1)] = rank(n, &t) as u16;
                }
            }
        }
        Ok(Search { field, r, n, kind, m, domains: alloc::vec![all; m], buckets, exch, subsets: subs })
    }

    /// Restricts coordinate `i` to the values in `dom` (bits [`ZERO`], [`PLUS`], [`MINUS`]).
    pub fn restrict_domain(&mut self, i: usize, dom: u8) {
        self.domains[i] &= dom;
    }

    /// Only vectors with exactly the given support.
    pub fn with_support(mut self, support: &[bool]) -> Search {
        for (i, &s) in support.iter().enumerate() {
            self.restrict_domain(i, if s { PLUS | MINUS } else { ZERO });
        }
        self
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

    pub fn coords(&self) -> usize {
        self.m
    }

    fn values(&self, i: usize, seen_nonzero: bool) -> impl Iterator<Item = i8> + '_ {
        let dom = self.domains[i];
        let order = if self.field == Field::S {
            [(PLUS, 1i8), (MINUS, -1i8), (ZERO, 0i8)]
        } else {
            [(ZERO, 0i8), (PLUS, 1i8), (MINUS, -1i8)]
        };
        order
            .into_iter()
            .filter(move |&(bit, v)| dom & bit != 0 && (seen_nonzero || v >= 0))
            .map(|(_, v)| v)
    }

    fn relations_hold(&self, x: &[i8], p: usize) -> bool {
        self.buckets[p].iter().all(|terms| {
            let (mut pos, mut neg, mut nz) = (false, false, 0u32);
            for &(a, b, flip) in terms {
                let mut v = x[a as usize] * x[b as usize];
                if flip {
                    v = -v;
                }
                if v > 0 {
                    pos = true;
                } else if v < 0 {
                    neg = true;
                }
                nz += (v != 0) as u32;
            }
            match self.field {
                Field::S => pos == neg,
                _ => nz != 1,
            }
        })
    }

    fn leaf_ok(&self, x: &[i8]) -> bool {
        if !x.iter().any(|&v| v != 0) {
            return false;
        }
        self.kind == Kind::Strong || self.support_is_matroid(x)
    }

    fn support_is_matroid(&self, x: &[i8]) -> bool {
        let n = self.n;
        let supp: Vec<usize> = (0..self.m).filter(|&i| x[i] != 0).collect();
        for &b1 in &supp {
            let m1 = mask(&self.subsets[b1]);
            for &b2 in &supp {
                let m2 = mask(&self.subsets[b2]);
                for &xe in &self.subsets[b1] {
                    if m2 & (1 << (xe - 1)) != 0 {
                        continue;
                    }
                    let ok = self.subsets[b2].iter().any(|&y| {
                        m1 & (1 << (y - 1)) == 0 && {
                            let c = self.exch[b1 * n * n + (xe - 1) * n + (y - 1)];
                            c != NONE && x[c as usize] != 0
                        }
                    });
                    if !ok {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Surviving partial assignments of the first `depth` coordinates.
    pub fn prefixes(&self, depth: usize) -> Vec<Vec<i8>> {
        let depth = depth.min(self.m);
        let mut out = Vec::new();
        let mut x = alloc::vec![0i8; self.m];
        self.collect_prefixes(&mut x, 0, depth, false, &mut out);
        out
    }

    fn collect_prefixes(&self, x: &mut [i8], p: usize, depth: usize, seen: bool, out: &mut Vec<Vec<i8>>) {
        if p == depth {
            out.push(x[..p].to_vec());
            return;
        }
        for v in self.values(p, seen).collect::<Vec<_>>() {
            x[p] = v;
            if self.relations_hold(x, p) {
                self.collect_prefixes(x, p + 1, depth, seen || v != 0, out);
            }
        }
        x[p] = 0;
    }

    /// Runs the search below a prefix (as returned by [`Search::prefixes`]),
    /// calling `visit` on each solution until it returns `false`. Returns
    /// whether the search ran to completion.
    pub fn run_from(&self, prefix: &[i8], visit: &mut dyn FnMut(&[i8]) -> bool) -> bool {
        let mut x = alloc::vec![0i8; self.m];
        x[..prefix.len()].copy_from_slice(prefix);
        let seen = prefix.iter().any(|&v| v != 0);
        self.dfs(&mut x, prefix.len(), seen, visit)
    }

    pub fn run(&self, visit: &mut dyn FnMut(&[i8]) -> bool) -> bool {
        self.run_from(&[], visit)
    }

    fn dfs(&self, x: &mut [i8], p: usize, seen: bool, visit: &mut dyn FnMut(&[i8]) -> bool) -> bool {
        if p == self.m {
            return !self.leaf_ok(x) || visit(x);
        }
        let mut it = self.values(p, seen);
        while let Some(v) = it.next() {
            x[p] = v;
            if self.relations_hold(x, p) && !self.dfs(x, p + 1, seen || v != 0, visit) {
                x[p] = 0;
                return false;
            }
        }
        x[p] = 0;
        true
    }

    /// All solutions, in chirotope-string order.
    pub fn collect(&self) -> Vec<Vec<i8>> {
        let mut out = Vec::new();
        self.run(&mut |x| {
            out.push(x.to_vec());
            true
        });
        out
    }

    pub fn count(&self) -> u64 {
        let mut c = 0;
        self.run(&mut |_| {
            c += 1;
            true
        });
        c
    }

    pub fn to_vector(&self, x: &[i8]) -> GPVector {
        let coords = x
            .iter()
            .map(|&v| match self.field {
                Field::S => Element::sign(v),
                _ if v == 0 => Element::zero(Field::K),
                _ => Element::one(Field::K),
            })
            .collect();
        GPVector::new(self.field, self.r, self.n, coords).expect("search yields nonzero vectors")
    }

    pub fn to_chirotope(&self, x: &[i8]) -> String {
        x.iter()
            .map(|&v| match (self.field, v) {
                (_, 0) => '0',
                (Field::S, -1) => '-',
                (Field::S, _) => '+',
                _ => '1',
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_counts() {
        let k = Search::new(Field::K, 1, 2, Kind::Strong, 36).unwrap();
        let found: Vec<String> = k.collect().iter().map(|x| k.to_chirotope(x)).collect();
        assert_eq!(found, ["01", "10", "11"]);
        let s = Search::new(Field::S, 1, 2, Kind::Strong, 36).unwrap();
        let found: Vec<String> = s.collect().iter().map(|x| s.to_chirotope(x)).collect();
        assert_eq!(found, ["++", "+-", "+0", "0+"]);
        assert_eq!(Search::new(Field::S, 2, 3, Kind::Strong, 36).unwrap().count(), 13);
    }

    #[test]
    fn output_is_sorted() {
        let s = Search::new(Field::S, 2, 4, Kind::Strong, 36).unwrap();
        let strs: Vec<String> = s.collect().iter().map(|x| s.to_chirotope(x)).collect();
        let mut sorted = strs.clone();
        sorted.sort();
        assert_eq!(strs, sorted);
    }

    #[test]
    fn prefixes_partition_the_search() {
        let s = Search::new(Field::S, 2, 4, Kind::Weak, 36).unwrap();
        let all = s.collect();
        for depth in 0..4 {
            let mut merged = Vec::new();
            for p in s.prefixes(depth) {
                s.run_from(&p, &mut |x| {
                    merged.push(x.to_vec());
                    true
                });
            }
            assert_eq!(merged, all);
        }
    }

    #[test]
    fn guard_and_fields() {
        assert!(matches!(Search::new(Field::S, 4, 9, Kind::Strong, 36), Err(Error::TooLarge(_))));
        assert!(Search::new(Field::TR, 1, 2, Kind::Strong, 36).is_err());
    }

    #[test]
    fn early_stop() {
        let s = Search::new(Field::S, 2, 4, Kind::Strong, 36).unwrap();
        let mut n = 0;
        assert!(!s.run(&mut |_| {
            n += 1;
            n < 3
        }));
        assert_eq!(n, 3);
    }
}
