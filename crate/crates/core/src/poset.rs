//! Finite posets with their upper-order-ideal topology.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::Error;

/// A fixed-size set of indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitSet {
    words: Vec<u64>,
    len: usize,
}

impl BitSet {
    pub fn new(len: usize) -> Self {
        BitSet { words: alloc::vec![0; len.div_ceil(64)], len }
    }

    pub fn from_indices(len: usize, it: impl IntoIterator<Item = usize>) -> Self {
        let mut s = BitSet::new(len);
        for i in it {
            s.insert(i);
        }
        s
    }

    pub fn full(len: usize) -> Self {
        BitSet::from_indices(len, 0..len)
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn insert(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }

    pub fn remove(&mut self, i: usize) {
        self.words[i / 64] &= !(1 << (i % 64));
    }

    pub fn contains(&self, i: usize) -> bool {
        i < self.len && self.words[i / 64] & (1 << (i % 64)) != 0
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn union_with(&mut self, o: &BitSet) {
        for (a, b) in self.words.iter_mut().zip(&o.words) {
            *a |= b;
        }
    }

    pub fn difference_with(&mut self, o: &BitSet) {
        for (a, b) in self.words.iter_mut().zip(&o.words) {
            *a &= !b;
        }
    }

    pub fn xor_with(&mut self, o: &BitSet) {
        for (a, b) in self.words.iter_mut().zip(&o.words) {
            *a ^= b;
        }
    }

    /// The largest member.
    pub fn last(&self) -> Option<usize> {
        self.words.iter().enumerate().rev().find(|(_, &w)| w != 0).map(|(k, &w)| k * 64 + 63 - w.leading_zeros() as usize)
    }

    pub fn is_subset(&self, o: &BitSet) -> bool {
        self.words.iter().zip(&o.words).all(|(a, b)| a & !b == 0)
    }

    pub fn intersects(&self, o: &BitSet) -> bool {
        self.words.iter().zip(&o.words).any(|(a, b)| a & b != 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(k, &w)| {
            let mut w = w;
            core::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let t = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(k * 64 + t)
            })
        })
    }
}

/// A partial order on `0..len`, stored as up-sets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poset {
    up: Vec<BitSet>,
    down: Vec<BitSet>,
    labels: Vec<String>,
}

impl Poset {
    /// Builds the poset of `leq` on `labels.len()` elements, checking it is a
    /// partial order.
    pub fn new(labels: Vec<String>, leq: impl Fn(usize, usize) -> bool) -> Result<Poset, Error> {
        let n = labels.len();
        let up: Vec<BitSet> = (0..n).map(|i| BitSet::from_indices(n, (0..n).filter(|&j| leq(i, j)))).collect();
        Poset::from_up_sets(labels, up)
    }

    pub fn from_up_sets(labels: Vec<String>, up: Vec<BitSet>) -> Result<Poset, Error> {
        let n = labels.len();
        if up.len() != n {
            return Err(Error::Invalid(String::from("one up-set per element")));
        }
        for i in 0..n {
            if !up[i].contains(i) {
                return Err(Error::Invalid(format!("not reflexive at {}", labels[i])));
            }
            for j in up[i].iter() {
                if j != i && up[j].contains(i) {
                    return Err(Error::Invalid(format!("not antisymmetric: {} and {}", labels[i], labels[j])));
                }
                if !up[j].is_subset(&up[i]) {
                    return Err(Error::Invalid(format!("not transitive above {} ≤ {}", labels[i], labels[j])));
                }
            }
        }
        let mut down = alloc::vec![BitSet::new(n); n];
        for (i, u) in up.iter().enumerate() {
            for j in u.iter() {
                down[j].insert(i);
            }
        }
        Ok(Poset { up, down, labels })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.up[i].contains(j)
    }

    /// `U_p = {x : x ≥ p}`.
    pub fn up_set(&self, i: usize) -> &BitSet {
        &self.up[i]
    }

    pub fn down_set(&self, i: usize) -> &BitSet {
        &self.down[i]
    }

    /// Cover relations `(i, j)`, `i < j` with nothing strictly between.
    pub fn hasse_edges(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut out = Vec::new();
        for i in 0..n {
            let mut strict = self.up[i].clone();
            strict.remove(i);
            let mut above = BitSet::new(n);
            for k in strict.iter() {
                let mut s = self.up[k].clone();
                s.remove(k);
                above.union_with(&s);
            }
            strict.difference_with(&above);
            out.extend(strict.iter().map(|j| (i, j)));
        }
        out
    }

    /// The closure of a set in the upper-order-ideal topology: its down-set.
    pub fn closure(&self, s: &BitSet) -> BitSet {
        let mut out = BitSet::new(self.len());
        for i in s.iter() {
            out.union_with(&self.down[i]);
        }
        out
    }

    /// Open sets are the up-closed sets.
    pub fn is_open(&self, s: &BitSet) -> bool {
        s.iter().all(|i| self.up[i].is_subset(s))
    }

    pub fn is_closed(&self, s: &BitSet) -> bool {
        s.iter().all(|i| self.down[i].is_subset(s))
    }

    pub fn maxima(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.up[i].count() == 1).collect()
    }

    pub fn minima(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.down[i].count() == 1).collect()
    }

    /// Whether there is a unique maximal element; the order complex is then a cone.
    pub fn is_contractible_via_max(&self) -> bool {
        self.maxima().len() == 1
    }

    /// Whether `f: self → target` preserves the order; the first violating
    /// pair otherwise.
    pub fn monotone_failure(&self, f: &[usize], target: &Poset) -> Option<(usize, usize)> {
        (0..self.len()).find_map(|i| self.up[i].iter().find(|&j| !target.leq(f[i], f[j])).map(|j| (i, j)))
    }

    pub fn is_monotone(&self, f: &[usize], target: &Poset) -> bool {
        self.monotone_failure(f, target).is_none()
    }

    /// Strictly larger elements of `i`.
    pub fn strict_up(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.up[i].iter().filter(move |&j| j != i)
    }
}
