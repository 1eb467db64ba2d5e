//! Order complexes of finite posets and their mod-2 homology.

use alloc::format;
use alloc::vec::Vec;

use crate::error::Error;
use crate::poset::{BitSet, Poset};

pub const DEFAULT_SIMPLEX_CAP: usize = 50_000_000;

/// A simplicial complex on `0..vertices`; `faces[k]` holds the
/// `k`-simplices as sorted vertex lists, in lexicographic order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Complex {
    vertices: usize,
    faces: Vec<Vec<Vec<u32>>>,
}

/// The chains `p_0 < … < p_k` of a poset as a simplicial complex.
pub fn order_complex(p: &Poset, cap: usize) -> Result<Complex, Error> {
    let n = p.len();
    let mut faces: Vec<Vec<Vec<u32>>> = Vec::new();
    let mut total = 0usize;
    let mut chain: Vec<u32> = Vec::new();
    fn extend(p: &Poset, chain: &mut Vec<u32>, faces: &mut Vec<Vec<Vec<u32>>>, total: &mut usize, cap: usize) -> Result<(), Error> {
        *total += 1;
        if *total > cap {
            return Err(Error::TooLarge(format!("order complex has more than {cap} simplices")));
        }
        let k = chain.len() - 1;
        if faces.len() <= k {
            faces.push(Vec::new());
        }
        let mut s = chain.clone();
        s.sort_unstable();
        faces[k].push(s);
        let last = *chain.last().unwrap() as usize;
        let above: Vec<usize> = p.strict_up(last).collect();
        for j in above {
            chain.push(j as u32);
            extend(p, chain, faces, total, cap)?;
            chain.pop();
        }
        Ok(())
    }
    for i in 0..n {
        chain.push(i as u32);
        extend(p, &mut chain, &mut faces, &mut total, cap)?;
        chain.pop();
    }
    for f in faces.iter_mut() {
        f.sort_unstable();
    }
    Ok(Complex { vertices: n, faces })
}

impl Complex {
    /// A complex from its maximal simplices, closing under faces.
    pub fn from_facets(vertices: usize, facets: &[Vec<u32>]) -> Complex {
        let mut faces: Vec<Vec<Vec<u32>>> = Vec::new();
        for f in facets {
            let mut f = f.clone();
            f.sort_unstable();
            f.dedup();
            let k = f.len();
            for m in 1u64..(1 << k) {
                let s: Vec<u32> = (0..k).filter(|&i| m & (1 << i) != 0).map(|i| f[i]).collect();
                while faces.len() < s.len() {
                    faces.push(Vec::new());
                }
                faces[s.len() - 1].push(s);
            }
        }
        for f in faces.iter_mut() {
            f.sort_unstable();
            f.dedup();
        }
        Complex { vertices, faces }
    }

    pub fn vertices(&self) -> usize {
        self.vertices
    }

    pub fn dim(&self) -> isize {
        self.faces.len() as isize - 1
    }

    pub fn faces(&self, k: usize) -> &[Vec<u32>] {
        self.faces.get(k).map(|v| v.as_slice()).unwrap_or(&[])
    }

    pub fn f_vector(&self) -> Vec<usize> {
        self.faces.iter().map(|f| f.len()).collect()
    }

    fn index(&self, k: usize, s: &[u32]) -> Option<usize> {
        self.faces.get(k)?.binary_search_by(|x| x.as_slice().cmp(s)).ok()
    }

    fn boundary(&self, k: usize, i: usize) -> Vec<usize> {
        let s = &self.faces[k][i];
        (0..s.len())
            .map(|d| {
                let f: Vec<u32> = s.iter().enumerate().filter(|&(j, _)| j != d).map(|(_, &v)| v).collect();
                self.index(k - 1, &f).expect("complex is closed under faces")
            })
            .collect()
    }

    /// Every face of every simplex is present.
    pub fn is_closed_under_faces(&self) -> bool {
        (1..self.faces.len()).all(|k| {
            self.faces[k].iter().all(|s| {
                (0..s.len()).all(|d| {
                    let f: Vec<u32> = s.iter().enumerate().filter(|&(j, _)| j != d).map(|(_, &v)| v).collect();
                    self.index(k - 1, &f).is_some()
                })
            })
        })
    }

    /// Rank over GF(2) of `∂_k: C_k → C_{k−1}`, by elimination on bitset rows.
    pub fn boundary_rank(&self, k: usize) -> usize {
        if k == 0 || k >= self.faces.len() {
            return 0;
        }
        let cols = self.faces[k - 1].len();
        let mut pivots: Vec<Option<BitSet>> = alloc::vec![None; cols];
        let mut rank = 0;
        for i in 0..self.faces[k].len() {
            let mut row = BitSet::from_indices(cols, self.boundary(k, i));
            while let Some(p) = row.last() {
                match &pivots[p] {
                    Some(r) => row.xor_with(r),
                    None => {
                        pivots[p] = Some(row);
                        rank += 1;
                        break;
                    }
                }
            }
        }
        rank
    }

    /// Mod-2 Betti numbers `β_0, …, β_dim`.
    pub fn betti_from_ranks(&self, ranks: &[usize]) -> Vec<usize> {
        let f = self.f_vector();
        (0..f.len()).map(|k| f[k] - ranks[k] - ranks.get(k + 1).copied().unwrap_or(0)).collect()
    }

    /// `rank ∂_k` for `k = 0..=dim+1`.
    pub fn boundary_ranks(&self) -> Vec<usize> {
        (0..=self.faces.len()).map(|k| self.boundary_rank(k)).collect()
    }

    pub fn homology_mod2(&self) -> Vec<usize> {
        self.betti_from_ranks(&self.boundary_ranks())
    }

    /// `Σ (−1)^k f_k`.
    pub fn euler_characteristic(&self) -> i64 {
        alternating(&self.f_vector())
    }

    /// `∂_{k−1} ∘ ∂_k = 0` over GF(2) for every simplex.
    pub fn boundary_squares_to_zero(&self) -> bool {
        (2..self.faces.len()).all(|k| {
            (0..self.faces[k].len()).all(|i| {
                let mut acc = BitSet::new(self.faces[k - 2].len());
                for f in self.boundary(k, i) {
                    acc.xor_with(&BitSet::from_indices(self.faces[k - 2].len(), self.boundary(k - 1, f)));
                }
                acc.is_empty()
            })
        })
    }
}

/// `Σ (−1)^k a_k`.
pub fn alternating(a: &[usize]) -> i64 {
    a.iter().enumerate().map(|(k, &x)| if k % 2 == 0 { x as i64 } else { -(x as i64) }).sum()
}

/// The first simplex of `‖P‖` whose image under `f` is not a chain of `Q`.
pub fn simplicial_image_failure(c: &Complex, f: &[usize], target: &Poset) -> Option<Vec<u32>> {
    for k in 0..c.faces.len() {
        for s in &c.faces[k] {
            let img: Vec<usize> = s.iter().map(|&v| f[v as usize]).collect();
            let ok = img.iter().all(|&a| img.iter().all(|&b| target.leq(a, b) || target.leq(b, a)));
            if !ok {
                return Some(s.clone());
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::String;
    use alloc::vec;

    fn labels(n: usize) -> Vec<String> {
        (0..n).map(|i| format!("{i}")).collect()
    }

    #[test]
    fn basic_complexes() {
        let point = Poset::new(labels(1), |i, j| i == j).unwrap();
        assert_eq!(order_complex(&point, 10).unwrap().homology_mod2(), [1]);
        let anti = Poset::new(labels(3), |i, j| i == j).unwrap();
        let c = order_complex(&anti, 10).unwrap();
        assert_eq!(c.f_vector(), [3]);
        assert_eq!(c.homology_mod2(), [3]);
        let chain = Poset::new(labels(2), |i, j| i <= j).unwrap();
        let c = order_complex(&chain, 10).unwrap();
        assert_eq!(c.f_vector(), [2, 1]);
        assert_eq!(c.homology_mod2(), [1, 0]);
        assert!(order_complex(&chain, 2).is_err());
    }

    #[test]
    fn circle() {
        // face poset of a triangle's boundary: vertices 0..3, edges 3..6
        let edges = [(0, 1), (1, 2), (0, 2)];
        let leq = |i: usize, j: usize| i == j || (i < 3 && j >= 3 && (edges[j - 3].0 == i || edges[j - 3].1 == i));
        let p = Poset::new(labels(6), leq).unwrap();
        let c = order_complex(&p, 100).unwrap();
        assert!(c.is_closed_under_faces());
        assert!(c.boundary_squares_to_zero());
        assert_eq!(c.homology_mod2(), [1, 1]);
        let tri = Complex::from_facets(3, &[vec![0, 1], vec![1, 2], vec![0, 2]]);
        assert_eq!(tri.homology_mod2(), [1, 1]);
        let disk = Complex::from_facets(3, &[vec![0, 1, 2]]);
        assert_eq!(disk.homology_mod2(), [1, 0, 0]);
        let b = disk.homology_mod2();
        assert_eq!(alternating(&b), disk.euler_characteristic());
    }

    #[test]
    fn projective_plane() {
        // minimal 6-vertex triangulation of RP^2
        let facets: Vec<Vec<u32>> = [
            [0, 1, 3], [0, 1, 5], [0, 2, 4], [0, 2, 5], [0, 3, 4],
            [1, 2, 3], [1, 2, 4], [1, 4, 5], [2, 3, 5], [3, 4, 5],
        ]
        .iter()
        .map(|f| f.to_vec())
        .collect();
        let c = Complex::from_facets(6, &facets);
        assert_eq!(c.f_vector(), [6, 15, 10]);
        assert_eq!(c.homology_mod2(), [1, 1, 1]);
        assert!(c.boundary_squares_to_zero());
    }
}
