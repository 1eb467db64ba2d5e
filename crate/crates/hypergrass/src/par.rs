//! Thread pools and the parallel drivers: prefix-partitioned searches merged
//! in prefix order, and boundary ranks computed per dimension.

use rayon::prelude::*;

use hypergrass_core::search::Search;
use hypergrass_core::topology::Complex;

pub fn pool(threads: Option<usize>) -> anyhow::Result<rayon::ThreadPool> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(t) = threads {
        if t == 0 {
            anyhow::bail!("--threads must be at least 1");
        }
        b = b.num_threads(t);
    }
    Ok(b.build()?)
}

/// Prefixes deep enough to give every worker several subtrees.
fn split(search: &Search, workers: usize) -> Vec<Vec<i8>> {
    let want = workers * 8;
    let mut depth = 1;
    loop {
        let p = search.prefixes(depth);
        if p.len() >= want || depth >= search.coords() {
            return p;
        }
        depth += 1;
    }
}

/// Every solution, in the same order as the serial search.
pub fn solutions(search: &Search, pool: &rayon::ThreadPool) -> Vec<Vec<i8>> {
    let prefixes = split(search, pool.current_num_threads());
    let chunks: Vec<Vec<Vec<i8>>> = pool.install(|| {
        prefixes
            .par_iter()
            .map(|p| {
                let mut out = Vec::new();
                search.run_from(p, &mut |x| {
                    out.push(x.to_vec());
                    true
                });
                out
            })
            .collect()
    });
    chunks.into_iter().flatten().collect()
}

/// The number of solutions and the first `keep` of them in serial order.
pub fn count_and_first(search: &Search, pool: &rayon::ThreadPool, keep: usize) -> (u64, Vec<Vec<i8>>) {
    let prefixes = split(search, pool.current_num_threads());
    let parts: Vec<(u64, Vec<Vec<i8>>)> = pool.install(|| {
        prefixes
            .par_iter()
            .map(|p| {
                let mut count = 0u64;
                let mut first = Vec::new();
                search.run_from(p, &mut |x| {
                    count += 1;
                    if first.len() < keep {
                        first.push(x.to_vec());
                    }
                    true
                });
                (count, first)
            })
            .collect()
    });
    let total = parts.iter().map(|p| p.0).sum();
    let first = parts.into_iter().flat_map(|p| p.1).take(keep).collect();
    (total, first)
}

/// `rank ∂_k` for every `k`, one task per dimension.
pub fn boundary_ranks(c: &Complex, pool: &rayon::ThreadPool) -> Vec<usize> {
    let top = c.f_vector().len();
    pool.install(|| (0..=top).into_par_iter().map(|k| c.boundary_rank(k)).collect())
}

pub fn homology(c: &Complex, pool: &rayon::ThreadPool) -> Vec<usize> {
    c.betti_from_ranks(&boundary_ranks(c, pool))
}
