//! Lexicographic subsets of `[n] = {1, …, n}` and their ranks.

use alloc::string::String;
use alloc::vec::Vec;

use crate::error::Error;

/// `C(n, k)`, saturating at `u64::MAX`.
pub fn binom(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    acc as u64
}

/// All `k`-subsets of `[n]` in lexicographic order, 1-based and sorted.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut cur: Vec<usize> = (1..=k).collect();
    loop {
        out.push(cur.clone());
        // rightmost position that can still move
        let mut i = k;
        while i > 0 && cur[i - 1] == n - k + i {
            i -= 1;
        }
        if i == 0 {
            return out;
        }
        cur[i - 1] += 1;
        for j in i..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

/// Position of a sorted `k`-subset of `[n]` in [`subsets`] order.
pub fn rank(n: usize, s: &[usize]) -> usize {
    let k = s.len();
    let mut r = 0u64;
    let mut prev = 0;
    for (i, &x) in s.iter().enumerate() {
        for y in (prev + 1)..x {
            r += binom(n - y, k - i - 1);
        }
        prev = x;
    }
    r as usize
}

/// Bitmask of a subset (bit `i-1` for element `i`).
pub fn mask(s: &[usize]) -> u64 {
    s.iter().fold(0, |m, &x| m | (1u64 << (x - 1)))
}

/// `12` for ground sets up to 9 elements, `1,12` beyond.
pub fn fmt_subset(s: &[usize], n: usize) -> String {
    let mut out = String::new();
    for (i, x) in s.iter().enumerate() {
        if n > 9 && i > 0 {
            out.push(',');
        }
        out.push_str(&alloc::format!("{x}"));
    }
    out
}

/// Inverse of [`fmt_subset`]; the result is sorted and checked against `[n]`.
pub fn parse_subset(s: &str, n: usize) -> Result<Vec<usize>, Error> {
    let bad = || Error::Parse(alloc::format!("bad subset `{s}` for ground set of size {n}"));
    let mut out: Vec<usize> = if s.contains(',') || n > 9 {
        s.split(',').map(|t| t.trim().parse::<usize>().map_err(|_| bad())).collect::<Result<_, _>>()?
    } else {
        s.chars().map(|c| c.to_digit(10).map(|d| d as usize).ok_or_else(bad)).collect::<Result<_, _>>()?
    };
    out.sort_unstable();
    if out.iter().any(|&x| x == 0 || x > n) || out.windows(2).any(|w| w[0] == w[1]) {
        return Err(bad());
    }
    Ok(out)
}

/// Sorts a tuple, returning the permutation parity, or `None` on a repeat.
pub fn sort_with_parity(t: &[usize]) -> Option<(Vec<usize>, bool)> {
    let mut v = t.to_vec();
    let mut odd = false;
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            v.swap(j - 1, j);
            odd = !odd;
            j -= 1;
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some((v, odd))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lex_order() {
        let s = subsets(4, 2);
        let f: Vec<String> = s.iter().map(|x| fmt_subset(x, 4)).collect();
        assert_eq!(f, ["12", "13", "14", "23", "24", "34"]);
        for n in 1..9 {
            for k in 0..=n {
                let all = subsets(n, k);
                assert_eq!(all.len() as u64, binom(n, k));
                for (i, x) in all.iter().enumerate() {
                    assert_eq!(rank(n, x), i);
                }
            }
        }
        assert_eq!(binom(60, 30), 118264581564861424);
    }

    #[test]
    fn parity_and_parse() {
        assert_eq!(sort_with_parity(&[2, 1]), Some((alloc::vec![1, 2], true)));
        assert_eq!(sort_with_parity(&[3, 1, 2]), Some((alloc::vec![1, 2, 3], false)));
        assert_eq!(sort_with_parity(&[1, 1]), None);
        assert_eq!(parse_subset("31", 4).unwrap(), [1, 3]);
        assert_eq!(parse_subset("1,10", 12).unwrap(), [1, 10]);
        assert_eq!(fmt_subset(&[1, 10], 12), "1,10");
        assert!(parse_subset("15", 4).is_err());
        assert!(parse_subset("11", 4).is_err());
    }
}
