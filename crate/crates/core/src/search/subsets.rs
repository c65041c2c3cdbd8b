//! Deterministic enumeration of the non-empty subsets of `{0..n-1}` up to a
//! size bound, ordered by (size, lexicographic index vector). Positions in
//! this order are the resume cursors, so both sequential stepping and O(size)
//! unranking are provided.

use crate::error::{Error, Result};

/// Binomial coefficient, saturating at `u64::MAX`.
pub fn binomial(n: u64, k: u64) -> u64 {
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

/// Enumerator of subsets of `{0..n-1}` with sizes `1..=max_size`.
#[derive(Debug, Clone)]
pub struct SubsetEnumerator {
    n: usize,
    max_size: usize,
    /// counts[k] = number of subsets of size exactly k+1.
    counts: Vec<u64>,
    total: u64,
}

impl SubsetEnumerator {
    pub fn new(n: usize, max_size: usize) -> Result<Self> {
        let max_size = max_size.min(n);
        let mut counts = Vec::with_capacity(max_size);
        let mut total: u64 = 0;
        for k in 1..=max_size {
            let c = binomial(n as u64, k as u64);
            total = total.checked_add(c).ok_or(Error::SearchSpaceOverflow {
                detail: format!("subset count overflows u64 for n = {n}, max size {max_size}"),
            })?;
            counts.push(c);
        }
        Ok(SubsetEnumerator {
            n,
            max_size,
            counts,
            total,
        })
    }

    pub fn ground_set_size(&self) -> usize {
        self.n
    }

    pub fn max_size(&self) -> usize {
        self.max_size
    }

    /// Total number of subsets in the enumeration order.
    pub fn count(&self) -> u64 {
        self.total
    }

    /// Number of subsets of size exactly k.
    pub fn count_of_size(&self, k: usize) -> u64 {
        if k == 0 || k > self.max_size {
            0
        } else {
            self.counts[k - 1]
        }
    }

    /// The subset at a given position: size class first, then lexicographic
    /// unranking of the k-combination within it.
    pub fn unrank(&self, position: u64) -> Result<Vec<usize>> {
        if position >= self.total {
            return Err(Error::CursorOutOfRange {
                cursor: position,
                total: self.total,
            });
        }
        let mut rest = position;
        let mut k = 1usize;
        for &c in &self.counts {
            if rest < c {
                break;
            }
            rest -= c;
            k += 1;
        }
        Ok(unrank_combination(self.n, k, rest))
    }
}

/// Lexicographic unranking of a k-combination of `{0..n-1}`.
fn unrank_combination(n: usize, k: usize, mut rank: u64) -> Vec<usize> {
    let mut result = Vec::with_capacity(k);
    let mut x = 0usize;
    for slot in 0..k {
        loop {
            let with_x = binomial((n - x - 1) as u64, (k - slot - 1) as u64);
            if rank < with_x {
                result.push(x);
                x += 1;
                break;
            }
            rank -= with_x;
            x += 1;
        }
    }
    result
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 3), 10);
        assert_eq!(binomial(61, 3), 35990);
        assert_eq!(binomial(4, 0), 1);
        assert_eq!(binomial(3, 7), 0);
    }

    #[test]
    fn enumeration_order_is_size_then_lex() {
        let e = SubsetEnumerator::new(4, 2).unwrap();
        assert_eq!(e.count(), 4 + 6);
        let all: Vec<Vec<usize>> = (0..e.count()).map(|i| e.unrank(i).unwrap()).collect();
        assert_eq!(
            all,
            vec![
                vec![0],
                vec![1],
                vec![2],
                vec![3],
                vec![0, 1],
                vec![0, 2],
                vec![0, 3],
                vec![1, 2],
                vec![1, 3],
                vec![2, 3],
            ]
        );
        assert!(e.unrank(e.count()).is_err());
    }

    fn gen_combinations(n: usize, k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for x in start..n {
            cur.push(x);
            gen_combinations(n, k, x + 1, cur, out);
            cur.pop();
        }
    }

    #[test]
    fn unranking_matches_exhaustive_generation() {
        let e = SubsetEnumerator::new(7, 3).unwrap();
        let mut expected = Vec::new();
        for k in 1..=3usize {
            gen_combinations(7, k, 0, &mut Vec::new(), &mut expected);
        }
        assert_eq!(expected.len() as u64, e.count());
        for (i, subset) in expected.iter().enumerate() {
            assert_eq!(&e.unrank(i as u64).unwrap(), subset, "position {i}");
        }
    }
}
