//! Unique products and extremal elements on finite subsets, decided exactly
//! through canonical keys, plus key-free brute-force twins used to re-verify
//! every reported value.

use std::collections::HashMap;

use crate::engine::CanonicalKey;
use crate::error::{Error, Result};
use crate::group::GgsGroup;
use crate::search::FiniteSubset;
use crate::words::ReducedWord;

/// One equality class of products A[i]*B[j].
#[derive(Debug, Clone)]
pub struct ProductClass {
    pub representative: ReducedWord,
    pub key: CanonicalKey,
    /// Index pairs landing in this class, in row-major (i, j) order.
    pub pairs: Vec<(usize, usize)>,
}

/// The multiset of pairwise products with multiplicity provenance: every
/// (i, j) appears in exactly one class.
#[derive(Debug, Clone)]
pub struct ProductTable {
    pub classes: Vec<ProductClass>,
}

impl ProductTable {
    pub fn build(group: &GgsGroup, a: &FiniteSubset, b: &FiniteSubset) -> Result<ProductTable> {
        let mut classes: Vec<ProductClass> = Vec::new();
        let mut by_key: HashMap<CanonicalKey, usize> = HashMap::new();
        for i in 0..a.len() {
            for j in 0..b.len() {
                let product = group.mul(a.element(i), b.element(j));
                let key = group.canonical_key(&product)?;
                match by_key.get(&key) {
                    Some(&idx) => classes[idx].pairs.push((i, j)),
                    None => {
                        by_key.insert(key.clone(), classes.len());
                        classes.push(ProductClass {
                            representative: product,
                            key,
                            pairs: vec![(i, j)],
                        });
                    }
                }
            }
        }
        Ok(ProductTable { classes })
    }

    /// Sum of multiplicities; always |A|*|B|.
    pub fn total_pairs(&self) -> usize {
        self.classes.iter().map(|c| c.pairs.len()).sum()
    }

    /// Classes of multiplicity exactly one.
    pub fn unique_classes(&self) -> impl Iterator<Item = &ProductClass> {
        self.classes.iter().filter(|c| c.pairs.len() == 1)
    }
}

/// Products with a unique factorization over A x B, as (representative,
/// (i, j)) in first-occurrence order.
pub fn unique_products(
    group: &GgsGroup,
    a: &FiniteSubset,
    b: &FiniteSubset,
) -> Result<Vec<(ReducedWord, (usize, usize))>> {
    let table = ProductTable::build(group, a, b)?;
    Ok(table
        .unique_classes()
        .map(|c| (c.representative.clone(), c.pairs[0]))
        .collect())
}

/// Number of multiplicity-1 classes.
pub fn up_count(group: &GgsGroup, a: &FiniteSubset, b: &FiniteSubset) -> Result<u64> {
    Ok(ProductTable::build(group, a, b)?.unique_classes().count() as u64)
}

/// The two-unique-products predicate; requires |A|*|B| >= 2.
pub fn has_two_unique_products(
    group: &GgsGroup,
    a: &FiniteSubset,
    b: &FiniteSubset,
) -> Result<bool> {
    let product = (a.len() as u64) * (b.len() as u64);
    if product < 2 {
        return Err(Error::SubsetTooSmall { product });
    }
    Ok(up_count(group, a, b)? >= 2)
}

/// Key-free recomputation of the unique-product count: classes products by
/// pairwise closure-based equality only. The independent verification path.
pub fn up_count_bruteforce(group: &GgsGroup, a: &FiniteSubset, b: &FiniteSubset) -> Result<u64> {
    let mut reps: Vec<ReducedWord> = Vec::new();
    let mut multiplicity: Vec<u64> = Vec::new();
    for x in a.elements() {
        for y in b.elements() {
            let product = group.mul(x, y);
            let mut found = false;
            for (rep, count) in reps.iter().zip(multiplicity.iter_mut()) {
                if group.equal(rep, &product)? {
                    *count += 1;
                    found = true;
                    break;
                }
            }
            if !found {
                reps.push(product);
                multiplicity.push(1);
            }
        }
    }
    Ok(multiplicity.iter().filter(|&&m| m == 1).count() as u64)
}

/// Indices of the extremal elements of A.
///
/// a is non-extremal iff some s != 1 has both as and as^-1 in A. Every s
/// with as in A arises as s = a^-1 a' for some a' in A, a finite set, so the
/// universally quantified definition is decided exactly by checking
/// a*(a^-1 a')^-1 = a a'^-1 a against A for each a' != a.
pub fn extremal_elements(group: &GgsGroup, a: &FiniteSubset) -> Result<Vec<usize>> {
    let mut extremal = Vec::new();
    for i in 0..a.len() {
        let ai = a.element(i);
        let mut is_extremal = true;
        for j in 0..a.len() {
            if i == j {
                continue;
            }
            // s = ai^-1 aj != 1 since the subset has no duplicates.
            let back = group.mul(&group.mul(ai, &group.inv(a.element(j))), ai);
            let key = group.canonical_key(&back)?;
            if a.contains_key(&key) {
                is_extremal = false;
                break;
            }
        }
        if is_extremal {
            extremal.push(i);
        }
    }
    Ok(extremal)
}

/// Definition-level brute force over the candidate set s in a^-1 A, with
/// membership decided by pairwise equality; no canonical keys involved.
pub fn extremal_elements_bruteforce(group: &GgsGroup, a: &FiniteSubset) -> Result<Vec<usize>> {
    let contains = |word: &ReducedWord| -> Result<bool> {
        for x in a.elements() {
            if group.equal(x, word)? {
                return Ok(true);
            }
        }
        Ok(false)
    };
    let mut extremal = Vec::new();
    for i in 0..a.len() {
        let ai = a.element(i);
        let ai_inv = group.inv(ai);
        let mut is_extremal = true;
        for aj in a.elements() {
            let s = group.mul(&ai_inv, aj);
            if group.is_identity(&s)? {
                continue;
            }
            let forward = group.mul(ai, &s);
            let backward = group.mul(ai, &group.inv(&s));
            if contains(&forward)? && contains(&backward)? {
                is_extremal = false;
                break;
            }
        }
        if is_extremal {
            extremal.push(i);
        }
    }
    Ok(extremal)
}

/// True iff A has no extremal element, i.e. A witnesses non-diffuseness.
pub fn is_diffuse_witness(group: &GgsGroup, a: &FiniteSubset) -> Result<bool> {
    Ok(extremal_elements(group, a)?.is_empty())
}
