//! Exhaustive element enumeration for small permutation groups. This is the
//! independent oracle the stabilizer-chain path is checked against; it shares
//! nothing with the chain construction beyond the `Perm` type.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::quotient::chain::Perm;

/// All elements of the group generated by `gens`, by breadth-first product
/// closure. Refuses to return a truncated set.
pub fn enumerate_elements(degree: usize, gens: &[Perm], cap: usize) -> Result<Vec<Perm>> {
    for g in gens {
        if g.degree() != degree {
            return Err(Error::DegreeMismatch {
                expected: degree,
                got: g.degree(),
            });
        }
    }
    let mut seen: HashSet<Perm> = HashSet::new();
    let mut queue: Vec<Perm> = Vec::new();
    let identity = Perm::identity(degree);
    seen.insert(identity.clone());
    queue.push(identity);
    let mut next = 0;
    while next < queue.len() {
        let current = queue[next].clone();
        next += 1;
        for g in gens {
            let product = g.compose(&current);
            if !seen.contains(&product) {
                if seen.len() >= cap {
                    return Err(Error::BallBudgetExceeded {
                        detail: format!("naive closure exceeded {cap} elements"),
                    });
                }
                seen.insert(product.clone());
                queue.push(product);
            }
        }
    }
    Ok(queue)
}

/// Order by naive closure.
pub fn naive_order(degree: usize, gens: &[Perm], cap: usize) -> Result<usize> {
    Ok(enumerate_elements(degree, gens, cap)?.len())
}

/// Exact derived subgroup by brute force: every pairwise commutator of
/// elements, then product closure. Only viable at toy degrees.
pub fn naive_derived_subgroup(degree: usize, gens: &[Perm], cap: usize) -> Result<Vec<Perm>> {
    let elements = enumerate_elements(degree, gens, cap)?;
    let mut commutators: HashSet<Perm> = HashSet::new();
    for x in &elements {
        for y in &elements {
            commutators.insert(x.commutator(y));
        }
    }
    let comm_gens: Vec<Perm> = commutators.into_iter().collect();
    enumerate_elements(degree, &comm_gens, cap)
}
