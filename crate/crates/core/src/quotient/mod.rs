//! Congruence quotients G_n = G/stab_G(n) as permutation groups on the p^n
//! level-n vertices: orders, p-power certification, transitivity, abelian
//! quotient orders, rigid stabilizers, and fractality evidence.
//!
//! Leaves are ordered lexicographically by vertex word; this ordering is
//! fixed because `LeafPermutation` serialization depends on it.

pub mod chain;
pub mod naive;

use std::collections::VecDeque;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

pub use chain::{Perm, PermutationGroup, Point, StabilizerChain};

use crate::error::{Error, Result};
use crate::group::GgsGroup;
use crate::tree::Vertex;
use crate::words::ReducedWord;

/// Default cap on quotient degree p^n (p = 5, n = 5).
pub const DEFAULT_DEGREE_BUDGET: u64 = 3125;

/// Cap for the naive-closure oracle; beyond toy degrees it is meaningless.
pub const NAIVE_DEGREE_LIMIT: usize = 27;

/// The action of a word on the level-n vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LeafPermutation {
    level: usize,
    perm: Perm,
}

impl LeafPermutation {
    pub fn level(&self) -> usize {
        self.level
    }

    pub fn degree(&self) -> usize {
        self.perm.degree()
    }

    pub fn perm(&self) -> &Perm {
        &self.perm
    }

    pub fn into_perm(self) -> Perm {
        self.perm
    }

    /// Image of the leaf with the given lexicographic rank.
    pub fn apply(&self, leaf: Point) -> Point {
        self.perm.apply(leaf)
    }
}

fn checked_degree(p: u32, n: usize, budget: u64) -> Result<usize> {
    let mut degree: u64 = 1;
    for _ in 0..n {
        degree = degree.saturating_mul(p as u64);
        if degree > budget {
            return Err(Error::DegreeBudgetExceeded { degree, budget });
        }
    }
    Ok(degree as usize)
}

/// Leaf action of `g` at level n, with leaves in lexicographic vertex order.
pub fn leaf_permutation(group: &GgsGroup, g: &ReducedWord, n: usize) -> Result<LeafPermutation> {
    leaf_permutation_with_budget(group, g, n, DEFAULT_DEGREE_BUDGET)
}

pub fn leaf_permutation_with_budget(
    group: &GgsGroup,
    g: &ReducedWord,
    n: usize,
    budget: u64,
) -> Result<LeafPermutation> {
    checked_degree(group.p(), n, budget)?;
    let images = group.level_images(g, n);
    let perm = Perm::from_images(images.into_iter().map(|i| i as Point).collect())?;
    Ok(LeafPermutation { level: n, perm })
}

/// The congruence quotient G_n as a permutation group generated by the leaf
/// actions of `a` and `b`, with its stabilizer chain.
pub fn quotient_group(group: &GgsGroup, n: usize) -> Result<PermutationGroup> {
    quotient_group_with_budget(group, n, DEFAULT_DEGREE_BUDGET)
}

pub fn quotient_group_with_budget(
    group: &GgsGroup,
    n: usize,
    budget: u64,
) -> Result<PermutationGroup> {
    let degree = checked_degree(group.p(), n, budget)?;
    let gens = vec![
        leaf_permutation_with_budget(group, &ReducedWord::gen_a(), n, budget)?.into_perm(),
        leaf_permutation_with_budget(group, &ReducedWord::gen_b(), n, budget)?.into_perm(),
    ];
    PermutationGroup::from_generators(degree, gens)
}

/// Single-orbit check over generator images, by BFS from leaf 0.
pub fn transitive_on_points(degree: usize, gens: &[Perm]) -> bool {
    if degree == 0 {
        return true;
    }
    let mut seen = vec![false; degree];
    let mut queue = VecDeque::new();
    seen[0] = true;
    queue.push_back(0 as Point);
    let mut count = 1usize;
    while let Some(x) = queue.pop_front() {
        for g in gens {
            let img = g.apply(x);
            if !seen[img as usize] {
                seen[img as usize] = true;
                count += 1;
                queue.push_back(img);
            }
        }
    }
    count == degree
}

/// Does G act transitively on level n (spherical transitivity at one level)?
pub fn is_transitive_on_level(group: &GgsGroup, n: usize) -> Result<bool> {
    let gens = [
        leaf_permutation(group, &ReducedWord::gen_a(), n)?.into_perm(),
        leaf_permutation(group, &ReducedWord::gen_b(), n)?.into_perm(),
    ];
    Ok(transitive_on_points(gens[0].degree(), &gens))
}

/// Outcome of p-power certification of a group order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PPowerCertificate {
    /// order = p^exponent.
    Power { exponent: u32 },
    /// Not a p-power; `factor` divides the p-free part.
    Failure { factor: BigUint },
}

/// Largest k with p^k = order, else the offending factor of the cofactor.
pub fn certify_p_power(order: &BigUint, p: u32) -> PPowerCertificate {
    let p_big = BigUint::from(p);
    let mut rest = order.clone();
    let mut exponent = 0u32;
    while (&rest % &p_big).is_zero() {
        rest /= &p_big;
        exponent += 1;
    }
    if rest.is_one() {
        PPowerCertificate::Power { exponent }
    } else {
        PPowerCertificate::Failure {
            factor: smallest_factor(&rest),
        }
    }
}

/// Smallest prime factor by trial division; orders here are products of
/// orbit lengths <= 3125, so a small bound always suffices. Falls back to
/// the cofactor itself.
fn smallest_factor(n: &BigUint) -> BigUint {
    let mut d = BigUint::from(2u32);
    let limit = BigUint::from(1u32 << 16);
    while &d * &d <= *n && d <= limit {
        if (n % &d).is_zero() {
            return d;
        }
        d += BigUint::one();
    }
    n.clone()
}

/// Derived subgroup [P, P]: normal closure of the generator commutators,
/// with a deterministic FIFO worklist of conjugations.
pub fn derived_subgroup(group: &PermutationGroup) -> Result<PermutationGroup> {
    let degree = group.degree();
    let gens = group.generators();
    let mut derived = PermutationGroup::trivial(degree);
    let mut worklist: VecDeque<Perm> = VecDeque::new();
    for (i, x) in gens.iter().enumerate() {
        for y in &gens[i + 1..] {
            let c = x.commutator(y);
            if derived.adjoin(c.clone())? {
                worklist.push_back(c);
            }
        }
    }
    while let Some(d) = worklist.pop_front() {
        for g in gens {
            let conjugate = g.inverse().compose(&d).compose(g);
            if derived.adjoin(conjugate.clone())? {
                worklist.push_back(conjugate);
            }
        }
    }
    Ok(derived)
}

/// Order of P/[P,P], plus whether that quotient is elementary abelian
/// (every generator image has order dividing p).
pub fn abelian_quotient_order(group: &PermutationGroup, p: u32) -> Result<(BigUint, bool)> {
    let derived = derived_subgroup(group)?;
    let order = group.order() / derived.order();
    let mut elementary = true;
    for g in group.generators() {
        if !derived.contains(&g.pow(p as u64))? {
            elementary = false;
            break;
        }
    }
    Ok((order, elementary))
}

/// Leaves (lex ranks) at level n strictly below the vertex `v`.
pub fn leaves_below(v: &Vertex, n: usize, p: u32) -> Result<Vec<Point>> {
    if v.len() > n {
        return Err(Error::VertexTooDeep {
            vertex: v.to_string(),
            len: v.len(),
            bound: n + 1,
        });
    }
    let block = (p as u64).pow((n - v.len()) as u32);
    let start = v.lex_index(p) * block;
    Ok((start..start + block).map(|i| i as Point).collect())
}

/// The subgroup of G_n fixing every leaf outside the subtree below `v`,
/// computed as a pointwise stabilizer through a prescribed-base chain.
pub fn rigid_stabilizer_in_quotient(
    group: &GgsGroup,
    n: usize,
    v: &Vertex,
) -> Result<PermutationGroup> {
    rigid_stabilizer_with_budget(group, n, v, DEFAULT_DEGREE_BUDGET)
}

pub fn rigid_stabilizer_with_budget(
    group: &GgsGroup,
    n: usize,
    v: &Vertex,
    budget: u64,
) -> Result<PermutationGroup> {
    let quotient = quotient_group_with_budget(group, n, budget)?;
    if v.is_root() {
        return Ok(quotient);
    }
    let inside = leaves_below(v, n, group.p())?;
    let degree = quotient.degree();
    let mut is_inside = vec![false; degree];
    for &leaf in &inside {
        is_inside[leaf as usize] = true;
    }
    let outside: Vec<Point> = (0..degree as Point)
        .filter(|&x| !is_inside[x as usize])
        .collect();
    pointwise_stabilizer(&quotient, &outside)
}

/// Pointwise stabilizer of a leaf set: rebuild the chain with those points
/// as the prescribed base prefix and take the strong generators that fix
/// them all.
pub fn pointwise_stabilizer(
    group: &PermutationGroup,
    fixed: &[Point],
) -> Result<PermutationGroup> {
    let degree = group.degree();
    for &x in fixed {
        if x as usize >= degree {
            return Err(Error::DegreeMismatch {
                expected: degree,
                got: x as usize,
            });
        }
    }
    let rebased = PermutationGroup::with_base_hint(
        degree,
        group.generators().to_vec(),
        fixed,
    )?;
    let stab_gens = rebased.chain().strong_generators_from(fixed.len());
    PermutationGroup::from_generators(degree, stab_gens)
}

/// Report for one congruence quotient level.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct QuotientReport {
    pub p: u32,
    pub e: Vec<u32>,
    pub n: usize,
    /// Group order as a decimal string (arbitrary precision).
    pub order: String,
    /// k with order = p^k, when certification succeeded.
    pub p_power_exponent: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p_power_failure_factor: Option<String>,
    pub transitive: bool,
    pub abelian_quotient_order: String,
    pub elementary_abelian: bool,
}

/// Full per-level analysis: order, p-power certificate, transitivity, and
/// abelian quotient order.
pub fn quotient_report(group: &GgsGroup, n: usize, budget: u64) -> Result<QuotientReport> {
    let quotient = quotient_group_with_budget(group, n, budget)?;
    let order = quotient.order();
    let certificate = certify_p_power(&order, group.p());
    let (p_power_exponent, p_power_failure_factor) = match certificate {
        PPowerCertificate::Power { exponent } => (Some(exponent), None),
        PPowerCertificate::Failure { factor } => (None, Some(factor.to_string())),
    };
    let (ab_order, elementary) = abelian_quotient_order(&quotient, group.p())?;
    Ok(QuotientReport {
        p: group.p(),
        e: group.vector().e.clone(),
        n,
        order: order.to_string(),
        p_power_exponent,
        p_power_failure_factor,
        transitive: is_transitive_on_level(group, n)?,
        abelian_quotient_order: ab_order.to_string(),
        elementary_abelian: elementary,
    })
}

/// Finite-depth fractality check at vertex `v`: Schreier generators of the
/// vertex stabilizer (as words) are sectioned at `v`; the check passes when
/// their leaf actions at the given depth generate the same permutation group
/// as G itself does at that depth. Evidence, not a proof.
pub fn fractality_evidence(group: &GgsGroup, v: &Vertex, depth: usize) -> Result<bool> {
    if v.is_root() {
        return Ok(true);
    }
    let stab_words = vertex_stabilizer_words(group, v)?;
    let mut section_gens = Vec::with_capacity(stab_words.len());
    for w in &stab_words {
        let section = group.section_at_vertex(w, v)?;
        section_gens.push(leaf_permutation(group, &section, depth)?.into_perm());
    }
    let degree = checked_degree(group.p(), depth, DEFAULT_DEGREE_BUDGET)?;
    let restricted = PermutationGroup::from_generators(degree, section_gens)?;
    let full = quotient_group(group, depth)?;
    restricted.equals(&full)
}

/// Words generating stab_G(v) (Schreier generators from the orbit of `v`
/// under a, a^-1, b, b^-1 at level |v|).
pub fn vertex_stabilizer_words(group: &GgsGroup, v: &Vertex) -> Result<Vec<ReducedWord>> {
    let p = group.p();
    let level = v.len();
    checked_degree(p, level, DEFAULT_DEGREE_BUDGET)?;
    let gens: Vec<ReducedWord> = vec![
        ReducedWord::gen_a(),
        ReducedWord::a_pow(-1, p),
        ReducedWord::gen_b(),
        ReducedWord::b_pow(-1, p),
    ];

    // BFS transversal over the orbit of v: words[x] maps v to x.
    let degree = (p as u64).pow(level as u32) as usize;
    let mut transversal: Vec<Option<ReducedWord>> = vec![None; degree];
    let start = v.lex_index(p) as usize;
    transversal[start] = Some(ReducedWord::identity());
    let mut queue: VecDeque<usize> = VecDeque::new();
    queue.push_back(start);
    let mut orbit = vec![start];
    while let Some(x) = queue.pop_front() {
        let u_x = transversal[x].clone().unwrap();
        let vx = Vertex::from_lex_index(x as u64, level, p);
        for g in &gens {
            let img = group.act(g, &vx).lex_index(p) as usize;
            if transversal[img].is_none() {
                transversal[img] = Some(group.mul(g, &u_x));
                orbit.push(img);
                queue.push_back(img);
            }
        }
    }

    let mut words = Vec::new();
    for &x in &orbit {
        let u_x = transversal[x].as_ref().unwrap();
        let vx = Vertex::from_lex_index(x as u64, level, p);
        for g in &gens {
            let img = group.act(g, &vx).lex_index(p) as usize;
            let u_img = transversal[img].as_ref().unwrap();
            // u_img^-1 g u_x fixes v.
            let word = group.mul(&group.mul(&group.inv(u_img), g), u_x);
            debug_assert_eq!(group.act(&word, v), *v);
            if !word.is_empty() && !words.contains(&word) {
                words.push(word);
            }
        }
    }
    Ok(words)
}
