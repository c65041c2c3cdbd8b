//! Exact finite-set searches: word-metric balls, unique-product and
//! extremality decisions on finite subsets, and exhaustive or seeded
//! randomized sweeps over subset pairs.
//!
//! Word length counts syllables (`a^k` has length 1 for k != 0); balls are
//! sorted by (length, syllable sequence) and deduplicated by canonical key,
//! so enumeration order is reproducible bit for bit.

pub mod products;
pub mod runner;
pub mod subsets;

use std::fmt;
use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::engine::CanonicalKey;
use crate::error::{Error, Result};
use crate::group::GgsGroup;
use crate::words::{Gen, ReducedWord, Syllable};

pub use products::{
    extremal_elements, extremal_elements_bruteforce, has_two_unique_products, is_diffuse_witness,
    unique_products, up_count, up_count_bruteforce, ProductClass, ProductTable,
};
pub use runner::{
    diffuse_search, up_search, SearchKind, SearchMode, SearchParams, SearchReport, SearchState,
    Witness,
};
pub use subsets::SubsetEnumerator;

/// Where ball elements are drawn from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Arena {
    #[serde(rename = "full")]
    Full,
    /// Elements with theta = (0, 0); coincides with the derived subgroup
    /// exactly when the abelianization is (Z/p)^2 (cross-checked by the
    /// quotient module), hence the explicit label.
    #[serde(rename = "theta-kernel")]
    ThetaKernel,
}

impl fmt::Display for Arena {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Arena::Full => write!(f, "full"),
            Arena::ThetaKernel => write!(f, "theta-kernel"),
        }
    }
}

/// Group descriptor echoed into reports and configs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct GroupDescriptor {
    pub p: u32,
    pub e: Vec<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    #[serde(default)]
    pub theorem_compliant: Option<bool>,
}

impl From<&GgsGroup> for GroupDescriptor {
    fn from(group: &GgsGroup) -> Self {
        GroupDescriptor {
            p: group.p(),
            e: group.vector().e.clone(),
            theorem_compliant: Some(group.is_theorem_compliant()),
        }
    }
}

/// Enumeration budget for balls. Exceeding it is an error: a truncated ball
/// would silently change search semantics, so no partial balls are returned.
#[derive(Debug, Clone, Copy)]
pub struct BallBudget {
    pub max_raw_words: u64,
    pub max_elements: usize,
}

impl Default for BallBudget {
    fn default() -> Self {
        BallBudget {
            max_raw_words: 50_000_000,
            max_elements: 1_000_000,
        }
    }
}

/// All distinct group elements of word length <= radius, deduplicated by
/// canonical key and listed in (length, syllable sequence) order.
#[derive(Debug, Clone)]
pub struct Ball {
    descriptor: GroupDescriptor,
    radius: usize,
    arena: Arena,
    elements: Vec<ReducedWord>,
    keys: Vec<CanonicalKey>,
}

impl Ball {
    pub fn descriptor(&self) -> &GroupDescriptor {
        &self.descriptor
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn arena(&self) -> Arena {
        self.arena
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[ReducedWord] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &ReducedWord {
        &self.elements[i]
    }

    pub fn keys(&self) -> &[CanonicalKey] {
        &self.keys
    }
}

/// Enumerates the ball of the given radius. All reduced words are generated
/// in (length, lex) order, filtered by arena, and deduplicated by canonical
/// key, so the first representative of each element is the shortest.
pub fn ball(group: &GgsGroup, radius: usize, arena: Arena) -> Result<Ball> {
    ball_with_budget(group, radius, arena, BallBudget::default())
}

pub fn ball_with_budget(
    group: &GgsGroup,
    radius: usize,
    arena: Arena,
    budget: BallBudget,
) -> Result<Ball> {
    let p = group.p();
    let mut elements: Vec<ReducedWord> = Vec::new();
    let mut keys: Vec<CanonicalKey> = Vec::new();
    let mut seen: std::collections::HashSet<CanonicalKey> = std::collections::HashSet::new();
    let mut raw_count: u64 = 0;

    let mut push = |word: ReducedWord,
                    elements: &mut Vec<ReducedWord>,
                    keys: &mut Vec<CanonicalKey>|
     -> Result<()> {
        if arena == Arena::ThetaKernel && !group.in_derived_kernel(&word) {
            return Ok(());
        }
        let key = group.canonical_key(&word)?;
        if seen.insert(key.clone()) {
            if elements.len() >= budget.max_elements {
                return Err(Error::BallBudgetExceeded {
                    detail: format!("more than {} distinct elements", budget.max_elements),
                });
            }
            elements.push(word);
            keys.push(key);
        }
        Ok(())
    };

    push(ReducedWord::identity(), &mut elements, &mut keys)?;
    for len in 1..=radius {
        for start in [Gen::A, Gen::B] {
            // Odometer over exponent vectors in lexicographic order.
            let mut exps = vec![1u32; len];
            loop {
                raw_count += 1;
                if raw_count > budget.max_raw_words {
                    return Err(Error::BallBudgetExceeded {
                        detail: format!("more than {} raw words scanned", budget.max_raw_words),
                    });
                }
                let syllables: Vec<Syllable> = exps
                    .iter()
                    .enumerate()
                    .map(|(i, &exp)| {
                        let gen = match (start, i % 2) {
                            (Gen::A, 0) | (Gen::B, 1) => Gen::A,
                            _ => Gen::B,
                        };
                        Syllable::new(gen, exp)
                    })
                    .collect();
                push(
                    ReducedWord::from_syllables_unchecked(syllables),
                    &mut elements,
                    &mut keys,
                )?;

                // Advance the odometer (last position fastest).
                let mut pos = len;
                loop {
                    if pos == 0 {
                        break;
                    }
                    pos -= 1;
                    if exps[pos] < p - 1 {
                        exps[pos] += 1;
                        for e in exps.iter_mut().skip(pos + 1) {
                            *e = 1;
                        }
                        break;
                    }
                    if pos == 0 {
                        exps.clear();
                        break;
                    }
                }
                if exps.is_empty() {
                    break;
                }
            }
        }
    }

    debug_assert!(elements
        .windows(2)
        .all(|w| (w[0].len(), w[0].syllables()) < (w[1].len(), w[1].syllables())));

    Ok(Ball {
        descriptor: GroupDescriptor::from(group),
        radius,
        arena,
        elements,
        keys,
    })
}

const BALL_CACHE_FORMAT_VERSION: u32 = 1;

#[derive(Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "camelCase")]
struct BallCacheHeader {
    format_version: u32,
    p: u32,
    e: Vec<u32>,
    radius: usize,
    arena: Arena,
    length_convention: String,
}

impl Ball {
    /// Writes the versioned cache form: a JSON header line, then one
    /// `word<TAB>key` line per element in ball order.
    pub fn write_cache<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        let header = BallCacheHeader {
            format_version: BALL_CACHE_FORMAT_VERSION,
            p: self.descriptor.p,
            e: self.descriptor.e.clone(),
            radius: self.radius,
            arena: self.arena,
            length_convention: "syllables".to_string(),
        };
        writeln!(out, "{}", serde_json::to_string(&header)?)?;
        for (word, key) in self.elements.iter().zip(&self.keys) {
            writeln!(out, "{}\t{}", word, key.to_hex())?;
        }
        Ok(())
    }

    /// Reads a cache written by [`Ball::write_cache`], validating the header
    /// against the requested parameters and recomputing every canonical key;
    /// a mismatch rejects the cache rather than trusting it.
    pub fn read_cache<R: BufRead>(
        group: &GgsGroup,
        radius: usize,
        arena: Arena,
        input: R,
    ) -> Result<Ball> {
        let mut lines = input.lines();
        let header_line = lines
            .next()
            .transpose()
            .map_err(|e| Error::ParseWord {
                input: "<ball cache>".into(),
                reason: e.to_string(),
            })?
            .ok_or_else(|| Error::ParseWord {
                input: "<ball cache>".into(),
                reason: "empty cache file".into(),
            })?;
        let header: BallCacheHeader =
            serde_json::from_str(&header_line).map_err(|e| Error::ParseWord {
                input: "<ball cache>".into(),
                reason: format!("bad header: {e}"),
            })?;
        let expected = BallCacheHeader {
            format_version: BALL_CACHE_FORMAT_VERSION,
            p: group.p(),
            e: group.vector().e.clone(),
            radius,
            arena,
            length_convention: "syllables".to_string(),
        };
        if header != expected {
            return Err(Error::ParseWord {
                input: "<ball cache>".into(),
                reason: "header does not match the requested ball".into(),
            });
        }
        let mut elements = Vec::new();
        let mut keys = Vec::new();
        for line in lines {
            let line = line.map_err(|e| Error::ParseWord {
                input: "<ball cache>".into(),
                reason: e.to_string(),
            })?;
            let (word_text, key_hex) = line.split_once('\t').ok_or_else(|| Error::ParseWord {
                input: line.clone(),
                reason: "expected word<TAB>key".into(),
            })?;
            let word = ReducedWord::parse(word_text, group.p())?;
            let key = group.canonical_key(&word)?;
            if key.to_hex() != key_hex {
                return Err(Error::ParseWord {
                    input: line.clone(),
                    reason: "stored key does not match recomputation".into(),
                });
            }
            elements.push(word);
            keys.push(key);
        }
        Ok(Ball {
            descriptor: GroupDescriptor::from(group),
            radius,
            arena,
            elements,
            keys,
        })
    }
}

/// A finite subset of the group: pairwise non-equal elements (certified by
/// canonical keys) with their keys alongside.
#[derive(Debug, Clone)]
pub struct FiniteSubset {
    elements: Vec<ReducedWord>,
    keys: Vec<CanonicalKey>,
}

impl FiniteSubset {
    pub fn new(group: &GgsGroup, elements: Vec<ReducedWord>) -> Result<Self> {
        if elements.is_empty() {
            return Err(Error::EmptySubset);
        }
        let mut keys = Vec::with_capacity(elements.len());
        let mut seen: std::collections::HashMap<CanonicalKey, usize> =
            std::collections::HashMap::new();
        for (i, word) in elements.iter().enumerate() {
            let key = group.canonical_key(word)?;
            if let Some(&first) = seen.get(&key) {
                return Err(Error::DuplicateInSubset { first, second: i });
            }
            seen.insert(key.clone(), i);
            keys.push(key);
        }
        Ok(FiniteSubset { elements, keys })
    }

    /// Subset of ball elements by index; distinctness is inherited.
    pub fn from_ball_indices(ball: &Ball, indices: &[usize]) -> Self {
        FiniteSubset {
            elements: indices.iter().map(|&i| ball.element(i).clone()).collect(),
            keys: indices.iter().map(|&i| ball.keys()[i].clone()).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[ReducedWord] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &ReducedWord {
        &self.elements[i]
    }

    pub fn keys(&self) -> &[CanonicalKey] {
        &self.keys
    }

    pub fn contains_key(&self, key: &CanonicalKey) -> bool {
        self.keys.iter().any(|k| k == key)
    }

    /// Elementwise inverse set (distinctness is preserved by bijectivity).
    pub fn inverses(&self, group: &GgsGroup) -> Result<FiniteSubset> {
        FiniteSubset::new(
            group,
            self.elements.iter().map(|g| group.inv(g)).collect(),
        )
    }

    /// Left translate gA.
    pub fn translate_left(&self, group: &GgsGroup, g: &ReducedWord) -> Result<FiniteSubset> {
        FiniteSubset::new(
            group,
            self.elements.iter().map(|x| group.mul(g, x)).collect(),
        )
    }

    /// Right translate Ah.
    pub fn translate_right(&self, group: &GgsGroup, h: &ReducedWord) -> Result<FiniteSubset> {
        FiniteSubset::new(
            group,
            self.elements.iter().map(|x| group.mul(x, h)).collect(),
        )
    }
}
