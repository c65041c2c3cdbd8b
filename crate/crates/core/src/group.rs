//! GGS group contexts: the defining vector, construction-time validation,
//! the exponent-sum map onto the abelianization, and the (1, ..., 1, lambda)
//! family.

use std::collections::HashMap;
use std::sync::RwLock;

use serde::{Deserialize, Serialize};

use crate::engine::{CanonicalKey, RelationReport};
use crate::error::{Error, Result};
use crate::tree::Alphabet;
use crate::words::{Gen, ReducedWord};

/// Defining data of a GGS group: a prime `p` and a non-zero vector
/// `e = (e_1, ..., e_{p-1})` over F_p.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GgsVector {
    pub p: u32,
    pub e: Vec<u32>,
}

impl GgsVector {
    pub fn new(p: u32, e: &[u32]) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if e.len() != (p - 1) as usize {
            return Err(Error::VectorLength {
                expected: (p - 1) as usize,
                got: e.len(),
            });
        }
        let e: Vec<u32> = e.iter().map(|&x| x % p).collect();
        if e.iter().all(|&x| x == 0) {
            return Err(Error::ZeroVector);
        }
        Ok(GgsVector { p, e })
    }

    /// `Some(lambda)` iff the vector has the family shape `(1, ..., 1, lambda)`.
    pub fn family_lambda(&self) -> Option<u32> {
        let (last, init) = self.e.split_last()?;
        init.iter().all(|&x| x == 1).then_some(*last)
    }

    /// Family shape with `lambda != 1, 2` (mod p): the hypothesis under
    /// which the derived subgroup is torsion-free.
    pub fn is_theorem_compliant(&self) -> bool {
        match self.family_lambda() {
            Some(lambda) => lambda != 1 % self.p && lambda != 2 % self.p,
            None => false,
        }
    }
}

/// The vector `(1, ..., 1, lambda)` of length p-1, plus whether it satisfies
/// the hypothesis `lambda != 1, 2` (mod p).
pub fn family_vector(p: u32, lambda: u32) -> Result<(GgsVector, bool)> {
    if !is_prime(p) || p == 2 {
        return Err(Error::NotPrime(p));
    }
    let lambda = lambda % p;
    let mut e = vec![1u32; (p - 1) as usize];
    *e.last_mut().unwrap() = lambda;
    let vector = GgsVector::new(p, &e)?;
    let compliant = lambda != 1 % p && lambda != 2 % p;
    Ok((vector, compliant))
}

/// Image of a word under the exponent-sum homomorphism onto (Z/p)^2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AbelianizationVector {
    pub a_exp: u32,
    pub b_exp: u32,
}

impl AbelianizationVector {
    pub fn is_zero(self) -> bool {
        self.a_exp == 0 && self.b_exp == 0
    }
}

/// Tuning knobs for a group context.
#[derive(Debug, Clone)]
pub struct GroupOptions {
    /// Cap on section-closure states; exceeding it signals an engine bug for
    /// GGS inputs, since closure finiteness is theorem-backed here.
    pub state_budget: usize,
    /// Memoize sections and canonical keys. Results must be identical with
    /// this off; the cache is an optimization only.
    pub memoize: bool,
}

impl Default for GroupOptions {
    fn default() -> Self {
        GroupOptions {
            state_budget: 100_000,
            memoize: true,
        }
    }
}

pub(crate) struct Caches {
    pub(crate) sections: RwLock<HashMap<(ReducedWord, u8), ReducedWord>>,
    pub(crate) keys: RwLock<HashMap<ReducedWord, CanonicalKey>>,
}

/// An immutable GGS group context: validated vector, recursion table for `b`,
/// and engine budgets. All element operations live in `impl GgsGroup` blocks
/// in the engine module.
pub struct GgsGroup {
    vector: GgsVector,
    alphabet: Alphabet,
    /// Section of `b` at letter i: `a^{e_{i+1}}` for i < p-1, `b` at p-1.
    b_sections: Vec<ReducedWord>,
    state_budget: usize,
    relation_report: RelationReport,
    pub(crate) caches: Option<Caches>,
}

impl std::fmt::Debug for GgsGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("GgsGroup")
            .field("vector", &self.vector)
            .finish()
    }
}

impl GgsGroup {
    /// Validated context for the GGS group defined by `p` and `e`. Verifies
    /// the generator relations `a^p = b^p = 1` at construction and fails fast
    /// if they don't hold.
    pub fn new(p: u32, e: &[u32]) -> Result<Self> {
        Self::with_options(p, e, GroupOptions::default())
    }

    pub fn with_options(p: u32, e: &[u32], options: GroupOptions) -> Result<Self> {
        let vector = GgsVector::new(p, e)?;
        Self::build(vector, options)
    }

    /// The group defined by the family vector `(1, ..., 1, lambda)`. With
    /// `theorem_compliant_mode`, vectors with `lambda` in `{1, 2}` are
    /// rejected (they fall outside the torsion-free-derived-subgroup family).
    pub fn family(p: u32, lambda: u32, theorem_compliant_mode: bool) -> Result<Self> {
        Self::family_with_options(p, lambda, theorem_compliant_mode, GroupOptions::default())
    }

    pub fn family_with_options(
        p: u32,
        lambda: u32,
        theorem_compliant_mode: bool,
        options: GroupOptions,
    ) -> Result<Self> {
        let (vector, compliant) = family_vector(p, lambda)?;
        if theorem_compliant_mode && !compliant {
            return Err(Error::NonCompliantLambda { lambda: lambda % p });
        }
        Self::build(vector, options)
    }

    fn build(vector: GgsVector, options: GroupOptions) -> Result<Self> {
        let p = vector.p;
        let alphabet = Alphabet::new(p)?;
        let mut b_sections: Vec<ReducedWord> = vector
            .e
            .iter()
            .map(|&e| ReducedWord::a_pow(e as i64, p))
            .collect();
        b_sections.push(ReducedWord::gen_b());

        let mut group = GgsGroup {
            vector,
            alphabet,
            b_sections,
            state_budget: options.state_budget,
            relation_report: RelationReport::default(),
            caches: options.memoize.then(|| Caches {
                sections: RwLock::new(HashMap::new()),
                keys: RwLock::new(HashMap::new()),
            }),
        };
        group.relation_report = group.verify_generator_relations()?;
        Ok(group)
    }

    pub fn p(&self) -> u32 {
        self.vector.p
    }

    pub fn degree(&self) -> u32 {
        self.vector.p
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn vector(&self) -> &GgsVector {
        &self.vector
    }

    pub fn state_budget(&self) -> usize {
        self.state_budget
    }

    /// Whether the defining vector is a theorem-compliant family vector
    /// `(1, ..., 1, lambda)` with `lambda != 1, 2`.
    pub fn is_theorem_compliant(&self) -> bool {
        self.vector.is_theorem_compliant()
    }

    /// The relation check performed at construction.
    pub fn relation_report(&self) -> &RelationReport {
        &self.relation_report
    }

    /// Recursion table of `b`: entry i is the section of `b` at letter i.
    pub fn b_section_table(&self) -> &[ReducedWord] {
        &self.b_sections
    }

    /// The exponent-sum homomorphism onto the abelianization: componentwise
    /// sums of a- and b-exponents mod p.
    pub fn theta(&self, g: &ReducedWord) -> AbelianizationVector {
        let (a_exp, b_exp) = g.exponent_sums(self.vector.p);
        AbelianizationVector { a_exp, b_exp }
    }

    /// Membership in the kernel K of theta. K contains the derived subgroup
    /// and equals it exactly when the abelianization is (Z/p)^2, which the
    /// quotient module cross-checks at desk scale; searches over this arena
    /// are labeled "theta-kernel" everywhere.
    pub fn in_derived_kernel(&self, g: &ReducedWord) -> bool {
        self.theta(g).is_zero()
    }

    /// Convenience wrappers threading this group's modulus.
    pub fn mul(&self, g: &ReducedWord, h: &ReducedWord) -> ReducedWord {
        g.mul(h, self.vector.p)
    }

    pub fn inv(&self, g: &ReducedWord) -> ReducedWord {
        g.inv(self.vector.p)
    }

    pub fn pow(&self, g: &ReducedWord, k: u64) -> ReducedWord {
        g.pow(k, self.vector.p)
    }

    pub fn parse_word(&self, text: &str) -> Result<ReducedWord> {
        ReducedWord::parse(text, self.vector.p)
    }

    pub fn commutator(&self, g: &ReducedWord, h: &ReducedWord) -> ReducedWord {
        let p = self.vector.p;
        g.inv(p).mul(&h.inv(p), p).mul(g, p).mul(h, p)
    }

    pub(crate) fn cached_section(&self, g: &ReducedWord, x: u8) -> Option<ReducedWord> {
        let caches = self.caches.as_ref()?;
        caches
            .sections
            .read()
            .ok()?
            .get(&(g.clone(), x))
            .cloned()
    }

    pub(crate) fn store_section(&self, g: &ReducedWord, x: u8, section: &ReducedWord) {
        if let Some(caches) = self.caches.as_ref() {
            if let Ok(mut map) = caches.sections.write() {
                map.insert((g.clone(), x), section.clone());
            }
        }
    }

    pub(crate) fn cached_key(&self, g: &ReducedWord) -> Option<CanonicalKey> {
        let caches = self.caches.as_ref()?;
        caches.keys.read().ok()?.get(g).cloned()
    }

    pub(crate) fn store_key(&self, g: &ReducedWord, key: &CanonicalKey) {
        if let Some(caches) = self.caches.as_ref() {
            if let Ok(mut map) = caches.keys.write() {
                map.insert(g.clone(), key.clone());
            }
        }
    }

    /// Checks a^p = 1 and b^p = 1 on unreduced words, composing root
    /// permutations literally instead of reducing exponents mod p. This keeps
    /// the check independent of the mod-p arithmetic it justifies.
    pub fn verify_generator_relations(&self) -> Result<RelationReport> {
        let p = self.vector.p as usize;
        let (a_holds, a_states) = self.raw_is_identity(&vec![Gen::A; p])?;
        if !a_holds {
            return Err(Error::RelationFailure {
                relation: format!("a^{p} = 1"),
            });
        }
        let (b_holds, b_states) = self.raw_is_identity(&vec![Gen::B; p])?;
        if !b_holds {
            return Err(Error::RelationFailure {
                relation: format!("b^{p} = 1"),
            });
        }
        Ok(RelationReport {
            a_holds,
            b_holds,
            a_closure_states: a_states,
            b_closure_states: b_states,
        })
    }
}

pub(crate) fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}
