//! Reduced words over the generators {a, b}.
//!
//! Every element handled by the engine is a [`ReducedWord`]: an alternating
//! sequence of syllables `a^i` / `b^j` with exponents in `1..p-1`. Reduction
//! relies on the relations `a^p = b^p = 1`, which are runtime-verified per
//! group instance (see `GgsGroup::verify_generator_relations`) rather than
//! trusted.

use std::fmt;

use crate::error::{Error, Result};

/// The two generators of a GGS group.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Gen {
    A,
    B,
}

impl Gen {
    pub fn letter(self) -> char {
        match self {
            Gen::A => 'a',
            Gen::B => 'b',
        }
    }
}

/// One syllable `g^k` with `g` in `{a, b}` and `k` a nonzero residue mod p.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Syllable {
    pub gen: Gen,
    pub exp: u32,
}

impl Syllable {
    pub fn new(gen: Gen, exp: u32) -> Self {
        Syllable { gen, exp }
    }
}

/// An alternating syllable sequence; the canonical element representation.
///
/// Invariants: adjacent syllables use distinct generators, every exponent is
/// in `1..p-1`, and the empty sequence is the identity.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct ReducedWord {
    syllables: Vec<Syllable>,
}

impl ReducedWord {
    /// The identity element.
    pub fn identity() -> Self {
        ReducedWord::default()
    }

    /// The generator `a`.
    pub fn gen_a() -> Self {
        ReducedWord {
            syllables: vec![Syllable::new(Gen::A, 1)],
        }
    }

    /// The generator `b`.
    pub fn gen_b() -> Self {
        ReducedWord {
            syllables: vec![Syllable::new(Gen::B, 1)],
        }
    }

    /// `a^k` reduced mod p.
    pub fn a_pow(k: i64, p: u32) -> Self {
        Self::reduce(&[(Gen::A, k)], p)
    }

    /// `b^k` reduced mod p.
    pub fn b_pow(k: i64, p: u32) -> Self {
        Self::reduce(&[(Gen::B, k)], p)
    }

    pub fn is_empty(&self) -> bool {
        self.syllables.is_empty()
    }

    /// Word length in syllables (`a^k` counts as 1 for k != 0).
    pub fn len(&self) -> usize {
        self.syllables.len()
    }

    pub fn syllables(&self) -> &[Syllable] {
        &self.syllables
    }

    /// Reduces a raw syllable sequence: exponents are taken mod p, zero
    /// syllables are deleted, and adjacent same-generator syllables merge,
    /// cascading until the alternation invariant holds. Total and idempotent.
    pub fn reduce(raw: &[(Gen, i64)], p: u32) -> Self {
        assert!(p >= 2, "degree must be at least 2");
        let mut out: Vec<Syllable> = Vec::with_capacity(raw.len());
        for &(gen, exp) in raw {
            let exp = exp.rem_euclid(p as i64) as u32;
            push_reduced(&mut out, gen, exp, p);
        }
        ReducedWord { syllables: out }
    }

    /// Concatenate-and-reduce. Under the fixed convention `(g*h)(v) = g(h(v))`,
    /// the right factor acts first.
    pub fn mul(&self, rhs: &ReducedWord, p: u32) -> ReducedWord {
        let mut out = self.syllables.clone();
        for s in &rhs.syllables {
            push_reduced(&mut out, s.gen, s.exp, p);
        }
        ReducedWord { syllables: out }
    }

    /// Inverse: syllables reversed, exponents negated mod p.
    pub fn inv(&self, p: u32) -> ReducedWord {
        let syllables = self
            .syllables
            .iter()
            .rev()
            .map(|s| Syllable::new(s.gen, p - s.exp))
            .collect();
        ReducedWord { syllables }
    }

    /// `self^k` for `k >= 0`, by repeated squaring with reduction at each step.
    pub fn pow(&self, k: u64, p: u32) -> ReducedWord {
        let mut result = ReducedWord::identity();
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                result = result.mul(&base, p);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base, p);
            }
        }
        result
    }

    /// Exponent sums `(sum of a-exponents, sum of b-exponents)` mod p.
    pub fn exponent_sums(&self, p: u32) -> (u32, u32) {
        let mut a = 0u64;
        let mut b = 0u64;
        for s in &self.syllables {
            match s.gen {
                Gen::A => a += s.exp as u64,
                Gen::B => b += s.exp as u64,
            }
        }
        ((a % p as u64) as u32, (b % p as u64) as u32)
    }

    /// Parses the compact text form: whitespace-separated `<letter><exponent>`
    /// tokens, e.g. `"a1 b2 a1"`. The empty string is the identity. Exponents
    /// may be any integer; they are reduced mod p.
    pub fn parse(text: &str, p: u32) -> Result<ReducedWord> {
        let mut raw = Vec::new();
        for token in text.split_whitespace() {
            let mut chars = token.chars();
            let gen = match chars.next() {
                Some('a') => Gen::A,
                Some('b') => Gen::B,
                other => {
                    return Err(Error::ParseWord {
                        input: text.to_string(),
                        reason: format!("token {token:?} must start with 'a' or 'b', got {other:?}"),
                    })
                }
            };
            let exp: i64 = chars.as_str().parse().map_err(|e| Error::ParseWord {
                input: text.to_string(),
                reason: format!("bad exponent in token {token:?}: {e}"),
            })?;
            raw.push((gen, exp));
        }
        Ok(ReducedWord::reduce(&raw, p))
    }

    /// Builds from already-reduced parts without checking; used internally
    /// where the invariant holds by construction.
    pub(crate) fn from_syllables_unchecked(syllables: Vec<Syllable>) -> Self {
        ReducedWord { syllables }
    }
}

// `out` is alternating-reduced before and after every call: a zero merge pops
// one syllable and the exposed neighbors were non-adjacent in an alternating
// sequence, so they differ in generator. Cascading cancellation across many
// syllables falls out of calling this once per input syllable.
fn push_reduced(out: &mut Vec<Syllable>, gen: Gen, exp: u32, p: u32) {
    let exp = exp % p;
    if exp == 0 {
        return;
    }
    match out.last() {
        Some(last) if last.gen == gen => {
            let merged = (last.exp + exp) % p;
            out.pop();
            if merged != 0 {
                out.push(Syllable::new(gen, merged));
            }
        }
        _ => out.push(Syllable::new(gen, exp)),
    }
}

impl fmt::Display for ReducedWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for s in &self.syllables {
            if !first {
                write!(f, " ")?;
            }
            write!(f, "{}{}", s.gen.letter(), s.exp)?;
            first = false;
        }
        Ok(())
    }
}

/// Uniform-ish random reduced word with exactly `len` syllables (fewer only if
/// reduction is impossible, which cannot happen for alternating picks).
pub fn random_reduced_word<R: rand::Rng>(rng: &mut R, p: u32, len: usize) -> ReducedWord {
    let mut syllables = Vec::with_capacity(len);
    let mut gen = if rng.gen_bool(0.5) { Gen::A } else { Gen::B };
    for _ in 0..len {
        let exp = rng.gen_range(1..p);
        syllables.push(Syllable::new(gen, exp));
        gen = match gen {
            Gen::A => Gen::B,
            Gen::B => Gen::A,
        };
    }
    ReducedWord::from_syllables_unchecked(syllables)
}
