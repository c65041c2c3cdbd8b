//! The regular rooted tree: vertices are finite words over a degree-p
//! alphabet of residues, the root is the empty word.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Alphabet of residues `0..degree`; the tree is `degree`-regular.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Alphabet {
    degree: u32,
}

impl Alphabet {
    pub fn new(degree: u32) -> Result<Self> {
        if degree < 2 {
            return Err(Error::DegreeTooSmall(degree));
        }
        Ok(Alphabet { degree })
    }

    pub fn degree(self) -> u32 {
        self.degree
    }

    pub fn letters(self) -> impl Iterator<Item = u8> {
        0..self.degree as u8
    }

    pub fn check_letter(self, letter: u8) -> Result<()> {
        if (letter as u32) < self.degree {
            Ok(())
        } else {
            Err(Error::LetterOutOfRange {
                letter,
                degree: self.degree,
            })
        }
    }
}

/// A vertex of the tree: a finite letter sequence; empty = root.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Vertex {
    letters: Vec<u8>,
}

impl Vertex {
    pub fn root() -> Self {
        Vertex::default()
    }

    pub fn new(letters: Vec<u8>, alphabet: Alphabet) -> Result<Self> {
        for &l in &letters {
            alphabet.check_letter(l)?;
        }
        Ok(Vertex { letters })
    }

    /// Parses a digit string like `"021"`; letters must be single digits,
    /// which covers every degree in scope (p <= 7 in all tested instances).
    pub fn parse(text: &str, alphabet: Alphabet) -> Result<Self> {
        let mut letters = Vec::with_capacity(text.len());
        for c in text.chars() {
            let d = c.to_digit(10).ok_or_else(|| Error::ParseVertex {
                input: text.to_string(),
                reason: format!("{c:?} is not a digit"),
            })? as u8;
            alphabet.check_letter(d)?;
            letters.push(d);
        }
        Ok(Vertex { letters })
    }

    pub fn letters(&self) -> &[u8] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_root(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn child(&self, letter: u8) -> Vertex {
        let mut letters = self.letters.clone();
        letters.push(letter);
        Vertex { letters }
    }

    /// Lexicographic rank among all vertices of the same length (base-p,
    /// first letter most significant). This is the leaf ordering used by
    /// `LeafPermutation`.
    pub fn lex_index(&self, degree: u32) -> u64 {
        self.letters
            .iter()
            .fold(0u64, |acc, &l| acc * degree as u64 + l as u64)
    }

    /// Inverse of [`Vertex::lex_index`] at a fixed length.
    pub fn from_lex_index(mut index: u64, len: usize, degree: u32) -> Vertex {
        let mut letters = vec![0u8; len];
        for slot in letters.iter_mut().rev() {
            *slot = (index % degree as u64) as u8;
            index /= degree as u64;
        }
        Vertex { letters }
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.letters {
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

/// A permutation of the first level: `images[i]` is the image of letter `i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RootPermutation {
    images: Vec<u8>,
}

impl RootPermutation {
    pub fn identity(degree: u32) -> Self {
        RootPermutation {
            images: (0..degree as u8).collect(),
        }
    }

    /// The rooted p-cycle raised to `k`: `i -> i + k mod p`.
    pub fn cycle_power(degree: u32, k: u32) -> Self {
        RootPermutation {
            images: (0..degree)
                .map(|i| ((i + k) % degree) as u8)
                .collect(),
        }
    }

    pub fn from_images(images: Vec<u8>) -> Result<Self> {
        let degree = images.len();
        let mut seen = vec![false; degree];
        for &img in &images {
            if img as usize >= degree || seen[img as usize] {
                return Err(Error::DegreeMismatch {
                    expected: degree,
                    got: img as usize,
                });
            }
            seen[img as usize] = true;
        }
        Ok(RootPermutation { images })
    }

    pub fn degree(&self) -> u32 {
        self.images.len() as u32
    }

    pub fn apply(&self, letter: u8) -> u8 {
        self.images[letter as usize]
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &img)| i as u8 == img)
    }

    /// Function composition `self . other` (other applied first), matching
    /// the convention `(g*h)(v) = g(h(v))`.
    pub fn compose(&self, other: &RootPermutation) -> RootPermutation {
        RootPermutation {
            images: other.images.iter().map(|&i| self.images[i as usize]).collect(),
        }
    }

    pub fn images(&self) -> &[u8] {
        &self.images
    }
}

/// Depth-truncated decoration of the tree by root permutations of sections.
///
/// Level `l < depth` stores one permutation per vertex of length `l`, in
/// lexicographic vertex order. Two automorphisms agree to `depth` iff their
/// portraits are equal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Portrait {
    depth: usize,
    levels: Vec<Vec<RootPermutation>>,
}

impl Portrait {
    pub(crate) fn from_levels(depth: usize, levels: Vec<Vec<RootPermutation>>) -> Self {
        debug_assert_eq!(levels.len(), depth);
        Portrait { depth, levels }
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    /// The permutation decorating `vertex`; `None` when `|vertex| >= depth`.
    pub fn node(&self, vertex: &Vertex, degree: u32) -> Option<&RootPermutation> {
        self.levels
            .get(vertex.len())
            .map(|level| &level[vertex.lex_index(degree) as usize])
    }

    pub fn levels(&self) -> &[Vec<RootPermutation>] {
        &self.levels
    }

    pub fn is_trivial(&self) -> bool {
        self.levels
            .iter()
            .all(|level| level.iter().all(RootPermutation::is_identity))
    }
}
