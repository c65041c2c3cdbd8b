//! Computation engine for Grigorchuk-Gupta-Sidki (GGS) groups acting on
//! regular rooted trees.
//!
//! - [`words`], [`tree`], [`engine`]: exact element arithmetic via wreath
//!   recursion — sections, actions, portraits, closure-based identity and
//!   equality tests, bounded orders.
//! - [`group`]: GGS group contexts, the (1, ..., 1, lambda) family, the
//!   exponent-sum map onto the abelianization and its kernel.
//! - [`quotient`]: congruence quotients as permutation groups on the p^n
//!   level-n vertices, with stabilizer chains, p-power order certification,
//!   transitivity, abelian quotient orders, rigid stabilizers, and
//!   fractality evidence.
//! - [`search`]: exact finite-set decision procedures for unique products
//!   and extremal elements, ball enumeration, and exhaustive or seeded
//!   randomized searches over those balls.

pub mod engine;
pub mod error;
pub mod group;
pub mod quotient;
pub mod search;
pub mod tree;
pub mod words;

pub use engine::{CanonicalKey, FiniteStateReport, OrderResult, RelationReport, SectionClosure};
pub use error::{Error, Result};
pub use group::{family_vector, AbelianizationVector, GgsGroup, GgsVector, GroupOptions};
pub use tree::{Alphabet, Portrait, RootPermutation, Vertex};
pub use words::{Gen, ReducedWord, Syllable};
