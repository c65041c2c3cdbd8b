//! Stabilizer chains (base and strong generating set) for finite permutation
//! groups, built deterministically: prescribed base points first, then the
//! smallest moved point, with orbits extended in FIFO discovery order.

use std::collections::VecDeque;

use num_bigint::BigUint;
use num_traits::One;

use crate::error::{Error, Result};

pub type Point = u16;

/// A permutation of `0..degree` as an image table.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm {
    images: Box<[Point]>,
}

impl Perm {
    pub fn identity(degree: usize) -> Self {
        Perm {
            images: (0..degree as Point).collect(),
        }
    }

    pub fn from_images(images: Vec<Point>) -> Result<Self> {
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
        Ok(Perm {
            images: images.into_boxed_slice(),
        })
    }

    /// Permutation from disjoint-cycle notation, e.g. `&[&[0, 1, 2]]`.
    pub fn from_cycles(degree: usize, cycles: &[&[Point]]) -> Result<Self> {
        let mut images: Vec<Point> = (0..degree as Point).collect();
        for cycle in cycles {
            for (i, &x) in cycle.iter().enumerate() {
                let next = cycle[(i + 1) % cycle.len()];
                if x as usize >= degree {
                    return Err(Error::DegreeMismatch {
                        expected: degree,
                        got: x as usize,
                    });
                }
                images[x as usize] = next;
            }
        }
        Perm::from_images(images)
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn apply(&self, x: Point) -> Point {
        self.images[x as usize]
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &img)| i == img as usize)
    }

    /// `self . other`: other applied first, matching `(g*h)(v) = g(h(v))`.
    pub fn compose(&self, other: &Perm) -> Perm {
        debug_assert_eq!(self.degree(), other.degree());
        Perm {
            images: other.images.iter().map(|&x| self.images[x as usize]).collect(),
        }
    }

    pub fn inverse(&self) -> Perm {
        let mut images = vec![0 as Point; self.images.len()];
        for (i, &img) in self.images.iter().enumerate() {
            images[img as usize] = i as Point;
        }
        Perm {
            images: images.into_boxed_slice(),
        }
    }

    pub fn pow(&self, mut k: u64) -> Perm {
        let mut result = Perm::identity(self.degree());
        let mut base = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                result = result.compose(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.compose(&base);
            }
        }
        result
    }

    pub fn commutator(&self, other: &Perm) -> Perm {
        self.inverse()
            .compose(&other.inverse())
            .compose(self)
            .compose(other)
    }

    pub fn smallest_moved_point(&self) -> Option<Point> {
        self.images
            .iter()
            .enumerate()
            .find(|&(i, &img)| i != img as usize)
            .map(|(i, _)| i as Point)
    }

    pub fn images(&self) -> &[Point] {
        &self.images
    }
}

struct Level {
    base: Point,
    /// Orbit of the base under the generators of this and deeper levels,
    /// in FIFO discovery order.
    orbit: Vec<Point>,
    /// Coset representative per point: `transversal[x]` maps base to x.
    transversal: Vec<Option<Perm>>,
    transversal_inv: Vec<Option<Perm>>,
    /// Orbit prefix already turned into Schreier generators, per global
    /// generator index. Orbits and generator lists only grow, so processed
    /// pairs never need revisiting.
    processed: Vec<usize>,
}

impl Level {
    fn new(base: Point, degree: usize) -> Self {
        let mut transversal = vec![None; degree];
        let mut transversal_inv = vec![None; degree];
        transversal[base as usize] = Some(Perm::identity(degree));
        transversal_inv[base as usize] = Some(Perm::identity(degree));
        Level {
            base,
            orbit: vec![base],
            transversal,
            transversal_inv,
            processed: Vec::new(),
        }
    }
}

/// Deterministic incremental Schreier-Sims.
///
/// `strong_gens` is the global strong generating set; `level_of[j]` is the
/// level whose base `strong_gens[j]` moves (it fixes all earlier bases).
/// Level k's group is generated by the strong generators of levels >= k.
pub struct StabilizerChain {
    degree: usize,
    strong_gens: Vec<Perm>,
    level_of: Vec<usize>,
    levels: Vec<Level>,
}

impl StabilizerChain {
    pub fn new(degree: usize, prescribed_base: &[Point]) -> Self {
        let mut chain = StabilizerChain {
            degree,
            strong_gens: Vec::new(),
            level_of: Vec::new(),
            levels: Vec::new(),
        };
        for &pt in prescribed_base {
            chain.levels.push(Level::new(pt, degree));
        }
        chain
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn base(&self) -> Vec<Point> {
        self.levels.iter().map(|l| l.base).collect()
    }

    pub fn order(&self) -> BigUint {
        let mut order = BigUint::one();
        for level in &self.levels {
            order *= BigUint::from(level.orbit.len());
        }
        order
    }

    pub fn orbit_lengths(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.orbit.len()).collect()
    }

    /// Strong generators of the pointwise stabilizer of the first `skip`
    /// base points (the whole group for `skip = 0`).
    pub fn strong_generators_from(&self, skip: usize) -> Vec<Perm> {
        self.strong_gens
            .iter()
            .zip(&self.level_of)
            .filter(|&(_, &lvl)| lvl >= skip)
            .map(|(g, _)| g.clone())
            .collect()
    }

    pub fn contains(&self, perm: &Perm) -> Result<bool> {
        if perm.degree() != self.degree {
            return Err(Error::DegreeMismatch {
                expected: self.degree,
                got: perm.degree(),
            });
        }
        Ok(self.strip(perm.clone(), 0).0.is_identity())
    }

    /// Divides `h` through transversals starting at `start`; returns the
    /// residue and the level where division stopped.
    fn strip(&self, mut h: Perm, start: usize) -> (Perm, usize) {
        for k in start..self.levels.len() {
            let img = h.apply(self.levels[k].base);
            match &self.levels[k].transversal_inv[img as usize] {
                Some(u_inv) => h = u_inv.compose(&h),
                None => return (h, k),
            }
        }
        (h, self.levels.len())
    }

    /// Adds a generator, returning false when it was already a member.
    pub fn extend(&mut self, perm: Perm) -> Result<bool> {
        if perm.degree() != self.degree {
            return Err(Error::DegreeMismatch {
                expected: self.degree,
                got: perm.degree(),
            });
        }
        let (residue, level) = self.strip(perm, 0);
        if residue.is_identity() {
            return Ok(false);
        }
        self.insert_at(level, residue);
        self.run_to_fixpoint();
        Ok(true)
    }

    fn insert_at(&mut self, level: usize, residue: Perm) {
        if level == self.levels.len() {
            let base = residue
                .smallest_moved_point()
                .expect("non-identity residue moves a point");
            self.levels.push(Level::new(base, self.degree));
        }
        debug_assert!(residue.apply(self.levels[level].base) != self.levels[level].base);
        self.strong_gens.push(residue);
        self.level_of.push(level);
        // The new generator enlarges the group at its own level and at every
        // level above it (it fixes their bases), so all those orbits may grow.
        for k in 0..=level {
            self.extend_orbit(k);
        }
    }

    /// Extends level k's orbit under all generators of levels >= k until
    /// closed. FIFO over orbit indices, generators in global index order.
    fn extend_orbit(&mut self, k: usize) {
        let gen_indices: Vec<usize> = (0..self.strong_gens.len())
            .filter(|&j| self.level_of[j] >= k)
            .collect();
        let mut queue: VecDeque<usize> = (0..self.levels[k].orbit.len()).collect();
        while let Some(i) = queue.pop_front() {
            let x = self.levels[k].orbit[i];
            for &j in &gen_indices {
                let img = self.strong_gens[j].apply(x);
                if self.levels[k].transversal[img as usize].is_none() {
                    let rep = self.strong_gens[j]
                        .compose(self.levels[k].transversal[x as usize].as_ref().unwrap());
                    self.levels[k].transversal_inv[img as usize] = Some(rep.inverse());
                    self.levels[k].transversal[img as usize] = Some(rep);
                    self.levels[k].orbit.push(img);
                    queue.push_back(self.levels[k].orbit.len() - 1);
                }
            }
        }
    }

    /// Processes all outstanding Schreier generators everywhere. Marks are
    /// never cleared: a Schreier generator that once stripped to the
    /// identity is a product of strong generators, and lower groups only
    /// grow, so it stays a member.
    fn run_to_fixpoint(&mut self) {
        loop {
            let mut progressed = false;
            let mut k = 0;
            while k < self.levels.len() {
                if self.process_level(k) {
                    progressed = true;
                }
                k += 1;
            }
            if !progressed {
                break;
            }
        }
    }

    /// Sifts every unprocessed (orbit point, generator) pair at level k.
    /// Returns true when any new strong generator was inserted (always at a
    /// level deeper than k, so this level's orbit and generators are stable
    /// during the sweep).
    fn process_level(&mut self, k: usize) -> bool {
        let mut inserted = false;
        let orbit_len = self.levels[k].orbit.len();
        let gen_count = self.strong_gens.len();
        self.levels[k].processed.resize(gen_count, 0);
        for j in 0..gen_count {
            if self.level_of[j] < k {
                continue;
            }
            let start = self.levels[k].processed[j];
            if start >= orbit_len {
                continue;
            }
            for i in start..orbit_len {
                let x = self.levels[k].orbit[i];
                let img = self.strong_gens[j].apply(x);
                let schreier = {
                    let level = &self.levels[k];
                    let u_x = level.transversal[x as usize].as_ref().unwrap();
                    let u_img_inv = level.transversal_inv[img as usize].as_ref().unwrap();
                    u_img_inv.compose(&self.strong_gens[j]).compose(u_x)
                };
                debug_assert_eq!(schreier.apply(self.levels[k].base), self.levels[k].base);
                let (residue, level) = self.strip(schreier, k + 1);
                if !residue.is_identity() {
                    self.insert_at(level, residue);
                    inserted = true;
                }
            }
            self.levels[k].processed[j] = orbit_len;
        }
        inserted
    }

    /// Structural validity check used by tests: strong generators fix the
    /// required base prefix and transversal entries map the base correctly.
    pub fn validate(&self) -> bool {
        for (g, &lvl) in self.strong_gens.iter().zip(&self.level_of) {
            for level in &self.levels[..lvl] {
                if g.apply(level.base) != level.base {
                    return false;
                }
            }
            if g.apply(self.levels[lvl].base) == self.levels[lvl].base {
                return false;
            }
        }
        for level in &self.levels {
            for &x in &level.orbit {
                match &level.transversal[x as usize] {
                    Some(u) if u.apply(level.base) == x => {}
                    _ => return false,
                }
            }
        }
        true
    }
}

/// A finite permutation group with its stabilizer chain.
pub struct PermutationGroup {
    degree: usize,
    generators: Vec<Perm>,
    chain: StabilizerChain,
}

impl PermutationGroup {
    pub fn from_generators(degree: usize, generators: Vec<Perm>) -> Result<Self> {
        Self::with_base_hint(degree, generators, &[])
    }

    /// Build with a prescribed initial base segment (used for pointwise
    /// stabilizers); remaining base points follow the smallest-moved rule.
    pub fn with_base_hint(
        degree: usize,
        generators: Vec<Perm>,
        prescribed_base: &[Point],
    ) -> Result<Self> {
        let mut chain = StabilizerChain::new(degree, prescribed_base);
        for g in &generators {
            if g.degree() != degree {
                return Err(Error::DegreeMismatch {
                    expected: degree,
                    got: g.degree(),
                });
            }
            chain.extend(g.clone())?;
        }
        Ok(PermutationGroup {
            degree,
            generators,
            chain,
        })
    }

    pub fn trivial(degree: usize) -> Self {
        PermutationGroup {
            degree,
            generators: Vec::new(),
            chain: StabilizerChain::new(degree, &[]),
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Perm] {
        &self.generators
    }

    pub fn chain(&self) -> &StabilizerChain {
        &self.chain
    }

    /// Number of elements: the product of transversal sizes along the chain.
    pub fn order(&self) -> BigUint {
        self.chain.order()
    }

    pub fn is_trivial(&self) -> bool {
        self.order() == BigUint::one()
    }

    /// Membership by sifting through the chain.
    pub fn contains(&self, perm: &Perm) -> Result<bool> {
        self.chain.contains(perm)
    }

    /// Adds a generator if not already a member; returns whether it was new.
    pub fn adjoin(&mut self, perm: Perm) -> Result<bool> {
        let added = self.chain.extend(perm.clone())?;
        if added {
            self.generators.push(perm);
        }
        Ok(added)
    }

    /// Mutual containment, checked generator-by-generator.
    pub fn equals(&self, other: &PermutationGroup) -> Result<bool> {
        if self.degree != other.degree {
            return Err(Error::DegreeMismatch {
                expected: self.degree,
                got: other.degree,
            });
        }
        if self.order() != other.order() {
            return Ok(false);
        }
        for g in &self.generators {
            if !other.contains(g)? {
                return Ok(false);
            }
        }
        for g in &other.generators {
            if !self.contains(g)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}
