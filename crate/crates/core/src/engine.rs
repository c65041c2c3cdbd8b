//! The element engine: exact arithmetic and decision procedures for tree
//! automorphisms given by reduced words, via wreath recursion.
//!
//! Composition convention, used everywhere: `(g*h)(v) = g(h(v))` and the
//! section rule `(g*h)|_x = g|_{h(x)} * h|_x`. A word `s_1 s_2 ... s_k`
//! denotes the product `s_1 * s_2 * ... * s_k`, so the rightmost syllable
//! acts on vertices first.

use std::collections::HashMap;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::GgsGroup;
use crate::tree::{Portrait, RootPermutation, Vertex};
use crate::words::{Gen, ReducedWord, Syllable};

/// Result of a bounded order computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrderResult {
    /// Smallest k in `1..=bound` with `g^k = 1`.
    Finite(u64),
    /// `g^k != 1` for every k in `1..=bound`.
    ExceedsBound,
}

/// The finite set of sections of an element, with transitions and root
/// permutations: the element as a finite-state machine.
#[derive(Debug, Clone)]
pub struct SectionClosure {
    /// State 0 is the initial word.
    pub states: Vec<ReducedWord>,
    /// `transitions[s][x]` is the state index of `states[s]|_x`.
    pub transitions: Vec<Vec<usize>>,
    pub root_perms: Vec<RootPermutation>,
}

impl SectionClosure {
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }
}

/// Outcome of a capped finite-state probe.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FiniteStateReport {
    /// True when the closure saturated within the cap.
    pub finite_within_cap: bool,
    /// States found (the closure size when `finite_within_cap`).
    pub states: usize,
}

/// Canonical fingerprint of an element: its section closure minimized by
/// behavioral equivalence and relabeled in BFS order. Two words denote the
/// same tree automorphism iff their keys are byte-identical, so keys are an
/// exact equality surrogate, not a lossy hash.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalKey(Box<[u8]>);

impl CanonicalKey {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn to_hex(&self) -> String {
        let mut s = String::with_capacity(self.0.len() * 2);
        for b in self.0.iter() {
            s.push_str(&format!("{b:02x}"));
        }
        s
    }
}

/// Relation check report stored on every group instance.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct RelationReport {
    pub a_holds: bool,
    pub b_holds: bool,
    /// Raw-word closure sizes visited while certifying each relation.
    pub a_closure_states: usize,
    pub b_closure_states: usize,
}

impl GgsGroup {
    /// Image of letter `x` under one syllable's first-level action.
    fn syllable_apply(&self, s: Syllable, x: u8) -> u8 {
        match s.gen {
            Gen::A => ((x as u32 + s.exp) % self.p()) as u8,
            Gen::B => x,
        }
    }

    /// Section of one syllable at letter `x`: `a^k` sections are trivial,
    /// `b^k` contributes `a^{k*e_{x+1}}` off the last letter and `b^k` on it.
    fn syllable_section(&self, s: Syllable, x: u8) -> Option<Syllable> {
        match s.gen {
            Gen::A => None,
            Gen::B => {
                let p = self.p();
                if x as u32 == p - 1 {
                    Some(Syllable::new(Gen::B, s.exp))
                } else {
                    let e = self.vector().e[x as usize];
                    let exp = (s.exp * e) % p;
                    (exp != 0).then(|| Syllable::new(Gen::A, exp))
                }
            }
        }
    }

    /// First-level permutation of a word: the composition of its syllables'
    /// root permutations in word order. Every syllable contributes a power of
    /// the rooted cycle (b-syllables the identity), so this is the cycle
    /// raised to the a-exponent sum.
    pub fn root_perm(&self, g: &ReducedWord) -> RootPermutation {
        let (a_sum, _) = g.exponent_sums(self.p());
        RootPermutation::cycle_power(self.p(), a_sum)
    }

    /// Section of `g` at a first-level letter, via the wreath rule
    /// `(u*v)|_x = u|_{v(x)} * v|_x` applied syllable by syllable.
    pub fn section(&self, g: &ReducedWord, x: u8) -> Result<ReducedWord> {
        self.alphabet().check_letter(x)?;
        Ok(self.section_unchecked(g, x))
    }

    pub(crate) fn section_unchecked(&self, g: &ReducedWord, x: u8) -> ReducedWord {
        if let Some(hit) = self.cached_section(g, x) {
            return hit;
        }
        let mut parts_rev: Vec<Syllable> = Vec::with_capacity(g.len());
        let mut cur = x;
        for &s in g.syllables().iter().rev() {
            if let Some(part) = self.syllable_section(s, cur) {
                parts_rev.push(part);
            }
            cur = self.syllable_apply(s, cur);
        }
        let raw: Vec<(Gen, i64)> = parts_rev
            .into_iter()
            .rev()
            .map(|s| (s.gen, s.exp as i64))
            .collect();
        let section = ReducedWord::reduce(&raw, self.p());
        self.store_section(g, x, &section);
        section
    }

    /// Section at an arbitrary vertex, iterating first-level sections along
    /// its letters.
    pub fn section_at_vertex(&self, g: &ReducedWord, v: &Vertex) -> Result<ReducedWord> {
        let mut cur = g.clone();
        for &x in v.letters() {
            cur = self.section(&cur, x)?;
        }
        Ok(cur)
    }

    /// Image of a vertex: the first letter is mapped by the root permutation
    /// and the tail by the section at the original first letter. Length
    /// preserving; the root maps to the root.
    pub fn act(&self, g: &ReducedWord, v: &Vertex) -> Vertex {
        let mut out = Vec::with_capacity(v.len());
        let mut cur = g.clone();
        for &x in v.letters() {
            out.push(self.root_perm(&cur).apply(x));
            cur = self.section_unchecked(&cur, x);
        }
        Vertex::new(out, self.alphabet()).expect("act preserves letter range")
    }

    /// Root permutations of all sections to the given depth.
    pub fn portrait(&self, g: &ReducedWord, depth: usize) -> Portrait {
        let p = self.p();
        let mut levels = Vec::with_capacity(depth);
        let mut frontier = vec![g.clone()];
        for _ in 0..depth {
            levels.push(frontier.iter().map(|w| self.root_perm(w)).collect());
            let mut next = Vec::with_capacity(frontier.len() * p as usize);
            for w in &frontier {
                for x in 0..p as u8 {
                    next.push(self.section_unchecked(w, x));
                }
            }
            frontier = next;
        }
        Portrait::from_levels(depth, levels)
    }

    /// Breadth-first exploration of the section closure, deduplicating states
    /// on reduced-word form. With `stop_on_nontrivial`, returns early as soon
    /// as a state with a nontrivial root permutation is found.
    ///
    /// Termination: sections never have more syllables than their parent
    /// word and exponents live mod p, so the reachable state space is finite;
    /// the budget guards against engine bugs only.
    fn explore(&self, g: &ReducedWord, stop_on_nontrivial: bool) -> Result<Exploration> {
        let p = self.p() as usize;
        let budget = self.state_budget();
        let mut index: HashMap<ReducedWord, usize> = HashMap::new();
        let mut states: Vec<ReducedWord> = Vec::new();
        let mut transitions: Vec<Vec<usize>> = Vec::new();
        let mut root_perms: Vec<RootPermutation> = Vec::new();
        let mut all_trivial = true;

        index.insert(g.clone(), 0);
        states.push(g.clone());

        let mut next_unexpanded = 0;
        while next_unexpanded < states.len() {
            let state = states[next_unexpanded].clone();
            let rp = self.root_perm(&state);
            if !rp.is_identity() {
                all_trivial = false;
                if stop_on_nontrivial {
                    return Ok(Exploration {
                        closure: None,
                        all_trivial,
                        states_seen: states.len(),
                    });
                }
            }
            root_perms.push(rp);
            let mut row = Vec::with_capacity(p);
            for x in 0..p as u8 {
                let section = self.section_unchecked(&state, x);
                let next_idx = match index.get(&section) {
                    Some(&i) => i,
                    None => {
                        let i = states.len();
                        if i >= budget {
                            return Err(Error::StateBudgetExceeded { budget });
                        }
                        index.insert(section.clone(), i);
                        states.push(section);
                        i
                    }
                };
                row.push(next_idx);
            }
            transitions.push(row);
            next_unexpanded += 1;
        }

        let states_seen = states.len();
        Ok(Exploration {
            closure: Some(SectionClosure {
                states,
                transitions,
                root_perms,
            }),
            all_trivial,
            states_seen,
        })
    }

    /// The full section closure of `g` (every distinct section word).
    pub fn section_closure(&self, g: &ReducedWord) -> Result<SectionClosure> {
        Ok(self
            .explore(g, false)?
            .closure
            .expect("full exploration returns a closure"))
    }

    /// Exact word-problem decision: `g = 1` iff every state in its section
    /// closure has a trivial root permutation.
    pub fn is_identity(&self, g: &ReducedWord) -> Result<bool> {
        Ok(self.explore(g, true)?.all_trivial)
    }

    /// True iff the two words induce the same tree automorphism.
    pub fn equal(&self, g: &ReducedWord, h: &ReducedWord) -> Result<bool> {
        if g == h {
            return Ok(true);
        }
        self.is_identity(&self.mul(g, &self.inv(h)))
    }

    /// Smallest `1 <= k <= bound` with `g^k = 1`, else `ExceedsBound`.
    ///
    /// Any such k is a common multiple of the orders of g's actions on the
    /// finite levels, so the scan first grows that lower bound from leaf
    /// cycle structure (cheap), then checks only its multiples with the exact
    /// closure test.
    pub fn order_up_to(&self, g: &ReducedWord, bound: u64) -> Result<OrderResult> {
        if bound == 0 {
            return Ok(OrderResult::ExceedsBound);
        }
        if self.is_identity(g)? {
            return Ok(OrderResult::Finite(1));
        }

        const LEAF_BUDGET: u64 = 20_000;
        let p = self.p() as u64;
        let mut m: u64 = 1;
        let mut prev = 0u64;
        let mut ruled_out = 0u64;
        let mut level_size = p;
        let mut level = 1usize;
        while level_size <= LEAF_BUDGET {
            let images = self.level_images(g, level);
            let level_order = permutation_order(&images);
            if level_order > bound as u128 {
                return Ok(OrderResult::ExceedsBound);
            }
            m = level_order as u64;
            if m == prev && level >= 2 && m != ruled_out {
                // Level order stabilized: m is the exact order iff g^m = 1.
                if self.is_identity(&self.pow(g, m))? {
                    return Ok(OrderResult::Finite(m));
                }
                ruled_out = m;
            }
            prev = m;
            level += 1;
            level_size *= p;
        }

        let mut k = m;
        while k <= bound {
            if k != ruled_out && self.is_identity(&self.pow(g, k))? {
                return Ok(OrderResult::Finite(k));
            }
            k += m;
        }
        Ok(OrderResult::ExceedsBound)
    }

    /// Number of level-n vertices with a nontrivial section.
    pub fn activity_profile(&self, g: &ReducedWord, n: usize) -> Result<u64> {
        let mut memo: HashMap<(ReducedWord, usize), u64> = HashMap::new();
        self.activity_rec(g, n, &mut memo)
    }

    fn activity_rec(
        &self,
        g: &ReducedWord,
        n: usize,
        memo: &mut HashMap<(ReducedWord, usize), u64>,
    ) -> Result<u64> {
        if n == 0 {
            return Ok(if self.is_identity(g)? { 0 } else { 1 });
        }
        if let Some(&hit) = memo.get(&(g.clone(), n)) {
            return Ok(hit);
        }
        let mut total = 0u64;
        for x in 0..self.p() as u8 {
            total += self.activity_rec(&self.section_unchecked(g, x), n - 1, memo)?;
        }
        memo.insert((g.clone(), n), total);
        Ok(total)
    }

    /// Capped probe of the closure size; exceeding the cap is reported,
    /// not fatal.
    pub fn is_finite_state(&self, g: &ReducedWord, state_cap: usize) -> FiniteStateReport {
        let p = self.p() as usize;
        let mut index: HashMap<ReducedWord, ()> = HashMap::new();
        let mut queue: Vec<ReducedWord> = vec![g.clone()];
        index.insert(g.clone(), ());
        let mut next = 0;
        while next < queue.len() {
            let state = queue[next].clone();
            next += 1;
            for x in 0..p as u8 {
                let section = self.section_unchecked(&state, x);
                if !index.contains_key(&section) {
                    if index.len() >= state_cap {
                        return FiniteStateReport {
                            finite_within_cap: false,
                            states: index.len(),
                        };
                    }
                    index.insert(section.clone(), ());
                    queue.push(section);
                }
            }
        }
        FiniteStateReport {
            finite_within_cap: true,
            states: index.len(),
        }
    }

    /// Canonical key: minimize the section closure under behavioral
    /// equivalence (same root permutation, equivalent sections), relabel by
    /// BFS from the initial state with letters in increasing order, and
    /// serialize the table. The minimal machine of a tree automorphism is
    /// unique, so keys match iff the elements are equal.
    pub fn canonical_key(&self, g: &ReducedWord) -> Result<CanonicalKey> {
        if let Some(hit) = self.cached_key(g) {
            return Ok(hit);
        }
        let closure = self.section_closure(g)?;
        let key = canonicalize(&closure, self.p());
        self.store_key(g, &key);
        Ok(key)
    }

    /// Images of all level-n vertices under `g`, indexed and valued by
    /// lexicographic vertex rank.
    pub fn level_images(&self, g: &ReducedWord, n: usize) -> Vec<u64> {
        let size = (self.p() as u64).pow(n as u32) as usize;
        let mut out = vec![0u64; size];
        self.level_images_rec(g, n, &mut out, 0, 0);
        out
    }

    fn level_images_rec(
        &self,
        g: &ReducedWord,
        n: usize,
        out: &mut [u64],
        src_offset: usize,
        dst_offset: u64,
    ) {
        if n == 0 {
            out[src_offset] = dst_offset;
            return;
        }
        let p = self.p();
        let stride = (p as u64).pow(n as u32 - 1);
        let rp = self.root_perm(g);
        for x in 0..p as u8 {
            let section = self.section_unchecked(g, x);
            self.level_images_rec(
                &section,
                n - 1,
                out,
                src_offset + x as usize * stride as usize,
                dst_offset + rp.apply(x) as u64 * stride,
            );
        }
    }

    /// Identity check on an unreduced letter sequence, used to verify the
    /// generator relations without assuming them: root permutations are
    /// composed letter by letter and sections are emitted as literal letter
    /// blocks, with no exponent arithmetic.
    pub(crate) fn raw_is_identity(&self, word: &[Gen]) -> Result<(bool, usize)> {
        let p = self.p();
        let budget = self.state_budget();
        let mut seen: HashMap<Vec<Gen>, ()> = HashMap::new();
        let mut queue: Vec<Vec<Gen>> = vec![word.to_vec()];
        seen.insert(word.to_vec(), ());
        let mut next = 0;
        while next < queue.len() {
            let state = queue[next].clone();
            next += 1;
            let rp = state
                .iter()
                .fold(RootPermutation::identity(p), |acc, &gen| match gen {
                    // acc holds the prefix's permutation; the next letter is
                    // applied to vertices first, so it composes on the right.
                    Gen::A => acc.compose(&RootPermutation::cycle_power(p, 1)),
                    Gen::B => acc,
                });
            if !rp.is_identity() {
                return Ok((false, seen.len()));
            }
            for x in 0..p as u8 {
                let section = self.raw_section(&state, x);
                if !seen.contains_key(&section) {
                    if seen.len() >= budget {
                        return Err(Error::StateBudgetExceeded { budget });
                    }
                    seen.insert(section.clone(), ());
                    queue.push(section);
                }
            }
        }
        Ok((true, seen.len()))
    }

    fn raw_section(&self, word: &[Gen], x: u8) -> Vec<Gen> {
        let p = self.p();
        let mut parts_rev: Vec<Vec<Gen>> = Vec::new();
        let mut cur = x;
        for &gen in word.iter().rev() {
            match gen {
                Gen::A => {
                    cur = ((cur as u32 + 1) % p) as u8;
                }
                Gen::B => {
                    if cur as u32 == p - 1 {
                        parts_rev.push(vec![Gen::B]);
                    } else {
                        let copies = self.vector().e[cur as usize] as usize;
                        parts_rev.push(vec![Gen::A; copies]);
                    }
                }
            }
        }
        parts_rev.into_iter().rev().flatten().collect()
    }
}

struct Exploration {
    closure: Option<SectionClosure>,
    all_trivial: bool,
    #[allow(dead_code)]
    states_seen: usize,
}

/// Order of a permutation given as an image table: lcm of cycle lengths.
pub(crate) fn permutation_order(images: &[u64]) -> u128 {
    let mut seen = vec![false; images.len()];
    let mut order: u128 = 1;
    for start in 0..images.len() {
        if seen[start] {
            continue;
        }
        let mut len: u128 = 0;
        let mut cur = start;
        while !seen[cur] {
            seen[cur] = true;
            cur = images[cur] as usize;
            len += 1;
        }
        order = order.lcm(&len);
    }
    order
}

/// Moore-style partition refinement on the closure, then BFS relabeling.
fn canonicalize(closure: &SectionClosure, p: u32) -> CanonicalKey {
    let n = closure.len();
    // Initial partition: by root permutation.
    let mut class: Vec<usize> = vec![0; n];
    {
        let mut ids: HashMap<&RootPermutation, usize> = HashMap::new();
        for (s, rp) in closure.root_perms.iter().enumerate() {
            let next_id = ids.len();
            class[s] = *ids.entry(rp).or_insert(next_id);
        }
    }
    loop {
        let mut ids: HashMap<(usize, Vec<usize>), usize> = HashMap::new();
        let mut next_class = vec![0usize; n];
        for s in 0..n {
            let sig = (
                class[s],
                closure.transitions[s].iter().map(|&t| class[t]).collect(),
            );
            let fresh = ids.len();
            next_class[s] = *ids.entry(sig).or_insert(fresh);
        }
        let stable = next_class == class;
        class = next_class;
        if stable {
            break;
        }
    }

    // BFS over classes from the initial state's class, letters ascending.
    let num_classes = class.iter().max().map_or(0, |&c| c + 1);
    let mut rep_state: Vec<usize> = vec![usize::MAX; num_classes];
    for s in (0..n).rev() {
        rep_state[class[s]] = s;
    }
    let mut bfs_label: Vec<usize> = vec![usize::MAX; num_classes];
    let mut order: Vec<usize> = Vec::with_capacity(num_classes);
    bfs_label[class[0]] = 0;
    order.push(class[0]);
    let mut next = 0;
    while next < order.len() {
        let c = order[next];
        next += 1;
        let s = rep_state[c];
        for x in 0..p as usize {
            let target = class[closure.transitions[s][x]];
            if bfs_label[target] == usize::MAX {
                bfs_label[target] = order.len();
                order.push(target);
            }
        }
    }

    // Reachable classes only (all of them, since the closure is reachable
    // from state 0 and merging preserves reachability).
    let mut bytes: Vec<u8> = Vec::with_capacity(2 + order.len() * (p as usize * 5));
    bytes.push(p as u8);
    bytes.extend_from_slice(&(order.len() as u32).to_le_bytes());
    for &c in &order {
        let s = rep_state[c];
        bytes.extend_from_slice(closure.root_perms[s].images());
        for x in 0..p as usize {
            let target = bfs_label[class[closure.transitions[s][x]]] as u32;
            bytes.extend_from_slice(&target.to_le_bytes());
        }
    }
    CanonicalKey(bytes.into_boxed_slice())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fg3() -> GgsGroup {
        GgsGroup::new(3, &[1, 0]).unwrap()
    }

    fn gs3() -> GgsGroup {
        GgsGroup::new(3, &[1, 2]).unwrap()
    }

    fn w(g: &GgsGroup, text: &str) -> ReducedWord {
        g.parse_word(text).unwrap()
    }

    /// Independent oracle: acts trivially on every vertex of length <= depth.
    fn acts_trivially_to_depth(g: &GgsGroup, word: &ReducedWord, depth: usize) -> bool {
        let images = g.level_images(word, depth);
        // Prefix-closed: fixing every depth-`depth` vertex fixes all
        // shallower ones.
        images.iter().enumerate().all(|(i, &img)| i as u64 == img)
    }

    #[test]
    fn root_perm_examples() {
        let g = fg3();
        let a = ReducedWord::gen_a();
        assert_eq!(g.root_perm(&a).images(), &[1, 2, 0]);
        assert!(g.root_perm(&ReducedWord::gen_b()).is_identity());
        // a b a^2: a-exponents sum to 0 mod 3
        assert!(g.root_perm(&w(&g, "a1 b1 a2")).is_identity());
    }

    #[test]
    fn section_examples() {
        let g = fg3();
        let b = ReducedWord::gen_b();
        assert_eq!(g.section(&b, 0).unwrap(), ReducedWord::gen_a());
        assert_eq!(g.section(&b, 1).unwrap(), ReducedWord::identity());
        assert_eq!(g.section(&b, 2).unwrap(), b);
        for x in 0..3 {
            assert!(g.section(&ReducedWord::gen_a(), x).unwrap().is_empty());
        }
        assert!(matches!(
            g.section(&b, 3),
            Err(Error::LetterOutOfRange { letter: 3, degree: 3 })
        ));
    }

    #[test]
    fn act_examples() {
        let g = fg3();
        let alphabet = g.alphabet();
        let v = Vertex::parse("021", alphabet).unwrap();
        assert_eq!(g.act(&ReducedWord::gen_a(), &v).to_string(), "121");
        // b|_0 = a, so b("00") = "0" + a("0") = "01"
        let v00 = Vertex::parse("00", alphabet).unwrap();
        assert_eq!(g.act(&ReducedWord::gen_b(), &v00).to_string(), "01");
        assert_eq!(g.act(&ReducedWord::identity(), &v), v);
        assert_eq!(g.act(&ReducedWord::gen_a(), &Vertex::root()), Vertex::root());
    }

    #[test]
    fn is_identity_examples() {
        let g = fg3();
        assert!(g.is_identity(&w(&g, "a1 a1 a1")).unwrap());
        assert!(g.is_identity(&w(&g, "b1 b1 b1")).unwrap());
        // Cross-check b^3 = 1 with the action oracle to depth 6.
        assert!(acts_trivially_to_depth(&g, &w(&g, "b1 b1 b1"), 6));

        let a = ReducedWord::gen_a();
        let b = ReducedWord::gen_b();
        let comm = g.commutator(&a, &b);
        assert!(!g.is_identity(&comm).unwrap());
        // Brute-force: some depth-2 vertex moves.
        assert!(!acts_trivially_to_depth(&g, &comm, 2));
    }

    #[test]
    fn equal_examples() {
        let g = fg3();
        let a = ReducedWord::gen_a();
        let a4 = a.pow(4, 3);
        assert!(g.equal(&a, &a4).unwrap());
        assert!(!g.equal(&ReducedWord::gen_b(), &a).unwrap());
        let ab = w(&g, "a1 b1");
        let ba = w(&g, "b1 a1");
        assert!(!g.equal(&ab, &ba).unwrap());
        // Oracle: depth-2 actions differ.
        assert_ne!(g.level_images(&ab, 2), g.level_images(&ba, 2));
    }

    #[test]
    fn portrait_examples() {
        let g = fg3();
        let id_portrait = g.portrait(&ReducedWord::identity(), 3);
        assert!(id_portrait.is_trivial());

        let pa = g.portrait(&ReducedWord::gen_a(), 2);
        assert_eq!(pa.levels()[0][0].images(), &[1, 2, 0]);
        assert!(pa.levels()[1].iter().all(RootPermutation::is_identity));

        let pb = g.portrait(&ReducedWord::gen_b(), 2);
        assert!(pb.levels()[0][0].is_identity());
        assert_eq!(pb.levels()[1][0].images(), &[1, 2, 0]);
        assert!(pb.levels()[1][1].is_identity());
        assert!(pb.levels()[1][2].is_identity());
    }

    #[test]
    fn order_examples() {
        let g = fg3();
        assert_eq!(
            g.order_up_to(&ReducedWord::gen_a(), 10).unwrap(),
            OrderResult::Finite(3)
        );
        assert_eq!(
            g.order_up_to(&ReducedWord::identity(), 1).unwrap(),
            OrderResult::Finite(1)
        );
    }

    #[test]
    fn gupta_sidki_ab_order_regression() {
        // The group is torsion; the value is frozen from the power-iteration
        // oracle in tests/engine_props.rs.
        let g = gs3();
        let ab = w(&g, "a1 b1");
        assert_eq!(g.order_up_to(&ab, 81).unwrap(), OrderResult::Finite(9));
    }

    #[test]
    fn activity_examples() {
        let g = fg3();
        assert_eq!(g.activity_profile(&ReducedWord::identity(), 5).unwrap(), 0);
        let b = ReducedWord::gen_b();
        for n in 1..=6 {
            let activity = g.activity_profile(&b, n).unwrap();
            assert!(activity <= 2, "bounded by p-1 at level {n}, got {activity}");
        }
    }

    #[test]
    fn finite_state_examples() {
        let g = fg3();
        let report = g.is_finite_state(&ReducedWord::gen_b(), 100);
        assert!(report.finite_within_cap);
        // Closure of b is {b, a, 1}.
        assert_eq!(report.states, 3);
        let closure = g.section_closure(&ReducedWord::gen_b()).unwrap();
        assert_eq!(closure.len(), 3);
        let tiny = g.is_finite_state(&ReducedWord::gen_b(), 2);
        assert!(!tiny.finite_within_cap);
    }

    #[test]
    fn canonical_keys_match_equality() {
        let g = fg3();
        let a = ReducedWord::gen_a();
        assert_ne!(
            g.canonical_key(&a).unwrap(),
            g.canonical_key(&ReducedWord::gen_b()).unwrap()
        );
        assert_eq!(
            g.canonical_key(&a).unwrap(),
            g.canonical_key(&a.pow(4, 3)).unwrap()
        );

        // Equal elements with genuinely different reduced words: pad with a
        // relator of the torsion Gupta-Sidki group, (ab)^9 = 1.
        let gs = gs3();
        let relator = w(&gs, "a1 b1").pow(9, 3);
        assert!(gs.is_identity(&relator).unwrap());
        assert!(!relator.is_empty(), "the relator must not cancel freely");
        let u = w(&gs, "b2 a1 b1");
        let padded = gs.mul(&u, &relator);
        assert_ne!(padded, u);
        assert!(gs.equal(&padded, &u).unwrap());
        assert_eq!(
            gs.canonical_key(&padded).unwrap(),
            gs.canonical_key(&u).unwrap()
        );
    }

    #[test]
    fn section_never_grows() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for group in [fg3(), gs3(), GgsGroup::new(5, &[1, 1, 1, 3]).unwrap()] {
            for _ in 0..200 {
                let len = rand::Rng::gen_range(&mut rng, 0..=12);
                let word = crate::words::random_reduced_word(&mut rng, group.p(), len);
                for x in 0..group.p() as u8 {
                    let section = group.section(&word, x).unwrap();
                    assert!(section.len() <= word.len());
                }
            }
        }
    }

    #[test]
    fn memoization_is_transparent() {
        use crate::group::GroupOptions;
        let cached = fg3();
        let uncached = GgsGroup::with_options(
            3,
            &[1, 0],
            GroupOptions {
                memoize: false,
                ..GroupOptions::default()
            },
        )
        .unwrap();
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(23);
        for _ in 0..100 {
            let len = rand::Rng::gen_range(&mut rng, 0..=10);
            let word = crate::words::random_reduced_word(&mut rng, 3, len);
            for x in 0..3u8 {
                assert_eq!(
                    cached.section(&word, x).unwrap(),
                    uncached.section(&word, x).unwrap()
                );
            }
            assert_eq!(
                cached.canonical_key(&word).unwrap(),
                uncached.canonical_key(&word).unwrap()
            );
            // Hit the cache a second time.
            for x in 0..3u8 {
                assert_eq!(
                    cached.section(&word, x).unwrap(),
                    uncached.section(&word, x).unwrap()
                );
            }
        }
    }

    #[test]
    fn permutation_order_lcm() {
        assert_eq!(permutation_order(&[1, 0, 2]), 2);
        assert_eq!(permutation_order(&[1, 2, 0, 4, 3]), 6);
        assert_eq!(permutation_order(&[0, 1, 2]), 1);
    }

    #[test]
    fn state_budget_exceeded_is_signaled() {
        use crate::group::GroupOptions;
        // Budget 5 admits the relation closures at construction (4 states
        // for b^3 here) but not larger words.
        let tiny = GgsGroup::with_options(
            3,
            &[1, 2],
            GroupOptions {
                state_budget: 5,
                ..GroupOptions::default()
            },
        )
        .unwrap();
        let comm = tiny.commutator(&ReducedWord::gen_a(), &ReducedWord::gen_b());
        let big = tiny.mul(&comm, &w(&tiny, "b1 a1 b2 a2 b1"));
        assert!(matches!(
            tiny.section_closure(&big),
            Err(Error::StateBudgetExceeded { budget: 5 })
        ));
    }
}
