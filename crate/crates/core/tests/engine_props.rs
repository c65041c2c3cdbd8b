//! Property tests for the element engine: group axioms under the tree
//! action, closure-based identity testing against the brute-force action
//! oracle, and order computations against power iteration.

use branchlab_core::*;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn instances() -> Vec<GgsGroup> {
    vec![
        GgsGroup::new(3, &[1, 0]).unwrap(),
        GgsGroup::new(3, &[1, 2]).unwrap(),
        GgsGroup::new(5, &[1, 1, 1, 3]).unwrap(),
    ]
}

/// Alternating word from a start flag and an exponent list; reduced by
/// construction.
fn word_from_parts(p: u32, start_a: bool, exps: &[u32]) -> ReducedWord {
    let mut raw = Vec::with_capacity(exps.len());
    let mut gen = if start_a { Gen::A } else { Gen::B };
    for &e in exps {
        raw.push((gen, (e % (p - 1) + 1) as i64));
        gen = match gen {
            Gen::A => Gen::B,
            Gen::B => Gen::A,
        };
    }
    ReducedWord::reduce(&raw, p)
}

fn word_strategy(p: u32, max_len: usize) -> impl Strategy<Value = ReducedWord> {
    (any::<bool>(), prop::collection::vec(0u32..1000, 0..=max_len))
        .prop_map(move |(start_a, exps)| word_from_parts(p, start_a, &exps))
}

fn vertex_strategy(p: u32, max_len: usize) -> impl Strategy<Value = Vertex> {
    prop::collection::vec(0u8..p as u8, 0..=max_len).prop_map(move |letters| {
        Vertex::new(letters, Alphabet::new(p).unwrap()).unwrap()
    })
}

proptest! {
    #[test]
    fn action_compatibility_p3(
        g in word_strategy(3, 12),
        h in word_strategy(3, 12),
        v in vertex_strategy(3, 6),
    ) {
        let group = GgsGroup::new(3, &[1, 0]).unwrap();
        let gh = group.mul(&g, &h);
        prop_assert_eq!(group.act(&gh, &v), group.act(&g, &group.act(&h, &v)));
    }

    #[test]
    fn action_compatibility_p5(
        g in word_strategy(5, 12),
        h in word_strategy(5, 12),
        v in vertex_strategy(5, 6),
    ) {
        let group = GgsGroup::new(5, &[1, 1, 1, 3]).unwrap();
        let gh = group.mul(&g, &h);
        prop_assert_eq!(group.act(&gh, &v), group.act(&g, &group.act(&h, &v)));
    }

    #[test]
    fn inverse_and_reduce_idempotence(g in word_strategy(3, 12)) {
        let group = GgsGroup::new(3, &[1, 2]).unwrap();
        prop_assert!(group.mul(&g, &group.inv(&g)).is_empty());
        let raw: Vec<(Gen, i64)> = g
            .syllables()
            .iter()
            .map(|s| (s.gen, s.exp as i64))
            .collect();
        prop_assert_eq!(ReducedWord::reduce(&raw, 3), g);
    }

    #[test]
    fn concatenation_is_associative(
        g in word_strategy(3, 8),
        h in word_strategy(3, 8),
        k in word_strategy(3, 8),
    ) {
        let group = GgsGroup::new(3, &[1, 0]).unwrap();
        prop_assert_eq!(
            group.mul(&group.mul(&g, &h), &k),
            group.mul(&g, &group.mul(&h, &k))
        );
    }

    #[test]
    fn sections_never_grow(g in word_strategy(5, 12)) {
        let group = GgsGroup::new(5, &[1, 1, 1, 3]).unwrap();
        for x in 0..5u8 {
            prop_assert!(group.section(&g, x).unwrap().len() <= g.len());
        }
    }
}

/// The closure-based identity test must agree with "acts trivially on every
/// vertex of length <= 6" on 1000 random words.
#[test]
fn is_identity_matches_action_oracle_on_1000_words() {
    let group = GgsGroup::new(3, &[1, 0]).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for i in 0..1000 {
        let len = rng.gen_range(0..=12);
        let word = words::random_reduced_word(&mut rng, 3, len);
        let closure_answer = group.is_identity(&word).unwrap();
        let action_answer = group
            .level_images(&word, 6)
            .iter()
            .enumerate()
            .all(|(i, &img)| i as u64 == img);
        assert_eq!(closure_answer, action_answer, "word {i}: {word}");
    }
}

/// Equal words have equal portraits at depth 6, and equal depth-6 portraits
/// in this sample imply equality by the exact test.
#[test]
fn equality_agrees_with_portraits_at_depth_6() {
    let gs = GgsGroup::new(3, &[1, 2]).unwrap();
    let relator = gs.parse_word("a1 b1").unwrap().pow(9, 3);
    assert!(gs.is_identity(&relator).unwrap());

    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..50 {
        let len = rng.gen_range(0..=8);
        let g = words::random_reduced_word(&mut rng, 3, len);
        let padded = gs.mul(&g, &relator);
        assert!(gs.equal(&g, &padded).unwrap());
        assert_eq!(gs.portrait(&g, 6), gs.portrait(&padded, 6));
        assert_eq!(
            gs.canonical_key(&g).unwrap(),
            gs.canonical_key(&padded).unwrap()
        );

        let h_len = rng.gen_range(0..=8);
        let h = words::random_reduced_word(&mut rng, 3, h_len);
        let equal = gs.equal(&g, &h).unwrap();
        let portraits_match = gs.portrait(&g, 6) == gs.portrait(&h, 6);
        if equal {
            assert!(portraits_match);
        }
        if !portraits_match {
            assert!(!equal);
        }
        assert_eq!(
            equal,
            gs.canonical_key(&g).unwrap() == gs.canonical_key(&h).unwrap()
        );
    }
}

/// Generator relations across p in {3, 5, 7}.
#[test]
fn generator_relations_hold_across_primes() {
    let vectors: Vec<(u32, Vec<u32>)> = vec![
        (3, vec![1, 0]),
        (3, vec![1, 2]),
        (3, vec![2, 1]),
        (5, vec![1, 1, 1, 3]),
        (5, vec![1, 0, 0, 0]),
        (7, vec![1, 1, 1, 1, 1, 3]),
    ];
    for (p, e) in vectors {
        let group = GgsGroup::new(p, &e).unwrap();
        let report = group.verify_generator_relations().unwrap();
        assert!(report.a_holds && report.b_holds, "p={p}, e={e:?}");
        // Closure-path agreement: the reduced powers collapse to identity.
        let a = ReducedWord::gen_a();
        let b = ReducedWord::gen_b();
        assert!(group.is_identity(&a.pow(p as u64, p)).unwrap());
        assert!(group.is_identity(&b.pow(p as u64, p)).unwrap());
    }
}

/// Power-iteration oracle: scan k = 1.. with repeated multiplication and the
/// closure identity test, independent of the level-order shortcut inside
/// order_up_to.
fn order_by_power_iteration(group: &GgsGroup, g: &ReducedWord, bound: u64) -> OrderResult {
    let mut acc = ReducedWord::identity();
    for k in 1..=bound {
        acc = group.mul(&acc, g);
        if group.is_identity(&acc).unwrap() {
            return OrderResult::Finite(k);
        }
    }
    OrderResult::ExceedsBound
}

#[test]
fn order_up_to_matches_power_iteration() {
    let gs = GgsGroup::new(3, &[1, 2]).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for _ in 0..20 {
        let len = rng.gen_range(0..=6);
        let word = words::random_reduced_word(&mut rng, 3, len);
        let fast = gs.order_up_to(&word, 243).unwrap();
        let oracle = order_by_power_iteration(&gs, &word, 243);
        assert_eq!(fast, oracle, "word {word}");
    }
    // The frozen regression value for ab.
    let ab = gs.parse_word("a1 b1").unwrap();
    assert_eq!(
        order_by_power_iteration(&gs, &ab, 81),
        OrderResult::Finite(9)
    );
}

/// The activity of b is constant in the level: exactly one b-section plus
/// one a-power section per nonzero vector entry, which witnesses
/// boundedness.
#[test]
fn b_activity_is_bounded() {
    for group in instances() {
        let b = ReducedWord::gen_b();
        let expected = 1 + group.vector().e.iter().filter(|&&x| x != 0).count() as u64;
        for n in 1..=6usize {
            if (group.p() as u64).pow(n as u32) > 20_000 {
                break;
            }
            let activity = group.activity_profile(&b, n).unwrap();
            assert_eq!(
                activity, expected,
                "p={}, level {n}: activity {activity}",
                group.p()
            );
            assert!(activity <= group.p() as u64);
        }
    }
}

/// Kernel membership is closed under products and inverses.
#[test]
fn kernel_closed_under_group_operations() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for group in instances() {
        let p = group.p();
        for _ in 0..50 {
            let g = random_kernel_word(&group, &mut rng, 8);
            let h = random_kernel_word(&group, &mut rng, 8);
            assert!(group.in_derived_kernel(&group.mul(&g, &h)));
            assert!(group.in_derived_kernel(&g.inv(p)));
        }
    }
}

/// Theta is surjective: witnessed by powers of the generators.
#[test]
fn theta_is_surjective() {
    for group in instances() {
        let p = group.p();
        for i in 0..p {
            for j in 0..p {
                let w = ReducedWord::a_pow(i as i64, p).mul(&ReducedWord::b_pow(j as i64, p), p);
                let t = group.theta(&w);
                assert_eq!((t.a_exp, t.b_exp), (i, j));
            }
        }
    }
}

/// For every theorem-compliant family instance, 100 random nontrivial
/// kernel elements exceed the order bound p^4: torsion-freeness evidence for
/// the derived subgroup (the theorem itself is not finitely testable).
#[test]
fn kernel_elements_exceed_p4_in_compliant_instances() {
    for group in [
        GgsGroup::family(3, 0, true).unwrap(),
        GgsGroup::family(5, 3, true).unwrap(),
    ] {
        assert!(group.is_theorem_compliant());
        let p = group.p();
        let bound = (p as u64).pow(4);
        let mut rng = ChaCha8Rng::seed_from_u64(4040 + p as u64);
        let mut confirmed = 0;
        while confirmed < 100 {
            let word = random_kernel_word(&group, &mut rng, 10);
            if group.is_identity(&word).unwrap() {
                continue;
            }
            match group.order_up_to(&word, bound).unwrap() {
                OrderResult::ExceedsBound => confirmed += 1,
                OrderResult::Finite(k) => {
                    panic!("p={p}: kernel element {word} has order {k} <= {bound}")
                }
            }
        }
    }
}

fn random_kernel_word<R: Rng>(group: &GgsGroup, rng: &mut R, max_len: usize) -> ReducedWord {
    let p = group.p();
    let len = rng.gen_range(0..=max_len);
    let base = words::random_reduced_word(rng, p, len);
    let t = group.theta(&base);
    let fix = ReducedWord::a_pow(-(t.a_exp as i64), p).mul(
        &ReducedWord::b_pow(-(t.b_exp as i64), p),
        p,
    );
    let word = group.mul(&base, &fix);
    debug_assert!(group.in_derived_kernel(&word));
    word
}
