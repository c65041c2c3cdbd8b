//! Acceptance suite. Each criterion is one test that prints a single
//! `ACCEPTANCE <n>: PASS/FAIL` line (visible with `--nocapture`) and asserts
//! its thresholds. Run with:
//!
//! ```text
//! cargo test -p branchlab --test acceptance -- --nocapture
//! ```

use std::time::Instant;

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use branchlab::config::{Budgets, CommandConfig, ElementQuery, GroupSpec, RunConfig};
use branchlab::{execute, IoOptions};
use branchlab_core::quotient::{
    self, abelian_quotient_order, certify_p_power, is_transitive_on_level, quotient_group,
    PPowerCertificate,
};
use branchlab_core::search::{
    self, ball, diffuse_search, up_search, Arena, SearchKind, SearchMode, SearchParams,
};
use branchlab_core::*;

struct Criterion {
    number: u32,
    name: &'static str,
    started: Instant,
}

impl Criterion {
    fn new(number: u32, name: &'static str) -> Self {
        Criterion {
            number,
            name,
            started: Instant::now(),
        }
    }

    fn pass(self, detail: &str) {
        println!(
            "ACCEPTANCE {}: PASS — {} ({}; {:.2?})",
            self.number,
            self.name,
            detail,
            self.started.elapsed()
        );
    }
}

fn instances() -> Vec<GgsGroup> {
    vec![
        GgsGroup::new(3, &[1, 0]).unwrap(),
        GgsGroup::new(3, &[1, 2]).unwrap(),
        GgsGroup::new(5, &[1, 1, 1, 3]).unwrap(),
    ]
}

fn compose_images(outer: &[u64], inner: &[u64]) -> Vec<u64> {
    inner.iter().map(|&x| outer[x as usize]).collect()
}

/// Criterion 1: 1000 random word pairs per instance satisfy
/// action-compatibility (depth 6), inverse, and associativity.
#[test]
fn criterion_01_group_axioms() {
    let c = Criterion::new(1, "group axioms on 1000 random pairs per instance");
    let mut pairs_checked = 0u64;
    for group in instances() {
        let p = group.p();
        let depth = 6usize;
        let mut rng = ChaCha8Rng::seed_from_u64(101);
        for _ in 0..1000 {
            let len_g = rng.gen_range(0..=12);
            let g = words::random_reduced_word(&mut rng, p, len_g);
            let len_h = rng.gen_range(0..=12);
            let h = words::random_reduced_word(&mut rng, p, len_h);
            let gh = group.mul(&g, &h);

            // Action compatibility on every vertex of length 6 (prefixes
            // are covered since automorphisms preserve prefixes).
            let img_g = group.level_images(&g, depth);
            let img_h = group.level_images(&h, depth);
            let img_gh = group.level_images(&gh, depth);
            assert_eq!(img_gh, compose_images(&img_g, &img_h), "g={g}, h={h}");

            // Spot-check the vertex-level action path as well.
            for _ in 0..5 {
                let vlen = rng.gen_range(0..=depth);
                let letters: Vec<u8> = (0..vlen).map(|_| rng.gen_range(0..p as u8)).collect();
                let v = Vertex::new(letters, group.alphabet()).unwrap();
                assert_eq!(
                    group.act(&gh, &v),
                    group.act(&g, &group.act(&h, &v)),
                    "g={g}, h={h}, v={v}"
                );
            }

            // Inverse: g g^-1 reduces to the identity and the closure agrees.
            let cancelled = group.mul(&g, &group.inv(&g));
            assert!(cancelled.is_empty());
            assert!(group.is_identity(&cancelled).unwrap());

            // Associativity of the reduced product.
            let k = words::random_reduced_word(&mut rng, p, 6);
            assert_eq!(
                group.mul(&group.mul(&g, &h), &k),
                group.mul(&g, &group.mul(&h, &k))
            );
            pairs_checked += 1;
        }
    }
    c.pass(&format!("{pairs_checked} pairs across 3 instances"));
}

/// Criterion 2: a^p = 1 and b^p = 1 certified by the closure algorithm for
/// every instance, closure state counts recorded.
#[test]
fn criterion_02_generator_relations() {
    let c = Criterion::new(2, "generator relations a^p = b^p = 1");
    let mut states = Vec::new();
    for group in instances() {
        let report = group.verify_generator_relations().unwrap();
        assert!(report.a_holds && report.b_holds);
        states.push(format!(
            "p={} e={:?}: a/{} b/{} states",
            group.p(),
            group.vector().e,
            report.a_closure_states,
            report.b_closure_states
        ));
    }
    c.pass(&states.join("; "));
}

/// Criterion 3: every |G_n| certified a power of p for p=3 (n <= 5) and
/// p=5 (n <= 4); exact orders match the naive closure wherever degree <= 27.
#[test]
fn criterion_03_quotient_p_power_certification() {
    let c = Criterion::new(3, "congruence quotient orders are p-powers");
    let mut certified = Vec::new();
    for group in instances() {
        let p = group.p();
        let max_level = if p == 3 { 5 } else { 4 };
        for n in 1..=max_level {
            let q = quotient_group(&group, n).unwrap();
            let order = q.order();
            let exponent = match certify_p_power(&order, p) {
                PPowerCertificate::Power { exponent } => exponent,
                PPowerCertificate::Failure { factor } => panic!(
                    "p={p}, e={:?}, n={n}: |G_n| = {order} has factor {factor}",
                    group.vector().e
                ),
            };
            if (p as u64).pow(n as u32) <= quotient::NAIVE_DEGREE_LIMIT as u64 {
                let naive =
                    quotient::naive::naive_order(q.degree(), q.generators(), 5_000_000).unwrap();
                assert_eq!(order, BigUint::from(naive), "oracle mismatch at n={n}");
            }
            certified.push(format!("p={p}:{n}->p^{exponent}"));
        }
    }
    c.pass(&certified.join(" "));
}

/// Criterion 4: |G_1| = p exactly and transitivity on all tested levels.
#[test]
fn criterion_04_level_one_order_and_transitivity() {
    let c = Criterion::new(4, "|G_1| = p and spherical transitivity");
    for group in instances() {
        let p = group.p();
        assert_eq!(
            quotient_group(&group, 1).unwrap().order(),
            BigUint::from(p)
        );
        let max_level = if p == 3 { 5 } else { 4 };
        for n in 1..=max_level {
            assert!(
                is_transitive_on_level(&group, n).unwrap(),
                "p={p}, level {n}"
            );
        }
    }
    c.pass("levels 1..=5 (p=3) and 1..=4 (p=5)");
}

/// Criterion 5: |G_n/[G_n,G_n]| = p^2, elementary abelian, for all tested
/// n >= 2 — validating the theta-kernel arena.
#[test]
fn criterion_05_abelianization_cross_check() {
    let c = Criterion::new(5, "abelianization p^2 cross-check");
    for group in instances() {
        let p = group.p();
        let expected = BigUint::from(p * p);
        let max_level = if p == 3 { 5 } else { 4 };
        for n in 2..=max_level {
            let q = quotient_group(&group, n).unwrap();
            let (order, elementary) = abelian_quotient_order(&q, p).unwrap();
            assert_eq!(order, expected, "p={p}, n={n}");
            assert!(elementary, "p={p}, n={n}");
        }
    }
    c.pass("p^2 elementary at every tested level >= 2");
}

/// Criterion 6: torsion dichotomy evidence. Gupta-Sidki: 100 random words
/// all have finite order <= 3^5. Fabrykowski-Gupta theta-kernel: 100 random
/// nontrivial kernel elements all exceed order bound 3^4.
#[test]
fn criterion_06_torsion_dichotomy() {
    let c = Criterion::new(6, "torsion dichotomy evidence");
    let gs = GgsGroup::new(3, &[1, 2]).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(606);
    let mut max_order = 0u64;
    for i in 0..100 {
        let len = rng.gen_range(0..=12);
        let w = words::random_reduced_word(&mut rng, 3, len);
        match gs.order_up_to(&w, 243).unwrap() {
            OrderResult::Finite(k) => max_order = max_order.max(k),
            OrderResult::ExceedsBound => panic!("Gupta-Sidki word {i} ({w}) exceeds 3^5"),
        }
    }

    let fg = GgsGroup::new(3, &[1, 0]).unwrap();
    let mut confirmed = 0;
    while confirmed < 100 {
        let len = rng.gen_range(0..=12);
        let base = words::random_reduced_word(&mut rng, 3, len);
        let t = fg.theta(&base);
        let fix = ReducedWord::a_pow(-(t.a_exp as i64), 3)
            .mul(&ReducedWord::b_pow(-(t.b_exp as i64), 3), 3);
        let w = fg.mul(&base, &fix);
        assert!(fg.in_derived_kernel(&w));
        if fg.is_identity(&w).unwrap() {
            continue;
        }
        match fg.order_up_to(&w, 81).unwrap() {
            OrderResult::ExceedsBound => confirmed += 1,
            OrderResult::Finite(k) => panic!("kernel element ({w}) has order {k} <= 3^4"),
        }
    }
    c.pass(&format!(
        "Gupta-Sidki max order {max_order} <= 243; 100 kernel elements exceed 81"
    ));
}

/// Criterion 7: diffuse_search over the full radius-1 ball finds {1, a, a^2}
/// with zero extremal elements, re-verified by definition-level brute force.
#[test]
fn criterion_07_non_diffuse_torsion_witness() {
    let c = Criterion::new(7, "non-diffuse torsion witness {1, a, a^2}");
    let g = GgsGroup::new(3, &[1, 0]).unwrap();
    let b = ball(&g, 1, Arena::Full).unwrap();
    let params = SearchParams {
        max_subset_size: 3,
        verify_all: true,
        ..SearchParams::default()
    };
    let (report, state) = diffuse_search(&g, &b, &params, None).unwrap();
    assert!(state.is_none() && !report.partial);
    assert_eq!(report.min_count, Some(0));
    let witness = report
        .witnesses
        .iter()
        .find(|w| w.a_words == vec!["", "a1", "a2"])
        .expect("the cyclic subgroup witness");
    assert_eq!(witness.count, 0);
    assert_eq!(witness.reverified_count, 0);
    assert_eq!(report.verification.mismatches, 0);

    // Direct definition-level confirmation, independent of the runner.
    let subset = search::FiniteSubset::new(
        &g,
        vec![
            ReducedWord::identity(),
            ReducedWord::gen_a(),
            ReducedWord::a_pow(2, 3),
        ],
    )
    .unwrap();
    assert!(search::extremal_elements_bruteforce(&g, &subset)
        .unwrap()
        .is_empty());
    c.pass("witness re-verified by brute force; zero mismatches");
}

/// Criterion 8: the Question-2 evidence run. Exhaustive unique-product search
/// over the theta-kernel ball (p=3, e=(1,0)) with |A|, |B| <= 2, every count
/// re-verified, loud flag if any count < 2. Radius 3 as specified (the
/// kernel ball is {1}, so the scan is vacuous) plus the first informative
/// radius, 4.
#[test]
fn criterion_08_question_two_evidence() {
    let c = Criterion::new(8, "unique-product evidence in the theta-kernel");
    let g = GgsGroup::new(3, &[1, 0]).unwrap();
    let params = SearchParams {
        max_subset_size: 2,
        verify_all: true,
        ..SearchParams::default()
    };

    let b3 = ball(&g, 3, Arena::ThetaKernel).unwrap();
    let (r3, s3) = up_search(&g, &b3, &params, None).unwrap();
    assert!(s3.is_none() && !r3.partial, "radius-3 run must complete");
    assert_eq!(r3.ball_size, 1, "kernel ball of radius 3 is {{1}}");
    assert_eq!(r3.pairs_evaluated, 0);
    assert_eq!(r3.min_count, None);
    assert!(r3.flags.is_empty());

    let b4 = ball(&g, 4, Arena::ThetaKernel).unwrap();
    let (r4, s4) = up_search(&g, &b4, &params, None).unwrap();
    assert!(s4.is_none() && !r4.partial);
    assert_eq!(r4.verification.reverified, r4.pairs_evaluated);
    assert_eq!(r4.verification.mismatches, 0);
    let min = r4.min_count.expect("radius-4 run evaluates pairs");
    assert!(
        !r4.flags
            .iter()
            .any(|f| f == "THETA_KERNEL_UNIQUE_PRODUCT_COUNT_BELOW_TWO"),
        "a count below two inside the kernel would be a counterexample signal"
    );
    assert!(min >= 2, "minimum unique-product count {min} < 2");
    c.pass(&format!(
        "radius 3 vacuous-complete; radius 4: min count {min} over {} re-verified pairs",
        r4.pairs_evaluated
    ));
}

/// Criterion 9: byte-identical payloads across reruns and worker counts.
#[test]
fn criterion_09_determinism() {
    let c = Criterion::new(9, "byte-identical payloads");
    let io = IoOptions::default();
    let group = GroupSpec {
        p: 3,
        e: vec![1, 0],
        theorem_compliant_mode: false,
    };
    let budgets = Budgets::default();

    let payload_bytes = |config: &RunConfig| -> Vec<u8> {
        let outcome = execute(config, &io).unwrap();
        assert!(!outcome.partial);
        serde_json::to_vec(&outcome.envelope.payload).unwrap()
    };

    let mut commands: Vec<RunConfig> = vec![
        RunConfig {
            group: group.clone(),
            budgets,
            command: CommandConfig::GroupInfo,
        },
        RunConfig {
            group: group.clone(),
            budgets,
            command: CommandConfig::Element {
                word: "a1 b2".into(),
                query: ElementQuery::Order { bound: 100 },
            },
        },
        RunConfig {
            group: group.clone(),
            budgets,
            command: CommandConfig::Quotients {
                max_level: 2,
                oracle_check: true,
            },
        },
    ];
    for workers in [1usize, 4] {
        commands.push(RunConfig {
            group: group.clone(),
            budgets,
            command: CommandConfig::Search {
                kind: SearchKind::UniqueProducts,
                arena: Arena::Full,
                radius: 2,
                max_size: 2,
                mode: SearchMode::Exhaustive,
                budget_pairs: None,
                max_witnesses: 1024,
                verify_all: false,
                workers: Some(workers),
            },
        });
    }
    for config in &commands {
        assert_eq!(
            payload_bytes(config),
            payload_bytes(config),
            "rerun differs for {:?}",
            config.command
        );
    }
    // Worker counts must not leak into the payload. The worker knob lives in
    // the config, so compare the payloads of the two search configs.
    let search_payloads: Vec<Vec<u8>> = commands[3..].iter().map(payload_bytes).collect();
    assert_eq!(search_payloads[0], search_payloads[1]);

    // Random mode with a fixed seed is just as reproducible.
    let random_cfg = RunConfig {
        group,
        budgets,
        command: CommandConfig::Search {
            kind: SearchKind::Diffuse,
            arena: Arena::Full,
            radius: 2,
            max_size: 2,
            mode: SearchMode::Random {
                seed: 7,
                samples: 300,
            },
            budget_pairs: None,
            max_witnesses: 1024,
            verify_all: false,
            workers: None,
        },
    };
    assert_eq!(payload_bytes(&random_cfg), payload_bytes(&random_cfg));
    c.pass("group-info, element, quotients, search x {workers 1, 4}, random mode");
}

/// Criterion 10: the finite-candidate extremality reduction agrees with the
/// brute force over all s in a^-1 A, on 500 random subsets.
#[test]
fn criterion_10_extremal_oracle_equivalence() {
    let c = Criterion::new(10, "extremal elements oracle equivalence");
    let g = GgsGroup::new(3, &[1, 0]).unwrap();
    let b = ball(&g, 2, Arena::Full).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(1000);
    for i in 0..500 {
        let size = rng.gen_range(1..=4usize);
        let mut indices: Vec<usize> = (0..b.len()).collect();
        for k in 0..size {
            let j = rng.gen_range(k..indices.len());
            indices.swap(k, j);
        }
        indices.truncate(size);
        indices.sort_unstable();
        let subset = search::FiniteSubset::from_ball_indices(&b, &indices);
        assert_eq!(
            search::extremal_elements(&g, &subset).unwrap(),
            search::extremal_elements_bruteforce(&g, &subset).unwrap(),
            "subset {i}: {indices:?}"
        );
    }
    c.pass("500 random subsets agree");
}
