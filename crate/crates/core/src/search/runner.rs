//! Exhaustive and seeded randomized searches over subset pairs of a ball,
//! with resumable cursors and a deterministic parallel merge: results are
//! identical across runs, worker counts, and budget splits.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::GgsGroup;
use crate::search::products::{
    extremal_elements, extremal_elements_bruteforce, up_count, up_count_bruteforce,
    unique_products,
};
use crate::search::subsets::SubsetEnumerator;
use crate::search::{Arena, Ball, FiniteSubset, GroupDescriptor};

/// Positions per parallel work item. Fixed so that results do not depend on
/// the worker count.
const CHUNK_SIZE: u64 = 512;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SearchKind {
    #[serde(rename = "uniqueProducts")]
    UniqueProducts,
    #[serde(rename = "diffuse")]
    Diffuse,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "camelCase")]
pub enum SearchMode {
    Exhaustive,
    Random { seed: u64, samples: u64 },
}

/// Tunables for one search run.
#[derive(Debug, Clone)]
pub struct SearchParams {
    pub max_subset_size: usize,
    pub mode: SearchMode,
    /// Cap on positions scanned in this run; exhausting it yields a partial
    /// report with a resume cursor.
    pub position_budget: Option<u64>,
    /// Cap on stored witnesses (the total is always reported).
    pub max_witnesses: usize,
    /// Re-verify every evaluated count with the key-free brute-force path,
    /// not just witnesses.
    pub verify_all: bool,
    /// Rayon pool size; `None` uses the global pool.
    pub workers: Option<usize>,
}

impl Default for SearchParams {
    fn default() -> Self {
        SearchParams {
            max_subset_size: 3,
            mode: SearchMode::Exhaustive,
            position_budget: None,
            max_witnesses: 1024,
            verify_all: false,
            workers: None,
        }
    }
}

/// The deterministic identity of a search; resume states must match it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SearchSpec {
    pub kind: SearchKind,
    pub group: GroupDescriptor,
    pub arena: Arena,
    pub radius: usize,
    pub max_subset_size: usize,
    #[serde(flatten)]
    pub mode: SearchMode,
}

/// A single unique product inside a witness.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct UniqueProductRecord {
    pub word: String,
    pub a_index: usize,
    pub b_index: usize,
}

/// A subset (pair) whose count fell below the interesting threshold, with
/// enough data to re-verify it from scratch.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Witness {
    pub position: u64,
    pub a_indices: Vec<usize>,
    pub a_words: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    #[serde(default)]
    pub b_indices: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    #[serde(default)]
    pub b_words: Option<Vec<String>>,
    pub count: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    #[serde(default)]
    pub unique_products: Option<Vec<UniqueProductRecord>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    #[serde(default)]
    pub extremal_indices: Option<Vec<usize>>,
    /// Count recomputed by the independent brute-force path.
    pub reverified_count: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct HistogramEntry {
    pub count: u64,
    pub occurrences: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct VerificationSummary {
    /// "all" or "witnesses".
    pub mode: String,
    pub reverified: u64,
    pub mismatches: u64,
}

/// Serialized progress of a partial run; feeding it back continues the scan
/// and yields the same final report as an unbudgeted run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SearchState {
    pub spec: SearchSpec,
    pub cursor: u64,
    pub pairs_evaluated: u64,
    pub min_count: Option<u64>,
    pub histogram: Vec<HistogramEntry>,
    pub witnesses: Vec<Witness>,
    pub witnesses_total: u64,
    pub reverified: u64,
    pub mismatches: u64,
}

/// Search findings; serialized as the reproducible report payload.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SearchReport {
    pub kind: SearchKind,
    pub group: GroupDescriptor,
    pub arena: Arena,
    pub length_convention: String,
    pub radius: usize,
    pub max_subset_size: usize,
    #[serde(flatten)]
    pub mode: SearchMode,
    pub ball_size: usize,
    pub subset_count: u64,
    pub positions_total: u64,
    pub positions_scanned: u64,
    pub pairs_evaluated: u64,
    pub partial: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cursor: Option<u64>,
    pub metric: String,
    pub min_count: Option<u64>,
    pub histogram: Vec<HistogramEntry>,
    pub witnesses: Vec<Witness>,
    pub witnesses_total: u64,
    pub witnesses_truncated: bool,
    pub verification: VerificationSummary,
    pub flags: Vec<String>,
}

#[derive(Debug, Clone, Default)]
struct Accum {
    pairs_evaluated: u64,
    min_count: Option<u64>,
    histogram: BTreeMap<u64, u64>,
    witnesses: Vec<Witness>,
    witnesses_total: u64,
    reverified: u64,
    mismatches: u64,
}

impl Accum {
    fn merge(&mut self, other: Accum, max_witnesses: usize) {
        self.pairs_evaluated += other.pairs_evaluated;
        self.min_count = match (self.min_count, other.min_count) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        for (count, occurrences) in other.histogram {
            *self.histogram.entry(count).or_insert(0) += occurrences;
        }
        self.witnesses_total += other.witnesses_total;
        for w in other.witnesses {
            if self.witnesses.len() < max_witnesses {
                self.witnesses.push(w);
            }
        }
        self.reverified += other.reverified;
        self.mismatches += other.mismatches;
    }

    fn record(&mut self, count: u64) {
        self.pairs_evaluated += 1;
        *self.histogram.entry(count).or_insert(0) += 1;
        self.min_count = Some(self.min_count.map_or(count, |m| m.min(count)));
    }

    fn from_state(state: &SearchState) -> Accum {
        Accum {
            pairs_evaluated: state.pairs_evaluated,
            min_count: state.min_count,
            histogram: state
                .histogram
                .iter()
                .map(|h| (h.count, h.occurrences))
                .collect(),
            witnesses: state.witnesses.clone(),
            witnesses_total: state.witnesses_total,
            reverified: state.reverified,
            mismatches: state.mismatches,
        }
    }
}

struct SearchContext<'a> {
    group: &'a GgsGroup,
    ball: &'a Ball,
    enumerator: SubsetEnumerator,
    spec: SearchSpec,
    params: &'a SearchParams,
}

/// Exhaustive or randomized unique-product search over subset pairs
/// (A, B) of the ball with |A||B| >= 2.
pub fn up_search(
    group: &GgsGroup,
    ball: &Ball,
    params: &SearchParams,
    resume: Option<&SearchState>,
) -> Result<(SearchReport, Option<SearchState>)> {
    run_search(group, ball, SearchKind::UniqueProducts, params, resume)
}

/// Search for subsets with no extremal element.
pub fn diffuse_search(
    group: &GgsGroup,
    ball: &Ball,
    params: &SearchParams,
    resume: Option<&SearchState>,
) -> Result<(SearchReport, Option<SearchState>)> {
    run_search(group, ball, SearchKind::Diffuse, params, resume)
}

fn run_search(
    group: &GgsGroup,
    ball: &Ball,
    kind: SearchKind,
    params: &SearchParams,
    resume: Option<&SearchState>,
) -> Result<(SearchReport, Option<SearchState>)> {
    let enumerator = SubsetEnumerator::new(ball.len(), params.max_subset_size)?;
    let subset_count = enumerator.count();
    let spec = SearchSpec {
        kind,
        group: GroupDescriptor::from(group),
        arena: ball.arena(),
        radius: ball.radius(),
        max_subset_size: params.max_subset_size,
        mode: params.mode,
    };

    let positions_total = match (kind, params.mode) {
        (SearchKind::UniqueProducts, SearchMode::Exhaustive) => subset_count
            .checked_mul(subset_count)
            .ok_or(Error::SearchSpaceOverflow {
                detail: format!("{subset_count}^2 pair positions overflow u64"),
            })?,
        (SearchKind::Diffuse, SearchMode::Exhaustive) => subset_count,
        (_, SearchMode::Random { samples, .. }) => samples,
    };

    let start = match resume {
        Some(state) => {
            if state.spec != spec {
                return Err(Error::ParseWord {
                    input: "<resume state>".into(),
                    reason: "resume state does not match this search".into(),
                });
            }
            if state.cursor > positions_total {
                return Err(Error::CursorOutOfRange {
                    cursor: state.cursor,
                    total: positions_total,
                });
            }
            state.cursor
        }
        None => 0,
    };
    let end = match params.position_budget {
        Some(budget) => positions_total.min(start.saturating_add(budget)),
        None => positions_total,
    };

    let ctx = SearchContext {
        group,
        ball,
        enumerator,
        spec: spec.clone(),
        params,
    };

    let mut accum = resume.map(Accum::from_state).unwrap_or_default();
    let chunk_results = scan_window(&ctx, start, end)?;
    for chunk in chunk_results {
        accum.merge(chunk, params.max_witnesses);
    }

    let partial = end < positions_total;
    let state = partial.then(|| SearchState {
        spec: spec.clone(),
        cursor: end,
        pairs_evaluated: accum.pairs_evaluated,
        min_count: accum.min_count,
        histogram: histogram_vec(&accum.histogram),
        witnesses: accum.witnesses.clone(),
        witnesses_total: accum.witnesses_total,
        reverified: accum.reverified,
        mismatches: accum.mismatches,
    });

    let mut flags = Vec::new();
    if accum.mismatches > 0 {
        flags.push("VERIFICATION_MISMATCH".to_string());
    }
    if ball.arena() == Arena::ThetaKernel
        && kind == SearchKind::UniqueProducts
        && accum.min_count.is_some_and(|m| m < 2)
    {
        // A unique-product count below two inside the kernel arena would be
        // a counterexample signal; witnesses carry the full words.
        flags.push("THETA_KERNEL_UNIQUE_PRODUCT_COUNT_BELOW_TWO".to_string());
    }
    let witnesses_truncated = (accum.witnesses.len() as u64) < accum.witnesses_total;
    if witnesses_truncated {
        flags.push("WITNESSES_TRUNCATED".to_string());
    }

    let report = SearchReport {
        kind,
        group: spec.group.clone(),
        arena: spec.arena,
        length_convention: "syllables".to_string(),
        radius: spec.radius,
        max_subset_size: spec.max_subset_size,
        mode: spec.mode,
        ball_size: ball.len(),
        subset_count,
        positions_total,
        positions_scanned: end,
        pairs_evaluated: accum.pairs_evaluated,
        partial,
        cursor: partial.then_some(end),
        metric: match kind {
            SearchKind::UniqueProducts => "uniqueProducts".to_string(),
            SearchKind::Diffuse => "extremalElements".to_string(),
        },
        min_count: accum.min_count,
        histogram: histogram_vec(&accum.histogram),
        witnesses: accum.witnesses,
        witnesses_total: accum.witnesses_total,
        witnesses_truncated,
        verification: VerificationSummary {
            mode: if params.verify_all { "all" } else { "witnesses" }.to_string(),
            reverified: accum.reverified,
            mismatches: accum.mismatches,
        },
        flags,
    };
    Ok((report, state))
}

fn histogram_vec(map: &BTreeMap<u64, u64>) -> Vec<HistogramEntry> {
    map.iter()
        .map(|(&count, &occurrences)| HistogramEntry {
            count,
            occurrences,
        })
        .collect()
}

/// Scans positions [start, end) in fixed-size chunks; chunks may run on any
/// number of workers, results are folded in chunk order.
fn scan_window(ctx: &SearchContext<'_>, start: u64, end: u64) -> Result<Vec<Accum>> {
    if start >= end {
        return Ok(Vec::new());
    }
    let chunks: Vec<(u64, u64)> = {
        let mut out = Vec::new();
        let mut lo = start;
        while lo < end {
            let hi = end.min(lo + CHUNK_SIZE);
            out.push((lo, hi));
            lo = hi;
        }
        out
    };

    let work = || -> Result<Vec<Accum>> {
        use rayon::prelude::*;
        chunks
            .par_iter()
            .map(|&(lo, hi)| scan_chunk(ctx, lo, hi))
            .collect()
    };

    match ctx.params.workers {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .expect("failed to build worker pool")
            .install(work),
        None => work(),
    }
}

fn scan_chunk(ctx: &SearchContext<'_>, lo: u64, hi: u64) -> Result<Accum> {
    let mut accum = Accum::default();
    for position in lo..hi {
        match ctx.spec.kind {
            SearchKind::UniqueProducts => evaluate_up_position(ctx, position, &mut accum)?,
            SearchKind::Diffuse => evaluate_diffuse_position(ctx, position, &mut accum)?,
        }
    }
    Ok(accum)
}

/// Draws the subset pair for a position: exhaustive positions index the
/// product order (A-major), random positions use a per-position RNG stream.
fn up_pair_at(ctx: &SearchContext<'_>, position: u64) -> Result<Option<(Vec<usize>, Vec<usize>)>> {
    let s = ctx.enumerator.count();
    match ctx.spec.mode {
        SearchMode::Exhaustive => {
            let a_idx = position / s;
            let b_idx = position % s;
            let a = ctx.enumerator.unrank(a_idx)?;
            let b = ctx.enumerator.unrank(b_idx)?;
            if a.len() * b.len() < 2 {
                return Ok(None);
            }
            Ok(Some((a, b)))
        }
        SearchMode::Random { seed, .. } => {
            // A pair with |A||B| >= 2 exists iff some non-singleton subset
            // does; otherwise every draw would be invalid.
            if ctx.enumerator.count() <= ctx.enumerator.count_of_size(1) {
                return Ok(None);
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(position.wrapping_add(1));
            loop {
                let a_idx = rng.gen_range(0..s);
                let b_idx = rng.gen_range(0..s);
                let a = ctx.enumerator.unrank(a_idx)?;
                let b = ctx.enumerator.unrank(b_idx)?;
                if a.len() * b.len() >= 2 {
                    return Ok(Some((a, b)));
                }
            }
        }
    }
}

fn evaluate_up_position(
    ctx: &SearchContext<'_>,
    position: u64,
    accum: &mut Accum,
) -> Result<()> {
    let Some((a_indices, b_indices)) = up_pair_at(ctx, position)? else {
        return Ok(());
    };
    let a = FiniteSubset::from_ball_indices(ctx.ball, &a_indices);
    let b = FiniteSubset::from_ball_indices(ctx.ball, &b_indices);
    let count = up_count(ctx.group, &a, &b)?;
    accum.record(count);

    let is_witness = count <= 1;
    if ctx.params.verify_all || is_witness {
        let brute = up_count_bruteforce(ctx.group, &a, &b)?;
        accum.reverified += 1;
        if brute != count {
            accum.mismatches += 1;
        }
        if is_witness {
            accum.witnesses_total += 1;
            if accum.witnesses.len() < ctx.params.max_witnesses {
                let ups = unique_products(ctx.group, &a, &b)?;
                accum.witnesses.push(Witness {
                    position,
                    a_indices,
                    a_words: a.elements().iter().map(|w| w.to_string()).collect(),
                    b_indices: Some(b_indices),
                    b_words: Some(b.elements().iter().map(|w| w.to_string()).collect()),
                    count,
                    unique_products: Some(
                        ups.into_iter()
                            .map(|(word, (i, j))| UniqueProductRecord {
                                word: word.to_string(),
                                a_index: i,
                                b_index: j,
                            })
                            .collect(),
                    ),
                    extremal_indices: None,
                    reverified_count: brute,
                });
            }
        }
    }
    Ok(())
}

fn evaluate_diffuse_position(
    ctx: &SearchContext<'_>,
    position: u64,
    accum: &mut Accum,
) -> Result<()> {
    let a_indices = match ctx.spec.mode {
        SearchMode::Exhaustive => ctx.enumerator.unrank(position)?,
        SearchMode::Random { seed, .. } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(position.wrapping_add(1));
            ctx.enumerator.unrank(rng.gen_range(0..ctx.enumerator.count()))?
        }
    };
    let a = FiniteSubset::from_ball_indices(ctx.ball, &a_indices);
    let extremal = extremal_elements(ctx.group, &a)?;
    let count = extremal.len() as u64;
    accum.record(count);

    let is_witness = count == 0;
    if ctx.params.verify_all || is_witness {
        let brute = extremal_elements_bruteforce(ctx.group, &a)?;
        accum.reverified += 1;
        if brute.len() as u64 != count {
            accum.mismatches += 1;
        }
        if is_witness {
            accum.witnesses_total += 1;
            if accum.witnesses.len() < ctx.params.max_witnesses {
                accum.witnesses.push(Witness {
                    position,
                    a_indices,
                    a_words: a.elements().iter().map(|w| w.to_string()).collect(),
                    b_indices: None,
                    b_words: None,
                    count,
                    unique_products: None,
                    extremal_indices: Some(extremal),
                    reverified_count: brute.len() as u64,
                });
            }
        }
    }
    Ok(())
}
