//! Command execution behind the `branchlab` binary: builds the group
//! context, dispatches element / quotient / search commands, and wraps every
//! result in a reproducible envelope.
//!
//! The envelope echoes the config and carries timing; the payload is a pure
//! function of the config, so reruns (and runs with different worker counts)
//! serialize to byte-identical payloads.

pub mod cache;
pub mod config;

use std::path::PathBuf;
use std::time::Instant;

use serde::Serialize;

use branchlab_core::engine::{OrderResult, RelationReport};
use branchlab_core::error::Error as CoreError;
use branchlab_core::quotient::{self, QuotientReport};
use branchlab_core::search::{
    self, Arena, Ball, SearchKind, SearchMode, SearchParams, SearchReport, SearchState,
};
use branchlab_core::{GgsGroup, GroupOptions, Vertex};

use config::{Budgets, CommandConfig, ElementQuery, GroupSpec, RunConfig, TOOL_VERSION};

/// Filesystem knobs that never influence the payload.
#[derive(Debug, Clone, Default)]
pub struct IoOptions {
    pub cache_dir: Option<PathBuf>,
    pub resume_path: Option<PathBuf>,
    pub csv_path: Option<PathBuf>,
}

#[derive(Debug)]
pub enum CliError {
    Core(CoreError),
    InvalidArgs(String),
    Io(std::io::Error),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::InvalidArgs(msg) => write!(f, "{msg}"),
            CliError::Io(e) => write!(f, "io error: {e}"),
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        CliError::Core(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

impl CliError {
    /// 2 invalid input, 3 budget/partial, 4 internal invariant violation.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::InvalidArgs(_) | CliError::Io(_) => 2,
            CliError::Core(e) => match e {
                CoreError::DegreeBudgetExceeded { .. }
                | CoreError::BallBudgetExceeded { .. }
                | CoreError::SearchSpaceOverflow { .. } => 3,
                CoreError::StateBudgetExceeded { .. } | CoreError::RelationFailure { .. } => 4,
                _ => 2,
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct GroupInfoPayload {
    pub p: u32,
    pub e: Vec<u32>,
    pub family_lambda: Option<u32>,
    pub theorem_compliant: bool,
    pub relations: RelationReport,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum OrderPayload {
    Finite(u64),
    ExceedsBound,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
#[serde(untagged)]
pub enum ElementAnswer {
    Act { vertex: String, image: String },
    Order { bound: u64, order: OrderPayload },
    Equal { other: String, equal: bool },
    Portrait { depth: usize, levels: Vec<Vec<Vec<u8>>> },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ElementPayload {
    pub word: String,
    #[serde(flatten)]
    pub answer: ElementAnswer,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct OracleCheck {
    pub n: usize,
    pub naive_order: String,
    pub matches: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct QuotientsPayload {
    pub levels: Vec<QuotientReport>,
    pub truncated: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub truncated_at_level: Option<usize>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub oracle_checks: Vec<OracleCheck>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Payload {
    GroupInfo(GroupInfoPayload),
    Element(ElementPayload),
    Quotients(QuotientsPayload),
    Search(Box<SearchReport>),
}

#[derive(Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Envelope {
    pub tool_version: String,
    pub config: RunConfig,
    pub timing_ms: u64,
    pub payload: Payload,
}

pub struct Outcome {
    pub envelope: Envelope,
    /// Search ran out of budget; a cursor was emitted.
    pub partial: bool,
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        if self.partial {
            3
        } else {
            0
        }
    }
}

fn build_group(spec: &GroupSpec, budgets: &Budgets) -> Result<GgsGroup, CliError> {
    let options = GroupOptions {
        state_budget: budgets.state_cap,
        memoize: true,
    };
    let group = GgsGroup::with_options(spec.p, &spec.e, options)?;
    if spec.theorem_compliant_mode && !group.is_theorem_compliant() {
        return Err(CliError::InvalidArgs(format!(
            "vector {:?} is not a theorem-compliant family vector (1, ..., 1, lambda), lambda != 1, 2",
            spec.e
        )));
    }
    Ok(group)
}

/// Executes a config and wraps the result. The payload depends only on the
/// config; `io` controls caching and cursor persistence.
pub fn execute(cfg: &RunConfig, io: &IoOptions) -> Result<Outcome, CliError> {
    let start = Instant::now();
    let group = build_group(&cfg.group, &cfg.budgets)?;
    let (payload, partial) = match &cfg.command {
        CommandConfig::GroupInfo => (run_group_info(&group), false),
        CommandConfig::Element { word, query } => {
            (run_element(&group, word, query)?, false)
        }
        CommandConfig::Quotients {
            max_level,
            oracle_check,
        } => run_quotients(&group, *max_level, *oracle_check, cfg.budgets.degree_cap)?,
        CommandConfig::Search {
            kind,
            arena,
            radius,
            max_size,
            mode,
            budget_pairs,
            max_witnesses,
            verify_all,
            workers,
        } => run_search(
            &group,
            *kind,
            *arena,
            *radius,
            *max_size,
            *mode,
            *budget_pairs,
            *max_witnesses,
            *verify_all,
            *workers,
            cfg.budgets.ball_cap,
            io,
        )?,
    };
    Ok(Outcome {
        envelope: Envelope {
            tool_version: TOOL_VERSION.to_string(),
            config: cfg.clone(),
            timing_ms: start.elapsed().as_millis() as u64,
            payload,
        },
        partial,
    })
}

fn run_group_info(group: &GgsGroup) -> Payload {
    Payload::GroupInfo(GroupInfoPayload {
        p: group.p(),
        e: group.vector().e.clone(),
        family_lambda: group.vector().family_lambda(),
        theorem_compliant: group.is_theorem_compliant(),
        relations: *group.relation_report(),
    })
}

fn run_element(
    group: &GgsGroup,
    word_text: &str,
    query: &ElementQuery,
) -> Result<Payload, CliError> {
    let word = group.parse_word(word_text)?;
    let answer = match query {
        ElementQuery::Act { vertex } => {
            let v = Vertex::parse(vertex, group.alphabet())?;
            ElementAnswer::Act {
                vertex: vertex.clone(),
                image: group.act(&word, &v).to_string(),
            }
        }
        ElementQuery::Order { bound } => ElementAnswer::Order {
            bound: *bound,
            order: match group.order_up_to(&word, *bound)? {
                OrderResult::Finite(k) => OrderPayload::Finite(k),
                OrderResult::ExceedsBound => OrderPayload::ExceedsBound,
            },
        },
        ElementQuery::Equal { other } => {
            let other_word = group.parse_word(other)?;
            ElementAnswer::Equal {
                other: other.clone(),
                equal: group.equal(&word, &other_word)?,
            }
        }
        ElementQuery::Portrait { depth } => {
            let portrait = group.portrait(&word, *depth);
            ElementAnswer::Portrait {
                depth: *depth,
                levels: portrait
                    .levels()
                    .iter()
                    .map(|level| level.iter().map(|rp| rp.images().to_vec()).collect())
                    .collect(),
            }
        }
    };
    Ok(Payload::Element(ElementPayload {
        word: word_text.to_string(),
        answer,
    }))
}

fn run_quotients(
    group: &GgsGroup,
    max_level: usize,
    oracle_check: bool,
    degree_cap: u64,
) -> Result<(Payload, bool), CliError> {
    let mut levels = Vec::new();
    let mut truncated_at = None;
    for n in 1..=max_level {
        match quotient::quotient_report(group, n, degree_cap) {
            Ok(report) => levels.push(report),
            Err(CoreError::DegreeBudgetExceeded { .. }) => {
                truncated_at = Some(n);
                break;
            }
            Err(e) => return Err(e.into()),
        }
    }
    let mut oracle_checks = Vec::new();
    if oracle_check {
        for report in &levels {
            let degree = (group.p() as u64).pow(report.n as u32) as usize;
            if degree > quotient::NAIVE_DEGREE_LIMIT {
                continue;
            }
            let q = quotient::quotient_group_with_budget(group, report.n, degree_cap)?;
            let naive = quotient::naive::naive_order(degree, q.generators(), 5_000_000)?;
            oracle_checks.push(OracleCheck {
                n: report.n,
                naive_order: naive.to_string(),
                matches: naive.to_string() == report.order,
            });
        }
    }
    let truncated = truncated_at.is_some();
    Ok((
        Payload::Quotients(QuotientsPayload {
            levels,
            truncated,
            truncated_at_level: truncated_at,
            oracle_checks,
        }),
        truncated,
    ))
}

#[allow(clippy::too_many_arguments)]
fn run_search(
    group: &GgsGroup,
    kind: SearchKind,
    arena: Arena,
    radius: usize,
    max_size: usize,
    mode: SearchMode,
    budget_pairs: Option<u64>,
    max_witnesses: usize,
    verify_all: bool,
    workers: Option<usize>,
    ball_cap: usize,
    io: &IoOptions,
) -> Result<(Payload, bool), CliError> {
    let ball = load_or_build_ball(group, radius, arena, ball_cap, io)?;
    let params = SearchParams {
        max_subset_size: max_size,
        mode,
        position_budget: budget_pairs,
        max_witnesses,
        verify_all,
        workers,
    };
    let resume = match &io.resume_path {
        Some(path) if path.exists() => {
            let text = std::fs::read_to_string(path)?;
            let state: SearchState =
                serde_json::from_str(&text).map_err(|e| CliError::InvalidArgs(format!(
                    "cannot parse resume state {}: {e}",
                    path.display()
                )))?;
            Some(state)
        }
        _ => None,
    };

    let (report, state) = match kind {
        SearchKind::UniqueProducts => search::up_search(group, &ball, &params, resume.as_ref())?,
        SearchKind::Diffuse => search::diffuse_search(group, &ball, &params, resume.as_ref())?,
    };

    if let Some(csv_path) = &io.csv_path {
        let mut csv = String::from("count,occurrences\n");
        for entry in &report.histogram {
            csv.push_str(&format!("{},{}\n", entry.count, entry.occurrences));
        }
        std::fs::write(csv_path, csv)?;
    }

    let partial = report.partial;
    match (&io.resume_path, state) {
        (Some(path), Some(state)) => {
            std::fs::write(path, serde_json::to_string_pretty(&state).map_err(io_err)?)?;
        }
        (Some(path), None) => {
            // Completed: a stale cursor must not hijack the next run.
            if path.exists() {
                std::fs::remove_file(path)?;
            }
        }
        (None, Some(_)) => {
            eprintln!(
                "warning: run is partial but no --resume path was given; progress not persisted"
            );
        }
        (None, None) => {}
    }

    Ok((Payload::Search(Box::new(report)), partial))
}

fn io_err(e: serde_json::Error) -> std::io::Error {
    std::io::Error::other(e)
}

fn load_or_build_ball(
    group: &GgsGroup,
    radius: usize,
    arena: Arena,
    ball_cap: usize,
    io: &IoOptions,
) -> Result<Ball, CliError> {
    let budget = search::BallBudget {
        max_elements: ball_cap,
        ..search::BallBudget::default()
    };
    let Some(dir) = &io.cache_dir else {
        return Ok(search::ball_with_budget(group, radius, arena, budget)?);
    };
    std::fs::create_dir_all(dir)?;
    let path = dir.join(cache::ball_file_name(group, radius, arena));
    if path.exists() {
        let file = std::fs::File::open(&path)?;
        match Ball::read_cache(group, radius, arena, std::io::BufReader::new(file)) {
            Ok(ball) => return Ok(ball),
            Err(_) => {
                // Stale or corrupt cache: fall through and rebuild.
            }
        }
    }
    let ball = search::ball_with_budget(group, radius, arena, budget)?;
    let mut buf = Vec::new();
    ball.write_cache(&mut buf)?;
    std::fs::write(&path, buf)?;
    Ok(ball)
}
