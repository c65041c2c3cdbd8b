use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use branchlab::config::{
    Budgets, CommandConfig, ElementQuery, GroupSpec, RunConfig,
};
use branchlab::{cache, execute, CliError, IoOptions};
use branchlab_core::search::{Arena, SearchKind, SearchMode};

/// Computations in Grigorchuk-Gupta-Sidki groups: exact element arithmetic,
/// congruence quotient analysis, and unique-product / diffuseness searches.
#[derive(Parser)]
#[command(name = "branchlab", version, about)]
struct Cli {
    /// Write the result envelope to this file as well as stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct GroupArgs {
    /// The prime p (tree degree).
    #[arg(long)]
    p: u32,

    /// Defining vector e_1, ..., e_{p-1}, comma-separated.
    #[arg(long, value_delimiter = ',')]
    e: Vec<u32>,

    /// Reject vectors outside the theorem-compliant family (1,...,1,lambda),
    /// lambda != 1, 2.
    #[arg(long)]
    theorem_compliant: bool,

    /// Section-closure state cap (engine bug guard).
    #[arg(long, default_value_t = 100_000)]
    budget_states: usize,

    /// Largest permutation degree p^n handled exactly.
    #[arg(long, default_value_t = 3125)]
    budget_degree: u64,

    /// Memory cap on distinct ball elements.
    #[arg(long, default_value_t = 1_000_000)]
    budget_ball: usize,
}

impl GroupArgs {
    fn spec(&self) -> (GroupSpec, Budgets) {
        (
            GroupSpec {
                p: self.p,
                e: self.e.clone(),
                theorem_compliant_mode: self.theorem_compliant,
            },
            Budgets {
                state_cap: self.budget_states,
                degree_cap: self.budget_degree,
                ball_cap: self.budget_ball,
            },
        )
    }
}

#[derive(Subcommand)]
enum Command {
    /// Echo group data, relation verification, and family compliance.
    GroupInfo {
        #[command(flatten)]
        group: GroupArgs,
    },
    /// Element queries: action, bounded order, equality, portrait.
    Element {
        #[command(flatten)]
        group: GroupArgs,

        /// The word, e.g. "a1 b2 a1" (empty string = identity).
        #[arg(long)]
        word: String,

        #[command(subcommand)]
        query: ElementCommand,
    },
    /// Per-level congruence quotient reports for n = 1..=level.
    Quotients {
        #[command(flatten)]
        group: GroupArgs,

        /// Highest level to analyze.
        #[arg(long)]
        level: usize,

        /// Cross-check orders against the naive closure where degree <= 27.
        #[arg(long)]
        oracle_check: bool,
    },
    /// Unique-product or diffuseness search over a ball.
    Search {
        #[command(flatten)]
        group: GroupArgs,

        /// What to search for.
        #[arg(value_enum)]
        kind: SearchKindArg,

        /// Ball radius (word length in syllables).
        #[arg(long)]
        radius: usize,

        /// Arena: the full ball or its theta-kernel part.
        #[arg(long, value_enum, default_value_t = ArenaArg::Full)]
        arena: ArenaArg,

        /// Largest subset size for A (and B).
        #[arg(long, default_value_t = 3)]
        max_size: usize,

        /// exhaustive or random.
        #[arg(long, value_enum, default_value_t = ModeArg::Exhaustive)]
        mode: ModeArg,

        /// Seed for random mode.
        #[arg(long, default_value_t = 0)]
        seed: u64,

        /// Sample count for random mode.
        #[arg(long, default_value_t = 10_000)]
        samples: u64,

        /// Positions scanned per run; exceeding it yields a partial report
        /// with a resume cursor (exit code 3).
        #[arg(long)]
        budget_pairs: Option<u64>,

        /// Cap on witnesses stored in the report.
        #[arg(long, default_value_t = 1024)]
        max_witnesses: usize,

        /// Re-verify every count with the brute-force path, not just
        /// witnesses.
        #[arg(long)]
        verify_all: bool,

        /// Worker threads (default: one per core). Results are identical for
        /// any worker count.
        #[arg(long)]
        workers: Option<usize>,

        /// Ball cache directory (overrides BRANCHLAB_CACHE_DIR).
        #[arg(long)]
        cache_dir: Option<PathBuf>,

        /// Cursor file: read to resume, written on budget exhaustion.
        #[arg(long)]
        resume: Option<PathBuf>,

        /// Export the count histogram as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Re-run from a config or envelope JSON file.
    Run {
        /// Path to a config (or a previous envelope; its config is used).
        #[arg(long)]
        config: PathBuf,

        #[arg(long)]
        cache_dir: Option<PathBuf>,

        #[arg(long)]
        resume: Option<PathBuf>,

        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

#[derive(Subcommand, Clone)]
enum ElementCommand {
    /// Image of a vertex under the word.
    Act {
        /// Vertex as a digit string, e.g. "021" (empty = root).
        #[arg(long, default_value = "")]
        vertex: String,
    },
    /// Smallest k <= bound with word^k = 1.
    Order {
        #[arg(long)]
        bound: u64,
    },
    /// Equality with another word.
    Equal {
        #[arg(long)]
        other: String,
    },
    /// Portrait to the given depth.
    Portrait {
        #[arg(long)]
        depth: usize,
    },
}

#[derive(clap::ValueEnum, Clone, Copy)]
enum SearchKindArg {
    Up,
    Diffuse,
}

#[derive(clap::ValueEnum, Clone, Copy, PartialEq)]
enum ArenaArg {
    Full,
    Kernel,
}

#[derive(clap::ValueEnum, Clone, Copy, PartialEq)]
enum ModeArg {
    Exhaustive,
    Random,
}

fn to_config(command: &Command) -> Result<(RunConfig, IoOptions), CliError> {
    let env_cache_dir = std::env::var_os(cache::CACHE_DIR_ENV).map(PathBuf::from);
    match command {
        Command::GroupInfo { group } => {
            let (group, budgets) = group.spec();
            Ok((
                RunConfig {
                    group,
                    budgets,
                    command: CommandConfig::GroupInfo,
                },
                IoOptions::default(),
            ))
        }
        Command::Element { group, word, query } => {
            let (group, budgets) = group.spec();
            let query = match query {
                ElementCommand::Act { vertex } => ElementQuery::Act {
                    vertex: vertex.clone(),
                },
                ElementCommand::Order { bound } => ElementQuery::Order { bound: *bound },
                ElementCommand::Equal { other } => ElementQuery::Equal {
                    other: other.clone(),
                },
                ElementCommand::Portrait { depth } => ElementQuery::Portrait { depth: *depth },
            };
            Ok((
                RunConfig {
                    group,
                    budgets,
                    command: CommandConfig::Element {
                        word: word.clone(),
                        query,
                    },
                },
                IoOptions::default(),
            ))
        }
        Command::Quotients {
            group,
            level,
            oracle_check,
        } => {
            let (group, budgets) = group.spec();
            Ok((
                RunConfig {
                    group,
                    budgets,
                    command: CommandConfig::Quotients {
                        max_level: *level,
                        oracle_check: *oracle_check,
                    },
                },
                IoOptions::default(),
            ))
        }
        Command::Search {
            group,
            kind,
            radius,
            arena,
            max_size,
            mode,
            seed,
            samples,
            budget_pairs,
            max_witnesses,
            verify_all,
            workers,
            cache_dir,
            resume,
            csv,
        } => {
            let (group, budgets) = group.spec();
            let mode = match mode {
                ModeArg::Exhaustive => SearchMode::Exhaustive,
                ModeArg::Random => SearchMode::Random {
                    seed: *seed,
                    samples: *samples,
                },
            };
            Ok((
                RunConfig {
                    group,
                    budgets,
                    command: CommandConfig::Search {
                        kind: match kind {
                            SearchKindArg::Up => SearchKind::UniqueProducts,
                            SearchKindArg::Diffuse => SearchKind::Diffuse,
                        },
                        arena: match arena {
                            ArenaArg::Full => Arena::Full,
                            ArenaArg::Kernel => Arena::ThetaKernel,
                        },
                        radius: *radius,
                        max_size: *max_size,
                        mode,
                        budget_pairs: *budget_pairs,
                        max_witnesses: *max_witnesses,
                        verify_all: *verify_all,
                        workers: *workers,
                    },
                },
                IoOptions {
                    cache_dir: cache_dir.clone().or(env_cache_dir),
                    resume_path: resume.clone(),
                    csv_path: csv.clone(),
                },
            ))
        }
        Command::Run {
            config,
            cache_dir,
            resume,
            csv,
        } => {
            let text = std::fs::read_to_string(config)?;
            let value: serde_json::Value = serde_json::from_str(&text)
                .map_err(|e| CliError::InvalidArgs(format!("cannot parse config file: {e}")))?;
            // Accept either a bare config or a whole envelope.
            let config_value = value.get("config").cloned().unwrap_or(value);
            let cfg: RunConfig = serde_json::from_value(config_value)
                .map_err(|e| CliError::InvalidArgs(format!("invalid config: {e}")))?;
            Ok((
                cfg,
                IoOptions {
                    cache_dir: cache_dir.clone().or(env_cache_dir),
                    resume_path: resume.clone(),
                    csv_path: csv.clone(),
                },
            ))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (config, io) = match to_config(&cli.command) {
        Ok(pair) => pair,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    match execute(&config, &io) {
        Ok(outcome) => {
            let text = serde_json::to_string_pretty(&outcome.envelope)
                .expect("envelope serialization cannot fail");
            println!("{text}");
            if let Some(out) = &cli.out {
                if let Err(e) = std::fs::write(out, &text) {
                    eprintln!("error: cannot write {}: {e}", out.display());
                    return ExitCode::from(2);
                }
            }
            ExitCode::from(outcome.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
