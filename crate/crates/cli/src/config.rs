//! Run configuration: the validated, serializable description of one command
//! invocation. Every envelope echoes its config, and feeding a config back
//! reproduces the payload exactly.

use serde::{Deserialize, Serialize};

use branchlab_core::search::{Arena, SearchKind, SearchMode};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct GroupSpec {
    pub p: u32,
    pub e: Vec<u32>,
    /// Reject non-compliant family vectors at construction.
    #[serde(default)]
    pub theorem_compliant_mode: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Budgets {
    pub state_cap: usize,
    pub degree_cap: u64,
    /// Memory cap on distinct ball elements.
    #[serde(default = "default_ball_cap")]
    pub ball_cap: usize,
}

fn default_ball_cap() -> usize {
    1_000_000
}

impl Default for Budgets {
    fn default() -> Self {
        Budgets {
            state_cap: 100_000,
            degree_cap: 3125,
            ball_cap: default_ball_cap(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "query", rename_all = "camelCase")]
pub enum ElementQuery {
    Act { vertex: String },
    Order { bound: u64 },
    Equal { other: String },
    Portrait { depth: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "camelCase")]
pub enum CommandConfig {
    GroupInfo,
    Element {
        word: String,
        #[serde(flatten)]
        query: ElementQuery,
    },
    Quotients {
        max_level: usize,
        #[serde(default)]
        oracle_check: bool,
    },
    Search {
        kind: SearchKind,
        arena: Arena,
        radius: usize,
        max_size: usize,
        #[serde(flatten)]
        mode: SearchMode,
        #[serde(skip_serializing_if = "Option::is_none")]
        #[serde(default)]
        budget_pairs: Option<u64>,
        max_witnesses: usize,
        #[serde(default)]
        verify_all: bool,
        #[serde(skip_serializing_if = "Option::is_none")]
        #[serde(default)]
        workers: Option<usize>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct RunConfig {
    pub group: GroupSpec,
    #[serde(default)]
    pub budgets: Budgets,
    #[serde(flatten)]
    pub command: CommandConfig,
}
