//! Isomorph-free exhaustive generation of (n,r)-arcs.
//!
//! All level-based modes share one engine: level `n` holds one canonical
//! representative per PΓL(3,q)-class of `n`-point sets with no `r+1`
//! collinear points. Level `n+1` is produced by adding every addable point
//! to every representative, canonizing and deduplicating. Work is split by
//! representative and merged by sorting canonical forms, so results do not
//! depend on the number of workers.

mod checkpoint;
mod engine;
mod oracle;
mod orbit_union;
mod prune;
mod report;

use std::path::PathBuf;
use std::time::Duration;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use checkpoint::{Checkpoint, CHECKPOINT_VERSION};
pub use oracle::brute_force_classify;
pub use orbit_union::{orbit_union_search, DEFAULT_MAX_ORBITS};
pub use prune::coverage_bound_allows;
pub use report::{ArcClass, FieldInfo, SearchReport, REPORT_SCHEMA_VERSION};

use crate::group::{Collineation, GroupError};
use crate::plane::{Plane, PointId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SearchMode {
    Classify,
    FindMax,
    FindMin,
    SeededExtend,
    OrbitUnion,
    BruteOracle,
}

impl SearchMode {
    pub fn name(self) -> &'static str {
        match self {
            SearchMode::Classify => "classify",
            SearchMode::FindMax => "find-max",
            SearchMode::FindMin => "find-min",
            SearchMode::SeededExtend => "seeded-extend",
            SearchMode::OrbitUnion => "orbit-union",
            SearchMode::BruteOracle => "brute-oracle",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        [
            SearchMode::Classify,
            SearchMode::FindMax,
            SearchMode::FindMin,
            SearchMode::SeededExtend,
            SearchMode::OrbitUnion,
            SearchMode::BruteOracle,
        ]
        .into_iter()
        .find(|m| m.name() == s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    /// Cap on generated candidate sets (canonizations).
    pub max_nodes: u64,
    pub max_time: Option<Duration>,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_nodes: 50_000_000,
            max_time: None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SearchConfig {
    pub r: u32,
    pub size_min: usize,
    pub size_max: usize,
    pub mode: SearchMode,
    pub budget: Budget,
    pub workers: usize,
    /// Seed point sets for seeded extension.
    pub seeds: Vec<Vec<PointId>>,
    /// Generators for orbit-union search.
    pub generators: Vec<Collineation>,
    pub max_orbits: usize,
    /// Written after every completed level.
    pub checkpoint: Option<PathBuf>,
    /// Resume state, checked against this configuration.
    pub resume: Option<Checkpoint>,
}

impl SearchConfig {
    pub fn new(mode: SearchMode, r: u32, size_max: usize) -> Self {
        SearchConfig {
            r,
            size_min: 0,
            size_max,
            mode,
            budget: Budget::default(),
            workers: 1,
            seeds: Vec::new(),
            generators: Vec::new(),
            max_orbits: DEFAULT_MAX_ORBITS,
            checkpoint: None,
            resume: None,
        }
    }

    pub fn with_min(mut self, size_min: usize) -> Self {
        self.size_min = size_min;
        self
    }

    pub fn with_workers(mut self, workers: usize) -> Self {
        self.workers = workers;
        self
    }

    pub fn with_budget(mut self, budget: Budget) -> Self {
        self.budget = budget;
        self
    }

    pub fn with_seeds(mut self, seeds: Vec<Vec<PointId>>) -> Self {
        self.seeds = seeds;
        self
    }

    pub fn with_generators(mut self, generators: Vec<Collineation>) -> Self {
        self.generators = generators;
        self
    }

    /// Largest possible (n,r)-arc: the lines through one of its points
    /// hold at most `r − 1` further points each.
    pub fn size_limit(q: u32, r: u32) -> usize {
        ((r - 1) * q + r) as usize
    }

    fn validate(&self, plane: &Plane) -> Result<(), SearchError> {
        let limit = Self::size_limit(plane.q(), self.r.max(1));
        if self.r < 2 {
            return Err(SearchError::InvalidConfig("r must be at least 2".into()));
        }
        if self.size_min > self.size_max {
            return Err(SearchError::InvalidConfig(format!(
                "size_min {} exceeds size_max {}",
                self.size_min, self.size_max
            )));
        }
        if self.size_max > limit + 1 {
            return Err(SearchError::InvalidConfig(format!(
                "size_max {} exceeds (r-1)q+r+1 = {}",
                self.size_max,
                limit + 1
            )));
        }
        if self.budget.max_nodes == 0 {
            return Err(SearchError::InvalidConfig("budget must be positive".into()));
        }
        if self.workers == 0 {
            return Err(SearchError::InvalidConfig("workers must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Error)]
pub enum SearchError {
    #[error("budget exceeded after {} nodes; partial report is not exhaustive", .partial.nodes_visited)]
    BudgetExceeded { partial: Box<SearchReport> },
    #[error("seed {index} is not a 2-arc")]
    InvalidSeed { index: usize },
    #[error("{count} point orbits exceed the limit of {limit}")]
    TooManyOrbits { count: usize, limit: usize },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("checkpoint: {0}")]
    Checkpoint(String),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Level-by-level classification of all sets with no `r+1` collinear
/// points in `[size_min, size_max]`.
pub fn classify_arcs(plane: &Plane, config: &SearchConfig) -> Result<SearchReport, SearchError> {
    config.validate(plane)?;
    engine::run_classify(plane, config)
}

/// Classifies upward until a level is empty; `m_r` is certified when the
/// run is exhaustive.
pub fn find_max_complete(plane: &Plane, config: &SearchConfig) -> Result<SearchReport, SearchError> {
    config.validate(plane)?;
    let mut cfg = config.clone();
    cfg.mode = SearchMode::FindMax;
    engine::run_classify(plane, &cfg)
}

/// Smallest complete (n,r)-arc size by iterative deepening on the target
/// size with the coverage bound; reports every class at that size.
pub fn find_min_complete(plane: &Plane, config: &SearchConfig) -> Result<SearchReport, SearchError> {
    config.validate(plane)?;
    engine::run_find_min(plane, config)
}

/// Extends 2-arc seeds to complete (n,r)-arcs in the size window whose
/// largest 2-subarc has the size of one of the seeds.
pub fn seeded_extend(plane: &Plane, config: &SearchConfig) -> Result<SearchReport, SearchError> {
    config.validate(plane)?;
    engine::run_seeded(plane, config)
}

pub(crate) fn thread_pool(workers: usize) -> rayon::ThreadPool {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .expect("thread pool")
}
