//! Fully dynamic approximate maximum weight matching.
//!
//! Edges are partitioned into geometric weight levels. A maximal matching is
//! maintained per level, and the union graph of those matchings is combined
//! into one output matching whose weight is within a provable constant factor
//! of the maximum weight matching. A randomized geometric-rounding mode
//! improves the expected factor.
//!
//! The crate ships the engine itself ([`hierarchy::Engine`]), an exact
//! small-instance oracle for verification ([`oracle`]), the closed-form ratio
//! functions ([`rounding`]), and a stream-replay harness ([`stream`],
//! [`runner`]) behind the `dmwm` binary.

pub mod config;
pub mod error;
pub mod graph;
pub mod hierarchy;
pub mod level;
pub mod oracle;
pub mod rounding;
pub mod runner;
pub mod stream;

pub use config::{Mode, RoundingConfig};
pub use error::EngineError;
pub use graph::{level_of, EdgeKey, EdgeRegistry, LevelIndex, VertexId};
pub use hierarchy::{Engine, UpdateKind, UpdateSummary};
pub use level::{DeltaReport, LevelMatcher};
