//! Stream replay: drives the engine over an update stream, snapshots stats at
//! checkpoints, and optionally audits every checkpoint against the exact
//! oracle and the invariant checker.

use std::fmt::Write as _;

use thiserror::Error;

use crate::config::{Mode, RoundingConfig};
use crate::error::EngineError;
use crate::hierarchy::Engine;
use crate::oracle::{audit_mapping, brute_force_mwm, ratio_report, snapshot_edges, ORACLE_MAX_N};
use crate::rounding::plain_ratio;
use crate::stream::{Event, UpdateStream};

#[derive(Debug, Error)]
#[error("step {step}: {source}")]
pub struct RunError {
    pub step: usize,
    #[source]
    pub source: EngineError,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Tsv,
    Json,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct RunOptions {
    /// Run the full invariant audit at every checkpoint.
    pub verify: bool,
    /// Compare against the exact oracle and run the mapping audit at every
    /// checkpoint (small instances only).
    pub oracle: bool,
    /// Emit a stats row every k update events, in addition to `q` events.
    pub stats_every: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StatRow {
    pub step: usize,
    pub matching_size: usize,
    pub matching_weight: f64,
    pub optimal_weight: Option<f64>,
    pub ratio: Option<f64>,
    pub bound: f64,
    pub max_cascade_depth: usize,
}

#[derive(Debug, Default)]
pub struct RunStats {
    pub rows: Vec<StatRow>,
    pub updates: usize,
    pub max_cascade_depth: usize,
    /// Lightest and heaviest weight inserted over the run.
    pub observed_wmin: Option<f64>,
    pub observed_wmax: Option<f64>,
    pub failures: Vec<String>,
}

impl RunStats {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    /// Observed weight spread `C = wmax/wmin`, when any edge was inserted.
    pub fn observed_c(&self) -> Option<f64> {
        match (self.observed_wmin, self.observed_wmax) {
            (Some(lo), Some(hi)) => Some(hi / lo),
            _ => None,
        }
    }

    pub fn render(&self, format: OutputFormat) -> String {
        let mut out = String::new();
        match format {
            OutputFormat::Tsv => {
                out.push_str(
                    "step\tm_size\tm_weight\topt_weight\tratio\tbound\tmax_cascade_depth\n",
                );
                for r in &self.rows {
                    let opt = r
                        .optimal_weight
                        .map(|v| v.to_string())
                        .unwrap_or_else(|| "NA".into());
                    let ratio = r
                        .ratio
                        .map(|v| v.to_string())
                        .unwrap_or_else(|| "NA".into());
                    writeln!(
                        out,
                        "{}\t{}\t{}\t{}\t{}\t{}\t{}",
                        r.step,
                        r.matching_size,
                        r.matching_weight,
                        opt,
                        ratio,
                        r.bound,
                        r.max_cascade_depth
                    )
                    .unwrap();
                }
            }
            OutputFormat::Json => {
                for r in &self.rows {
                    let opt = r
                        .optimal_weight
                        .map(|v| v.to_string())
                        .unwrap_or_else(|| "null".into());
                    let ratio = r
                        .ratio
                        .map(|v| v.to_string())
                        .unwrap_or_else(|| "null".into());
                    writeln!(
                        out,
                        "{{\"step\":{},\"m_size\":{},\"m_weight\":{},\"opt_weight\":{},\"ratio\":{},\"bound\":{},\"max_cascade_depth\":{}}}",
                        r.step, r.matching_size, r.matching_weight, opt, ratio, r.bound,
                        r.max_cascade_depth
                    )
                    .unwrap();
                }
            }
        }
        out
    }
}

/// Replay `stream` on a fresh engine of `n` vertices.
///
/// Engine errors surface with the 1-based update step that caused them.
/// Failed checks do not abort the run; they are collected in
/// [`RunStats::failures`].
pub fn run(
    stream: &UpdateStream,
    n: usize,
    cfg: RoundingConfig,
    opts: RunOptions,
) -> Result<RunStats, RunError> {
    if opts.oracle && n > ORACLE_MAX_N {
        return Err(RunError {
            step: 0,
            source: EngineError::InvalidConfig(format!(
                "oracle checks limited to n <= {ORACLE_MAX_N}, got n = {n}"
            )),
        });
    }
    let mut engine = Engine::new(n, cfg);
    let mut stats = RunStats::default();
    let bound = match cfg.mode {
        Mode::Plain => plain_ratio(cfg.alpha),
        Mode::Rounded => 2.0 * cfg.alpha / (cfg.alpha - 1.0),
    };

    let checkpoint = |engine: &Engine, stats: &mut RunStats| {
        let (edges, weight) = engine.current_matching();
        let mut row = StatRow {
            step: stats.updates,
            matching_size: edges.len(),
            matching_weight: weight,
            optimal_weight: None,
            ratio: None,
            bound,
            max_cascade_depth: stats.max_cascade_depth,
        };
        if opts.verify {
            if let Err(v) = engine.check_invariants() {
                stats
                    .failures
                    .push(format!("step {}: invariant: {v}", stats.updates));
            }
        }
        if opts.oracle {
            let exact = brute_force_mwm(n, &snapshot_edges(engine)).expect("n pre-checked");
            row.optimal_weight = Some(exact.weight);
            let rep = ratio_report(engine, &exact);
            row.ratio = Some(rep.ratio);
            if !rep.pass {
                stats
                    .failures
                    .push(format!("step {}: ratio: {}", stats.updates, rep.detail));
            }
            let audit = audit_mapping(engine, &exact);
            for v in audit.violations {
                stats
                    .failures
                    .push(format!("step {}: mapping: {v}", stats.updates));
            }
        }
        stats.rows.push(row);
    };

    for event in &stream.events {
        match *event {
            Event::Insert { u, v, w } => {
                stats.updates += 1;
                let summary = engine.insert_edge(u, v, w).map_err(|source| RunError {
                    step: stats.updates,
                    source,
                })?;
                stats.max_cascade_depth = stats.max_cascade_depth.max(summary.cascade_depth);
                stats.observed_wmin = Some(stats.observed_wmin.map_or(w, |x| x.min(w)));
                stats.observed_wmax = Some(stats.observed_wmax.map_or(w, |x| x.max(w)));
                if opts.stats_every.is_some_and(|k| stats.updates % k == 0) {
                    checkpoint(&engine, &mut stats);
                }
            }
            Event::Delete { u, v } => {
                stats.updates += 1;
                let summary = engine.delete_edge(u, v).map_err(|source| RunError {
                    step: stats.updates,
                    source,
                })?;
                stats.max_cascade_depth = stats.max_cascade_depth.max(summary.cascade_depth);
                if opts.stats_every.is_some_and(|k| stats.updates % k == 0) {
                    checkpoint(&engine, &mut stats);
                }
            }
            Event::Query => checkpoint(&engine, &mut stats),
        }
    }
    Ok(stats)
}
