//! The leveled matching hierarchy.
//!
//! `Engine` owns the edge registry, one maximal matching per occupied level,
//! and the output matching `M` over the union graph `H` of all level
//! matchings. The invariant maintained after every update: every H-edge is in
//! `M` or adjacent to an M-edge at a strictly higher level. Eviction of a
//! lower-level M-edge frees its other endpoint, which then cascades downward
//! looking for a new mate; each cascade step strictly lowers the level.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::config::RoundingConfig;
use crate::error::EngineError;
use crate::graph::{EdgeKey, EdgeRegistry, LevelIndex, VertexId};
use crate::level::{BaselineMatcher, DeltaReport, LevelMatcher};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UpdateKind {
    Insert,
    Delete,
}

/// Per-update instrumentation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UpdateSummary {
    pub level: LevelIndex,
    /// |D|: matched edges that left the level matching.
    pub removed: usize,
    /// |A|: matched edges that entered the level matching.
    pub added: usize,
    /// Deepest cascade recursion triggered by this update (0 = none).
    pub cascade_depth: usize,
    /// M-edges evicted in favor of higher-level edges during this update.
    pub evictions: usize,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum InvariantViolation {
    #[error("free/mate bookkeeping broken at vertex {vertex}: {detail}")]
    Bookkeeping { vertex: VertexId, detail: String },
    #[error("matching structure broken: {0}")]
    MatchingStructure(String),
    #[error("neighbor index inconsistent at vertex {vertex}, level {level}: {detail}")]
    NeighborIndex {
        vertex: VertexId,
        level: LevelIndex,
        detail: String,
    },
    #[error("level {level} matching not maximal: edge ({u},{v}) uncovered")]
    LevelMaximality {
        level: LevelIndex,
        u: VertexId,
        v: VertexId,
    },
    #[error("hierarchy invariant violated: H-edge ({u},{v}) at level {level} is outside M with no strictly higher adjacent M-edge")]
    Hierarchy {
        u: VertexId,
        v: VertexId,
        level: LevelIndex,
    },
    #[error("occupied-level index wrong: {0}")]
    OccupiedLevels(String),
}

pub struct Engine {
    cfg: RoundingConfig,
    registry: EdgeRegistry,
    matchers: BTreeMap<LevelIndex, BaselineMatcher>,
    occupied: BTreeSet<LevelIndex>,
    free: Vec<bool>,
    mate: Vec<Option<VertexId>>,
    /// N(v, l): the H-neighbor of v at level l.
    neighbor: Vec<BTreeMap<LevelIndex, VertexId>>,
    /// M with the level of each edge.
    in_m: BTreeMap<EdgeKey, LevelIndex>,
}

impl Engine {
    pub fn new(n: usize, cfg: RoundingConfig) -> Self {
        Engine {
            cfg,
            registry: EdgeRegistry::new(n),
            matchers: BTreeMap::new(),
            occupied: BTreeSet::new(),
            free: vec![true; n],
            mate: vec![None; n],
            neighbor: vec![BTreeMap::new(); n],
            in_m: BTreeMap::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.free.len()
    }

    pub fn config(&self) -> &RoundingConfig {
        &self.cfg
    }

    pub fn registry(&self) -> &EdgeRegistry {
        &self.registry
    }

    pub fn edge_update(
        &mut self,
        u: VertexId,
        v: VertexId,
        w: f64,
        kind: UpdateKind,
    ) -> Result<UpdateSummary, EngineError> {
        match kind {
            UpdateKind::Insert => self.insert_edge(u, v, w),
            UpdateKind::Delete => self.delete_edge(u, v),
        }
    }

    pub fn insert_edge(
        &mut self,
        u: VertexId,
        v: VertexId,
        w: f64,
    ) -> Result<UpdateSummary, EngineError> {
        let level = self.registry.register_edge(u, v, w, &self.cfg)?;
        if self.registry.level_edge_count(level) == 1 {
            self.occupied.insert(level);
        }
        let matcher = self
            .matchers
            .entry(level)
            .or_insert_with(|| BaselineMatcher::new(level));
        let delta = matcher.insert(u, v, &self.registry);
        Ok(self.apply_delta(level, delta))
    }

    pub fn delete_edge(&mut self, u: VertexId, v: VertexId) -> Result<UpdateSummary, EngineError> {
        let (_w, level) = self.registry.unregister_edge(u, v)?;
        let matcher = self.matchers.get_mut(&level).expect("matcher for level");
        let delta = matcher.delete(u, v, &self.registry);
        if self.registry.level_edge_count(level) == 0 {
            debug_assert!(self.matchers[&level].is_empty());
            self.matchers.remove(&level);
            self.occupied.remove(&level);
        }
        Ok(self.apply_delta(level, delta))
    }

    /// Process a level-matching delta against H: removals first, then
    /// additions.
    fn apply_delta(&mut self, level: LevelIndex, delta: DeltaReport) -> UpdateSummary {
        let mut summary = UpdateSummary {
            level,
            removed: delta.removed.len(),
            added: delta.added.len(),
            cascade_depth: 0,
            evictions: 0,
        };
        for e in &delta.removed {
            self.delete_edge_h(e.0, e.1, level, &mut summary);
        }
        for e in &delta.added {
            self.add_edge_h(e.0, e.1, level, &mut summary);
        }
        summary
    }

    fn add_to_matching(&mut self, u: VertexId, v: VertexId, level: LevelIndex) {
        debug_assert!(self.free[u] && self.free[v]);
        self.free[u] = false;
        self.free[v] = false;
        self.mate[u] = Some(v);
        self.mate[v] = Some(u);
        self.in_m.insert(EdgeKey::new(u, v), level);
    }

    fn del_from_matching(&mut self, u: VertexId, v: VertexId) {
        let removed = self.in_m.remove(&EdgeKey::new(u, v));
        debug_assert!(removed.is_some());
        self.free[u] = true;
        self.free[v] = true;
        self.mate[u] = None;
        self.mate[v] = None;
    }

    fn matched_level(&self, v: VertexId) -> LevelIndex {
        let m = self.mate[v].expect("matched vertex");
        self.in_m[&EdgeKey::new(v, m)]
    }

    fn handle_free(&mut self, u: VertexId, lev: LevelIndex, depth: usize, summary: &mut UpdateSummary) {
        summary.cascade_depth = summary.cascade_depth.max(depth);
        let levels: Vec<LevelIndex> = self.occupied.range(..=lev).rev().copied().collect();
        for l in levels {
            // an earlier cascade in the same update may have rematched u;
            // everything at or below its match level is then covered
            if !self.free[u] && self.matched_level(u) >= l {
                return;
            }
            let Some(&v) = self.neighbor[u].get(&l) else {
                continue;
            };
            match (self.free[u], self.free[v]) {
                (true, true) => {
                    self.add_to_matching(u, v, l);
                    return;
                }
                (true, false) => {
                    let v_mate = self.mate[v].expect("non-free vertex has a mate");
                    let mate_level = self.in_m[&EdgeKey::new(v, v_mate)];
                    if mate_level < l {
                        self.del_from_matching(v, v_mate);
                        self.add_to_matching(u, v, l);
                        summary.evictions += 1;
                        self.handle_free(v_mate, mate_level, depth + 1, summary);
                        return;
                    }
                }
                (false, true) => {
                    // (u,v) at l is uncovered: u sits strictly below, v free
                    let u_mate = self.mate[u].expect("non-free vertex has a mate");
                    let u_level = self.in_m[&EdgeKey::new(u, u_mate)];
                    self.del_from_matching(u, u_mate);
                    self.add_to_matching(u, v, l);
                    summary.evictions += 1;
                    self.handle_free(u_mate, u_level, depth + 1, summary);
                    return;
                }
                (false, false) => {
                    let u_mate = self.mate[u].expect("non-free vertex has a mate");
                    let u_level = self.in_m[&EdgeKey::new(u, u_mate)];
                    let v_mate = self.mate[v].expect("non-free vertex has a mate");
                    let v_level = self.in_m[&EdgeKey::new(v, v_mate)];
                    if u_level < l && v_level < l {
                        self.del_from_matching(u, u_mate);
                        self.del_from_matching(v, v_mate);
                        self.add_to_matching(u, v, l);
                        summary.evictions += 2;
                        self.handle_free(u_mate, u_level, depth + 1, summary);
                        self.handle_free(v_mate, v_level, depth + 1, summary);
                        return;
                    }
                }
            }
        }
    }

    /// A new edge entered the level matching at `level`.
    fn add_edge_h(&mut self, u: VertexId, v: VertexId, level: LevelIndex, summary: &mut UpdateSummary) {
        self.neighbor[u].insert(level, v);
        self.neighbor[v].insert(level, u);
        match (self.free[u], self.free[v]) {
            (true, true) => self.add_to_matching(u, v, level),
            (true, false) => self.steal_if_lower(u, v, level, summary),
            (false, true) => self.steal_if_lower(v, u, level, summary),
            (false, false) => {
                let lu = self.matched_level(u);
                let lv = self.matched_level(v);
                if lu < level && lv < level {
                    let u_mate = self.mate[u].unwrap();
                    let v_mate = self.mate[v].unwrap();
                    self.del_from_matching(u, u_mate);
                    self.del_from_matching(v, v_mate);
                    self.add_to_matching(u, v, level);
                    summary.evictions += 2;
                    self.handle_free(u_mate, lu, 1, summary);
                    self.handle_free(v_mate, lv, 1, summary);
                }
            }
        }
    }

    /// `free_v` is free, `matched_v` is matched; evict the matched partner's
    /// edge when it sits strictly below the new edge's level.
    fn steal_if_lower(
        &mut self,
        free_v: VertexId,
        matched_v: VertexId,
        level: LevelIndex,
        summary: &mut UpdateSummary,
    ) {
        let mate_level = self.matched_level(matched_v);
        if mate_level < level {
            let ex = self.mate[matched_v].unwrap();
            self.del_from_matching(matched_v, ex);
            self.add_to_matching(free_v, matched_v, level);
            summary.evictions += 1;
            self.handle_free(ex, mate_level, 1, summary);
        }
    }

    /// An edge left the level matching at `level`.
    fn delete_edge_h(&mut self, u: VertexId, v: VertexId, level: LevelIndex, summary: &mut UpdateSummary) {
        self.neighbor[u].remove(&level);
        self.neighbor[v].remove(&level);
        if self.in_m.remove(&EdgeKey::new(u, v)).is_some() {
            self.free[u] = true;
            self.free[v] = true;
            self.mate[u] = None;
            self.mate[v] = None;
            self.handle_free(u, level, 1, summary);
            self.handle_free(v, level, 1, summary);
        }
    }

    // ------------------------------------------------------------------
    // read-only queries
    // ------------------------------------------------------------------

    pub fn mate_of(&self, v: VertexId) -> Option<VertexId> {
        self.mate[v]
    }

    pub fn matching_size(&self) -> usize {
        self.in_m.len()
    }

    /// Current matching edges (ascending) and their total original weight.
    pub fn current_matching(&self) -> (Vec<EdgeKey>, f64) {
        let edges: Vec<EdgeKey> = self.in_m.keys().copied().collect();
        let weight = edges
            .iter()
            .map(|e| self.registry.get(e.0, e.1).expect("M edge registered").weight)
            .sum();
        (edges, weight)
    }

    pub fn matching_weight(&self) -> f64 {
        self.current_matching().1
    }

    /// Total matching weight under the rounded accounting `alpha^(level+r)`.
    /// In plain mode this equals the level's lower bound weight.
    pub fn rounded_matching_weight(&self) -> f64 {
        self.in_m
            .values()
            .map(|&l| self.cfg.alpha.powf(l as f64 + self.cfg.offset()))
            .sum()
    }

    pub fn occupied_levels(&self) -> Vec<LevelIndex> {
        self.occupied.iter().copied().collect()
    }

    /// All H-edges (the union of the level matchings) with their levels.
    pub fn h_edges(&self) -> Vec<(EdgeKey, LevelIndex)> {
        let mut out = Vec::new();
        for (&l, m) in &self.matchers {
            for e in m.matched_edges() {
                out.push((e, l));
            }
        }
        out
    }

    pub fn level_mate(&self, level: LevelIndex, v: VertexId) -> Option<VertexId> {
        self.matchers.get(&level).and_then(|m| m.mate(v))
    }

    /// Edges of M with their levels.
    pub fn matching_with_levels(&self) -> Vec<(EdgeKey, LevelIndex)> {
        self.in_m.iter().map(|(k, l)| (*k, *l)).collect()
    }

    /// Recompute a combined matching from the level matchings alone: sweep
    /// levels top-down, keep every level-matching edge whose endpoints are
    /// still untouched. Does not modify dynamic state.
    pub fn static_combine(&self) -> Vec<(EdgeKey, LevelIndex)> {
        let mut used = vec![false; self.n()];
        let mut out = Vec::new();
        for (&l, m) in self.matchers.iter().rev() {
            for e in m.matched_edges() {
                if !used[e.0] && !used[e.1] {
                    used[e.0] = true;
                    used[e.1] = true;
                    out.push((e, l));
                }
            }
        }
        out
    }

    /// Exhaustive audit of every structural invariant; first violation wins.
    pub fn check_invariants(&self) -> Result<(), InvariantViolation> {
        self.check_bookkeeping()?;
        self.check_matching_in_h()?;
        self.check_neighbor_index()?;
        self.check_level_maximality()?;
        self.check_hierarchy_invariant()?;
        self.check_occupied_levels()
    }

    fn check_bookkeeping(&self) -> Result<(), InvariantViolation> {
        for v in 0..self.n() {
            match self.mate[v] {
                Some(u) => {
                    if self.free[v] {
                        return Err(InvariantViolation::Bookkeeping {
                            vertex: v,
                            detail: "marked free but has a mate".into(),
                        });
                    }
                    if self.mate[u] != Some(v) {
                        return Err(InvariantViolation::Bookkeeping {
                            vertex: v,
                            detail: format!("mate({v})={u} but mate({u})={:?}", self.mate[u]),
                        });
                    }
                    if !self.in_m.contains_key(&EdgeKey::new(u, v)) {
                        return Err(InvariantViolation::Bookkeeping {
                            vertex: v,
                            detail: format!("mate edge ({u},{v}) missing from M"),
                        });
                    }
                }
                None => {
                    if !self.free[v] {
                        return Err(InvariantViolation::Bookkeeping {
                            vertex: v,
                            detail: "marked matched but has no mate".into(),
                        });
                    }
                }
            }
        }
        for (e, _) in &self.in_m {
            if self.mate[e.0] != Some(e.1) || self.mate[e.1] != Some(e.0) {
                return Err(InvariantViolation::MatchingStructure(format!(
                    "M edge ({},{}) not reflected in mate fields",
                    e.0, e.1
                )));
            }
        }
        Ok(())
    }

    fn check_matching_in_h(&self) -> Result<(), InvariantViolation> {
        for (e, &l) in &self.in_m {
            let ok = self
                .matchers
                .get(&l)
                .map(|m| m.mate(e.0) == Some(e.1))
                .unwrap_or(false);
            if !ok {
                return Err(InvariantViolation::MatchingStructure(format!(
                    "M edge ({},{}) at level {l} is not a level-{l} matching edge",
                    e.0, e.1
                )));
            }
        }
        Ok(())
    }

    fn check_neighbor_index(&self) -> Result<(), InvariantViolation> {
        for v in 0..self.n() {
            for (&l, &u) in &self.neighbor[v] {
                if self.level_mate(l, v) != Some(u) {
                    return Err(InvariantViolation::NeighborIndex {
                        vertex: v,
                        level: l,
                        detail: format!("N({v},{l})={u} but level matching disagrees"),
                    });
                }
            }
        }
        for (&l, m) in &self.matchers {
            for e in m.matched_edges() {
                if self.neighbor[e.0].get(&l) != Some(&e.1)
                    || self.neighbor[e.1].get(&l) != Some(&e.0)
                {
                    return Err(InvariantViolation::NeighborIndex {
                        vertex: e.0,
                        level: l,
                        detail: format!("matched edge ({},{}) missing from N", e.0, e.1),
                    });
                }
                let reg_level = self.registry.get(e.0, e.1).map(|i| i.level);
                if reg_level != Some(l) {
                    return Err(InvariantViolation::NeighborIndex {
                        vertex: e.0,
                        level: l,
                        detail: format!(
                            "matched edge ({},{}) not registered at level {l} (registry: {reg_level:?})",
                            e.0, e.1
                        ),
                    });
                }
            }
        }
        Ok(())
    }

    fn check_level_maximality(&self) -> Result<(), InvariantViolation> {
        for (e, info) in self.registry.edges() {
            let covered = self
                .matchers
                .get(&info.level)
                .map(|m| m.mate(e.0).is_some() || m.mate(e.1).is_some())
                .unwrap_or(false);
            if !covered {
                return Err(InvariantViolation::LevelMaximality {
                    level: info.level,
                    u: e.0,
                    v: e.1,
                });
            }
        }
        Ok(())
    }

    fn check_hierarchy_invariant(&self) -> Result<(), InvariantViolation> {
        for (e, l) in self.h_edges() {
            if self.in_m.contains_key(&e) {
                continue;
            }
            let mut ok = false;
            for x in [e.0, e.1] {
                if !self.free[x] && self.matched_level(x) > l {
                    ok = true;
                    break;
                }
            }
            if !ok {
                return Err(InvariantViolation::Hierarchy {
                    u: e.0,
                    v: e.1,
                    level: l,
                });
            }
        }
        Ok(())
    }

    fn check_occupied_levels(&self) -> Result<(), InvariantViolation> {
        let from_registry: BTreeSet<LevelIndex> = self.registry.occupied_levels().collect();
        if from_registry != self.occupied {
            return Err(InvariantViolation::OccupiedLevels(format!(
                "tracked {:?} vs registry {:?}",
                self.occupied, from_registry
            )));
        }
        let matcher_levels: BTreeSet<LevelIndex> = self.matchers.keys().copied().collect();
        if matcher_levels != self.occupied {
            return Err(InvariantViolation::OccupiedLevels(format!(
                "matcher levels {:?} vs occupied {:?}",
                matcher_levels, self.occupied
            )));
        }
        for (l, m) in &self.matchers {
            if m.is_empty() {
                return Err(InvariantViolation::OccupiedLevels(format!(
                    "occupied level {l} has an empty matching"
                )));
            }
        }
        Ok(())
    }
}
