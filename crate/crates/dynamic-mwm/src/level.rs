//! Per-level maximal matching maintenance.
//!
//! The hierarchy only needs two things from a level matcher: the matching it
//! keeps is maximal over the level's edge set, and every update reports the
//! exact set of matched edges added and removed. The baseline maintainer here
//! is deterministic surrogate search; a randomized maintainer can be slotted
//! in behind the same trait without touching the hierarchy.

use std::collections::BTreeMap;

use crate::graph::{EdgeKey, EdgeRegistry, LevelIndex, VertexId};

/// Matched edges entering and leaving one level matching after one update.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DeltaReport {
    pub added: Vec<EdgeKey>,
    pub removed: Vec<EdgeKey>,
}

impl DeltaReport {
    pub fn is_empty(&self) -> bool {
        self.added.is_empty() && self.removed.is_empty()
    }
}

/// Contract for a maximal-matching maintainer at a single level.
///
/// `insert` is called after the edge has been registered at this level;
/// `delete` is called after it has been unregistered. Both must leave the
/// matching maximal over the registry's current level edge set and report
/// deltas faithfully: `after = (before \ removed) + added`.
pub trait LevelMatcher {
    fn insert(&mut self, u: VertexId, v: VertexId, registry: &EdgeRegistry) -> DeltaReport;
    fn delete(&mut self, u: VertexId, v: VertexId, registry: &EdgeRegistry) -> DeltaReport;
    fn is_empty(&self) -> bool;
    fn mate(&self, v: VertexId) -> Option<VertexId>;
    fn matched_edges(&self) -> Vec<EdgeKey>;
}

/// Deterministic baseline: greedy insert, surrogate search on delete,
/// all tie-breaks by ascending vertex id.
#[derive(Debug, Default)]
pub struct BaselineMatcher {
    level: LevelIndex,
    mate: BTreeMap<VertexId, VertexId>,
}

impl BaselineMatcher {
    pub fn new(level: LevelIndex) -> Self {
        BaselineMatcher {
            level,
            mate: BTreeMap::new(),
        }
    }

    pub fn level(&self) -> LevelIndex {
        self.level
    }

    fn try_match_free(&mut self, x: VertexId, registry: &EdgeRegistry) -> Option<EdgeKey> {
        if self.mate.contains_key(&x) {
            return None;
        }
        let partner = registry
            .neighbors_at(self.level, x)
            .find(|y| !self.mate.contains_key(y))?;
        self.mate.insert(x, partner);
        self.mate.insert(partner, x);
        Some(EdgeKey::new(x, partner))
    }
}

impl LevelMatcher for BaselineMatcher {
    fn insert(&mut self, u: VertexId, v: VertexId, _registry: &EdgeRegistry) -> DeltaReport {
        let mut delta = DeltaReport::default();
        if !self.mate.contains_key(&u) && !self.mate.contains_key(&v) {
            self.mate.insert(u, v);
            self.mate.insert(v, u);
            delta.added.push(EdgeKey::new(u, v));
        }
        delta
    }

    fn delete(&mut self, u: VertexId, v: VertexId, registry: &EdgeRegistry) -> DeltaReport {
        let mut delta = DeltaReport::default();
        if self.mate.get(&u) != Some(&v) {
            return delta;
        }
        self.mate.remove(&u);
        self.mate.remove(&v);
        delta.removed.push(EdgeKey::new(u, v));
        let (a, b) = if u <= v { (u, v) } else { (v, u) };
        for x in [a, b] {
            if let Some(e) = self.try_match_free(x, registry) {
                delta.added.push(e);
            }
        }
        delta
    }

    fn is_empty(&self) -> bool {
        self.mate.is_empty()
    }

    fn mate(&self, v: VertexId) -> Option<VertexId> {
        self.mate.get(&v).copied()
    }

    fn matched_edges(&self) -> Vec<EdgeKey> {
        self.mate
            .iter()
            .filter(|(v, m)| v < m)
            .map(|(v, m)| EdgeKey(*v, *m))
            .collect()
    }
}
