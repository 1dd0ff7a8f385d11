//! Edge registry and level arithmetic.
//!
//! Every live edge is recorded exactly once, keyed by its unordered vertex
//! pair, together with its weight and the geometric level the weight falls
//! in. Per-level adjacency is kept in ascending-id order so surrogate
//! searches are deterministic.

use std::collections::{BTreeMap, BTreeSet};

use crate::config::RoundingConfig;
use crate::error::EngineError;

pub type VertexId = usize;
pub type LevelIndex = i64;

/// Unordered vertex pair; the identity of an edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeKey(pub VertexId, pub VertexId);

impl EdgeKey {
    pub fn new(u: VertexId, v: VertexId) -> Self {
        if u <= v {
            EdgeKey(u, v)
        } else {
            EdgeKey(v, u)
        }
    }

    pub fn other(&self, v: VertexId) -> VertexId {
        if v == self.0 {
            self.1
        } else {
            self.0
        }
    }
}

/// Level of a weight: the unique integer `l` with
/// `alpha^(l+offset) <= w < alpha^(l+offset+1)`.
///
/// A log-based candidate is corrected by direct comparisons against
/// `alpha^(l+offset)` so the half-open interval holds bit-exactly.
pub fn level_of(w: f64, cfg: &RoundingConfig) -> Result<LevelIndex, EngineError> {
    if !(w > 0.0) || !w.is_finite() {
        return Err(EngineError::InvalidWeight(w));
    }
    let alpha = cfg.alpha;
    let offset = cfg.offset();
    let mut l = (w.ln() / alpha.ln() - offset).floor() as LevelIndex;
    while alpha.powf(l as f64 + offset) > w {
        l -= 1;
    }
    while alpha.powf((l + 1) as f64 + offset) <= w {
        l += 1;
    }
    Ok(l)
}

#[derive(Debug, Clone, Copy)]
pub struct EdgeInfo {
    pub weight: f64,
    pub level: LevelIndex,
}

/// The authoritative edge set, partitioned by level.
#[derive(Debug, Default)]
pub struct EdgeRegistry {
    n: usize,
    edges: BTreeMap<EdgeKey, EdgeInfo>,
    /// level -> vertex -> neighbors at that level, ascending.
    adj: BTreeMap<LevelIndex, BTreeMap<VertexId, BTreeSet<VertexId>>>,
}

impl EdgeRegistry {
    pub fn new(n: usize) -> Self {
        EdgeRegistry {
            n,
            edges: BTreeMap::new(),
            adj: BTreeMap::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn contains(&self, u: VertexId, v: VertexId) -> bool {
        self.edges.contains_key(&EdgeKey::new(u, v))
    }

    pub fn get(&self, u: VertexId, v: VertexId) -> Option<&EdgeInfo> {
        self.edges.get(&EdgeKey::new(u, v))
    }

    pub fn check_vertex(&self, v: VertexId) -> Result<(), EngineError> {
        if v >= self.n {
            Err(EngineError::VertexOutOfRange(v, self.n))
        } else {
            Ok(())
        }
    }

    pub fn register_edge(
        &mut self,
        u: VertexId,
        v: VertexId,
        w: f64,
        cfg: &RoundingConfig,
    ) -> Result<LevelIndex, EngineError> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u == v {
            return Err(EngineError::SelfLoop(u));
        }
        let level = level_of(w, cfg)?;
        let key = EdgeKey::new(u, v);
        if self.edges.contains_key(&key) {
            return Err(EngineError::DuplicateEdge(key.0, key.1));
        }
        self.edges.insert(key, EdgeInfo { weight: w, level });
        let level_adj = self.adj.entry(level).or_default();
        level_adj.entry(u).or_default().insert(v);
        level_adj.entry(v).or_default().insert(u);
        Ok(level)
    }

    pub fn unregister_edge(
        &mut self,
        u: VertexId,
        v: VertexId,
    ) -> Result<(f64, LevelIndex), EngineError> {
        let key = EdgeKey::new(u, v);
        let info = self
            .edges
            .remove(&key)
            .ok_or(EngineError::UnknownEdge(key.0, key.1))?;
        let level_adj = self.adj.get_mut(&info.level).expect("level adjacency");
        for (a, b) in [(u, v), (v, u)] {
            let set = level_adj.get_mut(&a).expect("adjacency entry");
            set.remove(&b);
            if set.is_empty() {
                level_adj.remove(&a);
            }
        }
        if level_adj.is_empty() {
            self.adj.remove(&info.level);
        }
        Ok((info.weight, info.level))
    }

    /// Level-`l` neighbors of `v`, ascending. Empty if none.
    pub fn neighbors_at(&self, level: LevelIndex, v: VertexId) -> impl Iterator<Item = VertexId> + '_ {
        self.adj
            .get(&level)
            .and_then(|m| m.get(&v))
            .into_iter()
            .flat_map(|s| s.iter().copied())
    }

    pub fn level_edge_count(&self, level: LevelIndex) -> usize {
        self.adj
            .get(&level)
            .map(|m| m.values().map(|s| s.len()).sum::<usize>() / 2)
            .unwrap_or(0)
    }

    /// Levels with at least one edge, ascending.
    pub fn occupied_levels(&self) -> impl Iterator<Item = LevelIndex> + '_ {
        self.adj.keys().copied()
    }

    pub fn edges(&self) -> impl Iterator<Item = (EdgeKey, EdgeInfo)> + '_ {
        self.edges.iter().map(|(k, i)| (*k, *i))
    }

    /// Edges of one level, ascending by key.
    pub fn edges_at(&self, level: LevelIndex) -> Vec<(EdgeKey, f64)> {
        self.edges
            .iter()
            .filter(|(_, i)| i.level == level)
            .map(|(k, i)| (*k, i.weight))
            .collect()
    }
}
