//! Exact small-instance verification: a bitmask-DP maximum-weight-matching
//! oracle, a ratio check of the engine's matching against it, and the
//! charging-argument audit that certifies the weight bound edge by edge.

use std::collections::BTreeMap;

use crate::config::Mode;
use crate::error::EngineError;
use crate::graph::{EdgeKey, LevelIndex};
use crate::hierarchy::Engine;
use crate::rounding::{plain_ratio, rounded_weight};

/// Hard cap for the bitmask DP (memory is 8 bytes per vertex subset).
pub const ORACLE_MAX_N: usize = 24;

#[derive(Debug, Clone, PartialEq)]
pub struct ExactMwmResult {
    pub weight: f64,
    /// Optimal matching edges with their weights, ascending by key.
    pub matching: Vec<(EdgeKey, f64)>,
}

/// Exact maximum weight matching by DP over vertex subsets.
///
/// Ties are broken toward the matching that, at each step, pairs the lowest
/// free vertex with its lowest optimal partner, which yields the
/// lexicographically smallest edge set.
pub fn brute_force_mwm(n: usize, edges: &[(EdgeKey, f64)]) -> Result<ExactMwmResult, EngineError> {
    if n > ORACLE_MAX_N {
        return Err(EngineError::InstanceTooLarge(n, ORACLE_MAX_N));
    }
    let mut w = vec![0.0f64; n * n];
    for &(e, wt) in edges {
        debug_assert!(wt > 0.0);
        w[e.0 * n + e.1] = wt;
        w[e.1 * n + e.0] = wt;
    }
    let size = 1usize << n;
    let mut dp = vec![0.0f64; size];
    for mask in 1..size {
        let v = mask.trailing_zeros() as usize;
        let rest = mask & (mask - 1);
        let mut best = dp[rest];
        let mut others = rest;
        while others != 0 {
            let u = others.trailing_zeros() as usize;
            others &= others - 1;
            let wt = w[v * n + u];
            if wt > 0.0 {
                let cand = wt + dp[rest & !(1 << u)];
                if cand > best {
                    best = cand;
                }
            }
        }
        dp[mask] = best;
    }
    // reconstruction: match the lowest vertex with its lowest optimal partner
    let mut matching = Vec::new();
    let mut mask = size - 1;
    while mask != 0 {
        let v = mask.trailing_zeros() as usize;
        let rest = mask & (mask - 1);
        let mut chosen = None;
        let mut others = rest;
        while others != 0 {
            let u = others.trailing_zeros() as usize;
            others &= others - 1;
            let wt = w[v * n + u];
            if wt > 0.0 && wt + dp[rest & !(1 << u)] == dp[mask] {
                chosen = Some((u, wt));
                break;
            }
        }
        match chosen {
            Some((u, wt)) => {
                matching.push((EdgeKey::new(v, u), wt));
                mask = rest & !(1 << u);
            }
            None => mask = rest,
        }
    }
    matching.sort_by_key(|&(e, _)| e);
    Ok(ExactMwmResult {
        weight: dp[size - 1],
        matching,
    })
}

/// Independent double-oracle: enumerate every matching. Intended for n <= 8.
pub fn enumerate_mwm(n: usize, edges: &[(EdgeKey, f64)]) -> ExactMwmResult {
    fn go(
        edges: &[(EdgeKey, f64)],
        idx: usize,
        used: u64,
        weight: f64,
        best: &mut f64,
    ) {
        if weight > *best {
            *best = weight;
        }
        for i in idx..edges.len() {
            let (e, wt) = edges[i];
            let bits = (1u64 << e.0) | (1u64 << e.1);
            if used & bits == 0 {
                go(edges, i + 1, used | bits, weight + wt, best);
            }
        }
    }
    assert!(n <= 64);
    let mut best = 0.0;
    go(edges, 0, 0, 0.0, &mut best);
    ExactMwmResult {
        weight: best,
        matching: Vec::new(),
    }
}

pub fn snapshot_edges(engine: &Engine) -> Vec<(EdgeKey, f64)> {
    engine
        .registry()
        .edges()
        .map(|(k, info)| (k, info.weight))
        .collect()
}

#[derive(Debug, Clone)]
pub struct RatioReport {
    /// w(M*)/w(M) under the mode's weight accounting.
    pub ratio: f64,
    pub bound: f64,
    pub pass: bool,
    pub detail: String,
}

/// Core comparison: optimal value vs engine value against a bound, with a
/// small absolute slack for float rounding.
pub fn check_ratio(engine_value: f64, optimal_value: f64, bound: f64) -> RatioReport {
    const SLACK: f64 = 1e-9;
    if optimal_value <= 0.0 {
        return RatioReport {
            ratio: 1.0,
            bound,
            pass: true,
            detail: "empty instance".into(),
        };
    }
    if engine_value <= 0.0 {
        return RatioReport {
            ratio: f64::INFINITY,
            bound,
            pass: false,
            detail: format!("matching weight 0 against optimum {optimal_value}"),
        };
    }
    let ratio = optimal_value / engine_value;
    let pass = ratio <= bound + SLACK;
    RatioReport {
        ratio,
        bound,
        pass,
        detail: if pass {
            String::new()
        } else {
            format!("ratio {ratio} exceeds bound {bound}")
        },
    }
}

/// Compare the engine's matching to the exact optimum.
///
/// Plain mode checks `w(M*)/w(M) <= 2a/(a-1) + 2a`. Rounded mode checks the
/// per-offset bound `sum_{M} w_r >= (a-1)/(2a) * sum_{M*} w_r(e*)`, with the
/// optimum computed under original weights and re-accounted at rounded
/// weights.
pub fn ratio_report(engine: &Engine, oracle: &ExactMwmResult) -> RatioReport {
    let cfg = engine.config();
    match cfg.mode {
        Mode::Plain => check_ratio(engine.matching_weight(), oracle.weight, plain_ratio(cfg.alpha)),
        Mode::Rounded => {
            let opt_rounded: f64 = oracle
                .matching
                .iter()
                .map(|&(_, w)| rounded_weight(w, cfg).expect("rounded mode"))
                .sum();
            let bound = 2.0 * cfg.alpha / (cfg.alpha - 1.0);
            check_ratio(engine.rounded_matching_weight(), opt_rounded, bound)
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct AuditReport {
    /// M*-edges mapped, by charge target.
    pub mapped: usize,
    pub direct: usize,
    pub indirect: usize,
    pub violations: Vec<String>,
}

impl AuditReport {
    pub fn pass(&self) -> bool {
        self.violations.is_empty()
    }
}

#[derive(Default)]
struct Charges {
    direct: Vec<(EdgeKey, f64, LevelIndex)>,
    indirect: Vec<(EdgeKey, f64, LevelIndex)>,
}

/// Build the charging map from the optimal matching onto M and verify the
/// counting and weight claims it rests on: at most two direct charges per
/// M-edge, at most two indirect charges per strictly lower level, direct
/// weight below `2a w(e)` and indirect weight below `2a w(e)/(a-1)`.
pub fn audit_mapping(engine: &Engine, oracle: &ExactMwmResult) -> AuditReport {
    let cfg = engine.config();
    let alpha = cfg.alpha;
    let mut report = AuditReport::default();
    let m: BTreeMap<EdgeKey, LevelIndex> = engine.matching_with_levels().into_iter().collect();
    let h: BTreeMap<EdgeKey, LevelIndex> = engine.h_edges().into_iter().collect();
    let mut charges: BTreeMap<EdgeKey, Charges> = BTreeMap::new();

    // adjacent M-edges strictly above `level`, best first: (level desc, key asc)
    let higher_adjacent = |e: EdgeKey, level: LevelIndex| -> Vec<(EdgeKey, LevelIndex)> {
        let mut out = Vec::new();
        for x in [e.0, e.1] {
            if let Some(mx) = engine.mate_of(x) {
                let key = EdgeKey::new(x, mx);
                let lm = m[&key];
                if lm > level {
                    out.push((key, lm));
                }
            }
        }
        out.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
        out.dedup();
        out
    };

    for &(estar, weight) in &oracle.matching {
        let level = engine
            .registry()
            .get(estar.0, estar.1)
            .expect("optimal edge is registered")
            .level;
        let target: Option<EdgeKey> = if m.contains_key(&estar) {
            Some(estar) // type 1
        } else if h.contains_key(&estar) {
            // type 2: the invariant promises a strictly higher adjacent M-edge
            higher_adjacent(estar, level).first().map(|&(k, _)| k)
        } else {
            // the level matching must cover an endpoint of estar
            let mut covering: Vec<EdgeKey> = [estar.0, estar.1]
                .iter()
                .filter_map(|&x| engine.level_mate(level, x).map(|y| EdgeKey::new(x, y)))
                .collect();
            covering.sort();
            covering.dedup();
            if covering.is_empty() {
                report.violations.push(format!(
                    "optimal edge ({},{}) at level {level} uncovered by its level matching",
                    estar.0, estar.1
                ));
                continue;
            }
            // type 3 if a covering edge is itself in M
            if let Some(&e) = covering.iter().find(|e| m.contains_key(e)) {
                Some(e)
            } else {
                // type 4: charge through the covering H-edge to its higher M-edge
                let mut indirect: Vec<(EdgeKey, LevelIndex)> = covering
                    .iter()
                    .flat_map(|&e| higher_adjacent(e, level))
                    .collect();
                indirect.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
                indirect.first().map(|&(k, _)| k)
            }
        };

        match target {
            Some(t) => {
                report.mapped += 1;
                let entry = charges.entry(t).or_default();
                let adjacent =
                    t == estar || [t.0, t.1].iter().any(|&x| x == estar.0 || x == estar.1);
                if adjacent {
                    entry.direct.push((estar, weight, level));
                } else {
                    entry.indirect.push((estar, weight, level));
                }
            }
            None => report.violations.push(format!(
                "optimal edge ({},{}) at level {level} has no charge target",
                estar.0, estar.1
            )),
        }
    }

    for (e, ch) in &charges {
        let level = m[e];
        let w = engine.registry().get(e.0, e.1).expect("M edge").weight;
        report.direct += ch.direct.len();
        report.indirect += ch.indirect.len();
        if ch.direct.len() > 2 {
            report.violations.push(format!(
                "M-edge ({},{}) carries {} direct charges",
                e.0,
                e.1,
                ch.direct.len()
            ));
        }
        let direct_sum: f64 = ch.direct.iter().map(|&(_, w, _)| w).sum();
        if direct_sum >= 2.0 * alpha * w + 1e-9 {
            report.violations.push(format!(
                "M-edge ({},{}) direct weight {direct_sum} >= 2a*w = {}",
                e.0,
                e.1,
                2.0 * alpha * w
            ));
        }
        let mut per_level: BTreeMap<LevelIndex, usize> = BTreeMap::new();
        for &(_, _, l) in &ch.indirect {
            *per_level.entry(l).or_default() += 1;
            if l >= level {
                report.violations.push(format!(
                    "indirect charge at level {l} not below M-edge level {level}"
                ));
            }
        }
        if let Some((l, &c)) = per_level.iter().find(|&(_, &c)| c > 2) {
            report.violations.push(format!(
                "M-edge ({},{}) carries {c} indirect charges from level {l}",
                e.0, e.1
            ));
        }
        let indirect_sum: f64 = ch.indirect.iter().map(|&(_, w, _)| w).sum();
        if indirect_sum >= 2.0 * alpha * w / (alpha - 1.0) + 1e-9 {
            report.violations.push(format!(
                "M-edge ({},{}) indirect weight {indirect_sum} >= 2a*w/(a-1) = {}",
                e.0,
                e.1,
                2.0 * alpha * w / (alpha - 1.0)
            ));
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::RoundingConfig;

    fn key(u: usize, v: usize) -> EdgeKey {
        EdgeKey::new(u, v)
    }

    #[test]
    fn triangle_takes_heaviest_edge() {
        let edges = vec![(key(0, 1), 3.0), (key(1, 2), 4.0), (key(0, 2), 5.0)];
        let res = brute_force_mwm(3, &edges).unwrap();
        assert_eq!(res.weight, 5.0);
        assert_eq!(res.matching, vec![(key(0, 2), 5.0)]);
    }

    #[test]
    fn path_example() {
        let edges = vec![(key(1, 2), 2.0), (key(2, 3), 5.0), (key(3, 4), 2.0)];
        let res = brute_force_mwm(5, &edges).unwrap();
        assert_eq!(res.weight, 5.0);
        assert_eq!(res.matching, vec![(key(2, 3), 5.0)]);
    }

    #[test]
    fn empty_graph() {
        let res = brute_force_mwm(4, &[]).unwrap();
        assert_eq!(res.weight, 0.0);
        assert!(res.matching.is_empty());
    }

    #[test]
    fn too_large_is_rejected() {
        assert!(matches!(
            brute_force_mwm(25, &[]),
            Err(EngineError::InstanceTooLarge(25, 24))
        ));
    }

    #[test]
    fn lexicographic_tie_break() {
        // two optimal matchings of weight 2: {(0,1),(2,3)} and {(0,3),(1,2)}
        let edges = vec![
            (key(0, 1), 1.0),
            (key(1, 2), 1.0),
            (key(2, 3), 1.0),
            (key(0, 3), 1.0),
        ];
        let res = brute_force_mwm(4, &edges).unwrap();
        assert_eq!(res.weight, 2.0);
        assert_eq!(
            res.matching.iter().map(|&(e, _)| e).collect::<Vec<_>>(),
            vec![key(0, 1), key(2, 3)]
        );
    }

    #[test]
    fn matches_enumeration_oracle() {
        use rand::{Rng, SeedableRng};
        use rand_chacha::ChaCha8Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..100 {
            let n = rng.gen_range(2..=8);
            let mut edges = Vec::new();
            for u in 0..n {
                for v in (u + 1)..n {
                    if rng.gen_bool(0.4) {
                        edges.push((key(u, v), rng.gen_range(1.0..100.0)));
                    }
                }
            }
            let dp = brute_force_mwm(n, &edges).unwrap();
            let enumerated = enumerate_mwm(n, &edges);
            assert!((dp.weight - enumerated.weight).abs() < 1e-9);
            let check: f64 = dp.matching.iter().map(|&(_, w)| w).sum();
            assert!((check - dp.weight).abs() < 1e-9);
        }
    }

    #[test]
    fn ratio_report_single_edge() {
        let cfg = RoundingConfig::plain(2.0).unwrap();
        let mut engine = Engine::new(4, cfg);
        engine.insert_edge(0, 1, 7.0).unwrap();
        let oracle = brute_force_mwm(4, &snapshot_edges(&engine)).unwrap();
        let rep = ratio_report(&engine, &oracle);
        assert!(rep.pass);
        assert_eq!(rep.ratio, 1.0);
        assert_eq!(rep.bound, 8.0);
    }

    #[test]
    fn broken_matching_fails_with_witness() {
        let rep = check_ratio(1.0, 100.0, 8.0);
        assert!(!rep.pass);
        assert!(rep.ratio > 8.0);
        assert!(rep.detail.contains("exceeds bound"));
        let rep = check_ratio(0.0, 5.0, 8.0);
        assert!(!rep.pass);
        assert!(rep.detail.contains("matching weight 0"));
    }

    #[test]
    fn audit_single_edge_identity() {
        let cfg = RoundingConfig::plain(2.0).unwrap();
        let mut engine = Engine::new(4, cfg);
        engine.insert_edge(0, 1, 7.0).unwrap();
        let oracle = brute_force_mwm(4, &snapshot_edges(&engine)).unwrap();
        let rep = audit_mapping(&engine, &oracle);
        assert!(rep.pass(), "{:?}", rep.violations);
        assert_eq!(rep.mapped, 1);
        assert_eq!(rep.direct, 1);
        assert_eq!(rep.indirect, 0);
    }
}
