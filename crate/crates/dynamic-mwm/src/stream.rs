//! Update streams: the text format, and seeded generators for random,
//! sliding-window and adversarial layered workloads.
//!
//! Line grammar: `+ <u> <v> <w>` inserts, `- <u> <v>` deletes, `q` marks a
//! query checkpoint; blank lines and lines starting with `#` are ignored.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::EngineError;
use crate::graph::{EdgeKey, VertexId};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Event {
    Insert { u: VertexId, v: VertexId, w: f64 },
    Delete { u: VertexId, v: VertexId },
    Query,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct UpdateStream {
    pub events: Vec<Event>,
}

impl UpdateStream {
    /// Smallest engine size that fits every vertex mentioned in the stream.
    pub fn min_n(&self) -> usize {
        self.events
            .iter()
            .filter_map(|e| match *e {
                Event::Insert { u, v, .. } | Event::Delete { u, v } => Some(u.max(v) + 1),
                Event::Query => None,
            })
            .max()
            .unwrap_or(0)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for e in &self.events {
            match *e {
                Event::Insert { u, v, w } => out.push_str(&format!("+ {u} {v} {w}\n")),
                Event::Delete { u, v } => out.push_str(&format!("- {u} {v}\n")),
                Event::Query => out.push_str("q\n"),
            }
        }
        out
    }
}

pub fn parse_stream(text: &str) -> Result<UpdateStream, EngineError> {
    let mut events = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let l = raw.trim();
        if l.is_empty() || l.starts_with('#') {
            continue;
        }
        let mut parts = l.split_whitespace();
        let op = parts.next().unwrap();
        let parse_vertex = |tok: Option<&str>, what: &str| -> Result<VertexId, EngineError> {
            tok.ok_or_else(|| EngineError::Parse {
                line,
                msg: format!("missing {what}"),
            })?
            .parse()
            .map_err(|_| EngineError::Parse {
                line,
                msg: format!("invalid {what}"),
            })
        };
        let event = match op {
            "+" => {
                let u = parse_vertex(parts.next(), "vertex u")?;
                let v = parse_vertex(parts.next(), "vertex v")?;
                let w: f64 = parts
                    .next()
                    .ok_or_else(|| EngineError::Parse {
                        line,
                        msg: "missing weight".into(),
                    })?
                    .parse()
                    .map_err(|_| EngineError::Parse {
                        line,
                        msg: "invalid weight".into(),
                    })?;
                Event::Insert { u, v, w }
            }
            "-" => {
                let u = parse_vertex(parts.next(), "vertex u")?;
                let v = parse_vertex(parts.next(), "vertex v")?;
                Event::Delete { u, v }
            }
            "q" => Event::Query,
            other => {
                return Err(EngineError::Parse {
                    line,
                    msg: format!("unknown op '{other}'"),
                })
            }
        };
        if parts.next().is_some() {
            return Err(EngineError::Parse {
                line,
                msg: "trailing tokens".into(),
            });
        }
        events.push(event);
    }
    Ok(UpdateStream { events })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GenKind {
    Random,
    SlidingWindow,
    AdversarialLevels,
}

#[derive(Debug, Clone, Copy)]
pub struct GenParams {
    pub n: usize,
    pub steps: usize,
    pub wmin: f64,
    pub wmax: f64,
    /// Sliding-window lifetime in events.
    pub window: usize,
    /// Adversarial family: level span and alpha of the target config.
    pub depth: usize,
    pub alpha: f64,
}

impl Default for GenParams {
    fn default() -> Self {
        GenParams {
            n: 16,
            steps: 200,
            wmin: 1.0,
            wmax: 100.0,
            window: 50,
            depth: 5,
            alpha: 2.0,
        }
    }
}

pub fn generate_stream(
    kind: GenKind,
    params: &GenParams,
    seed: u64,
) -> Result<UpdateStream, EngineError> {
    if params.n < 2 {
        return Err(EngineError::InvalidConfig("n must be at least 2".into()));
    }
    if !(params.wmin > 0.0 && params.wmax >= params.wmin && params.wmax.is_finite()) {
        return Err(EngineError::InvalidConfig(format!(
            "weight range [{}, {}] invalid",
            params.wmin, params.wmax
        )));
    }
    match kind {
        GenKind::Random => Ok(gen_random(params, seed)),
        GenKind::SlidingWindow => Ok(gen_sliding_window(params, seed)),
        GenKind::AdversarialLevels => gen_adversarial(params),
    }
}

fn random_weight(rng: &mut ChaCha8Rng, params: &GenParams) -> f64 {
    if params.wmin == params.wmax {
        params.wmin
    } else {
        rng.gen_range(params.wmin..=params.wmax)
    }
}

fn random_new_pair(
    rng: &mut ChaCha8Rng,
    n: usize,
    live: &BTreeSet<EdgeKey>,
) -> Option<EdgeKey> {
    for _ in 0..64 {
        let u = rng.gen_range(0..n);
        let v = rng.gen_range(0..n);
        if u == v {
            continue;
        }
        let key = EdgeKey::new(u, v);
        if !live.contains(&key) {
            return Some(key);
        }
    }
    None
}

fn gen_random(params: &GenParams, seed: u64) -> UpdateStream {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut live: BTreeSet<EdgeKey> = BTreeSet::new();
    let mut live_vec: Vec<EdgeKey> = Vec::new();
    let mut events = Vec::with_capacity(params.steps);
    for _ in 0..params.steps {
        let insert = live.is_empty() || rng.gen_bool(0.5);
        let new_pair = if insert {
            random_new_pair(&mut rng, params.n, &live)
        } else {
            None
        };
        if let Some(key) = new_pair {
            let w = random_weight(&mut rng, params);
            live.insert(key);
            live_vec.push(key);
            events.push(Event::Insert {
                u: key.0,
                v: key.1,
                w,
            });
        } else if !live_vec.is_empty() {
            let idx = rng.gen_range(0..live_vec.len());
            let key = live_vec.swap_remove(idx);
            live.remove(&key);
            events.push(Event::Delete { u: key.0, v: key.1 });
        } else {
            events.push(Event::Query);
        }
    }
    UpdateStream { events }
}

fn gen_sliding_window(params: &GenParams, seed: u64) -> UpdateStream {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut live: BTreeSet<EdgeKey> = BTreeSet::new();
    let mut events: Vec<Event> = Vec::with_capacity(params.steps);
    for t in 0..params.steps {
        // an insert issued `window` events ago expires now
        let due = t
            .checked_sub(params.window)
            .and_then(|p| match events.get(p) {
                Some(&Event::Insert { u, v, .. }) => Some(EdgeKey::new(u, v)),
                _ => None,
            });
        if let Some(key) = due {
            live.remove(&key);
            events.push(Event::Delete { u: key.0, v: key.1 });
        } else if let Some(key) = random_new_pair(&mut rng, params.n, &live) {
            let w = random_weight(&mut rng, params);
            live.insert(key);
            events.push(Event::Insert {
                u: key.0,
                v: key.1,
                w,
            });
        } else {
            events.push(Event::Query);
        }
    }
    UpdateStream { events }
}

/// Layered worst-case family: one top-level center edge, two pendant optimal
/// edges hugging the top level's upper boundary, and per lower level two
/// H-edges off the center plus two optimal edges hidden behind them.
fn gen_adversarial(params: &GenParams) -> Result<UpdateStream, EngineError> {
    let alpha = params.alpha;
    if !(alpha > 1.0) || !alpha.is_finite() {
        return Err(EngineError::InvalidConfig(format!(
            "alpha must be > 1, got {alpha}"
        )));
    }
    let d = params.depth as i64;
    let just_under = 1.0 - 1e-9;
    let mut events = Vec::new();
    let mut next_vertex = 4usize;
    let (u, v, p, q) = (0usize, 1usize, 2usize, 3usize);
    events.push(Event::Insert {
        u,
        v,
        w: alpha.powi(d as i32),
    });
    let top = alpha.powi(d as i32 + 1) * just_under;
    events.push(Event::Insert { u, v: p, w: top });
    events.push(Event::Insert { u: v, v: q, w: top });
    for j in (0..d).rev() {
        let wj = alpha.powi(j as i32);
        let starred = alpha.powi(j as i32 + 1) * just_under;
        let x = next_vertex;
        let xp = next_vertex + 1;
        let y = next_vertex + 2;
        let yp = next_vertex + 3;
        next_vertex += 4;
        events.push(Event::Insert { u, v: x, w: wj });
        events.push(Event::Insert { u: v, v: y, w: wj });
        events.push(Event::Insert { u: x, v: xp, w: starred });
        events.push(Event::Insert { u: y, v: yp, w: starred });
    }
    events.push(Event::Query);
    Ok(UpdateStream { events })
}

/// Vertex count used by the adversarial family for a given depth.
pub fn adversarial_n(depth: usize) -> usize {
    4 + 4 * depth
}
