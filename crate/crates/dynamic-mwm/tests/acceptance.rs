//! Acceptance suite. One test per criterion; each prints a single
//! `criterion N (...): PASS|FAIL` line.
//!
//! Criteria 1-3 and part of 8 share one batch of 1,000 seeded random streams
//! (n <= 12, 200 updates, weights in [1,100], alpha = 2, plain mode) with the
//! oracle, the mapping audit, and the invariant audit run after every update.

use std::sync::OnceLock;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use dynamic_mwm::oracle::{audit_mapping, brute_force_mwm, enumerate_mwm, snapshot_edges};
use dynamic_mwm::rounding::{
    expected_rounding_factor, optimize_rounded_ratio, plain_ratio, rounded_weight,
};
use dynamic_mwm::runner::{run, RunOptions};
use dynamic_mwm::stream::{generate_stream, Event, GenKind, GenParams};
use dynamic_mwm::{EdgeKey, Engine, RoundingConfig};

const SLACK: f64 = 1e-9;

fn verdict(criterion: &str, ok: bool) {
    println!("criterion {criterion}: {}", if ok { "PASS" } else { "FAIL" });
}

struct Batch {
    ratio_failures: Vec<String>,
    invariant_failures: Vec<String>,
    mapping_failures: Vec<String>,
    /// (max cascade depth, observed C) per stream.
    runs: Vec<(usize, Option<f64>)>,
    checkpoints: usize,
}

fn batch() -> &'static Batch {
    static BATCH: OnceLock<Batch> = OnceLock::new();
    BATCH.get_or_init(|| {
        let cfg = RoundingConfig::plain(2.0).unwrap();
        let opts = RunOptions {
            verify: true,
            oracle: true,
            stats_every: Some(1),
        };
        let mut out = Batch {
            ratio_failures: Vec::new(),
            invariant_failures: Vec::new(),
            mapping_failures: Vec::new(),
            runs: Vec::new(),
            checkpoints: 0,
        };
        for seed in 0..1000u64 {
            let n = 4 + (seed % 9) as usize; // 4..=12
            let params = GenParams {
                n,
                steps: 200,
                wmin: 1.0,
                wmax: 100.0,
                ..Default::default()
            };
            let stream = generate_stream(GenKind::Random, &params, seed).unwrap();
            let stats = run(&stream, n, cfg, opts).unwrap();
            out.checkpoints += stats.rows.len();
            out.runs.push((stats.max_cascade_depth, stats.observed_c()));
            for f in stats.failures {
                let tagged = format!("seed {seed}: {f}");
                if f.contains(": ratio:") {
                    out.ratio_failures.push(tagged);
                } else if f.contains(": invariant:") {
                    out.invariant_failures.push(tagged);
                } else {
                    out.mapping_failures.push(tagged);
                }
            }
        }
        out
    })
}

fn depth_within_bound(depth: usize, c: Option<f64>, alpha: f64) -> bool {
    let c = match c {
        Some(c) => c,
        None => return depth == 0,
    };
    depth as f64 <= (c.ln() / alpha.ln()).floor() + 2.0
}

#[test]
fn criterion_1_approximation_bound() {
    let b = batch();
    let ok = b.ratio_failures.is_empty() && b.checkpoints == 200_000;
    verdict("1 (8-MWM bound)", ok);
    assert!(
        ok,
        "{} checkpoints, violations: {:?}",
        b.checkpoints,
        &b.ratio_failures[..b.ratio_failures.len().min(5)]
    );
}

#[test]
fn criterion_2_invariant_suite() {
    let b = batch();
    let small_ok = b.invariant_failures.is_empty();

    let params = GenParams {
        n: 200,
        steps: 10_000,
        wmin: 1.0,
        wmax: 100.0,
        ..Default::default()
    };
    let stream = generate_stream(GenKind::Random, &params, 12345).unwrap();
    let cfg = RoundingConfig::plain(2.0).unwrap();
    let opts = RunOptions {
        verify: true,
        oracle: false,
        stats_every: Some(1),
    };
    let stats = run(&stream, 200, cfg, opts).unwrap();
    let large_ok = stats.passed()
        && depth_within_bound(stats.max_cascade_depth, stats.observed_c(), 2.0);

    let ok = small_ok && large_ok;
    verdict("2 (invariant suite)", ok);
    assert!(
        ok,
        "small-stream violations: {:?}, large-stream violations: {:?}",
        &b.invariant_failures[..b.invariant_failures.len().min(5)],
        &stats.failures[..stats.failures.len().min(5)]
    );
}

#[test]
fn criterion_3_mapping_audit() {
    let b = batch();
    let ok = b.mapping_failures.is_empty();
    verdict("3 (mapping audit)", ok);
    assert!(
        ok,
        "violations: {:?}",
        &b.mapping_failures[..b.mapping_failures.len().min(5)]
    );
}

#[test]
fn criterion_4_closed_forms() {
    let exact = plain_ratio(2.0) == 8.0;
    let (alpha, ratio) = optimize_rounded_ratio();
    let ok = exact && (alpha - 3.512).abs() <= 0.01 && (ratio - 4.9108).abs() <= 0.001;
    verdict("4 (closed forms)", ok);
    assert!(ok, "plain_ratio(2)={}, alpha*={alpha}, ratio*={ratio}", plain_ratio(2.0));
}

#[test]
fn criterion_5_rounding_lemma() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let weights: Vec<f64> = (0..10_000).map(|_| rng.gen_range(0.01..1000.0)).collect();
    let mut ok = true;
    for alpha in [2.0, 3.512] {
        let expected = expected_rounding_factor(alpha).unwrap();
        let mut per_r = Vec::with_capacity(1000);
        for _ in 0..1000 {
            let r = 1.0 - rng.gen::<f64>();
            let cfg = RoundingConfig::rounded(alpha, Some(r), 0).unwrap();
            let mut sum = 0.0;
            for &w in &weights {
                let wr = rounded_weight(w, &cfg).unwrap();
                if wr > w + SLACK {
                    ok = false;
                }
                sum += wr / w;
            }
            per_r.push(sum / weights.len() as f64);
        }
        let mean = per_r.iter().sum::<f64>() / per_r.len() as f64;
        let var = per_r.iter().map(|x| (x - mean).powi(2)).sum::<f64>()
            / (per_r.len() - 1) as f64;
        let se = (var / per_r.len() as f64).sqrt();
        if (mean - expected).abs() > 3.0 * se {
            ok = false;
        }
    }
    verdict("5 (rounding lemma)", ok);
    assert!(ok);
}

// Replays `stream` once per offset r; at every reachable state checks the
// maintained matching against the optimum of the original weights, both
// measured in rounded weights.
#[test]
fn criterion_6_per_r_bound() {
    let alpha = 3.512;
    let floor = (alpha - 1.0) / (2.0 * alpha);
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut ok = true;
    for seed in 0..100u64 {
        let n = 4 + (seed % 7) as usize; // 4..=10
        let params = GenParams {
            n,
            steps: 100,
            wmin: 1.0,
            wmax: 100.0,
            ..Default::default()
        };
        let stream = generate_stream(GenKind::Random, &params, 60_000 + seed).unwrap();

        // the optimum per state depends only on the stream, not on r
        let mut optima: Vec<Vec<(EdgeKey, f64)>> = Vec::with_capacity(stream.events.len());
        {
            let mut engine = Engine::new(n, RoundingConfig::plain(alpha).unwrap());
            for event in &stream.events {
                apply(&mut engine, event);
                optima.push(brute_force_mwm(n, &snapshot_edges(&engine)).unwrap().matching);
            }
        }

        for _ in 0..20 {
            let r = 1.0 - rng.gen::<f64>();
            let cfg = RoundingConfig::rounded(alpha, Some(r), 0).unwrap();
            let mut engine = Engine::new(n, cfg);
            for (event, optimum) in stream.events.iter().zip(&optima) {
                apply(&mut engine, event);
                let mine = engine.rounded_matching_weight();
                let best: f64 = optimum
                    .iter()
                    .map(|&(_, w)| rounded_weight(w, &cfg).unwrap())
                    .sum();
                if mine + SLACK < floor * best {
                    ok = false;
                }
            }
        }
    }
    verdict("6 (per-r rounded bound)", ok);
    assert!(ok);
}

#[test]
fn criterion_7_expected_bound() {
    let alpha: f64 = 3.512;
    let floor = (alpha - 1.0).powi(2) / (2.0 * alpha * alpha * alpha.ln());
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut ok = true;
    for seed in 0..50u64 {
        let n = 6 + (seed % 5) as usize; // 6..=10
        let params = GenParams {
            n,
            steps: 100,
            wmin: 1.0,
            wmax: 100.0,
            ..Default::default()
        };
        let stream = generate_stream(GenKind::Random, &params, 70_000 + seed).unwrap();

        let optimal = {
            let mut engine = Engine::new(n, RoundingConfig::plain(alpha).unwrap());
            for event in &stream.events {
                apply(&mut engine, event);
            }
            brute_force_mwm(n, &snapshot_edges(&engine)).unwrap().weight
        };
        if optimal == 0.0 {
            continue;
        }

        let samples: Vec<f64> = (0..200)
            .map(|_| {
                let r = 1.0 - rng.gen::<f64>();
                let cfg = RoundingConfig::rounded(alpha, Some(r), 0).unwrap();
                let mut engine = Engine::new(n, cfg);
                for event in &stream.events {
                    apply(&mut engine, event);
                }
                engine.matching_weight()
            })
            .collect();
        let mean = samples.iter().sum::<f64>() / samples.len() as f64;
        let var = samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>()
            / (samples.len() - 1) as f64;
        let se = (var / samples.len() as f64).sqrt();
        if mean < floor * optimal - 3.0 * se {
            ok = false;
        }
    }
    verdict("7 (expected rounded bound)", ok);
    assert!(ok);
}

#[test]
fn criterion_8_cascade_depth() {
    let b = batch();
    let mut ok = true;
    for &(depth, c) in &b.runs {
        if !depth_within_bound(depth, c, 2.0) {
            ok = false;
        }
    }
    // layered worst-case family, widest level span exercised here
    for depth in [3usize, 5, 8] {
        let params = GenParams {
            depth,
            alpha: 2.0,
            ..Default::default()
        };
        let stream = generate_stream(GenKind::AdversarialLevels, &params, 0).unwrap();
        let n = stream.min_n();
        let cfg = RoundingConfig::plain(2.0).unwrap();
        let opts = RunOptions {
            verify: true,
            oracle: n <= 24,
            stats_every: Some(1),
        };
        let stats = run(&stream, n, cfg, opts).unwrap();
        if !stats.passed() || !depth_within_bound(stats.max_cascade_depth, stats.observed_c(), 2.0)
        {
            ok = false;
        }
    }
    verdict("8 (cascade depth)", ok);
    assert!(ok);
}

#[test]
fn criterion_9_throughput() {
    let params = GenParams {
        n: 100_000,
        steps: 1_000_000,
        wmin: 1.0,
        wmax: 1_000_000.0,
        ..Default::default()
    };
    let stream = generate_stream(GenKind::Random, &params, 9).unwrap();
    let cfg = RoundingConfig::plain(2.0).unwrap();
    let opts = RunOptions {
        verify: true,
        oracle: false,
        stats_every: Some(1000),
    };
    let start = Instant::now();
    let stats = run(&stream, 100_000, cfg, opts).unwrap();
    let elapsed = start.elapsed();
    let ok = stats.passed()
        && stats.updates == 1_000_000
        && elapsed.as_secs_f64() < 120.0
        && stats.observed_c().is_some_and(|c| c <= 1e6)
        && depth_within_bound(stats.max_cascade_depth, stats.observed_c(), 2.0);
    verdict("9 (throughput)", ok);
    assert!(
        ok,
        "elapsed {:.1}s, updates {}, failures {:?}",
        elapsed.as_secs_f64(),
        stats.updates,
        &stats.failures[..stats.failures.len().min(5)]
    );
}

#[test]
fn criterion_10_oracle_self_check() {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut ok = true;
    for _ in 0..500 {
        let n = rng.gen_range(2..=8);
        let mut edges = Vec::new();
        for u in 0..n {
            for v in (u + 1)..n {
                if rng.gen_bool(0.5) {
                    edges.push((EdgeKey(u, v), rng.gen_range(1.0..100.0)));
                }
            }
        }
        let dp = brute_force_mwm(n, &edges).unwrap();
        let full = enumerate_mwm(n, &edges);
        if (dp.weight - full.weight).abs() > SLACK {
            ok = false;
        }
        let recon: f64 = dp.matching.iter().map(|&(_, w)| w).sum();
        if (recon - dp.weight).abs() > SLACK {
            ok = false;
        }
    }
    verdict("10 (oracle self-check)", ok);
    assert!(ok);
}

fn apply(engine: &mut Engine, event: &Event) {
    match *event {
        Event::Insert { u, v, w } => {
            engine.insert_edge(u, v, w).unwrap();
        }
        Event::Delete { u, v } => {
            engine.delete_edge(u, v).unwrap();
        }
        Event::Query => {}
    }
}

#[test]
fn extra_mapping_audit_identity_on_tight_family() {
    // layered family where the plain-mode ratio approaches the analysis's
    // tight configuration; audit must still map every optimal edge
    let params = GenParams {
        depth: 5,
        alpha: 2.0,
        ..Default::default()
    };
    let stream = generate_stream(GenKind::AdversarialLevels, &params, 0).unwrap();
    let n = stream.min_n();
    let mut engine = Engine::new(n, RoundingConfig::plain(2.0).unwrap());
    for event in &stream.events {
        apply(&mut engine, event);
    }
    let exact = brute_force_mwm(n, &snapshot_edges(&engine)).unwrap();
    let audit = audit_mapping(&engine, &exact);
    assert!(audit.pass(), "{:?}", audit.violations);
    assert!(exact.weight / engine.matching_weight() <= plain_ratio(2.0) + SLACK);
}
