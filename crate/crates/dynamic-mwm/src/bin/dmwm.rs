//! Stream-replay front end for the dynamic matching engine.
//!
//! Exit codes: 0 all checks passed, 1 a check failed, 2 input or config
//! error.

use std::fs;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, ValueEnum};

use dynamic_mwm::oracle::ORACLE_MAX_N;
use dynamic_mwm::runner::{run, OutputFormat, RunOptions};
use dynamic_mwm::stream::{adversarial_n, generate_stream, parse_stream, GenKind, GenParams};
use dynamic_mwm::RoundingConfig;

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModeArg {
    Plain,
    Rounded,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum GenArg {
    Random,
    SlidingWindow,
    AdversarialLevels,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum OutArg {
    Tsv,
    Json,
}

/// Fully dynamic approximate maximum weight matching over an update stream.
#[derive(Parser, Debug)]
#[command(name = "dmwm", version)]
struct Args {
    /// Level base; defaults to 2.0 (plain) or 3.512 (rounded).
    #[arg(long)]
    alpha: Option<f64>,

    /// Weight accounting mode.
    #[arg(long, value_enum, default_value = "plain")]
    mode: ModeArg,

    /// Fixed rounding offset in (0,1]; drawn from the seed when omitted.
    #[arg(long)]
    r: Option<f64>,

    /// Seed for the rounding offset and stream generation.
    #[arg(long, default_value_t = 0)]
    seed: u64,

    /// Number of vertices; inferred from the stream when omitted.
    #[arg(long)]
    n: Option<usize>,

    /// Read the update stream from a file.
    #[arg(long, conflicts_with = "gen")]
    input: Option<String>,

    /// Generate the update stream instead of reading it.
    #[arg(long, value_enum)]
    gen: Option<GenArg>,

    /// Generated stream length (random, sliding-window).
    #[arg(long, default_value_t = 200)]
    steps: usize,

    /// Minimum generated edge weight.
    #[arg(long, default_value_t = 1.0)]
    wmin: f64,

    /// Maximum generated edge weight.
    #[arg(long, default_value_t = 100.0)]
    wmax: f64,

    /// Sliding-window lifetime in events.
    #[arg(long, default_value_t = 50)]
    window: usize,

    /// Level depth of the adversarial family.
    #[arg(long, default_value_t = 5)]
    depth: usize,

    /// Audit all structural invariants at every checkpoint.
    #[arg(long)]
    verify: bool,

    /// Check every checkpoint against the exact oracle (small n only).
    #[arg(long)]
    oracle: bool,

    /// Emit a stats row every K updates, in addition to `q` checkpoints.
    #[arg(long, value_name = "K")]
    stats_every: Option<usize>,

    /// Stats output format.
    #[arg(long, value_enum, default_value = "tsv")]
    out: OutArg,
}

fn main() -> ExitCode {
    let args = Args::parse();

    let alpha = args.alpha.unwrap_or(match args.mode {
        ModeArg::Plain => 2.0,
        ModeArg::Rounded => 3.512,
    });
    let cfg = match args.mode {
        ModeArg::Plain => RoundingConfig::plain(alpha),
        ModeArg::Rounded => RoundingConfig::rounded(alpha, args.r, args.seed),
    };
    let cfg = match cfg {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("dmwm: {e}");
            return ExitCode::from(2);
        }
    };

    let stream = if let Some(path) = &args.input {
        let text = match fs::read_to_string(path) {
            Ok(t) => t,
            Err(e) => {
                eprintln!("dmwm: cannot read {path}: {e}");
                return ExitCode::from(2);
            }
        };
        match parse_stream(&text) {
            Ok(s) => s,
            Err(e) => {
                eprintln!("dmwm: {path}: {e}");
                return ExitCode::from(2);
            }
        }
    } else if let Some(kind) = args.gen {
        let kind = match kind {
            GenArg::Random => GenKind::Random,
            GenArg::SlidingWindow => GenKind::SlidingWindow,
            GenArg::AdversarialLevels => GenKind::AdversarialLevels,
        };
        let params = GenParams {
            n: args.n.unwrap_or_else(|| {
                if matches!(kind, GenKind::AdversarialLevels) {
                    adversarial_n(args.depth)
                } else {
                    GenParams::default().n
                }
            }),
            steps: args.steps,
            wmin: args.wmin,
            wmax: args.wmax,
            window: args.window,
            depth: args.depth,
            alpha,
        };
        match generate_stream(kind, &params, args.seed) {
            Ok(s) => s,
            Err(e) => {
                eprintln!("dmwm: {e}");
                return ExitCode::from(2);
            }
        }
    } else {
        eprintln!("dmwm: either --input or --gen is required");
        return ExitCode::from(2);
    };

    let n = args.n.unwrap_or_else(|| stream.min_n().max(2));
    let mut oracle = args.oracle;
    if oracle && n > ORACLE_MAX_N {
        eprintln!("dmwm: warning: n = {n} exceeds the oracle limit {ORACLE_MAX_N}; oracle checks disabled");
        oracle = false;
    }
    let opts = RunOptions {
        verify: args.verify,
        oracle,
        stats_every: args.stats_every,
    };

    let started = Instant::now();
    let stats = match run(&stream, n, cfg, opts) {
        Ok(stats) => stats,
        Err(e) => {
            eprintln!("dmwm: {e}");
            return ExitCode::from(2);
        }
    };
    let elapsed = started.elapsed();

    let format = match args.out {
        OutArg::Tsv => OutputFormat::Tsv,
        OutArg::Json => OutputFormat::Json,
    };
    print!("{}", stats.render(format));
    eprintln!(
        "dmwm: {} updates in {:.3}s, max cascade depth {}, observed C {}",
        stats.updates,
        elapsed.as_secs_f64(),
        stats.max_cascade_depth,
        stats
            .observed_c()
            .map(|c| format!("{c:.3}"))
            .unwrap_or_else(|| "NA".into()),
    );
    if !stats.passed() {
        for f in &stats.failures {
            eprintln!("dmwm: FAIL {f}");
        }
        return ExitCode::from(1);
    }
    ExitCode::SUCCESS
}
